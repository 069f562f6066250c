//! Local particle-number sectors and the particle entanglement E_P.
//!
//! A state |Ψ⟩ is split by the projectors onto "n particles in the site-A
//! field modes": |Ψ⟩ = Σ_n √P_n e^{iχ_n} |Ψ_n⟩. The particle entanglement is
//! the sector-averaged entropy of entanglement Σ_n P_n E(|Ψ_n⟩). Register
//! modes never contribute to n.

use std::collections::BTreeMap;

use num_complex::Complex64;

use crate::error::Result;
use crate::fock::{entropy_of_entanglement, BasisLabel, ModeKind, ModeLayout, PureState, Site};
use crate::tolerances::SECTOR_DROP;

/// Number of particles in the field modes of `site`.
pub fn local_particle_number(layout: &ModeLayout, label: &BasisLabel, site: Site) -> u32 {
    layout
        .modes()
        .iter()
        .zip(label.occupations())
        .filter(|(m, _)| m.site == site && m.kind == ModeKind::Field)
        .map(|(_, &n)| n)
        .sum()
}

#[derive(Debug, Clone, PartialEq)]
pub struct Sector {
    /// Particles at site A.
    pub n: u32,
    pub probability: f64,
    /// Normalized sector state; its largest amplitude is real and positive.
    pub state: PureState,
    /// Phase e^{iχ_n} removed from the sector when fixing its gauge.
    pub phase: Complex64,
}

impl Sector {
    /// Amplitude g_n = √P_n e^{iχ_n} with which the sector enters the input.
    pub fn amplitude(&self) -> Complex64 {
        self.phase * self.probability.sqrt()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SectorDecomposition {
    pub sectors: Vec<Sector>,
}

impl SectorDecomposition {
    pub fn total_probability(&self) -> f64 {
        self.sectors.iter().map(|s| s.probability).sum()
    }

    pub fn get(&self, n: u32) -> Option<&Sector> {
        self.sectors.iter().find(|s| s.n == n)
    }

    /// Σ_n g_n |Ψ_n⟩ as a sparse amplitude map.
    pub fn reassemble(&self) -> BTreeMap<BasisLabel, Complex64> {
        let mut out = BTreeMap::new();
        for s in &self.sectors {
            let g = s.amplitude();
            for (l, a) in s.state.terms() {
                *out.entry(l.clone()).or_insert(Complex64::new(0.0, 0.0)) += g * a;
            }
        }
        out
    }
}

/// Splits a state into sectors of fixed site-A particle number, in
/// increasing n. Sectors lighter than 1e-14 are dropped.
pub fn sector_decompose(state: &PureState) -> Result<SectorDecomposition> {
    let layout = state.layout();
    let mut groups: BTreeMap<u32, BTreeMap<BasisLabel, Complex64>> = BTreeMap::new();
    for (label, amp) in state.terms() {
        let n = local_particle_number(layout, label, Site::A);
        groups.entry(n).or_default().insert(label.clone(), *amp);
    }

    let mut sectors = Vec::with_capacity(groups.len());
    for (n, mut terms) in groups {
        let p: f64 = terms.values().map(|a| a.norm_sqr()).sum();
        if p < SECTOR_DROP {
            continue;
        }
        // First label with the largest magnitude fixes the gauge.
        let mut lead = Complex64::new(0.0, 0.0);
        for a in terms.values() {
            if a.norm() > lead.norm() {
                lead = *a;
            }
        }
        let phase = lead / lead.norm();
        let scale = phase.conj() / p.sqrt();
        for a in terms.values_mut() {
            *a *= scale;
        }
        sectors.push(Sector {
            n,
            probability: p,
            state: PureState::from_map(layout.clone(), terms)?,
            phase,
        });
    }
    Ok(SectorDecomposition { sectors })
}

/// Particle entanglement E_P = Σ_n P_n E(|Ψ_n⟩), in ebits.
pub fn particle_entanglement(state: &PureState) -> Result<f64> {
    state.layout().require_both_sites()?;
    let dec = sector_decompose(state)?;
    dec.sectors
        .iter()
        .map(|s| entropy_of_entanglement(&s.state).map(|e| s.probability * e))
        .sum()
}
