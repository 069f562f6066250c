use std::collections::BTreeSet;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fock::{entropy_of_entanglement, BasisLabel, DensityOperator, ModeKind, ModeLayout, PureState, Site};
use crate::linalg;
use crate::tolerances::SECTOR_DROP;

/// Tolerance on 1 − λ_max for a register sector to count as pure.
const SECTOR_PURITY_TOL: f64 = 1e-9;

/// Total register occupation at `site`.
pub fn register_number(layout: &ModeLayout, label: &BasisLabel, site: Site) -> u32 {
    layout
        .modes()
        .iter()
        .zip(label.occupations())
        .filter(|(m, _)| m.site == site && m.kind == ModeKind::Register)
        .map(|(_, &n)| n)
        .sum()
}

#[derive(Debug, Clone, PartialEq)]
pub struct RegisterSector {
    /// Register occupation at site A.
    pub n: u32,
    pub weight: f64,
    pub entanglement: f64,
}

/// Splits a register state by the site-A register number. Every block must be
/// a pure state; its entanglement is the entropy of its site-A reduction.
pub fn register_sectors(rho: &DensityOperator) -> Result<Vec<RegisterSector>> {
    let layout = rho.layout();
    let numbers: BTreeSet<u32> = rho
        .basis()
        .iter()
        .map(|l| register_number(layout, l, Site::A))
        .collect();
    let mut out = Vec::new();
    for n in numbers {
        let (weight, block) = rho.project(|l| register_number(layout, l, Site::A) == n);
        let Some(block) = block else { continue };
        if weight < SECTOR_DROP {
            continue;
        }
        let (vals, vecs) = linalg::eigh(block.matrix());
        let top = vals.len() - 1;
        if 1.0 - vals[top] > SECTOR_PURITY_TOL {
            return Err(Error::MixedSector(n));
        }
        let col = vecs.column(top);
        let state = PureState::from_terms(
            layout.clone(),
            block
                .basis()
                .iter()
                .zip(col.iter())
                .map(|(l, a)| (l.clone(), *a))
                .collect::<Vec<(BasisLabel, Complex64)>>(),
        )?;
        out.push(RegisterSector {
            n,
            weight,
            entanglement: entropy_of_entanglement(&state)?,
        });
    }
    Ok(out)
}

/// Σ_n P_n E(sector n) of a register state.
pub fn register_sector_entanglement(rho: &DensityOperator) -> Result<f64> {
    Ok(register_sectors(rho)?
        .iter()
        .map(|s| s.weight * s.entanglement)
        .sum())
}

#[derive(Debug, Clone, PartialEq)]
pub struct MeasurementOutcome {
    /// Whether the two site-A registers were found equal.
    pub a_equal: bool,
    pub b_equal: bool,
    pub probability: f64,
    pub state: DensityOperator,
    pub entanglement: f64,
}

fn check_four_binary_registers(layout: &ModeLayout) -> Result<()> {
    for site in [Site::A, Site::B] {
        let regs = layout.positions(site, Some(ModeKind::Register));
        if regs.len() != 2 || layout.positions(site, None).len() != 2 {
            return Err(Error::Dimension(format!(
                "expected exactly two register modes at site {site}"
            )));
        }
        if regs.iter().any(|&p| layout.mode(p).capacity != 1) {
            return Err(Error::Dimension(format!("registers at site {site} must be binary")));
        }
    }
    Ok(())
}

/// Measures, at each site, whether the two local binary registers agree.
/// Outcomes are ordered (equal, equal), (equal, different), (different,
/// equal), (different, different); those with vanishing probability are
/// dropped. Entanglement is the register-sector entanglement of each
/// conditional state.
pub fn equal_different_measurement(rho: &DensityOperator) -> Result<Vec<MeasurementOutcome>> {
    let layout = rho.layout();
    check_four_binary_registers(layout)?;
    let a = layout.positions(Site::A, None);
    let b = layout.positions(Site::B, None);
    let equal = |l: &BasisLabel, p: &[usize]| l.occupations()[p[0]] == l.occupations()[p[1]];
    let mut out = Vec::new();
    for a_equal in [true, false] {
        for b_equal in [true, false] {
            let (probability, state) =
                rho.project(|l| equal(l, &a) == a_equal && equal(l, &b) == b_equal);
            let Some(state) = state else { continue };
            if probability <= SECTOR_DROP {
                continue;
            }
            let entanglement = register_sector_entanglement(&state)?;
            out.push(MeasurementOutcome {
                a_equal,
                b_equal,
                probability,
                state,
                entanglement,
            });
        }
    }
    Ok(out)
}

/// Conjugates by e^{iθ N_A + iφ N_B}, with N the register occupation at each
/// site.
pub fn reference_phase_shift(rho: &DensityOperator, theta: f64, phi: f64) -> DensityOperator {
    let layout = rho.layout();
    rho.conjugate_diagonal(|l| {
        let na = register_number(layout, l, Site::A) as f64;
        let nb = register_number(layout, l, Site::B) as f64;
        Complex64::from_polar(1.0, theta * na + phi * nb)
    })
}
