use std::collections::btree_map::Entry;
use std::collections::BTreeMap;

use num_complex::Complex64;

use super::layout::{BasisLabel, ModeLayout};
use crate::error::{Error, Result};
use crate::tolerances::{AMPLITUDE_DROP, NORM_TOL};

/// Normalized pure state stored as a sparse map from occupation labels to
/// amplitudes.
///
/// Iteration follows the lexicographic label order.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    layout: ModeLayout,
    amplitudes: BTreeMap<BasisLabel, Complex64>,
}

impl PureState {
    /// Builds a state from explicit terms. Repeated labels are summed and the
    /// result must already be normalized.
    pub fn from_terms<I, L>(layout: ModeLayout, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (L, Complex64)>,
        L: Into<BasisLabel>,
    {
        let amplitudes = collect_terms(&layout, terms)?;
        let norm = norm_sqr(&amplitudes);
        if amplitudes.is_empty() {
            return Err(Error::EmptyState);
        }
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::NotNormalized(norm));
        }
        Ok(Self { layout, amplitudes })
    }

    /// Like [`from_terms`](Self::from_terms) but rescales to unit norm.
    /// Returns the state together with the squared norm of the input terms.
    pub fn normalized_from_terms<I, L>(layout: ModeLayout, terms: I) -> Result<(Self, f64)>
    where
        I: IntoIterator<Item = (L, Complex64)>,
        L: Into<BasisLabel>,
    {
        let mut amplitudes = collect_terms(&layout, terms)?;
        let norm = norm_sqr(&amplitudes);
        if amplitudes.is_empty() || norm == 0.0 {
            return Err(Error::EmptyState);
        }
        let scale = 1.0 / norm.sqrt();
        for a in amplitudes.values_mut() {
            *a *= scale;
        }
        amplitudes.retain(|_, a| a.norm() >= AMPLITUDE_DROP);
        Ok((Self { layout, amplitudes }, norm))
    }

    pub fn basis_state(layout: ModeLayout, occupations: Vec<u32>) -> Result<Self> {
        Self::from_terms(layout, [(occupations, Complex64::new(1.0, 0.0))])
    }

    /// Assembles a state from amplitudes that are known to be valid labels.
    /// Entries below the drop threshold are discarded; normalization is
    /// checked.
    pub(crate) fn from_map(
        layout: ModeLayout,
        mut amplitudes: BTreeMap<BasisLabel, Complex64>,
    ) -> Result<Self> {
        amplitudes.retain(|_, a| a.norm() >= AMPLITUDE_DROP);
        if amplitudes.is_empty() {
            return Err(Error::EmptyState);
        }
        let norm = norm_sqr(&amplitudes);
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::NotNormalized(norm));
        }
        Ok(Self { layout, amplitudes })
    }

    pub fn layout(&self) -> &ModeLayout {
        &self.layout
    }

    pub fn terms(&self) -> impl Iterator<Item = (&BasisLabel, &Complex64)> {
        self.amplitudes.iter()
    }

    pub fn amplitude(&self, label: &BasisLabel) -> Complex64 {
        self.amplitudes
            .get(label)
            .copied()
            .unwrap_or(Complex64::new(0.0, 0.0))
    }

    pub fn amplitude_of(&self, occupations: &[u32]) -> Complex64 {
        self.amplitude(&BasisLabel(occupations.to_vec()))
    }

    /// Number of stored (non-negligible) amplitudes.
    pub fn support_len(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn norm_sqr(&self) -> f64 {
        norm_sqr(&self.amplitudes)
    }

    /// ⟨self|other⟩ for states over the same layout.
    pub fn inner(&self, other: &PureState) -> Result<Complex64> {
        if self.layout != other.layout {
            return Err(Error::BasisMismatch);
        }
        Ok(self
            .amplitudes
            .iter()
            .map(|(l, a)| a.conj() * other.amplitude(l))
            .sum())
    }

    /// Tensor product; the result layout is `self` followed by `other`.
    pub fn tensor(&self, other: &PureState) -> Result<PureState> {
        let layout = self.layout.concat(&other.layout)?;
        let mut amplitudes = BTreeMap::new();
        for (la, a) in &self.amplitudes {
            for (lb, b) in &other.amplitudes {
                let amp = a * b;
                if amp.norm() >= AMPLITUDE_DROP {
                    amplitudes.insert(la.concat(lb), amp);
                }
            }
        }
        Ok(PureState { layout, amplitudes })
    }

    /// Multiplies every amplitude by `phase(label)`, which must have unit modulus.
    pub fn apply_diagonal<F>(&self, phase: F) -> PureState
    where
        F: Fn(&BasisLabel) -> Complex64,
    {
        PureState {
            layout: self.layout.clone(),
            amplitudes: self
                .amplitudes
                .iter()
                .map(|(l, a)| (l.clone(), a * phase(l)))
                .collect(),
        }
    }

    /// Relabels every basis state through `map`, producing a state over
    /// `layout`. Fails if two labels land on the same image, so a successful
    /// call always preserves the norm.
    pub fn map_basis<F>(&self, layout: ModeLayout, map: F) -> Result<PureState>
    where
        F: Fn(&BasisLabel) -> Result<BasisLabel>,
    {
        let mut amplitudes = BTreeMap::new();
        for (label, amp) in &self.amplitudes {
            let image = map(label)?;
            layout.check_label(&image)?;
            match amplitudes.entry(image) {
                Entry::Vacant(v) => {
                    v.insert(*amp);
                }
                Entry::Occupied(o) => return Err(Error::NotInjective(o.key().0.clone())),
            }
        }
        Ok(PureState { layout, amplitudes })
    }

    /// Applies a unitary acting on the modes at `positions`. `unitary` maps a
    /// local sub-label to its image as a list of (sub-label, amplitude); local
    /// labels absent from the map are left unchanged.
    pub fn apply_local<F>(&self, positions: &[usize], unitary: F) -> Result<PureState>
    where
        F: Fn(&BasisLabel) -> Vec<(BasisLabel, Complex64)>,
    {
        let mut amplitudes: BTreeMap<BasisLabel, Complex64> = BTreeMap::new();
        for (label, amp) in &self.amplitudes {
            let local = label.select(positions);
            for (image, coeff) in unitary(&local) {
                let mut occ = label.0.clone();
                for (&p, &n) in positions.iter().zip(image.occupations()) {
                    occ[p] = n;
                }
                let out = BasisLabel(occ);
                self.layout.check_label(&out)?;
                *amplitudes.entry(out).or_default() += amp * coeff;
            }
        }
        PureState::from_map(self.layout.clone(), amplitudes)
    }
}

fn collect_terms<I, L>(layout: &ModeLayout, terms: I) -> Result<BTreeMap<BasisLabel, Complex64>>
where
    I: IntoIterator<Item = (L, Complex64)>,
    L: Into<BasisLabel>,
{
    let mut amplitudes: BTreeMap<BasisLabel, Complex64> = BTreeMap::new();
    for (label, amp) in terms {
        let label = label.into();
        layout.check_label(&label)?;
        *amplitudes.entry(label).or_default() += amp;
    }
    amplitudes.retain(|_, a| a.norm() >= AMPLITUDE_DROP);
    Ok(amplitudes)
}

fn norm_sqr(amplitudes: &BTreeMap<BasisLabel, Complex64>) -> f64 {
    amplitudes.values().map(|a| a.norm_sqr()).sum()
}
