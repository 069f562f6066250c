use std::collections::HashMap;

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::layout::{BasisLabel, ModeLayout};
use super::state::PureState;
use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix};
use crate::tolerances::{HERMITIAN_TOL, PSD_TOL, TRACE_TOL};

/// Hermitian, positive semidefinite, unit-trace operator on the span of an
/// explicit list of basis labels.
///
/// Rows and columns follow `basis`, which is strictly increasing in the
/// lexicographic label order. The basis need not span the whole layout;
/// labels outside it carry zero weight.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityOperator {
    layout: ModeLayout,
    basis: Vec<BasisLabel>,
    matrix: CMatrix,
}

impl DensityOperator {
    pub fn new(layout: ModeLayout, basis: Vec<BasisLabel>, matrix: CMatrix) -> Result<Self> {
        let n = basis.len();
        if matrix.nrows() != n || matrix.ncols() != n {
            return Err(Error::Dimension(format!(
                "{}x{} matrix for a basis of {n} labels",
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        if basis.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidArgument(
                "basis labels must be strictly increasing".into(),
            ));
        }
        for l in &basis {
            layout.check_label(l)?;
        }
        let rho = Self {
            layout,
            basis,
            matrix,
        };
        rho.validate()?;
        Ok(rho)
    }

    /// Builds an operator from an arbitrary set of labels and a matrix in
    /// that order; the pair is re-sorted into canonical order first.
    pub fn from_unsorted(
        layout: ModeLayout,
        basis: Vec<BasisLabel>,
        matrix: CMatrix,
    ) -> Result<Self> {
        let mut order: Vec<usize> = (0..basis.len()).collect();
        order.sort_by(|&a, &b| basis[a].cmp(&basis[b]));
        let sorted: Vec<BasisLabel> = order.iter().map(|&i| basis[i].clone()).collect();
        let m = CMatrix::from_fn(basis.len(), basis.len(), |r, c| matrix[(order[r], order[c])]);
        Self::new(layout, sorted, m)
    }

    /// Projector onto a pure state, expressed on its support.
    pub fn pure(state: &PureState) -> Self {
        let basis: Vec<BasisLabel> = state.terms().map(|(l, _)| l.clone()).collect();
        let v: Vec<Complex64> = state.terms().map(|(_, a)| *a).collect();
        let n = v.len();
        let matrix = CMatrix::from_fn(n, n, |r, c| v[r] * v[c].conj());
        Self {
            layout: state.layout().clone(),
            basis,
            matrix,
        }
    }

    pub(crate) fn from_parts_unchecked(
        layout: ModeLayout,
        basis: Vec<BasisLabel>,
        matrix: CMatrix,
    ) -> Self {
        Self {
            layout,
            basis,
            matrix,
        }
    }

    /// Re-checks Hermiticity, positivity and trace.
    pub fn validate(&self) -> Result<()> {
        let dev = linalg::hermitian_deviation(&self.matrix);
        if dev > HERMITIAN_TOL {
            return Err(Error::NotHermitian(dev));
        }
        let tr = self.trace();
        if (tr - 1.0).abs() > TRACE_TOL {
            return Err(Error::BadTrace(tr));
        }
        let min = self.eigenvalues().first().copied().unwrap_or(0.0);
        if min < -PSD_TOL {
            return Err(Error::NotPositive(min));
        }
        Ok(())
    }

    pub fn layout(&self) -> &ModeLayout {
        &self.layout
    }

    pub fn basis(&self) -> &[BasisLabel] {
        &self.basis
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn trace(&self) -> f64 {
        self.matrix.trace().re
    }

    pub fn index_of(&self, label: &BasisLabel) -> Option<usize> {
        self.basis.binary_search(label).ok()
    }

    /// Matrix element ⟨row|ρ|col⟩, zero when either label is outside the basis.
    pub fn element(&self, row: &[u32], col: &[u32]) -> Complex64 {
        let r = self.index_of(&BasisLabel(row.to_vec()));
        let c = self.index_of(&BasisLabel(col.to_vec()));
        match (r, c) {
            (Some(r), Some(c)) => self.matrix[(r, c)],
            _ => Complex64::new(0.0, 0.0),
        }
    }

    /// Eigenvalues in ascending order.
    pub fn eigenvalues(&self) -> Vec<f64> {
        linalg::eigvalsh(&self.matrix)
    }

    pub fn purity(&self) -> f64 {
        (&self.matrix * &self.matrix).trace().re
    }

    /// Re-expresses the operator on a larger basis (zero rows and columns are
    /// added). Every current label must appear in `basis`.
    pub fn expand_to(&self, basis: &[BasisLabel]) -> Result<DensityOperator> {
        let mut sorted = basis.to_vec();
        sorted.sort();
        sorted.dedup();
        let index: HashMap<&BasisLabel, usize> =
            sorted.iter().enumerate().map(|(i, l)| (l, i)).collect();
        let mut map = Vec::with_capacity(self.basis.len());
        for l in &self.basis {
            map.push(*index.get(l).ok_or(Error::BasisMismatch)?);
        }
        let mut m = CMatrix::zeros(sorted.len(), sorted.len());
        for (r, &rr) in map.iter().enumerate() {
            for (c, &cc) in map.iter().enumerate() {
                m[(rr, cc)] = self.matrix[(r, c)];
            }
        }
        for l in &sorted {
            self.layout.check_label(l)?;
        }
        Ok(Self {
            layout: self.layout.clone(),
            basis: sorted,
            matrix: m,
        })
    }

    /// Expands to every label of the layout.
    pub fn expand_full(&self) -> Result<DensityOperator> {
        self.expand_to(&self.layout.enumerate_basis())
    }

    /// Brings two operators over the same layout onto the union of their bases.
    pub fn align(&self, other: &DensityOperator) -> Result<(DensityOperator, DensityOperator)> {
        if self.layout != other.layout {
            return Err(Error::BasisMismatch);
        }
        let mut union = self.basis.clone();
        union.extend(other.basis.iter().cloned());
        Ok((self.expand_to(&union)?, other.expand_to(&union)?))
    }

    /// U ρ U† for a diagonal unitary given as a phase per basis label.
    pub fn conjugate_diagonal<F>(&self, phase: F) -> DensityOperator
    where
        F: Fn(&BasisLabel) -> Complex64,
    {
        let d: Vec<Complex64> = self.basis.iter().map(&phase).collect();
        let matrix = CMatrix::from_fn(self.dim(), self.dim(), |r, c| {
            d[r] * self.matrix[(r, c)] * d[c].conj()
        });
        Self {
            layout: self.layout.clone(),
            basis: self.basis.clone(),
            matrix,
        }
    }

    /// Projects with a diagonal 0/1 projector and returns the weight together
    /// with the renormalized conditional state (restricted to the kept labels).
    pub fn project<F>(&self, keep: F) -> (f64, Option<DensityOperator>)
    where
        F: Fn(&BasisLabel) -> bool,
    {
        let idx: Vec<usize> = (0..self.dim()).filter(|&i| keep(&self.basis[i])).collect();
        let weight: f64 = idx.iter().map(|&i| self.matrix[(i, i)].re).sum();
        if idx.is_empty() || weight <= 0.0 {
            return (weight.max(0.0), None);
        }
        let scale = Complex64::new(1.0 / weight, 0.0);
        let basis = idx.iter().map(|&i| self.basis[i].clone()).collect();
        let m = DMatrix::from_fn(idx.len(), idx.len(), |r, c| {
            self.matrix[(idx[r], idx[c])] * scale
        });
        (
            weight,
            Some(Self {
                layout: self.layout.clone(),
                basis,
                matrix: m,
            }),
        )
    }
}

/// Reduced state on the modes named in `keep`.
///
/// The kept modes appear in layout order regardless of the order of `keep`,
/// and the basis is the set of kept sub-labels that occur in the state.
pub fn partial_trace(state: &PureState, keep: &[&str]) -> Result<DensityOperator> {
    let layout = state.layout();
    let mut kept = Vec::with_capacity(keep.len());
    for id in keep {
        kept.push(layout.require(id)?);
    }
    kept.sort_unstable();
    kept.dedup();
    let traced: Vec<usize> = (0..layout.len()).filter(|p| !kept.contains(p)).collect();
    Ok(reduce(state, &kept, &traced))
}

pub(crate) fn reduce(state: &PureState, kept: &[usize], traced: &[usize]) -> DensityOperator {
    let layout = state.layout();
    let mut basis: Vec<BasisLabel> = state.terms().map(|(l, _)| l.select(kept)).collect();
    basis.sort();
    basis.dedup();
    let index: HashMap<&BasisLabel, usize> = basis.iter().enumerate().map(|(i, l)| (l, i)).collect();

    // Group amplitudes by the traced-out sub-label; each group is one vector
    // |v_t⟩ on the kept space and ρ = Σ_t |v_t⟩⟨v_t|.
    let mut groups: HashMap<BasisLabel, Vec<(usize, Complex64)>> = HashMap::new();
    for (label, amp) in state.terms() {
        groups
            .entry(label.select(traced))
            .or_default()
            .push((index[&label.select(kept)], *amp));
    }
    let mut keys: Vec<&BasisLabel> = groups.keys().collect();
    keys.sort();

    let n = basis.len();
    let mut m = CMatrix::zeros(n, n);
    for key in keys {
        let v = &groups[key];
        for &(i, a) in v {
            for &(j, b) in v {
                m[(i, j)] += a * b.conj();
            }
        }
    }
    DensityOperator::from_parts_unchecked(layout.select(kept), basis, m)
}

/// ½ Σ |eig(ρ − σ)|. Both operators must share the layout and the basis.
pub fn trace_distance(rho: &DensityOperator, sigma: &DensityOperator) -> Result<f64> {
    if rho.layout != sigma.layout || rho.basis != sigma.basis {
        return Err(Error::BasisMismatch);
    }
    let diff = linalg::hermitize(&(&rho.matrix - &sigma.matrix));
    Ok(0.5 * linalg::eigvalsh(&diff).iter().map(|l| l.abs()).sum::<f64>())
}

/// Trace distance after aligning both operators on the union of their bases.
pub fn trace_distance_aligned(rho: &DensityOperator, sigma: &DensityOperator) -> Result<f64> {
    let (a, b) = rho.align(sigma)?;
    trace_distance(&a, &b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::{ModeDescriptor, Site};
    use std::f64::consts::FRAC_1_SQRT_2;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn pair() -> ModeLayout {
        ModeLayout::new(vec![
            ModeDescriptor::field("a", Site::A, 1),
            ModeDescriptor::field("b", Site::B, 1),
        ])
        .unwrap()
    }

    fn single(cap: u32) -> ModeLayout {
        ModeLayout::new(vec![ModeDescriptor::field("a", Site::A, cap)]).unwrap()
    }

    fn diag(values: &[f64]) -> DensityOperator {
        let layout = single(values.len() as u32 - 1);
        let basis = layout.enumerate_basis();
        let m = CMatrix::from_fn(values.len(), values.len(), |r, c| {
            if r == c {
                Complex64::new(values[r], 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            }
        });
        DensityOperator::new(layout, basis, m).unwrap()
    }

    #[test]
    fn product_state_reduces_to_pure_projector() {
        let s = PureState::basis_state(pair(), vec![1, 0]).unwrap();
        let rho = partial_trace(&s, &["a"]).unwrap();
        assert_eq!(rho.dim(), 1);
        assert_eq!(rho.basis()[0].occupations(), &[1]);
        assert!((rho.matrix()[(0, 0)] - c(1.0)).norm() < 1e-15);
    }

    #[test]
    fn shared_particle_reduces_to_maximally_mixed() {
        let s = PureState::from_terms(
            pair(),
            [(vec![1, 0], c(FRAC_1_SQRT_2)), (vec![0, 1], c(FRAC_1_SQRT_2))],
        )
        .unwrap();
        let rho = partial_trace(&s, &["a"]).unwrap();
        rho.validate().unwrap();
        assert!((rho.element(&[0], &[0]) - c(0.5)).norm() < 1e-15);
        assert!((rho.element(&[1], &[1]) - c(0.5)).norm() < 1e-15);
        assert!(rho.element(&[0], &[1]).norm() < 1e-15);
    }

    #[test]
    fn unknown_mode_is_an_error() {
        let s = PureState::basis_state(pair(), vec![1, 0]).unwrap();
        assert_eq!(
            partial_trace(&s, &["zz"]).unwrap_err(),
            Error::UnknownMode("zz".into())
        );
    }

    #[test]
    fn trace_distance_examples() {
        let a = diag(&[1.0, 0.0]);
        let b = diag(&[0.5, 0.5]);
        assert!(trace_distance(&a, &a).unwrap().abs() < 1e-15);
        assert!((trace_distance(&a, &b).unwrap() - 0.5).abs() < 1e-15);
        let c1 = diag(&[0.0, 1.0]);
        assert!((trace_distance(&a, &c1).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn trace_distance_needs_matching_bases() {
        let a = diag(&[1.0, 0.0]);
        let b = diag(&[0.5, 0.25, 0.25]);
        assert_eq!(trace_distance(&a, &b).unwrap_err(), Error::BasisMismatch);
    }

    #[test]
    fn invalid_operators_are_rejected() {
        let layout = single(1);
        let basis = layout.enumerate_basis();
        let bad_trace = CMatrix::identity(2, 2);
        assert!(matches!(
            DensityOperator::new(layout.clone(), basis.clone(), bad_trace),
            Err(Error::BadTrace(_))
        ));
        let mut non_herm = CMatrix::identity(2, 2) * c(0.5);
        non_herm[(0, 1)] = c(0.1);
        assert!(matches!(
            DensityOperator::new(layout.clone(), basis.clone(), non_herm),
            Err(Error::NotHermitian(_))
        ));
        let neg = CMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![c(1.5), c(-0.5)]));
        assert!(matches!(
            DensityOperator::new(layout, basis, neg),
            Err(Error::NotPositive(_))
        ));
    }

    #[test]
    fn expansion_keeps_entries() {
        let s = PureState::basis_state(pair(), vec![1, 0]).unwrap();
        let rho = DensityOperator::pure(&s).expand_full().unwrap();
        assert_eq!(rho.dim(), 4);
        assert!((rho.element(&[1, 0], &[1, 0]) - c(1.0)).norm() < 1e-15);
        rho.validate().unwrap();
    }
}
