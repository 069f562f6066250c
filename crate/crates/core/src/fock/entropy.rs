use std::collections::BTreeSet;

use super::density::{reduce, DensityOperator};
use super::layout::Site;
use super::state::PureState;
use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix};
use crate::tolerances::{EIGEN_CLIP, HERMITIAN_TOL};

/// Von Neumann entropy in bits.
pub fn von_neumann_entropy(rho: &DensityOperator) -> Result<f64> {
    matrix_entropy(rho.matrix())
}

/// Entropy of a raw Hermitian matrix; fails when the matrix is not Hermitian
/// within tolerance.
pub fn matrix_entropy(m: &CMatrix) -> Result<f64> {
    let dev = linalg::hermitian_deviation(m);
    if dev > HERMITIAN_TOL {
        return Err(Error::NotHermitian(dev));
    }
    Ok(linalg::shannon_bits(linalg::eigvalsh(m), EIGEN_CLIP))
}

/// Entropy of the reduced state of all site-A modes.
pub fn entropy_of_entanglement(state: &PureState) -> Result<f64> {
    let layout = state.layout();
    layout.require_both_sites()?;
    let a = layout.positions(Site::A, None);
    let b = layout.positions(Site::B, None);

    // Both reductions share their nonzero spectrum; diagonalize the smaller.
    let count = |pos: &[usize]| {
        state
            .terms()
            .map(|(l, _)| l.select(pos))
            .collect::<BTreeSet<_>>()
            .len()
    };
    let rho = if count(&a) <= count(&b) {
        reduce(state, &a, &b)
    } else {
        reduce(state, &b, &a)
    };
    von_neumann_entropy(&rho)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::{ModeDescriptor, ModeLayout};
    use nalgebra::DVector;
    use num_complex::Complex64;
    use std::f64::consts::FRAC_1_SQRT_2;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn diag(values: &[f64]) -> CMatrix {
        CMatrix::from_diagonal(&DVector::from_iterator(values.len(), values.iter().map(|&v| c(v))))
    }

    #[test]
    fn entropy_examples() {
        assert!(matrix_entropy(&diag(&[1.0, 0.0])).unwrap().abs() < 1e-15);
        assert!((matrix_entropy(&diag(&[0.5, 0.5])).unwrap() - 1.0).abs() < 1e-15);
        // −0.9 log₂ 0.9 − 0.1 log₂ 0.1 evaluated with mpmath at 30 digits.
        let expected = 0.468_995_593_589_281_1;
        assert!((matrix_entropy(&diag(&[0.9, 0.1])).unwrap() - expected).abs() < 1e-14);
    }

    #[test]
    fn non_hermitian_matrix_is_rejected() {
        let mut m = diag(&[0.5, 0.5]);
        m[(0, 1)] = Complex64::new(0.0, 0.2);
        assert!(matches!(matrix_entropy(&m), Err(Error::NotHermitian(_))));
    }

    #[test]
    fn entanglement_examples() {
        let layout = ModeLayout::new(vec![
            ModeDescriptor::field("a", Site::A, 1),
            ModeDescriptor::field("b", Site::B, 1),
        ])
        .unwrap();
        let product = PureState::basis_state(layout.clone(), vec![1, 0]).unwrap();
        assert!(entropy_of_entanglement(&product).unwrap().abs() < 1e-15);
        let shared = PureState::from_terms(
            layout,
            [(vec![1, 0], c(FRAC_1_SQRT_2)), (vec![0, 1], c(FRAC_1_SQRT_2))],
        )
        .unwrap();
        assert!((entropy_of_entanglement(&shared).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn register_bell_branch_carries_one_ebit() {
        let layout = ModeLayout::new(vec![
            ModeDescriptor::register("r1", Site::A, 1),
            ModeDescriptor::register("r2", Site::A, 1),
            ModeDescriptor::register("s1", Site::B, 1),
            ModeDescriptor::register("s2", Site::B, 1),
        ])
        .unwrap();
        let s = PureState::from_terms(
            layout,
            [
                (vec![1, 0, 0, 1], c(FRAC_1_SQRT_2)),
                (vec![0, 1, 1, 0], c(FRAC_1_SQRT_2)),
            ],
        )
        .unwrap();
        assert!((entropy_of_entanglement(&s).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn single_site_layout_is_an_error() {
        let layout = ModeLayout::new(vec![ModeDescriptor::field("a", Site::A, 1)]).unwrap();
        let s = PureState::basis_state(layout, vec![1]).unwrap();
        assert_eq!(entropy_of_entanglement(&s).unwrap_err(), Error::SingleSite);
    }
}
