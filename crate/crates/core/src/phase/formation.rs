use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fock::{BasisLabel, DensityOperator, ModeDescriptor, ModeKind, ModeLayout, Site};
use crate::linalg::{self, CMatrix};
use crate::tolerances::{HERMITIAN_TOL, PSD_TOL};

/// −p log₂ p − (1−p) log₂(1−p), with 0 log 0 = 0.
pub fn binary_entropy(p: f64) -> f64 {
    let term = |x: f64| if x <= 0.0 { 0.0 } else { -x * x.log2() };
    term(p) + term(1.0 - p)
}

/// Entanglement of formation as a function of the two-qubit concurrence.
pub fn ef_from_concurrence(c: f64) -> f64 {
    let c = c.clamp(0.0, 1.0);
    binary_entropy(0.5 * (1.0 + (1.0 - c * c).sqrt()))
}

/// Entanglement of formation of the post-measurement register state with
/// fringe visibility C: h(p) with p = ½(1 + √(1 − |C|²)).
pub fn entanglement_of_formation_x(c: Complex64) -> f64 {
    ef_from_concurrence(c.norm())
}

/// Two binary registers `reg.a` (site A) and `reg.b` (site B).
pub fn two_register_layout() -> ModeLayout {
    ModeLayout::new(vec![
        ModeDescriptor::register("reg.a", Site::A, 1),
        ModeDescriptor::register("reg.b", Site::B, 1),
    ])
    .expect("distinct ids")
}

/// ½(|10⟩⟨10| + C|10⟩⟨01| + C*|01⟩⟨10| + |01⟩⟨01|) on the full 4-dim basis of
/// [`two_register_layout`].
pub fn post_measurement_register_state(c: Complex64) -> Result<DensityOperator> {
    post_measurement_register_state_on(two_register_layout(), c)
}

/// As [`post_measurement_register_state`] on a caller-supplied layout of one
/// binary register per site (site-A register first).
pub fn post_measurement_register_state_on(layout: ModeLayout, c: Complex64) -> Result<DensityOperator> {
    if c.norm() > 1.0 + 1e-10 {
        return Err(Error::VisibilityOutOfRange(c.norm()));
    }
    check_qubit_pair(&layout)?;
    let basis: Vec<BasisLabel> = layout.enumerate_basis();
    let mut m = CMatrix::zeros(4, 4);
    // Basis order is |00⟩, |01⟩, |10⟩, |11⟩.
    let half = Complex64::new(0.5, 0.0);
    m[(2, 2)] = half;
    m[(1, 1)] = half;
    m[(2, 1)] = half * c;
    m[(1, 2)] = half * c.conj();
    DensityOperator::new(layout, basis, m)
}

fn check_qubit_pair(layout: &ModeLayout) -> Result<()> {
    let ok = layout.len() == 2
        && layout.mode(0).site == Site::A
        && layout.mode(1).site == Site::B
        && layout.modes().iter().all(|m| m.capacity == 1);
    if ok {
        Ok(())
    } else {
        Err(Error::Dimension(
            "expected one binary mode at site A followed by one at site B".into(),
        ))
    }
}

/// Wootters concurrence of a 4×4 two-qubit matrix, via the eigenvalues of
/// √ρ ρ̃ √ρ with ρ̃ = (σy⊗σy) ρ* (σy⊗σy).
pub fn concurrence_of_matrix(rho: &CMatrix) -> Result<f64> {
    if rho.nrows() != 4 || rho.ncols() != 4 {
        return Err(Error::Dimension(format!("{}x{} is not a two-qubit matrix", rho.nrows(), rho.ncols())));
    }
    let dev = linalg::hermitian_deviation(rho);
    if dev > HERMITIAN_TOL {
        return Err(Error::NotHermitian(dev));
    }
    let rho = linalg::hermitize(rho);
    let min = linalg::eigvalsh(&rho)[0];
    if min < -PSD_TOL {
        return Err(Error::NotPositive(min));
    }
    let i = Complex64::new(0.0, 1.0);
    let z = Complex64::new(0.0, 0.0);
    let sy = CMatrix::from_row_slice(2, 2, &[z, -i, i, z]);
    let yy = linalg::kron(&sy, &sy);
    let tilde = &yy * rho.conjugate() * &yy;
    let root = linalg::sqrt_psd(&rho);
    let r = linalg::hermitize(&(&root * tilde * &root));
    let mut lambdas: Vec<f64> = linalg::eigvalsh(&r).iter().map(|l| l.max(0.0).sqrt()).collect();
    lambdas.sort_by(|a, b| b.total_cmp(a));
    Ok((lambdas[0] - lambdas[1] - lambdas[2] - lambdas[3]).max(0.0))
}

/// Entanglement of formation of a two-register operator through the
/// concurrence construction.
pub fn concurrence_ef_oracle(rho: &DensityOperator) -> Result<f64> {
    let layout = rho.layout();
    if layout.modes().iter().any(|m| m.kind != ModeKind::Register) {
        return Err(Error::ModeKind {
            mode: layout.modes().iter().find(|m| m.kind != ModeKind::Register).unwrap().id.clone(),
            expected: "register",
        });
    }
    check_qubit_pair(layout)?;
    let full = rho.expand_full()?;
    Ok(ef_from_concurrence(concurrence_of_matrix(full.matrix())?))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn formula_endpoints() {
        assert!((entanglement_of_formation_x(Complex64::new(1.0, 0.0)) - 1.0).abs() < 1e-15);
        assert_eq!(entanglement_of_formation_x(Complex64::new(0.0, 0.0)), 0.0);
        let ef = entanglement_of_formation_x(Complex64::new(0.6, 0.0));
        assert!((ef - 0.4689955935892812).abs() < 1e-12);
    }

    #[test]
    fn post_state_examples() {
        let rho = post_measurement_register_state(Complex64::new(0.0, 0.0)).unwrap();
        assert!((rho.element(&[1, 0], &[1, 0]).re - 0.5).abs() < 1e-15);
        assert_eq!(rho.element(&[1, 0], &[0, 1]), Complex64::new(0.0, 0.0));
        let rho = post_measurement_register_state(Complex64::new(0.6, 0.0)).unwrap();
        let eig = rho.eigenvalues();
        let expected = [0.0, 0.0, 0.2, 0.8];
        for (a, b) in eig.iter().zip(expected) {
            assert!((a - b).abs() < 1e-12);
        }
        assert!(post_measurement_register_state(Complex64::new(1.1, 0.0)).is_err());
    }

    #[test]
    fn oracle_on_reference_states() {
        let bell = post_measurement_register_state(Complex64::new(1.0, 0.0)).unwrap();
        assert!((concurrence_ef_oracle(&bell).unwrap() - 1.0).abs() < 1e-7);
        let mixed = DensityOperator::new(
            two_register_layout(),
            two_register_layout().enumerate_basis(),
            CMatrix::from_diagonal_element(4, 4, Complex64::new(0.25, 0.0)),
        )
        .unwrap();
        assert!(concurrence_ef_oracle(&mixed).unwrap().abs() < 1e-12);
    }

    #[test]
    fn non_positive_matrix_is_rejected() {
        let m = CMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![
            Complex64::new(0.6, 0.0),
            Complex64::new(0.6, 0.0),
            Complex64::new(-0.2, 0.0),
            Complex64::new(0.0, 0.0),
        ]));
        assert!(matches!(concurrence_of_matrix(&m), Err(Error::NotPositive(_))));
    }
}
