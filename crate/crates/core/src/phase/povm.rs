use std::collections::{BTreeMap, HashMap};
use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fock::{BasisLabel, DensityOperator, ModeKind, PureState};
use crate::linalg::CMatrix;

/// Dense Π(ϕ) on two modes with the given capacities:
/// ⟨n n′|Π|m m′⟩ = (1/2π) e^{i(n′−m′)ϕ} δ_{n+n′, m+m′}. Row index n(cap_b+1)+n′.
pub fn povm_element(cap_a: u32, cap_b: u32, varphi: f64) -> CMatrix {
    let db = cap_b as usize + 1;
    let dim = (cap_a as usize + 1) * db;
    CMatrix::from_fn(dim, dim, |r, c| {
        let (n, n2) = (r / db, r % db);
        let (m, m2) = (c / db, c % db);
        if n + n2 != m + m2 {
            return Complex64::new(0.0, 0.0);
        }
        Complex64::from_polar(1.0 / (2.0 * PI), (n2 as f64 - m2 as f64) * varphi)
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct PovmOutcome {
    /// Probability density of the outcome ϕ.
    pub density: f64,
    /// Conditional state of the register modes.
    pub state: DensityOperator,
}

/// Applies the phase-difference element Π(ϕ) to modes `mode_a` and `mode_b`
/// of `joint`, traces every other non-register mode, and returns the outcome
/// density with the conditional register state.
///
/// With Π(ϕ) = (1/2π) Σ_S |χ_S⟩⟨χ_S|, |χ_S⟩ = Σ_{n+n′=S} e^{in′ϕ}|n, n′⟩, the
/// unnormalized register state is (1/2π) Σ_{t,S} w_{t,S} w_{t,S}† with
/// w_{t,S} = Σ_{m+m′=S} e^{−im′ϕ} ⟨t, m, m′|joint⟩.
pub fn apply_phase_difference_povm(
    joint: &PureState,
    mode_a: &str,
    mode_b: &str,
    varphi: f64,
) -> Result<PovmOutcome> {
    let layout = joint.layout();
    let pa = layout.require(mode_a)?;
    let pb = layout.require(mode_b)?;
    if pa == pb {
        return Err(Error::InvalidArgument("measured modes must differ".into()));
    }
    let regs: Vec<usize> = (0..layout.len())
        .filter(|&p| layout.mode(p).kind == ModeKind::Register)
        .collect();
    if regs.is_empty() || regs.contains(&pa) || regs.contains(&pb) {
        return Err(Error::InvalidArgument(
            "measured modes must be non-register modes next to at least one register".into(),
        ));
    }
    let traced: Vec<usize> = (0..layout.len())
        .filter(|&p| p != pa && p != pb && !regs.contains(&p))
        .collect();

    let mut basis: Vec<BasisLabel> = joint.terms().map(|(l, _)| l.select(&regs)).collect();
    basis.sort();
    basis.dedup();
    let index: HashMap<&BasisLabel, usize> = basis.iter().enumerate().map(|(i, l)| (l, i)).collect();

    // (traced label, S) → register amplitudes.
    let mut vectors: BTreeMap<(BasisLabel, u32), BTreeMap<usize, Complex64>> = BTreeMap::new();
    for (label, amp) in joint.terms() {
        let occ = label.occupations();
        let s = occ[pa] + occ[pb];
        let phase = Complex64::from_polar(1.0, -(occ[pb] as f64) * varphi);
        *vectors
            .entry((label.select(&traced), s))
            .or_default()
            .entry(index[&label.select(&regs)])
            .or_default() += amp * phase;
    }
    let dim = basis.len();
    let mut m = CMatrix::zeros(dim, dim);
    for v in vectors.values() {
        for (&r, a) in v {
            for (&c, b) in v {
                m[(r, c)] += a * b.conj();
            }
        }
    }
    m /= Complex64::new(2.0 * PI, 0.0);
    let density: f64 = m.diagonal().iter().map(|z| z.re).sum();
    if density <= 0.0 {
        return Err(Error::BadTrace(density));
    }
    m /= Complex64::new(density, 0.0);
    let state = DensityOperator::new(layout.select(&regs), basis, m)?;
    Ok(PovmOutcome { density, state })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg;

    #[test]
    fn povm_elements_integrate_to_identity() {
        // The ϕ-dependence is a trigonometric polynomial of degree ≤ cap_b, so a
        // uniform grid of 2·cap_b + 1 points integrates it exactly.
        let (ca, cb) = (3, 4);
        let k = 2 * cb as usize + 1;
        let mut sum = CMatrix::zeros(20, 20);
        for j in 0..k {
            sum += povm_element(ca, cb, 2.0 * PI * j as f64 / k as f64) * Complex64::new(2.0 * PI / k as f64, 0.0);
        }
        let id = CMatrix::identity(20, 20);
        assert!((sum - id).norm() < 1e-10);
    }

    #[test]
    fn povm_element_is_positive() {
        let p = povm_element(3, 2, 0.7);
        assert!(linalg::hermitian_deviation(&p) < 1e-14);
        assert!(linalg::eigvalsh(&p)[0] > -1e-12);
    }

    #[test]
    fn protocol_state_gives_flat_density_and_mixed_c_state() {
        use crate::fock::{ModeDescriptor, ModeLayout, Site};
        use crate::phase::{post_measurement_register_state_on, visibility_moment};
        use crate::transfer::{transfer_full_state, AncillaSpec, ProtocolConfig};
        let l = ModeLayout::new(vec![
            ModeDescriptor::field("a", Site::A, 1),
            ModeDescriptor::field("b", Site::B, 1),
        ])
        .unwrap();
        let h = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        let input = PureState::from_terms(l, vec![(vec![1, 0], h), (vec![0, 1], h)]).unwrap();
        let a = AncillaSpec::coherent(3.0).unwrap();
        let b = AncillaSpec::coherent(8.0).unwrap();
        let config = ProtocolConfig::new(input, a.clone(), b.clone()).unwrap();
        let joint = transfer_full_state(&config).unwrap();
        for varphi in [0.0, 0.5, 2.0] {
            let out = apply_phase_difference_povm(&joint, "ref.A", "ref.B", varphi).unwrap();
            assert!((out.density - 1.0 / (2.0 * PI)).abs() < 1e-12, "{}", out.density);
            let c = visibility_moment(&a, &b, varphi);
            let expected = post_measurement_register_state_on(out.state.layout().clone(), c).unwrap();
            let got = out.state.expand_full().unwrap();
            assert!((got.matrix() - expected.matrix()).norm() < 1e-8);
        }
    }
}
