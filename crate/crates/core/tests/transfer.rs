mod common;

use std::f64::consts::PI;

use bosent_core::transfer::{
    coherent_coefficients, coherent_truncation, mode_overlap_integral, phase_grid_register_state,
    phase_rotated_ancilla, register_sector_entanglement, register_sectors, run_transfer, transfer_full_state,
    truncated_phase_amplitudes, two_mode_ancilla_state, AncillaSpec, ProtocolConfig,
};
use bosent_core::{particle_entanglement, sector_decompose, trace_distance, PureState};
use common::*;
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[test]
fn ancilla_equals_phase_integral() {
    for (nbar, m) in [(4.0, 12), (9.0, 40)] {
        let spec = coherent_coefficients(nbar, m).unwrap();
        let direct = two_mode_ancilla_state(&spec);
        let k = 2 * m as usize + 3;
        // (√(M+1)/2π) ∫ |ψ(θ)⟩|c(θ)⟩ dθ on a uniform grid; phase mode first.
        let scale = ((m + 1) as f64).sqrt() / k as f64;
        let mut acc = vec![Complex64::new(0.0, 0.0); (m as usize + 1) * (m as usize + 1)];
        for j in 0..k {
            let theta = 2.0 * PI * j as f64 / k as f64;
            let psi = truncated_phase_amplitudes(m, theta);
            let cs = phase_rotated_ancilla(&spec, theta);
            for (a, pa) in psi.iter().enumerate() {
                for (l, ca) in cs.terms() {
                    acc[a * (m as usize + 1) + l.0[0] as usize] += pa * ca * scale;
                }
            }
        }
        for a in 0..=m {
            for n in 0..=m {
                let want = direct.amplitude_of(&[a, n]);
                assert!((acc[(a * (m + 1) + n) as usize] - want).norm() < 1e-10);
            }
        }
    }
}

/// Direct evaluation of the overlap integral: the sums over n and m at each
/// quadrature point θ′.
fn overlap_quadrature(k: u32, spec: &AncillaSpec, theta: f64) -> Complex64 {
    let m = spec.truncation();
    let grid = 2 * m as usize + k as usize + 3;
    let psi_t = truncated_phase_amplitudes(m, theta);
    let mut total = Complex64::new(0.0, 0.0);
    for j in 0..grid {
        let tp = 2.0 * PI * j as f64 / grid as f64;
        let psi_p = truncated_phase_amplitudes(m, tp);
        let phase_sum: Complex64 = (0..=m as usize).map(|n| psi_t[n] * psi_p[n].conj()).sum();
        let ref_sum: Complex64 = (0..=m)
            .map(|q| {
                let cq = spec.coefficient(q);
                cq * Complex64::from_polar(1.0, q as f64 * theta) * (cq * Complex64::from_polar(1.0, q as f64 * tp)).conj()
            })
            .sum();
        total += phase_sum * ref_sum * Complex64::from_polar(1.0, k as f64 * tp);
    }
    total / grid as f64
}

#[test]
fn overlap_integral_matches_quadrature() {
    let spec = coherent_coefficients(9.0, 20).unwrap();
    for k in 0..=4 {
        for theta in [0.0, 0.9, -2.3] {
            let exact = mode_overlap_integral(k, &spec, theta);
            assert!((exact.value - overlap_quadrature(k, &spec, theta)).norm() < 1e-9);
        }
    }
}

#[test]
fn random_two_particle_state_matches_sector_mixture() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..5 {
        let input = random_fixed_number_state(&mut rng, 2, 2);
        let config = ProtocolConfig::with_truncation(input.clone(), 6).unwrap();
        let rho = run_transfer(&config).unwrap();
        let expected = expected_register_mixture(&input);
        assert!(trace_distance(&rho, &expected).unwrap() < 1e-10);
    }
}

#[test]
fn register_entanglement_and_weights_follow_input_sectors() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..5 {
        let input = random_fixed_number_state(&mut rng, 2, 2);
        let config = ProtocolConfig::with_truncation(input.clone(), 5).unwrap();
        let rho = run_transfer(&config).unwrap();
        let ep = particle_entanglement(&input).unwrap();
        assert!((register_sector_entanglement(&rho).unwrap() - ep).abs() < 1e-9);
        let dec = sector_decompose(&input).unwrap();
        let sectors = register_sectors(&rho).unwrap();
        assert_eq!(sectors.len(), dec.sectors.len());
        for (r, s) in sectors.iter().zip(&dec.sectors) {
            assert_eq!(r.n, s.n);
            assert!((r.weight - s.probability).abs() < 1e-10);
        }
    }
}

#[test]
fn full_protocol_state_stays_normalized() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let input = random_fixed_number_state(&mut rng, 2, 1);
    let spec_a = AncillaSpec::coherent(3.0).unwrap();
    let spec_b = AncillaSpec::uniform(7).unwrap();
    let config = ProtocolConfig::new(input, spec_a, spec_b).unwrap();
    let full: PureState = transfer_full_state(&config).unwrap();
    assert!((full.norm_sqr() - 1.0).abs() < 1e-12);
}

#[test]
fn grid_path_stays_within_boundary_weight() {
    for m in [8u32, 16] {
        let config = ProtocolConfig::with_truncation(shared_particle(), m).unwrap();
        let exact = run_transfer(&config).unwrap();
        let grid = phase_grid_register_state(&config, 2 * m as usize + 3).unwrap();
        let d = trace_distance(&grid, &exact).unwrap();
        assert!(d <= 3.0 / (m + 1) as f64, "M={m}: {d}");
    }
}

#[test]
fn default_coherent_truncation_covers_the_tail() {
    for nbar in [1.0, 25.0, 400.0] {
        let m = coherent_truncation(nbar) as f64;
        assert!(m >= nbar + 10.0 * nbar.sqrt());
        assert!(m < nbar + 10.0 * nbar.sqrt() + 1.0);
    }
}
