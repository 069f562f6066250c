use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fock::{ModeDescriptor, ModeLayout, PureState, Site};
use crate::tolerances::NORM_TOL;

/// Coefficients c_0..c_M of the local reference state Σ c_n |n⟩.
///
/// Only a contiguous window `offset..offset + len` is stored; coefficients
/// outside it are exactly zero. This keeps very large coherent amplitudes
/// cheap to represent.
#[derive(Debug, Clone, PartialEq)]
pub struct AncillaSpec {
    m: u32,
    offset: u32,
    coefficients: Vec<Complex64>,
}

impl AncillaSpec {
    /// Dense coefficients c_0..c_M; M is `coefficients.len() - 1`.
    pub fn new(coefficients: Vec<Complex64>) -> Result<Self> {
        let m = coefficients.len().saturating_sub(1) as u32;
        Self::windowed(m, 0, coefficients)
    }

    pub fn windowed(m: u32, offset: u32, coefficients: Vec<Complex64>) -> Result<Self> {
        if m < 1 {
            return Err(Error::InvalidArgument("ancilla truncation M must be at least 1".into()));
        }
        if coefficients.is_empty() || offset as usize + coefficients.len() > m as usize + 1 {
            return Err(Error::InvalidArgument(format!(
                "coefficient window {}..{} does not fit in 0..={m}",
                offset,
                offset as usize + coefficients.len()
            )));
        }
        let norm: f64 = coefficients.iter().map(|c| c.norm_sqr()).sum();
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::NotNormalized(norm));
        }
        Ok(Self {
            m,
            offset,
            coefficients,
        })
    }

    /// Number state |n⟩ inside a truncation M.
    pub fn number_state(m: u32, n: u32) -> Result<Self> {
        Self::windowed(m, n, vec![Complex64::new(1.0, 0.0)])
    }

    /// Equal-weight coefficients c_n = 1/√(M+1).
    pub fn uniform(m: u32) -> Result<Self> {
        let c = Complex64::new(1.0 / ((m + 1) as f64).sqrt(), 0.0);
        Self::new(vec![c; m as usize + 1])
    }

    /// Coherent coefficients with the smallest truncation satisfying
    /// M ≥ n̄ + 10√n̄.
    pub fn coherent(nbar: f64) -> Result<Self> {
        coherent_coefficients(nbar, coherent_truncation(nbar))
    }

    /// Coherent coefficients sized for a fixed truncation M: n̄ is the largest
    /// mean with n̄ + 10√n̄ ≤ M.
    pub fn coherent_for_truncation(m: u32) -> Result<Self> {
        let root = (-10.0 + (100.0 + 4.0 * m as f64).sqrt()) / 2.0;
        coherent_coefficients(root * root, m)
    }

    pub fn truncation(&self) -> u32 {
        self.m
    }

    pub fn coefficient(&self, n: u32) -> Complex64 {
        if n < self.offset {
            return Complex64::new(0.0, 0.0);
        }
        self.coefficients
            .get((n - self.offset) as usize)
            .copied()
            .unwrap_or(Complex64::new(0.0, 0.0))
    }

    /// (n, c_n) over the stored window.
    pub fn terms(&self) -> impl Iterator<Item = (u32, Complex64)> + '_ {
        self.coefficients
            .iter()
            .enumerate()
            .map(move |(i, c)| (self.offset + i as u32, *c))
    }

    /// Range of occupations with stored coefficients.
    pub fn support(&self) -> std::ops::RangeInclusive<u32> {
        self.offset..=self.offset + self.coefficients.len() as u32 - 1
    }

    /// Σ n |c_n|².
    pub fn mean(&self) -> f64 {
        self.terms().map(|(n, c)| n as f64 * c.norm_sqr()).sum()
    }

    pub fn variance(&self) -> f64 {
        let mean = self.mean();
        self.terms()
            .map(|(n, c)| (n as f64 - mean).powi(2) * c.norm_sqr())
            .sum()
    }

    /// f_k = Σ_n c*_n c_{n+k}.
    pub fn shift_moment(&self, k: u32) -> Complex64 {
        let k = k as usize;
        if k >= self.coefficients.len() {
            return Complex64::new(0.0, 0.0);
        }
        self.coefficients
            .iter()
            .zip(&self.coefficients[k..])
            .map(|(a, b)| a.conj() * b)
            .sum()
    }
}

/// Smallest M with M ≥ n̄ + 10√n̄ (and at least 1).
pub fn coherent_truncation(nbar: f64) -> u32 {
    ((nbar + 10.0 * nbar.max(0.0).sqrt()).ceil() as u32).max(1)
}

/// Truncated coherent amplitudes c_n ∝ (n̄ⁿ e^{−n̄}/n!)^{1/2}, renormalized
/// over 0..=M. Coefficients more than 20 orders of magnitude below the peak
/// are not stored.
pub fn coherent_coefficients(nbar: f64, m: u32) -> Result<AncillaSpec> {
    if !nbar.is_finite() || nbar < 0.0 {
        return Err(Error::InvalidArgument(format!("mean particle number {nbar} must be >= 0")));
    }
    if (m as f64) < nbar + 10.0 * nbar.sqrt() {
        log::warn!("truncation M = {m} is below n̄ + 10√n̄ for n̄ = {nbar}");
    }
    if nbar == 0.0 {
        return AncillaSpec::windowed(m.max(1), 0, vec![Complex64::new(1.0, 0.0)]);
    }
    // ln p_n relative to the most likely occupation, by recursion outward
    // from it: ln p_{n+1} − ln p_n = ln n̄ − ln(n+1).
    let ln_nbar = nbar.ln();
    let cutoff = -2.0 * 20.0 * std::f64::consts::LN_10;
    let peak = (nbar.floor() as u64).min(m as u64) as u32;
    let mut below = Vec::new();
    let mut acc = 0.0;
    let mut n = peak;
    while n > 0 {
        acc -= ln_nbar - (n as f64).ln();
        if acc < cutoff {
            break;
        }
        n -= 1;
        below.push(acc);
    }
    let lo = peak - below.len() as u32;
    let mut log_p: Vec<f64> = below.into_iter().rev().collect();
    log_p.push(0.0);
    let mut acc = 0.0;
    for n in peak..m {
        acc += ln_nbar - ((n + 1) as f64).ln();
        if acc < cutoff {
            break;
        }
        log_p.push(acc);
    }
    let weights: Vec<f64> = log_p.iter().map(|l| l.exp()).collect();
    let total: f64 = weights.iter().sum();
    let coefficients = weights
        .iter()
        .map(|w| Complex64::new((w / total).sqrt(), 0.0))
        .collect();
    AncillaSpec::windowed(m.max(1), lo, coefficients)
}

fn single_mode(id: &str, site: Site, capacity: u32) -> ModeLayout {
    ModeLayout::new(vec![ModeDescriptor::field(id, site, capacity)]).expect("single mode")
}

/// Amplitudes e^{−i(M−n)θ}/√(M+1) of the truncated phase state, n = 0..=M.
pub fn truncated_phase_amplitudes(m: u32, theta: f64) -> Vec<Complex64> {
    let norm = 1.0 / ((m + 1) as f64).sqrt();
    (0..=m)
        .map(|n| Complex64::from_polar(norm, -((m - n) as f64) * theta))
        .collect()
}

/// Truncated phase state |ψ(θ)⟩ on a single site-A field mode `phase`.
pub fn truncated_phase_state(m: u32, theta: f64) -> PureState {
    truncated_phase_state_on("phase", Site::A, m, m, theta).expect("valid truncated phase state")
}

pub fn truncated_phase_state_on(
    id: &str,
    site: Site,
    capacity: u32,
    m: u32,
    theta: f64,
) -> Result<PureState> {
    let layout = single_mode(id, site, capacity);
    let amps = truncated_phase_amplitudes(m, theta);
    PureState::from_terms(layout, amps.into_iter().enumerate().map(|(n, a)| (vec![n as u32], a)))
}

/// Phase-rotated reference state |c(θ)⟩ = Σ c_n e^{inθ} |n⟩ on a single
/// site-A field mode `ref`.
pub fn phase_rotated_ancilla(spec: &AncillaSpec, theta: f64) -> PureState {
    let layout = single_mode("ref", Site::A, spec.truncation());
    PureState::from_terms(
        layout,
        spec.terms()
            .map(|(n, c)| (vec![n], c * Complex64::from_polar(1.0, n as f64 * theta))),
    )
    .expect("valid ancilla spec")
}

/// Mode id of the truncated-phase (sink) mode at a site.
pub fn phase_mode_id(site: Site) -> String {
    format!("phase.{site}")
}

/// Mode id of the reference (c-coefficient) mode at a site.
pub fn reference_mode_id(site: Site) -> String {
    format!("ref.{site}")
}

/// The local ancilla Σ_n c_n |M−n⟩_phase |n⟩_ref on site A with no sink
/// headroom.
pub fn two_mode_ancilla_state(spec: &AncillaSpec) -> PureState {
    two_mode_ancilla_state_at(spec, Site::A, spec.truncation()).expect("sink fits M")
}

/// The local ancilla Σ_n c_n |M−n⟩_phase |n⟩_ref obtained by sharing M
/// particles between two modes at `site`; the phase mode holds up to
/// `sink_capacity` particles.
pub fn two_mode_ancilla_state_at(
    spec: &AncillaSpec,
    site: Site,
    sink_capacity: u32,
) -> Result<PureState> {
    let m = spec.truncation();
    if sink_capacity < m {
        return Err(Error::Capacity {
            mode: phase_mode_id(site),
            occupation: m as u64,
            capacity: sink_capacity,
        });
    }
    let layout = ModeLayout::new(vec![
        ModeDescriptor::field(phase_mode_id(site), site, sink_capacity),
        ModeDescriptor::field(reference_mode_id(site), site, m),
    ])?;
    PureState::from_terms(layout, spec.terms().map(|(n, c)| (vec![m - n, n], c)))
}

/// Value of the phase-mode overlap integral
/// ∫ Σ_{n,m} ⟨n|ψ(θ)⟩⟨ψ(θ′)|n⟩⟨m|c(θ)⟩⟨c(θ′)|m⟩ e^{ikθ′} dθ′/2π,
/// which reduces to Σ_{m=k}^{M} |c_m|²/(M+1) · e^{ikθ}.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OverlapIntegral {
    pub value: Complex64,
    /// Set when k exceeds the truncation; the value is then zero.
    pub out_of_range: bool,
}

pub fn mode_overlap_integral(k: u32, spec: &AncillaSpec, theta: f64) -> OverlapIntegral {
    let m = spec.truncation();
    if k > m {
        return OverlapIntegral {
            value: Complex64::new(0.0, 0.0),
            out_of_range: true,
        };
    }
    let weight: f64 = spec
        .terms()
        .filter(|&(n, _)| n >= k)
        .map(|(_, c)| c.norm_sqr())
        .sum();
    OverlapIntegral {
        value: Complex64::from_polar(weight / (m + 1) as f64, k as f64 * theta),
        out_of_range: false,
    }
}

/// Uniform angle grid θ_j = 2πj/K.
pub fn angle_grid(k: usize) -> impl Iterator<Item = f64> {
    (0..k).map(move |j| 2.0 * PI * j as f64 / k as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_1_SQRT_2;

    #[test]
    fn phase_state_examples() {
        let s = truncated_phase_state(1, 0.0);
        assert!((s.amplitude_of(&[0]).re - FRAC_1_SQRT_2).abs() < 1e-15);
        assert!((s.amplitude_of(&[1]).re - FRAC_1_SQRT_2).abs() < 1e-15);
        for m in [1, 5, 32] {
            assert!((truncated_phase_state(m, 0.7).norm_sqr() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn phase_state_overlap_is_a_geometric_sum() {
        let m = 12u32;
        let (t, u) = (0.4, -1.3);
        let a = truncated_phase_state(m, t);
        let b = truncated_phase_state(m, u);
        let direct = a.inner(&b).unwrap();
        // Σ_{j=0}^{M} e^{ij(θ−θ′)}/(M+1) with j = M − n, in closed form.
        let z = Complex64::from_polar(1.0, t - u);
        let closed = (Complex64::new(1.0, 0.0) - z.powu(m + 1))
            / (Complex64::new(1.0, 0.0) - z)
            / (m + 1) as f64;
        assert!((direct - closed).norm() < 1e-12);
    }

    #[test]
    fn rotated_ancilla_keeps_weights() {
        let spec = AncillaSpec::coherent(4.0).unwrap();
        let s0 = phase_rotated_ancilla(&spec, 0.0);
        for (n, c) in spec.terms() {
            assert_eq!(s0.amplitude_of(&[n]), c);
        }
        for theta in [0.3, 2.0, -1.0] {
            let s = phase_rotated_ancilla(&spec, theta);
            assert!((s.norm_sqr() - 1.0).abs() < 1e-12);
            let mean: f64 = s.terms().map(|(l, a)| l.0[0] as f64 * a.norm_sqr()).sum();
            assert!((mean - spec.mean()).abs() < 1e-12);
        }
    }

    #[test]
    fn coherent_coefficient_examples() {
        let vac = coherent_coefficients(0.0, 4).unwrap();
        assert_eq!(vac.coefficient(0), Complex64::new(1.0, 0.0));
        assert!(coherent_coefficients(-1.0, 4).is_err());
        let nbar = 25.0;
        let spec = coherent_coefficients(nbar, coherent_truncation(nbar)).unwrap();
        let norm: f64 = spec.terms().map(|(_, c)| c.norm_sqr()).sum();
        assert!((norm - 1.0).abs() < 1e-12);
        assert!((spec.mean() - nbar).abs() / nbar < 0.01);
        assert!((spec.variance() - nbar).abs() / nbar < 0.01);
    }

    #[test]
    fn window_matches_full_recursion() {
        // Unwindowed weights n̄ⁿ/n! for a small n̄, renormalized.
        let (nbar, m) = (3.5f64, 30u32);
        let mut w = vec![1.0f64];
        for n in 1..=m {
            let prev = *w.last().unwrap();
            w.push(prev * nbar / n as f64);
        }
        let total: f64 = w.iter().sum();
        let spec = coherent_coefficients(nbar, m).unwrap();
        for n in 0..=m {
            assert!((spec.coefficient(n).re - (w[n as usize] / total).sqrt()).abs() < 1e-15);
        }
        let big = coherent_coefficients(1e7, coherent_truncation(1e7)).unwrap();
        assert!(big.support().count() < 100_000);
        assert!((big.mean() - 1e7).abs() < 1.0);
    }

    #[test]
    fn truncation_sized_coherent_state_fits() {
        let spec = AncillaSpec::coherent_for_truncation(32).unwrap();
        assert_eq!(spec.truncation(), 32);
        let nbar = spec.mean();
        assert!(nbar + 10.0 * nbar.sqrt() <= 32.0 + 1e-9);
    }

    #[test]
    fn ancilla_shares_exactly_m_particles() {
        let m = 6;
        let spec = AncillaSpec::number_state(m, 0).unwrap();
        let s = two_mode_ancilla_state(&spec);
        assert_eq!(s.support_len(), 1);
        assert_eq!(s.amplitude_of(&[m, 0]), Complex64::new(1.0, 0.0));

        let spec = AncillaSpec::coherent(2.0).unwrap();
        let s = two_mode_ancilla_state_at(&spec, Site::B, spec.truncation() + 3).unwrap();
        for (l, _) in s.terms() {
            assert_eq!(l.0[0] + l.0[1], spec.truncation());
        }
        assert!(two_mode_ancilla_state_at(&spec, Site::A, 1).unwrap_err().is_capacity());
    }

    #[test]
    fn overlap_integral_k0_is_inverse_dimension() {
        let spec = AncillaSpec::coherent(9.0).unwrap();
        let m = spec.truncation();
        let v = mode_overlap_integral(0, &spec, 1.7);
        assert!(!v.out_of_range);
        assert!((v.value - Complex64::new(1.0 / (m + 1) as f64, 0.0)).norm() < 1e-14);
        let out = mode_overlap_integral(m + 1, &spec, 0.0);
        assert!(out.out_of_range);
        assert_eq!(out.value, Complex64::new(0.0, 0.0));
    }

    #[test]
    fn invalid_specs_are_rejected() {
        assert!(AncillaSpec::new(vec![Complex64::new(1.0, 0.0)]).is_err());
        assert!(AncillaSpec::new(vec![Complex64::new(0.5, 0.0); 2]).is_err());
        assert!(AncillaSpec::windowed(3, 3, vec![Complex64::new(FRAC_1_SQRT_2, 0.0); 2]).is_err());
    }
}
