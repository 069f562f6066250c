use std::collections::BTreeMap;
use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix};

/// Default truncation of the phase-operator space.
pub const DEFAULT_PHASE_TRUNCATION: u32 = 256;

/// Truncated single-mode space |0⟩..|s⟩ with Pegg-Barnett phase states
/// θ_m = θ0 + 2πm/(s+1).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseOperatorSpace {
    s: u32,
    theta0: f64,
}

impl PhaseOperatorSpace {
    pub fn new(s: u32, theta0: f64) -> Result<Self> {
        if s < 1 {
            return Err(Error::InvalidArgument("phase truncation s must be at least 1".into()));
        }
        Ok(Self { s, theta0 })
    }

    pub fn truncation(&self) -> u32 {
        self.s
    }

    pub fn theta0(&self) -> f64 {
        self.theta0
    }

    pub fn dimension(&self) -> usize {
        self.s as usize + 1
    }

    pub fn phase_angle(&self, m: u32) -> f64 {
        self.theta0 + 2.0 * PI * m as f64 / (self.s + 1) as f64
    }

    /// |θ_m⟩ = (s+1)^{-1/2} Σ_n e^{inθ_m} |n⟩.
    pub fn phase_state(&self, m: u32) -> Vec<Complex64> {
        let norm = 1.0 / (self.dimension() as f64).sqrt();
        let theta = self.phase_angle(m);
        (0..=self.s)
            .map(|n| Complex64::from_polar(norm, n as f64 * theta))
            .collect()
    }

    /// Phase e^{i(s+1)θ0} picked up when the lowering shift wraps |0⟩ to |s⟩.
    pub fn wrap_phase(&self) -> Complex64 {
        Complex64::from_polar(1.0, (self.s + 1) as f64 * self.theta0)
    }

    /// e^{iφ̂} applied to |n⟩: (image, coefficient).
    pub fn exp_action(&self, n: u32) -> (u32, Complex64) {
        if n == 0 {
            (self.s, self.wrap_phase())
        } else {
            (n - 1, Complex64::new(1.0, 0.0))
        }
    }

    /// e^{−iφ̂} applied to |n⟩.
    pub fn exp_adjoint_action(&self, n: u32) -> (u32, Complex64) {
        if n == self.s {
            (0, self.wrap_phase().conj())
        } else {
            (n + 1, Complex64::new(1.0, 0.0))
        }
    }

    pub fn number_operator(&self) -> CMatrix {
        CMatrix::from_fn(self.dimension(), self.dimension(), |r, c| {
            if r == c {
                Complex64::new(r as f64, 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            }
        })
    }
}

/// e^{iφ̂} = Σ_m e^{iθ_m} |θ_m⟩⟨θ_m|, built from the phase-state projectors.
pub fn pegg_barnett_exponential(s: u32, theta0: f64) -> Result<CMatrix> {
    let space = PhaseOperatorSpace::new(s, theta0)?;
    let d = space.dimension();
    let mut u = CMatrix::zeros(d, d);
    for m in 0..=s {
        let v = space.phase_state(m);
        let e = Complex64::from_polar(1.0, space.phase_angle(m));
        for r in 0..d {
            for c in 0..d {
                u[(r, c)] += e * v[r] * v[c].conj();
            }
        }
    }
    Ok(u)
}

/// Dense cos(φ̂_A − φ̂_B) and sin(φ̂_A − φ̂_B) on the (s+1)² product space,
/// site A as the major index.
pub fn phase_difference_trig(space: &PhaseOperatorSpace) -> Result<(CMatrix, CMatrix)> {
    let e = pegg_barnett_exponential(space.truncation(), space.theta0())?;
    let x = linalg::kron(&e, &e.adjoint());
    let xd = x.adjoint();
    let cos = (&x + &xd) * Complex64::new(0.5, 0.0);
    let sin = (&x - &xd) * Complex64::new(0.0, -0.5);
    Ok((cos, sin))
}

/// Amplitudes over (n_A, n_B), kept ordered so sums are reproducible.
pub type TwoModeAmplitudes = BTreeMap<(u32, u32), Complex64>;

/// e^{i(φ̂_A − φ̂_B)} applied to a two-mode state.
pub fn apply_phase_difference_exp(space: &PhaseOperatorSpace, psi: &TwoModeAmplitudes) -> TwoModeAmplitudes {
    psi.iter()
        .map(|(&(a, b), amp)| {
            let (a2, ca) = space.exp_action(a);
            let (b2, cb) = space.exp_adjoint_action(b);
            ((a2, b2), amp * ca * cb)
        })
        .collect()
}

/// e^{−i(φ̂_A − φ̂_B)} applied to a two-mode state.
pub fn apply_phase_difference_exp_adjoint(space: &PhaseOperatorSpace, psi: &TwoModeAmplitudes) -> TwoModeAmplitudes {
    psi.iter()
        .map(|(&(a, b), amp)| {
            let (a2, ca) = space.exp_adjoint_action(a);
            let (b2, cb) = space.exp_action(b);
            ((a2, b2), amp * ca * cb)
        })
        .collect()
}

/// α·x + β·y.
pub(crate) fn combine(alpha: Complex64, x: &TwoModeAmplitudes, beta: Complex64, y: &TwoModeAmplitudes) -> TwoModeAmplitudes {
    let mut out: TwoModeAmplitudes = x.iter().map(|(k, v)| (*k, alpha * v)).collect();
    for (k, v) in y {
        *out.entry(*k).or_default() += beta * v;
    }
    out
}

pub(crate) fn inner(x: &TwoModeAmplitudes, y: &TwoModeAmplitudes) -> Complex64 {
    x.iter()
        .filter_map(|(k, a)| y.get(k).map(|b| a.conj() * b))
        .sum()
}
