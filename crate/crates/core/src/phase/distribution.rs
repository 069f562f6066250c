use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::transfer::AncillaSpec;

/// Smallest grid used for phase quadrature.
pub const MIN_PHASE_GRID: usize = 257;

/// Grid size for a truncation M: max(2M + 3, 257).
pub fn phase_grid_size(m: u32) -> usize {
    (2 * m as usize + 3).max(MIN_PHASE_GRID)
}

/// A phase density P(θ) sampled on θ_j = 2πj/K, together with its Fourier
/// moments d_k = ∫ P(θ) e^{ikθ} dθ for k ≥ 0. Moments beyond the stored ones
/// vanish.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseDistribution {
    values: Vec<f64>,
    moments: Vec<Complex64>,
}

impl PhaseDistribution {
    /// Builds the grid values from the moments.
    pub fn from_moments(k: usize, moments: Vec<Complex64>) -> Self {
        let mut d = Self {
            values: Vec::new(),
            moments,
        };
        d.values = (0..k).map(|j| d.eval(angle(j, k))).collect();
        d
    }

    pub fn grid_size(&self) -> usize {
        self.values.len()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn angle(&self, j: usize) -> f64 {
        angle(j, self.values.len())
    }

    /// d_k; zero beyond the stored range.
    pub fn moment(&self, k: usize) -> Complex64 {
        self.moments.get(k).copied().unwrap_or_default()
    }

    pub fn moments(&self) -> &[Complex64] {
        &self.moments
    }

    /// P(θ) = (1/2π)[d_0 + 2 Re Σ_{k≥1} d_k e^{−ikθ}] at any angle.
    pub fn eval(&self, theta: f64) -> f64 {
        let mut acc = self.moment(0).re;
        for (k, d) in self.moments.iter().enumerate().skip(1) {
            acc += 2.0 * (d * Complex64::from_polar(1.0, -(k as f64) * theta)).re;
        }
        acc / (2.0 * PI)
    }

    /// Σ_j P(θ_j) 2π/K.
    pub fn integral(&self) -> f64 {
        self.values.iter().sum::<f64>() * 2.0 * PI / self.values.len() as f64
    }

    /// Second moment of the wrapped deviation from the circular mean.
    pub fn phase_variance(&self) -> f64 {
        let k = self.values.len();
        let mean = self.moment(1).arg();
        let step = 2.0 * PI / k as f64;
        self.values
            .iter()
            .enumerate()
            .map(|(j, p)| {
                let d = wrap(angle(j, k) - mean);
                d * d * p * step
            })
            .sum()
    }

    pub fn validate(&self) -> Result<()> {
        if let Some(v) = self.values.iter().copied().find(|&v| v < -1e-12) {
            return Err(Error::NotPositive(v));
        }
        let total = self.integral();
        if (total - 1.0).abs() > 1e-10 {
            return Err(Error::BadTrace(total));
        }
        Ok(())
    }
}

fn angle(j: usize, k: usize) -> f64 {
    2.0 * PI * j as f64 / k as f64
}

/// Maps an angle to (−π, π].
pub fn wrap(x: f64) -> f64 {
    let y = x.rem_euclid(2.0 * PI);
    if y > PI {
        y - 2.0 * PI
    } else {
        y
    }
}

/// Fourier moments f_k = Σ_n c*_n c_{n+k} of a reference state, k = 0..=len-1.
pub fn spec_moments(spec: &AncillaSpec) -> Vec<Complex64> {
    let len = spec.support().count();
    (0..len as u32).map(|k| spec.shift_moment(k)).collect()
}

/// P(θ) = |Σ_n c_n e^{−inθ}|²/2π on a uniform grid of size K.
pub fn canonical_phase_distribution(spec: &AncillaSpec, k: usize) -> Result<PhaseDistribution> {
    let need = 2 * spec.truncation() as usize + 3;
    if k < need {
        return Err(Error::GridTooSmall { got: k, need });
    }
    let values = (0..k)
        .map(|j| {
            let theta = angle(j, k);
            let amp: Complex64 = spec
                .terms()
                .map(|(n, c)| c * Complex64::from_polar(1.0, -(n as f64) * theta))
                .sum();
            amp.norm_sqr() / (2.0 * PI)
        })
        .collect();
    Ok(PhaseDistribution {
        values,
        moments: spec_moments(spec),
    })
}

/// Density of the phase difference x = φ − θ under the kernel
/// P_φ(θ, φ) = ∫ P_A(θ−θ′) P_B(φ−ϕ−θ′) dθ′/2π, i.e.
/// D(x) = ∫ P_A(u) P_B(u + x − ϕ) du, computed as a circular convolution on
/// the shared grid.
pub fn resolution_kernel(pa: &PhaseDistribution, pb: &PhaseDistribution, varphi: f64) -> Result<PhaseDistribution> {
    let k = pa.grid_size();
    if pb.grid_size() != k {
        return Err(Error::Dimension(format!(
            "phase grids differ: {} vs {}",
            k,
            pb.grid_size()
        )));
    }
    // P_B on the grid shifted by −ϕ.
    let shifted: Vec<f64> = (0..k).map(|j| pb.eval(angle(j, k) - varphi)).collect();
    let step = 2.0 * PI / k as f64;
    let values = (0..k)
        .map(|i| {
            pa.values
                .iter()
                .enumerate()
                .map(|(j, a)| a * shifted[(i + j) % k])
                .sum::<f64>()
                * step
        })
        .collect();
    let len = pa.moments.len().min(pb.moments.len());
    let moments = (0..len)
        .map(|l| pa.moments[l].conj() * pb.moments[l] * Complex64::from_polar(1.0, l as f64 * varphi))
        .collect();
    Ok(PhaseDistribution { values, moments })
}
