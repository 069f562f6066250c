use std::f64::consts::{LN_2, PI};

use num_complex::Complex64;

use crate::error::Result;
use crate::transfer::AncillaSpec;

use super::distribution::{canonical_phase_distribution, phase_grid_size, resolution_kernel};
use super::formation::{concurrence_ef_oracle, entanglement_of_formation_x, post_measurement_register_state};

/// Largest grid evaluated by direct convolution; beyond it the moment
/// product is used.
pub const MAX_QUADRATURE_GRID: usize = 1 << 14;

/// C(ϕ) = e^{iϕ} f₁ᴬ* f₁ᴮ, the closed form of the kernel's first moment.
pub fn visibility_moment(spec_a: &AncillaSpec, spec_b: &AncillaSpec, varphi: f64) -> Complex64 {
    spec_a.shift_moment(1).conj() * spec_b.shift_moment(1) * Complex64::from_polar(1.0, varphi)
}

/// C(ϕ) = ∫∫ P_ϕ(θ, φ) e^{i(φ−θ)} dθ dφ by quadrature. Since the kernel
/// depends on φ − θ alone, the double integral reduces to ∫ D(x) e^{ix} dx
/// over the phase-difference density D.
pub fn visibility_quadrature(spec_a: &AncillaSpec, spec_b: &AncillaSpec, varphi: f64) -> Result<Complex64> {
    let k = phase_grid_size(spec_a.truncation().max(spec_b.truncation()));
    visibility_on_grid(spec_a, spec_b, varphi, k)
}

/// Quadrature value of C(ϕ) on a caller-chosen grid of K ≥ 2M + 3 points.
pub fn visibility_on_grid(spec_a: &AncillaSpec, spec_b: &AncillaSpec, varphi: f64, k: usize) -> Result<Complex64> {
    let pa = canonical_phase_distribution(spec_a, k)?;
    let pb = canonical_phase_distribution(spec_b, k)?;
    let d = resolution_kernel(&pa, &pb, varphi)?;
    let step = 2.0 * PI / k as f64;
    Ok(d.values()
        .iter()
        .enumerate()
        .map(|(j, v)| Complex64::from_polar(v * step, d.angle(j)))
        .sum())
}

/// Fringe visibility at measured phase difference ϕ: quadrature when the grid
/// is affordable, otherwise the moment product.
pub fn visibility_at(spec_a: &AncillaSpec, spec_b: &AncillaSpec, varphi: f64) -> Result<Complex64> {
    let k = phase_grid_size(spec_a.truncation().max(spec_b.truncation()));
    if k > MAX_QUADRATURE_GRID {
        log::debug!("grid {k} exceeds {MAX_QUADRATURE_GRID}; using the moment product");
        return Ok(visibility_moment(spec_a, spec_b, varphi));
    }
    visibility_quadrature(spec_a, spec_b, varphi)
}

/// Fringe visibility C at ϕ = 0.
pub fn visibility(spec_a: &AncillaSpec, spec_b: &AncillaSpec) -> Result<Complex64> {
    visibility_at(spec_a, spec_b, 0.0)
}

/// |C|² ≈ e^{−1/(4 n_tr)} for a transported coherent reference of mean n_tr
/// measured against a much larger local one.
pub fn coherent_visibility_model(ntr: f64) -> f64 {
    (-1.0 / (4.0 * ntr)).exp()
}

/// 1 − 1/(4 Var ln 2).
pub fn ef_upper_bound(var_tr: f64) -> f64 {
    1.0 - 1.0 / (4.0 * var_tr * LN_2)
}

/// E_F at the largest |C|² compatible with a transported number variance,
/// |C|² ≤ 4V/(1 + 4V).
pub fn ef_variance_bound(var_tr: f64) -> f64 {
    let c2 = 4.0 * var_tr / (1.0 + 4.0 * var_tr);
    entanglement_of_formation_x(Complex64::new(c2.sqrt(), 0.0))
}

/// Whether a local reference variance reaches the level at which the
/// transported variance dominates the measurement (Var_B ≥ 3 Var_A).
pub fn optimum_condition(var_a: f64, var_b: f64) -> bool {
    var_b >= 3.0 * var_a
}

#[derive(Debug, Clone, PartialEq)]
pub struct VisibilityReport {
    pub c: Complex64,
    /// Moment-product value of C, for cross-checking the quadrature.
    pub c_moment: Complex64,
    pub visibility2: f64,
    pub model_visibility2: f64,
    pub ef: f64,
    /// E_F of the post-measurement state through the concurrence route.
    pub ef_oracle: f64,
    pub bound: f64,
    pub variance_bound: f64,
    pub transported_mean: f64,
    pub transported_variance: f64,
    pub local_mean: f64,
    /// Quadrature grid size, or `None` when the moment product was used.
    pub grid: Option<usize>,
}

/// Visibility and entanglement of formation for a transported coherent
/// reference of mean `ntr` against a local one of mean `local_scale · ntr`.
/// `grid` forces a quadrature grid size.
pub fn coherent_visibility_report(ntr: f64, local_scale: f64, grid: Option<usize>) -> Result<VisibilityReport> {
    let transported = AncillaSpec::coherent(ntr)?;
    let local = AncillaSpec::coherent(local_scale * ntr)?;
    visibility_report(&transported, &local, ntr, grid)
}

/// Report for arbitrary references; `ntr` feeds the model and the bound.
pub fn visibility_report(
    transported: &AncillaSpec,
    local: &AncillaSpec,
    ntr: f64,
    grid: Option<usize>,
) -> Result<VisibilityReport> {
    let default = phase_grid_size(transported.truncation().max(local.truncation()));
    let grid = match grid {
        Some(k) => Some(k),
        None if default <= MAX_QUADRATURE_GRID => Some(default),
        None => None,
    };
    let c = match grid {
        Some(k) => visibility_on_grid(transported, local, 0.0, k)?,
        None => visibility_moment(transported, local, 0.0),
    };
    let post = post_measurement_register_state(c / c.norm().max(1.0))?;
    Ok(VisibilityReport {
        c,
        c_moment: visibility_moment(transported, local, 0.0),
        visibility2: c.norm_sqr(),
        model_visibility2: coherent_visibility_model(ntr),
        ef: entanglement_of_formation_x(c),
        ef_oracle: concurrence_ef_oracle(&post)?,
        bound: ef_upper_bound(ntr),
        variance_bound: ef_variance_bound(transported.variance()),
        transported_mean: transported.mean(),
        transported_variance: transported.variance(),
        local_mean: local.mean(),
        grid,
    })
}
