use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fock::{PureState, Site};
use crate::tolerances::{INEQUALITY_SLACK, PHYSICAL_TAIL};

use super::pegg_barnett::{
    apply_phase_difference_exp, apply_phase_difference_exp_adjoint, combine, inner, PhaseOperatorSpace,
    TwoModeAmplitudes,
};

/// Tolerance on Var(N_A − N_B) = Var(N_A) + Var(N_B) before the
/// uncorrelated-field bound is evaluated.
const ADDITIVITY_TOL: f64 = 1e-10;

/// lhs ≥ rhs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Inequality {
    pub lhs: f64,
    pub rhs: f64,
}

impl Inequality {
    pub fn slack(&self) -> f64 {
        self.lhs - self.rhs
    }

    pub fn holds(&self) -> bool {
        self.slack() >= INEQUALITY_SLACK
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct UncertaintyReport {
    pub var_na: f64,
    pub var_nb: f64,
    pub var_diff: f64,
    pub mean_cos: f64,
    pub mean_sin: f64,
    pub var_cos: f64,
    pub var_sin: f64,
    /// ⟨e^{i(φ̂_A − φ̂_B)}⟩.
    pub exp_mean: Complex64,
    pub visibility2: f64,
    /// |⟨[N_A, cos Δ]⟩ + i⟨sin Δ⟩|.
    pub commutator_residual: f64,
    pub dcos: Inequality,
    pub dsin: Inequality,
    /// Single-site forms, indexed [A, B].
    pub dcos2: [Inequality; 2],
    pub dsin2: [Inequality; 2],
    /// Absent when the two modes are correlated.
    pub c1: Option<Inequality>,
    pub c2: [Inequality; 2],
    pub diagnostics: Vec<String>,
}

impl UncertaintyReport {
    /// (name, inequality) for every evaluated inequality.
    pub fn inequalities(&self) -> Vec<(&'static str, Inequality)> {
        let mut out = vec![
            ("dcos", self.dcos),
            ("dsin", self.dsin),
            ("dcos2.A", self.dcos2[0]),
            ("dcos2.B", self.dcos2[1]),
            ("dsin2.A", self.dsin2[0]),
            ("dsin2.B", self.dsin2[1]),
            ("C2.A", self.c2[0]),
            ("C2.B", self.c2[1]),
        ];
        if let Some(c1) = self.c1 {
            out.push(("C1", c1));
        }
        out
    }

    pub fn violations(&self) -> Vec<(&'static str, Inequality)> {
        self.inequalities().into_iter().filter(|(_, i)| !i.holds()).collect()
    }

    /// Var(cos Δ) + Var(sin Δ) − (1 − |⟨e^{iΔφ̂}⟩|²).
    pub fn trig_identity_residual(&self) -> f64 {
        self.var_cos + self.var_sin - (1.0 - self.visibility2)
    }

    pub fn min_slack(&self) -> f64 {
        self.inequalities()
            .iter()
            .map(|(_, i)| i.slack())
            .fold(f64::INFINITY, f64::min)
    }
}

/// Positions of the site-A and site-B modes of a two-mode state.
fn two_mode_positions(state: &PureState) -> Result<(usize, usize)> {
    let layout = state.layout();
    let a = layout.positions(Site::A, None);
    let b = layout.positions(Site::B, None);
    if layout.len() != 2 || a.len() != 1 || b.len() != 1 {
        return Err(Error::Dimension(
            "expected exactly one mode at each site".into(),
        ));
    }
    Ok((a[0], b[0]))
}

/// Converts to (n_A, n_B) amplitudes, checking occupations fit in 0..=s.
pub fn two_mode_amplitudes(state: &PureState, space: &PhaseOperatorSpace) -> Result<TwoModeAmplitudes> {
    let (pa, pb) = two_mode_positions(state)?;
    let s = space.truncation();
    let mut out = TwoModeAmplitudes::new();
    for (label, amp) in state.terms() {
        let occ = label.occupations();
        for p in [pa, pb] {
            if occ[p] > s {
                return Err(Error::Capacity {
                    mode: state.layout().mode(p).id.clone(),
                    occupation: occ[p] as u64,
                    capacity: s,
                });
            }
        }
        out.insert((occ[pa], occ[pb]), *amp);
    }
    Ok(out)
}

/// Largest occupation not counted as tail: ⌊s − √s⌋.
pub fn physical_threshold(s: u32) -> u32 {
    (s as f64 - (s as f64).sqrt()).floor() as u32
}

/// Fails with the offending tail mass when either mode carries weight
/// ≥ 1e-10 above occupation s − √s.
pub fn check_physical(state: &PureState, space: &PhaseOperatorSpace) -> Result<()> {
    let (pa, pb) = two_mode_positions(state)?;
    let threshold = physical_threshold(space.truncation());
    for p in [pa, pb] {
        let tail: f64 = state
            .terms()
            .filter(|(l, _)| l.occupations()[p] > threshold)
            .map(|(_, a)| a.norm_sqr())
            .sum();
        if tail >= PHYSICAL_TAIL {
            return Err(Error::NonPhysical {
                mode: state.layout().mode(p).id.clone(),
                threshold,
                tail,
            });
        }
    }
    Ok(())
}

/// Mean and variance of f(n_A, n_B), two-pass to avoid cancellation.
fn moments(psi: &TwoModeAmplitudes, f: impl Fn(u32, u32) -> f64) -> (f64, f64) {
    let mean: f64 = psi.iter().map(|(&(a, b), amp)| amp.norm_sqr() * f(a, b)).sum();
    let var = psi
        .iter()
        .map(|(&(a, b), amp)| amp.norm_sqr() * (f(a, b) - mean).powi(2))
        .sum();
    (mean, var)
}

fn norm_sqr(x: &TwoModeAmplitudes) -> f64 {
    x.values().map(|a| a.norm_sqr()).sum()
}

/// Number and phase-difference moments with the Robertson and visibility
/// inequalities evaluated on them.
pub fn uncertainty_report(state: &PureState, space: &PhaseOperatorSpace) -> Result<UncertaintyReport> {
    check_physical(state, space)?;
    let psi = two_mode_amplitudes(state, space)?;

    let (_, var_na) = moments(&psi, |a, _| a as f64);
    let (_, var_nb) = moments(&psi, |_, b| b as f64);
    let (_, var_diff) = moments(&psi, |a, b| a as f64 - b as f64);

    let x = apply_phase_difference_exp(space, &psi);
    let xd = apply_phase_difference_exp_adjoint(space, &psi);
    let half = Complex64::new(0.5, 0.0);
    let cos_psi = combine(half, &x, half, &xd);
    let sin_psi = combine(Complex64::new(0.0, -0.5), &x, Complex64::new(0.0, 0.5), &xd);
    let exp_mean = inner(&psi, &x);
    let mean_cos = inner(&psi, &cos_psi).re;
    let mean_sin = inner(&psi, &sin_psi).re;
    let var_cos = norm_sqr(&cos_psi) - mean_cos * mean_cos;
    let var_sin = norm_sqr(&sin_psi) - mean_sin * mean_sin;
    let visibility2 = exp_mean.norm_sqr();

    // ⟨[N_A, cos Δ]⟩ = ⟨N_A ψ|cos ψ⟩ − ⟨cos ψ|N_A ψ⟩.
    let na_psi: TwoModeAmplitudes = psi.iter().map(|(&(a, b), v)| ((a, b), v * a as f64)).collect();
    let ip = inner(&na_psi, &cos_psi);
    let commutator = ip - ip.conj();
    let commutator_residual = (commutator + Complex64::new(0.0, mean_sin)).norm();

    let sin2 = mean_sin * mean_sin;
    let cos2 = mean_cos * mean_cos;
    let single = |v: f64| {
        (
            Inequality {
                lhs: v * var_cos,
                rhs: 0.25 * sin2,
            },
            Inequality {
                lhs: v * var_sin,
                rhs: 0.25 * cos2,
            },
        )
    };
    let (dcos2_a, dsin2_a) = single(var_na);
    let (dcos2_b, dsin2_b) = single(var_nb);
    let c2 = |v: f64| Inequality {
        lhs: 4.0 * v / (1.0 + 4.0 * v),
        rhs: visibility2,
    };

    let mut diagnostics = Vec::new();
    let additivity = (var_diff - (var_na + var_nb)).abs();
    let c1 = if additivity > ADDITIVITY_TOL {
        diagnostics.push(format!(
            "C1 skipped: modes are correlated (|Var(NA-NB) - Var(NA) - Var(NB)| = {additivity:.3e})"
        ));
        None
    } else {
        let v = var_na + var_nb;
        Some(Inequality {
            lhs: v / (1.0 + v),
            rhs: visibility2,
        })
    };

    Ok(UncertaintyReport {
        var_na,
        var_nb,
        var_diff,
        mean_cos,
        mean_sin,
        var_cos,
        var_sin,
        exp_mean,
        visibility2,
        commutator_residual,
        dcos: Inequality {
            lhs: var_diff * var_cos,
            rhs: sin2,
        },
        dsin: Inequality {
            lhs: var_diff * var_sin,
            rhs: cos2,
        },
        dcos2: [dcos2_a, dcos2_b],
        dsin2: [dsin2_a, dsin2_b],
        c1,
        c2: [c2(var_na), c2(var_nb)],
        diagnostics,
    })
}

/// Robertson relations for the phase difference against N_A − N_B and
/// against each single-site number.
pub fn robertson_checks(state: &PureState, space: &PhaseOperatorSpace) -> Result<UncertaintyReport> {
    uncertainty_report(state, space)
}

/// Bounds of |C|² by the number variances; the uncorrelated-field bound is
/// skipped with a diagnostic for correlated inputs.
pub fn visibility_bound_check(state: &PureState, space: &PhaseOperatorSpace) -> Result<UncertaintyReport> {
    uncertainty_report(state, space)
}
