use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::Result;
use crate::fock::{ModeDescriptor, ModeLayout, PureState, Site};
use crate::transfer::{coherent_coefficients, reference_mode_id};

use super::pegg_barnett::PhaseOperatorSpace;
use super::report::check_physical;

/// Give up after this many rejected draws.
const MAX_RESAMPLES: u32 = 10_000;

/// One mode per site, `ref.A` and `ref.B`, both with capacity s.
pub fn reference_pair_layout(s: u32) -> ModeLayout {
    ModeLayout::new(vec![
        ModeDescriptor::field(reference_mode_id(Site::A), Site::A, s),
        ModeDescriptor::field(reference_mode_id(Site::B), Site::B, s),
    ])
    .expect("distinct ids")
}

/// Coherent(n̄_A) ⊗ coherent(n̄_B), truncated at s.
pub fn coherent_pair(nbar_a: f64, nbar_b: f64, s: u32) -> Result<PureState> {
    let a = coherent_coefficients(nbar_a, s)?;
    let b = coherent_coefficients(nbar_b, s)?;
    let mut terms = Vec::new();
    for (n, ca) in a.terms() {
        for (m, cb) in b.terms() {
            terms.push((vec![n, m], ca * cb));
        }
    }
    let (state, _) = PureState::normalized_from_terms(reference_pair_layout(s), terms)?;
    Ok(state)
}

fn gaussian(rng: &mut impl Rng) -> Complex64 {
    Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

/// Random amplitudes on n ∈ center ± 4·width with a Gaussian envelope, a
/// random phase ramp and complex noise.
fn random_mode(rng: &mut impl Rng, s: u32) -> Vec<(u32, Complex64)> {
    let center = rng.random_range(0.0..s as f64);
    let width = rng.random_range(0.5..(s as f64).sqrt().max(1.0));
    let ramp = rng.random_range(-std::f64::consts::PI..std::f64::consts::PI);
    let noise = rng.random_range(0.0..1.0);
    let lo = (center - 4.0 * width).floor().max(0.0) as u32;
    let hi = ((center + 4.0 * width).ceil() as u32).min(s);
    (lo..=hi)
        .map(|n| {
            let env = (-(n as f64 - center).powi(2) / (4.0 * width * width)).exp();
            let amp = Complex64::from_polar(env, ramp * n as f64) * (Complex64::new(1.0, 0.0) + gaussian(rng) * noise);
            (n, amp)
        })
        .collect()
}

fn draw(rng: &mut impl Rng, s: u32) -> Result<PureState> {
    let layout = reference_pair_layout(s);
    let terms: Vec<(Vec<u32>, Complex64)> = if rng.random_bool(0.5) {
        let a = random_mode(rng, s);
        let b = random_mode(rng, s);
        a.iter()
            .flat_map(|&(n, ca)| b.iter().map(move |&(m, cb)| (vec![n, m], ca * cb)))
            .collect()
    } else {
        // Correlated: random amplitudes on a small block of both modes.
        let len = rng.random_range(2..=6);
        let a0 = rng.random_range(0..=s - len);
        let b0 = rng.random_range(0..=s - len);
        let mut t = Vec::new();
        for i in 0..len {
            for j in 0..len {
                t.push((vec![a0 + i, b0 + j], gaussian(rng)));
            }
        }
        t
    };
    let (state, _) = PureState::normalized_from_terms(layout, terms)?;
    Ok(state)
}

/// A random two-mode state passing the physical-support test for `space`,
/// with the number of rejected draws.
pub fn random_physical_state(rng: &mut impl Rng, space: &PhaseOperatorSpace) -> Result<(PureState, u32)> {
    let s = space.truncation();
    for resamples in 0..MAX_RESAMPLES {
        let state = draw(rng, s)?;
        if check_physical(&state, space).is_ok() {
            return Ok((state, resamples));
        }
    }
    Err(crate::error::Error::InvalidArgument(format!(
        "no physical state found in {MAX_RESAMPLES} draws for s = {s}"
    )))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn sampler_is_seeded_and_physical() {
        let space = PhaseOperatorSpace::new(64, 0.0).unwrap();
        let (a, ra) = random_physical_state(&mut ChaCha8Rng::seed_from_u64(7), &space).unwrap();
        let (b, rb) = random_physical_state(&mut ChaCha8Rng::seed_from_u64(7), &space).unwrap();
        assert_eq!(a, b);
        assert_eq!(ra, rb);
        check_physical(&a, &space).unwrap();
    }

    #[test]
    fn coherent_pair_is_normalized() {
        let s = coherent_pair(4.0, 9.0, 64).unwrap();
        assert!((s.norm_sqr() - 1.0).abs() < 1e-12);
    }
}
