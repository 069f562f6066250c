#![allow(dead_code)]

use bosent_core::{
    sector_decompose, BasisLabel, CMatrix, DensityOperator, ModeDescriptor, ModeKind, ModeLayout, PureState, Site,
};
use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use std::f64::consts::FRAC_1_SQRT_2;

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn field_layout(ids: &[(&str, Site, u32)]) -> ModeLayout {
    ModeLayout::new(ids.iter().map(|&(id, site, cap)| ModeDescriptor::field(id, site, cap)).collect()).unwrap()
}

/// (|1,0⟩ + |0,1⟩)/√2 on modes `a` (A) and `b` (B).
pub fn shared_particle() -> PureState {
    shared_particle_named("a", "b")
}

pub fn shared_particle_named(a: &str, b: &str) -> PureState {
    let l = field_layout(&[(a, Site::A, 1), (b, Site::B, 1)]);
    let h = c(FRAC_1_SQRT_2, 0.0);
    PureState::from_terms(l, vec![(vec![1, 0], h), (vec![0, 1], h)]).unwrap()
}

/// Two independent copies, layout (a1, b1, a2, b2).
pub fn two_copies() -> PureState {
    shared_particle_named("a1", "b1")
        .tensor(&shared_particle_named("a2", "b2"))
        .unwrap()
}

pub fn gaussian(rng: &mut impl Rng) -> Complex64 {
    c(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

/// Random state with exactly `n` particles over `per_site` field modes at
/// each site (site-A modes first), capacities n.
pub fn random_fixed_number_state(rng: &mut impl Rng, n: u32, per_site: usize) -> PureState {
    let mut modes = Vec::new();
    for site in [Site::A, Site::B] {
        for i in 0..per_site {
            modes.push(ModeDescriptor::field(format!("{}{}", site.as_str().to_lowercase(), i + 1), site, n));
        }
    }
    let layout = ModeLayout::new(modes).unwrap();
    let terms: Vec<(BasisLabel, Complex64)> = layout
        .enumerate_basis()
        .into_iter()
        .filter(|l| l.occupations().iter().sum::<u32>() == n)
        .map(|l| (l, gaussian(rng)))
        .collect();
    PureState::normalized_from_terms(layout, terms).unwrap().0
}

/// Haar-like random unitary from the QR factors of a complex Gaussian matrix.
pub fn random_unitary(rng: &mut impl Rng, d: usize) -> CMatrix {
    let g = DMatrix::from_fn(d, d, |_, _| gaussian(rng));
    let qr = g.qr();
    let (q, r) = (qr.q(), qr.r());
    let phases = DMatrix::from_fn(d, d, |i, j| if i == j { r[(i, i)] / r[(i, i)].norm() } else { c(0.0, 0.0) });
    q * phases
}

/// Applies a random unitary within each local-number block of the site's
/// field modes. Works for states with one or two field modes per site.
pub fn random_local_number_unitary(rng: &mut impl Rng, state: &PureState, site: Site) -> PureState {
    let layout = state.layout();
    let pos = layout.positions(site, Some(ModeKind::Field));
    let max_n: u32 = pos.iter().map(|&p| layout.mode(p).capacity).sum();
    // Block basis for local number n: all sub-labels of `pos` with total n.
    let sub = layout.select(&pos);
    let labels = sub.enumerate_basis();
    let mut blocks = Vec::new();
    for n in 0..=max_n {
        let basis: Vec<BasisLabel> = labels.iter().filter(|l| l.occupations().iter().sum::<u32>() == n).cloned().collect();
        let u = random_unitary(rng, basis.len().max(1));
        blocks.push((basis, u));
    }
    state
        .apply_local(&pos, |local| {
            let n: u32 = local.occupations().iter().sum();
            let (basis, u) = &blocks[n as usize];
            let k = basis.iter().position(|b| b == local).unwrap();
            basis.iter().enumerate().map(|(j, b)| (b.clone(), u[(j, k)])).collect()
        })
        .unwrap()
}

/// Σ_n P_n |ψ̲_n⟩⟨ψ̲_n| with each sector state relabeled onto registers
/// `reg.<id>` ordered site A then site B.
pub fn expected_register_mixture(input: &PureState) -> DensityOperator {
    let layout = input.layout();
    let mut order = layout.positions(Site::A, Some(ModeKind::Field));
    order.extend(layout.positions(Site::B, Some(ModeKind::Field)));
    let regs = ModeLayout::new(
        order
            .iter()
            .map(|&p| {
                let m = layout.mode(p);
                ModeDescriptor::register(format!("reg.{}", m.id), m.site, m.capacity)
            })
            .collect(),
    )
    .unwrap();
    let dec = sector_decompose(input).unwrap();
    let mut basis: Vec<BasisLabel> = input.terms().map(|(l, _)| l.select(&order)).collect();
    basis.sort();
    basis.dedup();
    let mut m = CMatrix::zeros(basis.len(), basis.len());
    for s in &dec.sectors {
        let v: Vec<(usize, Complex64)> = s
            .state
            .terms()
            .map(|(l, a)| (basis.binary_search(&l.select(&order)).unwrap(), *a))
            .collect();
        for &(i, a) in &v {
            for &(j, b) in &v {
                m[(i, j)] += a * b.conj() * s.probability;
            }
        }
    }
    DensityOperator::new(regs, basis, m).unwrap()
}

/// Same state with every mode id prefixed.
pub fn renamed(state: &PureState, prefix: &str) -> PureState {
    let layout = ModeLayout::new(
        state
            .layout()
            .modes()
            .iter()
            .map(|m| ModeDescriptor::new(format!("{prefix}{}", m.id), m.site, m.kind, m.capacity))
            .collect(),
    )
    .unwrap();
    state.map_basis(layout, |l| Ok(l.clone())).unwrap()
}

/// Random state with a random particle number in 0..=max_n, one or two field
/// modes per site.
pub fn random_state(rng: &mut impl Rng, max_n: u32, per_site: usize) -> PureState {
    let n = rng.random_range(0..=max_n);
    random_fixed_number_state(rng, n, per_site)
}
