use std::collections::HashMap;
use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::fock::{BasisLabel, DensityOperator, ModeKind, PureState, Site};
use crate::linalg::CMatrix;

use super::ancilla::{phase_mode_id, truncated_phase_state_on};
use super::protocol::{apply_protocol, register_layout, zero_registers, ProtocolConfig};

/// Smallest grid that integrates the phase-state products exactly.
pub fn minimum_grid(m: u32) -> usize {
    2 * m as usize + 3
}

struct Term {
    group: usize,
    register: usize,
    exp_a: usize,
    exp_b: usize,
    amp: Complex64,
}

/// Register state rebuilt from the continuous-phase picture: the ancilla is
/// replaced by truncated phase states |ψ(θ)⟩|ψ(φ)⟩ on a K×K uniform grid, the
/// protocol is run on each branch, and the branch register states are
/// averaged with equal weight.
///
/// Each branch differs from the θ = φ = 0 branch only by a diagonal phase
/// e^{−i(M−a)θ} on the initial sink occupation a, so the protocol is run once
/// and the phases are applied per branch.
pub fn phase_grid_register_state(config: &ProtocolConfig, k: usize) -> Result<DensityOperator> {
    config.validate()?;
    let (m_a, m_b) = (config.ancilla_a.truncation(), config.ancilla_b.truncation());
    let need = minimum_grid(m_a.max(m_b));
    if k < need {
        return Err(Error::GridTooSmall { got: k, need });
    }

    let input = config.input.layout();
    let mut initial = config.input.clone();
    for (site, m) in [(Site::A, m_a), (Site::B, m_b)] {
        let psi = truncated_phase_state_on(&phase_mode_id(site), site, config.sink_capacity(site), m, 0.0)?;
        initial = initial.tensor(&psi)?;
    }
    initial = initial.tensor(&zero_registers(input)?)?;
    let w: PureState = apply_protocol(initial, input)?;

    let layout = w.layout();
    let regs: Vec<usize> = (0..layout.len())
        .filter(|&p| layout.mode(p).kind == ModeKind::Register)
        .collect();
    let traced: Vec<usize> = (0..layout.len()).filter(|p| !regs.contains(p)).collect();
    let sink_a = layout.require(&phase_mode_id(Site::A))?;
    let sink_b = layout.require(&phase_mode_id(Site::B))?;
    let reg_a = layout.positions(Site::A, Some(ModeKind::Register));
    let reg_b = layout.positions(Site::B, Some(ModeKind::Register));

    let mut basis: Vec<BasisLabel> = w.terms().map(|(l, _)| l.select(&regs)).collect();
    basis.sort();
    basis.dedup();
    let reg_index: HashMap<&BasisLabel, usize> = basis.iter().enumerate().map(|(i, l)| (l, i)).collect();

    let mut group_index: HashMap<BasisLabel, usize> = HashMap::new();
    let mut terms = Vec::with_capacity(w.support_len());
    for (label, amp) in w.terms() {
        let occ = label.occupations();
        let n_groups = group_index.len();
        let group = *group_index.entry(label.select(&traced)).or_insert(n_groups);
        let ra: u32 = reg_a.iter().map(|&p| occ[p]).sum();
        let rb: u32 = reg_b.iter().map(|&p| occ[p]).sum();
        // Initial sink occupation is the final one minus the hidden particles.
        let exp_a = (m_a + ra - occ[sink_a]) as usize;
        let exp_b = (m_b + rb - occ[sink_b]) as usize;
        terms.push(Term {
            group,
            register: reg_index[&label.select(&regs)],
            exp_a,
            exp_b,
            amp: *amp,
        });
    }
    let n_groups = group_index.len();
    let mut by_group: Vec<Vec<&Term>> = vec![Vec::new(); n_groups];
    for t in &terms {
        by_group[t.group].push(t);
    }

    let max_exp = (m_a.max(m_b) + config.sink_headroom) as usize;
    let table = |j: usize| -> Vec<Complex64> {
        let theta = 2.0 * PI * j as f64 / k as f64;
        (0..=max_exp)
            .map(|e| Complex64::from_polar(1.0, -(e as f64) * theta))
            .collect()
    };
    let tables: Vec<Vec<Complex64>> = (0..k).map(table).collect();

    let dim = basis.len();
    let partials: Vec<CMatrix> = (0..k)
        .into_par_iter()
        .map(|j| {
            let ta = &tables[j];
            let mut acc = CMatrix::zeros(dim, dim);
            let mut v: Vec<(usize, Complex64)> = Vec::new();
            for tb in &tables {
                for group in &by_group {
                    v.clear();
                    v.extend(group.iter().map(|t| (t.register, t.amp * ta[t.exp_a] * tb[t.exp_b])));
                    for &(r, a) in &v {
                        for &(c, b) in &v {
                            acc[(r, c)] += a * b.conj();
                        }
                    }
                }
            }
            acc
        })
        .collect();
    let mut total = CMatrix::zeros(dim, dim);
    for p in &partials {
        total += p;
    }
    total /= Complex64::new((k * k) as f64, 0.0);
    DensityOperator::new(register_layout(input)?, basis, total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::{ModeDescriptor, ModeLayout};
    use crate::transfer::run_transfer;
    use crate::fock::trace_distance;
    use std::f64::consts::FRAC_1_SQRT_2;

    fn shared_particle() -> PureState {
        let l = ModeLayout::new(vec![
            ModeDescriptor::field("a", Site::A, 1),
            ModeDescriptor::field("b", Site::B, 1),
        ])
        .unwrap();
        let h = Complex64::new(FRAC_1_SQRT_2, 0.0);
        PureState::from_terms(l, vec![(vec![1, 0], h), (vec![0, 1], h)]).unwrap()
    }

    #[test]
    fn grid_must_resolve_the_phase_states() {
        let config = ProtocolConfig::with_truncation(shared_particle(), 8).unwrap();
        assert_eq!(
            phase_grid_register_state(&config, 18).unwrap_err(),
            Error::GridTooSmall { got: 18, need: 19 }
        );
    }

    #[test]
    fn grid_state_is_close_to_exact_output() {
        let config = ProtocolConfig::with_truncation(shared_particle(), 8).unwrap();
        let grid = phase_grid_register_state(&config, 19).unwrap();
        let exact = run_transfer(&config).unwrap();
        assert!(trace_distance(&grid, &exact).unwrap() <= 3.0 / 9.0);
    }
}
