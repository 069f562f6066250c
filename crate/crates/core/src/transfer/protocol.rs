use crate::error::{Error, Result};
use crate::fock::{partial_trace, DensityOperator, ModeDescriptor, ModeKind, ModeLayout, PureState, Site};

use super::ancilla::{phase_mode_id, two_mode_ancilla_state_at, AncillaSpec};
use super::gates::{hiding_operation, occupation_cnot};

/// Default ancilla truncation.
pub const DEFAULT_TRUNCATION: u32 = 32;

/// Input state plus the two local reference ancillas.
#[derive(Debug, Clone, PartialEq)]
pub struct ProtocolConfig {
    pub input: PureState,
    pub ancilla_a: AncillaSpec,
    pub ancilla_b: AncillaSpec,
    /// Extra capacity of each truncated-phase mode beyond its M.
    pub sink_headroom: u32,
}

impl ProtocolConfig {
    /// Sink headroom defaults to the largest total particle number of the input.
    pub fn new(input: PureState, ancilla_a: AncillaSpec, ancilla_b: AncillaSpec) -> Result<Self> {
        let sink_headroom = total_particles(&input);
        let config = Self {
            input,
            ancilla_a,
            ancilla_b,
            sink_headroom,
        };
        config.validate()?;
        Ok(config)
    }

    /// Coherent ancillas filling a truncation of M at both sites.
    pub fn with_truncation(input: PureState, m: u32) -> Result<Self> {
        let spec = AncillaSpec::coherent_for_truncation(m)?;
        Self::new(input, spec.clone(), spec)
    }

    pub fn validate(&self) -> Result<()> {
        let layout = self.input.layout();
        layout.require_both_sites()?;
        if let Some(m) = layout.modes().iter().find(|m| m.kind != ModeKind::Field) {
            return Err(Error::ModeKind {
                mode: m.id.clone(),
                expected: "field",
            });
        }
        let n = total_particles(&self.input);
        if self.sink_headroom < n {
            return Err(Error::Capacity {
                mode: "sink headroom".into(),
                occupation: n as u64,
                capacity: self.sink_headroom,
            });
        }
        Ok(())
    }

    pub fn ancilla(&self, site: Site) -> &AncillaSpec {
        match site {
            Site::A => &self.ancilla_a,
            Site::B => &self.ancilla_b,
        }
    }

    pub fn sink_capacity(&self, site: Site) -> u32 {
        self.ancilla(site).truncation() + self.sink_headroom
    }
}

/// Largest total field occupation over the support of `state`.
pub fn total_particles(state: &PureState) -> u32 {
    state
        .terms()
        .map(|(l, _)| l.occupations().iter().sum::<u32>())
        .max()
        .unwrap_or(0)
}

/// Id of the register paired with a field mode.
pub fn register_mode_id(field: &str) -> String {
    format!("reg.{field}")
}

/// Register modes for the input fields: site A registers first, then site B,
/// each in field layout order.
pub(crate) fn register_layout(input: &ModeLayout) -> Result<ModeLayout> {
    let mut modes = Vec::new();
    for site in [Site::A, Site::B] {
        for p in input.positions(site, Some(ModeKind::Field)) {
            let m = input.mode(p);
            modes.push(ModeDescriptor::register(register_mode_id(&m.id), site, m.capacity));
        }
    }
    ModeLayout::new(modes)
}

/// Runs the copy-then-hide sequence on `initial`, which must hold the input
/// fields, a `phase.<site>` sink per site and zeroed registers.
pub(crate) fn apply_protocol(initial: PureState, input: &ModeLayout) -> Result<PureState> {
    let mut state = initial;
    for site in [Site::A, Site::B] {
        let sink = phase_mode_id(site);
        for p in input.positions(site, Some(ModeKind::Field)) {
            let field = &input.mode(p).id;
            let reg = register_mode_id(field);
            state = occupation_cnot(&state, field, &reg)?;
            state = hiding_operation(&state, &reg, field, &sink)?;
        }
    }
    Ok(state)
}

pub(crate) fn zero_registers(input: &ModeLayout) -> Result<PureState> {
    let layout = register_layout(input)?;
    let zeros = vec![0; layout.len()];
    PureState::basis_state(layout, zeros)
}

/// Joint pure state of input fields, both ancillas and the registers after
/// the protocol. Layout: input fields, `phase.A`, `ref.A`, `phase.B`,
/// `ref.B`, then the registers.
pub fn transfer_full_state(config: &ProtocolConfig) -> Result<PureState> {
    config.validate()?;
    let layout = config.input.layout();
    let mut initial = config.input.clone();
    for site in [Site::A, Site::B] {
        let ancilla = two_mode_ancilla_state_at(config.ancilla(site), site, config.sink_capacity(site))?;
        initial = initial.tensor(&ancilla)?;
    }
    initial = initial.tensor(&zero_registers(layout)?)?;
    apply_protocol(initial, layout)
}

/// Reduced register state after the protocol.
pub fn run_transfer(config: &ProtocolConfig) -> Result<DensityOperator> {
    let full = transfer_full_state(config)?;
    let registers = register_layout(config.input.layout())?;
    let keep: Vec<&str> = registers.modes().iter().map(|m| m.id.as_str()).collect();
    partial_trace(&full, &keep)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::trace_distance;
    use num_complex::Complex64;
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
    fn shared_particle_leaves_classical_mixture() {
        let config = ProtocolConfig::with_truncation(shared_particle(), 6).unwrap();
        let rho = run_transfer(&config).unwrap();
        let ids: Vec<&str> = rho.layout().modes().iter().map(|m| m.id.as_str()).collect();
        assert_eq!(ids, ["reg.a", "reg.b"]);
        let expected = DensityOperator::from_unsorted(
            rho.layout().clone(),
            vec![vec![1, 0].into(), vec![0, 1].into()],
            crate::linalg::CMatrix::from_diagonal_element(2, 2, Complex64::new(0.5, 0.0)),
        )
        .unwrap();
        assert!(trace_distance(&rho, &expected).unwrap() < 1e-12);
    }

    #[test]
    fn full_state_layout_and_norm() {
        let config = ProtocolConfig::with_truncation(shared_particle(), 4).unwrap();
        let full = transfer_full_state(&config).unwrap();
        let ids: Vec<&str> = full.layout().modes().iter().map(|m| m.id.as_str()).collect();
        assert_eq!(ids, ["a", "b", "phase.A", "ref.A", "phase.B", "ref.B", "reg.a", "reg.b"]);
        assert!((full.norm_sqr() - 1.0).abs() < 1e-12);
        // Every field particle ends up hidden in a sink.
        for (l, _) in full.terms() {
            assert_eq!(&l.occupations()[..2], &[0, 0]);
        }
    }

    #[test]
    fn rejects_register_inputs_and_small_headroom() {
        let l = ModeLayout::new(vec![
            ModeDescriptor::field("a", Site::A, 1),
            ModeDescriptor::register("b", Site::B, 1),
        ])
        .unwrap();
        let s = PureState::basis_state(l, vec![1, 0]).unwrap();
        assert!(ProtocolConfig::with_truncation(s, 4).is_err());
        let mut config = ProtocolConfig::with_truncation(shared_particle(), 4).unwrap();
        config.sink_headroom = 0;
        assert!(run_transfer(&config).unwrap_err().is_capacity());
    }
}
