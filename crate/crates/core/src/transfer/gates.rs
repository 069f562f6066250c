use crate::error::{Error, Result};
use crate::fock::{BasisLabel, ModeKind, ModeLayout, PureState};

fn require_kind(layout: &ModeLayout, id: &str, kind: ModeKind) -> Result<usize> {
    let pos = layout.require(id)?;
    if layout.mode(pos).kind != kind {
        let expected = match kind {
            ModeKind::Field => "field",
            ModeKind::Register => "register",
        };
        return Err(Error::ModeKind {
            mode: id.to_string(),
            expected,
        });
    }
    Ok(pos)
}

/// Adds the occupation of `control` to the register `target`, modulo the
/// register capacity + 1.
pub fn occupation_cnot(state: &PureState, control: &str, target: &str) -> Result<PureState> {
    let layout = state.layout();
    let c = require_kind(layout, control, ModeKind::Field)?;
    let t = require_kind(layout, target, ModeKind::Register)?;
    let (c_cap, t_cap) = (layout.mode(c).capacity, layout.mode(t).capacity);
    if t_cap < c_cap {
        return Err(Error::Capacity {
            mode: target.to_string(),
            occupation: c_cap as u64,
            capacity: t_cap,
        });
    }
    let modulus = t_cap as u64 + 1;
    state.map_basis(layout.clone(), |label| {
        let mut occ = label.0.clone();
        occ[t] = ((occ[t] as u64 + occ[c] as u64) % modulus) as u32;
        Ok(BasisLabel(occ))
    })
}

/// Where the register `control` is non-zero, moves every particle of
/// `source` into `sink`; branches with an empty register are untouched.
pub fn hiding_operation(state: &PureState, control: &str, source: &str, sink: &str) -> Result<PureState> {
    let layout = state.layout();
    let c = require_kind(layout, control, ModeKind::Register)?;
    let src = require_kind(layout, source, ModeKind::Field)?;
    let snk = require_kind(layout, sink, ModeKind::Field)?;
    if src == snk {
        return Err(Error::InvalidArgument("source and sink must differ".into()));
    }
    let cap = layout.mode(snk).capacity;
    state.map_basis(layout.clone(), |label| {
        let mut occ = label.0.clone();
        if occ[c] == 0 {
            return Ok(BasisLabel(occ));
        }
        let total = occ[snk] as u64 + occ[src] as u64;
        if total > cap as u64 {
            return Err(Error::Capacity {
                mode: sink.to_string(),
                occupation: total,
                capacity: cap,
            });
        }
        occ[snk] = total as u32;
        occ[src] = 0;
        Ok(BasisLabel(occ))
    })
}
