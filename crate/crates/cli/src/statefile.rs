use std::path::Path;

use bosent_core::{ModeDescriptor, ModeKind, ModeLayout, PureState, Site};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::CliError;

/// Norm deviation accepted (and corrected) when loading a state.
pub const RENORMALIZE_TOL: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModeEntry {
    pub id: String,
    pub site: String,
    pub kind: String,
    pub capacity: u32,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermEntry {
    pub occ: Vec<u32>,
    pub amp: [f64; 2],
}

/// JSON state file: a mode list and sparse amplitudes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StateFile {
    pub modes: Vec<ModeEntry>,
    pub terms: Vec<TermEntry>,
}

/// A loaded state and whether it had to be renormalized.
#[derive(Debug, Clone, PartialEq)]
pub struct LoadedState {
    pub state: PureState,
    pub renormalized: bool,
}

fn parse_site(s: &str) -> Result<Site, CliError> {
    match s {
        "A" | "a" => Ok(Site::A),
        "B" | "b" => Ok(Site::B),
        other => Err(CliError::Parse(format!("unknown site {other:?} (expected A or B)"))),
    }
}

fn parse_kind(s: &str) -> Result<ModeKind, CliError> {
    match s {
        "field" => Ok(ModeKind::Field),
        "register" => Ok(ModeKind::Register),
        other => Err(CliError::Parse(format!("unknown mode kind {other:?} (expected field or register)"))),
    }
}

impl StateFile {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::Parse(format!("state file: {e}")))
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn layout(&self) -> Result<ModeLayout, CliError> {
        layout_from_entries(&self.modes)
    }

    /// Builds the state. Occupations beyond a capacity are capacity errors;
    /// a norm off by at most 1e-6 is corrected with a warning.
    pub fn to_state(&self) -> Result<LoadedState, CliError> {
        let layout = self.layout()?;
        let terms: Vec<(Vec<u32>, Complex64)> = self
            .terms
            .iter()
            .map(|t| (t.occ.clone(), Complex64::new(t.amp[0], t.amp[1])))
            .collect();
        let (state, norm_sqr) = PureState::normalized_from_terms(layout, terms)?;
        let deviation = (norm_sqr.sqrt() - 1.0).abs();
        if deviation > RENORMALIZE_TOL {
            return Err(CliError::Parse(format!(
                "amplitudes have norm {:.9}, more than {RENORMALIZE_TOL:e} away from 1",
                norm_sqr.sqrt()
            )));
        }
        let renormalized = deviation > 1e-12;
        if renormalized {
            log::warn!("state renormalized (norm was {:.12})", norm_sqr.sqrt());
        }
        Ok(LoadedState { state, renormalized })
    }

    pub fn from_state(state: &PureState) -> Self {
        let modes = mode_entries(state.layout());
        let terms = state
            .terms()
            .map(|(l, a)| TermEntry {
                occ: l.occupations().to_vec(),
                amp: [a.re, a.im],
            })
            .collect();
        StateFile { modes, terms }
    }
}

pub fn mode_entries(layout: &ModeLayout) -> Vec<ModeEntry> {
    layout
        .modes()
        .iter()
        .map(|m| ModeEntry {
            id: m.id.clone(),
            site: m.site.as_str().to_string(),
            kind: match m.kind {
                ModeKind::Field => "field",
                ModeKind::Register => "register",
            }
            .to_string(),
            capacity: m.capacity,
        })
        .collect()
}

pub fn layout_from_entries(entries: &[ModeEntry]) -> Result<ModeLayout, CliError> {
    let modes = entries
        .iter()
        .map(|m| Ok(ModeDescriptor::new(m.id.clone(), parse_site(&m.site)?, parse_kind(&m.kind)?, m.capacity)))
        .collect::<Result<Vec<_>, CliError>>()?;
    ModeLayout::new(modes).map_err(|e| CliError::Parse(e.to_string()))
}

pub fn load_state(path: &Path) -> Result<LoadedState, CliError> {
    StateFile::load(path)?.to_state()
}
