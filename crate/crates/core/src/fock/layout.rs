use std::fmt;

use crate::error::{Error, Result};

/// The two parties sharing a state.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Site {
    A,
    B,
}

impl Site {
    pub fn other(self) -> Site {
        match self {
            Site::A => Site::B,
            Site::B => Site::A,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Site::A => "A",
            Site::B => "B",
        }
    }
}

impl fmt::Display for Site {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Field modes hold identical particles and are subject to the local number
/// superselection rule; registers are ordinary distinguishable quantum systems.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ModeKind {
    Field,
    Register,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ModeDescriptor {
    pub id: String,
    pub site: Site,
    pub kind: ModeKind,
    /// Largest occupation representable in this mode.
    pub capacity: u32,
}

impl ModeDescriptor {
    pub fn new(id: impl Into<String>, site: Site, kind: ModeKind, capacity: u32) -> Self {
        Self {
            id: id.into(),
            site,
            kind,
            capacity,
        }
    }

    pub fn field(id: impl Into<String>, site: Site, capacity: u32) -> Self {
        Self::new(id, site, ModeKind::Field, capacity)
    }

    pub fn register(id: impl Into<String>, site: Site, capacity: u32) -> Self {
        Self::new(id, site, ModeKind::Register, capacity)
    }
}

/// Occupation vector aligned with a [`ModeLayout`].
///
/// The derived ordering is lexicographic over occupations, which fixes the
/// row/column order of every matrix built from a set of labels.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BasisLabel(pub Vec<u32>);

impl BasisLabel {
    pub fn new(occupations: Vec<u32>) -> Self {
        Self(occupations)
    }

    pub fn occupations(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Sub-label made of the entries at `positions`, in that order.
    pub fn select(&self, positions: &[usize]) -> BasisLabel {
        BasisLabel(positions.iter().map(|&p| self.0[p]).collect())
    }

    pub fn concat(&self, other: &BasisLabel) -> BasisLabel {
        let mut occ = Vec::with_capacity(self.0.len() + other.0.len());
        occ.extend_from_slice(&self.0);
        occ.extend_from_slice(&other.0);
        BasisLabel(occ)
    }
}

impl From<Vec<u32>> for BasisLabel {
    fn from(v: Vec<u32>) -> Self {
        BasisLabel(v)
    }
}

impl fmt::Display for BasisLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("|")?;
        for (i, n) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{n}")?;
        }
        f.write_str(">")
    }
}

/// Ordered list of modes. The order defines the positions inside every
/// [`BasisLabel`] built over this layout.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct ModeLayout {
    modes: Vec<ModeDescriptor>,
}

impl ModeLayout {
    pub fn new(modes: Vec<ModeDescriptor>) -> Result<Self> {
        for (i, m) in modes.iter().enumerate() {
            if modes[..i].iter().any(|o| o.id == m.id) {
                return Err(Error::DuplicateMode(m.id.clone()));
            }
        }
        Ok(Self { modes })
    }

    pub fn modes(&self) -> &[ModeDescriptor] {
        &self.modes
    }

    pub fn len(&self) -> usize {
        self.modes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.modes.is_empty()
    }

    pub fn mode(&self, position: usize) -> &ModeDescriptor {
        &self.modes[position]
    }

    pub fn position(&self, id: &str) -> Option<usize> {
        self.modes.iter().position(|m| m.id == id)
    }

    pub fn require(&self, id: &str) -> Result<usize> {
        self.position(id)
            .ok_or_else(|| Error::UnknownMode(id.to_string()))
    }

    /// Positions of the modes matching a site and (optionally) a kind.
    pub fn positions(&self, site: Site, kind: Option<ModeKind>) -> Vec<usize> {
        self.modes
            .iter()
            .enumerate()
            .filter(|(_, m)| m.site == site && kind.is_none_or(|k| m.kind == k))
            .map(|(i, _)| i)
            .collect()
    }

    pub fn has_site(&self, site: Site) -> bool {
        self.modes.iter().any(|m| m.site == site)
    }

    pub fn require_both_sites(&self) -> Result<()> {
        if self.has_site(Site::A) && self.has_site(Site::B) {
            Ok(())
        } else {
            Err(Error::SingleSite)
        }
    }

    pub fn concat(&self, other: &ModeLayout) -> Result<ModeLayout> {
        let mut modes = self.modes.clone();
        modes.extend(other.modes.iter().cloned());
        ModeLayout::new(modes)
    }

    pub fn select(&self, positions: &[usize]) -> ModeLayout {
        ModeLayout {
            modes: positions.iter().map(|&p| self.modes[p].clone()).collect(),
        }
    }

    /// Copy of this layout with one mode's capacity replaced.
    pub fn with_capacity(&self, position: usize, capacity: u32) -> ModeLayout {
        let mut modes = self.modes.clone();
        modes[position].capacity = capacity;
        ModeLayout { modes }
    }

    pub fn check_label(&self, label: &BasisLabel) -> Result<()> {
        if label.len() != self.modes.len() {
            return Err(Error::LabelLength {
                got: label.len(),
                expected: self.modes.len(),
            });
        }
        for (m, &n) in self.modes.iter().zip(label.occupations()) {
            if n > m.capacity {
                return Err(Error::Capacity {
                    mode: m.id.clone(),
                    occupation: n as u64,
                    capacity: m.capacity,
                });
            }
        }
        Ok(())
    }

    /// Every label of the layout, in lexicographic order.
    pub fn enumerate_basis(&self) -> Vec<BasisLabel> {
        let mut out = vec![BasisLabel(Vec::with_capacity(self.modes.len()))];
        for m in &self.modes {
            let mut next = Vec::with_capacity(out.len() * (m.capacity as usize + 1));
            for prefix in &out {
                for n in 0..=m.capacity {
                    let mut occ = prefix.0.clone();
                    occ.push(n);
                    next.push(BasisLabel(occ));
                }
            }
            out = next;
        }
        out
    }

    pub fn dimension(&self) -> usize {
        self.modes
            .iter()
            .map(|m| m.capacity as usize + 1)
            .product()
    }
}
