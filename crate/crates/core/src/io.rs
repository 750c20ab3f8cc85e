//! Ring, module and pair files.
//!
//! A module or pair file names its ring either inline, as a ring
//! descriptor object, or as a path to a ring file (relative to the file
//! that mentions it).

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::linalg::Matrix;
use crate::module::PresentedModule;
use crate::ring::{Element, Ring, RingDescriptor};
use crate::zerodiv::{verify_exact_pair, ExactPair};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum RingRef {
    Inline(RingDescriptor),
    Path(String),
}

impl RingRef {
    fn resolve(&self, base: &Path) -> Result<Ring> {
        match self {
            RingRef::Inline(d) => Ring::new(d.clone()),
            RingRef::Path(p) => load_ring(base.join(p)),
        }
    }
}

pub fn load_ring(path: impl AsRef<Path>) -> Result<Ring> {
    Ring::new(RingDescriptor::from_json(&fs::read_to_string(path)?)?)
}

fn parent(path: &Path) -> PathBuf {
    path.parent().map(Path::to_path_buf).unwrap_or_default()
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ModuleFile {
    pub ring: RingRef,
    pub presentation: Vec<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub shifts: Option<Vec<i32>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
}

impl ModuleFile {
    pub fn from_module(m: &PresentedModule) -> ModuleFile {
        ModuleFile {
            ring: RingRef::Inline(m.ring().descriptor().clone()),
            presentation: m.presentation().to_strings(),
            shifts: m.shifts().map(<[i32]>::to_vec),
            label: Some(m.label()),
        }
    }

    /// Build the module over an already loaded ring.
    pub fn module_over(&self, ring: &Ring) -> Result<PresentedModule> {
        let rho = if self.presentation.iter().all(Vec::is_empty) {
            Matrix::zero(ring, self.presentation.len(), 0)
        } else {
            Matrix::parse(ring, &self.presentation)?
        };
        let mut m = PresentedModule::new(rho);
        if let Some(s) = &self.shifts {
            m = m.with_shifts(s)?;
        }
        if let Some(l) = &self.label {
            m = m.with_label(l.clone());
        }
        Ok(m)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<(Ring, PresentedModule)> {
        let path = path.as_ref();
        let file: ModuleFile = serde_json::from_str(&fs::read_to_string(path)?)?;
        let ring = file.ring.resolve(&parent(path))?;
        let m = file.module_over(&ring)?;
        Ok((ring, m))
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PairFile {
    pub ring: RingRef,
    pub x: String,
    pub y: String,
}

impl PairFile {
    pub fn load(path: impl AsRef<Path>) -> Result<(Ring, Element, Element)> {
        let path = path.as_ref();
        let file: PairFile = serde_json::from_str(&fs::read_to_string(path)?)?;
        let ring = file.ring.resolve(&parent(path))?;
        let (x, y) = (ring.parse(&file.x)?, ring.parse(&file.y)?);
        Ok((ring, x, y))
    }

    /// Load and verify the pair, including its regularity.
    pub fn load_verified(path: impl AsRef<Path>, bound: u32) -> Result<ExactPair> {
        let (ring, x, y) = Self::load(path)?;
        verify_exact_pair(&ring, &x, &y, bound)?.with_regularity(bound)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn module_file_round_trip() {
        let r = Ring::graded(5, &["x", "y", "z"], &["x*y"]).unwrap();
        let m = PresentedModule::new(Matrix::parse_literal(&r, "[[x, z^2], [0, y]]").unwrap()).with_label("G_{z^2}");
        let text = serde_json::to_string(&ModuleFile::from_module(&m)).unwrap();
        let back: ModuleFile = serde_json::from_str(&text).unwrap();
        let m2 = back.module_over(&r).unwrap();
        assert_eq!(m2.presentation(), m.presentation());
        assert_eq!(m2.shifts(), m.shifts());
        assert_eq!(m2.label(), "G_{z^2}");
    }

    #[test]
    fn ring_by_path() {
        let dir = tempfile::tempdir().unwrap();
        fs::write(dir.path().join("z9.json"), r#"{"kind": "finite", "p": 3, "k": 2}"#).unwrap();
        let pair = dir.path().join("pair.json");
        fs::write(&pair, r#"{"ring": "z9.json", "x": "3", "y": "3"}"#).unwrap();
        let p = PairFile::load_verified(&pair, 0).unwrap();
        assert!(p.verified);
        assert_eq!(p.ring.to_string(), "Z/3^2");
    }
}
