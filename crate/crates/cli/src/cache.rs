//! On-disk cache of `H^{2r}` in the canonical Fock text format.

use anyhow::{bail, Context, Result};
use m1plus::hvec::compute_h;
use m1plus::FockVector;
use std::path::{Path, PathBuf};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CacheStatus {
    Built,
    /// Loaded, rebuilt and found identical.
    Hit,
}

pub fn path_for(dir: &Path, r: u32) -> PathBuf {
    dir.join(format!("H{}.txt", 2 * r))
}

pub fn load_or_build(dir: &Path, r: u32) -> Result<(FockVector, CacheStatus)> {
    let built = compute_h(r)?.vector;
    let path = path_for(dir, r);
    if path.exists() {
        let text = std::fs::read_to_string(&path).with_context(|| format!("reading {}", path.display()))?;
        let cached = FockVector::parse(&text).with_context(|| format!("parsing {}", path.display()))?;
        if cached != built {
            bail!("cached {} differs from the rebuilt vector", path.display());
        }
        return Ok((cached, CacheStatus::Hit));
    }
    std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    std::fs::write(&path, built.serialize() + "\n").with_context(|| format!("writing {}", path.display()))?;
    Ok((built, CacheStatus::Built))
}
