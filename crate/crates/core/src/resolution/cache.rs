//! JSON cache of resolutions, keyed by algebra descriptor and code version.

use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::{minimal_resolution, MinimalResolution, ResolutionError};
use crate::algebra::{Grade, PresentedSuperalgebra};
use crate::gf::Fe;
use crate::CODE_VERSION;

/// Environment variable naming the cache directory.
pub const CACHE_ENV: &str = "SUPEREXT_CACHE_DIR";

#[derive(Serialize, Deserialize)]
struct CacheFile {
    key: String,
    generators: Vec<Vec<Grade>>,
    // per degree, per generator: sparse (flat index, field code) pairs
    differentials: Vec<Vec<Vec<(u32, u16)>>>,
    kernel_dims: Vec<usize>,
}

pub fn cache_key(alg: &PresentedSuperalgebra) -> String {
    format!("{} version={}", alg.descriptor().canonical(), CODE_VERSION)
}

fn cache_path(dir: &Path, key: &str) -> PathBuf {
    let digest = Sha256::digest(key.as_bytes());
    let hex: String = digest.iter().take(12).map(|b| format!("{b:02x}")).collect();
    dir.join(format!("resolution-{hex}.json"))
}

fn load(alg: &Arc<PresentedSuperalgebra>, path: &Path, key: &str) -> Option<MinimalResolution> {
    let text = fs::read_to_string(path).ok()?;
    let file: CacheFile = serde_json::from_str(&text).ok()?;
    if file.key != key {
        return None;
    }
    let d = alg.dim();
    let diffs = file
        .differentials
        .iter()
        .enumerate()
        .map(|(n, gens)| {
            let len = if n == 0 { 0 } else { file.generators[n - 1].len() * d };
            gens.iter()
                .map(|entries| {
                    let mut v = vec![Fe::ZERO; len];
                    for &(i, c) in entries {
                        v[i as usize] = Fe(c);
                    }
                    v
                })
                .collect()
        })
        .collect();
    Some(MinimalResolution::from_parts(alg, file.generators, diffs, file.kernel_dims))
}

fn store(res: &MinimalResolution, path: &Path, key: &str) -> Result<(), ResolutionError> {
    let file = CacheFile {
        key: key.to_string(),
        generators: (0..=res.max_degree()).map(|n| res.generator_grades(n).to_vec()).collect(),
        differentials: res
            .raw_diffs()
            .iter()
            .map(|gens| {
                gens.iter()
                    .map(|v| {
                        v.iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(i, c)| (i as u32, c.0)).collect()
                    })
                    .collect()
            })
            .collect(),
        kernel_dims: res.kernel_dims().to_vec(),
    };
    let text = serde_json::to_string(&file).map_err(|e| ResolutionError::Cache(e.to_string()))?;
    let tmp = path.with_extension("json.tmp");
    fs::write(&tmp, text).map_err(|e| ResolutionError::Cache(e.to_string()))?;
    fs::rename(&tmp, path).map_err(|e| ResolutionError::Cache(e.to_string()))
}

/// Resolution to `maxdeg`, reusing and extending a cached one in `dir` when
/// present. Without a directory this is `minimal_resolution`.
pub fn cached_resolution(
    alg: &Arc<PresentedSuperalgebra>,
    maxdeg: usize,
    dir: Option<&Path>,
) -> Result<MinimalResolution, ResolutionError> {
    let Some(dir) = dir else {
        return minimal_resolution(alg, maxdeg);
    };
    let key = cache_key(alg);
    let path = cache_path(dir, &key);
    let mut res = match load(alg, &path, &key) {
        Some(r) => r,
        None => MinimalResolution::new(alg)?,
    };
    if res.max_degree() < maxdeg {
        res.extend_to(maxdeg);
        fs::create_dir_all(dir).map_err(|e| ResolutionError::Cache(e.to_string()))?;
        store(&res, &path, &key)?;
    }
    Ok(res)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::make_semidirect;
    use crate::gf::GaloisField;

    #[test]
    fn round_trip_and_extension() {
        let dir = tempfile::tempdir().unwrap();
        let k = GaloisField::prime(3).unwrap();
        let a = make_semidirect(&k, 1, 0, &[]).unwrap();
        let first = cached_resolution(&a, 3, Some(dir.path())).unwrap();
        let second = cached_resolution(&a, 5, Some(dir.path())).unwrap();
        let fresh = minimal_resolution(&a, 5).unwrap();
        assert!(second.same_as(&fresh));
        assert!(first.same_as(&minimal_resolution(&a, 3).unwrap()));
        let loaded = cached_resolution(&a, 4, Some(dir.path())).unwrap();
        assert_eq!(loaded.max_degree(), 5);
        assert_eq!(loaded.exactness_ledger(), fresh.exactness_ledger());
        let y = loaded.apply_differential(3, loaded.differential(4, 0));
        assert!(y.iter().all(|c| c.is_zero()));
    }
}
