//! On-disk cache of growth tables, keyed by a SHA-256 of the inputs.

use std::fs;
use std::path::{Path, PathBuf};

use num_bigint::BigUint;
use qgrowth_core::growth::{GrowthSequence, GrowthValue};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

/// Canonical description of a growth computation. File-backed rings
/// include a digest of the file so edits invalidate old entries.
pub fn cache_key(
    ring_spec: &str,
    ring_arg: &str,
    generator: &str,
    dimfn: &str,
    n: usize,
) -> String {
    let mut text = format!("ring={ring_spec}\ngen={generator}\ndimfn={dimfn}\nn={n}\n");
    if let Some(bytes) = ring_file(ring_arg).and_then(|p| fs::read(p).ok()) {
        text.push_str(&format!("file={}\n", hex::encode(Sha256::digest(&bytes))));
    }
    hex::encode(Sha256::digest(text.as_bytes()))
}

fn ring_file(arg: &str) -> Option<PathBuf> {
    let path = arg.strip_prefix("file:").unwrap_or(arg);
    let p = Path::new(path);
    p.is_file().then(|| p.to_path_buf())
}

fn entry_path(dir: &Path, key: &str) -> PathBuf {
    dir.join("growth").join(format!("{key}.json"))
}

/// Values of a cached table, or `None` on a miss or an unreadable entry.
pub fn load(dir: &Path, key: &str) -> Option<Vec<GrowthValue>> {
    let text = fs::read_to_string(entry_path(dir, key)).ok()?;
    let v: Value = serde_json::from_str(&text).ok()?;
    if v.get("key")?.as_str()? != key {
        return None;
    }
    let exact = v.get("exact")?.as_bool()?;
    v.get("values")?
        .as_array()?
        .iter()
        .map(|x| {
            let s = x.as_str()?;
            if exact {
                s.parse::<BigUint>().ok().map(GrowthValue::Exact)
            } else {
                s.parse::<f64>().ok().map(GrowthValue::Real)
            }
        })
        .collect()
}

pub fn store(dir: &Path, key: &str, seq: &GrowthSequence) -> std::io::Result<()> {
    let path = entry_path(dir, key);
    fs::create_dir_all(path.parent().unwrap())?;
    let exact = seq.values.iter().all(|v| v.as_exact().is_some());
    // `{:e}` on f64 is the shortest round-tripping form, so reloading is exact.
    let values: Vec<String> = seq.values.iter().map(|v| v.to_string()).collect();
    let body = json!({ "key": key, "exact": exact, "values": values });
    let tmp = path.with_extension("tmp");
    fs::write(&tmp, serde_json::to_string(&body)? + "\n")?;
    fs::rename(tmp, path)
}
