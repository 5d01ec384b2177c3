//! Content-addressed store for minimal free resolutions.
//!
//! Entries live in `$GSTAB_CACHE_DIR/<key>.json`, where the key hashes the ring, the module
//! presentation and the length bound. Writers hold an exclusive lock on `<key>.lock` and
//! publish by rename; readers hold a shared lock. A fetched entry is trusted only after its
//! checksum, its shape and its first differential check out against the module.

use std::fs::{self, File, OpenOptions};
use std::io::Write;
use std::path::{Path, PathBuf};

use gstab_core::{free_resolution, Budget, Field, FreeResolution, Module, Monomial, Result, Scalar, Term};
use num_bigint::BigInt;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

pub const ENV_VAR: &str = "GSTAB_CACHE_DIR";
const FORMAT: u64 = 1;

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// Canonical description of everything the resolution depends on.
pub fn resolution_key(m: &Module, length_bound: Option<usize>) -> String {
    let ring = m.ctx().ring();
    let mut s = format!(
        "gstab-resolution/{FORMAT}\nfield {}\norder {:?}\nvars {} | {}\n",
        ring.field(),
        ring.order(),
        ring.names()[..ring.nbase()].join(" "),
        ring.names()[ring.nbase()..].join(" ")
    );
    for j in m.ctx().base_relations() {
        s.push_str(&format!("baserel {j}\n"));
    }
    for t in m.twists() {
        s.push_str(&format!("gen {t}\n"));
    }
    for r in m.relations() {
        s.push_str(&format!("rel {}\n", m.ambient().display(r)));
    }
    s.push_str(&format!("bound {length_bound:?}\n"));
    sha256_hex(s.as_bytes())
}

pub struct ResolutionCache {
    dir: Option<PathBuf>,
    /// Messages about discarded entries, for the caller to surface.
    pub warnings: Vec<String>,
}

impl ResolutionCache {
    pub fn disabled() -> ResolutionCache {
        ResolutionCache { dir: None, warnings: Vec::new() }
    }

    pub fn at(dir: impl Into<PathBuf>) -> ResolutionCache {
        ResolutionCache { dir: Some(dir.into()), warnings: Vec::new() }
    }

    /// Enabled when `GSTAB_CACHE_DIR` is set and `no_cache` is false.
    pub fn from_env(no_cache: bool) -> ResolutionCache {
        match std::env::var_os(ENV_VAR) {
            Some(d) if !no_cache && !d.is_empty() => ResolutionCache::at(d),
            _ => ResolutionCache::disabled(),
        }
    }

    pub fn is_enabled(&self) -> bool {
        self.dir.is_some()
    }

    fn paths(&self, key: &str) -> Option<(PathBuf, PathBuf)> {
        let d = self.dir.as_ref()?;
        Some((d.join(format!("{key}.json")), d.join(format!("{key}.lock"))))
    }

    /// Cached resolution if present and sound, otherwise computed and stored.
    pub fn resolve(&mut self, m: &Module, length_bound: Option<usize>, budget: &Budget) -> Result<FreeResolution> {
        let key = resolution_key(m, length_bound);
        if let Some(res) = self.fetch(&key, m, budget) {
            return Ok(res);
        }
        let res = free_resolution(m, length_bound, budget)?;
        self.store(&key, &res);
        Ok(res)
    }

    pub fn fetch(&mut self, key: &str, m: &Module, budget: &Budget) -> Option<FreeResolution> {
        let (path, lock) = self.paths(key)?;
        if !path.exists() {
            return None;
        }
        let text = {
            let guard = open_lock(&lock).ok()?;
            guard.lock_shared().ok()?;
            let t = fs::read_to_string(&path);
            let _ = guard.unlock();
            t
        };
        let outcome = text.map_err(|e| e.to_string()).and_then(|t| decode_entry(&t, key, m, budget));
        match outcome {
            Ok(res) => Some(res),
            Err(why) => {
                self.warnings.push(format!("discarding cache entry {}: {why}", path.display()));
                let _ = fs::remove_file(&path);
                None
            }
        }
    }

    pub fn store(&mut self, key: &str, res: &FreeResolution) {
        let Some((path, lock)) = self.paths(key) else { return };
        if let Err(e) = write_entry(&path, &lock, key, res) {
            self.warnings.push(format!("could not write cache entry {}: {e}", path.display()));
        }
    }
}

fn open_lock(lock: &Path) -> std::io::Result<File> {
    OpenOptions::new().create(true).truncate(false).write(true).open(lock)
}

fn write_entry(path: &Path, lock: &Path, key: &str, res: &FreeResolution) -> std::io::Result<()> {
    if let Some(d) = path.parent() {
        fs::create_dir_all(d)?;
    }
    let payload = encode_resolution(res);
    let payload_text = serde_json::to_string(&payload).expect("json");
    let doc = json!({
        "format": FORMAT,
        "key": key,
        "checksum": sha256_hex(payload_text.as_bytes()),
        "payload": payload_text,
    });
    let guard = open_lock(lock)?;
    guard.lock()?;
    let tmp = path.with_extension(format!("tmp{}", std::process::id()));
    let result = (|| {
        let mut f = File::create(&tmp)?;
        f.write_all(serde_json::to_string(&doc).expect("json").as_bytes())?;
        f.sync_all()?;
        fs::rename(&tmp, path)
    })();
    let _ = guard.unlock();
    result
}

fn encode_resolution(res: &FreeResolution) -> Value {
    let twists: Vec<Value> = (0..=res.length())
        .map(|k| Value::from(res.twists(k).iter().map(|t| json!([t.fiber, t.base])).collect::<Vec<_>>()))
        .collect();
    let maps: Vec<Value> = (1..=res.length())
        .map(|k| {
            Value::from(
                res.differential(k)
                    .iter()
                    .map(|v| {
                        Value::from(v.terms().iter().map(|t| json!([t.comp, t.mon.exps(), t.coeff.to_string()])).collect::<Vec<_>>())
                    })
                    .collect::<Vec<_>>(),
            )
        })
        .collect();
    json!({ "twists": twists, "maps": maps, "complete": res.is_complete() })
}

fn parse_scalar(field: Field, s: &str) -> std::result::Result<Scalar, String> {
    let (n, d) = s.split_once('/').unwrap_or((s, "1"));
    let n: BigInt = n.parse().map_err(|_| format!("bad coefficient {s:?}"))?;
    let d: BigInt = d.parse().map_err(|_| format!("bad coefficient {s:?}"))?;
    field.from_ratio(&n, &d).map_err(|e| e.to_string())
}

/// Decodes and validates a cache entry for `m`; any defect is reported as a message.
pub fn decode_entry(text: &str, key: &str, m: &Module, budget: &Budget) -> std::result::Result<FreeResolution, String> {
    let doc: Value = serde_json::from_str(text).map_err(|e| format!("unreadable: {e}"))?;
    if doc["format"] != json!(FORMAT) || doc["key"] != json!(key) {
        return Err("format or key mismatch".into());
    }
    let payload_text = doc["payload"].as_str().ok_or("missing payload")?;
    if doc["checksum"].as_str() != Some(sha256_hex(payload_text.as_bytes()).as_str()) {
        return Err("checksum mismatch".into());
    }
    let payload: Value = serde_json::from_str(payload_text).map_err(|e| format!("payload: {e}"))?;
    let ctx = m.ctx();
    let ring = ctx.ring();
    let field = ring.field();
    let nv = ring.nvars();
    let bad = || "malformed payload".to_string();
    let twists: Vec<Vec<gstab_core::Bidegree>> = payload["twists"]
        .as_array()
        .ok_or_else(bad)?
        .iter()
        .map(|level| {
            level
                .as_array()
                .ok_or_else(bad)?
                .iter()
                .map(|t| {
                    let f = t[0].as_i64().ok_or_else(bad)?;
                    let b = t[1].as_i64().ok_or_else(bad)?;
                    Ok(gstab_core::Bidegree::new(i32::try_from(f).map_err(|_| bad())?, i32::try_from(b).map_err(|_| bad())?))
                })
                .collect::<std::result::Result<Vec<_>, String>>()
        })
        .collect::<std::result::Result<_, String>>()?;
    if twists.is_empty() {
        return Err(bad());
    }
    let mut maps = Vec::new();
    for (k, level) in payload["maps"].as_array().ok_or_else(bad)?.iter().enumerate() {
        let target = twists.get(k).ok_or_else(bad)?;
        let free = gstab_core::FreeModule::new(ring, target.clone());
        let mut cols = Vec::new();
        for col in level.as_array().ok_or_else(bad)? {
            let mut terms = Vec::new();
            for t in col.as_array().ok_or_else(bad)? {
                let comp = t[0].as_u64().ok_or_else(bad)? as usize;
                if comp >= target.len() {
                    return Err(bad());
                }
                let exps: Vec<u16> = t[1]
                    .as_array()
                    .ok_or_else(bad)?
                    .iter()
                    .map(|e| e.as_u64().and_then(|e| u16::try_from(e).ok()).ok_or_else(bad))
                    .collect::<std::result::Result<_, String>>()?;
                if exps.len() != nv {
                    return Err(bad());
                }
                let coeff = parse_scalar(field, t[2].as_str().ok_or_else(bad)?)?;
                if coeff.is_zero() {
                    return Err(bad());
                }
                terms.push(Term { comp, mon: Monomial::from_exponents(&exps), coeff });
            }
            cols.push(free.vector(terms));
        }
        maps.push(cols);
    }
    let complete = payload["complete"].as_bool().ok_or_else(bad)?;
    let res = FreeResolution::from_parts(ctx, twists, maps, complete).map_err(|e| e.to_string())?;
    // The entry must present the module it is filed under.
    let pruned = m.pruned();
    if res.twists(0) != pruned.twists() {
        return Err("generator degrees do not match the module".into());
    }
    let image = if res.length() > 0 { res.differential(1).to_vec() } else { Vec::new() };
    let presented = gstab_core::Module::new(ctx, pruned.twists().to_vec(), image).map_err(|e| e.to_string())?;
    let same = presented.relation_gb(budget).map_err(|e| e.to_string())?;
    let want = pruned.relation_gb(budget).map_err(|e| e.to_string())?;
    let sub = |a: &gstab_core::GroebnerBasis, b: &gstab_core::GroebnerBasis| b.elems().iter().all(|v| a.contains(v));
    if !(sub(same, want) && sub(want, same)) {
        return Err("first differential does not present the module".into());
    }
    Ok(res)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::format::parse_module_file;

    fn module(src: &str) -> Module {
        parse_module_file(src).unwrap().module()
    }

    const M: &str = "field Q\nbasevars y\nfibervars x1 x2\ngens (0)\nrels\n[x1^2]\n[y*x1*x2]\n";

    #[test]
    fn store_then_fetch() {
        let dir = tempfile::tempdir().unwrap();
        let m = module(M);
        let b = Budget::unlimited();
        let mut c = ResolutionCache::at(dir.path());
        let first = c.resolve(&m, None, &b).unwrap();
        let key = resolution_key(&m, None);
        let again = c.fetch(&key, &m, &b).expect("hit");
        assert_eq!(first, again);
        assert_eq!(again.betti_table().unwrap(), free_resolution(&m, None, &b).unwrap().betti_table().unwrap());
        assert!(c.warnings.is_empty());
    }

    #[test]
    fn distinct_inputs_distinct_keys() {
        let a = module(M);
        let b = module("field Q\nbasevars y\nfibervars x1 x2\ngens (0)\nrels\n[x1^2]\n[y*x2^2]\n");
        assert_ne!(resolution_key(&a, None), resolution_key(&b, None));
        assert_ne!(resolution_key(&a, None), resolution_key(&a, Some(2)));
    }

    #[test]
    fn corrupt_entries_are_discarded() {
        let dir = tempfile::tempdir().unwrap();
        let m = module(M);
        let b = Budget::unlimited();
        let key = resolution_key(&m, None);
        let mut c = ResolutionCache::at(dir.path());
        c.resolve(&m, None, &b).unwrap();
        let path = dir.path().join(format!("{key}.json"));
        let text = fs::read_to_string(&path).unwrap();
        fs::write(&path, text.replace("x", "y").replacen('1', "2", 3)).unwrap();
        assert!(c.fetch(&key, &m, &b).is_none());
        assert_eq!(c.warnings.len(), 1);
        assert!(!path.exists());
        // A well-formed entry filed under the wrong module is refused as well.
        let other = module("field Q\nbasevars y\nfibervars x1 x2\ngens (0)\nrels\n[x1^3]\n");
        let mut c2 = ResolutionCache::at(dir.path());
        c2.store(&key, &free_resolution(&other, None, &b).unwrap());
        assert!(c2.fetch(&key, &m, &b).is_none());
        let fresh = c2.resolve(&m, None, &b).unwrap();
        assert_eq!(fresh, free_resolution(&m, None, &b).unwrap());
    }
}
