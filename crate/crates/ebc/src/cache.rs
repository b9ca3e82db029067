//! Persistent digit cache: one file per canonical key.
//!
//! A cache file stores the highest-precision decimal computed so far for one
//! quantity; a hit at D stored digits serves any request for <= D digits.
//! Writes are atomic (write-temp-then-rename), so concurrent readers never
//! observe a partial entry and concurrent writers degrade to last-writer-wins.
//! Cache trouble is never fatal: callers warn and run uncached.

use std::fs;
use std::path::{Path, PathBuf};

/// File format version; first line of every entry is `EBCv1 <digits>`.
pub const CACHE_VERSION: u32 = 1;

/// Where the cache lives and whether it is on. Resolution order for the
/// directory: explicit flag, EBC_CACHE_DIR, then the platform cache dir.
#[derive(Clone, Debug)]
pub struct CacheConfig {
    pub dir: Option<PathBuf>,
    pub enabled: bool,
}

impl CacheConfig {
    pub fn resolve(flag_dir: Option<PathBuf>, no_cache: bool) -> CacheConfig {
        let dir = flag_dir
            .or_else(|| std::env::var_os("EBC_CACHE_DIR").map(PathBuf::from))
            .or_else(|| dirs::cache_dir().map(|d| d.join("ebc")));
        CacheConfig {
            dir,
            enabled: !no_cache,
        }
    }

    pub fn disabled() -> CacheConfig {
        CacheConfig {
            dir: None,
            enabled: false,
        }
    }

    pub fn at(dir: &Path) -> CacheConfig {
        CacheConfig {
            dir: Some(dir.to_path_buf()),
            enabled: true,
        }
    }
}

/// One cached value: canonical key, stored precision, decimal string.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CacheEntry {
    pub key: String,
    pub digits_stored: u32,
    pub decimal_string: String,
    pub version: u32,
}

/// Canonical key for a quantity: name plus sorted `k=v` parameters, so the
/// key is independent of parameter order.
pub fn canonical_key(quantity: &str, params: &[(&str, String)]) -> String {
    let mut kv: Vec<String> = params.iter().map(|(k, v)| format!("{k}={v}")).collect();
    kv.sort();
    if kv.is_empty() {
        quantity.to_string()
    } else {
        format!("{quantity}|{}", kv.join("|"))
    }
}

fn fnv64(s: &str) -> u64 {
    let mut h: u64 = 0xcbf29ce484222325;
    for b in s.as_bytes() {
        h ^= *b as u64;
        h = h.wrapping_mul(0x100000001b3);
    }
    h
}

fn file_for(dir: &Path, key: &str) -> PathBuf {
    let sanitized: String = key
        .chars()
        .map(|c| if c.is_ascii_alphanumeric() || c == '.' || c == '-' { c } else { '_' })
        .take(120)
        .collect();
    dir.join(format!("{sanitized}-{:016x}.ebc", fnv64(key)))
}

/// Look up `key`; hit only when the stored precision covers `digits`.
pub fn cache_get(cfg: &CacheConfig, key: &str, digits: u32) -> Option<CacheEntry> {
    if !cfg.enabled {
        return None;
    }
    let dir = cfg.dir.as_ref()?;
    let path = file_for(dir, key);
    let content = fs::read_to_string(path).ok()?;
    let mut lines = content.lines();
    let header = lines.next()?;
    let value = lines.next()?.trim().to_string();
    let mut parts = header.split_whitespace();
    let tag = parts.next()?;
    if tag != format!("EBCv{CACHE_VERSION}") {
        return None;
    }
    let stored: u32 = parts.next()?.parse().ok()?;
    if stored < digits || value.is_empty() {
        return None;
    }
    Some(CacheEntry {
        key: key.to_string(),
        digits_stored: stored,
        decimal_string: value,
        version: CACHE_VERSION,
    })
}

/// Store an entry atomically. Returns false (after a warning) when the cache
/// directory is unusable; callers proceed uncached.
pub fn cache_put(cfg: &CacheConfig, entry: &CacheEntry) -> bool {
    if !cfg.enabled {
        return false;
    }
    let Some(dir) = cfg.dir.as_ref() else {
        return false;
    };
    let attempt = || -> std::io::Result<()> {
        fs::create_dir_all(dir)?;
        // keep the better entry when one already exists
        if let Some(existing) = cache_get(cfg, &entry.key, 0) {
            if existing.digits_stored > entry.digits_stored {
                return Ok(());
            }
        }
        let tmp = dir.join(format!(
            ".tmp-{}-{}",
            std::process::id(),
            std::time::SystemTime::now()
                .duration_since(std::time::UNIX_EPOCH)
                .map(|d| d.as_nanos())
                .unwrap_or(0)
        ));
        fs::write(
            &tmp,
            format!(
                "EBCv{CACHE_VERSION} {}\n{}\n",
                entry.digits_stored, entry.decimal_string
            ),
        )?;
        fs::rename(&tmp, file_for(dir, &entry.key))?;
        Ok(())
    };
    match attempt() {
        Ok(()) => true,
        Err(e) => {
            eprintln!(
                "warning: cache write failed ({e}); continuing uncached (dir: {})",
                dir.display()
            );
            false
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn entry(key: &str, digits: u32, value: &str) -> CacheEntry {
        CacheEntry {
            key: key.to_string(),
            digits_stored: digits,
            decimal_string: value.to_string(),
            version: CACHE_VERSION,
        }
    }

    #[test]
    fn canonical_key_parameter_order_independent() {
        let a = canonical_key("ebc", &[("q", "7".into()), ("a", "3".into())]);
        let b = canonical_key("ebc", &[("a", "3".into()), ("q", "7".into())]);
        assert_eq!(a, b);
        assert_eq!(a, "ebc|a=3|q=7");
    }

    #[test]
    fn prefix_serving_contract() {
        let tmp = tempfile::tempdir().unwrap();
        let cfg = CacheConfig::at(tmp.path());
        assert!(cache_get(&cfg, "gamma", 10).is_none()); // empty cache: miss
        assert!(cache_put(&cfg, &entry("gamma", 100, "0.5772156649")));
        let hit = cache_get(&cfg, "gamma", 60).unwrap();
        assert_eq!(hit.digits_stored, 100);
        assert!(cache_get(&cfg, "gamma", 150).is_none()); // too few stored digits
    }

    #[test]
    fn higher_precision_entry_is_kept() {
        let tmp = tempfile::tempdir().unwrap();
        let cfg = CacheConfig::at(tmp.path());
        cache_put(&cfg, &entry("pi", 100, "3.14-hundred"));
        cache_put(&cfg, &entry("pi", 40, "3.14-forty"));
        let hit = cache_get(&cfg, "pi", 10).unwrap();
        assert_eq!(hit.digits_stored, 100);
        assert_eq!(hit.decimal_string, "3.14-hundred");
    }

    #[test]
    fn disabled_cache_noops() {
        let cfg = CacheConfig::disabled();
        assert!(!cache_put(&cfg, &entry("x", 10, "1")));
        assert!(cache_get(&cfg, "x", 10).is_none());
    }

    #[test]
    fn unwritable_directory_warns_not_fails() {
        let cfg = CacheConfig::at(Path::new("/proc/definitely/not/writable"));
        assert!(!cache_put(&cfg, &entry("x", 10, "1")));
    }

    #[test]
    fn interleaved_writers_leave_valid_entries() {
        let tmp = tempfile::tempdir().unwrap();
        let dir = tmp.path().to_path_buf();
        let writers: Vec<_> = (0..4)
            .map(|w| {
                let dir = dir.clone();
                std::thread::spawn(move || {
                    let cfg = CacheConfig::at(&dir);
                    for i in 0..50 {
                        let e = entry("contended", 50, &format!("0.{w}{i:03}"));
                        cache_put(&cfg, &e);
                    }
                })
            })
            .collect();
        let reader = {
            let dir = dir.clone();
            std::thread::spawn(move || {
                let cfg = CacheConfig::at(&dir);
                let mut seen = 0;
                for _ in 0..200 {
                    if let Some(hit) = cache_get(&cfg, "contended", 10) {
                        // never a partial entry
                        assert_eq!(hit.digits_stored, 50);
                        assert!(hit.decimal_string.starts_with("0."));
                        seen += 1;
                    }
                }
                seen
            })
        };
        for w in writers {
            w.join().unwrap();
        }
        reader.join().unwrap();
        let final_hit = cache_get(&CacheConfig::at(&dir), "contended", 50).unwrap();
        assert!(final_hit.decimal_string.starts_with("0."));
    }
}
