//! On-disk result cache. Entries are ASCII text files named by the SHA-256
//! of the operation key:
//!
//! ```text
//! pn-cache 1
//! key <hex digest>
//! created_at <unix seconds>
//!
//! <compact JSON payload>
//! ```
//!
//! Only the JSON value is stored, so every output format renders from the
//! same data whether it came from the cache or a fresh computation.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use serde_json::Value;
use sha2::{Digest, Sha256};

const MAGIC: &str = "pn-cache 1";

pub struct Cache {
    dir: PathBuf,
}

impl Cache {
    pub fn new(dir: &Path) -> Cache {
        Cache { dir: dir.to_path_buf() }
    }

    pub fn key(operation: &str) -> String {
        let mut h = Sha256::new();
        h.update(MAGIC.as_bytes());
        h.update([0]);
        h.update(env!("CARGO_PKG_VERSION").as_bytes());
        h.update([0]);
        h.update(operation.as_bytes());
        hex::encode(h.finalize())
    }

    fn path(&self, key: &str) -> PathBuf {
        self.dir.join(format!("{key}.pnc"))
    }

    /// A stored payload, or `None` for a miss or an unreadable entry.
    pub fn get(&self, key: &str) -> Option<Value> {
        let text = fs::read_to_string(self.path(key)).ok()?;
        let mut lines = text.splitn(5, '\n');
        if lines.next()? != MAGIC || lines.next()? != format!("key {key}") {
            return None;
        }
        lines.next()?.strip_prefix("created_at ")?;
        if !lines.next()?.is_empty() {
            return None;
        }
        serde_json::from_str(lines.next()?).ok()
    }

    /// Writes atomically through a temporary file in the same directory.
    pub fn put(&self, key: &str, value: &Value) -> std::io::Result<()> {
        fs::create_dir_all(&self.dir)?;
        let created = SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0);
        let payload = serde_json::to_string(value).map_err(std::io::Error::other)?;
        let tmp = self.dir.join(format!("{key}.{}.tmp", std::process::id()));
        {
            let mut f = fs::File::create(&tmp)?;
            write!(f, "{MAGIC}\nkey {key}\ncreated_at {created}\n\n{payload}\n")?;
            f.sync_all()?;
        }
        fs::rename(&tmp, self.path(key))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn round_trip_and_corruption() {
        let dir = tempfile::tempdir().unwrap();
        let cache = Cache::new(dir.path());
        let key = Cache::key("genus 18");
        assert!(cache.get(&key).is_none());
        let v = json!({"n": 18, "big": 340282366920938463463374607431768211455u128, "s": "Z/3"});
        cache.put(&key, &v).unwrap();
        assert_eq!(cache.get(&key), Some(v));
        fs::write(cache.path(&key), "garbage").unwrap();
        assert!(cache.get(&key).is_none());
    }

    #[test]
    fn keys_differ_by_operation() {
        assert_ne!(Cache::key("genus 18"), Cache::key("genus 19"));
        assert_eq!(Cache::key("x").len(), 64);
    }
}
