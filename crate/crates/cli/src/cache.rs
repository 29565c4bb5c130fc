//! On-disk persistence of entropy values between runs.
//!
//! One file per (system digest, flavor). The first line is a version
//! header; each further line is `<compact JSON subset>\t<hex f64 bits>`.
//! Files with another header are ignored.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use entropylab::entropy::EntropyFunction;
use entropylab::group::Group;

pub const HEADER: &str = "entropylab-cache v1";
pub const ENV: &str = "ENTROPYLAB_CACHE_DIR";

pub struct Cache {
    path: PathBuf,
}

impl Cache {
    pub fn from_env(digest: &str, flavor: &str) -> Option<Cache> {
        let dir = std::env::var_os(ENV)?;
        Some(Cache {
            path: Path::new(&dir).join(format!("{digest}-{flavor}.cache")),
        })
    }

    /// Preloads whatever the file holds; unreadable or stale files are
    /// skipped silently.
    pub fn load_into(&self, group: &Group, h: &EntropyFunction) {
        let Ok(text) = fs::read_to_string(&self.path) else {
            return;
        };
        let mut lines = text.lines();
        if lines.next() != Some(HEADER) {
            return;
        }
        let entries = lines.filter_map(|line| {
            let (key, bits) = line.split_once('\t')?;
            let set = group.parse_subset(&serde_json::from_str(key).ok()?).ok()?;
            let bytes: [u8; 8] = hex::decode(bits).ok()?.try_into().ok()?;
            Some((set, f64::from_bits(u64::from_be_bytes(bytes))))
        });
        h.preload(entries);
    }

    pub fn store(&self, group: &Group, h: &EntropyFunction) -> std::io::Result<()> {
        if let Some(dir) = self.path.parent() {
            fs::create_dir_all(dir)?;
        }
        let tmp = self.path.with_extension("tmp");
        let mut file = fs::File::create(&tmp)?;
        writeln!(file, "{HEADER}")?;
        for (set, v) in h.cache_entries() {
            writeln!(
                file,
                "{}\t{}",
                group.encode_subset(&set),
                hex::encode(v.to_bits().to_be_bytes())
            )?;
        }
        file.sync_all()?;
        fs::rename(tmp, &self.path)
    }
}
