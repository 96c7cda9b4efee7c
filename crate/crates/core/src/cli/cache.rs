//! On-disk persistence of series coefficients.
//!
//! One file per model. The first line is `# config <sha256>`, where the hash
//! covers the config with `terms`, `title` and `printed` removed, so raising
//! the truncation keeps the file valid. Every following line is
//! `index numerator/denominator`, or `e1,e2,...,et numerator/denominator`
//! for multivariate series.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::series::{format_rat_full, parse_rat, Rat};

use super::config::ModelConfig;

/// What happened when a cache file was consulted.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CacheStatus {
    Disabled,
    /// No file yet.
    Miss,
    /// The file already held every requested coefficient.
    Hit,
    /// The first `reused` coefficients came from the file.
    Extended { reused: usize },
    /// Written for a different config; ignored.
    Invalidated,
    /// Unreadable; ignored and recomputed.
    Corrupt(String),
}

/// Hash identifying the mathematical content of a config.
pub fn config_hash(config: &ModelConfig) -> String {
    let mut c = config.clone();
    c.terms = None;
    c.title = None;
    c.printed = None;
    let text = serde_json::to_string(&c).expect("config serializes");
    Sha256::digest(text.as_bytes())
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect()
}

#[derive(Clone, Debug)]
pub struct Cache {
    dir: PathBuf,
}

impl Cache {
    pub fn new(dir: impl Into<PathBuf>) -> Result<Self> {
        let dir = dir.into();
        fs::create_dir_all(&dir)
            .map_err(|e| Error::Config(format!("cache-dir: cannot create {}: {e}", dir.display())))?;
        Ok(Cache { dir })
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    /// File used for `name`; `multi` selects the multivariate file.
    pub fn path(&self, name: &str, multi: bool) -> PathBuf {
        let safe: String = name
            .chars()
            .map(|c| if c.is_ascii_alphanumeric() || c == '-' || c == '_' { c } else { '_' })
            .collect();
        let ext = if multi { "mcoeffs" } else { "coeffs" };
        self.dir.join(format!("{safe}.{ext}"))
    }

    /// Reads the coefficient prefix stored for `name`. Anything unusable is
    /// reported through the status and yields an empty prefix.
    pub fn load(&self, name: &str, hash: &str) -> (Vec<Rat>, CacheStatus) {
        let lines = match self.read(name, hash, false) {
            Read::Lines(l) => l,
            Read::Missing => return (Vec::new(), CacheStatus::Miss),
            Read::Unusable(s) => return (Vec::new(), s),
        };
        let mut out = Vec::with_capacity(lines.len());
        for (i, (key, value)) in lines.into_iter().enumerate() {
            if key != [i as u32] {
                return (Vec::new(), corrupt(name, format!("line {} has index {key:?}, expected {i}", i + 2)));
            }
            out.push(value);
        }
        (out, CacheStatus::Hit)
    }

    /// Multivariate counterpart of [`Cache::load`].
    pub fn load_multi(&self, name: &str, hash: &str) -> (BTreeMap<Vec<u32>, Rat>, CacheStatus) {
        let lines = match self.read(name, hash, true) {
            Read::Lines(l) => l,
            Read::Missing => return (BTreeMap::new(), CacheStatus::Miss),
            Read::Unusable(s) => return (BTreeMap::new(), s),
        };
        let width = lines.first().map_or(0, |(k, _)| k.len());
        if lines.iter().any(|(k, _)| k.len() != width) {
            return (BTreeMap::new(), corrupt(name, "indices of different lengths".into()));
        }
        (lines.into_iter().collect(), CacheStatus::Hit)
    }

    fn read(&self, name: &str, hash: &str, multi: bool) -> Read {
        let path = self.path(name, multi);
        let text = match fs::read_to_string(&path) {
            Ok(t) => t,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Read::Missing,
            Err(e) => return Read::Unusable(corrupt(name, e.to_string())),
        };
        let mut lines = text.lines();
        match lines.next().and_then(|h| h.strip_prefix("# config ")) {
            Some(h) if h == hash => {}
            Some(_) => {
                log::warn!("cache for `{name}` was written for a different config; recomputing");
                return Read::Unusable(CacheStatus::Invalidated);
            }
            None => return Read::Unusable(corrupt(name, "missing header".into())),
        }
        let mut out = Vec::new();
        for (i, line) in lines.enumerate() {
            let parsed = line.split_once(' ').and_then(|(k, v)| {
                let key: Option<Vec<u32>> = k.split(',').map(|x| x.parse().ok()).collect();
                let (n, d) = v.split_once('/')?;
                if n.is_empty() || d.is_empty() {
                    return None;
                }
                Some((key?, parse_rat(v).ok()?))
            });
            match parsed {
                Some(kv) => out.push(kv),
                None => {
                    return Read::Unusable(corrupt(name, format!("line {} is malformed: `{line}`", i + 2)))
                }
            }
        }
        Read::Lines(out)
    }

    pub fn store(&self, name: &str, hash: &str, coeffs: &[Rat]) -> Result<()> {
        let mut text = format!("# config {hash}\n");
        for (i, c) in coeffs.iter().enumerate() {
            text.push_str(&format!("{i} {}\n", format_rat_full(c)));
        }
        self.write(name, false, &text)
    }

    pub fn store_multi(&self, name: &str, hash: &str, terms: &BTreeMap<Vec<u32>, Rat>) -> Result<()> {
        let mut text = format!("# config {hash}\n");
        for (e, c) in terms {
            let key: Vec<String> = e.iter().map(u32::to_string).collect();
            text.push_str(&format!("{} {}\n", key.join(","), format_rat_full(c)));
        }
        self.write(name, true, &text)
    }

    fn write(&self, name: &str, multi: bool, text: &str) -> Result<()> {
        let path = self.path(name, multi);
        let tmp = path.with_extension("tmp");
        fs::write(&tmp, text)
            .and_then(|_| fs::rename(&tmp, &path))
            .map_err(|e| Error::Config(format!("cache-dir: cannot write {}: {e}", path.display())))
    }
}

enum Read {
    Missing,
    Lines(Vec<(Vec<u32>, Rat)>),
    Unusable(CacheStatus),
}

fn corrupt(name: &str, why: String) -> CacheStatus {
    log::warn!("ignoring corrupt cache for `{name}`: {why}; recomputing");
    CacheStatus::Corrupt(why)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::{rat, ratio};

    #[test]
    fn round_trip_is_exact() {
        let dir = tempfile::tempdir().unwrap();
        let cache = Cache::new(dir.path()).unwrap();
        let c = vec![rat(1), ratio(-7, 3), rat(120)];
        cache.store("m", "h", &c).unwrap();
        assert_eq!(cache.load("m", "h"), (c, CacheStatus::Hit));
        assert_eq!(cache.load("m", "other").1, CacheStatus::Invalidated);
        assert_eq!(cache.load("absent", "h").1, CacheStatus::Miss);
        let text = std::fs::read_to_string(cache.path("m", false)).unwrap();
        assert_eq!(text, "# config h\n0 1/1\n1 -7/3\n2 120/1\n");
    }

    #[test]
    fn multivariate_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let cache = Cache::new(dir.path()).unwrap();
        let mut t = BTreeMap::new();
        t.insert(vec![0, 0], rat(1));
        t.insert(vec![1, 2], ratio(5, 2));
        cache.store_multi("m", "h", &t).unwrap();
        assert_eq!(cache.load_multi("m", "h"), (t, CacheStatus::Hit));
    }

    #[test]
    fn corrupt_lines_are_reported() {
        let dir = tempfile::tempdir().unwrap();
        let cache = Cache::new(dir.path()).unwrap();
        for bad in ["# config h\n0 1/1\n1 x/2\n", "# config h\n0 1/1\n2 1/1\n", "garbage\n"] {
            std::fs::write(cache.path("m", false), bad).unwrap();
            let (v, s) = cache.load("m", "h");
            assert!(v.is_empty());
            assert!(matches!(s, CacheStatus::Corrupt(_)), "{bad:?} gave {s:?}");
        }
    }
}
