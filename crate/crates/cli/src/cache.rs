//! On-disk results cache: one text file per (table digest, theory, degree,
//! modulus).

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use qhom_core::verify::{CacheKey, ResultCache};
use qhom_core::{Chain, GroupSummary, Int, Theory};

pub const ENV: &str = "QHOM_CACHE";
pub const DEFAULT_DIR: &str = ".qhom-cache";

/// A stored result.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Entry {
    pub key: CacheKey,
    pub group: GroupSummary,
    pub generators: Vec<String>,
}

impl Entry {
    pub fn to_text(&self) -> String {
        let torsion: Vec<String> = self.group.torsion.iter().map(Int::to_string).collect();
        let mut s = format!(
            "digest {}\ntheory {}\nn {}\nmodulus {}\nfree_rank {}\ntorsion {}\n",
            self.key.digest,
            self.key.theory,
            self.key.n,
            self.key.modulus,
            self.group.free_rank,
            torsion.join(" ")
        );
        for g in &self.generators {
            s.push_str("generator ");
            s.push_str(g);
            s.push('\n');
        }
        s
    }

    pub fn parse(text: &str) -> Option<Entry> {
        let mut digest = None;
        let mut theory = None;
        let mut n = None;
        let mut modulus = None;
        let mut free_rank = None;
        let mut torsion = None;
        let mut generators = Vec::new();
        for line in text.lines() {
            let (field, value) = line.split_once(' ').unwrap_or((line, ""));
            match field {
                "digest" => digest = Some(value.to_string()),
                "theory" => theory = value.parse::<Theory>().ok(),
                "n" => n = value.parse().ok(),
                "modulus" => modulus = value.parse().ok(),
                "free_rank" => free_rank = value.parse().ok(),
                "torsion" => {
                    torsion = value
                        .split_whitespace()
                        .map(|d| d.parse::<Int>().ok())
                        .collect::<Option<Vec<_>>>()
                }
                "generator" => generators.push(value.to_string()),
                _ => return None,
            }
        }
        Some(Entry {
            key: CacheKey { digest: digest?, theory: theory?, n: n?, modulus: modulus? },
            group: GroupSummary { free_rank: free_rank?, torsion: torsion? },
            generators,
        })
    }
}

pub struct DiskCache {
    dir: PathBuf,
}

impl DiskCache {
    /// `flag`, else `$QHOM_CACHE`, else `./.qhom-cache`.
    pub fn locate(flag: Option<&Path>) -> PathBuf {
        flag.map(Path::to_path_buf)
            .or_else(|| std::env::var_os(ENV).map(PathBuf::from))
            .unwrap_or_else(|| PathBuf::from(DEFAULT_DIR))
    }

    pub fn new(dir: impl Into<PathBuf>) -> Self {
        DiskCache { dir: dir.into() }
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn path(&self, key: &CacheKey) -> PathBuf {
        self.dir.join(format!("{}-{}-n{}-m{}.txt", key.digest, key.theory, key.n, key.modulus))
    }

    pub fn read(&self, key: &CacheKey) -> Option<Entry> {
        let text = fs::read_to_string(self.path(key)).ok()?;
        Entry::parse(&text).filter(|e| e.key == *key)
    }

    /// Write via a temporary file in the same directory and an atomic rename.
    pub fn write(&self, entry: &Entry) -> Result<()> {
        fs::create_dir_all(&self.dir).with_context(|| format!("creating {}", self.dir.display()))?;
        let mut tmp = tempfile::NamedTempFile::new_in(&self.dir)?;
        tmp.write_all(entry.to_text().as_bytes())?;
        tmp.as_file().sync_all()?;
        tmp.persist(self.path(&entry.key))?;
        Ok(())
    }

    pub fn entries(&self) -> Result<Vec<Entry>> {
        let mut out = Vec::new();
        let Ok(dir) = fs::read_dir(&self.dir) else { return Ok(out) };
        for item in dir {
            let path = item?.path();
            if path.extension().is_some_and(|e| e == "txt") {
                if let Some(e) = fs::read_to_string(&path).ok().and_then(|t| Entry::parse(&t)) {
                    out.push(e);
                }
            }
        }
        out.sort_by(|a, b| a.key.cmp(&b.key));
        Ok(out)
    }

    /// Remove every cache file; returns how many were removed.
    pub fn clear(&self) -> Result<usize> {
        let mut removed = 0;
        let Ok(dir) = fs::read_dir(&self.dir) else { return Ok(0) };
        for item in dir {
            let path = item?.path();
            if path.extension().is_some_and(|e| e == "txt") {
                fs::remove_file(&path)?;
                removed += 1;
            }
        }
        Ok(removed)
    }
}

impl ResultCache for DiskCache {
    fn load(&self, key: &CacheKey) -> Option<GroupSummary> {
        self.read(key).map(|e| e.group)
    }

    fn store(&self, key: &CacheKey, group: &GroupSummary, generators: &[Chain]) {
        let entry = Entry {
            key: key.clone(),
            group: group.clone(),
            generators: generators.iter().map(Chain::to_string).collect(),
        };
        // a failed write only costs a recomputation later
        let _ = self.write(&entry);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn entry() -> Entry {
        Entry {
            key: CacheKey { digest: "ab12".into(), theory: Theory::Quandle, n: 3, modulus: 0 },
            group: GroupSummary::from_cyclic(1, &[Int::from(3)]),
            generators: vec!["+1*(0,1,0) +1*(0,2,1)".into(), "+1*(0,0,0)".into()],
        }
    }

    #[test]
    fn text_round_trip() {
        let e = entry();
        assert_eq!(Entry::parse(&e.to_text()), Some(e));
        assert_eq!(Entry::parse("nonsense 1\n"), None);
    }

    #[test]
    fn write_read_clear() {
        let dir = tempfile::tempdir().unwrap();
        let cache = DiskCache::new(dir.path().join("c"));
        let e = entry();
        assert!(cache.read(&e.key).is_none());
        cache.write(&e).unwrap();
        assert_eq!(cache.read(&e.key), Some(e.clone()));
        assert_eq!(cache.entries().unwrap(), vec![e]);
        assert_eq!(cache.clear().unwrap(), 1);
        assert!(cache.entries().unwrap().is_empty());
    }
}
