//! Append-only JSON-lines store of certificates.

use std::collections::BTreeMap;
use std::fs::{self, OpenOptions};
use std::io::Write;
use std::path::{Path, PathBuf};

use sha2::{Digest, Sha256};

use crate::error::Result;

use super::{
    separate, verify_certificate, ScheduledGroup, SeparabilityCertificate, SeparabilityTarget, SeparationOutcome,
};

/// Content hash of family, target and element.
pub fn cache_key(family: &str, target: &SeparabilityTarget<String>, g: &str) -> String {
    let mut h = Sha256::new();
    h.update(family.as_bytes());
    h.update(b"\n");
    h.update(serde_json::to_string(target).expect("targets serialize").as_bytes());
    h.update(b"\n");
    h.update(g.as_bytes());
    hex::encode(h.finalize())
}

#[derive(Debug)]
pub struct CertificateCache {
    path: PathBuf,
    entries: BTreeMap<String, SeparabilityCertificate>,
    dropped: usize,
}

impl CertificateCache {
    /// Loads the cache. Lines that do not parse are dropped and the file is
    /// rewritten without them.
    pub fn open(path: impl AsRef<Path>) -> Result<CertificateCache> {
        let path = path.as_ref().to_path_buf();
        let mut entries = BTreeMap::new();
        let mut good = Vec::new();
        let mut dropped = 0;
        if path.exists() {
            let text = String::from_utf8_lossy(&fs::read(&path)?).into_owned();
            for line in text.lines().filter(|l| !l.trim().is_empty()) {
                match serde_json::from_str::<SeparabilityCertificate>(line) {
                    Ok(c) => {
                        entries.insert(cache_key(&c.family, &c.target, &c.g), c);
                        good.push(line.to_string());
                    }
                    Err(_) => dropped += 1,
                }
            }
            if dropped > 0 {
                let mut body = good.join("\n");
                if !body.is_empty() {
                    body.push('\n');
                }
                fs::write(&path, body)?;
            }
        }
        Ok(CertificateCache { path, entries, dropped })
    }

    /// Number of unreadable lines discarded on open.
    pub fn dropped(&self) -> usize {
        self.dropped
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, key: &str) -> Option<&SeparabilityCertificate> {
        self.entries.get(key)
    }

    pub fn insert(&mut self, cert: SeparabilityCertificate) -> Result<()> {
        let mut line = serde_json::to_string(&cert)?;
        line.push('\n');
        let mut f = OpenOptions::new().create(true).append(true).open(&self.path)?;
        f.write_all(line.as_bytes())?;
        self.entries.insert(cache_key(&cert.family, &cert.target, &cert.g), cert);
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CacheLookup {
    Hit,
    Miss,
    /// A cached certificate failed re-verification or lay beyond the budget.
    Stale,
}

/// [`separate`] with a cache in front. Cached certificates are re-verified
/// before use.
pub fn separate_cached<S: ScheduledGroup>(
    sg: &S,
    target: &SeparabilityTarget<S::Elem>,
    g: &S::Elem,
    budget: usize,
    cache: &mut CertificateCache,
) -> Result<(SeparationOutcome, CacheLookup)> {
    let key = cache_key(&sg.family(), &target.try_map(|x| Ok(sg.format_elem(x)))?, &sg.format_elem(g));
    let mut lookup = CacheLookup::Miss;
    if let Some(c) = cache.get(&key) {
        if c.stage < budget && verify_certificate(sg, c).is_ok() {
            return Ok((SeparationOutcome::Certified(Box::new(c.clone())), CacheLookup::Hit));
        }
        lookup = CacheLookup::Stale;
    }
    let outcome = separate(sg, target, g, budget)?;
    if let SeparationOutcome::Certified(c) = &outcome {
        cache.insert((**c).clone())?;
    }
    Ok((outcome, lookup))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::separability::Integers;

    #[test]
    fn hit_miss_and_corruption() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("certs.jsonl");
        let mut cache = CertificateCache::open(&path).unwrap();
        let target = SeparabilityTarget::Singleton(0);
        let (a, l) = separate_cached(&Integers, &target, &5, 8, &mut cache).unwrap();
        assert_eq!(l, CacheLookup::Miss);
        let (b, l) = separate_cached(&Integers, &target, &5, 8, &mut cache).unwrap();
        assert_eq!(l, CacheLookup::Hit);
        assert_eq!(a, b);

        let mut text = fs::read_to_string(&path).unwrap();
        text.push_str("{not json\n");
        fs::write(&path, text).unwrap();
        let mut cache = CertificateCache::open(&path).unwrap();
        assert_eq!(cache.dropped(), 1);
        assert_eq!(cache.len(), 1);
        assert!(!fs::read_to_string(&path).unwrap().contains("not json"));
        let (_, l) = separate_cached(&Integers, &target, &5, 8, &mut cache).unwrap();
        assert_eq!(l, CacheLookup::Hit);

        // a forged entry is recomputed
        let forged = fs::read_to_string(&path).unwrap().replace("\"g_image\":1", "\"g_image\":0");
        fs::write(&path, forged).unwrap();
        let mut cache = CertificateCache::open(&path).unwrap();
        let (c, l) = separate_cached(&Integers, &target, &5, 8, &mut cache).unwrap();
        assert_eq!(l, CacheLookup::Stale);
        assert_eq!(c, a);
    }
}
