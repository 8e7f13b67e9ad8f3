//! Active-site identification.
//!
//! For memory `i`, neuron `j` scores the number of other memories whose bit at
//! `j` differs from `M[i][j]`. A score of `m - 1` means the bit is unique to
//! `M[i]` (a strict site). Each memory keeps its top-`r` neurons by score,
//! ignoring neurons that score zero, and is labelled with its own prime.

use crate::error::{Error, Result};
use crate::pattern::MemorySet;

/// One active site of a memory.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Site {
    pub neuron: usize,
    pub score: usize,
}

/// Sites and activation level of one memory.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SiteEntry {
    pub level: u64,
    /// Ranked by score (descending), then neuron index.
    pub sites: Vec<Site>,
}

impl SiteEntry {
    /// Site neurons in ascending index order.
    pub fn neurons_sorted(&self) -> Vec<usize> {
        let mut v: Vec<usize> = self.sites.iter().map(|s| s.neuron).collect();
        v.sort_unstable();
        v
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ActiveSiteMap {
    m: usize,
    entries: Vec<SiteEntry>,
}

impl ActiveSiteMap {
    pub fn m(&self) -> usize {
        self.m
    }

    pub fn entries(&self) -> &[SiteEntry] {
        &self.entries
    }

    pub fn entry(&self, memory: usize) -> Result<&SiteEntry> {
        self.entries.get(memory).ok_or(Error::Index {
            index: memory,
            len: self.m,
        })
    }

    pub fn is_strict(&self, site: &Site) -> bool {
        site.score + 1 == self.m
    }

    /// True when every site of `memory` is strict.
    pub fn fully_strict(&self, memory: usize) -> bool {
        self.entries[memory].sites.iter().all(|s| self.is_strict(s))
    }

    pub const CSV_HEADER: &'static str = "memory_index,level,site_index,score,strict";

    pub fn to_csv(&self) -> String {
        let mut out = String::from(Self::CSV_HEADER);
        out.push('\n');
        for (i, entry) in self.entries.iter().enumerate() {
            for site in &entry.sites {
                out.push_str(&format!(
                    "{i},{},{},{},{}\n",
                    entry.level,
                    site.neuron,
                    site.score,
                    self.is_strict(site)
                ));
            }
        }
        out
    }

    /// Parses a site-map CSV. Memory indices must be contiguous from zero and
    /// every memory needs at least one site; `m` is the number of memories seen.
    pub fn from_csv(text: &str) -> Result<Self> {
        let rows = crate::csv::records(text, Self::CSV_HEADER)?;
        let mut entries: Vec<SiteEntry> = Vec::new();
        let mut strict_flags = Vec::new();
        for (line, f) in rows {
            let memory: usize = crate::csv::field(f[0], line, "memory_index")?;
            let level: u64 = crate::csv::field(f[1], line, "level")?;
            let neuron: usize = crate::csv::field(f[2], line, "site_index")?;
            let score: usize = crate::csv::field(f[3], line, "score")?;
            let strict: bool = crate::csv::field(f[4], line, "strict")?;
            if memory == entries.len() {
                if level != nth_prime(memory) {
                    return Err(Error::Validation(format!(
                        "line {line}: memory {memory} has level {level}, expected {}",
                        nth_prime(memory)
                    )));
                }
                entries.push(SiteEntry {
                    level,
                    sites: Vec::new(),
                });
            } else if memory + 1 != entries.len() || entries[memory].level != level {
                return Err(Error::Validation(format!(
                    "line {line}: memory {memory} out of sequence"
                )));
            }
            if entries[memory].sites.iter().any(|s| s.neuron == neuron) {
                return Err(Error::Validation(format!(
                    "line {line}: site {neuron} repeated for memory {memory}"
                )));
            }
            entries[memory].sites.push(Site { neuron, score });
            strict_flags.push((line, score, strict));
        }
        if entries.is_empty() {
            return Err(Error::Validation("site map has no sites".into()));
        }
        let m = entries.len();
        for (line, score, strict) in strict_flags {
            if score >= m.max(2) || (m > 1 && score == 0) {
                return Err(Error::Validation(format!(
                    "line {line}: score {score} outside 1..={}",
                    m - 1
                )));
            }
            if strict != (score + 1 == m) {
                return Err(Error::Validation(format!(
                    "line {line}: strict flag disagrees with score"
                )));
            }
        }
        Ok(Self { m, entries })
    }
}

/// The `index`-th prime (0-based): 2, 3, 5, 7, ...
pub fn nth_prime(index: usize) -> u64 {
    let mut count = 0;
    let mut candidate = 1u64;
    loop {
        candidate += 1;
        if is_prime(candidate) {
            if count == index {
                return candidate;
            }
            count += 1;
        }
    }
}

fn is_prime(x: u64) -> bool {
    if x < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= x {
        if x % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Number of other memories whose bit at `neuron` differs from memory `memory`'s.
pub fn distinctness(memories: &MemorySet, memory: usize, neuron: usize) -> usize {
    let own = memories.memories()[memory][neuron];
    memories
        .memories()
        .iter()
        .enumerate()
        .filter(|&(k, other)| k != memory && other[neuron] != own)
        .count()
}

/// Selects up to `r` active sites per memory and assigns prime levels.
///
/// With a single memory every neuron counts as strict and the first `r`
/// neurons are chosen.
pub fn identify_sites(memories: &MemorySet, r: usize) -> Result<ActiveSiteMap> {
    if r == 0 {
        return Err(Error::Domain("fragment size r must be at least 1".into()));
    }
    let n = memories.n();
    let m = memories.m();
    let mut entries = Vec::with_capacity(m);
    for i in 0..m {
        let mut ranked: Vec<Site> = (0..n)
            .map(|j| Site {
                neuron: j,
                score: distinctness(memories, i, j),
            })
            .filter(|s| m == 1 || s.score > 0)
            .collect();
        if ranked.is_empty() {
            return Err(Error::Validation(format!(
                "memory {i} has no neuron distinguishing it from the others"
            )));
        }
        ranked.sort_by(|a, b| b.score.cmp(&a.score).then(a.neuron.cmp(&b.neuron)));
        ranked.truncate(r);
        entries.push(SiteEntry {
            level: nth_prime(i),
            sites: ranked,
        });
    }
    Ok(ActiveSiteMap { m, entries })
}

/// Activation level (prime label) of `memory`.
pub fn level_of(map: &ActiveSiteMap, memory: usize) -> Result<u64> {
    map.entry(memory).map(|e| e.level)
}
