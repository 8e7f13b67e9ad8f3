//! Spins, bipolar patterns and memory sets.
//!
//! Text format: one pattern per line, `1` for +1 and `0` for -1, no separators.

use std::collections::HashSet;
use std::fmt;

use crate::error::{Error, Result};

/// A neuron state. Always exactly `-1` or `+1`.
pub type Spin = i8;

/// Signum with the tie rule `sgn(0) = +1`.
#[inline]
pub fn sgn(x: i64) -> Spin {
    if x < 0 {
        -1
    } else {
        1
    }
}

/// A length-n pattern over {-1, +1}.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BipolarVector(Vec<Spin>);

impl BipolarVector {
    pub fn new(values: Vec<Spin>) -> Result<Self> {
        if let Some(pos) = values.iter().position(|&v| v != 1 && v != -1) {
            return Err(Error::Validation(format!(
                "element {pos} is {}, expected -1 or +1",
                values[pos]
            )));
        }
        Ok(Self(values))
    }

    /// Parses the compact `1`/`0` rendering. `line` is only used for error reporting.
    pub fn parse_line(text: &str, line: usize) -> Result<Self> {
        let mut values = Vec::with_capacity(text.len());
        for (col, ch) in text.chars().enumerate() {
            match ch {
                '1' => values.push(1),
                '0' => values.push(-1),
                other => {
                    return Err(Error::Parse {
                        line,
                        message: format!("unexpected character {other:?} at column {}", col + 1),
                    })
                }
            }
        }
        if values.is_empty() {
            return Err(Error::Parse {
                line,
                message: "empty pattern".into(),
            });
        }
        Ok(Self(values))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[Spin] {
        &self.0
    }

    pub fn get(&self, index: usize) -> Spin {
        self.0[index]
    }

    pub fn negated(&self) -> Self {
        Self(self.0.iter().map(|&v| -v).collect())
    }

    /// Reorders entries so that `result[i] = self[perm[i]]`.
    pub fn permuted(&self, perm: &[usize]) -> Self {
        Self(perm.iter().map(|&p| self.0[p]).collect())
    }
}

impl fmt::Display for BipolarVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &v in &self.0 {
            f.write_str(if v > 0 { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl std::ops::Index<usize> for BipolarVector {
    type Output = Spin;

    fn index(&self, index: usize) -> &Spin {
        &self.0[index]
    }
}

/// Number of positions at which `a` and `b` differ.
pub fn hamming(a: &BipolarVector, b: &BipolarVector) -> Result<usize> {
    if a.len() != b.len() {
        return Err(Error::Dimension {
            expected: a.len(),
            actual: b.len(),
        });
    }
    Ok(a.0.iter().zip(&b.0).filter(|(x, y)| x != y).count())
}

/// A non-empty list of pairwise distinct memories over `n ≥ 2` neurons.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MemorySet {
    n: usize,
    memories: Vec<BipolarVector>,
}

impl MemorySet {
    pub fn new(memories: Vec<BipolarVector>) -> Result<Self> {
        let Some(first) = memories.first() else {
            return Err(Error::Validation("memory set is empty".into()));
        };
        let n = first.len();
        if n < 2 {
            return Err(Error::Validation(format!(
                "memories need at least 2 neurons, got {n}"
            )));
        }
        let mut seen = HashSet::with_capacity(memories.len());
        for (i, mem) in memories.iter().enumerate() {
            if mem.len() != n {
                return Err(Error::Dimension {
                    expected: n,
                    actual: mem.len(),
                });
            }
            if !seen.insert(mem) {
                return Err(Error::Validation(format!(
                    "memory {i} duplicates an earlier memory"
                )));
            }
        }
        Ok(Self { n, memories })
    }

    /// Parses the pattern text format. Blank lines are skipped; line numbers
    /// in errors are 1-based.
    pub fn parse(text: &str) -> Result<Self> {
        let mut memories = Vec::new();
        let mut width = None;
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() {
                continue;
            }
            let v = BipolarVector::parse_line(line, idx + 1)?;
            match width {
                None => width = Some(v.len()),
                Some(w) if w != v.len() => {
                    return Err(Error::Parse {
                        line: idx + 1,
                        message: format!("pattern has {} neurons, expected {w}", v.len()),
                    })
                }
                Some(_) => {}
            }
            memories.push(v);
        }
        Self::new(memories)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::with_capacity(self.memories.len() * (self.n + 1));
        for mem in &self.memories {
            out.push_str(&mem.to_string());
            out.push('\n');
        }
        out
    }

    /// Neuron count.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Memory count.
    pub fn m(&self) -> usize {
        self.memories.len()
    }

    pub fn memories(&self) -> &[BipolarVector] {
        &self.memories
    }

    pub fn get(&self, index: usize) -> Option<&BipolarVector> {
        self.memories.get(index)
    }

    /// Index of the stored memory equal to `pattern`, if any.
    pub fn find(&self, pattern: &BipolarVector) -> Option<usize> {
        self.memories.iter().position(|m| m == pattern)
    }
}
