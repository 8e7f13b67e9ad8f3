//! Exact operation counts for retrieval sweeps.
//!
//! A classical sweep stimulates every subset of up to `r` neurons out of `n`
//! with every bipolar fragment: `Σ_{i=1..r} C(n, i)·2^i` runs. Restricting the
//! stimulation points to a memory's `r` active sites gives
//! `Σ_{i=1..r} C(r, i)·2^i = 3^r − 1`.

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Exact `n` choose `k`.
pub fn binomial(n: u64, k: u64) -> Result<BigUint> {
    if k > n {
        return Err(Error::Domain(format!("binomial({n}, {k}) needs k <= n")));
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        // acc holds C(n, i) here, so the division is exact.
        acc = acc * (n - i) / (i + 1);
    }
    Ok(acc)
}

fn weighted_subset_sum(pool: u64, r: u64) -> Result<BigUint> {
    let mut total = BigUint::zero();
    for i in 1..=r {
        total += binomial(pool, i)? << i;
    }
    Ok(total)
}

/// Runs needed by a classical sweep over all site subsets of size `1..=r`.
pub fn cost_classical(n: u64, r: u64) -> Result<BigUint> {
    if r == 0 {
        return Err(Error::Domain("fragment size r must be at least 1".into()));
    }
    if r > n {
        return Err(Error::Domain(format!(
            "fragment size {r} exceeds network size {n}"
        )));
    }
    weighted_subset_sum(n, r)
}

/// Runs needed when only the `r` active sites of a memory are stimulated.
pub fn cost_active(r: u64) -> Result<BigUint> {
    if r == 0 {
        return Err(Error::Domain("fragment size r must be at least 1".into()));
    }
    weighted_subset_sum(r, r)
}

#[derive(Debug, Clone, PartialEq)]
pub struct CostReport {
    pub n: u64,
    pub r: u64,
    pub classical_ops: BigUint,
    pub active_ops: BigUint,
    /// `classical_ops / active_ops`.
    pub ratio: f64,
}

impl CostReport {
    pub fn new(n: u64, r: u64) -> Result<Self> {
        let classical_ops = cost_classical(n, r)?;
        let active_ops = cost_active(r)?;
        let ratio = classical_ops.to_f64().unwrap_or(f64::INFINITY)
            / active_ops.to_f64().unwrap_or(f64::INFINITY);
        Ok(Self {
            n,
            r,
            classical_ops,
            active_ops,
            ratio,
        })
    }

    pub const CSV_HEADER: &'static str = "n,r,classical_ops,active_ops,ratio";

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{:.6}",
            self.n, self.r, self.classical_ops, self.active_ops, self.ratio
        )
    }

    pub fn to_csv(&self) -> String {
        format!("{}\n{}\n", Self::CSV_HEADER, self.csv_row())
    }

    /// Parses a single-row cost CSV, recomputing the counts and checking them.
    pub fn from_csv(text: &str) -> Result<Self> {
        let rows = crate::csv::records(text, Self::CSV_HEADER)?;
        let [(line, f)] = rows.as_slice() else {
            return Err(Error::Validation(format!(
                "expected one cost row, found {}",
                rows.len()
            )));
        };
        let n: u64 = crate::csv::field(f[0], *line, "n")?;
        let r: u64 = crate::csv::field(f[1], *line, "r")?;
        let report = Self::new(n, r)?;
        if report.csv_row() != f.join(",") {
            return Err(Error::Validation(format!(
                "line {line}: counts do not match n={n}, r={r}"
            )));
        }
        Ok(report)
    }

    /// Aligned plain-text rendering with thousands separators.
    pub fn to_text(&self) -> String {
        let classical = group_thousands(&self.classical_ops.to_string());
        let active = group_thousands(&self.active_ops.to_string());
        let width = classical.len().max(active.len());
        format!(
            "network size (n)    {}\nfragment size (r)   {}\nclassical_ops       {classical:>width$}\nactive_ops          {active:>width$}\nratio               {:.3}\n",
            self.n, self.r, self.ratio
        )
    }
}

fn group_thousands(digits: &str) -> String {
    let mut out = String::with_capacity(digits.len() + digits.len() / 3);
    for (i, ch) in digits.chars().enumerate() {
        if i > 0 && (digits.len() - i) % 3 == 0 {
            out.push(',');
        }
        out.push(ch);
    }
    out
}
