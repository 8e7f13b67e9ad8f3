//! The Hebbian weight matrix and update orders.

use crate::error::{Error, Result};

/// Symmetric integer weight matrix with zero diagonal, stored row-major.
///
/// The strict lower triangle is the B-matrix; `t == B + Bᵀ` holds by
/// construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightMatrix {
    n: usize,
    data: Vec<i64>,
}

impl WeightMatrix {
    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            data: vec![0; n * n],
        }
    }

    /// Builds from row-major data, rejecting asymmetric matrices and nonzero diagonals.
    pub fn from_rows(n: usize, data: Vec<i64>) -> Result<Self> {
        if data.len() != n * n {
            return Err(Error::Dimension {
                expected: n * n,
                actual: data.len(),
            });
        }
        for i in 0..n {
            if data[i * n + i] != 0 {
                return Err(Error::Validation(format!("diagonal entry {i} is nonzero")));
            }
            for j in 0..i {
                if data[i * n + j] != data[j * n + i] {
                    return Err(Error::Validation(format!(
                        "matrix is not symmetric at ({i}, {j})"
                    )));
                }
            }
        }
        Ok(Self { n, data })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.data[i * self.n + j]
    }

    /// Adds `value` to both `(i, j)` and `(j, i)`. `i != j` is required.
    pub(crate) fn add_symmetric(&mut self, i: usize, j: usize, value: i64) {
        debug_assert_ne!(i, j);
        self.data[i * self.n + j] += value;
        self.data[j * self.n + i] += value;
    }

    pub fn row(&self, i: usize) -> &[i64] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    /// Strict lower triangle, row-major n×n (entries on or above the diagonal are zero).
    pub fn strict_lower(&self) -> Vec<i64> {
        let n = self.n;
        let mut b = vec![0; n * n];
        for i in 0..n {
            for j in 0..i {
                b[i * n + j] = self.get(i, j);
            }
        }
        b
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.n).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }

    pub fn has_zero_diagonal(&self) -> bool {
        (0..self.n).all(|i| self.get(i, i) == 0)
    }

    /// Checks `t == B + Bᵀ` with B the strict lower triangle.
    pub fn reconstructs_from_lower(&self) -> bool {
        let n = self.n;
        let b = self.strict_lower();
        (0..n).all(|i| (0..n).all(|j| self.get(i, j) == b[i * n + j] + b[j * n + i]))
    }

    /// CSV rendering: a header of neuron indices, then one row per neuron.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        let header: Vec<String> = (0..self.n).map(|i| i.to_string()).collect();
        out.push_str(&header.join(","));
        out.push('\n');
        for i in 0..self.n {
            let row: Vec<String> = self.row(i).iter().map(|v| v.to_string()).collect();
            out.push_str(&row.join(","));
            out.push('\n');
        }
        out
    }

    pub fn from_csv(text: &str) -> Result<Self> {
        let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
        let (_, header) = lines.next().ok_or(Error::Parse {
            line: 1,
            message: "missing header".into(),
        })?;
        let n = header.split(',').count();
        for (k, name) in header.split(',').enumerate() {
            if name.trim() != k.to_string() {
                return Err(Error::Parse {
                    line: 1,
                    message: format!("header column {k} is {name:?}"),
                });
            }
        }
        let mut data = Vec::with_capacity(n * n);
        let mut rows = 0;
        for (idx, line) in lines {
            let before = data.len();
            for value in line.split(',') {
                data.push(crate::csv::field::<i64>(value, idx + 1, "weight")?);
            }
            if data.len() - before != n {
                return Err(Error::Parse {
                    line: idx + 1,
                    message: format!("expected {n} weights, found {}", data.len() - before),
                });
            }
            rows += 1;
        }
        if rows != n {
            return Err(Error::Parse {
                line: rows + 2,
                message: format!("expected {n} rows, found {rows}"),
            });
        }
        Self::from_rows(n, data)
    }
}

/// A permutation of neuron indices whose first `clamp_count` entries are the
/// clamped neurons.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct UpdateOrder {
    order: Vec<usize>,
    clamp_count: usize,
}

impl UpdateOrder {
    pub fn new(order: Vec<usize>, clamp_count: usize) -> Result<Self> {
        validate_permutation(&order)?;
        if clamp_count == 0 || clamp_count > order.len() {
            return Err(Error::Permutation(format!(
                "clamp count {clamp_count} outside 1..={}",
                order.len()
            )));
        }
        Ok(Self { order, clamp_count })
    }

    pub fn identity(n: usize, clamp_count: usize) -> Result<Self> {
        Self::new((0..n).collect(), clamp_count)
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.order
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    pub fn clamp_count(&self) -> usize {
        self.clamp_count
    }

    pub fn clamped(&self) -> &[usize] {
        &self.order[..self.clamp_count]
    }

    /// `inv[order[i]] == i`.
    pub fn inverse(&self) -> Vec<usize> {
        let mut inv = vec![0; self.order.len()];
        for (pos, &neuron) in self.order.iter().enumerate() {
            inv[neuron] = pos;
        }
        inv
    }
}

impl std::fmt::Display for UpdateOrder {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self.order.iter().map(|i| i.to_string()).collect();
        write!(f, "{}", parts.join(" "))
    }
}

pub(crate) fn validate_permutation(order: &[usize]) -> Result<()> {
    let n = order.len();
    let mut seen = vec![false; n];
    for &idx in order {
        if idx >= n {
            return Err(Error::Permutation(format!("index {idx} out of range for {n}")));
        }
        if std::mem::replace(&mut seen[idx], true) {
            return Err(Error::Permutation(format!("index {idx} repeated")));
        }
    }
    Ok(())
}

/// Re-expresses `t` in the basis given by `order`: `t'[i][j] = t[order[i]][order[j]]`.
pub fn permute_matrix(t: &WeightMatrix, order: &[usize]) -> Result<WeightMatrix> {
    if order.len() != t.n {
        return Err(Error::Dimension {
            expected: t.n,
            actual: order.len(),
        });
    }
    validate_permutation(order)?;
    let n = t.n;
    let mut data = Vec::with_capacity(n * n);
    for &oi in order {
        for &oj in order {
            data.push(t.get(oi, oj));
        }
    }
    Ok(WeightMatrix { n, data })
}
