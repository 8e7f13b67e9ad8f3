//! Hebbian training and neuron geometry.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::{UpdateOrder, WeightMatrix};
use crate::pattern::MemorySet;

/// Zero-diagonal outer-product sum: `t[i][j] = Σ_x x[i]·x[j]` for `i != j`.
pub fn train_hebbian(memories: &MemorySet) -> WeightMatrix {
    let n = memories.n();
    let mut t = WeightMatrix::zeros(n);
    for mem in memories.memories() {
        let x = mem.as_slice();
        for i in 0..n {
            for j in 0..i {
                t.add_symmetric(i, j, i64::from(x[i]) * i64::from(x[j]));
            }
        }
    }
    t
}

/// How neurons are laid out in space.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GeometryKind {
    /// Integer points `0..n` on the x axis.
    Line,
    /// Row-major unit lattice with the most nearly square `rows × cols = n`.
    Grid2d,
    /// Seeded uniform samples in the unit square.
    Uniform2d,
    /// Seeded uniform samples in the unit cube.
    Uniform3d,
}

impl GeometryKind {
    pub const ALL: [GeometryKind; 4] = [
        GeometryKind::Line,
        GeometryKind::Grid2d,
        GeometryKind::Uniform2d,
        GeometryKind::Uniform3d,
    ];

    pub fn name(self) -> &'static str {
        match self {
            GeometryKind::Line => "line",
            GeometryKind::Grid2d => "grid2d",
            GeometryKind::Uniform2d => "uniform2d",
            GeometryKind::Uniform3d => "uniform3d",
        }
    }

    pub fn dimensions(self) -> usize {
        match self {
            GeometryKind::Uniform3d => 3,
            _ => 2,
        }
    }
}

impl Default for GeometryKind {
    fn default() -> Self {
        GeometryKind::Uniform2d
    }
}

impl fmt::Display for GeometryKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for GeometryKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        GeometryKind::ALL
            .into_iter()
            .find(|g| g.name() == s)
            .ok_or_else(|| Error::Validation(format!("unknown geometry {s:?}")))
    }
}

/// A geometry variant plus the seed used by the uniform variants.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct Geometry {
    pub kind: GeometryKind,
    pub seed: u64,
}

impl Geometry {
    pub fn new(kind: GeometryKind, seed: u64) -> Self {
        Self { kind, seed }
    }
}

/// Lattice shape for `grid2d`: the divisor pair of `n` closest to square.
/// Primes end up as `1 × n`.
pub fn grid_shape(n: usize) -> (usize, usize) {
    let mut rows = 1;
    let mut d = 1;
    while d * d <= n {
        if n % d == 0 {
            rows = d;
        }
        d += 1;
    }
    (rows, n / rows)
}

/// Neuron coordinates with their pairwise distances.
#[derive(Debug, Clone, PartialEq)]
pub struct ProximityModel {
    dims: usize,
    positions: Vec<[f64; 3]>,
    sq_dist: Vec<f64>,
    dist: Vec<f64>,
}

impl ProximityModel {
    /// Builds the distance matrices from explicit coordinates. `dims` is 2 or 3;
    /// for `dims == 2` the z coordinate must be zero.
    pub fn from_positions(dims: usize, positions: Vec<[f64; 3]>) -> Result<Self> {
        if !(2..=3).contains(&dims) {
            return Err(Error::Validation(format!("unsupported dimension {dims}")));
        }
        let n = positions.len();
        if n < 2 {
            return Err(Error::Domain(format!("need at least 2 neurons, got {n}")));
        }
        if positions.iter().flatten().any(|c| !c.is_finite()) {
            return Err(Error::Validation("non-finite coordinate".into()));
        }
        if dims == 2 && positions.iter().any(|p| p[2] != 0.0) {
            return Err(Error::Validation("2-D positions with nonzero z".into()));
        }
        let mut sq_dist = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..i {
                let d: f64 = (0..3).map(|k| (positions[i][k] - positions[j][k]).powi(2)).sum();
                sq_dist[i * n + j] = d;
                sq_dist[j * n + i] = d;
            }
        }
        let dist = sq_dist.iter().map(|d| d.sqrt()).collect();
        Ok(Self {
            dims,
            positions,
            sq_dist,
            dist,
        })
    }

    pub fn n(&self) -> usize {
        self.positions.len()
    }

    pub fn dims(&self) -> usize {
        self.dims
    }

    pub fn positions(&self) -> &[[f64; 3]] {
        &self.positions
    }

    /// Euclidean distance.
    #[inline]
    pub fn dist(&self, i: usize, j: usize) -> f64 {
        self.dist[i * self.n() + j]
    }

    /// Squared Euclidean distance; exact for integer lattices.
    #[inline]
    pub fn sq_dist(&self, i: usize, j: usize) -> f64 {
        self.sq_dist[i * self.n() + j]
    }

    pub fn positions_csv(&self) -> String {
        let mut out = String::from(if self.dims == 3 {
            "index,x,y,z\n"
        } else {
            "index,x,y\n"
        });
        for (i, p) in self.positions.iter().enumerate() {
            if self.dims == 3 {
                out.push_str(&format!("{i},{},{},{}\n", p[0], p[1], p[2]));
            } else {
                out.push_str(&format!("{i},{},{}\n", p[0], p[1]));
            }
        }
        out
    }

    pub fn from_positions_csv(text: &str) -> Result<Self> {
        let header = text.lines().next().unwrap_or("").trim_end();
        let dims = match header {
            "index,x,y" => 2,
            "index,x,y,z" => 3,
            other => {
                return Err(Error::Parse {
                    line: 1,
                    message: format!("unexpected positions header {other:?}"),
                })
            }
        };
        let mut positions = Vec::new();
        for (line, fields) in crate::csv::records(text, header)? {
            let index: usize = crate::csv::field(fields[0], line, "index")?;
            if index != positions.len() {
                return Err(Error::Parse {
                    line,
                    message: format!("expected index {}, found {index}", positions.len()),
                });
            }
            let mut p = [0.0; 3];
            for k in 0..dims {
                p[k] = crate::csv::field(fields[k + 1], line, "coordinate")?;
            }
            positions.push(p);
        }
        Self::from_positions(dims, positions)
    }
}

/// Lays out `n` neurons according to `geometry`.
pub fn build_proximity(n: usize, geometry: Geometry) -> Result<ProximityModel> {
    if n < 2 {
        return Err(Error::Domain(format!("need at least 2 neurons, got {n}")));
    }
    let positions: Vec<[f64; 3]> = match geometry.kind {
        GeometryKind::Line => (0..n).map(|i| [i as f64, 0.0, 0.0]).collect(),
        GeometryKind::Grid2d => {
            let (_, cols) = grid_shape(n);
            (0..n)
                .map(|i| [(i % cols) as f64, (i / cols) as f64, 0.0])
                .collect()
        }
        GeometryKind::Uniform2d => {
            let mut rng = ChaCha8Rng::seed_from_u64(geometry.seed);
            (0..n).map(|_| [rng.gen(), rng.gen(), 0.0]).collect()
        }
        GeometryKind::Uniform3d => {
            let mut rng = ChaCha8Rng::seed_from_u64(geometry.seed);
            (0..n).map(|_| [rng.gen(), rng.gen(), rng.gen()]).collect()
        }
    };
    ProximityModel::from_positions(geometry.kind.dimensions(), positions)
}

/// `site` first, then every other neuron by increasing distance from it
/// (lower index wins ties).
pub fn single_site_order(prox: &ProximityModel, site: usize) -> Result<UpdateOrder> {
    let n = prox.n();
    if site >= n {
        return Err(Error::Index { index: site, len: n });
    }
    let mut rest: Vec<usize> = (0..n).filter(|&j| j != site).collect();
    rest.sort_by(|&a, &b| {
        prox.sq_dist(site, a)
            .total_cmp(&prox.sq_dist(site, b))
            .then(a.cmp(&b))
    });
    let mut order = Vec::with_capacity(n);
    order.push(site);
    order.extend(rest);
    UpdateOrder::new(order, 1)
}
