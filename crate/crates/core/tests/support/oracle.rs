//! Naive reference implementation of training, update orders and recall.
//!
//! Deliberately written with nested `Vec`s and explicit matrix permutation so
//! it shares no code path with the library: it permutes T, takes the strict
//! lower triangle, and runs the recursion row by row.

#![allow(dead_code)]

pub type Matrix = Vec<Vec<i64>>;

pub fn hebbian(memories: &[Vec<i8>]) -> Matrix {
    let n = memories[0].len();
    let mut t = vec![vec![0i64; n]; n];
    for x in memories {
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    t[i][j] += (x[i] * x[j]) as i64;
                }
            }
        }
    }
    t
}

pub fn permute(t: &Matrix, order: &[usize]) -> Matrix {
    let n = t.len();
    let mut p = vec![vec![0i64; n]; n];
    for i in 0..n {
        for j in 0..n {
            p[i][j] = t[order[i]][order[j]];
        }
    }
    p
}

pub fn strict_lower(t: &Matrix) -> Matrix {
    let n = t.len();
    let mut b = vec![vec![0i64; n]; n];
    for i in 0..n {
        for j in 0..i {
            b[i][j] = t[i][j];
        }
    }
    b
}

/// Runs f_i = sgn(B'_i f) in the permuted basis, then maps spins and
/// potentials back to original neuron indices.
pub fn recursion(t: &Matrix, order: &[usize], clamp: &[i8]) -> (Vec<i8>, Vec<i64>) {
    let n = t.len();
    let b = strict_lower(&permute(t, order));
    let mut f = vec![0i8; n];
    let mut pot = vec![0i64; n];
    for k in 0..clamp.len() {
        f[k] = clamp[k];
        pot[k] = clamp[k] as i64;
    }
    for i in clamp.len()..n {
        let mut s = 0i64;
        for j in 0..n {
            s += b[i][j] * f[j] as i64;
        }
        pot[i] = s;
        f[i] = if s >= 0 { 1 } else { -1 };
    }
    let mut spins = vec![0i8; n];
    let mut potentials = vec![0i64; n];
    for i in 0..n {
        spins[order[i]] = f[i];
        potentials[order[i]] = pot[i];
    }
    (spins, potentials)
}

pub fn sq_dist(p: &[[f64; 3]], i: usize, j: usize) -> f64 {
    let dx = p[i][0] - p[j][0];
    let dy = p[i][1] - p[j][1];
    let dz = p[i][2] - p[j][2];
    dx * dx + dy * dy + dz * dz
}

pub fn proximity_order(p: &[[f64; 3]], site: usize) -> Vec<usize> {
    let mut rest: Vec<usize> = (0..p.len()).filter(|&j| j != site).collect();
    rest.sort_by(|&a, &b| {
        sq_dist(p, site, a)
            .partial_cmp(&sq_dist(p, site, b))
            .unwrap()
            .then(a.cmp(&b))
    });
    let mut order = vec![site];
    order.extend(rest);
    order
}

pub fn averaged_order(p: &[[f64; 3]], sites: &[usize]) -> Vec<usize> {
    let mut sorted = sites.to_vec();
    sorted.sort();
    if sorted.len() == 1 {
        return proximity_order(p, sorted[0]);
    }
    let mut rest: Vec<(f64, usize)> = Vec::new();
    for j in 0..p.len() {
        if sorted.contains(&j) {
            continue;
        }
        let mut total = 0.0;
        for &s in &sorted {
            total += sq_dist(p, s, j).sqrt();
        }
        rest.push((total / sorted.len() as f64, j));
    }
    rest.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap().then(a.1.cmp(&b.1)));
    let mut order = sorted;
    order.extend(rest.into_iter().map(|(_, j)| j));
    order
}

/// Sites with their values, sorted by site.
pub fn sorted_pairs(sites: &[usize], values: &[i8]) -> Vec<(usize, i8)> {
    let mut pairs: Vec<(usize, i8)> = sites.iter().copied().zip(values.iter().copied()).collect();
    pairs.sort();
    pairs
}

pub fn multi(t: &Matrix, order: &[usize], sites: &[usize], values: &[i8]) -> Vec<i8> {
    let clamp: Vec<i8> = sorted_pairs(sites, values).iter().map(|p| p.1).collect();
    recursion(t, order, &clamp).0
}

pub fn independent(
    t: &Matrix,
    p: &[[f64; 3]],
    sites: &[usize],
    values: &[i8],
    votes: bool,
) -> Vec<i8> {
    let n = t.len();
    let mut total = vec![0i64; n];
    let pairs = sorted_pairs(sites, values);
    for &(s, v) in &pairs {
        let (spins, pots) = recursion(t, &proximity_order(p, s), &[v]);
        for j in 0..n {
            total[j] += if votes { spins[j] as i64 } else { pots[j] };
        }
    }
    let mut out: Vec<i8> = total.iter().map(|&x| if x >= 0 { 1 } else { -1 }).collect();
    for &(s, v) in &pairs {
        out[s] = v;
    }
    out
}
