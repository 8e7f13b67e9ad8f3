//! Fragment-growing recall.
//!
//! Starting from clamped neurons, each remaining neuron along the update order
//! takes `sgn` of its weighted input from the neurons already fixed, i.e. the
//! corresponding row of the B-matrix in the reordered basis applied to the
//! fragment so far.

use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::{UpdateOrder, WeightMatrix};
use crate::pattern::{sgn, BipolarVector, MemorySet, Spin};
use crate::training::{single_site_order, ProximityModel};

/// How the independent strategy merges its per-site runs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Combine {
    /// Sum pre-threshold potentials, then take `sgn` once.
    #[default]
    Potentials,
    /// Majority vote over the per-site output spins (ties go to +1).
    Votes,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StrategyKind {
    Classical,
    Arbitrary,
    Averaged,
    Independent,
}

impl StrategyKind {
    pub const ALL: [StrategyKind; 4] = [
        StrategyKind::Classical,
        StrategyKind::Arbitrary,
        StrategyKind::Averaged,
        StrategyKind::Independent,
    ];

    pub fn name(self) -> &'static str {
        match self {
            StrategyKind::Classical => "classical",
            StrategyKind::Arbitrary => "arbitrary",
            StrategyKind::Averaged => "averaged",
            StrategyKind::Independent => "independent",
        }
    }
}

impl fmt::Display for StrategyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for StrategyKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        StrategyKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::Validation(format!("unknown strategy {s:?}")))
    }
}

/// A fully specified retrieval strategy.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Strategy {
    /// One clamped neuron, proximity order from it.
    Classical,
    /// Clamped sites first, the rest in a seeded random order.
    Arbitrary { seed: u64 },
    /// Clamped sites first, the rest by mean distance to the sites.
    Averaged,
    /// One single-site run per clamped site, merged.
    Independent { combine: Combine },
}

impl Strategy {
    pub fn kind(&self) -> StrategyKind {
        match self {
            Strategy::Classical => StrategyKind::Classical,
            Strategy::Arbitrary { .. } => StrategyKind::Arbitrary,
            Strategy::Averaged => StrategyKind::Averaged,
            Strategy::Independent { .. } => StrategyKind::Independent,
        }
    }

    pub fn from_kind(kind: StrategyKind, seed: u64, combine: Combine) -> Self {
        match kind {
            StrategyKind::Classical => Strategy::Classical,
            StrategyKind::Arbitrary => Strategy::Arbitrary { seed },
            StrategyKind::Averaged => Strategy::Averaged,
            StrategyKind::Independent => Strategy::Independent { combine },
        }
    }
}

/// Outcome of one recall.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RetrievalResult {
    pub output: BipolarVector,
    /// Stored memory equal to `output`, if any.
    pub matched: Option<usize>,
    pub strategy: Strategy,
    /// Clamped neurons, ascending.
    pub clamped_sites: Vec<usize>,
    /// Update orders used: one per run (the independent strategy runs once per site).
    pub orders: Vec<UpdateOrder>,
}

/// Spins and potentials of one grown fragment, in original neuron order.
/// Clamped neurons carry their clamp spin as potential.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GrownFragment {
    pub spins: Vec<Spin>,
    pub potentials: Vec<i64>,
}

/// Grows a fragment along `order` from the clamped prefix, recording the
/// potential each free neuron saw when it was updated.
pub fn grow_with_potentials(
    t: &WeightMatrix,
    order: &UpdateOrder,
    clamp: &[Spin],
) -> Result<GrownFragment> {
    let n = t.n();
    if order.len() != n {
        return Err(Error::Dimension {
            expected: n,
            actual: order.len(),
        });
    }
    if clamp.len() != order.clamp_count() {
        return Err(Error::Dimension {
            expected: order.clamp_count(),
            actual: clamp.len(),
        });
    }
    if clamp.iter().any(|&s| s != 1 && s != -1) {
        return Err(Error::Validation("clamp values must be -1 or +1".into()));
    }
    let seq = order.as_slice();
    let mut spins = vec![0 as Spin; n];
    let mut potentials = vec![0i64; n];
    for (&neuron, &value) in seq.iter().zip(clamp) {
        spins[neuron] = value;
        potentials[neuron] = i64::from(value);
    }
    for pos in order.clamp_count()..n {
        let neuron = seq[pos];
        let row = t.row(neuron);
        let potential: i64 = seq[..pos]
            .iter()
            .map(|&prev| row[prev] * i64::from(spins[prev]))
            .sum();
        potentials[neuron] = potential;
        spins[neuron] = sgn(potential);
    }
    Ok(GrownFragment { spins, potentials })
}

/// Grows the full pattern from the clamped prefix of `order`.
pub fn grow_fragment(
    t: &WeightMatrix,
    order: &UpdateOrder,
    clamp: &[Spin],
) -> Result<BipolarVector> {
    let grown = grow_with_potentials(t, order, clamp)?;
    BipolarVector::new(grown.spins)
}

fn check_sizes(t: &WeightMatrix, prox: &ProximityModel, memories: &MemorySet) -> Result<()> {
    for actual in [prox.n(), memories.n()] {
        if actual != t.n() {
            return Err(Error::Dimension {
                expected: t.n(),
                actual,
            });
        }
    }
    Ok(())
}

/// Validates sites against `n` and returns them ascending.
fn sorted_sites(n: usize, sites: &[usize]) -> Result<Vec<usize>> {
    if sites.is_empty() {
        return Err(Error::Validation("at least one site is required".into()));
    }
    let mut sorted = sites.to_vec();
    sorted.sort_unstable();
    for w in sorted.windows(2) {
        if w[0] == w[1] {
            return Err(Error::Validation(format!("site {} listed twice", w[0])));
        }
    }
    if let Some(&bad) = sorted.iter().find(|&&s| s >= n) {
        return Err(Error::Index { index: bad, len: n });
    }
    Ok(sorted)
}

/// Pairs each site with its value and sorts the pairs by site.
fn aligned_clamp(n: usize, sites: &[usize], values: &[Spin]) -> Result<(Vec<usize>, Vec<Spin>)> {
    if sites.len() != values.len() {
        return Err(Error::Validation(format!(
            "{} sites but {} clamp values",
            sites.len(),
            values.len()
        )));
    }
    let sorted = sorted_sites(n, sites)?;
    let clamp = sorted
        .iter()
        .map(|s| values[sites.iter().position(|x| x == s).unwrap()])
        .collect();
    Ok((sorted, clamp))
}

/// Single clamped neuron with the proximity order from it.
pub fn retrieve_classical(
    t: &WeightMatrix,
    prox: &ProximityModel,
    site: usize,
    value: Spin,
    memories: &MemorySet,
) -> Result<RetrievalResult> {
    check_sizes(t, prox, memories)?;
    let order = single_site_order(prox, site)?;
    let output = grow_fragment(t, &order, &[value])?;
    Ok(RetrievalResult {
        matched: memories.find(&output),
        output,
        strategy: Strategy::Classical,
        clamped_sites: vec![site],
        orders: vec![order],
    })
}

/// Sites ascending, then the remaining neurons shuffled with `seed`.
pub fn order_arbitrary(n: usize, sites: &[usize], seed: u64) -> Result<UpdateOrder> {
    let sorted = sorted_sites(n, sites)?;
    let mut rest: Vec<usize> = (0..n).filter(|j| sorted.binary_search(j).is_err()).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rest.shuffle(&mut rng);
    let clamp_count = sorted.len();
    let mut order = sorted;
    order.extend(rest);
    UpdateOrder::new(order, clamp_count)
}

/// Sites ascending, then the remaining neurons by mean distance to the sites
/// (lower index wins ties).
pub fn order_averaged(prox: &ProximityModel, sites: &[usize]) -> Result<UpdateOrder> {
    let n = prox.n();
    let sorted = sorted_sites(n, sites)?;
    let k = sorted.len() as f64;
    let mut rest: Vec<(f64, usize)> = (0..n)
        .filter(|j| sorted.binary_search(j).is_err())
        .map(|j| {
            let mean = if sorted.len() == 1 {
                // Single site: compare squared distances, same as the proximity row.
                prox.sq_dist(sorted[0], j)
            } else {
                sorted.iter().map(|&s| prox.dist(s, j)).sum::<f64>() / k
            };
            (mean, j)
        })
        .collect();
    rest.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
    let clamp_count = sorted.len();
    let mut order = sorted;
    order.extend(rest.into_iter().map(|(_, j)| j));
    UpdateOrder::new(order, clamp_count)
}

/// Multi-site recall with the arbitrary or averaged update order.
pub fn retrieve_multi(
    t: &WeightMatrix,
    prox: &ProximityModel,
    sites: &[usize],
    clamp_values: &[Spin],
    strategy: Strategy,
    memories: &MemorySet,
) -> Result<RetrievalResult> {
    check_sizes(t, prox, memories)?;
    let (sorted, clamp) = aligned_clamp(t.n(), sites, clamp_values)?;
    let order = match strategy {
        Strategy::Arbitrary { seed } => order_arbitrary(t.n(), &sorted, seed)?,
        Strategy::Averaged => order_averaged(prox, &sorted)?,
        other => {
            return Err(Error::Contract(format!(
                "retrieve_multi handles arbitrary and averaged, not {}",
                other.kind()
            )))
        }
    };
    let output = grow_fragment(t, &order, &clamp)?;
    Ok(RetrievalResult {
        matched: memories.find(&output),
        output,
        strategy,
        clamped_sites: sorted,
        orders: vec![order],
    })
}

/// One single-site recall per clamped site, merged by summed potentials
/// (or by vote, per `combine`). Clamped sites keep their clamp values.
pub fn retrieve_independent(
    t: &WeightMatrix,
    prox: &ProximityModel,
    sites: &[usize],
    clamp_values: &[Spin],
    combine: Combine,
    memories: &MemorySet,
) -> Result<RetrievalResult> {
    check_sizes(t, prox, memories)?;
    let n = t.n();
    let (sorted, clamp) = aligned_clamp(n, sites, clamp_values)?;
    let mut total = vec![0i64; n];
    let mut orders = Vec::with_capacity(sorted.len());
    for (&site, &value) in sorted.iter().zip(&clamp) {
        let order = single_site_order(prox, site)?;
        let grown = grow_with_potentials(t, &order, &[value])?;
        let contribution = match combine {
            Combine::Potentials => grown.potentials,
            Combine::Votes => grown.spins.iter().map(|&s| i64::from(s)).collect(),
        };
        for (acc, v) in total.iter_mut().zip(contribution) {
            *acc += v;
        }
        orders.push(order);
    }
    let mut spins: Vec<Spin> = total.into_iter().map(sgn).collect();
    for (&site, &value) in sorted.iter().zip(&clamp) {
        spins[site] = value;
    }
    let output = BipolarVector::new(spins)?;
    Ok(RetrievalResult {
        matched: memories.find(&output),
        output,
        strategy: Strategy::Independent { combine },
        clamped_sites: sorted,
        orders,
    })
}

/// Dispatches to the recall routine for `strategy`. Classical requires exactly one site.
pub fn retrieve(
    t: &WeightMatrix,
    prox: &ProximityModel,
    sites: &[usize],
    clamp_values: &[Spin],
    strategy: Strategy,
    memories: &MemorySet,
) -> Result<RetrievalResult> {
    match strategy {
        Strategy::Classical => {
            if sites.len() != 1 || clamp_values.len() != 1 {
                return Err(Error::Contract(format!(
                    "classical retrieval clamps exactly one site, got {} sites and {} values",
                    sites.len(),
                    clamp_values.len()
                )));
            }
            retrieve_classical(t, prox, sites[0], clamp_values[0], memories)
        }
        Strategy::Arbitrary { .. } | Strategy::Averaged => {
            retrieve_multi(t, prox, sites, clamp_values, strategy, memories)
        }
        Strategy::Independent { combine } => {
            retrieve_independent(t, prox, sites, clamp_values, combine, memories)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::training::{build_proximity, train_hebbian, Geometry, GeometryKind};

    fn set(rows: &[&[i8]]) -> MemorySet {
        MemorySet::new(
            rows.iter()
                .map(|r| BipolarVector::new(r.to_vec()).unwrap())
                .collect(),
        )
        .unwrap()
    }

    fn line(n: usize) -> ProximityModel {
        build_proximity(n, Geometry::new(GeometryKind::Line, 0)).unwrap()
    }

    fn worked_pair() -> MemorySet {
        set(&[&[1, 1, -1, -1], &[1, -1, 1, -1]])
    }

    #[test]
    fn three_neuron_hand_example() {
        // t[1][0] = -1 → f = sgn(-1) = -1; t[2][0]·1 + t[2][1]·(-1) = 1 + 1 → +1.
        let mems = set(&[&[1, -1, 1]]);
        let t = train_hebbian(&mems);
        let order = UpdateOrder::identity(3, 1).unwrap();
        let grown = grow_with_potentials(&t, &order, &[1]).unwrap();
        assert_eq!(grown.spins, vec![1, -1, 1]);
        assert_eq!(grown.potentials, vec![1, -1, 2]);
    }

    #[test]
    fn full_clamp_returns_clamp() {
        let t = train_hebbian(&worked_pair());
        let order = UpdateOrder::new(vec![3, 1, 0, 2], 4).unwrap();
        let out = grow_fragment(&t, &order, &[1, -1, -1, 1]).unwrap();
        assert_eq!(out.as_slice(), &[-1, -1, 1, 1]);
    }

    #[test]
    fn clamp_size_mismatch() {
        let t = train_hebbian(&worked_pair());
        let order = UpdateOrder::identity(4, 2).unwrap();
        assert!(matches!(
            grow_fragment(&t, &order, &[1]),
            Err(Error::Dimension { .. })
        ));
    }

    #[test]
    fn classical_recalls_and_negates() {
        let mems = set(&[&[1, -1, 1]]);
        let t = train_hebbian(&mems);
        let prox = line(3);
        let hit = retrieve_classical(&t, &prox, 0, 1, &mems).unwrap();
        assert_eq!(hit.matched, Some(0));
        let miss = retrieve_classical(&t, &prox, 0, -1, &mems).unwrap();
        assert_eq!(miss.output, mems.get(0).unwrap().negated());
        assert_eq!(miss.matched, None);
    }

    #[test]
    fn arbitrary_order_contract() {
        let a = order_arbitrary(4, &[3, 2], 7).unwrap();
        assert_eq!(&a.as_slice()[..2], &[2, 3]);
        assert_eq!(a.clamp_count(), 2);
        assert_eq!(a, order_arbitrary(4, &[2, 3], 7).unwrap());
        assert!(matches!(
            order_arbitrary(4, &[1, 1], 0),
            Err(Error::Validation(_))
        ));
        assert!(matches!(
            order_arbitrary(4, &[], 0),
            Err(Error::Validation(_))
        ));
    }

    #[test]
    fn averaged_order_examples() {
        let prox = line(4);
        assert_eq!(
            order_averaged(&prox, &[3, 0]).unwrap().as_slice(),
            &[0, 3, 1, 2]
        );
        assert_eq!(
            order_averaged(&prox, &[2]).unwrap(),
            single_site_order(&prox, 2).unwrap()
        );
        let all = order_averaged(&prox, &[3, 1, 0, 2]).unwrap();
        assert_eq!(all.as_slice(), &[0, 1, 2, 3]);
        assert_eq!(all.clamp_count(), 4);
    }

    #[test]
    fn multi_site_worked_pair() {
        // 2×2 lattice. Independent potentials: site 1 gives (0, ·, -2, -2),
        // site 2 gives (0, 2, ·, -2); the sum keeps memory 0's signs.
        let mems = worked_pair();
        let t = train_hebbian(&mems);
        let prox = build_proximity(4, Geometry::new(GeometryKind::Grid2d, 0)).unwrap();
        let res = retrieve_multi(&t, &prox, &[1, 2], &[1, -1], Strategy::Averaged, &mems).unwrap();
        assert_eq!(res.matched, Some(0));
        let ind = retrieve_independent(&t, &prox, &[1, 2], &[1, -1], Combine::Potentials, &mems)
            .unwrap();
        assert_eq!(ind.matched, Some(0));
        assert_eq!(ind.orders.len(), 2);
    }

    #[test]
    fn independent_depends_on_geometry() {
        // On a line, site 2's run sees neuron 0 last with potential -2, which
        // outweighs site 1's zero potential and flips neuron 0.
        let mems = worked_pair();
        let t = train_hebbian(&mems);
        let ind = retrieve_independent(&t, &line(4), &[1, 2], &[1, -1], Combine::Potentials, &mems)
            .unwrap();
        assert_eq!(ind.output.as_slice(), &[-1, 1, -1, -1]);
        assert_eq!(ind.matched, None);
    }

    #[test]
    fn clamp_values_follow_their_sites() {
        let mems = worked_pair();
        let t = train_hebbian(&mems);
        let prox = line(4);
        let a = retrieve_multi(&t, &prox, &[2, 1], &[-1, 1], Strategy::Averaged, &mems).unwrap();
        assert_eq!(a.output[1], 1);
        assert_eq!(a.output[2], -1);
        assert_eq!(a.clamped_sites, vec![1, 2]);
    }

    #[test]
    fn multi_rejects_independent_and_classical() {
        let mems = worked_pair();
        let t = train_hebbian(&mems);
        let prox = line(4);
        for s in [
            Strategy::Classical,
            Strategy::Independent {
                combine: Combine::Potentials,
            },
        ] {
            assert!(matches!(
                retrieve_multi(&t, &prox, &[1], &[1], s, &mems),
                Err(Error::Contract(_))
            ));
        }
        assert!(matches!(
            retrieve(&t, &prox, &[1, 2], &[1, 1], Strategy::Classical, &mems),
            Err(Error::Contract(_))
        ));
        assert!(matches!(
            retrieve(&t, &prox, &[1, 2], &[1], Strategy::Averaged, &mems),
            Err(Error::Validation(_))
        ));
        assert!(matches!(
            retrieve(&t, &prox, &[9], &[1], Strategy::Averaged, &mems),
            Err(Error::Index { .. })
        ));
    }

    #[test]
    fn independent_single_site_is_classical() {
        let mems = set(&[&[1, -1, 1, 1, -1], &[-1, -1, 1, -1, 1]]);
        let t = train_hebbian(&mems);
        let prox = build_proximity(5, Geometry::new(GeometryKind::Uniform2d, 3)).unwrap();
        for site in 0..5 {
            for value in [-1, 1] {
                let c = retrieve_classical(&t, &prox, site, value, &mems).unwrap();
                for combine in [Combine::Potentials, Combine::Votes] {
                    let i = retrieve_independent(&t, &prox, &[site], &[value], combine, &mems)
                        .unwrap();
                    assert_eq!(i.output, c.output);
                }
            }
        }
    }

    #[test]
    fn strategy_names_parse() {
        for k in StrategyKind::ALL {
            assert_eq!(k.name().parse::<StrategyKind>().unwrap(), k);
            assert_eq!(Strategy::from_kind(k, 1, Combine::Votes).kind(), k);
        }
    }
}
