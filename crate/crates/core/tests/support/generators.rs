//! Proptest generators shared by the property and acceptance suites.

#![allow(dead_code)]

use active_sites::experiments::generate_memories;
use active_sites::retrieval::{grow_with_potentials, retrieve, Combine, RetrievalResult, Strategy as Recall};
use active_sites::training::{build_proximity, Geometry, GeometryKind, ProximityModel};
use active_sites::{MemorySet, Spin, WeightMatrix};
use proptest::prelude::*;
use proptest::sample::subsequence;

pub fn geometry_kind() -> impl Strategy<Value = GeometryKind> {
    prop_oneof![
        Just(GeometryKind::Line),
        Just(GeometryKind::Grid2d),
        Just(GeometryKind::Uniform2d),
        Just(GeometryKind::Uniform3d),
    ]
}

/// (n, memory set) with 2 ≤ n ≤ max_n and 1 ≤ m ≤ max_m distinct memories.
pub fn memory_set(max_n: usize, max_m: usize) -> impl Strategy<Value = MemorySet> {
    (2..=max_n, 1..=max_m, any::<u64>()).prop_map(|(n, m, seed)| {
        let m = m.min(1 << n.min(20));
        generate_memories(n, m, seed).unwrap()
    })
}

/// A network plus a nonempty set of sites and clamp values.
#[derive(Debug, Clone)]
pub struct Scenario {
    pub memories: MemorySet,
    pub prox: ProximityModel,
    pub sites: Vec<usize>,
    pub values: Vec<Spin>,
    pub seed: u64,
}

pub fn scenario(max_n: usize, max_m: usize) -> impl Strategy<Value = Scenario> {
    (memory_set(max_n, max_m), geometry_kind(), any::<u64>()).prop_flat_map(
        |(memories, kind, seed)| {
            let n = memories.n();
            let prox = build_proximity(n, Geometry::new(kind, seed)).unwrap();
            (
                Just(memories),
                Just(prox),
                subsequence((0..n).collect::<Vec<_>>(), 1..=n),
                any::<u64>(),
            )
                .prop_flat_map(|(memories, prox, sites, seed)| {
                    let k = sites.len();
                    (
                        Just(memories),
                        Just(prox),
                        Just(sites).prop_shuffle(),
                        proptest::collection::vec(prop_oneof![Just(1i8), Just(-1i8)], k),
                        Just(seed),
                    )
                })
                .prop_map(|(memories, prox, sites, values, seed)| Scenario {
                    memories,
                    prox,
                    sites,
                    values,
                    seed,
                })
        },
    )
}

pub fn strategies(seed: u64) -> [Recall; 4] {
    [
        Recall::Arbitrary { seed },
        Recall::Averaged,
        Recall::Independent {
            combine: Combine::Potentials,
        },
        Recall::Independent {
            combine: Combine::Votes,
        },
    ]
}

pub fn run(s: &Scenario, t: &WeightMatrix, strategy: Recall) -> RetrievalResult {
    retrieve(t, &s.prox, &s.sites, &s.values, strategy, &s.memories).unwrap()
}

/// Whether no sgn(0) tie occurred anywhere in producing `result`.
pub fn tie_free(t: &WeightMatrix, s: &Scenario, result: &RetrievalResult) -> bool {
    let clamp_of = |site: usize| s.values[s.sites.iter().position(|&x| x == site).unwrap()];
    let mut total = vec![0i64; t.n()];
    for order in &result.orders {
        let clamp: Vec<Spin> = order.clamped().iter().map(|&c| clamp_of(c)).collect();
        let grown = grow_with_potentials(t, order, &clamp).unwrap();
        if grown.potentials.iter().any(|&p| p == 0) {
            return false;
        }
        for (acc, (p, sp)) in total.iter_mut().zip(grown.potentials.iter().zip(&grown.spins)) {
            *acc += match result.strategy {
                Recall::Independent {
                    combine: Combine::Votes,
                } => i64::from(*sp),
                _ => *p,
            };
        }
    }
    match result.strategy {
        Recall::Independent { .. } => (0..t.n())
            .filter(|j| !result.clamped_sites.contains(j))
            .all(|j| total[j] != 0),
        _ => true,
    }
}

