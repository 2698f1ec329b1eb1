// Licensed under the Apache License, Version 2.0 (the "License"); you may
// not use this file except in compliance with the License. You may obtain
// a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS, WITHOUT
// WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied. See the
// License for the specific language governing permissions and limitations
// under the License.

mod common;

use ged_core::bounds::{
    heuristic_full_mapping, lambda_cost, mapping_bound, price_children, reference,
    remainder_bound, BoundKind, BoundValue, Instance, OrderPolicy, PartialMapping, Pricing,
    VertexStructure,
};
use ged_core::oracle::{brute_force_extension_min, OracleLimit};
use ged_core::{editorial_cost, Graph, Label};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const A: Label = Label(1);
const B: Label = Label(2);
const C: Label = Label(3);
const E: Label = Label(4);
const EA: Label = Label(1);
const EB: Label = Label(2);

/// Five-vertex pair with the first two query vertices mapped to the first
/// two data vertices.
fn worked_example() -> (Graph, Graph) {
    let mut q = Graph::new();
    for l in [A, A, A, B, C] {
        q.add_vertex(l);
    }
    q.add_edge(2, 3, EA).unwrap();
    q.add_edge(4, 0, EB).unwrap();
    q.add_edge(2, 1, EA).unwrap();
    q.add_edge(0, 1, EA).unwrap();
    let mut g = Graph::new();
    for l in [A, A, A, A, E] {
        g.add_vertex(l);
    }
    g.add_edge(2, 3, EA).unwrap();
    g.add_edge(3, 4, EA).unwrap();
    g.add_edge(1, 2, EA).unwrap();
    g.add_edge(0, 1, EA).unwrap();
    (q, g)
}

#[test]
fn worked_example_remainders() {
    let (q, g) = worked_example();
    let inst = Instance::new(&q, &g, &OrderPolicy::Identity);
    let pm = PartialMapping::from_images(&inst, &[0, 1]);
    assert_eq!(pm.anchored_cost(), 0);
    assert_eq!(remainder_bound(BoundKind::Ls, &pm), BoundValue::integer(3));
    assert_eq!(remainder_bound(BoundKind::LsAnchored, &pm), BoundValue::integer(4));
    assert_eq!(remainder_bound(BoundKind::Bm, &pm), BoundValue::integer(3));
    assert_eq!(remainder_bound(BoundKind::BmAnchored, &pm), BoundValue::integer(4));
}

#[test]
fn worked_example_branch_costs() {
    let (q, g) = worked_example();
    let inst = Instance::new(&q, &g, &OrderPolicy::Identity);
    let pm = PartialMapping::from_images(&inst, &[0, 1]);
    let v3 = VertexStructure::of_q(&pm, 2);
    let u4 = VertexStructure::of_g(&pm, 3);
    assert_eq!(lambda_cost(BoundKind::BmAnchored, &v3, &u4), BoundValue::halves(3));
    assert_eq!(lambda_cost(BoundKind::Bm, &v3, &u4), BoundValue::ZERO);
    assert_eq!(lambda_cost(BoundKind::SmAnchored, &v3, &v3), BoundValue::ZERO);
}

#[test]
fn worked_example_heuristic_completion() {
    let (q, g) = worked_example();
    let inst = Instance::new(&q, &g, &OrderPolicy::Identity);
    let mut pm = PartialMapping::from_images(&inst, &[0, 1]);
    let (full, cost) = heuristic_full_mapping(BoundKind::BmAnchored, &mut pm, 2).unwrap();
    assert_eq!(editorial_cost(&inst.q, &inst.g, &full), cost);
    assert!(cost >= 4);
    let best = brute_force_extension_min(&inst.q, &inst.g, &[(0, 0), (1, 1)], OracleLimit::default()).unwrap();
    assert!(best >= 4);
}

#[test]
fn identical_graphs_have_zero_bounds() {
    let (q, _) = worked_example();
    let inst = Instance::new(&q, &q, &OrderPolicy::Identity);
    let mut pm = PartialMapping::new(&inst);
    for kind in BoundKind::ALL {
        assert_eq!(mapping_bound(kind, &pm), BoundValue::ZERO, "{kind}");
        let best = price_children(kind, &mut pm, &[0, 1, 2, 3, 4], Pricing::Best);
        assert_eq!(best, vec![(0, BoundValue::ZERO)], "{kind}");
    }
}

#[test]
fn empty_mapping_relabel_bounds() {
    let mut q = Graph::new();
    q.add_vertex(A);
    let mut g = Graph::new();
    g.add_vertex(B);
    let inst = Instance::new(&q, &g, &OrderPolicy::Identity);
    let mut pm = PartialMapping::new(&inst);
    assert_eq!(pm.anchored_delta(0), 1);
    for kind in BoundKind::ALL {
        let priced = price_children(kind, &mut pm, &[0], Pricing::All);
        // Star bounds divide the relabel cost by twice the divisor 4.
        let expected = match kind {
            BoundKind::Sm | BoundKind::SmAnchored => BoundValue::ratio(1, 4),
            _ => BoundValue::integer(1),
        };
        assert_eq!(priced, vec![(0, expected)], "{kind}");
    }
}

/// A random instance and a random prefix of its matching order.
fn sample_state(seed: u64) -> (Instance, Vec<usize>) {
    let (g1, g2) = common::small_pair(seed, 7);
    let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_mul(31));
    let policy = if rng.gen_bool(0.5) {
        OrderPolicy::Frequency
    } else {
        OrderPolicy::Identity
    };
    let inst = Instance::new(&g1, &g2, &policy);
    let n = inst.n();
    let level = if n == 0 { 0 } else { rng.gen_range(0..n) };
    let mut pool: Vec<usize> = (0..n).collect();
    pool.shuffle(&mut rng);
    pool.truncate(level);
    (inst, pool)
}

fn fixed_pairs(inst: &Instance, images: &[usize]) -> Vec<(usize, usize)> {
    images.iter().enumerate().map(|(i, &u)| (inst.order()[i], u)).collect()
}

#[test]
fn incremental_state_matches_reference() {
    for seed in 0..300 {
        let (inst, images) = sample_state(seed);
        let mut pm = PartialMapping::from_images(&inst, &images);
        assert_eq!(pm.anchored_cost(), reference::anchored_cost(&inst, &images));
        for kind in BoundKind::ALL {
            assert_eq!(
                remainder_bound(kind, &pm),
                reference::remainder_bound(kind, &inst, &images),
                "seed {seed} {kind}"
            );
        }
        if pm.is_full() {
            continue;
        }
        let candidates = pm.unused();
        for kind in BoundKind::ALL {
            let priced = price_children(kind, &mut pm, &candidates, Pricing::All);
            assert_eq!(priced.len(), candidates.len());
            for &(u, bound) in &priced {
                assert_eq!(bound, reference::child_bound(kind, &inst, &images, u), "seed {seed} {kind} child {u}");
            }
            let best = price_children(kind, &mut pm, &candidates, Pricing::Best);
            let expected = priced.iter().min_by(|a, b| a.1.cmp(&b.1).then(a.0.cmp(&b.0))).unwrap();
            assert_eq!(best, vec![*expected], "seed {seed} {kind}");
        }
        assert_eq!(pm.images(), &images[..], "pricing must restore the mapping");
    }
}

#[test]
fn bounds_never_exceed_best_extension() {
    for seed in 1000..1200 {
        let (inst, images) = sample_state(seed);
        let mut pm = PartialMapping::from_images(&inst, &images);
        let limit = OracleLimit::default();
        let best = brute_force_extension_min(&inst.q, &inst.g, &fixed_pairs(&inst, &images), limit).unwrap();
        for kind in BoundKind::ALL {
            let b = mapping_bound(kind, &pm);
            assert!(b <= BoundValue::integer(best as i64), "seed {seed} {kind}: {b} > {best}");
        }
        if pm.is_full() {
            continue;
        }
        let v = pm.next_vertex();
        let candidates = pm.unused();
        for kind in BoundKind::ALL {
            for (u, b) in price_children(kind, &mut pm, &candidates, Pricing::All) {
                let mut fixed = fixed_pairs(&inst, &images);
                fixed.push((v, u));
                let best = brute_force_extension_min(&inst.q, &inst.g, &fixed, limit).unwrap();
                assert!(b <= BoundValue::integer(best as i64), "seed {seed} {kind} child {u}");
            }
        }
    }
}

#[test]
fn heuristic_cost_is_an_upper_bound() {
    for seed in 2000..2100 {
        let (inst, images) = sample_state(seed);
        let mut pm = PartialMapping::from_images(&inst, &images);
        if pm.is_full() {
            continue;
        }
        let v = pm.next_vertex();
        for u in pm.unused() {
            let mut fixed = fixed_pairs(&inst, &images);
            fixed.push((v, u));
            let best = brute_force_extension_min(&inst.q, &inst.g, &fixed, OracleLimit::default()).unwrap();
            for kind in [BoundKind::Bm, BoundKind::BmAnchored, BoundKind::BmAnchoredNaive, BoundKind::SmAnchored] {
                let (full, cost) = heuristic_full_mapping(kind, &mut pm, u).unwrap();
                assert_eq!(full.image(v), u);
                assert!(cost >= best);
            }
        }
    }
}

#[test]
fn dominance_between_kinds() {
    for seed in 3000..3300 {
        let (inst, images) = sample_state(seed);
        let mut pm = PartialMapping::from_images(&inst, &images);
        let b = |k| mapping_bound(k, &pm);
        assert!(b(BoundKind::BmAnchored) >= b(BoundKind::LsAnchored), "seed {seed}");
        assert!(b(BoundKind::LsAnchored) >= b(BoundKind::Ls), "seed {seed}");
        assert!(b(BoundKind::BmAnchored) >= b(BoundKind::Bm), "seed {seed}");
        assert!(b(BoundKind::SmAnchored) >= b(BoundKind::Sm), "seed {seed}");
        let bma = remainder_bound(BoundKind::BmAnchored, &pm);
        let free = inst.n() - images.len();
        if bma >= BoundValue::integer(free as i64) {
            assert!(bma >= remainder_bound(BoundKind::SmAnchored, &pm), "seed {seed}");
        }
        if pm.is_full() {
            continue;
        }
        let candidates = pm.unused();
        let mut naive = price_children(BoundKind::BmAnchoredNaive, &mut pm, &candidates, Pricing::All);
        let mut pinned = price_children(BoundKind::BmAnchored, &mut pm, &candidates, Pricing::All);
        naive.sort_by_key(|c| c.0);
        pinned.sort_by_key(|c| c.0);
        for (a, b) in naive.iter().zip(&pinned) {
            assert_eq!(a.0, b.0);
            assert!(a.1 >= b.1, "seed {seed} child {}", a.0);
        }
    }
}
