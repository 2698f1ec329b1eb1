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

#![allow(dead_code)]

use ged_core::bounds::BoundKind;
use ged_core::datagen::{gen_random_graph, perturb, GenSpec, PerturbSpec};
use ged_core::search::{SearchConfig, Strategy};
use ged_core::{Graph, Label, LabelSpace};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Every (strategy, bound) pair.
pub fn all_configs() -> Vec<SearchConfig> {
    let mut out = Vec::new();
    for strategy in Strategy::ALL {
        for bound in BoundKind::ALL {
            out.push(SearchConfig::new(strategy, bound));
        }
    }
    out
}

/// A random graph with `n` vertices, each pair joined with probability
/// `density`, labels drawn from small alphabets.
pub fn random_graph(rng: &mut ChaCha8Rng, n: usize, density: f64, vl: u32, el: u32) -> Graph {
    let mut g = Graph::new();
    for _ in 0..n {
        g.add_vertex(Label(rng.gen_range(1..=vl)));
    }
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(density) {
                g.add_edge(u, v, Label(rng.gen_range(1..=el))).unwrap();
            }
        }
    }
    g
}

/// A mix of unrelated and perturbed pairs with at most `max_n` vertices.
pub fn small_pair(seed: u64, max_n: usize) -> (Graph, Graph) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let vl = rng.gen_range(1..=4);
    let el = rng.gen_range(1..=3);
    let density = rng.gen_range(0.1..0.7);
    let n1 = rng.gen_range(0..=max_n);
    let g1 = random_graph(&mut rng, n1, density, vl, el);
    let g2 = if rng.gen_bool(0.5) {
        let n2 = rng.gen_range(0..=max_n);
        random_graph(&mut rng, n2, density, vl, el)
    } else {
        let mut g = g1.clone();
        let edits = rng.gen_range(0..=4);
        for _ in 0..edits {
            let n = g.vertex_count();
            match rng.gen_range(0..4) {
                0 if n < max_n => {
                    g.add_vertex(Label(rng.gen_range(1..=vl)));
                }
                1 if n > 0 => g.set_vertex_label(rng.gen_range(0..n), Label(rng.gen_range(1..=vl))),
                2 if n > 1 => {
                    let u = rng.gen_range(0..n);
                    let v = rng.gen_range(0..n);
                    if u != v && g.remove_edge(u, v).is_none() {
                        g.add_edge(u, v, Label(rng.gen_range(1..=el))).unwrap();
                    }
                }
                _ => {}
            }
        }
        g
    };
    (g1, g2)
}

/// A generated graph and a perturbed copy, as in the benchmark workloads.
pub fn generated_pair(n: usize, x: usize, seed: u64) -> (Graph, Graph) {
    let mut space = LabelSpace::default();
    let g = gen_random_graph(&GenSpec::new(n, seed), &mut space);
    let h = perturb(&g, &PerturbSpec::new(x, seed ^ 0x9e37_79b9), &mut space);
    (g, h)
}
