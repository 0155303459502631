mod common;

use proptest::prelude::*;

use spgenus_core::decompose::{
    find_terminals, merge_strands, parse_dmt_string, random_cubic_sp, random_dmt_string, reduce_to_dipole,
    split_into_strands,
};
use spgenus_core::engine::{gd_cubic_with_terminals, gd_treewidth2_maxdeg3, gd_treewidth2_maxdeg3_rooted};
use spgenus_core::oracle::{gd_brute_force, DEFAULT_LIMIT};
use spgenus_core::{GenusDistribution, Multigraph};

use common::*;

fn gd(g: &Multigraph) -> GenusDistribution {
    gd_treewidth2_maxdeg3(g).unwrap().distribution
}

#[test]
fn every_valid_terminal_pair_agrees() {
    for seed in 0..12 {
        let g = random_cubic_sp(3, seed);
        let reference = gd(&g);
        let mut tried = 0;
        for p in 0..g.vertex_count() {
            for q in p + 1..g.vertex_count() {
                if let Ok(r) = gd_cubic_with_terminals(&g, p, q) {
                    assert_eq!(r.distribution, reference, "seed {seed} terminals ({p}, {q})");
                    tried += 1;
                }
            }
        }
        assert!(tried > 0);
    }
}

#[test]
fn strand_order_does_not_matter() {
    let orders = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
    for seed in 0..10 {
        let g = random_cubic_sp(4, seed);
        let (p, q) = find_terminals(&g).unwrap();
        let strands = split_into_strands(&g, p, q).unwrap();
        let reference = gd(&g);
        for order in orders {
            let merged = merge_strands(&order.map(|i| strands[i].clone()));
            let r = gd_cubic_with_terminals(&merged, 0, 1).unwrap();
            assert_eq!(r.distribution, reference, "seed {seed} order {order:?}");
        }
    }
}

#[test]
fn example_strand_order_does_not_matter() {
    let strands = example_strands().map(|e| e.realize());
    for order in [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]] {
        let g = merge_strands(&order.map(|i| strands[i].clone()));
        let r = gd_cubic_with_terminals(&g, 0, 1).unwrap();
        assert_eq!(r.distribution, GenusDistribution::from_u64s(&EXAMPLE_GD));
    }
}

#[test]
fn subdividing_edges_preserves_the_distribution() {
    for seed in 0..20 {
        let g = random_tw2_graph(seed, 10);
        let reference = gd(&g);
        let mut h = g.clone();
        for k in 0..3 {
            let e = (seed as usize * 7 + k * 5) % h.edge_count();
            h = h.subdivide(e).unwrap().0;
            assert_eq!(gd(&h), reference, "seed {seed} after {} subdivisions", k + 1);
        }
    }
}

#[test]
fn root_choice_does_not_matter() {
    for seed in 0..20 {
        let g = random_tw2_graph(seed, 12);
        let reference = gd(&g);
        for root in 0..g.vertex_count() {
            let r = gd_treewidth2_maxdeg3_rooted(&g, root).unwrap();
            assert_eq!(r.distribution, reference, "seed {seed} root {root}");
        }
    }
}

#[test]
fn relabelling_preserves_the_distribution() {
    for seed in 0..15 {
        let g = random_tw2_graph(seed, 12);
        let n = g.vertex_count();
        if n.is_multiple_of(7) {
            continue;
        }
        let relabel = |v: usize| (v * 7 + 3) % n;
        let mut edges: Vec<(usize, usize)> = g.edges().iter().map(|e| (relabel(e[1]), relabel(e[0]))).collect();
        edges.reverse();
        let h = Multigraph::from_edges(&edges).unwrap();
        assert_eq!(gd(&h), gd(&g), "seed {seed}");
    }
}

#[test]
fn bridged_dipoles_match_oracle() {
    let g = bridged_dipoles();
    let r = gd_treewidth2_maxdeg3(&g).unwrap();
    assert_eq!(r.distribution, GenusDistribution::from_u64s(&[16, 32, 16]));
    assert_eq!(r.distribution, gd_brute_force(&g, DEFAULT_LIMIT).unwrap());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn generated_graphs_reduce_to_a_dipole(steps in 0usize..40, seed in any::<u64>()) {
        let g = random_cubic_sp(steps, seed);
        prop_assert_eq!(g.vertex_count(), 2 * steps + 2);
        let trace = reduce_to_dipole(&g).unwrap();
        prop_assert_eq!(trace.len(), steps);
    }

    #[test]
    fn string_totals_are_powers_of_two(steps in 0usize..30, seed in any::<u64>()) {
        let s = random_dmt_string(steps, seed);
        let expr = parse_dmt_string(&s).unwrap();
        prop_assert_eq!(expr.trivalent_count(), s.trivalent_count());
        let total = expr.evaluate().total();
        prop_assert_eq!(total, num_bigint::BigUint::from(2u32).pow(s.trivalent_count() as u32));
    }

    #[test]
    fn realized_expressions_parse_back(steps in 0usize..20, seed in any::<u64>()) {
        let expr = parse_dmt_string(&random_dmt_string(steps, seed)).unwrap();
        let again = parse_dmt_string(&expr.realize()).unwrap();
        prop_assert_eq!(again.canonical(), expr.canonical());
    }

    #[test]
    fn tw2_graphs_conserve_embeddings(seed in any::<u64>()) {
        let g = random_tw2_graph(seed, 30);
        let r = gd_treewidth2_maxdeg3(&g).unwrap();
        prop_assert_eq!(r.distribution.total(), spgenus_core::oracle::rotation_census(&g));
        prop_assert!(r.distribution.has_consecutive_support());
    }
}
