//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.

mod common;

use std::time::{Duration, Instant};

use num_bigint::BigUint;
use proptest::prelude::*;
use proptest::test_runner::{Config, TestRunner};

use spgenus_core::decompose::{random_cubic_sp, DmtExpression};
use spgenus_core::engine::{
    gd_cubic_biconnected_sp, gd_cubic_with_terminals, gd_treewidth2_maxdeg3, ComputationReport,
};
use spgenus_core::oracle::{gd_brute_force, DEFAULT_LIMIT};
use spgenus_core::productions::{close_parallel, join_parallel, mod_parallel, mod_series};
use spgenus_core::{ClosurePartials, GenusDistribution, Multigraph, UUPartials};

use common::*;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn worked_example() -> Outcome {
    let g = example_graph();
    ensure(g.vertex_count() == 18, || {
        format!("example has {} vertices", g.vertex_count())
    })?;
    let start = Instant::now();
    let r = gd_cubic_with_terminals(&g, 0, 1).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    let expected = GenusDistribution::from_u64s(&EXAMPLE_GD);
    ensure(r.distribution == expected, || format!("got {}", r.distribution))?;
    ensure(elapsed < Duration::from_secs(1), || format!("took {elapsed:?}"))?;
    // automatic terminal choice must agree
    let auto = gd_cubic_biconnected_sp(&g).map_err(|e| e.to_string())?;
    ensure(auto.distribution == expected, || {
        format!("auto terminals gave {}", auto.distribution)
    })?;
    Ok(format!("{} in {elapsed:?}", r.distribution))
}

fn intermediate_pinning() -> Outcome {
    let g = example_graph();
    let r = gd_cubic_with_terminals(&g, 0, 1).map_err(|e| e.to_string())?;
    let trace = r.cubic.ok_or("no cubic trace")?;
    let d2 = UUPartials::from_u64s(&[2], &[2]);
    ensure(DmtExpression::d_hat_2().evaluate() == d2, || "D-hat-2".into())?;
    let expected = [
        UUPartials::from_u64s(&[12], &[4]),
        UUPartials::from_u64s(&[24, 16], &[8, 16]),
        UUPartials::from_u64s(&[8, 16], &[8, 32]),
    ];
    ensure(trace.strands.len() == 3, || "expected three strands".into())?;
    for (i, (s, want)) in trace.strands.iter().zip(&expected).enumerate() {
        ensure(&s.pgd == want, || format!("strand {} pgd {:?}", i + 1, s.pgd))?;
    }
    // every D-hat-2 subexpression of the recovered strands evaluates to 2uu.0 + 2uu'0
    fn d2_leaves(e: &DmtExpression, out: &mut Vec<UUPartials>) {
        match e {
            DmtExpression::K2 => {}
            DmtExpression::Parallel(a, b) => {
                if **a == DmtExpression::K2 && **b == DmtExpression::K2 {
                    out.push(e.evaluate());
                } else {
                    d2_leaves(a, out);
                    d2_leaves(b, out);
                }
            }
            DmtExpression::Series(parts) => parts.iter().for_each(|p| d2_leaves(p, out)),
        }
    }
    let mut leaves = Vec::new();
    trace.strands.iter().for_each(|s| d2_leaves(&s.expression, &mut leaves));
    ensure(leaves.len() == 6 && leaves.iter().all(|l| *l == d2), || {
        format!("D-hat-2 leaves {leaves:?}")
    })?;
    let closure = ClosurePartials::from_u64s(&[0, 288, 192], &[0, 192, 256], &[32, 64]);
    ensure(trace.closure == closure, || format!("closure {:?}", trace.closure))?;
    Ok("strand, D-hat-2 and closure pgds exact".into())
}

fn check_conservation(g: &Multigraph, gd: &GenusDistribution) -> Result<(), String> {
    let expected = BigUint::from(2u32).pow(trivalent_count(g) as u32);
    ensure(gd.total() == expected, || format!("total {} != {expected}", gd.total()))?;
    ensure(gd.has_consecutive_support(), || {
        format!("support of {gd} not consecutive")
    })?;
    let beta = g.cycle_rank();
    ensure(gd.max_genus().unwrap_or(0) <= beta, || {
        format!("max genus of {gd} exceeds {beta}")
    })
}

fn cubic_instances() -> Vec<Multigraph> {
    (0..210u64)
        .map(|seed| random_cubic_sp((seed % 7) as usize, seed))
        .collect()
}

fn tw2_instances() -> Vec<Multigraph> {
    let mut out = vec![bridged_dipoles()];
    out.extend((0..60u64).map(|seed| random_tw2_graph(seed, 16)));
    out
}

fn compare_with_oracle(
    instances: &[Multigraph],
    engine: fn(&Multigraph) -> Result<ComputationReport, spgenus_core::EngineError>,
) -> Result<(), String> {
    for (i, g) in instances.iter().enumerate() {
        let ours = engine(g).map_err(|e| format!("instance {i}: {e}"))?.distribution;
        let theirs = gd_brute_force(g, DEFAULT_LIMIT).map_err(|e| format!("instance {i}: {e}"))?;
        ensure(ours == theirs, || {
            format!("instance {i}: engine {ours}, oracle {theirs}")
        })?;
    }
    Ok(())
}

fn oracle_equivalence() -> Outcome {
    let instances = cubic_instances();
    let largest = instances.iter().map(Multigraph::vertex_count).max().unwrap_or(0);
    compare_with_oracle(&instances, gd_cubic_biconnected_sp)?;
    Ok(format!("{} instances, up to {largest} vertices", instances.len()))
}

fn pipeline_equivalence() -> Outcome {
    let instances = tw2_instances();
    let bridged = gd_treewidth2_maxdeg3(&instances[0])
        .map_err(|e| e.to_string())?
        .distribution;
    ensure(bridged == GenusDistribution::from_u64s(&[16, 32, 16]), || {
        format!("bridged dipoles gave {bridged}")
    })?;
    compare_with_oracle(&instances, gd_treewidth2_maxdeg3)?;
    let largest = instances.iter().map(Multigraph::vertex_count).max().unwrap_or(0);
    Ok(format!("{} instances, up to {largest} vertices", instances.len()))
}

fn conservation() -> Outcome {
    let mut count = 0;
    let example = example_graph();
    let r = gd_cubic_with_terminals(&example, 0, 1).map_err(|e| e.to_string())?;
    check_conservation(&example, &r.distribution)?;
    count += 1;
    for g in cubic_instances().iter().chain(&tw2_instances()) {
        let gd = gd_treewidth2_maxdeg3(g).map_err(|e| e.to_string())?.distribution;
        check_conservation(g, &gd).map_err(|e| format!("instance {count}: {e}"))?;
        count += 1;
    }
    for steps in [50, 200] {
        let g = random_cubic_sp(steps, steps as u64);
        check_conservation(
            &g,
            &gd_cubic_biconnected_sp(&g).map_err(|e| e.to_string())?.distribution,
        )?;
        count += 1;
    }
    Ok(format!("{count} instances"))
}

fn sparse_series() -> impl Strategy<Value = GenusDistribution> {
    prop::collection::vec(prop_oneof![3 => Just(0u64), 1 => 1u64..1000], 0..5)
        .prop_map(|v| GenusDistribution::from_u64s(&v))
}

fn sparse_uu() -> impl Strategy<Value = UUPartials> {
    (sparse_series(), sparse_series()).prop_map(|(uu_dot, uu_prime)| UUPartials { uu_dot, uu_prime })
}

fn sparse_closure() -> impl Strategy<Value = ClosurePartials> {
    (sparse_series(), sparse_series(), sparse_series()).prop_map(|(ss_dot, ss_prime, dd_dprime)| ClosurePartials {
        ss_dot,
        ss_prime,
        dd_dprime,
    })
}

fn production_properties() -> Outcome {
    const CASES: u32 = 10_000;
    let mut runner = TestRunner::new(Config {
        cases: CASES,
        failure_persistence: None,
        ..Config::default()
    });
    let four = BigUint::from(4u32);
    runner
        .run(&(sparse_uu(), sparse_uu(), sparse_closure()), |(a, b, c)| {
            prop_assert_eq!(mod_parallel(&a, &b), mod_parallel(&b, &a));
            prop_assert_eq!(mod_series(&a, &b), mod_series(&b, &a));
            prop_assert_eq!(join_parallel(&a, &b), join_parallel(&b, &a));
            prop_assert_eq!(mod_series(&a, &UUPartials::k2()), a.clone());
            prop_assert_eq!(mod_series(&UUPartials::k2(), &a), a.clone());
            let ab = a.total() * b.total();
            prop_assert_eq!(mod_parallel(&a, &b).total(), &four * &ab);
            prop_assert_eq!(mod_series(&a, &b).total(), ab.clone());
            prop_assert_eq!(join_parallel(&a, &b).total(), ab);
            prop_assert_eq!(close_parallel(&c, &a).total(), &four * c.total() * a.total());
            Ok(())
        })
        .map_err(|e| e.to_string())?;
    Ok(format!("{CASES} cases"))
}

fn median_runtime(g: &Multigraph, runs: usize) -> Result<Duration, String> {
    let mut samples = Vec::with_capacity(runs);
    for _ in 0..runs {
        let start = Instant::now();
        gd_cubic_biconnected_sp(g).map_err(|e| e.to_string())?;
        samples.push(start.elapsed());
    }
    samples.sort();
    Ok(samples[runs / 2])
}

fn scaling() -> Outcome {
    const BOUND: f64 = 5.0;
    let sizes = [500usize, 1000, 2000];
    let mut times = Vec::new();
    for &n in &sizes {
        // average over a few instances per size to smooth shape variance
        let mut total = Duration::ZERO;
        for seed in 0..3u64 {
            let g = random_cubic_sp(n / 2 - 1, 1000 + seed);
            total += median_runtime(&g, 5)?;
        }
        times.push(total / 3);
    }
    let ratios: Vec<f64> = times
        .windows(2)
        .map(|w| w[1].as_secs_f64() / w[0].as_secs_f64())
        .collect();
    let detail = format!(
        "t = {:?}; ratios {}",
        times,
        ratios.iter().map(|r| format!("{r:.2}")).collect::<Vec<_>>().join(", ")
    );
    ensure(ratios.iter().all(|&r| r <= BOUND), || detail.clone())?;
    Ok(detail)
}

fn main() {
    let criteria: [Criterion; 7] = [
        ("worked example exactness", worked_example),
        ("intermediate pinning", intermediate_pinning),
        ("oracle equivalence (cubic)", oracle_equivalence),
        ("pipeline equivalence (treewidth 2)", pipeline_equivalence),
        ("conservation", conservation),
        ("production table properties", production_properties),
        ("scaling sanity", scaling),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(detail) => println!("criterion {}: {name}: PASS ({detail})", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {}: {name}: FAIL ({why})", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
