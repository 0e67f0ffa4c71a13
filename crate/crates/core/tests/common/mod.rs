//! Graph generators, corpus fixtures and the property suites shared by the
//! integration and acceptance targets.
#![allow(dead_code)]

use proptest::prelude::*;
use proptest::sample::Index;
use proptest::test_runner::{Config, RngAlgorithm, TestCaseError, TestRng, TestRunner};

use ulrich_cycles::builders::validate;
use ulrich_cycles::classify::Classifier;
use ulrich_cycles::invariants::Analysis;
use ulrich_cycles::lattice::Cycle;
use ulrich_cycles::{build_ade, build_cyclic, fundamental_cycle, AdeFamily, DualGraph};

pub type C = Cycle<i64>;

pub const CASES: u32 = 1000;
pub const MAX_VERTICES: usize = 8;

pub fn runner(cases: u32) -> TestRunner {
    let config = Config {
        cases,
        failure_persistence: None,
        max_global_rejects: 200_000,
        ..Config::default()
    };
    TestRunner::new_with_rng(config, TestRng::deterministic_rng(RngAlgorithm::ChaCha))
}

pub fn ade_list(max_index: usize) -> Vec<(AdeFamily, usize)> {
    let mut out: Vec<_> = (1..=max_index).map(|n| (AdeFamily::A, n)).collect();
    out.extend((4..=max_index).map(|n| (AdeFamily::D, n)));
    out.extend((6..=max_index.min(8)).map(|n| (AdeFamily::E, n)));
    out
}

/// Central `-3` curve with three arms of two `-2` curves; the center is `E1`.
pub fn star() -> DualGraph {
    DualGraph::new(
        vec![-3, -2, -2, -2, -2, -2, -2],
        [(0, 1), (1, 2), (0, 3), (3, 4), (0, 5), (5, 6)],
    )
    .unwrap()
}

pub fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 { a } else { gcd(b, a % b) }
}

/// Cyclic quotient graphs `1/n(1,q)` with `1 <= q < n`, `gcd(n,q) = 1`.
pub fn cyclic_list(max_n: u64) -> Vec<(u64, u64, DualGraph)> {
    let mut out = Vec::new();
    for n in 2..=max_n {
        for q in 1..n {
            if gcd(n, q) == 1 {
                out.push((n, q, build_cyclic(n, q).unwrap()));
            }
        }
    }
    out
}

pub fn is_rational(graph: &DualGraph) -> bool {
    validate::<i64>(graph).is_valid_rational()
}

pub fn multiplicity(graph: &DualGraph) -> i64 {
    Analysis::<i64>::new(graph).unwrap().graph_multiplicity()
}

/// Smallest anti-nef cycle `>= seed`, by Laufer's procedure.
pub fn anti_nef_hull(graph: &DualGraph, seed: &C) -> C {
    let mut z = seed.clone();
    while let Some((i, _)) = graph.first_positive_vertex(&z).unwrap() {
        z.add_unit(i);
    }
    z
}

fn tree_edges(parents: &[Index]) -> Vec<(usize, usize)> {
    parents.iter().enumerate().map(|(k, p)| (p.index(k + 1), k + 1)).collect()
}

fn definite_weight() -> impl Strategy<Value = i64> {
    prop_oneof![3 => Just(-2i64), 1 => -5i64..=-3]
}

/// Random tree with weights `<= -2`, up to eight vertices.
pub fn weighted_tree() -> impl Strategy<Value = DualGraph> {
    (1..=MAX_VERTICES)
        .prop_flat_map(|r| (prop::collection::vec(definite_weight(), r), prop::collection::vec(any::<Index>(), r - 1)))
        .prop_map(|(weights, parents)| DualGraph::new(weights, tree_edges(&parents)).unwrap())
}

/// Any weights, a spanning tree plus up to three extra edges; not necessarily
/// definite.
pub fn lattice_graph() -> impl Strategy<Value = DualGraph> {
    (1..=MAX_VERTICES)
        .prop_flat_map(|r| {
            (
                prop::collection::vec(-6i64..=2, r),
                prop::collection::vec(any::<Index>(), r - 1),
                prop::collection::vec((any::<Index>(), any::<Index>()), 0..=3),
            )
        })
        .prop_map(|(weights, parents, extra)| {
            let r = weights.len();
            let mut edges = tree_edges(&parents);
            for (a, b) in extra {
                let (i, j) = (a.index(r), b.index(r));
                let e = (i.min(j), i.max(j));
                if i != j && !edges.iter().any(|&(x, y)| (x.min(y), x.max(y)) == e) {
                    edges.push(e);
                }
            }
            DualGraph::new(weights, edges).unwrap()
        })
}

/// Connected negative definite graphs with weights `<= -2`, possibly with
/// cycles and possibly not rational.
pub fn definite_graph() -> impl Strategy<Value = DualGraph> {
    (1..=MAX_VERTICES)
        .prop_flat_map(|r| {
            (
                prop::collection::vec(definite_weight(), r),
                prop::collection::vec(any::<Index>(), r - 1),
                prop::option::weighted(0.3, (any::<Index>(), any::<Index>())),
            )
        })
        .prop_filter_map("not definite", |(weights, parents, extra)| {
            let r = weights.len();
            let mut edges = tree_edges(&parents);
            if let Some((a, b)) = extra {
                let (i, j) = (a.index(r), b.index(r));
                let e = (i.min(j), i.max(j));
                if i != j && !edges.iter().any(|&(x, y)| (x.min(y), x.max(y)) == e) {
                    edges.push(e);
                }
            }
            let g = DualGraph::new(weights, edges).unwrap();
            g.is_negative_definite().then_some(g)
        })
}

fn corpus_graph() -> impl Strategy<Value = DualGraph> {
    let mut corpus: Vec<DualGraph> =
        ade_list(MAX_VERTICES).into_iter().map(|(f, n)| build_ade(f, n).unwrap()).collect();
    corpus.extend(
        cyclic_list(30).into_iter().map(|(_, _, g)| g).filter(|g| g.vertex_count() <= MAX_VERTICES),
    );
    corpus.push(star());
    prop::sample::select(corpus)
}

/// Rational graphs on at most eight vertices: random trees plus the ADE,
/// cyclic quotient and star fixtures.
pub fn rational_graph() -> impl Strategy<Value = DualGraph> {
    prop_oneof![
        3 => weighted_tree().prop_filter("not rational", is_rational),
        1 => corpus_graph(),
    ]
}

pub fn non_gorenstein_graph() -> impl Strategy<Value = DualGraph> {
    rational_graph().prop_filter("Gorenstein", |g| multiplicity(g) >= 3)
}

fn graph_with_cycles(count: usize, range: std::ops::RangeInclusive<i64>) -> impl Strategy<Value = (DualGraph, Vec<C>)> {
    lattice_graph().prop_flat_map(move |g| {
        let r = g.vertex_count();
        let cycle = prop::collection::vec(range.clone(), r).prop_map(C::new);
        (Just(g), prop::collection::vec(cycle, count))
    })
}

fn ok<E: std::fmt::Display>(e: E) -> TestCaseError {
    TestCaseError::fail(e.to_string())
}

// --- property suites -------------------------------------------------------

pub type SuiteFn = fn(&mut TestRunner) -> Result<(), String>;

/// Named property suites, in the order they are reported.
pub fn property_suites() -> Vec<(&'static str, SuiteFn)> {
    vec![
        ("intersection symmetry and bilinearity", intersection_symmetry_bilinearity),
        ("genus parity", genus_parity),
        ("genus additivity", genus_additivity),
        ("inf-closure of anti-nef pairs", inf_closure),
        ("Laufer minimality vs brute force", laufer_minimality),
        ("colength recursion along chains", colength_recursion),
        ("module coefficient bound", module_coefficient_bound),
        ("U monotone along filtrations", u_monotone),
        ("U(Z_0) = 0", u_vanishes_at_fundamental_cycle),
    ]
}

fn intersection_symmetry_bilinearity(runner: &mut TestRunner) -> Result<(), String> {
    let strategy = (graph_with_cycles(3, -4..=4), -3i64..=3, -3i64..=3);
    runner
        .run(&strategy, |((g, cs), a, b)| {
            let (x, y, w) = (&cs[0], &cs[1], &cs[2]);
            prop_assert_eq!(g.intersection(x, y).map_err(ok)?, g.intersection(y, x).map_err(ok)?);
            let combo = &x.scaled(&a) + &y.scaled(&b);
            let lhs = g.intersection(&combo, w).map_err(ok)?;
            let rhs = a * g.intersection(x, w).map_err(ok)? + b * g.intersection(y, w).map_err(ok)?;
            prop_assert_eq!(lhs, rhs);
            Ok(())
        })
        .map_err(|e| e.to_string())
}

fn genus_parity(runner: &mut TestRunner) -> Result<(), String> {
    runner
        .run(&graph_with_cycles(1, -6..=6), |(g, cs)| {
            let z = &cs[0];
            let total = g.intersection(z, z).map_err(ok)? + g.canonical_degree(z).map_err(ok)?;
            prop_assert_eq!(total.rem_euclid(2), 0);
            prop_assert_eq!(g.virtual_genus(z).map_err(ok)?, total / 2 + 1);
            Ok(())
        })
        .map_err(|e| e.to_string())
}

fn genus_additivity(runner: &mut TestRunner) -> Result<(), String> {
    runner
        .run(&graph_with_cycles(2, -4..=4), |(g, cs)| {
            let (x, y) = (&cs[0], &cs[1]);
            let lhs = g.virtual_genus(&(x + y)).map_err(ok)?;
            let rhs = g.virtual_genus(x).map_err(ok)? + g.virtual_genus(y).map_err(ok)?
                + g.intersection(x, y).map_err(ok)?
                - 1;
            prop_assert_eq!(lhs, rhs);
            Ok(())
        })
        .map_err(|e| e.to_string())
}

fn positive_seeds(count: usize) -> impl Strategy<Value = (DualGraph, Vec<C>)> {
    definite_graph()
        .prop_filter("disconnected", |g| g.is_connected())
        .prop_flat_map(move |g| {
            let r = g.vertex_count();
            let seed = prop::collection::vec(0i64..=3, r)
                .prop_filter("zero seed", |v| v.iter().any(|&a| a > 0))
                .prop_map(C::new);
            (Just(g), prop::collection::vec(seed, count))
        })
}

fn inf_closure(runner: &mut TestRunner) -> Result<(), String> {
    runner
        .run(&positive_seeds(2), |(g, seeds)| {
            let x = anti_nef_hull(&g, &seeds[0]);
            let y = anti_nef_hull(&g, &seeds[1]);
            prop_assert!(g.is_anti_nef(&x).map_err(ok)? && g.is_anti_nef(&y).map_err(ok)?);
            let m = x.inf(&y).map_err(ok)?;
            prop_assert!(m.is_positive());
            prop_assert!(g.is_anti_nef(&m).map_err(ok)?, "inf {} of {} and {} is not anti-nef", m, x, y);
            Ok(())
        })
        .map_err(|e| e.to_string())
}

fn laufer_minimality(runner: &mut TestRunner) -> Result<(), String> {
    let strategy = definite_graph().prop_filter("disconnected", |g| g.is_connected());
    runner
        .run(&strategy, |g| {
            let analysis = Analysis::<i64>::new(&g).map_err(ok)?;
            let z0 = analysis.fundamental_cycle().clone();
            let all: Vec<usize> = (0..g.vertex_count()).collect();
            prop_assert_eq!(&fundamental_cycle::<i64>(&g, &all).map_err(ok)?, &z0);
            prop_assert!(g.is_anti_nef(&z0).map_err(ok)?);
            let cycles = analysis.brute_force_anti_nef(2);
            prop_assert!(cycles.contains(&z0));
            for z in &cycles {
                prop_assert!(z0.le(z), "{} is anti-nef but not above Z_0 = {}", z, z0);
            }
            Ok(())
        })
        .map_err(|e| e.to_string())
}

/// `colength(Z_k) = colength(Z_{k-1}) - Y_k.Z_{k-1} + 1 - p_a(Y_k)` along a chain.
fn check_recursion(analysis: &Analysis<'_, i64>, chain: &ulrich_cycles::invariants::Filtration<i64>) -> Result<(), TestCaseError> {
    let g = analysis.graph();
    chain.check(g).map_err(ok)?;
    let mut prev = chain.base.clone();
    for step in &chain.steps {
        let y = &step.increment;
        let expected = analysis.colength(&prev).map_err(ok)? - g.intersection(y, &prev).map_err(ok)? + 1
            - g.virtual_genus(y).map_err(ok)?;
        prop_assert_eq!(analysis.colength(&step.cycle).map_err(ok)?, expected);
        prev = step.cycle.clone();
    }
    Ok(())
}

fn colength_recursion(runner: &mut TestRunner) -> Result<(), String> {
    runner
        .run(&rational_graph(), |g| {
            let classifier = Classifier::<i64>::new(&g).map_err(ok)?;
            let analysis = classifier.analysis();
            let special = classifier.enumerate_special(g.vertex_count() + 1).map_err(ok)?;
            let ulrich = classifier.enumerate_ulrich(classifier.default_max_steps()).map_err(ok)?;
            for entry in special.iter().chain(&ulrich) {
                check_recursion(analysis, &entry.chain)?;
                prop_assert_eq!(entry.colength, entry.chain.len() as i64 + 1);
            }
            for z in analysis.brute_force_anti_nef(3) {
                check_recursion(analysis, &analysis.filtration(&z).map_err(ok)?)?;
            }
            Ok(())
        })
        .map_err(|e| e.to_string())
}

fn module_coefficient_bound(runner: &mut TestRunner) -> Result<(), String> {
    runner
        .run(&rational_graph(), |g| {
            let analysis = Analysis::<i64>::new(&g).map_err(ok)?;
            let z0 = analysis.fundamental_cycle().clone();
            for z in analysis.brute_force_anti_nef(3) {
                let colength = analysis.colength(&z).map_err(ok)?;
                for i in 0..g.vertex_count() {
                    prop_assert!(*z.coeff(i) <= z0.coeff(i) * colength, "E{} of {}", i + 1, z);
                }
                analysis.special_module_indices(&z).map_err(ok)?;
            }
            Ok(())
        })
        .map_err(|e| e.to_string())
}

fn u_monotone(runner: &mut TestRunner) -> Result<(), String> {
    runner
        .run(&non_gorenstein_graph(), |g| {
            let analysis = Analysis::<i64>::new(&g).map_err(ok)?;
            for z in analysis.brute_force_anti_nef(4) {
                let chain = analysis.filtration(&z).map_err(ok)?;
                let us = chain.cycles().map(|c| analysis.u_invariant(c)).collect::<Result<Vec<_>, _>>().map_err(ok)?;
                prop_assert!(us.windows(2).all(|w| w[0] <= w[1]), "U along the filtration of {}: {:?}", z, us);
            }
            Ok(())
        })
        .map_err(|e| e.to_string())
}

fn u_vanishes_at_fundamental_cycle(runner: &mut TestRunner) -> Result<(), String> {
    runner
        .run(&rational_graph(), |g| {
            let analysis = Analysis::<i64>::new(&g).map_err(ok)?;
            prop_assert_eq!(analysis.u_invariant(analysis.fundamental_cycle()).map_err(ok)?, 0);
            Ok(())
        })
        .map_err(|e| e.to_string())
}
