//! Acceptance suite. Each criterion prints one PASS/FAIL line with its runtime
//! and budget; the test fails if any criterion fails or overruns.

mod common;

use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_traits::Zero;

use common::{ade_list, cyclic_list, runner, star, CASES};
use ulrich_cycles::classify::{ClassificationEntry, Classifier as GenericClassifier};
use ulrich_cycles::lattice::Cycle;
use ulrich_cycles::{build_ade, build_cyclic, golden_table, AdeFamily, Classifier, DualGraph};

type Outcome = Result<String, String>;
type Criterion = (&'static str, u64, fn() -> Outcome);

fn cycles(entries: &[ClassificationEntry<BigInt>]) -> Vec<Cycle<BigInt>> {
    entries.iter().map(|e| e.cycle.clone()).collect()
}

fn ints(entries: &[ClassificationEntry<BigInt>], f: impl Fn(&ClassificationEntry<BigInt>) -> &BigInt) -> Vec<i64> {
    entries.iter().map(|e| i64::try_from(f(e)).unwrap()).collect()
}

fn c(coeffs: &[i64]) -> Cycle<BigInt> {
    Cycle::from_ints(coeffs)
}

fn ulrich(graph: &DualGraph) -> Result<Vec<ClassificationEntry<BigInt>>, String> {
    let classifier = Classifier::new(graph).map_err(|e| e.to_string())?;
    classifier.enumerate_ulrich(classifier.default_max_steps()).map_err(|e| e.to_string())
}

fn ade_golden_tables() -> Outcome {
    let mut checked = 0;
    for (family, index) in ade_list(12) {
        let graph = build_ade(family, index).map_err(|e| e.to_string())?;
        let found: Vec<(Cycle<BigInt>, BigInt)> =
            ulrich(&graph)?.into_iter().map(|e| (e.cycle, e.colength)).collect();
        let expected: Vec<(Cycle<BigInt>, BigInt)> = golden_table::<BigInt>(family, index)
            .map_err(|e| e.to_string())?
            .into_iter()
            .map(|g| (g.cycle, g.colength))
            .collect();
        if found != expected {
            return Err(format!("{family}{index}: enumerated {found:?}, table {expected:?}"));
        }
        checked += 1;
    }
    Ok(format!("{checked} graphs"))
}

fn ulrich_counts() -> Outcome {
    let mut cases: Vec<(AdeFamily, usize, usize)> = Vec::new();
    for m in 1..=6 {
        cases.push((AdeFamily::A, 2 * m, m));
        cases.push((AdeFamily::A, 2 * m + 1, m + 1));
        if m >= 2 {
            cases.push((AdeFamily::D, 2 * m, m + 2));
            cases.push((AdeFamily::D, 2 * m + 1, m + 1));
        }
    }
    cases.extend([(AdeFamily::E, 6, 2), (AdeFamily::E, 7, 3), (AdeFamily::E, 8, 2)]);
    for &(family, index, want) in &cases {
        let got = ulrich(&build_ade(family, index).map_err(|e| e.to_string())?)?.len();
        if got != want {
            return Err(format!("{family}{index}: {got} Ulrich cycles, expected {want}"));
        }
    }
    Ok(format!("{} graphs", cases.len()))
}

fn cyclic_quotients() -> Outcome {
    let mut checked = 0;
    for (n, q, graph) in cyclic_list(50) {
        if n < 3 || q == 1 || graph.weights().iter().all(|&w| w == -2) {
            continue;
        }
        let classifier = Classifier::new(&graph).map_err(|e| e.to_string())?;
        let found = cycles(&classifier.enumerate_ulrich(classifier.default_max_steps()).map_err(|e| e.to_string())?);
        if found != [classifier.analysis().fundamental_cycle().clone()] {
            return Err(format!("1/{n}(1,{q}): {found:?}"));
        }
        checked += 1;
    }
    Ok(format!("{checked} non-Gorenstein quotients"))
}

fn star_graph() -> Outcome {
    let graph = star();
    let classifier = Classifier::new(&graph).map_err(|e| e.to_string())?;
    let found = classifier.enumerate_ulrich(classifier.default_max_steps()).map_err(|e| e.to_string())?;
    let expected =
        vec![c(&[1, 1, 1, 1, 1, 1, 1]), c(&[2, 2, 1, 2, 1, 2, 1]), c(&[3, 2, 1, 2, 1, 2, 1])];
    if cycles(&found) != expected {
        return Err(format!("Ulrich set {:?}", cycles(&found)));
    }
    let checks = [
        ("colengths", ints(&found, |e| &e.colength), vec![1, 2, 3]),
        ("multiplicities", ints(&found, |e| &e.multiplicity), vec![3, 6, 9]),
        ("min_gens", ints(&found, |e| &e.min_gens), vec![4, 4, 4]),
    ];
    for (name, got, want) in checks {
        if got != want {
            return Err(format!("{name} {got:?}, expected {want:?}"));
        }
    }
    let z0 = classifier.analysis().fundamental_cycle().clone();
    let bound = z0.scaled(&BigInt::from(6));
    let special: Vec<_> = cycles(&classifier.enumerate_special(graph.vertex_count() + 1).map_err(|e| e.to_string())?)
        .into_iter()
        .filter(|z| z.le(&bound))
        .collect();
    if special != expected {
        return Err(format!("special set within 6 Z_0 is {special:?}"));
    }
    let oracle = classifier.oracle_classify(6).map_err(|e| e.to_string())?;
    if oracle.special != oracle.ulrich {
        return Err(format!("pointwise special {:?} differs from Ulrich {:?}", oracle.special, oracle.ulrich));
    }
    Ok("3 Ulrich cycles, all special cycles Ulrich".into())
}

fn seven_three() -> Outcome {
    let graph = build_cyclic(7, 3).map_err(|e| e.to_string())?;
    let classifier = Classifier::new(&graph).map_err(|e| e.to_string())?;
    let special = cycles(&classifier.enumerate_special(graph.vertex_count() + 1).map_err(|e| e.to_string())?);
    if special != [c(&[1, 1, 1]), c(&[1, 2, 1])] {
        return Err(format!("special set {special:?}"));
    }
    let found = cycles(&classifier.enumerate_ulrich(classifier.default_max_steps()).map_err(|e| e.to_string())?);
    if found != [c(&[1, 1, 1])] {
        return Err(format!("Ulrich set {found:?}"));
    }
    let u = classifier.analysis().u_invariant(&c(&[1, 2, 1])).map_err(|e| e.to_string())?;
    if u.is_zero() {
        return Err("U((1,2,1)) = 0".into());
    }
    Ok(format!("U((1,2,1)) = {u}"))
}

fn oracle_equivalence() -> Outcome {
    let mut corpus: Vec<(String, DualGraph)> = ade_list(8)
        .into_iter()
        .map(|(f, n)| (format!("{f}{n}"), build_ade(f, n).unwrap()))
        .collect();
    corpus.extend(cyclic_list(12).into_iter().map(|(n, q, g)| (format!("1/{n}(1,{q})"), g)));
    corpus.push(("star".into(), star()));
    for (name, graph) in &corpus {
        let classifier = Classifier::new(graph).map_err(|e| format!("{name}: {e}"))?;
        let bound = classifier.analysis().fundamental_cycle().scaled(&BigInt::from(6));
        let within = |v: Vec<Cycle<BigInt>>| -> Vec<Cycle<BigInt>> { v.into_iter().filter(|z| z.le(&bound)).collect() };
        let special = within(cycles(&classifier.enumerate_special(graph.vertex_count() + 1).map_err(|e| e.to_string())?));
        let ulrich = within(cycles(&classifier.enumerate_ulrich(classifier.default_max_steps()).map_err(|e| e.to_string())?));
        let oracle = classifier.oracle_classify(6).map_err(|e| e.to_string())?;
        if special != oracle.special {
            return Err(format!("{name}: special chain {special:?}, pointwise {:?}", oracle.special));
        }
        if ulrich != oracle.ulrich {
            return Err(format!("{name}: Ulrich chain {ulrich:?}, pointwise {:?}", oracle.ulrich));
        }
    }
    Ok(format!("{} graphs", corpus.len()))
}

fn property_suites() -> Outcome {
    let suites = common::property_suites();
    let mut failures = Vec::new();
    for (name, suite) in &suites {
        if let Err(e) = suite(&mut runner(CASES)) {
            failures.push(format!("{name}: {e}"));
        }
    }
    if failures.is_empty() {
        Ok(format!("{} suites x {CASES} cases", suites.len()))
    } else {
        Err(failures.join("; "))
    }
}

fn rdp_cross_check() -> Outcome {
    let mut checked = 0;
    let mut divergences = Vec::new();
    for (family, index) in ade_list(8) {
        let graph = build_ade(family, index).map_err(|e| e.to_string())?;
        let classifier = GenericClassifier::<i64>::new(&graph).map_err(|e| e.to_string())?;
        let analysis = classifier.analysis();
        for z in analysis.brute_force_anti_nef(6) {
            let u_zero = analysis.u_invariant(&z).map_err(|e| e.to_string())? == 0;
            let special = classifier.is_special_cycle(&z).map_err(|e| e.to_string())?;
            if u_zero != special {
                divergences.push(format!("{family}{index} {z}: U = 0 is {u_zero}, special is {special}"));
            }
            checked += 1;
        }
    }
    if divergences.is_empty() {
        Ok(format!("{checked} anti-nef cycles, no divergence"))
    } else {
        Err(divergences.join("; "))
    }
}

#[test]
fn acceptance() {
    let criteria: [Criterion; 8] = [
        ("ADE golden tables", 1, ade_golden_tables),
        ("Ulrich counts", 1, ulrich_counts),
        ("cyclic quotients have only Z_0", 5, cyclic_quotients),
        ("star graph", 1, star_graph),
        ("1/7(1,3) special vs Ulrich", 1, seven_three),
        ("oracle equivalence at 6 Z_0", 30, oracle_equivalence),
        ("property suites", 60, property_suites),
        ("RDP U-criterion cross-check", 10, rdp_cross_check),
    ];
    let mut failed = 0;
    for (k, (name, budget, check)) in criteria.into_iter().enumerate() {
        let start = Instant::now();
        let outcome = check();
        let elapsed = start.elapsed();
        let in_time = elapsed <= Duration::from_secs(budget);
        let status = if outcome.is_ok() && in_time { "PASS" } else { "FAIL" };
        let detail = match &outcome {
            Ok(d) => d.clone(),
            Err(e) => e.clone(),
        };
        let overrun = if in_time { "" } else { " OVER BUDGET" };
        println!(
            "[{status}] {}. {name}: {detail} ({:.3} s of {budget} s{overrun})",
            k + 1,
            elapsed.as_secs_f64()
        );
        if status == "FAIL" {
            failed += 1;
        }
    }
    assert_eq!(failed, 0, "{failed} acceptance criteria failed");
}
