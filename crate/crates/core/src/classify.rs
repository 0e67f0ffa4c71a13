//! Special and Ulrich cycles: pointwise tests, chain enumeration, a brute-force
//! oracle, and the closed-form tables for rational double points.

use std::collections::BTreeMap;
use std::fmt;


use crate::builders::{build_ade, check_ade, validate, AdeFamily, ValidationReport};
use crate::error::{Error, Result};
use crate::invariants::{fundamental_cycle, Analysis, Filtration, FiltrationStep};
use crate::lattice::{Cycle, DualGraph};
use crate::scalar::Scalar;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CycleKind {
    Special,
    Ulrich,
    Both,
}

impl CycleKind {
    fn from_flags(special: bool, ulrich: bool) -> Option<Self> {
        match (special, ulrich) {
            (true, true) => Some(Self::Both),
            (true, false) => Some(Self::Special),
            (false, true) => Some(Self::Ulrich),
            (false, false) => None,
        }
    }

    pub fn is_special(self) -> bool {
        matches!(self, Self::Special | Self::Both)
    }

    pub fn is_ulrich(self) -> bool {
        matches!(self, Self::Ulrich | Self::Both)
    }
}

impl fmt::Display for CycleKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Special => "special",
            Self::Ulrich => "ulrich",
            Self::Both => "both",
        })
    }
}

/// One classified cycle with its invariants and a witness chain.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassificationEntry<T> {
    pub cycle: Cycle<T>,
    pub colength: T,
    pub multiplicity: T,
    pub min_gens: T,
    /// 0-based vertices `i` with `coeff_i(Z) = n_i * colength`.
    pub module_indices: Vec<usize>,
    pub chain: Filtration<T>,
    pub kind: CycleKind,
}

/// Output of the pointwise oracle.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OracleClassification<T> {
    pub special: Vec<Cycle<T>>,
    pub ulrich: Vec<Cycle<T>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Mode {
    Special,
    Ulrich,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum DepthLimit {
    /// Stop quietly once the chain has this many steps.
    Cap(usize),
    /// Fail if a chain would need more steps than this.
    Fail(usize),
}

struct Frame<T> {
    chain: Filtration<T>,
    /// Vertices whose coefficient in every `Y_k` so far equals `n_i`.
    indices: Vec<usize>,
}

/// Classification on a validated rational dual graph.
#[derive(Clone, Debug)]
pub struct Classifier<'g, T> {
    analysis: Analysis<'g, T>,
    report: ValidationReport<T>,
    rdp: bool,
}

impl<'g, T: Scalar> Classifier<'g, T> {
    /// Validates the graph; only connected, negative definite, rational graphs
    /// with all weights `<= -2` are accepted.
    pub fn new(graph: &'g DualGraph) -> Result<Self> {
        let report = validate::<T>(graph);
        if !report.is_valid_rational() {
            return Err(Error::InvalidGraph(report.failures.join("; ")));
        }
        let analysis = Analysis::new(graph)?;
        let rdp = analysis.is_rational_double_point();
        Ok(Self { analysis, report, rdp })
    }

    pub fn analysis(&self) -> &Analysis<'g, T> {
        &self.analysis
    }

    pub fn report(&self) -> &ValidationReport<T> {
        &self.report
    }

    pub fn graph(&self) -> &'g DualGraph {
        self.analysis.graph()
    }

    /// Multiplicity two, i.e. a rational double point.
    pub fn is_rational_double_point(&self) -> bool {
        self.rdp
    }

    pub fn is_special_cycle(&self, z: &Cycle<T>) -> Result<bool> {
        Ok(!self.analysis.special_module_indices(z)?.is_empty())
    }

    /// On rational double points Ulrich and special cycles coincide; otherwise
    /// the test is `U(Z) = 0`, which needs `mu(I_Z) > 2`.
    pub fn is_ulrich_cycle(&self, z: &Cycle<T>) -> Result<bool> {
        if self.rdp {
            return self.is_special_cycle(z);
        }
        let gens = self.analysis.min_gens(z)?;
        if gens <= T::from_int(2) {
            return Err(Error::Unsupported(format!("mu(I_Z) = {gens} <= 2 for Z = {z}")));
        }
        Ok(self.analysis.u_invariant(z)?.is_zero())
    }

    /// Every special cycle reachable by a chain of at most `max_colength - 1`
    /// steps, sorted lexicographically.
    pub fn enumerate_special(&self, max_colength: usize) -> Result<Vec<ClassificationEntry<T>>> {
        if max_colength == 0 {
            return Err(Error::OutOfRange("max_colength must be at least 1".into()));
        }
        let found = self.explore(Mode::Special, DepthLimit::Cap(max_colength - 1))?;
        found.into_values().map(|chain| self.entry(chain, false)).collect()
    }

    /// Every Ulrich cycle, sorted lexicographically. Fails if some chain needs
    /// more than `max_steps` steps.
    pub fn enumerate_ulrich(&self, max_steps: usize) -> Result<Vec<ClassificationEntry<T>>> {
        let mode = if self.rdp { Mode::Special } else { Mode::Ulrich };
        let found = self.explore(mode, DepthLimit::Fail(max_steps))?;
        found.into_values().map(|chain| self.entry(chain, true)).collect()
    }

    /// Default step budget for [`Self::enumerate_ulrich`], ten per vertex.
    pub fn default_max_steps(&self) -> usize {
        10 * self.graph().vertex_count()
    }

    fn entry(&self, chain: Filtration<T>, ulrich_listing: bool) -> Result<ClassificationEntry<T>> {
        let a = &self.analysis;
        let cycle = chain.top().clone();
        let colength = a.colength(&cycle)?;
        if colength != T::from_count(chain.len() + 1) {
            return Err(Error::Invariant(format!(
                "colength {colength} of {cycle} differs from chain length {} + 1",
                chain.len()
            )));
        }
        let module_indices = a.special_module_indices(&cycle)?;
        let special = !module_indices.is_empty();
        let ulrich = self.is_ulrich_cycle(&cycle)?;
        if ulrich_listing && !self.rdp && !ulrich {
            return Err(Error::Invariant(format!("enumerated Ulrich cycle {cycle} has U(Z) != 0")));
        }
        if !ulrich_listing && !special {
            return Err(Error::Invariant(format!("enumerated special cycle {cycle} fails the coefficient test")));
        }
        let kind = CycleKind::from_flags(special, ulrich)
            .ok_or_else(|| Error::Invariant(format!("{cycle} is neither special nor Ulrich")))?;
        Ok(ClassificationEntry {
            multiplicity: a.multiplicity(&cycle)?,
            min_gens: a.min_gens(&cycle)?,
            cycle,
            colength,
            module_indices,
            chain,
            kind,
        })
    }

    /// Depth-first search over chains `Z_k = Z_(k-1) + Y_k`, where each `Y_k`
    /// is the fundamental cycle of a connected component of
    /// `{E in Supp(Y_(k-1)) : E . Z_(k-1) = 0}`. Returns one witness chain per
    /// reached cycle, the one with the lexicographically least increments.
    fn explore(&self, mode: Mode, limit: DepthLimit) -> Result<BTreeMap<Cycle<T>, Filtration<T>>> {
        let graph = self.graph();
        let z0 = self.analysis.fundamental_cycle();
        let r = graph.vertex_count();
        let mut found: BTreeMap<Cycle<T>, Filtration<T>> = BTreeMap::new();
        let mut stack = vec![Frame { chain: Filtration::trivial(z0.clone()), indices: (0..r).collect() }];

        while let Some(frame) = stack.pop() {
            let chain = frame.chain;
            let top = chain.top().clone();
            let prev_increment = chain.steps.last().map_or(z0, |s| &s.increment).clone();
            let candidates: Vec<usize> = prev_increment
                .support()
                .into_iter()
                .filter(|&j| graph.dot_vertex(&top, j).is_zero())
                .collect();

            for component in graph.components(&candidates) {
                let y: Cycle<T> = fundamental_cycle(graph, &component)?;
                if !y.le(&prev_increment) || !graph.virtual_genus(&y)?.is_zero() {
                    continue;
                }
                debug_assert!(graph.intersection(&top, &y)?.is_zero());
                let next = &top + &y;
                if !graph.is_anti_nef(&next)? {
                    continue;
                }
                let indices = match mode {
                    Mode::Special => {
                        let kept: Vec<usize> =
                            frame.indices.iter().copied().filter(|&i| y.coeff(i) == z0.coeff(i)).collect();
                        if kept.is_empty() {
                            continue;
                        }
                        kept
                    }
                    Mode::Ulrich => {
                        if !graph.canonical_degree(&(z0 - &y))?.is_zero() {
                            continue;
                        }
                        Vec::new()
                    }
                };
                let depth = chain.len() + 1;
                match limit {
                    DepthLimit::Cap(max) if depth > max => continue,
                    DepthLimit::Fail(max) if depth > max => {
                        let branch: Vec<String> = chain.cycles().chain([&next]).map(|c| c.to_string()).collect();
                        return Err(Error::Truncated { max_steps: max, branch: branch.join(" -> ") });
                    }
                    _ => {}
                }
                let mut child = chain.clone();
                child.steps.push(FiltrationStep { increment: y, cycle: next });
                stack.push(Frame { chain: child, indices });
            }

            let better = match found.get(&top) {
                None => true,
                Some(existing) => chain.increments().lt(existing.increments()),
            };
            if better {
                found.insert(top, chain);
            }
        }
        Ok(found)
    }

    /// Pointwise classification of every anti-nef `0 < Z <= bound * Z_0`,
    /// without chain reasoning.
    pub fn oracle_classify(&self, bound: u32) -> Result<OracleClassification<T>> {
        let mut special = Vec::new();
        let mut ulrich = Vec::new();
        for z in self.analysis.brute_force_anti_nef(bound) {
            let is_special = self.is_special_cycle(&z)?;
            let is_ulrich = if self.rdp {
                is_special
            } else {
                self.analysis.min_gens(&z)? > T::from_int(2) && self.analysis.u_invariant(&z)?.is_zero()
            };
            if is_ulrich {
                ulrich.push(z.clone());
            }
            if is_special {
                special.push(z);
            }
        }
        Ok(OracleClassification { special, ulrich })
    }

    /// Anti-nef `0 < Z <= bound * Z_0` on which `U(Z) = 0` and the special
    /// coefficient test disagree.
    pub fn u_criterion_divergences(&self, bound: u32) -> Result<Vec<Cycle<T>>> {
        let mut out = Vec::new();
        for z in self.analysis.brute_force_anti_nef(bound) {
            if self.analysis.u_invariant(&z)?.is_zero() != self.is_special_cycle(&z)? {
                out.push(z);
            }
        }
        Ok(out)
    }
}

/// An expected Ulrich cycle of a rational double point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GoldenCycle<T> {
    pub label: String,
    pub cycle: Cycle<T>,
    pub colength: T,
}

/// Closed-form list of all Ulrich cycles of the ADE singularity, in the vertex
/// order of [`build_ade`], sorted lexicographically.
pub fn golden_table<T: Scalar>(family: AdeFamily, index: usize) -> Result<Vec<GoldenCycle<T>>> {
    check_ade(family, index)?;
    let n = index as i64;
    let mut out: Vec<(String, Vec<i64>, i64)> = Vec::new();
    match family {
        AdeFamily::A => {
            // n = 2m: k < m; n = 2m + 1: k <= m
            for k in 0..(n + 1) / 2 {
                let coeffs = (1..=n).map(|i| i.min(n + 1 - i).min(k + 1)).collect();
                out.push((format!("Z_{k}"), coeffs, k + 1));
            }
        }
        AdeFamily::D => {
            let m = n / 2;
            let d_chain = |k: i64| -> Vec<i64> {
                let mut c: Vec<i64> = (1..=n - 2).map(|i| i.min(2 * k + 2)).collect();
                c.extend([k + 1, k + 1]);
                c
            };
            let last_k = if n % 2 == 0 { m - 2 } else { m - 1 };
            for k in 0..=last_k {
                out.push((format!("Z_{k}"), d_chain(k), k + 1));
            }
            if n % 2 == 0 {
                let mut z = (1..=n - 2).collect::<Vec<i64>>();
                z.extend([m, m - 1]);
                out.push((format!("Z_{}", m - 1), z.clone(), m));
                let len = z.len();
                z.swap(len - 2, len - 1);
                out.push((format!("Z_{}'", m - 1), z, m));
            }
            let mut z2 = vec![2; (n - 2) as usize];
            z2.extend([1, 1]);
            // D6 already has a Z_2' from the fork pair
            let label = if n == 6 { "Z_2''" } else { "Z_2'" };
            out.push((label.into(), z2, 2));
        }
        AdeFamily::E => {
            let table: &[&[i64]] = match index {
                6 => &[&[1, 2, 3, 2, 1, 2], &[2, 3, 4, 3, 2, 2]],
                7 => &[&[2, 3, 4, 3, 2, 1, 2], &[2, 4, 6, 5, 4, 2, 3], &[2, 4, 6, 5, 4, 3, 3]],
                _ => &[&[2, 4, 6, 5, 4, 3, 2, 3], &[4, 7, 10, 8, 6, 4, 2, 5]],
            };
            for (k, coeffs) in table.iter().enumerate() {
                out.push((format!("Z_{k}"), coeffs.to_vec(), k as i64 + 1));
            }
        }
    }
    let mut cycles: Vec<GoldenCycle<T>> = out
        .into_iter()
        .map(|(label, coeffs, colength)| GoldenCycle {
            label,
            cycle: Cycle::from_ints(&coeffs),
            colength: T::from_int(colength),
        })
        .collect();
    cycles.sort_by(|a, b| a.cycle.cmp(&b.cycle));
    Ok(cycles)
}

/// Number of Ulrich ideals of the ADE singularity: `m`, `m+1`, `m+2`, `m+1`
/// for `A_2m`, `A_2m+1`, `D_2m`, `D_2m+1`, and 2, 3, 2 for `E6`, `E7`, `E8`.
pub fn ulrich_count(family: AdeFamily, index: usize) -> Result<usize> {
    check_ade(family, index)?;
    let m = index / 2;
    Ok(match (family, index % 2) {
        (AdeFamily::A, 0) => m,
        (AdeFamily::A, _) => m + 1,
        (AdeFamily::D, 0) => m + 2,
        (AdeFamily::D, _) => m + 1,
        (AdeFamily::E, _) => [2, 3, 2][index - 6],
    })
}

/// Enumerated Ulrich cycles of an ADE graph compared with the closed-form table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RdpVerification<T> {
    pub family: AdeFamily,
    pub index: usize,
    pub expected: Vec<GoldenCycle<T>>,
    pub found: Vec<ClassificationEntry<T>>,
    pub missing: Vec<Cycle<T>>,
    pub unexpected: Vec<Cycle<T>>,
    /// `(cycle, expected colength, enumerated colength)`
    pub colength_mismatches: Vec<(Cycle<T>, T, T)>,
    pub expected_count: usize,
}

impl<T: Scalar> RdpVerification<T> {
    pub fn count(&self) -> usize {
        self.found.len()
    }

    pub fn is_match(&self) -> bool {
        self.missing.is_empty()
            && self.unexpected.is_empty()
            && self.colength_mismatches.is_empty()
            && self.count() == self.expected_count
            && self.expected.len() == self.expected_count
    }
}

pub fn verify_rdp<T: Scalar>(family: AdeFamily, index: usize) -> Result<RdpVerification<T>> {
    let graph = build_ade(family, index)?;
    let classifier = Classifier::<T>::new(&graph)?;
    let found = classifier.enumerate_ulrich(classifier.default_max_steps())?;
    let expected = golden_table::<T>(family, index)?;
    let expected_count = ulrich_count(family, index)?;

    let by_cycle: BTreeMap<&Cycle<T>, &T> = found.iter().map(|e| (&e.cycle, &e.colength)).collect();
    let golden: BTreeMap<&Cycle<T>, &T> = expected.iter().map(|g| (&g.cycle, &g.colength)).collect();
    let missing = golden.keys().filter(|c| !by_cycle.contains_key(*c)).map(|c| (*c).clone()).collect();
    let unexpected = by_cycle.keys().filter(|c| !golden.contains_key(*c)).map(|c| (*c).clone()).collect();
    let colength_mismatches = golden
        .iter()
        .filter_map(|(c, want)| {
            by_cycle
                .get(c)
                .filter(|got| **got != *want)
                .map(|got| ((*c).clone(), (*want).clone(), (*got).clone()))
        })
        .collect();
    Ok(RdpVerification { family, index, expected, found, missing, unexpected, colength_mismatches, expected_count })
}
