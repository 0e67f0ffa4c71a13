//! Numerical invariants of anti-nef cycles on a fixed dual graph.


use crate::error::{Error, Result};
use crate::lattice::{Cycle, DualGraph};
use crate::scalar::Scalar;

/// Fundamental cycle on a connected set of vertices, by Laufer's procedure.
///
/// Starts from the reduced cycle on `support` and repeatedly adds `E_i` for the
/// lowest-indexed `i` in the support with `Z . E_i > 0`.
pub fn fundamental_cycle<T: Scalar>(graph: &DualGraph, support: &[usize]) -> Result<Cycle<T>> {
    let r = graph.vertex_count();
    let mut vertices = support.to_vec();
    vertices.sort_unstable();
    vertices.dedup();
    if vertices.is_empty() {
        return Err(Error::EmptySupport);
    }
    if let Some(&v) = vertices.iter().find(|&&v| v >= r) {
        return Err(Error::VertexOutOfRange { vertex: v + 1, count: r });
    }
    if graph.components(&vertices).len() != 1 {
        return Err(Error::DisconnectedSupport);
    }
    // Laufer only terminates when the restricted form is negative definite.
    if !graph.is_negative_definite_on(&vertices) {
        return Err(Error::NotNegativeDefinite);
    }
    let mut z: Cycle<T> = Cycle::indicator(r, &vertices);
    while let Some(&i) = vertices.iter().find(|&&i| graph.dot_vertex(&z, i).is_positive()) {
        z.add_unit(i);
    }
    Ok(z)
}

/// One step `Z_k = Z_{k-1} + Y_k` of a chain of anti-nef cycles.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FiltrationStep<T> {
    pub increment: Cycle<T>,
    pub cycle: Cycle<T>,
}

/// Chain `Z_0 < Z_1 < ... < Z_s` starting at the fundamental cycle.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Filtration<T> {
    pub base: Cycle<T>,
    pub steps: Vec<FiltrationStep<T>>,
}

impl<T: Scalar> Filtration<T> {
    pub fn trivial(base: Cycle<T>) -> Self {
        Self { base, steps: Vec::new() }
    }

    /// Chain length `s`.
    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// `Z_s`.
    pub fn top(&self) -> &Cycle<T> {
        self.steps.last().map_or(&self.base, |s| &s.cycle)
    }

    /// `Z_k` for `k = 0..=s`.
    pub fn cycles(&self) -> impl Iterator<Item = &Cycle<T>> {
        std::iter::once(&self.base).chain(self.steps.iter().map(|s| &s.cycle))
    }

    pub fn increments(&self) -> impl Iterator<Item = &Cycle<T>> {
        self.steps.iter().map(|s| &s.increment)
    }

    /// `Z_0 + sum Y_k`.
    pub fn reconstruct(&self) -> Cycle<T> {
        self.increments().fold(self.base.clone(), |acc, y| &acc + y)
    }

    /// Checks the structural chain conditions: `Z_k = Z_{k-1} + Y_k`,
    /// `0 < Y_s <= ... <= Y_1 <= Z_0` and every `Z_k` anti-nef.
    pub fn check(&self, graph: &DualGraph) -> Result<()> {
        let mut prev_cycle = &self.base;
        let mut prev_increment = &self.base;
        for (k, step) in self.steps.iter().enumerate() {
            let fail = |what: &str| Err(Error::Invariant(format!("filtration step {}: {what}", k + 1)));
            if (prev_cycle + &step.increment) != step.cycle {
                return fail("Z_k != Z_(k-1) + Y_k");
            }
            if !step.increment.is_positive() || !step.increment.le(prev_increment) {
                return fail("increments are not a decreasing chain of positive cycles");
            }
            if !graph.is_anti_nef(&step.cycle)? {
                return fail("Z_k is not anti-nef");
            }
            prev_cycle = &step.cycle;
            prev_increment = &step.increment;
        }
        if !graph.is_anti_nef(&self.base)? {
            return Err(Error::Invariant("filtration base is not anti-nef".into()));
        }
        Ok(())
    }
}

/// Invariants of anti-nef cycles relative to the fundamental cycle `Z_0` of a
/// connected, negative definite dual graph. `Z_0` is computed once.
#[derive(Clone, Debug)]
pub struct Analysis<'g, T> {
    graph: &'g DualGraph,
    z0: Cycle<T>,
}

impl<'g, T: Scalar> Analysis<'g, T> {
    pub fn new(graph: &'g DualGraph) -> Result<Self> {
        let all: Vec<usize> = (0..graph.vertex_count()).collect();
        let z0 = fundamental_cycle(graph, &all)?;
        Ok(Self { graph, z0 })
    }

    pub fn graph(&self) -> &'g DualGraph {
        self.graph
    }

    /// `Z_0`.
    pub fn fundamental_cycle(&self) -> &Cycle<T> {
        &self.z0
    }

    /// `-Z_0^2`, the multiplicity of the singularity.
    pub fn graph_multiplicity(&self) -> T {
        -self.graph.intersection(&self.z0, &self.z0).expect("Z_0 has the graph's length")
    }

    pub fn is_rational_double_point(&self) -> bool {
        self.graph_multiplicity() == T::from_int(2)
    }

    /// Fails unless `Z` is a nonzero anti-nef cycle.
    pub fn require_anti_nef(&self, z: &Cycle<T>) -> Result<()> {
        if let Some((vertex, value)) = self.graph.first_positive_vertex(z)? {
            return Err(Error::NotAntiNef { vertex: vertex + 1, value: value.to_string() });
        }
        if z.is_zero() {
            return Err(Error::ZeroCycle);
        }
        Ok(())
    }

    /// `l(A/I_Z) = 1 - p_a(Z)`.
    pub fn colength(&self, z: &Cycle<T>) -> Result<T> {
        self.require_anti_nef(z)?;
        Ok(T::one() - self.graph.virtual_genus(z)?)
    }

    /// `e(I_Z) = -Z^2`.
    pub fn multiplicity(&self, z: &Cycle<T>) -> Result<T> {
        self.require_anti_nef(z)?;
        Ok(-self.graph.intersection(z, z)?)
    }

    /// Minimal number of generators `mu(I_Z) = 1 - Z . Z_0`.
    ///
    /// Not stated as a formula in its own right; it is the value for which
    /// `U(Z) = 0` coincides with `e = (mu - 1) l`.
    pub fn min_gens(&self, z: &Cycle<T>) -> Result<T> {
        self.require_anti_nef(z)?;
        Ok(T::one() - self.graph.intersection(z, &self.z0)?)
    }

    /// `U(Z) = (Z_0 . Z)(p_a(Z) - 1) + Z^2`.
    pub fn u_invariant(&self, z: &Cycle<T>) -> Result<T> {
        self.require_anti_nef(z)?;
        let genus = self.graph.virtual_genus(z)?;
        Ok(self.graph.intersection(&self.z0, z)? * (genus - T::one()) + self.graph.intersection(z, z)?)
    }

    /// The chain `Z_k = inf(Z, (k+1) Z_0)`, `k = 0..=s`, where `s` is least
    /// with `Z <= (s+1) Z_0`.
    pub fn filtration(&self, z: &Cycle<T>) -> Result<Filtration<T>> {
        self.require_anti_nef(z)?;
        if !self.z0.le(z) {
            return Err(Error::Invariant(format!("anti-nef cycle {z} is not above Z_0")));
        }
        let mut chain = Filtration::trivial(self.z0.clone());
        let mut multiple = T::one();
        while !z.le(&self.z0.scaled(&multiple)) {
            multiple = multiple + T::one();
            let next = z.inf(&self.z0.scaled(&multiple))?;
            let increment = &next - chain.top();
            chain.steps.push(FiltrationStep { increment, cycle: next });
        }
        Ok(chain)
    }

    /// Vertices `i` with `coeff_i(Z) = n_i * l(A/I_Z)`.
    ///
    /// Every coefficient satisfies `coeff_i(Z) <= n_i * l(A/I_Z)` on a rational
    /// graph; a violation is reported as an invariant error.
    pub fn special_module_indices(&self, z: &Cycle<T>) -> Result<Vec<usize>> {
        let length = self.colength(z)?;
        let mut out = Vec::new();
        for (i, (a, n)) in z.coeffs().iter().zip(self.z0.coeffs()).enumerate() {
            let bound = n.clone() * length.clone();
            if *a > bound {
                return Err(Error::Invariant(format!(
                    "coefficient bound fails at E{}: {a} > {n} * {length}",
                    i + 1
                )));
            }
            if *a == bound {
                out.push(i);
            }
        }
        Ok(out)
    }

    /// All anti-nef `Z` with `0 < Z <= bound * Z_0`, lexicographically sorted.
    ///
    /// Box enumeration in breadth-first vertex order. A partial assignment is
    /// abandoned as soon as an assigned vertex already pairs positively with
    /// it, since the remaining coefficients can only raise that value.
    pub fn brute_force_anti_nef(&self, bound: u32) -> Vec<Cycle<T>> {
        let graph = self.graph;
        let r = graph.vertex_count();
        let order = graph.components(&(0..r).collect::<Vec<_>>());
        let mut sequence: Vec<usize> = Vec::with_capacity(r);
        for comp in &order {
            // BFS order inside each component so neighbours are assigned early
            let mut seen = vec![false; r];
            let mut queue = std::collections::VecDeque::from([comp[0]]);
            seen[comp[0]] = true;
            while let Some(v) = queue.pop_front() {
                sequence.push(v);
                for &w in graph.neighbors(v) {
                    if !seen[w] {
                        seen[w] = true;
                        queue.push_back(w);
                    }
                }
            }
        }
        let limits: Vec<T> = self.z0.coeffs().iter().map(|n| n.clone() * T::from_int(bound.into())).collect();
        let mut search = BoxSearch {
            graph,
            sequence: &sequence,
            limits: &limits,
            assigned: vec![false; r],
            coeffs: vec![T::zero(); r],
            partial: vec![T::zero(); r],
            found: Vec::new(),
        };
        search.descend(0);
        let mut found = search.found;
        found.retain(|z| !z.is_zero());
        found.sort();
        found
    }
}

struct BoxSearch<'a, T> {
    graph: &'a DualGraph,
    sequence: &'a [usize],
    limits: &'a [T],
    assigned: Vec<bool>,
    coeffs: Vec<T>,
    /// `sum_{j assigned} M_ij a_j` for every vertex `i`
    partial: Vec<T>,
    found: Vec<Cycle<T>>,
}

impl<T: Scalar> BoxSearch<'_, T> {
    fn bump(&mut self, v: usize, delta: &T) {
        let w = T::from_int(self.graph.weight(v));
        self.partial[v] = self.partial[v].clone() + w * delta.clone();
        for &u in self.graph.neighbors(v) {
            self.partial[u] = self.partial[u].clone() + delta.clone();
        }
    }

    fn violated(&self, v: usize) -> bool {
        let mine = self.partial[v].is_positive();
        mine || self.graph.neighbors(v).iter().any(|&u| self.assigned[u] && self.partial[u].is_positive())
    }

    fn descend(&mut self, depth: usize) {
        if depth == self.sequence.len() {
            self.found.push(Cycle::new(self.coeffs.clone()));
            return;
        }
        let v = self.sequence[depth];
        self.assigned[v] = true;
        let mut value = T::zero();
        loop {
            // neighbours only grow with `value`, so the first violation from
            // them ends the loop; `v`'s own term shrinks, so that one does not
            let neighbour_bad = self
                .graph
                .neighbors(v)
                .iter()
                .any(|&u| self.assigned[u] && self.partial[u].is_positive());
            if neighbour_bad {
                break;
            }
            if !self.violated(v) {
                self.descend(depth + 1);
            }
            if value >= self.limits[v] {
                break;
            }
            value = value + T::one();
            self.coeffs[v] = value.clone();
            self.bump(v, &T::one());
        }
        let undo = -self.coeffs[v].clone();
        self.bump(v, &undo);
        self.coeffs[v] = T::zero();
        self.assigned[v] = false;
    }
}

impl<T: Scalar> Filtration<T> {
    /// Colengths `l(A/I_{Z_k})` along the chain.
    pub fn colengths(&self, analysis: &Analysis<'_, T>) -> Result<Vec<T>> {
        self.cycles().map(|z| analysis.colength(z)).collect()
    }
}
