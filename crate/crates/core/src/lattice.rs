//! Cycles on a dual graph and the intersection pairing between them.
//!
//! Vertices are 0-based here; everything that talks to a user (the text
//! format, the CLI, `Display` impls) uses 1-based `E1..Er` labels.

use std::collections::VecDeque;
use std::fmt;
use std::ops::{Add, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Weighted simple graph of exceptional curves.
///
/// `weights[i]` is the self-intersection `E_i^2`; an edge `{i, j}` means
/// `E_i . E_j = 1`. Weights above `-2` are representable so that they can be
/// reported by validation; they are not rejected here.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DualGraph {
    weights: Vec<i64>,
    edges: Vec<(usize, usize)>,
    adjacency: Vec<Vec<usize>>,
}

impl DualGraph {
    pub fn new<I>(weights: Vec<i64>, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let count = weights.len();
        if count == 0 {
            return Err(Error::InvalidGraph("a dual graph needs at least one vertex".into()));
        }
        let mut adjacency = vec![Vec::new(); count];
        let mut normalized = Vec::new();
        for (i, j) in edges {
            for v in [i, j] {
                if v >= count {
                    return Err(Error::VertexOutOfRange { vertex: v + 1, count });
                }
            }
            if i == j {
                return Err(Error::InvalidGraph(format!("self-loop at E{}", i + 1)));
            }
            let edge = (i.min(j), i.max(j));
            if normalized.contains(&edge) {
                return Err(Error::InvalidGraph(format!(
                    "duplicate edge E{}-E{}",
                    edge.0 + 1,
                    edge.1 + 1
                )));
            }
            normalized.push(edge);
            adjacency[i].push(j);
            adjacency[j].push(i);
        }
        normalized.sort_unstable();
        for list in &mut adjacency {
            list.sort_unstable();
        }
        Ok(Self { weights, edges: normalized, adjacency })
    }

    /// Path `E1 - E2 - ... - Er` with the given self-intersections.
    pub fn chain(weights: Vec<i64>) -> Result<Self> {
        let edges: Vec<_> = (1..weights.len()).map(|i| (i - 1, i)).collect();
        Self::new(weights, edges)
    }

    pub fn vertex_count(&self) -> usize {
        self.weights.len()
    }

    pub fn weights(&self) -> &[i64] {
        &self.weights
    }

    pub fn weight(&self, vertex: usize) -> i64 {
        self.weights[vertex]
    }

    /// Edges as `(i, j)` with `i < j`, sorted.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn neighbors(&self, vertex: usize) -> &[usize] {
        &self.adjacency[vertex]
    }

    /// Entry `E_i . E_j` of the intersection matrix.
    pub fn pairing(&self, i: usize, j: usize) -> i64 {
        if i == j {
            self.weights[i]
        } else if self.adjacency[i].binary_search(&j).is_ok() {
            1
        } else {
            0
        }
    }

    pub fn intersection_matrix(&self) -> Vec<Vec<i64>> {
        let r = self.vertex_count();
        (0..r).map(|i| (0..r).map(|j| self.pairing(i, j)).collect()).collect()
    }

    /// Connected components of the subgraph induced on `subset`, each sorted,
    /// ordered by smallest vertex.
    pub fn components(&self, subset: &[usize]) -> Vec<Vec<usize>> {
        let mut inside = vec![false; self.vertex_count()];
        for &v in subset {
            inside[v] = true;
        }
        let mut seen = vec![false; self.vertex_count()];
        let mut starts: Vec<usize> = subset.to_vec();
        starts.sort_unstable();
        let mut out = Vec::new();
        for start in starts {
            if seen[start] {
                continue;
            }
            seen[start] = true;
            let mut queue = VecDeque::from([start]);
            let mut component = Vec::new();
            while let Some(v) = queue.pop_front() {
                component.push(v);
                for &w in self.neighbors(v) {
                    if inside[w] && !seen[w] {
                        seen[w] = true;
                        queue.push_back(w);
                    }
                }
            }
            component.sort_unstable();
            out.push(component);
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        let all: Vec<usize> = (0..self.vertex_count()).collect();
        self.components(&all).len() == 1
    }

    /// Whether the form restricted to `subset` is negative definite, decided by
    /// the signs of the leading principal minors of its negative.
    pub fn is_negative_definite_on(&self, subset: &[usize]) -> bool {
        let neg: Vec<Vec<BigInt>> = subset
            .iter()
            .map(|&i| subset.iter().map(|&j| BigInt::from(-self.pairing(i, j))).collect())
            .collect();
        leading_principal_minors(&neg).iter().all(|m| m.is_positive())
    }

    pub fn is_negative_definite(&self) -> bool {
        let all: Vec<usize> = (0..self.vertex_count()).collect();
        self.is_negative_definite_on(&all)
    }

    fn check_len<T: Scalar>(&self, z: &Cycle<T>) -> Result<()> {
        if z.len() != self.vertex_count() {
            return Err(Error::Dimension { expected: self.vertex_count(), found: z.len() });
        }
        Ok(())
    }

    /// `Z . E_i`.
    pub fn dot_vertex<T: Scalar>(&self, z: &Cycle<T>, vertex: usize) -> T {
        let mut acc = z.coeffs[vertex].clone() * T::from_int(self.weights[vertex]);
        for &w in self.neighbors(vertex) {
            acc = acc + z.coeffs[w].clone();
        }
        acc
    }

    /// `Z . W = Z^T M W`.
    pub fn intersection<T: Scalar>(&self, z: &Cycle<T>, w: &Cycle<T>) -> Result<T> {
        self.check_len(z)?;
        self.check_len(w)?;
        Ok((0..self.vertex_count())
            .filter(|&i| !z.coeffs[i].is_zero())
            .fold(T::zero(), |acc, i| acc + z.coeffs[i].clone() * self.dot_vertex(w, i)))
    }

    /// `K . Z`, using `K . E_i = -E_i^2 - 2`.
    pub fn canonical_degree<T: Scalar>(&self, z: &Cycle<T>) -> Result<T> {
        self.check_len(z)?;
        Ok(z.coeffs
            .iter()
            .zip(&self.weights)
            .fold(T::zero(), |acc, (a, &w)| acc + a.clone() * T::from_int(-w - 2)))
    }

    /// Virtual genus `p_a(Z) = (Z^2 + K.Z)/2 + 1`.
    pub fn virtual_genus<T: Scalar>(&self, z: &Cycle<T>) -> Result<T> {
        let total = self.intersection(z, z)? + self.canonical_degree(z)?;
        let two = T::from_int(2);
        if !total.is_multiple_of(&two) {
            return Err(Error::Invariant(format!("Z^2 + K.Z = {total} is odd for Z = {z}")));
        }
        Ok(total / two + T::one())
    }

    /// `Z . E_i <= 0` for every vertex. `Z` must be nonnegative.
    pub fn is_anti_nef<T: Scalar>(&self, z: &Cycle<T>) -> Result<bool> {
        self.first_positive_vertex(z).map(|v| v.is_none())
    }

    /// First vertex with `Z . E_i > 0`, if any.
    pub fn first_positive_vertex<T: Scalar>(&self, z: &Cycle<T>) -> Result<Option<(usize, T)>> {
        self.check_len(z)?;
        if let Some(vertex) = z.coeffs.iter().position(|a| a.is_negative()) {
            return Err(Error::NegativeCoefficient { vertex: vertex + 1 });
        }
        Ok((0..self.vertex_count())
            .map(|i| (i, self.dot_vertex(z, i)))
            .find(|(_, d)| d.is_positive()))
    }
}

/// Leading principal minors of a square matrix, by fraction-free (Bareiss)
/// elimination. Stops early at the first zero pivot; later minors are then
/// reported as zero.
pub fn leading_principal_minors(matrix: &[Vec<BigInt>]) -> Vec<BigInt> {
    let n = matrix.len();
    let mut a: Vec<Vec<BigInt>> = matrix.to_vec();
    let mut minors = Vec::with_capacity(n);
    let mut prev = BigInt::one();
    for k in 0..n {
        let pivot = a[k][k].clone();
        minors.push(pivot.clone());
        if pivot.is_zero() {
            minors.resize(n, BigInt::zero());
            break;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&a[i][j] * &pivot - &a[i][k] * &a[k][j]) / &prev;
                a[i][j] = v;
            }
        }
        prev = pivot;
    }
    minors
}

/// Integer combination of the exceptional curves, `Z = sum a_i E_i`.
///
/// The derived `Ord` is lexicographic on the coefficient vector and is only
/// used for sorting; the componentwise partial order is [`Cycle::compare`].
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Cycle<T> {
    coeffs: Vec<T>,
}

/// Verdict of the componentwise partial order.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CycleOrdering {
    Equal,
    LessEq,
    GreaterEq,
    Incomparable,
}

impl<T: Scalar> Cycle<T> {
    pub fn new(coeffs: Vec<T>) -> Self {
        Self { coeffs }
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&a| T::from_int(a)).collect())
    }

    pub fn zero(len: usize) -> Self {
        Self::new(vec![T::zero(); len])
    }

    pub fn unit(len: usize, vertex: usize) -> Self {
        let mut z = Self::zero(len);
        z.coeffs[vertex] = T::one();
        z
    }

    /// Sum of the unit cycles of `vertices`.
    pub fn indicator(len: usize, vertices: &[usize]) -> Self {
        let mut z = Self::zero(len);
        for &v in vertices {
            z.coeffs[v] = T::one();
        }
        z
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn coeff(&self, vertex: usize) -> &T {
        &self.coeffs[vertex]
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn support(&self) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.coeffs[i].is_positive()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn is_nonnegative(&self) -> bool {
        self.coeffs.iter().all(|a| !a.is_negative())
    }

    /// Nonnegative and nonzero.
    pub fn is_positive(&self) -> bool {
        self.is_nonnegative() && !self.is_zero()
    }

    pub fn scaled(&self, factor: &T) -> Self {
        Self::new(self.coeffs.iter().map(|a| a.clone() * factor.clone()).collect())
    }

    pub fn add_unit(&mut self, vertex: usize) {
        self.coeffs[vertex] = self.coeffs[vertex].clone() + T::one();
    }

    fn check_same_len(&self, other: &Self) -> Result<()> {
        if self.len() != other.len() {
            return Err(Error::Dimension { expected: self.len(), found: other.len() });
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.check_same_len(other)?;
        Ok(Self::new(
            self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a.clone() + b.clone()).collect(),
        ))
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.check_same_len(other)?;
        Ok(Self::new(
            self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a.clone() - b.clone()).collect(),
        ))
    }

    /// Componentwise minimum, `inf(Z, W)`.
    pub fn inf(&self, other: &Self) -> Result<Self> {
        self.check_same_len(other)?;
        Ok(Self::new(
            self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a.clone().min(b.clone())).collect(),
        ))
    }

    pub fn compare(&self, other: &Self) -> Result<CycleOrdering> {
        self.check_same_len(other)?;
        let mut le = true;
        let mut ge = true;
        for (a, b) in self.coeffs.iter().zip(&other.coeffs) {
            le &= a <= b;
            ge &= a >= b;
        }
        Ok(match (le, ge) {
            (true, true) => CycleOrdering::Equal,
            (true, false) => CycleOrdering::LessEq,
            (false, true) => CycleOrdering::GreaterEq,
            (false, false) => CycleOrdering::Incomparable,
        })
    }

    /// `self <= other` componentwise. Lengths must agree.
    pub fn le(&self, other: &Self) -> bool {
        self.len() == other.len() && self.coeffs.iter().zip(&other.coeffs).all(|(a, b)| a <= b)
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(&T) -> U) -> Cycle<U> {
        Cycle::new(self.coeffs.iter().map(f).collect())
    }
}

impl<T: Scalar> Add for &Cycle<T> {
    type Output = Cycle<T>;

    fn add(self, rhs: Self) -> Cycle<T> {
        self.checked_add(rhs).expect("cycles of different lengths")
    }
}

impl<T: Scalar> Sub for &Cycle<T> {
    type Output = Cycle<T>;

    fn sub(self, rhs: Self) -> Cycle<T> {
        self.checked_sub(rhs).expect("cycles of different lengths")
    }
}

impl<T: fmt::Display> fmt::Display for Cycle<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, a) in self.coeffs.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{a}")?;
        }
        f.write_str(")")
    }
}
