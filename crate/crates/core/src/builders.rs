//! Constructing dual graphs: ADE diagrams, cyclic quotients, the text format,
//! and structural validation.

use std::fmt::{self, Write as _};
use std::str::FromStr;

use num_integer::Integer;
use num_traits::One;

use crate::error::{Error, Result};
use crate::invariants::Analysis;
use crate::lattice::DualGraph;
use crate::scalar::Scalar;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum AdeFamily {
    A,
    D,
    E,
}

impl FromStr for AdeFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "A" | "a" => Ok(Self::A),
            "D" | "d" => Ok(Self::D),
            "E" | "e" => Ok(Self::E),
            other => Err(Error::OutOfRange(format!("unknown ADE family {other:?}"))),
        }
    }
}

impl fmt::Display for AdeFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::A => "A",
            Self::D => "D",
            Self::E => "E",
        })
    }
}

pub(crate) fn check_ade(family: AdeFamily, index: usize) -> Result<()> {
    let ok = match family {
        AdeFamily::A => index >= 1,
        AdeFamily::D => index >= 4,
        AdeFamily::E => (6..=8).contains(&index),
    };
    if ok {
        Ok(())
    } else {
        Err(Error::OutOfRange(format!("{family}{index} is not a Dynkin diagram")))
    }
}

/// Dual graph of the rational double point of type `family` and `index`.
///
/// Vertex order: `A_n` is the path `E1..En`; `D_n` is the path `E1..E(n-2)`
/// with `E(n-1)` and `En` attached to `E(n-2)`; `E_n` is the path
/// `E1..E(n-1)` with `En` attached to `E3`.
pub fn build_ade(family: AdeFamily, index: usize) -> Result<DualGraph> {
    check_ade(family, index)?;
    let n = index;
    let mut edges: Vec<(usize, usize)> = Vec::new();
    match family {
        AdeFamily::A => edges.extend((1..n).map(|i| (i - 1, i))),
        AdeFamily::D => {
            edges.extend((1..n - 2).map(|i| (i - 1, i)));
            edges.push((n - 3, n - 2));
            edges.push((n - 3, n - 1));
        }
        AdeFamily::E => {
            edges.extend((1..n - 1).map(|i| (i - 1, i)));
            edges.push((2, n - 1));
        }
    }
    DualGraph::new(vec![-2; n], edges)
}

/// Hirzebruch-Jung expansion `n/q = b1 - 1/(b2 - 1/(... - 1/br))`, all `bi >= 2`.
pub fn hj_expansion(n: u64, q: u64) -> Result<Vec<u64>> {
    if q < 1 || q >= n {
        return Err(Error::OutOfRange(format!("need 1 <= q < n, got n = {n}, q = {q}")));
    }
    if n.gcd(&q) != 1 {
        return Err(Error::OutOfRange(format!("gcd({n}, {q}) != 1")));
    }
    let (mut n, mut q) = (n, q);
    let mut out = Vec::new();
    while q > 0 {
        let b = n.div_ceil(q);
        out.push(b);
        (n, q) = (q, b * q - n);
    }
    Ok(out)
}

/// Chain graph of the cyclic quotient singularity `1/n (1, q)`.
pub fn build_cyclic(n: u64, q: u64) -> Result<DualGraph> {
    let weights = hj_expansion(n, q)?
        .into_iter()
        .map(|b| -i64::try_from(b).expect("expansion entries are at most n"))
        .collect();
    DualGraph::chain(weights)
}

/// Parses the line-oriented graph format:
///
/// ```text
/// # comment
/// vertices 3
/// weight 1 -3
/// edge 1 2
/// edge 2 3
/// ```
///
/// `vertices` must come first; weights default to `-2` and must be `<= -2`;
/// vertex indices are 1-based.
pub fn parse_graph(text: &str) -> Result<DualGraph> {
    let mut count: Option<usize> = None;
    let mut weights: Vec<i64> = Vec::new();
    let mut weight_set: Vec<bool> = Vec::new();
    let mut edges: Vec<(usize, usize)> = Vec::new();
    let mut last_line = 0;

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        last_line = line_no;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let err = |message: String| Error::Parse { line: line_no, message };
        let tokens: Vec<&str> = line.split_whitespace().collect();
        let int = |tok: &str| tok.parse::<i64>().map_err(|_| err(format!("expected an integer, found {tok:?}")));
        let vertex = |tok: &str, r: usize| -> Result<usize> {
            let v = int(tok)?;
            if v < 1 || v as usize > r {
                return Err(err(format!("vertex {v} out of range 1..={r}")));
            }
            Ok(v as usize - 1)
        };
        match (tokens[0], count) {
            ("vertices", None) => {
                if tokens.len() != 2 {
                    return Err(err("usage: vertices <r>".into()));
                }
                let r = int(tokens[1])?;
                if r < 1 {
                    return Err(err(format!("vertex count must be at least 1, found {r}")));
                }
                count = Some(r as usize);
                weights = vec![-2; r as usize];
                weight_set = vec![false; r as usize];
            }
            ("vertices", Some(_)) => return Err(err("duplicate vertices directive".into())),
            (_, None) => return Err(err("the first directive must be `vertices <r>`".into())),
            ("weight", Some(r)) => {
                if tokens.len() != 3 {
                    return Err(err("usage: weight <i> <w>".into()));
                }
                let v = vertex(tokens[1], r)?;
                let w = int(tokens[2])?;
                if w > -2 {
                    return Err(err(format!("weight {w} of E{} must be <= -2", v + 1)));
                }
                if weight_set[v] {
                    return Err(err(format!("weight of E{} given twice", v + 1)));
                }
                weight_set[v] = true;
                weights[v] = w;
            }
            ("edge", Some(r)) => {
                if tokens.len() != 3 {
                    return Err(err("usage: edge <i> <j>".into()));
                }
                let i = vertex(tokens[1], r)?;
                let j = vertex(tokens[2], r)?;
                if i == j {
                    return Err(err(format!("self-loop at E{}", i + 1)));
                }
                let key = (i.min(j), i.max(j));
                if edges.iter().any(|&(a, b)| (a.min(b), a.max(b)) == key) {
                    return Err(err(format!("duplicate edge E{}-E{}", key.0 + 1, key.1 + 1)));
                }
                edges.push((i, j));
            }
            (other, Some(_)) => return Err(err(format!("unknown directive {other:?}"))),
        }
    }
    if count.is_none() {
        return Err(Error::Parse { line: last_line.max(1), message: "missing `vertices <r>` directive".into() });
    }
    DualGraph::new(weights, edges)
}

/// Inverse of [`parse_graph`]. Weights equal to `-2` are omitted.
pub fn serialize_graph(graph: &DualGraph) -> String {
    let mut out = String::new();
    writeln!(out, "vertices {}", graph.vertex_count()).unwrap();
    for (i, &w) in graph.weights().iter().enumerate() {
        if w != -2 {
            writeln!(out, "weight {} {}", i + 1, w).unwrap();
        }
    }
    for &(i, j) in graph.edges() {
        writeln!(out, "edge {} {}", i + 1, j + 1).unwrap();
    }
    out
}

/// Structural verdicts on a dual graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValidationReport<T> {
    pub connected: bool,
    pub negative_definite: bool,
    pub tree: bool,
    pub rational: bool,
    pub gorenstein: bool,
    /// `-Z_0^2`, when `Z_0` could be computed.
    pub multiplicity: Option<T>,
    pub failures: Vec<String>,
}

impl<T> ValidationReport<T> {
    /// Connected, negative definite, rational, and every weight `<= -2`.
    pub fn is_valid_rational(&self) -> bool {
        self.connected && self.negative_definite && self.rational && self.failures.is_empty()
    }
}

/// Largest box `prod (2 n_i + 1)` scanned by the genus spot-check.
const SPOT_CHECK_LIMIT: u64 = 2_000_000;

pub fn validate<T: Scalar>(graph: &DualGraph) -> ValidationReport<T> {
    let r = graph.vertex_count();
    let mut failures = Vec::new();
    for (i, &w) in graph.weights().iter().enumerate() {
        if w > -2 {
            failures.push(format!("E{} has self-intersection {w} > -2", i + 1));
        }
    }
    let connected = graph.is_connected();
    if !connected {
        failures.push("graph is not connected".into());
    }
    let negative_definite = graph.is_negative_definite();
    if !negative_definite {
        failures.push("intersection form is not negative definite".into());
    }
    let tree = connected && graph.edges().len() + 1 == r;

    let mut rational = false;
    let mut multiplicity = None;
    if connected && negative_definite {
        match Analysis::<T>::new(graph) {
            Ok(analysis) => {
                let z0 = analysis.fundamental_cycle();
                multiplicity = Some(analysis.graph_multiplicity());
                match graph.virtual_genus(z0) {
                    Ok(g) if g.is_zero() => rational = true,
                    Ok(g) => failures.push(format!("p_a(Z_0) = {g}, graph is not rational")),
                    Err(e) => failures.push(format!("virtual genus of Z_0 undefined: {e}")),
                }
                if rational && r <= 8 {
                    if let Some(z) = genus_spot_check(graph, z0.coeffs()) {
                        rational = false;
                        failures.push(format!("positive cycle {z} <= 2 Z_0 has p_a > 0"));
                    }
                }
            }
            Err(e) => failures.push(format!("fundamental cycle unavailable: {e}")),
        }
    } else {
        failures.push("rationality undetermined".into());
    }
    let gorenstein = multiplicity.as_ref().is_some_and(|m| *m == T::from_int(2));
    if gorenstein && !rational {
        failures.push("multiplicity 2 on a non-rational graph".into());
    }
    ValidationReport { connected, negative_definite, tree, rational, gorenstein: gorenstein && rational, multiplicity, failures }
}

/// Looks for a positive `Z <= 2 Z_0` with `p_a(Z) > 0`. Runs in `i64` with an
/// odometer that updates `Z^2 + K.Z` incrementally; returns the first offender
/// rendered as text.
fn genus_spot_check<T: Scalar>(graph: &DualGraph, z0: &[T]) -> Option<String> {
    let limits: Vec<i64> = z0.iter().map(|n| n.to_i64().map(|n| 2 * n)).collect::<Option<_>>()?;
    let volume = limits.iter().try_fold(1u64, |acc, &l| acc.checked_mul(l as u64 + 1))?;
    if volume > SPOT_CHECK_LIMIT {
        return None;
    }
    let r = graph.vertex_count();
    let mut coeffs = vec![0i64; r];
    let mut dots = vec![0i64; r]; // Z . E_i
    let mut numerator = 0i64; // Z^2 + K.Z = 2 p_a(Z) - 2
    loop {
        // odometer increment
        let mut i = 0;
        loop {
            if i == r {
                return None;
            }
            if coeffs[i] < limits[i] {
                // Z -> Z + E_i
                let w = graph.weight(i);
                numerator += 2 * dots[i] + w + (-w - 2);
                coeffs[i] += 1;
                dots[i] += w;
                for &u in graph.neighbors(i) {
                    dots[u] += 1;
                }
                break;
            }
            // Z -> Z - limit * E_i
            let w = graph.weight(i);
            let c = coeffs[i];
            numerator += -2 * c * dots[i] + c * c * w - c * (-w - 2);
            dots[i] -= c * w;
            for &u in graph.neighbors(i) {
                dots[u] -= c;
            }
            coeffs[i] = 0;
            i += 1;
        }
        if numerator > -2 {
            let shown: Vec<String> = coeffs.iter().map(|c| c.to_string()).collect();
            return Some(format!("({})", shown.join(",")));
        }
    }
}

/// `det` of the negated intersection matrix of a chain; equals `n` for the
/// chain of `n/q`.
pub fn chain_determinant(weights: &[i64]) -> num_bigint::BigInt {
    let graph = DualGraph::chain(weights.to_vec()).expect("chain weights");
    let neg: Vec<Vec<num_bigint::BigInt>> = graph
        .intersection_matrix()
        .into_iter()
        .map(|row| row.into_iter().map(|x| num_bigint::BigInt::from(-x)).collect())
        .collect();
    crate::lattice::leading_principal_minors(&neg).pop().unwrap_or_else(num_bigint::BigInt::one)
}
