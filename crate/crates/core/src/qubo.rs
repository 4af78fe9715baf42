//! QUBO models for maximum independent set / maximum clique, energy
//! evaluation, decoding and the QUBO → Ising change of variables.
//!
//! The independent-set objective is
//!
//! ```text
//! H(x) = -A * sum_i x_i + B * sum_{(i,j) in E} x_i x_j
//! ```
//!
//! with `A = 1`, `B = 2` by default. A maximum clique of `G` is a maximum
//! independent set of the complement, so the clique model is the
//! independent-set model of `complement(G)`.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{Graph, GraphError, VertexSet};

pub const DEFAULT_PENALTY_A: f64 = 1.0;
pub const DEFAULT_PENALTY_B: f64 = 2.0;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum QuboError {
    #[error("penalties must satisfy b > a > 0 (got a = {a}, b = {b})")]
    PenaltyConfig { a: f64, b: f64 },
    #[error("assignment has {got} variables, model has {expected}")]
    Dimension { expected: usize, got: usize },
    #[error("variable index {index} out of range for {num_vars} variables")]
    IndexOutOfRange { index: usize, num_vars: usize },
    #[error("quadratic term ({0}, {0}) must couple two distinct variables")]
    DiagonalQuadratic(usize),
}

/// Binary assignment `x_i in {0, 1}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Assignment {
    pub bits: Vec<u8>,
}

impl Assignment {
    pub fn zeros(n: usize) -> Self {
        Assignment { bits: vec![0; n] }
    }

    pub fn ones(n: usize) -> Self {
        Assignment { bits: vec![1; n] }
    }

    /// Bit `i` of `mask` is `x_i` (for exhaustive enumeration).
    pub fn from_mask(mask: u64, n: usize) -> Self {
        Assignment {
            bits: (0..n).map(|i| ((mask >> i) & 1) as u8).collect(),
        }
    }

    pub fn from_set(n: usize, set: &VertexSet) -> Self {
        let mut bits = vec![0; n];
        for &v in set {
            bits[v] = 1;
        }
        Assignment { bits }
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }
}

impl From<Vec<u8>> for Assignment {
    fn from(bits: Vec<u8>) -> Self {
        Assignment { bits }
    }
}

/// `{ i : bits[i] = 1 }`. No repair is attempted.
pub fn decode_vertex_set(x: &Assignment) -> VertexSet {
    x.bits
        .iter()
        .enumerate()
        .filter(|(_, &b)| b == 1)
        .map(|(i, _)| i)
        .collect()
}

fn ordered(i: usize, j: usize) -> (usize, usize) {
    if i < j {
        (i, j)
    } else {
        (j, i)
    }
}

/// Quadratic binary objective `offset + sum linear[i] x_i + sum quadratic[(i,j)] x_i x_j`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuboModel {
    num_vars: usize,
    linear: BTreeMap<usize, f64>,
    quadratic: BTreeMap<(usize, usize), f64>,
    offset: f64,
    penalty_a: f64,
    penalty_b: f64,
}

impl QuboModel {
    pub fn new(num_vars: usize) -> Self {
        QuboModel {
            num_vars,
            linear: BTreeMap::new(),
            quadratic: BTreeMap::new(),
            offset: 0.0,
            penalty_a: DEFAULT_PENALTY_A,
            penalty_b: DEFAULT_PENALTY_B,
        }
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn linear(&self) -> &BTreeMap<usize, f64> {
        &self.linear
    }

    /// Keys are `(i, j)` with `i < j`.
    pub fn quadratic(&self) -> &BTreeMap<(usize, usize), f64> {
        &self.quadratic
    }

    pub fn offset(&self) -> f64 {
        self.offset
    }

    pub fn penalty_a(&self) -> f64 {
        self.penalty_a
    }

    pub fn penalty_b(&self) -> f64 {
        self.penalty_b
    }

    fn check_index(&self, i: usize) -> Result<(), QuboError> {
        if i < self.num_vars {
            Ok(())
        } else {
            Err(QuboError::IndexOutOfRange {
                index: i,
                num_vars: self.num_vars,
            })
        }
    }

    pub fn add_linear(&mut self, i: usize, c: f64) -> Result<(), QuboError> {
        self.check_index(i)?;
        *self.linear.entry(i).or_insert(0.0) += c;
        Ok(())
    }

    pub fn add_quadratic(&mut self, i: usize, j: usize, c: f64) -> Result<(), QuboError> {
        self.check_index(i)?;
        self.check_index(j)?;
        if i == j {
            return Err(QuboError::DiagonalQuadratic(i));
        }
        *self.quadratic.entry(ordered(i, j)).or_insert(0.0) += c;
        Ok(())
    }

    pub fn set_offset(&mut self, offset: f64) {
        self.offset = offset;
    }

    /// Energy of `x`.
    pub fn evaluate(&self, x: &Assignment) -> Result<f64, QuboError> {
        if x.len() != self.num_vars {
            return Err(QuboError::Dimension {
                expected: self.num_vars,
                got: x.len(),
            });
        }
        let mut e = self.offset;
        for (&i, &c) in &self.linear {
            if x.bits[i] == 1 {
                e += c;
            }
        }
        for (&(i, j), &c) in &self.quadratic {
            if x.bits[i] == 1 && x.bits[j] == 1 {
                e += c;
            }
        }
        Ok(e)
    }

    /// Graph on the variables whose edges are the strictly positive
    /// quadratic terms. For an independent-set model this is the input graph.
    pub fn conflict_graph(&self) -> Graph {
        Graph::from_edges(
            self.num_vars,
            self.quadratic.iter().filter(|(_, &c)| c > 0.0).map(|(&k, _)| k),
        )
        .expect("quadratic keys are distinct ordered pairs")
    }

    /// Serializable snapshot for run logs.
    pub fn to_record(&self) -> QuboRecord {
        QuboRecord {
            num_vars: self.num_vars,
            linear: self.linear.iter().map(|(&i, &c)| (i, c)).collect(),
            quadratic: self.quadratic.iter().map(|(&(i, j), &c)| (i, j, c)).collect(),
            offset: self.offset,
        }
    }
}

/// JSON-shaped form of a [`QuboModel`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuboRecord {
    pub num_vars: usize,
    pub linear: Vec<(usize, f64)>,
    pub quadratic: Vec<(usize, usize, f64)>,
    pub offset: f64,
}

impl QuboRecord {
    pub fn into_model(self) -> Result<QuboModel, QuboError> {
        let mut m = QuboModel::new(self.num_vars);
        for (i, c) in self.linear {
            m.add_linear(i, c)?;
        }
        for (i, j, c) in self.quadratic {
            m.add_quadratic(i, j, c)?;
        }
        m.set_offset(self.offset);
        Ok(m)
    }
}

fn check_penalties(a: f64, b: f64) -> Result<(), QuboError> {
    if a > 0.0 && b > a && a.is_finite() && b.is_finite() {
        Ok(())
    } else {
        Err(QuboError::PenaltyConfig { a, b })
    }
}

/// Independent-set QUBO: `linear[i] = -a` for every vertex and
/// `quadratic[(i,j)] = b` for every edge.
pub fn build_is_qubo(g: &Graph, a: f64, b: f64) -> Result<QuboModel, QuboError> {
    check_penalties(a, b)?;
    let n = g.vertex_count();
    let mut m = QuboModel::new(n);
    m.penalty_a = a;
    m.penalty_b = b;
    m.linear = (0..n).map(|i| (i, -a)).collect();
    m.quadratic = g.edges().map(|e| (e, b)).collect();
    Ok(m)
}

/// Maximum-clique QUBO: the independent-set QUBO of the complement.
pub fn build_mc_qubo(g: &Graph, a: f64, b: f64) -> Result<QuboModel, QuboError> {
    build_is_qubo(&g.complement(), a, b)
}

/// Spin-glass form `offset + sum h_i s_i + sum J_ij s_i s_j`, `s_i in {-1, +1}`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct IsingModel {
    pub num_vars: usize,
    pub h: BTreeMap<usize, f64>,
    pub j: BTreeMap<(usize, usize), f64>,
    pub offset: f64,
}

impl IsingModel {
    pub fn energy(&self, spins: &[i8]) -> Result<f64, QuboError> {
        if spins.len() != self.num_vars {
            return Err(QuboError::Dimension {
                expected: self.num_vars,
                got: spins.len(),
            });
        }
        let mut e = self.offset;
        for (&i, &h) in &self.h {
            e += h * f64::from(spins[i]);
        }
        for (&(i, j), &c) in &self.j {
            e += c * f64::from(spins[i]) * f64::from(spins[j]);
        }
        Ok(e)
    }
}

/// Substitutes `x_i = (1 + s_i) / 2`.
pub fn qubo_to_ising(m: &QuboModel) -> IsingModel {
    let mut ising = IsingModel {
        num_vars: m.num_vars,
        offset: m.offset,
        ..Default::default()
    };
    for (&i, &c) in &m.linear {
        *ising.h.entry(i).or_insert(0.0) += c / 2.0;
        ising.offset += c / 2.0;
    }
    for (&(i, j), &c) in &m.quadratic {
        let q = c / 4.0;
        *ising.j.entry((i, j)).or_insert(0.0) += q;
        *ising.h.entry(i).or_insert(0.0) += q;
        *ising.h.entry(j).or_insert(0.0) += q;
        ising.offset += q;
    }
    ising
}

/// Maps `s_i = 2 x_i - 1`.
pub fn spins_from_assignment(x: &Assignment) -> Vec<i8> {
    x.bits.iter().map(|&b| if b == 1 { 1 } else { -1 }).collect()
}

fn check_set(g: &Graph, s: &VertexSet) -> Result<(), GraphError> {
    s.iter().try_for_each(|&v| g.check_vertex(v))
}

/// True iff no two members of `s` are adjacent.
pub fn is_independent_set(g: &Graph, s: &VertexSet) -> Result<bool, GraphError> {
    check_set(g, s)?;
    Ok(s.iter().all(|&v| g.neighbors(v).iter().all(|u| !s.contains(u))))
}

/// True iff every two members of `s` are adjacent.
pub fn is_clique(g: &Graph, s: &VertexSet) -> Result<bool, GraphError> {
    check_set(g, s)?;
    let members: Vec<usize> = s.iter().copied().collect();
    Ok(members
        .iter()
        .enumerate()
        .all(|(k, &u)| members[k + 1..].iter().all(|&v| g.has_edge(u, v))))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(items: &[usize]) -> VertexSet {
        items.iter().copied().collect()
    }

    /// All minimizing assignments by enumeration.
    fn minima(m: &QuboModel) -> (f64, Vec<VertexSet>) {
        let n = m.num_vars();
        let mut best = f64::INFINITY;
        let mut sets = Vec::new();
        for mask in 0..(1u64 << n) {
            let x = Assignment::from_mask(mask, n);
            let e = m.evaluate(&x).unwrap();
            if e < best {
                best = e;
                sets.clear();
            }
            if e == best {
                sets.push(decode_vertex_set(&x));
            }
        }
        (best, sets)
    }

    #[test]
    fn is_qubo_examples() {
        let (e, s) = minima(&build_is_qubo(&Graph::empty(3), 1.0, 2.0).unwrap());
        assert_eq!((e, s), (-3.0, vec![set(&[0, 1, 2])]));

        let (e, s) = minima(&build_is_qubo(&Graph::path(3), 1.0, 2.0).unwrap());
        assert_eq!((e, s), (-2.0, vec![set(&[0, 2])]));

        let (e, mut s) = minima(&build_is_qubo(&Graph::complete(3), 1.0, 2.0).unwrap());
        s.sort();
        assert_eq!(e, -1.0);
        assert_eq!(s, vec![set(&[0]), set(&[1]), set(&[2])]);
    }

    #[test]
    fn is_qubo_structure() {
        let g = Graph::path(4);
        let m = build_is_qubo(&g, 1.0, 2.0).unwrap();
        assert!(m.linear().values().all(|&c| c == -1.0));
        assert_eq!(m.linear().len(), 4);
        assert_eq!(
            m.quadratic().keys().copied().collect::<Vec<_>>(),
            g.edges().collect::<Vec<_>>()
        );
        assert!(m.quadratic().values().all(|&c| c == 2.0));
        assert_eq!(m.offset(), 0.0);
        assert_eq!(m.conflict_graph(), g);
    }

    #[test]
    fn penalty_precondition() {
        let g = Graph::path(3);
        assert!(matches!(
            build_is_qubo(&g, 1.0, 1.0),
            Err(QuboError::PenaltyConfig { .. })
        ));
        assert!(build_is_qubo(&g, 2.0, 1.0).is_err());
        assert!(build_is_qubo(&g, 0.0, 1.0).is_err());
        assert!(build_mc_qubo(&g, 1.0, 0.5).is_err());
    }

    #[test]
    fn mc_qubo_examples() {
        let m = build_mc_qubo(&Graph::complete(3), 1.0, 2.0).unwrap();
        assert_eq!(m, build_is_qubo(&Graph::empty(3), 1.0, 2.0).unwrap());
        let (e, s) = minima(&m);
        assert_eq!((e, s), (-3.0, vec![set(&[0, 1, 2])]));

        let (e, s) = minima(&build_mc_qubo(&Graph::path(2), 1.0, 2.0).unwrap());
        assert_eq!((e, s), (-2.0, vec![set(&[0, 1])]));

        let c4 = Graph::cycle(4);
        let (e, mut s) = minima(&build_mc_qubo(&c4, 1.0, 2.0).unwrap());
        s.sort();
        assert_eq!(e, -2.0);
        let mut edges: Vec<VertexSet> = c4.edges().map(|(u, v)| set(&[u, v])).collect();
        edges.sort();
        assert_eq!(s, edges);
    }

    #[test]
    fn evaluate_examples() {
        let p3 = build_is_qubo(&Graph::path(3), 1.0, 2.0).unwrap();
        assert_eq!(p3.evaluate(&Assignment::zeros(3)).unwrap(), 0.0);
        assert_eq!(p3.evaluate(&Assignment::ones(3)).unwrap(), 1.0);
        let k3 = build_mc_qubo(&Graph::complete(3), 1.0, 2.0).unwrap();
        assert_eq!(k3.evaluate(&Assignment::ones(3)).unwrap(), -3.0);
        assert_eq!(
            p3.evaluate(&Assignment::zeros(2)),
            Err(QuboError::Dimension { expected: 3, got: 2 })
        );
        let mut m = QuboModel::new(2);
        m.set_offset(4.5);
        assert_eq!(m.evaluate(&Assignment::zeros(2)).unwrap(), 4.5);
    }

    #[test]
    fn ising_examples() {
        let zero = qubo_to_ising(&QuboModel::new(3));
        assert_eq!(zero.offset, 0.0);
        assert!(zero.h.is_empty() && zero.j.is_empty());

        let mut single = QuboModel::new(1);
        single.add_linear(0, -1.0).unwrap();
        let ising = qubo_to_ising(&single);
        assert_eq!(ising.h[&0], -0.5);
        assert_eq!(ising.offset, -0.5);

        let p3 = build_is_qubo(&Graph::path(3), 1.0, 2.0).unwrap();
        let ising = qubo_to_ising(&p3);
        for mask in 0..8 {
            let x = Assignment::from_mask(mask, 3);
            let lhs = p3.evaluate(&x).unwrap();
            let rhs = ising.energy(&spins_from_assignment(&x)).unwrap();
            assert!((lhs - rhs).abs() <= 1e-12);
        }
    }

    #[test]
    fn decode_examples() {
        assert_eq!(decode_vertex_set(&vec![0, 0, 0].into()), set(&[]));
        assert_eq!(decode_vertex_set(&vec![1, 0, 1].into()), set(&[0, 2]));
        assert_eq!(decode_vertex_set(&Assignment::ones(5)), set(&[0, 1, 2, 3, 4]));
    }

    #[test]
    fn validity_examples() {
        let k4 = Graph::complete(4);
        let p3 = Graph::path(3);
        assert!(is_clique(&k4, &set(&[])).unwrap());
        assert!(is_independent_set(&k4, &set(&[])).unwrap());
        assert!(is_clique(&k4, &set(&[0, 1, 2, 3])).unwrap());
        assert!(!is_independent_set(&k4, &set(&[0, 1, 2, 3])).unwrap());
        assert!(is_independent_set(&p3, &set(&[0, 2])).unwrap());
        assert!(!is_clique(&p3, &set(&[0, 2])).unwrap());
        assert!(is_independent_set(&p3, &set(&[5])).is_err());
        assert!(is_clique(&p3, &set(&[3])).is_err());
    }

    #[test]
    fn record_round_trip() {
        let m = build_is_qubo(&Graph::cycle(5), 1.0, 2.0).unwrap();
        let json = serde_json::to_string(&m.to_record()).unwrap();
        let back: QuboRecord = serde_json::from_str(&json).unwrap();
        let m2 = back.into_model().unwrap();
        assert_eq!(m2.linear(), m.linear());
        assert_eq!(m2.quadratic(), m.quadratic());
    }
}
