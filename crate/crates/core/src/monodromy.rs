//! Monodromy of loops in the regular part of the base, and the dual graph
//! rebuilt from it.
//!
//! A loop is a word of signed edge crossings. Crossing an edge positively
//! takes the face on its left to the face on its right (for `d = 1`, the
//! interval on the right of a point to the one on its left). Matrices act on
//! the basis `(η₁, …, η_{n-1}, g₀)`; a single positive crossing of `e` is the
//! identity plus the edge covector in the last column.

use std::collections::{BTreeMap, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{det2, LatticeVec};
use crate::tropical::{trace_faces, validate, EdgeId, TropicalDiagram};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Sign {
    #[serde(rename = "+")]
    Plus,
    #[serde(rename = "-")]
    Minus,
}

impl Sign {
    pub fn flip(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }

    pub fn as_i64(self) -> i64 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Crossing {
    pub edge: EdgeId,
    pub sign: Sign,
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Hash)]
pub struct Loop {
    pub crossings: Vec<Crossing>,
}

impl Loop {
    pub fn new(crossings: Vec<Crossing>) -> Self {
        Loop { crossings }
    }

    pub fn single(edge: EdgeId, sign: Sign) -> Self {
        Loop { crossings: vec![Crossing { edge, sign }] }
    }

    /// The same loop traversed backwards.
    pub fn inverse(&self) -> Self {
        Loop {
            crossings: self
                .crossings
                .iter()
                .rev()
                .map(|c| Crossing { edge: c.edge, sign: c.sign.flip() })
                .collect(),
        }
    }

    pub fn then(&self, other: &Loop) -> Self {
        let mut crossings = self.crossings.clone();
        crossings.extend_from_slice(&other.crossings);
        Loop { crossings }
    }

    /// `a b a⁻¹`.
    pub fn conjugate(&self, by: &Loop) -> Self {
        by.then(self).then(&by.inverse())
    }

    /// Parses `e0+ r2- p1+` (whitespace separated).
    pub fn parse(s: &str) -> Result<Self> {
        let crossings = s
            .split_whitespace()
            .map(|tok| {
                let (edge, sign) = match tok.strip_suffix('+') {
                    Some(e) => (e, Sign::Plus),
                    None => match tok.strip_suffix('-') {
                        Some(e) => (e, Sign::Minus),
                        None => return Err(Error::Parse(format!("crossing {tok:?} lacks a sign"))),
                    },
                };
                Ok(Crossing { edge: edge.parse()?, sign })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Loop { crossings })
    }
}

impl fmt::Display for Loop {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .crossings
            .iter()
            .map(|c| format!("{}{}", c.edge, if c.sign == Sign::Plus { '+' } else { '-' }))
            .collect();
        write!(f, "{}", parts.join(" "))
    }
}

/// Square integer matrix; upper unitriangular when produced by this module.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct UnipotentMatrix {
    rows: Vec<Vec<i64>>,
}

impl UnipotentMatrix {
    pub fn identity(n: usize) -> Self {
        UnipotentMatrix {
            rows: (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect(),
        }
    }

    pub fn from_rows(rows: Vec<Vec<i64>>) -> Self {
        UnipotentMatrix { rows }
    }

    pub fn size(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[Vec<i64>] {
        &self.rows
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity(self.size())
    }

    pub fn mul(&self, other: &Self) -> Self {
        let n = self.size();
        UnipotentMatrix {
            rows: (0..n)
                .map(|i| (0..n).map(|j| (0..n).map(|k| self.rows[i][k] * other.rows[k][j]).sum()).collect())
                .collect(),
        }
    }

    /// Inverse of an upper unitriangular matrix, by back substitution.
    pub fn inverse(&self) -> Self {
        let n = self.size();
        let mut inv = Self::identity(n).rows;
        for j in 0..n {
            for i in (0..j).rev() {
                let s: i64 = (i + 1..=j).map(|k| self.rows[i][k] * inv[k][j]).sum();
                inv[i][j] = -s;
            }
        }
        UnipotentMatrix { rows: inv }
    }

    /// `(M - I) g₀`: the entries above the diagonal in the last column.
    pub fn shear(&self) -> LatticeVec {
        let n = self.size();
        LatticeVec::new((0..n - 1).map(|i| self.rows[i][n - 1]).collect())
    }

    /// Action on a column vector of coordinates in `(η₁, …, g₀)`.
    pub fn apply(&self, v: &LatticeVec) -> LatticeVec {
        LatticeVec::new(
            self.rows
                .iter()
                .map(|row| row.iter().zip(v.coords()).map(|(a, b)| a * b).sum())
                .collect(),
        )
    }
}

impl fmt::Display for UnipotentMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = self
            .rows
            .iter()
            .map(|r| format!("[{}]", r.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")))
            .collect();
        write!(f, "[{}]", rows.join(","))
    }
}

/// Identity with the primitive covector `(a)` or `(a, b)` in the last
/// column above the diagonal.
pub fn standard_form_matrix(cov: &LatticeVec, n: usize) -> Result<UnipotentMatrix> {
    if cov.dim() + 1 != n {
        return Err(Error::DimensionMismatch { expected: n - 1, found: cov.dim() });
    }
    if !cov.is_primitive() {
        return Err(Error::NonPrimitive(cov.to_string()));
    }
    let mut m = UnipotentMatrix::identity(n);
    for (i, &c) in cov.coords().iter().enumerate() {
        m.rows[i][n - 1] = c;
    }
    Ok(m)
}

/// Primitive covector annihilating the edge: `rot90` of its direction, so
/// that it points from the face on the left to the face on the right
/// (`1` for a point of a `d = 1` diagram).
pub fn edge_covector(diag: &TropicalDiagram, e: EdgeId) -> Result<LatticeVec> {
    let dir = diag.edge_direction(e)?;
    Ok(if diag.dim() == 1 { dir } else { dir.rot90() })
}

pub fn loop_monodromy(diag: &TropicalDiagram, l: &Loop) -> Result<UnipotentMatrix> {
    let n = diag.dim() + 1;
    let mut m = UnipotentMatrix::identity(n);
    for c in &l.crossings {
        let step = standard_form_matrix(&edge_covector(diag, c.edge)?, n)?;
        let step = match c.sign {
            Sign::Plus => step,
            Sign::Minus => step.inverse(),
        };
        m = step.mul(&m);
    }
    Ok(m)
}

/// The loop around vertex `v` crossing its edges counter-clockwise.
pub fn vertex_loop(diag: &TropicalDiagram, v: usize) -> Result<Loop> {
    if diag.dim() != 2 || v >= diag.vertices().len() {
        return Err(Error::InvalidDiagram(format!("no vertex {v} with edges")));
    }
    // moving ccw across an incidence leaves the face on its cw side; that is
    // a positive crossing exactly when the edge points into v
    let crossings = diag
        .incidences(v)?
        .into_iter()
        .map(|i| Crossing { edge: i.edge, sign: if i.forward { Sign::Minus } else { Sign::Plus } })
        .collect();
    Ok(Loop { crossings })
}

/// Free-group test: a positive crossing from face `α` to face `β` maps to
/// `x_α⁻¹ x_β`, with one face's generator set to 1; the loop is
/// contractible exactly when the reduced word is empty.
pub fn is_contractible(diag: &TropicalDiagram, l: &Loop) -> Result<bool> {
    let faces = trace_faces(diag)?;
    let root = 0;
    let mut word: Vec<(usize, bool)> = Vec::new();
    let mut push = |g: usize, inv: bool| {
        if g == root {
            return;
        }
        if word.last() == Some(&(g, !inv)) {
            word.pop();
        } else {
            word.push((g, inv));
        }
    };
    for c in &l.crossings {
        let &(a, b) = faces
            .sides
            .get(&c.edge)
            .ok_or_else(|| Error::UnknownEdge(c.edge.to_string()))?;
        let (from, to) = match c.sign {
            Sign::Plus => (a, b),
            Sign::Minus => (b, a),
        };
        push(from, true);
        push(to, false);
    }
    Ok(word.is_empty())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DualGraphEmbedding {
    /// Position of each face (indexed as in [`trace_faces`]).
    pub positions: Vec<LatticeVec>,
    /// `(edge, source face, target face)`.
    pub adjacency: Vec<(EdgeId, usize, usize)>,
    pub root: usize,
}

impl DualGraphEmbedding {
    pub fn point_set(&self) -> std::collections::BTreeSet<LatticeVec> {
        self.positions.iter().cloned().collect()
    }

    pub fn to_json(&self) -> EmbeddingJson {
        EmbeddingJson {
            positions: self.positions.iter().map(|p| p.coords().to_vec()).collect(),
            adjacency: self
                .adjacency
                .iter()
                .map(|(e, s, t)| (e.to_string(), *s, *t))
                .collect(),
            root: self.root,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EmbeddingJson {
    pub positions: Vec<Vec<i64>>,
    pub adjacency: Vec<(String, usize, usize)>,
    pub root: usize,
}

/// Embeds the dual graph by summing edge covectors along a spanning tree of
/// the face adjacency graph (edges tried in the diagram's order).
pub fn build_dual_graph(diag: &TropicalDiagram) -> Result<DualGraphEmbedding> {
    build_dual_graph_with_order(diag, &diag.edge_ids())
}

/// As [`build_dual_graph`], with the spanning tree grown greedily from the
/// edges in `order` (edges not listed are tried last).
pub fn build_dual_graph_with_order(
    diag: &TropicalDiagram,
    order: &[EdgeId],
) -> Result<DualGraphEmbedding> {
    validate(diag).into_result()?;
    check_smooth_vertices(diag)?;
    let faces = trace_faces(diag)?;
    let nf = faces.face_count();

    let mut ordered: Vec<EdgeId> = order.iter().copied().filter(|e| faces.sides.contains_key(e)).collect();
    for e in diag.edge_ids() {
        if !ordered.contains(&e) {
            ordered.push(e);
        }
    }
    let mut parent: Vec<usize> = (0..nf).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut x = x;
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    let mut tree: Vec<Vec<(usize, LatticeVec)>> = vec![Vec::new(); nf];
    for &e in &ordered {
        let (s, t) = faces.sides[&e];
        let (rs, rt) = (find(&mut parent, s), find(&mut parent, t));
        if rs != rt {
            parent[rs] = rt;
            let cov = edge_covector(diag, e)?;
            tree[s].push((t, cov.clone()));
            tree[t].push((s, cov.neg()));
        }
    }
    let mut pos: Vec<Option<LatticeVec>> = vec![None; nf];
    pos[0] = Some(LatticeVec::zero(diag.dim()));
    let mut queue = VecDeque::from([0usize]);
    while let Some(i) = queue.pop_front() {
        let pi = pos[i].clone().expect("visited");
        for (j, cov) in &tree[i] {
            if pos[*j].is_none() {
                pos[*j] = Some(pi.add(cov));
                queue.push_back(*j);
            }
        }
    }
    let pos: Vec<LatticeVec> = pos
        .into_iter()
        .map(|p| p.ok_or_else(|| Error::InvalidDiagram("face graph is disconnected".into())))
        .collect::<Result<_>>()?;

    let mut adjacency = Vec::new();
    for e in diag.edge_ids() {
        let (s, t) = faces.sides[&e];
        if pos[t].sub(&pos[s]) != edge_covector(diag, e)? {
            return Err(Error::InvalidDiagram(format!("covectors do not close up around {e}")));
        }
        adjacency.push((e, s, t));
    }
    let root = (0..nf)
        .min_by_key(|&i| crate::tropical::root_key_of(&pos[i]))
        .expect("nonempty");
    let origin = pos[root].clone();
    let positions = pos.iter().map(|p| p.sub(&origin)).collect();
    Ok(DualGraphEmbedding { positions, adjacency, root })
}

/// Every vertex trivalent with consecutive directions spanning the lattice.
fn check_smooth_vertices(diag: &TropicalDiagram) -> Result<()> {
    if diag.dim() == 1 {
        return Ok(());
    }
    for v in 0..diag.vertices().len() {
        let inc = diag.incidences(v)?;
        if inc.len() != 3 {
            return Err(Error::NotSmooth(format!("vertex {v} has valence {}", inc.len())));
        }
        if det2(&inc[0].dir, &inc[1].dir).abs() != 1 {
            return Err(Error::NotSmooth(format!("dual triangle of vertex {v} is not unimodular")));
        }
    }
    Ok(())
}

/// Per-edge covectors, keyed by edge.
pub fn edge_covectors(diag: &TropicalDiagram) -> Result<BTreeMap<EdgeId, LatticeVec>> {
    diag.edge_ids().into_iter().map(|e| Ok((e, edge_covector(diag, e)?))).collect()
}
