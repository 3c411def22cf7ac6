//! Toric diagrams as planar tropical curves (or marked points on a line).
//!
//! Balancing is the usual tropical condition: at every vertex the primitive
//! outgoing directions of its edges and rays sum to zero. All edges have
//! weight one.

mod charges;
pub(crate) mod dual;
mod faces;
mod render;

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{angle_cmp, primitive, LatticeVec, RationalPoint};

pub use charges::{diagram_from_charges, web_from_heights, ChargeInput, ChargeMatrix};
pub(crate) use charges::plane_through;
pub use dual::{dual_subdivision, is_smooth, DualJson, DualSubdivision, EdgeDualJson};
pub(crate) use dual::root_key as root_key_of;
pub use faces::{trace_faces, FaceTrace};
pub use render::{render, RenderFormat};

/// A diagram edge: a bounded edge, a ray, or (for `d = 1`) a marked point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum EdgeId {
    Bounded(usize),
    Ray(usize),
    Point(usize),
}

impl fmt::Display for EdgeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EdgeId::Bounded(i) => write!(f, "e{i}"),
            EdgeId::Ray(i) => write!(f, "r{i}"),
            EdgeId::Point(i) => write!(f, "p{i}"),
        }
    }
}

impl std::str::FromStr for EdgeId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("edge reference {s:?}, expected e<i>, r<i> or p<i>"));
        let (kind, idx) = s.split_at(s.len().min(1));
        let idx: usize = idx.parse().map_err(|_| bad())?;
        match kind {
            "e" => Ok(EdgeId::Bounded(idx)),
            "r" => Ok(EdgeId::Ray(idx)),
            "p" => Ok(EdgeId::Point(idx)),
            _ => Err(bad()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Ray {
    pub at: usize,
    pub dir: LatticeVec,
}

/// One edge or ray leaving a vertex, as seen from that vertex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Incidence {
    /// Primitive outgoing direction.
    pub dir: LatticeVec,
    pub edge: EdgeId,
    /// Whether the edge's own orientation leaves this vertex
    /// (always true for rays; for bounded edges, true at the first endpoint).
    pub forward: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TropicalDiagram {
    dim: usize,
    vertices: Vec<RationalPoint>,
    edges: Vec<(usize, usize)>,
    rays: Vec<Ray>,
}

impl TropicalDiagram {
    /// Checks the structural invariants only; the tropical axioms are
    /// reported by [`validate`].
    pub fn new(
        dim: usize,
        vertices: Vec<RationalPoint>,
        edges: Vec<(usize, usize)>,
        rays: Vec<Ray>,
    ) -> Result<Self> {
        if dim != 1 && dim != 2 {
            return Err(Error::InvalidDiagram(format!("dimension {dim} is not 1 or 2")));
        }
        for v in &vertices {
            if v.dim() != dim {
                return Err(Error::DimensionMismatch { expected: dim, found: v.dim() });
            }
        }
        let distinct: BTreeSet<&RationalPoint> = vertices.iter().collect();
        if distinct.len() != vertices.len() {
            return Err(Error::InvalidDiagram("two vertices coincide".into()));
        }
        if dim == 1 && (!edges.is_empty() || !rays.is_empty()) {
            return Err(Error::InvalidDiagram("a 1-dimensional diagram has only points".into()));
        }
        for (i, &(a, b)) in edges.iter().enumerate() {
            if a >= vertices.len() || b >= vertices.len() {
                return Err(Error::InvalidDiagram(format!("edge e{i} has an unknown endpoint")));
            }
            if a == b {
                return Err(Error::InvalidDiagram(format!("edge e{i} is a loop")));
            }
        }
        for (i, r) in rays.iter().enumerate() {
            if r.at >= vertices.len() {
                return Err(Error::InvalidDiagram(format!("ray r{i} starts at an unknown vertex")));
            }
            if r.dir.dim() != 2 {
                return Err(Error::DimensionMismatch { expected: 2, found: r.dir.dim() });
            }
            if r.dir.is_zero() {
                return Err(Error::InvalidDiagram(format!("ray r{i} has zero direction")));
            }
        }
        Ok(TropicalDiagram { dim, vertices, edges, rays })
    }

    /// `k` marked points on the line, sorted.
    pub fn points(mut points: Vec<RationalPoint>) -> Result<Self> {
        points.sort();
        Self::new(1, points, Vec::new(), Vec::new())
    }

    /// The single vertex at the origin with rays `(1,0), (0,1), (-1,-1)`.
    pub fn c3() -> Self {
        let rays = [[1, 0], [0, 1], [-1, -1]]
            .iter()
            .map(|d| Ray { at: 0, dir: LatticeVec::new(d.to_vec()) })
            .collect();
        Self::new(2, vec![RationalPoint::origin(2)], Vec::new(), rays)
            .expect("well-formed")
    }

    /// One marked point at the origin of the line.
    pub fn focus_focus() -> Self {
        Self::points(vec![RationalPoint::origin(1)]).expect("well-formed")
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn vertices(&self) -> &[RationalPoint] {
        &self.vertices
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn rays(&self) -> &[Ray] {
        &self.rays
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// All edge references in a fixed order: bounded edges, rays, points.
    pub fn edge_ids(&self) -> Vec<EdgeId> {
        if self.dim == 1 {
            return (0..self.vertices.len()).map(EdgeId::Point).collect();
        }
        (0..self.edges.len())
            .map(EdgeId::Bounded)
            .chain((0..self.rays.len()).map(EdgeId::Ray))
            .collect()
    }

    pub fn has_edge(&self, e: EdgeId) -> bool {
        match e {
            EdgeId::Bounded(i) => self.dim == 2 && i < self.edges.len(),
            EdgeId::Ray(i) => self.dim == 2 && i < self.rays.len(),
            EdgeId::Point(i) => self.dim == 1 && i < self.vertices.len(),
        }
    }

    /// Primitive direction of an edge in its own orientation
    /// (first endpoint to second, or outward along a ray).
    pub fn edge_direction(&self, e: EdgeId) -> Result<LatticeVec> {
        match e {
            EdgeId::Bounded(i) if self.has_edge(e) => {
                let (a, b) = self.edges[i];
                self.vertices[b].sub(&self.vertices[a]).lattice_direction()
            }
            EdgeId::Ray(i) if self.has_edge(e) => primitive(&self.rays[i].dir),
            EdgeId::Point(_) if self.has_edge(e) => Ok(LatticeVec::new(vec![1])),
            _ => Err(Error::UnknownEdge(e.to_string())),
        }
    }

    /// A point on the edge: its first endpoint, or the ray's apex.
    pub fn edge_point(&self, e: EdgeId) -> Result<&RationalPoint> {
        match e {
            EdgeId::Bounded(i) if self.has_edge(e) => Ok(&self.vertices[self.edges[i].0]),
            EdgeId::Ray(i) if self.has_edge(e) => Ok(&self.vertices[self.rays[i].at]),
            EdgeId::Point(i) if self.has_edge(e) => Ok(&self.vertices[i]),
            _ => Err(Error::UnknownEdge(e.to_string())),
        }
    }

    /// Edges and rays at vertex `v`, sorted counter-clockwise by outgoing
    /// direction.
    pub fn incidences(&self, v: usize) -> Result<Vec<Incidence>> {
        let mut out = Vec::new();
        for (i, &(a, b)) in self.edges.iter().enumerate() {
            if a == v || b == v {
                let other = if a == v { b } else { a };
                let dir = self.vertices[other].sub(&self.vertices[v]).lattice_direction()?;
                out.push(Incidence { dir, edge: EdgeId::Bounded(i), forward: a == v });
            }
        }
        for (i, r) in self.rays.iter().enumerate() {
            if r.at == v {
                out.push(Incidence { dir: primitive(&r.dir)?, edge: EdgeId::Ray(i), forward: true });
            }
        }
        out.sort_by(|x, y| angle_cmp(&x.dir, &y.dir).then(x.edge.cmp(&y.edge)));
        Ok(out)
    }

    pub fn to_json(&self) -> DiagramJson {
        DiagramJson {
            dim: self.dim,
            vertices: self.vertices.iter().map(|v| v.to_strings()).collect(),
            edges: self.edges.iter().map(|&(a, b)| [a, b]).collect(),
            rays: self
                .rays
                .iter()
                .map(|r| RayJson { at: r.at, dir: r.dir.coords().to_vec() })
                .collect(),
        }
    }

    pub fn from_json(j: &DiagramJson) -> Result<Self> {
        let vertices = j
            .vertices
            .iter()
            .map(|v| RationalPoint::parse(v))
            .collect::<Result<Vec<_>>>()?;
        let rays = j
            .rays
            .iter()
            .map(|r| Ray { at: r.at, dir: LatticeVec::new(r.dir.clone()) })
            .collect();
        let edges = j.edges.iter().map(|e| (e[0], e[1])).collect();
        Self::new(j.dim, vertices, edges, rays)
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        let j: DiagramJson = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        Self::from_json(&j)
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(&self.to_json()).expect("diagram serializes")
    }
}

/// `{"dim":2, "vertices":[["0","0"]], "edges":[[0,1]], "rays":[{"at":0,"dir":[1,0]}]}`
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiagramJson {
    pub dim: usize,
    pub vertices: Vec<Vec<String>>,
    #[serde(default)]
    pub edges: Vec<[usize; 2]>,
    #[serde(default)]
    pub rays: Vec<RayJson>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RayJson {
    pub at: usize,
    pub dir: Vec<i64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub trivalent: bool,
    pub balanced: bool,
    pub primitive_directions: bool,
    pub connected: bool,
    pub failures: Vec<String>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.trivalent && self.balanced && self.primitive_directions && self.connected
    }

    /// Error naming the first failed axiom, if any.
    pub fn into_result(self) -> Result<()> {
        match self.failures.first() {
            None => Ok(()),
            Some(f) => Err(Error::AxiomFailure(f.clone())),
        }
    }
}

pub fn validate(diag: &TropicalDiagram) -> ValidationReport {
    let mut r = ValidationReport {
        trivalent: true,
        balanced: true,
        primitive_directions: true,
        connected: true,
        failures: Vec::new(),
    };
    if diag.is_empty() {
        r.connected = false;
        r.failures.push("connected: the diagram is empty".into());
        return r;
    }
    if diag.dim == 1 {
        return r;
    }
    for (i, ray) in diag.rays.iter().enumerate() {
        if !ray.dir.is_primitive() {
            r.primitive_directions = false;
            r.failures.push(format!("primitive: ray r{i} has direction {}", ray.dir));
        }
    }
    for v in 0..diag.vertices.len() {
        let inc = match diag.incidences(v) {
            Ok(inc) => inc,
            Err(e) => {
                r.balanced = false;
                r.failures.push(format!("balanced: vertex {v}: {e}"));
                continue;
            }
        };
        if inc.len() != 3 {
            r.trivalent = false;
            r.failures.push(format!("trivalent: vertex {v} has valence {}", inc.len()));
        }
        let sum = inc.iter().fold(LatticeVec::zero(2), |s, i| s.add(&i.dir));
        if !sum.is_zero() {
            r.balanced = false;
            r.failures.push(format!("balanced: directions at vertex {v} sum to {sum}"));
        }
    }
    // union-find over bounded edges
    let mut parent: Vec<usize> = (0..diag.vertices.len()).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut x = x;
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    for &(a, b) in &diag.edges {
        let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
        parent[ra] = rb;
    }
    let roots: BTreeSet<usize> = (0..diag.vertices.len()).map(|v| find(&mut parent, v)).collect();
    if roots.len() > 1 {
        r.connected = false;
        r.failures.push(format!("connected: {} components", roots.len()));
    }
    r
}
