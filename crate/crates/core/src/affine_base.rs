//! The base `ℝⁿ = ℝ^{n-1} × ℝ` with coordinates `(x, t)`: the diagram sits at
//! height `t = τ`, and below every edge hangs a cut
//! `P_e = {(x, t) : x ∈ e, t ≤ τ_e}` across which the affine structure is
//! glued by the edge's standard-form matrix.
//!
//! `τ` is one constant per edge. For planar diagrams it must agree at every
//! vertex, so a connected diagram sits at a single height; for marked points
//! on a line each point has its own height and the wall between two points
//! interpolates linearly.

use std::collections::BTreeMap;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{LatticeVec, Rational, RationalPoint};
use crate::monodromy::{edge_covector, standard_form_matrix, Crossing, Sign, UnipotentMatrix};
use crate::tropical::{dual_subdivision, DualSubdivision, EdgeId, TropicalDiagram};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cut {
    pub edge: EdgeId,
    pub tau: Rational,
    pub gluing: UnipotentMatrix,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CutPresentation {
    diagram: TropicalDiagram,
    dual: DualSubdivision,
    cuts: Vec<Cut>,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum ChamberId {
    #[serde(rename = "V+")]
    VPlus,
    #[serde(rename = "V-")]
    VMinus,
    /// The wall at height `τ` over the face of this dual vertex.
    Wall(LatticeVec),
}

impl std::fmt::Display for ChamberId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ChamberId::VPlus => write!(f, "V+"),
            ChamberId::VMinus => write!(f, "V-"),
            ChamberId::Wall(a) => write!(f, "W{a}"),
        }
    }
}

impl ChamberId {
    /// The chamber on the other side of the wall.
    pub fn opposite(&self) -> Option<ChamberId> {
        match self {
            ChamberId::VPlus => Some(ChamberId::VMinus),
            ChamberId::VMinus => Some(ChamberId::VPlus),
            ChamberId::Wall(_) => None,
        }
    }
}

impl std::str::FromStr for ChamberId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "V+" => Ok(ChamberId::VPlus),
            "V-" => Ok(ChamberId::VMinus),
            _ => {
                let inner = s
                    .strip_prefix("W(")
                    .and_then(|r| r.strip_suffix(')'))
                    .ok_or_else(|| Error::Parse(format!("unknown chamber {s}")))?;
                let coords = inner
                    .split(',')
                    .map(|c| c.trim().parse::<i64>().map_err(|e| Error::Parse(e.to_string())))
                    .collect::<Result<Vec<_>>>()?;
                Ok(ChamberId::Wall(LatticeVec::new(coords)))
            }
        }
    }
}

/// `τ` defaults to 0 on edges that are not listed.
pub fn build_cut_presentation(
    diag: &TropicalDiagram,
    tau: &BTreeMap<EdgeId, Rational>,
) -> Result<CutPresentation> {
    for e in tau.keys() {
        if !diag.has_edge(*e) {
            return Err(Error::UnknownEdge(e.to_string()));
        }
    }
    let dual = dual_subdivision(diag)?;
    let n = diag.dim() + 1;
    let cuts = diag
        .edge_ids()
        .into_iter()
        .map(|e| {
            Ok(Cut {
                edge: e,
                tau: tau.get(&e).cloned().unwrap_or_else(Rational::zero),
                gluing: standard_form_matrix(&edge_covector(diag, e)?, n)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    if diag.dim() == 2 {
        for v in 0..diag.vertices().len() {
            let heights: Vec<&Rational> = diag
                .incidences(v)?
                .iter()
                .map(|i| &cuts.iter().find(|c| c.edge == i.edge).expect("cut per edge").tau)
                .collect();
            if heights.windows(2).any(|w| w[0] != w[1]) {
                return Err(Error::InvalidDiagram(format!("τ is discontinuous at vertex {v}")));
            }
        }
    }
    Ok(CutPresentation { diagram: diag.clone(), dual, cuts })
}

impl CutPresentation {
    pub fn diagram(&self) -> &TropicalDiagram {
        &self.diagram
    }

    pub fn dual(&self) -> &DualSubdivision {
        &self.dual
    }

    pub fn cuts(&self) -> &[Cut] {
        &self.cuts
    }

    pub fn base_dim(&self) -> usize {
        self.diagram.dim() + 1
    }

    fn tau_of(&self, e: EdgeId) -> &Rational {
        &self.cuts.iter().find(|c| c.edge == e).expect("cut per edge").tau
    }

    /// Height of the wall over `x`.
    pub fn wall_height(&self, x: &RationalPoint) -> Rational {
        if self.diagram.dim() == 2 {
            return self.cuts.first().map(|c| c.tau.clone()).unwrap_or_else(Rational::zero);
        }
        let pts = self.diagram.vertices();
        let x = x.get(0);
        let tau = |i: usize| self.tau_of(EdgeId::Point(i)).clone();
        if pts.is_empty() {
            return Rational::zero();
        }
        if x <= pts[0].get(0) {
            return tau(0);
        }
        for i in 1..pts.len() {
            let (a, b) = (pts[i - 1].get(0), pts[i].get(0));
            if x <= b {
                return tau(i - 1) + (tau(i) - tau(i - 1)) * (x - a) / (b - a);
            }
        }
        tau(pts.len() - 1)
    }

    fn split(&self, p: &RationalPoint) -> Result<(RationalPoint, Rational)> {
        if p.dim() != self.base_dim() {
            return Err(Error::DimensionMismatch { expected: self.base_dim(), found: p.dim() });
        }
        Ok((p.truncate_last(), p.last().clone()))
    }

    pub fn chamber_of(&self, p: &RationalPoint) -> Result<ChamberId> {
        let (x, t) = self.split(p)?;
        let h = self.wall_height(&x);
        let face = self.dual.locate(&self.diagram, &x)?;
        match face {
            None if t <= h => Err(Error::OnWall(format!("{p} lies on the discriminant or a cut"))),
            _ if t > h => Ok(ChamberId::VPlus),
            _ if t < h => Ok(ChamberId::VMinus),
            Some(i) => Ok(ChamberId::Wall(self.dual.point(i).clone())),
            None => unreachable!("covered above"),
        }
    }

    /// Signed cut crossings along a polyline, in order.
    pub fn path_crossings(&self, path: &[RationalPoint]) -> Result<Vec<Crossing>> {
        for w in path.windows(2) {
            if w[0] == w[1] {
                return Err(Error::InvalidDiagram("consecutive path points coincide".into()));
            }
        }
        let mut out = Vec::new();
        for p in path {
            let (x, t) = self.split(p)?;
            if self.dual.locate(&self.diagram, &x)?.is_none() && t <= self.wall_height(&x) {
                return Err(Error::PathHitsDiscriminant(format!(
                    "path point {p} lies on the discriminant or a cut"
                )));
            }
        }
        for w in path.windows(2) {
            out.extend(self.segment_crossings(&w[0], &w[1])?);
        }
        Ok(out)
    }

    fn segment_crossings(&self, a: &RationalPoint, b: &RationalPoint) -> Result<Vec<Crossing>> {
        let (xa, ta) = self.split(a)?;
        let (xb, tb) = self.split(b)?;
        let dx = xb.sub(&xa);
        let t_at = |lambda: &Rational| &ta + (&tb - &ta) * lambda;
        let hit = |what: String| Err(Error::PathHitsDiscriminant(what));
        let mut found: Vec<(Rational, Crossing)> = Vec::new();

        if self.diagram.dim() == 1 {
            for (i, p) in self.diagram.vertices().iter().enumerate() {
                let e = EdgeId::Point(i);
                let tau = self.tau_of(e);
                let (x0, step) = (xa.get(0), dx.get(0));
                if step.is_zero() {
                    // already checked: endpoints are off the cuts
                    continue;
                }
                let lambda = (p.get(0) - x0) / step;
                if lambda.is_negative() || lambda > Rational::one() {
                    continue;
                }
                let t = t_at(&lambda);
                if t > *tau {
                    continue;
                }
                if t == *tau {
                    return hit(format!("segment {a} -> {b} meets the discriminant over {e}"));
                }
                // moving left across the point is positive
                let sign = if step.is_negative() { Sign::Plus } else { Sign::Minus };
                found.push((lambda, Crossing { edge: e, sign }));
            }
        } else {
            let dx_zero = dx.coords().iter().all(|c| c.is_zero());
            let det = |u: &RationalPoint, v: &RationalPoint| u.get(0) * v.get(1) - u.get(1) * v.get(0);
            for e in self.diagram.edge_ids() {
                let tau = self.tau_of(e).clone();
                let start = self.diagram.edge_point(e)?.clone();
                let (dir, ray) = match e {
                    EdgeId::Bounded(i) => {
                        let (_, q) = self.diagram.edges()[i];
                        (self.diagram.vertices()[q].sub(&start), false)
                    }
                    _ => (self.diagram.edge_direction(e)?.to_point(), true),
                };
                let den = det(&dx, &dir);
                let w = start.sub(&xa);
                if den.is_zero() {
                    // parallel: only a problem when running along the edge below τ
                    if !dx_zero && det(&w, &dx).is_zero() {
                        if let Some((l0, l1)) = collinear_overlap(&xa, &dx, &start, &dir, ray) {
                            if t_at(&l0) <= tau || t_at(&l1) <= tau {
                                return hit(format!("segment {a} -> {b} runs along the cut of {e}"));
                            }
                        }
                    }
                    continue;
                }
                let lambda = det(&w, &dir) / &den;
                let s = det(&w, &dx) / &den;
                let s_max = if ray { None } else { Some(Rational::one()) };
                if lambda.is_negative() || lambda > Rational::one() || s.is_negative() {
                    continue;
                }
                if let Some(m) = &s_max {
                    if s > *m {
                        continue;
                    }
                }
                let t = t_at(&lambda);
                if t > tau {
                    continue;
                }
                let at_vertex = s.is_zero() || s_max.as_ref() == Some(&s);
                if t == tau || at_vertex {
                    return hit(format!("segment {a} -> {b} meets the discriminant near {e}"));
                }
                // positive when moving from the left of the edge to its right
                let sign = if den.is_positive() { Sign::Plus } else { Sign::Minus };
                found.push((lambda, Crossing { edge: e, sign }));
            }
        }
        found.sort_by(|p, q| p.0.cmp(&q.0));
        Ok(found.into_iter().map(|(_, c)| c).collect())
    }

    /// Parallel transport of a covector (coordinates in `(η₁, …, g₀)`)
    /// along a polyline.
    pub fn transport_covector(&self, path: &[RationalPoint], g: &LatticeVec) -> Result<LatticeVec> {
        if g.dim() != self.base_dim() {
            return Err(Error::DimensionMismatch { expected: self.base_dim(), found: g.dim() });
        }
        let mut g = g.clone();
        for c in self.path_crossings(path)? {
            let m = &self.cuts.iter().find(|k| k.edge == c.edge).expect("cut per edge").gluing;
            g = match c.sign {
                Sign::Plus => m.apply(&g),
                Sign::Minus => m.inverse().apply(&g),
            };
        }
        Ok(g)
    }
}

// parameter range of the segment xa + λ dx (λ ∈ [0,1]) lying on the edge
fn collinear_overlap(
    xa: &RationalPoint,
    dx: &RationalPoint,
    start: &RationalPoint,
    dir: &RationalPoint,
    ray: bool,
) -> Option<(Rational, Rational)> {
    let dd = dx.get(0) * dx.get(0) + dx.get(1) * dx.get(1);
    let along = |p: &RationalPoint| {
        let w = p.sub(xa);
        (w.get(0) * dx.get(0) + w.get(1) * dx.get(1)) / &dd
    };
    let s0 = along(start);
    let s1 = along(&start.add(dir));
    let (lo, hi) = match (ray, s1 > s0) {
        (true, true) => (Some(s0), None),
        (true, false) => (None, Some(s0)),
        (false, _) => (Some(s0.clone().min(s1.clone())), Some(s0.max(s1))),
    };
    let l0 = lo.map_or(Rational::zero(), |l| l.max(Rational::zero()));
    let l1 = hi.map_or(Rational::one(), |h| h.min(Rational::one()));
    (l0 <= l1).then_some((l0, l1))
}
