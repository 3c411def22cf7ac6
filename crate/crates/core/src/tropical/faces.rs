//! Complementary regions of a planar diagram, found by walking half-edges
//! with the region on the left. Rays meet at a single vertex at infinity,
//! where they are ordered by angle and, among parallel rays, from right to
//! left.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use num_traits::{One, Signed, Zero};

use crate::lattice::{angle_cmp, int, Rational, RationalPoint};
use crate::tropical::{EdgeId, TropicalDiagram};

/// A half-edge: an edge with an orientation. `true` follows the edge's own
/// orientation (first endpoint to second, outward along a ray).
pub type Dart = (EdgeId, bool);

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FaceTrace {
    /// Boundary darts of each face, in walking order.
    pub faces: Vec<Vec<Dart>>,
    /// `(source, target)` faces of a positive crossing of every edge: the
    /// faces on its left and right (`d = 2`), or the intervals to the right
    /// and left of a point (`d = 1`).
    pub sides: BTreeMap<EdgeId, (usize, usize)>,
}

impl FaceTrace {
    pub fn face_count(&self) -> usize {
        self.faces.len()
    }
}

/// Faces of the complement of the diagram. `d = 1` diagrams with `k` points
/// have `k + 1` intervals, numbered from the right.
pub fn trace_faces(diag: &TropicalDiagram) -> Result<FaceTrace> {
    if diag.is_empty() {
        return Err(Error::EmptyDiagram);
    }
    if diag.dim() == 1 {
        let k = diag.vertices().len();
        let mut faces = vec![Vec::new(); k + 1];
        let mut sides = BTreeMap::new();
        // point i (ascending) has interval k-1-i on its right
        for i in 0..k {
            let right = k - 1 - i;
            let left = right + 1;
            sides.insert(EdgeId::Point(i), (right, left));
            faces[right].push((EdgeId::Point(i), true));
            faces[left].push((EdgeId::Point(i), false));
        }
        return Ok(FaceTrace { faces, sides });
    }

    check_embedded(diag)?;
    let n = diag.vertices().len();
    let incidences = (0..n).map(|v| diag.incidences(v)).collect::<Result<Vec<_>>>()?;
    // position of each outgoing dart in its vertex's ccw list
    let mut slot: BTreeMap<Dart, (usize, usize)> = BTreeMap::new();
    for (v, inc) in incidences.iter().enumerate() {
        for (k, i) in inc.iter().enumerate() {
            slot.insert((i.edge, i.forward), (v, k));
        }
    }
    let mut rays_at_infinity: Vec<usize> = (0..diag.rays().len()).collect();
    rays_at_infinity.sort_by(|&a, &b| {
        let (ra, rb) = (&diag.rays()[a], &diag.rays()[b]);
        let key = |r: &crate::tropical::Ray| {
            let p = &diag.vertices()[r.at];
            // det(dir, p)
            &p.coords()[1] * int(r.dir.get(0)) - &p.coords()[0] * int(r.dir.get(1))
        };
        angle_cmp(&ra.dir, &rb.dir).then_with(|| key(ra).cmp(&key(rb))).then(a.cmp(&b))
    });
    let mut next_at_infinity = BTreeMap::new();
    for (k, &r) in rays_at_infinity.iter().enumerate() {
        next_at_infinity.insert(r, rays_at_infinity[(k + 1) % rays_at_infinity.len()]);
    }

    let next = |d: Dart| -> Dart {
        match d {
            (EdgeId::Ray(r), true) => (EdgeId::Ray(next_at_infinity[&r]), false),
            (e, fwd) => {
                // arrive at a vertex; leave along the clockwise neighbour of
                // the reversed dart
                let (v, k) = slot[&(e, !fwd)];
                let inc = &incidences[v];
                let j = (k + inc.len() - 1) % inc.len();
                (inc[j].edge, inc[j].forward)
            }
        }
    };

    let mut all: Vec<Dart> = Vec::new();
    for e in diag.edge_ids() {
        all.push((e, true));
        all.push((e, false));
    }
    let mut face_of: BTreeMap<Dart, usize> = BTreeMap::new();
    let mut faces = Vec::new();
    for &start in &all {
        if face_of.contains_key(&start) {
            continue;
        }
        let id = faces.len();
        let mut cycle = Vec::new();
        let mut d = start;
        loop {
            face_of.insert(d, id);
            cycle.push(d);
            d = next(d);
            if d == start {
                break;
            }
            if face_of.contains_key(&d) {
                return Err(Error::InvalidDiagram("face walk does not close".into()));
            }
        }
        faces.push(cycle);
    }

    let has_infinity = !diag.rays().is_empty();
    let v = n as i64 + i64::from(has_infinity);
    let e = (diag.edges().len() + diag.rays().len()) as i64;
    if v - e + faces.len() as i64 != 2 {
        return Err(Error::InvalidDiagram(
            "edges cross or the diagram is not planar (Euler characteristic mismatch)".into(),
        ));
    }
    let sides = diag
        .edge_ids()
        .into_iter()
        .map(|e| (e, (face_of[&(e, true)], face_of[&(e, false)])))
        .collect();
    Ok(FaceTrace { faces, sides })
}

// p + s d for s in [0, 1] (segment) or [0, ∞) (ray)
struct Piece {
    id: EdgeId,
    p: RationalPoint,
    d: RationalPoint,
    ray: bool,
    ends: Vec<usize>,
}

fn det(a: &RationalPoint, b: &RationalPoint) -> Rational {
    a.get(0) * b.get(1) - a.get(1) * b.get(0)
}

fn in_range(s: &Rational, ray: bool) -> bool {
    !s.is_negative() && (ray || *s <= Rational::one())
}

/// Rejects diagrams whose edges or rays meet anywhere except at a shared
/// endpoint.
pub(crate) fn check_embedded(diag: &TropicalDiagram) -> Result<()> {
    let vs = diag.vertices();
    let mut pieces = Vec::new();
    for (i, &(a, b)) in diag.edges().iter().enumerate() {
        pieces.push(Piece {
            id: EdgeId::Bounded(i),
            p: vs[a].clone(),
            d: vs[b].sub(&vs[a]),
            ray: false,
            ends: vec![a, b],
        });
    }
    for (i, r) in diag.rays().iter().enumerate() {
        pieces.push(Piece {
            id: EdgeId::Ray(i),
            p: vs[r.at].clone(),
            d: r.dir.to_point(),
            ray: true,
            ends: vec![r.at],
        });
    }
    let crossing = |a: &Piece, b: &Piece| {
        Err(Error::InvalidDiagram(format!("{} and {} intersect", a.id, b.id)))
    };
    for (i, a) in pieces.iter().enumerate() {
        for b in &pieces[i + 1..] {
            let shared: Vec<usize> = a.ends.iter().filter(|v| b.ends.contains(v)).copied().collect();
            let w = b.p.sub(&a.p);
            let den = det(&a.d, &b.d);
            if !den.is_zero() {
                let s = det(&w, &b.d) / &den;
                let u = det(&w, &a.d) / &den;
                if in_range(&s, a.ray) && in_range(&u, b.ray) {
                    let x = a.p.add(&a.d.scale(&s));
                    if !shared.iter().any(|&v| vs[v] == x) {
                        return crossing(a, b);
                    }
                }
                continue;
            }
            if !det(&w, &a.d).is_zero() {
                continue;
            }
            // collinear: compare parameter intervals along a.d
            let dd = a.d.get(0) * a.d.get(0) + a.d.get(1) * a.d.get(1);
            let along = |x: &RationalPoint| (x.get(0) * a.d.get(0) + x.get(1) * a.d.get(1)) / &dd;
            let a_hi = if a.ray { None } else { Some(Rational::one()) };
            let b0 = along(&w);
            let step = along(&b.d);
            // b's parameter interval; `None` is unbounded on that side
            let (b_lo, b_hi) = if b.ray {
                if step.is_positive() {
                    (Some(b0), None)
                } else {
                    (None, Some(b0))
                }
            } else {
                let b1 = &b0 + &step;
                (Some(b0.clone().min(b1.clone())), Some(b0.max(b1)))
            };
            let lo = b_lo.map_or(Rational::zero(), |l| l.max(Rational::zero()));
            let hi = match (&a_hi, &b_hi) {
                (None, None) => None,
                (Some(x), None) | (None, Some(x)) => Some(x.clone()),
                (Some(x), Some(y)) => Some(x.clone().min(y.clone())),
            };
            match hi {
                Some(h) if h < lo => {}
                Some(h) if h == lo => {
                    let x = a.p.add(&a.d.scale(&lo));
                    if !shared.iter().any(|&v| vs[v] == x) {
                        return crossing(a, b);
                    }
                }
                _ => return crossing(a, b),
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::LatticeVec;
    use crate::tropical::Ray;

    fn conifold() -> TropicalDiagram {
        let r = |at, d: [i64; 2]| Ray { at, dir: LatticeVec::new(d.to_vec()) };
        TropicalDiagram::new(
            2,
            vec![RationalPoint::origin(2), RationalPoint::from_ints(&[-2, -2])],
            vec![(0, 1)],
            vec![r(0, [1, 0]), r(0, [0, 1]), r(1, [-1, 0]), r(1, [0, -1])],
        )
        .unwrap()
    }

    #[test]
    fn c3_has_three_faces() {
        let t = trace_faces(&TropicalDiagram::c3()).unwrap();
        assert_eq!(t.face_count(), 3);
        for f in &t.faces {
            assert_eq!(f.len(), 2);
        }
    }

    #[test]
    fn conifold_has_four_faces() {
        let t = trace_faces(&conifold()).unwrap();
        assert_eq!(t.face_count(), 4);
        let (l, r) = t.sides[&EdgeId::Bounded(0)];
        assert_ne!(l, r);
    }

    #[test]
    fn parallel_rays_bound_a_strip() {
        // two vertices joined horizontally, both sending a ray upward
        let r = |at, d: [i64; 2]| Ray { at, dir: LatticeVec::new(d.to_vec()) };
        let d = TropicalDiagram::new(
            2,
            vec![RationalPoint::origin(2), RationalPoint::from_ints(&[1, 0])],
            vec![(0, 1)],
            vec![r(0, [0, 1]), r(0, [-1, -1]), r(1, [0, 1]), r(1, [1, -1])],
        )
        .unwrap();
        let t = trace_faces(&d).unwrap();
        assert_eq!(t.face_count(), 4);
        // the strip between the two upward rays lies above the bounded edge
        let above = t.sides[&EdgeId::Bounded(0)].0;
        assert_eq!(t.sides[&EdgeId::Ray(0)].1, above);
        assert_eq!(t.sides[&EdgeId::Ray(2)].0, above);
    }

    #[test]
    fn crossing_edges_are_rejected() {
        let r = |at, d: [i64; 2]| Ray { at, dir: LatticeVec::new(d.to_vec()) };
        // two ℂ³ vertices whose rays cross
        let d = TropicalDiagram::new(
            2,
            vec![RationalPoint::origin(2), RationalPoint::from_ints(&[1, -1])],
            vec![],
            vec![r(0, [1, 0]), r(0, [0, 1]), r(0, [-1, -1]), r(1, [1, 0]), r(1, [0, 1]), r(1, [-1, -1])],
        )
        .unwrap();
        assert!(trace_faces(&d).is_err());
    }

    #[test]
    fn focus_focus_has_two_intervals() {
        let t = trace_faces(&TropicalDiagram::focus_focus()).unwrap();
        assert_eq!(t.face_count(), 2);
        assert_eq!(t.sides[&EdgeId::Point(0)], (0, 1));
    }
}
