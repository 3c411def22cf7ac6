//! Webs from charge matrices: integer kernel, lifting by heights, lower
//! convex hull, and the dual tropical curve.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{det2, int, parse_rational, primitive, LatticeVec, Rational, RationalPoint};
use crate::smith::{complete_to_unimodular, smith_normal_form, solve, IntMatrix};
use crate::tropical::{Ray, TropicalDiagram};

/// `k` integer rows of length `n + k`, each summing to zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChargeMatrix {
    rows: Vec<Vec<i64>>,
    columns: usize,
}

impl ChargeMatrix {
    pub fn new(rows: Vec<Vec<i64>>, columns: usize) -> Result<Self> {
        for (i, r) in rows.iter().enumerate() {
            if r.len() != columns {
                return Err(Error::Charges(format!(
                    "row {i} has length {}, expected {columns}",
                    r.len()
                )));
            }
            if r.iter().sum::<i64>() != 0 {
                return Err(Error::Charges(format!("row {i} does not sum to zero")));
            }
        }
        Ok(ChargeMatrix { rows, columns })
    }

    pub fn from_rows(rows: Vec<Vec<i64>>) -> Result<Self> {
        let columns = rows
            .first()
            .map(|r| r.len())
            .ok_or_else(|| Error::Charges("no rows; give the column count explicitly".into()))?;
        Self::new(rows, columns)
    }

    pub fn rows(&self) -> &[Vec<i64>] {
        &self.rows
    }

    pub fn columns(&self) -> usize {
        self.columns
    }

    /// One lattice point per column, in a canonical unimodular frame, of
    /// dimension `n - 1` where `n = columns - rank`.
    pub fn kernel_points(&self) -> Result<Vec<LatticeVec>> {
        let m = self.columns;
        let k = self.rows.len();
        let kernel: Vec<Vec<BigInt>> = if k == 0 {
            crate::smith::identity(m)
        } else {
            let a: IntMatrix = crate::smith::from_i64(&self.rows);
            let snf = smith_normal_form(&a);
            if snf.rank() != k {
                return Err(Error::Charges(format!("rank {} is less than {k}", snf.rank())));
            }
            snf.kernel_basis()
        };
        let n = kernel.len();
        if n != 2 && n != 3 {
            return Err(Error::Charges(format!(
                "kernel has rank {n}; only threefolds (3) and surfaces (2) are supported"
            )));
        }
        // columns of `basis` are the kernel vectors; its rows are the points
        let basis: IntMatrix = (0..m).map(|i| kernel.iter().map(|v| v[i].clone()).collect()).collect();
        let ones = vec![BigInt::one(); m];
        let c = solve(&basis, &ones)
            .ok_or_else(|| Error::Charges("kernel points do not lie on an affine hyperplane".into()))?;
        let frame = complete_to_unimodular(&c)
            .ok_or_else(|| Error::Charges("height functional is not primitive".into()))?;
        let points = basis
            .iter()
            .map(|p| {
                let coords = frame[1..]
                    .iter()
                    .map(|row| {
                        let v = row.iter().zip(p).fold(BigInt::zero(), |s, (a, b)| s + a * b);
                        v.to_i64().ok_or_else(|| Error::Charges("coordinate overflow".into()))
                    })
                    .collect::<Result<Vec<_>>>()?;
                Ok(LatticeVec::new(coords))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(canonical_frame(&points))
    }
}

/// Charge input file: `{"charges":[[1,1,-1,-1]], "heights":["0","1","0","0"]}`.
/// `columns` is only needed when `charges` is empty.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChargeInput {
    pub charges: Vec<Vec<i64>>,
    pub heights: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub columns: Option<usize>,
}

impl ChargeInput {
    pub fn parse(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn matrix(&self) -> Result<ChargeMatrix> {
        match self.columns {
            Some(c) => ChargeMatrix::new(self.charges.clone(), c),
            None => ChargeMatrix::from_rows(self.charges.clone()),
        }
    }

    pub fn height_values(&self) -> Result<Vec<Rational>> {
        self.heights.iter().map(|h| parse_rational(h)).collect()
    }

    pub fn to_diagram(&self, allow_singular: bool) -> Result<TropicalDiagram> {
        diagram_from_charges(&self.matrix()?, &self.height_values()?, allow_singular)
    }
}

pub fn diagram_from_charges(
    q: &ChargeMatrix,
    heights: &[Rational],
    allow_singular: bool,
) -> Result<TropicalDiagram> {
    if heights.len() != q.columns() {
        return Err(Error::Charges(format!(
            "{} heights for {} columns",
            heights.len(),
            q.columns()
        )));
    }
    let points = q.kernel_points()?;
    web_from_heights(&points, heights, allow_singular)
}

/// Among all unimodular affine images of `points` that send some three of
/// them to `0, e₁, e₂`, the one with the smallest bounding box (then the
/// lexicographically smallest image). One-dimensional point sets are only
/// translated.
fn canonical_frame(points: &[LatticeVec]) -> Vec<LatticeVec> {
    let dim = points.first().map_or(0, |p| p.dim());
    if dim == 1 {
        let min = points.iter().map(|p| p.get(0)).min().unwrap_or(0);
        return points.iter().map(|p| LatticeVec::new(vec![p.get(0) - min])).collect();
    }
    let mut best: Option<((i64, Vec<LatticeVec>), Vec<LatticeVec>)> = None;
    for a in points {
        for b in points {
            for c in points {
                let (u, v) = (b.sub(a), c.sub(a));
                let d = det2(&u, &v);
                if d.abs() != 1 {
                    continue;
                }
                // inverse of the matrix with columns u, v
                let image: Vec<LatticeVec> = points
                    .iter()
                    .map(|p| {
                        let w = p.sub(a);
                        LatticeVec::new(vec![d * det2(&w, &v), d * det2(&u, &w)])
                    })
                    .collect();
                let span = |i: usize| {
                    let xs = image.iter().map(|p| p.get(i));
                    xs.clone().max().unwrap() - xs.min().unwrap()
                };
                let mut sorted = image.clone();
                sorted.sort();
                let key = (span(0) + span(1), sorted);
                if best.as_ref().is_none_or(|(k, _)| key < *k) {
                    best = Some((key, image));
                }
            }
        }
    }
    match best {
        Some((_, image)) => image,
        None => points.to_vec(),
    }
}

/// Regular subdivision of `points` induced by `heights` (lower convex hull
/// of the lifted points), dualized to a tropical curve: one vertex per cell,
/// one bounded edge per interior edge, one ray per boundary edge. A term
/// `α` has valuation `h(α) + ⟨α, x⟩` at `x`.
pub fn web_from_heights(
    points: &[LatticeVec],
    heights: &[Rational],
    allow_singular: bool,
) -> Result<TropicalDiagram> {
    if points.len() != heights.len() {
        return Err(Error::Charges(format!(
            "{} heights for {} points",
            heights.len(),
            points.len()
        )));
    }
    if points.is_empty() {
        return Err(Error::EmptyDiagram);
    }
    // a repeated point keeps its lowest height
    let mut lifted: BTreeMap<LatticeVec, Rational> = BTreeMap::new();
    for (p, h) in points.iter().zip(heights) {
        let e = lifted.entry(p.clone()).or_insert_with(|| h.clone());
        if h < e {
            *e = h.clone();
        }
    }
    let pts: Vec<(LatticeVec, Rational)> = lifted.into_iter().collect();
    match pts[0].0.dim() {
        1 => web_1d(&pts, allow_singular),
        2 => web_2d(&pts, allow_singular),
        d => Err(Error::Charges(format!("points of dimension {d}"))),
    }
}

fn web_1d(pts: &[(LatticeVec, Rational)], allow_singular: bool) -> Result<TropicalDiagram> {
    // lower hull by monotone chain; pts are sorted by position
    let mut hull: Vec<usize> = Vec::new();
    for i in 0..pts.len() {
        while hull.len() >= 2 {
            let (a, b) = (hull[hull.len() - 2], hull[hull.len() - 1]);
            // drop b when it is not strictly below the chord from a to i
            let (xa, xb, xi) = (int(pts[a].0.get(0)), int(pts[b].0.get(0)), int(pts[i].0.get(0)));
            let cross = (&xb - &xa) * (&pts[i].1 - &pts[a].1) - (&xi - &xa) * (&pts[b].1 - &pts[a].1);
            if cross.is_positive() {
                break;
            }
            hull.pop();
        }
        hull.push(i);
    }
    let mut vertices = Vec::new();
    for w in hull.windows(2) {
        let (a, b) = (&pts[w[0]], &pts[w[1]]);
        let len = b.0.get(0) - a.0.get(0);
        let on_segment = pts.iter().any(|(p, h)| {
            let x = p.get(0);
            x > a.0.get(0) && x < b.0.get(0) && {
                let chord = &a.1 + (&b.1 - &a.1) * int(x - a.0.get(0)) / int(len);
                *h == chord
            }
        });
        if on_segment && !allow_singular {
            return Err(Error::DegenerateKahler(format!(
                "points {} and {} span a segment with a lifted interior point",
                a.0, b.0
            )));
        }
        if len != 1 && !on_segment {
            return Err(Error::Charges(format!(
                "segment from {} to {} has lattice length {len}; weighted points are not supported",
                a.0, b.0
            )));
        }
        vertices.push(RationalPoint::new(vec![(&a.1 - &b.1) / int(len)]));
    }
    TropicalDiagram::points(vertices)
}

pub(crate) fn plane_through(p: [&(LatticeVec, Rational); 3]) -> Option<(Rational, Rational, Rational)> {
    // h = c0 + c1 x + c2 y
    let (u, v) = (p[1].0.sub(&p[0].0), p[2].0.sub(&p[0].0));
    let d = det2(&u, &v);
    if d == 0 {
        return None;
    }
    let (du, dv) = (&p[1].1 - &p[0].1, &p[2].1 - &p[0].1);
    let d = int(d);
    let c1 = (&du * int(v.get(1)) - &dv * int(u.get(1))) / &d;
    let c2 = (&dv * int(u.get(0)) - &du * int(v.get(0))) / &d;
    let c0 = &p[0].1 - &c1 * int(p[0].0.get(0)) - &c2 * int(p[0].0.get(1));
    Some((c0, c1, c2))
}

/// Vertices of the convex hull of planar points, counter-clockwise,
/// without collinear middle points.
fn convex_hull(points: &[LatticeVec]) -> Vec<LatticeVec> {
    let mut pts = points.to_vec();
    pts.sort();
    pts.dedup();
    if pts.len() < 3 {
        return pts;
    }
    let cross = |o: &LatticeVec, a: &LatticeVec, b: &LatticeVec| det2(&a.sub(o), &b.sub(o));
    let mut lower: Vec<LatticeVec> = Vec::new();
    for p in &pts {
        while lower.len() >= 2 && cross(&lower[lower.len() - 2], &lower[lower.len() - 1], p) <= 0 {
            lower.pop();
        }
        lower.push(p.clone());
    }
    let mut upper: Vec<LatticeVec> = Vec::new();
    for p in pts.iter().rev() {
        while upper.len() >= 2 && cross(&upper[upper.len() - 2], &upper[upper.len() - 1], p) <= 0 {
            upper.pop();
        }
        upper.push(p.clone());
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

fn web_2d(pts: &[(LatticeVec, Rational)], allow_singular: bool) -> Result<TropicalDiagram> {
    let n = pts.len();
    // lower facets: maximal sets of points on a supporting plane from below
    let mut facets: BTreeSet<Vec<usize>> = BTreeSet::new();
    for i in 0..n {
        for j in i + 1..n {
            for l in j + 1..n {
                let Some((c0, c1, c2)) = plane_through([&pts[i], &pts[j], &pts[l]]) else {
                    continue;
                };
                let above = |(p, h): &(LatticeVec, Rational)| {
                    h - (&c0 + &c1 * int(p.get(0)) + &c2 * int(p.get(1)))
                };
                let mut on = Vec::new();
                let mut supporting = true;
                for (k, q) in pts.iter().enumerate() {
                    let gap = above(q);
                    if gap.is_negative() {
                        supporting = false;
                        break;
                    }
                    if gap.is_zero() {
                        on.push(k);
                    }
                }
                if supporting {
                    facets.insert(on);
                }
            }
        }
    }
    if facets.is_empty() {
        return Err(Error::Charges("points are collinear".into()));
    }
    let facets: Vec<Vec<usize>> = facets.into_iter().collect();
    for f in &facets {
        if f.len() > 3 && !allow_singular {
            let listed: Vec<String> = f.iter().map(|&k| pts[k].0.to_string()).collect();
            return Err(Error::DegenerateKahler(format!(
                "cell {} is not a triangle",
                listed.join(" ")
            )));
        }
    }

    let mut vertices = Vec::new();
    for f in &facets {
        let (_, c1, c2) = independent_triple(f, pts)
            .and_then(|[a, b, c]| plane_through([&pts[a], &pts[b], &pts[c]]))
            .ok_or_else(|| Error::Charges("degenerate cell".into()))?;
        // h_i + ⟨p_i, x⟩ is constant on the cell exactly at x = -(c1, c2)
        vertices.push(RationalPoint::new(vec![-c1, -c2]));
    }

    // hull edges of every cell, keyed by their endpoints
    let mut edge_cells: BTreeMap<(LatticeVec, LatticeVec), Vec<usize>> = BTreeMap::new();
    for (fi, f) in facets.iter().enumerate() {
        let cell: Vec<LatticeVec> = f.iter().map(|&k| pts[k].0.clone()).collect();
        let hull = convex_hull(&cell);
        for k in 0..hull.len() {
            let (a, b) = (hull[k].clone(), hull[(k + 1) % hull.len()].clone());
            let key = if a < b { (a, b) } else { (b, a) };
            edge_cells.entry(key).or_default().push(fi);
        }
    }
    if let Some((a, b)) = edge_cells.keys().find(|(a, b)| b.sub(a).content() != 1) {
        return Err(Error::Charges(format!(
            "cell edge from {a} to {b} has lattice length {}; weighted edges are not supported",
            b.sub(a).content()
        )));
    }
    let mut edges = Vec::new();
    let mut rays = Vec::new();
    for ((a, b), cells) in &edge_cells {
        match cells.as_slice() {
            [x, y] => edges.push((*x, *y)),
            [x] => {
                let normal = primitive(&b.sub(a).rot90())?;
                let inside = facets[*x]
                    .iter()
                    .map(|&k| pts[k].0.sub(a).dot(&normal))
                    .find(|s| *s != 0)
                    .ok_or_else(|| Error::Charges("flat cell".into()))?;
                let dir = if inside > 0 { normal } else { normal.neg() };
                rays.push(Ray { at: *x, dir });
            }
            _ => return Err(Error::Charges(format!("edge {a}-{b} lies on more than two cells"))),
        }
    }
    rays.sort_by(|r, s| r.at.cmp(&s.at).then_with(|| r.dir.cmp(&s.dir)));
    TropicalDiagram::new(2, vertices, edges, rays)
}

fn independent_triple(f: &[usize], pts: &[(LatticeVec, Rational)]) -> Option<[usize; 3]> {
    for (x, &a) in f.iter().enumerate() {
        for (y, &b) in f.iter().enumerate().skip(x + 1) {
            for &c in &f[y + 1..] {
                if det2(&pts[b].0.sub(&pts[a].0), &pts[c].0.sub(&pts[a].0)) != 0 {
                    return Some([a, b, c]);
                }
            }
        }
    }
    None
}
