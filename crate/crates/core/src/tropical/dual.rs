//! Dual subdivision: one lattice point per complementary face, one cell per
//! diagram vertex, one lattice edge per diagram edge.
//!
//! Orientation: crossing an edge with primitive direction `d` from the face
//! on its left to the face on its right adds `rot90(d) = (-d₂, d₁)`; for
//! `d = 1`, crossing a point from right to left adds `1`. With
//! this choice the vectors from a dual vertex to its neighbours pair
//! non-negatively with the recession cone of its face, and the face of `α`
//! is where `t^{f(α)} u^α` has the smallest valuation.
//!
//! Translation: the dual vertex minimizing `(α₁ + α₂, α₁)` sits at the
//! origin (for `d = 1`, the face on the far right).

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{lattice_triangle_area, rat, IntegralCone, LatticeVec, Rational, RationalPoint};
use crate::tropical::{faces, validate, EdgeId, TropicalDiagram};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DualSubdivision {
    dim: usize,
    lattice_points: Vec<LatticeVec>,
    // ccw around each diagram vertex (d = 2), or [right, left] for a point
    cells: Vec<Vec<usize>>,
    edge_duality: BTreeMap<EdgeId, (usize, usize)>,
    root: usize,
}

impl DualSubdivision {
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Sorted lexicographically.
    pub fn lattice_points(&self) -> &[LatticeVec] {
        &self.lattice_points
    }

    pub fn point_set(&self) -> BTreeSet<LatticeVec> {
        self.lattice_points.iter().cloned().collect()
    }

    /// The dual cell of each diagram vertex, as indices into
    /// [`lattice_points`](Self::lattice_points).
    pub fn cells(&self) -> &[Vec<usize>] {
        &self.cells
    }

    /// Cells with exactly three vertices.
    pub fn triangles(&self) -> Vec<[usize; 3]> {
        self.cells.iter().filter(|c| c.len() == 3).map(|c| [c[0], c[1], c[2]]).collect()
    }

    /// For each diagram edge, the dual points `(source, target)` of a
    /// positive crossing: the faces on its left and right for `d = 2`, the
    /// intervals to the right and left of a point for `d = 1`. The target
    /// minus the source is the edge covector.
    pub fn edge_duality(&self) -> &BTreeMap<EdgeId, (usize, usize)> {
        &self.edge_duality
    }

    pub fn root(&self) -> usize {
        self.root
    }

    pub fn index_of(&self, p: &LatticeVec) -> Option<usize> {
        self.lattice_points.binary_search(p).ok()
    }

    pub fn point(&self, i: usize) -> &LatticeVec {
        &self.lattice_points[i]
    }

    /// Indices adjacent to `i` through a dual edge, sorted.
    pub fn neighbors(&self, i: usize) -> Vec<usize> {
        let mut out: BTreeSet<usize> = BTreeSet::new();
        for &(l, r) in self.edge_duality.values() {
            if l == i {
                out.insert(r);
            }
            if r == i {
                out.insert(l);
            }
        }
        out.into_iter().collect()
    }

    /// The cone at each lattice point spanned by its dual edges. Shifted to
    /// their apexes these cut out exactly the lattice points of the polygon.
    pub fn vertex_cones(&self) -> Result<Vec<IntegralCone>> {
        (0..self.lattice_points.len())
            .map(|i| {
                let a = &self.lattice_points[i];
                let dirs: Vec<LatticeVec> =
                    self.neighbors(i).into_iter().map(|j| self.lattice_points[j].sub(a)).collect();
                IntegralCone::spanned_by(a.clone(), &dirs)
            })
            .collect()
    }

    /// Dual edges of bounded diagram edges (shared by two cells).
    pub fn interior_edge_count(&self) -> usize {
        self.edge_duality.keys().filter(|e| matches!(e, EdgeId::Bounded(_))).count()
    }

    /// Dual edges of rays (on the boundary of the polygon).
    pub fn boundary_edge_count(&self) -> usize {
        self.edge_duality.keys().filter(|e| matches!(e, EdgeId::Ray(_))).count()
    }

    /// The same subdivision translated so that `p` is the origin.
    pub fn rerooted(&self, p: &LatticeVec) -> Result<Self> {
        let idx = self
            .index_of(p)
            .ok_or_else(|| Error::UnknownDualVertex(p.to_string()))?;
        Ok(self.relabel(|q| q.sub(p), idx))
    }

    /// The reflected embedding `α ↦ -α` (the opposite sign gauge).
    pub fn negated(&self) -> Self {
        self.relabel(|q| q.neg(), self.root)
    }

    fn relabel(&self, map: impl Fn(&LatticeVec) -> LatticeVec, root: usize) -> Self {
        let mapped: Vec<LatticeVec> = self.lattice_points.iter().map(&map).collect();
        let mut sorted = mapped.clone();
        sorted.sort();
        let new_index: Vec<usize> =
            mapped.iter().map(|q| sorted.binary_search(q).expect("present")).collect();
        DualSubdivision {
            dim: self.dim,
            root: new_index[root],
            cells: self.cells.iter().map(|c| c.iter().map(|&i| new_index[i]).collect()).collect(),
            edge_duality: self
                .edge_duality
                .iter()
                .map(|(&e, &(l, r))| (e, (new_index[l], new_index[r])))
                .collect(),
            lattice_points: sorted,
        }
    }

    /// `f(α)` for every dual point relative to the base point `b`, with
    /// `f(root) = 0`: across an edge `e` between faces `α` and `β` and for
    /// any point `p` on `e`, `f(β) - f(α) = ⟨α - β, p - b⟩`.
    pub fn face_values(&self, diag: &TropicalDiagram, b: &RationalPoint) -> Result<Vec<Rational>> {
        if b.dim() != diag.dim() {
            return Err(Error::DimensionMismatch { expected: diag.dim(), found: b.dim() });
        }
        let n = self.lattice_points.len();
        let mut adj: Vec<Vec<(usize, Rational)>> = vec![Vec::new(); n];
        for (&e, &(l, r)) in &self.edge_duality {
            let p = diag.edge_point(e)?.sub(b);
            let jump = self.lattice_points[l].sub(&self.lattice_points[r]).pair(&p);
            adj[l].push((r, jump.clone()));
            adj[r].push((l, -jump));
        }
        let mut f: Vec<Option<Rational>> = vec![None; n];
        f[self.root] = Some(Rational::zero());
        let mut queue = VecDeque::from([self.root]);
        while let Some(i) = queue.pop_front() {
            let fi = f[i].clone().expect("visited");
            for (j, jump) in &adj[i] {
                let fj = &fi + jump;
                match &f[*j] {
                    None => {
                        f[*j] = Some(fj);
                        queue.push_back(*j);
                    }
                    Some(old) if *old != fj => {
                        return Err(Error::InvalidDiagram(format!(
                            "face values disagree at dual vertex {}",
                            self.lattice_points[*j]
                        )))
                    }
                    Some(_) => {}
                }
            }
        }
        f.into_iter()
            .map(|v| v.ok_or_else(|| Error::InvalidDiagram("dual graph is disconnected".into())))
            .collect()
    }

    /// The face containing `x`: the unique dual point minimizing
    /// `f(α) + ⟨α, x⟩` with `f` taken at the origin. `None` on the diagram.
    pub fn locate(&self, diag: &TropicalDiagram, x: &RationalPoint) -> Result<Option<usize>> {
        let f = self.face_values(diag, &RationalPoint::origin(diag.dim()))?;
        let vals: Vec<Rational> = self
            .lattice_points
            .iter()
            .zip(&f)
            .map(|(a, fa)| fa + a.pair(x))
            .collect();
        let min = vals.iter().min().expect("nonempty").clone();
        let winners: Vec<usize> = (0..vals.len()).filter(|&i| vals[i] == min).collect();
        Ok(if winners.len() == 1 { Some(winners[0]) } else { None })
    }

    pub fn to_json(&self) -> DualJson {
        DualJson {
            lattice_points: self.lattice_points.iter().map(|p| p.coords().to_vec()).collect(),
            cells: self.cells.clone(),
            edge_duality: self
                .edge_duality
                .iter()
                .map(|(e, &(l, r))| EdgeDualJson { edge: e.to_string(), left: l, right: r })
                .collect(),
            root: self.root,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DualJson {
    pub lattice_points: Vec<Vec<i64>>,
    pub cells: Vec<Vec<usize>>,
    pub edge_duality: Vec<EdgeDualJson>,
    pub root: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeDualJson {
    pub edge: String,
    pub left: usize,
    pub right: usize,
}

/// Root gauge key: smallest coordinate sum, then smallest first coordinate.
pub(crate) fn root_key(p: &LatticeVec) -> (i64, i64) {
    (p.coords().iter().sum(), p.get(0))
}

/// Requires a balanced, connected, embedded diagram with primitive
/// directions. Vertices of higher valence give polygonal cells.
pub fn dual_subdivision(diag: &TropicalDiagram) -> Result<DualSubdivision> {
    let report = validate(diag);
    if !(report.balanced && report.primitive_directions && report.connected) {
        let failed = report
            .failures
            .iter()
            .find(|f| !f.starts_with("trivalent"))
            .cloned()
            .unwrap_or_default();
        return Err(Error::AxiomFailure(failed));
    }
    if diag.dim() == 1 {
        let k = diag.vertices().len();
        let lattice_points = (0..=k as i64).map(|i| LatticeVec::new(vec![i])).collect();
        let mut cells = Vec::new();
        let mut edge_duality = BTreeMap::new();
        for i in 0..k {
            let (left, right) = (k - i, k - 1 - i);
            cells.push(vec![right, left]);
            edge_duality.insert(EdgeId::Point(i), (right, left));
        }
        return Ok(DualSubdivision { dim: 1, lattice_points, cells, edge_duality, root: 0 });
    }
    faces::check_embedded(diag)?;

    let n = diag.vertices().len();
    let incidences = (0..n).map(|v| diag.incidences(v)).collect::<Result<Vec<_>>>()?;
    // local faces: F_i lies between outgoing directions i and i+1
    let local: Vec<Vec<LatticeVec>> = incidences
        .iter()
        .map(|inc| {
            let mut fs = vec![LatticeVec::zero(2)];
            for i in inc.iter().skip(1) {
                let prev = fs.last().expect("nonempty").clone();
                fs.push(prev.sub(&i.dir.rot90()));
            }
            fs
        })
        .collect();
    // (left, right) local faces of an incidence
    let sides = |v: usize, k: usize| -> (usize, usize) {
        let len = incidences[v].len();
        let prev = (k + len - 1) % len;
        if incidences[v][k].forward {
            (k, prev)
        } else {
            (prev, k)
        }
    };
    let slot = |v: usize, e: EdgeId| incidences[v].iter().position(|i| i.edge == e).expect("incident");

    let mut offset: Vec<Option<LatticeVec>> = vec![None; n];
    offset[0] = Some(LatticeVec::zero(2));
    let mut queue = VecDeque::from([0usize]);
    while let Some(u) = queue.pop_front() {
        let ou = offset[u].clone().expect("visited");
        for inc in &incidences[u] {
            let EdgeId::Bounded(ei) = inc.edge else { continue };
            let (a, b) = diag.edges()[ei];
            let v = if a == u { b } else { a };
            let (lu, ru) = sides(u, slot(u, inc.edge));
            let (lv, rv) = sides(v, slot(v, inc.edge));
            let left = ou.add(&local[u][lu]);
            let right = ou.add(&local[u][ru]);
            let ov = left.sub(&local[v][lv]);
            if ov.add(&local[v][rv]) != right {
                return Err(Error::InvalidDiagram(format!("dual cells do not glue along e{ei}")));
            }
            match &offset[v] {
                None => {
                    offset[v] = Some(ov);
                    queue.push_back(v);
                }
                Some(old) if *old != ov => {
                    return Err(Error::InvalidDiagram(format!(
                        "dual cells do not close up around e{ei}"
                    )))
                }
                Some(_) => {}
            }
        }
    }
    let offset: Vec<LatticeVec> = offset.into_iter().map(|o| o.expect("connected")).collect();
    let global: Vec<Vec<LatticeVec>> = local
        .iter()
        .zip(&offset)
        .map(|(fs, o)| fs.iter().map(|f| f.add(o)).collect())
        .collect();

    // sign gauge: the neighbours of F_0 at vertex 0 must lie in its dual cone
    let inc0 = &incidences[0];
    if inc0.len() >= 2 {
        let probe = global[0][1].sub(&global[0][0]).dot(&inc0[0].dir.add(&inc0[1].dir));
        debug_assert!(probe >= 0, "construction fixes the dual-cone gauge");
    }

    let points: BTreeSet<LatticeVec> = global.iter().flatten().cloned().collect();
    let root = points.iter().min_by_key(|p| root_key(p)).expect("nonempty").clone();
    let lattice_points: Vec<LatticeVec> = points.iter().map(|p| p.sub(&root)).collect();
    let index = |p: &LatticeVec| lattice_points.binary_search(&p.sub(&root)).expect("present");

    let cells = global.iter().map(|fs| fs.iter().map(index).collect()).collect();
    let mut edge_duality = BTreeMap::new();
    for (v, inc) in incidences.iter().enumerate() {
        for (k, i) in inc.iter().enumerate() {
            if i.forward {
                let (l, r) = sides(v, k);
                edge_duality.insert(i.edge, (index(&global[v][l]), index(&global[v][r])));
            }
        }
    }
    let root = index(&root);
    Ok(DualSubdivision { dim: 2, lattice_points, cells, edge_duality, root })
}

/// Whether every dual cell is a triangle of area 1/2 (for `d = 1`, every
/// dual segment has length one, which always holds). Unbalanced or
/// non-primitive diagrams are errors; higher valence gives `false`.
pub fn is_smooth(diag: &TropicalDiagram) -> Result<bool> {
    let dual = dual_subdivision(diag)?;
    if diag.dim() == 1 {
        return Ok(true);
    }
    let half = rat(1, 2);
    Ok(dual.cells().iter().all(|c| {
        c.len() == 3
            && lattice_triangle_area(dual.point(c[0]), dual.point(c[1]), dual.point(c[2])) == half
    }))
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::lattice::int;
    use crate::tropical::{web_from_heights, Ray};

    fn lv(a: i64, b: i64) -> LatticeVec {
        LatticeVec::new(vec![a, b])
    }

    pub(crate) fn conifold(q: i64) -> TropicalDiagram {
        let r = |at, d: [i64; 2]| Ray { at, dir: LatticeVec::new(d.to_vec()) };
        TropicalDiagram::new(
            2,
            vec![RationalPoint::origin(2), RationalPoint::from_ints(&[-q, -q])],
            vec![(0, 1)],
            vec![r(0, [1, 0]), r(0, [0, 1]), r(1, [-1, 0]), r(1, [0, -1])],
        )
        .unwrap()
    }

    // every unimodular triangle with edges orthogonal to the given rays,
    // translated so its root-gauge vertex is the origin
    fn orthogonal_triangle_oracle(rays: &[LatticeVec]) -> BTreeSet<BTreeSet<LatticeVec>> {
        let mut out = BTreeSet::new();
        let pts: Vec<LatticeVec> =
            (-2..=2).flat_map(|a| (-2..=2).map(move |b| lv(a, b))).collect();
        for b in &pts {
            for c in &pts {
                let o = lv(0, 0);
                if lattice_triangle_area(&o, b, c) != rat(1, 2) {
                    continue;
                }
                let edges = [b.clone(), c.clone(), c.sub(b)];
                let ok = rays.iter().all(|r| edges.iter().any(|e| e.dot(r) == 0));
                if ok {
                    let tri = [o, b.clone(), c.clone()];
                    let root = tri.iter().min_by_key(|p| root_key(p)).unwrap().clone();
                    out.insert(tri.iter().map(|p| p.sub(&root)).collect());
                }
            }
        }
        out
    }

    #[test]
    fn c3_dual_is_unit_triangle() {
        let d = dual_subdivision(&TropicalDiagram::c3()).unwrap();
        let expect: BTreeSet<_> = [lv(0, 0), lv(1, 0), lv(0, 1)].into_iter().collect();
        assert_eq!(d.point_set(), expect);
        // oracle: the orthogonal unimodular triangles are the unit triangle
        // and its reflection; the gauge selects the former
        let oracle = orthogonal_triangle_oracle(&[lv(1, 0), lv(0, 1), lv(-1, -1)]);
        assert!(oracle.contains(&expect));
        assert_eq!(d.lattice_points()[d.root()], lv(0, 0));
        assert!(is_smooth(&TropicalDiagram::c3()).unwrap());
    }

    #[test]
    fn c3_faces_match_orientation() {
        let diag = TropicalDiagram::c3();
        let d = dual_subdivision(&diag).unwrap();
        let at = |x: i64, y: i64| {
            let i = d.locate(&diag, &RationalPoint::from_ints(&[x, y])).unwrap().unwrap();
            d.point(i).clone()
        };
        assert_eq!(at(5, 5), lv(0, 0));
        assert_eq!(at(-5, 5), lv(1, 0));
        assert_eq!(at(5, -5), lv(0, 1));
        assert_eq!(d.locate(&diag, &RationalPoint::from_ints(&[3, 0])).unwrap(), None);
    }

    #[test]
    fn focus_focus_dual_is_unit_path() {
        let d = dual_subdivision(&TropicalDiagram::focus_focus()).unwrap();
        assert_eq!(d.lattice_points(), &[LatticeVec::new(vec![0]), LatticeVec::new(vec![1])]);
        assert_eq!(d.edge_duality()[&EdgeId::Point(0)], (0, 1));
    }

    #[test]
    fn vertex_cones_cut_out_the_polygon() {
        use crate::lattice::{intersect_shifted_cones, ConeKind, RationalBox};
        let d = dual_subdivision(&conifold(2)).unwrap();
        let cones = d.vertex_cones().unwrap();
        assert!(cones.iter().all(|c| c.kind() == ConeKind::Strict));
        let got = intersect_shifted_cones(&cones, &RationalBox::cube(2, -5, 5).unwrap()).unwrap();
        assert_eq!(got, d.point_set());
    }

    #[test]
    fn conifold_dual_is_split_square() {
        let diag = conifold(2);
        let d = dual_subdivision(&diag).unwrap();
        let expect: BTreeSet<_> = [lv(0, 0), lv(1, 0), lv(0, 1), lv(1, 1)].into_iter().collect();
        assert_eq!(d.point_set(), expect);
        assert_eq!(d.triangles().len(), 2);
        assert!(is_smooth(&diag).unwrap());
        // the bounded edge (direction (-1,-1)) is dual to the diagonal (1,0)-(0,1)
        let (l, r) = d.edge_duality()[&EdgeId::Bounded(0)];
        let diag_edge = d.point(l).sub(d.point(r));
        assert_eq!(diag_edge.dot(&lv(-1, -1)), 0);
        assert_eq!(d.interior_edge_count(), 1);
        assert_eq!(d.boundary_edge_count(), 4);
    }

    #[test]
    fn orthogonality_and_counts() {
        for diag in [TropicalDiagram::c3(), conifold(1), conifold(3)] {
            let d = dual_subdivision(&diag).unwrap();
            for (&e, &(l, r)) in d.edge_duality() {
                let dir = diag.edge_direction(e).unwrap();
                let dual_edge = d.point(r).sub(d.point(l));
                assert_eq!(dual_edge.dot(&dir), 0);
                assert_eq!(dual_edge, dir.rot90());
            }
            assert_eq!(d.triangles().len(), diag.vertices().len());
            assert_eq!(d.interior_edge_count(), diag.edges().len());
            assert_eq!(d.boundary_edge_count(), diag.rays().len());
        }
    }

    #[test]
    fn non_unimodular_vertex_is_not_smooth() {
        // dual triangle (0,0),(2,1),(1,2): primitive edges, area 3/2
        let pts = [lv(0, 0), lv(2, 1), lv(1, 2)];
        let diag = web_from_heights(&pts, &[int(0), int(0), int(0)], false).unwrap();
        assert!(!is_smooth(&diag).unwrap());
    }

    #[test]
    fn doubled_rays_error() {
        let rays = [[2, 0], [0, 2], [-2, -2]]
            .iter()
            .map(|d| Ray { at: 0, dir: LatticeVec::new(d.to_vec()) })
            .collect();
        let diag = TropicalDiagram::new(2, vec![RationalPoint::origin(2)], vec![], rays).unwrap();
        assert!(matches!(is_smooth(&diag), Err(Error::AxiomFailure(_))));
    }

    #[test]
    fn face_values_on_conifold() {
        let diag = conifold(3);
        let d = dual_subdivision(&diag).unwrap();
        let f = d.face_values(&diag, &RationalPoint::origin(2)).unwrap();
        let get = |a, b| f[d.index_of(&lv(a, b)).unwrap()].clone();
        assert_eq!(get(0, 0), int(0));
        assert_eq!(get(1, 0), int(0));
        assert_eq!(get(0, 1), int(0));
        assert_eq!(get(1, 1), int(3));
    }

    #[test]
    fn reroot_and_negate() {
        let d = dual_subdivision(&TropicalDiagram::c3()).unwrap();
        let r = d.rerooted(&lv(1, 0)).unwrap();
        assert_eq!(r.point(r.root()), &lv(0, 0));
        assert!(r.point_set().contains(&lv(-1, 0)));
        let n = d.negated();
        assert!(n.point_set().contains(&lv(0, -1)));
        assert!(d.rerooted(&lv(5, 5)).is_err());
    }
}
