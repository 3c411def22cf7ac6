#![allow(dead_code)]

use rand::Rng;
use tropmirror::{det2, rat, web_from_heights, LatticeVec, Rational, TropicalDiagram};

pub fn lv(c: &[i64]) -> LatticeVec {
    LatticeVec::new(c.to_vec())
}

/// Counter-clockwise hull vertices.
pub fn hull(points: &[LatticeVec]) -> Vec<LatticeVec> {
    let mut pts = points.to_vec();
    pts.sort();
    pts.dedup();
    if pts.len() < 3 {
        return pts;
    }
    let mut lower: Vec<LatticeVec> = Vec::new();
    for p in &pts {
        while lower.len() >= 2
            && det2(&lower[lower.len() - 1].sub(&lower[lower.len() - 2]), &p.sub(&lower[lower.len() - 1])) <= 0
        {
            lower.pop();
        }
        lower.push(p.clone());
    }
    let mut upper: Vec<LatticeVec> = Vec::new();
    for p in pts.iter().rev() {
        while upper.len() >= 2
            && det2(&upper[upper.len() - 1].sub(&upper[upper.len() - 2]), &p.sub(&upper[upper.len() - 1])) <= 0
        {
            upper.pop();
        }
        upper.push(p.clone());
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

/// All lattice points of the convex hull of `seeds`.
pub fn lattice_polygon(seeds: &[LatticeVec]) -> Vec<LatticeVec> {
    let h = hull(seeds);
    if h.len() < 3 {
        return Vec::new();
    }
    let (lo_x, hi_x) = (h.iter().map(|p| p.get(0)).min().unwrap(), h.iter().map(|p| p.get(0)).max().unwrap());
    let (lo_y, hi_y) = (h.iter().map(|p| p.get(1)).min().unwrap(), h.iter().map(|p| p.get(1)).max().unwrap());
    let mut out = Vec::new();
    for x in lo_x..=hi_x {
        for y in lo_y..=hi_y {
            let p = lv(&[x, y]);
            let inside = (0..h.len()).all(|i| det2(&h[(i + 1) % h.len()].sub(&h[i]), &p.sub(&h[i])) >= 0);
            if inside {
                out.push(p);
            }
        }
    }
    out
}

/// A random lattice polygon with at most `max_points` lattice points.
pub fn random_polygon<R: Rng>(rng: &mut R, max_points: usize) -> Vec<LatticeVec> {
    loop {
        let k = rng.gen_range(3..=5);
        let seeds: Vec<LatticeVec> =
            (0..k).map(|_| lv(&[rng.gen_range(-2..=2), rng.gen_range(-2..=2)])).collect();
        let poly = lattice_polygon(&seeds);
        if poly.len() >= 3 && poly.len() <= max_points {
            return poly;
        }
    }
}

/// Heights `3|p|² + r` with `r` uniform in `[0, 1)` on a grid of 1/97.
pub fn generic_heights<R: Rng>(rng: &mut R, points: &[LatticeVec]) -> Vec<Rational> {
    points
        .iter()
        .map(|p| rat(3 * p.dot(p), 1) + rat(rng.gen_range(0..97), 97))
        .collect()
}

/// A random smooth web whose dual triangulation uses every lattice point of
/// a random polygon.
pub fn random_smooth_web<R: Rng>(rng: &mut R) -> (Vec<LatticeVec>, Vec<Rational>, TropicalDiagram) {
    loop {
        let pts = random_polygon(rng, 12);
        let heights = generic_heights(rng, &pts);
        if let Ok(web) = web_from_heights(&pts, &heights, false) {
            let dual = tropmirror::dual_subdivision(&web).expect("generated webs dualize");
            if dual.lattice_points().len() == pts.len() {
                return (pts, heights, web);
            }
        }
    }
}
