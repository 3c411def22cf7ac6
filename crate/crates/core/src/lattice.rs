//! Exact planar lattice geometry: lattice vectors, rational points, integral
//! cones and axis-aligned rational boxes.
//!
//! Nothing here touches floating point. Lattice vectors hold `i64` entries;
//! every rational quantity is a [`BigRational`].

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Rational = BigRational;

/// `p/q` as an exact rational.
pub fn rat(p: i64, q: i64) -> Rational {
    BigRational::new(BigInt::from(p), BigInt::from(q))
}

pub fn int(p: i64) -> Rational {
    BigRational::from_integer(BigInt::from(p))
}

/// Parses `"p/q"` or `"p"`.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let r = BigRational::from_str(s).map_err(|_| Error::Parse(format!("not a rational: {s:?}")))?;
    Ok(r)
}

pub fn rational_to_i64(r: &Rational) -> Option<i64> {
    if r.is_integer() {
        r.to_integer().to_i64()
    } else {
        None
    }
}

/// An integer vector of dimension 1, 2 or 3. Ordered lexicographically.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct LatticeVec(Vec<i64>);

impl LatticeVec {
    pub fn new(coords: Vec<i64>) -> Self {
        LatticeVec(coords)
    }

    pub fn zero(dim: usize) -> Self {
        LatticeVec(vec![0; dim])
    }

    pub fn unit(dim: usize, axis: usize) -> Self {
        let mut v = vec![0; dim];
        v[axis] = 1;
        LatticeVec(v)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[i64] {
        &self.0
    }

    pub fn get(&self, i: usize) -> i64 {
        self.0[i]
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }

    /// gcd of the entries; 0 for the zero vector.
    pub fn content(&self) -> i64 {
        self.0.iter().fold(0i64, |g, &c| g.gcd(&c))
    }

    pub fn is_primitive(&self) -> bool {
        self.content() == 1
    }

    pub fn add(&self, other: &LatticeVec) -> LatticeVec {
        debug_assert_eq!(self.dim(), other.dim());
        LatticeVec(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &LatticeVec) -> LatticeVec {
        debug_assert_eq!(self.dim(), other.dim());
        LatticeVec(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn neg(&self) -> LatticeVec {
        LatticeVec(self.0.iter().map(|a| -a).collect())
    }

    pub fn scale(&self, k: i64) -> LatticeVec {
        LatticeVec(self.0.iter().map(|a| a * k).collect())
    }

    pub fn dot(&self, other: &LatticeVec) -> i64 {
        self.0.iter().zip(&other.0).map(|(a, b)| a * b).sum()
    }

    /// Pairing with a rational point.
    pub fn pair(&self, p: &RationalPoint) -> Rational {
        debug_assert_eq!(self.dim(), p.dim());
        self.0
            .iter()
            .zip(p.coords())
            .fold(Rational::zero(), |acc, (a, x)| acc + x * BigInt::from(*a))
    }

    pub fn to_point(&self) -> RationalPoint {
        RationalPoint::new(self.0.iter().map(|&a| int(a)).collect())
    }

    /// Counter-clockwise rotation by a quarter turn, `(a, b) -> (-b, a)`.
    pub fn rot90(&self) -> LatticeVec {
        assert_eq!(self.dim(), 2, "rot90 is planar");
        LatticeVec(vec![-self.0[1], self.0[0]])
    }
}

impl fmt::Display for LatticeVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

impl From<Vec<i64>> for LatticeVec {
    fn from(v: Vec<i64>) -> Self {
        LatticeVec(v)
    }
}

/// `v` divided by the gcd of its entries.
pub fn primitive(v: &LatticeVec) -> Result<LatticeVec> {
    let g = v.content();
    if g == 0 {
        return Err(Error::ZeroVector);
    }
    Ok(LatticeVec(v.0.iter().map(|a| a / g).collect()))
}

pub fn det2(a: &LatticeVec, b: &LatticeVec) -> i64 {
    a.get(0) * b.get(1) - a.get(1) * b.get(0)
}

/// Exact angular order of nonzero planar vectors, counter-clockwise from the
/// positive first axis.
pub fn angle_cmp(a: &LatticeVec, b: &LatticeVec) -> Ordering {
    fn half(v: &LatticeVec) -> u8 {
        if v.get(1) > 0 || (v.get(1) == 0 && v.get(0) > 0) {
            0
        } else {
            1
        }
    }
    half(a).cmp(&half(b)).then_with(|| 0.cmp(&det2(a, b)))
}

/// A point with exact rational coordinates (always in lowest terms).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RationalPoint(Vec<Rational>);

impl RationalPoint {
    pub fn new(coords: Vec<Rational>) -> Self {
        RationalPoint(coords)
    }

    pub fn origin(dim: usize) -> Self {
        RationalPoint(vec![Rational::zero(); dim])
    }

    pub fn from_ints(coords: &[i64]) -> Self {
        RationalPoint(coords.iter().map(|&c| int(c)).collect())
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[Rational] {
        &self.0
    }

    pub fn get(&self, i: usize) -> &Rational {
        &self.0[i]
    }

    pub fn add(&self, other: &RationalPoint) -> RationalPoint {
        RationalPoint(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &RationalPoint) -> RationalPoint {
        RationalPoint(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn scale(&self, k: &Rational) -> RationalPoint {
        RationalPoint(self.0.iter().map(|a| a * k).collect())
    }

    pub fn add_lattice(&self, v: &LatticeVec, k: &Rational) -> RationalPoint {
        RationalPoint(
            self.0
                .iter()
                .zip(v.coords())
                .map(|(a, &b)| a + k * BigInt::from(b))
                .collect(),
        )
    }

    /// Drops the last coordinate.
    pub fn truncate_last(&self) -> RationalPoint {
        RationalPoint(self.0[..self.0.len() - 1].to_vec())
    }

    pub fn last(&self) -> &Rational {
        self.0.last().expect("nonempty point")
    }

    /// The primitive lattice direction of `self`, when it is a nonzero
    /// rational multiple of a lattice vector (always true for rational
    /// coordinates).
    pub fn lattice_direction(&self) -> Result<LatticeVec> {
        let lcm = self
            .0
            .iter()
            .fold(BigInt::one(), |l, c| l.lcm(c.denom()));
        let scaled: Vec<BigInt> = self.0.iter().map(|c| (c * &lcm).to_integer()).collect();
        let g = scaled.iter().fold(BigInt::zero(), |g, c| g.gcd(c));
        if g.is_zero() {
            return Err(Error::ZeroVector);
        }
        let coords = scaled
            .iter()
            .map(|c| {
                (c / &g)
                    .to_i64()
                    .ok_or_else(|| Error::Parse("direction overflows i64".into()))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(LatticeVec(coords))
    }

    pub fn to_strings(&self) -> Vec<String> {
        self.0.iter().map(|c| c.to_string()).collect()
    }

    pub fn parse(parts: &[impl AsRef<str>]) -> Result<RationalPoint> {
        Ok(RationalPoint(
            parts
                .iter()
                .map(|p| parse_rational(p.as_ref()))
                .collect::<Result<_>>()?,
        ))
    }

    /// Parses `"p/q,p/q"`.
    pub fn parse_csv(s: &str) -> Result<RationalPoint> {
        let parts: Vec<&str> = s.split(',').collect();
        RationalPoint::parse(&parts)
    }
}

impl fmt::Display for RationalPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// `|det(b - a, c - a)| / 2`.
pub fn lattice_triangle_area(a: &LatticeVec, b: &LatticeVec, c: &LatticeVec) -> Rational {
    let d = det2(&b.sub(a), &c.sub(a));
    rat(d.abs(), 2)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ConeKind {
    Strict,
    HalfPlane,
    FullPlane,
}

/// A cone `apex + C` with `C` generated by at most two primitive vectors.
///
/// Strict cones keep their generators in counter-clockwise order. A
/// half-plane stores `[boundary, inward]`: the boundary line direction and
/// any vector strictly inside. The full plane has no generators.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IntegralCone {
    apex: LatticeVec,
    generators: Vec<LatticeVec>,
    kind: ConeKind,
}

impl IntegralCone {
    pub fn strict(apex: LatticeVec, generators: Vec<LatticeVec>) -> Result<Self> {
        let dim = apex.dim();
        if !(1..=2).contains(&dim) {
            return Err(Error::InvalidCone(format!("unsupported dimension {dim}")));
        }
        if generators.is_empty() || generators.len() > 2 {
            return Err(Error::InvalidCone(format!(
                "a strict cone needs 1 or 2 generators, got {}",
                generators.len()
            )));
        }
        for g in &generators {
            if g.dim() != dim {
                return Err(Error::DimensionMismatch { expected: dim, found: g.dim() });
            }
            if !g.is_primitive() {
                return Err(Error::InvalidCone(format!("generator {g} is not primitive")));
            }
        }
        let mut generators = generators;
        if generators.len() == 2 {
            if dim == 1 {
                return Err(Error::InvalidCone("two generators in dimension 1".into()));
            }
            let d = det2(&generators[0], &generators[1]);
            if d == 0 {
                return Err(Error::InvalidCone("generators are linearly dependent".into()));
            }
            if d < 0 {
                generators.swap(0, 1);
            }
        }
        Ok(IntegralCone { apex, generators, kind: ConeKind::Strict })
    }

    pub fn half_plane(apex: LatticeVec, boundary: LatticeVec, inward: LatticeVec) -> Result<Self> {
        if apex.dim() != 2 || boundary.dim() != 2 || inward.dim() != 2 {
            return Err(Error::InvalidCone("half-planes are planar".into()));
        }
        if !boundary.is_primitive() || !inward.is_primitive() {
            return Err(Error::InvalidCone("half-plane vectors must be primitive".into()));
        }
        if det2(&boundary, &inward) == 0 {
            return Err(Error::InvalidCone("inward vector lies on the boundary".into()));
        }
        Ok(IntegralCone { apex, generators: vec![boundary, inward], kind: ConeKind::HalfPlane })
    }

    pub fn full_plane(apex: LatticeVec) -> Self {
        IntegralCone { apex, generators: Vec::new(), kind: ConeKind::FullPlane }
    }

    /// The cone generated over the non-negative integers by `vectors`,
    /// reduced to at most two extremal generators.
    pub fn spanned_by(apex: LatticeVec, vectors: &[LatticeVec]) -> Result<Self> {
        let mut dirs: Vec<LatticeVec> = vectors
            .iter()
            .filter(|v| !v.is_zero())
            .map(primitive)
            .collect::<Result<_>>()?;
        dirs.sort();
        dirs.dedup();
        if dirs.is_empty() {
            return Err(Error::InvalidCone("no nonzero generators".into()));
        }
        match apex.dim() {
            1 => {
                if dirs.len() == 1 {
                    IntegralCone::strict(apex, dirs)
                } else {
                    Ok(IntegralCone::full_plane(apex))
                }
            }
            2 => {
                dirs.sort_by(angle_cmp);
                if dirs.len() == 1 {
                    return IntegralCone::strict(apex, dirs);
                }
                let n = dirs.len();
                let mut reflex = None;
                let mut straight = Vec::new();
                for i in 0..n {
                    let a = &dirs[i];
                    let b = &dirs[(i + 1) % n];
                    let d = det2(a, b);
                    if d < 0 {
                        reflex = Some(i);
                    } else if d == 0 && a.dot(b) < 0 {
                        straight.push(i);
                    }
                }
                if let Some(i) = reflex {
                    // the gap from dirs[i] to dirs[i+1] exceeds a half turn
                    let g1 = dirs[(i + 1) % n].clone();
                    let g2 = dirs[i].clone();
                    if n == 2 && det2(&g1, &g2) == 0 {
                        return Err(Error::InvalidCone("degenerate pair".into()));
                    }
                    IntegralCone::strict(apex, vec![g1, g2])
                } else if straight.len() == 1 {
                    let i = straight[0];
                    let boundary = dirs[(i + 1) % n].clone();
                    let inward = dirs
                        .iter()
                        .find(|v| det2(&boundary, v) != 0)
                        .cloned()
                        .ok_or_else(|| Error::InvalidCone("a line is not a cone".into()))?;
                    IntegralCone::half_plane(apex, boundary, inward)
                } else if straight.len() >= 2 {
                    Err(Error::InvalidCone("a line is not a cone".into()))
                } else {
                    Ok(IntegralCone::full_plane(apex))
                }
            }
            d => Err(Error::InvalidCone(format!("unsupported dimension {d}"))),
        }
    }

    pub fn apex(&self) -> &LatticeVec {
        &self.apex
    }

    pub fn generators(&self) -> &[LatticeVec] {
        &self.generators
    }

    pub fn kind(&self) -> ConeKind {
        self.kind
    }

    pub fn dim(&self) -> usize {
        self.apex.dim()
    }

    pub fn translate(&self, by: &LatticeVec) -> IntegralCone {
        IntegralCone { apex: self.apex.add(by), ..self.clone() }
    }

    /// Membership of a lattice point.
    pub fn contains(&self, p: &LatticeVec) -> Result<bool> {
        if p.dim() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: p.dim() });
        }
        let v = p.sub(&self.apex);
        Ok(match self.kind {
            ConeKind::FullPlane => true,
            ConeKind::HalfPlane => {
                let b = &self.generators[0];
                let w = &self.generators[1];
                det2(b, &v).signum() * det2(b, w).signum() >= 0
            }
            ConeKind::Strict => match self.generators.as_slice() {
                [g] if self.dim() == 1 => v.get(0) * g.get(0) >= 0,
                [g] => det2(g, &v) == 0 && g.dot(&v) >= 0,
                [g1, g2] => det2(&v, g2) >= 0 && det2(g1, &v) >= 0,
                _ => unreachable!("strict cones have one or two generators"),
            },
        })
    }
}

/// A product of closed rational intervals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalBox {
    bounds: Vec<(Rational, Rational)>,
}

impl RationalBox {
    pub fn new(bounds: Vec<(Rational, Rational)>) -> Result<Self> {
        if bounds.is_empty() {
            return Err(Error::EmptyBox);
        }
        if bounds.iter().any(|(lo, hi)| lo > hi) {
            return Err(Error::EmptyBox);
        }
        Ok(RationalBox { bounds })
    }

    /// `[lo, hi]^dim` with integer bounds.
    pub fn cube(dim: usize, lo: i64, hi: i64) -> Result<Self> {
        RationalBox::new(vec![(int(lo), int(hi)); dim])
    }

    /// The degenerate box `{p}`.
    pub fn point(p: &RationalPoint) -> Self {
        RationalBox { bounds: p.coords().iter().map(|c| (c.clone(), c.clone())).collect() }
    }

    pub fn dim(&self) -> usize {
        self.bounds.len()
    }

    pub fn bounds(&self) -> &[(Rational, Rational)] {
        &self.bounds
    }

    pub fn contains_point(&self, p: &RationalPoint) -> bool {
        p.dim() == self.dim()
            && self.bounds.iter().zip(p.coords()).all(|((lo, hi), x)| lo <= x && x <= hi)
    }

    /// All `2^dim` corners (with repetition for degenerate axes).
    pub fn corners(&self) -> Vec<RationalPoint> {
        let mut out = vec![Vec::new()];
        for (lo, hi) in &self.bounds {
            out = out
                .into_iter()
                .flat_map(|prefix: Vec<Rational>| {
                    [lo, hi].into_iter().map(move |c| {
                        let mut p = prefix.clone();
                        p.push(c.clone());
                        p
                    })
                })
                .collect();
        }
        out.into_iter().map(RationalPoint::new).collect()
    }

    /// Minimum of the linear form `u` over the box, attained at a corner.
    pub fn min_pairing(&self, u: &LatticeVec) -> Rational {
        self.bounds
            .iter()
            .zip(u.coords())
            .fold(Rational::zero(), |acc, ((lo, hi), &c)| {
                let c = BigInt::from(c);
                if c.is_negative() {
                    acc + hi * c
                } else {
                    acc + lo * c
                }
            })
    }

    pub fn lattice_points(&self) -> Vec<LatticeVec> {
        let mut out = vec![Vec::new()];
        for (lo, hi) in &self.bounds {
            let a = lo.ceil().to_integer().to_i64().expect("box bound fits i64");
            let b = hi.floor().to_integer().to_i64().expect("box bound fits i64");
            out = out
                .into_iter()
                .flat_map(|prefix: Vec<i64>| {
                    (a..=b).map(move |c| {
                        let mut p = prefix.clone();
                        p.push(c);
                        p
                    })
                })
                .collect();
        }
        out.into_iter().map(LatticeVec::new).collect()
    }
}

/// Lattice points of `search` lying in every cone, by enumeration.
pub fn intersect_shifted_cones(
    cones: &[IntegralCone],
    search: &RationalBox,
) -> Result<BTreeSet<LatticeVec>> {
    if cones.is_empty() {
        return Err(Error::EmptyConeList);
    }
    let dim = cones[0].dim();
    if let Some(c) = cones.iter().find(|c| c.dim() != dim) {
        return Err(Error::DimensionMismatch { expected: dim, found: c.dim() });
    }
    if search.dim() != dim {
        return Err(Error::DimensionMismatch { expected: dim, found: search.dim() });
    }
    let mut out = BTreeSet::new();
    for p in search.lattice_points() {
        let mut inside = true;
        for c in cones {
            if !c.contains(&p)? {
                inside = false;
                break;
            }
        }
        if inside {
            out.insert(p);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn v(c: &[i64]) -> LatticeVec {
        LatticeVec::new(c.to_vec())
    }

    #[test]
    fn primitive_examples() {
        assert_eq!(primitive(&v(&[2, -4])).unwrap(), v(&[1, -2]));
        assert_eq!(primitive(&v(&[0, 7])).unwrap(), v(&[0, 1]));
        assert_eq!(primitive(&v(&[-3, -3])).unwrap(), v(&[-1, -1]));
        assert_eq!(primitive(&v(&[0, 0])), Err(Error::ZeroVector));
        assert_eq!(Error::ZeroVector.to_string(), "zero has no primitive representative");
    }

    #[test]
    fn triangle_areas() {
        assert_eq!(lattice_triangle_area(&v(&[0, 0]), &v(&[1, 0]), &v(&[0, 1])), rat(1, 2));
        assert_eq!(lattice_triangle_area(&v(&[0, 0]), &v(&[2, 0]), &v(&[0, 2])), int(2));
        assert_eq!(lattice_triangle_area(&v(&[0, 0]), &v(&[1, 1]), &v(&[2, 2])), int(0));
    }

    // Independent check: non-negative integer combinations with coefficients
    // up to `bound`.
    fn brute_force_contains(apex: &LatticeVec, gens: &[LatticeVec], p: &LatticeVec, bound: i64) -> bool {
        let target = p.sub(apex);
        match gens {
            [g] => (0..=bound).any(|a| g.scale(a) == target),
            [g1, g2] => (0..=bound)
                .any(|a| (0..=bound).any(|b| g1.scale(a).add(&g2.scale(b)) == target)),
            _ => unreachable!(),
        }
    }

    #[test]
    fn cone_contains_examples() {
        let quadrant = IntegralCone::strict(v(&[0, 0]), vec![v(&[1, 0]), v(&[0, 1])]).unwrap();
        assert!(quadrant.contains(&v(&[3, 2])).unwrap());
        assert!(!quadrant.contains(&v(&[-1, 0])).unwrap());

        let gens = vec![v(&[-1, 0]), v(&[-1, 1])];
        let cone = IntegralCone::strict(v(&[1, 0]), gens.clone()).unwrap();
        let expected = brute_force_contains(&v(&[1, 0]), &gens, &v(&[0, 0]), 5);
        assert!(expected);
        assert_eq!(cone.contains(&v(&[0, 0])).unwrap(), expected);
    }

    #[test]
    fn cone_contains_matches_enumeration_for_unimodular_cones() {
        let gens = vec![v(&[-1, 0]), v(&[-1, 1])];
        let cone = IntegralCone::strict(v(&[1, 0]), gens.clone()).unwrap();
        for p in RationalBox::cube(2, -4, 4).unwrap().lattice_points() {
            assert_eq!(
                cone.contains(&p).unwrap(),
                brute_force_contains(&v(&[1, 0]), &gens, &p, 10),
                "{p}"
            );
        }
    }

    #[test]
    fn spanned_by_classifies() {
        let c = IntegralCone::spanned_by(v(&[0, 0]), &[v(&[-1, 0]), v(&[0, 1]), v(&[-1, 1])]).unwrap();
        assert_eq!(c.kind(), ConeKind::Strict);
        assert_eq!(c.generators(), &[v(&[0, 1]), v(&[-1, 0])]);

        let h = IntegralCone::spanned_by(v(&[0, 0]), &[v(&[1, 0]), v(&[-1, 0]), v(&[0, 1])]).unwrap();
        assert_eq!(h.kind(), ConeKind::HalfPlane);
        assert!(h.contains(&v(&[-5, 0])).unwrap());
        assert!(h.contains(&v(&[3, 2])).unwrap());
        assert!(!h.contains(&v(&[0, -1])).unwrap());

        let f = IntegralCone::spanned_by(v(&[0, 0]), &[v(&[1, 0]), v(&[0, 1]), v(&[-1, -1])]).unwrap();
        assert_eq!(f.kind(), ConeKind::FullPlane);

        let ray = IntegralCone::spanned_by(v(&[0]), &[v(&[-2])]).unwrap();
        assert!(ray.contains(&v(&[-3])).unwrap());
        assert!(!ray.contains(&v(&[1])).unwrap());
        assert!(IntegralCone::spanned_by(v(&[0, 0]), &[v(&[1, 0]), v(&[-1, 0])]).is_err());
    }

    #[test]
    fn strict_rejects_bad_generators() {
        assert!(IntegralCone::strict(v(&[0, 0]), vec![v(&[2, 0])]).is_err());
        assert!(IntegralCone::strict(v(&[0, 0]), vec![v(&[1, 0]), v(&[-1, 0])]).is_err());
        assert!(IntegralCone::strict(v(&[0, 0]), vec![v(&[1, 0]), v(&[0, 1]), v(&[1, 1])]).is_err());
    }

    #[test]
    fn unit_triangle_is_intersection_of_vertex_cones() {
        let cones = vec![
            IntegralCone::strict(v(&[0, 0]), vec![v(&[1, 0]), v(&[0, 1])]).unwrap(),
            IntegralCone::strict(v(&[1, 0]), vec![v(&[-1, 0]), v(&[-1, 1])]).unwrap(),
            IntegralCone::strict(v(&[0, 1]), vec![v(&[0, -1]), v(&[1, -1])]).unwrap(),
        ];
        let got = intersect_shifted_cones(&cones, &RationalBox::cube(2, -3, 3).unwrap()).unwrap();
        let want: BTreeSet<_> = [v(&[0, 0]), v(&[1, 0]), v(&[0, 1])].into_iter().collect();
        assert_eq!(got, want);
    }

    #[test]
    fn full_plane_and_disjoint_intersections() {
        let full = IntegralCone::full_plane(v(&[0, 0]));
        let got = intersect_shifted_cones(&[full], &RationalBox::cube(2, 0, 1).unwrap()).unwrap();
        assert_eq!(got.len(), 4);

        let a = IntegralCone::strict(v(&[0, 0]), vec![v(&[1, 0]), v(&[0, 1])]).unwrap();
        let b = IntegralCone::strict(v(&[-1, -1]), vec![v(&[-1, 0]), v(&[0, -1])]).unwrap();
        let got = intersect_shifted_cones(&[a, b], &RationalBox::cube(2, -5, 5).unwrap()).unwrap();
        assert!(got.is_empty());
        assert_eq!(
            intersect_shifted_cones(&[], &RationalBox::cube(2, 0, 1).unwrap()),
            Err(Error::EmptyConeList)
        );
    }

    #[test]
    fn box_min_pairing_is_corner_min() {
        let b = RationalBox::new(vec![(int(-1), rat(1, 2)), (rat(-2, 3), int(3))]).unwrap();
        for u in [v(&[1, 0]), v(&[-2, 1]), v(&[1, 1]), v(&[0, -3])] {
            let corner_min = b.corners().iter().map(|c| u.pair(c)).min().unwrap();
            assert_eq!(b.min_pairing(&u), corner_min);
        }
        assert!(RationalBox::new(vec![(int(1), int(0))]).is_err());
    }

    fn arb_nonzero() -> impl Strategy<Value = LatticeVec> {
        (-50i64..50, -50i64..50)
            .prop_filter("nonzero", |(a, b)| *a != 0 || *b != 0)
            .prop_map(|(a, b)| v(&[a, b]))
    }

    fn arb_unimodular() -> impl Strategy<Value = [[i64; 2]; 2]> {
        // products of elementary shears and the swap generate GL(2, Z)
        proptest::collection::vec(0u8..4, 0..6).prop_map(|steps| {
            let mut m = [[1i64, 0], [0, 1]];
            for s in steps {
                let e = match s {
                    0 => [[1, 1], [0, 1]],
                    1 => [[1, 0], [1, 1]],
                    2 => [[0, 1], [1, 0]],
                    _ => [[1, -1], [0, 1]],
                };
                m = [
                    [m[0][0] * e[0][0] + m[0][1] * e[1][0], m[0][0] * e[0][1] + m[0][1] * e[1][1]],
                    [m[1][0] * e[0][0] + m[1][1] * e[1][0], m[1][0] * e[0][1] + m[1][1] * e[1][1]],
                ];
            }
            m
        })
    }

    fn apply(m: &[[i64; 2]; 2], p: &LatticeVec) -> LatticeVec {
        v(&[m[0][0] * p.get(0) + m[0][1] * p.get(1), m[1][0] * p.get(0) + m[1][1] * p.get(1)])
    }

    proptest! {
        #[test]
        fn primitive_is_idempotent(p in arb_nonzero()) {
            let once = primitive(&p).unwrap();
            prop_assert!(once.is_primitive());
            prop_assert_eq!(primitive(&once).unwrap(), once.clone());
            // same direction
            prop_assert_eq!(det2(&once, &p), 0);
            prop_assert!(once.dot(&p) > 0);
        }

        #[test]
        fn area_is_unimodular_invariant(
            a in arb_nonzero(), b in arb_nonzero(), c in arb_nonzero(),
            m in arb_unimodular(), shift in arb_nonzero(),
        ) {
            let before = lattice_triangle_area(&a, &b, &c);
            let img = |p: &LatticeVec| apply(&m, p).add(&shift);
            prop_assert_eq!(lattice_triangle_area(&img(&a), &img(&b), &img(&c)), before);
        }

        #[test]
        fn intersection_matches_pointwise_scan(
            apexes in proptest::collection::vec((-3i64..3, -3i64..3), 1..4),
            gens in proptest::collection::vec((arb_nonzero(), arb_nonzero()), 1..4),
        ) {
            let mut cones = Vec::new();
            for ((x, y), (g1, g2)) in apexes.iter().zip(gens.iter()) {
                let g1 = primitive(g1).unwrap();
                let g2 = primitive(g2).unwrap();
                if let Ok(c) = IntegralCone::spanned_by(v(&[*x, *y]), &[g1, g2]) {
                    cones.push(c);
                }
            }
            prop_assume!(!cones.is_empty());
            let search = RationalBox::cube(2, -5, 5).unwrap();
            let got = intersect_shifted_cones(&cones, &search).unwrap();
            for x in -5..=5 {
                for y in -5..=5 {
                    let p = v(&[x, y]);
                    let inside = cones.iter().all(|c| {
                        let d = p.sub(c.apex());
                        match (c.kind(), c.generators()) {
                            (ConeKind::FullPlane, _) => true,
                            (ConeKind::HalfPlane, [b, w]) => {
                                let s = det2(b, &d) as i128 * det2(b, w) as i128;
                                s >= 0
                            }
                            (ConeKind::Strict, [g]) => det2(g, &d) == 0 && g.dot(&d) >= 0,
                            (ConeKind::Strict, [g1, g2]) => {
                                // Cramer's rule with explicit rationals
                                let den = int(det2(g1, g2));
                                let l = int(det2(&d, g2)) / den.clone();
                                let m = int(det2(g1, &d)) / den;
                                !l.is_negative() && !m.is_negative()
                            }
                            _ => unreachable!(),
                        }
                    });
                    prop_assert_eq!(got.contains(&p), inside);
                }
            }
        }
    }
}
