//! The mirror: face distances `f(α)`, the superpotential
//! `g = Σ (1 + c_α) t^{f(α)} u^α` over the dual vertices, and the presentation
//! `Λ[u^{±1}, x, y] / (xy - g)`.

use std::collections::BTreeMap;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{int, parse_rational, LatticeVec, Rational, RationalPoint};
use crate::novikov::{Extended, NovikovElement, TermJson};
use crate::tropical::{dual_subdivision, is_smooth, plane_through, root_key_of, TropicalDiagram};

pub const DEFAULT_TRUNCATION: i64 = 10;

/// Base point used when none is given: the first diagram vertex.
pub fn default_base_point(diag: &TropicalDiagram) -> Result<RationalPoint> {
    diag.vertices().first().cloned().ok_or(Error::EmptyDiagram)
}

/// `f(α)` relative to `b`, with the root face at 0.
pub fn face_distance(diag: &TropicalDiagram, alpha: &LatticeVec, b: &RationalPoint) -> Result<Rational> {
    let dual = dual_subdivision(diag)?;
    let i = dual
        .index_of(alpha)
        .ok_or_else(|| Error::UnknownDualVertex(alpha.to_string()))?;
    Ok(dual.face_values(diag, b)?.swap_remove(i))
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct CorrectionMap {
    entries: BTreeMap<LatticeVec, NovikovElement>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CorrectionJson {
    pub vertex: Vec<i64>,
    pub terms: Vec<TermJson>,
}

impl CorrectionMap {
    pub fn new(entries: BTreeMap<LatticeVec, NovikovElement>) -> Result<Self> {
        for (a, c) in &entries {
            if !c.is_zero() && !matches!(c.val(), Extended::Finite(ref v) if v.is_positive()) {
                return Err(Error::NonPositiveCorrection(a.to_string()));
            }
            if !c.has_integer_coefficients() {
                return Err(Error::NonIntegralCorrection(a.to_string()));
            }
        }
        Ok(CorrectionMap { entries })
    }

    pub fn empty() -> Self {
        CorrectionMap::default()
    }

    pub fn entries(&self) -> &BTreeMap<LatticeVec, NovikovElement> {
        &self.entries
    }

    pub fn get(&self, alpha: &LatticeVec) -> Option<&NovikovElement> {
        self.entries.get(alpha)
    }

    /// `[{"vertex": [1, 1], "terms": [{"exp": "1", "coeff": "2"}]}, ...]`
    pub fn from_json_str(s: &str) -> Result<Self> {
        let raw: Vec<CorrectionJson> =
            serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        let mut entries = BTreeMap::new();
        for c in raw {
            let a = LatticeVec::new(c.vertex);
            let value = NovikovElement::from_json_terms(&c.terms)?;
            if entries.insert(a.clone(), value).is_some() {
                return Err(Error::Parse(format!("duplicate correction for {a}")));
            }
        }
        CorrectionMap::new(entries)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Superpotential {
    vars: usize,
    terms: BTreeMap<LatticeVec, NovikovElement>,
}

impl Superpotential {
    pub fn new(vars: usize, terms: BTreeMap<LatticeVec, NovikovElement>) -> Result<Self> {
        for a in terms.keys() {
            if a.dim() != vars {
                return Err(Error::DimensionMismatch { expected: vars, found: a.dim() });
            }
        }
        Ok(Superpotential { vars, terms })
    }

    pub fn vars(&self) -> usize {
        self.vars
    }

    pub fn terms(&self) -> &BTreeMap<LatticeVec, NovikovElement> {
        &self.terms
    }

    pub fn support(&self) -> std::collections::BTreeSet<LatticeVec> {
        self.terms.keys().cloned().collect()
    }

    pub fn coefficient(&self, alpha: &LatticeVec) -> Option<&NovikovElement> {
        self.terms.get(alpha)
    }

    pub fn var_names(&self) -> Vec<String> {
        if self.vars == 1 {
            vec!["u".to_string()]
        } else {
            (1..=self.vars).map(|i| format!("u{i}")).collect()
        }
    }

    /// Terms ordered by total degree, then descending lexicographically.
    pub fn ordered_terms(&self) -> Vec<(&LatticeVec, &NovikovElement)> {
        let mut out: Vec<_> = self.terms.iter().collect();
        out.sort_by(|(a, _), (b, _)| {
            let deg = |v: &LatticeVec| v.coords().iter().sum::<i64>();
            deg(a).cmp(&deg(b)).then(b.cmp(a))
        });
        out
    }

    fn monomial_text(&self, a: &LatticeVec) -> String {
        let names = self.var_names();
        let parts: Vec<String> = a
            .coords()
            .iter()
            .zip(&names)
            .filter(|(k, _)| **k != 0)
            .map(|(&k, n)| if k == 1 { n.clone() } else { format!("{n}^{{{k}}}") })
            .collect();
        parts.join("*")
    }

    fn coefficient_text(c: &NovikovElement) -> Option<String> {
        match c.terms() {
            [(e, k)] if k.is_one() && e.is_zero() => None,
            [(e, k)] if k.is_one() => Some(format!("t^{{{e}}}")),
            _ => Some(format!("({c})")),
        }
    }
}

impl std::fmt::Display for Superpotential {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self
            .ordered_terms()
            .into_iter()
            .map(|(a, c)| {
                let mono = self.monomial_text(a);
                match (Superpotential::coefficient_text(c), mono.is_empty()) {
                    (None, true) => "1".to_string(),
                    (None, false) => mono,
                    (Some(k), true) => k,
                    (Some(k), false) => format!("{k}*{mono}"),
                }
            })
            .collect();
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

/// `g` with each coefficient `(1 + c_α) t^{f(α)}` kept to relative precision
/// `e`, shifted so that the smallest `f` is 0.
pub fn superpotential(
    diag: &TropicalDiagram,
    b: Option<&RationalPoint>,
    corrections: &CorrectionMap,
    e: &Rational,
) -> Result<Superpotential> {
    if !e.is_positive() {
        return Err(Error::InvalidTruncation(e.to_string()));
    }
    if !is_smooth(diag)? {
        return Err(Error::NotSmooth("superpotential needs a smooth diagram".into()));
    }
    let dual = dual_subdivision(diag)?;
    for a in corrections.entries().keys() {
        if dual.index_of(a).is_none() {
            return Err(Error::UnknownDualVertex(a.to_string()));
        }
    }
    let b = match b {
        Some(b) => b.clone(),
        None => default_base_point(diag)?,
    };
    let f = dual.face_values(diag, &b)?;
    let min = f.iter().min().cloned().unwrap_or_else(Rational::zero);
    let terms = dual
        .lattice_points()
        .iter()
        .zip(&f)
        .map(|(a, fa)| {
            let shift = fa - &min;
            let base = match corrections.get(a) {
                Some(c) => NovikovElement::one().add(c),
                None => NovikovElement::one(),
            };
            (a.clone(), base.shift(&shift).truncate_at(&(&shift + e)))
        })
        .collect();
    Superpotential::new(diag.dim(), terms)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MirrorPresentation {
    pub g: Superpotential,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PresentationJson {
    pub generators: Vec<String>,
    pub gradings: BTreeMap<String, i64>,
    pub relation: String,
    pub terms: Vec<PresentationTermJson>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PresentationTermJson {
    pub exponent: Vec<i64>,
    pub coefficient: Vec<TermJson>,
}

impl MirrorPresentation {
    pub fn n(&self) -> usize {
        self.g.vars() + 1
    }

    pub fn generators(&self) -> Vec<String> {
        let mut out: Vec<String> = self
            .g
            .var_names()
            .into_iter()
            .flat_map(|u| [u.clone(), format!("{u}^-1")])
            .collect();
        out.push("x".into());
        out.push("y".into());
        out
    }

    pub fn gradings(&self) -> BTreeMap<String, i64> {
        let mut out: BTreeMap<String, i64> =
            self.g.var_names().into_iter().map(|u| (u, 0)).collect();
        out.insert("x".into(), 1);
        out.insert("y".into(), -1);
        out
    }

    /// Winding degree of `xy - g`; every monomial of `g` has degree 0.
    pub fn relation_degree(&self) -> i64 {
        let gr = self.gradings();
        gr["x"] + gr["y"]
    }

    pub fn relation(&self) -> String {
        match self.g.terms().len() {
            0 => "x*y".to_string(),
            1 => format!("x*y - {}", self.g),
            _ => format!("x*y - ({})", self.g),
        }
    }

    pub fn to_json(&self) -> PresentationJson {
        PresentationJson {
            generators: self.generators(),
            gradings: self.gradings(),
            relation: self.relation(),
            terms: self
                .g
                .ordered_terms()
                .into_iter()
                .map(|(a, c)| PresentationTermJson {
                    exponent: a.coords().to_vec(),
                    coefficient: c.to_json_terms(),
                })
                .collect(),
        }
    }
}

pub fn presentation(
    diag: &TropicalDiagram,
    b: Option<&RationalPoint>,
    corrections: &CorrectionMap,
    e: &Rational,
) -> Result<MirrorPresentation> {
    Ok(MirrorPresentation { g: superpotential(diag, b, corrections, e)? })
}

/// Canonical form under `u ↦ t^c u`, `x ↦ t^k x` and monomial shifts of the
/// support: the root of the support moves to the origin, and the valuations
/// are made to vanish on one distinguished lower-hull facet through it.
pub fn normalize_presentation(p: &MirrorPresentation) -> MirrorPresentation {
    let g = &p.g;
    let Some(root) = g.terms().keys().min_by_key(|a| (root_key_of(a), (*a).clone())).cloned() else {
        return p.clone();
    };
    let shifted: Vec<(LatticeVec, NovikovElement)> =
        g.terms().iter().map(|(a, c)| (a.sub(&root), c.clone())).collect();
    let vals: Vec<(LatticeVec, Rational)> = shifted
        .iter()
        .map(|(a, c)| {
            let v = match c.val() {
                Extended::Finite(v) => v,
                Extended::Infinity => int(0),
            };
            (a.clone(), v)
        })
        .collect();
    let affine = lower_facet_affine(&vals, g.vars());
    let terms = shifted
        .into_iter()
        .map(|(a, c)| {
            let phi = affine(&a);
            let shifted = c.shift(&-&phi);
            let trunc = match c.truncation() {
                Extended::Finite(t) => Extended::Finite(t - &phi),
                Extended::Infinity => Extended::Infinity,
            };
            (a, shifted.truncate(&trunc))
        })
        .collect();
    MirrorPresentation { g: Superpotential { vars: g.vars(), terms } }
}

// Affine function agreeing with the valuations on the lower-hull facet
// through the origin whose sorted vertex list is lexicographically smallest.
fn lower_facet_affine(
    vals: &[(LatticeVec, Rational)],
    dim: usize,
) -> Box<dyn Fn(&LatticeVec) -> Rational> {
    let origin = vals
        .iter()
        .position(|(a, _)| a.is_zero())
        .expect("support contains its root");
    let v0 = vals[origin].1.clone();
    let constant = move |_: &LatticeVec| v0.clone();
    let mut best: Option<(Vec<LatticeVec>, Vec<Rational>)> = None;
    let mut consider = |coeffs: Vec<Rational>| {
        let eval = |a: &LatticeVec| {
            a.coords()
                .iter()
                .zip(&coeffs[1..])
                .fold(coeffs[0].clone(), |acc, (&x, c)| acc + c * int(x))
        };
        if vals.iter().any(|(a, v)| *v < eval(a)) {
            return;
        }
        let mut facet: Vec<LatticeVec> =
            vals.iter().filter(|(a, v)| *v == eval(a)).map(|(a, _)| a.clone()).collect();
        facet.sort();
        if best.as_ref().is_none_or(|(f, _)| facet < *f) {
            best = Some((facet, coeffs));
        }
    };
    let others: Vec<usize> = (0..vals.len()).filter(|&i| i != origin).collect();
    if dim == 1 {
        for &j in &others {
            let slope = (&vals[j].1 - &vals[origin].1) / int(vals[j].0.get(0));
            consider(vec![vals[origin].1.clone(), slope]);
        }
    } else {
        for (x, &j) in others.iter().enumerate() {
            for &k in &others[x + 1..] {
                if let Some((c0, c1, c2)) = plane_through([&vals[origin], &vals[j], &vals[k]]) {
                    consider(vec![c0, c1, c2]);
                }
            }
        }
    }
    match best {
        None => Box::new(constant),
        Some((_, coeffs)) => Box::new(move |a: &LatticeVec| {
            a.coords()
                .iter()
                .zip(&coeffs[1..])
                .fold(coeffs[0].clone(), |acc, (&x, c)| acc + c * int(x))
        }),
    }
}

/// Parses `"p/q,p/q"`.
pub fn parse_base_point(s: &str) -> Result<RationalPoint> {
    RationalPoint::parse_csv(s)
}

pub fn parse_truncation(s: &str) -> Result<Rational> {
    let e = parse_rational(s)?;
    if !e.is_positive() {
        return Err(Error::InvalidTruncation(s.to_string()));
    }
    Ok(e)
}
