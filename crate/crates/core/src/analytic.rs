//! Series `Σ c_u z^u` over the Novikov field on a chamber of the base, with
//! `z^u` read as the function `t^{⟨u, x⟩}`, and the substitutions that glue
//! them across walls.
//!
//! Every series carries a domain box `U` and a truncation level `E`; a term
//! is kept only while `val_U(c z^u) = val(c) + min_U ⟨u, x⟩ < E`, so all
//! arithmetic is finite and exact.

use std::collections::BTreeMap;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::affine_base::ChamberId;
use crate::error::{Error, Result};
use crate::lattice::{int, parse_rational, ConeKind, IntegralCone, LatticeVec, Rational, RationalBox, RationalPoint};
use crate::mirror::{presentation, CorrectionMap};
use crate::novikov::{Extended, NovikovElement, TermJson};
use crate::tropical::TropicalDiagram;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Monomial {
    coeff: NovikovElement,
    exp: LatticeVec,
}

impl Monomial {
    pub fn new(coeff: NovikovElement, exp: LatticeVec) -> Result<Self> {
        if coeff.is_zero() {
            return Err(Error::InvalidDiagram("monomial with zero coefficient".into()));
        }
        Ok(Monomial { coeff, exp })
    }

    pub fn unit(exp: LatticeVec) -> Self {
        Monomial { coeff: NovikovElement::one(), exp }
    }

    pub fn coeff(&self) -> &NovikovElement {
        &self.coeff
    }

    pub fn exp(&self) -> &LatticeVec {
        &self.exp
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial { coeff: self.coeff.mul(&other.coeff), exp: self.exp.add(&other.exp) }
    }

    /// The value at a point: `c t^{⟨u, x⟩}`.
    pub fn evaluate(&self, x: &RationalPoint) -> Result<NovikovElement> {
        if x.dim() != self.exp.dim() {
            return Err(Error::DimensionMismatch { expected: self.exp.dim(), found: x.dim() });
        }
        Ok(self.coeff.shift(&self.exp.pair(x)))
    }
}

// Coefficients inside a series are combined exactly; only the series-level
// truncation bounds them, via `normalized`.
fn exact(c: &NovikovElement) -> NovikovElement {
    NovikovElement::from_terms(c.terms().to_vec(), Extended::Infinity)
}

fn finite_val(c: &NovikovElement) -> Rational {
    match c.val() {
        Extended::Finite(v) => v,
        Extended::Infinity => unreachable!("nonzero coefficient"),
    }
}

pub fn monomial_val_on_box(m: &Monomial, domain: &RationalBox) -> Result<Rational> {
    if domain.dim() != m.exp.dim() {
        return Err(Error::DimensionMismatch { expected: m.exp.dim(), found: domain.dim() });
    }
    Ok(finite_val(&m.coeff) + domain.min_pairing(&m.exp))
}

/// Whether `Σ_{u ∈ apex + C} c z^u` converges on the box: every generator
/// must pair positively with every point of it.
pub fn cone_family_converges(cone: &IntegralCone, domain: &RationalBox) -> Result<bool> {
    if domain.dim() != cone.dim() {
        return Err(Error::DimensionMismatch { expected: cone.dim(), found: domain.dim() });
    }
    match cone.kind() {
        ConeKind::FullPlane => Err(Error::Divergent("the cone is the whole lattice".into())),
        // a half-plane contains a line, and no form is positive on both directions
        ConeKind::HalfPlane => Ok(false),
        ConeKind::Strict => Ok(cone.generators().iter().all(|g| domain.min_pairing(g).is_positive())),
    }
}

/// `z_{b,α}`: the function `t^{⟨α, x - b⟩}`, i.e. `t^{-⟨α, b⟩} z^α`. Moving
/// `b` to `b + c` multiplies it by `t^{-⟨α, c⟩}`.
pub fn flux_monomial(b: &RationalPoint, alpha: &LatticeVec, chamber: &ChamberId) -> Result<Monomial> {
    if let ChamberId::Wall(_) = chamber {
        return Err(Error::OnWall(format!("base point {b} lies on a wall")));
    }
    if b.dim() != alpha.dim() {
        return Err(Error::DimensionMismatch { expected: alpha.dim(), found: b.dim() });
    }
    Ok(Monomial { coeff: NovikovElement::t_pow(-alpha.pair(b)), exp: alpha.clone() })
}

/// `Σ_{u ∈ apex + C} c z^u`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConeFamily {
    pub cone: IntegralCone,
    pub coeff: NovikovElement,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AnalyticSeries {
    terms: BTreeMap<LatticeVec, NovikovElement>,
    families: Vec<ConeFamily>,
    chamber: ChamberId,
    domain: RationalBox,
    truncation: Rational,
}

impl AnalyticSeries {
    pub fn zero(chamber: ChamberId, domain: RationalBox, truncation: Rational) -> Result<Self> {
        if !truncation.is_positive() {
            return Err(Error::InvalidTruncation(truncation.to_string()));
        }
        Ok(AnalyticSeries { terms: BTreeMap::new(), families: Vec::new(), chamber, domain, truncation })
    }

    // products may be known only below a non-positive level
    fn blank(chamber: ChamberId, domain: RationalBox, truncation: Rational) -> Self {
        AnalyticSeries { terms: BTreeMap::new(), families: Vec::new(), chamber, domain, truncation }
    }

    pub fn from_monomials(
        monomials: &[Monomial],
        chamber: ChamberId,
        domain: RationalBox,
        truncation: Rational,
    ) -> Result<Self> {
        let mut s = AnalyticSeries::zero(chamber, domain, truncation)?;
        for m in monomials {
            s.add_monomial(m)?;
        }
        Ok(s.normalized())
    }

    pub fn dim(&self) -> usize {
        self.domain.dim()
    }

    pub fn terms(&self) -> &BTreeMap<LatticeVec, NovikovElement> {
        &self.terms
    }

    pub fn families(&self) -> &[ConeFamily] {
        &self.families
    }

    pub fn chamber(&self) -> &ChamberId {
        &self.chamber
    }

    pub fn domain(&self) -> &RationalBox {
        &self.domain
    }

    pub fn truncation(&self) -> &Rational {
        &self.truncation
    }

    pub fn coefficient(&self, u: &LatticeVec) -> Option<&NovikovElement> {
        self.terms.get(u)
    }

    fn add_monomial(&mut self, m: &Monomial) -> Result<()> {
        if m.exp.dim() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: m.exp.dim() });
        }
        let entry = self.terms.entry(m.exp.clone()).or_insert_with(NovikovElement::zero);
        *entry = entry.add(&exact(&m.coeff));
        Ok(())
    }

    pub fn with_family(mut self, family: ConeFamily) -> Result<Self> {
        if family.coeff.is_zero() {
            return Ok(self);
        }
        if !cone_family_converges(&family.cone, &self.domain)? {
            return Err(Error::Divergent(format!(
                "cone at {} does not converge on the domain",
                family.cone.apex()
            )));
        }
        self.families.push(family);
        Ok(self)
    }

    // drop everything with val_U ≥ E
    fn normalized(mut self) -> Self {
        let e = self.truncation.clone();
        let domain = self.domain.clone();
        self.terms = std::mem::take(&mut self.terms)
            .into_iter()
            .filter_map(|(u, c)| {
                let c = c.truncate_at(&(&e - domain.min_pairing(&u)));
                (!c.terms().is_empty()).then_some((u, c))
            })
            .collect();
        self
    }

    /// Replaces cone families by their terms below the truncation level.
    pub fn expand(&self) -> Result<Self> {
        let mut out = AnalyticSeries { families: Vec::new(), ..self.clone() };
        for fam in &self.families {
            let budget = &self.truncation - finite_val(&fam.coeff) - self.domain.min_pairing(fam.cone.apex());
            if !budget.is_positive() {
                continue;
            }
            // u = apex + Σ λ_i g_i with λ_i < budget / min_U ⟨g_i, x⟩
            let mut radius = vec![Rational::zero(); self.dim()];
            for g in fam.cone.generators() {
                let lam = &budget / self.domain.min_pairing(g);
                for (r, &c) in radius.iter_mut().zip(g.coords()) {
                    *r += &lam * int(c.abs());
                }
            }
            let search = RationalBox::new(
                fam.cone
                    .apex()
                    .coords()
                    .iter()
                    .zip(&radius)
                    .map(|(&a, r)| (int(a) - r, int(a) + r))
                    .collect(),
            )?;
            for u in search.lattice_points() {
                if fam.cone.contains(&u)? {
                    out.add_monomial(&Monomial { coeff: fam.coeff.clone(), exp: u })?;
                }
            }
        }
        Ok(out.normalized())
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.domain != other.domain || self.chamber != other.chamber {
            return Err(Error::InvalidDiagram("series live on different domains".into()));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let (a, b) = (self.expand()?, other.expand()?);
        let mut out = AnalyticSeries {
            truncation: a.truncation.clone().min(b.truncation.clone()),
            ..a.clone()
        };
        for (u, c) in &b.terms {
            out.add_monomial(&Monomial { coeff: c.clone(), exp: u.clone() })?;
        }
        Ok(out.normalized())
    }

    /// The truncation of the product accounts for negative valuations of
    /// either factor, so it may be lower than both inputs'.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let (a, b) = (self.expand()?, other.expand()?);
        // a is known below T_a, b below T_b: the product below
        // min(T_a + val b, T_b + val a)
        let bound = |t: &Rational, v: Extended| match v {
            Extended::Finite(v) => Extended::Finite(t + v),
            Extended::Infinity => Extended::Infinity,
        };
        let truncation = match bound(&a.truncation, b.val()).min(bound(&b.truncation, a.val())) {
            Extended::Finite(t) => t,
            Extended::Infinity => a.truncation.clone().min(b.truncation.clone()),
        };
        let mut out = AnalyticSeries::blank(a.chamber.clone(), a.domain.clone(), truncation);
        for (u, c) in &a.terms {
            for (v, d) in &b.terms {
                out.add_monomial(&Monomial { coeff: exact(c).mul(&exact(d)), exp: u.add(v) })?;
            }
        }
        Ok(out.normalized())
    }

    /// `min val_U` over the explicit terms.
    pub fn val(&self) -> Extended {
        self.terms
            .iter()
            .map(|(u, c)| Extended::Finite(finite_val(c) + self.domain.min_pairing(u)))
            .min()
            .unwrap_or(Extended::Infinity)
    }

    /// Agreement of all terms with `val_U < e`.
    pub fn eq_mod(&self, other: &Self, e: &Rational) -> Result<bool> {
        self.check_compatible(other)?;
        let (a, b) = (self.expand()?, other.expand()?);
        let zero = NovikovElement::zero();
        let keys: std::collections::BTreeSet<&LatticeVec> = a.terms.keys().chain(b.terms.keys()).collect();
        let same = keys.into_iter().all(|u| {
            let level = e - self.domain.min_pairing(u);
            let x = a.terms.get(u).unwrap_or(&zero);
            let y = b.terms.get(u).unwrap_or(&zero);
            x.eq_mod(y, &level)
        });
        Ok(same)
    }

    /// The value at a point of the domain, up to `t^E`.
    pub fn evaluate(&self, x: &RationalPoint) -> Result<NovikovElement> {
        if x.dim() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: x.dim() });
        }
        if !self.domain.contains_point(x) {
            return Err(Error::InvalidDiagram(format!("point {x} is outside the domain")));
        }
        let mut sum = NovikovElement::zero();
        for (u, c) in &self.expand()?.terms {
            sum = sum.add(&c.shift(&u.pair(x)));
        }
        Ok(sum.truncate_at(&self.truncation))
    }

    pub fn to_json(&self) -> SeriesJson {
        SeriesJson {
            chamber: self.chamber.to_string(),
            domain: self
                .domain
                .bounds()
                .iter()
                .map(|(lo, hi)| [lo.to_string(), hi.to_string()])
                .collect(),
            truncation: self.truncation.to_string(),
            terms: self
                .terms
                .iter()
                .map(|(u, c)| SeriesTermJson { exponent: u.coords().to_vec(), coefficient: c.to_json_terms() })
                .collect(),
            families: self
                .families
                .iter()
                .map(|f| FamilyJson {
                    apex: f.cone.apex().coords().to_vec(),
                    generators: f.cone.generators().iter().map(|g| g.coords().to_vec()).collect(),
                    coefficient: f.coeff.to_json_terms(),
                })
                .collect(),
        }
    }

    pub fn from_json(j: &SeriesJson) -> Result<Self> {
        let domain = RationalBox::new(
            j.domain
                .iter()
                .map(|[lo, hi]| Ok((parse_rational(lo)?, parse_rational(hi)?)))
                .collect::<Result<Vec<_>>>()?,
        )?;
        let mut s = AnalyticSeries::zero(j.chamber.parse()?, domain, parse_rational(&j.truncation)?)?;
        for t in &j.terms {
            let c = NovikovElement::from_json_terms(&t.coefficient)?;
            if !c.is_zero() {
                s.add_monomial(&Monomial { coeff: c, exp: LatticeVec::new(t.exponent.clone()) })?;
            }
        }
        for f in &j.families {
            let apex = LatticeVec::new(f.apex.clone());
            let gens: Vec<LatticeVec> = f.generators.iter().cloned().map(LatticeVec::new).collect();
            let cone = IntegralCone::spanned_by(apex, &gens)?;
            s = s.with_family(ConeFamily { cone, coeff: NovikovElement::from_json_terms(&f.coefficient)? })?;
        }
        Ok(s.normalized())
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        let j: SeriesJson = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        AnalyticSeries::from_json(&j)
    }
}

impl std::fmt::Display for AnalyticSeries {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.terms.is_empty() {
            write!(f, "0")?;
        }
        for (i, (u, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            let coeff = match c.terms() {
                [(e, k)] if k.is_one() && e.is_zero() => None,
                [(e, k)] if k.is_one() => Some(format!("t^{{{e}}}")),
                _ => Some(format!("({c})")),
            };
            let mono: Vec<String> = u
                .coords()
                .iter()
                .enumerate()
                .filter(|(_, k)| **k != 0)
                .map(|(i, &k)| {
                    if k == 1 {
                        format!("z{}", i + 1)
                    } else {
                        format!("z{}^{{{k}}}", i + 1)
                    }
                })
                .collect();
            match (coeff, mono.is_empty()) {
                (None, true) => write!(f, "1")?,
                (None, false) => write!(f, "{}", mono.join("*"))?,
                (Some(k), true) => write!(f, "{k}")?,
                (Some(k), false) => write!(f, "{k}*{}", mono.join("*"))?,
            }
        }
        for fam in &self.families {
            let gens: Vec<String> = fam.cone.generators().iter().map(|g| g.to_string()).collect();
            write!(f, " + ({})*Σ z^({} + cone[{}])", fam.coeff, fam.cone.apex(), gens.join(","))?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeriesJson {
    pub chamber: String,
    pub domain: Vec<[String; 2]>,
    pub truncation: String,
    #[serde(default)]
    pub terms: Vec<SeriesTermJson>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub families: Vec<FamilyJson>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeriesTermJson {
    pub exponent: Vec<i64>,
    pub coefficient: Vec<TermJson>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyJson {
    pub apex: Vec<i64>,
    pub generators: Vec<Vec<i64>>,
    pub coefficient: Vec<TermJson>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum WallMode {
    Affine,
    Corrected,
}

/// Crossing the wall over the face of `wall` out of chamber `from`.
/// Affine: `z^u ↦ z^{u + ⟨u, m⟩ γ}`. Corrected: `z^u ↦ z^u (1 + z^γ)^{⟨u, m⟩}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WallTransformation {
    wall: LatticeVec,
    gamma: LatticeVec,
    m: LatticeVec,
    mode: WallMode,
    from: ChamberId,
}

impl WallTransformation {
    /// `γ` must be primitive and `⟨γ, m⟩ = 0`, so that `z^γ` is fixed.
    pub fn new(wall: LatticeVec, gamma: LatticeVec, m: LatticeVec, mode: WallMode, from: ChamberId) -> Result<Self> {
        if gamma.dim() != m.dim() {
            return Err(Error::DimensionMismatch { expected: gamma.dim(), found: m.dim() });
        }
        if !gamma.is_primitive() {
            return Err(Error::InvalidWall(format!("vanishing class {gamma} is not primitive")));
        }
        if gamma.dot(&m) != 0 {
            return Err(Error::InvalidWall(format!("⟨{gamma}, {m}⟩ ≠ 0")));
        }
        if from.opposite().is_none() {
            return Err(Error::WallNotAdjacent(format!("{from} is a wall, not a chamber")));
        }
        Ok(WallTransformation { wall, gamma, m, mode, from })
    }

    pub fn wall(&self) -> &LatticeVec {
        &self.wall
    }

    pub fn gamma(&self) -> &LatticeVec {
        &self.gamma
    }

    pub fn m(&self) -> &LatticeVec {
        &self.m
    }

    pub fn mode(&self) -> WallMode {
        self.mode
    }

    pub fn from(&self) -> &ChamberId {
        &self.from
    }

    /// The crossing back.
    pub fn inverse(&self) -> Self {
        WallTransformation {
            m: self.m.neg(),
            from: self.from.opposite().expect("checked on construction"),
            ..self.clone()
        }
    }
}

// generalized binomial coefficient k choose j
fn binomial(k: i64, j: u32) -> Rational {
    let mut acc = Rational::one();
    for i in 0..j as i64 {
        acc = acc * int(k - i) / int(i + 1);
    }
    acc
}

pub fn wall_cross(series: &AnalyticSeries, w: &WallTransformation, e: &Rational) -> Result<AnalyticSeries> {
    if *series.chamber() != w.from {
        return Err(Error::WallNotAdjacent(format!(
            "series lives on {}, wall is crossed from {}",
            series.chamber(),
            w.from
        )));
    }
    if w.gamma.dim() != series.dim() {
        return Err(Error::DimensionMismatch { expected: series.dim(), found: w.gamma.dim() });
    }
    let src = series.expand()?;
    let truncation = e.clone().min(src.truncation.clone());
    let domain = src.domain.clone();
    let to = w.from.opposite().expect("checked on construction");
    let mut out = AnalyticSeries::blank(to, domain.clone(), truncation.clone());
    let step = domain.min_pairing(&w.gamma);
    for (u, c) in &src.terms {
        let k = u.dot(&w.m);
        match w.mode {
            WallMode::Affine => {
                out.add_monomial(&Monomial { coeff: c.clone(), exp: u.add(&w.gamma.scale(k)) })?;
            }
            WallMode::Corrected if k >= 0 => {
                for j in 0..=k {
                    let coeff = c.scale(&binomial(k, j as u32));
                    out.add_monomial(&Monomial { coeff, exp: u.add(&w.gamma.scale(j)) })?;
                }
            }
            WallMode::Corrected => {
                if !step.is_positive() {
                    return Err(Error::Divergent(format!(
                        "(1 + z^{}) has no inverse on the domain",
                        w.gamma
                    )));
                }
                // val_U(z^{u + jγ}) ≥ val_U(z^u) + j·step
                let start = finite_val(c) + domain.min_pairing(u);
                let mut j: u32 = 0;
                while &start + &step * int(j as i64) < truncation {
                    let coeff = c.scale(&binomial(k, j));
                    out.add_monomial(&Monomial { coeff, exp: u.add(&w.gamma.scale(j as i64)) })?;
                    j += 1;
                }
            }
        }
    }
    Ok(out.normalized())
}

/// Every intermediate step of the focus-focus computation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DemoReport {
    pub truncation: Rational,
    pub steps: Vec<(String, String)>,
    pub passed: bool,
    pub failure: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DemoReportJson {
    pub truncation: String,
    pub steps: Vec<DemoStepJson>,
    pub result: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub failure: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DemoStepJson {
    pub name: String,
    pub value: String,
}

impl DemoReport {
    pub fn to_json(&self) -> DemoReportJson {
        DemoReportJson {
            truncation: self.truncation.to_string(),
            steps: self
                .steps
                .iter()
                .map(|(name, value)| DemoStepJson { name: name.clone(), value: value.clone() })
                .collect(),
            result: if self.passed { "PASS" } else { "FAIL" }.to_string(),
            failure: self.failure.clone(),
        }
    }
}

impl std::fmt::Display for DemoReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "truncation E = {}", self.truncation)?;
        for (name, value) in &self.steps {
            writeln!(f, "{name}: {value}")?;
        }
        if let Some(why) = &self.failure {
            writeln!(f, "failure: {why}")?;
        }
        writeln!(f, "{}", if self.passed { "PASS" } else { "FAIL" })
    }
}

/// The conic bundle over a single focus-focus point. Exponents are written
/// in the order `(t, x)`, so `z₁ = z^{(1,0)}` grows with the height and
/// `z₂ = z^{(0,1)}` is the vanishing class.
pub fn focus_focus_demo(e: &Rational) -> Result<DemoReport> {
    focus_focus_demo_with(e, &LatticeVec::new(vec![0, 1]))
}

/// As [`focus_focus_demo`] with the vanishing class replaced, to exercise
/// the failure path.
pub fn focus_focus_demo_with(e: &Rational, gamma: &LatticeVec) -> Result<DemoReport> {
    if !e.is_positive() {
        return Err(Error::InvalidTruncation(e.to_string()));
    }
    let mut steps = Vec::new();
    let outcome = run_demo(e, gamma, &mut steps);
    let (passed, failure) = match outcome {
        Ok(None) => (true, None),
        Ok(Some(why)) => (false, Some(why)),
        Err(err) => (false, Some(err.to_string())),
    };
    Ok(DemoReport { truncation: e.clone(), steps, passed, failure })
}

// Factors are built with a margin over E: on V+ the valuations of h+(x) and
// h+(y) are 1 and -2, so their product is still known below E + 2.
const DEMO_MARGIN: i64 = 4;

fn run_demo(e: &Rational, gamma: &LatticeVec, steps: &mut Vec<(String, String)>) -> Result<Option<String>> {
    let z = |a: i64, b: i64| Monomial::unit(LatticeVec::new(vec![a, b]));
    let work = e + int(DEMO_MARGIN);
    let plus = RationalBox::new(vec![(int(1), int(2)), (int(-1), int(1))])?;
    let minus = RationalBox::new(vec![(int(-2), int(-1)), (int(-1), int(1))])?;
    let m = LatticeVec::new(vec![-1, 0]);

    let x_plus = AnalyticSeries::from_monomials(&[z(1, 0)], ChamberId::VPlus, plus.clone(), work.clone())?;
    let y_minus = AnalyticSeries::from_monomials(&[z(-1, 0)], ChamberId::VMinus, minus, work.clone())?;
    steps.push(("h+(x) on V+".into(), x_plus.to_string()));
    steps.push(("h-(y) on V-".into(), y_minus.to_string()));

    let w1 = WallTransformation::new(
        LatticeVec::new(vec![1]),
        gamma.clone(),
        m.clone(),
        WallMode::Corrected,
        ChamberId::VMinus,
    )?;
    let via_w1 = with_domain(wall_cross(&y_minus, &w1, &work)?, &plus)?;
    steps.push(("h+(y) across W1".into(), via_w1.to_string()));

    // over the other face the chart differs by the monodromy around the point
    let w0 = WallTransformation::new(
        LatticeVec::new(vec![0]),
        gamma.neg(),
        m.clone(),
        WallMode::Corrected,
        ChamberId::VMinus,
    )?;
    let crossed = with_domain(wall_cross(&y_minus, &w0, &work)?, &plus)?;
    let via_w0 = change_chart(&crossed, gamma, &m)?;
    steps.push(("h+(y) across W0".into(), via_w0.to_string()));
    if !via_w0.eq_mod(&via_w1, e)? {
        return Ok(Some("the two routes disagree".into()));
    }

    let product = x_plus.mul(&via_w1)?;
    steps.push(("h+(x)·h+(y)".into(), product.to_string()));

    let mirror = presentation(&TropicalDiagram::focus_focus(), None, &CorrectionMap::empty(), e)?;
    steps.push(("mirror relation".into(), mirror.relation()));
    let expected = AnalyticSeries::from_monomials(
        &mirror
            .g
            .terms()
            .iter()
            .map(|(a, c)| Monomial::new(c.clone(), gamma.scale(a.get(0))))
            .collect::<Result<Vec<_>>>()?,
        ChamberId::VPlus,
        plus,
        e.clone(),
    )?;
    steps.push(("g with u = z2".into(), expected.to_string()));
    if !product.eq_mod(&expected, e)? {
        return Ok(Some("h+(x)·h+(y) differs from g".into()));
    }
    Ok(None)
}

/// The monomial change of chart `z^u ↦ z^{u + ⟨u, m⟩ γ}` on the same chamber.
pub fn change_chart(series: &AnalyticSeries, gamma: &LatticeVec, m: &LatticeVec) -> Result<AnalyticSeries> {
    if gamma.dim() != series.dim() || m.dim() != series.dim() {
        return Err(Error::DimensionMismatch { expected: series.dim(), found: gamma.dim() });
    }
    let src = series.expand()?;
    let mut out = AnalyticSeries { terms: BTreeMap::new(), ..src.clone() };
    for (u, c) in &src.terms {
        out.add_monomial(&Monomial { coeff: c.clone(), exp: u.add(&gamma.scale(u.dot(m))) })?;
    }
    Ok(out.normalized())
}

fn with_domain(s: AnalyticSeries, domain: &RationalBox) -> Result<AnalyticSeries> {
    let mut out = AnalyticSeries::blank(s.chamber.clone(), domain.clone(), s.truncation.clone());
    for (u, c) in s.terms {
        out.add_monomial(&Monomial { coeff: c, exp: u })?;
    }
    Ok(out.normalized())
}
