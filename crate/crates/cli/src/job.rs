//! Job files: schema, exact parsing and conversion to library objects.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::de::{self, Deserializer, SeqAccess, Visitor};
use serde::Deserialize;
use std::fmt;
use std::path::Path;
use volint::curve::{CurvePoint, HyperellipticCurve, MeromorphicForm};
use volint::padic::{Field, FieldCtx, FieldSpec, PadicElement};
use volint::vologodsky::{Config, Vologodsky};

/// A schema violation: the job never reaches the library.
#[derive(Debug, thiserror::Error)]
#[error("{0}")]
pub struct SchemaError(pub String);

fn schema(msg: impl Into<String>) -> SchemaError {
    SchemaError(msg.into())
}

/// An exact rational: an integer or a string "a/b". Floats are refused.
#[derive(Clone, Debug, PartialEq)]
pub struct Rat(pub BigRational);

fn parse_rational(s: &str) -> Option<BigRational> {
    let s = s.trim();
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n: BigInt = n.parse().ok()?;
    let d: BigInt = d.parse().ok()?;
    (!d.is_zero()).then(|| BigRational::new(n, d))
}

const NO_FLOATS: &str = "floating point values are not accepted; write rationals as strings such as \"2/3\"";

struct RatVisitor;

impl<'de> Visitor<'de> for RatVisitor {
    type Value = Rat;

    fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
        f.write_str("an integer or a rational string such as \"-2/3\"")
    }

    fn visit_i64<E: de::Error>(self, v: i64) -> Result<Rat, E> {
        Ok(Rat(BigRational::from_integer(v.into())))
    }

    fn visit_u64<E: de::Error>(self, v: u64) -> Result<Rat, E> {
        Ok(Rat(BigRational::from_integer(v.into())))
    }

    fn visit_f64<E: de::Error>(self, _: f64) -> Result<Rat, E> {
        Err(E::custom(NO_FLOATS))
    }

    fn visit_str<E: de::Error>(self, v: &str) -> Result<Rat, E> {
        parse_rational(v).map(Rat).ok_or_else(|| E::custom(format!("not an exact rational: {v:?}")))
    }
}

impl<'de> Deserialize<'de> for Rat {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        d.deserialize_any(RatVisitor)
    }
}

/// An element of K: a rational, or its coefficients in the power basis of
/// the generator.
#[derive(Clone, Debug, PartialEq)]
pub enum Elem {
    Rational(BigRational),
    Coeffs(Vec<BigRational>),
}

struct ElemVisitor;

impl<'de> Visitor<'de> for ElemVisitor {
    type Value = Elem;

    fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
        f.write_str("a rational or an array of rational coefficients")
    }

    fn visit_i64<E: de::Error>(self, v: i64) -> Result<Elem, E> {
        RatVisitor.visit_i64(v).map(|r| Elem::Rational(r.0))
    }

    fn visit_u64<E: de::Error>(self, v: u64) -> Result<Elem, E> {
        RatVisitor.visit_u64(v).map(|r| Elem::Rational(r.0))
    }

    fn visit_f64<E: de::Error>(self, v: f64) -> Result<Elem, E> {
        RatVisitor.visit_f64(v).map(|r| Elem::Rational(r.0))
    }

    fn visit_str<E: de::Error>(self, v: &str) -> Result<Elem, E> {
        RatVisitor.visit_str(v).map(|r| Elem::Rational(r.0))
    }

    fn visit_seq<A: SeqAccess<'de>>(self, mut seq: A) -> Result<Elem, A::Error> {
        let mut cs = Vec::new();
        while let Some(Rat(c)) = seq.next_element()? {
            cs.push(c);
        }
        Ok(Elem::Coeffs(cs))
    }
}

impl<'de> Deserialize<'de> for Elem {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        d.deserialize_any(ElemVisitor)
    }
}

impl Elem {
    pub fn to_padic(&self, field: &Field) -> PadicElement {
        match self {
            Elem::Rational(q) => field.from_rational(q),
            Elem::Coeffs(cs) => field.from_rational_coeffs(cs),
        }
    }
}

/// A point: "inf", "inf+", "inf-", or a table with x and either y or the
/// sign of the canonical square root of f(x).
#[derive(Clone, Debug)]
pub enum PointSpec {
    Infinite(String),
    Affine {
        x: Elem,
        y: Option<Elem>,
        sign: Option<i8>,
    },
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct AffineSpec {
    x: Elem,
    #[serde(default)]
    y: Option<Elem>,
    #[serde(default)]
    sign: Option<i8>,
}

struct PointVisitor;

// a hand written visitor keeps the inner error messages that an untagged
// enum would swallow
impl<'de> Visitor<'de> for PointVisitor {
    type Value = PointSpec;
    fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
        f.write_str("\"inf\", \"inf+\", \"inf-\" or a table {x, y} / {x, sign}")
    }
    fn visit_str<E: de::Error>(self, v: &str) -> Result<PointSpec, E> {
        Ok(PointSpec::Infinite(v.to_string()))
    }
    fn visit_map<A: de::MapAccess<'de>>(self, map: A) -> Result<PointSpec, A::Error> {
        let a = AffineSpec::deserialize(de::value::MapAccessDeserializer::new(map))?;
        Ok(PointSpec::Affine { x: a.x, y: a.y, sign: a.sign })
    }
}

impl<'de> Deserialize<'de> for PointSpec {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        d.deserialize_any(PointVisitor)
    }
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FieldBlock {
    pub p: u64,
    #[serde(default)]
    pub modulus: Option<Vec<Rat>>,
    #[serde(default)]
    pub generator: Option<String>,
    #[serde(default)]
    pub log_branch: Option<Elem>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CurveBlock {
    pub f: Vec<Rat>,
}

#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FormBlock {
    #[serde(default)]
    pub omega: Vec<Elem>,
    #[serde(default)]
    pub nu: Vec<(Elem, Elem)>,
    #[serde(default)]
    pub third_kind: Vec<(PointSpec, PointSpec, Elem)>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PointsBlock {
    pub start: PointSpec,
    pub end: PointSpec,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PeriodBlock {
    pub cycle: usize,
}

/// The away-from-p part of a global height: an explicit value, or
/// sum c Log(n) over rational pairs [c, n].
#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AwayBlock {
    #[serde(default)]
    pub value: Option<Elem>,
    #[serde(default)]
    pub logs: Vec<(Rat, Rat)>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HeightBlock {
    pub p: PointSpec,
    pub r: PointSpec,
    #[serde(default)]
    pub away: Option<AwayBlock>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RefPointSpec {
    pub edge: usize,
    pub x: Elem,
    pub y: Elem,
}

#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Overrides {
    #[serde(default)]
    pub path: Option<Vec<(usize, i8)>>,
    #[serde(default)]
    pub cycles: Option<Vec<Vec<(usize, i8)>>>,
    #[serde(default)]
    pub reference_points: Vec<RefPointSpec>,
    #[serde(default)]
    pub cap: Option<i64>,
    #[serde(default)]
    pub truncation_factor: Option<i64>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Job {
    #[serde(default)]
    pub command: Option<String>,
    pub field: FieldBlock,
    pub curve: CurveBlock,
    #[serde(default)]
    pub precision: Option<i64>,
    #[serde(default)]
    pub form: Option<FormBlock>,
    #[serde(default)]
    pub points: Option<PointsBlock>,
    #[serde(default)]
    pub period: Option<PeriodBlock>,
    #[serde(default)]
    pub height: Option<HeightBlock>,
    #[serde(default)]
    pub overrides: Overrides,
}

/// Reads a job; the format follows the extension (.json, else TOML).
pub fn load(path: &Path) -> Result<Job, SchemaError> {
    let text = std::fs::read_to_string(path).map_err(|e| schema(format!("cannot read {}: {e}", path.display())))?;
    let json = path.extension().is_some_and(|e| e.eq_ignore_ascii_case("json"));
    parse(&text, json)
}

pub fn parse(text: &str, json: bool) -> Result<Job, SchemaError> {
    let job: Job = if json {
        serde_json::from_str(text).map_err(|e| schema(format!("job file: {e}")))?
    } else {
        toml::from_str(text).map_err(|e| schema(format!("job file: {e}")))?
    };
    job.validate()?;
    Ok(job)
}

fn valid_walk(w: &[(usize, i8)]) -> bool {
    w.iter().all(|&(_, s)| s == 1 || s == -1)
}

impl Job {
    fn validate(&self) -> Result<(), SchemaError> {
        if self.field.p < 3 {
            return Err(schema("field.p must be an odd prime"));
        }
        if self.curve.f.len() < 4 {
            return Err(schema("curve.f needs degree >= 3"));
        }
        if let Some(n) = self.precision {
            if n < 1 {
                return Err(schema("precision must be positive"));
            }
        }
        if self.overrides.cap.is_some_and(|c| c < 1) || self.overrides.truncation_factor.is_some_and(|t| t < 1) {
            return Err(schema("overrides.cap and overrides.truncation_factor must be positive"));
        }
        let walks_ok = self.overrides.path.iter().all(|w| valid_walk(w))
            && self.overrides.cycles.iter().flatten().all(|w| valid_walk(w));
        if !walks_ok {
            return Err(schema("edge orientations must be 1 or -1"));
        }
        Ok(())
    }

    /// Checks that the blocks a command needs are present.
    pub fn require(&self, command: &str) -> Result<(), SchemaError> {
        if let Some(c) = &self.command {
            if c != command {
                return Err(schema(format!("job is for command {c:?}, invoked as {command:?}")));
            }
        }
        let missing = |what: &str| Err(schema(format!("command {command} needs a [{what}] block")));
        match command {
            "integrate" if self.form.is_none() => missing("form"),
            "integrate" if self.points.is_none() => missing("points"),
            "period" if self.form.is_none() => missing("form"),
            "period" if self.period.is_none() => missing("period"),
            "height" if self.height.is_none() => missing("height"),
            "integrate" | "period" | "height" if self.precision.is_none() => Err(schema(format!("command {command} needs precision"))),
            _ => Ok(()),
        }
    }

    pub fn field_spec(&self) -> FieldSpec {
        let b = &self.field;
        let mut spec = match &b.modulus {
            Some(m) => {
                let mut s = FieldSpec::qp(b.p);
                s.modulus = m.iter().map(|r| r.0.clone()).collect();
                s.generator = b.generator.clone().unwrap_or_else(|| "a".into());
                s
            }
            None => FieldSpec::qp(b.p),
        };
        spec.log_branch = match &b.log_branch {
            Some(Elem::Rational(q)) => vec![q.clone()],
            Some(Elem::Coeffs(cs)) => cs.clone(),
            None => Vec::new(),
        };
        spec
    }

    pub fn f_rational(&self) -> Vec<BigRational> {
        self.curve.f.iter().map(|r| r.0.clone()).collect()
    }

    pub fn precision(&self) -> i64 {
        self.precision.unwrap_or(8)
    }

    pub fn config(&self) -> Config {
        let mut cfg = Config::new(self.precision());
        cfg.cap = self.overrides.cap;
        if let Some(t) = self.overrides.truncation_factor {
            cfg.truncation_factor = t;
        }
        cfg
    }

    /// The curve over K at the cap the orchestrator will work with.
    pub fn curve(&self) -> volint::Result<HyperellipticCurve> {
        let spec = self.field_spec();
        let probe = FieldCtx::new(&spec, 1)?;
        let cap = self.overrides.cap.unwrap_or_else(|| Config::default_cap(self.precision(), probe.e));
        let field = FieldCtx::new(&spec, cap)?;
        HyperellipticCurve::new(&field, &self.f_rational())
    }

    /// Builds the orchestrator with all overrides applied.
    pub fn vologodsky(&self) -> volint::Result<Vologodsky> {
        let mut v = Vologodsky::new(&self.curve()?, self.config())?;
        if let Some(cycles) = &self.overrides.cycles {
            v.set_cycles(cycles.clone())?;
        }
        for rp in &self.overrides.reference_points {
            let f = v.field().clone();
            v.set_reference_point(rp.edge, rp.x.to_padic(&f), &rp.y.to_padic(&f))?;
        }
        Ok(v)
    }
}

/// Resolves a point spec on the curve.
pub fn point(curve: &HyperellipticCurve, spec: &PointSpec) -> volint::Result<CurvePoint> {
    let bad = |m: String| volint::Error::Invalid(m);
    match spec {
        PointSpec::Infinite(s) => match s.as_str() {
            "inf" => Ok(CurvePoint::Infinity),
            "inf+" => Ok(CurvePoint::InfinityPlus),
            "inf-" => Ok(CurvePoint::InfinityMinus),
            other => Err(bad(format!("unknown point {other:?}"))),
        },
        PointSpec::Affine { x, y, sign } => {
            let f = &curve.field;
            let x = x.to_padic(f);
            let y = match (y, sign) {
                (Some(y), None) => y.to_padic(f),
                (None, Some(s)) if *s == 1 || *s == -1 => {
                    let r = curve.f.eval(&x).sqrt()?;
                    if *s == 1 {
                        r
                    } else {
                        r.neg()
                    }
                }
                _ => return Err(bad("a point needs exactly one of y or sign (1 or -1)".into())),
            };
            curve.point(x, y)
        }
    }
}

pub fn form(curve: &HyperellipticCurve, b: &FormBlock) -> volint::Result<MeromorphicForm> {
    let f = &curve.field;
    let mut form = MeromorphicForm::zero(f);
    form.omega = b.omega.iter().map(|c| c.to_padic(f)).collect();
    form.nu = b.nu.iter().map(|(beta, c)| (beta.to_padic(f), c.to_padic(f))).collect();
    for (p, q, c) in &b.third_kind {
        form.third_kind.push((point(curve, p)?, point(curve, q)?, c.to_padic(f)));
    }
    Ok(form)
}

/// The away-from-p constant of a height job.
pub fn away(field: &Field, a: &AwayBlock) -> volint::Result<PadicElement> {
    let mut acc = match &a.value {
        Some(v) => v.to_padic(field),
        None => field.zero(),
    };
    for (c, n) in &a.logs {
        if n.0.is_zero() {
            return Err(volint::Error::ZeroArgument);
        }
        let log = if n.0.is_one() { field.zero() } else { field.from_rational(&n.0).log()? };
        acc = acc.add(&log.mul_rational(&c.0));
    }
    Ok(acc)
}
