//! Capped absolute precision arithmetic in Q_p and in a finite extension
//! K = Q_p[t]/(m(t)).
//!
//! An element is stored as `p^s * sum c_i t^i` with integer coefficients and
//! an absolute precision `prec` counted in powers of the uniformizer pi.
//! Coefficients are reduced so that only digits below `pi^prec` are kept.
//! Supported fields: Q_p (m of degree 1), unramified extensions (m
//! irreducible mod p, pi = p) and totally ramified extensions given by an
//! Eisenstein modulus (pi = t).

mod display;
mod element;
mod funcs;
pub mod residue;

pub use element::PadicElement;

use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use residue::ResidueField;
use std::sync::{Arc, OnceLock};

/// User-facing description of the field K.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldSpec {
    /// Odd prime p.
    pub p: u64,
    /// Monic defining polynomial m(t), coefficients low-to-high. `[0, 1]`
    /// (the polynomial t) gives K = Q_p.
    pub modulus: Vec<BigRational>,
    /// Name of the generator used when printing, e.g. "a".
    pub generator: String,
    /// Expected ramification index; checked against m when given.
    pub ramification: Option<u32>,
    /// Expected residue degree; checked against m when given.
    pub residue_degree: Option<u32>,
    /// Value of Log(p), as coefficients in the power basis of t.
    pub log_branch: Vec<BigRational>,
}

impl FieldSpec {
    pub fn qp(p: u64) -> Self {
        FieldSpec {
            p,
            modulus: vec![BigRational::zero(), BigRational::one()],
            generator: p.to_string(),
            ramification: None,
            residue_degree: None,
            log_branch: Vec::new(),
        }
    }

    /// K = Q_p[t]/(m(t)) printed with generator `name`.
    pub fn extension(p: u64, modulus: &[i64], name: &str) -> Self {
        FieldSpec {
            p,
            modulus: modulus.iter().map(|&c| BigRational::from_integer(c.into())).collect(),
            generator: name.to_string(),
            ramification: None,
            residue_degree: None,
            log_branch: Vec::new(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FieldKind {
    Rational,
    Unramified,
    Eisenstein,
}

/// Shared read-only context of a field together with the precision cap of
/// the current computation.
#[derive(Debug)]
pub struct FieldCtx {
    pub p: u64,
    pub(crate) pb: BigInt,
    pub n: usize,
    pub e: i64,
    pub f: u32,
    pub kind: FieldKind,
    /// Monic integral modulus, low-to-high, length n + 1.
    pub(crate) modulus: Vec<BigInt>,
    /// Absolute precision cap in powers of pi.
    pub cap: i64,
    pub residue: ResidueField,
    pub generator: String,
    pub(crate) log_branch: Vec<BigRational>,
    log_p: OnceLock<PadicElement>,
}

pub type Field = Arc<FieldCtx>;

fn rational_to_int(q: &BigRational) -> Option<BigInt> {
    if q.denom().is_one() {
        Some(q.numer().clone())
    } else {
        None
    }
}

pub(crate) fn vp_int(x: &BigInt, p: &BigInt) -> Option<i64> {
    if x.is_zero() {
        return None;
    }
    let mut v = 0;
    let mut y = x.clone();
    loop {
        let (q, r) = y.div_rem(p);
        if !r.is_zero() {
            return Some(v);
        }
        y = q;
        v += 1;
    }
}

impl FieldCtx {
    /// Validates `spec` and builds a context with absolute precision cap
    /// `cap` (in powers of the uniformizer).
    pub fn new(spec: &FieldSpec, cap: i64) -> Result<Field> {
        let p = spec.p;
        if p == 2 || !residue::is_prime(p) {
            return Err(Error::InvalidField(format!("p = {p} must be an odd prime")));
        }
        if spec.modulus.len() < 2 {
            return Err(Error::InvalidField("modulus must have degree >= 1".into()));
        }
        if !spec.modulus.last().unwrap().is_one() {
            return Err(Error::InvalidField("modulus must be monic".into()));
        }
        let modulus: Vec<BigInt> = spec
            .modulus
            .iter()
            .map(rational_to_int)
            .collect::<Option<_>>()
            .ok_or_else(|| Error::InvalidField("modulus must have integral coefficients".into()))?;
        let n = modulus.len() - 1;
        let pb = BigInt::from(p);
        let reduced: Vec<u64> = modulus
            .iter()
            .map(|c| c.mod_floor(&pb).to_u64().unwrap())
            .collect();

        let eisenstein = n > 1
            && modulus[..n].iter().all(|c| (c % &pb).is_zero())
            && vp_int(&modulus[0], &pb) == Some(1);
        let (kind, e, f, residue) = if n == 1 {
            if !modulus[0].is_zero() {
                return Err(Error::InvalidField("for K = Q_p use the modulus t".into()));
            }
            (FieldKind::Rational, 1, 1, ResidueField::prime_field(p))
        } else if eisenstein {
            (FieldKind::Eisenstein, n as i64, 1, ResidueField::prime_field(p))
        } else {
            let rf = ResidueField {
                p,
                modulus: reduced,
            };
            if !rf.modulus_is_irreducible() {
                return Err(Error::InvalidField(
                    "modulus must be Eisenstein or irreducible mod p (mixed extensions unsupported)"
                        .into(),
                ));
            }
            (FieldKind::Unramified, 1, n as u32, rf)
        };
        if let Some(er) = spec.ramification {
            if er as i64 != e {
                return Err(Error::InvalidField(format!(
                    "ramification index {er} does not match modulus (e = {e})"
                )));
            }
        }
        if let Some(fr) = spec.residue_degree {
            if fr != f {
                return Err(Error::InvalidField(format!(
                    "residue degree {fr} does not match modulus (f = {f})"
                )));
            }
        }
        if spec.log_branch.len() > n {
            return Err(Error::InvalidField("log branch has too many coefficients".into()));
        }
        let ctx = Arc::new(FieldCtx {
            p,
            pb,
            n,
            e,
            f,
            kind,
            modulus,
            cap,
            residue,
            generator: spec.generator.clone(),
            log_branch: spec.log_branch.clone(),
            log_p: OnceLock::new(),
        });
        Ok(ctx)
    }

    /// Same field with a different precision cap.
    pub fn with_cap(self: &Arc<Self>, cap: i64) -> Field {
        Arc::new(FieldCtx {
            p: self.p,
            pb: self.pb.clone(),
            n: self.n,
            e: self.e,
            f: self.f,
            kind: self.kind,
            modulus: self.modulus.clone(),
            cap,
            residue: self.residue.clone(),
            generator: self.generator.clone(),
            log_branch: self.log_branch.clone(),
            log_p: OnceLock::new(),
        })
    }

    pub fn spec(&self) -> FieldSpec {
        FieldSpec {
            p: self.p,
            modulus: self.modulus.iter().map(|c| BigRational::from_integer(c.clone())).collect(),
            generator: self.generator.clone(),
            ramification: Some(self.e as u32),
            residue_degree: Some(self.f),
            log_branch: self.log_branch.clone(),
        }
    }

    /// q = p^f, the size of the residue field.
    pub fn q(&self) -> u64 {
        self.p.pow(self.f)
    }

    /// Whether the t^i basis vector has positive valuation i/e.
    pub(crate) fn basis_valuation(&self, i: usize) -> i64 {
        match self.kind {
            FieldKind::Eisenstein => i as i64,
            _ => 0,
        }
    }

    pub fn zero(self: &Arc<Self>) -> PadicElement {
        PadicElement::zero_with_prec(self, self.cap)
    }

    pub fn one(self: &Arc<Self>) -> PadicElement {
        self.from_int(1)
    }

    pub fn from_int(self: &Arc<Self>, c: i64) -> PadicElement {
        self.from_bigint(&BigInt::from(c))
    }

    pub fn from_bigint(self: &Arc<Self>, c: &BigInt) -> PadicElement {
        let mut coeffs = vec![BigInt::zero(); self.n];
        coeffs[0] = c.clone();
        PadicElement::from_parts(self, 0, coeffs, self.cap)
    }

    pub fn from_rational(self: &Arc<Self>, q: &BigRational) -> PadicElement {
        self.from_rational_coeffs(std::slice::from_ref(q))
    }

    pub fn from_ratio(self: &Arc<Self>, num: i64, den: i64) -> PadicElement {
        self.from_rational(&BigRational::new(num.into(), den.into()))
    }

    /// The element sum q_i t^i.
    pub fn from_rational_coeffs(self: &Arc<Self>, qs: &[BigRational]) -> PadicElement {
        assert!(qs.len() <= self.n, "too many coefficients for the field degree");
        let mut shift = 0i64;
        for q in qs {
            if q.is_zero() {
                continue;
            }
            let vd = vp_int(q.denom(), &self.pb).unwrap();
            shift = shift.min(-vd);
        }
        // value = p^shift * sum c_i t^i with c_i = q_i * p^-shift integral in Z_p
        let span = (ceil_div(self.cap, self.e) - shift).max(1) as u32 + 1;
        let modulus = self.pb.pow(span);
        let mut coeffs = vec![BigInt::zero(); self.n];
        for (i, q) in qs.iter().enumerate() {
            if q.is_zero() {
                continue;
            }
            let scaled = q * BigRational::from_integer(self.pb.pow((-shift) as u32));
            let num = scaled.numer().mod_floor(&modulus);
            let den = scaled.denom().mod_floor(&modulus);
            let inv = mod_inverse(&den, &modulus).expect("denominator is a p-adic unit");
            coeffs[i] = (num * inv).mod_floor(&modulus);
        }
        PadicElement::from_parts(self, shift, coeffs, self.cap)
    }

    /// The generator t of K over Q_p.
    pub fn gen(self: &Arc<Self>) -> PadicElement {
        if self.n == 1 {
            // t is 0 in Q_p = Q_p[t]/(t); the natural "generator" is p.
            return self.from_int(self.p as i64);
        }
        let mut coeffs = vec![BigInt::zero(); self.n];
        coeffs[1] = BigInt::one();
        PadicElement::from_parts(self, 0, coeffs, self.cap)
    }

    /// The fixed uniformizer: t for Eisenstein moduli, p otherwise.
    pub fn uniformizer(self: &Arc<Self>) -> PadicElement {
        match self.kind {
            FieldKind::Eisenstein => self.gen(),
            _ => self.from_int(self.p as i64),
        }
    }

    /// Log(p) for the configured branch.
    pub fn log_p(self: &Arc<Self>) -> PadicElement {
        self.log_p
            .get_or_init(|| self.from_rational_coeffs(&self.log_branch))
            .clone()
    }

    /// Reduction of a polynomial-in-t coefficient vector modulo m(t).
    pub(crate) fn reduce_mod_m(&self, mut prod: Vec<BigInt>) -> Vec<BigInt> {
        let n = self.n;
        if self.kind == FieldKind::Rational {
            // Q_p: t = 0 representation, keep constant term only
            prod.truncate(1);
            prod.resize(1, BigInt::zero());
            return prod;
        }
        for k in (n..prod.len()).rev() {
            let c = std::mem::take(&mut prod[k]);
            if c.is_zero() {
                continue;
            }
            for i in 0..n {
                if !self.modulus[i].is_zero() {
                    prod[k - n + i] -= &c * &self.modulus[i];
                }
            }
        }
        prod.truncate(n);
        prod.resize(n, BigInt::zero());
        prod
    }
}

pub(crate) fn ceil_div(a: i64, b: i64) -> i64 {
    -((-a).div_euclid(b))
}

pub(crate) fn mod_inverse(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    let g = a.extended_gcd(m);
    if !g.gcd.abs().is_one() {
        return None;
    }
    Some(g.x.mod_floor(m))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_even_prime_and_bad_moduli() {
        assert!(FieldCtx::new(&FieldSpec::qp(2), 10).is_err());
        assert!(FieldCtx::new(&FieldSpec::qp(9), 10).is_err());
        // t^2 - 1 is reducible mod 5 and not Eisenstein
        assert!(FieldCtx::new(&FieldSpec::extension(5, &[-1, 0, 1], "a"), 10).is_err());
        // t^2 - 25 is not Eisenstein and reduces to t^2
        assert!(FieldCtx::new(&FieldSpec::extension(5, &[-25, 0, 1], "a"), 10).is_err());
    }

    #[test]
    fn classifies_fields() {
        let k = FieldCtx::new(&FieldSpec::extension(5, &[-5, 0, 0, 0, 1], "a"), 32).unwrap();
        assert_eq!((k.kind, k.e, k.f), (FieldKind::Eisenstein, 4, 1));
        let k = FieldCtx::new(&FieldSpec::extension(7, &[1, 0, 1], "b"), 8).unwrap();
        assert_eq!((k.kind, k.e, k.f), (FieldKind::Unramified, 1, 2));
        let mut spec = FieldSpec::extension(5, &[-5, 0, 0, 0, 1], "a");
        spec.ramification = Some(2);
        assert!(FieldCtx::new(&spec, 8).is_err());
    }
}
