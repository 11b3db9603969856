use super::residue::Fq;
use super::{ceil_div, vp_int, Field, FieldCtx, FieldKind};
use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

/// An element `p^s * sum c_i t^i + O(pi^prec)` of K.
#[derive(Clone)]
pub struct PadicElement {
    pub(crate) ctx: Field,
    pub(crate) s: i64,
    pub(crate) c: Vec<BigInt>,
    pub(crate) prec: i64,
}

impl PadicElement {
    pub(crate) fn from_parts(ctx: &Field, s: i64, c: Vec<BigInt>, prec: i64) -> Self {
        let mut x = PadicElement {
            ctx: ctx.clone(),
            s,
            c,
            prec: prec.min(ctx.cap),
        };
        x.normalize();
        x
    }

    pub(crate) fn zero_with_prec(ctx: &Field, prec: i64) -> Self {
        Self::from_parts(ctx, 0, vec![BigInt::zero(); ctx.n], prec)
    }

    fn normalize(&mut self) {
        let ctx = &self.ctx;
        let e = ctx.e;
        let mut all_zero = true;
        for i in 0..ctx.n {
            let li = ceil_div(self.prec - ctx.basis_valuation(i), e) - self.s;
            if li <= 0 {
                self.c[i] = BigInt::zero();
            } else {
                let m = ctx.pb.pow(li as u32);
                self.c[i] = self.c[i].mod_floor(&m);
                if !self.c[i].is_zero() {
                    all_zero = false;
                }
            }
        }
        if all_zero {
            self.s = ceil_div(self.prec, e);
            return;
        }
        let shift = self
            .c
            .iter()
            .filter_map(|c| vp_int(c, &ctx.pb))
            .min()
            .unwrap();
        if shift > 0 {
            let d = ctx.pb.pow(shift as u32);
            for c in self.c.iter_mut() {
                *c = &*c / &d;
            }
            self.s += shift;
        }
    }

    pub fn field(&self) -> &Field {
        &self.ctx
    }

    /// Absolute precision in powers of pi.
    pub fn prec(&self) -> i64 {
        self.prec
    }

    /// Valuation in powers of pi, `None` for an element known to be zero.
    pub fn valuation(&self) -> Option<i64> {
        let ctx = &self.ctx;
        self.c
            .iter()
            .enumerate()
            .filter_map(|(i, c)| vp_int(c, &ctx.pb).map(|v| ctx.e * (self.s + v) + ctx.basis_valuation(i)))
            .min()
    }

    /// Valuation normalized so that v(p) = 1.
    pub fn valuation_rational(&self) -> Option<BigRational> {
        self.valuation()
            .map(|v| BigRational::new(v.into(), self.ctx.e.into()))
    }

    /// Valuation, or the precision when the element is indistinguishable
    /// from zero.
    pub fn valuation_or_prec(&self) -> i64 {
        self.valuation().unwrap_or(self.prec)
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(Zero::is_zero)
    }

    pub fn is_unit(&self) -> bool {
        self.valuation() == Some(0)
    }

    /// Lower the precision to at most `prec`.
    pub fn truncate(&self, prec: i64) -> Self {
        Self::from_parts(&self.ctx, self.s, self.c.clone(), prec.min(self.prec))
    }

    /// Treat the stored digits as exact (precision raised to the cap).
    pub fn as_exact(&self) -> Self {
        Self::from_parts(&self.ctx, self.s, self.c.clone(), self.ctx.cap)
    }

    /// Move the element into another context of the same field.
    pub fn in_field(&self, ctx: &Field) -> Self {
        Self::from_parts(ctx, self.s, self.c.clone(), self.prec)
    }

    /// Multiplication by p^k.
    pub fn shift_p(&self, k: i64) -> Self {
        Self::from_parts(&self.ctx, self.s + k, self.c.clone(), self.prec + k * self.ctx.e)
    }

    /// Coefficients q_i with self = sum q_i t^i, exactly as stored.
    pub fn rational_coeffs(&self) -> Vec<BigRational> {
        let p = BigRational::from_integer(self.ctx.pb.clone());
        let scale = p.pow(self.s as i32);
        self.c
            .iter()
            .map(|c| BigRational::from_integer(c.clone()) * &scale)
            .collect()
    }

    /// Representative in [0, p^prec) for integral elements of Q_p.
    pub fn to_bigint(&self) -> Option<BigInt> {
        if self.ctx.n != 1 || self.s < 0 {
            return None;
        }
        Some(&self.c[0] * self.ctx.pb.pow(self.s as u32))
    }

    /// Residue class in F_q of an integral element.
    pub fn residue(&self) -> Fq {
        let ctx = &self.ctx;
        let rf = &ctx.residue;
        if self.valuation().map_or(true, |v| v > 0) {
            return rf.zero();
        }
        debug_assert!(self.s == 0);
        let p = &ctx.pb;
        match ctx.kind {
            FieldKind::Unramified => self
                .c
                .iter()
                .map(|c| c.mod_floor(p).to_u64().unwrap())
                .collect(),
            _ => rf.from_u64(self.c[0].mod_floor(p).to_u64().unwrap()),
        }
    }

    /// Teichmuller-free lift of a residue: the element with the digits of
    /// `r` as coefficients.
    pub fn lift_residue(ctx: &Field, r: &Fq) -> Self {
        let mut c = vec![BigInt::zero(); ctx.n];
        match ctx.kind {
            FieldKind::Unramified => {
                for (i, &d) in r.iter().enumerate() {
                    c[i] = BigInt::from(d);
                }
            }
            _ => c[0] = BigInt::from(r[0]),
        }
        Self::from_parts(ctx, 0, c, ctx.cap)
    }

    fn assert_same_field(&self, other: &Self) {
        debug_assert!(
            Arc::ptr_eq(&self.ctx, &other.ctx) || self.ctx.modulus == other.ctx.modulus,
            "elements of different fields"
        );
    }

    pub fn add(&self, other: &Self) -> Self {
        self.assert_same_field(other);
        let s = self.s.min(other.s);
        let pa = self.ctx.pb.pow((self.s - s) as u32);
        let pb = self.ctx.pb.pow((other.s - s) as u32);
        let c = self
            .c
            .iter()
            .zip(&other.c)
            .map(|(a, b)| a * &pa + b * &pb)
            .collect();
        Self::from_parts(&self.ctx, s, c, self.prec.min(other.prec))
    }

    pub fn neg(&self) -> Self {
        let c = self.c.iter().map(|a| -a).collect();
        Self::from_parts(&self.ctx, self.s, c, self.prec)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.assert_same_field(other);
        let ctx = &self.ctx;
        let prec = (self.prec + other.valuation_or_prec()).min(other.prec + self.valuation_or_prec());
        if self.is_zero() || other.is_zero() {
            return Self::zero_with_prec(ctx, prec);
        }
        let (s, c) = raw_product(ctx, self.s, &self.c, other);
        Self::from_parts(ctx, s, c, prec)
    }

    pub fn mul_int(&self, k: i64) -> Self {
        self.mul(&self.ctx.from_int(k))
    }

    pub fn mul_rational(&self, q: &BigRational) -> Self {
        self.mul(&self.ctx.from_rational(q))
    }

    pub fn square(&self) -> Self {
        self.mul(self)
    }

    pub fn pow(&self, mut k: u64) -> Self {
        let mut result = self.ctx.one();
        let mut base = self.clone();
        while k > 0 {
            if k & 1 == 1 {
                result = result.mul(&base);
            }
            k >>= 1;
            if k > 0 {
                base = base.square();
            }
        }
        result
    }

    pub fn pow_i64(&self, k: i64) -> Result<Self> {
        if k >= 0 {
            Ok(self.pow(k as u64))
        } else {
            Ok(self.inv()?.pow(k.unsigned_abs()))
        }
    }

    /// Inverse of a unit by Newton iteration from the residue inverse.
    pub(crate) fn unit_inverse(&self) -> Self {
        let ctx = &self.ctx;
        let r = ctx.residue.inv(&self.residue()).expect("unit");
        let mut x = Self::lift_residue(ctx, &r);
        let two = ctx.from_int(2);
        for _ in 0..200 {
            let err = ctx.one().sub(&self.mul(&x));
            if err.is_zero() {
                break;
            }
            x = x.mul(&two.sub(&self.mul(&x)));
        }
        Self::from_parts(ctx, x.s, x.c, self.prec)
    }

    pub fn inv(&self) -> Result<Self> {
        let ctx = &self.ctx;
        let j = self.valuation().ok_or(Error::DivisionByZero(self.prec))?;
        let inv = self.shift_pi(-j).unit_inverse().shift_pi(-j);
        Ok(Self::from_parts(ctx, inv.s, inv.c, self.prec - 2 * j))
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        Ok(self.mul(&other.inv()?))
    }

    /// Equality up to O(pi^n) and the precision of both operands.
    pub fn eq_to(&self, other: &Self, n: i64) -> bool {
        self.sub(other).valuation().map_or(true, |v| v >= n)
    }

    /// Equality of stored digits and precision.
    pub fn same_as(&self, other: &Self) -> bool {
        self.prec == other.prec && self.sub(other).is_zero()
    }

    /// Coefficients as exact rationals together with the precision, in a
    /// form stable under serialization.
    pub fn parts(&self) -> (Vec<BigRational>, i64) {
        (self.rational_coeffs(), self.prec)
    }

    pub fn from_rational_parts(ctx: &Field, coeffs: &[BigRational], prec: i64) -> Self {
        ctx.from_rational_coeffs(coeffs).truncate(prec)
    }

    pub fn abs_ord(&self) -> i64 {
        self.valuation_or_prec()
    }

    pub fn is_integral(&self) -> bool {
        self.valuation().map_or(true, |v| v >= 0)
    }

    pub fn is_one_unit(&self) -> bool {
        self.sub(&self.ctx.one()).valuation().map_or(true, |v| v >= 1)
    }

    pub fn ctx(&self) -> &FieldCtx {
        &self.ctx
    }

    /// Multiplication by pi^k.
    pub fn shift_pi(&self, k: i64) -> Self {
        let ctx = &self.ctx;
        if ctx.kind != FieldKind::Eisenstein {
            return self.shift_p(k);
        }
        // pi^k = p^a pi^b with 0 <= b < e, multiplied exactly
        let (a, b) = (k.div_euclid(ctx.e), k.rem_euclid(ctx.e));
        let pi = ctx.uniformizer();
        let (mut s, mut c) = (self.s + a, self.c.clone());
        for _ in 0..b {
            let (s1, c1) = raw_product(ctx, s, &c, &pi);
            s = s1;
            c = c1;
        }
        Self::from_parts(ctx, s, c, self.prec + k)
    }
}

/// Exact product of p^s sum c_i t^i with an element, before truncation.
fn raw_product(ctx: &FieldCtx, s: i64, c: &[BigInt], other: &PadicElement) -> (i64, Vec<BigInt>) {
    let n = ctx.n;
    let mut prod = vec![BigInt::zero(); 2 * n - 1];
    for (i, a) in c.iter().enumerate() {
        if a.is_zero() {
            continue;
        }
        for (j, b) in other.c.iter().enumerate() {
            if !b.is_zero() {
                prod[i + j] += a * b;
            }
        }
    }
    (s + other.s, ctx.reduce_mod_m(prod))
}

impl fmt::Debug for PadicElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl PartialEq for PadicElement {
    fn eq(&self, other: &Self) -> bool {
        self.same_as(other)
    }
}

macro_rules! binop {
    ($tr:ident, $m:ident) => {
        impl $tr<&PadicElement> for &PadicElement {
            type Output = PadicElement;
            fn $m(self, rhs: &PadicElement) -> PadicElement {
                PadicElement::$m(self, rhs)
            }
        }
    };
}
binop!(Add, add);
binop!(Sub, sub);
binop!(Mul, mul);

impl Neg for &PadicElement {
    type Output = PadicElement;
    fn neg(self) -> PadicElement {
        PadicElement::neg(self)
    }
}
