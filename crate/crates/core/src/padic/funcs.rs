use super::element::PadicElement;
use super::residue::Fq;
use super::vp_int;
use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_rational::BigRational;

impl PadicElement {
    /// Square root; among the two roots the one whose leading digit is the
    /// smaller residue root is returned.
    pub fn sqrt(&self) -> Result<Self> {
        let ctx = self.field().clone();
        let Some(j) = self.valuation() else {
            return Ok(ctx.zero().truncate(self.prec().div_euclid(2)));
        };
        if j % 2 != 0 {
            return Err(Error::OddValuation);
        }
        let u = self.shift_pi(-j);
        let r = ctx.residue.sqrt(&u.residue()).ok_or(Error::NonSquareResidue)?;
        Ok(u.sqrt_unit_from(&r).shift_pi(j / 2))
    }

    /// Square root of a unit congruent to 1 mod pi, normalized to be
    /// congruent to 1 mod pi.
    pub fn sqrt_one_unit(&self) -> Result<Self> {
        if !self.is_one_unit() || self.is_zero() {
            return Err(Error::BadConstantTerm);
        }
        let one = self.field().residue.one();
        Ok(self.sqrt_unit_from(&one))
    }

    /// Square root of a unit with prescribed residue of the root.
    pub fn sqrt_unit_from(&self, r: &Fq) -> Self {
        let ctx = self.field().clone();
        let half = ctx.from_ratio(1, 2);
        let mut s = PadicElement::lift_residue(&ctx, r);
        for _ in 0..200 {
            if s.square().sub(self).is_zero() {
                break;
            }
            let q = self.div(&s).expect("unit");
            s = s.add(&q).mul(&half);
        }
        s.truncate(self.prec())
    }

    /// Iwasawa-style logarithm, with Log(p) given by the field's branch.
    pub fn log(&self) -> Result<Self> {
        let ctx = self.field().clone();
        let j = self.valuation().ok_or(Error::ZeroArgument)?;
        let e = ctx.e;
        let mut result = unit_log(&self.shift_pi(-j));
        if j != 0 {
            // Log(pi) = (Log(p) + Log(pi^e / p)) / e
            let big = result.field().clone();
            let pi_e = big.one().shift_pi(e).shift_p(-1);
            let log_pi = big.log_p().add(&unit_log(&pi_e.in_field(&ctx)).in_field(&big));
            result = result.add(&log_pi.mul_rational(&BigRational::new(j.into(), e.into())));
        }
        Ok(result.in_field(&ctx).truncate(self.prec() - j))
    }
}

/// Log of a unit, returned at a raised cap: u^(e(q-1)) is a 1-unit, and
/// p-th powers push it into the disc of convergence of the Mercator series.
fn unit_log(u: &PadicElement) -> PadicElement {
    let ctx = u.field().clone();
    let e = ctx.e;
    let q = ctx.q() as i64;
    let m = e * (q - 1);
    let vm = vp_int(&BigInt::from(m), &BigInt::from(ctx.p)).unwrap();
    let extra = e * (e + 3 + vm) + 8;
    let big = ctx.with_cap(ctx.cap + extra);
    let mut y = u.in_field(&big).as_exact().pow(m as u64);
    let mut s = 0i64;
    while y.sub(&big.one()).valuation_or_prec() < e + 1 {
        y = y.pow(ctx.p);
        s += 1;
    }
    let z = y.sub(&big.one());
    mercator(&z).shift_p(-s).mul_rational(&BigRational::new(1.into(), m.into()))
}

/// log(1 + z) = sum (-1)^(k+1) z^k / k for v(z) > 0, summed until the terms
/// vanish at the working precision.
fn mercator(z: &PadicElement) -> PadicElement {
    let ctx = z.field().clone();
    let mut sum = ctx.zero();
    let Some(v) = z.valuation() else {
        return sum;
    };
    let mut zk = z.clone();
    let mut k: i64 = 1;
    let mut log_k = 0i64;
    let mut next_power = ctx.p as i64;
    while k * v - ctx.e * log_k < ctx.cap {
        let term = zk.mul_rational(&BigRational::new(1.into(), k.into()));
        sum = if k % 2 == 1 { sum.add(&term) } else { sum.sub(&term) };
        zk = zk.mul(z);
        k += 1;
        if k == next_power {
            log_k += 1;
            next_power *= ctx.p as i64;
        }
    }
    sum
}
