use super::PolyK;
use crate::error::{Error, Result};
use crate::padic::{Field, PadicElement};
use num_rational::BigRational;

/// Truncated Laurent series `sum_{k >= low} c_k z^k`; coefficients of
/// exponent `>= order` are unknown (`order == i64::MAX` means the series is
/// an exact Laurent polynomial).
#[derive(Clone, Debug)]
pub struct LaurentSeriesK {
    pub field: Field,
    pub low: i64,
    pub coeffs: Vec<PadicElement>,
    pub order: i64,
}

pub const EXACT: i64 = i64::MAX;

impl LaurentSeriesK {
    pub fn new(field: &Field, low: i64, coeffs: Vec<PadicElement>, order: i64) -> Self {
        let mut s = LaurentSeriesK {
            field: field.clone(),
            low,
            coeffs,
            order,
        };
        s.clip();
        s
    }

    pub fn zero(field: &Field, order: i64) -> Self {
        Self::new(field, 0, Vec::new(), order)
    }

    pub fn one(field: &Field) -> Self {
        Self::new(field, 0, vec![field.one()], EXACT)
    }

    /// Exact Laurent polynomial from a polynomial in z.
    pub fn from_poly(p: &PolyK) -> Self {
        Self::new(&p.field, 0, p.coeffs.clone(), EXACT)
    }

    /// z^k.
    pub fn monomial(field: &Field, k: i64, c: PadicElement) -> Self {
        Self::new(field, k, vec![c], EXACT)
    }

    fn clip(&mut self) {
        if self.order != EXACT {
            let keep = (self.order - self.low).max(0) as usize;
            self.coeffs.truncate(keep);
        }
    }

    /// Highest exponent stored plus one.
    pub fn end(&self) -> i64 {
        self.low + self.coeffs.len() as i64
    }

    pub fn coeff(&self, k: i64) -> PadicElement {
        if k < self.low || k >= self.end() {
            return self.field.zero();
        }
        self.coeffs[(k - self.low) as usize].clone()
    }

    pub fn truncate(&self, order: i64) -> Self {
        Self::new(&self.field, self.low, self.coeffs.clone(), self.order.min(order))
    }

    /// Terms with exponent in [lo, hi).
    pub fn window(&self, lo: i64, hi: i64) -> Self {
        let lo = lo.max(self.low);
        let hi = hi.min(self.end());
        if hi <= lo {
            return Self::new(&self.field, lo, Vec::new(), EXACT);
        }
        Self::new(&self.field, lo, (lo..hi).map(|k| self.coeff(k)).collect(), EXACT)
    }

    pub fn add(&self, other: &Self) -> Self {
        let low = self.low.min(other.low);
        let order = self.order.min(other.order);
        let hi = self.end().max(other.end());
        let hi = if order == EXACT { hi } else { hi.min(order) };
        let coeffs = (low..hi.max(low)).map(|k| self.coeff(k).add(&other.coeff(k))).collect();
        Self::new(&self.field, low, coeffs, order)
    }

    pub fn neg(&self) -> Self {
        Self::new(&self.field, self.low, self.coeffs.iter().map(|c| c.neg()).collect(), self.order)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scale(&self, s: &PadicElement) -> Self {
        Self::new(&self.field, self.low, self.coeffs.iter().map(|c| c.mul(s)).collect(), self.order)
    }

    /// Multiplication by z^k.
    pub fn shift(&self, k: i64) -> Self {
        let order = if self.order == EXACT { EXACT } else { self.order + k };
        Self::new(&self.field, self.low + k, self.coeffs.clone(), order)
    }

    pub fn mul(&self, other: &Self) -> Self {
        let order = match (self.order, other.order) {
            (EXACT, EXACT) => EXACT,
            (EXACT, o) => self.low + o,
            (o, EXACT) => other.low + o,
            (a, b) => (self.low + b).min(other.low + a),
        };
        let low = self.low + other.low;
        let hi = self.end() + other.end() - 1;
        let hi = if order == EXACT { hi } else { hi.min(order) };
        let mut out = vec![self.field.zero(); (hi - low).max(0) as usize];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                let k = i + j;
                if k >= out.len() {
                    break;
                }
                out[k] = out[k].add(&a.mul(b));
            }
        }
        Self::new(&self.field, low, out, order)
    }

    /// Inverse of a power series with invertible constant term.
    pub fn inverse(&self, order: i64) -> Result<Self> {
        if self.low != 0 {
            return Err(Error::BadConstantTerm);
        }
        let c0 = self.coeff(0).inv().map_err(|_| Error::BadConstantTerm)?;
        let mut r = Self::new(&self.field, 0, vec![c0], EXACT);
        let two = Self::monomial(&self.field, 0, self.field.from_int(2));
        let mut n = 1i64;
        while n < order {
            n = (2 * n).min(order);
            let u = self.truncate(n);
            r = r.mul(&two.sub(&u.mul(&r))).truncate(n).as_exact();
        }
        Ok(r.truncate(order.min(self.order)))
    }

    pub fn derivative(&self) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| c.mul_int(self.low + i as i64))
            .collect();
        let order = if self.order == EXACT { EXACT } else { self.order - 1 };
        Self::new(&self.field, self.low - 1, coeffs, order)
    }

    /// Finite evaluation of the stored terms at z.
    pub fn eval(&self, z: &PadicElement) -> Result<PadicElement> {
        let mut acc = self.field.zero();
        let mut pw = z.pow_i64(self.low)?;
        for c in &self.coeffs {
            acc = acc.add(&c.mul(&pw));
            pw = pw.mul(z);
        }
        Ok(acc)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    /// Treat the stored terms as an exact Laurent polynomial.
    pub fn as_exact(&self) -> Self {
        Self::new(&self.field, self.low, self.coeffs.clone(), EXACT)
    }
}

/// s with s^2 u = 1 for a power series u whose constant term is a 1-unit
/// (principal branch, s(0) = 1 mod pi), by Newton iteration
/// s <- s (3 - u s^2) / 2.
pub fn inv_sqrt_series(u: &LaurentSeriesK, order: i64) -> Result<LaurentSeriesK> {
    let field = &u.field;
    if u.low != 0 || !u.coeff(0).is_one_unit() {
        return Err(Error::BadConstantTerm);
    }
    let s0 = u.coeff(0).sqrt_one_unit()?.inv()?;
    let mut s = LaurentSeriesK::new(field, 0, vec![s0], EXACT);
    let three = LaurentSeriesK::monomial(field, 0, field.from_int(3));
    let half = field.from_ratio(1, 2);
    let mut n = 1i64;
    let order = order.min(u.order);
    while n < order {
        n = (2 * n).min(order);
        let ut = u.truncate(n);
        let corr = three.sub(&ut.mul(&s.mul(&s)).truncate(n));
        s = s.mul(&corr).truncate(n).scale(&half).as_exact();
    }
    Ok(s.truncate(order))
}

/// Termwise antiderivative; the coefficient of z^-1 is returned separately
/// as the logarithmic coefficient.
pub fn antiderivative(term: &LaurentSeriesK) -> (LaurentSeriesK, PadicElement) {
    let field = &term.field;
    let mut log_coeff = field.zero();
    let coeffs = term
        .coeffs
        .iter()
        .enumerate()
        .map(|(i, c)| {
            let k = term.low + i as i64;
            if k == -1 {
                log_coeff = c.clone();
                field.zero()
            } else {
                c.mul_rational(&BigRational::new(1.into(), (k + 1).into()))
            }
        })
        .collect();
    let order = if term.order == EXACT { EXACT } else { term.order + 1 };
    (LaurentSeriesK::new(field, term.low + 1, coeffs, order), log_coeff)
}
