//! Dense polynomials and truncated Laurent series over K.

mod hensel;
mod residue_poly;
mod series;

pub use hensel::{hensel_split, is_squarefree_mod_pi, residue_roots};
pub use series::{antiderivative, inv_sqrt_series, LaurentSeriesK, EXACT};

use crate::padic::{Field, PadicElement};
use num_rational::BigRational;
use std::fmt;

/// Dense polynomial, coefficients low-to-high.
#[derive(Clone)]
pub struct PolyK {
    pub field: Field,
    pub coeffs: Vec<PadicElement>,
}

impl PolyK {
    pub fn new(field: &Field, mut coeffs: Vec<PadicElement>) -> Self {
        if coeffs.is_empty() {
            coeffs.push(field.zero());
        }
        PolyK {
            field: field.clone(),
            coeffs,
        }
    }

    pub fn zero(field: &Field) -> Self {
        Self::new(field, vec![field.zero()])
    }

    pub fn one(field: &Field) -> Self {
        Self::constant(field.one())
    }

    pub fn constant(c: PadicElement) -> Self {
        let field = c.field().clone();
        Self::new(&field, vec![c])
    }

    /// The polynomial x - r.
    pub fn linear(r: &PadicElement) -> Self {
        let field = r.field().clone();
        Self::new(&field, vec![r.neg(), field.one()])
    }

    pub fn from_ints(field: &Field, cs: &[i64]) -> Self {
        Self::new(field, cs.iter().map(|&c| field.from_int(c)).collect())
    }

    pub fn from_rationals(field: &Field, cs: &[BigRational]) -> Self {
        Self::new(field, cs.iter().map(|c| field.from_rational(c)).collect())
    }

    /// Number of stored coefficients minus one.
    pub fn len_degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Degree after dropping leading coefficients indistinguishable from 0.
    pub fn degree(&self) -> usize {
        self.coeffs
            .iter()
            .rposition(|c| !c.is_zero())
            .unwrap_or(0)
    }

    pub fn trimmed(&self) -> Self {
        let d = self.degree();
        Self::new(&self.field, self.coeffs[..=d].to_vec())
    }

    pub fn coeff(&self, i: usize) -> PadicElement {
        self.coeffs.get(i).cloned().unwrap_or_else(|| self.field.zero())
    }

    pub fn leading(&self) -> PadicElement {
        self.coeff(self.degree())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn eval(&self, x: &PadicElement) -> PadicElement {
        let mut acc = self.field.zero();
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(x).add(c);
        }
        acc
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::new(&self.field, (0..n).map(|i| self.coeff(i).add(&other.coeff(i))).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        Self::new(&self.field, self.coeffs.iter().map(|c| c.neg()).collect())
    }

    pub fn scale(&self, s: &PadicElement) -> Self {
        Self::new(&self.field, self.coeffs.iter().map(|c| c.mul(s)).collect())
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = vec![self.field.zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() && a.prec() >= self.field.cap {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].add(&a.mul(b));
            }
        }
        Self::new(&self.field, out)
    }

    pub fn pow(&self, k: usize) -> Self {
        let mut r = Self::one(&self.field);
        for _ in 0..k {
            r = r.mul(self);
        }
        r
    }

    pub fn derivative(&self) -> Self {
        if self.coeffs.len() == 1 {
            return Self::zero(&self.field);
        }
        Self::new(
            &self.field,
            self.coeffs[1..]
                .iter()
                .enumerate()
                .map(|(i, c)| c.mul_int(i as i64 + 1))
                .collect(),
        )
    }

    /// Quotient and remainder by a monic polynomial.
    pub fn divrem_monic(&self, m: &Self) -> (Self, Self) {
        let dm = m.degree();
        let m = m.trimmed();
        let mut r = self.coeffs.clone();
        if r.len() <= dm {
            return (Self::zero(&self.field), self.clone());
        }
        let mut q = vec![self.field.zero(); r.len() - dm];
        for k in (dm..r.len()).rev() {
            let c = r[k].clone();
            q[k - dm] = c.clone();
            for i in 0..=dm {
                r[k - dm + i] = r[k - dm + i].sub(&c.mul(&m.coeffs[i]));
            }
        }
        r.truncate(dm.max(1));
        if dm == 0 {
            r = vec![self.field.zero()];
        }
        (Self::new(&self.field, q), Self::new(&self.field, r))
    }

    /// F(c + scale * x).
    pub fn shift_rescale(&self, c: &PadicElement, scale: &PadicElement) -> Self {
        let lin = Self::new(&self.field, vec![c.clone(), scale.clone()]);
        let mut acc = Self::zero(&self.field);
        for coef in self.coeffs.iter().rev() {
            acc = acc.mul(&lin).add(&Self::constant(coef.clone()));
        }
        acc
    }

    /// Divide every coefficient by a scalar.
    pub fn div_scalar(&self, s: &PadicElement) -> crate::Result<Self> {
        let inv = s.inv()?;
        Ok(self.scale(&inv))
    }

    /// Minimum valuation of the coefficients (None for the zero polynomial).
    pub fn content_valuation(&self) -> Option<i64> {
        self.coeffs.iter().filter_map(|c| c.valuation()).min()
    }

    pub fn is_monic(&self) -> bool {
        self.leading().sub(&self.field.one()).is_zero()
    }
}

impl fmt::Debug for PolyK {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| format!("({c})*x^{i}"))
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}
