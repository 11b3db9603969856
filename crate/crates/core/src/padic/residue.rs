//! The residue field F_q = F_p[t]/(m mod p), used for unit inverses, square
//! roots and digit extraction.

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};

/// Finite field of `p^degree` elements; elements are coefficient vectors of
/// length `degree` in the basis 1, t, ..., t^(degree-1).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResidueField {
    pub p: u64,
    /// Monic modulus of degree `degree`, low-to-high, coefficients in [0, p).
    pub modulus: Vec<u64>,
}

pub type Fq = Vec<u64>;

impl ResidueField {
    pub fn prime_field(p: u64) -> Self {
        ResidueField {
            p,
            modulus: vec![0, 1],
        }
    }

    pub fn degree(&self) -> usize {
        self.modulus.len() - 1
    }

    pub fn order(&self) -> BigUint {
        BigUint::from(self.p).pow(self.degree() as u32)
    }

    pub fn zero(&self) -> Fq {
        vec![0; self.degree()]
    }

    pub fn one(&self) -> Fq {
        let mut v = self.zero();
        v[0] = 1;
        v
    }

    pub fn from_u64(&self, c: u64) -> Fq {
        let mut v = self.zero();
        v[0] = c % self.p;
        v
    }

    pub fn is_zero(&self, a: &Fq) -> bool {
        a.iter().all(|&c| c == 0)
    }

    pub fn add(&self, a: &Fq, b: &Fq) -> Fq {
        a.iter().zip(b).map(|(x, y)| (x + y) % self.p).collect()
    }

    pub fn neg(&self, a: &Fq) -> Fq {
        a.iter().map(|&x| (self.p - x) % self.p).collect()
    }

    pub fn sub(&self, a: &Fq, b: &Fq) -> Fq {
        self.add(a, &self.neg(b))
    }

    pub fn mul(&self, a: &Fq, b: &Fq) -> Fq {
        let n = self.degree();
        let p = self.p as u128;
        let mut prod = vec![0u128; 2 * n];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x as u128 * y as u128) % p;
            }
        }
        for k in (n..2 * n).rev() {
            let c = prod[k];
            if c == 0 {
                continue;
            }
            prod[k] = 0;
            for i in 0..n {
                let m = self.modulus[i] as u128;
                prod[k - n + i] = (prod[k - n + i] + (p - c) * m) % p;
            }
        }
        prod.truncate(n);
        prod.into_iter().map(|c| c as u64).collect()
    }

    pub fn pow(&self, a: &Fq, exp: &BigUint) -> Fq {
        let mut result = self.one();
        let mut base = a.clone();
        let bits = exp.bits();
        for i in 0..bits {
            if exp.bit(i) {
                result = self.mul(&result, &base);
            }
            base = self.mul(&base, &base);
        }
        result
    }

    pub fn inv(&self, a: &Fq) -> Option<Fq> {
        if self.is_zero(a) {
            return None;
        }
        let e = self.order() - BigUint::from(2u32);
        Some(self.pow(a, &e))
    }

    pub fn is_square(&self, a: &Fq) -> bool {
        if self.is_zero(a) {
            return true;
        }
        let e = (self.order() - BigUint::one()) >> 1;
        self.pow(a, &e) == self.one()
    }

    /// Square root by Tonelli-Shanks; returns the smaller of the two roots
    /// under [`ResidueField::cmp_canonical`].
    pub fn sqrt(&self, a: &Fq) -> Option<Fq> {
        if self.is_zero(a) {
            return Some(self.zero());
        }
        if !self.is_square(a) {
            return None;
        }
        let q = self.order();
        let qm1 = &q - BigUint::one();
        let mut s = 0u64;
        let mut odd = qm1.clone();
        while !odd.bit(0) {
            odd >>= 1;
            s += 1;
        }
        let z = self.non_residue();
        let mut m = s;
        let mut c = self.pow(&z, &odd);
        let mut t = self.pow(a, &odd);
        let mut r = self.pow(a, &((&odd + BigUint::one()) >> 1));
        let one = self.one();
        while t != one {
            let mut i = 0;
            let mut tt = t.clone();
            while tt != one {
                tt = self.mul(&tt, &tt);
                i += 1;
            }
            let mut b = c.clone();
            for _ in 0..(m - i - 1) {
                b = self.mul(&b, &b);
            }
            m = i;
            c = self.mul(&b, &b);
            t = self.mul(&t, &c);
            r = self.mul(&r, &b);
        }
        let other = self.neg(&r);
        if self.cmp_canonical(&other, &r) == std::cmp::Ordering::Less {
            Some(other)
        } else {
            Some(r)
        }
    }

    fn non_residue(&self) -> Fq {
        let mut candidate = self.zero();
        loop {
            // enumerate elements in canonical order
            let mut k = 0;
            loop {
                candidate[k] += 1;
                if candidate[k] < self.p {
                    break;
                }
                candidate[k] = 0;
                k += 1;
            }
            if !self.is_square(&candidate) {
                return candidate;
            }
        }
    }

    /// Total order on representatives: compare the coefficient of the highest
    /// power of t first, then downwards.
    pub fn cmp_canonical(&self, a: &Fq, b: &Fq) -> std::cmp::Ordering {
        a.iter().rev().cmp(b.iter().rev())
    }

    /// Irreducibility of the modulus over F_p (Rabin's test).
    pub fn modulus_is_irreducible(&self) -> bool {
        let n = self.degree();
        if n == 1 {
            return true;
        }
        let x = {
            let mut v = self.zero();
            v[1 % n] = if n == 1 { 0 } else { 1 };
            v
        };
        let p = BigUint::from(self.p);
        // x^(p^n) == x
        let mut y = x.clone();
        for _ in 0..n {
            y = self.pow(&y, &p);
        }
        if y != x {
            return false;
        }
        for d in 1..n {
            if n % d != 0 || !is_prime((n / d) as u64) {
                continue;
            }
            let mut y = x.clone();
            for _ in 0..d {
                y = self.pow(&y, &p);
            }
            let diff = self.sub(&y, &x);
            if poly_gcd_degree(&self.modulus, &diff, self.p) > 0 {
                return false;
            }
        }
        true
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

fn trim(v: &mut Vec<u64>) {
    while v.len() > 1 && *v.last().unwrap() == 0 {
        v.pop();
    }
}

fn inv_mod(a: u64, p: u64) -> u64 {
    let e = BigUint::from(p - 2);
    BigUint::from(a)
        .modpow(&e, &BigUint::from(p))
        .to_u64()
        .unwrap()
}

/// Degree of gcd(a, b) over F_p (dense, low-to-high).
fn poly_gcd_degree(a: &[u64], b: &[u64], p: u64) -> usize {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    trim(&mut a);
    trim(&mut b);
    while !(b.len() == 1 && b[0] == 0) {
        // a mod b
        let lead_inv = inv_mod(*b.last().unwrap(), p);
        while a.len() >= b.len() && !(a.len() == 1 && a[0] == 0) {
            let shift = a.len() - b.len();
            let factor = (a.last().unwrap() * lead_inv) % p;
            for (i, &bc) in b.iter().enumerate() {
                let sub = (factor as u128 * bc as u128 % p as u128) as u64;
                a[shift + i] = (a[shift + i] + p - sub) % p;
            }
            a.pop();
            if a.is_empty() {
                a.push(0);
            }
            trim(&mut a);
            if a.len() < b.len() {
                break;
            }
        }
        std::mem::swap(&mut a, &mut b);
    }
    if a.iter().all(Zero::is_zero) {
        0
    } else {
        a.len() - 1
    }
}
