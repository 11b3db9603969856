//! Polynomials over the residue field, used to seed Hensel lifting.

use crate::padic::residue::{Fq, ResidueField};

pub(crate) type RPoly = Vec<Fq>;

pub(crate) fn trim(rf: &ResidueField, a: &mut RPoly) {
    while a.len() > 1 && rf.is_zero(a.last().unwrap()) {
        a.pop();
    }
    if a.is_empty() {
        a.push(rf.zero());
    }
}

fn is_zero(rf: &ResidueField, a: &RPoly) -> bool {
    a.iter().all(|c| rf.is_zero(c))
}

pub(crate) fn mul(rf: &ResidueField, a: &RPoly, b: &RPoly) -> RPoly {
    let mut out = vec![rf.zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] = rf.add(&out[i + j], &rf.mul(x, y));
        }
    }
    trim(rf, &mut out);
    out
}

pub(crate) fn sub(rf: &ResidueField, a: &RPoly, b: &RPoly) -> RPoly {
    let n = a.len().max(b.len());
    let z = rf.zero();
    let mut out: RPoly = (0..n)
        .map(|i| rf.sub(a.get(i).unwrap_or(&z), b.get(i).unwrap_or(&z)))
        .collect();
    trim(rf, &mut out);
    out
}

pub(crate) fn divrem(rf: &ResidueField, a: &RPoly, b: &RPoly) -> (RPoly, RPoly) {
    let mut b = b.clone();
    trim(rf, &mut b);
    let mut r = a.clone();
    trim(rf, &mut r);
    let db = b.len() - 1;
    let lead_inv = rf.inv(b.last().unwrap()).expect("nonzero divisor");
    if r.len() - 1 < db || is_zero(rf, &r) {
        return (vec![rf.zero()], r);
    }
    let mut q = vec![rf.zero(); r.len() - db];
    for k in (db..r.len()).rev() {
        let c = rf.mul(&r[k], &lead_inv);
        q[k - db] = c.clone();
        for i in 0..=db {
            r[k - db + i] = rf.sub(&r[k - db + i], &rf.mul(&c, &b[i]));
        }
    }
    r.truncate(db.max(1));
    trim(rf, &mut r);
    trim(rf, &mut q);
    (q, r)
}

/// Returns (g, s, t) with s a + t b = g = gcd(a, b), g monic.
pub(crate) fn ext_gcd(rf: &ResidueField, a: &RPoly, b: &RPoly) -> (RPoly, RPoly, RPoly) {
    let (mut r0, mut r1) = (a.clone(), b.clone());
    let (mut s0, mut s1) = (vec![rf.one()], vec![rf.zero()]);
    let (mut t0, mut t1) = (vec![rf.zero()], vec![rf.one()]);
    while !is_zero(rf, &r1) {
        let (q, r) = divrem(rf, &r0, &r1);
        let s2 = sub(rf, &s0, &mul(rf, &q, &s1));
        let t2 = sub(rf, &t0, &mul(rf, &q, &t1));
        r0 = std::mem::replace(&mut r1, r);
        s0 = std::mem::replace(&mut s1, s2);
        t0 = std::mem::replace(&mut t1, t2);
    }
    let lead_inv = rf.inv(r0.last().unwrap()).expect("nonzero gcd");
    let scale = |v: &RPoly| -> RPoly { v.iter().map(|c| rf.mul(c, &lead_inv)).collect() };
    (scale(&r0), scale(&s0), scale(&t0))
}
