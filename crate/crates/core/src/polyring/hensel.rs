use super::residue_poly::{self as rp, RPoly};
use super::PolyK;
use crate::error::{Error, Result};
use crate::padic::residue::Fq;
use crate::padic::{Field, PadicElement};

fn reduce(f: &PolyK) -> RPoly {
    let rf = &f.field.residue;
    let mut r: RPoly = f.coeffs.iter().map(|c| c.residue()).collect();
    rp::trim(rf, &mut r);
    r
}

fn lift(field: &Field, r: &RPoly) -> PolyK {
    PolyK::new(field, r.iter().map(|c| PadicElement::lift_residue(field, c)).collect())
}

/// Elements of F_q in canonical order.
fn residue_elements(field: &Field) -> impl Iterator<Item = Fq> + '_ {
    let p = field.p;
    let f = field.f as usize;
    (0..field.q()).map(move |mut idx| {
        let mut v = vec![0u64; f];
        for d in v.iter_mut() {
            *d = idx % p;
            idx /= p;
        }
        v
    })
}

/// Roots in the residue field of the reduction of an integral polynomial,
/// with multiplicities, in canonical order.
pub fn residue_roots(f: &PolyK) -> Vec<(Fq, usize)> {
    let rf = &f.field.residue;
    let fbar = reduce(f);
    let mut out = Vec::new();
    for c in residue_elements(&f.field) {
        let lin: RPoly = vec![rf.neg(&c), rf.one()];
        let mut g = fbar.clone();
        let mut m = 0;
        loop {
            if g.len() < 2 {
                break;
            }
            let (q, r) = rp::divrem(rf, &g, &lin);
            if !r.iter().all(|x| rf.is_zero(x)) {
                break;
            }
            g = q;
            m += 1;
        }
        if m > 0 {
            out.push((c, m));
        }
    }
    out
}

/// Whether the reduction of f mod pi is squarefree.
pub fn is_squarefree_mod_pi(f: &PolyK) -> bool {
    let rf = &f.field.residue;
    let a = reduce(f);
    let b = reduce(&f.derivative());
    if b.iter().all(|c| rf.is_zero(c)) {
        return a.len() == 1;
    }
    rp::ext_gcd(rf, &a, &b).0.len() == 1
}

/// Lifts F = A0 * B0 mod pi (A0, B0 monic and coprime) to F = A * B.
fn lift_pair(f: &PolyK, a0: &RPoly, b0: &RPoly) -> Result<(PolyK, PolyK)> {
    let field = &f.field;
    let rf = &field.residue;
    let (g, s0, t0) = rp::ext_gcd(rf, a0, b0);
    if g.len() != 1 {
        return Err(Error::NotCoprimeModP);
    }
    let (s, t) = (lift(field, &s0), lift(field, &t0));
    let mut a = lift(field, a0);
    let mut b = lift(field, b0);
    let (da, db) = (a0.len() - 1, b0.len() - 1);
    for _ in 0..field.cap + 8 {
        let err = f.sub(&a.mul(&b));
        if err.is_zero() {
            return Ok((a, b));
        }
        let te = t.mul(&err);
        let (q, r) = te.divrem_monic(&a);
        let mut da_c = r.coeffs;
        da_c.resize(da, field.zero());
        let delta_b = s.mul(&err).add(&q.mul(&b));
        let mut db_c = delta_b.coeffs;
        db_c.resize(db, field.zero());
        a = a.add(&PolyK::new(field, da_c));
        b = b.add(&PolyK::new(field, db_c));
    }
    Err(Error::PrecisionExhausted("Hensel lifting did not converge".into()))
}

/// Splits a monic integral polynomial into monic factors F_j with
/// F_j = (x - c_j)^(m_j) mod pi for the given residue classes, followed by
/// the cofactor (no roots mod pi) when it is non-constant.
pub fn hensel_split(f: &PolyK, classes: &[(Fq, usize)]) -> Result<Vec<PolyK>> {
    let field = f.field.clone();
    let rf = &field.residue;
    let mut rest = f.trimmed();
    let mut out = Vec::new();
    for (c, m) in classes {
        let rbar = reduce(&rest);
        let mut a0: RPoly = vec![rf.one()];
        let lin: RPoly = vec![rf.neg(c), rf.one()];
        for _ in 0..*m {
            a0 = rp::mul(rf, &a0, &lin);
        }
        let (b0, r) = rp::divrem(rf, &rbar, &a0);
        if !r.iter().all(|x| rf.is_zero(x)) {
            return Err(Error::NotCoprimeModP);
        }
        if b0.len() == 1 {
            out.push(rest.clone());
            rest = PolyK::one(&field);
            continue;
        }
        let (a, b) = lift_pair(&rest, &a0, &b0)?;
        out.push(a);
        rest = b;
    }
    if rest.degree() > 0 {
        out.push(rest);
    }
    Ok(out)
}
