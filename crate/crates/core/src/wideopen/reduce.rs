use super::expand::Expansion;
use super::model::VertexModel;
use crate::error::Result;
use crate::padic::PadicElement;
use crate::polyring::PolyK;

/// phi dt/2ytilde = dF + sum c_i omega~_i + sum d_beta nu~_beta, with
/// F = ytilde (Q(t) + sum_beta sum_m r_beta,m (t - beta)^-m),
/// omega~_i = t^i dt/2ytilde, nu~_beta = dt/((t - beta) 2ytilde).
#[derive(Clone, Debug)]
pub struct Reduced {
    pub exact_poly: Vec<PadicElement>,
    pub exact_poles: Vec<(PadicElement, Vec<PadicElement>)>,
    pub omega: Vec<PadicElement>,
    pub nu: Vec<(PadicElement, PadicElement)>,
}

impl Reduced {
    /// F at a point given by its local coordinate and reduced y.
    pub fn exact_at(&self, t: &PadicElement, yt: &PadicElement) -> Result<PadicElement> {
        let field = t.field().clone();
        let mut acc = field.zero();
        for c in self.exact_poly.iter().rev() {
            acc = acc.mul(t).add(c);
        }
        for (beta, r) in &self.exact_poles {
            let zinv = t.sub(beta).inv()?;
            let mut inner = field.zero();
            for c in r.iter().rev() {
                inner = inner.add(c).mul(&zinv);
            }
            acc = acc.add(&inner);
        }
        Ok(acc.mul(yt))
    }
}

/// Kills the principal part sum a_n (t - beta)^-n (a[n-1] = a_n) with the
/// exact forms mu_beta,m = d(ytilde (t - beta)^-m); positive powers spilled
/// by the reduction are added to `poly_z` (a polynomial in z = t - beta).
/// Returns the exact coefficients and the residual simple-pole coefficient.
fn reduce_at(
    g_z: &PolyK,
    a: &[PadicElement],
    weierstrass: bool,
    poly_z: &mut Vec<PadicElement>,
) -> Result<(Vec<PadicElement>, PadicElement)> {
    let field = g_z.field.clone();
    let dg = g_z.degree();
    let gi: Vec<PadicElement> = (0..=dg).map(|i| g_z.coeff(i)).collect();
    let mut a = a.to_vec();
    let nmax = a.len();
    let mut exact = vec![field.zero(); nmax];
    // a[n-1] is the coefficient of z^-n
    let lowest = if weierstrass { 1 } else { 2 };
    for big_m in (lowest..=nmax).rev() {
        let c = a[big_m - 1].clone();
        if c.is_zero() {
            continue;
        }
        // mu_{beta,m} = sum_i (i - 2m) g_i z^(i - m - 1)
        let m = if weierstrass { big_m } else { big_m - 1 };
        let lead_i = if weierstrass { 1 } else { 0 };
        let lead = gi[lead_i].mul_int(lead_i as i64 - 2 * m as i64);
        let factor = c.div(&lead)?;
        exact[m - 1] = exact[m - 1].add(&factor);
        // at a Weierstrass point g_0 vanishes to working precision
        for (i, g) in gi.iter().enumerate().skip(lead_i) {
            let coeff = factor.mul(&g.mul_int(i as i64 - 2 * m as i64));
            let exp = i as i64 - m as i64 - 1;
            if exp < 0 {
                let n = (-exp) as usize;
                a[n - 1] = a[n - 1].sub(&coeff);
            } else {
                let e = exp as usize;
                if poly_z.len() <= e {
                    poly_z.resize(e + 1, field.zero());
                }
                poly_z[e] = poly_z[e].sub(&coeff);
            }
        }
    }
    let residue = if weierstrass || a.is_empty() { field.zero() } else { a[0].clone() };
    Ok((exact, residue))
}

/// Pole reduction of an expansion against the model's curve ytilde^2 = g.
pub fn pole_reduce(model: &VertexModel, x: &Expansion) -> Result<Reduced> {
    let field = model.field.clone();
    let one = field.one();
    let g = &model.g;
    let dg = g.degree();
    let mut poly = PolyK::new(&field, x.entire.clone());
    let mut exact_poles = Vec::new();
    let mut nu = Vec::new();
    let mut centers: Vec<(PadicElement, Vec<PadicElement>, bool)> = model
        .holes
        .iter()
        .zip(&x.principal)
        .map(|(h, a)| (h.center.clone(), a.clone(), h.is_odd()))
        .collect();
    for (beta, r) in &x.poles {
        let w = g.eval(beta).is_zero();
        centers.push((beta.clone(), vec![r.clone()], w));
    }
    for (beta, a, weier) in centers {
        if a.iter().all(|c| c.is_zero()) {
            continue;
        }
        let g_z = g.shift_rescale(&beta, &one);
        let mut spill = Vec::new();
        let (exact, residue) = reduce_at(&g_z, &a, weier, &mut spill)?;
        if !spill.is_empty() {
            // back from z = t - beta to t
            let zpoly = PolyK::new(&field, spill);
            poly = poly.add(&zpoly.shift_rescale(&beta.neg(), &one));
        }
        exact_poles.push((beta.clone(), exact));
        if !residue.is_zero() {
            nu.push((beta, residue));
        }
    }
    // mu_inf,m = d(t^m ytilde) = (t^m g' + 2m t^(m-1) g) dt/2ytilde
    let mut e: Vec<PadicElement> = poly.coeffs.clone();
    let gp = g.derivative();
    let top = e.len();
    let mut q = vec![field.zero(); top + 1];
    if top > 0 {
        for d in (0..top).rev() {
            if (d as i64) < dg as i64 - 1 {
                break;
            }
            let c = e[d].clone();
            if c.is_zero() {
                continue;
            }
            let m = d + 1 - dg;
            let factor = c.div(&field.from_int((dg + 2 * m) as i64))?;
            q[m] = q[m].add(&factor);
            let mut mu = PolyK::new(&field, {
                let mut v = vec![field.zero(); m];
                v.extend(gp.coeffs.iter().cloned());
                v
            });
            if m > 0 {
                let mut v = vec![field.zero(); m - 1];
                v.extend(g.coeffs.iter().map(|c| c.mul_int(2 * m as i64)));
                mu = mu.add(&PolyK::new(&field, v));
            }
            for (i, mc) in mu.coeffs.iter().enumerate() {
                if i < e.len() {
                    e[i] = e[i].sub(&factor.mul(mc));
                }
            }
        }
    }
    let nomega = dg.saturating_sub(1);
    let omega: Vec<PadicElement> = (0..nomega).map(|i| e.get(i).cloned().unwrap_or_else(|| field.zero())).collect();
    Ok(Reduced {
        exact_poly: q,
        exact_poles,
        omega,
        nu,
    })
}
