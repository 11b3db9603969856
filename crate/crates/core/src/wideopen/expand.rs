use super::model::VertexModel;
use crate::error::{Error, Result};
use crate::padic::{Field, PadicElement};
use crate::polyring::{inv_sqrt_series, LaurentSeriesK, PolyK, EXACT};
use num_rational::BigRational;

/// phi(t) dt/2ytilde on a wide open, written as
/// sum_n entire[n] t^n + sum_j sum_n principal[j][n-1] (t - t_j)^-n
/// + sum residue / (t - beta).
#[derive(Clone, Debug)]
pub struct Expansion {
    pub entire: Vec<PadicElement>,
    pub principal: Vec<Vec<PadicElement>>,
    pub poles: Vec<(PadicElement, PadicElement)>,
}

impl Expansion {
    pub fn zero(holes: usize) -> Self {
        Expansion {
            entire: Vec::new(),
            principal: vec![Vec::new(); holes],
            poles: Vec::new(),
        }
    }

    pub fn add(&mut self, other: &Expansion) {
        add_into(&mut self.entire, &other.entire);
        for (a, b) in self.principal.iter_mut().zip(&other.principal) {
            add_into(a, b);
        }
        self.poles.extend(other.poles.iter().cloned());
    }
}

fn add_into(a: &mut Vec<PadicElement>, b: &[PadicElement]) {
    for (i, x) in b.iter().enumerate() {
        if i < a.len() {
            a[i] = a[i].add(x);
        } else {
            a.push(x.clone());
        }
    }
}

/// Smallest n with n * rate - e * ceil(log_p(n + 1)) >= target.
pub fn truncation_length(rate: &BigRational, target: i64, p: u64, e: i64, cap: usize) -> Result<usize> {
    let zero = BigRational::from_integer(0.into());
    if *rate <= zero {
        return Err(Error::BudgetExceeded(usize::MAX, cap));
    }
    let mut n = 1usize;
    loop {
        let mut digits = 0i64;
        let mut m = (n + 1) as u64 - 1;
        while m > 0 {
            m /= p;
            digits += 1;
        }
        let lhs = rate * BigRational::from_integer((n as i64).into()) - BigRational::from_integer((e * digits).into());
        if lhs >= BigRational::from_integer(target.into()) {
            return Ok(n);
        }
        n += 1;
        if n > cap {
            return Err(Error::BudgetExceeded(n, cap));
        }
    }
}

fn series(field: &Field, coeffs: Vec<PadicElement>) -> LaurentSeriesK {
    LaurentSeriesK::new(field, 0, coeffs, EXACT)
}

/// Power series of 1 / p(z) for a polynomial with unit constant term.
fn inv_poly(p: &PolyK, order: i64) -> Result<LaurentSeriesK> {
    LaurentSeriesK::from_poly(p).inverse(order)
}

/// Coefficients of w in p(t) / t^deg p, i.e. the reversed polynomial.
fn reversed(p: &PolyK) -> PolyK {
    let mut c = p.trimmed().coeffs;
    c.reverse();
    PolyK::new(&p.field, c)
}

/// sum_s b^s w^s, truncated.
fn geometric(field: &Field, b: &PadicElement, order: i64) -> LaurentSeriesK {
    let mut c = Vec::with_capacity(order as usize);
    let mut pw = field.one();
    for _ in 0..order {
        c.push(pw.clone());
        pw = pw.mul(b);
    }
    series(field, c).truncate(order)
}

/// Where an extra simple pole beta (local coordinate) sits relative to the
/// wide open.
#[derive(Clone, Debug, PartialEq)]
pub enum PoleSite {
    InHole(usize),
    Outside,
    Inside,
}

pub fn pole_site(model: &VertexModel, beta: &PadicElement) -> PoleSite {
    for (j, h) in model.holes.iter().enumerate() {
        let d = beta.sub(&h.center);
        let inside = match d.valuation() {
            Some(v) => BigRational::from_integer(v.into()) >= h.radius,
            None => true,
        };
        if inside {
            return PoleSite::InHole(j);
        }
    }
    if let (Some(o), Some(v)) = (model.outer, beta.valuation()) {
        if v <= -o {
            return PoleSite::Outside;
        }
    }
    PoleSite::Inside
}

/// Truncation lengths for the entire part and each hole.
#[derive(Clone, Debug)]
pub struct Budget {
    pub entire: usize,
    pub holes: Vec<usize>,
}

impl Budget {
    /// Lengths guaranteeing `target` pi-digits at the given sample points
    /// (local coordinates of the endpoints and of interior poles).
    pub fn for_points(model: &VertexModel, points: &[PadicElement], target: i64, cap: usize) -> Result<Self> {
        let field = &model.field;
        let (p, e) = (field.p, field.e);
        let mut holes = Vec::new();
        for h in &model.holes {
            let mut zmax: Option<BigRational> = None;
            for t in points {
                let v = t.sub(&h.center).valuation().ok_or(Error::PoleAtEndpoint)?;
                let v = BigRational::from_integer(v.into());
                if v >= h.radius {
                    return Err(Error::Invalid("point lies in a hole of the wide open".into()));
                }
                zmax = Some(zmax.map_or(v.clone(), |z| z.max(v)));
            }
            let zmax = zmax.unwrap_or_else(|| BigRational::from_integer(0.into()));
            let rate = &h.radius - zmax.max(BigRational::from_integer(0.into()));
            holes.push(truncation_length(&rate, target, p, e, cap)?);
        }
        let entire = match model.outer {
            None => 0,
            Some(o) => {
                let r = points
                    .iter()
                    .filter_map(|t| t.valuation())
                    .map(|v| (-v).max(0))
                    .max()
                    .unwrap_or(0);
                if r >= o {
                    return Err(Error::Invalid("point lies outside the wide open".into()));
                }
                truncation_length(&BigRational::from_integer((o - r).into()), target, p, e, cap)?
            }
        };
        Ok(Budget { entire, holes })
    }
}

/// A factor series to at least `order` terms, computed with some headroom
/// and reused at lower orders.
fn cached(
    model: &VertexModel,
    key: (u8, usize),
    order: i64,
    make: impl FnOnce(i64) -> Result<LaurentSeriesK>,
) -> Result<LaurentSeriesK> {
    if let Some((o, s)) = model.series_cache.lock().expect("series cache").get(&key) {
        if *o >= order {
            return Ok(s.truncate(order));
        }
    }
    let big = order + order / 2;
    let s = make(big)?;
    model.series_cache.lock().expect("series cache").insert(key, (big, s.clone()));
    Ok(s.truncate(order))
}

/// Positive-power factors shared by all expansions at hole j, as series in
/// z = t - t_j: prod_{i != j} (t - t_i)^-L_i k_i^-1/2 * (F_out/C)^-1/2.
fn hole_positive(model: &VertexModel, j: usize, order: i64) -> Result<LaurentSeriesK> {
    let field = &model.field;
    let one = field.one();
    let tj = &model.holes[j].center;
    let mut acc = LaurentSeriesK::one(field);
    for (i, h) in model.holes.iter().enumerate() {
        if i == j {
            continue;
        }
        let lin = PolyK::new(field, vec![tj.sub(&h.center), one.clone()]);
        let inv_lin = inv_poly(&lin, order)?;
        let mut inv_pow_n = LaurentSeriesK::one(field);
        for _ in 0..h.size {
            inv_pow_n = inv_pow_n.mul(&inv_lin).truncate(order);
        }
        let kfac = LaurentSeriesK::from_poly(&h.factor.shift_rescale(tj, &one)).mul(&inv_pow_n).truncate(order);
        let mut part = inv_sqrt_series(&kfac, order)?;
        for _ in 0..h.half() {
            part = part.mul(&inv_lin).truncate(order);
        }
        acc = acc.mul(&part).truncate(order);
    }
    let out = model.f_out.shift_rescale(tj, &one).scale(&model.c_out.inv()?);
    let s = inv_sqrt_series(&LaurentSeriesK::from_poly(&out), order)?;
    Ok(acc.mul(&s).truncate(order))
}

/// Negative-power factor at hole j as a series in w = 1/z:
/// w^L_j k_j(t_j + 1/w)^-1/2.
fn hole_negative(model: &VertexModel, j: usize, order: i64) -> Result<LaurentSeriesK> {
    let field = &model.field;
    let h = &model.holes[j];
    let k = reversed(&h.factor.shift_rescale(&h.center, &field.one()));
    let s = inv_sqrt_series(&LaurentSeriesK::from_poly(&k), order)?;
    Ok(s.shift(h.half() as i64).truncate(order))
}

/// Negative-power factor of the outer expansion as a series in w = 1/t.
fn outer_negative(model: &VertexModel, order: i64) -> Result<LaurentSeriesK> {
    let field = &model.field;
    let one = field.one();
    let mut acc = LaurentSeriesK::one(field);
    for h in &model.holes {
        let lin = PolyK::new(field, vec![one.clone(), h.center.neg()]);
        let inv_lin = inv_poly(&lin, order)?;
        let mut inv_pow_n = LaurentSeriesK::one(field);
        for _ in 0..h.size {
            inv_pow_n = inv_pow_n.mul(&inv_lin).truncate(order);
        }
        let kfac = LaurentSeriesK::from_poly(&reversed(&h.factor)).mul(&inv_pow_n).truncate(order);
        let mut part = inv_sqrt_series(&kfac, order)?;
        for _ in 0..h.half() {
            part = part.mul(&inv_lin).truncate(order);
        }
        acc = acc.mul(&part.shift(h.half() as i64)).truncate(order);
    }
    Ok(acc)
}

/// Outer positive factor (F_out/C)^-1/2 as a series in t.
fn outer_positive(model: &VertexModel, order: i64) -> Result<LaurentSeriesK> {
    let out = model.f_out.scale(&model.c_out.inv()?);
    if out.degree() == 0 {
        return Ok(LaurentSeriesK::one(&model.field));
    }
    inv_sqrt_series(&LaurentSeriesK::from_poly(&out), order)
}

/// coefficient of z^-n, n = 1..=nmax, of P(z) Q(1/z).
fn negative_part(p: &LaurentSeriesK, q: &LaurentSeriesK, nmax: usize) -> Vec<PadicElement> {
    let field = &p.field;
    (1..=nmax as i64)
        .map(|n| {
            let mut acc = field.zero();
            for a in 0..p.end() {
                let b = a + n;
                if b >= q.end() {
                    break;
                }
                acc = acc.add(&p.coeff(a).mul(&q.coeff(b)));
            }
            acc
        })
        .collect()
}

/// coefficient of t^n, n = 0..nmax, of P(t) Q(1/t).
fn nonnegative_part(p: &LaurentSeriesK, q: &LaurentSeriesK, nmax: usize) -> Vec<PadicElement> {
    let field = &p.field;
    (0..nmax as i64)
        .map(|n| {
            let mut acc = field.zero();
            for b in 0..q.end() {
                if n + b >= p.end() {
                    break;
                }
                acc = acc.add(&p.coeff(n + b).mul(&q.coeff(b)));
            }
            acc
        })
        .collect()
}

/// Expansion of A(t) / Nrm(t) * 1/(t - beta) (the pole optional and not
/// inside the wide open).
pub fn expand(
    model: &VertexModel,
    numerator: &PolyK,
    pole: Option<(&PadicElement, &PoleSite)>,
    budget: &Budget,
) -> Result<Expansion> {
    let field = &model.field;
    let one = field.one();
    let mut out = Expansion::zero(model.holes.len());
    for (j, h) in model.holes.iter().enumerate() {
        let n = budget.holes[j];
        let order = (2 * n + h.size + 8) as i64;
        let mut pos = cached(model, (0, j), order, |o| hole_positive(model, j, o))?
            .mul(&LaurentSeriesK::from_poly(&numerator.shift_rescale(&h.center, &one)))
            .truncate(order);
        let mut neg = cached(model, (1, j), order, |o| hole_negative(model, j, o))?;
        match pole {
            Some((beta, PoleSite::InHole(i))) if *i == j => {
                let b = beta.sub(&h.center);
                neg = neg.mul(&geometric(field, &b, order).shift(1)).truncate(order);
            }
            Some((beta, _)) => {
                let lin = PolyK::new(field, vec![h.center.sub(beta), one.clone()]);
                pos = pos.mul(&inv_poly(&lin, order)?).truncate(order);
            }
            None => {}
        }
        out.principal[j] = negative_part(&pos, &neg, n);
    }
    let degree_bound = numerator.degree() + 1;
    let n = budget.entire.max(degree_bound);
    let order = (2 * n + 8) as i64;
    let mut pos = cached(model, (2, 0), order, |o| outer_positive(model, o))?.mul(&LaurentSeriesK::from_poly(numerator)).truncate(order);
    let mut neg = cached(model, (3, 0), order, |o| outer_negative(model, o))?;
    match pole {
        Some((beta, PoleSite::InHole(_))) => {
            neg = neg.mul(&geometric(field, beta, order).shift(1)).truncate(order);
        }
        Some((beta, PoleSite::Outside)) => {
            let inv_b = beta.inv()?;
            pos = pos
                .mul(&geometric(field, &inv_b, order).scale(&inv_b.neg()))
                .truncate(order);
        }
        Some((_, PoleSite::Inside)) => {
            return Err(Error::Invalid("interior poles are handled by division".into()));
        }
        None => {}
    }
    out.entire = nonnegative_part(&pos, &neg, n);
    Ok(out)
}

/// Expansion of A(t) / Nrm(t) / (t - beta) for beta inside the wide open,
/// from the expansion of A / Nrm: the residue is A(beta)/Nrm(beta).
pub fn divide_by_interior_pole(model: &VertexModel, base: &Expansion, numerator: &PolyK, beta: &PadicElement) -> Result<Expansion> {
    let field = &model.field;
    let mut out = Expansion::zero(model.holes.len());
    // (E(t) - E(beta)) / (t - beta): synthetic division
    let e = &base.entire;
    let mut q = vec![field.zero(); e.len().saturating_sub(1)];
    let mut acc = field.zero();
    for i in (1..e.len()).rev() {
        acc = acc.mul(beta).add(&e[i]);
        q[i - 1] = acc.clone();
    }
    out.entire = q;
    for (j, h) in model.holes.iter().enumerate() {
        let a = &base.principal[j];
        let d = beta.sub(&h.center);
        let dinv = d.inv()?;
        // (z^-n - d^-n)/(z - d) = -sum_{m=1}^{n} z^-m d^-(n+1-m)
        let mut pp = vec![field.zero(); a.len()];
        let mut dpow = vec![dinv.clone()];
        for _ in 1..=a.len() {
            let last = dpow.last().unwrap().mul(&dinv);
            dpow.push(last);
        }
        for (idx, an) in a.iter().enumerate() {
            let n = idx + 1;
            if an.is_zero() {
                continue;
            }
            for m in 1..=n {
                pp[m - 1] = pp[m - 1].sub(&an.mul(&dpow[n - m]));
            }
        }
        out.principal[j] = pp;
    }
    let residue = numerator.eval(beta).div(&model.nrm(beta)?)?;
    out.poles.push((beta.clone(), residue));
    Ok(out)
}
