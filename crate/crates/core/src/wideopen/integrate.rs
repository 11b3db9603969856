use super::expand::{divide_by_interior_pole, expand, pole_site, Budget, Expansion, PoleSite};
use super::model::VertexModel;
use super::reduce::pole_reduce;
use crate::error::{Error, Result};
use crate::padic::PadicElement;
use crate::polyring::PolyK;

/// A point of the wide open in local coordinates.
#[derive(Clone, Debug)]
pub struct LocalPoint {
    pub t: PadicElement,
    pub yt: PadicElement,
}

/// Berkovich-Coleman integrals of the basis forms omega~_i = t^i dt/2ytilde
/// and nu~_beta = dt/((t - beta) 2ytilde) on a model ytilde^2 = g(t).
pub trait BasisIntegrator {
    fn omega(&self, model: &VertexModel, i: usize, s: &LocalPoint, r: &LocalPoint) -> Result<PadicElement>;
    fn nu(&self, model: &VertexModel, beta: &PadicElement, s: &LocalPoint, r: &LocalPoint) -> Result<PadicElement>;
}

/// Integration through a rational parametrization of ytilde^2 = g for
/// deg g <= 2.
pub struct Parametrized;

fn unavailable(model: &VertexModel) -> Error {
    Error::BackendUnavailable {
        vertex: format!("v{}", model.node),
        degree: model.reduced_degree(),
        message: "no Coleman backend for reduced curves of degree >= 3".into(),
    }
}

fn sqrt_g(model: &VertexModel, beta: &PadicElement) -> Result<PadicElement> {
    model.g.eval(beta).sqrt().map_err(|_| {
        Error::NeedsLargerField(format!("g(beta) is not a square in K at vertex {}", model.node))
    })
}

/// (1/2s) Log(((a_r - s1)(a_s - s2)) / ((a_r - s2)(a_s - s1))).
fn log_cross(a_r: &PadicElement, a_s: &PadicElement, s1: &PadicElement, s2: &PadicElement, two_s: &PadicElement) -> Result<PadicElement> {
    let num = a_r.sub(s1).mul(&a_s.sub(s2));
    let den = a_r.sub(s2).mul(&a_s.sub(s1));
    num.div(&den)?.log()?.div(two_s)
}

impl BasisIntegrator for Parametrized {
    fn omega(&self, model: &VertexModel, i: usize, s: &LocalPoint, r: &LocalPoint) -> Result<PadicElement> {
        match (model.reduced_degree(), i) {
            (2, 0) => {
                // u = ytilde + t + A/2, dt/2ytilde = du/2u
                let half_a = model.g.coeff(1).mul(&model.field.from_ratio(1, 2));
                let u_r = r.yt.add(&r.t).add(&half_a);
                let u_s = s.yt.add(&s.t).add(&half_a);
                Ok(u_r.div(&u_s)?.log()?.mul(&model.field.from_ratio(1, 2)))
            }
            (d, _) if d >= 3 => Err(unavailable(model)),
            _ => Err(Error::Invalid(format!("omega~_{i} is not a basis form in degree {}", model.reduced_degree()))),
        }
    }

    fn nu(&self, model: &VertexModel, beta: &PadicElement, s: &LocalPoint, r: &LocalPoint) -> Result<PadicElement> {
        let field = &model.field;
        match model.reduced_degree() {
            0 => {
                let ratio = r.t.sub(beta).div(&s.t.sub(beta))?;
                ratio.log()?.div(&s.yt.mul_int(2))
            }
            1 => {
                // u = ytilde, t = u^2 + r0, nu~ = du/(u^2 - g(beta))
                let sq = sqrt_g(model, beta)?;
                log_cross(&r.yt, &s.yt, &sq, &sq.neg(), &sq.mul_int(2))
            }
            2 => {
                let half_a = model.g.coeff(1).mul(&field.from_ratio(1, 2));
                let sq = sqrt_g(model, beta)?;
                let xb = beta.add(&half_a);
                let (up, um) = (xb.add(&sq), xb.sub(&sq));
                let u_r = r.yt.add(&r.t).add(&half_a);
                let u_s = s.yt.add(&s.t).add(&half_a);
                log_cross(&u_r, &u_s, &up, &um, &sq.mul_int(2))
            }
            _ => Err(unavailable(model)),
        }
    }
}

impl Expansion {
    pub fn scale(&self, c: &PadicElement) -> Expansion {
        Expansion {
            entire: self.entire.iter().map(|x| x.mul(c)).collect(),
            principal: self.principal.iter().map(|v| v.iter().map(|x| x.mul(c)).collect()).collect(),
            poles: self.poles.iter().map(|(b, r)| (b.clone(), r.mul(c))).collect(),
        }
    }
}

/// Global data of a form to integrate on a wide open: sum c_i x^i dx/2y +
/// sum d_beta dx/((x - beta) 2y).
#[derive(Clone, Debug, Default)]
pub struct LocalForm {
    pub omega: Vec<PadicElement>,
    pub nu: Vec<(PadicElement, PadicElement)>,
}

pub fn local_point(model: &VertexModel, x: &PadicElement, y: &PadicElement) -> Result<LocalPoint> {
    let t = model.to_local(x);
    let yt = if model.is_split() {
        model.field.from_int(model.sheet(x, y)? as i64)
    } else {
        model.ytilde(x, y)?
    };
    Ok(LocalPoint { t, yt })
}

/// Berkovich-Coleman integral from s to r (both in the wide open of the
/// model) of a form, to `target` pi-digits of truncation accuracy.
pub fn integrate_on_model(
    model: &VertexModel,
    form: &LocalForm,
    s: &LocalPoint,
    r: &LocalPoint,
    target: i64,
    budget_cap: usize,
    backend: &dyn BasisIntegrator,
) -> Result<PadicElement> {
    let field = model.field.clone();
    // x(t) = c + pi^k t
    let xt = PolyK::new(&field, vec![model.center.clone(), field.one().shift_pi(model.k)]);
    let lambda = model.lambda()?;
    let mut numerator = PolyK::zero(&field);
    let mut xpow = PolyK::one(&field);
    for c in &form.omega {
        numerator = numerator.add(&xpow.scale(c));
        xpow = xpow.mul(&xt);
    }
    let numerator = numerator.scale(&lambda);
    let kinv = model.kappa.inv()?;
    let mut sample = vec![s.t.clone(), r.t.clone()];
    let mut poles = Vec::new();
    for (beta, d) in &form.nu {
        if d.is_zero() {
            continue;
        }
        let b = model.to_local(beta);
        if s.t.sub(&b).is_zero() || r.t.sub(&b).is_zero() {
            return Err(Error::PoleAtEndpoint);
        }
        let site = pole_site(model, &b);
        if site == PoleSite::Inside {
            sample.push(b.clone());
        }
        poles.push((b, d.mul(&kinv), site));
    }
    let budget = Budget::for_points(model, &sample, target, budget_cap)?;
    let mut total = if numerator.is_zero() {
        Expansion::zero(model.holes.len())
    } else {
        expand(model, &numerator, None, &budget)?
    };
    let one = PolyK::one(&field);
    let mut base: Option<Expansion> = None;
    for (b, d, site) in &poles {
        let part = if *site == PoleSite::Inside {
            if base.is_none() {
                base = Some(expand(model, &one, None, &budget)?);
            }
            divide_by_interior_pole(model, base.as_ref().unwrap(), &one, b)?
        } else {
            expand(model, &one, Some((b, site)), &budget)?
        };
        total.add(&part.scale(d));
    }
    let red = pole_reduce(model, &total)?;
    let mut acc = red.exact_at(&r.t, &r.yt)?.sub(&red.exact_at(&s.t, &s.yt)?);
    for (i, c) in red.omega.iter().enumerate() {
        if !c.is_zero() {
            acc = acc.add(&c.mul(&backend.omega(model, i, s, r)?));
        }
    }
    for (beta, d) in &red.nu {
        acc = acc.add(&d.mul(&backend.nu(model, beta, s, r)?));
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::covering::cluster_roots;
    use crate::padic::{FieldCtx, FieldSpec};

    #[test]
    fn parametrized_nu_is_an_antiderivative() {
        // numerically differentiate: for nearby points the integral is
        // approximately the integrand times the increment
        let k = FieldCtx::new(&FieldSpec::qp(43), 30).unwrap();
        let f = PolyK::from_ints(&k, &[555015942, -1351755, 0, 1]);
        let tree = cluster_roots(&f).unwrap();
        let m = VertexModel::build(&tree, 0).unwrap();
        let x0 = k.from_int(219);
        let y0 = k.from_int(16416);
        let s = local_point(&m, &x0, &y0).unwrap();
        // a nearby point: t = t0 + 43^6 h, ytilde from the curve
        let h = k.from_int(43).pow(6);
        let t1 = s.t.add(&h);
        let yt1 = m.g.eval(&t1).sqrt().unwrap();
        let yt1 = if yt1.sub(&s.yt).valuation().unwrap() > 0 { yt1 } else { yt1.neg() };
        let r = LocalPoint { t: t1, yt: yt1 };
        let beta = k.from_int(-501);
        let val = Parametrized.nu(&m, &beta, &s, &r).unwrap();
        let approx = h.div(&s.t.sub(&beta).mul(&s.yt).mul_int(2)).unwrap();
        assert!(val.sub(&approx).valuation().unwrap() >= 12);
    }
}
