//! Vologodsky integrals: Berkovich-Coleman integrals along a path through
//! the reference points of the covering, corrected by periods weighted with
//! tropical integrals.

use crate::covering::{Covering, OrientedEdge};
use crate::curve::{height_integrand, CurvePoint, HyperellipticCurve, MeromorphicForm};
use crate::error::{Error, Result};
use crate::padic::{Field, PadicElement};
use crate::tropical::{tropical_integral, Cycle, Q};
use crate::wideopen::{integrate_on_model, local_point, BasisIntegrator, LocalForm, Parametrized};
use num_traits::Zero;
use std::collections::HashMap;
use std::sync::Mutex;

#[derive(Clone, Debug)]
pub struct Config {
    /// Requested absolute precision in pi-digits.
    pub precision: i64,
    /// Working precision; defaults to `default_cap`.
    pub cap: Option<i64>,
    /// Multiplier on the truncation target (for convergence checks).
    pub truncation_factor: i64,
    /// Hard cap on series lengths.
    pub budget_cap: usize,
}

impl Config {
    pub fn new(precision: i64) -> Self {
        Config {
            precision,
            cap: None,
            truncation_factor: 1,
            budget_cap: 4000,
        }
    }

    /// Working precision generous enough to absorb the growth of series
    /// terms evaluated towards the edges of a wide open.
    pub fn default_cap(precision: i64, e: i64) -> i64 {
        2 * precision + 8 * e + 16
    }

    fn truncation_target(&self, e: i64) -> i64 {
        (self.precision + 2 * e + 4) * self.truncation_factor.max(1)
    }
}

/// One term of the tropical correction.
#[derive(Clone, Debug)]
pub struct Correction {
    pub cycle: usize,
    pub tropical: Q,
    pub period: Option<PadicElement>,
}

#[derive(Clone, Debug)]
pub struct IntegralReport {
    pub value: PadicElement,
    pub bc: PadicElement,
    pub path: Vec<OrientedEdge>,
    pub start_vertex: usize,
    pub end_vertex: usize,
    pub corrections: Vec<Correction>,
}

pub struct Vologodsky {
    pub curve: HyperellipticCurve,
    pub cov: Covering,
    pub cfg: Config,
    pub cycles: Vec<Cycle>,
    pub etas: Vec<Vec<Q>>,
    backend: Box<dyn BasisIntegrator + Send + Sync>,
    periods: Mutex<HashMap<(usize, usize), PadicElement>>,
}

impl std::fmt::Debug for Vologodsky {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Vologodsky").field("cov", &self.cov).field("cycles", &self.cycles).finish()
    }
}

fn to_field(x: &PadicElement, field: &Field) -> PadicElement {
    x.in_field(field)
}

fn point_in(pt: &CurvePoint, field: &Field) -> CurvePoint {
    match pt {
        CurvePoint::Affine { x, y } => CurvePoint::affine(to_field(x, field), to_field(y, field)),
        other => other.clone(),
    }
}

fn affine(pt: &CurvePoint) -> Result<(&PadicElement, &PadicElement)> {
    match pt {
        CurvePoint::Affine { x, y } => Ok((x, y)),
        _ => Err(Error::Invalid("integration endpoints must be affine points".into())),
    }
}

impl Vologodsky {
    pub fn new(curve: &HyperellipticCurve, cfg: Config) -> Result<Self> {
        let e = curve.field.e;
        let cap = cfg.cap.unwrap_or_else(|| Config::default_cap(cfg.precision, e));
        let field = curve.field.with_cap(cap);
        let curve = HyperellipticCurve::new(&field, &curve.f_rational)?;
        let cov = Covering::new(&curve)?;
        let graph = cov.graph();
        let cycles = graph.cycle_basis()?;
        let coeffs: Vec<_> = cycles.iter().map(|c| c.coeffs.clone()).collect();
        let etas = graph.dual_basis(&coeffs)?;
        Ok(Vologodsky {
            curve,
            cov,
            cfg,
            cycles,
            etas,
            backend: Box::new(Parametrized),
            periods: Mutex::new(HashMap::new()),
        })
    }

    pub fn field(&self) -> &Field {
        &self.curve.field
    }

    /// Replaces the cycle basis by closed walks of the graph.
    pub fn set_cycles(&mut self, walks: Vec<Vec<OrientedEdge>>) -> Result<()> {
        let graph = self.cov.graph();
        let mut cycles = Vec::new();
        for w in walks {
            self.check_closed(&w)?;
            let coeffs = graph.chain(&w);
            cycles.push(Cycle { walk: w, coeffs });
        }
        if cycles.len() != graph.betti() {
            return Err(Error::Invalid(format!("expected {} cycles, got {}", graph.betti(), cycles.len())));
        }
        let coeffs: Vec<_> = cycles.iter().map(|c| c.coeffs.clone()).collect();
        self.etas = graph.dual_basis(&coeffs)?;
        self.cycles = cycles;
        self.periods.lock().expect("period cache").clear();
        Ok(())
    }

    pub fn set_backend(&mut self, backend: Box<dyn BasisIntegrator + Send + Sync>) {
        self.backend = backend;
        self.periods.lock().expect("period cache").clear();
    }

    pub fn set_reference_point(&mut self, edge: usize, x: PadicElement, y_approx: &PadicElement) -> Result<()> {
        let f = self.field().clone();
        self.cov.set_reference_point(edge, to_field(&x, &f), &to_field(y_approx, &f))?;
        self.periods.lock().expect("period cache").clear();
        Ok(())
    }

    fn check_closed(&self, walk: &[OrientedEdge]) -> Result<()> {
        self.cov.check_path(walk)?;
        if let (Some(first), Some(last)) = (walk.first(), walk.last()) {
            if self.cov.terminal(*last) != self.cov.initial(*first) {
                return Err(Error::BrokenPath(walk.len() - 1, 0));
            }
        }
        Ok(())
    }

    /// Berkovich-Coleman integral of a local form inside one vertex.
    pub fn bc_leg(&self, vertex: usize, form: &LocalForm, s: (&PadicElement, &PadicElement), r: (&PadicElement, &PadicElement)) -> Result<PadicElement> {
        if s.0.sub(r.0).is_zero() && s.1.sub(r.1).is_zero() {
            return Ok(self.field().zero());
        }
        let model = self.cov.model(self.cov.vertices[vertex].node)?;
        let ls = local_point(model, s.0, s.1)?;
        let lr = local_point(model, r.0, r.1)?;
        let target = self.cfg.truncation_target(self.field().e);
        integrate_on_model(model, form, &ls, &lr, target, self.cfg.budget_cap, self.backend.as_ref())
    }

    /// Integral along x -> P_e1 -> ... -> P_el -> y, each leg inside the
    /// vertex shared by consecutive waypoints.
    pub fn bc_path_integral(&self, form: &LocalForm, s: &CurvePoint, path: &[OrientedEdge], r: &CurvePoint) -> Result<PadicElement> {
        let (sx, sy) = affine(s)?;
        let (rx, ry) = affine(r)?;
        let vs = self.cov.locate(s)?;
        let vr = self.cov.locate(r)?;
        self.cov.check_path(path)?;
        if path.is_empty() {
            if vs != vr {
                return Err(Error::BrokenPath(0, 0));
            }
            return self.bc_leg(vs, form, (sx, sy), (rx, ry));
        }
        if self.cov.initial(path[0]) != vs {
            return Err(Error::BrokenPath(0, 0));
        }
        if self.cov.terminal(*path.last().unwrap()) != vr {
            return Err(Error::BrokenPath(path.len() - 1, path.len()));
        }
        let refs: Vec<_> = path.iter().map(|oe| self.cov.reference_point(oe.0)).collect::<Result<_>>()?;
        let mut acc = self.bc_leg(vs, form, (sx, sy), (&refs[0].x, &refs[0].y))?;
        for (i, oe) in path.iter().enumerate() {
            let v = self.cov.terminal(*oe);
            let from = (&refs[i].x, &refs[i].y);
            let leg = if i + 1 < path.len() {
                self.bc_leg(v, form, from, (&refs[i + 1].x, &refs[i + 1].y))?
            } else {
                self.bc_leg(v, form, from, (rx, ry))?
            };
            acc = acc.add(&leg);
        }
        Ok(acc)
    }

    /// Integral around a closed walk through the reference points.
    pub fn bc_period(&self, form: &LocalForm, walk: &[OrientedEdge]) -> Result<PadicElement> {
        self.check_closed(walk)?;
        let refs: Vec<_> = walk.iter().map(|oe| self.cov.reference_point(oe.0)).collect::<Result<_>>()?;
        let mut acc = self.field().zero();
        for (i, oe) in walk.iter().enumerate() {
            let next = &refs[(i + 1) % walk.len()];
            let v = self.cov.terminal(*oe);
            acc = acc.add(&self.bc_leg(v, form, (&refs[i].x, &refs[i].y), (&next.x, &next.y))?);
        }
        Ok(acc)
    }

    /// Period of a local form around basis cycle i; the omega_j parts are
    /// cached.
    fn period(&self, i: usize, form: &LocalForm) -> Result<PadicElement> {
        let field = self.field().clone();
        let walk = self.cycles[i].walk.clone();
        let mut acc = field.zero();
        for (j, c) in form.omega.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let cached = self.periods.lock().expect("period cache").get(&(i, j)).cloned();
            let pj = match cached {
                Some(v) => v,
                None => {
                    let mut basis = LocalForm::default();
                    basis.omega = vec![field.zero(); j + 1];
                    basis.omega[j] = field.one();
                    let v = self.bc_period(&basis, &walk)?;
                    self.periods.lock().expect("period cache").insert((i, j), v.clone());
                    v
                }
            };
            acc = acc.add(&c.mul(&pj));
        }
        if !form.nu.is_empty() {
            let nu_only = LocalForm {
                omega: Vec::new(),
                nu: form.nu.clone(),
            };
            acc = acc.add(&self.bc_period(&nu_only, &walk)?);
        }
        Ok(acc)
    }

    fn split_form(&self, form: &MeromorphicForm) -> Result<(LocalForm, MeromorphicForm)> {
        let field = self.field().clone();
        let form = form.expand_third_kind(&self.curve)?;
        let local = LocalForm {
            omega: form.omega.iter().map(|c| to_field(c, &field)).collect(),
            nu: form.nu.iter().map(|(b, d)| (to_field(b, &field), to_field(d, &field))).collect(),
        };
        Ok((local, form))
    }

    /// Contribution of the exact and logarithmic parts, which does not
    /// depend on the path.
    fn global_part(&self, form: &MeromorphicForm, s: &CurvePoint, r: &CurvePoint) -> Result<PadicElement> {
        let field = self.field().clone();
        let mut acc = field.zero();
        for ex in &form.exact {
            acc = acc.add(&to_field(&ex.eval(r)?, &field)).sub(&to_field(&ex.eval(s)?, &field));
        }
        for l in &form.log {
            let ratio = to_field(&l.eval_ratio(r)?, &field).div(&to_field(&l.eval_ratio(s)?, &field))?;
            acc = acc.add(&to_field(&l.coeff, &field).mul(&ratio.log()?));
        }
        Ok(acc)
    }

    /// Truncates to the requested precision, failing if the working
    /// precision did not suffice.
    fn finish(&self, x: PadicElement) -> Result<PadicElement> {
        let n = self.cfg.precision;
        if x.prec() < n {
            return Err(Error::PrecisionExhausted(format!(
                "result known to O(pi^{}) but O(pi^{n}) requested; raise the working cap",
                x.prec()
            )));
        }
        Ok(x.truncate(n))
    }

    /// Berkovich-Coleman period of a form around a closed walk; exact and
    /// logarithmic parts are single valued and contribute nothing.
    pub fn form_period(&self, form: &MeromorphicForm, walk: &[OrientedEdge]) -> Result<PadicElement> {
        let (local, _) = self.split_form(form)?;
        self.finish(self.bc_period(&local, walk)?)
    }

    /// Vologodsky integral from s to r along the shortest path of the graph.
    pub fn integrate(&self, form: &MeromorphicForm, s: &CurvePoint, r: &CurvePoint) -> Result<IntegralReport> {
        let field = self.field().clone();
        let (s, r) = (point_in(s, &field), point_in(r, &field));
        let vs = self.cov.locate(&s)?;
        let vr = self.cov.locate(&r)?;
        let path = self.cov.skeleton_path(vs, vr)?;
        self.integrate_along(form, &s, &r, &path)
    }

    /// Vologodsky integral along a given path of oriented edges.
    pub fn integrate_along(&self, form: &MeromorphicForm, s: &CurvePoint, r: &CurvePoint, path: &[OrientedEdge]) -> Result<IntegralReport> {
        let field = self.field().clone();
        let (s, r) = (point_in(s, &field), point_in(r, &field));
        let (local, full) = self.split_form(form)?;
        let bc = self.bc_path_integral(&local, &s, path, &r)?;
        let mut value = bc.add(&self.global_part(&full, &s, &r)?);
        let mut corrections = Vec::new();
        for (i, eta) in self.etas.iter().enumerate() {
            let t = tropical_integral(eta, path);
            if t.is_zero() {
                corrections.push(Correction {
                    cycle: i,
                    tropical: t,
                    period: None,
                });
                continue;
            }
            let period = self.period(i, &local)?;
            let tf = field.from_rational(&t);
            value = value.sub(&period.mul(&tf));
            corrections.push(Correction {
                cycle: i,
                tropical: t,
                period: Some(period),
            });
        }
        let value = self.finish(value)?;
        let start_vertex = self.cov.locate(&s)?;
        let end_vertex = self.cov.locate(&r)?;
        Ok(IntegralReport {
            value,
            bc,
            path: path.to_vec(),
            start_vertex,
            end_vertex,
            corrections,
        })
    }

    /// The local height at p of an elliptic curve,
    /// V int_{-R}^{R} y(P)/(x - x(P)) dx/y + V int_{-R}^{R} omega_0 V int_{-P}^{P} omega_1.
    pub fn coleman_gross_hp(&self, p: &CurvePoint, r: &CurvePoint) -> Result<PadicElement> {
        let field = self.field().clone();
        let (p, r) = (point_in(p, &field), point_in(r, &field));
        let (px, _) = affine(&p)?;
        let (rx, _) = affine(&r)?;
        if px.sub(rx).is_zero() {
            return Err(Error::DegenerateInputPoints);
        }
        let third = height_integrand(&p, &self.curve)?;
        let (mr, mp) = (r.involution(), p.involution());
        let a = self.integrate(&third, &mr, &r)?.value;
        let w0 = self.integrate(&MeromorphicForm::omega(&field, 0), &mr, &r)?.value;
        let w1 = self.integrate(&MeromorphicForm::omega(&field, 1), &mp, &p)?.value;
        self.finish(a.add(&w0.mul(&w1)))
    }
}
