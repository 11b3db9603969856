#![allow(dead_code)]

use rand::rngs::StdRng;
use rand::Rng;
use volint::covering::OrientedEdge;
use volint::curve::{CurvePoint, HyperellipticCurve, MeromorphicForm};
use volint::padic::{Field, FieldCtx, FieldSpec, PadicElement};
use volint::polyring::PolyK;
use volint::vologodsky::{Config, Vologodsky};

pub const EX71_F: [i64; 4] = [555015942, -1351755, 0, 1];
pub const EX72_F: [i64; 7] = [5, 0, -4, 10, -8, 0, 1];

/// Table labels e1..e6 as oriented edges of the computed graph.
pub const E: [OrientedEdge; 6] = [(0, 1), (1, 1), (3, -1), (2, -1), (4, 1), (5, 1)];

pub fn neg(e: OrientedEdge) -> OrientedEdge {
    (e.0, -e.1)
}

pub fn c1() -> Vec<OrientedEdge> {
    vec![E[0], E[1], E[2], E[3]]
}

pub fn c2() -> Vec<OrientedEdge> {
    vec![E[2], E[3], E[4], E[5]]
}

pub fn ex71_curve() -> HyperellipticCurve {
    let k = FieldCtx::new(&FieldSpec::qp(43), 20).unwrap();
    HyperellipticCurve::from_ints(&k, &EX71_F).unwrap()
}

pub fn ex72_curve() -> HyperellipticCurve {
    let k = FieldCtx::new(&FieldSpec::extension(5, &[-5, 0, 0, 0, 1], "a"), 40).unwrap();
    HyperellipticCurve::from_ints(&k, &EX72_F).unwrap()
}

pub fn ex71(cfg: Config) -> Vologodsky {
    Vologodsky::new(&ex71_curve(), cfg).unwrap()
}

/// The genus 2 example with the cycle basis C1, C2 used in the tables.
pub fn ex72(cfg: Config) -> Vologodsky {
    let mut v = Vologodsky::new(&ex72_curve(), cfg).unwrap();
    v.set_cycles(vec![c1(), c2()]).unwrap();
    v
}

/// sum c pi^e for (c, e) pairs.
pub fn pi_series(field: &Field, terms: &[(i64, i64)]) -> PadicElement {
    let pi = field.uniformizer();
    terms
        .iter()
        .fold(field.zero(), |acc, &(c, e)| acc.add(&pi.pow(e as u64).mul_int(c)))
}

pub fn rand_digits(field: &Field, rng: &mut StdRng, n: usize) -> PadicElement {
    let p = field.p as i64;
    let terms: Vec<(i64, i64)> = (0..n).map(|i| (rng.gen_range(0..p), i as i64)).collect();
    pi_series(field, &terms)
}

pub fn rand_unit(field: &Field, rng: &mut StdRng) -> PadicElement {
    let p = field.p as i64;
    field.from_int(rng.gen_range(1..p)).add(&rand_digits(field, rng, 3).shift_pi(1))
}

/// A random K-point whose reduction lies in the given vertex of the graph
/// and away from the branch points of its reduced curve.
pub fn random_point_in(v: &Vologodsky, vertex: usize, rng: &mut StdRng) -> CurvePoint {
    let field = v.field().clone();
    let node = v.cov.vertices[vertex].node;
    let model = v.cov.model(node).unwrap();
    for _ in 0..2000 {
        let t = rand_digits(&field, rng, 4);
        if !model.contains_local(&t) || (!model.is_split() && !model.g.eval(&t).is_unit()) {
            continue;
        }
        let x = model.to_global(&t);
        let Ok(y) = v.curve.f.eval(&x).sqrt() else { continue };
        let y = if rng.gen_bool(0.5) { y } else { y.neg() };
        let pt = CurvePoint::affine(x, y);
        if v.cov.locate(&pt).ok() == Some(vertex) {
            return pt;
        }
    }
    panic!("no random point found in vertex {vertex}");
}

/// A random affine K-point of the curve with integral x.
pub fn random_point(v: &Vologodsky, rng: &mut StdRng) -> CurvePoint {
    let field = v.field().clone();
    loop {
        let x = field.from_int(rng.gen_range(-3000..3000));
        if let Ok(y) = v.curve.f.eval(&x).sqrt() {
            if !y.is_zero() {
                return CurvePoint::affine(x, y);
            }
        }
    }
}

pub fn xy(pt: &CurvePoint) -> (PadicElement, PadicElement) {
    (pt.x().unwrap().clone(), pt.y().unwrap().clone())
}

/// d(y P(x)) = (2 P' f + P f') dx/2y as a combination of omega_i.
pub fn exact_form(curve: &HyperellipticCurve, p: &PolyK) -> MeromorphicForm {
    let f = &curve.f;
    let num = p.derivative().mul(f).scale(&curve.field.from_int(2)).add(&p.mul(&f.derivative()));
    let mut form = MeromorphicForm::zero(&curve.field);
    form.omega = num.coeffs.clone();
    form
}

pub fn exact_value(p: &PolyK, pt: &CurvePoint) -> PadicElement {
    let (x, y) = xy(pt);
    y.mul(&p.eval(&x))
}

/// h = (y - A)/(y + A) with A interpolating K-points, so that f - A^2 splits
/// over K; returns A and dlog h written with omega_i and nu_beta.
pub fn log_form(curve: &HyperellipticCurve, pts: &[CurvePoint]) -> Option<(PolyK, MeromorphicForm)> {
    let field = &curve.field;
    // Lagrange interpolation through (x_i, y_i)
    let mut a = PolyK::zero(field);
    for (i, pi) in pts.iter().enumerate() {
        let (xi, yi) = xy(pi);
        let mut basis = PolyK::one(field);
        let mut den = field.one();
        for (j, pj) in pts.iter().enumerate() {
            if i != j {
                let xj = pj.x().unwrap();
                basis = basis.mul(&PolyK::linear(xj));
                den = den.mul(&xi.sub(xj));
            }
        }
        a = a.add(&basis.scale(&yi.div(&den).ok()?));
    }
    let f = &curve.f;
    let d = f.sub(&a.mul(&a)).trimmed();
    let lc = d.leading();
    if lc.valuation().is_none() {
        return None;
    }
    let dm = d.div_scalar(&lc).ok()?;
    let mut known = PolyK::one(field);
    let mut roots: Vec<PadicElement> = pts.iter().map(|p| p.x().unwrap().clone()).collect();
    for r in &roots {
        known = known.mul(&PolyK::linear(r));
    }
    let (rest, rem) = dm.divrem_monic(&known);
    if rem.coeffs.iter().any(|c| c.valuation().is_some_and(|v| v < field.cap / 2)) {
        return None;
    }
    match rest.degree() {
        0 => {}
        1 => roots.push(rest.coeff(0).neg().div(&rest.coeff(1)).ok()?),
        2 => {
            let (c0, c1, c2) = (rest.coeff(0), rest.coeff(1), rest.coeff(2));
            let disc = c1.mul(&c1).sub(&c0.mul(&c2).mul_int(4));
            let s = disc.sqrt().ok()?;
            let two_c2 = c2.mul_int(2);
            roots.push(c1.neg().add(&s).div(&two_c2).ok()?);
            roots.push(c1.neg().sub(&s).div(&two_c2).ok()?);
        }
        _ => return None,
    }
    for i in 0..roots.len() {
        for j in 0..i {
            if roots[i].sub(&roots[j]).valuation().map_or(true, |v| v > 2) {
                return None;
            }
        }
    }
    // dlog h = 2 (A f' - 2 A' f)/(f - A^2) dx/2y
    let n = a.mul(&f.derivative()).sub(&a.derivative().mul(f).scale(&field.from_int(2))).scale(&field.from_int(2));
    let (quot, _) = n.scale(&lc.inv().ok()?).divrem_monic(&dm);
    let dd = d.derivative();
    let mut form = MeromorphicForm::zero(field);
    form.omega = quot.coeffs.clone();
    for r in roots {
        let res = n.eval(&r).div(&dd.eval(&r)).ok()?;
        form.nu.push((r, res));
    }
    Some((a, form))
}

pub fn log_value(a: &PolyK, s: &CurvePoint, r: &CurvePoint) -> PadicElement {
    let h = |pt: &CurvePoint| {
        let (x, y) = xy(pt);
        let ax = a.eval(&x);
        y.sub(&ax).div(&y.add(&ax)).unwrap()
    };
    h(r).div(&h(s)).unwrap().log().unwrap()
}

pub fn agree(a: &PadicElement, b: &PadicElement, n: i64) -> bool {
    a.sub(b).valuation_or_prec() >= n
}

/// One random instance of the integration axioms inside one wide open:
/// additivity over three points, the fundamental theorem for d(y P(x)),
/// and dlog h integrating to Log h.
pub fn axioms_in_vertex(v: &Vologodsky, vertex: usize, rng: &mut StdRng) -> Result<(), String> {
    let field = v.field().clone();
    let n = v.cfg.precision;
    let s = random_point_in(v, vertex, rng);
    let r = random_point_in(v, vertex, rng);
    let q = random_point_in(v, vertex, rng);
    let int = |form: &MeromorphicForm, a: &CurvePoint, b: &CurvePoint| {
        v.integrate_along(form, a, b, &[]).map(|x| x.value).map_err(|e| e.to_string())
    };
    // random omega_i and nu_beta at the x-coordinate of a K-point
    let g2 = 2 * v.curve.genus() + 1;
    let mut form = MeromorphicForm::zero(&field);
    form.omega = (0..g2).map(|_| rand_digits(&field, rng, 3)).collect();
    // the pole must avoid the endpoints
    let b = loop {
        let b = random_point_in(v, vertex, rng);
        if [&s, &r, &q].iter().all(|pt| !pt.x().unwrap().sub(b.x().unwrap()).is_zero()) {
            break b;
        }
    };
    form.nu.push((b.x().unwrap().clone(), rand_unit(&field, rng)));
    let lhs = int(&form, &s, &r)?.add(&int(&form, &r, &q)?);
    let rhs = int(&form, &s, &q)?;
    if !agree(&lhs, &rhs, n) {
        return Err(format!("additivity: {lhs} vs {rhs}"));
    }
    let poly = PolyK::new(&field, (0..4).map(|_| rand_digits(&field, rng, 3)).collect());
    let got = int(&exact_form(&v.curve, &poly), &s, &r)?;
    let want = exact_value(&poly, &r).sub(&exact_value(&poly, &s));
    if !agree(&got, &want, n) {
        return Err(format!("exact form: {got} vs {want}"));
    }
    let npts = v.curve.genus() + 2;
    for _ in 0..400 {
        let pts: Vec<_> = (0..npts).map(|_| random_point(v, rng)).collect();
        let Some((a, lf)) = log_form(&v.curve, &pts) else { continue };
        if lf.nu.iter().any(|(beta, _)| [&s, &r].iter().any(|pt| pt.x().unwrap().sub(beta).valuation_or_prec() >= n)) {
            continue;
        }
        let got = int(&lf, &s, &r)?;
        let want = log_value(&a, &s, &r);
        if !agree(&got, &want, n) {
            return Err(format!("dlog: {got} vs {want}"));
        }
        return Ok(());
    }
    Err("no split log form found".into())
}

// ---- reference values ----

pub struct Golden71 {
    pub third_p_over_r: PadicElement,
    pub w0_r: PadicElement,
    pub w1_p: PadicElement,
    pub h: PadicElement,
    pub third_r_over_p: PadicElement,
    pub w1_r: PadicElement,
    pub h_torsion: PadicElement,
    pub away: PadicElement,
}

pub fn golden71(field: &Field) -> Golden71 {
    let s = |t: &[(i64, i64)]| pi_series(field, t);
    Golden71 {
        third_p_over_r: s(&[(29, 1), (29, 2), (18, 3), (29, 4), (3, 5)]),
        w0_r: s(&[(12, 2), (1, 3), (18, 4), (40, 5)]),
        w1_p: s(&[(25, 0), (11, 1), (34, 2), (26, 3), (25, 4), (34, 5)]),
        h: s(&[(29, 1), (28, 2), (10, 3), (42, 4), (19, 5)]),
        third_r_over_p: s(&[(29, 1), (21, 2), (35, 3), (20, 4), (10, 5)]),
        w1_r: s(&[(40, 0), (8, 1), (34, 2), (26, 3), (25, 4), (34, 5)]),
        h_torsion: s(&[(1, 1), (21, 2), (28, 3), (25, 4), (3, 5)]),
        away: s(&[(42, 1), (21, 2), (14, 3), (17, 4), (39, 5)]),
    }
}

/// The point whose integrals the elliptic tables list (R + 3T with T the
/// 6-torsion point (-501, 33264)).
pub const EX71_P: (i64, i64) = (2523, 114912);
pub const EX71_P_PRINTED: (i64, i64) = (-501, 33264);
pub const EX71_R: (i64, i64) = (219, 16416);

/// Genus 2 tables as (exponent of a, coefficient) lists for i = 0..3.
pub fn golden72(field: &Field) -> [[PadicElement; 4]; 4] {
    let s = |t: &[(i64, i64)]| pi_series(field, t);
    let gamma = [
        s(&[(2, 4), (3, 8), (4, 12), (2, 16), (1, 20), (2, 24)]),
        s(&[(1, 4), (1, 8), (1, 12), (1, 24), (1, 28)]),
        s(&[(1, 4), (2, 24)]),
        s(&[(1, 0), (3, 4), (3, 8), (2, 12), (4, 16), (1, 20)]),
    ];
    let gamma1 = [
        s(&[(1, 8), (3, 16), (1, 20)]),
        s(&[(2, 4), (1, 12), (3, 24), (4, 28)]),
        s(&[(1, 12), (4, 16), (3, 28)]),
        s(&[(2, 0), (3, 4), (2, 8), (4, 16), (2, 20), (1, 24), (1, 28)]),
    ];
    let gamma2 = [
        s(&[(4, 4), (1, 8), (1, 12), (2, 16), (3, 20), (3, 24), (3, 28)]),
        s(&[(1, 4), (2, 8), (3, 12), (4, 16), (4, 20), (2, 24)]),
        s(&[(2, 4), (4, 8), (1, 12), (3, 16), (1, 20), (4, 24), (4, 28)]),
        s(&[(4, 0), (1, 4), (4, 8), (2, 12), (4, 16), (4, 20), (1, 24), (2, 28)]),
    ];
    let five = |t: &[(i64, i64)]| t.iter().fold(field.zero(), |acc, &(c, e)| acc.add(&field.from_int(5).pow(e as u64).mul_int(c)));
    let fin = [
        field.zero(),
        field.zero(),
        field.zero(),
        five(&[(1, 0), (3, 1), (1, 2), (3, 3), (1, 4), (3, 5), (1, 6), (3, 7)]),
    ];
    [gamma, gamma1, gamma2, fin]
}

pub fn ex72_points(v: &Vologodsky) -> (CurvePoint, CurvePoint) {
    let r = v.curve.point_from_ints(1, 2).unwrap();
    let s = v.curve.point_from_ints(1, -2).unwrap();
    (s, r)
}

pub fn gamma() -> Vec<OrientedEdge> {
    vec![E[0], E[1]]
}

pub fn omega_local(field: &Field, i: usize) -> volint::wideopen::LocalForm {
    let mut lf = volint::wideopen::LocalForm::default();
    lf.omega = vec![field.zero(); i + 1];
    lf.omega[i] = field.one();
    lf
}

// ---- a tree-shaped covering ----

/// y^2 = x(x - 25)(x - 50)(x - 1)(x - 4) over Q_5(sqrt 5): one odd cluster,
/// two vertices of reduced degree 3 joined by one edge.
pub fn tree_curve() -> HyperellipticCurve {
    let k = FieldCtx::new(&FieldSpec::extension(5, &[-5, 0, 1], "s"), 30).unwrap();
    HyperellipticCurve::from_ints(&k, &[0, 5000, -6550, 1629, -80, 1]).unwrap()
}

/// Additive stand-in for basis integrals on reduced curves of degree 3.
pub struct Antiderivatives;

impl volint::wideopen::BasisIntegrator for Antiderivatives {
    fn omega(
        &self,
        _m: &volint::wideopen::VertexModel,
        i: usize,
        s: &volint::wideopen::LocalPoint,
        r: &volint::wideopen::LocalPoint,
    ) -> volint::Result<PadicElement> {
        let phi = |p: &volint::wideopen::LocalPoint| p.t.pow(i as u64 + 1).mul(&p.yt);
        Ok(phi(r).sub(&phi(s)))
    }

    fn nu(
        &self,
        _m: &volint::wideopen::VertexModel,
        beta: &PadicElement,
        s: &volint::wideopen::LocalPoint,
        r: &volint::wideopen::LocalPoint,
    ) -> volint::Result<PadicElement> {
        let phi = |p: &volint::wideopen::LocalPoint| p.t.sub(beta).mul(&p.yt).add(&p.t);
        Ok(phi(r).sub(&phi(s)))
    }
}

pub fn tree(n: i64) -> Vologodsky {
    let mut v = Vologodsky::new(&tree_curve(), Config::new(n)).unwrap();
    v.set_backend(Box::new(Antiderivatives));
    v
}

fn random_form(v: &Vologodsky, rng: &mut StdRng) -> MeromorphicForm {
    let field = v.field().clone();
    let mut form = MeromorphicForm::zero(&field);
    form.omega = (0..5).map(|_| rand_digits(&field, rng, 3)).collect();
    let b = random_point_in(v, rng.gen_range(0..v.cov.vertices.len()), rng);
    form.nu.push((b.x().unwrap().clone(), rand_unit(&field, rng)));
    form
}

/// On a tree the Vologodsky integral is the Berkovich-Coleman integral: no
/// corrections, equal to the leg sum, and additive across vertices.
pub fn tree_case(v: &Vologodsky, rng: &mut StdRng) -> Result<(), String> {
    let n = v.cfg.precision;
    let s = random_point_in(v, 0, rng);
    let r = random_point_in(v, 1, rng);
    let q = random_point_in(v, rng.gen_range(0..2), rng);
    let form = random_form(v, rng);
    let e = |x: volint::Error| x.to_string();
    let rep = v.integrate(&form, &s, &r).map_err(e)?;
    if !rep.corrections.is_empty() {
        return Err("tree graph produced corrections".into());
    }
    let local = volint::wideopen::LocalForm {
        omega: form.omega.clone(),
        nu: form.nu.clone(),
    };
    let pe = v.cov.reference_point(0).map_err(e)?;
    let (sx, sy) = xy(&s);
    let (rx, ry) = xy(&r);
    let legs = v
        .bc_leg(0, &local, (&sx, &sy), (&pe.x, &pe.y))
        .map_err(e)?
        .add(&v.bc_leg(1, &local, (&pe.x, &pe.y), (&rx, &ry)).map_err(e)?);
    if !agree(&rep.value, &legs, n) {
        return Err(format!("V {} vs BC legs {}", rep.value, legs));
    }
    let a = v.integrate(&form, &s, &q).map_err(e)?.value;
    let b = v.integrate(&form, &q, &r).map_err(e)?.value;
    if !agree(&a.add(&b), &rep.value, n) {
        return Err("additivity across vertices failed".into());
    }
    Ok(())
}

// ---- pole reduction ----

/// Builds a random expansion on a model, reduces it, and compares
/// 2 g h' + g' h + sum omega + sum nu with the expansion at a sample point.
pub fn reduction_identity(m: &volint::wideopen::VertexModel, rng: &mut StdRng, digits: i64) -> Result<(), String> {
    use volint::wideopen::{pole_reduce, Expansion};
    let field = m.field.clone();
    let mut x = Expansion::zero(m.holes.len());
    x.entire = (0..rng.gen_range(0..7)).map(|_| rand_digits(&field, rng, 3)).collect();
    for p in x.principal.iter_mut() {
        *p = (0..rng.gen_range(0..6)).map(|_| rand_digits(&field, rng, 3)).collect();
    }
    let sample = loop {
        let t = rand_digits(&field, rng, 3).add(&field.from_int(rng.gen_range(0..3)).shift_pi(-1));
        if m.contains_local(&t) && m.holes.iter().all(|h| t.sub(&h.center).valuation() == Some(0)) {
            break t;
        }
    };
    if rng.gen_bool(0.5) {
        let beta = rand_digits(&field, rng, 3);
        if beta.sub(&sample).valuation() == Some(0) && m.holes.iter().all(|h| beta.sub(&h.center).valuation() == Some(0)) {
            x.poles.push((beta, rand_unit(&field, rng)));
        }
    }
    let red = pole_reduce(m, &x).map_err(|e| e.to_string())?;
    if red.omega.len() != m.reduced_degree().saturating_sub(1) {
        return Err("wrong number of omega terms".into());
    }
    let t = &sample;
    let g = &m.g;
    let mut h = field.zero();
    let mut hp = field.zero();
    for (k, c) in red.exact_poly.iter().enumerate() {
        h = h.add(&c.mul(&t.pow(k as u64)));
        if k > 0 {
            hp = hp.add(&c.mul_int(k as i64).mul(&t.pow(k as u64 - 1)));
        }
    }
    for (beta, rs) in &red.exact_poles {
        let zinv = t.sub(beta).inv().unwrap();
        for (i, c) in rs.iter().enumerate() {
            let k = i as u64 + 1;
            h = h.add(&c.mul(&zinv.pow(k)));
            hp = hp.sub(&c.mul_int(k as i64).mul(&zinv.pow(k + 1)));
        }
    }
    let mut lhs = g.eval(t).mul(&hp).mul_int(2).add(&g.derivative().eval(t).mul(&h));
    for (i, c) in red.omega.iter().enumerate() {
        lhs = lhs.add(&c.mul(&t.pow(i as u64)));
    }
    for (beta, d) in &red.nu {
        lhs = lhs.add(&d.div(&t.sub(beta)).unwrap());
    }
    let mut rhs = field.zero();
    for (k, c) in x.entire.iter().enumerate() {
        rhs = rhs.add(&c.mul(&t.pow(k as u64)));
    }
    for (j, hole) in m.holes.iter().enumerate() {
        let zinv = t.sub(&hole.center).inv().unwrap();
        for (i, c) in x.principal[j].iter().enumerate() {
            rhs = rhs.add(&c.mul(&zinv.pow(i as u64 + 1)));
        }
    }
    for (beta, res) in &x.poles {
        rhs = rhs.add(&res.div(&t.sub(beta)).unwrap());
    }
    if !agree(&lhs, &rhs, digits) {
        return Err(format!("{lhs} vs {rhs}"));
    }
    Ok(())
}

/// Models with reduced degree 1, 2 and 3.
pub fn reduction_models() -> Vec<volint::wideopen::VertexModel> {
    use volint::covering::cluster_roots;
    use volint::wideopen::VertexModel;
    let c = ex71_curve();
    let mut out = vec![VertexModel::build(&cluster_roots(&c.f).unwrap(), 0).unwrap()];
    let c = ex72_curve();
    out.push(VertexModel::build(&cluster_roots(&c.f).unwrap(), 1).unwrap());
    let c = tree_curve();
    out.push(VertexModel::build(&cluster_roots(&c.f).unwrap(), 0).unwrap());
    out
}

// ---- graphs ----

/// A random connected multigraph on up to 6 vertices with first Betti
/// number at most 4 (loops and parallel edges allowed).
pub fn random_graph(rng: &mut StdRng) -> volint::tropical::Graph {
    let n = rng.gen_range(1..=6);
    let mut edges = Vec::new();
    for i in 1..n {
        let j = rng.gen_range(0..i);
        edges.push(if rng.gen_bool(0.5) { (i, j) } else { (j, i) });
    }
    for _ in 0..rng.gen_range(0..=4) {
        edges.push((rng.gen_range(0..n), rng.gen_range(0..n)));
    }
    // shuffle so that tree edges are not always first
    for i in (1..edges.len()).rev() {
        let j = rng.gen_range(0..=i);
        edges.swap(i, j);
    }
    volint::tropical::Graph::new(n, edges)
}

pub fn dual_basis_check(g: &volint::tropical::Graph) -> Result<(), String> {
    use num_traits::{One, Zero};
    use volint::tropical::dot;
    let cycles = g.cycle_basis().map_err(|e| e.to_string())?;
    if cycles.len() != g.betti() {
        return Err("cycle basis has the wrong size".into());
    }
    let coeffs: Vec<_> = cycles.iter().map(|c| c.coeffs.clone()).collect();
    for c in &cycles {
        if g.chain(&c.walk) != c.coeffs || !g.is_cycle(&c.coeffs) {
            return Err("basis walk is not a closed cycle".into());
        }
    }
    let etas = g.dual_basis(&coeffs).map_err(|e| e.to_string())?;
    for (i, eta) in etas.iter().enumerate() {
        if !g.is_harmonic(eta) {
            return Err("dual form is not harmonic".into());
        }
        for (j, c) in coeffs.iter().enumerate() {
            let want = if i == j { volint::tropical::Q::one() } else { volint::tropical::Q::zero() };
            if dot(eta, c) != want {
                return Err(format!("<eta_{i}, C_{j}> = {}", dot(eta, c)));
            }
        }
    }
    Ok(())
}

// ---- logarithm ----

pub fn random_nonzero(field: &Field, rng: &mut StdRng) -> PadicElement {
    rand_unit(field, rng).shift_pi(rng.gen_range(-3..4))
}

pub fn log_homomorphism(field: &Field, rng: &mut StdRng) -> Result<(), String> {
    let a = random_nonzero(field, rng);
    let b = random_nonzero(field, rng);
    let e = |x: volint::Error| x.to_string();
    let lhs = a.mul(&b).log().map_err(e)?;
    let rhs = a.log().map_err(e)?.add(&b.log().map_err(e)?);
    if !agree(&lhs, &rhs, field.cap - 2 * field.e - 4) {
        return Err(format!("Log({a} * {b}): {lhs} vs {rhs}"));
    }
    Ok(())
}
