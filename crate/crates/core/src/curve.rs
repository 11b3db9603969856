//! Hyperelliptic curves y^2 = f(x), their points, and meromorphic 1-forms in
//! the spanning set omega_i = x^i dx/2y, nu_beta = dx/((x - beta) 2y).

use crate::error::{Error, Result};
use crate::padic::{Field, PadicElement};
use crate::polyring::PolyK;
use num_rational::BigRational;

#[derive(Clone, Debug)]
pub struct HyperellipticCurve {
    pub field: Field,
    pub f: PolyK,
    /// Exact coefficients of f, low-to-high.
    pub f_rational: Vec<BigRational>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum CurvePoint {
    Affine { x: PadicElement, y: PadicElement },
    /// The unique point at infinity (odd degree).
    Infinity,
    /// For even degree: the point where y / x^(d/2) tends to +1.
    InfinityPlus,
    InfinityMinus,
}

impl CurvePoint {
    pub fn affine(x: PadicElement, y: PadicElement) -> Self {
        CurvePoint::Affine { x, y }
    }

    pub fn x(&self) -> Option<&PadicElement> {
        match self {
            CurvePoint::Affine { x, .. } => Some(x),
            _ => None,
        }
    }

    pub fn y(&self) -> Option<&PadicElement> {
        match self {
            CurvePoint::Affine { y, .. } => Some(y),
            _ => None,
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, CurvePoint::Affine { .. })
    }

    pub fn is_weierstrass(&self) -> bool {
        match self {
            CurvePoint::Affine { y, .. } => y.is_zero(),
            CurvePoint::Infinity => true,
            _ => false,
        }
    }

    /// The hyperelliptic involution (x, y) -> (x, -y).
    pub fn involution(&self) -> Self {
        match self {
            CurvePoint::Affine { x, y } => CurvePoint::Affine {
                x: x.clone(),
                y: y.neg(),
            },
            CurvePoint::Infinity => CurvePoint::Infinity,
            CurvePoint::InfinityPlus => CurvePoint::InfinityMinus,
            CurvePoint::InfinityMinus => CurvePoint::InfinityPlus,
        }
    }

    fn same(&self, other: &Self) -> bool {
        match (self, other) {
            (CurvePoint::Affine { x: a, y: b }, CurvePoint::Affine { x: c, y: d }) => {
                a.sub(c).is_zero() && b.sub(d).is_zero()
            }
            _ => self == other,
        }
    }
}

impl HyperellipticCurve {
    /// y^2 = f(x) with f monic, integral, squarefree, of degree >= 3.
    pub fn new(field: &Field, f_rational: &[BigRational]) -> Result<Self> {
        let mut fr = f_rational.to_vec();
        while fr.len() > 1 && fr.last().map_or(false, |c| num_traits::Zero::is_zero(c)) {
            fr.pop();
        }
        if fr.len() < 4 {
            return Err(Error::InvalidCurve("degree of f must be at least 3".into()));
        }
        if !num_traits::One::is_one(fr.last().unwrap()) {
            return Err(Error::InvalidCurve("f must be monic".into()));
        }
        let f = PolyK::from_rationals(field, &fr);
        if f.coeffs.iter().any(|c| !c.is_integral()) {
            return Err(Error::InvalidCurve("f must have integral coefficients".into()));
        }
        let curve = HyperellipticCurve {
            field: field.clone(),
            f,
            f_rational: fr,
        };
        if curve.discriminant_vanishes() {
            return Err(Error::InvalidCurve("f is not squarefree".into()));
        }
        Ok(curve)
    }

    pub fn from_ints(field: &Field, cs: &[i64]) -> Result<Self> {
        let fr: Vec<BigRational> = cs.iter().map(|&c| BigRational::from_integer(c.into())).collect();
        Self::new(field, &fr)
    }

    fn discriminant_vanishes(&self) -> bool {
        // gcd(f, f') over Q via exact rational Euclid
        let mut a = self.f_rational.clone();
        let mut b: Vec<BigRational> = a
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c * BigRational::from_integer((i as i64).into()))
            .collect();
        use num_traits::Zero;
        let trim = |v: &mut Vec<BigRational>| {
            while v.len() > 1 && v.last().unwrap().is_zero() {
                v.pop();
            }
        };
        trim(&mut b);
        while !(b.len() == 1 && b[0].is_zero()) {
            let mut r = a.clone();
            while r.len() >= b.len() && !(r.len() == 1 && r[0].is_zero()) {
                let c = r.last().unwrap() / b.last().unwrap();
                let shift = r.len() - b.len();
                for (i, bc) in b.iter().enumerate() {
                    r[shift + i] = &r[shift + i] - &c * bc;
                }
                r.pop();
                if r.is_empty() {
                    r.push(BigRational::zero());
                }
                trim(&mut r);
                if r.len() < b.len() {
                    break;
                }
            }
            a = std::mem::replace(&mut b, r);
        }
        a.len() > 1
    }

    pub fn degree(&self) -> usize {
        self.f_rational.len() - 1
    }

    pub fn genus(&self) -> usize {
        (self.degree() - 1) / 2
    }

    pub fn is_odd_degree(&self) -> bool {
        self.degree() % 2 == 1
    }

    /// Checks y^2 = f(x) to within the precision of the point.
    pub fn point(&self, x: PadicElement, y: PadicElement) -> Result<CurvePoint> {
        let lhs = y.square();
        let rhs = self.f.eval(&x);
        if !lhs.sub(&rhs).is_zero() {
            return Err(Error::NotOnCurve(format!("({x}, {y})")));
        }
        Ok(CurvePoint::Affine { x, y })
    }

    pub fn point_from_ints(&self, x: i64, y: i64) -> Result<CurvePoint> {
        self.point(self.field.from_int(x), self.field.from_int(y))
    }

    pub fn contains(&self, pt: &CurvePoint) -> bool {
        match pt {
            CurvePoint::Affine { x, y } => y.square().sub(&self.f.eval(x)).is_zero(),
            CurvePoint::Infinity => self.is_odd_degree(),
            _ => !self.is_odd_degree(),
        }
    }
}

/// Exact rational function of x and y of the form A(x)/B(x) + y C(x)/D(x).
#[derive(Clone, Debug)]
pub struct ExactPart {
    pub a: PolyK,
    pub b: PolyK,
    pub c: PolyK,
    pub d: PolyK,
}

impl ExactPart {
    pub fn eval(&self, pt: &CurvePoint) -> Result<PadicElement> {
        let (x, y) = match pt {
            CurvePoint::Affine { x, y } => (x, y),
            _ => return Err(Error::Invalid("exact part evaluated at infinity".into())),
        };
        let first = self.a.eval(x).div(&self.b.eval(x))?;
        let second = y.mul(&self.c.eval(x)).div(&self.d.eval(x))?;
        Ok(first.add(&second))
    }
}

/// coeff * dlog(num(x)/den(x)).
#[derive(Clone, Debug)]
pub struct LogPart {
    pub num: PolyK,
    pub den: PolyK,
    pub coeff: PadicElement,
}

impl LogPart {
    pub fn eval_ratio(&self, pt: &CurvePoint) -> Result<PadicElement> {
        let x = pt
            .x()
            .ok_or_else(|| Error::Invalid("logarithmic part evaluated at infinity".into()))?;
        self.num.eval(x).div(&self.den.eval(x))
    }
}

/// sum c_i omega_i + sum d_j nu_{beta_j} + third-kind terms + dF + sum e_k dlog u_k.
#[derive(Clone, Debug)]
pub struct MeromorphicForm {
    pub field: Field,
    pub omega: Vec<PadicElement>,
    pub nu: Vec<(PadicElement, PadicElement)>,
    pub third_kind: Vec<(CurvePoint, CurvePoint, PadicElement)>,
    pub exact: Vec<ExactPart>,
    pub log: Vec<LogPart>,
}

impl MeromorphicForm {
    pub fn zero(field: &Field) -> Self {
        MeromorphicForm {
            field: field.clone(),
            omega: Vec::new(),
            nu: Vec::new(),
            third_kind: Vec::new(),
            exact: Vec::new(),
            log: Vec::new(),
        }
    }

    /// omega_i = x^i dx/2y.
    pub fn omega(field: &Field, i: usize) -> Self {
        let mut f = Self::zero(field);
        f.omega = vec![field.zero(); i + 1];
        f.omega[i] = field.one();
        f
    }

    /// nu_beta = dx/((x - beta) 2y).
    pub fn nu(beta: &PadicElement) -> Self {
        let field = beta.field().clone();
        let mut f = Self::zero(&field);
        f.nu.push((beta.clone(), field.one()));
        f
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.omega.len().max(other.omega.len());
        let z = self.field.zero();
        let omega = (0..n)
            .map(|i| {
                self.omega
                    .get(i)
                    .unwrap_or(&z)
                    .add(other.omega.get(i).unwrap_or(&z))
            })
            .collect();
        let mut out = self.clone();
        out.omega = omega;
        out.nu.extend(other.nu.iter().cloned());
        out.third_kind.extend(other.third_kind.iter().cloned());
        out.exact.extend(other.exact.iter().cloned());
        out.log.extend(other.log.iter().cloned());
        out
    }

    pub fn scale(&self, s: &PadicElement) -> Self {
        let mut out = self.clone();
        out.omega = self.omega.iter().map(|c| c.mul(s)).collect();
        out.nu = self.nu.iter().map(|(b, c)| (b.clone(), c.mul(s))).collect();
        out.third_kind = self
            .third_kind
            .iter()
            .map(|(p, q, c)| (p.clone(), q.clone(), c.mul(s)))
            .collect();
        out.exact = self
            .exact
            .iter()
            .map(|e| ExactPart {
                a: e.a.scale(s),
                b: e.b.clone(),
                c: e.c.scale(s),
                d: e.d.clone(),
            })
            .collect();
        out.log = self
            .log
            .iter()
            .map(|l| LogPart {
                num: l.num.clone(),
                den: l.den.clone(),
                coeff: l.coeff.mul(s),
            })
            .collect();
        out
    }

    /// Replace third-kind entries by their spanning-set decomposition.
    pub fn expand_third_kind(&self, curve: &HyperellipticCurve) -> Result<Self> {
        let mut out = self.clone();
        out.third_kind.clear();
        for (p, q, c) in &self.third_kind {
            out = out.add(&decompose_third_kind(p, q, curve)?.scale(c));
        }
        Ok(out)
    }
}

/// (y + y(P))/(x - x(P)) dx/2y = 1/2 dlog(x - x(P)) + y(P) nu_{x(P)}.
fn point_term(p: &CurvePoint, field: &Field) -> MeromorphicForm {
    let (x, y) = match p {
        CurvePoint::Affine { x, y } => (x, y),
        _ => unreachable!("finite point expected"),
    };
    let mut form = MeromorphicForm::zero(field);
    form.log.push(LogPart {
        num: PolyK::linear(x),
        den: PolyK::one(field),
        coeff: field.from_ratio(1, 2),
    });
    if !y.is_zero() {
        form.nu.push((x.clone(), y.clone()));
    }
    form
}

/// A third-kind form with residual divisor (P) - (Q), from the case table
/// for the spanning set.
pub fn decompose_third_kind(
    p: &CurvePoint,
    q: &CurvePoint,
    curve: &HyperellipticCurve,
) -> Result<MeromorphicForm> {
    if p.same(q) {
        return Err(Error::EqualPoints);
    }
    let field = &curve.field;
    let g = curve.genus();
    let omega_g = MeromorphicForm::omega(field, g);
    let minus_one = field.from_int(-1);
    Ok(match (p, q) {
        (CurvePoint::Affine { .. }, CurvePoint::Affine { .. }) => {
            point_term(p, field).add(&point_term(q, field).scale(&minus_one))
        }
        (CurvePoint::Affine { .. }, CurvePoint::Infinity) => point_term(p, field),
        (CurvePoint::InfinityMinus, CurvePoint::InfinityPlus) => omega_g.scale(&field.from_int(2)),
        (CurvePoint::InfinityPlus, CurvePoint::InfinityMinus) => omega_g.scale(&field.from_int(-2)),
        (CurvePoint::Affine { .. }, CurvePoint::InfinityMinus) => {
            point_term(p, field).add(&omega_g.scale(&minus_one))
        }
        (CurvePoint::Affine { .. }, CurvePoint::InfinityPlus) => point_term(p, field).add(&omega_g),
        (_, CurvePoint::Affine { .. }) => decompose_third_kind(q, p, curve)?.scale(&minus_one),
        _ => return Err(Error::Invalid("points at infinity do not match the degree".into())),
    })
}

/// For an elliptic curve, the form y(P)/(x - x(P)) dx/y = 2 y(P) nu_{x(P)}.
pub fn height_integrand(p: &CurvePoint, curve: &HyperellipticCurve) -> Result<MeromorphicForm> {
    if curve.degree() != 3 {
        return Err(Error::NotElliptic);
    }
    let (x, y) = match p {
        CurvePoint::Affine { x, y } => (x, y),
        _ => return Err(Error::TwoTorsionPoint),
    };
    if y.is_zero() {
        return Err(Error::TwoTorsionPoint);
    }
    let mut form = MeromorphicForm::zero(&curve.field);
    form.nu.push((x.clone(), y.mul_int(2)));
    Ok(form)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::padic::{FieldCtx, FieldSpec};

    fn ex71() -> HyperellipticCurve {
        let k = FieldCtx::new(&FieldSpec::qp(43), 12).unwrap();
        HyperellipticCurve::from_ints(&k, &[555015942, -1351755, 0, 1]).unwrap()
    }

    /// Residue at a finite non-Weierstrass point, read off from the local
    /// behaviour of each summand.
    fn residue_at(form: &MeromorphicForm, pt: &CurvePoint) -> PadicElement {
        let field = &form.field;
        let (x, y) = (pt.x().unwrap(), pt.y().unwrap());
        let mut r = field.zero();
        for (beta, c) in &form.nu {
            if beta.sub(x).is_zero() {
                r = r.add(&c.div(&y.mul_int(2)).unwrap());
            }
        }
        for l in &form.log {
            let order = |p: &PolyK| {
                let mut k = 0i64;
                let mut q = p.clone();
                while q.degree() > 0 && q.eval(x).is_zero() {
                    q = q.divrem_monic(&PolyK::linear(x)).0;
                    k += 1;
                }
                k
            };
            let ord = order(&l.num) - order(&l.den);
            r = r.add(&l.coeff.mul_int(ord));
        }
        r
    }

    #[test]
    fn third_kind_residues() {
        let c = ex71();
        let k = &c.field;
        let p = c.point_from_ints(-501, 33264).unwrap();
        let q = c.point_from_ints(219, 16416).unwrap();
        let form = decompose_third_kind(&p, &q, &c).unwrap();
        assert!(residue_at(&form, &p).eq_to(&k.one(), 10));
        assert!(residue_at(&form, &q).eq_to(&k.from_int(-1), 10));
        assert!(residue_at(&form, &p.involution()).is_zero());
        assert_eq!(decompose_third_kind(&p, &p, &c).unwrap_err(), Error::EqualPoints);
    }

    #[test]
    fn height_integrand_residues() {
        let c = ex71();
        let k = &c.field;
        let p = c.point_from_ints(-501, 33264).unwrap();
        let form = height_integrand(&p, &c).unwrap();
        assert_eq!(form.nu.len(), 1);
        assert!(form.nu[0].0.eq_to(&k.from_int(-501), 12));
        assert!(residue_at(&form, &p).eq_to(&k.one(), 10));
        assert!(residue_at(&form, &p.involution()).eq_to(&k.from_int(-1), 10));
        let w = c.point(k.from_int(507), k.zero()).unwrap();
        assert_eq!(height_integrand(&w, &c).unwrap_err(), Error::TwoTorsionPoint);
    }

    #[test]
    fn even_degree_infinity_cases() {
        let k = FieldCtx::new(&FieldSpec::qp(5), 10).unwrap();
        let c = HyperellipticCurve::from_ints(&k, &[5, 0, -4, 10, -8, 0, 1]).unwrap();
        let form = decompose_third_kind(&CurvePoint::InfinityMinus, &CurvePoint::InfinityPlus, &c).unwrap();
        assert_eq!(form.omega.len(), 3);
        assert!(form.omega[2].eq_to(&k.from_int(2), 10));
        assert_eq!(CurvePoint::InfinityPlus.involution(), CurvePoint::InfinityMinus);
        let r = c.point_from_ints(1, 2).unwrap();
        assert_eq!(r.involution(), c.point_from_ints(1, -2).unwrap());
    }

    #[test]
    fn rejects_bad_curves() {
        let k = FieldCtx::new(&FieldSpec::qp(5), 10).unwrap();
        assert!(HyperellipticCurve::from_ints(&k, &[0, 0, 1]).is_err());
        assert!(HyperellipticCurve::from_ints(&k, &[1, 2, 1, 0]).is_err());
        assert!(HyperellipticCurve::from_ints(&k, &[0, 1, -2, 1]).is_err());
    }
}
