use crate::covering::ClusterTree;
use crate::error::{Error, Result};
use crate::padic::{Field, PadicElement};
use crate::polyring::PolyK;
use crate::polyring::LaurentSeriesK;
use num_rational::BigRational;
use std::collections::HashMap;
use std::sync::{Arc, Mutex};

/// A hole of a wide open: the closed disc v(t - center) >= radius (pi-units)
/// around a child cluster, with the cluster's factor in the local coordinate.
#[derive(Clone, Debug)]
pub struct Hole {
    pub node: usize,
    pub center: PadicElement,
    pub radius: BigRational,
    pub factor: PolyK,
    pub size: usize,
}

impl Hole {
    pub fn half(&self) -> usize {
        self.size / 2
    }

    pub fn is_odd(&self) -> bool {
        self.size % 2 == 1
    }

    /// factor(t) / (t - center)^size, a 1-unit outside the hole.
    pub fn unit_part(&self, t: &PadicElement) -> Result<PadicElement> {
        let z = t.sub(&self.center);
        self.factor.eval(t).div(&z.pow(self.size as u64))
    }
}

/// Local model of the wide open attached to a cluster node: with
/// x = c + pi^k t one has y^2 = pi^(k m) g(t) h(t)^2 prod k_j(t) F_out(t),
/// and the reduced coordinate is ytilde = y / (kappa Nrm(t)) with
/// ytilde^2 = g(t).
#[derive(Clone, Debug)]
pub struct VertexModel {
    pub node: usize,
    pub field: Field,
    pub center: PadicElement,
    pub k: i64,
    pub g: PolyK,
    pub holes: Vec<Hole>,
    pub f_out: PolyK,
    pub c_out: PadicElement,
    pub kappa: PadicElement,
    /// Outer radius in pi-units: U = { v(t) > -outer }; None for the root.
    pub outer: Option<i64>,
    pub contains_infinity: bool,
    /// Factor series of 1/Nrm keyed by (kind, hole), with their order.
    pub(crate) series_cache: Arc<Mutex<HashMap<(u8, usize), (i64, LaurentSeriesK)>>>,
}

impl VertexModel {
    pub fn build(tree: &ClusterTree, node: usize) -> Result<Self> {
        let field = tree.field.clone();
        let n = &tree.nodes[node];
        let (Some(k), Some(local)) = (n.k, n.local.clone()) else {
            return Err(Error::NeedsLargerField(format!(
                "vertex {node} sits at fractional depth {}; no K-rational coordinate",
                n.depth
            )));
        };
        let m = local.degree() as i64;
        let mut g = PolyK::one(&field);
        for leaf in &n.leaves {
            g = g.mul(&leaf.local_factor);
        }
        let mut holes = Vec::new();
        for &cid in &n.children {
            let c = &tree.nodes[cid];
            let center = c.parent_center_u.clone().expect("child center");
            let factor = c.parent_factor.clone().expect("child factor");
            let radius = c.depth_pi(field.e) - BigRational::from_integer(k.into());
            if c.size % 2 == 1 {
                g = g.mul(&PolyK::linear(&center));
            }
            holes.push(Hole {
                node: cid,
                center,
                radius,
                factor,
                size: c.size,
            });
        }
        let pik = field.one().shift_pi(k);
        let shifted = tree.f.shift_rescale(&n.center, &pik);
        let (q, r) = shifted.divrem_monic(&local);
        if !r.is_zero() {
            return Err(Error::PrecisionExhausted("cluster factor does not divide f".into()));
        }
        let f_out = PolyK::new(&field, q.coeffs.iter().map(|c| c.shift_pi(-k * m)).collect());
        let c_out = f_out.coeff(0);
        let kappa = c_out.shift_pi(k * m).sqrt().map_err(|_| {
            Error::NeedsLargerField(format!("vertex {node}: normalizing constant is not a square in K"))
        })?;
        let outer = n.parent.map(|p| k - tree.nodes[p].k.expect("parent of an integral node is integral"));
        Ok(VertexModel {
            node,
            field,
            center: n.center.clone(),
            k,
            g: g.trimmed(),
            holes,
            f_out,
            c_out,
            kappa,
            outer,
            contains_infinity: n.contains_infinity,
            series_cache: Arc::default(),
        })
    }

    /// deg g.
    pub fn reduced_degree(&self) -> usize {
        self.g.degree()
    }

    pub fn is_split(&self) -> bool {
        self.g.degree() == 0
    }

    pub fn to_local(&self, x: &PadicElement) -> PadicElement {
        x.sub(&self.center).shift_pi(-self.k)
    }

    pub fn to_global(&self, t: &PadicElement) -> PadicElement {
        self.center.add(&t.shift_pi(self.k))
    }

    /// Nrm(t) = prod (t - t_j)^(L_j) * prod k_j(t)^(1/2) * (F_out(t)/C)^(1/2),
    /// principal square roots.
    pub fn nrm(&self, t: &PadicElement) -> Result<PadicElement> {
        let mut acc = self.field.one();
        for h in &self.holes {
            let z = t.sub(&h.center);
            acc = acc.mul(&z.pow(h.half() as u64));
            acc = acc.mul(&h.unit_part(t)?.sqrt_one_unit().map_err(|_| Error::AmbiguousAtPrecision("square root of a non-principal unit".into()))?);
        }
        let out = self.f_out.eval(t).div(&self.c_out)?;
        acc = acc.mul(&out.sqrt_one_unit().map_err(|_| Error::AmbiguousAtPrecision("square root of a non-principal unit".into()))?);
        Ok(acc)
    }

    /// ytilde at an affine point.
    pub fn ytilde(&self, x: &PadicElement, y: &PadicElement) -> Result<PadicElement> {
        let t = self.to_local(x);
        y.div(&self.kappa.mul(&self.nrm(&t)?))
    }

    /// For a split vertex, the sheet (+1 or -1) of an affine point.
    pub fn sheet(&self, x: &PadicElement, y: &PadicElement) -> Result<i8> {
        let yt = self.ytilde(x, y)?;
        let rf = &self.field.residue;
        let r = yt.residue();
        if r == rf.one() {
            Ok(1)
        } else if r == rf.neg(&rf.one()) {
            Ok(-1)
        } else {
            Err(Error::AmbiguousAtPrecision("reduced coordinate is not congruent to +1 or -1".into()))
        }
    }

    /// pi^k / kappa: x^i dx / 2y = lambda x^i / Nrm(t) dt / 2ytilde.
    pub fn lambda(&self) -> Result<PadicElement> {
        self.field.one().shift_pi(self.k).div(&self.kappa)
    }

    /// Whether a local coordinate lies in the wide open (outside holes and
    /// inside the outer boundary).
    pub fn contains_local(&self, t: &PadicElement) -> bool {
        if let (Some(o), Some(v)) = (self.outer, t.valuation()) {
            if v <= -o {
                return false;
            }
        }
        self.holes.iter().all(|h| match t.sub(&h.center).valuation() {
            Some(v) => BigRational::from_integer(v.into()) < h.radius,
            None => false,
        })
    }
}
