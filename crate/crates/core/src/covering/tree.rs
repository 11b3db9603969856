use crate::error::{Error, Result};
use crate::padic::{Field, PadicElement};
use crate::polyring::{hensel_split, is_squarefree_mod_pi, residue_roots, PolyK};
use num_integer::Integer;
use num_rational::BigRational;

/// Roots of f not separated further by the covering: a single root in K,
/// or a Galois-stable group of roots lying in pairwise distinct residue
/// discs of the node coordinate.
#[derive(Clone, Debug)]
pub struct Leaf {
    /// Monic factor in the node's local coordinate u.
    pub local_factor: PolyK,
    pub count: usize,
    /// The root in x, when it lies in K.
    pub root: Option<PadicElement>,
}

/// A cluster of roots: all roots of `local` satisfy v(x - center) >= depth.
/// The local coordinate is x = center + pi^k u when e * depth = k is an
/// integer.
#[derive(Clone, Debug)]
pub struct ClusterNode {
    pub id: usize,
    pub parent: Option<usize>,
    pub center: PadicElement,
    /// Depth in p-units.
    pub depth: BigRational,
    /// e * depth, when integral.
    pub k: Option<i64>,
    /// Monic polynomial in u whose roots are the members (absent for
    /// fractional depth).
    pub local: Option<PolyK>,
    pub size: usize,
    pub children: Vec<usize>,
    pub leaves: Vec<Leaf>,
    pub contains_infinity: bool,
    /// This node's factor and center in the parent's local coordinate.
    pub parent_factor: Option<PolyK>,
    pub parent_center_u: Option<PadicElement>,
}

impl ClusterNode {
    pub fn half_edges(&self) -> usize {
        self.leaves.iter().map(|l| l.count).sum::<usize>() + usize::from(self.contains_infinity)
    }

    /// e * depth as a rational number of pi-units.
    pub fn depth_pi(&self, e: i64) -> BigRational {
        &self.depth * BigRational::from_integer(e.into())
    }
}

#[derive(Clone, Debug)]
pub struct ClusterTree {
    pub field: Field,
    pub f: PolyK,
    pub nodes: Vec<ClusterNode>,
}

/// Minimum root valuation (pi-units) of a monic polynomial, from its Newton
/// polygon, together with a flag telling whether all roots share it.
fn min_root_valuation(p: &PolyK) -> Result<(BigRational, bool)> {
    let m = p.degree();
    let mut best: Option<BigRational> = None;
    for i in 0..m {
        if let Some(v) = p.coeff(i).valuation() {
            let r = BigRational::new(v.into(), ((m - i) as i64).into());
            if best.as_ref().map_or(true, |b| r < *b) {
                best = Some(r);
            }
        }
    }
    let best = best.ok_or_else(|| {
        Error::PrecisionExhausted("repeated root at working precision; f may not be squarefree".into())
    })?;
    let single = p
        .coeff(0)
        .valuation()
        .map(|v| BigRational::new(v.into(), (m as i64).into()) == best)
        .unwrap_or(false);
    Ok((best, single))
}

/// Center of the roots of a monic polynomial: minus the subleading
/// coefficient over the degree.
fn mean_root(p: &PolyK, field: &Field) -> Result<PadicElement> {
    let m = p.degree();
    if (m as u64) % field.p == 0 {
        return Err(Error::NeedsLargerField(format!(
            "cluster of size {m} divisible by p has no canonical center"
        )));
    }
    Ok(p.coeff(m - 1).neg().mul_rational(&BigRational::new(1.into(), (m as i64).into())))
}

fn pi_power(field: &Field, k: i64) -> PadicElement {
    field.one().shift_pi(k)
}

/// p(a + pi^s w) / pi^(s deg p), monic in w.
fn recentre(p: &PolyK, a: &PadicElement, s: i64) -> PolyK {
    let field = &p.field;
    let m = p.degree() as i64;
    let q = p.shift_rescale(a, &pi_power(field, s));
    PolyK::new(field, q.coeffs.iter().map(|c| c.shift_pi(-s * m)).collect())
}

struct Builder {
    field: Field,
    nodes: Vec<ClusterNode>,
}

impl Builder {
    /// Adds the node for a cluster with local polynomial `local` in
    /// x = center + pi^k u (k integral) and recurses into its children.
    fn node(
        &mut self,
        parent: Option<usize>,
        center: PadicElement,
        k: i64,
        local: PolyK,
        parent_factor: Option<PolyK>,
        parent_center_u: Option<PadicElement>,
    ) -> Result<usize> {
        let field = self.field.clone();
        let e = field.e;
        let id = self.nodes.len();
        self.nodes.push(ClusterNode {
            id,
            parent,
            center: center.clone(),
            depth: BigRational::new(k.into(), e.into()),
            k: Some(k),
            local: Some(local.clone()),
            size: local.degree(),
            children: Vec::new(),
            leaves: Vec::new(),
            contains_infinity: false,
            parent_factor,
            parent_center_u,
        });
        let classes = residue_roots(&local);
        let covered: usize = classes.iter().map(|(_, m)| m).sum();
        let parts = hensel_split(&local, &classes)?;
        for (idx, part) in parts.iter().enumerate() {
            if idx >= classes.len() {
                // cofactor without residue roots
                if !is_squarefree_mod_pi(part) {
                    return Err(Error::NeedsLargerField(
                        "cluster whose residue class is not rational over the residue field".into(),
                    ));
                }
                self.nodes[id].leaves.push(Leaf {
                    local_factor: part.clone(),
                    count: part.degree(),
                    root: None,
                });
                continue;
            }
            let mult = classes[idx].1;
            if mult == 1 {
                let u = part.coeff(0).neg();
                let x = center.add(&u.shift_pi(k));
                self.nodes[id].leaves.push(Leaf {
                    local_factor: part.clone(),
                    count: 1,
                    root: Some(x),
                });
                continue;
            }
            let uc = mean_root(part, &field)?;
            let shifted = part.shift_rescale(&uc, &field.one());
            let (vmin, single) = min_root_valuation(&shifted)?;
            let child_center = center.add(&uc.shift_pi(k));
            if vmin.is_integer() {
                let s = vmin.to_integer().try_into().unwrap_or(i64::MAX);
                let child_local = recentre(part, &uc, s);
                let cid = self.node(Some(id), child_center, k + s, child_local, Some(part.clone()), Some(uc))?;
                self.nodes[id].children.push(cid);
            } else {
                let m = part.degree() as i64;
                let den: i64 = vmin.denom().try_into().unwrap_or(0);
                if !(single && den == m && m % (field.p as i64) != 0) {
                    return Err(Error::NeedsLargerField(format!(
                        "cluster at fractional depth {} (in pi-units) needs a ramified extension",
                        BigRational::from_integer(k.into()) + &vmin
                    )));
                }
                let cid = self.nodes.len();
                let depth_pi = BigRational::from_integer(k.into()) + &vmin;
                self.nodes.push(ClusterNode {
                    id: cid,
                    parent: Some(id),
                    center: child_center,
                    depth: depth_pi / BigRational::from_integer(e.into()),
                    k: None,
                    local: None,
                    size: m as usize,
                    children: Vec::new(),
                    leaves: vec![Leaf {
                        local_factor: part.clone(),
                        count: m as usize,
                        root: None,
                    }],
                    contains_infinity: false,
                    parent_factor: Some(part.clone()),
                    parent_center_u: Some(uc),
                });
                self.nodes[id].children.push(cid);
            }
        }
        debug_assert!(covered <= local.degree());
        Ok(id)
    }
}

/// Recursive clustering of the roots of f.
pub fn cluster_roots(f: &PolyK) -> Result<ClusterTree> {
    let field = f.field.clone();
    if !f.is_monic() || f.coeffs.iter().any(|c| !c.is_integral()) {
        return Err(Error::InvalidCurve("f must be monic and integral".into()));
    }
    let mut b = Builder {
        field: field.clone(),
        nodes: Vec::new(),
    };
    let classes = residue_roots(f);
    let d = f.degree();
    let single_class = classes.len() == 1 && classes[0].1 == d;
    if single_class {
        let c = mean_root(f, &field)?;
        let shifted = f.shift_rescale(&c, &field.one());
        let (vmin, _) = min_root_valuation(&shifted)?;
        if !vmin.is_integer() {
            return Err(Error::NeedsLargerField(
                "all roots cluster at a fractional depth; extend K".into(),
            ));
        }
        let s = vmin.to_integer().try_into().unwrap_or(i64::MAX);
        let local = recentre(f, &c, s);
        b.node(None, c, s, local, None, None)?;
    } else {
        b.node(None, field.zero(), 0, f.clone(), None, None)?;
    }
    b.nodes[0].contains_infinity = d.is_odd();
    Ok(ClusterTree {
        field,
        f: f.clone(),
        nodes: b.nodes,
    })
}

impl ClusterTree {
    /// Nodes in depth-first preorder (the construction order).
    pub fn root(&self) -> &ClusterNode {
        &self.nodes[0]
    }

    pub fn is_tree_trivial(&self) -> bool {
        self.nodes.len() == 1
    }
}
