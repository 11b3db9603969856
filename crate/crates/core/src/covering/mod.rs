//! Semistable covering of the curve: the cluster tree of the roots of f,
//! the covering of P^1 by wide opens, and its double cover with the
//! associated graph.

mod tree;

pub use tree::{cluster_roots, ClusterNode, ClusterTree, Leaf};

use crate::curve::{CurvePoint, HyperellipticCurve};
use crate::error::{Error, Result};
use crate::padic::PadicElement;
use crate::tropical::Graph;
use crate::wideopen::VertexModel;
use num_rational::BigRational;
use std::collections::VecDeque;
use std::sync::OnceLock;

/// A vertex of the graph of the double cover: a wide open of P^1, with a
/// sheet (+1 / -1) when its preimage splits.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Vertex {
    pub node: usize,
    pub sheet: Option<i8>,
}

/// An edge of the graph: an annulus copy over the annulus between a node
/// and its child `child`.
#[derive(Clone, Debug)]
pub struct Edge {
    pub tail: usize,
    pub head: usize,
    pub child: usize,
    /// Sheet label of the copy when the annulus splits.
    pub copy: Option<i8>,
}

/// An oriented edge: (edge index, +1 along the stored orientation or -1).
pub type OrientedEdge = (usize, i8);

#[derive(Clone, Debug)]
pub struct ReferencePoint {
    pub x: PadicElement,
    pub y: PadicElement,
}

pub struct Covering {
    pub curve: HyperellipticCurve,
    pub tree: ClusterTree,
    pub vertices: Vec<Vertex>,
    pub edges: Vec<Edge>,
    models: Vec<OnceLock<std::result::Result<VertexModel, Error>>>,
    ref_points: Vec<OnceLock<std::result::Result<ReferencePoint, Error>>>,
    overrides: Vec<Option<ReferencePoint>>,
}

impl std::fmt::Debug for Covering {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Covering")
            .field("vertices", &self.vertices)
            .field("edges", &self.edges)
            .finish()
    }
}

fn split_candidate(tree: &ClusterTree, node: usize) -> bool {
    let n = &tree.nodes[node];
    n.leaves.is_empty() && !n.contains_infinity && n.children.iter().all(|c| tree.nodes[*c].size % 2 == 0)
}

impl Covering {
    pub fn new(curve: &HyperellipticCurve) -> Result<Self> {
        let tree = cluster_roots(&curve.f)?;
        let nn = tree.nodes.len();
        let models: Vec<OnceLock<_>> = (0..nn).map(|_| OnceLock::new()).collect();
        let mut cov = Covering {
            curve: curve.clone(),
            tree,
            vertices: Vec::new(),
            edges: Vec::new(),
            models,
            ref_points: Vec::new(),
            overrides: Vec::new(),
        };
        let mut split = vec![false; nn];
        for (id, s) in split.iter_mut().enumerate() {
            if split_candidate(&cov.tree, id) {
                // a vertex with no branch points splits over K exactly when
                // its normalizing constant is a square
                *s = cov.model(id)?.is_split();
            }
        }
        let mut vid = vec![Vec::new(); nn];
        for (id, s) in split.iter().enumerate() {
            if *s {
                for sheet in [1i8, -1] {
                    vid[id].push(cov.vertices.len());
                    cov.vertices.push(Vertex { node: id, sheet: Some(sheet) });
                }
            } else {
                vid[id].push(cov.vertices.len());
                cov.vertices.push(Vertex { node: id, sheet: None });
            }
        }
        let side = |id: usize, sheet: i8| -> usize {
            if split[id] {
                vid[id][if sheet == 1 { 0 } else { 1 }]
            } else {
                vid[id][0]
            }
        };
        for child in 1..nn {
            let parent = cov.tree.nodes[child].parent.expect("non-root node has a parent");
            if cov.tree.nodes[child].size % 2 == 1 {
                cov.edges.push(Edge {
                    tail: side(parent, 1),
                    head: side(child, 1),
                    child,
                    copy: None,
                });
                continue;
            }
            for sigma in [-1i8, 1] {
                let child_sheet = if split[parent] && split[child] {
                    sigma * cov.sheet_correlation(child)?
                } else {
                    sigma
                };
                let (a, b) = (side(parent, sigma), side(child, child_sheet));
                let (tail, head) = if sigma == -1 { (a, b) } else { (b, a) };
                cov.edges.push(Edge {
                    tail,
                    head,
                    child,
                    copy: Some(sigma),
                });
            }
        }
        cov.ref_points = (0..cov.edges.len()).map(|_| OnceLock::new()).collect();
        cov.overrides = vec![None; cov.edges.len()];
        Ok(cov)
    }

    pub fn model(&self, node: usize) -> Result<&VertexModel> {
        self.models[node]
            .get_or_init(|| VertexModel::build(&self.tree, node))
            .as_ref()
            .map_err(|e| e.clone())
    }

    pub fn graph(&self) -> Graph {
        Graph::new(self.vertices.len(), self.edges.iter().map(|e| (e.tail, e.head)).collect())
    }

    /// First Betti number of the graph.
    pub fn betti(&self) -> usize {
        self.edges.len() + 1 - self.vertices.len()
    }

    pub fn vertex_name(&self, v: usize) -> String {
        let vx = &self.vertices[v];
        match vx.sheet {
            Some(1) => format!("v{}+", vx.node),
            Some(_) => format!("v{}-", vx.node),
            None => format!("v{}", vx.node),
        }
    }

    /// Pi-unit valuation window (k_parent, depth_child) of the annulus below
    /// `child`, measured by v(x - center_child).
    pub fn annulus_window(&self, child: usize) -> (i64, BigRational) {
        let c = &self.tree.nodes[child];
        let p = &self.tree.nodes[c.parent.expect("parent")];
        (p.k.expect("integral parent"), c.depth_pi(self.tree.field.e))
    }

    /// Sign of y against the normalization of the annulus below `child`
    /// (used to label copies when neither end splits).
    fn annulus_sheet(&self, child: usize, x: &PadicElement, y: &PadicElement) -> Result<i8> {
        let parent = self.tree.nodes[child].parent.expect("parent");
        let m = self.model(parent)?;
        let j = m.holes.iter().position(|h| h.node == child).expect("hole");
        let hole = &m.holes[j];
        let t = m.to_local(x);
        // y^2 = pi^(k m) (t - t_j)^n k_j(t) R(t), R = G / factor_j * F_out
        let local = self.tree.nodes[parent].local.clone().expect("local");
        let (rest, _) = local.divrem_monic(&hole.factor);
        let r_at = |s: &PadicElement| rest.eval(s).mul(&m.f_out.eval(s));
        let r0 = r_at(&hole.center);
        let mdeg = local.degree() as i64;
        let scale = r0.shift_pi(m.k * mdeg).sqrt().map_err(|_| {
            Error::NeedsLargerField(format!("annulus below node {child} does not split over K"))
        })?;
        let z = t.sub(&hole.center);
        let n = z
            .pow((hole.size / 2) as u64)
            .mul(&scale)
            .mul(&hole.unit_part(&t)?.sqrt_one_unit().map_err(|_| Error::AmbiguousAtPrecision("square root of a non-principal unit".into()))?)
            .mul(&r_at(&t).div(&r0)?.sqrt_one_unit().map_err(|_| Error::AmbiguousAtPrecision("square root of a non-principal unit".into()))?);
        let yt = y.div(&n)?;
        let rf = &self.tree.field.residue;
        let r = yt.residue();
        if r == rf.one() {
            Ok(1)
        } else if r == rf.neg(&rf.one()) {
            Ok(-1)
        } else {
            Err(Error::AmbiguousAtPrecision("reduced coordinate is not congruent to +1 or -1".into()))
        }
    }

    /// Relative sign of the parent and child sheets along the annulus below
    /// `child` when both ends split.
    fn sheet_correlation(&self, child: usize) -> Result<i8> {
        let parent = self.tree.nodes[child].parent.expect("parent");
        let x = self.default_x(child)?;
        let y = self.curve.f.eval(&x).sqrt().map_err(|_| {
            Error::NeedsLargerField(format!("no K-rational point on the annulus below node {child}"))
        })?;
        Ok(self.model(parent)?.sheet(&x, &y)? * self.model(child)?.sheet(&x, &y)?)
    }

    /// Default x-coordinate on the annulus below `child`: the center
    /// truncated below pi^j plus a multiple of pi^j, j an integer strictly
    /// inside the valuation window, nearest its midpoint.
    fn default_x(&self, child: usize) -> Result<PadicElement> {
        let field = &self.tree.field;
        let (lo, hi) = self.annulus_window(child);
        let lo_r = BigRational::from_integer(lo.into());
        let mid = ((&lo_r + &hi) / BigRational::from_integer(2.into())).floor().to_integer();
        let mid: i64 = mid.try_into().unwrap_or(lo + 1);
        let candidates = [mid, mid + 1, mid - 1];
        let j = candidates
            .into_iter()
            .find(|j| *j > lo && BigRational::from_integer((*j).into()) < hi)
            .ok_or_else(|| {
                Error::NeedsLargerField(format!(
                    "annulus below node {child} has no K-rational point at an integral radius"
                ))
            })?;
        let c = &self.tree.nodes[child].center;
        let mut base = field.zero();
        for (exp, d) in c.digits() {
            if exp >= j {
                break;
            }
            base = base.add(&PadicElement::lift_residue(field, &d).shift_pi(exp));
        }
        for mult in 1..=field.p as i64 {
            let x = base.add(&field.from_int(mult).shift_pi(j));
            if x.sub(c).valuation() == Some(j) {
                return Ok(x.as_exact());
            }
        }
        Err(Error::AmbiguousAtPrecision("reduced coordinate is not congruent to +1 or -1".into()))
    }

    fn compute_ref_point(&self, edge: usize) -> Result<ReferencePoint> {
        let e = &self.edges[edge];
        let child = e.child;
        let parent = self.tree.nodes[child].parent.expect("parent");
        let x = self.default_x(child)?;
        let y0 = self.curve.f.eval(&x).sqrt().map_err(|_| {
            Error::NeedsLargerField(format!("reference point on edge {edge}: f(x) is not a square in K"))
        })?;
        let Some(sigma) = e.copy else {
            return Ok(ReferencePoint { x, y: y0 });
        };
        let parent_split = self.vertices[e.tail].node == parent && self.vertices[e.tail].sheet.is_some()
            || self.vertices[e.head].node == parent && self.vertices[e.head].sheet.is_some();
        let child_split = self.vertices.iter().any(|v| v.node == child && v.sheet.is_some());
        let s0 = if parent_split {
            self.model(parent)?.sheet(&x, &y0)?
        } else if child_split {
            self.model(child)?.sheet(&x, &y0)?
        } else {
            self.annulus_sheet(child, &x, &y0)?
        };
        let y = if s0 == sigma { y0 } else { y0.neg() };
        Ok(ReferencePoint { x, y })
    }

    /// Replaces the reference point of an edge; y is taken as the square
    /// root of f(x) closest to the given approximation.
    pub fn set_reference_point(&mut self, edge: usize, x: PadicElement, y_approx: &PadicElement) -> Result<()> {
        if edge >= self.edges.len() {
            return Err(Error::Invalid(format!("no edge {edge}")));
        }
        let y0 = self.curve.f.eval(&x).sqrt().map_err(|_| Error::NotOnCurve("f(x) is not a square in K".into()))?;
        let d_plus = y0.sub(y_approx).valuation_or_prec();
        let d_minus = y0.neg().sub(y_approx).valuation_or_prec();
        let y = if d_plus >= d_minus { y0 } else { y0.neg() };
        self.overrides[edge] = Some(ReferencePoint { x, y });
        Ok(())
    }

    pub fn reference_point(&self, edge: usize) -> Result<ReferencePoint> {
        if let Some(r) = &self.overrides[edge] {
            return Ok(r.clone());
        }
        self.ref_points[edge]
            .get_or_init(|| self.compute_ref_point(edge))
            .as_ref()
            .map(|r| r.clone())
            .map_err(|e| e.clone())
    }

    /// The cluster node whose wide open contains x, preferring the nearer
    /// end when x lies on an annulus.
    pub fn locate_node(&self, x: &PadicElement) -> Result<usize> {
        let e = self.tree.field.e;
        let mut cur = 0usize;
        'descend: loop {
            let n = &self.tree.nodes[cur];
            let Some(k) = n.k else {
                return Ok(cur);
            };
            for &cid in &n.children {
                let c = &self.tree.nodes[cid];
                let dc = c.depth_pi(e);
                let diff = x.sub(&c.center);
                let w = match diff.valuation() {
                    Some(w) => BigRational::from_integer(w.into()),
                    None => {
                        if BigRational::from_integer(diff.prec().into()) < dc {
                            return Err(Error::AmbiguousAtPrecision("reduced coordinate is not congruent to +1 or -1".into()));
                        }
                        dc.clone()
                    }
                };
                if w >= dc {
                    cur = cid;
                    continue 'descend;
                }
                let kr = BigRational::from_integer(k.into());
                if w > kr {
                    // on the annulus: choose the nearer end, parent on ties
                    let to_parent = &w - &kr;
                    let to_child = &dc - &w;
                    if to_child < to_parent && c.k.is_some() {
                        cur = cid;
                        continue 'descend;
                    }
                    return Ok(cur);
                }
            }
            return Ok(cur);
        }
    }

    /// Vertex of the graph containing a point.
    pub fn locate(&self, pt: &CurvePoint) -> Result<usize> {
        let (node, sheet) = match pt {
            CurvePoint::Affine { x, y } => {
                let node = self.locate_node(x)?;
                let sheet = if self.is_split_node(node) {
                    Some(self.model(node)?.sheet(x, y)?)
                } else {
                    None
                };
                (node, sheet)
            }
            CurvePoint::Infinity => (0, None),
            CurvePoint::InfinityPlus => (0, self.is_split_node(0).then_some(1)),
            CurvePoint::InfinityMinus => (0, self.is_split_node(0).then_some(-1)),
        };
        self.vertices
            .iter()
            .position(|v| v.node == node && v.sheet == sheet)
            .ok_or_else(|| Error::Invalid("point does not map to a vertex".into()))
    }

    pub fn is_split_node(&self, node: usize) -> bool {
        self.vertices.iter().any(|v| v.node == node && v.sheet.is_some())
    }

    /// Shortest path of oriented edges between two vertices (breadth-first,
    /// edges scanned in index order).
    pub fn skeleton_path(&self, from: usize, to: usize) -> Result<Vec<OrientedEdge>> {
        let nv = self.vertices.len();
        let mut prev: Vec<Option<(usize, OrientedEdge)>> = vec![None; nv];
        let mut seen = vec![false; nv];
        seen[from] = true;
        let mut queue = VecDeque::from([from]);
        while let Some(v) = queue.pop_front() {
            if v == to {
                break;
            }
            for (i, e) in self.edges.iter().enumerate() {
                let step = if e.tail == v {
                    Some((e.head, 1))
                } else if e.head == v {
                    Some((e.tail, -1))
                } else {
                    None
                };
                if let Some((w, s)) = step {
                    if !seen[w] {
                        seen[w] = true;
                        prev[w] = Some((v, (i, s)));
                        queue.push_back(w);
                    }
                }
            }
        }
        if !seen[to] {
            return Err(Error::DisconnectedGraph);
        }
        let mut path = Vec::new();
        let mut cur = to;
        while cur != from {
            let (p, oe) = prev[cur].expect("visited");
            path.push(oe);
            cur = p;
        }
        path.reverse();
        Ok(path)
    }

    pub fn initial(&self, oe: OrientedEdge) -> usize {
        let e = &self.edges[oe.0];
        if oe.1 == 1 {
            e.tail
        } else {
            e.head
        }
    }

    pub fn terminal(&self, oe: OrientedEdge) -> usize {
        let e = &self.edges[oe.0];
        if oe.1 == 1 {
            e.head
        } else {
            e.tail
        }
    }

    /// Checks that consecutive edges of a path share endpoints.
    pub fn check_path(&self, path: &[OrientedEdge]) -> Result<()> {
        for (i, w) in path.windows(2).enumerate() {
            if self.terminal(w[0]) != self.initial(w[1]) {
                return Err(Error::BrokenPath(i, i + 1));
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::padic::{FieldCtx, FieldSpec};

    fn sextic() -> Covering {
        let k = FieldCtx::new(&FieldSpec::extension(5, &[-5, 0, 0, 0, 1], "a"), 40).unwrap();
        let c = HyperellipticCurve::from_ints(&k, &[5, 0, -4, 10, -8, 0, 1]).unwrap();
        Covering::new(&c).unwrap()
    }

    #[test]
    fn sextic_graph_shape() {
        let cov = sextic();
        assert_eq!(cov.vertices.len(), 5);
        assert_eq!(cov.edges.len(), 6);
        assert_eq!(cov.betti(), 2);
        let names: Vec<_> = (0..5).map(|v| cov.vertex_name(v)).collect();
        assert_eq!(names, ["v0+", "v0-", "v1", "v2", "v3"]);
        // minus copies run from the minus sheet to the child, plus copies back
        let ends: Vec<_> = cov.edges.iter().map(|e| (e.tail, e.head)).collect();
        assert_eq!(ends, [(1, 2), (2, 0), (1, 3), (3, 0), (1, 4), (4, 0)]);
    }

    #[test]
    fn sextic_reference_points() {
        let cov = sextic();
        let k = cov.tree.field.clone();
        let a = k.gen();
        for (edge, shift) in [(0, 0), (1, 0), (2, 2), (3, 2), (4, 3), (5, 3)] {
            let r = cov.reference_point(edge).unwrap();
            assert!(r.x.eq_to(&a.add(&k.from_int(shift)), 40));
            assert!(cov.curve.f.eval(&r.x).eq_to(&r.y.square(), 36));
            let pt = CurvePoint::affine(r.x.clone(), r.y.clone());
            let v = cov.locate(&pt).unwrap();
            let e = &cov.edges[edge];
            assert!(v == e.tail || v == e.head);
        }
        // the two copies over one annulus carry opposite y
        let (r0, r1) = (cov.reference_point(0).unwrap(), cov.reference_point(1).unwrap());
        assert!(r0.y.add(&r1.y).is_zero());
    }

    #[test]
    fn sextic_locate_and_paths() {
        let cov = sextic();
        let k = cov.tree.field.clone();
        let r = CurvePoint::affine(k.from_int(1), k.from_int(2));
        let s = CurvePoint::affine(k.from_int(1), k.from_int(-2));
        let (vr, vs) = (cov.locate(&r).unwrap(), cov.locate(&s).unwrap());
        assert_ne!(vr, vs);
        assert_eq!(cov.vertices[vr].node, 0);
        let path = cov.skeleton_path(vs, vr).unwrap();
        assert_eq!(path.len(), 2);
        cov.check_path(&path).unwrap();
        assert!(cov.check_path(&[(0, 1), (2, 1)]).is_err());
    }

    #[test]
    fn cubic_graph_is_a_loop() {
        let k = FieldCtx::new(&FieldSpec::qp(43), 12).unwrap();
        let c = HyperellipticCurve::from_ints(&k, &[555015942, -1351755, 0, 1]).unwrap();
        let cov = Covering::new(&c).unwrap();
        assert_eq!(cov.vertices.len(), 2);
        assert_eq!(cov.edges.len(), 2);
        assert_eq!(cov.betti(), 1);
        for (x, y) in [(-501, 33264), (219, 16416), (379, 9856)] {
            let p = CurvePoint::affine(k.from_int(x), k.from_int(y));
            assert_eq!(cov.locate(&p).unwrap(), 0);
        }
        assert!(matches!(cov.reference_point(0), Err(Error::NeedsLargerField(_))));
    }
}
