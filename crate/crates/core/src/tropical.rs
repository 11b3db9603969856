//! Exact linear algebra on finite graphs: cycle bases, tropical 1-forms and
//! tropical integrals.

use crate::error::{Error, Result};
use num_rational::BigRational;
use num_traits::{One, Zero};
use std::collections::VecDeque;

pub type Q = BigRational;

/// A finite graph with oriented edges (tail, head); loops and multiple
/// edges are allowed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    pub n_vertices: usize,
    pub edges: Vec<(usize, usize)>,
}

/// A closed walk as oriented edges, with its coefficient vector in H_1.
#[derive(Clone, Debug, PartialEq)]
pub struct Cycle {
    pub walk: Vec<(usize, i8)>,
    pub coeffs: Vec<Q>,
}

impl Graph {
    pub fn new(n_vertices: usize, edges: Vec<(usize, usize)>) -> Self {
        Graph { n_vertices, edges }
    }

    pub fn betti(&self) -> usize {
        (self.edges.len() + 1).saturating_sub(self.n_vertices)
    }

    pub fn is_connected(&self) -> bool {
        if self.n_vertices == 0 {
            return true;
        }
        self.bfs_tree(0).iter().filter(|p| p.is_some()).count() + 1 == self.n_vertices
    }

    /// Parent links (vertex, oriented edge from the parent) of a BFS tree.
    fn bfs_tree(&self, root: usize) -> Vec<Option<(usize, (usize, i8))>> {
        let mut prev = vec![None; self.n_vertices];
        let mut seen = vec![false; self.n_vertices];
        seen[root] = true;
        let mut queue = VecDeque::from([root]);
        while let Some(v) = queue.pop_front() {
            for (i, &(a, b)) in self.edges.iter().enumerate() {
                let step = if a == v {
                    Some((b, 1))
                } else if b == v {
                    Some((a, -1))
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
        prev
    }

    /// Coefficient vector of a walk.
    pub fn chain(&self, walk: &[(usize, i8)]) -> Vec<Q> {
        let mut c = vec![Q::zero(); self.edges.len()];
        for &(e, s) in walk {
            c[e] += Q::from_integer(s.into());
        }
        c
    }

    /// Whether a chain is a cycle (zero boundary).
    pub fn is_cycle(&self, c: &[Q]) -> bool {
        let mut bd = vec![Q::zero(); self.n_vertices];
        for (i, &(a, b)) in self.edges.iter().enumerate() {
            bd[b] += &c[i];
            bd[a] -= &c[i];
        }
        bd.iter().all(|x| x.is_zero())
    }

    /// Fundamental cycles of a BFS spanning tree rooted at vertex 0, one per
    /// non-tree edge in index order; each walk starts at the tail of its
    /// non-tree edge.
    pub fn cycle_basis(&self) -> Result<Vec<Cycle>> {
        if !self.is_connected() {
            return Err(Error::DisconnectedGraph);
        }
        let prev = self.bfs_tree(0);
        let tree: Vec<bool> = {
            let mut t = vec![false; self.edges.len()];
            for (e, _) in prev.iter().flatten().map(|(_, oe)| *oe).map(|oe| (oe.0, oe.1)) {
                t[e] = true;
            }
            t
        };
        let to_root = |mut v: usize| -> Vec<(usize, i8)> {
            let mut path = Vec::new();
            while let Some((p, (e, s))) = prev[v] {
                path.push((e, -s));
                v = p;
            }
            path
        };
        let mut out = Vec::new();
        for (i, &(a, b)) in self.edges.iter().enumerate() {
            if tree[i] {
                continue;
            }
            // a -> b, then b up to the root, then down from the root to a
            let up = to_root(b);
            let mut down: Vec<(usize, i8)> = to_root(a).into_iter().map(|(e, s)| (e, -s)).collect();
            down.reverse();
            let mut walk = vec![(i, 1i8)];
            walk.extend(up);
            walk.extend(down);
            let walk = cancel_backtracks(walk);
            let coeffs = self.chain(&walk);
            out.push(Cycle { walk, coeffs });
        }
        Ok(out)
    }

    /// Basis eta_1..eta_h of tropical 1-forms with t-integral of eta_j over
    /// C_i equal to delta_ij. The forms lie in the span of the cycles.
    pub fn dual_basis(&self, cycles: &[Vec<Q>]) -> Result<Vec<Vec<Q>>> {
        let h = cycles.len();
        let gram: Vec<Vec<Q>> = (0..h)
            .map(|i| (0..h).map(|j| dot(&cycles[i], &cycles[j])).collect())
            .collect();
        let inv = invert(&gram)?;
        Ok((0..h)
            .map(|j| {
                let mut eta = vec![Q::zero(); self.edges.len()];
                for k in 0..h {
                    for (x, c) in eta.iter_mut().zip(&cycles[k]) {
                        *x += &inv[j][k] * c;
                    }
                }
                eta
            })
            .collect())
    }

    /// Harmonicity: the outgoing values sum to zero at every vertex.
    pub fn is_harmonic(&self, eta: &[Q]) -> bool {
        self.is_cycle(eta)
    }

    /// Coordinates of the harmonic projection of a cochain in the dual basis
    /// of `cycles`.
    pub fn harmonic_decompose(&self, cochain: &[Q], cycles: &[Vec<Q>]) -> Vec<Q> {
        cycles.iter().map(|c| dot(c, cochain)).collect()
    }
}

fn cancel_backtracks(walk: Vec<(usize, i8)>) -> Vec<(usize, i8)> {
    let mut out: Vec<(usize, i8)> = Vec::new();
    for step in walk {
        if let Some(&last) = out.last() {
            if last.0 == step.0 && last.1 == -step.1 {
                out.pop();
                continue;
            }
        }
        out.push(step);
    }
    out
}

pub fn dot(a: &[Q], b: &[Q]) -> Q {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Sum of eta over the oriented edges of a path.
pub fn tropical_integral(eta: &[Q], path: &[(usize, i8)]) -> Q {
    path.iter().map(|&(e, s)| &eta[e] * Q::from_integer(s.into())).sum()
}

/// Inverse of a square rational matrix by Gauss-Jordan elimination.
pub fn invert(m: &[Vec<Q>]) -> Result<Vec<Vec<Q>>> {
    let n = m.len();
    let mut a: Vec<Vec<Q>> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { Q::one() } else { Q::zero() }));
            r
        })
        .collect();
    for col in 0..n {
        let piv = (col..n).find(|&r| !a[r][col].is_zero()).ok_or(Error::SingularSystem)?;
        a.swap(col, piv);
        let inv = Q::one() / &a[col][col];
        for x in a[col].iter_mut() {
            *x *= &inv;
        }
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                let pivot_row = a[col].clone();
                for (x, y) in a[r].iter_mut().zip(&pivot_row) {
                    *x -= &f * y;
                }
            }
        }
    }
    Ok(a.into_iter().map(|r| r[n..].to_vec()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Q {
        Q::new(n.into(), d.into())
    }

    fn theta() -> Graph {
        // two vertices with three parallel edges
        Graph::new(2, vec![(0, 1), (1, 0), (0, 1)])
    }

    #[test]
    fn fundamental_cycles_are_cycles() {
        let g = theta();
        let cs = g.cycle_basis().unwrap();
        assert_eq!(cs.len(), 2);
        for c in &cs {
            assert!(g.is_cycle(&c.coeffs));
        }
    }

    #[test]
    fn dual_basis_of_five_vertex_graph() {
        // v+ = 0, v- = 1, v1..v3 = 2..4
        let g = Graph::new(5, vec![(1, 2), (2, 0), (0, 3), (3, 1), (1, 4), (4, 0)]);
        let c1 = g.chain(&[(0, 1), (1, 1), (2, 1), (3, 1)]);
        let c2 = g.chain(&[(2, 1), (3, 1), (4, 1), (5, 1)]);
        let eta = g.dual_basis(&[c1.clone(), c2.clone()]).unwrap();
        assert_eq!(eta[0], vec![q(1, 3), q(1, 3), q(1, 6), q(1, 6), q(-1, 6), q(-1, 6)]);
        assert_eq!(eta[1], vec![q(-1, 6), q(-1, 6), q(1, 6), q(1, 6), q(1, 3), q(1, 3)]);
        assert!(eta.iter().all(|e| g.is_harmonic(e)));
        assert_eq!(tropical_integral(&eta[0], &[(0, 1), (1, 1)]), q(2, 3));
    }

    #[test]
    fn disconnected_is_rejected() {
        let g = Graph::new(3, vec![(0, 1)]);
        assert!(matches!(g.cycle_basis(), Err(Error::DisconnectedGraph)));
    }

    #[test]
    fn singular_gram_is_rejected() {
        let g = theta();
        let c = g.chain(&[(0, 1), (1, 1)]);
        assert!(matches!(g.dual_basis(&[c.clone(), c]), Err(Error::SingularSystem)));
    }
}
