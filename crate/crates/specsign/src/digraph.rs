use num_integer::Integer;

use crate::error::{Error, Result};
use crate::matrix::{IntMatrix, NonnegMatrix, Permutation};

/// Directed graph on vertices 0..n, loops allowed, no parallel arcs.
///
/// This is the support digraph of a nonnegative matrix: arc (i, j) iff
/// entry (i, j) is nonzero.  Entry magnitudes never matter for
/// irreducibility or the period, so they are dropped here.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Digraph {
    n: usize,
    arcs: Vec<(usize, usize)>,
    adj: Vec<Vec<usize>>,
    radj: Vec<Vec<usize>>,
}

impl Digraph {
    pub fn from_arcs(n: usize, mut arcs: Vec<(usize, usize)>) -> Result<Self> {
        if n == 0 {
            return Err(Error::EmptyMatrix);
        }
        for &(u, v) in &arcs {
            if u >= n {
                return Err(Error::VertexOutOfRange { v: u, n });
            }
            if v >= n {
                return Err(Error::VertexOutOfRange { v, n });
            }
        }
        arcs.sort_unstable();
        arcs.dedup();
        let mut adj = vec![Vec::new(); n];
        let mut radj = vec![Vec::new(); n];
        for &(u, v) in &arcs {
            adj[u].push(v);
            radj[v].push(u);
        }
        Ok(Digraph { n, arcs, adj, radj })
    }

    pub fn from_matrix(a: &NonnegMatrix) -> Digraph {
        // Support arcs of a validated matrix are always in range.
        Digraph::from_arcs(a.order(), a.support()).expect("support arcs are in range")
    }

    pub fn from_int_matrix(a: &IntMatrix) -> Digraph {
        Digraph::from_arcs(a.order(), a.support()).expect("support arcs are in range")
    }

    #[inline]
    pub fn order(&self) -> usize {
        self.n
    }

    pub fn arcs(&self) -> &[(usize, usize)] {
        &self.arcs
    }

    pub fn out_neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    /// Strongly connected components via Kosaraju's two passes, iterative so
    /// deep graphs cannot blow the stack.  Components are sorted internally
    /// and listed by smallest member.
    pub fn strongly_connected_components(&self) -> Vec<Vec<usize>> {
        let n = self.n;
        let mut visited = vec![false; n];
        let mut finish: Vec<usize> = Vec::with_capacity(n);
        for root in 0..n {
            if visited[root] {
                continue;
            }
            visited[root] = true;
            let mut stack: Vec<(usize, usize)> = vec![(root, 0)];
            while let Some(&mut (v, ref mut next)) = stack.last_mut() {
                if *next < self.adj[v].len() {
                    let w = self.adj[v][*next];
                    *next += 1;
                    if !visited[w] {
                        visited[w] = true;
                        stack.push((w, 0));
                    }
                } else {
                    finish.push(v);
                    stack.pop();
                }
            }
        }

        let mut comp = vec![usize::MAX; n];
        let mut components: Vec<Vec<usize>> = Vec::new();
        for &root in finish.iter().rev() {
            if comp[root] != usize::MAX {
                continue;
            }
            let c = components.len();
            comp[root] = c;
            let mut members = vec![];
            let mut stack = vec![root];
            while let Some(v) = stack.pop() {
                members.push(v);
                for &w in &self.radj[v] {
                    if comp[w] == usize::MAX {
                        comp[w] = c;
                        stack.push(w);
                    }
                }
            }
            members.sort_unstable();
            components.push(members);
        }
        components.sort_by_key(|m| m[0]);
        components
    }

    pub fn is_strongly_connected(&self) -> bool {
        self.strongly_connected_components().len() == 1
    }

    /// Directed BFS distances from vertex 0.  `None` for unreachable vertices.
    fn levels_from_zero(&self) -> Vec<Option<u64>> {
        let mut level = vec![None; self.n];
        level[0] = Some(0);
        let mut queue = std::collections::VecDeque::from([0usize]);
        while let Some(v) = queue.pop_front() {
            let lv = level[v].unwrap();
            for &w in &self.adj[v] {
                if level[w].is_none() {
                    level[w] = Some(lv + 1);
                    queue.push_back(w);
                }
            }
        }
        level
    }

    /// Period: gcd of the lengths of all closed directed walks.
    ///
    /// Computed as gcd over every arc (u, v) of |level(u) + 1 - level(v)|
    /// with BFS levels from vertex 0.  Tree arcs contribute 0 and drop out
    /// of the gcd; every discrepancy is a difference of two closed-walk
    /// lengths through vertex 0, and conversely.  Requires strong
    /// connectivity; the one strongly connected digraph with no closed walk
    /// at all is the single vertex without a loop.
    pub fn period(&self) -> Result<u64> {
        let components = self.strongly_connected_components();
        if components.len() != 1 {
            return Err(Error::Reducible { components });
        }
        let level = self.levels_from_zero();
        let mut g: u64 = 0;
        for &(u, v) in &self.arcs {
            let lu = level[u].expect("strongly connected, so reachable") as i128;
            let lv = level[v].expect("strongly connected, so reachable") as i128;
            g = g.gcd(&((lu + 1 - lv).unsigned_abs() as u64));
        }
        if g == 0 {
            return Err(Error::NoClosedPath);
        }
        Ok(g)
    }

    /// Partition into cyclic classes V_0, ..., V_{p-1} with every arc going
    /// from V_t to V_{t+1 mod p}.  Vertex 0 anchors V_0.
    pub fn cyclic_structure(&self) -> Result<CyclicStructure> {
        let p = self.period()?;
        let level = self.levels_from_zero();
        let classes: Vec<usize> = level
            .iter()
            .map(|l| (l.expect("strongly connected, so reachable") % p) as usize)
            .collect();
        debug_assert!(self
            .arcs
            .iter()
            .all(|&(u, v)| (classes[u] + 1) % p as usize == classes[v]));

        // List the vertices class by class, ascending inside each class; the
        // normal-form permutation sends each vertex to its slot in that list.
        let mut order: Vec<usize> = (0..self.n).collect();
        order.sort_by_key(|&v| (classes[v], v));
        let perm = Permutation::new(order)?.inverse();

        let mut block_sizes = vec![0usize; p as usize];
        for &c in &classes {
            block_sizes[c] += 1;
        }
        Ok(CyclicStructure { p, classes, perm, block_sizes })
    }
}

/// The cyclic class decomposition of a strongly connected digraph with
/// period p.  `classes[v]` is the class of vertex v (vertex 0 is in class 0);
/// `perm` sends each vertex to its position in the class-by-class ordering,
/// so conjugating a matrix by it produces the block-cyclic normal form in
/// which block row t has its one nonzero block in block column t+1 mod p.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CyclicStructure {
    pub p: u64,
    pub classes: Vec<usize>,
    pub perm: Permutation,
    pub block_sizes: Vec<usize>,
}

impl CyclicStructure {
    pub fn normal_form(&self, m: &IntMatrix) -> Result<IntMatrix> {
        crate::matrix::conjugate_perm(m, &self.perm)
    }

    /// Does every support arc of `m` step one class forward?
    pub fn respects_classes(&self, m: &IntMatrix) -> bool {
        let p = self.p as usize;
        m.support()
            .iter()
            .all(|&(u, v)| (self.classes[u] + 1) % p == self.classes[v])
    }
}
