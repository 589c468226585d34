use std::collections::{BTreeSet, VecDeque};

use num_bigint::BigInt;
use num_traits::One;

use crate::error::{Error, Result};
use crate::matrix::{IntMatrix, NonnegMatrix};
use crate::signing::{decide_diag_similar, Signing};
use crate::spectrum::{char_poly, rotation_check, RotationFactor};

/// Simple undirected graph on vertices 0..n.  Edges are stored as (i, j)
/// with i < j, sorted; no loops, no multi-edges.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Graph {
    n: usize,
    edges: Vec<(usize, usize)>,
}

impl Graph {
    pub fn new(n: usize, edges: Vec<(usize, usize)>) -> Result<Self> {
        if n == 0 {
            return Err(Error::EmptyGraph);
        }
        let mut normalized = Vec::with_capacity(edges.len());
        for (u, v) in edges {
            if u >= n {
                return Err(Error::VertexOutOfRange { v: u, n });
            }
            if v >= n {
                return Err(Error::VertexOutOfRange { v, n });
            }
            if u == v {
                return Err(Error::LoopEdge { u, v });
            }
            normalized.push((u.min(v), u.max(v)));
        }
        normalized.sort_unstable();
        if let Some(w) = normalized.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::DuplicateEdge { u: w[0].0, v: w[0].1 });
        }
        Ok(Graph { n, edges: normalized })
    }

    #[inline]
    pub fn order(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Symmetric 0/1 matrix with a 1 at (i, j) and (j, i) for each edge.
    pub fn adjacency(&self) -> NonnegMatrix {
        let mut m = IntMatrix::zero(self.n).expect("n >= 1");
        for &(u, v) in &self.edges {
            m.set(u, v, BigInt::one());
            m.set(v, u, BigInt::one());
        }
        NonnegMatrix::new(m).expect("0/1 entries")
    }

    fn neighbors(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.n];
        for &(u, v) in &self.edges {
            adj[u].push(v);
            adj[v].push(u);
        }
        adj
    }

    pub fn connected_components(&self) -> Vec<Vec<usize>> {
        let adj = self.neighbors();
        let mut seen = vec![false; self.n];
        let mut components = Vec::new();
        for root in 0..self.n {
            if seen[root] {
                continue;
            }
            seen[root] = true;
            let mut members = vec![root];
            let mut stack = vec![root];
            while let Some(v) = stack.pop() {
                for &w in &adj[v] {
                    if !seen[w] {
                        seen[w] = true;
                        members.push(w);
                        stack.push(w);
                    }
                }
            }
            members.sort_unstable();
            components.push(members);
        }
        components
    }

    pub fn is_connected(&self) -> bool {
        self.connected_components().len() == 1
    }

    fn require_connected(&self) -> Result<()> {
        let components = self.connected_components();
        if components.len() == 1 {
            Ok(())
        } else {
            Err(Error::Disconnected { components })
        }
    }
}

/// Two-coloring of a connected graph: every edge runs between the parts,
/// and vertex 0 sits in `left`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bipartition {
    left: Vec<usize>,
    right: Vec<usize>,
}

impl Bipartition {
    pub fn new(n: usize, left: Vec<usize>, right: Vec<usize>) -> Result<Self> {
        let mut seen = vec![false; n];
        for &v in left.iter().chain(&right) {
            if v >= n {
                return Err(Error::VertexOutOfRange { v, n });
            }
            if seen[v] {
                return Err(Error::InvalidBipartition {
                    reason: format!("vertex {v} appears twice"),
                });
            }
            seen[v] = true;
        }
        if seen.iter().any(|s| !s) {
            return Err(Error::InvalidBipartition { reason: "parts do not cover all vertices".into() });
        }
        if !left.contains(&0) {
            return Err(Error::InvalidBipartition { reason: "vertex 0 must be in the left part".into() });
        }
        let mut left = left;
        let mut right = right;
        left.sort_unstable();
        right.sort_unstable();
        Ok(Bipartition { left, right })
    }

    pub fn left(&self) -> &[usize] {
        &self.left
    }

    pub fn right(&self) -> &[usize] {
        &self.right
    }

    pub fn side(&self, v: usize) -> bool {
        self.left.binary_search(&v).is_ok()
    }

    fn crosses_all_edges(&self, g: &Graph) -> bool {
        g.edges().iter().all(|&(u, v)| self.side(u) != self.side(v))
    }
}

/// BFS two-coloring from vertex 0; `None` when an odd cycle turns up.
///
/// For a connected graph this coincides with the support digraph having
/// period 2: the adjacency matrix is symmetric, so every edge is a closed
/// walk of length 2, making the period 1 or 2 -- and 2 exactly when the
/// graph is bipartite.
pub fn bipartition_of(g: &Graph) -> Result<Option<Bipartition>> {
    g.require_connected()?;
    let adj = g.neighbors();
    let mut color: Vec<Option<bool>> = vec![None; g.order()];
    color[0] = Some(true);
    let mut queue = VecDeque::from([0usize]);
    while let Some(v) = queue.pop_front() {
        let cv = color[v].expect("queued vertices are colored");
        for &w in &adj[v] {
            match color[w] {
                None => {
                    color[w] = Some(!cv);
                    queue.push_back(w);
                }
                Some(cw) if cw == cv => return Ok(None),
                Some(_) => {}
            }
        }
    }
    let mut left = Vec::new();
    let mut right = Vec::new();
    for (v, c) in color.into_iter().enumerate() {
        if c.expect("connected graph fully colored") {
            left.push(v);
        } else {
            right.push(v);
        }
    }
    Ok(Some(Bipartition { left, right }))
}

/// An orientation of a graph: one direction per edge.  `forward[e]` means
/// edge e = (i, j) with i < j is directed i -> j.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Orientation {
    graph: Graph,
    forward: Vec<bool>,
}

impl Orientation {
    pub fn new(graph: Graph, forward: Vec<bool>) -> Result<Self> {
        if forward.len() != graph.edge_count() {
            return Err(Error::DirectionMismatch {
                edges: graph.edge_count(),
                got: forward.len(),
            });
        }
        Ok(Orientation { graph, forward })
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn forward(&self) -> &[bool] {
        &self.forward
    }

    /// Arcs (tail, head), one per edge.
    pub fn arcs(&self) -> Vec<(usize, usize)> {
        self.graph
            .edges()
            .iter()
            .zip(&self.forward)
            .map(|(&(u, v), &f)| if f { (u, v) } else { (v, u) })
            .collect()
    }

    /// Skew-symmetric matrix with +1 at (tail, head) and -1 at (head, tail).
    pub fn skew_adjacency(&self) -> IntMatrix {
        let mut m = IntMatrix::zero(self.graph.order()).expect("n >= 1");
        for (tail, head) in self.arcs() {
            m.set(tail, head, BigInt::one());
            m.set(head, tail, -BigInt::one());
        }
        m
    }

    /// The skew-adjacency matrix viewed as a signing of the adjacency matrix.
    pub fn as_signing(&self) -> Signing {
        Signing::from_matrix(&self.skew_adjacency())
    }
}

/// Every edge directed from the left part to the right part.
pub fn canonical_orientation(g: &Graph, bp: &Bipartition) -> Result<Orientation> {
    if bp.left().len() + bp.right().len() != g.order() {
        return Err(Error::InvalidBipartition { reason: "parts do not cover all vertices".into() });
    }
    if !bp.crosses_all_edges(g) {
        return Err(Error::InvalidBipartition {
            reason: "some edge has both endpoints in one part".into(),
        });
    }
    let forward = g.edges().iter().map(|&(u, _)| bp.side(u)).collect();
    Orientation::new(g.clone(), forward)
}

/// Reverse every arc with exactly one endpoint in `w`.  Algebraically this
/// conjugates the skew-adjacency by the diagonal that is -1 on `w`.
pub fn switch(o: &Orientation, w: &BTreeSet<usize>) -> Result<Orientation> {
    let n = o.graph().order();
    if let Some(&v) = w.iter().find(|&&v| v >= n) {
        return Err(Error::VertexOutOfRange { v, n });
    }
    let forward = o
        .graph()
        .edges()
        .iter()
        .zip(o.forward())
        .map(|(&(u, v), &f)| f ^ (w.contains(&u) != w.contains(&v)))
        .collect();
    Orientation::new(o.graph().clone(), forward)
}

/// The switching witness between two orientations of the same connected
/// graph: a vertex set W with switch(o1, W) = o2, normalized so that
/// vertex 0 stays outside W.  `None` when the orientations are not
/// switching-equivalent, i.e. their skew-adjacency matrices are not
/// diagonally similar.
pub fn switching_equivalent(o1: &Orientation, o2: &Orientation) -> Result<Option<Vec<usize>>> {
    if o1.graph() != o2.graph() {
        return Err(Error::GraphMismatch);
    }
    o1.graph().require_connected()?;
    let delta = match decide_diag_similar(&o1.as_signing(), &o2.as_signing())? {
        Some(d) => d,
        None => return Ok(None),
    };
    // d_0 = +1 by normalization, so W never contains vertex 0.
    let w: Vec<usize> = (0..o1.graph().order())
        .filter(|&v| delta.get(v) == crate::matrix::Sign::Minus)
        .collect();
    Ok(Some(w))
}

/// An orientation whose skew spectrum is i times the adjacency spectrum
/// exists exactly for bipartite graphs, and the canonical orientation is
/// then such an orientation.  The rotation identity is re-verified on the
/// result before it is returned.
pub fn has_i_spectrum_orientation(g: &Graph) -> Result<Option<Orientation>> {
    g.require_connected()?;
    let bp = match bipartition_of(g)? {
        Some(bp) => bp,
        None => return Ok(None),
    };
    let orientation = canonical_orientation(g, &bp)?;
    let rot = RotationFactor::new(1, 2)?;
    let pa = char_poly(g.adjacency().as_int());
    let ps = char_poly(&orientation.skew_adjacency());
    let ok = rotation_check(&pa, &ps, &rot)?;
    assert!(ok, "canonical orientation of a bipartite graph must rotate the spectrum by i");
    Ok(Some(orientation))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn graph(n: usize, edges: &[(usize, usize)]) -> Graph {
        Graph::new(n, edges.to_vec()).unwrap()
    }

    fn path(n: usize) -> Graph {
        graph(n, &(0..n - 1).map(|i| (i, i + 1)).collect::<Vec<_>>())
    }

    fn cycle(n: usize) -> Graph {
        let mut e: Vec<_> = (0..n - 1).map(|i| (i, i + 1)).collect();
        e.push((0, n - 1));
        graph(n, &e)
    }

    #[test]
    fn graph_validation() {
        assert!(matches!(Graph::new(0, vec![]), Err(Error::EmptyGraph)));
        assert!(matches!(Graph::new(2, vec![(0, 0)]), Err(Error::LoopEdge { .. })));
        assert!(matches!(
            Graph::new(3, vec![(0, 1), (1, 0)]),
            Err(Error::DuplicateEdge { u: 0, v: 1 })
        ));
        assert!(matches!(
            Graph::new(2, vec![(0, 5)]),
            Err(Error::VertexOutOfRange { v: 5, n: 2 })
        ));
        // Unordered input pairs are normalized.
        assert_eq!(graph(3, &[(2, 1), (1, 0)]).edges(), &[(0, 1), (1, 2)]);
    }

    #[test]
    fn adjacency_examples() {
        assert_eq!(path(2).adjacency(), NonnegMatrix::from_i64(&[&[0, 1], &[1, 0]]).unwrap());
        let triangle = cycle(3);
        assert_eq!(
            triangle.adjacency(),
            NonnegMatrix::from_i64(&[&[0, 1, 1], &[1, 0, 1], &[1, 1, 0]]).unwrap()
        );
        let empty = Graph::new(2, vec![]).unwrap();
        assert_eq!(empty.adjacency(), NonnegMatrix::from_i64(&[&[0, 0], &[0, 0]]).unwrap());
    }

    #[test]
    fn skew_adjacency_examples() {
        let g = path(2);
        let o01 = Orientation::new(g.clone(), vec![true]).unwrap();
        assert_eq!(o01.skew_adjacency(), IntMatrix::from_i64(&[&[0, 1], &[-1, 0]]).unwrap());
        let o10 = Orientation::new(g, vec![false]).unwrap();
        assert_eq!(o10.skew_adjacency(), IntMatrix::from_i64(&[&[0, -1], &[1, 0]]).unwrap());

        // Oriented triangle 0->1->2->0: skew-symmetric with |S| = adjacency.
        let t = cycle(3);
        let o = Orientation::new(t.clone(), vec![true, false, true]).unwrap();
        assert_eq!(o.arcs(), vec![(0, 1), (2, 0), (1, 2)]);
        let s = o.skew_adjacency();
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(*s.get(i, j), -s.get(j, i).clone());
            }
        }
        assert_eq!(s.abs(), t.adjacency());
    }

    #[test]
    fn bipartition_examples() {
        let bp = bipartition_of(&path(3)).unwrap().unwrap();
        assert_eq!(bp.left(), &[0, 2]);
        assert_eq!(bp.right(), &[1]);

        assert!(bipartition_of(&cycle(3)).unwrap().is_none());

        let bp = bipartition_of(&cycle(6)).unwrap().unwrap();
        assert_eq!(bp.left(), &[0, 2, 4]);
        assert_eq!(bp.right(), &[1, 3, 5]);

        let disconnected = Graph::new(4, vec![(0, 1), (2, 3)]).unwrap();
        match bipartition_of(&disconnected) {
            Err(Error::Disconnected { components }) => {
                assert_eq!(components, vec![vec![0, 1], vec![2, 3]]);
            }
            other => panic!("expected Disconnected, got {other:?}"),
        }
    }

    #[test]
    fn bipartite_matches_period_two() {
        use crate::digraph::Digraph;
        for g in [path(2), path(4), cycle(4), cycle(6), cycle(3), cycle(5), graph(4, &[(0, 1), (0, 2), (0, 3), (1, 2)])] {
            let bip = bipartition_of(&g).unwrap().is_some();
            let p = Digraph::from_matrix(&g.adjacency()).period().unwrap();
            assert_eq!(bip, p == 2, "graph {g:?}");
        }
    }

    #[test]
    fn canonical_orientation_runs_left_to_right() {
        let g = path(3);
        let bp = bipartition_of(&g).unwrap().unwrap();
        let o = canonical_orientation(&g, &bp).unwrap();
        assert_eq!(o.arcs(), vec![(0, 1), (2, 1)]);

        // The skew spectrum is i times the adjacency spectrum, exactly.
        let rot = RotationFactor::new(1, 2).unwrap();
        assert!(rotation_check(
            &char_poly(g.adjacency().as_int()),
            &char_poly(&o.skew_adjacency()),
            &rot
        )
        .unwrap());
    }

    #[test]
    fn canonical_orientation_rejects_bad_bipartitions() {
        let g = cycle(4);
        let bad = Bipartition::new(4, vec![0, 1], vec![2, 3]).unwrap();
        assert!(matches!(
            canonical_orientation(&g, &bad),
            Err(Error::InvalidBipartition { .. })
        ));
        assert!(Bipartition::new(4, vec![1, 2], vec![0, 3]).is_err());
        assert!(Bipartition::new(4, vec![0, 1], vec![1, 2, 3]).is_err());
        assert!(Bipartition::new(4, vec![0, 1], vec![2]).is_err());
    }

    #[test]
    fn switching_identities() {
        let g = cycle(4);
        let o = Orientation::new(g.clone(), vec![true, true, false, true]).unwrap();
        let empty = BTreeSet::new();
        let all: BTreeSet<usize> = (0..4).collect();
        let w: BTreeSet<usize> = [1, 3].into_iter().collect();
        assert_eq!(switch(&o, &empty).unwrap(), o);
        assert_eq!(switch(&o, &all).unwrap(), o);
        assert_eq!(switch(&switch(&o, &w).unwrap(), &w).unwrap(), o);
        assert!(switch(&o, &[9].into_iter().collect()).is_err());
    }

    #[test]
    fn switching_matches_diagonal_conjugation() {
        use crate::matrix::{conjugate_diag, Sign, SignDiagonal};
        let g = graph(5, &[(0, 1), (0, 2), (1, 2), (2, 3), (3, 4), (1, 4)]);
        let o = Orientation::new(g, vec![true, false, true, true, false, true]).unwrap();
        let w: BTreeSet<usize> = [1, 3].into_iter().collect();
        let d = SignDiagonal::new(
            (0..5).map(|v| if w.contains(&v) { Sign::Minus } else { Sign::Plus }).collect(),
        )
        .unwrap();
        assert_eq!(
            switch(&o, &w).unwrap().skew_adjacency(),
            conjugate_diag(&o.skew_adjacency(), &d).unwrap()
        );
    }

    #[test]
    fn switching_equivalence_round_trip() {
        let g = cycle(4);
        let bp = bipartition_of(&g).unwrap().unwrap();
        let canonical = canonical_orientation(&g, &bp).unwrap();
        let switched = switch(&canonical, &[0].into_iter().collect()).unwrap();
        let w = switching_equivalent(&canonical, &switched).unwrap().unwrap();
        // Normalized away from vertex 0: the complement of {0}.
        assert_eq!(w, vec![1, 2, 3]);
        let wset: BTreeSet<usize> = w.into_iter().collect();
        assert_eq!(switch(&canonical, &wset).unwrap(), switched);

        assert_eq!(switching_equivalent(&canonical, &canonical).unwrap(), Some(vec![]));
    }

    #[test]
    fn switching_equivalence_needs_same_connected_graph() {
        let o1 = Orientation::new(cycle(4), vec![true; 4]).unwrap();
        let o2 = Orientation::new(path(4), vec![true; 3]).unwrap();
        assert!(matches!(switching_equivalent(&o1, &o2), Err(Error::GraphMismatch)));

        let dg = Graph::new(4, vec![(0, 1), (2, 3)]).unwrap();
        let od1 = Orientation::new(dg.clone(), vec![true, true]).unwrap();
        let od2 = Orientation::new(dg, vec![true, false]).unwrap();
        assert!(matches!(switching_equivalent(&od1, &od2), Err(Error::Disconnected { .. })));
    }

    #[test]
    fn i_spectrum_orientation_exists_iff_bipartite() {
        assert!(has_i_spectrum_orientation(&cycle(3)).unwrap().is_none());
        assert!(has_i_spectrum_orientation(&cycle(5)).unwrap().is_none());
        let o = has_i_spectrum_orientation(&path(2)).unwrap().unwrap();
        assert_eq!(o.arcs(), vec![(0, 1)]);
        assert!(has_i_spectrum_orientation(&cycle(4)).unwrap().is_some());
        assert!(has_i_spectrum_orientation(&cycle(6)).unwrap().is_some());
    }

    #[test]
    fn clockwise_c4_is_switching_equivalent_to_canonical() {
        let g = cycle(4);
        let bp = bipartition_of(&g).unwrap().unwrap();
        let canonical = canonical_orientation(&g, &bp).unwrap();
        // Edges of C4 in stored order: (0,1), (0,3), (1,2), (2,3).
        // All-clockwise 0->1->2->3->0 means forward, backward, forward, forward.
        let clockwise = Orientation::new(g, vec![true, false, true, true]).unwrap();
        let w = switching_equivalent(&canonical, &clockwise).unwrap().unwrap();

        // Cross-check against brute force over all 2^4 switching sets.
        let mut brute: Option<BTreeSet<usize>> = None;
        for mask in 0..16u32 {
            let set: BTreeSet<usize> = (0..4).filter(|v| (mask >> v) & 1 == 1).collect();
            if switch(&canonical, &set).unwrap() == clockwise {
                brute = Some(set);
                break;
            }
        }
        let found = brute.expect("equal spectra imply switching equivalence");
        let wset: BTreeSet<usize> = w.iter().copied().collect();
        assert!(wset == found || wset == (0..4).filter(|v| !found.contains(v)).collect());
    }
}
