//! Finite simple graphs with an optional anchor vertex.
//!
//! Vertices are labelled `1..=n`. The anchor marks the vertex where an
//! infinite path gets attached by [`couple`] or by the tail solver.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("vertex count must be positive")]
    EmptyGraph,
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("vertex {vertex} out of range 1..={n}")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("graph has no anchor vertex")]
    MissingAnchor,
    #[error("kappa must contain at least one entry")]
    EmptyKappa,
    #[error("invalid kappa entry {value}: {reason}")]
    InvalidKappa { value: u32, reason: &'static str },
}

/// A finite simple undirected graph.
///
/// Edges are stored as ordered pairs `(i, j)` with `i < j`. The edge set has
/// set semantics, so duplicates collapse on construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    edges: BTreeSet<(usize, usize)>,
    anchor: Option<usize>,
}

impl Graph {
    /// Builds a graph, validating labels. `n = 0` is allowed only when there
    /// are no edges and no anchor (the empty graph produced by deletion).
    pub fn new<I>(n: usize, edges: I, anchor: Option<usize>) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut set = BTreeSet::new();
        for (a, b) in edges {
            for v in [a, b] {
                if v == 0 || v > n {
                    return Err(GraphError::VertexOutOfRange { vertex: v, n });
                }
            }
            if a == b {
                return Err(GraphError::SelfLoop(a));
            }
            set.insert((a.min(b), a.max(b)));
        }
        if let Some(v) = anchor {
            if v == 0 || v > n {
                return Err(GraphError::VertexOutOfRange { vertex: v, n });
            }
        }
        Ok(Self {
            n,
            edges: set,
            anchor,
        })
    }

    /// The graph with no vertices.
    pub fn empty() -> Self {
        Self {
            n: 0,
            edges: BTreeSet::new(),
            anchor: None,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.edges.iter().copied()
    }

    pub fn anchor(&self) -> Option<usize> {
        self.anchor
    }

    pub fn require_anchor(&self) -> Result<usize, GraphError> {
        self.anchor.ok_or(GraphError::MissingAnchor)
    }

    /// Returns a copy with the anchor moved to `v`.
    pub fn with_anchor(mut self, v: usize) -> Result<Self, GraphError> {
        if v == 0 || v > self.n {
            return Err(GraphError::VertexOutOfRange { vertex: v, n: self.n });
        }
        self.anchor = Some(v);
        Ok(self)
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.edges.contains(&(a.min(b), a.max(b)))
    }

    pub fn degree(&self, v: usize) -> usize {
        self.edges.iter().filter(|&&(a, b)| a == v || b == v).count()
    }

    /// Neighbour lists indexed by label; index 0 is unused.
    pub fn neighbours(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.n + 1];
        for &(a, b) in &self.edges {
            adj[a].push(b);
            adj[b].push(a);
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        adj
    }

    /// Dense 0/1 adjacency matrix, row-major, 0-based.
    pub fn adjacency(&self) -> Vec<Vec<i64>> {
        let mut a = vec![vec![0i64; self.n]; self.n];
        for &(i, j) in &self.edges {
            a[i - 1][j - 1] = 1;
            a[j - 1][i - 1] = 1;
        }
        a
    }

    /// Labels reachable from `v`, including `v`.
    pub fn component_of(&self, v: usize) -> BTreeSet<usize> {
        let adj = self.neighbours();
        let mut seen = BTreeSet::new();
        let mut stack = vec![v];
        while let Some(u) = stack.pop() {
            if seen.insert(u) {
                stack.extend(adj[u].iter().copied().filter(|w| !seen.contains(w)));
            }
        }
        seen
    }

    pub fn is_connected(&self) -> bool {
        self.n == 0 || self.component_of(1).len() == self.n
    }
}

impl fmt::Display for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Graph(n={}, edges=[", self.n)?;
        for (k, (a, b)) in self.edges.iter().enumerate() {
            if k > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{a}-{b}")?;
        }
        write!(f, "]")?;
        if let Some(v) = self.anchor {
            write!(f, ", anchor={v}")?;
        }
        write!(f, ")")
    }
}

/// On-disk form: `{"n":3,"edges":[[1,2],[2,3],[1,3]],"anchor":1}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GraphJson {
    n: usize,
    edges: Vec<[usize; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    anchor: Option<usize>,
}

impl Serialize for Graph {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        GraphJson {
            n: self.n,
            edges: self.edges.iter().map(|&(a, b)| [a, b]).collect(),
            anchor: self.anchor,
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Graph {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let raw = GraphJson::deserialize(deserializer)?;
        if raw.n == 0 {
            return Err(serde::de::Error::custom(GraphError::EmptyGraph));
        }
        Graph::new(raw.n, raw.edges.into_iter().map(|[a, b]| (a, b)), raw.anchor)
            .map_err(serde::de::Error::custom)
    }
}

/// Which worked family a [`FamilySpec`] describes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    Star,
    Flower,
}

/// A multiple star S(κ) or a flower with petals κ, rooted at vertex 1.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilySpec {
    pub family: Family,
    pub kappa: Vec<u32>,
}

impl FamilySpec {
    pub fn new(family: Family, kappa: Vec<u32>) -> Result<Self, GraphError> {
        validate_kappa(&kappa, if family == Family::Flower { 2 } else { 1 })?;
        Ok(Self { family, kappa })
    }

    pub fn star(kappa: &[u32]) -> Result<Self, GraphError> {
        Self::new(Family::Star, kappa.to_vec())
    }

    pub fn flower(kappa: &[u32]) -> Result<Self, GraphError> {
        Self::new(Family::Flower, kappa.to_vec())
    }

    /// The star with two single-edge rays, i.e. the path P₃ rooted at its
    /// centre. Attaching a tail gives a graph with no discrete spectrum.
    pub fn is_trivial(&self) -> bool {
        self.family == Family::Star && self.kappa == [1, 1]
    }

    pub fn build(&self) -> Result<Graph, GraphError> {
        match self.family {
            Family::Star => build_multistar(&self.kappa),
            Family::Flower => build_flower(&self.kappa),
        }
    }
}

fn validate_kappa(kappa: &[u32], min: u32) -> Result<(), GraphError> {
    if kappa.is_empty() {
        return Err(GraphError::EmptyKappa);
    }
    if let Some(&k) = kappa.iter().find(|&&k| k < min) {
        return Err(GraphError::InvalidKappa {
            value: k,
            reason: if min == 1 {
                "ray lengths must be at least 1"
            } else {
                "petals need at least 2 non-root vertices"
            },
        });
    }
    Ok(())
}

/// The path Pₘ with edges {i, i+1}.
pub fn build_path(m: usize) -> Result<Graph, GraphError> {
    if m == 0 {
        return Err(GraphError::EmptyGraph);
    }
    Graph::new(m, (1..m).map(|i| (i, i + 1)), None)
}

/// The cycle Cₘ, m ≥ 3.
pub fn build_cycle(m: usize) -> Result<Graph, GraphError> {
    if m < 3 {
        return Err(GraphError::InvalidKappa {
            value: m as u32,
            reason: "a cycle needs at least 3 vertices",
        });
    }
    Graph::new(m, (1..m).map(|i| (i, i + 1)).chain([(1, m)]), None)
}

/// S(κ): the star K_{1,n} with edge j subdivided into kⱼ edges.
///
/// The root is vertex 1 and is the anchor; ray j occupies a consecutive
/// block of labels, nearest-to-root first.
pub fn build_multistar(kappa: &[u32]) -> Result<Graph, GraphError> {
    validate_kappa(kappa, 1)?;
    let n = 1 + kappa.iter().map(|&k| k as usize).sum::<usize>();
    let mut edges = Vec::with_capacity(n - 1);
    let mut next = 2;
    for &k in kappa {
        let k = k as usize;
        edges.push((1, next));
        edges.extend((next..next + k - 1).map(|v| (v, v + 1)));
        next += k;
    }
    Graph::new(n, edges, Some(1))
}

/// n cycles of kⱼ+1 vertices each, glued at the root (vertex 1, anchored).
pub fn build_flower(kappa: &[u32]) -> Result<Graph, GraphError> {
    validate_kappa(kappa, 2)?;
    let n = 1 + kappa.iter().map(|&k| k as usize).sum::<usize>();
    let mut edges = Vec::new();
    let mut next = 2;
    for &k in kappa {
        let k = k as usize;
        let last = next + k - 1;
        edges.push((1, next));
        edges.extend((next..last).map(|v| (v, v + 1)));
        edges.push((last, 1));
        next += k;
    }
    Graph::new(n, edges, Some(1))
}

/// Disjoint union of `g1` and `g2` plus the bridge between their anchors.
///
/// Labels of `g2` are shifted by `g1.n()`; the result keeps `g1`'s anchor.
pub fn couple(g1: &Graph, g2: &Graph) -> Result<Graph, GraphError> {
    let v1 = g1.require_anchor()?;
    let v2 = g2.require_anchor()?;
    let shift = g1.n;
    let edges = g1
        .edges()
        .chain(g2.edges().map(|(a, b)| (a + shift, b + shift)))
        .chain([(v1, v2 + shift)]);
    Graph::new(g1.n + g2.n, edges, Some(v1))
}

/// Induced subgraph on the vertices not in `removed`, relabelled in order.
///
/// The anchor survives (relabelled) unless it is deleted.
pub fn delete_vertices(g: &Graph, removed: &[usize]) -> Result<Graph, GraphError> {
    let mut gone = vec![false; g.n + 1];
    for &v in removed {
        if v == 0 || v > g.n {
            return Err(GraphError::VertexOutOfRange { vertex: v, n: g.n });
        }
        gone[v] = true;
    }
    let mut label = vec![0usize; g.n + 1];
    let mut next = 0;
    for v in 1..=g.n {
        if !gone[v] {
            next += 1;
            label[v] = next;
        }
    }
    let edges = g
        .edges()
        .filter(|&(a, b)| !gone[a] && !gone[b])
        .map(|(a, b)| (label[a], label[b]));
    let anchor = g.anchor.filter(|&v| !gone[v]).map(|v| label[v]);
    Graph::new(next, edges, anchor)
}

/// Every simple cycle (length ≥ 3) through `v`, each listed once as a vertex
/// sequence starting at `v`.
///
/// A cycle is identified by its cyclic sequence: of the two traversal
/// directions, the one whose second vertex is smaller than its last is kept.
/// Cycles sharing a vertex set but not an edge set are distinct.
pub fn simple_cycles_through(g: &Graph, v: usize) -> Result<Vec<Vec<usize>>, GraphError> {
    if v == 0 || v > g.n {
        return Err(GraphError::VertexOutOfRange { vertex: v, n: g.n });
    }
    let adj = g.neighbours();
    let mut on_path = vec![false; g.n + 1];
    let mut path = vec![v];
    let mut out = Vec::new();
    on_path[v] = true;
    cycle_dfs(&adj, v, &mut on_path, &mut path, &mut out);
    Ok(out)
}

fn cycle_dfs(
    adj: &[Vec<usize>],
    start: usize,
    on_path: &mut [bool],
    path: &mut Vec<usize>,
    out: &mut Vec<Vec<usize>>,
) {
    let tip = *path.last().expect("path starts non-empty");
    for &w in &adj[tip] {
        if w == start {
            if path.len() >= 3 && path[1] < tip {
                out.push(path.clone());
            }
        } else if !on_path[w] {
            on_path[w] = true;
            path.push(w);
            cycle_dfs(adj, start, on_path, path, out);
            path.pop();
            on_path[w] = false;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn edge_list(g: &Graph) -> Vec<(usize, usize)> {
        g.edges().collect()
    }

    #[test]
    fn paths() {
        assert_eq!(build_path(1).unwrap().edge_count(), 0);
        assert_eq!(edge_list(&build_path(2).unwrap()), vec![(1, 2)]);
        assert_eq!(
            edge_list(&build_path(5).unwrap()),
            vec![(1, 2), (2, 3), (3, 4), (4, 5)]
        );
        assert_eq!(build_path(0), Err(GraphError::EmptyGraph));
    }

    #[test]
    fn multistar_shapes() {
        let k13 = build_multistar(&[1, 1, 1]).unwrap();
        assert_eq!(k13.n(), 4);
        assert_eq!(k13.degree(1), 3);
        assert_eq!(k13.anchor(), Some(1));

        let single = build_multistar(&[1]).unwrap();
        assert_eq!(edge_list(&single), vec![(1, 2)]);

        let s22 = build_multistar(&[2, 2]).unwrap();
        assert_eq!(s22.n(), 5);
        assert_eq!(s22.degree(1), 2);
        assert!(s22.is_connected());

        assert_eq!(build_multistar(&[]), Err(GraphError::EmptyKappa));
        assert!(build_multistar(&[2, 0]).is_err());
    }

    #[test]
    fn flower_shapes() {
        let tri = build_flower(&[2]).unwrap();
        assert_eq!(tri.edge_count(), 3);
        assert_eq!(tri.degree(1), 2);

        let bowtie = build_flower(&[2, 2]).unwrap();
        assert_eq!(bowtie.n(), 5);
        assert_eq!(bowtie.degree(1), 4);
        assert_eq!(bowtie.edge_count(), 6);

        let c4 = build_flower(&[3]).unwrap();
        assert_eq!(c4.n(), 4);
        assert!((1..=4).all(|v| c4.degree(v) == 2));

        assert!(matches!(
            build_flower(&[2, 1]),
            Err(GraphError::InvalidKappa { value: 1, .. })
        ));
    }

    #[test]
    fn couple_examples() {
        let p1 = build_path(1).unwrap().with_anchor(1).unwrap();
        let p2 = couple(&p1, &p1).unwrap();
        assert_eq!(p2.n(), 2);
        assert_eq!(edge_list(&p2), vec![(1, 2)]);

        let tri = build_flower(&[2]).unwrap();
        let tail = build_path(2).unwrap().with_anchor(1).unwrap();
        let g = couple(&tri, &tail).unwrap();
        assert_eq!(g.n(), 5);
        assert_eq!(g.edge_count(), 5);
        assert!(g.has_edge(1, 4) && g.has_edge(4, 5));
        assert_eq!(g.anchor(), Some(1));

        let unanchored = build_path(3).unwrap();
        assert_eq!(couple(&tri, &unanchored), Err(GraphError::MissingAnchor));
    }

    #[test]
    fn delete_examples() {
        let tri = build_flower(&[2]).unwrap();
        let p2 = delete_vertices(&tri, &[1]).unwrap();
        assert_eq!(edge_list(&p2), vec![(1, 2)]);
        assert_eq!(p2.anchor(), None);

        let k13 = build_multistar(&[1, 1, 1]).unwrap();
        let isolated = delete_vertices(&k13, &[1]).unwrap();
        assert_eq!((isolated.n(), isolated.edge_count()), (3, 0));

        let p5 = build_path(5).unwrap();
        let split = delete_vertices(&p5, &[3]).unwrap();
        assert_eq!(edge_list(&split), vec![(1, 2), (3, 4)]);

        let all = delete_vertices(&tri, &[1, 2, 3]).unwrap();
        assert_eq!(all.n(), 0);

        assert!(delete_vertices(&tri, &[4]).is_err());
    }

    #[test]
    fn cycles_through_vertex() {
        let tri = build_flower(&[2]).unwrap();
        assert_eq!(simple_cycles_through(&tri, 1).unwrap(), vec![vec![1, 2, 3]]);

        let p5 = build_path(5).unwrap();
        for v in 1..=5 {
            assert!(simple_cycles_through(&p5, v).unwrap().is_empty());
        }

        let bowtie = build_flower(&[2, 2]).unwrap();
        assert_eq!(simple_cycles_through(&bowtie, 1).unwrap().len(), 2);
        assert_eq!(simple_cycles_through(&bowtie, 2).unwrap().len(), 1);
    }

    #[test]
    fn k4_cycles_share_vertex_sets() {
        let k4 = Graph::new(4, [(1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4)], None).unwrap();
        let cycles = simple_cycles_through(&k4, 1).unwrap();
        // three triangles and three Hamiltonian 4-cycles
        assert_eq!(cycles.iter().filter(|c| c.len() == 3).count(), 3);
        assert_eq!(cycles.iter().filter(|c| c.len() == 4).count(), 3);
    }

    #[test]
    fn json_round_trip_and_validation() {
        let g: Graph = serde_json::from_str(r#"{"n":3,"edges":[[1,2],[2,3],[1,3]],"anchor":1}"#).unwrap();
        assert_eq!(g, build_flower(&[2]).unwrap());
        let text = serde_json::to_string(&g).unwrap();
        assert_eq!(serde_json::from_str::<Graph>(&text).unwrap(), g);

        assert!(serde_json::from_str::<Graph>(r#"{"n":2,"edges":[[1,1]]}"#).is_err());
        assert!(serde_json::from_str::<Graph>(r#"{"n":2,"edges":[[1,3]]}"#).is_err());
        assert!(serde_json::from_str::<Graph>(r#"{"n":0,"edges":[]}"#).is_err());
        assert!(serde_json::from_str::<Graph>(r#"{"n":2,"edges":[],"anchor":5}"#).is_err());
    }

    #[test]
    fn trivial_star_flag() {
        assert!(FamilySpec::star(&[1, 1]).unwrap().is_trivial());
        assert!(!FamilySpec::star(&[1, 1, 1]).unwrap().is_trivial());
        assert!(FamilySpec::flower(&[1]).is_err());
    }
}
