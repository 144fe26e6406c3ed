//! Small simple graphs used as sufficient statistics.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Largest motif accepted; bounds the exact chromatic-number search.
pub const MAX_MOTIF_VERTICES: usize = 12;

/// Structural class used to pick a fast local-count formula in the samplers.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MotifKind {
    Edge,
    /// Root joined to `j ≥ 2` leaves.
    Star(usize),
    Triangle,
    General,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Motif {
    vertex_count: usize,
    edges: Vec<(usize, usize)>,
    chromatic: usize,
    kind: MotifKind,
    label: String,
}

impl Motif {
    /// Builds a motif from an edge list. Edges are stored with the smaller endpoint
    /// first; self-loops, duplicates and edgeless motifs are rejected.
    pub fn new(vertex_count: usize, edges: &[(usize, usize)]) -> Result<Self> {
        Self::with_label(vertex_count, edges, None)
    }

    fn with_label(vertex_count: usize, edges: &[(usize, usize)], label: Option<String>) -> Result<Self> {
        if vertex_count > MAX_MOTIF_VERTICES {
            return Err(Error::TooLarge {
                what: "motif vertex count".into(),
                size: vertex_count as f64,
                bound: MAX_MOTIF_VERTICES as f64,
            });
        }
        if edges.is_empty() {
            return Err(Error::InvalidMotif("a motif needs at least one edge".into()));
        }
        let mut normalized: Vec<(usize, usize)> = Vec::with_capacity(edges.len());
        for &(a, b) in edges {
            if a >= vertex_count || b >= vertex_count {
                return Err(Error::InvalidMotif(format!(
                    "edge ({a}, {b}) out of range for {vertex_count} vertices"
                )));
            }
            if a == b {
                return Err(Error::InvalidMotif(format!("self-loop at vertex {a}")));
            }
            let e = (a.min(b), a.max(b));
            if normalized.contains(&e) {
                return Err(Error::InvalidMotif(format!("duplicate edge ({}, {})", e.0, e.1)));
            }
            normalized.push(e);
        }
        let chromatic = chromatic_number_of(vertex_count, &normalized);
        let kind = classify(vertex_count, &normalized);
        let label = label.unwrap_or_else(|| {
            normalized
                .iter()
                .map(|(a, b)| format!("{a}-{b}"))
                .collect::<Vec<_>>()
                .join(",")
        });
        Ok(Motif {
            vertex_count,
            edges: normalized,
            chromatic,
            kind,
            label,
        })
    }

    pub fn edge() -> Self {
        Self::with_label(2, &[(0, 1)], Some("edge".into())).unwrap()
    }

    pub fn triangle() -> Self {
        Self::with_label(3, &[(0, 1), (1, 2), (0, 2)], Some("triangle".into())).unwrap()
    }

    /// `j`-star: root `0` joined to leaves `1..=j`. `star(1)` is the single edge.
    pub fn star(j: usize) -> Result<Self> {
        if j == 0 {
            return Err(Error::InvalidMotif("a star needs at least one leaf".into()));
        }
        if j == 1 {
            return Ok(Self::edge());
        }
        let edges: Vec<_> = (1..=j).map(|v| (0, v)).collect();
        Self::with_label(j + 1, &edges, Some(format!("star:{j}")))
    }

    pub fn cycle(j: usize) -> Result<Self> {
        if j < 3 {
            return Err(Error::InvalidMotif(format!("a cycle needs at least 3 vertices, got {j}")));
        }
        if j == 3 {
            return Ok(Self::triangle());
        }
        let edges: Vec<_> = (0..j).map(|v| (v, (v + 1) % j)).collect();
        Self::with_label(j, &edges, Some(format!("cycle:{j}")))
    }

    pub fn complete(r: usize) -> Result<Self> {
        match r {
            0 | 1 => Err(Error::InvalidMotif(format!("complete graph needs r >= 2, got {r}"))),
            2 => Ok(Self::edge()),
            3 => Ok(Self::triangle()),
            _ => {
                let edges: Vec<_> = (0..r).flat_map(|a| ((a + 1)..r).map(move |b| (a, b))).collect();
                Self::with_label(r, &edges, Some(format!("complete:{r}")))
            }
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    /// `e(H)`.
    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// `χ(H)`, computed once at construction.
    pub fn chromatic_number(&self) -> usize {
        self.chromatic
    }

    pub fn kind(&self) -> MotifKind {
        self.kind
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.edges.iter().filter_map(move |&(a, b)| {
            if a == v {
                Some(b)
            } else if b == v {
                Some(a)
            } else {
                None
            }
        })
    }

    pub fn degree(&self, v: usize) -> usize {
        self.neighbors(v).count()
    }

    /// Vertex order for backtracking: highest degree first, then breadth-first so
    /// every vertex after the first of its component has a placed neighbour.
    pub(crate) fn search_order(&self) -> Vec<usize> {
        let n = self.vertex_count;
        let mut placed = vec![false; n];
        let mut order = Vec::with_capacity(n);
        while order.len() < n {
            let start = (0..n)
                .filter(|&v| !placed[v])
                .max_by_key(|&v| (self.degree(v), std::cmp::Reverse(v)))
                .unwrap();
            placed[start] = true;
            order.push(start);
            let mut head = order.len() - 1;
            while head < order.len() {
                let v = order[head];
                head += 1;
                let mut next: Vec<usize> = self.neighbors(v).filter(|&u| !placed[u]).collect();
                next.sort_by_key(|&u| std::cmp::Reverse(self.degree(u)));
                for u in next {
                    if !placed[u] {
                        placed[u] = true;
                        order.push(u);
                    }
                }
            }
        }
        order
    }
}

impl fmt::Display for Motif {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label)
    }
}

/// Parses `edge`, `triangle`, `star:j`, `cycle:j`, `complete:r`, or an inline edge
/// list such as `0-1,1-2,0-2`.
impl FromStr for Motif {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let numbered = |rest: &str| -> Result<usize> {
            rest.parse::<usize>()
                .map_err(|_| Error::InvalidMotif(format!("bad size in motif `{s}`")))
        };
        match s.split_once(':') {
            None if s == "edge" => return Ok(Motif::edge()),
            None if s == "triangle" => return Ok(Motif::triangle()),
            Some(("star", rest)) => return Motif::star(numbered(rest)?),
            Some(("cycle", rest)) => return Motif::cycle(numbered(rest)?),
            Some(("complete", rest)) => return Motif::complete(numbered(rest)?),
            _ => {}
        }
        let mut edges = Vec::new();
        for token in s.split(',') {
            let (a, b) = token
                .split_once('-')
                .ok_or_else(|| Error::InvalidMotif(format!("unknown motif `{s}`")))?;
            let a = a.trim().parse::<usize>();
            let b = b.trim().parse::<usize>();
            match (a, b) {
                (Ok(a), Ok(b)) => edges.push((a, b)),
                _ => return Err(Error::InvalidMotif(format!("bad edge `{token}` in `{s}`"))),
            }
        }
        let vertex_count = edges.iter().map(|&(a, b)| a.max(b) + 1).max().unwrap_or(0);
        Motif::new(vertex_count, &edges)
    }
}

fn classify(vertex_count: usize, edges: &[(usize, usize)]) -> MotifKind {
    if edges.len() == 1 && vertex_count == 2 {
        return MotifKind::Edge;
    }
    if vertex_count == 3 && edges.len() == 3 {
        return MotifKind::Triangle;
    }
    let degrees: Vec<usize> = (0..vertex_count)
        .map(|v| edges.iter().filter(|&&(a, b)| a == v || b == v).count())
        .collect();
    let j = edges.len();
    if j >= 2 && vertex_count == j + 1 {
        let centers = degrees.iter().filter(|&&d| d == j).count();
        let leaves = degrees.iter().filter(|&&d| d == 1).count();
        if centers == 1 && leaves == j {
            return MotifKind::Star(j);
        }
    }
    MotifKind::General
}

/// Exact chromatic number of `H` via branch and bound, with the clique number as
/// the starting lower bound.
pub fn chromatic_number(motif: &Motif) -> Result<usize> {
    if motif.vertex_count() > MAX_MOTIF_VERTICES {
        return Err(Error::TooLarge {
            what: "chromatic number search".into(),
            size: motif.vertex_count() as f64,
            bound: MAX_MOTIF_VERTICES as f64,
        });
    }
    Ok(motif.chromatic_number())
}

fn chromatic_number_of(n: usize, edges: &[(usize, usize)]) -> usize {
    if n == 0 {
        return 0;
    }
    let mut adj = vec![0u32; n];
    for &(a, b) in edges {
        adj[a] |= 1 << b;
        adj[b] |= 1 << a;
    }
    let lower = clique_number(&adj).max(1);
    // order by degree so conflicts surface early
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&v| std::cmp::Reverse(adj[v].count_ones()));
    (lower..=n)
        .find(|&k| {
            let mut colors = vec![usize::MAX; n];
            colorable(&adj, &order, 0, k, &mut colors)
        })
        .unwrap_or(n)
}

fn colorable(adj: &[u32], order: &[usize], depth: usize, k: usize, colors: &mut [usize]) -> bool {
    if depth == order.len() {
        return true;
    }
    let v = order[depth];
    // symmetry breaking: never open more than one new colour at a time
    let used = colors.iter().filter(|&&c| c != usize::MAX).max().map_or(0, |&c| c + 1);
    for c in 0..k.min(used + 1) {
        let clash = (0..adj.len()).any(|u| adj[v] >> u & 1 == 1 && colors[u] == c);
        if !clash {
            colors[v] = c;
            if colorable(adj, order, depth + 1, k, colors) {
                return true;
            }
            colors[v] = usize::MAX;
        }
    }
    false
}

fn clique_number(adj: &[u32]) -> usize {
    fn grow(adj: &[u32], candidates: u32, size: usize, best: &mut usize) {
        if candidates == 0 {
            *best = (*best).max(size);
            return;
        }
        if size + candidates.count_ones() as usize <= *best {
            return;
        }
        let mut rest = candidates;
        while rest != 0 {
            let v = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            grow(adj, rest & adj[v], size + 1, best);
        }
    }
    let mut best = 0;
    grow(adj, (1u32 << adj.len()) - 1, 0, &mut best);
    best
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtin_parsing() {
        assert_eq!("edge".parse::<Motif>().unwrap(), Motif::edge());
        assert_eq!("triangle".parse::<Motif>().unwrap().edge_count(), 3);
        let s: Motif = "star:3".parse().unwrap();
        assert_eq!((s.vertex_count(), s.edge_count(), s.kind()), (4, 3, MotifKind::Star(3)));
        assert_eq!("cycle:5".parse::<Motif>().unwrap().edge_count(), 5);
        assert_eq!("complete:4".parse::<Motif>().unwrap().edge_count(), 6);
        assert!("bogus".parse::<Motif>().is_err());
        assert!("star:x".parse::<Motif>().is_err());
    }

    #[test]
    fn inline_edge_list() {
        let m: Motif = "0-1, 1-2, 2-0".parse().unwrap();
        assert_eq!(m.vertex_count(), 3);
        assert_eq!(m.kind(), MotifKind::Triangle);
        let path: Motif = "1-0,0-2".parse().unwrap();
        assert_eq!(path.kind(), MotifKind::Star(2));
    }

    #[test]
    fn rejects_bad_edges() {
        assert!(Motif::new(3, &[]).is_err());
        assert!(Motif::new(3, &[(1, 1)]).is_err());
        assert!(Motif::new(3, &[(0, 1), (1, 0)]).is_err());
        assert!(Motif::new(2, &[(0, 2)]).is_err());
        assert!(Motif::new(13, &[(0, 1)]).is_err());
    }

    #[test]
    fn chromatic_numbers() {
        assert_eq!(Motif::triangle().chromatic_number(), 3);
        assert_eq!(Motif::edge().chromatic_number(), 2);
        assert_eq!(Motif::star(5).unwrap().chromatic_number(), 2);
        assert_eq!(Motif::cycle(4).unwrap().chromatic_number(), 2);
        assert_eq!(Motif::cycle(5).unwrap().chromatic_number(), 3);
        assert_eq!(Motif::complete(5).unwrap().chromatic_number(), 5);
        // Petersen graph: chromatic number 3 with clique number 2
        let outer: Vec<_> = (0..5).map(|i| (i, (i + 1) % 5)).collect();
        let spokes: Vec<_> = (0..5).map(|i| (i, i + 5)).collect();
        let inner: Vec<_> = (0..5).map(|i| (5 + i, 5 + (i + 2) % 5)).collect();
        let edges: Vec<_> = outer.into_iter().chain(spokes).chain(inner).collect();
        let petersen = Motif::new(10, &edges).unwrap();
        assert_eq!(chromatic_number(&petersen).unwrap(), 3);
    }

    #[test]
    fn search_order_keeps_components_connected() {
        let m = Motif::new(5, &[(3, 4), (0, 1), (1, 2)]).unwrap();
        let order = m.search_order();
        assert_eq!(order.len(), 5);
        let mut seen = [false; 5];
        seen[order[0]] = true;
        for &v in &order[1..] {
            let has_prior = m.neighbors(v).any(|u| seen[u]);
            let isolated_start = m.neighbors(v).all(|u| !seen[u]);
            assert!(has_prior || isolated_start);
            seen[v] = true;
        }
    }
}
