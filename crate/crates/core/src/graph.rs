//! Dense labeled simple graphs stored as bit rows.
//!
//! Row `i` holds the neighbourhood of vertex `i` as a packed `u64` bitset, so common
//! neighbourhoods (and hence triangle counts and the candidate sets used while counting
//! homomorphisms) are a word-wise AND plus popcount.

use crate::error::{guard_enumeration, Error, Result};
use crate::graphon::StepGraphon;
use crate::motif::Motif;

/// Largest supported vertex count.
pub const MAX_VERTICES: usize = 4096;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    n: usize,
    words: usize,
    bits: Vec<u64>,
}

impl std::fmt::Debug for Graph {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Graph")
            .field("n", &self.n)
            .field("edges", &self.edges().collect::<Vec<_>>())
            .finish()
    }
}

impl Graph {
    /// Edgeless graph on `n` vertices.
    pub fn empty(n: usize) -> Result<Self> {
        if n == 0 || n > MAX_VERTICES {
            return Err(Error::InvalidGraph(format!(
                "vertex count must be in 1..={MAX_VERTICES}, got {n}"
            )));
        }
        let words = n.div_ceil(64);
        Ok(Graph {
            n,
            words,
            bits: vec![0; n * words],
        })
    }

    pub fn complete(n: usize) -> Result<Self> {
        let mut g = Graph::empty(n)?;
        for i in 0..n {
            for j in (i + 1)..n {
                g.set_edge(i, j, true);
            }
        }
        Ok(g)
    }

    pub fn cycle(n: usize) -> Result<Self> {
        if n < 3 {
            return Err(Error::InvalidGraph(format!("cycle needs at least 3 vertices, got {n}")));
        }
        let mut g = Graph::empty(n)?;
        for i in 0..n {
            g.set_edge(i, (i + 1) % n, true);
        }
        Ok(g)
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut g = Graph::empty(n)?;
        for &(i, j) in edges {
            if i >= n || j >= n {
                return Err(Error::InvalidGraph(format!("edge ({i}, {j}) out of range for n = {n}")));
            }
            if i == j {
                return Err(Error::InvalidGraph(format!("self-loop at vertex {i}")));
            }
            g.set_edge(i, j, true);
        }
        Ok(g)
    }

    /// Graph whose edge indicators are the low `C(n,2)` bits of `code`, in the pair
    /// order `(0,1), (0,2), …, (0,n-1), (1,2), …`.
    pub fn from_edge_code(n: usize, code: u64) -> Result<Self> {
        let mut g = Graph::empty(n)?;
        for (k, (i, j)) in pair_order(n).enumerate() {
            if (code >> k) & 1 == 1 {
                g.set_edge(i, j, true);
            }
        }
        Ok(g)
    }

    /// Inverse of [`Graph::from_edge_code`]; requires `C(n,2) ≤ 64`.
    pub fn edge_code(&self) -> u64 {
        debug_assert!(self.pair_count() <= 64);
        let mut code = 0u64;
        for (k, (i, j)) in pair_order(self.n).enumerate() {
            if self.has_edge(i, j) {
                code |= 1 << k;
            }
        }
        code
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    /// `C(n,2)`, the number of vertex pairs.
    pub fn pair_count(&self) -> usize {
        self.n * (self.n - 1) / 2
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[u64] {
        &self.bits[i * self.words..(i + 1) * self.words]
    }

    #[inline]
    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        (self.bits[i * self.words + j / 64] >> (j % 64)) & 1 == 1
    }

    /// Sets or clears the edge `{i, j}`. Panics on `i == j`.
    #[inline]
    pub fn set_edge(&mut self, i: usize, j: usize, present: bool) {
        assert!(i != j, "self-loops are not allowed");
        let (wi, bi) = (i * self.words + j / 64, j % 64);
        let (wj, bj) = (j * self.words + i / 64, i % 64);
        if present {
            self.bits[wi] |= 1 << bi;
            self.bits[wj] |= 1 << bj;
        } else {
            self.bits[wi] &= !(1 << bi);
            self.bits[wj] &= !(1 << bj);
        }
    }

    pub fn degree(&self, i: usize) -> usize {
        self.row(i).iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Number of common neighbours of `i` and `j`.
    #[inline]
    pub fn common_neighbors(&self, i: usize, j: usize) -> usize {
        self.row(i)
            .iter()
            .zip(self.row(j))
            .map(|(a, b)| (a & b).count_ones() as usize)
            .sum()
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        pair_order(self.n).filter(move |&(i, j)| self.has_edge(i, j))
    }

    pub fn edge_count(&self) -> usize {
        self.bits.iter().map(|w| w.count_ones() as usize).sum::<usize>() / 2
    }

    /// Number of triangles (unordered vertex triples that are pairwise adjacent).
    pub fn triangle_count(&self) -> usize {
        let mut twice_thrice = 0usize;
        for (i, j) in self.edges() {
            twice_thrice += self.common_neighbors(i, j);
        }
        twice_thrice / 3
    }

    /// `e(G) / C(n,2)`.
    pub fn edge_density(&self) -> Result<f64> {
        if self.n < 2 {
            return Err(Error::domain("edge density needs at least 2 vertices"));
        }
        Ok(self.edge_count() as f64 / self.pair_count() as f64)
    }

    /// Relabels vertices: vertex `i` of `self` becomes vertex `perm[i]`.
    pub fn permuted(&self, perm: &[usize]) -> Graph {
        assert_eq!(perm.len(), self.n);
        let mut g = Graph::empty(self.n).expect("same size");
        for (i, j) in self.edges() {
            g.set_edge(perm[i], perm[j], true);
        }
        g
    }

    /// The step graphon `f^G`: `n` equal blocks with the adjacency matrix as values.
    pub fn to_step_graphon(&self) -> StepGraphon {
        let n = self.n;
        let mut values = vec![0.0; n * n];
        for (i, j) in self.edges() {
            values[i * n + j] = 1.0;
            values[j * n + i] = 1.0;
        }
        StepGraphon::new(vec![1.0 / n as f64; n], values).expect("adjacency is a valid step graphon")
    }
}

/// Pairs `i < j` in row-major order.
pub fn pair_order(n: usize) -> impl Iterator<Item = (usize, usize)> {
    (0..n).flat_map(move |i| ((i + 1)..n).map(move |j| (i, j)))
}

/// Number of homomorphisms `V(H) → V(G)` (not necessarily injective maps sending
/// every edge of `H` onto an edge of `G`).
pub fn count_homomorphisms(motif: &Motif, g: &Graph) -> Result<u128> {
    guard_enumeration("homomorphism count", g.n(), motif.vertex_count())?;
    Ok(HomCounter::new(motif, g).count())
}

/// `hom(H, G) / |V(G)|^{|V(H)|}`.
pub fn hom_density_graph(motif: &Motif, g: &Graph) -> Result<f64> {
    let count = count_homomorphisms(motif, g)?;
    Ok(count as f64 / (g.n() as f64).powi(motif.vertex_count() as i32))
}

/// Backtracking homomorphism counter. Motif vertices are assigned in a
/// connectivity-first order; each vertex draws its candidates from the AND of the
/// rows of its already-placed neighbours.
struct HomCounter<'a> {
    g: &'a Graph,
    order: Vec<usize>,
    back_edges: Vec<Vec<usize>>,
    assignment: Vec<usize>,
    scratch: Vec<Vec<u64>>,
}

impl<'a> HomCounter<'a> {
    fn new(motif: &Motif, g: &'a Graph) -> Self {
        let order = motif.search_order();
        let mut position = vec![0; motif.vertex_count()];
        for (p, &v) in order.iter().enumerate() {
            position[v] = p;
        }
        let back_edges = order
            .iter()
            .map(|&v| {
                motif
                    .neighbors(v)
                    .filter(|&u| position[u] < position[v])
                    .collect()
            })
            .collect();
        HomCounter {
            g,
            order,
            back_edges,
            assignment: vec![0; motif.vertex_count()],
            scratch: vec![vec![0; g.words]; motif.vertex_count()],
        }
    }

    fn count(&mut self) -> u128 {
        if self.order.is_empty() {
            return 1;
        }
        self.extend(0)
    }

    fn extend(&mut self, depth: usize) -> u128 {
        let n = self.g.n();
        let v = self.order[depth];
        let last = depth + 1 == self.order.len();
        if self.back_edges[depth].is_empty() {
            if last {
                return n as u128;
            }
            let mut total = 0;
            for x in 0..n {
                self.assignment[v] = x;
                total += self.extend(depth + 1);
            }
            return total;
        }
        let mut cand = std::mem::take(&mut self.scratch[depth]);
        cand.copy_from_slice(self.g.row(self.assignment[self.back_edges[depth][0]]));
        for &u in &self.back_edges[depth][1..] {
            for (c, r) in cand.iter_mut().zip(self.g.row(self.assignment[u])) {
                *c &= r;
            }
        }
        let total = if last {
            cand.iter().map(|w| w.count_ones() as u128).sum()
        } else {
            let mut total = 0;
            for (wi, &word) in cand.iter().enumerate() {
                let mut w = word;
                while w != 0 {
                    let b = w.trailing_zeros() as usize;
                    w &= w - 1;
                    self.assignment[v] = wi * 64 + b;
                    total += self.extend(depth + 1);
                }
            }
            total
        };
        self.scratch[depth] = cand;
        total
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Plain enumeration of all maps, no pruning.
    fn brute_hom(motif: &Motif, g: &Graph) -> u128 {
        let k = motif.vertex_count();
        let n = g.n();
        let mut map = vec![0usize; k];
        let mut count = 0;
        loop {
            if motif.edges().iter().all(|&(a, b)| g.has_edge(map[a], map[b])) {
                count += 1;
            }
            let mut pos = 0;
            loop {
                if pos == k {
                    return count;
                }
                map[pos] += 1;
                if map[pos] < n {
                    break;
                }
                map[pos] = 0;
                pos += 1;
            }
        }
    }

    #[test]
    fn two_star_into_triangle() {
        let h = Motif::star(2).unwrap();
        let g = Graph::complete(3).unwrap();
        // centre anywhere, each leaf on one of two neighbours: sum of squared degrees
        assert_eq!(count_homomorphisms(&h, &g).unwrap(), 12);
        assert_eq!(hom_density_graph(&h, &g).unwrap(), 12.0 / 27.0);
    }

    #[test]
    fn edge_into_empty() {
        let g = Graph::empty(7).unwrap();
        assert_eq!(count_homomorphisms(&Motif::edge(), &g).unwrap(), 0);
        assert_eq!(hom_density_graph(&Motif::edge(), &g).unwrap(), 0.0);
    }

    #[test]
    fn triangle_into_k4() {
        let g = Graph::complete(4).unwrap();
        let h = Motif::triangle();
        assert_eq!(brute_hom(&h, &g), 24);
        assert_eq!(count_homomorphisms(&h, &g).unwrap(), 24);
    }

    #[test]
    fn edge_density_of_complete_graph_hom() {
        for n in 2..9 {
            let g = Graph::complete(n).unwrap();
            let t = hom_density_graph(&Motif::edge(), &g).unwrap();
            assert!((t - (n as f64 - 1.0) / n as f64).abs() < 1e-15);
        }
    }

    #[test]
    fn counts_on_small_graphs() {
        let k4 = Graph::complete(4).unwrap();
        assert_eq!((k4.edge_count(), k4.triangle_count()), (6, 4));
        let k5 = Graph::complete(5).unwrap();
        assert_eq!((k5.edge_count(), k5.triangle_count()), (10, 10));
        let e = Graph::empty(6).unwrap();
        assert_eq!((e.edge_count(), e.triangle_count()), (0, 0));
    }

    #[test]
    fn densities() {
        assert_eq!(Graph::complete(6).unwrap().edge_density().unwrap(), 1.0);
        assert_eq!(Graph::empty(6).unwrap().edge_density().unwrap(), 0.0);
        assert_eq!(Graph::cycle(5).unwrap().edge_density().unwrap(), 0.5);
        assert!(Graph::empty(1).unwrap().edge_density().is_err());
    }

    #[test]
    fn step_graphon_of_small_graphs() {
        let g = Graph::from_edges(2, &[(0, 1)]).unwrap();
        let f = g.to_step_graphon();
        assert_eq!(f.values(), &[0.0, 1.0, 1.0, 0.0]);
        let t = Graph::complete(3).unwrap().to_step_graphon();
        for a in 0..3 {
            for b in 0..3 {
                assert_eq!(t.value(a, b), if a == b { 0.0 } else { 1.0 });
            }
        }
    }

    #[test]
    fn size_guard_names_bound() {
        let g = Graph::empty(200).unwrap();
        let h = Motif::complete(5).unwrap();
        let err = count_homomorphisms(&h, &g).unwrap_err();
        assert!(matches!(err, Error::TooLarge { .. }));
        assert!(err.to_string().contains("1.000e9"));
    }

    #[test]
    fn pruned_counter_matches_brute_force_on_wide_graph() {
        // crosses a word boundary
        let mut g = Graph::empty(70).unwrap();
        for i in 0..70 {
            let j = (i * 7 + 3) % 70;
            if j != i {
                g.set_edge(i, j, true);
            }
            g.set_edge(i, (i + 1) % 70, true);
        }
        for h in [Motif::triangle(), Motif::star(2).unwrap(), Motif::cycle(4).unwrap()] {
            assert_eq!(count_homomorphisms(&h, &g).unwrap(), brute_hom(&h, &g));
        }
    }

    #[test]
    fn edge_code_round_trip() {
        for code in 0..64u64 {
            assert_eq!(Graph::from_edge_code(4, code).unwrap().edge_code(), code);
        }
    }
}
