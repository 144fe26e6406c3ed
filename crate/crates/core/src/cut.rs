//! Cut norm and cut distance between step graphons.
//!
//! On a common block partition the kernel difference `D = f − g` is constant on
//! cells, and `∫_{S×T} D` is the bilinear form `Σ s_a t_b w_a w_b D_ab` in the
//! fractions `s_a, t_b ∈ [0,1]` of each block covered by `S` and `T`. A bilinear
//! form on a box is extremal at vertices, so the supremum is a search over 0/1
//! vectors. For a fixed `s` the best `t` keeps exactly the blocks whose row sum has
//! the favourable sign, which leaves `2^k` candidates.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graphon::StepGraphon;

/// Largest refined block count searched exhaustively.
pub const EXACT_CUT_BLOCKS: usize = 24;
/// Largest block count for an exhaustive search over block permutations.
pub const EXACT_PERMUTATION_BLOCKS: usize = 8;
pub const REFINEMENT_TOLERANCE: f64 = 1e-9;
const HEURISTIC_RESTARTS: usize = 32;
const HEURISTIC_SEED: u64 = 0x00c0_ffee;

#[derive(Clone, Debug, PartialEq)]
pub struct CutNormResult {
    pub value: f64,
    /// Weights of the common refinement the witnesses refer to.
    pub weights: Vec<f64>,
    /// Blocks making up `S` and `T`.
    pub witness_s: Vec<usize>,
    pub witness_t: Vec<usize>,
    /// `false` when the value is a heuristic lower bound.
    pub exact: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CutDistanceResult {
    pub value: f64,
    /// Block `a` of `f` is matched with block `permutation[a]` of `g`, both at
    /// the common equal-block resolution.
    pub permutation: Vec<usize>,
    /// `false` when the permutation search or the cut norm was heuristic.
    pub exact: bool,
}

/// Re-expresses `f` and `g` on the partition generated by both sets of block
/// boundaries. Boundaries closer than `1e-9` are merged.
pub fn common_refinement(f: &StepGraphon, g: &StepGraphon) -> Result<(StepGraphon, StepGraphon)> {
    let cuts_f = boundaries(f.weights());
    let cuts_g = boundaries(g.weights());
    let mut all: Vec<f64> = cuts_f.iter().chain(&cuts_g).copied().collect();
    all.sort_by(f64::total_cmp);
    let mut merged: Vec<f64> = vec![0.0];
    for x in all {
        if x - merged.last().unwrap() > REFINEMENT_TOLERANCE {
            merged.push(x);
        }
    }
    // the final boundary is exactly 1
    *merged.last_mut().unwrap() = 1.0;
    if merged.len() < 2 {
        return Err(Error::Mismatch("refinement has no blocks of positive measure".into()));
    }
    let weights: Vec<f64> = merged.windows(2).map(|w| w[1] - w[0]).collect();
    let mids: Vec<f64> = merged.windows(2).map(|w| 0.5 * (w[0] + w[1])).collect();
    let map_f: Vec<usize> = mids.iter().map(|&x| locate(&cuts_f, x)).collect();
    let map_g: Vec<usize> = mids.iter().map(|&x| locate(&cuts_g, x)).collect();
    Ok((restrict(f, &weights, &map_f)?, restrict(g, &weights, &map_g)?))
}

/// Interior and final cumulative boundaries of the blocks with positive weight.
fn boundaries(weights: &[f64]) -> Vec<f64> {
    let mut acc = 0.0;
    weights
        .iter()
        .map(|w| {
            acc += w;
            acc
        })
        .collect()
}

/// Index of the block whose interval contains `x`.
fn locate(cuts: &[f64], x: f64) -> usize {
    cuts.iter().position(|&c| x < c).unwrap_or(cuts.len() - 1)
}

fn restrict(h: &StepGraphon, weights: &[f64], map: &[usize]) -> Result<StepGraphon> {
    let k = weights.len();
    let mut values = vec![0.0; k * k];
    for a in 0..k {
        for b in 0..k {
            values[a * k + b] = h.value(map[a], map[b]);
        }
    }
    let total: f64 = weights.iter().sum();
    let weights = weights.iter().map(|w| w / total).collect();
    StepGraphon::new(weights, values)
}

/// `‖f − g‖_□ = sup_{S,T} |∫_{S×T} (f − g)|`.
pub fn cut_norm_diff(f: &StepGraphon, g: &StepGraphon) -> Result<CutNormResult> {
    let (f, g) = common_refinement(f, g)?;
    let k = f.k();
    let w = f.weights().to_vec();
    let d: Vec<f64> = f.values().iter().zip(g.values()).map(|(a, b)| a - b).collect();
    let (value, s, t, exact) = if k <= EXACT_CUT_BLOCKS {
        let (v, s, t) = exact_cut(&d, &w);
        (v, s, t, true)
    } else {
        let (v, s, t) = alternating_cut(&d, &w, HEURISTIC_SEED);
        (v, s, t, false)
    };
    let indices = |mask: &[bool]| mask.iter().enumerate().filter(|p| *p.1).map(|p| p.0).collect();
    Ok(CutNormResult {
        value,
        witness_s: indices(&s),
        witness_t: indices(&t),
        weights: w,
        exact,
    })
}

/// Best `t` for row sums `r`: the positive or the negative blocks, whichever has
/// the larger absolute total.
fn best_response(r: &[f64], w: &[f64]) -> (f64, bool) {
    let mut pos = 0.0;
    let mut neg = 0.0;
    for (x, wb) in r.iter().zip(w) {
        if *x > 0.0 {
            pos += wb * x;
        } else {
            neg -= wb * x;
        }
    }
    if pos >= neg {
        (pos, true)
    } else {
        (neg, false)
    }
}

fn response_mask(r: &[f64], positive: bool) -> Vec<bool> {
    r.iter().map(|&x| if positive { x > 0.0 } else { x < 0.0 }).collect()
}

/// Walks all `2^k` row selections in Gray-code order, updating the weighted row
/// sums `r_b = Σ_a s_a w_a D_ab` one block at a time.
fn exact_cut(d: &[f64], w: &[f64]) -> (f64, Vec<bool>, Vec<bool>) {
    let k = w.len();
    let mut r = vec![0.0; k];
    let mut s = vec![false; k];
    let mut best = (0.0, 0u64, true);
    let mut code = 0u64;
    for step in 1..(1u64 << k) {
        let a = step.trailing_zeros() as usize;
        let sign = if s[a] { -1.0 } else { 1.0 };
        s[a] = !s[a];
        code ^= 1 << a;
        for b in 0..k {
            r[b] += sign * w[a] * d[a * k + b];
        }
        let (v, positive) = best_response(&r, w);
        if v > best.0 {
            best = (v, code, positive);
        }
    }
    let s: Vec<bool> = (0..k).map(|a| best.1 >> a & 1 == 1).collect();
    let r = row_sums(d, w, &s);
    let t = response_mask(&r, best.2);
    (best.0, s, t)
}

fn row_sums(d: &[f64], w: &[f64], s: &[bool]) -> Vec<f64> {
    let k = w.len();
    (0..k)
        .map(|b| (0..k).filter(|&a| s[a]).map(|a| w[a] * d[a * k + b]).sum())
        .collect()
}

/// Alternating best responses from random starting rows. Returns a lower bound.
fn alternating_cut(d: &[f64], w: &[f64], seed: u64) -> (f64, Vec<bool>, Vec<bool>) {
    let k = w.len();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best = (0.0, vec![false; k], vec![false; k]);
    for _ in 0..HEURISTIC_RESTARTS {
        let mut s: Vec<bool> = (0..k).map(|_| rng.gen()).collect();
        let mut current = -1.0;
        loop {
            let r = row_sums(d, w, &s);
            let (v, positive) = best_response(&r, w);
            let t = response_mask(&r, positive);
            // D is symmetric, so the best s for fixed t is the same rule applied to t
            let rt = row_sums(d, w, &t);
            let (v2, positive2) = best_response(&rt, w);
            let value = v.max(v2);
            if value > best.0 {
                best = if v2 >= v {
                    (v2, response_mask(&rt, positive2), t.clone())
                } else {
                    (v, s.clone(), t.clone())
                };
            }
            if value <= current + 1e-15 {
                break;
            }
            current = value;
            s = response_mask(&rt, positive2);
        }
    }
    best
}

/// Upper bound on the cut distance: the minimum of `‖f − g∘σ‖_□` over block
/// permutations `σ` at a common equal-block resolution. Exhaustive for up to 8
/// blocks, simulated annealing beyond.
pub fn cut_distance_upper(f: &StepGraphon, g: &StepGraphon) -> Result<CutDistanceResult> {
    for (name, h) in [("first", f), ("second", g)] {
        if !h.has_equal_weights(REFINEMENT_TOLERANCE) {
            return Err(Error::Mismatch(format!(
                "cut distance needs equal block weights; the {name} graphon has weights {:?}",
                h.weights()
            )));
        }
    }
    let k = lcm(f.k(), g.k());
    if k > EXACT_CUT_BLOCKS {
        return Err(Error::TooLarge {
            what: "common block count for the cut distance".into(),
            size: k as f64,
            bound: EXACT_CUT_BLOCKS as f64,
        });
    }
    let f = f.split_blocks(k / f.k());
    let g = g.split_blocks(k / g.k());
    let eval = |perm: &[usize]| -> Result<f64> { Ok(cut_norm_diff(&f, &g.permuted(perm))?.value) };
    if k <= EXACT_PERMUTATION_BLOCKS {
        let mut perm: Vec<usize> = (0..k).collect();
        let mut best = (eval(&perm)?, perm.clone());
        heap_permutations(&mut perm, &mut |p| {
            let v = eval(p)?;
            if v < best.0 {
                best = (v, p.to_vec());
            }
            Ok(())
        })?;
        Ok(CutDistanceResult { value: best.0, permutation: best.1, exact: true })
    } else {
        let (value, permutation) = anneal_permutation(k, eval)?;
        Ok(CutDistanceResult { value, permutation, exact: false })
    }
}

fn lcm(a: usize, b: usize) -> usize {
    fn gcd(a: usize, b: usize) -> usize {
        if b == 0 {
            a
        } else {
            gcd(b, a % b)
        }
    }
    a / gcd(a, b) * b
}

/// Heap's algorithm: calls `visit` on every permutation reachable from `perm`
/// except the starting one.
fn heap_permutations(perm: &mut [usize], visit: &mut dyn FnMut(&[usize]) -> Result<()>) -> Result<()> {
    let k = perm.len();
    let mut c = vec![0usize; k];
    let mut i = 1;
    while i < k {
        if c[i] < i {
            if i % 2 == 0 {
                perm.swap(0, i);
            } else {
                perm.swap(c[i], i);
            }
            visit(perm)?;
            c[i] += 1;
            i = 1;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
    Ok(())
}

fn anneal_permutation(k: usize, eval: impl Fn(&[usize]) -> Result<f64>) -> Result<(f64, Vec<usize>)> {
    const SWEEPS: usize = 4000;
    let mut rng = ChaCha8Rng::seed_from_u64(HEURISTIC_SEED);
    let mut perm: Vec<usize> = (0..k).collect();
    perm.shuffle(&mut rng);
    let mut current = eval(&perm)?;
    let mut best = (current, perm.clone());
    let t0 = 0.05;
    for step in 0..SWEEPS {
        let temp = t0 * (1.0 - step as f64 / SWEEPS as f64) + 1e-6;
        let a = rng.gen_range(0..k);
        let b = rng.gen_range(0..k);
        if a == b {
            continue;
        }
        perm.swap(a, b);
        let v = eval(&perm)?;
        if v <= current || rng.gen::<f64>() < ((current - v) / temp).exp() {
            current = v;
            if v < best.0 {
                best = (v, perm.clone());
            }
        } else {
            perm.swap(a, b);
        }
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    /// Exhaustive search over all `4^k` pairs of 0/1 vectors.
    fn brute_cut(f: &StepGraphon, g: &StepGraphon) -> f64 {
        let k = f.k();
        let w = f.weights();
        let mut best: f64 = 0.0;
        for s in 0..(1u32 << k) {
            for t in 0..(1u32 << k) {
                let mut sum = 0.0;
                for a in 0..k {
                    for b in 0..k {
                        if s >> a & 1 == 1 && t >> b & 1 == 1 {
                            sum += w[a] * w[b] * (f.value(a, b) - g.value(a, b));
                        }
                    }
                }
                best = best.max(sum.abs());
            }
        }
        best
    }

    fn bipartite() -> StepGraphon {
        StepGraphon::equal_blocks(2, vec![0.0, 1.0, 1.0, 0.0]).unwrap()
    }

    #[test]
    fn identical_graphons() {
        let r = cut_norm_diff(&bipartite(), &bipartite()).unwrap();
        assert_eq!(r.value, 0.0);
        assert!(r.exact);
    }

    #[test]
    fn full_against_empty() {
        let one = StepGraphon::constant(1.0).unwrap();
        let zero = StepGraphon::constant(0.0).unwrap();
        let r = cut_norm_diff(&one, &zero).unwrap();
        assert_eq!(r.value, 1.0);
        assert_eq!(r.witness_s, vec![0]);
        assert_eq!(r.witness_t, vec![0]);
    }

    #[test]
    fn bipartite_against_half() {
        let half = StepGraphon::constant(0.5).unwrap();
        let r = cut_norm_diff(&bipartite(), &half).unwrap();
        // one block against itself: |0 − ½| · ½ · ½
        assert_eq!(r.value, 0.125);
        let (f, g) = common_refinement(&bipartite(), &half).unwrap();
        assert_eq!(brute_cut(&f, &g), 0.125);
        assert_eq!(cut_distance_upper(&bipartite(), &half).unwrap().value, 0.125);
    }

    #[test]
    fn constants() {
        let a = StepGraphon::constant(0.8).unwrap();
        let b = StepGraphon::constant(0.3).unwrap().split_blocks(3);
        assert_relative_eq!(cut_norm_diff(&a, &b).unwrap().value, 0.5, max_relative = 1e-14);
        assert_relative_eq!(cut_distance_upper(&a, &b).unwrap().value, 0.5, max_relative = 1e-14);
    }

    #[test]
    fn refinement_of_unequal_partitions() {
        let f = StepGraphon::new(vec![0.25, 0.75], vec![0.1, 0.2, 0.2, 0.3]).unwrap();
        let g = StepGraphon::new(vec![0.5, 0.5], vec![0.4, 0.0, 0.0, 0.9]).unwrap();
        let (rf, rg) = common_refinement(&f, &g).unwrap();
        assert_eq!(rf.weights(), &[0.25, 0.25, 0.5]);
        assert_eq!(rf.value(1, 2), 0.3);
        assert_eq!(rg.value(0, 1), 0.4);
        assert_eq!(rg.value(1, 2), 0.0);
        // boundaries within 1e-9 merge
        let h = StepGraphon::new(vec![0.25 + 1e-12, 0.75 - 1e-12], vec![0.0; 4]).unwrap();
        assert_eq!(common_refinement(&f, &h).unwrap().0.k(), 2);
    }

    #[test]
    fn permutation_invariance() {
        let f = StepGraphon::equal_blocks(3, vec![0.1, 0.7, 0.4, 0.7, 0.9, 0.2, 0.4, 0.2, 0.6]).unwrap();
        let g = f.permuted(&[2, 0, 1]);
        assert!(cut_norm_diff(&f, &g).unwrap().value > 0.01);
        assert!(cut_distance_upper(&f, &g).unwrap().value < 1e-15);
    }

    #[test]
    fn unequal_weights_rejected_for_distance() {
        let f = StepGraphon::new(vec![0.25, 0.75], vec![0.0; 4]).unwrap();
        assert!(cut_distance_upper(&f, &bipartite()).is_err());
    }

    #[test]
    fn heuristic_mode_on_large_partitions() {
        let k = 30;
        let mut values = vec![0.0; k * k];
        for a in 0..k {
            for b in 0..k {
                values[a * k + b] = if (a < k / 2) == (b < k / 2) { 1.0 } else { 0.0 };
            }
        }
        let f = StepGraphon::equal_blocks(k, values).unwrap();
        let g = StepGraphon::constant(0.5).unwrap();
        let r = cut_norm_diff(&f, &g).unwrap();
        assert!(!r.exact);
        // two diagonal communities: S = T = one community gives ½ · ¼
        assert!(r.value >= 0.125 - 1e-12);
        assert!(r.value <= 0.25);
    }

    #[test]
    fn heap_visits_every_permutation() {
        let mut perm = vec![0, 1, 2, 3];
        let mut seen = std::collections::HashSet::new();
        seen.insert(perm.clone());
        heap_permutations(&mut perm, &mut |p| {
            seen.insert(p.to_vec());
            Ok(())
        })
        .unwrap();
        assert_eq!(seen.len(), 24);
    }

    fn graphon_strategy(k: usize) -> impl Strategy<Value = StepGraphon> {
        (
            prop::collection::vec(0.05f64..1.0, k),
            prop::collection::vec(0.0f64..=1.0, k * k),
        )
            .prop_map(move |(w, v)| {
                let total: f64 = w.iter().sum();
                let w: Vec<f64> = w.iter().map(|x| x / total).collect();
                let mut sym = v.clone();
                for a in 0..k {
                    for b in 0..a {
                        sym[a * k + b] = v[b * k + a];
                    }
                }
                let last = 1.0 - w[..k - 1].iter().sum::<f64>();
                let mut w = w;
                w[k - 1] = last;
                StepGraphon::new(w, sym).unwrap()
            })
    }

    proptest! {
        #[test]
        fn exact_matches_brute_force(f in graphon_strategy(4), g in graphon_strategy(4)) {
            let g = StepGraphon::new(f.weights().to_vec(), g.values().to_vec()).unwrap();
            let fast = cut_norm_diff(&f, &g).unwrap().value;
            prop_assert!((fast - brute_cut(&f, &g)).abs() < 1e-12);
        }

        #[test]
        fn symmetric_and_triangle(f in graphon_strategy(3), g in graphon_strategy(2), h in graphon_strategy(3)) {
            let fg = cut_norm_diff(&f, &g).unwrap().value;
            let gf = cut_norm_diff(&g, &f).unwrap().value;
            let gh = cut_norm_diff(&g, &h).unwrap().value;
            let fh = cut_norm_diff(&f, &h).unwrap().value;
            prop_assert!((fg - gf).abs() < 1e-12);
            prop_assert!(fh <= fg + gh + 1e-9);
            prop_assert!((0.0..=1.0).contains(&fg));
        }
    }
}
