use proptest::prelude::*;

use ergm_core::graph::count_homomorphisms;
use ergm_core::graphon::{delta_h, hom_density_graphon};
use ergm_core::mcmc::spectral::{chi_square_ln, gibbs_law, glauber_matrix, metropolis_matrix, stationary_vector};
use ergm_core::mcmc::{mixing_cutoff, Corner};
use ergm_core::{Graph, ModelSpec, Motif, StepGraphon};

fn motifs() -> Vec<Motif> {
    vec![
        Motif::edge(),
        Motif::star(2).unwrap(),
        Motif::triangle(),
        Motif::star(3).unwrap(),
        Motif::new(4, &[(0, 1), (1, 2), (2, 3)]).unwrap(),
        Motif::cycle(4).unwrap(),
        Motif::new(4, &[(0, 1), (1, 2), (0, 2), (2, 3)]).unwrap(),
        Motif::complete(4).unwrap(),
    ]
}

fn graphon_strategy(lo: f64, hi: f64) -> impl Strategy<Value = StepGraphon> {
    (1usize..=4).prop_flat_map(move |k| {
        (
            prop::collection::vec(0.05f64..1.0, k),
            prop::collection::vec(lo..hi, k * (k + 1) / 2),
        )
            .prop_map(move |(raw, upper)| {
                let total: f64 = raw.iter().sum();
                let mut weights: Vec<f64> = raw.iter().map(|w| w / total).collect();
                weights[0] += 1.0 - weights.iter().sum::<f64>();
                let mut values = vec![0.0; k * k];
                let mut it = upper.into_iter();
                for a in 0..k {
                    for b in a..k {
                        let x = it.next().unwrap();
                        values[a * k + b] = x;
                        values[b * k + a] = x;
                    }
                }
                StepGraphon::new(weights, values).unwrap()
            })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn holder_bound(h in graphon_strategy(0.0, 1.0), idx in 0usize..8) {
        let motif = &motifs()[idx];
        let e = motif.edge_count() as i32;
        let t = hom_density_graphon(motif, &h).unwrap();
        let k = h.k();
        let mut bound = 0.0;
        for a in 0..k {
            for b in 0..k {
                bound += h.weights()[a] * h.weights()[b] * h.value(a, b).powi(e);
            }
        }
        prop_assert!(t <= bound + 1e-12);
    }

    #[test]
    fn delta_is_the_directional_derivative(
        h in graphon_strategy(0.1, 0.9),
        idx in 0usize..8,
        seed in prop::collection::vec(-1.0f64..1.0, 10),
    ) {
        let motif = &motifs()[idx];
        let k = h.k();
        let mut g = vec![0.0; k * k];
        let mut it = seed.into_iter();
        for a in 0..k {
            for b in a..k {
                let x = it.next().unwrap();
                g[a * k + b] = x;
                g[b * k + a] = x;
            }
        }
        let eps = 1e-6;
        let shifted = |s: f64| {
            let values = h.values().iter().zip(&g).map(|(v, d)| v + s * d).collect();
            StepGraphon::new(h.weights().to_vec(), values).unwrap()
        };
        let fd = (hom_density_graphon(motif, &shifted(eps)).unwrap()
            - hom_density_graphon(motif, &shifted(-eps)).unwrap()) / (2.0 * eps);
        let delta = delta_h(motif, &h).unwrap();
        let mut analytic = 0.0;
        for a in 0..k {
            for b in 0..k {
                analytic += h.weights()[a] * h.weights()[b] * g[a * k + b] * delta.get(a, b);
            }
        }
        prop_assert!((fd - analytic).abs() <= 1e-4 * analytic.abs().max(1e-3), "{fd} vs {analytic}");
    }

    #[test]
    fn graph_densities_match_graphon_of_graph(code in 0u64..(1 << 15), idx in 0usize..8) {
        let g = Graph::from_edge_code(6, code).unwrap();
        let motif = &motifs()[idx];
        let homs = count_homomorphisms(motif, &g).unwrap() as f64;
        let t = hom_density_graphon(motif, &g.to_step_graphon()).unwrap();
        prop_assert!((homs / 6f64.powi(motif.vertex_count() as i32) - t).abs() < 1e-12);
    }

    #[test]
    fn cutoff_lower_bound(n in 3usize..80, beta in 0.0f64..1.0, c in -3.0f64..6.0) {
        let m = (n * (n - 1) / 2) as f64;
        let ell = mixing_cutoff(n, beta, c).max(0.0);
        let bound = beta + m.ln() + 2.0 * ell * (1.0 - (1.0 + (-beta).exp()) / m).abs().ln();
        prop_assert!(chi_square_ln(Corner::Empty, beta, n, ell).unwrap() >= bound - 1e-9);
    }
}

#[test]
fn metropolis_detailed_balance_all_pairs() {
    for beta in [0.0, 0.4, 1.3] {
        let k = metropolis_matrix(3, beta).unwrap();
        let z = (1.0 + f64::exp(beta)).powi(3);
        let p: Vec<f64> = (0..8u32).map(|x| (beta * x.count_ones() as f64).exp() / z).collect();
        for x in 0..8 {
            for y in 0..8 {
                assert!((p[x] * k[(x, y)] - p[y] * k[(y, x)]).abs() < 1e-15);
            }
        }
    }
}

#[test]
fn uniform_law_at_zero_beta() {
    let k = metropolis_matrix(3, 0.0).unwrap();
    let pi = stationary_vector(&k).unwrap();
    for v in pi {
        assert!((v - 0.125).abs() < 1e-14);
    }
}

#[test]
fn glauber_stationary_law_is_the_gibbs_law() {
    let model = ModelSpec::edge_triangle(-0.45, 0.2);
    let k = glauber_matrix(3, &model).unwrap();
    let pi = stationary_vector(&k).unwrap();
    // exp(n² T) with n² T = 2β₁E + 6β₂Δ/n
    let weights: Vec<f64> = (0..8u64)
        .map(|x| {
            let e = x.count_ones() as f64;
            let tri = if x == 7 { 1.0 } else { 0.0 };
            (2.0 * -0.45 * e + 6.0 * 0.2 * tri / 3.0).exp()
        })
        .collect();
    let z: f64 = weights.iter().sum();
    let tv: f64 = pi.iter().zip(&weights).map(|(a, w)| (a - w / z).abs()).sum::<f64>() / 2.0;
    assert!(tv < 1e-12);
    let law = gibbs_law(3, &model).unwrap();
    assert!(law.iter().zip(&weights).all(|(a, w)| (a - w / z).abs() < 1e-14));
}
