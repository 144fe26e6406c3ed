use std::fmt::Write as _;
use std::io::Write as _;

use anyhow::{bail, Context, Result};
use rand::Rng;
use rayon::prelude::*;

use ergm_core::cut::cut_distance_upper;
use ergm_core::io::{format_graphon, read_graph, read_graphon};
use ergm_core::mcmc::{
    chain_trace, chi_square_ln, default_proposal, enumerate_log_partition, estimate_acceptance_ratio,
    estimate_importance, estimate_importance_self_normalized, estimate_mcmle, mixing_cutoff, spectral_check,
    AlphaKind, ChainConfig, Corner, Sampler, Start,
};
use ergm_core::rng::stream_rng;
use ergm_core::variational::{
    applicability_check, degeneracy_constants, euler_lagrange_solve, extremal_limit, graphon_search,
    maximize_scalar, phase_scan, symmetry_breaking_check, top_statistic, SearchOptions,
};
use ergm_core::{ModelSpec, Motif, StepGraphon};

use crate::options::*;

/// Comment header: version, command line, seed.
fn header(argv: &[String], seed: Option<u64>) -> String {
    let mut out = String::new();
    writeln!(out, "# ergm-lab {}", env!("CARGO_PKG_VERSION")).unwrap();
    writeln!(out, "# command: ergm-lab {}", argv.join(" ")).unwrap();
    match seed {
        Some(s) => writeln!(out, "# seed: {s}").unwrap(),
        None => writeln!(out, "# seed: none (deterministic)").unwrap(),
    }
    out
}

fn emit(cli: &Cli, text: &str) -> Result<()> {
    match &cli.output {
        Some(path) => std::fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            stdout.flush()?;
            Ok(())
        }
    }
}

pub fn run(cli: &Cli, argv: &[String]) -> Result<()> {
    let (seed, body) = match &cli.command {
        Command::Sample(a) => (Some(a.chain.seed), sample(a)?),
        Command::Psi(a) => (None, psi(a)?),
        Command::PhaseDiagram(a) => (None, phase_diagram(a)?),
        Command::Degeneracy(a) => (None, degeneracy(a)?),
        Command::EstimateZ(a) => (Some(a.chain.seed), estimate(a)?),
        Command::SpectralCheck(a) => (None, spectral(a)?),
        Command::EulerLagrange(a) => (a.init.is_none().then_some(a.seed), euler_lagrange(a)?),
        Command::Extremal(a) => (a.search_beta.map(|_| a.seed), extremal(a)?),
        Command::TopContour(a) => (None, top_contour(a)?),
    };
    emit(cli, &(header(argv, seed) + &body))
}

fn sampler(arg: SamplerArg) -> Sampler {
    match arg {
        SamplerArg::Glauber => Sampler::Glauber,
        SamplerArg::Metropolis => Sampler::Metropolis,
    }
}

fn chain_config(a: &ChainArgs) -> Result<ChainConfig> {
    let mut config = ChainConfig::new(a.n, a.steps, a.seed);
    config.start = match (&a.start_graph, a.start) {
        (Some(path), _) => {
            Start::Graph(read_graph(path).with_context(|| format!("reading graph {}", path.display()))?)
        }
        (None, StartArg::Empty) => Start::Empty,
        (None, StartArg::Complete) => Start::Complete,
    };
    Ok(config)
}

fn sample(a: &SampleArgs) -> Result<String> {
    let model = a.model.resolve()?;
    let config = chain_config(&a.chain)?;
    let rows = chain_trace(&model, sampler(a.chain.sampler), &config, a.record_every)?;
    let mut out = String::from("step,edges,triangles,statistic\n");
    for r in rows {
        writeln!(out, "{},{},{},{}", r.step, r.edges, r.triangles, r.statistic).unwrap();
    }
    Ok(out)
}

fn psi(a: &PsiArgs) -> Result<String> {
    let model = a.model.resolve()?;
    let r = maximize_scalar(&model);
    let mut out = String::new();
    let terms: Vec<String> = model.terms().iter().map(|(m, b)| format!("{m} {b}")).collect();
    writeln!(out, "model = {}", terms.join("; ")).unwrap();
    writeln!(out, "u_star = {}", r.u_star()).unwrap();
    writeln!(out, "psi = {}", r.psi).unwrap();
    writeln!(out, "multiplicity = {}", r.multiplicity()).unwrap();
    let maxima: Vec<String> = r.maximizers.iter().map(|u| u.to_string()).collect();
    writeln!(out, "maximizers = {}", maxima.join(",")).unwrap();
    let residual = r.stationarity_residuals.iter().copied().fold(0.0, f64::max);
    writeln!(out, "stationarity_residual = {residual:e}").unwrap();
    writeln!(out, "applicability = {}", applicability_check(&model).as_str()).unwrap();
    if let Some(n) = a.n {
        let log_z = enumerate_log_partition(&model, n)?;
        writeln!(out, "n = {n}").unwrap();
        writeln!(out, "psi_n = {}", log_z / (n * n) as f64).unwrap();
    }
    Ok(out)
}

fn phase_diagram(a: &PhaseArgs) -> Result<String> {
    if a.beta2.is_single() {
        bail!("--beta2 must be a range lo:hi:steps");
    }
    let surface = !a.beta1.is_single();
    let mut out = String::from(if surface { "beta1,beta2,u_star,psi,multiplicity\n" } else { "beta2,u_star,psi,multiplicity\n" });
    let mut jumps = 0;
    for b1 in a.beta1.values() {
        let scan = phase_scan(b1, a.beta2.lo, a.beta2.hi, a.beta2.steps)?;
        // grid rows plus one row at each located transition, in beta2 order
        let mut rows: Vec<(f64, f64, f64, usize)> =
            scan.points.iter().map(|p| (p.beta, p.u_star, p.psi, p.multiplicity)).collect();
        for t in &scan.transitions {
            let r = maximize_scalar(&ModelSpec::edge_triangle(b1, t.beta));
            rows.push((t.beta, r.u_star(), r.psi, r.multiplicity()));
            jumps += 1;
        }
        rows.sort_by(|x, y| x.0.total_cmp(&y.0));
        for (b2, u, psi, mult) in rows {
            if surface {
                writeln!(out, "{b1},{b2},{u},{psi},{mult}").unwrap();
            } else {
                writeln!(out, "{b2},{u},{psi},{mult}").unwrap();
            }
        }
    }
    log::info!("{jumps} transitions located");
    Ok(out)
}

fn degeneracy(a: &DegeneracyArgs) -> Result<String> {
    let r = degeneracy_constants(a.beta1)?;
    let mut out = String::new();
    writeln!(out, "beta1 = {}", r.beta1).unwrap();
    writeln!(out, "c1 = {}", r.c1).unwrap();
    writeln!(out, "c2 = {}", r.c2).unwrap();
    match r.q_estimate {
        Some(q) => writeln!(out, "q = {q}").unwrap(),
        None => writeln!(out, "q = none").unwrap(),
    }
    writeln!(out, "tolerance = {}", r.tolerance).unwrap();
    if let Some(b2) = a.beta2 {
        writeln!(out, "beta2 = {b2}").unwrap();
        writeln!(out, "u_star = {}", maximize_scalar(&ModelSpec::edge_triangle(a.beta1, b2)).u_star()).unwrap();
        writeln!(out, "regime = {}", r.regime_at(b2).as_str()).unwrap();
    }
    Ok(out)
}

fn estimate(a: &EstimateArgs) -> Result<String> {
    let model = a.model.resolve()?;
    let reference = a.reference.resolve()?;
    let n = a.chain.n;
    let result = match a.method {
        Method::Importance | Method::ImportanceSelfNormalized => {
            if reference.is_some() {
                bail!("importance sampling estimates z itself; drop the reference model");
            }
            let p = a.proposal.unwrap_or_else(|| default_proposal(&model));
            if a.method == Method::Importance {
                estimate_importance(&model, n, p, a.samples, a.chain.seed)?
            } else {
                estimate_importance_self_normalized(&model, n, p, a.samples, a.chain.seed)?
            }
        }
        Method::Mcmle | Method::AcceptanceRatio => {
            let Some(model0) = reference else {
                bail!("ratio estimators need a reference model: --ref-model FILE or --ref-beta1/--ref-beta2");
            };
            let config = chain_config(&a.chain)?;
            let s = sampler(a.chain.sampler);
            if a.method == Method::Mcmle {
                estimate_mcmle(&model, &model0, a.samples, s, &config)?
            } else {
                let alpha = match a.alpha {
                    AlphaArg::Constant => AlphaKind::Constant,
                    AlphaArg::GeometricMean => AlphaKind::GeometricMean,
                };
                estimate_acceptance_ratio(&model, &model0, alpha, a.samples, a.samples, s, &config)?
            }
        }
    };
    let mut out = result.to_key_value();
    writeln!(out, "n = {n}").unwrap();
    if n <= 6 {
        let exact = match (a.method, a.reference.resolve()?) {
            (Method::Mcmle | Method::AcceptanceRatio, Some(m0)) => {
                enumerate_log_partition(&model, n)? - enumerate_log_partition(&m0, n)?
            }
            _ => enumerate_log_partition(&model, n)?,
        };
        writeln!(out, "log_exact = {exact:.12e}").unwrap();
    }
    Ok(out)
}

fn spectral(a: &SpectralArgs) -> Result<String> {
    let mut out = String::from(
        "beta,eigenvalue_residual,eigenvector_residual,orthonormality_residual,detailed_balance_residual,chi_square_residual",
    );
    if a.n.is_some() {
        out.push_str(",cutoff,ln_chi_square_empty,ln_chi_square_complete");
    }
    out.push('\n');
    for &beta in &a.beta {
        let r = spectral_check(beta)?;
        write!(
            out,
            "{beta},{:e},{:e},{:e},{:e},{:e}",
            r.eigenvalue_residual,
            r.eigenvector_residual,
            r.orthonormality_residual,
            r.detailed_balance_residual,
            r.chi_square_residual
        )
        .unwrap();
        if let Some(n) = a.n {
            let ell = mixing_cutoff(n, beta, a.c);
            let empty = chi_square_ln(Corner::Empty, beta, n, ell)?;
            let complete = chi_square_ln(Corner::Complete, beta, n, ell)?;
            write!(out, ",{ell},{empty},{complete}").unwrap();
        }
        out.push('\n');
    }
    Ok(out)
}

fn euler_lagrange(a: &EulerLagrangeArgs) -> Result<String> {
    let model = a.model.resolve()?;
    let init = match &a.init {
        Some(path) => read_graphon(path).with_context(|| format!("reading graphon {}", path.display()))?,
        None => {
            if a.blocks == 0 {
                bail!("--blocks must be at least 1");
            }
            let k = a.blocks;
            let mut rng = stream_rng(a.seed, 0);
            let mut v = vec![0.0; k * k];
            for i in 0..k {
                for j in i..k {
                    let x = rng.gen_range(0.0..1.0);
                    v[i * k + j] = x;
                    v[j * k + i] = x;
                }
            }
            StepGraphon::equal_blocks(k, v)?
        }
    };
    let s = euler_lagrange_solve(&model, &init, a.damping, a.max_iter)?;
    let u = maximize_scalar(&model).u_star();
    let mut out = String::new();
    writeln!(out, "iterations = {}", s.iterations).unwrap();
    writeln!(out, "residual = {:e}", s.residual).unwrap();
    writeln!(out, "applicability = {}", applicability_check(&model).as_str()).unwrap();
    writeln!(out, "u_star = {u}").unwrap();
    writeln!(out, "max_distance_to_u_star = {:e}", s.graphon.values().iter().map(|v| (v - u).abs()).fold(0.0, f64::max)).unwrap();
    out.push_str("# graphon\n");
    out.push_str(&format_graphon(&s.graphon));
    Ok(out)
}

fn extremal(a: &ExtremalArgs) -> Result<String> {
    let motif: Motif = a.motif.parse()?;
    let e = extremal_limit(&motif, a.beta1);
    let mut out = String::new();
    writeln!(out, "motif = {motif}").unwrap();
    writeln!(out, "chromatic_number = {}", e.chromatic_number).unwrap();
    writeln!(out, "p = {}", e.p).unwrap();
    writeln!(out, "psi_limit = {}", e.psi_limit).unwrap();
    if let Some(beta) = a.search_beta {
        let model = ModelSpec::new(vec![(Motif::edge(), a.beta1), (motif.clone(), beta)])?;
        let options = SearchOptions { seed: a.seed, ..SearchOptions::default() };
        let found = graphon_search(&model, &options)?;
        let dist = cut_distance_upper(&found.graphon, &e.graphon)?;
        let sym = symmetry_breaking_check(&model)?;
        writeln!(out, "search_beta = {beta}").unwrap();
        writeln!(out, "search_objective = {}", found.objective).unwrap();
        writeln!(out, "cut_distance_to_limit = {:e}", dist.value).unwrap();
        writeln!(out, "best_constant = {}", sym.best_constant).unwrap();
        writeln!(out, "bipartite_test_value = {}", sym.test_value).unwrap();
        writeln!(out, "symmetry_breaks = {}", sym.breaks).unwrap();
    }
    out.push_str("# limit graphon\n");
    out.push_str(&format_graphon(&e.graphon));
    Ok(out)
}

fn top_contour(a: &TopContourArgs) -> Result<String> {
    let g = read_graph(&a.graph).with_context(|| format!("reading graph {}", a.graph.display()))?;
    let grid: Vec<(f64, f64)> = a
        .beta1
        .values()
        .into_iter()
        .flat_map(|b1| a.beta2.values().into_iter().map(move |b2| (b1, b2)))
        .collect();
    let values: Vec<f64> = grid.par_iter().map(|&(b1, b2)| top_statistic(b1, b2, &g)).collect();
    let mut out = String::from("beta1,beta2,top\n");
    for ((b1, b2), v) in grid.iter().zip(values) {
        writeln!(out, "{b1},{b2},{v}").unwrap();
    }
    Ok(out)
}
