//! Plain-text formats for graphs, step graphons and models. Blank lines and
//! anything after `#` are ignored.

use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::graphon::StepGraphon;
use crate::model::ModelSpec;

/// Largest asymmetry `|h(a,b) − h(b,a)|` the graphon reader tolerates.
pub const SYMMETRY_TOLERANCE: f64 = 1e-9;

/// Non-empty content lines with their 1-based line numbers.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty())
}

fn parse_number<T: std::str::FromStr>(token: &str, line: usize) -> Result<T> {
    token
        .parse()
        .map_err(|_| Error::Parse { line, msg: format!("invalid number `{token}`") })
}

/// First line `n`, then one `i j` pair per line (0-based).
pub fn parse_graph(text: &str) -> Result<Graph> {
    let mut lines = content_lines(text);
    let (line, first) = lines.next().ok_or(Error::Parse { line: 0, msg: "empty graph file".into() })?;
    let n: usize = parse_number(first, line)?;
    let mut edges = Vec::new();
    for (line, l) in lines {
        let mut parts = l.split_whitespace();
        let (Some(a), Some(b), None) = (parts.next(), parts.next(), parts.next()) else {
            return Err(Error::Parse { line, msg: format!("expected `i j`, got `{l}`") });
        };
        let (i, j): (usize, usize) = (parse_number(a, line)?, parse_number(b, line)?);
        if i >= n || j >= n || i == j {
            return Err(Error::Parse { line, msg: format!("edge ({i}, {j}) is invalid for {n} vertices") });
        }
        edges.push((i, j));
    }
    Graph::from_edges(n, &edges)
}

pub fn format_graph(g: &Graph) -> String {
    let mut out = format!("{}\n", g.n());
    for (i, j) in g.edges() {
        writeln!(out, "{i} {j}").unwrap();
    }
    out
}

/// Line 1 `k`, line 2 the `k` weights, then `k` rows of `k` values. The upper
/// triangle is authoritative.
pub fn parse_graphon(text: &str) -> Result<StepGraphon> {
    let mut lines = content_lines(text);
    let (line, first) = lines.next().ok_or(Error::Parse { line: 0, msg: "empty graphon file".into() })?;
    let k: usize = parse_number(first, line)?;
    if k == 0 {
        return Err(Error::Parse { line, msg: "at least one block is required".into() });
    }
    let mut row = |what: &str| -> Result<(usize, Vec<f64>)> {
        let (line, l) = lines
            .next()
            .ok_or_else(|| Error::Parse { line: 0, msg: format!("missing {what}") })?;
        let values: Vec<f64> = l.split_whitespace().map(|t| parse_number(t, line)).collect::<Result<_>>()?;
        if values.len() != k {
            return Err(Error::Parse { line, msg: format!("expected {k} numbers in {what}, got {}", values.len()) });
        }
        Ok((line, values))
    };
    let (_, weights) = row("the weight line")?;
    let mut values = Vec::with_capacity(k * k);
    for a in 0..k {
        let (_, r) = row(&format!("row {a}"))?;
        values.extend(r);
    }
    if lines.next().is_some() {
        return Err(Error::Parse { line: 0, msg: format!("trailing content after {k} rows") });
    }
    for a in 0..k {
        for b in (a + 1)..k {
            let gap = (values[a * k + b] - values[b * k + a]).abs();
            if gap > SYMMETRY_TOLERANCE {
                return Err(Error::InvalidGraphon(format!("asymmetry {gap:.3e} at ({a}, {b})")));
            }
            values[b * k + a] = values[a * k + b];
        }
    }
    StepGraphon::new(weights, values)
}

pub fn format_graphon(h: &StepGraphon) -> String {
    let k = h.k();
    let join = |xs: &[f64]| xs.iter().map(|x| format!("{x}")).collect::<Vec<_>>().join(" ");
    let mut out = format!("{k}\n{}\n", join(h.weights()));
    for a in 0..k {
        writeln!(out, "{}", join(&h.values()[a * k..(a + 1) * k])).unwrap();
    }
    out
}

pub fn parse_model(text: &str) -> Result<ModelSpec> {
    text.parse()
}

pub fn read_graph(path: &Path) -> Result<Graph> {
    parse_graph(&std::fs::read_to_string(path)?)
}

pub fn read_graphon(path: &Path) -> Result<StepGraphon> {
    parse_graphon(&std::fs::read_to_string(path)?)
}

pub fn read_model(path: &Path) -> Result<ModelSpec> {
    parse_model(&std::fs::read_to_string(path)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn graph_round_trip() {
        let g = Graph::from_edges(5, &[(0, 1), (1, 4), (2, 3)]).unwrap();
        let text = format_graph(&g);
        assert_eq!(parse_graph(&text).unwrap(), g);
        let parsed = parse_graph("# comment\n3\n0 1 # first\n\n2 1\n").unwrap();
        assert_eq!(parsed.edge_count(), 2);
        assert!(parsed.has_edge(1, 2));
    }

    #[test]
    fn graph_errors_carry_lines() {
        match parse_graph("3\n0 1\n0 3\n") {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 3),
            other => panic!("{other:?}"),
        }
        assert!(parse_graph("3\n1 1\n").is_err());
        assert!(parse_graph("x\n").is_err());
        assert!(parse_graph("").is_err());
    }

    #[test]
    fn graphon_round_trip_and_symmetrization() {
        let h = StepGraphon::new(vec![0.25, 0.75], vec![0.1, 0.6, 0.6, 0.3]).unwrap();
        assert_eq!(parse_graphon(&format_graphon(&h)).unwrap(), h);
        let nearly = "2\n0.5 0.5\n0 0.5\n0.5000000000001 0\n";
        assert_eq!(parse_graphon(nearly).unwrap().value(1, 0), 0.5);
        assert!(matches!(parse_graphon("2\n0.5 0.5\n0 0.5\n0.6 0\n"), Err(Error::InvalidGraphon(_))));
        assert!(parse_graphon("2\n0.5 0.5\n0 0.5\n").is_err());
        assert!(parse_graphon("2\n0.5 0.6\n0 0.5\n0.5 0\n").is_err());
    }

    #[test]
    fn model_text() {
        let m = parse_model("edge -0.45\n# comment\ntriangle 0.2\nstar:2 -3.0\n").unwrap();
        assert_eq!(m.betas(), vec![-0.45, 0.2, -3.0]);
        assert!(matches!(parse_model("edge\n"), Err(Error::Parse { line: 1, .. })));
    }
}
