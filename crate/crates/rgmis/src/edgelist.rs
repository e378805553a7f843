//! Plain-text edge lists.
//!
//! The first non-comment line holds the vertex count `n`; every further
//! non-empty line is `u v` with `0 <= u, v < n`. Lines starting with `#`
//! are comments. Written files list each edge once with `u < v`, sorted.

use std::fmt::Write as _;
use std::path::Path;

use rgmis_core::{build_graph, Graph, Vertex};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("missing vertex count line")]
    MissingHeader,
    #[error("line {line}: malformed {what}: {content:?}")]
    Malformed { line: usize, what: &'static str, content: String },
    #[error("line {line}: vertex id out of range in ({u}, {v}) for n = {n}")]
    OutOfRange { line: usize, u: usize, v: usize, n: usize },
    #[error("line {line}: self-loop on vertex {v}")]
    SelfLoop { line: usize, v: usize },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// A parsed edge list and the lines that repeated an earlier edge.
#[derive(Debug, Clone)]
pub struct LoadedGraph {
    pub graph: Graph,
    /// `(line number, u, v)` of each duplicate.
    pub duplicates: Vec<(usize, Vertex, Vertex)>,
}

pub fn load_edge_list(text: &str) -> Result<LoadedGraph, FormatError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));

    let (header_line, header) = lines.next().ok_or(FormatError::MissingHeader)?;
    let n: usize = header.parse().map_err(|_| FormatError::Malformed {
        line: header_line,
        what: "vertex count",
        content: header.to_string(),
    })?;

    let mut edges = Vec::new();
    let mut seen = std::collections::HashSet::new();
    let mut duplicates = Vec::new();
    for (line, content) in lines {
        let mut fields = content.split_whitespace();
        let parse = |f: Option<&str>| f.and_then(|s| s.parse::<usize>().ok());
        let (u, v) = match (parse(fields.next()), parse(fields.next()), fields.next()) {
            (Some(u), Some(v), None) => (u, v),
            _ => return Err(FormatError::Malformed { line, what: "edge", content: content.to_string() }),
        };
        if u >= n || v >= n {
            return Err(FormatError::OutOfRange { line, u, v, n });
        }
        if u == v {
            return Err(FormatError::SelfLoop { line, v });
        }
        if !seen.insert((u.min(v), u.max(v))) {
            duplicates.push((line, u, v));
        }
        edges.push((u, v));
    }
    let graph = build_graph(n, edges).expect("endpoints validated above").graph;
    Ok(LoadedGraph { graph, duplicates })
}

pub fn save_edge_list(g: &Graph) -> String {
    let mut out = String::new();
    writeln!(out, "{}", g.vertex_count()).unwrap();
    for (u, v) in g.edges() {
        writeln!(out, "{u} {v}").unwrap();
    }
    out
}

pub fn read_edge_list(path: &Path) -> Result<LoadedGraph, FormatError> {
    load_edge_list(&std::fs::read_to_string(path)?)
}

pub fn write_edge_list(path: &Path, g: &Graph) -> Result<(), FormatError> {
    std::fs::write(path, save_edge_list(g))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rgmis_core::{generate_er, generate_named, Family};

    #[test]
    fn parses_path() {
        let loaded = load_edge_list("3\n0 1\n1 2\n").unwrap();
        assert_eq!(loaded.graph, generate_named(Family::Path(3)).unwrap());
        assert!(loaded.duplicates.is_empty());
    }

    #[test]
    fn collapses_duplicates_with_warning() {
        let loaded = load_edge_list("2\n0 1\n0 1\n").unwrap();
        assert_eq!(loaded.graph.edge_count(), 1);
        assert_eq!(loaded.duplicates, vec![(3, 0, 1)]);
        let loaded = load_edge_list("2\n0 1\n1 0\n").unwrap();
        assert_eq!(loaded.duplicates, vec![(3, 1, 0)]);
    }

    #[test]
    fn comments_and_blank_lines() {
        let loaded = load_edge_list("# header\n3\n\n# edge\n2 0\n").unwrap();
        assert!(loaded.graph.has_edge(0, 2));
    }

    #[test]
    fn errors_carry_line_numbers() {
        assert!(matches!(load_edge_list(""), Err(FormatError::MissingHeader)));
        assert!(matches!(load_edge_list("x\n"), Err(FormatError::Malformed { line: 1, .. })));
        assert!(matches!(load_edge_list("3\n0 1\n0\n"), Err(FormatError::Malformed { line: 3, .. })));
        assert!(matches!(load_edge_list("3\n0 1 2\n"), Err(FormatError::Malformed { line: 2, .. })));
        assert!(matches!(load_edge_list("3\n0 3\n"), Err(FormatError::OutOfRange { line: 2, .. })));
        assert!(matches!(load_edge_list("3\n\n1 1\n"), Err(FormatError::SelfLoop { line: 3, v: 1 })));
    }

    #[test]
    fn writes_sorted_edges() {
        let k3 = generate_named(Family::Complete(3)).unwrap();
        assert_eq!(save_edge_list(&k3), "3\n0 1\n0 2\n1 2\n");
        assert_eq!(load_edge_list(&save_edge_list(&k3)).unwrap().graph, k3);
    }

    #[test]
    fn round_trip_random_graphs() {
        for seed in 0..20 {
            let g = generate_er(25, 0.2, seed).unwrap();
            let back = load_edge_list(&save_edge_list(&g)).unwrap();
            assert_eq!(back.graph, g);
            assert!(back.duplicates.is_empty());
        }
    }
}
