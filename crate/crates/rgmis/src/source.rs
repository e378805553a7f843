//! Graph sources named on the command line: an edge-list file or a
//! generator spec such as `p3`, `k4`, `cycle:5`, `bipartite:2:3`,
//! `star:5` or `er:50:0.1:3` (n, p, seed).

use std::path::{Path, PathBuf};
use std::str::FromStr;

use rgmis_core::{generate_er, generate_named, Family, Graph};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::edgelist::{read_edge_list, FormatError};

#[derive(Debug, Error)]
pub enum SourceError {
    #[error("unknown graph spec {0:?}")]
    Unknown(String),
    #[error("graph spec {spec:?}: {reason}")]
    BadParameters { spec: String, reason: String },
    #[error(transparent)]
    Generate(#[from] rgmis_core::Error),
    #[error("{path}: {source}")]
    File { path: PathBuf, source: FormatError },
}

/// Generator families with their parameters, as accepted by `gen`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GeneratorSpec {
    Named { family: String, sizes: Vec<usize> },
    Er { n: usize, p: f64, seed: u64 },
}

impl GeneratorSpec {
    pub fn from_kind(kind: &str, params: &[String], seed: u64) -> Result<Self, SourceError> {
        let spec = || format!("{kind} {}", params.join(" "));
        let bad = |reason: &str| SourceError::BadParameters { spec: spec(), reason: reason.to_string() };
        let kind = canonical_family(kind).ok_or_else(|| SourceError::Unknown(kind.to_string()))?;
        if kind == "er" {
            let [n, p] = params else { return Err(bad("er takes n and p")) };
            let n = n.parse().map_err(|_| bad("n must be a nonnegative integer"))?;
            let p = p.parse().map_err(|_| bad("p must be a number"))?;
            return Ok(GeneratorSpec::Er { n, p, seed });
        }
        let sizes = params
            .iter()
            .map(|s| s.parse::<usize>())
            .collect::<Result<Vec<_>, _>>()
            .map_err(|_| bad("sizes must be nonnegative integers"))?;
        let expected = if kind == "complete_bipartite" { 2 } else { 1 };
        if sizes.len() != expected {
            return Err(bad(&format!("{kind} takes {expected} size parameter(s)")));
        }
        Ok(GeneratorSpec::Named { family: kind.to_string(), sizes })
    }

    pub fn family(&self) -> Option<Family> {
        match self {
            GeneratorSpec::Named { family, sizes } => Some(match family.as_str() {
                "path" => Family::Path(sizes[0]),
                "cycle" => Family::Cycle(sizes[0]),
                "complete" => Family::Complete(sizes[0]),
                "complete_bipartite" => Family::CompleteBipartite(sizes[0], sizes[1]),
                "star" => Family::Star(sizes[0]),
                _ => return None,
            }),
            GeneratorSpec::Er { .. } => None,
        }
    }

    pub fn generate(&self) -> Result<Graph, SourceError> {
        match self {
            GeneratorSpec::Er { n, p, seed } => Ok(generate_er(*n, *p, *seed)?),
            named => {
                let family = named.family().ok_or_else(|| SourceError::Unknown(format!("{named:?}")))?;
                Ok(generate_named(family)?)
            }
        }
    }

    pub fn labeling(&self) -> &'static str {
        match self.family() {
            Some(f) => f.labeling(),
            None => "er: vertices 0..n, pairs (u, v) with u < v drawn in lexicographic order",
        }
    }
}

fn canonical_family(kind: &str) -> Option<&'static str> {
    Some(match kind {
        "path" | "p" => "path",
        "cycle" | "c" => "cycle",
        "complete" | "k" => "complete",
        "complete_bipartite" | "bipartite" | "kb" => "complete_bipartite",
        "star" | "s" => "star",
        "er" | "gnp" => "er",
        _ => return None,
    })
}

/// Where a graph comes from.
#[derive(Debug, Clone, PartialEq)]
pub enum GraphSource {
    File(PathBuf),
    Generator(GeneratorSpec),
}

impl GraphSource {
    pub fn load(&self) -> Result<Graph, SourceError> {
        match self {
            GraphSource::File(path) => {
                let loaded =
                    read_edge_list(path).map_err(|source| SourceError::File { path: path.clone(), source })?;
                for (line, u, v) in &loaded.duplicates {
                    eprintln!("warning: {}:{line}: duplicate edge ({u}, {v}) collapsed", path.display());
                }
                Ok(loaded.graph)
            }
            GraphSource::Generator(spec) => spec.generate(),
        }
    }

    pub fn describe(&self) -> String {
        match self {
            GraphSource::File(path) => path.display().to_string(),
            GraphSource::Generator(GeneratorSpec::Er { n, p, seed }) => format!("er:{n}:{p}:{seed}"),
            GraphSource::Generator(GeneratorSpec::Named { family, sizes }) => {
                let sizes: Vec<String> = sizes.iter().map(ToString::to_string).collect();
                format!("{family}:{}", sizes.join(":"))
            }
        }
    }
}

impl FromStr for GraphSource {
    type Err = SourceError;

    /// Existing files win over generator specs of the same spelling.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if Path::new(s).is_file() {
            return Ok(GraphSource::File(PathBuf::from(s)));
        }
        let lower = s.to_ascii_lowercase();
        let (kind, params): (String, Vec<String>) = if lower.contains(':') {
            let mut parts = lower.split(':').map(str::to_string);
            let kind = parts.next().unwrap_or_default();
            (kind, parts.collect())
        } else {
            // compact forms: p3, c5, k4
            let split = lower.find(|c: char| c.is_ascii_digit()).ok_or_else(|| SourceError::Unknown(s.to_string()))?;
            let (kind, rest) = lower.split_at(split);
            (kind.to_string(), rest.split(',').map(str::to_string).collect())
        };
        if canonical_family(&kind) == Some("er") {
            let [n, p, seed] = params.as_slice() else {
                return Err(SourceError::BadParameters { spec: s.to_string(), reason: "er takes n:p:seed".into() });
            };
            let seed: u64 = seed
                .parse()
                .map_err(|_| SourceError::BadParameters { spec: s.to_string(), reason: "bad seed".into() })?;
            return GeneratorSpec::from_kind(&kind, &[n.clone(), p.clone()], seed).map(GraphSource::Generator);
        }
        if canonical_family(&kind).is_none() {
            return Err(SourceError::Unknown(s.to_string()));
        }
        GeneratorSpec::from_kind(&kind, &params, 0).map(GraphSource::Generator)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn load(s: &str) -> Graph {
        s.parse::<GraphSource>().unwrap().load().unwrap()
    }

    #[test]
    fn compact_and_colon_forms() {
        assert_eq!(load("p3"), generate_named(Family::Path(3)).unwrap());
        assert_eq!(load("K3"), generate_named(Family::Complete(3)).unwrap());
        assert_eq!(load("cycle:5"), generate_named(Family::Cycle(5)).unwrap());
        assert_eq!(load("bipartite:2:3"), generate_named(Family::CompleteBipartite(2, 3)).unwrap());
        assert_eq!(load("kb2,3"), generate_named(Family::CompleteBipartite(2, 3)).unwrap());
        assert_eq!(load("star:5"), generate_named(Family::Star(5)).unwrap());
        assert_eq!(load("er:50:0.1:3"), generate_er(50, 0.1, 3).unwrap());
    }

    #[test]
    fn rejects_unknown_and_invalid() {
        assert!(matches!("zz".parse::<GraphSource>(), Err(SourceError::Unknown(_))));
        assert!(matches!("er:5:0.1".parse::<GraphSource>(), Err(SourceError::BadParameters { .. })));
        let err = "c2".parse::<GraphSource>().unwrap().load().unwrap_err();
        assert!(err.to_string().contains("cycle requires ≥ 3"), "{err}");
    }

    #[test]
    fn generator_specs_from_gen_arguments() {
        let spec = GeneratorSpec::from_kind("er", &["20".into(), "0.2".into()], 7).unwrap();
        assert_eq!(spec, GeneratorSpec::Er { n: 20, p: 0.2, seed: 7 });
        assert!(GeneratorSpec::from_kind("complete_bipartite", &["2".into()], 0).is_err());
        assert!(GeneratorSpec::from_kind("path", &["x".into()], 0).is_err());
    }
}
