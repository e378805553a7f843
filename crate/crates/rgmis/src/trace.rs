//! Text form of a query trace: one `w v` line per query edge in
//! rank(v)-major order, followed by one `calls v c` line per vertex.

use std::fmt::Write as _;

use rgmis_core::engines::QueryTrace;
use rgmis_core::{RankAssignment, Vertex};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TraceFormatError {
    #[error("line {line}: malformed trace line {content:?}")]
    Malformed { line: usize, content: String },
    #[error("line {line}: query edge after the calls section")]
    EdgeAfterCalls { line: usize },
}

/// A trace read back from text.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ParsedTrace {
    pub query_edges: Vec<(Vertex, Vertex)>,
    pub calls: Vec<(Vertex, u64)>,
}

impl ParsedTrace {
    pub fn total_calls(&self) -> u64 {
        self.calls.iter().map(|&(_, c)| c).sum()
    }

    pub fn max_calls(&self) -> Option<(Vertex, u64)> {
        self.calls.iter().copied().max_by_key(|&(v, c)| (c, std::cmp::Reverse(v)))
    }
}

pub fn format_trace(trace: &QueryTrace, ranks: &RankAssignment) -> String {
    let mut out = String::new();
    for (w, v) in trace.query_edges(ranks) {
        writeln!(out, "{w} {v}").unwrap();
    }
    for (v, c) in trace.call_count.iter().enumerate() {
        writeln!(out, "calls {v} {c}").unwrap();
    }
    out
}

pub fn parse_trace(text: &str) -> Result<ParsedTrace, TraceFormatError> {
    let mut parsed = ParsedTrace::default();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.trim();
        if content.is_empty() || content.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = content.split_whitespace().collect();
        let bad = || TraceFormatError::Malformed { line, content: content.to_string() };
        match fields.as_slice() {
            ["calls", v, c] => {
                parsed.calls.push((v.parse().map_err(|_| bad())?, c.parse().map_err(|_| bad())?));
            }
            [w, v] => {
                if !parsed.calls.is_empty() {
                    return Err(TraceFormatError::EdgeAfterCalls { line });
                }
                parsed.query_edges.push((w.parse().map_err(|_| bad())?, v.parse().map_err(|_| bad())?));
            }
            _ => return Err(bad()),
        }
    }
    Ok(parsed)
}

/// Heuristic used by the report command to tell traces from JSON reports.
pub fn looks_like_trace(text: &str) -> bool {
    !text.trim_start().starts_with('{')
}
