//! Cross-checks the three engines on one ordering.

use alloc::vec::Vec;

use crate::engines::{call_counts_via_dp, verify_mis, RankedGraph};
use crate::error::Result;
use crate::graph::{Graph, Vertex};
use crate::paths::{filtration, query_paths_ending_at};
use crate::ranks::RankAssignment;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DisagreementKind {
    Membership { sequential: bool, recursive: bool, early_break: bool },
    CallCount { recursive: u64, dp: u64, query_paths: u64 },
    TraceShape,
    NotMaximal,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Disagreement {
    pub vertex: Vertex,
    pub kind: DisagreementKind,
}

/// Test hook: drops the last query edge recorded into `vertex` before the
/// trace is checked. A vertex without lower neighbors is left untouched.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TraceFault {
    pub vertex: Vertex,
}

/// Runs every engine on `(g, ranks)` and reports the first vertex, in rank
/// order, where they disagree.
pub fn cross_check(g: &Graph, ranks: &RankAssignment, fault: Option<TraceFault>) -> Result<Option<Disagreement>> {
    let rg = RankedGraph::new(g, ranks)?;
    let sequential = rg.sequential_greedy();
    let (early, mut trace) = rg.early_break_run();
    if let Some(TraceFault { vertex }) = fault {
        if let Some(list) = trace.queried.get_mut(vertex) {
            list.pop();
        }
    }
    let dp = call_counts_via_dp(g, ranks, &trace)?;
    let ending = query_paths_ending_at(&filtration(g, ranks, g.vertex_count())?);

    if !verify_mis(g, &sequential) {
        let vertex = (0..g.vertex_count())
            .find(|&v| !sequential.contains(v) && !g.neighbors(v).iter().any(|&w| sequential.contains(w)))
            .unwrap_or(0);
        return Ok(Some(Disagreement { vertex, kind: DisagreementKind::NotMaximal }));
    }

    for &v in ranks.order() {
        let (recursive, calls) = rg.recursive_count(v)?;
        let (s, e) = (sequential.contains(v), early.contains(v));
        if s != recursive || s != e {
            return Ok(Some(Disagreement {
                vertex: v,
                kind: DisagreementKind::Membership { sequential: s, recursive, early_break: e },
            }));
        }
        if calls != dp[v] || calls != ending[v] {
            return Ok(Some(Disagreement {
                vertex: v,
                kind: DisagreementKind::CallCount { recursive: calls, dp: dp[v], query_paths: ending[v] },
            }));
        }
    }

    if let Some(vertex) = rg.check_trace_shape(&early, &trace) {
        return Ok(Some(Disagreement { vertex, kind: DisagreementKind::TraceShape }));
    }
    Ok(None)
}

/// Cross-checks `trials` orderings; returns the first failing trial.
pub fn cross_check_trials<F>(
    g: &Graph,
    trials: u64,
    mut ranks_for: F,
    fault: Option<TraceFault>,
) -> Result<Option<(u64, Disagreement)>>
where
    F: FnMut(u64) -> RankAssignment,
{
    for trial in 0..trials {
        let ranks = ranks_for(trial);
        if let Some(d) = cross_check(g, &ranks, fault)? {
            return Ok(Some((trial, d)));
        }
    }
    Ok(None)
}

/// Per vertex: `(vertex, recursive calls, DP count, query paths ending there)`.
pub fn call_count_table(g: &Graph, ranks: &RankAssignment) -> Result<Vec<(Vertex, u64, u64, u64)>> {
    let rg = RankedGraph::new(g, ranks)?;
    let (_, trace) = rg.early_break_run();
    let dp = call_counts_via_dp(g, ranks, &trace)?;
    let ending = query_paths_ending_at(&filtration(g, ranks, g.vertex_count())?);
    (0..g.vertex_count())
        .map(|v| Ok((v, rg.recursive_count(v)?.1, dp[v], ending[v])))
        .collect()
}
