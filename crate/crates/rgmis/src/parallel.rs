//! Rayon runners. Trials are split into fixed chunks whose integer tallies
//! merge exactly, so results do not depend on the thread count.

use rayon::prelude::*;
use rgmis_core::consistency::{cross_check, Disagreement, TraceFault};
use rgmis_core::expectation::{mc_trial, trial_ranks, EdgeIndex, McReport, McTally};
use rgmis_core::{Error, Graph, Result, Vertex};

const CHUNK: u64 = 1024;

fn chunks(trials: u64) -> impl ParallelIterator<Item = std::ops::Range<u64>> {
    let count = trials.div_ceil(CHUNK);
    (0..count).into_par_iter().map(move |c| c * CHUNK..((c + 1) * CHUNK).min(trials))
}

/// Same result as `rgmis_core::expectation::mc_edge_expectations`.
pub fn mc_edge_expectations(g: &Graph, trials: u64, seed: u64) -> Result<McReport> {
    if trials == 0 {
        return Err(Error::ZeroTrials);
    }
    if g.vertex_count() == 0 {
        return Err(Error::EmptyVertexSet);
    }
    let index = EdgeIndex::new(g);
    let empty = || McTally::new(index.len(), g.vertex_count());
    let tally = chunks(trials)
        .map(|range| {
            let mut t = empty();
            for trial in range {
                t.record(&mc_trial(g, &index, seed, trial));
            }
            t
        })
        .reduce(empty, |a, b| a.merge(&b));
    Ok(tally.finish(g, &index, seed))
}

/// First failing trial (lowest index) with its ordering, if any.
pub fn consistency_trials(
    g: &Graph,
    trials: u64,
    seed: u64,
    fault: Option<TraceFault>,
) -> Result<Option<(u64, Vec<Vertex>, Disagreement)>> {
    let n = g.vertex_count();
    (0..trials)
        .into_par_iter()
        .map(|trial| {
            let ranks = trial_ranks(n, seed, trial);
            Ok(cross_check(g, &ranks, fault)?.map(|d| (trial, ranks.order().to_vec(), d)))
        })
        .find_map_first(|r: Result<_>| match r {
            Ok(None) => None,
            other => Some(other),
        })
        .transpose()
        .map(Option::flatten)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rgmis_core::generate_er;

    #[test]
    fn parallel_matches_serial() {
        let g = generate_er(12, 0.3, 5).unwrap();
        let serial = rgmis_core::expectation::mc_edge_expectations(&g, 3000, 9).unwrap();
        let parallel = mc_edge_expectations(&g, 3000, 9).unwrap();
        assert_eq!(serial, parallel);
        let pool = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
        assert_eq!(pool.install(|| mc_edge_expectations(&g, 3000, 9)).unwrap(), serial);
    }

    #[test]
    fn consistency_reports_first_failure() {
        let g = generate_er(15, 0.3, 2).unwrap();
        assert_eq!(consistency_trials(&g, 200, 4, None).unwrap(), None);
        let v = (0..15).max_by_key(|&v| g.degree(v)).unwrap();
        let found = consistency_trials(&g, 200, 4, Some(TraceFault { vertex: v })).unwrap();
        let (trial, order, d) = found.expect("fault is detected");
        assert_eq!(d.vertex, v);
        let serial = rgmis_core::consistency::cross_check_trials(
            &g,
            200,
            |t| trial_ranks(15, 4, t),
            Some(TraceFault { vertex: v }),
        )
        .unwrap()
        .unwrap();
        assert_eq!((serial.0, serial.1), (trial, d));
        assert_eq!(order, trial_ranks(15, 4, trial).order());
    }
}
