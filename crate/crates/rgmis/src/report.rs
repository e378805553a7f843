//! Machine-readable reports (JSON, CSV) and the summary table.

use std::fmt;

use rgmis_core::consistency::{Disagreement, DisagreementKind};
use rgmis_core::expectation::{AuditReport, Estimate, ExactReport, McReport};
use rgmis_core::paths::{enumerate_dangerous_paths, enumerate_query_paths, FiltrationState};
use rgmis_core::{Graph, OrderedEdge, Rational, Vertex};
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub const SCHEMA: &str = "rgmis.report.v1";

/// Standard errors allowed above a bound before a Monte Carlo check fails.
pub const MC_SIGMAS: f64 = 3.0;

/// Witnesses kept in a report; the rest are counted.
pub const MAX_WITNESSES: usize = 16;

#[derive(Debug, Error)]
pub enum ReportError {
    #[error("not a report: {0}")]
    Json(#[from] serde_json::Error),
    #[error("schema mismatch: expected {SCHEMA:?}, found {0:?}")]
    Schema(String),
    #[error("rational {0} does not fit the report format")]
    Overflow(Rational),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    Exact,
    Mc,
    Audit,
    Consistency,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Exact => "exact",
            Mode::Mc => "mc",
            Mode::Audit => "audit",
            Mode::Consistency => "consistency",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Fraction {
    pub num: i64,
    pub den: i64,
}

impl TryFrom<Rational> for Fraction {
    type Error = ReportError;

    fn try_from(r: Rational) -> Result<Self, ReportError> {
        let num = i64::try_from(*r.numer()).map_err(|_| ReportError::Overflow(r))?;
        let den = i64::try_from(*r.denom()).map_err(|_| ReportError::Overflow(r))?;
        Ok(Fraction { num, den })
    }
}

impl fmt::Display for Fraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == 1 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

/// Exact rationals are `{num, den}`; estimates are `{mean, stderr}`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Value {
    Exact(Fraction),
    Estimate { mean: f64, stderr: f64 },
}

impl Value {
    pub fn exact(r: Rational) -> Result<Self, ReportError> {
        Fraction::try_from(r).map(Value::Exact)
    }

    pub fn int(x: u64) -> Self {
        Value::Exact(Fraction { num: x as i64, den: 1 })
    }

    pub fn estimate(e: Estimate) -> Self {
        Value::Estimate { mean: e.mean, stderr: e.stderr }
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Exact(x) => x.fmt(f),
            Value::Estimate { mean, stderr } => write!(f, "{mean:.6}±{stderr:.6}"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Status {
    /// Holds with equality.
    Tight,
    /// Holds strictly.
    Strict,
    /// Within the statistical allowance.
    Within,
    Pass,
    Violated,
    Fail,
}

impl Status {
    pub fn holds(self) -> bool {
        !matches!(self, Status::Violated | Status::Fail)
    }

    fn pass_if(ok: bool) -> Self {
        if ok {
            Status::Pass
        } else {
            Status::Fail
        }
    }

    fn compare(observed: Rational, bound: Rational) -> Self {
        match observed.cmp(&bound) {
            std::cmp::Ordering::Less => Status::Strict,
            std::cmp::Ordering::Equal => Status::Tight,
            std::cmp::Ordering::Greater => Status::Violated,
        }
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Tight => "TIGHT",
            Status::Strict => "STRICT",
            Status::Within => "WITHIN",
            Status::Pass => "PASS",
            Status::Violated => "VIOLATED",
            Status::Fail => "FAIL",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub observed: Option<Value>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bound: Option<Value>,
    pub status: Status,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

impl Check {
    fn new(name: &str, observed: Option<Value>, bound: Option<Value>, status: Status) -> Self {
        Check { name: name.to_string(), observed, bound, status, detail: None }
    }

    fn with_detail(mut self, detail: String) -> Self {
        self.detail = Some(detail);
        self
    }

    /// `name [observed] [bound b] status S [(detail)]`
    pub fn summary_line(&self) -> String {
        let mut line = self.name.clone();
        if let Some(v) = self.observed {
            line += &format!(" {v}");
        }
        if let Some(b) = self.bound {
            line += &format!(" bound {b}");
        }
        line += &format!(" status {}", self.status);
        if let Some(d) = &self.detail {
            line += &format!(" ({d})");
        }
        line
    }
}

/// Everything needed to replay a failed claim.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub claim: String,
    /// Revealed prefix of the ordering (the full ordering for engine
    /// disagreements; empty for claims about averages over all orderings).
    pub prefix: Vec<Vertex>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub edge: Option<[Vertex; 2]>,
    /// Query paths then dangerous paths of `edge` at `prefix`.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub paths: Vec<Vec<Vertex>>,
    pub detail: String,
}

impl Witness {
    fn at_state(claim: &str, g: &Graph, prefix: &[Vertex], edge: OrderedEdge, detail: String) -> Self {
        let paths = FiltrationState::from_prefix(g, prefix)
            .map(|s| {
                let q = enumerate_query_paths(&s, edge).paths;
                let d = enumerate_dangerous_paths(&s, edge).paths;
                q.iter().chain(&d).map(|p| p.vertices().to_vec()).collect()
            })
            .unwrap_or_default();
        Witness { claim: claim.to_string(), prefix: prefix.to_vec(), edge: Some([edge.from, edge.to]), paths, detail }
    }
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "witness: {}", self.claim)?;
        writeln!(f, "  prefix: {:?}", self.prefix)?;
        if let Some([a, b]) = self.edge {
            writeln!(f, "  edge: ({a}, {b})")?;
        }
        for p in &self.paths {
            writeln!(f, "  path: {p:?}")?;
        }
        write!(f, "  detail: {}", self.detail)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphMeta {
    pub source: String,
    pub vertices: usize,
    pub edges: usize,
    pub triangle_free: bool,
    pub edge_list: Vec<[Vertex; 2]>,
}

impl GraphMeta {
    pub fn new(source: &str, g: &Graph) -> Self {
        GraphMeta {
            source: source.to_string(),
            vertices: g.vertex_count(),
            edges: g.edge_count(),
            triangle_free: g.is_triangle_free(),
            edge_list: g.edges().map(|(u, v)| [u, v]).collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EdgeValue {
    pub from: Vertex,
    pub to: Vertex,
    pub value: Value,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Aggregate {
    pub name: String,
    pub value: Value,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub schema: String,
    pub graph: GraphMeta,
    pub mode: Mode,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trials: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub exhaustive_bound: Option<usize>,
    /// What `per_edge` holds: expected direct invocations, or the minimum
    /// audit slack over reachable states.
    pub metric: String,
    pub per_edge: Vec<EdgeValue>,
    pub aggregates: Vec<Aggregate>,
    pub checks: Vec<Check>,
    pub witnesses: Vec<Witness>,
    #[serde(default)]
    pub witnesses_omitted: usize,
}

impl Report {
    fn new(graph: GraphMeta, mode: Mode, metric: &str) -> Self {
        Report {
            schema: SCHEMA.to_string(),
            graph,
            mode,
            seed: None,
            trials: None,
            exhaustive_bound: None,
            metric: metric.to_string(),
            per_edge: Vec::new(),
            aggregates: Vec::new(),
            checks: Vec::new(),
            witnesses: Vec::new(),
            witnesses_omitted: 0,
        }
    }

    fn aggregate(&mut self, name: &str, value: Value) {
        self.aggregates.push(Aggregate { name: name.to_string(), value });
    }

    fn witness(&mut self, w: Witness) {
        if self.witnesses.len() < MAX_WITNESSES {
            self.witnesses.push(w);
        } else {
            self.witnesses_omitted += 1;
        }
    }

    pub fn holds(&self) -> bool {
        self.checks.iter().all(|c| c.status.holds())
    }

    pub fn summary_lines(&self) -> Vec<String> {
        self.checks.iter().map(Check::summary_line).collect()
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("reports serialize");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Self, ReportError> {
        // check the schema tag before the full shape for a clearer error
        let raw: serde_json::Value = serde_json::from_str(text)?;
        let schema = raw.get("schema").and_then(|s| s.as_str()).unwrap_or("<missing>");
        if schema != SCHEMA {
            return Err(ReportError::Schema(schema.to_string()));
        }
        Ok(serde_json::from_value(raw)?)
    }

    /// Per-edge values as CSV: `edge_from,edge_to,num,den` for exact
    /// values and `edge_from,edge_to,mean,stderr` for estimates.
    pub fn per_edge_csv(&self) -> Result<String, ReportError> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let estimates = matches!(self.per_edge.first().map(|e| e.value), Some(Value::Estimate { .. }));
        if estimates {
            w.write_record(["edge_from", "edge_to", "mean", "stderr"])?;
        } else {
            w.write_record(["edge_from", "edge_to", "num", "den"])?;
        }
        for e in &self.per_edge {
            let (a, b) = match e.value {
                Value::Exact(x) => (x.num.to_string(), x.den.to_string()),
                Value::Estimate { mean, stderr } => (mean.to_string(), stderr.to_string()),
            };
            w.write_record([e.from.to_string(), e.to.to_string(), a, b])?;
        }
        Ok(finish_csv(w))
    }
}

fn finish_csv(w: csv::Writer<Vec<u8>>) -> String {
    String::from_utf8(w.into_inner().expect("in-memory writer")).expect("csv output is utf-8")
}

fn edge_values(edges: &[OrderedEdge], values: impl IntoIterator<Item = Value>) -> Vec<EdgeValue> {
    edges.iter().zip(values).map(|(e, value)| EdgeValue { from: e.from, to: e.to, value }).collect()
}

pub fn exact_report(source: &str, g: &Graph, r: &ExactReport, bound: usize) -> Result<Report, ReportError> {
    let mut report = Report::new(GraphMeta::new(source, g), Mode::Exact, "direct_invocations");
    report.exhaustive_bound = Some(bound);
    let values = r.per_edge.iter().map(|&x| Value::exact(x)).collect::<Result<Vec<_>, _>>()?;
    report.per_edge = edge_values(&r.edges, values);
    report.aggregate("orderings", Value::int(r.orderings as u64));
    report.aggregate("total", Value::exact(r.total)?);
    report.aggregate("average_calls", Value::exact(r.average_calls)?);
    report.aggregate("m_over_n", Value::exact(r.m_over_n())?);

    let half = Rational::new(1, 2);
    let max = r.max_edge();
    report.checks.push(Check::new(
        "max_edge_expectation",
        Some(Value::exact(max)?),
        Some(Value::exact(half)?),
        Status::compare(max, half),
    ));
    report.checks.push(Check::new(
        "average_calls",
        Some(Value::exact(r.average_calls)?),
        Some(Value::exact(r.m_over_n())?),
        Status::compare(r.average_calls, r.m_over_n()),
    ));
    let tight = r.per_edge.iter().all(|&x| x == half);
    report.checks.push(
        Check::new("triangle_free_equality", None, None, Status::pass_if(r.tightness_matches())).with_detail(
            format!("triangle_free {} all_edges_half {}", r.triangle_free, tight),
        ),
    );
    report.checks.push(Check::new("call_count_consistency", None, None, Status::pass_if(r.count_consistent)));

    for (e, &x) in r.edges.iter().zip(&r.per_edge) {
        if x > half {
            report.witness(Witness::at_state(
                "per-edge expectation at most 1/2",
                g,
                &[],
                *e,
                format!("expectation {x} over all {} orderings", r.orderings),
            ));
        }
    }
    if r.average_calls > r.m_over_n() {
        report.witness(Witness {
            claim: "average recursive calls at most m/n".into(),
            prefix: Vec::new(),
            edge: None,
            paths: Vec::new(),
            detail: format!("average {} exceeds {}", r.average_calls, r.m_over_n()),
        });
    }
    Ok(report)
}

pub fn mc_report(source: &str, g: &Graph, r: &McReport) -> Report {
    let mut report = Report::new(GraphMeta::new(source, g), Mode::Mc, "direct_invocations");
    report.seed = Some(r.seed);
    report.trials = Some(r.trials);
    report.per_edge = edge_values(&r.edges, r.per_edge.iter().map(|&e| Value::estimate(e)));
    report.aggregate("total", Value::estimate(r.total));
    report.aggregate("average_calls", Value::estimate(r.average_calls));
    let m_over_n = Rational::new(r.edge_count as i128, r.vertex_count.max(1) as i128);
    report.aggregate("m_over_n", Value::exact(m_over_n).expect("small"));

    let above = r.edges_above_half(MC_SIGMAS);
    let max = r.per_edge.iter().copied().max_by(|a, b| a.mean.total_cmp(&b.mean));
    report.checks.push(
        Check::new(
            "max_edge_expectation",
            max.map(Value::estimate),
            Some(Value::exact(Rational::new(1, 2)).expect("small")),
            if above.is_empty() { Status::Within } else { Status::Violated },
        )
        .with_detail(format!("{} edges above bound + {MC_SIGMAS} stderr", above.len())),
    );
    let avg = r.average_calls;
    let mn = r.edge_count as f64 / r.vertex_count.max(1) as f64;
    report.checks.push(
        Check::new(
            "average_calls",
            Some(Value::estimate(avg)),
            Some(Value::exact(m_over_n).expect("small")),
            if avg.mean <= mn + MC_SIGMAS * avg.stderr { Status::Within } else { Status::Violated },
        )
        .with_detail(format!("allowance {MC_SIGMAS} stderr")),
    );
    for (e, est) in r.edges.iter().zip(&r.per_edge) {
        if above.contains(e) {
            report.witness(Witness {
                claim: "per-edge expectation at most 1/2".into(),
                prefix: Vec::new(),
                edge: Some([e.from, e.to]),
                paths: Vec::new(),
                detail: format!(
                    "estimate {:.6} stderr {:.6} over {} trials, seed {}",
                    est.mean, est.stderr, r.trials, r.seed
                ),
            });
        }
    }
    report
}

pub fn audit_report(source: &str, g: &Graph, r: &AuditReport, bound: usize) -> Result<Report, ReportError> {
    let mut report = Report::new(GraphMeta::new(source, g), Mode::Audit, "min_slack");
    report.exhaustive_bound = Some(bound);
    let edges: Vec<OrderedEdge> = g.ordered_edges().collect();
    let mut min_per_edge: Vec<Option<Rational>> = vec![None; edges.len()];
    for (i, row) in r.rows.iter().enumerate() {
        let slot = &mut min_per_edge[i % edges.len()];
        debug_assert_eq!(row.edge, edges[i % edges.len()]);
        *slot = Some(slot.map_or(row.slack, |m| m.min(row.slack)));
    }
    let zero = Rational::from_integer(0);
    let values = min_per_edge.into_iter().map(|m| Value::exact(m.unwrap_or(zero))).collect::<Result<Vec<_>, _>>()?;
    report.per_edge = edge_values(&edges, values);
    report.aggregate("states", Value::int(r.states as u64));
    report.aggregate("rows", Value::int(r.rows.len() as u64));
    report.aggregate("strict_slacks", Value::int(r.strict_slacks() as u64));
    report.aggregate("min_slack", Value::exact(r.min_slack().unwrap_or(zero))?);
    report.aggregate("max_slack", Value::exact(r.max_slack().unwrap_or(zero))?);
    report.aggregate("increment_checks", Value::int(r.increment_checks as u64));
    report.aggregate("delta_checks", Value::int(r.delta_checks as u64));

    let min = r.min_slack().unwrap_or(zero);
    let slack_status = if !r.supermartingale_holds() {
        Status::Violated
    } else if r.strict_slacks() > 0 {
        Status::Strict
    } else {
        Status::Tight
    };
    report.checks.push(
        Check::new("supermartingale_slack", Some(Value::exact(min)?), Some(Value::int(0)), slack_status)
            .with_detail(format!("{} of {} rows strict", r.strict_slacks(), r.rows.len())),
    );
    report.checks.push(
        Check::new("triangle_free_equality", None, None, Status::pass_if(r.tightness_matches()))
            .with_detail(format!("triangle_free {} strict_rows {}", r.triangle_free, r.strict_slacks())),
    );
    report.checks.push(
        Check::new("increment_identity", None, None, Status::pass_if(r.increment_failures.is_empty()))
            .with_detail(format!("{} failures in {} checks", r.increment_failures.len(), r.increment_checks)),
    );
    report.checks.push(
        Check::new("dangerous_path_bound", None, None, Status::pass_if(r.delta_failures.is_empty()))
            .with_detail(format!("{} failures in {} checks", r.delta_failures.len(), r.delta_checks)),
    );

    for row in r.negative_slacks() {
        report.witness(Witness::at_state(
            "potential is a supermartingale",
            g,
            &row.prefix,
            row.edge,
            format!("phi {} next expectation {} slack {}", row.phi, row.next_expectation, row.slack),
        ));
    }
    if !r.tightness_matches() {
        let row = r.rows.iter().find(|row| row.slack > zero);
        let detail = match row {
            Some(row) => format!("triangle-free graph with slack {}", row.slack),
            None => "graph with a triangle but zero slack everywhere".to_string(),
        };
        let witness = match row {
            Some(row) => Witness::at_state("martingale exactly on triangle-free graphs", g, &row.prefix, row.edge, detail),
            None => Witness {
                claim: "martingale exactly on triangle-free graphs".into(),
                prefix: Vec::new(),
                edge: None,
                paths: Vec::new(),
                detail,
            },
        };
        report.witness(witness);
    }
    for w in &r.increment_failures {
        report.witness(Witness::at_state(
            "expected new query paths equal dangerous share",
            g,
            &w.prefix,
            w.edge,
            format!("expected new {} dangerous share {}", w.expected_new, w.dangerous_share),
        ));
    }
    for w in &r.delta_failures {
        let v = w.path.vertices();
        report.witness(Witness {
            claim: "expected dangerous-path change at most -2/(n-t)".into(),
            prefix: w.prefix.clone(),
            edge: Some([v[0], v[1]]),
            paths: vec![v.to_vec()],
            detail: format!("expectation {} bound {}", w.expectation, w.bound),
        });
    }
    Ok(report)
}

/// Audit rows as CSV. Rationals are split into numerator and denominator
/// columns; `prefix` lists the revealed vertices separated by spaces.
pub fn audit_csv(r: &AuditReport) -> Result<String, ReportError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record([
        "edge_from",
        "edge_to",
        "t",
        "q",
        "d",
        "phi_num",
        "phi_den",
        "next_expect_num",
        "next_expect_den",
        "slack_num",
        "slack_den",
        "prefix",
    ])?;
    for row in &r.rows {
        let prefix: Vec<String> = row.prefix.iter().map(ToString::to_string).collect();
        let mut rec = vec![
            row.edge.from.to_string(),
            row.edge.to.to_string(),
            row.time().to_string(),
            row.query.to_string(),
            row.dangerous.to_string(),
        ];
        for x in [row.phi, row.next_expectation, row.slack] {
            rec.push(x.numer().to_string());
            rec.push(x.denom().to_string());
        }
        rec.push(prefix.join(" "));
        w.write_record(&rec)?;
    }
    Ok(finish_csv(w))
}

/// Outcome of cross-checking the engines on seeded orderings.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConsistencyOutcome {
    pub trials: u64,
    pub seed: u64,
    pub first_failure: Option<(u64, Vec<Vertex>, Disagreement)>,
}

pub fn describe_disagreement(d: &Disagreement) -> String {
    match &d.kind {
        DisagreementKind::Membership { sequential, recursive, early_break } => format!(
            "vertex {}: membership sequential {sequential} recursive {recursive} early_break {early_break}",
            d.vertex
        ),
        DisagreementKind::CallCount { recursive, dp, query_paths } => format!(
            "vertex {}: call counts recursive {recursive} dp {dp} query_paths {query_paths}",
            d.vertex
        ),
        DisagreementKind::TraceShape => format!("vertex {}: trace does not match an early-break run", d.vertex),
        DisagreementKind::NotMaximal => format!("vertex {}: sequential output is not a maximal independent set", d.vertex),
    }
}

pub fn consistency_report(source: &str, g: &Graph, c: &ConsistencyOutcome) -> Report {
    let mut report = Report::new(GraphMeta::new(source, g), Mode::Consistency, "none");
    report.seed = Some(c.seed);
    report.trials = Some(c.trials);
    report.aggregate("disagreements", Value::int(u64::from(c.first_failure.is_some())));
    let mut check = Check::new("engine_agreement", None, None, Status::pass_if(c.first_failure.is_none()));
    match &c.first_failure {
        None => check = check.with_detail(format!("{} trials agree", c.trials)),
        Some((trial, order, d)) => {
            let detail = format!("seed {} trial {trial} {}", c.seed, describe_disagreement(d));
            check = check.with_detail(detail.clone());
            report.witness(Witness {
                claim: "engines agree on membership and call counts".into(),
                prefix: order.clone(),
                edge: None,
                paths: Vec::new(),
                detail,
            });
        }
    }
    report.checks.push(check);
    report
}

/// Rows of the `report` command: one per check of every input.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SummaryRow {
    pub source: String,
    pub mode: String,
    pub check: String,
    pub observed: String,
    pub bound: String,
    pub status: String,
}

pub fn summary_rows(report: &Report) -> Vec<SummaryRow> {
    report
        .checks
        .iter()
        .map(|c| SummaryRow {
            source: report.graph.source.clone(),
            mode: report.mode.to_string(),
            check: c.name.clone(),
            observed: c.observed.map(|v| v.to_string()).unwrap_or_default(),
            bound: c.bound.map(|v| v.to_string()).unwrap_or_default(),
            status: c.status.to_string(),
        })
        .collect()
}

pub fn summary_csv(rows: &[SummaryRow]) -> Result<String, ReportError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for row in rows {
        w.serialize(row)?;
    }
    if rows.is_empty() {
        w.write_record(["source", "mode", "check", "observed", "bound", "status"])?;
    }
    Ok(finish_csv(w))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rgmis_core::expectation::{exact_edge_expectations, exhaustive_supermartingale_audit, AuditOptions};
    use rgmis_core::{generate_named, Family};

    #[test]
    fn p3_and_k3_headlines() {
        let p3 = generate_named(Family::Path(3)).unwrap();
        let r = exact_report("p3", &p3, &exact_edge_expectations(&p3, 9).unwrap(), 9).unwrap();
        assert_eq!(r.summary_lines()[0], "max_edge_expectation 1/2 bound 1/2 status TIGHT");
        assert_eq!(r.summary_lines()[1], "average_calls 2/3 bound 2/3 status TIGHT");
        assert!(r.holds());

        let k3 = generate_named(Family::Complete(3)).unwrap();
        let r = exact_report("k3", &k3, &exact_edge_expectations(&k3, 9).unwrap(), 9).unwrap();
        assert_eq!(r.summary_lines()[0], "max_edge_expectation 1/3 bound 1/2 status STRICT");
        assert!(r.holds());
    }

    #[test]
    fn json_round_trip_and_schema_check() {
        let k3 = generate_named(Family::Complete(3)).unwrap();
        let audit = exhaustive_supermartingale_audit(&k3, 9, AuditOptions::default()).unwrap();
        let r = audit_report("k3", &k3, &audit, 9).unwrap();
        assert_eq!(r.checks[0].status, Status::Strict);
        let back = Report::from_json(&r.to_json()).unwrap();
        assert_eq!(back, r);
        let bad = r.to_json().replace(SCHEMA, "other");
        assert!(matches!(Report::from_json(&bad), Err(ReportError::Schema(s)) if s == "other"));
        assert!(Report::from_json("[1]").is_err());
    }

    #[test]
    fn csv_outputs() {
        let p3 = generate_named(Family::Path(3)).unwrap();
        let r = exact_report("p3", &p3, &exact_edge_expectations(&p3, 9).unwrap(), 9).unwrap();
        let csv = r.per_edge_csv().unwrap();
        assert!(csv.starts_with("edge_from,edge_to,num,den\n0,1,1,2\n"));
        let audit = exhaustive_supermartingale_audit(&p3, 9, AuditOptions::default()).unwrap();
        let text = audit_csv(&audit).unwrap();
        let first = text.lines().nth(1).unwrap();
        assert_eq!(first, "0,1,0,0,1,1,2,1,2,0,1,");
    }
}
