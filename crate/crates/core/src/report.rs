//! Machine-readable run reports and the commands that produce them.
//!
//! A [`RunReport`] is a flat list of named records. Exact values are decimal
//! integers or `p/q` strings; real values are scientific-notation strings
//! that carry the number of significant digits they were rendered with.
//! Reports contain no timestamps or paths, so identical inputs and cache
//! contents give byte-identical JSON and CSV.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::asymptotics::{
    alpha_series, g1_diagnostic, growth_estimates, penrose_bounds, penrose_upper_exact,
    tau_series, z0_for_degree, G1_LABEL, MAX_SERIES_ORDER,
};
use crate::cache::CountTable;
use crate::cuttree::{cut_tree, reconstruct};
use crate::enumeration::{for_each_subgraph, BigCount, EnumOptions, Kind};
use crate::error::{Error, Result};
use crate::lattice::{Family, LatticeSpec};
use crate::meanfield::{
    degree_product, maps_onto_cuttree, maps_onto_tree, nu_by_root_recursion, tn_over_kn,
    tn_sandwich, FoldOptions,
};
use crate::planetree::{f_count, f_partial_sums, w_closed_form, w_sum};
use crate::real::{Precision, Real};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Provenance {
    Exact,
    HighPrecision,
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Provenance::Exact => "exact",
            Provenance::HighPrecision => "high-precision",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Record {
    pub name: String,
    pub value: String,
    pub provenance: Provenance,
    /// Significant digits of a high-precision value.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub digits: Option<u32>,
    /// Outcome of a verification instance.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pass: Option<bool>,
    /// Set when the instance ran out of search budget before finishing.
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub budget_exceeded: bool,
}

impl Record {
    pub fn exact(name: impl Into<String>, value: impl ToString) -> Self {
        Record {
            name: name.into(),
            value: value.to_string(),
            provenance: Provenance::Exact,
            digits: None,
            pass: None,
            budget_exceeded: false,
        }
    }

    pub fn real(name: impl Into<String>, value: &Real, digits: u32) -> Self {
        Record {
            name: name.into(),
            value: value.to_decimal_string(digits),
            provenance: Provenance::HighPrecision,
            digits: Some(digits),
            pass: None,
            budget_exceeded: false,
        }
    }

    pub fn with_pass(mut self, pass: bool) -> Self {
        self.pass = Some(pass);
        self
    }
}

/// How a finished run should be reported to the shell.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Outcome {
    Success,
    VerificationFailed,
    BudgetExceeded,
}

impl Outcome {
    pub fn exit_code(self) -> i32 {
        match self {
            Outcome::Success => 0,
            Outcome::VerificationFailed => 1,
            Outcome::BudgetExceeded => 3,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunReport {
    pub command: String,
    pub spec: String,
    pub parameters: BTreeMap<String, String>,
    pub results: Vec<Record>,
}

impl RunReport {
    pub fn new(command: &str, spec: impl ToString) -> Self {
        RunReport {
            command: command.to_string(),
            spec: spec.to_string(),
            parameters: BTreeMap::new(),
            results: Vec::new(),
        }
    }

    pub fn parameter(&mut self, key: &str, value: impl ToString) {
        self.parameters.insert(key.to_string(), value.to_string());
    }

    pub fn push(&mut self, record: Record) {
        self.results.push(record);
    }

    pub fn get(&self, name: &str) -> Option<&Record> {
        self.results.iter().find(|r| r.name == name)
    }

    /// A failed check outranks an exhausted budget.
    pub fn outcome(&self) -> Outcome {
        if self.results.iter().any(|r| r.pass == Some(false)) {
            Outcome::VerificationFailed
        } else if self.results.iter().any(|r| r.budget_exceeded) {
            Outcome::BudgetExceeded
        } else {
            Outcome::Success
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serialises");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::InvalidInput(format!("report JSON: {e}")))
    }

    /// One row per metadata item, parameter and record, under the header
    /// `section,name,value,provenance,digits,pass`.
    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        let mut row = |fields: [&str; 6]| w.write_record(fields).expect("in-memory write");
        row(["section", "name", "value", "provenance", "digits", "pass"]);
        row(["meta", "command", &self.command, "", "", ""]);
        row(["meta", "spec", &self.spec, "", "", ""]);
        for (k, v) in &self.parameters {
            row(["parameter", k, v, "", "", ""]);
        }
        for r in &self.results {
            let digits = r.digits.map(|d| d.to_string()).unwrap_or_default();
            let pass = match (r.budget_exceeded, r.pass) {
                (true, _) => "budget-exceeded".to_string(),
                (false, Some(p)) => p.to_string(),
                (false, None) => String::new(),
            };
            let prov = r.provenance.to_string();
            row(["result", &r.name, &r.value, &prov, &digits, &pass]);
        }
        String::from_utf8(w.into_inner().expect("flush")).expect("utf-8")
    }
}

/// Shared settings for every command.
#[derive(Clone, Copy, Debug, Default)]
pub struct RunConfig {
    pub precision: Precision,
    pub enumeration: EnumOptions,
    pub folding: FoldOptions,
}

impl RunConfig {
    fn digits(&self) -> u32 {
        self.precision.decimal_digits()
    }
}

fn count_symbol(kind: Kind) -> &'static str {
    match kind {
        Kind::Tree => "t",
        Kind::Animal => "a",
    }
}

/// Counts for `0..=n_max` with root and ratio estimators, through the cache.
pub fn cmd_counts(
    table: &mut CountTable,
    spec: &LatticeSpec,
    kind: Kind,
    n_max: usize,
    cfg: &RunConfig,
) -> Result<RunReport> {
    let counts = table.counts(spec, kind, n_max, &cfg.enumeration)?;
    let mut report = RunReport::new("counts", spec);
    report.parameter("kind", kind);
    report.parameter("n_max", n_max);
    report.parameter("digits", cfg.digits());
    let sym = count_symbol(kind);
    for (n, c) in counts.iter().enumerate() {
        report.push(Record::exact(format!("{sym}_{n}"), c));
    }
    let est = growth_estimates(&counts, cfg.precision)?;
    for (i, r) in est.root_estimates.iter().enumerate() {
        report.push(Record::real(format!("root_{}", i + 1), r, cfg.digits()));
    }
    for (n, r) in est.ratio_estimates.iter().enumerate() {
        report.push(Record::real(format!("ratio_{n}"), r, cfg.digits()));
    }
    Ok(report)
}

/// Exhaustively checkable identities.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Identity {
    /// Weighted configurations folding onto a lattice tree sum to 1.
    Mnsum,
    /// `nu(X) = prod b_x!` and its root recursion, for every cut-tree.
    NuProduct,
    /// `reconstruct . cut_tree = id` and the number of cut-trees is `a_n`.
    CutBijection,
    /// `t_n <= a_n <= f_n` and the falling-factorial sandwich for `t_n`.
    Sandwich,
    /// Plane-tree enumeration of `w_n` against `(n+1)^(n-1)/n!`.
    FClosedForm,
    /// Partial sums of `f_n z0^n` increase and stay below `e`.
    FSeries,
}

impl Identity {
    pub const ALL: [Identity; 6] = [
        Identity::Mnsum,
        Identity::NuProduct,
        Identity::CutBijection,
        Identity::Sandwich,
        Identity::FClosedForm,
        Identity::FSeries,
    ];
}

impl fmt::Display for Identity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Identity::Mnsum => "mnsum",
            Identity::NuProduct => "nu-product",
            Identity::CutBijection => "cut-bijection",
            Identity::Sandwich => "sandwich",
            Identity::FClosedForm => "f-closed-form",
            Identity::FSeries => "f-series",
        })
    }
}

impl FromStr for Identity {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Identity::ALL
            .into_iter()
            .find(|i| i.to_string() == s)
            .ok_or_else(|| {
                let names: Vec<String> = Identity::ALL.iter().map(|i| i.to_string()).collect();
                Error::InvalidInput(format!(
                    "unknown identity {s:?}; expected one of {}",
                    names.join(", ")
                ))
            })
    }
}

/// Runs `identity` for every `n` in `0..=n_max`, one record per `n`.
///
/// A budget overrun marks the affected instance and the run continues with
/// the next `n`; other errors abort the command.
pub fn cmd_verify(
    table: &mut CountTable,
    spec: &LatticeSpec,
    identity: Identity,
    n_max: usize,
    cfg: &RunConfig,
) -> Result<RunReport> {
    let mut report = RunReport::new("verify", spec);
    report.parameter("identity", identity);
    report.parameter("n_max", n_max);
    if identity == Identity::FSeries {
        report.parameter("digits", cfg.digits());
        verify_f_series(&mut report, spec, n_max, cfg);
        return Ok(report);
    }
    for n in 0..=n_max {
        let name = format!("{identity} n={n}");
        let outcome = match identity {
            Identity::Mnsum => verify_mnsum(spec, n, cfg),
            Identity::NuProduct => verify_nu_product(spec, n, cfg),
            Identity::CutBijection => verify_cut_bijection(table, spec, n, cfg),
            Identity::Sandwich => verify_sandwich(table, spec, n, cfg),
            Identity::FClosedForm => Ok(verify_f_closed_form(n)),
            Identity::FSeries => unreachable!(),
        };
        match outcome {
            Ok((value, pass)) => report.push(Record::exact(name, value).with_pass(pass)),
            Err(Error::BudgetExceeded { budget }) => {
                let mut r = Record::exact(name, format!("budget of {budget} exceeded"));
                r.budget_exceeded = true;
                report.push(r);
            }
            Err(e) => return Err(e),
        }
    }
    Ok(report)
}

/// Reports the number of lattice trees checked.
fn verify_mnsum(spec: &LatticeSpec, n: usize, cfg: &RunConfig) -> Result<(String, bool)> {
    let mut trees = Vec::new();
    for_each_subgraph(spec, n, Kind::Tree, &cfg.enumeration, |t| trees.push(t.clone()))?;
    let mut pass = true;
    for t in &trees {
        pass &= maps_onto_tree(spec, t, &cfg.folding)?.is_one();
    }
    Ok((trees.len().to_string(), pass))
}

/// Reports the number of cut-trees checked.
fn verify_nu_product(spec: &LatticeSpec, n: usize, cfg: &RunConfig) -> Result<(String, bool)> {
    let mut animals = Vec::new();
    for_each_subgraph(spec, n, Kind::Animal, &cfg.enumeration, |a| animals.push(a.clone()))?;
    let origin = spec.origin();
    let mut pass = true;
    for a in &animals {
        let x = cut_tree(spec, a);
        let nu = maps_onto_cuttree(spec, &x, &cfg.folding)?;
        pass &= nu == degree_product(&x, &origin);
        pass &= nu == nu_by_root_recursion(spec, &x, &origin, &cfg.folding)?;
    }
    Ok((animals.len().to_string(), pass))
}

/// Reports the number of distinct cut-trees, which must equal `a_n`.
fn verify_cut_bijection(
    table: &mut CountTable,
    spec: &LatticeSpec,
    n: usize,
    cfg: &RunConfig,
) -> Result<(String, bool)> {
    let mut pass = true;
    let mut seen = BTreeSet::new();
    let mut failure = None;
    for_each_subgraph(spec, n, Kind::Animal, &cfg.enumeration, |a| {
        let x = cut_tree(spec, a);
        match reconstruct(spec, &x) {
            Ok(back) => pass &= &back == a,
            Err(e) => failure = failure.take().or(Some(e)),
        }
        pass &= x.half_bonds().len() == a.cycles();
        seen.insert(x);
    })?;
    pass &= failure.is_none();
    let a_n = table.count(spec, Kind::Animal, n, &cfg.enumeration)?;
    let distinct = BigCount::from(seen.len());
    pass &= distinct == a_n;
    Ok((distinct.to_string(), pass))
}

/// Reports `t_n`.
fn verify_sandwich(
    table: &mut CountTable,
    spec: &LatticeSpec,
    n: usize,
    cfg: &RunConfig,
) -> Result<(String, bool)> {
    let t = table.count(spec, Kind::Tree, n, &cfg.enumeration)?;
    let a = table.count(spec, Kind::Animal, n, &cfg.enumeration)?;
    Ok((t.to_string(), sandwich_holds(spec, n, &t, &a)))
}

/// `t_n <= a_n <= f_n`, and for `n <= K` the falling-factorial sandwich and
/// `w_n - t_n/K^n <= w_n n(n-1)/(2K)`.
pub fn sandwich_holds(spec: &LatticeSpec, n: usize, t_n: &BigCount, a_n: &BigCount) -> bool {
    let as_q = |c: &BigCount| BigRational::from_integer(BigInt::from(c.clone()));
    let mut pass = t_n <= a_n && as_q(a_n) <= f_count(spec, n);
    if n as u64 <= spec.degree() {
        pass &= tn_sandwich(spec, n, t_n).holds();
        let w = w_closed_form(n);
        let gap = &w - tn_over_kn(spec, n, t_n);
        let allowance = &w
            * BigRational::new(
                BigInt::from(n * n.saturating_sub(1)),
                BigInt::from(2 * spec.degree()),
            );
        pass &= gap <= allowance;
    }
    pass
}

/// Reports `w_n` as an exact rational.
fn verify_f_closed_form(n: usize) -> (String, bool) {
    let closed = w_closed_form(n);
    let pass = w_sum(n) == closed;
    (closed.to_string(), pass)
}

fn verify_f_series(report: &mut RunReport, spec: &LatticeSpec, n_max: usize, cfg: &RunConfig) {
    let z = z0_for_degree(spec.degree(), cfg.precision);
    let e = Real::e(cfg.precision);
    let sums = f_partial_sums(spec.degree(), n_max, &z);
    let mut prev = Real::zero(cfg.precision);
    for (n, s) in sums.iter().enumerate() {
        let pass = s > &prev && s < &e;
        report.push(Record::real(format!("f-series N={n}"), s, cfg.digits()).with_pass(pass));
        prev = s.clone();
    }
    if let Some(last) = sums.last() {
        report.push(Record::real("e - partial sum", &(&e - last), cfg.digits()));
    }
}

/// Target of `asymptotics`: a lattice, or a bare dimension meaning the
/// nearest-neighbour lattice.
pub fn parse_target(s: &str) -> Result<LatticeSpec> {
    match s.strip_prefix("d=") {
        Some(d) => {
            let d: usize = d
                .parse()
                .map_err(|_| Error::InvalidSpec(format!("bad dimension in {s:?}")))?;
            LatticeSpec::nearest_neighbour(d)
        }
        None => s.parse(),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AsymptoticsRequest {
    pub penrose: bool,
    pub series: bool,
    pub order: usize,
    /// Finite-size diagnostic at `N`, using counts of the given kind.
    pub g1: Option<(Kind, usize)>,
}

impl Default for AsymptoticsRequest {
    fn default() -> Self {
        AsymptoticsRequest {
            penrose: false,
            series: false,
            order: MAX_SERIES_ORDER,
            g1: None,
        }
    }
}

/// `z0`, and on request Penrose bounds, series truncations and the finite-n
/// one-point diagnostic.
pub fn cmd_asymptotics(
    table: &mut CountTable,
    spec: &LatticeSpec,
    req: &AsymptoticsRequest,
    cfg: &RunConfig,
) -> Result<RunReport> {
    if req.order > MAX_SERIES_ORDER {
        return Err(Error::OrderUnavailable(req.order));
    }
    let digits = cfg.digits();
    let prec = cfg.precision;
    let k = spec.degree();
    let mut report = RunReport::new("asymptotics", spec);
    report.parameter("digits", digits);
    report.push(Record::exact("K", k));
    report.push(Record::real("z0", &z0_for_degree(k, prec), digits));

    if req.penrose {
        let b = penrose_bounds(k, prec)?;
        report.push(Record::exact("penrose.upper", penrose_upper_exact(k)?));
        report.push(Record::real("penrose.upper.decimal", &b.upper, digits));
        report.push(Record::real("penrose.K_e", &b.main_term, digits));
        report.push(Record::real("penrose.ratio", &b.ratio(), digits));
    }

    if req.series {
        if spec.family() != Family::NearestNeighbour {
            return Err(Error::InvalidInput(
                "series expansions are in powers of 1/(2d-1) for the nearest-neighbour lattice"
                    .into(),
            ));
        }
        report.parameter("order", req.order);
        let d = spec.dimension();
        let tau = tau_series(d, req.order, prec)?;
        let alpha = alpha_series(d, req.order, prec)?;
        report.push(Record::exact("sigma", tau.sigma));
        report.push(Record::real("tau", &tau.value, digits));
        report.push(Record::real("alpha", &alpha.value, digits));
        let above = req.order == 0 || alpha.value > tau.value;
        report.push(Record::exact("alpha > tau", above).with_pass(above));
    }

    if let Some((kind, n)) = req.g1 {
        report.parameter("g1.kind", kind);
        report.parameter("g1.N", n);
        report.parameter("g1.label", G1_LABEL);
        let counts = table.counts(spec, kind, n + 1, &cfg.enumeration)?;
        let g = g1_diagnostic(k, &counts, n, prec)?;
        report.push(Record::real("g1.z_hat", &g.z_hat, digits));
        report.push(Record::real("g1.g_hat", &g.g_hat, digits));
        report.push(Record::real("g1.value", &g.value, digits));
    }
    Ok(report)
}

/// `true` when `value` parses as an exact count or ratio equal to `expected`.
pub fn exact_value_equals(value: &str, expected: &BigRational) -> bool {
    let parsed = match value.split_once('/') {
        Some((p, q)) => match (p.parse::<BigInt>(), q.parse::<BigInt>()) {
            (Ok(p), Ok(q)) if !q.is_zero() => BigRational::new(p, q),
            _ => return false,
        },
        None => match value.parse::<BigInt>() {
            Ok(p) => BigRational::from_integer(p),
            Err(_) => return false,
        },
    };
    &parsed == expected
}
