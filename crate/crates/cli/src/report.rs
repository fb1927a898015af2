use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};
use std::time::Instant;

use beauville_core::criteria::{
    classify, power_profile, theorem_a_verdict, Certificate, CriteriaFlags, PowerProfile, TheoremAReport,
};
use beauville_core::engine::{beauville_verify, beauville_verify_literal, Method, RankInfo, Verdict};
use beauville_core::family::{realize, GroupSpec, Realized};
use beauville_core::nottingham::{
    all_elements_suite, closed_form_suite, commutator_formula_suite, order_p_suite, power_formula_suite,
    product_law_suite, Law, SuiteResult,
};
use beauville_core::pipeline::{decide, find_certificate, Decision};
use beauville_core::{Code, Error, Group};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::{Expect, Overrides, Suite, Tagging};

pub const SCHEMA: &str = "report-v1";

/// Why a command stopped; maps onto the exit-code contract.
#[derive(Debug)]
pub enum Failure {
    Input(String),
    Resource(String),
    Missing(String),
}

impl Failure {
    pub fn code(&self) -> u8 {
        match self {
            Failure::Input(_) => 2,
            Failure::Resource(_) => 3,
            Failure::Missing(_) => 4,
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Input(m) | Failure::Resource(m) | Failure::Missing(m) => f.write_str(m),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Resource { .. } | Error::Threshold { .. } | Error::Divergence(_) => Failure::Resource(e.to_string()),
            _ => Failure::Input(e.to_string()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub criterion: Option<u32>,
    pub name: String,
    pub passed: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub struct GroupInfo {
    pub order: u64,
    pub prime: Option<u64>,
    pub exponent: u64,
    pub class: Option<usize>,
    pub generators: Vec<String>,
    pub rank: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub struct BeauvilleInfo {
    pub verdict: Verdict,
    pub method: Method,
    pub certificate: Option<String>,
    /// `[[x1, y1], [x2, y2]]` in the oracle's element format.
    pub witness: Option<[[String; 2]; 2]>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub struct Provenance {
    pub seed: u64,
    pub exhaustive_threshold: u64,
    pub search_budget: u64,
    pub version: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Timing {
    pub seconds: f64,
}

/// One command's output. Everything except `timing` is a function of the
/// inputs, seed and thresholds.
#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "kebab-case")]
pub struct Report {
    pub schema: String,
    pub command: String,
    pub label: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub spec: Option<serde_json::Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub group: Option<GroupInfo>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub profile: Option<PowerProfile>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub flags: Option<CriteriaFlags>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub theorem_a: Option<TheoremAReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub certificate: Option<Certificate>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub beauville: Option<BeauvilleInfo>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub literal_agrees: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub table: Option<Vec<crate::table::Row>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub suites: Option<Vec<SuiteResult>>,
    pub checks: Vec<Check>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub provenance: Option<Provenance>,
    pub fixtures: BTreeMap<String, String>,
    pub timing: Timing,
}

impl Report {
    pub fn new(command: &str, label: String) -> Self {
        Report {
            schema: SCHEMA.into(),
            command: command.into(),
            label,
            spec: None,
            group: None,
            profile: None,
            flags: None,
            theorem_a: None,
            certificate: None,
            beauville: None,
            literal_agrees: None,
            table: None,
            suites: None,
            checks: Vec::new(),
            provenance: None,
            fixtures: BTreeMap::new(),
            timing: Timing { seconds: 0.0 },
        }
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    /// Writes the JSON to `out` (atomically) or standard output.
    pub fn emit(&self, out: Option<&Path>) -> Result<(), Failure> {
        let text = serde_json::to_string_pretty(self).expect("report serializes") + "\n";
        match out {
            Some(path) => write_atomic(path, text.as_bytes()),
            None => {
                print!("{text}");
                Ok(())
            }
        }
    }
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<(), Failure> {
    let name = path.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_else(|| "out".into());
    let tmp = path.with_file_name(format!(".{name}.tmp"));
    std::fs::write(&tmp, bytes)
        .and_then(|_| std::fs::rename(&tmp, path))
        .map_err(|e| Failure::Input(format!("cannot write {}: {e}", path.display())))
}

fn read(path: &Path) -> Result<Vec<u8>, Failure> {
    std::fs::read(path).map_err(|e| Failure::Input(format!("cannot read {}: {e}", path.display())))
}

/// Reads and validates a spec, applies command-line overrides and resolves
/// file references relative to the spec's directory.
pub fn load_spec(path: &Path, overrides: &Overrides, report: &mut Report) -> Result<GroupSpec, Failure> {
    let bytes = read(path)?;
    report.fixtures.insert(file_key(path), sha256_hex(&bytes));
    let text = String::from_utf8(bytes).map_err(|_| Failure::Input(format!("{} is not UTF-8", path.display())))?;
    let mut spec = GroupSpec::from_json(&text).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    report.spec = serde_json::to_value(&spec).ok();
    if let Some(s) = overrides.seed {
        spec.rng_seed = Some(s);
    }
    if let Some(t) = overrides.threshold {
        spec.exhaustive_threshold = Some(t);
    }
    if let Some(b) = overrides.budget {
        spec.search_budget = Some(b);
    }
    let base = path.parent().map(Path::to_path_buf).unwrap_or_default();
    let mut hashes = Vec::new();
    spec.resolve_files(|name| {
        let full: PathBuf = base.join(name);
        let bytes =
            std::fs::read(&full).map_err(|e| Error::Parameter(format!("cannot read {}: {e}", full.display())))?;
        hashes.push((file_key(&full), sha256_hex(&bytes)));
        String::from_utf8(bytes).map_err(|_| Error::Parameter(format!("{} is not UTF-8", full.display())))
    })?;
    report.fixtures.extend(hashes);
    let config = spec.config();
    report.provenance = Some(Provenance {
        seed: config.seed,
        exhaustive_threshold: config.exhaustive_threshold,
        search_budget: spec.search_budget(),
        version: env!("CARGO_PKG_VERSION").into(),
    });
    Ok(spec)
}

fn file_key(path: &Path) -> String {
    path.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default()
}

fn group_info(g: &Group) -> GroupInfo {
    let rank = match g.rank_info() {
        RankInfo::Trivial => "trivial",
        RankInfo::Cyclic => "cyclic",
        RankInfo::Two => "two",
        RankInfo::Other => "other",
    };
    GroupInfo {
        order: g.order(),
        prime: g.prime(),
        exponent: g.exponent(),
        class: g.nilpotency_class(),
        generators: g.gen_names().to_vec(),
        rank: rank.into(),
    }
}

fn witness_text(g: &Group, pair1: (Code, Code), pair2: (Code, Code)) -> [[String; 2]; 2] {
    [[g.format(pair1.0), g.format(pair1.1)], [g.format(pair2.0), g.format(pair2.1)]]
}

fn beauville_info(g: &Group, d: &Decision) -> BeauvilleInfo {
    BeauvilleInfo {
        verdict: d.report.verdict,
        method: d.report.method,
        certificate: d.report.certificate.clone(),
        witness: d.report.witness.map(|s| witness_text(g, s.pair1, s.pair2)),
    }
}

fn expect_check(report: &mut Report, tagging: &Tagging, verdict: Verdict) {
    if let Some(e) = tagging.expect {
        let want = match e {
            Expect::Yes => Verdict::Yes,
            Expect::No => Verdict::No,
        };
        report.checks.push(Check {
            criterion: tagging.criterion,
            name: format!("{}: verdict {:?}, expected {:?}", report.label, verdict, want),
            passed: verdict == want,
        });
    }
}

fn realized(spec: &GroupSpec) -> Result<Realized, Failure> {
    Ok(realize(spec)?)
}

pub fn analyze(path: &Path, overrides: &Overrides, tagging: &Tagging, out: Option<&Path>) -> Result<bool, Failure> {
    let start = Instant::now();
    let mut report = Report::new("analyze", String::new());
    let spec = load_spec(path, overrides, &mut report)?;
    report.label = spec.label();
    let r = realized(&spec)?;
    let g = &r.group;
    report.group = Some(group_info(g));
    if g.prime().is_some() {
        report.profile = Some(power_profile(g)?);
        let flags = classify(g)?;
        if g.rank_info() == RankInfo::Two {
            report.theorem_a = Some(theorem_a_verdict(g, &flags)?);
        }
        report.flags = Some(flags);
        report.certificate = find_certificate(&r);
    }
    let d = decide(&r)?;
    if report.certificate.is_none() {
        report.certificate = d.certificate.clone();
    }
    report.beauville = Some(beauville_info(g, &d));
    expect_check(&mut report, tagging, d.report.verdict);
    report.timing.seconds = start.elapsed().as_secs_f64();
    report.emit(out)?;
    Ok(report.passed())
}

pub fn search(path: &Path, overrides: &Overrides, tagging: &Tagging, out: Option<&Path>) -> Result<bool, Failure> {
    let start = Instant::now();
    let mut report = Report::new("beauville-search", String::new());
    let spec = load_spec(path, overrides, &mut report)?;
    report.label = spec.label();
    let r = realized(&spec)?;
    report.group = Some(group_info(&r.group));
    let d = decide(&r)?;
    report.certificate = d.certificate.clone();
    report.theorem_a = d.theorem_a.clone();
    report.flags = d.flags.clone();
    report.beauville = Some(beauville_info(&r.group, &d));
    expect_check(&mut report, tagging, d.report.verdict);
    report.timing.seconds = start.elapsed().as_secs_f64();
    report.emit(out)?;
    Ok(report.passed())
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct WitnessFile {
    pair1: [String; 2],
    pair2: [String; 2],
}

/// The literal sigma-set comparison is only run up to this order.
const LITERAL_LIMIT: u64 = 20_000;

pub fn verify(
    path: &Path,
    witness: &Path,
    overrides: &Overrides,
    tagging: &Tagging,
    out: Option<&Path>,
) -> Result<bool, Failure> {
    let start = Instant::now();
    let mut report = Report::new("beauville-verify", String::new());
    let spec = load_spec(path, overrides, &mut report)?;
    report.label = spec.label();
    let bytes = read(witness)?;
    report.fixtures.insert(file_key(witness), sha256_hex(&bytes));
    let w: WitnessFile =
        serde_json::from_slice(&bytes).map_err(|e| Failure::Input(format!("{}: {e}", witness.display())))?;
    let r = realized(&spec)?;
    let g = &r.group;
    let parse = |s: &str| {
        g.parse_element(s).ok_or_else(|| Failure::Input(format!("{}: cannot parse element {s:?}", witness.display())))
    };
    let pair1 = (parse(&w.pair1[0])?, parse(&w.pair1[1])?);
    let pair2 = (parse(&w.pair2[0])?, parse(&w.pair2[1])?);
    let ok = beauville_verify(g, pair1, pair2);
    if g.order() <= LITERAL_LIMIT {
        report.literal_agrees = Some(beauville_verify_literal(g, pair1, pair2) == ok);
    }
    report.group = Some(group_info(g));
    report.beauville = Some(BeauvilleInfo {
        verdict: if ok { Verdict::Yes } else { Verdict::No },
        method: Method::VerifiedStructure,
        certificate: (!ok).then(|| "not-a-structure".into()),
        witness: Some(witness_text(g, pair1, pair2)),
    });
    if let Some(e) = tagging.expect {
        report.checks.push(Check {
            criterion: tagging.criterion,
            name: format!("{}: structure accepted = {ok}", report.label),
            passed: ok == (e == Expect::Yes),
        });
    }
    if report.literal_agrees == Some(false) {
        report.checks.push(Check {
            criterion: tagging.criterion,
            name: format!("{}: literal and socle verification disagree", report.label),
            passed: false,
        });
    }
    report.timing.seconds = start.elapsed().as_secs_f64();
    report.emit(out)?;
    Ok(report.passed())
}

#[allow(clippy::too_many_arguments)]
pub fn formulas(
    primes: &[u32],
    depth: usize,
    max_k: usize,
    m_max: u32,
    suite: Suite,
    samples: usize,
    seed: u64,
    mirrored: bool,
    criterion: Option<u32>,
    out: Option<&Path>,
) -> Result<bool, Failure> {
    if primes.iter().any(|&p| p < 3 || !beauville_core::engine::is_prime(p as u64)) {
        return Err(Failure::Input(format!("primes must be odd primes, got {primes:?}")));
    }
    let start = Instant::now();
    let law = if mirrored { Law::Mirrored } else { Law::Substitution };
    let levels: Vec<u32> = (1..=m_max).collect();
    let want = |s: Suite| suite == Suite::All || suite == s;
    let mut results: Vec<SuiteResult> = Vec::new();
    if want(Suite::Product) {
        results.push(product_law_suite(primes, depth.min(12), samples, law, seed));
    }
    if want(Suite::Powers) {
        results.push(power_formula_suite(primes, max_k, depth, samples.max(400), law, seed));
    }
    if want(Suite::Commutators) {
        results.push(commutator_formula_suite(primes, max_k, depth, samples.min(60), law, seed));
    }
    if want(Suite::ClosedForm) {
        results.push(closed_form_suite(primes, &levels));
    }
    if want(Suite::AllElements) {
        results.push(all_elements_suite(primes, m_max, samples, law, seed));
    }
    if want(Suite::OrderP) {
        results.push(order_p_suite(primes, depth.max(2) * 4));
    }
    let label = format!("formulas primes={primes:?} depth={depth} law={law:?}");
    let mut report = Report::new("formulas-check", label);
    for r in &results {
        report.checks.push(Check {
            criterion,
            name: format!("{}: {} cases, {} violations", r.name, r.cases, r.violations),
            passed: r.passed(),
        });
        let mark = if r.passed() { "pass" } else { "FAIL" };
        eprintln!("{mark:4}  {:<36} cases {:>6}  violations {:>4}", r.name, r.cases, r.violations);
    }
    report.suites = Some(results);
    report.timing.seconds = start.elapsed().as_secs_f64();
    report.emit(out)?;
    Ok(report.passed())
}
