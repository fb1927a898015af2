use std::path::Path;
use std::time::Instant;

use beauville_core::engine::{Method, Verdict};
use beauville_core::family::{realize, Family, GroupSpec};
use beauville_core::nottingham::{nottingham_verdict, zm, QuotientSpec};
use beauville_core::pipeline::decide;
use serde::{Deserialize, Serialize};

use crate::report::{Check, Failure, Provenance, Report};
use crate::Overrides;

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub struct Row {
    pub quotient: String,
    pub log_order: u32,
    pub computed: Verdict,
    pub method: Method,
    pub reference: Verdict,
    pub agrees: bool,
}

fn quotients(p: u32, k_min: u32, k_max: u32, diamonds: bool) -> Vec<QuotientSpec> {
    let mut out: Vec<QuotientSpec> = (k_min..=k_max).map(|k| QuotientSpec::Full { p, k }).collect();
    if diamonds {
        for m in 1.. {
            let z = zm(p as u64, m) as u32;
            if z + 1 > k_max {
                break;
            }
            if z + 1 < k_min {
                continue;
            }
            out.extend((0..p).map(|a| QuotientSpec::Diamond { p, m, alpha: Some(a) }));
            out.push(QuotientSpec::Diamond { p, m, alpha: None });
        }
    }
    out
}

fn name(q: &QuotientSpec) -> String {
    match *q {
        QuotientSpec::Full { k, .. } => format!("N/N_{k}"),
        QuotientSpec::Diamond { p, m, alpha: Some(a) } => format!("N/<e_{a}, N_{}>", zm(p as u64, m) + 1),
        QuotientSpec::Diamond { p, m, alpha: None } => format!("N/N_{}", zm(p as u64, m)).replace("N/N_", "N/W=N_"),
    }
}

fn verdict(b: bool) -> Verdict {
    if b {
        Verdict::Yes
    } else {
        Verdict::No
    }
}

pub fn run(
    p: u32,
    k_min: u32,
    k_max: u32,
    diamonds: bool,
    overrides: &Overrides,
    criterion: Option<u32>,
    out: Option<&Path>,
) -> Result<bool, Failure> {
    if p < 3 || !beauville_core::engine::is_prime(p as u64) {
        return Err(Failure::Input(format!("p must be an odd prime, got {p}")));
    }
    if k_min < 1 || k_min > k_max {
        return Err(Failure::Input(format!("bad range k = {k_min}..={k_max}")));
    }
    let start = Instant::now();
    let mut report = Report::new("nottingham-table", format!("nottingham table p={p} k={k_min}..{k_max}"));
    let mut rows = Vec::new();
    println!("{:<18} {:>9} {:>8} {:>18} {:>9} {:>6}", "quotient", "order", "computed", "method", "reference", "agree");
    for q in quotients(p, k_min, k_max, diamonds) {
        let family = match q {
            QuotientSpec::Full { p, k } => Family::Nottingham { p, k },
            QuotientSpec::Diamond { p, m, alpha } => Family::NottinghamDiamond { p, m, alpha },
        };
        let mut spec: GroupSpec = family.into();
        spec.rng_seed = overrides.seed;
        spec.exhaustive_threshold = overrides.threshold;
        spec.search_budget = overrides.budget;
        let r = realize(&spec)?;
        let d = decide(&r)?;
        let reference = verdict(nottingham_verdict(q));
        let row = Row {
            quotient: name(&q),
            log_order: q.log_order(),
            computed: d.report.verdict,
            method: d.report.method,
            reference,
            agrees: d.report.verdict == reference,
        };
        println!(
            "{:<18} {:>9} {:>8} {:>18} {:>9} {:>6}",
            row.quotient,
            format!("{p}^{}", row.log_order),
            format!("{:?}", row.computed).to_lowercase(),
            format!("{:?}", row.method).to_lowercase(),
            format!("{:?}", row.reference).to_lowercase(),
            if row.agrees { "yes" } else { "NO" },
        );
        rows.push(row);
    }
    let disagreements = rows.iter().filter(|r| !r.agrees).count();
    println!("disagreements: {disagreements}");
    report.checks.push(Check {
        criterion,
        name: format!("{}: {} rows, {disagreements} disagreements", report.label, rows.len()),
        passed: disagreements == 0,
    });
    let config = GroupSpec::from(Family::Abelian { n: 1 }).config();
    report.provenance = Some(Provenance {
        seed: overrides.seed.unwrap_or(config.seed),
        exhaustive_threshold: overrides.threshold.unwrap_or(config.exhaustive_threshold),
        search_budget: overrides.budget.unwrap_or(beauville_core::family::DEFAULT_SEARCH_BUDGET),
        version: env!("CARGO_PKG_VERSION").into(),
    });
    report.table = Some(rows);
    report.timing.seconds = start.elapsed().as_secs_f64();
    if let Some(path) = out {
        report.emit(Some(path))?;
    }
    Ok(report.passed())
}
