//! The decision pipeline: certificates, then known structures, then the
//! exhaustive sweep, then the power criterion and a randomized search.
//! A `No` always comes from a certificate, the sweep, or the criterion.

use serde::{Deserialize, Serialize};

use crate::criteria::{
    classify, cyclic_obstruction, negative_certificate, replay_certificate, theorem_a_verdict, Certificate,
    CriteriaFlags, TheoremA, TheoremAReport,
};
use crate::engine::{
    beauville_search_exhaustive, beauville_search_random, beauville_verify, BeauvilleReport, Method, RankInfo,
    Structure, Verdict,
};
use crate::error::Result;
use crate::family::{Handle, Realized};
use crate::nottingham::{
    base_level, lift_structure, nottingham_verdict, realize_quotient, standard_structure, uncovered_structure, zm,
    QuotientSpec,
};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Decision {
    pub report: BeauvilleReport,
    pub certificate: Option<Certificate>,
    pub theorem_a: Option<TheoremAReport>,
    pub flags: Option<CriteriaFlags>,
}

impl Decision {
    fn from(report: BeauvilleReport) -> Self {
        Decision { report, certificate: None, theorem_a: None, flags: None }
    }
}

/// The certificates that apply to a 2-generator p-group, each replayed.
pub fn find_certificate(r: &Realized) -> Option<Certificate> {
    let g = &r.group;
    g.prime()?;
    [negative_certificate(g), cyclic_obstruction(g)].into_iter().flatten().find(|c| replay_certificate(g, c))
}

/// A structure the theory predicts for this family, unverified.
pub fn known_structure(r: &Realized) -> Result<Option<Structure>> {
    let Handle::Nottingham(q) = &r.handle else { return Ok(None) };
    let g = &r.group;
    let spec = q.spec();
    if !nottingham_verdict(spec) {
        return Ok(None);
    }
    match spec {
        QuotientSpec::Full { p, .. } | QuotientSpec::Diamond { p, .. } if p >= 5 => Ok(Some(standard_structure(q, g))),
        QuotientSpec::Full { p, k } => {
            let Some(m) = base_level(p as u64, k as u64) else { return Ok(None) };
            let bottom = zm(p as u64, m) as u32 + 1;
            if bottom == k {
                return Ok(Some(uncovered_structure(q, g)?.0));
            }
            let (bq, bg) = realize_quotient(QuotientSpec::Full { p, k: bottom }, g.config().clone())?;
            let (_, w, z) = uncovered_structure(&bq, &bg)?;
            Ok(Some(lift_structure(q, g, &w, &z)))
        }
        QuotientSpec::Diamond { .. } => Ok(None),
    }
}

pub fn decide(r: &Realized) -> Result<Decision> {
    let g = &r.group;
    match g.rank_info() {
        RankInfo::Trivial | RankInfo::Cyclic => {
            return Ok(Decision::from(BeauvilleReport::no("cyclic", Method::Certificate)))
        }
        RankInfo::Other => return Ok(Decision::from(BeauvilleReport::no("not-two-generated", Method::Certificate))),
        RankInfo::Two => {}
    }
    if let Some(cert) = find_certificate(r) {
        let name = match cert {
            Certificate::PropNegative { .. } => "prop-negative",
            Certificate::CyclicObstruction { .. } => "cyclic-obstruction",
            Certificate::ExhaustedSignatures => "exhausted-signatures",
        };
        let mut d = Decision::from(BeauvilleReport::no(name, Method::Certificate));
        d.certificate = Some(cert);
        return Ok(d);
    }
    if let Some(s) = known_structure(r)? {
        if beauville_verify(g, s.pair1, s.pair2) {
            return Ok(Decision::from(BeauvilleReport::yes(s, Method::VerifiedStructure)));
        }
    }
    if g.order() <= g.config().exhaustive_threshold {
        let report = beauville_search_exhaustive(g)?;
        let mut d = Decision::from(report);
        if d.report.verdict == Verdict::No {
            d.certificate = Some(Certificate::ExhaustedSignatures);
        }
        return Ok(d);
    }
    let (flags, theorem_a) = if g.prime().is_some() {
        let flags = classify(g)?;
        let ta = theorem_a_verdict(g, &flags)?;
        (Some(flags), Some(ta))
    } else {
        (None, None)
    };
    let verdict = theorem_a.as_ref().map(|t| t.verdict);
    let mut d = if verdict == Some(TheoremA::No) {
        Decision::from(BeauvilleReport::no("theorem-a", Method::Criterion))
    } else {
        let random = beauville_search_random(g, g.config().seed, r.spec.search_budget());
        match (random.verdict, verdict) {
            (Verdict::Yes, _) => Decision::from(random),
            (_, Some(TheoremA::Yes)) => Decision::from(BeauvilleReport {
                verdict: Verdict::Yes,
                witness: None,
                certificate: Some("theorem-a".into()),
                method: Method::Criterion,
            }),
            _ => Decision::from(random),
        }
    };
    d.flags = flags;
    d.theorem_a = theorem_a;
    Ok(d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::family::{realize, Family};

    fn run(family: Family) -> Decision {
        decide(&realize(&family.into()).unwrap()).unwrap()
    }

    #[test]
    fn abelian_verdicts() {
        assert_eq!(run(Family::Abelian { n: 5 }).report.verdict, Verdict::Yes);
        let d = run(Family::Abelian { n: 6 });
        assert_eq!(d.report.verdict, Verdict::No);
        assert_eq!(run(Family::Abelian { n: 1 }).report.certificate.as_deref(), Some("cyclic"));
    }

    #[test]
    fn nottingham_certificates() {
        let d = run(Family::Nottingham { p: 5, k: 7 });
        assert_eq!(d.report.verdict, Verdict::No);
        assert!(matches!(d.certificate, Some(Certificate::PropNegative { .. })));
        let d = run(Family::Nottingham { p: 5, k: 8 });
        assert_eq!(d.report.verdict, Verdict::Yes);
        assert_eq!(d.report.method, Method::VerifiedStructure);
    }

    #[test]
    fn p3_lifted_structure() {
        let d = run(Family::Nottingham { p: 3, k: 9 });
        assert_eq!(d.report.verdict, Verdict::Yes);
        assert_eq!(d.report.method, Method::VerifiedStructure);
        let d = run(Family::Nottingham { p: 3, k: 6 });
        assert_eq!(d.report.verdict, Verdict::Yes);
    }
}
