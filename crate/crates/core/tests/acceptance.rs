//! Acceptance run: one pass/fail line per criterion. Pass criterion numbers
//! as arguments to run a subset, e.g. `cargo test --test acceptance -- 3 9`.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::sync::Arc;
use std::time::Instant;

use beauville_core::constructions::{Abelian, PotentExample};
use beauville_core::criteria::{
    classify, cyclic_obstruction, easy_detecting, negative_certificate, power_profile, replay_certificate,
    theorem_a_verdict, Certificate, Hypothesis, SemiAbelian, TheoremA,
};
use beauville_core::engine::{
    beauville_search_exhaustive, beauville_search_random, beauville_verify, beauville_verify_literal, SeriesKind,
    Verdict,
};
use beauville_core::family::{realize, Family, GroupSpec, Handle, Realized};
use beauville_core::lazard::{builtin_generators, builtin_lie, LieBuiltin, LieRing};
use beauville_core::nottingham::{
    all_elements_suite, closed_form_suite, commutator_formula_suite, lift_structure, named_generators,
    nottingham_verdict, order_p_suite, power_formula_suite, product_law_suite, realize_quotient, standard_structure,
    uncovered_structure, Law, QuotientSpec, SuiteResult,
};
use beauville_core::pc::Builtin;
use beauville_core::{Config, Group, GroupOracle};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;
type Criterion = (u32, &'static str, fn() -> Outcome);

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn group(family: Family, threshold: Option<u64>) -> Result<Realized, String> {
    let mut spec: GroupSpec = family.into();
    spec.exhaustive_threshold = threshold;
    realize(&spec).map_err(|e| e.to_string())
}

fn exhaustive(g: &Group) -> Result<Verdict, String> {
    beauville_search_exhaustive(g).map(|r| r.verdict).map_err(|e| e.to_string())
}

fn yes_no(b: bool) -> Verdict {
    if b {
        Verdict::Yes
    } else {
        Verdict::No
    }
}

fn catanese() -> Outcome {
    let start = Instant::now();
    for n in 2..=13u32 {
        let a = Arc::new(Abelian::new(n));
        let g = Group::realize(a.clone(), a.generators(), vec!["a".into(), "b".into()], Config::default())
            .map_err(|e| e.to_string())?;
        let want = yes_no(gcd(n, 6) == 1);
        let got = exhaustive(&g)?;
        ensure(got == want, || format!("C_{n} x C_{n}: {got:?}, expected {want:?}"))?;
    }
    let t = start.elapsed().as_secs_f64();
    ensure(t < 10.0, || format!("took {t:.1}s"))?;
    Ok(format!("n = 2..13 match gcd(n,6) = 1 ({t:.2}s)"))
}

fn gcd(a: u32, b: u32) -> u32 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn nottingham_p5() -> Outcome {
    for k in 3..=10u32 {
        let want = yes_no(k != 7);
        ensure(yes_no(nottingham_verdict(QuotientSpec::Full { p: 5, k })) == want, || format!("reference at k={k}"))?;
        let (q, g) = realize_quotient(
            QuotientSpec::Full { p: 5, k },
            Config { exhaustive_threshold: 20_000, ..Config::default() },
        )
        .map_err(|e| e.to_string())?;
        if k <= 7 {
            let got = exhaustive(&g)?;
            ensure(got == want, || format!("k={k}: exhaustive {got:?}"))?;
        }
        if k == 7 {
            let cert = negative_certificate(&g).ok_or("k=7: no certificate")?;
            ensure(replay_certificate(&g, &cert), || "k=7: certificate replay failed".into())?;
        } else if k >= 8 {
            let s = standard_structure(&q, &g);
            ensure(beauville_verify(&g, s.pair1, s.pair2), || format!("k={k}: {{u,v}},{{uv^2,uv^4}} rejected"))?;
            ensure(negative_certificate(&g).is_none() && cyclic_obstruction(&g).is_none(), || {
                format!("k={k}: a non-existence certificate was found")
            })?;
        }
    }
    Ok("k=3..10 yes except k=7; k<=7 exhaustive, k=8..10 verified structures".into())
}

fn nottingham_p3() -> Outcome {
    let config = Config { exhaustive_threshold: 20_000, ..Config::default() };
    let (_, g5) = realize_quotient(QuotientSpec::Full { p: 3, k: 5 }, config.clone()).map_err(|e| e.to_string())?;
    ensure(g5.order() == 81 && exhaustive(&g5)? == Verdict::No, || "k=5 should be no".into())?;
    for k in 6..=8 {
        let (_, g) = realize_quotient(QuotientSpec::Full { p: 3, k }, config.clone()).map_err(|e| e.to_string())?;
        ensure(exhaustive(&g)? == Verdict::Yes, || format!("k={k} should be yes"))?;
    }
    let (bq, bg) = realize_quotient(QuotientSpec::Full { p: 3, k: 6 }, config.clone()).map_err(|e| e.to_string())?;
    let (_, w, z) = uncovered_structure(&bq, &bg).map_err(|e| e.to_string())?;
    for k in [9, 10] {
        let (q, g) = realize_quotient(QuotientSpec::Full { p: 3, k }, config.clone()).map_err(|e| e.to_string())?;
        let s = lift_structure(&q, &g, &w, &z);
        ensure(beauville_verify(&g, s.pair1, s.pair2), || format!("k={k}: lifted structure rejected"))?;
    }
    let (_, g14) = realize_quotient(QuotientSpec::Full { p: 3, k: 14 }, config.clone()).map_err(|e| e.to_string())?;
    let cert = negative_certificate(&g14).ok_or("k=14: no certificate")?;
    ensure(matches!(cert, Certificate::PropNegative { .. }) && replay_certificate(&g14, &cert), || {
        "k=14: certificate replay failed".into()
    })?;
    let (q15, g15) = realize_quotient(QuotientSpec::Full { p: 3, k: 15 }, config).map_err(|e| e.to_string())?;
    let (s, _, _) = uncovered_structure(&q15, &g15).map_err(|e| e.to_string())?;
    ensure(beauville_verify(&g15, s.pair1, s.pair2), || "k=15: structure rejected".into())?;
    Ok(format!(
        "k=5 no, k=6..8 yes (exhaustive), k=9,10 yes (lifted), k=14 no (order 3^{}), k=15 yes (order 3^{})",
        log3(g14.order()),
        log3(g15.order())
    ))
}

fn log3(mut n: u64) -> u32 {
    let mut e = 0;
    while n > 1 {
        n /= 3;
        e += 1;
    }
    e
}

fn diamonds() -> Outcome {
    for alpha in [Some(0), Some(1), Some(2), Some(3), Some(4), None] {
        let r = group(Family::NottinghamDiamond { p: 5, m: 1, alpha }, Some(20_000))?;
        let g = &r.group;
        let want = yes_no(matches!(alpha, Some(a) if a != 0));
        ensure(g.order() == 5u64.pow(6), || format!("alpha={alpha:?}: order {}", g.order()))?;
        let got = exhaustive(g)?;
        ensure(got == want, || format!("alpha={alpha:?}: {got:?}"))?;
        if want == Verdict::Yes {
            ensure(g.exponent() == 25, || format!("alpha={alpha:?}: exponent {}", g.exponent()))?;
            ensure(g.power_subgroup(5).order() == 5, || format!("alpha={alpha:?}: |G^5| != 5"))?;
            let mut lines: Vec<usize> = g.omega_set(5).iter().filter_map(|x| g.line_of(x)).collect();
            lines.sort_unstable();
            lines.dedup();
            let Handle::Nottingham(q) = &r.handle else { unreachable!() };
            let (u, v) = named_generators(q);
            ensure(lines.len() == 3, || format!("alpha={alpha:?}: Omega hits lines {lines:?}"))?;
            ensure(
                g.line_of(u).is_some_and(|l| lines.contains(&l)) && g.line_of(v).is_some_and(|l| lines.contains(&l)),
                || format!("alpha={alpha:?}: lines {lines:?} miss u or v"),
            )?;
        }
    }
    Ok("alpha=1..4 yes, alpha=0 and W=N_7 no; Omega_{1} in exactly three maximal subgroups".into())
}

fn h34() -> Outcome {
    for r in [1, 2] {
        let start = Instant::now();
        let real = group(Family::Pc { file: None, source: None, builtin: Some(Builtin::H34 { p: 5, r }) }, None)?;
        let g = &real.group;
        let Handle::Pc(pc) = &real.handle else { unreachable!() };
        let a = pc.word("a").map_err(|e| e.to_string())?;
        let b = pc.word("b").map_err(|e| e.to_string())?;
        ensure(g.exponent() == 25, || format!("r={r}: exponent {}", g.exponent()))?;
        ensure(easy_detecting(g, a, b).map_err(|e| e.to_string())?, || format!("r={r}: <a^5> = <b^5>"))?;
        let flags = classify(g).map_err(|e| e.to_string())?;
        let ta = theorem_a_verdict(g, &flags).map_err(|e| e.to_string())?;
        ensure(ta.verdict == TheoremA::Yes, || format!("r={r}: power criterion {:?}", ta.verdict))?;
        ensure(exhaustive(g)? == Verdict::Yes, || format!("r={r}: exhaustive no"))?;
        let t = start.elapsed().as_secs_f64();
        ensure(t < 60.0, || format!("r={r}: took {t:.1}s"))?;
    }
    Ok("r=1,2: exp 25, <a^5> != <b^5>, power criterion yes, exhaustive yes".into())
}

fn lie_rings() -> Outcome {
    let lie = |which, p| Family::Lie { file: None, source: None, builtin: Some(which), p: Some(p) };
    let l1 = group(lie(LieBuiltin::L1, 5), Some(20_000))?;
    ensure(exhaustive(&l1.group)? == Verdict::Yes, || "L1 p=5 exhaustive no".into())?;
    let l2 = group(lie(LieBuiltin::L2, 5), Some(20_000))?;
    ensure(exhaustive(&l2.group)? == Verdict::No, || "L2 p=5 exhaustive yes".into())?;
    let l1 = group(lie(LieBuiltin::L1, 7), None)?;
    let rep = beauville_search_random(&l1.group, 7, 2000);
    let s = rep.witness.ok_or("L1 p=7: random search found nothing")?;
    ensure(beauville_verify(&l1.group, s.pair1, s.pair2), || "L1 p=7: witness rejected".into())?;
    let l2 = group(lie(LieBuiltin::L2, 7), None)?;
    let flags = classify(&l2.group).map_err(|e| e.to_string())?;
    let ta = theorem_a_verdict(&l2.group, &flags).map_err(|e| e.to_string())?;
    ensure(flags.class_lt_p, || "L2 p=7: class >= 7".into())?;
    ensure(
        ta.verdict == TheoremA::No && matches!(ta.hypothesis, Some(Hypothesis::SemiAbelian | Hypothesis::ClassBelowP)),
        || format!("L2 p=7: power criterion {ta:?}"),
    )?;
    let ring = builtin_lie(LieBuiltin::L2, 7).map_err(|e| e.to_string())?;
    let (a, b) = builtin_generators(LieBuiltin::L2, &ring);
    ensure(!ring.lie_easy_detect(&a, &b), || "L2 p=7: easy detect true".into())?;
    Ok("p=5: L1 yes, L2 no (exhaustive); p=7: L1 random witness verified, L2 no by power criterion".into())
}

fn metacyclic() -> Outcome {
    let pc = |b| Family::Pc { file: None, source: None, builtin: Some(b) };
    let cases = [
        (Builtin::MetacyclicSplit { p: 5, e: 2, f: 2, s: 6 }, 625, Verdict::Yes),
        (Builtin::MetacyclicModular { p: 5, e: 2 }, 125, Verdict::No),
        (Builtin::MetacyclicSplit { p: 3, e: 2, f: 2, s: 4 }, 81, Verdict::No),
    ];
    for (b, order, want) in cases {
        let r = group(pc(b), None)?;
        ensure(r.group.order() == order, || format!("{b:?}: order {}", r.group.order()))?;
        let got = exhaustive(&r.group)?;
        ensure(got == want, || format!("{b:?}: {got:?}"))?;
    }
    Ok("C25 x| C25 yes, C25 x| C5 no, C9 x| C9 no".into())
}

fn pk_family() -> Outcome {
    for (s, log) in [(4, 5), (5, 6)] {
        let r = group(Family::PkQuotient { p: 5, k: 1, s }, Some(20_000))?;
        let g = &r.group;
        ensure(g.order() == 5u64.pow(log), || format!("s={s}: order {}", g.order()))?;
        ensure(exhaustive(g)? == Verdict::Yes, || format!("s={s}: exhaustive no"))?;
        if s == 5 {
            let prof = power_profile(g).map_err(|e| e.to_string())?;
            ensure(prof.e == 2 && prof.top_agemo() == 5, || format!("s=5: profile {prof:?}"))?;
        }
    }
    Ok("s=4 (5^5) and s=5 (5^6) yes; s=5 has exp 25 and |G^5| = 5".into())
}

fn nonsplit() -> Outcome {
    let r = group(Family::PkNonsplit { p: 5, k: 1, e: 2, m: 2 }, None)?;
    let g = &r.group;
    ensure(g.order() == 5u64.pow(7), || format!("order {}", g.order()))?;
    let prof = power_profile(g).map_err(|e| e.to_string())?;
    ensure(prof.e == 2 && prof.top_agemo() == 25, || format!("profile {prof:?}"))?;
    let cert = cyclic_obstruction(g).ok_or("no cyclic obstruction")?;
    ensure(replay_certificate(g, &cert), || "replay failed".into())?;
    Ok(format!("order 5^7, exp 25, |G^5| = 25, {cert:?} replayed"))
}

fn suite_ok(r: &SuiteResult) -> Result<(), String> {
    ensure(r.passed(), || format!("{}: {} violations, e.g. {:?}", r.name, r.violations, r.failures.first()))
}

fn formulas() -> Outcome {
    let law = Law::Substitution;
    let suites = [
        power_formula_suite(&[3, 5], 8, 15, 400, law, 11),
        commutator_formula_suite(&[3, 5], 8, 15, 60, law, 12),
        closed_form_suite(&[3, 5, 7], &[1, 2]),
        all_elements_suite(&[3, 5], 2, 100, law, 13),
        order_p_suite(&[3, 5, 7], 60),
        product_law_suite(&[3, 5, 7], 12, 100, law, 14),
    ];
    for s in &suites {
        suite_ok(s)?;
    }
    let mirrored = product_law_suite(&[3, 5], 12, 50, Law::Mirrored, 14);
    ensure(!mirrored.passed(), || "mirrored composition went unnoticed".into())?;
    let cases: u64 = suites.iter().map(|s| s.cases).sum();
    Ok(format!("{} suites, {cases} cases, 0 violations; mirrored law detected", suites.len()))
}

fn random_vec(rng: &mut ChaCha8Rng, ring: &LieRing) -> Vec<u64> {
    ring.orders().iter().map(|&q| rng.gen_range(0..q)).collect()
}

fn lazard() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x1a2a);
    let mut rings = 0;
    for p in [5, 7] {
        for which in [LieBuiltin::L1, LieBuiltin::L2] {
            let ring = builtin_lie(which, p).map_err(|e| e.to_string())?;
            for _ in 0..1000 {
                let (x, y, z) = (random_vec(&mut rng, &ring), random_vec(&mut rng, &ring), random_vec(&mut rng, &ring));
                let bch = |a: &[u64], b: &[u64]| ring.bch(a, b).expect("p >= 5");
                let left = bch(&bch(&x, &y), &z);
                let right = bch(&x, &bch(&y, &z));
                ensure(left == right, || format!("{which:?} p={p}: BCH not associative at {x:?} {y:?} {z:?}"))?;
            }
            for _ in 0..200 {
                let x = random_vec(&mut rng, &ring);
                let n = rng.gen_range(1..=2 * p * p);
                ensure(ring.power_multiple_check(&x, n).expect("p >= 5"), || {
                    format!("{which:?} p={p}: x^{n} != {n}x for {x:?}")
                })?;
            }
            rings += 1;
        }
    }
    Ok(format!("{rings} rings: 1000 associativity triples and 200 power samples each"))
}

fn potent() -> Outcome {
    let start = Instant::now();
    let ex = Arc::new(PotentExample::new(5).map_err(|e| e.to_string())?);
    let r = group(Family::PotentExample { p: 5 }, None)?;
    let g = &r.group;
    let flags = classify(g).map_err(|e| e.to_string())?;
    ensure(flags.potent, || "not potent".into())?;
    ensure(matches!(flags.semi_pe1_abelian, SemiAbelian::False { .. }), || {
        format!("semi-p-abelian test gave {:?}", flags.semi_pe1_abelian)
    })?;
    let pow5 = |x| g.pow(x, 5);
    let x = ex.mul(ex.b(), ex.a(1));
    let y = ex.mul(ex.b(), ex.a(5));
    ensure(pow5(x) == pow5(y), || "x^5 != y^5".into())?;
    let d = pow5(ex.mul(x, ex.inv(y)));
    ensure(d == ex.inv(pow5(ex.a(5))) && d != ex.identity(), || "(xy^-1)^5 != a_5^-5".into())?;
    let g5 = g.power_subgroup(5);
    let lcs = g.series(SeriesKind::LowerCentral);
    let gamma4 = &lcs[3];
    ensure(gamma4.is_subgroup_of(&g5), || "gamma_4 not in G^5".into())?;
    let spanned = g.subgroup_closure(&[pow5(ex.a(4)), pow5(ex.a(5))], false);
    ensure(spanned.order() == gamma4.order() && spanned.is_subgroup_of(gamma4), || {
        format!("gamma_4 has order {}, <a_4^5, a_5^5> has order {}", gamma4.order(), spanned.order())
    })?;
    let t = start.elapsed().as_secs_f64();
    ensure(t < 60.0, || format!("took {t:.1}s"))?;
    Ok(format!("potent, (xy^-1)^5 = a_5^-5 != 1, gamma_4 = <a_4^5, a_5^5> <= G^5 ({t:.1}s)"))
}

fn socle_equivalence() -> Outcome {
    let pc = |b| Family::Pc { file: None, source: None, builtin: Some(b) };
    let families = (2..=13).map(|n| Family::Abelian { n }).chain([
        Family::Nottingham { p: 3, k: 5 },
        Family::Nottingham { p: 3, k: 6 },
        Family::Nottingham { p: 3, k: 7 },
        Family::Nottingham { p: 5, k: 4 },
        Family::Nottingham { p: 5, k: 5 },
        Family::NottinghamDiamond { p: 3, m: 1, alpha: Some(1) },
        Family::NottinghamDiamond { p: 3, m: 1, alpha: None },
        pc(Builtin::MetacyclicSplit { p: 5, e: 2, f: 2, s: 6 }),
        pc(Builtin::MetacyclicModular { p: 5, e: 2 }),
        pc(Builtin::MetacyclicSplit { p: 3, e: 2, f: 2, s: 4 }),
        pc(Builtin::MetacyclicModular { p: 3, e: 2 }),
    ]);
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    let (mut groups, mut samples, mut yes) = (0, 0, 0);
    for family in families {
        let r = group(family.clone(), None)?;
        let g = &r.group;
        if g.order() > 2000 {
            continue;
        }
        g.socle_index();
        groups += 1;
        for _ in 0..500 {
            let mut pick = || g.random_element(&mut rng);
            let (p1, p2) = ((pick(), pick()), (pick(), pick()));
            let fast = beauville_verify(g, p1, p2);
            let literal = beauville_verify_literal(g, p1, p2);
            ensure(fast == literal, || format!("{family:?}: {p1:?} {p2:?}: socle {fast}, literal {literal}"))?;
            samples += 1;
            yes += fast as u32;
        }
    }
    Ok(format!("{groups} groups, {samples} samples ({yes} structures), 0 disagreements"))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 13] = [
        (1, "catanese sweep", catanese),
        (2, "nottingham p=5", nottingham_p5),
        (3, "nottingham p=3", nottingham_p3),
        (4, "diamond quotients", diamonds),
        (5, "H3/H4", h34),
        (6, "lie rings L1/L2", lie_rings),
        (7, "metacyclic", metacyclic),
        (8, "P_k quotients", pk_family),
        (9, "nonsplit extension", nonsplit),
        (10, "formula suites", formulas),
        (11, "lazard suite", lazard),
        (12, "potent example", potent),
        (13, "socle reduction", socle_equivalence),
    ];
    let wanted: Vec<u32> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let mut failed = 0;
    for (id, name, run) in criteria {
        if !wanted.is_empty() && !wanted.contains(&id) {
            continue;
        }
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|e| {
            let msg = e.downcast_ref::<String>().cloned().or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()));
            Err(format!("panicked: {}", msg.unwrap_or_default()))
        });
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {id:>2} pass  {name}: {detail} [{secs:.1}s]"),
            Err(why) => {
                failed += 1;
                println!("criterion {id:>2} FAIL  {name}: {why} [{secs:.1}s]");
            }
        }
    }
    if failed > 0 {
        ExitCode::FAILURE
    } else {
        ExitCode::SUCCESS
    }
}
