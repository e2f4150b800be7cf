//! Acceptance criteria, one PASS/FAIL line each. Runs without the libtest
//! harness so the report is always visible.

mod common;

use std::process::ExitCode;

use cbvtc_core::bundled::{add_interpretation, add_system, map_interpretation, map_system, ADD_CSINT};
use cbvtc_core::engine::{normalize_trace, step};
use cbvtc_core::parse::{pretty_interpretation, pretty_trs};
use cbvtc_core::semantics::{interpret_term, type_interpretation, Interpretation, Valuation, Value};
use cbvtc_core::subst::{alpha_eq, substitute};
use cbvtc_core::{
    bound_vs_actual, derivation_height, extract_bound, parse_expr, parse_interpretation, parse_term, parse_trs,
    verify_rules, Fuel, Grid, Rule, Term, TermGenerator, Trs,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Check = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn ground(trs: &Trs, interp: &Interpretation<u64>, src: &str) -> Result<cbvtc_core::semantics::CsTuple<u64>, String> {
    let t = parse_term(trs.signature(), src).map_err(|e| e.to_string())?;
    interpret_term(&t, interp, &Valuation::new()).map_err(|e| e.to_string())
}

fn criterion_1() -> Check {
    let v = ground(&add_system(), &add_interpretation(), "3")?;
    let expected_size = Value::nat(4);
    ensure(
        v.cost == 0 && v.cost_fn.same(&Value::Unit) && v.size.same(&expected_size),
        || format!("got {v}"),
    )?;
    Ok(format!("⟦3⟧ = {v}"))
}

fn criterion_2() -> Check {
    let v = ground(&map_system(), &map_interpretation(), "[1; 7; 9]")?;
    let expected = Value::pair(Value::nat(3), Value::nat(10));
    ensure(
        v.cost == 0 && v.cost_fn.same(&Value::Unit) && v.size.same(&expected),
        || format!("got {v}"),
    )?;
    Ok(format!("⟦[1; 7; 9]⟧ = {v}"))
}

fn criterion_3() -> Check {
    let v = ground(&add_system(), &add_interpretation(), "add (add 2 3)")?;
    ensure(v.cost == 4, || format!("cost number {}", v.cost))?;
    for m in 0..=20u64 {
        let got = v.size.apply(Value::nat(m)).map_err(|e| e.to_string())?;
        ensure(got.same(&Value::nat(7 + m)), || format!("size({m}) = {got}"))?;
    }
    Ok(format!("⟦add (add 2 3)⟧ = {v}; size(m) = 7 + m for m in 0..=20"))
}

fn criterion_4() -> Check {
    let trs = add_system();
    let interp = add_interpretation::<u64>();
    let t1 = parse_term(trs.signature(), "add (add 2 3)").unwrap();
    let t2 = parse_term(trs.signature(), "add 0 (add 0 0)").unwrap();
    let d1 = derivation_height(&t1, &trs, Fuel::default()).map_err(|e| e.to_string())?;
    let d2 = derivation_height(&t2, &trs, Fuel::default()).map_err(|e| e.to_string())?;
    let b2 = extract_bound(&t2, &interp).map_err(|e| e.to_string())?;
    ensure(d1 == 4, || format!("dh(add (add 2 3)) = {d1}"))?;
    ensure(d2 == 2 && b2 == 3, || format!("dh(add 0 (add 0 0)) = {d2}, bound {b2}"))?;
    Ok(format!("dh = {d1}; dh = {d2} with bound {b2}"))
}

fn criterion_5() -> Check {
    let grid = Grid::default();
    let add = verify_rules(&add_system(), &add_interpretation::<u64>(), &grid).map_err(|e| e.to_string())?;
    let map = verify_rules(&map_system(), &map_interpretation::<u64>(), &grid).map_err(|e| e.to_string())?;
    ensure(add.all_ok(), || add.to_table())?;
    ensure(map.all_ok(), || map.to_table())?;
    let trs = add_system();
    let mutated = ADD_CSINT.replace("\\y. (y.2, u)", "\\y. (0, u)");
    ensure(mutated != ADD_CSINT, || "mutation did not apply".into())?;
    let interp = parse_interpretation::<u64>(trs.signature(), &mutated).map_err(|e| e.to_string())?;
    let report = verify_rules(&trs, &interp, &grid).map_err(|e| e.to_string())?;
    let failed: Vec<_> = report.rules.iter().filter(|r| !r.holds).collect();
    ensure(!failed.is_empty(), || "mutated interpretation was accepted".into())?;
    ensure(
        failed.iter().all(|r| r.witness.is_some() && r.witness_valuation.is_some()),
        || "failure without witness".into(),
    )?;
    let points: usize = add.rules.iter().chain(&map.rules).map(|r| r.samples).sum();
    Ok(format!(
        "6 rules hold on {points} points; mutation fails rule {} {}",
        failed[0].index,
        failed[0].witness.as_deref().unwrap()
    ))
}

fn criterion_6() -> Check {
    let mut total = 0;
    let mut max_gap = 0u64;
    for (name, trs, interp, seed) in [
        ("add", add_system(), add_interpretation::<u64>(), 2024u64),
        ("map", map_system(), map_interpretation::<u64>(), 2025u64),
    ] {
        let terms = TermGenerator::new(&trs, seed).terms(12, 1000);
        ensure(terms.len() == 1000, || format!("{name}: only {} terms", terms.len()))?;
        ensure(terms.iter().all(|t| t.size() <= 12), || format!("{name}: oversized term"))?;
        let report = bound_vs_actual(&trs, &interp, &terms, Fuel::default());
        if let Some(bad) = report.terms.iter().find(|t| !t.ok) {
            return Err(format!("{name}: {bad:?}"));
        }
        for t in &report.terms {
            let dh = t.dh.unwrap();
            let bound: u64 = t.bound.as_ref().unwrap().parse().unwrap();
            // independent recomputation of the flag
            ensure(dh <= bound, || format!("{name}: {} has dh {dh} > {bound}", t.term))?;
            max_gap = max_gap.max(bound - dh);
        }
        total += report.terms.len();
    }
    Ok(format!("{total} terms, 0 violations, largest gap {max_gap}"))
}

fn subject_reduction(trs: &Trs, terms: &[Term]) -> Result<usize, String> {
    let sig = trs.signature();
    let mut checked = 0;
    for t in terms {
        let ty = t.type_in(sig).map_err(|e| format!("{t}: {e}"))?;
        let trace = normalize_trace(t, trs, Fuel::default()).map_err(|e| e.to_string())?;
        for pair in trace.windows(2) {
            ensure(
                step(&pair[0], trs).terms().any(|r| alpha_eq(r, &pair[1])),
                || format!("{} -> {} is not a step", pair[0], pair[1]),
            )?;
        }
        for s in &trace {
            for r in step(s, trs).terms() {
                let rty = r.type_in(sig).map_err(|e| format!("{s} -> {r}: {e}"))?;
                ensure(rty == ty, || format!("{s} -> {r} changes type"))?;
                checked += 1;
            }
        }
    }
    Ok(checked)
}

fn round_trips(rng: &mut ChaCha8Rng) -> Result<usize, String> {
    let mut count = 0;
    for (trs, seed) in [(add_system(), 1u64), (map_system(), 2)] {
        for t in TermGenerator::new(&trs, seed).terms(12, 200) {
            for text in [t.to_source(), t.to_string()] {
                match parse_term(trs.signature(), &text) {
                    Ok(back) => ensure(alpha_eq(&back, &t), || format!("{t} came back as {back}"))?,
                    // unannotated binders may be ambiguous; the annotated form must not be
                    Err(e) if text != t.to_source() => {
                        ensure(e.kind == cbvtc_core::parse::ParseErrorKind::Type, || e.to_string())?
                    }
                    Err(e) => return Err(format!("{text}: {e}")),
                }
            }
            count += 1;
        }
    }
    // systems: random subsets of the map rules
    let full = map_system();
    for _ in 0..50 {
        let rules: Vec<Rule> = full.rules().iter().filter(|_| rng.gen_bool(0.6)).cloned().collect();
        let trs = Trs::new(full.signature().clone(), rules).map_err(|e| e.to_string())?;
        let back = parse_trs(&pretty_trs(&trs)).map_err(|e| e.to_string())?;
        ensure(back.rules() == trs.rules(), || pretty_trs(&trs))?;
        count += 1;
    }
    // expressions and interpretations of random shape-correct expressions
    for (trs, base) in [(add_system(), add_interpretation::<u64>()), (map_system(), map_interpretation())] {
        let sig = trs.signature();
        for _ in 0..50 {
            let mut entries = Vec::new();
            for (f, ty) in sig.symbols() {
                let shape = type_interpretation(ty, base.key()).unwrap();
                let cost = common::gen_expr(rng, &shape.cost(), &mut Vec::new(), 2);
                let size = common::gen_expr(rng, &shape.size, &mut Vec::new(), 2);
                for e in [&cost, &size] {
                    let back = parse_expr(&e.to_string()).map_err(|err| format!("{e}: {err}"))?;
                    ensure(back.alpha_eq(e), || format!("{e} came back as {back}"))?;
                    count += 1;
                }
                entries.push((f.to_string(), cost, size));
            }
            let interp = Interpretation::<u64>::new(sig, base.key().clone(), entries).map_err(|e| e.to_string())?;
            let text = pretty_interpretation(&interp);
            let back = parse_interpretation::<u64>(sig, &text).map_err(|e| format!("{e}\n{text}"))?;
            for ((_, a), (_, b)) in interp.symbols().zip(back.symbols()) {
                ensure(a.cost.alpha_eq(&b.cost) && a.size.alpha_eq(&b.size), || text.clone())?;
            }
            count += 1;
        }
    }
    Ok(count)
}

fn criterion_7() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut notes = Vec::new();

    let mut reducts = 0;
    for (trs, seed) in [(add_system(), 11u64), (map_system(), 12)] {
        let terms = TermGenerator::new(&trs, seed).terms(10, 300);
        reducts += subject_reduction(&trs, &terms)?;
    }
    notes.push(format!("subject reduction on {reducts} reducts"));

    let artifacts = round_trips(&mut rng)?;
    ensure(artifacts >= 500, || format!("only {artifacts} round trips"))?;
    notes.push(format!("{artifacts} round trips"));

    let mut exprs = 0;
    let mut points = 0;
    for interp in [add_interpretation::<u64>(), map_interpretation()] {
        let trs = if interp.symbol("map").is_ok() { map_system() } else { add_system() };
        for (f, s) in interp.symbols() {
            let ty = trs.signature().symbol_type(f).unwrap();
            let shape = type_interpretation(ty, interp.key()).unwrap();
            let cost = cbvtc_core::semantics::eval_closed::<u64>(&s.cost).unwrap();
            let size = cbvtc_core::semantics::eval_closed::<u64>(&s.size).unwrap();
            points += common::monotone(&cost, &shape.cost()).map_err(|e| format!("{f} cost: {e}"))?;
            points += common::monotone(&size, &shape.size).map_err(|e| format!("{f} size: {e}"))?;
            exprs += 2;
        }
    }
    notes.push(format!("{exprs} bundled expressions monotone on {points} ordered pairs"));

    let trs = add_system();
    let interp = add_interpretation::<u64>();
    for n in 0..=50u64 {
        let v = ground(&trs, &interp, &n.to_string())?;
        ensure(v.size.same(&Value::nat(n + 1)), || format!("size of {n} is {}", v.size))?;
    }
    notes.push("numeral sizes n + 1 for n <= 50".into());

    let mut redexes = 0;
    for (trs, interp, seed) in [
        (add_system(), add_interpretation::<u64>(), 31u64),
        (map_system(), map_interpretation(), 32),
    ] {
        let sig = trs.signature();
        for (x, s, v) in common::beta_redexes(&trs, seed, 60) {
            let redex = Term::app(Term::lam(x.clone(), s.clone()), v.clone());
            ensure(trs.is_value(&v), || format!("{v} is not a value"))?;
            let vi = interpret_term(&v, &interp, &Valuation::new()).unwrap();
            ensure(vi.cost == 0, || format!("value {v} has cost {}", vi.cost))?;
            let contracted = substitute(&s, &common::subst_one(&x, &v), sig).unwrap();
            let lhs = interpret_term(&redex, &interp, &Valuation::new()).map_err(|e| e.to_string())?;
            let rhs = interpret_term(&contracted, &interp, &Valuation::new()).map_err(|e| e.to_string())?;
            ensure(lhs.cost == rhs.cost + 1, || {
                format!("{redex}: {} vs 1 + {}", lhs.cost, rhs.cost)
            })?;
            redexes += 1;
        }
    }
    ensure(redexes >= 100, || format!("only {redexes} redexes"))?;
    notes.push(format!("beta cost law on {redexes} redexes"));

    Ok(notes.join("; "))
}

type Criterion = (&'static str, fn() -> Check);

fn main() -> ExitCode {
    let criteria: [Criterion; 7] = [
        ("interpretation of 3", criterion_1),
        ("interpretation of [1; 7; 9]", criterion_2),
        ("interpretation of add (add 2 3)", criterion_3),
        ("derivation heights of the worked examples", criterion_4),
        ("rule verification for add and map, mutation rejected", criterion_5),
        ("soundness over 2000 generated terms", criterion_6),
        ("structural suites", criterion_7),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(detail) => println!("criterion {}: PASS  {name}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {}: FAIL  {name}: {why}", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
