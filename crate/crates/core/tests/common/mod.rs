//! Helpers shared by the integration tests. Everything here is written
//! against the public API only and serves as an independent check.
#![allow(dead_code)]

use cbvtc_core::semantics::{eval_closed, sample_function_expr, SampleFn, SemType, Value};
use cbvtc_core::subst::Subst;
use cbvtc_core::{MonoExpr, Signature, SimpleType, Term, TermGenerator, Trs, Var};
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

/// Random expression of the given shape. `env` lists variables in scope.
pub fn gen_expr(rng: &mut ChaCha8Rng, shape: &SemType, env: &mut Vec<(String, SemType)>, depth: usize) -> MonoExpr {
    match shape {
        SemType::Unit => MonoExpr::Unit,
        SemType::Tuple(ts) => MonoExpr::Tuple(ts.iter().map(|t| gen_expr(rng, t, env, depth)).collect()),
        SemType::Fun(dom, cod) => {
            let x = format!("v{}", env.len());
            env.push((x.clone(), dom.as_ref().clone()));
            let body = gen_expr(rng, cod, env, depth);
            env.pop();
            MonoExpr::lam(x, body)
        }
        SemType::Nat => {
            let sources = nat_sources(env);
            let choice = if depth == 0 { rng.gen_range(0..2) } else { rng.gen_range(0..6) };
            match choice {
                0 => MonoExpr::Nat(rng.gen_range(0..4)),
                1 => match sources.choose(rng) {
                    Some(e) => e.clone(),
                    None => MonoExpr::Nat(rng.gen_range(0..4)),
                },
                2 => MonoExpr::add(gen_expr(rng, shape, env, depth - 1), gen_expr(rng, shape, env, depth - 1)),
                3 => MonoExpr::mul(gen_expr(rng, shape, env, depth - 1), gen_expr(rng, shape, env, depth - 1)),
                4 => MonoExpr::max(gen_expr(rng, shape, env, depth - 1), gen_expr(rng, shape, env, depth - 1)),
                _ => {
                    let funs = fun_sources(env);
                    match funs.choose(rng) {
                        Some((f, dom)) => {
                            let arg = gen_expr(rng, dom, env, depth - 1);
                            first_nat(MonoExpr::app(f.clone(), arg), &result_shape(env, f))
                                .unwrap_or(MonoExpr::Nat(1))
                        }
                        None => MonoExpr::Nat(rng.gen_range(0..4)),
                    }
                }
            }
        }
    }
}

fn result_shape(env: &[(String, SemType)], f: &MonoExpr) -> SemType {
    let mut scratch = env.to_vec();
    match f.infer(&mut scratch) {
        Ok(SemType::Fun(_, cod)) => *cod,
        _ => SemType::Unit,
    }
}

/// Paths to natural-number leaves of a tuple-shaped expression.
fn nat_leaves(e: MonoExpr, shape: &SemType, out: &mut Vec<MonoExpr>) {
    match shape {
        SemType::Nat => out.push(e),
        SemType::Tuple(ts) => {
            for (i, t) in ts.iter().enumerate() {
                nat_leaves(MonoExpr::proj(e.clone(), i + 1), t, out);
            }
        }
        _ => {}
    }
}

fn first_nat(e: MonoExpr, shape: &SemType) -> Option<MonoExpr> {
    let mut out = Vec::new();
    nat_leaves(e, shape, &mut out);
    out.into_iter().next()
}

fn nat_sources(env: &[(String, SemType)]) -> Vec<MonoExpr> {
    let mut out = Vec::new();
    for (x, s) in env {
        nat_leaves(MonoExpr::var(x.clone()), s, &mut out);
    }
    out
}

/// Function-shaped variables and components, with their domain shapes.
fn fun_sources(env: &[(String, SemType)]) -> Vec<(MonoExpr, SemType)> {
    fn go(e: MonoExpr, s: &SemType, out: &mut Vec<(MonoExpr, SemType)>) {
        match s {
            SemType::Fun(dom, _) => out.push((e, dom.as_ref().clone())),
            SemType::Tuple(ts) => {
                for (i, t) in ts.iter().enumerate() {
                    go(MonoExpr::proj(e.clone(), i + 1), t, out);
                }
            }
            _ => {}
        }
    }
    let mut out = Vec::new();
    for (x, s) in env {
        go(MonoExpr::var(x.clone()), s, &mut out);
    }
    out
}

/// Pairs `(a, b)` of values of `shape` with `a <= b` pointwise.
pub fn ordered_pairs(shape: &SemType) -> Vec<(Value<u64>, Value<u64>)> {
    match shape {
        SemType::Unit => vec![(Value::Unit, Value::Unit)],
        SemType::Nat => {
            let mut out = Vec::new();
            for a in [0u64, 1, 3] {
                for d in [0u64, 1, 2] {
                    out.push((Value::nat(a), Value::nat(a + d)));
                }
            }
            out
        }
        SemType::Tuple(ts) => {
            let parts: Vec<_> = ts.iter().map(ordered_pairs).collect();
            let n = parts.iter().map(Vec::len).max().unwrap_or(1);
            (0..n)
                .map(|i| {
                    let (a, b): (Vec<_>, Vec<_>) = parts.iter().map(|p| p[i % p.len()].clone()).unzip();
                    (Value::Tuple(a), Value::Tuple(b))
                })
                .collect()
        }
        SemType::Fun(dom, cod) => {
            let f = |g| eval_closed::<u64>(&sample_function_expr(g, dom, cod)).unwrap();
            use SampleFn::*;
            [(Zero, Zero), (Zero, Identity), (Identity, Successor), (Identity, Doubling), (Zero, Doubling)]
                .into_iter()
                .map(|(a, b)| (f(a), f(b)))
                .collect()
        }
    }
}

/// `a <= b`: exact on numbers, pointwise on the sampled arguments for functions.
pub fn le(a: &Value<u64>, b: &Value<u64>, shape: &SemType) -> bool {
    match (shape, a, b) {
        (SemType::Unit, _, _) => true,
        (SemType::Nat, Value::Nat(x), Value::Nat(y)) => x <= y,
        (SemType::Tuple(ts), Value::Tuple(xs), Value::Tuple(ys)) => {
            ts.iter().zip(xs.iter().zip(ys)).all(|(t, (x, y))| le(x, y, t))
        }
        (SemType::Fun(dom, cod), _, _) => ordered_pairs(dom).into_iter().all(|(p, q)| {
            [p, q]
                .into_iter()
                .all(|arg| le(&a.apply(arg.clone()).unwrap(), &b.apply(arg).unwrap(), cod))
        }),
        _ => panic!("shape mismatch: {a} vs {b} at {shape}"),
    }
}

/// Checks that `v` is monotone in every function argument, recursively.
/// Returns a description of the first counterexample.
pub fn monotone(v: &Value<u64>, shape: &SemType) -> Result<usize, String> {
    match (shape, v) {
        (SemType::Fun(dom, cod), _) => {
            let mut checked = 0;
            for (a, b) in ordered_pairs(dom) {
                let fa = v.apply(a.clone()).unwrap();
                let fb = v.apply(b.clone()).unwrap();
                if !le(&fa, &fb, cod) {
                    return Err(format!("f({a}) = {fa} exceeds f({b}) = {fb}"));
                }
                checked += 1 + monotone(&fa, cod)?;
            }
            Ok(checked)
        }
        (SemType::Tuple(ts), Value::Tuple(xs)) => {
            ts.iter().zip(xs).try_fold(0, |acc, (t, x)| Ok(acc + monotone(x, t)?))
        }
        _ => Ok(0),
    }
}

/// Replaces closed subterms of type `ty` by `x`, each with probability one
/// half. Abstractions are left alone.
pub fn abstract_occurrences(rng: &mut ChaCha8Rng, t: &Term, sig: &Signature, ty: &SimpleType, x: &Var) -> Term {
    if t.is_closed() && t.type_in(sig).ok().as_ref() == Some(ty) && rng.gen_bool(0.5) {
        return Term::Var(x.clone());
    }
    match t {
        Term::App(f, a) => Term::app(
            abstract_occurrences(rng, f, sig, ty, x),
            abstract_occurrences(rng, a, sig, ty, x),
        ),
        _ => t.clone(),
    }
}

/// Beta redexes `(\x. s) v` with `v` a value, built from generated terms.
pub fn beta_redexes(trs: &Trs, seed: u64, count: usize) -> Vec<(Var, Term, Term)> {
    let sig = trs.signature();
    let mut g = TermGenerator::new(trs, seed);
    let mut rng: ChaCha8Rng = rand::SeedableRng::seed_from_u64(seed);
    let mut out = Vec::new();
    let mut tries = 0;
    while out.len() < count && tries < count * 50 {
        tries += 1;
        let Some(v) = g.term(5) else { continue };
        let Ok(v) = cbvtc_core::normalize(&v, trs, cbvtc_core::Fuel::default()) else { continue };
        let v = v.term;
        let ty = v.type_in(sig).unwrap();
        let Some(body) = g.term(9) else { continue };
        let x = Var::new("z", ty.clone());
        let s = abstract_occurrences(&mut rng, &body, sig, &ty, &x);
        out.push((x, s, v));
    }
    out
}

pub fn subst_one(x: &Var, v: &Term) -> Subst {
    std::iter::once((x.clone(), v.clone())).collect()
}
