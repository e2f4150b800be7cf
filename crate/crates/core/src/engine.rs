//! The weak call-by-value rewrite relation, normalization and derivation height.
//!
//! Rule and beta redexes only fire when every argument is a value, and
//! reduction never happens under an abstraction. Reduction is otherwise
//! nondeterministic: both sides of an application may step.

use std::collections::{HashMap, HashSet};
use std::fmt;

use thiserror::Error;

use crate::subst::{apply, Canonical, Subst};
use crate::term::Term;
use crate::trs::{Rule, Trs};

/// Resource limits for normalization and derivation-height search.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Fuel {
    /// Longest reduction sequence followed.
    pub max_steps: u64,
    /// Most distinct terms (up to alpha) explored by the height search.
    pub max_breadth: usize,
}

impl Default for Fuel {
    fn default() -> Self {
        Fuel {
            max_steps: 100_000,
            max_breadth: 10_000,
        }
    }
}

impl Fuel {
    pub fn new(max_steps: u64, max_breadth: usize) -> Result<Self, EngineError> {
        if max_steps == 0 || max_breadth == 0 {
            return Err(EngineError::InvalidFuel);
        }
        Ok(Fuel {
            max_steps,
            max_breadth,
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FuelLimit {
    Steps,
    Breadth,
    /// A term was reached again from itself.
    Cycle,
}

impl fmt::Display for FuelLimit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FuelLimit::Steps => "step limit reached",
            FuelLimit::Breadth => "breadth limit reached",
            FuelLimit::Cycle => "reduction cycle detected",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum EngineError {
    #[error("fuel exhausted after {steps} steps ({limit}) at `{partial}`")]
    FuelExhausted {
        partial: Term,
        steps: u64,
        limit: FuelLimit,
    },
    #[error("fuel limits must be positive")]
    InvalidFuel,
}

/// Which side of an application a position descends into.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Dir {
    Fun,
    Arg,
}

/// Path from the root to a redex.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Position(pub Vec<Dir>);

impl fmt::Display for Position {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("ε");
        }
        for (i, d) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(".")?;
            }
            f.write_str(match d {
                Dir::Fun => "1",
                Dir::Arg => "2",
            })?;
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum StepKind {
    /// Index of the rule in file order.
    Rule(usize),
    Beta,
}

impl fmt::Display for StepKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StepKind::Rule(i) => write!(f, "rule #{}", i + 1),
            StepKind::Beta => f.write_str("beta"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Reduct {
    pub term: Term,
    pub position: Position,
    pub kind: StepKind,
}

/// All one-step reducts of a term.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct StepResult {
    pub reducts: Vec<Reduct>,
}

impl StepResult {
    pub fn is_empty(&self) -> bool {
        self.reducts.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = &Term> {
        self.reducts.iter().map(|r| &r.term)
    }
}

/// Matches a left-linear constructor-pattern rule against the whole of `t`.
pub fn match_rule(rule: &Rule, t: &Term) -> Option<Subst> {
    let (lhead, pats) = rule.lhs.spine();
    let (thead, args) = t.spine();
    match (lhead, thead) {
        (Term::Sym(f), Term::Sym(g)) if f == g && pats.len() == args.len() => {}
        _ => return None,
    }
    let mut subst = Subst::new();
    for (p, a) in pats.into_iter().zip(args) {
        match_pattern(p, a, &mut subst)?;
    }
    Some(subst)
}

fn match_pattern(p: &Term, t: &Term, subst: &mut Subst) -> Option<()> {
    if let Term::Var(v) = p {
        subst.insert(v.clone(), t.clone());
        return Some(());
    }
    let (phead, pargs) = p.spine();
    let (thead, targs) = t.spine();
    match (phead, thead) {
        (Term::Sym(c), Term::Sym(d)) if c == d && pargs.len() == targs.len() => {
            for (p, a) in pargs.into_iter().zip(targs) {
                match_pattern(p, a, subst)?;
            }
            Some(())
        }
        _ => None,
    }
}

/// Reducts obtained by contracting `t` itself.
fn root_reducts(t: &Term, trs: &Trs, first_only: bool) -> Vec<(Term, StepKind)> {
    let mut out = Vec::new();
    if let Term::App(f, a) = t {
        if let Term::Lam(x, body) = f.as_ref() {
            if trs.is_value(a) {
                let s: Subst = [(x.clone(), a.as_ref().clone())].into_iter().collect();
                out.push((apply(body, &s), StepKind::Beta));
            }
            return out;
        }
    }
    let (head, args) = t.spine();
    let Term::Sym(f) = head else { return out };
    if !trs.is_defined(f) || !args.iter().all(|a| trs.is_value(a)) {
        return out;
    }
    for (i, rule) in trs.rules_for(f) {
        if rule.arity() != args.len() {
            continue;
        }
        if let Some(g) = match_rule(rule, t) {
            out.push((apply(&rule.rhs, &g), StepKind::Rule(i)));
            if first_only {
                break;
            }
        }
    }
    out
}

/// Every one-step reduct of `t`.
pub fn step(t: &Term, trs: &Trs) -> StepResult {
    fn go(t: &Term, trs: &Trs, path: &mut Vec<Dir>, out: &mut Vec<Reduct>) {
        for (term, kind) in root_reducts(t, trs, false) {
            out.push(Reduct {
                term,
                position: Position(path.clone()),
                kind,
            });
        }
        if let Term::App(f, a) = t {
            let mut sub = Vec::new();
            path.push(Dir::Fun);
            go(f, trs, path, &mut sub);
            path.pop();
            out.extend(sub.drain(..).map(|r| Reduct {
                term: Term::app(r.term, a.as_ref().clone()),
                ..r
            }));
            path.push(Dir::Arg);
            go(a, trs, path, &mut sub);
            path.pop();
            out.extend(sub.into_iter().map(|r| Reduct {
                term: Term::app(f.as_ref().clone(), r.term),
                ..r
            }));
        }
    }
    let mut reducts = Vec::new();
    go(t, trs, &mut Vec::new(), &mut reducts);
    StepResult { reducts }
}

/// One leftmost-innermost step; on overlapping rules the first in file order wins.
pub fn step_leftmost(t: &Term, trs: &Trs) -> Option<(Term, StepKind)> {
    if let Term::App(f, a) = t {
        if let Some((f2, k)) = step_leftmost(f, trs) {
            return Some((Term::app(f2, a.as_ref().clone()), k));
        }
        if let Some((a2, k)) = step_leftmost(a, trs) {
            return Some((Term::app(f.as_ref().clone(), a2), k));
        }
    }
    root_reducts(t, trs, true).into_iter().next()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Normalized {
    pub term: Term,
    pub steps: u64,
}

/// Rewrites with the leftmost-innermost strategy until no step applies.
pub fn normalize(t: &Term, trs: &Trs, fuel: Fuel) -> Result<Normalized, EngineError> {
    let mut cur = t.clone();
    let mut steps = 0;
    while let Some((next, _)) = step_leftmost(&cur, trs) {
        if steps >= fuel.max_steps {
            return Err(EngineError::FuelExhausted {
                partial: cur,
                steps,
                limit: FuelLimit::Steps,
            });
        }
        cur = next;
        steps += 1;
    }
    Ok(Normalized { term: cur, steps })
}

/// The sequence of terms visited by [`normalize`], starting with `t`.
pub fn normalize_trace(t: &Term, trs: &Trs, fuel: Fuel) -> Result<Vec<Term>, EngineError> {
    let mut trace = vec![t.clone()];
    while let Some((next, _)) = step_leftmost(trace.last().unwrap(), trs) {
        if trace.len() as u64 > fuel.max_steps {
            return Err(EngineError::FuelExhausted {
                partial: trace.pop().unwrap(),
                steps: fuel.max_steps,
                limit: FuelLimit::Steps,
            });
        }
        trace.push(next);
    }
    Ok(trace)
}

struct Frame {
    key: Canonical,
    succs: Vec<(Canonical, Term)>,
    next: usize,
    best: u64,
}

fn successors(t: &Term, trs: &Trs) -> Vec<(Canonical, Term)> {
    let mut seen = HashSet::new();
    step(t, trs)
        .reducts
        .into_iter()
        .filter_map(|r| {
            let key = Canonical::of(&r.term);
            seen.insert(key.clone()).then_some((key, r.term))
        })
        .collect()
}

/// Length of the longest reduction sequence from `t`, by exhaustive
/// depth-first search memoized on alpha-equivalence classes.
pub fn derivation_height(t: &Term, trs: &Trs, fuel: Fuel) -> Result<u64, EngineError> {
    let mut memo: HashMap<Canonical, u64> = HashMap::new();
    let mut active: HashSet<Canonical> = HashSet::new();
    let root_key = Canonical::of(t);
    active.insert(root_key.clone());
    let mut stack = vec![Frame {
        succs: successors(t, trs),
        key: root_key,
        next: 0,
        best: 0,
    }];
    loop {
        let depth = stack.len() as u64;
        let top = stack.last_mut().expect("stack is never empty here");
        if top.next < top.succs.len() {
            let (key, term) = top.succs[top.next].clone();
            top.next += 1;
            if let Some(&h) = memo.get(&key) {
                top.best = top.best.max(h + 1);
                continue;
            }
            let limit = if active.contains(&key) {
                Some(FuelLimit::Cycle)
            } else if depth >= fuel.max_steps {
                Some(FuelLimit::Steps)
            } else if memo.len() + stack.len() >= fuel.max_breadth {
                Some(FuelLimit::Breadth)
            } else {
                None
            };
            if let Some(limit) = limit {
                return Err(EngineError::FuelExhausted {
                    partial: term,
                    steps: depth,
                    limit,
                });
            }
            active.insert(key.clone());
            let succs = successors(&term, trs);
            stack.push(Frame {
                key,
                succs,
                next: 0,
                best: 0,
            });
        } else {
            let done = stack.pop().expect("non-empty");
            active.remove(&done.key);
            memo.insert(done.key, done.best);
            match stack.last_mut() {
                Some(parent) => parent.best = parent.best.max(done.best + 1),
                None => return Ok(done.best),
            }
        }
    }
}
