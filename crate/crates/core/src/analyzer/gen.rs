use std::collections::{BTreeMap, BTreeSet};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::term::{Term, Var};
use crate::trs::Trs;
use crate::types::SimpleType;

#[derive(Clone, Debug)]
enum Candidate {
    /// A symbol applied to arguments of the listed types.
    Symbol(String, Vec<SimpleType>),
    Identity,
    /// `\x. t` with `t` ground.
    Constant,
    /// `\x. g (... (g x))` with `n` copies of `g`.
    Compose(String, usize),
}

/// Seeded generator of closed, well-typed terms. Function arguments are
/// partial applications or drawn from a small library of abstractions:
/// identity, constant, and iterated unary symbols such as `\x. s (s x)`.
pub struct TermGenerator {
    rng: ChaCha8Rng,
    candidates: BTreeMap<SimpleType, Vec<(Candidate, usize)>>,
}

fn candidates_for(trs: &Trs, ty: &SimpleType) -> Vec<Candidate> {
    let mut out = Vec::new();
    for (f, fty) in trs.signature().symbols() {
        let mut args = Vec::new();
        let mut cur = fty;
        loop {
            if cur == ty {
                out.push(Candidate::Symbol(f.to_string(), args.clone()));
            }
            match cur {
                SimpleType::Arrow(d, c) => {
                    args.push(d.as_ref().clone());
                    cur = c;
                }
                SimpleType::Base(_) => break,
            }
        }
    }
    if let SimpleType::Arrow(d, c) = ty {
        out.push(Candidate::Constant);
        if d == c {
            out.push(Candidate::Identity);
            let endo = SimpleType::arrow(c.as_ref().clone(), c.as_ref().clone());
            for (g, gty) in trs.signature().symbols() {
                if *gty == endo {
                    out.push(Candidate::Compose(g.to_string(), 1));
                    out.push(Candidate::Compose(g.to_string(), 2));
                }
            }
        }
    }
    out
}

impl TermGenerator {
    pub fn new(trs: &Trs, seed: u64) -> Self {
        let mut types = BTreeSet::new();
        let mut todo: Vec<SimpleType> = trs.signature().symbols().map(|(_, t)| t.clone()).collect();
        while let Some(t) = todo.pop() {
            if !types.insert(t.clone()) {
                continue;
            }
            if let SimpleType::Arrow(d, c) = &t {
                todo.push(d.as_ref().clone());
                todo.push(c.as_ref().clone());
            }
        }
        let raw: BTreeMap<SimpleType, Vec<Candidate>> = types
            .iter()
            .map(|t| (t.clone(), candidates_for(trs, t)))
            .collect();
        // Smallest term size per type, by fixpoint iteration.
        let mut min: BTreeMap<SimpleType, usize> = BTreeMap::new();
        let cost = |c: &Candidate, ty: &SimpleType, min: &BTreeMap<SimpleType, usize>| -> Option<usize> {
            match c {
                Candidate::Symbol(_, args) => args
                    .iter()
                    .try_fold(1usize, |acc, a| min.get(a).map(|m| acc + m)),
                Candidate::Identity => Some(2),
                Candidate::Constant => match ty {
                    SimpleType::Arrow(_, c) => min.get(c.as_ref()).map(|m| m + 1),
                    SimpleType::Base(_) => None,
                },
                Candidate::Compose(_, n) => Some(2 + n),
            }
        };
        loop {
            let mut changed = false;
            for (ty, cands) in &raw {
                let best = cands.iter().filter_map(|c| cost(c, ty, &min)).min();
                if let Some(b) = best {
                    if min.get(ty).is_none_or(|&m| b < m) {
                        min.insert(ty.clone(), b);
                        changed = true;
                    }
                }
            }
            if !changed {
                break;
            }
        }
        let candidates = raw
            .iter()
            .map(|(ty, cands)| {
                let usable = cands
                    .iter()
                    .filter_map(|c| cost(c, ty, &min).map(|m| (c.clone(), m)))
                    .collect();
                (ty.clone(), usable)
            })
            .collect();
        TermGenerator {
            rng: ChaCha8Rng::seed_from_u64(seed),
            candidates,
        }
    }

    /// Size of the smallest closed term of type `ty` the generator can build.
    pub fn min_size(&self, ty: &SimpleType) -> Option<usize> {
        self.candidates.get(ty)?.iter().map(|(_, m)| *m).min()
    }

    /// A closed term of type `ty` with size at most `budget`, if one exists.
    pub fn term_of_type(&mut self, ty: &SimpleType, budget: usize) -> Option<Term> {
        let fitting: Vec<(Candidate, usize)> = self
            .candidates
            .get(ty)?
            .iter()
            .filter(|(_, m)| *m <= budget)
            .cloned()
            .collect();
        let (choice, _) = fitting.choose(&mut self.rng)?.clone();
        let var = |ty: &SimpleType| match ty {
            SimpleType::Arrow(d, _) => Var::new("x", d.as_ref().clone()),
            SimpleType::Base(_) => unreachable!("abstractions only at arrow types"),
        };
        Some(match choice {
            Candidate::Symbol(f, args) => {
                let mins: Vec<usize> = args.iter().map(|a| self.min_size(a).expect("usable")).collect();
                let mut remaining = budget - 1;
                let mut built = Vec::new();
                for (i, a) in args.iter().enumerate() {
                    let rest: usize = mins[i + 1..].iter().sum();
                    let available = remaining - rest;
                    let b = self.rng.gen_range(mins[i]..=available);
                    let t = self.term_of_type(a, b).expect("budget covers the minimum");
                    remaining -= t.size();
                    built.push(t);
                }
                Term::apps(Term::sym(f), built)
            }
            Candidate::Identity => {
                let x = var(ty);
                Term::lam(x.clone(), Term::Var(x))
            }
            Candidate::Constant => {
                let SimpleType::Arrow(_, c) = ty else { unreachable!() };
                let body = self.term_of_type(c, budget - 1).expect("budget covers the minimum");
                Term::lam(var(ty), body)
            }
            Candidate::Compose(g, n) => {
                let x = var(ty);
                let body = (0..n).fold(Term::Var(x.clone()), |acc, _| Term::app(Term::sym(&g), acc));
                Term::lam(x, body)
            }
        })
    }

    /// A closed term of size at most `budget`: of a base type three times
    /// out of four, otherwise of some arrow type. Small leaves are common
    /// in a uniform choice, so the largest of a few draws is kept.
    pub fn term(&mut self, budget: usize) -> Option<Term> {
        let mut best: Option<Term> = None;
        for _ in 0..4 {
            let t = self.draw(budget)?;
            if best.as_ref().is_none_or(|b| t.size() > b.size()) {
                best = Some(t);
            }
        }
        best
    }

    fn draw(&mut self, budget: usize) -> Option<Term> {
        let (base, arrow): (Vec<SimpleType>, Vec<SimpleType>) = self
            .candidates
            .keys()
            .filter(|t| self.min_size(t).is_some_and(|m| m <= budget))
            .cloned()
            .partition(SimpleType::is_base);
        let pool = if arrow.is_empty() || (!base.is_empty() && self.rng.gen_bool(0.75)) {
            base
        } else {
            arrow
        };
        let ty = pool.choose(&mut self.rng)?.clone();
        self.term_of_type(&ty, budget)
    }

    /// `count` terms of size at most `budget`.
    pub fn terms(&mut self, budget: usize, count: usize) -> Vec<Term> {
        (0..count).filter_map(|_| self.term(budget)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bundled::map_system;

    #[test]
    fn generated_terms_are_closed_well_typed_and_small() {
        let trs = map_system();
        let mut g = TermGenerator::new(&trs, 7);
        let terms = g.terms(12, 300);
        assert_eq!(terms.len(), 300);
        for t in &terms {
            assert!(t.is_closed(), "{t}");
            assert!(t.size() <= 12, "{t}");
            t.type_in(trs.signature()).unwrap();
        }
        assert!(terms.iter().any(|t| t.to_string().starts_with("map")));
        assert!(terms.iter().any(|t| t.to_string().contains('\\')));
    }

    #[test]
    fn seeds_are_reproducible() {
        let trs = map_system();
        let a = TermGenerator::new(&trs, 42).terms(10, 50);
        let b = TermGenerator::new(&trs, 42).terms(10, 50);
        assert_eq!(a, b);
        assert_eq!(TermGenerator::new(&trs, 1).min_size(&SimpleType::base("list")), Some(1));
    }
}
