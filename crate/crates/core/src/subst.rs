//! Capture-avoiding substitution and alpha-equivalence.

use std::collections::{BTreeMap, BTreeSet};

use crate::error::TermError;
use crate::term::{Term, Var};
use crate::types::{Signature, SimpleType};

/// A simultaneous substitution from typed variables to terms.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Subst(BTreeMap<Var, Term>);

impl Subst {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, v: Var, t: Term) -> Option<Term> {
        self.0.insert(v, t)
    }

    pub fn get(&self, v: &Var) -> Option<&Term> {
        self.0.get(v)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Var, &Term)> {
        self.0.iter()
    }

    /// Checks every binding against its variable's type.
    pub fn check(&self, sig: &Signature) -> Result<(), TermError> {
        for (v, t) in &self.0 {
            let ty = t.type_in(sig)?;
            if ty != v.ty {
                return Err(TermError::TypeMismatch {
                    context: format!("substitution for `{}`", v.name),
                    expected: v.ty.clone(),
                    found: ty,
                });
            }
        }
        Ok(())
    }
}

impl FromIterator<(Var, Term)> for Subst {
    fn from_iter<I: IntoIterator<Item = (Var, Term)>>(iter: I) -> Self {
        Subst(iter.into_iter().collect())
    }
}

/// Type-checked capture-avoiding substitution.
pub fn substitute(t: &Term, subst: &Subst, sig: &Signature) -> Result<Term, TermError> {
    subst.check(sig)?;
    Ok(apply(t, subst))
}

/// Capture-avoiding substitution without checking the bindings' types.
pub fn apply(t: &Term, subst: &Subst) -> Term {
    if subst.is_empty() {
        return t.clone();
    }
    match t {
        Term::Var(v) => subst.get(v).cloned().unwrap_or_else(|| t.clone()),
        Term::Sym(_) => t.clone(),
        Term::App(f, a) => Term::app(apply(f, subst), apply(a, subst)),
        Term::Lam(x, body) => {
            let body_fv = body.free_vars();
            let mut inner: Subst = subst
                .iter()
                .filter(|(v, _)| *v != x && body_fv.contains(*v))
                .map(|(v, t)| (v.clone(), t.clone()))
                .collect();
            if inner.is_empty() {
                return t.clone();
            }
            let range_names: BTreeSet<String> = inner
                .iter()
                .flat_map(|(_, t)| t.free_vars())
                .map(|v| v.name)
                .collect();
            if !range_names.contains(&x.name) {
                return Term::lam(x.clone(), apply(body, &inner));
            }
            let mut avoid = range_names;
            avoid.extend(body_fv.into_iter().map(|v| v.name));
            let fresh = Var::new(fresh_name(&x.name, &avoid), x.ty.clone());
            inner.insert(x.clone(), Term::Var(fresh.clone()));
            Term::lam(fresh, apply(body, &inner))
        }
    }
}

/// `base'`, `base''`, ... until the name is not in `avoid`.
pub fn fresh_name(base: &str, avoid: &BTreeSet<String>) -> String {
    let mut name = format!("{base}'");
    while avoid.contains(&name) {
        name.push('\'');
    }
    name
}

/// Equality up to renaming of bound variables.
pub fn alpha_eq(a: &Term, b: &Term) -> bool {
    fn go<'a>(a: &'a Term, b: &'a Term, env: &mut Vec<(&'a Var, &'a Var)>) -> bool {
        match (a, b) {
            (Term::Var(x), Term::Var(y)) => {
                let bx = env.iter().rposition(|(l, _)| *l == x);
                let by = env.iter().rposition(|(_, r)| *r == y);
                match (bx, by) {
                    (Some(i), Some(j)) => i == j,
                    (None, None) => x == y,
                    _ => false,
                }
            }
            (Term::Sym(f), Term::Sym(g)) => f == g,
            (Term::App(f1, a1), Term::App(f2, a2)) => go(f1, f2, env) && go(a1, a2, env),
            (Term::Lam(x, s), Term::Lam(y, t)) => {
                if x.ty != y.ty {
                    return false;
                }
                env.push((x, y));
                let r = go(s, t, env);
                env.pop();
                r
            }
            _ => false,
        }
    }
    go(a, b, &mut Vec::new())
}

/// A de Bruijn representative of a term's alpha-equivalence class.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Canonical {
    Bound(usize),
    Free(Var),
    Sym(String),
    App(Box<Canonical>, Box<Canonical>),
    Lam(SimpleType, Box<Canonical>),
}

impl Canonical {
    pub fn of(t: &Term) -> Self {
        fn go<'a>(t: &'a Term, env: &mut Vec<&'a Var>) -> Canonical {
            match t {
                Term::Var(v) => match env.iter().rposition(|b| *b == v) {
                    Some(i) => Canonical::Bound(env.len() - 1 - i),
                    None => Canonical::Free(v.clone()),
                },
                Term::Sym(f) => Canonical::Sym(f.clone()),
                Term::App(f, a) => Canonical::App(Box::new(go(f, env)), Box::new(go(a, env))),
                Term::Lam(x, b) => {
                    env.push(x);
                    let body = go(b, env);
                    env.pop();
                    Canonical::Lam(x.ty.clone(), Box::new(body))
                }
            }
        }
        go(t, &mut Vec::new())
    }
}
