//! Simply typed terms: variables, symbols, application and abstraction.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::error::TermError;
use crate::types::{Signature, SimpleType};

/// A typed variable. Variables with equal names but different types are distinct.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Var {
    pub name: String,
    pub ty: SimpleType,
}

impl Var {
    pub fn new(name: impl Into<String>, ty: SimpleType) -> Self {
        Var {
            name: name.into(),
            ty,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Term {
    Var(Var),
    Sym(String),
    App(Box<Term>, Box<Term>),
    Lam(Var, Box<Term>),
}

/// Typing context for free variables.
pub type Context = BTreeMap<String, SimpleType>;

impl Term {
    pub fn var(name: impl Into<String>, ty: SimpleType) -> Self {
        Term::Var(Var::new(name, ty))
    }

    pub fn sym(name: impl Into<String>) -> Self {
        Term::Sym(name.into())
    }

    pub fn app(f: Term, a: Term) -> Self {
        Term::App(Box::new(f), Box::new(a))
    }

    pub fn apps(head: Term, args: impl IntoIterator<Item = Term>) -> Self {
        args.into_iter().fold(head, Term::app)
    }

    pub fn lam(x: Var, body: Term) -> Self {
        Term::Lam(x, Box::new(body))
    }

    /// Splits `h a1 ... an` into its head and arguments.
    pub fn spine(&self) -> (&Term, Vec<&Term>) {
        let mut args = Vec::new();
        let mut cur = self;
        while let Term::App(f, a) = cur {
            args.push(a.as_ref());
            cur = f;
        }
        args.reverse();
        (cur, args)
    }

    /// The head symbol, if the spine is headed by one.
    pub fn head_symbol(&self) -> Option<&str> {
        match self.spine().0 {
            Term::Sym(f) => Some(f),
            _ => None,
        }
    }

    /// Number of symbol, variable and abstraction occurrences.
    pub fn size(&self) -> usize {
        match self {
            Term::Var(_) | Term::Sym(_) => 1,
            Term::App(f, a) => f.size() + a.size(),
            Term::Lam(_, b) => 1 + b.size(),
        }
    }

    pub fn free_vars(&self) -> BTreeSet<Var> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    fn collect_free<'a>(&'a self, bound: &mut Vec<&'a Var>, out: &mut BTreeSet<Var>) {
        match self {
            Term::Var(v) => {
                if !bound.contains(&v) {
                    out.insert(v.clone());
                }
            }
            Term::Sym(_) => {}
            Term::App(f, a) => {
                f.collect_free(bound, out);
                a.collect_free(bound, out);
            }
            Term::Lam(x, b) => {
                bound.push(x);
                b.collect_free(bound, out);
                bound.pop();
            }
        }
    }

    pub fn is_closed(&self) -> bool {
        self.free_vars().is_empty()
    }

    /// Checks the term against the typing rules and returns its type.
    /// Every free variable must appear in `ctx` at its annotated type.
    pub fn typecheck(&self, sig: &Signature, ctx: &Context) -> Result<SimpleType, TermError> {
        self.check_in(sig, ctx, &mut Vec::new())
    }

    /// Type of the term, taking the annotations of free variables as given.
    pub fn type_in(&self, sig: &Signature) -> Result<SimpleType, TermError> {
        let ctx = self
            .free_vars()
            .into_iter()
            .map(|v| (v.name, v.ty))
            .collect();
        self.typecheck(sig, &ctx)
    }

    fn check_in<'a>(
        &'a self,
        sig: &Signature,
        ctx: &Context,
        bound: &mut Vec<&'a Var>,
    ) -> Result<SimpleType, TermError> {
        match self {
            Term::Var(v) => {
                if bound.iter().rev().any(|b| *b == v) {
                    return Ok(v.ty.clone());
                }
                match ctx.get(&v.name) {
                    None => Err(TermError::UnboundVariable(v.name.clone())),
                    Some(ty) if *ty != v.ty => Err(TermError::TypeMismatch {
                        context: format!("variable `{}`", v.name),
                        expected: ty.clone(),
                        found: v.ty.clone(),
                    }),
                    Some(ty) => Ok(ty.clone()),
                }
            }
            Term::Sym(f) => sig
                .symbol_type(f)
                .cloned()
                .ok_or_else(|| TermError::UnknownSymbol(f.clone())),
            Term::App(f, a) => {
                let fty = f.check_in(sig, ctx, bound)?;
                let aty = a.check_in(sig, ctx, bound)?;
                match fty {
                    SimpleType::Arrow(dom, cod) => {
                        if *dom != aty {
                            return Err(TermError::TypeMismatch {
                                context: format!("argument of `{f}`"),
                                expected: *dom,
                                found: aty,
                            });
                        }
                        Ok(*cod)
                    }
                    ty @ SimpleType::Base(_) => Err(TermError::NotAFunction {
                        term: f.to_string(),
                        ty,
                    }),
                }
            }
            Term::Lam(x, b) => {
                bound.push(x);
                let bty = b.check_in(sig, ctx, bound);
                bound.pop();
                Ok(SimpleType::arrow(x.ty.clone(), bty?))
            }
        }
    }

    /// Renders the term with binder type annotations, suitable for re-parsing.
    pub fn to_source(&self) -> String {
        let mut s = String::new();
        write_term(&mut s, self, true, Prec::Top).expect("writing to a String");
        s
    }
}

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum Prec {
    Top,
    Fun,
    Arg,
}

/// `s (s ... 0)` as a number.
fn as_numeral(t: &Term) -> Option<usize> {
    let mut n = 0;
    let mut cur = t;
    loop {
        match cur {
            Term::Sym(z) if z == "0" => return (n > 0).then_some(n),
            Term::App(f, a) if matches!(f.as_ref(), Term::Sym(s) if s == "s") => {
                n += 1;
                cur = a;
            }
            _ => return None,
        }
    }
}

/// `cons a (cons b ... nil)` as its elements (at least one).
fn as_list(t: &Term) -> Option<Vec<&Term>> {
    let mut items = Vec::new();
    let mut cur = t;
    loop {
        match cur.spine() {
            (Term::Sym(n), args) if n == "nil" && args.is_empty() => {
                return (!items.is_empty()).then_some(items)
            }
            (Term::Sym(c), args) if c == "cons" && args.len() == 2 => {
                items.push(args[0]);
                cur = args[1];
            }
            _ => return None,
        }
    }
}

fn write_term(out: &mut impl fmt::Write, t: &Term, annotate: bool, prec: Prec) -> fmt::Result {
    if let Some(n) = as_numeral(t) {
        return write!(out, "{n}");
    }
    if let Some(items) = as_list(t) {
        write!(out, "[")?;
        for (i, it) in items.iter().enumerate() {
            if i > 0 {
                write!(out, "; ")?;
            }
            write_term(out, it, annotate, Prec::Top)?;
        }
        return write!(out, "]");
    }
    match t {
        Term::Var(v) => write!(out, "{}", v.name),
        Term::Sym(f) => write!(out, "{f}"),
        Term::App(f, a) => {
            let paren = prec == Prec::Arg;
            if paren {
                write!(out, "(")?;
            }
            write_term(out, f, annotate, Prec::Fun)?;
            write!(out, " ")?;
            write_term(out, a, annotate, Prec::Arg)?;
            if paren {
                write!(out, ")")?;
            }
            Ok(())
        }
        Term::Lam(x, b) => {
            let paren = prec != Prec::Top;
            if paren {
                write!(out, "(")?;
            }
            if annotate {
                write!(out, "\\{}:{}. ", x.name, x.ty)?;
            } else {
                write!(out, "\\{}. ", x.name)?;
            }
            write_term(out, b, annotate, Prec::Top)?;
            if paren {
                write!(out, ")")?;
            }
            Ok(())
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_term(f, self, false, Prec::Top)
    }
}
