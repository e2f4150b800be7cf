//! Weakly monotonic expressions used to write cost and size functions.
//!
//! The grammar has no subtraction, division or branching, so every
//! expression denotes a weakly monotonic function of its free variables.

use std::fmt;
use std::sync::Arc;

use crate::semantics::shape::SemType;
use crate::semantics::SemError;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MonoExpr {
    Nat(u64),
    Var(String),
    Unit,
    Add(Box<MonoExpr>, Box<MonoExpr>),
    Mul(Box<MonoExpr>, Box<MonoExpr>),
    Max(Box<MonoExpr>, Box<MonoExpr>),
    Tuple(Vec<MonoExpr>),
    /// One-based component access `e.i`.
    Proj(Box<MonoExpr>, usize),
    Lam(String, Arc<MonoExpr>),
    App(Box<MonoExpr>, Box<MonoExpr>),
}

#[allow(clippy::should_implement_trait)]
impl MonoExpr {
    pub fn var(x: impl Into<String>) -> Self {
        MonoExpr::Var(x.into())
    }
    pub fn add(a: MonoExpr, b: MonoExpr) -> Self {
        MonoExpr::Add(Box::new(a), Box::new(b))
    }
    pub fn mul(a: MonoExpr, b: MonoExpr) -> Self {
        MonoExpr::Mul(Box::new(a), Box::new(b))
    }
    pub fn max(a: MonoExpr, b: MonoExpr) -> Self {
        MonoExpr::Max(Box::new(a), Box::new(b))
    }
    pub fn proj(e: MonoExpr, i: usize) -> Self {
        MonoExpr::Proj(Box::new(e), i)
    }
    pub fn lam(x: impl Into<String>, body: MonoExpr) -> Self {
        MonoExpr::Lam(x.into(), Arc::new(body))
    }
    pub fn app(f: MonoExpr, a: MonoExpr) -> Self {
        MonoExpr::App(Box::new(f), Box::new(a))
    }
    pub fn pair(a: MonoExpr, b: MonoExpr) -> Self {
        MonoExpr::Tuple(vec![a, b])
    }

    /// Checks the expression against `expected` in a shape environment.
    pub fn check(&self, expected: &SemType, env: &mut Vec<(String, SemType)>) -> Result<(), SemError> {
        match (self, expected) {
            (MonoExpr::Lam(x, body), SemType::Fun(dom, cod)) => {
                env.push((x.clone(), dom.as_ref().clone()));
                let r = body.check(cod, env);
                env.pop();
                r
            }
            (MonoExpr::Lam(x, _), other) => Err(SemError::Shape(format!(
                "abstraction `\\{x}. ...` where {other} was expected"
            ))),
            (MonoExpr::Tuple(items), SemType::Tuple(shapes)) if items.len() == shapes.len() => items
                .iter()
                .zip(shapes)
                .try_for_each(|(e, s)| e.check(s, env)),
            _ => {
                let found = self.infer(env)?;
                if found == *expected {
                    Ok(())
                } else {
                    Err(SemError::Shape(format!(
                        "`{self}` has shape {found}, expected {expected}"
                    )))
                }
            }
        }
    }

    /// Infers the shape of an expression. Abstractions are only accepted in
    /// checking positions, since their parameter shape is not written down.
    pub fn infer(&self, env: &mut Vec<(String, SemType)>) -> Result<SemType, SemError> {
        match self {
            MonoExpr::Nat(_) => Ok(SemType::Nat),
            MonoExpr::Unit => Ok(SemType::Unit),
            MonoExpr::Var(x) => env
                .iter()
                .rev()
                .find(|(y, _)| y == x)
                .map(|(_, s)| s.clone())
                .ok_or_else(|| SemError::UnboundVariable(x.clone())),
            MonoExpr::Add(a, b) | MonoExpr::Mul(a, b) | MonoExpr::Max(a, b) => {
                a.check(&SemType::Nat, env)?;
                b.check(&SemType::Nat, env)?;
                Ok(SemType::Nat)
            }
            MonoExpr::Tuple(items) => Ok(SemType::Tuple(
                items.iter().map(|e| e.infer(env)).collect::<Result<_, _>>()?,
            )),
            MonoExpr::Proj(e, i) => match e.infer(env)? {
                SemType::Tuple(ts) if *i >= 1 && *i <= ts.len() => Ok(ts[i - 1].clone()),
                s => Err(SemError::Shape(format!(
                    "component {i} of `{e}`, which has shape {s}"
                ))),
            },
            MonoExpr::App(f, a) => match f.infer(env)? {
                SemType::Fun(dom, cod) => {
                    a.check(&dom, env)?;
                    Ok(*cod)
                }
                s => Err(SemError::Shape(format!(
                    "`{f}` has shape {s} and cannot be applied"
                ))),
            },
            MonoExpr::Lam(x, _) => Err(SemError::Shape(format!(
                "cannot infer the parameter shape of `\\{x}. ...` here"
            ))),
        }
    }

    pub fn free_vars(&self) -> Vec<String> {
        fn go(e: &MonoExpr, bound: &mut Vec<String>, out: &mut Vec<String>) {
            match e {
                MonoExpr::Var(x) => {
                    if !bound.contains(x) && !out.contains(x) {
                        out.push(x.clone());
                    }
                }
                MonoExpr::Nat(_) | MonoExpr::Unit => {}
                MonoExpr::Add(a, b) | MonoExpr::Mul(a, b) | MonoExpr::Max(a, b) | MonoExpr::App(a, b) => {
                    go(a, bound, out);
                    go(b, bound, out);
                }
                MonoExpr::Tuple(items) => items.iter().for_each(|i| go(i, bound, out)),
                MonoExpr::Proj(e, _) => go(e, bound, out),
                MonoExpr::Lam(x, b) => {
                    bound.push(x.clone());
                    go(b, bound, out);
                    bound.pop();
                }
            }
        }
        let mut out = Vec::new();
        go(self, &mut Vec::new(), &mut out);
        out
    }

    /// Equality up to renaming of bound variables.
    pub fn alpha_eq(&self, other: &MonoExpr) -> bool {
        fn go<'a>(a: &'a MonoExpr, b: &'a MonoExpr, env: &mut Vec<(&'a str, &'a str)>) -> bool {
            use MonoExpr::*;
            match (a, b) {
                (Var(x), Var(y)) => {
                    let i = env.iter().rposition(|(l, _)| l == x);
                    let j = env.iter().rposition(|(_, r)| r == y);
                    match (i, j) {
                        (Some(i), Some(j)) => i == j,
                        (None, None) => x == y,
                        _ => false,
                    }
                }
                (Nat(m), Nat(n)) => m == n,
                (Unit, Unit) => true,
                (Add(a1, b1), Add(a2, b2))
                | (Mul(a1, b1), Mul(a2, b2))
                | (Max(a1, b1), Max(a2, b2))
                | (App(a1, b1), App(a2, b2)) => go(a1, a2, env) && go(b1, b2, env),
                (Tuple(xs), Tuple(ys)) => {
                    xs.len() == ys.len() && xs.iter().zip(ys).all(|(x, y)| go(x, y, env))
                }
                (Proj(e1, i), Proj(e2, j)) => i == j && go(e1, e2, env),
                (Lam(x, b1), Lam(y, b2)) => {
                    env.push((x, y));
                    let r = go(b1, b2, env);
                    env.pop();
                    r
                }
                _ => false,
            }
        }
        go(self, other, &mut Vec::new())
    }
}

/// Expression printer. `subst` supplies the rendering of free variables
/// that are bound in an enclosing closure environment, and whether that
/// rendering is atomic.
pub(crate) struct Printer<'a> {
    pub lambda: &'a str,
    pub subst: &'a dyn Fn(&str) -> Option<(String, bool)>,
}

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum Level {
    Lam,
    Sum,
    Product,
    App,
    Atom,
}

impl Printer<'_> {
    pub fn render(&self, e: &MonoExpr) -> String {
        let mut out = String::new();
        self.write(&mut out, e, Level::Lam, &mut Vec::new());
        out
    }

    fn write(&self, out: &mut String, e: &MonoExpr, ctx: Level, bound: &mut Vec<String>) {
        let level = match e {
            MonoExpr::Lam(..) => Level::Lam,
            MonoExpr::Add(..) => Level::Sum,
            MonoExpr::Mul(..) => Level::Product,
            MonoExpr::App(..) => Level::App,
            _ => Level::Atom,
        };
        let paren = level < ctx;
        if paren {
            out.push('(');
        }
        match e {
            MonoExpr::Nat(n) => out.push_str(&n.to_string()),
            MonoExpr::Unit => out.push('u'),
            MonoExpr::Var(x) => {
                let shown = if bound.contains(x) { None } else { (self.subst)(x) };
                match shown {
                    Some((s, atomic)) if !atomic && ctx > Level::Lam => {
                        out.push('(');
                        out.push_str(&s);
                        out.push(')');
                    }
                    Some((s, _)) => out.push_str(&s),
                    None => out.push_str(x),
                }
            }
            MonoExpr::Add(a, b) => {
                self.write(out, a, Level::Sum, bound);
                out.push_str(" + ");
                self.write(out, b, Level::Product, bound);
            }
            MonoExpr::Mul(a, b) => {
                self.write(out, a, Level::Product, bound);
                out.push_str(" * ");
                self.write(out, b, Level::App, bound);
            }
            MonoExpr::Max(a, b) => {
                out.push_str("max(");
                self.write(out, a, Level::Lam, bound);
                out.push_str(", ");
                self.write(out, b, Level::Lam, bound);
                out.push(')');
            }
            MonoExpr::Tuple(items) => {
                out.push('(');
                for (i, it) in items.iter().enumerate() {
                    if i > 0 {
                        out.push_str(", ");
                    }
                    self.write(out, it, Level::Lam, bound);
                }
                if items.len() == 1 {
                    out.push(',');
                }
                out.push(')');
            }
            MonoExpr::Proj(e, i) => {
                self.write(out, e, Level::Atom, bound);
                out.push_str(&format!(".{i}"));
            }
            MonoExpr::Lam(x, b) => {
                out.push_str(self.lambda);
                out.push_str(x);
                out.push_str(". ");
                bound.push(x.clone());
                self.write(out, b, Level::Lam, bound);
                bound.pop();
            }
            MonoExpr::App(f, a) => {
                self.write(out, f, Level::App, bound);
                out.push(' ');
                self.write(out, a, Level::Atom, bound);
            }
        }
        if paren {
            out.push(')');
        }
    }
}

impl fmt::Display for MonoExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let p = Printer {
            lambda: "\\",
            subst: &|_| None,
        };
        f.write_str(&p.render(self))
    }
}
