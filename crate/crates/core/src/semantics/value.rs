//! Semantic values and the evaluator for monotone expressions.

use std::fmt;
use std::sync::Arc;

use crate::semantics::expr::{MonoExpr, Printer};
use crate::semantics::interp::{interpret_term, CsTuple, Interpretation, Valuation};
use crate::semantics::{Natural, SemError};
use crate::term::{Term, Var};
use crate::types::SimpleType;

/// A value of some [`SemType`](crate::semantics::SemType).
#[derive(Clone, Debug)]
pub enum Value<N> {
    Unit,
    Nat(N),
    Tuple(Vec<Value<N>>),
    Fun(Arc<Closure<N>>),
}

/// Bindings captured by an expression closure, innermost last.
pub type Env<N> = Vec<(String, Value<N>)>;

#[derive(Clone, Debug)]
pub enum Closure<N> {
    /// `\param. body` evaluated in `env`.
    Expr {
        param: String,
        body: Arc<MonoExpr>,
        env: Env<N>,
    },
    /// Cost function of the interpretation of `\var. body`:
    /// `d ↦ (1 + cost number of body, cost function of body)` with `var := d`.
    AbstractionCost {
        var: Var,
        body: Term,
        interp: Interpretation<N>,
        valuation: Valuation<N>,
    },
    /// Size function of the interpretation of `\var. body`:
    /// `d ↦ size of body` with `var := ⟨(0, 0̲), d⟩`.
    AbstractionSize {
        var: Var,
        body: Term,
        interp: Interpretation<N>,
        valuation: Valuation<N>,
    },
}

impl<N: Natural> Value<N> {
    pub fn nat(n: u64) -> Self {
        Value::Nat(N::from_u64_lossless(n).expect("small literal fits"))
    }

    pub fn pair(a: Value<N>, b: Value<N>) -> Self {
        Value::Tuple(vec![a, b])
    }

    pub fn as_nat(&self) -> Option<&N> {
        match self {
            Value::Nat(n) => Some(n),
            _ => None,
        }
    }

    pub fn as_tuple(&self) -> Option<&[Value<N>]> {
        match self {
            Value::Tuple(items) => Some(items),
            _ => None,
        }
    }

    /// Structural equality on first-order data; closures are equal only if
    /// they are the same allocation. Use [`compare`](crate::semantics::compare)
    /// for extensional checks.
    pub fn same(&self, other: &Value<N>) -> bool {
        match (self, other) {
            (Value::Unit, Value::Unit) => true,
            (Value::Nat(a), Value::Nat(b)) => a == b,
            (Value::Tuple(xs), Value::Tuple(ys)) => {
                xs.len() == ys.len() && xs.iter().zip(ys).all(|(x, y)| x.same(y))
            }
            (Value::Fun(f), Value::Fun(g)) => Arc::ptr_eq(f, g),
            _ => false,
        }
    }

    pub fn is_first_order(&self) -> bool {
        match self {
            Value::Unit | Value::Nat(_) => true,
            Value::Tuple(items) => items.iter().all(Value::is_first_order),
            Value::Fun(_) => false,
        }
    }

    /// Applies a function value to an argument.
    pub fn apply(&self, arg: Value<N>) -> Result<Value<N>, SemError> {
        let Value::Fun(closure) = self else {
            return Err(SemError::Shape(format!("`{self}` is not a function")));
        };
        match closure.as_ref() {
            Closure::Expr { param, body, env } => {
                let mut env = env.clone();
                env.push((param.clone(), arg));
                eval(body, &mut env)
            }
            Closure::AbstractionCost {
                var,
                body,
                interp,
                valuation,
            } => {
                let (dc, ds) = split_pair(arg)?;
                let mut alpha = valuation.clone();
                alpha.bind(var.clone(), CsTuple::new(N::zero(), dc, ds))?;
                let inner = interpret_term(body, interp, &alpha)?;
                let cost = inner
                    .cost
                    .checked_add(&N::one())
                    .ok_or(SemError::Overflow)?;
                Ok(Value::pair(Value::Nat(cost), inner.cost_fn))
            }
            Closure::AbstractionSize {
                var,
                body,
                interp,
                valuation,
            } => {
                let mut alpha = valuation.clone();
                alpha.bind(var.clone(), CsTuple::new(N::zero(), zero_cost(&var.ty), arg))?;
                Ok(interpret_term(body, interp, &alpha)?.size)
            }
        }
    }

    fn render(&self, lambda: &str) -> String {
        match self {
            Value::Unit => "u".to_string(),
            Value::Nat(n) => n.to_string(),
            Value::Tuple(items) => {
                let parts: Vec<_> = items.iter().map(|v| v.render(lambda)).collect();
                format!("({})", parts.join(", "))
            }
            Value::Fun(c) => c.render(lambda),
        }
    }
}

fn split_pair<N>(v: Value<N>) -> Result<(Value<N>, Value<N>), SemError> {
    match v {
        Value::Tuple(mut items) if items.len() == 2 => {
            let b = items.pop().unwrap();
            let a = items.pop().unwrap();
            Ok((a, b))
        }
        _ => Err(SemError::Shape("expected a pair".into())),
    }
}

impl<N: Natural> Closure<N> {
    fn render(&self, lambda: &str) -> String {
        match self {
            Closure::Expr { param, body, env } => {
                let lookup = |x: &str| {
                    env.iter().rev().find(|(y, _)| y == x).map(|(_, v)| {
                        let atomic = !matches!(v, Value::Fun(_));
                        (v.render(lambda), atomic)
                    })
                };
                let lam = MonoExpr::Lam(param.clone(), body.clone());
                Printer {
                    lambda,
                    subst: &lookup,
                }
                .render(&lam)
            }
            Closure::AbstractionCost { var, body, .. } => {
                format!("cost⟦\\{}. {}⟧", var.name, body)
            }
            Closure::AbstractionSize { var, body, .. } => {
                format!("size⟦\\{}. {}⟧", var.name, body)
            }
        }
    }
}

/// Renders values in the `λλx. e` notation.
impl<N: Natural> fmt::Display for Value<N> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render("λλ"))
    }
}

/// Call-by-value evaluation of a monotone expression.
pub fn eval<N: Natural>(e: &MonoExpr, env: &mut Env<N>) -> Result<Value<N>, SemError> {
    fn nat<N: Natural>(v: Value<N>) -> Result<N, SemError> {
        match v {
            Value::Nat(n) => Ok(n),
            other => Err(SemError::Shape(format!("`{other}` is not a number"))),
        }
    }
    match e {
        MonoExpr::Nat(n) => N::from_u64_lossless(*n)
            .map(Value::Nat)
            .ok_or(SemError::Overflow),
        MonoExpr::Unit => Ok(Value::Unit),
        MonoExpr::Var(x) => env
            .iter()
            .rev()
            .find(|(y, _)| y == x)
            .map(|(_, v)| v.clone())
            .ok_or_else(|| SemError::UnboundVariable(x.clone())),
        MonoExpr::Add(a, b) => {
            let (a, b) = (nat(eval(a, env)?)?, nat(eval(b, env)?)?);
            a.checked_add(&b).map(Value::Nat).ok_or(SemError::Overflow)
        }
        MonoExpr::Mul(a, b) => {
            let (a, b) = (nat(eval(a, env)?)?, nat(eval(b, env)?)?);
            a.checked_mul(&b).map(Value::Nat).ok_or(SemError::Overflow)
        }
        MonoExpr::Max(a, b) => {
            let (a, b) = (nat(eval(a, env)?)?, nat(eval(b, env)?)?);
            Ok(Value::Nat(a.max(b)))
        }
        MonoExpr::Tuple(items) => Ok(Value::Tuple(
            items.iter().map(|i| eval(i, env)).collect::<Result<_, _>>()?,
        )),
        MonoExpr::Proj(t, i) => match eval(t, env)? {
            Value::Tuple(mut items) if *i >= 1 && *i <= items.len() => Ok(items.swap_remove(i - 1)),
            other => Err(SemError::Shape(format!("no component {i} in `{other}`"))),
        },
        MonoExpr::Lam(x, body) => {
            let captured: Env<N> = body
                .free_vars()
                .into_iter()
                .filter(|y| y != x)
                .filter_map(|y| {
                    env.iter()
                        .rev()
                        .find(|(z, _)| *z == y)
                        .map(|(_, v)| (y, v.clone()))
                })
                .collect();
            Ok(Value::Fun(Arc::new(Closure::Expr {
                param: x.clone(),
                body: body.clone(),
                env: captured,
            })))
        }
        MonoExpr::App(f, a) => {
            let f = eval(f, env)?;
            let a = eval(a, env)?;
            f.apply(a)
        }
    }
}

/// Evaluates a closed expression.
pub fn eval_closed<N: Natural>(e: &MonoExpr) -> Result<Value<N>, SemError> {
    eval(e, &mut Vec::new())
}

/// The canonical zero cost function `λλx1.(0, λλx2.(0, ... (0, u)))` of
/// shape `CostF(ty)`; `u` at base types.
pub fn zero_cost_expr(ty: &SimpleType) -> MonoExpr {
    fn go(ty: &SimpleType, depth: usize) -> MonoExpr {
        match ty {
            SimpleType::Base(_) => MonoExpr::Unit,
            SimpleType::Arrow(_, cod) => MonoExpr::lam(
                format!("x{depth}"),
                MonoExpr::pair(MonoExpr::Nat(0), go(cod, depth + 1)),
            ),
        }
    }
    go(ty, 1)
}

pub fn zero_cost<N: Natural>(ty: &SimpleType) -> Value<N> {
    eval_closed(&zero_cost_expr(ty)).expect("zero cost functions are closed and well-shaped")
}
