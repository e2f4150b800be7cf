//! Cost-size tuples, semantic application, and the interpretation of terms.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use indexmap::IndexMap;

use crate::semantics::expr::MonoExpr;
use crate::semantics::shape::{type_interpretation, InterpretationKey};
use crate::semantics::value::{eval_closed, Closure, Value};
use crate::semantics::{Natural, SemError};
use crate::term::{Term, Var};
use crate::types::Signature;

/// A cost-size tuple `⟨(n, f^c), f^s⟩`.
#[derive(Clone, Debug)]
pub struct CsTuple<N> {
    /// The cost number `n`.
    pub cost: N,
    /// The cost function `f^c`; `u` at base types.
    pub cost_fn: Value<N>,
    /// The size component `f^s`.
    pub size: Value<N>,
}

impl<N: Natural> CsTuple<N> {
    pub fn new(cost: N, cost_fn: Value<N>, size: Value<N>) -> Self {
        CsTuple {
            cost,
            cost_fn,
            size,
        }
    }

    /// Reads a value of shape `(ℕ × CostF) × Size`.
    pub fn from_value(v: Value<N>) -> Result<Self, SemError> {
        let bad = || SemError::Shape("expected a tuple ⟨(n, f^c), f^s⟩".into());
        let Value::Tuple(mut outer) = v else { return Err(bad()) };
        if outer.len() != 2 {
            return Err(bad());
        }
        let size = outer.pop().unwrap();
        let Value::Tuple(mut cost) = outer.pop().unwrap() else { return Err(bad()) };
        if cost.len() != 2 {
            return Err(bad());
        }
        let cost_fn = cost.pop().unwrap();
        let Value::Nat(n) = cost.pop().unwrap() else { return Err(bad()) };
        Ok(CsTuple::new(n, cost_fn, size))
    }

    pub fn to_value(&self) -> Value<N> {
        Value::pair(
            Value::pair(Value::Nat(self.cost.clone()), self.cost_fn.clone()),
            self.size.clone(),
        )
    }

    /// Structural equality; see [`Value::same`].
    pub fn same(&self, other: &CsTuple<N>) -> bool {
        self.cost == other.cost && self.cost_fn.same(&other.cost_fn) && self.size.same(&other.size)
    }
}

impl<N: Natural> fmt::Display for CsTuple<N> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "⟨({}, {}), {}⟩", self.cost, self.cost_fn, self.size)
    }
}

/// Semantic application: with `f^c(x^c, x^s) = (k, h)`,
/// `⟨(n, f^c), f^s⟩ · ⟨(m, x^c), x^s⟩ = ⟨(n + m + k, h), f^s(x^s)⟩`.
pub fn sem_apply<N: Natural>(f: &CsTuple<N>, x: &CsTuple<N>) -> Result<CsTuple<N>, SemError> {
    let kh = f
        .cost_fn
        .apply(Value::pair(x.cost_fn.clone(), x.size.clone()))?;
    let (k, h) = match kh {
        Value::Tuple(mut items) if items.len() == 2 => {
            let h = items.pop().unwrap();
            match items.pop().unwrap() {
                Value::Nat(k) => (k, h),
                other => {
                    return Err(SemError::Shape(format!(
                        "cost function returned `{other}` where a cost number was expected"
                    )))
                }
            }
        }
        other => {
            return Err(SemError::Shape(format!(
                "cost function returned `{other}`, not a pair (k, h)"
            )))
        }
    };
    let cost = f
        .cost
        .checked_add(&x.cost)
        .and_then(|c| c.checked_add(&k))
        .ok_or(SemError::Overflow)?;
    let size = f.size.apply(x.size.clone())?;
    Ok(CsTuple::new(cost, h, size))
}

/// Assignment of cost-size tuples to variables. Every entry has cost number 0.
#[derive(Clone, Debug)]
pub struct Valuation<N>(BTreeMap<Var, CsTuple<N>>);

impl<N> Default for Valuation<N> {
    fn default() -> Self {
        Valuation(BTreeMap::new())
    }
}

impl<N: Natural> Valuation<N> {
    pub fn new() -> Self {
        Self::default()
    }

    /// Binds `x`, rejecting tuples with a nonzero cost number.
    pub fn bind(&mut self, x: Var, t: CsTuple<N>) -> Result<(), SemError> {
        if !t.cost.is_zero() {
            return Err(SemError::Valuation(x.name));
        }
        self.0.insert(x, t);
        Ok(())
    }

    /// Binds `x` to `⟨(0, f^c), f^s⟩`.
    pub fn bind_parts(&mut self, x: Var, cost_fn: Value<N>, size: Value<N>) {
        self.0.insert(x, CsTuple::new(N::zero(), cost_fn, size));
    }

    pub fn get(&self, x: &Var) -> Option<&CsTuple<N>> {
        self.0.get(x)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Var, &CsTuple<N>)> {
        self.0.iter()
    }

    fn restrict(&self, keep: impl Fn(&Var) -> bool) -> Self {
        Valuation(
            self.0
                .iter()
                .filter(|(v, _)| keep(v))
                .map(|(v, t)| (v.clone(), t.clone()))
                .collect(),
        )
    }
}

impl<N: Natural> fmt::Display for Valuation<N> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, (v, t)) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            if t.cost_fn.is_first_order() {
                write!(f, "{} ↦ {}", v.name, t.size)?;
            } else {
                write!(f, "{} ↦ ({}, {})", v.name, t.cost_fn, t.size)?;
            }
        }
        f.write_str("}")
    }
}

/// The source and meaning of one symbol's interpretation.
#[derive(Clone, Debug)]
pub struct SymbolInterpretation<N> {
    /// Expression for the cost part `(n, f^c)`.
    pub cost: MonoExpr,
    /// Expression for the size part `f^s`.
    pub size: MonoExpr,
    pub value: CsTuple<N>,
}

/// A type interpretation key and a cost-size tuple for every symbol.
/// Cheap to clone.
#[derive(Clone, Debug)]
pub struct Interpretation<N> {
    key: Arc<InterpretationKey>,
    symbols: Arc<IndexMap<String, SymbolInterpretation<N>>>,
}

impl<N: Natural> Interpretation<N> {
    /// Shape-checks each entry against the interpretation of its symbol's
    /// type and evaluates it. Every base type needs a key and every
    /// symbol an entry.
    pub fn new(
        sig: &Signature,
        key: InterpretationKey,
        entries: impl IntoIterator<Item = (String, MonoExpr, MonoExpr)>,
    ) -> Result<Self, SemError> {
        key.check_total(sig)?;
        let mut symbols = IndexMap::new();
        for (name, cost, size) in entries {
            let ty = sig
                .symbol_type(&name)
                .ok_or_else(|| SemError::UnknownSymbol(name.clone()))?;
            if symbols.contains_key(&name) {
                return Err(SemError::Duplicate(name));
            }
            let shape = type_interpretation(ty, &key)?;
            let in_symbol = |e: SemError| match e {
                SemError::Shape(msg) => SemError::Shape(format!("in `{name}`: {msg}")),
                e => e,
            };
            cost.check(&shape.cost(), &mut Vec::new()).map_err(in_symbol)?;
            size.check(&shape.size, &mut Vec::new()).map_err(in_symbol)?;
            let value = CsTuple::from_value(Value::pair(eval_closed(&cost)?, eval_closed(&size)?))?;
            symbols.insert(name, SymbolInterpretation { cost, size, value });
        }
        let ordered: IndexMap<_, _> = sig
            .symbols()
            .map(|(f, _)| {
                symbols
                    .swap_remove(f)
                    .map(|s| (f.to_string(), s))
                    .ok_or_else(|| SemError::MissingSymbol(f.to_string()))
            })
            .collect::<Result<_, _>>()?;
        Ok(Interpretation {
            key: Arc::new(key),
            symbols: Arc::new(ordered),
        })
    }

    pub fn key(&self) -> &InterpretationKey {
        &self.key
    }

    pub fn symbol(&self, f: &str) -> Result<&SymbolInterpretation<N>, SemError> {
        self.symbols
            .get(f)
            .ok_or_else(|| SemError::UnknownSymbol(f.to_string()))
    }

    pub fn symbols(&self) -> impl Iterator<Item = (&str, &SymbolInterpretation<N>)> {
        self.symbols.iter().map(|(k, v)| (k.as_str(), v))
    }
}

/// The interpretation of `t` under `interp` and `alpha`, by structural induction:
/// variables are looked up, symbols interpreted, applications go through
/// [`sem_apply`], and an abstraction `\x. s` becomes
/// `⟨(0, d ↦ (1 + π₁₁⟦s⟧[x:=d], π₁₂⟦s⟧[x:=d])), dˢ ↦ π₂⟦s⟧[x:=(0̲, dˢ)]⟩`.
pub fn interpret_term<N: Natural>(
    t: &Term,
    interp: &Interpretation<N>,
    alpha: &Valuation<N>,
) -> Result<CsTuple<N>, SemError> {
    match t {
        Term::Var(x) => alpha
            .get(x)
            .cloned()
            .ok_or_else(|| SemError::UnboundVariable(x.name.clone())),
        Term::Sym(f) => Ok(interp.symbol(f)?.value.clone()),
        Term::App(s, u) => {
            let fs = interpret_term(s, interp, alpha)?;
            let fu = interpret_term(u, interp, alpha)?;
            sem_apply(&fs, &fu)
        }
        Term::Lam(x, body) => {
            let fv = t.free_vars();
            let valuation = alpha.restrict(|v| fv.contains(v));
            if let Some(missing) = fv.iter().find(|v| valuation.get(v).is_none()) {
                return Err(SemError::UnboundVariable(missing.name.clone()));
            }
            let cost_fn = Closure::AbstractionCost {
                var: x.clone(),
                body: body.as_ref().clone(),
                interp: interp.clone(),
                valuation: valuation.clone(),
            };
            let size = Closure::AbstractionSize {
                var: x.clone(),
                body: body.as_ref().clone(),
                interp: interp.clone(),
                valuation,
            };
            Ok(CsTuple::new(
                N::zero(),
                Value::Fun(Arc::new(cost_fn)),
                Value::Fun(Arc::new(size)),
            ))
        }
    }
}
