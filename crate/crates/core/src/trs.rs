//! Rewrite rules and term rewriting systems.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fmt;

use crate::error::TermError;
use crate::term::{Context, Term, Var};
use crate::types::{Signature, SimpleType};

/// A rewrite rule `f l1 ... lk => r`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rule {
    pub lhs: Term,
    pub rhs: Term,
}

impl Rule {
    pub fn new(lhs: Term, rhs: Term) -> Self {
        Rule { lhs, rhs }
    }

    /// The defining symbol. Only valid on rules accepted by [`Trs::new`].
    pub fn head(&self) -> &str {
        self.lhs.head_symbol().expect("rule lhs is headed by a symbol")
    }

    /// Number of arguments `k` on the left-hand side.
    pub fn arity(&self) -> usize {
        self.lhs.spine().1.len()
    }

    pub fn type_in(&self, sig: &Signature) -> Result<SimpleType, TermError> {
        self.lhs.type_in(sig)
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} => {}", self.lhs, self.rhs)
    }
}

/// A signature with a set of rules. Construction validates every rule.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Trs {
    signature: Signature,
    rules: Vec<Rule>,
    /// Smallest `k` over the rules defining each symbol.
    min_arity: BTreeMap<String, usize>,
}

impl Trs {
    /// Validates typing, the shape of every left-hand side, variable
    /// containment, and the constructor-pattern discipline.
    pub fn new(signature: Signature, rules: Vec<Rule>) -> Result<Self, TermError> {
        Self::new_indexed(signature, rules).map_err(|(_, e)| e)
    }

    /// Like [`Trs::new`], also reporting the index of the offending rule.
    pub fn new_indexed(signature: Signature, rules: Vec<Rule>) -> Result<Self, (usize, TermError)> {
        let mut min_arity = BTreeMap::new();
        for (i, rule) in rules.iter().enumerate() {
            let head = match rule.lhs.spine().0 {
                Term::Sym(f) => f.clone(),
                _ => {
                    return Err((
                        i,
                        pattern_error(rule, "left-hand side must be headed by a symbol"),
                    ))
                }
            };
            let k = rule.arity();
            min_arity
                .entry(head)
                .and_modify(|m: &mut usize| *m = (*m).min(k))
                .or_insert(k);
        }
        for (i, rule) in rules.iter().enumerate() {
            check_rule(&signature, &min_arity, rule).map_err(|e| (i, e))?;
        }
        Ok(Trs {
            signature,
            rules,
            min_arity,
        })
    }

    pub fn signature(&self) -> &Signature {
        &self.signature
    }

    pub fn rules(&self) -> &[Rule] {
        &self.rules
    }

    /// Rules defining `f`, with their index in file order.
    pub fn rules_for<'a>(&'a self, f: &'a str) -> impl Iterator<Item = (usize, &'a Rule)> + 'a {
        self.rules
            .iter()
            .enumerate()
            .filter(move |(_, r)| r.head() == f)
    }

    pub fn is_defined(&self, f: &str) -> bool {
        self.min_arity.contains_key(f)
    }

    /// Splits the signature into defined symbols and constructors.
    pub fn classify_symbols(&self) -> (BTreeSet<String>, BTreeSet<String>) {
        self.signature
            .symbols()
            .map(|(f, _)| f.to_string())
            .partition(|f| self.is_defined(f))
    }

    /// A term is a value if it is an abstraction, or `f v1 ... vn` with every
    /// `vi` a value and no rule `f l1 ... lk` with `k <= n`.
    pub fn is_value(&self, t: &Term) -> bool {
        match t {
            Term::Lam(..) => true,
            _ => {
                let (head, args) = t.spine();
                let Term::Sym(f) = head else { return false };
                if let Some(&k) = self.min_arity.get(f) {
                    if k <= args.len() {
                        return false;
                    }
                }
                args.into_iter().all(|a| self.is_value(a))
            }
        }
    }

    /// Ground constructor terms: constructors applied to ground constructor terms.
    pub fn is_ground_constructor_term(&self, t: &Term) -> bool {
        let (head, args) = t.spine();
        match head {
            Term::Sym(c) => {
                !self.is_defined(c) && args.into_iter().all(|a| self.is_ground_constructor_term(a))
            }
            _ => false,
        }
    }
}

fn pattern_error(rule: &Rule, reason: impl Into<String>) -> TermError {
    TermError::Pattern {
        rule: rule.to_string(),
        reason: reason.into(),
    }
}

fn check_rule(
    sig: &Signature,
    defined: &BTreeMap<String, usize>,
    rule: &Rule,
) -> Result<(), TermError> {
    let lhs_fv = rule.lhs.free_vars();
    let ctx: Context = lhs_fv
        .iter()
        .map(|v| (v.name.clone(), v.ty.clone()))
        .collect();
    if ctx.len() != lhs_fv.len() {
        return Err(pattern_error(
            rule,
            "two left-hand side variables share a name",
        ));
    }
    let lty = rule.lhs.typecheck(sig, &ctx)?;
    let rty = rule.rhs.typecheck(sig, &ctx).map_err(|e| match e {
        TermError::UnboundVariable(x) => pattern_error(
            rule,
            format!("variable `{x}` occurs on the right but not on the left"),
        ),
        e => e,
    })?;
    if lty != rty {
        return Err(TermError::TypeMismatch {
            context: format!("rule `{rule}`"),
            expected: lty,
            found: rty,
        });
    }
    let mut seen = HashSet::new();
    for arg in rule.lhs.spine().1 {
        check_pattern(rule, defined, arg, &mut seen)?;
    }
    Ok(())
}

fn check_pattern<'a>(
    rule: &Rule,
    defined: &BTreeMap<String, usize>,
    p: &'a Term,
    seen: &mut HashSet<&'a Var>,
) -> Result<(), TermError> {
    match p {
        Term::Var(v) => {
            if !seen.insert(v) {
                return Err(pattern_error(
                    rule,
                    format!("variable `{}` occurs twice on the left", v.name),
                ));
            }
            Ok(())
        }
        Term::Lam(..) => Err(pattern_error(rule, "abstractions are not allowed in patterns")),
        _ => {
            let (head, args) = p.spine();
            match head {
                Term::Sym(c) if defined.contains_key(c) => Err(pattern_error(
                    rule,
                    format!("defined symbol `{c}` inside a pattern"),
                )),
                Term::Sym(_) => args
                    .into_iter()
                    .try_for_each(|a| check_pattern(rule, defined, a, seen)),
                _ => Err(pattern_error(
                    rule,
                    "patterns may only apply constructors, not variables or abstractions",
                )),
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn nat() -> SimpleType {
        SimpleType::base("nat")
    }
    fn var(n: &str) -> Term {
        Term::var(n, nat())
    }
    fn s(t: Term) -> Term {
        Term::app(Term::sym("s"), t)
    }
    fn add(a: Term, b: Term) -> Term {
        Term::apps(Term::sym("add"), [a, b])
    }
    fn zero() -> Term {
        Term::sym("0")
    }

    fn sig() -> Signature {
        let mut g = Signature::new();
        g.add_base_type("nat").unwrap();
        g.add_symbol("0", nat()).unwrap();
        g.add_symbol("s", SimpleType::arrow(nat(), nat())).unwrap();
        g.add_symbol("add", SimpleType::curried([nat(), nat()], nat()))
            .unwrap();
        g
    }

    fn add_trs() -> Trs {
        Trs::new(
            sig(),
            vec![
                Rule::new(add(var("x"), zero()), zero()),
                Rule::new(add(var("x"), s(var("y"))), s(add(var("x"), var("y")))),
            ],
        )
        .unwrap()
    }

    #[test]
    fn values_follow_rule_arity() {
        let trs = add_trs();
        assert!(trs.is_value(&Term::app(Term::sym("add"), zero())));
        assert!(!trs.is_value(&add(zero(), zero())));
        assert!(trs.is_value(&s(s(zero()))));
        assert!(!trs.is_value(&var("x")));
        assert!(trs.is_value(&Term::lam(Var::new("x", nat()), add(zero(), zero()))));
    }

    #[test]
    fn classification() {
        let (d, c) = add_trs().classify_symbols();
        assert_eq!(d, ["add".to_string()].into());
        assert_eq!(c, ["0".to_string(), "s".to_string()].into());
        let empty = Trs::new(sig(), vec![]).unwrap();
        let (d, c) = empty.classify_symbols();
        assert!(d.is_empty());
        assert_eq!(c.len(), 3);
    }

    #[test]
    fn every_symbol_defined() {
        let mut g = Signature::new();
        g.add_base_type("nat").unwrap();
        g.add_symbol("a", nat()).unwrap();
        g.add_symbol("b", nat()).unwrap();
        let trs = Trs::new(
            g,
            vec![
                Rule::new(Term::sym("a"), Term::sym("b")),
                Rule::new(Term::sym("b"), Term::sym("b")),
            ],
        )
        .unwrap();
        let (d, c) = trs.classify_symbols();
        assert_eq!(d.len(), 2);
        assert!(c.is_empty());
    }

    #[test]
    fn rejects_bad_rules() {
        let fresh_rhs = Trs::new(sig(), vec![Rule::new(add(var("x"), zero()), var("z"))]);
        assert!(matches!(fresh_rhs, Err(TermError::Pattern { .. })));

        let nonlinear = Trs::new(sig(), vec![Rule::new(add(var("x"), var("x")), zero())]);
        assert!(matches!(nonlinear, Err(TermError::Pattern { .. })));

        let nested_defined = Trs::new(
            sig(),
            vec![Rule::new(add(add(var("x"), zero()), zero()), zero())],
        );
        assert!(matches!(nested_defined, Err(TermError::Pattern { .. })));

        let var_head = Trs::new(sig(), vec![Rule::new(var("x"), zero())]);
        assert!(matches!(var_head, Err(TermError::Pattern { .. })));

        let mistyped = Trs::new(
            sig(),
            vec![Rule::new(add(var("x"), zero()), Term::sym("s"))],
        );
        assert!(matches!(mistyped, Err(TermError::TypeMismatch { .. })));
    }
}
