//! Simple types over a set of base types, and signatures.

use std::collections::BTreeSet;
use std::fmt;

use indexmap::IndexMap;

use crate::error::TermError;

/// A simple type: a base type or an arrow `σ -> τ`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SimpleType {
    Base(String),
    Arrow(Box<SimpleType>, Box<SimpleType>),
}

impl SimpleType {
    pub fn base(name: impl Into<String>) -> Self {
        SimpleType::Base(name.into())
    }

    pub fn arrow(dom: SimpleType, cod: SimpleType) -> Self {
        SimpleType::Arrow(Box::new(dom), Box::new(cod))
    }

    /// Builds `a1 -> a2 -> ... -> result`.
    pub fn curried(args: impl IntoIterator<Item = SimpleType>, result: SimpleType) -> Self {
        let args: Vec<_> = args.into_iter().collect();
        args.into_iter()
            .rev()
            .fold(result, |acc, a| SimpleType::arrow(a, acc))
    }

    pub fn is_base(&self) -> bool {
        matches!(self, SimpleType::Base(_))
    }

    /// Splits `a1 -> ... -> an -> ι` into `([a1..an], ι)`.
    pub fn uncurry(&self) -> (Vec<&SimpleType>, &SimpleType) {
        let mut args = Vec::new();
        let mut cur = self;
        while let SimpleType::Arrow(d, c) = cur {
            args.push(d.as_ref());
            cur = c;
        }
        (args, cur)
    }

    /// Number of arrows along the right spine.
    pub fn arity(&self) -> usize {
        self.uncurry().0.len()
    }

    pub fn base_names(&self, out: &mut BTreeSet<String>) {
        match self {
            SimpleType::Base(b) => {
                out.insert(b.clone());
            }
            SimpleType::Arrow(d, c) => {
                d.base_names(out);
                c.base_names(out);
            }
        }
    }
}

impl fmt::Display for SimpleType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SimpleType::Base(b) => write!(f, "{b}"),
            SimpleType::Arrow(d, c) => {
                if d.is_base() {
                    write!(f, "{d} -> {c}")
                } else {
                    write!(f, "({d}) -> {c}")
                }
            }
        }
    }
}

/// Base types plus typed function symbols, in declaration order.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Signature {
    base_types: BTreeSet<String>,
    symbols: IndexMap<String, SimpleType>,
}

impl Signature {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_base_type(&mut self, name: impl Into<String>) -> Result<(), TermError> {
        let name = name.into();
        if !self.base_types.insert(name.clone()) {
            return Err(TermError::DuplicateBaseType(name));
        }
        Ok(())
    }

    pub fn add_symbol(&mut self, name: impl Into<String>, ty: SimpleType) -> Result<(), TermError> {
        let name = name.into();
        let mut used = BTreeSet::new();
        ty.base_names(&mut used);
        if let Some(missing) = used.iter().find(|b| !self.base_types.contains(*b)) {
            return Err(TermError::UnknownBaseType(missing.clone()));
        }
        if self.symbols.contains_key(&name) {
            return Err(TermError::DuplicateSymbol(name));
        }
        self.symbols.insert(name, ty);
        Ok(())
    }

    pub fn base_types(&self) -> &BTreeSet<String> {
        &self.base_types
    }

    pub fn has_base_type(&self, name: &str) -> bool {
        self.base_types.contains(name)
    }

    pub fn symbol_type(&self, name: &str) -> Option<&SimpleType> {
        self.symbols.get(name)
    }

    pub fn has_symbol(&self, name: &str) -> bool {
        self.symbols.contains_key(name)
    }

    pub fn symbols(&self) -> impl Iterator<Item = (&str, &SimpleType)> {
        self.symbols.iter().map(|(k, v)| (k.as_str(), v))
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arrow_display_is_right_associative() {
        let nat = SimpleType::base("nat");
        let t = SimpleType::curried([SimpleType::arrow(nat.clone(), nat.clone()), nat.clone()], nat);
        assert_eq!(t.to_string(), "(nat -> nat) -> nat -> nat");
        assert_eq!(t.arity(), 2);
    }

    #[test]
    fn symbols_must_use_declared_base_types() {
        let mut sig = Signature::new();
        sig.add_base_type("nat").unwrap();
        assert!(matches!(
            sig.add_symbol("nil", SimpleType::base("list")),
            Err(TermError::UnknownBaseType(_))
        ));
        sig.add_symbol("0", SimpleType::base("nat")).unwrap();
        assert!(matches!(
            sig.add_symbol("0", SimpleType::base("nat")),
            Err(TermError::DuplicateSymbol(_))
        ));
    }
}
