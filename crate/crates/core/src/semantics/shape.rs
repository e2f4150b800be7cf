//! Shapes of the cost-size interpretation of types.
//!
//! For a simple type σ and a key K giving each base type a dimension:
//!
//! ```text
//! Cost(σ)       = ℕ × CostF(σ)
//! CostF(ι)      = unit
//! CostF(σ ⇒ τ)  = (CostF(σ) × Size(σ)) ⟹ Cost(τ)
//! Size(ι)       = ℕ^K(ι)
//! Size(σ ⇒ τ)   = Size(σ) ⟹ Size(τ)
//! ```
//!
//! A value of type σ is a pair `⟨(n, f^c), f^s⟩` in `Cost(σ) × Size(σ)`,
//! ordered component-wise. `ℕ^1` is identified with `ℕ`.

use std::collections::BTreeMap;
use std::fmt;

use crate::semantics::SemError;
use crate::types::{Signature, SimpleType};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum SemType {
    Unit,
    Nat,
    Tuple(Vec<SemType>),
    Fun(Box<SemType>, Box<SemType>),
}

impl SemType {
    pub fn pair(a: SemType, b: SemType) -> Self {
        SemType::Tuple(vec![a, b])
    }

    pub fn fun(a: SemType, b: SemType) -> Self {
        SemType::Fun(Box::new(a), Box::new(b))
    }

    /// `ℕ^k`, with `ℕ^1 = ℕ`.
    pub fn nats(k: usize) -> Self {
        if k == 1 {
            SemType::Nat
        } else {
            SemType::Tuple(vec![SemType::Nat; k])
        }
    }

    fn is_atomic(&self) -> bool {
        match self {
            SemType::Unit | SemType::Nat => true,
            SemType::Tuple(ts) => ts.iter().all(|t| *t == SemType::Nat),
            SemType::Fun(..) => false,
        }
    }
}

impl fmt::Display for SemType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SemType::Unit => f.write_str("unit"),
            SemType::Nat => f.write_str("ℕ"),
            SemType::Tuple(ts) if !ts.is_empty() && ts.iter().all(|t| *t == SemType::Nat) => {
                write!(f, "ℕ^{}", ts.len())
            }
            SemType::Tuple(ts) => {
                for (i, t) in ts.iter().enumerate() {
                    if i > 0 {
                        f.write_str(" × ")?;
                    }
                    if t.is_atomic() {
                        write!(f, "{t}")?;
                    } else {
                        write!(f, "({t})")?;
                    }
                }
                Ok(())
            }
            SemType::Fun(a, b) => {
                let wrap = |t: &SemType| {
                    if t.is_atomic() {
                        t.to_string()
                    } else {
                        format!("({t})")
                    }
                };
                write!(f, "{} ⟹ {}", wrap(a), wrap(b))
            }
        }
    }
}

/// Dimension of the size tuple for each base type.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct InterpretationKey(BTreeMap<String, usize>);

impl InterpretationKey {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn set(&mut self, base: impl Into<String>, dim: usize) -> Result<(), SemError> {
        let base = base.into();
        if dim == 0 {
            return Err(SemError::InvalidKey(base));
        }
        self.0.insert(base, dim);
        Ok(())
    }

    pub fn get(&self, base: &str) -> Option<usize> {
        self.0.get(base).copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, usize)> {
        self.0.iter().map(|(k, v)| (k.as_str(), *v))
    }

    /// Fails with `MissingKey` unless every base type of `sig` has a dimension.
    pub fn check_total(&self, sig: &Signature) -> Result<(), SemError> {
        match sig.base_types().iter().find(|b| !self.0.contains_key(*b)) {
            Some(b) => Err(SemError::MissingKey(b.clone())),
            None => Ok(()),
        }
    }
}

impl FromIterator<(String, usize)> for InterpretationKey {
    fn from_iter<I: IntoIterator<Item = (String, usize)>>(iter: I) -> Self {
        InterpretationKey(iter.into_iter().collect())
    }
}

/// The cost-function and size shapes of a type.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TypeShape {
    pub cost_fn: SemType,
    pub size: SemType,
}

impl TypeShape {
    /// `Cost(σ) = ℕ × CostF(σ)`.
    pub fn cost(&self) -> SemType {
        SemType::pair(SemType::Nat, self.cost_fn.clone())
    }

    /// The whole tuple shape `Cost(σ) × Size(σ)`.
    pub fn tuple(&self) -> SemType {
        SemType::pair(self.cost(), self.size.clone())
    }

    /// The shape of the argument a cost function of this type receives.
    pub fn argument(&self) -> SemType {
        SemType::pair(self.cost_fn.clone(), self.size.clone())
    }
}

pub fn size_shape(ty: &SimpleType, key: &InterpretationKey) -> Result<SemType, SemError> {
    match ty {
        SimpleType::Base(b) => key
            .get(b)
            .map(SemType::nats)
            .ok_or_else(|| SemError::MissingKey(b.clone())),
        SimpleType::Arrow(d, c) => Ok(SemType::fun(size_shape(d, key)?, size_shape(c, key)?)),
    }
}

pub fn cost_fn_shape(ty: &SimpleType, key: &InterpretationKey) -> Result<SemType, SemError> {
    match ty {
        SimpleType::Base(b) => {
            key.get(b).ok_or_else(|| SemError::MissingKey(b.clone()))?;
            Ok(SemType::Unit)
        }
        SimpleType::Arrow(d, c) => {
            let arg = SemType::pair(cost_fn_shape(d, key)?, size_shape(d, key)?);
            let res = SemType::pair(SemType::Nat, cost_fn_shape(c, key)?);
            Ok(SemType::fun(arg, res))
        }
    }
}

/// The shape of the interpretation of `ty` under `key`.
pub fn type_interpretation(ty: &SimpleType, key: &InterpretationKey) -> Result<TypeShape, SemError> {
    Ok(TypeShape {
        cost_fn: cost_fn_shape(ty, key)?,
        size: size_shape(ty, key)?,
    })
}
