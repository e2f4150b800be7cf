//! Component-wise comparison of semantic values.
//!
//! First-order data is compared exactly. Function-shaped components are
//! compared pointwise on a deterministic grid of sample arguments, so a
//! positive verdict only ever means "holds on the samples".

use std::fmt;
use std::str::FromStr;

use crate::semantics::expr::MonoExpr;
use crate::semantics::interp::CsTuple;
use crate::semantics::shape::{SemType, TypeShape};
use crate::semantics::value::{eval_closed, Value};
use crate::semantics::{Natural, SemError};

/// Monotone functions used to instantiate function-shaped sample slots.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SampleFn {
    Zero,
    Identity,
    Successor,
    Doubling,
}

impl SampleFn {
    pub const ALL: [SampleFn; 4] = [
        SampleFn::Zero,
        SampleFn::Identity,
        SampleFn::Successor,
        SampleFn::Doubling,
    ];

    fn name(self) -> &'static str {
        match self {
            SampleFn::Zero => "zero",
            SampleFn::Identity => "id",
            SampleFn::Successor => "succ",
            SampleFn::Doubling => "double",
        }
    }

    fn lift(self, e: MonoExpr) -> MonoExpr {
        match self {
            SampleFn::Zero => MonoExpr::Nat(0),
            SampleFn::Identity => e,
            SampleFn::Successor => MonoExpr::add(e, MonoExpr::Nat(1)),
            SampleFn::Doubling => MonoExpr::mul(MonoExpr::Nat(2), e),
        }
    }
}

impl FromStr for SampleFn {
    type Err = SemError;

    fn from_str(s: &str) -> Result<Self, SemError> {
        SampleFn::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| SemError::Grid(format!("unknown sample function `{s}`")))
    }
}

/// The sample grid used for function comparisons and rule verification.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Grid {
    /// Values tried for each natural-number slot.
    pub nats: Vec<u64>,
    /// Functions tried for each function-shaped slot.
    pub functions: Vec<SampleFn>,
    /// Upper bound on the number of sample points (valuations, arguments,
    /// leaf comparisons) a single check may use.
    pub budget: usize,
}

impl Default for Grid {
    fn default() -> Self {
        Grid {
            nats: vec![0, 1, 2, 3, 5, 8],
            functions: SampleFn::ALL.to_vec(),
            budget: 2_000_000,
        }
    }
}

/// `nats=0,1,2;fns=zero,id,succ,double;budget=100000`; omitted fields keep
/// their defaults.
impl FromStr for Grid {
    type Err = SemError;

    fn from_str(s: &str) -> Result<Self, SemError> {
        let mut grid = Grid::default();
        for part in s.split(';').map(str::trim).filter(|p| !p.is_empty()) {
            let (k, v) = part
                .split_once('=')
                .ok_or_else(|| SemError::Grid(format!("expected key=value, found `{part}`")))?;
            let items = v.split(',').map(str::trim).filter(|i| !i.is_empty());
            match k.trim() {
                "nats" => {
                    grid.nats = items
                        .map(|i| {
                            i.parse()
                                .map_err(|_| SemError::Grid(format!("bad number `{i}`")))
                        })
                        .collect::<Result<_, _>>()?
                }
                "fns" => grid.functions = items.map(str::parse).collect::<Result<_, _>>()?,
                "budget" => {
                    grid.budget = v
                        .trim()
                        .parse()
                        .map_err(|_| SemError::Grid(format!("bad budget `{v}`")))?
                }
                other => return Err(SemError::Grid(format!("unknown grid field `{other}`"))),
            }
        }
        if grid.nats.is_empty() || grid.functions.is_empty() {
            return Err(SemError::Grid("grid needs at least one number and one function".into()));
        }
        Ok(grid)
    }
}

impl fmt::Display for Grid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let nats: Vec<_> = self.nats.iter().map(u64::to_string).collect();
        let fns: Vec<_> = self.functions.iter().map(|g| g.name()).collect();
        write!(
            f,
            "nats={};fns={};budget={}",
            nats.join(","),
            fns.join(","),
            self.budget
        )
    }
}

/// Sum of the natural-number leaves of `e : shape`, skipping function leaves.
fn leaf_sum(e: MonoExpr, shape: &SemType) -> Option<MonoExpr> {
    match shape {
        SemType::Nat => Some(e),
        SemType::Unit | SemType::Fun(..) => None,
        SemType::Tuple(ts) => ts
            .iter()
            .enumerate()
            .filter_map(|(i, t)| leaf_sum(MonoExpr::proj(e.clone(), i + 1), t))
            .reduce(MonoExpr::add),
    }
}

/// Builds a result of shape `cod` whose natural leaves are `g(total)`.
fn fill(g: SampleFn, total: &MonoExpr, cod: &SemType, depth: usize) -> MonoExpr {
    match cod {
        SemType::Unit => MonoExpr::Unit,
        SemType::Nat => g.lift(total.clone()),
        SemType::Tuple(ts) => MonoExpr::Tuple(ts.iter().map(|t| fill(g, total, t, depth)).collect()),
        SemType::Fun(dom, cod) => {
            let y = format!("y{depth}");
            let total = match leaf_sum(MonoExpr::var(&y), dom) {
                Some(s) => MonoExpr::add(total.clone(), s),
                None => total.clone(),
            };
            MonoExpr::lam(y, fill(g, &total, cod, depth + 1))
        }
    }
}

/// Applies `g` to each natural leaf of `e`, keeping the shape.
fn per_component(g: SampleFn, e: MonoExpr, shape: &SemType) -> MonoExpr {
    match shape {
        SemType::Unit => MonoExpr::Unit,
        SemType::Nat => g.lift(e),
        SemType::Tuple(ts) => MonoExpr::Tuple(
            ts.iter()
                .enumerate()
                .map(|(i, t)| per_component(g, MonoExpr::proj(e.clone(), i + 1), t))
                .collect(),
        ),
        SemType::Fun(..) => e,
    }
}

/// The expression of sample function `g` at shape `dom ⟹ cod`.
pub fn sample_function_expr(g: SampleFn, dom: &SemType, cod: &SemType) -> MonoExpr {
    let x = MonoExpr::var("x");
    let body = if dom == cod && g != SampleFn::Zero {
        per_component(g, x, cod)
    } else {
        let total = leaf_sum(x, dom).unwrap_or(MonoExpr::Nat(0));
        fill(g, &total, cod, 1)
    };
    MonoExpr::lam("x", body)
}

/// Every sample value of `shape` on `grid`.
pub fn sample_values<N: Natural>(shape: &SemType, grid: &Grid) -> Result<Vec<Value<N>>, SemError> {
    match shape {
        SemType::Unit => Ok(vec![Value::Unit]),
        SemType::Nat => grid
            .nats
            .iter()
            .map(|&n| N::from_u64_lossless(n).map(Value::Nat).ok_or(SemError::Overflow))
            .collect(),
        SemType::Tuple(ts) => {
            let per: Vec<Vec<Value<N>>> = ts
                .iter()
                .map(|t| sample_values(t, grid))
                .collect::<Result<_, _>>()?;
            let total = per
                .iter()
                .try_fold(1usize, |acc, p| acc.checked_mul(p.len()))
                .unwrap_or(usize::MAX);
            if total > grid.budget {
                return Err(SemError::GridTooLarge {
                    needed: total,
                    budget: grid.budget,
                });
            }
            let mut out: Vec<Vec<Value<N>>> = vec![Vec::new()];
            for choices in per {
                out = out
                    .into_iter()
                    .flat_map(|prefix| {
                        choices.iter().map(move |c| {
                            let mut p = prefix.clone();
                            p.push(c.clone());
                            p
                        })
                    })
                    .collect();
            }
            Ok(out.into_iter().map(Value::Tuple).collect())
        }
        SemType::Fun(dom, cod) => grid
            .functions
            .iter()
            .map(|&g| eval_closed(&sample_function_expr(g, dom, cod)))
            .collect(),
    }
}

/// Which relation a comparison checks.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Order {
    /// Component-wise `≥` everywhere.
    Ge,
    /// Strictly greater cost number, `≥` in the cost function and size.
    StrictCost,
}

/// Where and how a comparison failed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    /// Path to the failing component, e.g. `size.2` or `cost function(u, 3).1`.
    pub location: String,
    pub left: String,
    pub right: String,
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "at {}: {} vs {}", self.location, self.left, self.right)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    HoldsOnSamples { samples: usize },
    Fails(Witness),
}

impl Verdict {
    pub fn holds(&self) -> bool {
        matches!(self, Verdict::HoldsOnSamples { .. })
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::HoldsOnSamples { samples } => write!(f, "holds on {samples} samples"),
            Verdict::Fails(w) => write!(f, "fails {w}"),
        }
    }
}

struct Walk<'g> {
    grid: &'g Grid,
    points: usize,
}

impl Walk<'_> {
    fn tick(&mut self) -> Result<(), SemError> {
        self.points += 1;
        if self.points > self.grid.budget {
            return Err(SemError::GridTooLarge {
                needed: self.points,
                budget: self.grid.budget,
            });
        }
        Ok(())
    }

    fn ge<N: Natural>(
        &mut self,
        a: &Value<N>,
        b: &Value<N>,
        shape: &SemType,
        path: &mut String,
    ) -> Result<Option<Witness>, SemError> {
        let fail = |path: &str| {
            Ok(Some(Witness {
                location: if path.is_empty() { "value".into() } else { path.to_string() },
                left: a.to_string(),
                right: b.to_string(),
            }))
        };
        match (shape, a, b) {
            (SemType::Unit, Value::Unit, Value::Unit) => {
                self.tick()?;
                Ok(None)
            }
            (SemType::Nat, Value::Nat(x), Value::Nat(y)) => {
                self.tick()?;
                if x >= y {
                    Ok(None)
                } else {
                    fail(path)
                }
            }
            (SemType::Tuple(ts), Value::Tuple(xs), Value::Tuple(ys))
                if ts.len() == xs.len() && ts.len() == ys.len() =>
            {
                for (i, t) in ts.iter().enumerate() {
                    let len = path.len();
                    path.push_str(&format!(".{}", i + 1));
                    let r = self.ge(&xs[i], &ys[i], t, path)?;
                    path.truncate(len);
                    if r.is_some() {
                        return Ok(r);
                    }
                }
                Ok(None)
            }
            (SemType::Fun(dom, cod), Value::Fun(_), Value::Fun(_)) => {
                for arg in sample_values::<N>(dom, self.grid)? {
                    let len = path.len();
                    path.push_str(&format!("({arg})"));
                    let fa = a.apply(arg.clone())?;
                    let fb = b.apply(arg)?;
                    let r = self.ge(&fa, &fb, cod, path)?;
                    path.truncate(len);
                    if r.is_some() {
                        return Ok(r);
                    }
                }
                Ok(None)
            }
            _ => Err(SemError::Shape(format!(
                "cannot compare `{a}` and `{b}` at shape {shape}"
            ))),
        }
    }
}

/// Component-wise `a ≥ b` at `shape`.
pub fn compare<N: Natural>(
    a: &Value<N>,
    b: &Value<N>,
    shape: &SemType,
    grid: &Grid,
) -> Result<Verdict, SemError> {
    let mut walk = Walk { grid, points: 0 };
    Ok(match walk.ge(a, b, shape, &mut String::new())? {
        None => Verdict::HoldsOnSamples {
            samples: walk.points,
        },
        Some(w) => Verdict::Fails(w),
    })
}

/// Compares two cost-size tuples of the type whose shape is `shape`.
pub fn compare_tuples<N: Natural>(
    a: &CsTuple<N>,
    b: &CsTuple<N>,
    shape: &TypeShape,
    order: Order,
    grid: &Grid,
) -> Result<Verdict, SemError> {
    let mut walk = Walk { grid, points: 1 };
    let cost_ok = match order {
        Order::Ge => a.cost >= b.cost,
        Order::StrictCost => a.cost > b.cost,
    };
    if !cost_ok {
        return Ok(Verdict::Fails(Witness {
            location: "cost number".into(),
            left: a.cost.to_string(),
            right: b.cost.to_string(),
        }));
    }
    let mut path = "cost function".to_string();
    if let Some(w) = walk.ge(&a.cost_fn, &b.cost_fn, &shape.cost_fn, &mut path)? {
        return Ok(Verdict::Fails(w));
    }
    let mut path = "size".to_string();
    if let Some(w) = walk.ge(&a.size, &b.size, &shape.size, &mut path)? {
        return Ok(Verdict::Fails(w));
    }
    Ok(Verdict::HoldsOnSamples {
        samples: walk.points,
    })
}
