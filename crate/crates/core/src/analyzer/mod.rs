//! Bound extraction, rule verification on sample grids, and the comparison
//! of predicted bounds with measured derivation heights.

mod gen;

use std::fmt::{self, Write};

use serde::Serialize;

use crate::engine::{derivation_height, Fuel};
use crate::semantics::{
    compare_tuples, interpret_term, sample_values, type_interpretation, Grid, Interpretation, Natural, Order,
    SemError, Valuation, Value, Verdict,
};
use crate::term::{Term, Var};
use crate::trs::Trs;

pub use gen::TermGenerator;

/// The cost number of `t` under the empty valuation: an upper bound on its
/// derivation height.
pub fn extract_bound<N: Natural>(t: &Term, interp: &Interpretation<N>) -> Result<N, SemError> {
    Ok(interpret_term(t, interp, &Valuation::new())?.cost)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RuleEntry {
    /// One-based position in the file.
    pub index: usize,
    pub rule: String,
    pub holds: bool,
    /// Number of compared points, summed over all valuations tried.
    pub samples: usize,
    pub valuations: usize,
    pub witness: Option<String>,
    pub witness_valuation: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TermEntry {
    pub index: usize,
    pub term: String,
    pub dh: Option<u64>,
    /// Decimal, so that arbitrary-precision bounds survive serialization.
    pub bound: Option<String>,
    pub gap: Option<String>,
    /// `dh <= bound`; false when either side could not be computed.
    pub ok: bool,
    pub error: Option<String>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    pub grid: Option<String>,
    pub rules: Vec<RuleEntry>,
    pub terms: Vec<TermEntry>,
}

impl VerificationReport {
    pub fn all_ok(&self) -> bool {
        self.rules.iter().all(|r| r.holds) && self.terms.iter().all(|t| t.ok)
    }

    /// Terms whose measured height exceeds the bound.
    pub fn violations(&self) -> impl Iterator<Item = &TermEntry> {
        self.terms.iter().filter(|t| t.dh.is_some() && t.bound.is_some() && !t.ok)
    }

    /// Tab-separated table, one line per rule or term.
    pub fn to_table(&self) -> String {
        let mut out = String::new();
        writeln!(out, "kind\tindex\titem\tresult\tdetail").unwrap();
        for r in &self.rules {
            let detail = match (&r.witness, &r.witness_valuation) {
                (Some(w), Some(v)) => format!("{w} under {v}"),
                _ => format!("{} valuations, {} points", r.valuations, r.samples),
            };
            let result = if r.holds { "holds-on-samples" } else { "FAILS" };
            writeln!(out, "rule\t{}\t{}\t{result}\t{detail}", r.index, r.rule).unwrap();
        }
        for t in &self.terms {
            let result = if t.ok {
                "ok"
            } else if t.error.is_some() {
                "error"
            } else {
                "VIOLATION"
            };
            let mut detail = String::new();
            if let Some(dh) = t.dh {
                write!(detail, "dh={dh}").unwrap();
            }
            if let Some(b) = &t.bound {
                write!(detail, " bound={b}").unwrap();
            }
            if let Some(g) = &t.gap {
                write!(detail, " gap={g}").unwrap();
            }
            if let Some(e) = &t.error {
                write!(detail, " {e}").unwrap();
            }
            writeln!(out, "term\t{}\t{}\t{result}\t{}", t.index, t.term, detail.trim()).unwrap();
        }
        out
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_table())
    }
}

/// A sampled (cost function, size) pair.
type SamplePoint<N> = (Value<N>, Value<N>);

/// Sample points for one variable: every pairing of a sampled cost
/// function with a sampled size.
fn variable_samples<N: Natural>(
    x: &Var,
    interp: &Interpretation<N>,
    grid: &Grid,
) -> Result<Vec<SamplePoint<N>>, SemError> {
    let shape = type_interpretation(&x.ty, interp.key())?;
    let costs = sample_values(&shape.cost_fn, grid)?;
    let sizes = sample_values(&shape.size, grid)?;
    Ok(costs
        .iter()
        .flat_map(|c| sizes.iter().map(move |s| (c.clone(), s.clone())))
        .collect())
}

/// Checks every rule `l => r`: for each sampled valuation of the variables
/// of `l`, the cost number of `⟦l⟧` must exceed that of `⟦r⟧`, and the cost
/// function and size of `⟦l⟧` must be at least those of `⟦r⟧`.
pub fn verify_rules<N: Natural>(
    trs: &Trs,
    interp: &Interpretation<N>,
    grid: &Grid,
) -> Result<VerificationReport, SemError> {
    let mut report = VerificationReport {
        grid: Some(grid.to_string()),
        ..Default::default()
    };
    for (i, rule) in trs.rules().iter().enumerate() {
        let vars: Vec<Var> = rule.lhs.free_vars().into_iter().collect();
        let per_var = vars
            .iter()
            .map(|x| variable_samples(x, interp, grid))
            .collect::<Result<Vec<_>, _>>()?;
        let total = per_var
            .iter()
            .try_fold(1usize, |acc, s| acc.checked_mul(s.len()))
            .unwrap_or(usize::MAX);
        if total > grid.budget {
            return Err(SemError::GridTooLarge {
                needed: total,
                budget: grid.budget,
            });
        }
        let ty = rule.type_in(trs.signature()).expect("rules are well-typed");
        let shape = type_interpretation(&ty, interp.key())?;
        let mut entry = RuleEntry {
            index: i + 1,
            rule: rule.to_string(),
            holds: true,
            samples: 0,
            valuations: 0,
            witness: None,
            witness_valuation: None,
        };
        let mut odometer = vec![0usize; vars.len()];
        'valuations: loop {
            let mut alpha = Valuation::new();
            for ((x, samples), &k) in vars.iter().zip(&per_var).zip(&odometer) {
                let (c, s) = samples[k].clone();
                alpha.bind_parts(x.clone(), c, s);
            }
            let left = interpret_term(&rule.lhs, interp, &alpha)?;
            let right = interpret_term(&rule.rhs, interp, &alpha)?;
            entry.valuations += 1;
            match compare_tuples(&left, &right, &shape, Order::StrictCost, grid)? {
                Verdict::HoldsOnSamples { samples } => entry.samples += samples,
                Verdict::Fails(w) => {
                    entry.holds = false;
                    entry.witness = Some(w.to_string());
                    entry.witness_valuation = Some(alpha.to_string());
                    break 'valuations;
                }
            }
            let mut d = 0;
            loop {
                if d == odometer.len() {
                    break 'valuations;
                }
                odometer[d] += 1;
                if odometer[d] < per_var[d].len() {
                    break;
                }
                odometer[d] = 0;
                d += 1;
            }
        }
        report.rules.push(entry);
    }
    Ok(report)
}

/// Measures the derivation height of each ground term and compares it with
/// the extracted bound. Failures are recorded per term.
pub fn bound_vs_actual<N: Natural>(
    trs: &Trs,
    interp: &Interpretation<N>,
    terms: &[Term],
    fuel: Fuel,
) -> VerificationReport {
    let mut report = VerificationReport::default();
    for (i, t) in terms.iter().enumerate() {
        let mut entry = TermEntry {
            index: i + 1,
            term: t.to_string(),
            dh: None,
            bound: None,
            gap: None,
            ok: false,
            error: None,
        };
        let mut errors = Vec::new();
        match derivation_height(t, trs, fuel) {
            Ok(dh) => entry.dh = Some(dh),
            Err(e) => errors.push(e.to_string()),
        }
        match extract_bound(t, interp) {
            Ok(n) => {
                if let Some(dh) = entry.dh {
                    let dh = N::from_u64_lossless(dh).expect("u64 fits every scalar");
                    entry.ok = dh <= n;
                    if entry.ok {
                        entry.gap = Some((n.clone() - dh).to_string());
                    }
                }
                entry.bound = Some(n.to_string());
            }
            Err(e) => errors.push(e.to_string()),
        }
        if !errors.is_empty() {
            entry.error = Some(errors.join("; "));
        }
        report.terms.push(entry);
    }
    report
}
