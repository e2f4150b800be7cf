//! The example systems shipped with the crate, with their interpretations.

use crate::parse::{parse_interpretation, parse_trs};
use crate::semantics::{Interpretation, Natural};
use crate::trs::Trs;

pub const ADD_TRS: &str = include_str!("../systems/add.trs");
pub const ADD_CSINT: &str = include_str!("../systems/add.csint");
pub const MAP_TRS: &str = include_str!("../systems/map.trs");
pub const MAP_CSINT: &str = include_str!("../systems/map.csint");

/// Addition on unary naturals.
pub fn add_system() -> Trs {
    parse_trs(ADD_TRS).expect("bundled add.trs parses")
}

pub fn add_interpretation<N: Natural>() -> Interpretation<N> {
    parse_interpretation(add_system().signature(), ADD_CSINT).expect("bundled add.csint parses")
}

/// `map` over lists of naturals, plus addition.
pub fn map_system() -> Trs {
    parse_trs(MAP_TRS).expect("bundled map.trs parses")
}

pub fn map_interpretation<N: Natural>() -> Interpretation<N> {
    parse_interpretation(map_system().signature(), MAP_CSINT).expect("bundled map.csint parses")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_term;
    use crate::semantics::{interpret_term, Valuation, Value};

    #[test]
    fn bundled_files_load() {
        assert_eq!(add_system().rules().len(), 2);
        assert_eq!(map_system().rules().len(), 4);
        add_interpretation::<u64>();
        map_interpretation::<num_bigint::BigUint>();
    }

    #[test]
    fn numerals_and_lists() {
        let trs = map_system();
        let interp = map_interpretation::<u64>();
        let at = |src: &str| {
            let t = parse_term(trs.signature(), src).unwrap();
            interpret_term(&t, &interp, &Valuation::new()).unwrap()
        };
        let three = at("3");
        assert_eq!(three.to_string(), "⟨(0, u), 4⟩");
        let list = at("[1; 7; 9]");
        assert_eq!(list.cost, 0);
        assert!(list.size.same(&Value::pair(Value::nat(3), Value::nat(10))));
    }

    #[test]
    fn partially_applied_addition() {
        let trs = add_system();
        let interp = add_interpretation::<u64>();
        let t = parse_term(trs.signature(), "add (add 2 3)").unwrap();
        let v = interpret_term(&t, &interp, &Valuation::new()).unwrap();
        assert_eq!(v.to_string(), "⟨(4, λλy. (y.2, u)), λλy. 7 + y⟩");
        let t = parse_term(trs.signature(), "add 0 (add 0 0)").unwrap();
        let v = interpret_term(&t, &interp, &Valuation::new()).unwrap();
        assert_eq!(v.to_string(), "⟨(3, u), 3⟩");
    }
}
