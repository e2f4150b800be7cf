use std::collections::BTreeMap;
use std::fmt::Write;

use crate::parse::lexer::{tokenize, Cursor, Tok};
use crate::parse::{ParseError, ParseErrorKind, Pos};
use crate::semantics::{
    eval_closed, type_interpretation, Interpretation, InterpretationKey, MonoExpr, Natural, SemError,
};
use crate::types::Signature;

fn number(cur: &mut Cursor) -> Result<u64, ParseError> {
    let pos = cur.pos();
    match cur.peek().clone() {
        Tok::Number(n) => {
            cur.next();
            n.parse().map_err(|_| {
                ParseError::new(ParseErrorKind::Syntax, pos, format!("number `{n}` is too large"))
            })
        }
        _ => Err(cur.unexpected("a number")),
    }
}

fn binder(cur: &mut Cursor) -> Result<String, ParseError> {
    let (x, pos) = cur.ident()?;
    if x == "u" || x == "max" {
        return Err(ParseError::new(
            ParseErrorKind::Syntax,
            pos,
            format!("`{x}` is reserved"),
        ));
    }
    Ok(x)
}

/// `expr := \x y. expr | sum`, `sum := prod (+ prod)*`, `prod := app (* app)*`,
/// `app := postfix+`, `postfix := atom (. k)*`.
fn expr(cur: &mut Cursor) -> Result<MonoExpr, ParseError> {
    if cur.eat(&Tok::Lambda) {
        let mut xs = vec![binder(cur)?];
        while !cur.eat(&Tok::Dot) {
            xs.push(binder(cur)?);
        }
        let body = expr(cur)?;
        return Ok(xs.into_iter().rev().fold(body, |b, x| MonoExpr::lam(x, b)));
    }
    let mut e = product(cur)?;
    while cur.eat(&Tok::Plus) {
        e = MonoExpr::add(e, product(cur)?);
    }
    Ok(e)
}

fn product(cur: &mut Cursor) -> Result<MonoExpr, ParseError> {
    let mut e = application(cur)?;
    while cur.eat(&Tok::Star) {
        e = MonoExpr::mul(e, application(cur)?);
    }
    Ok(e)
}

fn application(cur: &mut Cursor) -> Result<MonoExpr, ParseError> {
    let mut e = postfix(cur)?;
    while matches!(cur.peek(), Tok::Ident(_) | Tok::Number(_) | Tok::LParen) {
        e = MonoExpr::app(e, postfix(cur)?);
    }
    Ok(e)
}

fn postfix(cur: &mut Cursor) -> Result<MonoExpr, ParseError> {
    let mut e = atom(cur)?;
    while cur.eat(&Tok::Dot) {
        let pos = cur.pos();
        let k = number(cur)?;
        if k == 0 {
            return Err(ParseError::new(
                ParseErrorKind::Syntax,
                pos,
                "components are numbered from 1",
            ));
        }
        e = MonoExpr::proj(e, k as usize);
    }
    Ok(e)
}

fn atom(cur: &mut Cursor) -> Result<MonoExpr, ParseError> {
    match cur.peek().clone() {
        Tok::Number(_) => Ok(MonoExpr::Nat(number(cur)?)),
        Tok::Ident(x) if x == "u" => {
            cur.next();
            Ok(MonoExpr::Unit)
        }
        Tok::Ident(x) if x == "max" => {
            cur.next();
            cur.expect(&Tok::LParen)?;
            let mut args = vec![expr(cur)?];
            while cur.eat(&Tok::Comma) {
                args.push(expr(cur)?);
            }
            let close = cur.pos();
            cur.expect(&Tok::RParen)?;
            if args.len() < 2 {
                return Err(ParseError::new(
                    ParseErrorKind::Syntax,
                    close,
                    "max needs at least two arguments",
                ));
            }
            let last = args.pop().unwrap();
            Ok(args.into_iter().rev().fold(last, |acc, a| MonoExpr::max(a, acc)))
        }
        Tok::Ident(x) => {
            cur.next();
            Ok(MonoExpr::Var(x))
        }
        Tok::LParen => {
            cur.next();
            let first = expr(cur)?;
            if cur.eat(&Tok::RParen) {
                return Ok(first);
            }
            let mut items = vec![first];
            while cur.eat(&Tok::Comma) {
                if *cur.peek() == Tok::RParen {
                    break;
                }
                items.push(expr(cur)?);
            }
            cur.expect(&Tok::RParen)?;
            Ok(MonoExpr::Tuple(items))
        }
        _ => Err(cur.unexpected("an expression")),
    }
}

/// Reads a monotone expression such as `\x q. (q.1 + 1, max(x, q.2))`.
pub fn parse_expr(text: &str) -> Result<MonoExpr, ParseError> {
    let mut cur = Cursor::new(tokenize(text)?);
    cur.skip_newlines();
    let e = expr(&mut cur)?;
    cur.skip_newlines();
    if *cur.peek() != Tok::Eof {
        return Err(cur.unexpected("end of input"));
    }
    Ok(e)
}

struct Entry {
    name: String,
    pos: Pos,
    cost: MonoExpr,
    size: MonoExpr,
}

fn sem_error(pos: Pos, e: SemError) -> ParseError {
    let kind = match e {
        SemError::MissingKey(_) | SemError::InvalidKey(_) => ParseErrorKind::MissingKey,
        SemError::MissingSymbol(_) => ParseErrorKind::MissingSymbol,
        SemError::UnknownSymbol(_) => ParseErrorKind::Type,
        SemError::Duplicate(_) => ParseErrorKind::DuplicateSymbol,
        _ => ParseErrorKind::Shape,
    };
    ParseError::new(kind, pos, e.to_string())
}

/// Reads a `.csint` file for the symbols of `sig`. Every base type needs a
/// `key` line and every symbol an `int` line, in any order.
pub fn parse_interpretation<N: Natural>(sig: &Signature, text: &str) -> Result<Interpretation<N>, ParseError> {
    let mut cur = Cursor::new(tokenize(text)?);
    let mut key = InterpretationKey::new();
    let mut key_pos = BTreeMap::new();
    let mut entries: Vec<Entry> = Vec::new();
    loop {
        cur.skip_newlines();
        let (word, pos) = match cur.peek() {
            Tok::Eof => break,
            Tok::Ident(_) => cur.ident()?,
            _ => return Err(cur.unexpected("`key` or `int`")),
        };
        match word.as_str() {
            "key" => {
                let (base, p) = cur.ident()?;
                cur.expect(&Tok::Equals)?;
                let dim_pos = cur.pos();
                let dim = number(&mut cur)?;
                if !sig.has_base_type(&base) {
                    return Err(ParseError::new(
                        ParseErrorKind::Type,
                        p,
                        format!("unknown base type `{base}`"),
                    ));
                }
                if key_pos.insert(base.clone(), p).is_some() {
                    return Err(ParseError::new(
                        ParseErrorKind::Syntax,
                        p,
                        format!("second key for `{base}`"),
                    ));
                }
                key.set(base, dim as usize).map_err(|e| sem_error(dim_pos, e))?;
            }
            "int" => {
                let (name, p) = match cur.peek().clone() {
                    Tok::Number(n) => (n, cur.next().pos),
                    _ => cur.ident()?,
                };
                cur.expect(&Tok::Equals)?;
                cur.expect(&Tok::LAngle)?;
                let cost = expr(&mut cur)?;
                cur.expect(&Tok::Comma)?;
                let size = expr(&mut cur)?;
                cur.expect(&Tok::RAngle)?;
                if entries.iter().any(|e| e.name == name) {
                    return Err(ParseError::new(
                        ParseErrorKind::DuplicateSymbol,
                        p,
                        format!("symbol `{name}` is interpreted twice"),
                    ));
                }
                if !sig.has_symbol(&name) {
                    return Err(ParseError::new(
                        ParseErrorKind::Type,
                        p,
                        format!("unknown symbol `{name}`"),
                    ));
                }
                entries.push(Entry { name, pos, cost, size });
            }
            other => {
                return Err(ParseError::new(
                    ParseErrorKind::Syntax,
                    pos,
                    format!("unknown statement `{other}`"),
                ))
            }
        }
        cur.end_statement()?;
    }
    let end = cur.pos();
    key.check_total(sig).map_err(|e| sem_error(end, e))?;
    for e in &entries {
        let ty = sig.symbol_type(&e.name).expect("checked above");
        let shape = type_interpretation(ty, &key).map_err(|err| sem_error(e.pos, err))?;
        let in_symbol = |err: SemError| {
            let mut pe = sem_error(e.pos, err);
            pe.message = format!("in `{}`: {}", e.name, pe.message);
            pe
        };
        e.cost.check(&shape.cost(), &mut Vec::new()).map_err(in_symbol)?;
        e.size.check(&shape.size, &mut Vec::new()).map_err(in_symbol)?;
        eval_closed::<N>(&e.cost).map_err(in_symbol)?;
        eval_closed::<N>(&e.size).map_err(in_symbol)?;
    }
    if let Some((f, _)) = sig.symbols().find(|(f, _)| !entries.iter().any(|e| e.name == *f)) {
        return Err(ParseError::new(
            ParseErrorKind::MissingSymbol,
            end,
            format!("no interpretation for symbol `{f}`"),
        ));
    }
    Interpretation::new(
        sig,
        key,
        entries.into_iter().map(|e| (e.name, e.cost, e.size)),
    )
    .map_err(|e| sem_error(end, e))
}

/// Renders an interpretation in the `.csint` syntax.
pub fn pretty_interpretation<N: Natural>(interp: &Interpretation<N>) -> String {
    let mut out = String::new();
    for (b, k) in interp.key().iter() {
        writeln!(out, "key {b} = {k}").unwrap();
    }
    for (f, s) in interp.symbols() {
        writeln!(out, "int {f} = < {}, {} >", s.cost, s.size).unwrap();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_trs;
    use crate::semantics::Value;

    const MAP_TRS: &str = "\
type nat
type list
cons 0 : nat
cons s : nat -> nat
cons nil : list
cons cons : nat -> list -> list
fun add : nat -> nat -> nat
fun map : (nat -> nat) -> list -> list
rule add x 0 => x
rule add x (s y) => s (add x y)
rule map F nil => nil
rule map F (cons x q) => cons (F x) (map F q)
";

    const MAP_INT: &str = "\
key nat = 1
key list = 2
int 0 = < (0, u), 1 >
int s = < (0, \\x. (0, u)), \\x. x + 1 >
int nil = < (0, u), (0, 0) >
int cons = < (0, \\x. (0, \\q. (0, u))), \\x q. (q.1 + 1, max(x, q.2)) >
int add = < (0, \\x. (0, \\y. (y.2, u))), \\x y. x + y >
int map = < (0, \\F. (0, \\q. (q.2.1 + (F.1 (u, q.2.2)).1 * q.2.1 + 1, u))),
            \\F q. (q.1, F q.2) >
";

    #[test]
    fn expressions_round_trip_through_display() {
        for src in [
            "\\x q. (q.1 + 1, max(x, q.2))",
            "\\F. (0, \\q. (q.2.1 + (F.1 (u, q.2.2)).1 * q.2.1 + 1, u))",
            "(1,)",
            "max(1, 2, 3) * (a + b)",
            "(\\x. x) 3",
        ] {
            let e = parse_expr(src).unwrap();
            let again = parse_expr(&e.to_string()).unwrap();
            assert!(e.alpha_eq(&again), "{src} printed as {e}");
        }
    }

    #[test]
    fn reads_the_map_interpretation() {
        let trs = parse_trs(MAP_TRS).unwrap();
        let interp = parse_interpretation::<u64>(trs.signature(), MAP_INT).unwrap();
        let nil = &interp.symbol("nil").unwrap().value;
        assert!(nil.size.same(&Value::pair(Value::nat(0), Value::nat(0))));
        let printed = pretty_interpretation(&interp);
        let again = parse_interpretation::<u64>(trs.signature(), &printed).unwrap();
        for ((f, a), (g, b)) in interp.symbols().zip(again.symbols()) {
            assert_eq!(f, g);
            assert!(a.cost.alpha_eq(&b.cost) && a.size.alpha_eq(&b.size));
        }
    }

    #[test]
    fn errors_carry_kinds() {
        let trs = parse_trs(MAP_TRS).unwrap();
        let sig = trs.signature();
        let without_list_key = MAP_INT.replace("key list = 2\n", "");
        let e = parse_interpretation::<u64>(sig, &without_list_key).unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::MissingKey);
        let without_add = MAP_INT.replace("int add", "int add2");
        assert_eq!(
            parse_interpretation::<u64>(sig, &without_add).unwrap_err().kind,
            ParseErrorKind::Type
        );
        let missing: String = MAP_INT.lines().filter(|l| !l.starts_with("int 0")).map(|l| format!("{l}\n")).collect();
        assert_eq!(
            parse_interpretation::<u64>(sig, &missing).unwrap_err().kind,
            ParseErrorKind::MissingSymbol
        );
        let bad_shape = MAP_INT.replace("int nil = < (0, u), (0, 0) >", "int nil = < (0, u), 1 >");
        let e = parse_interpretation::<u64>(sig, &bad_shape).unwrap_err();
        assert_eq!((e.kind, e.pos.line), (ParseErrorKind::Shape, 5));
        let twice = format!("{MAP_INT}int 0 = < (0, u), 1 >\n");
        assert_eq!(
            parse_interpretation::<u64>(sig, &twice).unwrap_err().kind,
            ParseErrorKind::DuplicateSymbol
        );
    }
}
