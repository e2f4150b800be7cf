use std::collections::BTreeSet;
use std::fmt::Write;

use crate::error::TermError;
use crate::parse::lexer::{tokenize, Cursor, Tok};
use crate::parse::term::{parse_surface, parse_type, Elaborator};
use crate::parse::{ParseError, ParseErrorKind, Pos};
use crate::term::Term;
use crate::trs::{Rule, Trs};
use crate::types::Signature;

fn term_error(pos: Pos, e: TermError) -> ParseError {
    let kind = match e {
        TermError::Pattern { .. } => ParseErrorKind::Pattern,
        TermError::DuplicateSymbol(_) => ParseErrorKind::DuplicateSymbol,
        _ => ParseErrorKind::Type,
    };
    ParseError::new(kind, pos, e.to_string())
}

fn symbol_name(cur: &mut Cursor) -> Result<(String, Pos), ParseError> {
    match cur.peek().clone() {
        Tok::Ident(s) => Ok((s, cur.next().pos)),
        Tok::Number(n) if n == "0" => Ok((n, cur.next().pos)),
        Tok::Number(n) => Err(ParseError::new(
            ParseErrorKind::Syntax,
            cur.pos(),
            format!("`{n}` cannot be a symbol name; numerals other than 0 are sugar for s (... 0)"),
        )),
        _ => Err(cur.unexpected("a symbol name")),
    }
}

/// Reads a `.trs` file. Declarations must come before their first use.
pub fn parse_trs(text: &str) -> Result<Trs, ParseError> {
    let mut cur = Cursor::new(tokenize(text)?);
    let mut sig = Signature::new();
    let mut constructors = BTreeSet::new();
    let mut rules = Vec::new();
    let mut positions = Vec::new();
    loop {
        cur.skip_newlines();
        let (word, pos) = match cur.peek() {
            Tok::Eof => break,
            Tok::Ident(_) => cur.ident()?,
            _ => return Err(cur.unexpected("`type`, `cons`, `fun` or `rule`")),
        };
        match word.as_str() {
            "type" => {
                let (name, p) = cur.ident()?;
                sig.add_base_type(name).map_err(|e| term_error(p, e))?;
            }
            "cons" | "fun" => {
                let (name, p) = symbol_name(&mut cur)?;
                cur.expect(&Tok::Colon)?;
                let ty = parse_type(&mut cur, &sig)?;
                sig.add_symbol(name.clone(), ty).map_err(|e| term_error(p, e))?;
                if word == "cons" {
                    constructors.insert(name);
                }
            }
            "rule" => {
                let mut el = Elaborator::new(&sig, true);
                let lhs = parse_surface(&mut cur, &sig)?;
                let arrow = cur.expect(&Tok::FatArrow)?;
                let rhs = parse_surface(&mut cur, &sig)?;
                let l = el.term(&lhs)?;
                let r = el.term(&rhs)?;
                el.unify_types(&l, &r)?;
                let (l, _) = el.complete(&l)?;
                let (r, _) = el.complete(&r)?;
                if let Some(f) = l.head_symbol() {
                    if constructors.contains(f) {
                        return Err(ParseError::new(
                            ParseErrorKind::Pattern,
                            pos,
                            format!("`{f}` is declared with `cons` and cannot head a rule"),
                        ));
                    }
                }
                rules.push(Rule::new(l, r));
                positions.push((pos, arrow));
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
    Trs::new_indexed(sig, rules).map_err(|(i, e)| term_error(positions[i].0, e))
}

/// Reads a closed term over `sig`.
pub fn parse_term(sig: &Signature, text: &str) -> Result<Term, ParseError> {
    let mut cur = Cursor::new(tokenize(text)?);
    cur.skip_newlines();
    let s = parse_surface(&mut cur, sig)?;
    cur.skip_newlines();
    if *cur.peek() != Tok::Eof {
        return Err(cur.unexpected("end of input"));
    }
    let mut el = Elaborator::new(sig, false);
    let p = el.term(&s)?;
    let pos = p.pos;
    let (t, _) = el.complete(&p)?;
    t.type_in(sig).map_err(|e| term_error(pos, e))?;
    Ok(t)
}

/// Renders a system in the `.trs` syntax. Symbols without rules are
/// written as `cons`.
pub fn pretty_trs(trs: &Trs) -> String {
    let mut out = String::new();
    let sig = trs.signature();
    for b in sig.base_types() {
        writeln!(out, "type {b}").unwrap();
    }
    for (f, ty) in sig.symbols() {
        let word = if trs.is_defined(f) { "fun" } else { "cons" };
        writeln!(out, "{word} {f} : {ty}").unwrap();
    }
    for r in trs.rules() {
        writeln!(out, "rule {} => {}", r.lhs.to_source(), r.rhs.to_source()).unwrap();
    }
    out
}
