//! Surface syntax for terms and types, and elaboration into typed terms.
//!
//! Binder and rule-variable types are inferred by first-order unification;
//! `\x:T. e` annotations are accepted but rarely needed.

use std::collections::BTreeMap;

use crate::parse::lexer::{Cursor, Tok};
use crate::parse::{ParseError, ParseErrorKind, Pos};
use crate::term::{Term, Var};
use crate::types::{Signature, SimpleType};

#[derive(Clone, Debug)]
pub enum Surface {
    Name(String, Pos),
    Num(u64, Pos),
    List(Vec<Surface>, Pos),
    App(Box<Surface>, Box<Surface>),
    Lam(String, Option<SimpleType>, Pos, Box<Surface>),
}

pub fn parse_type(cur: &mut Cursor, sig: &Signature) -> Result<SimpleType, ParseError> {
    let dom = match cur.peek().clone() {
        Tok::LParen => {
            cur.next();
            let t = parse_type(cur, sig)?;
            cur.expect(&Tok::RParen)?;
            t
        }
        Tok::Ident(b) => {
            let pos = cur.next().pos;
            if !sig.has_base_type(&b) {
                return Err(ParseError::new(
                    ParseErrorKind::Type,
                    pos,
                    format!("unknown base type `{b}`"),
                ));
            }
            SimpleType::Base(b)
        }
        _ => return Err(cur.unexpected("a type")),
    };
    if cur.eat(&Tok::Arrow) {
        Ok(SimpleType::arrow(dom, parse_type(cur, sig)?))
    } else {
        Ok(dom)
    }
}

fn starts_atom(tok: &Tok) -> bool {
    matches!(
        tok,
        Tok::Ident(_) | Tok::Number(_) | Tok::LParen | Tok::LBracket
    )
}

/// `term := \binders. term | atom atom* [lambda]`
pub fn parse_surface(cur: &mut Cursor, sig: &Signature) -> Result<Surface, ParseError> {
    if *cur.peek() == Tok::Lambda {
        return parse_lambda(cur, sig);
    }
    let mut head = parse_atom(cur, sig)?;
    loop {
        if starts_atom(cur.peek()) {
            let arg = parse_atom(cur, sig)?;
            head = Surface::App(Box::new(head), Box::new(arg));
        } else if *cur.peek() == Tok::Lambda {
            let arg = parse_lambda(cur, sig)?;
            return Ok(Surface::App(Box::new(head), Box::new(arg)));
        } else {
            return Ok(head);
        }
    }
}

fn parse_lambda(cur: &mut Cursor, sig: &Signature) -> Result<Surface, ParseError> {
    cur.expect(&Tok::Lambda)?;
    let mut binders = Vec::new();
    loop {
        let (x, pos) = cur.ident()?;
        let ann = if cur.eat(&Tok::Colon) {
            Some(parse_type(cur, sig)?)
        } else {
            None
        };
        binders.push((x, ann, pos));
        if cur.eat(&Tok::Dot) {
            break;
        }
    }
    let body = parse_surface(cur, sig)?;
    Ok(binders
        .into_iter()
        .rev()
        .fold(body, |b, (x, ann, pos)| Surface::Lam(x, ann, pos, Box::new(b))))
}

fn parse_atom(cur: &mut Cursor, sig: &Signature) -> Result<Surface, ParseError> {
    let pos = cur.pos();
    match cur.peek().clone() {
        Tok::Ident(x) => {
            cur.next();
            Ok(Surface::Name(x, pos))
        }
        Tok::Number(n) => {
            cur.next();
            let n: u64 = n.parse().map_err(|_| {
                ParseError::new(ParseErrorKind::Syntax, pos, format!("numeral `{n}` too large"))
            })?;
            Ok(Surface::Num(n, pos))
        }
        Tok::LParen => {
            cur.next();
            let t = parse_surface(cur, sig)?;
            cur.expect(&Tok::RParen)?;
            Ok(t)
        }
        Tok::LBracket => {
            cur.next();
            let mut items = Vec::new();
            if !cur.eat(&Tok::RBracket) {
                loop {
                    items.push(parse_surface(cur, sig)?);
                    if cur.eat(&Tok::RBracket) {
                        break;
                    }
                    cur.expect(&Tok::Semi)?;
                }
            }
            Ok(Surface::List(items, pos))
        }
        _ => Err(cur.unexpected("a term")),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Ty {
    Meta(usize),
    Base(String),
    Arrow(Box<Ty>, Box<Ty>),
}

impl Ty {
    fn from_simple(t: &SimpleType) -> Ty {
        match t {
            SimpleType::Base(b) => Ty::Base(b.clone()),
            SimpleType::Arrow(d, c) => Ty::Arrow(Box::new(Ty::from_simple(d)), Box::new(Ty::from_simple(c))),
        }
    }
}

/// Elaborated term whose variable types may still contain metavariables.
enum ETerm {
    Var(String, Ty),
    Sym(String),
    App(Box<ETerm>, Box<ETerm>),
    Lam(String, Ty, Box<ETerm>),
}

/// Elaboration state: metavariable solutions and the free variables seen so far.
pub struct Elaborator<'s> {
    sig: &'s Signature,
    metas: Vec<Option<Ty>>,
    allow_free: bool,
    free: BTreeMap<String, (Ty, Pos)>,
}

impl<'s> Elaborator<'s> {
    /// `allow_free` lets unknown names become free variables (rule syntax).
    pub fn new(sig: &'s Signature, allow_free: bool) -> Self {
        Elaborator {
            sig,
            metas: Vec::new(),
            allow_free,
            free: BTreeMap::new(),
        }
    }

    fn fresh(&mut self) -> Ty {
        self.metas.push(None);
        Ty::Meta(self.metas.len() - 1)
    }

    fn resolve(&self, t: &Ty) -> Ty {
        match t {
            Ty::Meta(i) => match &self.metas[*i] {
                Some(t) => self.resolve(t),
                None => t.clone(),
            },
            Ty::Base(_) => t.clone(),
            Ty::Arrow(d, c) => Ty::Arrow(Box::new(self.resolve(d)), Box::new(self.resolve(c))),
        }
    }

    fn occurs(&self, m: usize, t: &Ty) -> bool {
        match self.resolve(t) {
            Ty::Meta(n) => n == m,
            Ty::Base(_) => false,
            Ty::Arrow(d, c) => self.occurs(m, &d) || self.occurs(m, &c),
        }
    }

    fn unify(&mut self, a: &Ty, b: &Ty) -> bool {
        let (a, b) = (self.resolve(a), self.resolve(b));
        match (a, b) {
            (Ty::Meta(i), Ty::Meta(j)) if i == j => true,
            (Ty::Meta(i), t) | (t, Ty::Meta(i)) => {
                if self.occurs(i, &t) {
                    return false;
                }
                self.metas[i] = Some(t);
                true
            }
            (Ty::Base(x), Ty::Base(y)) => x == y,
            (Ty::Arrow(d1, c1), Ty::Arrow(d2, c2)) => self.unify(&d1, &d2) && self.unify(&c1, &c2),
            _ => false,
        }
    }

    fn show(&self, t: &Ty) -> String {
        match self.resolve(t) {
            Ty::Meta(_) => "?".into(),
            Ty::Base(b) => b,
            Ty::Arrow(d, c) => {
                let d = self.resolve(&d);
                let ds = self.show(&d);
                if matches!(d, Ty::Arrow(..)) {
                    format!("({ds}) -> {}", self.show(&c))
                } else {
                    format!("{ds} -> {}", self.show(&c))
                }
            }
        }
    }

    fn symbol(&self, name: &str, pos: Pos, why: &str) -> Result<(ETerm, Ty), ParseError> {
        match self.sig.symbol_type(name) {
            Some(t) => Ok((ETerm::Sym(name.into()), Ty::from_simple(t))),
            None => Err(ParseError::new(
                ParseErrorKind::Type,
                pos,
                format!("{why} needs a symbol `{name}`"),
            )),
        }
    }

    fn apply(&mut self, f: (ETerm, Ty), a: (ETerm, Ty), pos: Pos) -> Result<(ETerm, Ty), ParseError> {
        let res = self.fresh();
        let want = Ty::Arrow(Box::new(a.1.clone()), Box::new(res.clone()));
        if !self.unify(&f.1, &want) {
            return Err(ParseError::new(
                ParseErrorKind::Type,
                pos,
                format!(
                    "cannot apply a term of type {} to an argument of type {}",
                    self.show(&f.1),
                    self.show(&a.1)
                ),
            ));
        }
        Ok((ETerm::App(Box::new(f.0), Box::new(a.0)), res))
    }

    fn elab(&mut self, s: &Surface, scope: &mut Vec<(String, Ty)>) -> Result<(ETerm, Ty), ParseError> {
        match s {
            Surface::Name(x, pos) => {
                if let Some((_, t)) = scope.iter().rev().find(|(y, _)| y == x) {
                    return Ok((ETerm::Var(x.clone(), t.clone()), t.clone()));
                }
                if let Some(t) = self.sig.symbol_type(x) {
                    return Ok((ETerm::Sym(x.clone()), Ty::from_simple(t)));
                }
                if !self.allow_free {
                    return Err(ParseError::new(
                        ParseErrorKind::Type,
                        *pos,
                        format!("unknown symbol or unbound variable `{x}`"),
                    ));
                }
                let t = match self.free.get(x) {
                    Some((t, _)) => t.clone(),
                    None => {
                        let t = self.fresh();
                        self.free.insert(x.clone(), (t.clone(), *pos));
                        t
                    }
                };
                Ok((ETerm::Var(x.clone(), t.clone()), t))
            }
            Surface::Num(n, pos) => {
                let mut acc = self.symbol("0", *pos, "numeral sugar")?;
                for _ in 0..*n {
                    let s = self.symbol("s", *pos, "numeral sugar")?;
                    acc = self.apply(s, acc, *pos)?;
                }
                Ok(acc)
            }
            Surface::List(items, pos) => {
                let mut acc = self.symbol("nil", *pos, "list sugar")?;
                for item in items.iter().rev() {
                    let c = self.symbol("cons", *pos, "list sugar")?;
                    let x = self.elab(item, scope)?;
                    let cx = self.apply(c, x, *pos)?;
                    acc = self.apply(cx, acc, *pos)?;
                }
                Ok(acc)
            }
            Surface::App(f, a) => {
                let pos = surface_pos(a);
                let f = self.elab(f, scope)?;
                let a = self.elab(a, scope)?;
                self.apply(f, a, pos)
            }
            Surface::Lam(x, ann, _, body) => {
                let t = match ann {
                    Some(t) => Ty::from_simple(t),
                    None => self.fresh(),
                };
                scope.push((x.clone(), t.clone()));
                let b = self.elab(body, scope);
                scope.pop();
                let (b, bt) = b?;
                Ok((
                    ETerm::Lam(x.clone(), t.clone(), Box::new(b)),
                    Ty::Arrow(Box::new(t), Box::new(bt)),
                ))
            }
        }
    }

    fn zonk(&self, t: &Ty, what: &str, pos: Pos) -> Result<SimpleType, ParseError> {
        match self.resolve(t) {
            Ty::Meta(_) => Err(ParseError::new(
                ParseErrorKind::Type,
                pos,
                format!("cannot infer the type of {what}; add an annotation `\\x:T.`"),
            )),
            Ty::Base(b) => Ok(SimpleType::Base(b)),
            Ty::Arrow(d, c) => Ok(SimpleType::arrow(self.zonk(&d, what, pos)?, self.zonk(&c, what, pos)?)),
        }
    }

    fn finish(&self, e: &ETerm, pos: Pos) -> Result<Term, ParseError> {
        Ok(match e {
            ETerm::Var(x, t) => Term::Var(Var::new(x, self.zonk(t, &format!("`{x}`"), pos)?)),
            ETerm::Sym(f) => Term::Sym(f.clone()),
            ETerm::App(f, a) => Term::app(self.finish(f, pos)?, self.finish(a, pos)?),
            ETerm::Lam(x, t, b) => Term::lam(
                Var::new(x, self.zonk(t, &format!("`{x}`"), pos)?),
                self.finish(b, pos)?,
            ),
        })
    }

    /// Elaborates one term.
    pub fn term(&mut self, s: &Surface) -> Result<PendingTerm, ParseError> {
        let (e, t) = self.elab(s, &mut Vec::new())?;
        Ok(PendingTerm {
            term: e,
            ty: t,
            pos: surface_pos(s),
        })
    }

    pub fn unify_types(&mut self, a: &PendingTerm, b: &PendingTerm) -> Result<(), ParseError> {
        if self.unify(&a.ty, &b.ty) {
            Ok(())
        } else {
            Err(ParseError::new(
                ParseErrorKind::Type,
                b.pos,
                format!(
                    "left-hand side has type {} but right-hand side has type {}",
                    self.show(&a.ty),
                    self.show(&b.ty)
                ),
            ))
        }
    }

    /// Resolves all inferred types.
    pub fn complete(&self, p: &PendingTerm) -> Result<(Term, SimpleType), ParseError> {
        let term = self.finish(&p.term, p.pos)?;
        let ty = self.zonk(&p.ty, "the term", p.pos)?;
        Ok((term, ty))
    }

}

/// A term elaborated but not yet resolved.
pub struct PendingTerm {
    term: ETerm,
    ty: Ty,
    pub pos: Pos,
}

pub fn surface_pos(s: &Surface) -> Pos {
    match s {
        Surface::Name(_, p) | Surface::Num(_, p) | Surface::List(_, p) | Surface::Lam(_, _, p, _) => *p,
        Surface::App(f, _) => surface_pos(f),
    }
}
