//! Text expressions over scalars, **f** and **U**: parsing, printing, evaluation.
//!
//! ```text
//! expr   := ['-'] term (('+' | '-') term)*
//! term   := power (('*' | '/') power)*
//! power  := factor ['^' int]
//! factor := int | 'q' | 'pi' | gen | call | '(' expr ')' | braid '(' expr ')'
//! gen    := E_i | F_i | th_i  (each optionally '^(' n ')')  | K{..} | J{..}
//! call   := qint(n[,i]) | qfact(n[,i]) | qbinom(n,k[,i]) | form(x,y) | bar(x)
//! braid  := T<i> | T<i>^-1
//! ```
//!
//! Indices are 1-based in text and 0-based in the AST.

use crate::braid::Braid;
use crate::cover::{CoverElement, Monomial, Torus};
use crate::half::{HalfElement, Word};
use crate::root::{CartanDatum, Coweight, Index};
use crate::scalar::{qbinom_at, qfact_at, qint_at, QPiScalar};
use std::fmt;
use thiserror::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GenKind {
    E,
    F,
    Theta,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QFunc {
    Int,
    Fact,
    Binom,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expr {
    Int(i64),
    Q,
    Pi,
    /// E_i^(n), F_i^(n), th_i^(n).
    Gen { kind: GenKind, index: Index, power: u32 },
    /// K_μ with μ in simple-coroot coordinates.
    K(Vec<i64>),
    J(Vec<i64>),
    /// qint(n), qfact(n), qbinom(n, k), each with an optional index for q_i, π_i.
    Quantum { func: QFunc, args: Vec<i64>, index: Option<Index> },
    Form(Box<Expr>, Box<Expr>),
    Bar(Box<Expr>),
    Braid { index: Index, sign: i8, arg: Box<Expr> },
    /// Signed terms; `true` marks subtraction.
    Sum(Vec<(bool, Expr)>),
    /// Factors; `true` marks division.
    Product(Vec<(bool, Expr)>),
    Pow(Box<Expr>, i64),
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ExprError {
    #[error("syntax error at {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("index {index} at {pos} is out of range 1..={rank}")]
    Index { pos: usize, index: usize, rank: usize },
    #[error("coweight at {pos} has {got} entries, expected {rank}")]
    Arity { pos: usize, got: usize, rank: usize },
    #[error("type error: {0}")]
    Type(String),
    #[error("arithmetic error: {0}")]
    Arithmetic(String),
}

// ---- lexer ----------------------------------------------------------------

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Int(i64),
    Ident(String),
    Sym(char),
}

fn lex(text: &str) -> Result<Vec<(usize, Tok)>, ExprError> {
    let mut out = Vec::new();
    let bytes = text.as_bytes();
    let mut k = 0;
    while k < bytes.len() {
        let c = bytes[k] as char;
        if c.is_ascii_whitespace() {
            k += 1;
        } else if c.is_ascii_digit() {
            let start = k;
            while k < bytes.len() && bytes[k].is_ascii_digit() {
                k += 1;
            }
            let v = text[start..k]
                .parse()
                .map_err(|_| ExprError::Syntax { pos: start, msg: "integer literal too large".into() })?;
            out.push((start, Tok::Int(v)));
        } else if c.is_ascii_alphabetic() {
            let start = k;
            while k < bytes.len() && (bytes[k].is_ascii_alphanumeric() || bytes[k] == b'_') {
                k += 1;
            }
            out.push((start, Tok::Ident(text[start..k].to_string())));
        } else if "+-*/^(){},".contains(c) {
            out.push((k, Tok::Sym(c)));
            k += 1;
        } else {
            return Err(ExprError::Syntax { pos: k, msg: format!("unexpected character '{c}'") });
        }
    }
    Ok(out)
}

// ---- parser ---------------------------------------------------------------

struct Parser {
    toks: Vec<(usize, Tok)>,
    at: usize,
    end: usize,
    rank: usize,
}

/// Parses `text` for a datum of the given rank.
pub fn parse(text: &str, rank: usize) -> Result<Expr, ExprError> {
    let mut p = Parser { toks: lex(text)?, at: 0, end: text.len(), rank };
    let e = p.expr()?;
    if p.at < p.toks.len() {
        return Err(p.err("unexpected trailing input"));
    }
    Ok(e)
}

impl Parser {
    fn pos(&self) -> usize {
        self.toks.get(self.at).map(|t| t.0).unwrap_or(self.end)
    }

    fn err(&self, msg: &str) -> ExprError {
        ExprError::Syntax { pos: self.pos(), msg: msg.into() }
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at).map(|t| &t.1)
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Sym(c)) {
            self.at += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<(), ExprError> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.err(&format!("expected '{c}'")))
        }
    }

    fn signed_int(&mut self) -> Result<i64, ExprError> {
        let neg = self.eat('-');
        match self.peek() {
            Some(&Tok::Int(v)) => {
                self.at += 1;
                Ok(if neg { -v } else { v })
            }
            _ => Err(self.err("expected an integer")),
        }
    }

    fn index(&mut self, raw: &str, pos: usize) -> Result<Index, ExprError> {
        let v: usize = raw.parse().map_err(|_| ExprError::Syntax { pos, msg: format!("bad index '{raw}'") })?;
        if v == 0 || v > self.rank {
            return Err(ExprError::Index { pos, index: v, rank: self.rank });
        }
        Ok(v - 1)
    }

    fn int_index(&mut self) -> Result<Index, ExprError> {
        let pos = self.pos();
        let v = self.signed_int()?;
        self.index(&v.to_string(), pos)
    }

    fn expr(&mut self) -> Result<Expr, ExprError> {
        let mut terms = Vec::new();
        let neg = self.eat('-');
        terms.push((neg, self.term()?));
        loop {
            if self.eat('+') {
                terms.push((false, self.term()?));
            } else if self.eat('-') {
                terms.push((true, self.term()?));
            } else {
                break;
            }
        }
        Ok(if terms.len() == 1 && !terms[0].0 { terms.pop().unwrap().1 } else { Expr::Sum(terms) })
    }

    fn term(&mut self) -> Result<Expr, ExprError> {
        let mut fs = vec![(false, self.power()?)];
        loop {
            if self.eat('*') {
                fs.push((false, self.power()?));
            } else if self.eat('/') {
                fs.push((true, self.power()?));
            } else {
                break;
            }
        }
        Ok(if fs.len() == 1 { fs.pop().unwrap().1 } else { Expr::Product(fs) })
    }

    fn power(&mut self) -> Result<Expr, ExprError> {
        let base = self.factor()?;
        if self.eat('^') {
            let n = self.signed_int()?;
            return Ok(Expr::Pow(Box::new(base), n));
        }
        Ok(base)
    }

    fn coweight(&mut self) -> Result<Vec<i64>, ExprError> {
        let pos = self.pos();
        self.expect('{')?;
        let mut v = vec![self.signed_int()?];
        while self.eat(',') {
            v.push(self.signed_int()?);
        }
        self.expect('}')?;
        if v.len() != self.rank {
            return Err(ExprError::Arity { pos, got: v.len(), rank: self.rank });
        }
        Ok(v)
    }

    fn divided(&mut self) -> Result<u32, ExprError> {
        // `^(n)` only; a bare `^n` is an ordinary power handled by `power`
        if self.peek() == Some(&Tok::Sym('^')) && self.toks.get(self.at + 1).map(|t| &t.1) == Some(&Tok::Sym('(')) {
            self.at += 2;
            let pos = self.pos();
            let n = self.signed_int()?;
            self.expect(')')?;
            return u32::try_from(n).map_err(|_| ExprError::Syntax { pos, msg: "negative divided power".into() });
        }
        Ok(1)
    }

    fn factor(&mut self) -> Result<Expr, ExprError> {
        let pos = self.pos();
        let tok = self.peek().cloned().ok_or_else(|| self.err("unexpected end of input"))?;
        self.at += 1;
        match tok {
            Tok::Int(v) => Ok(Expr::Int(v)),
            Tok::Sym('(') => {
                let e = self.expr()?;
                self.expect(')')?;
                Ok(e)
            }
            Tok::Sym(c) => {
                self.at -= 1;
                Err(self.err(&format!("unexpected '{c}'")))
            }
            Tok::Ident(id) => self.ident(&id, pos),
        }
    }

    fn ident(&mut self, id: &str, pos: usize) -> Result<Expr, ExprError> {
        match id {
            "q" => return Ok(Expr::Q),
            "pi" => return Ok(Expr::Pi),
            "K" => return Ok(Expr::K(self.coweight()?)),
            "J" => return Ok(Expr::J(self.coweight()?)),
            "qint" | "qfact" | "qbinom" => {
                let func = match id {
                    "qint" => QFunc::Int,
                    "qfact" => QFunc::Fact,
                    _ => QFunc::Binom,
                };
                let nargs = if func == QFunc::Binom { 2 } else { 1 };
                self.expect('(')?;
                let mut args = vec![self.signed_int()?];
                for _ in 1..nargs {
                    self.expect(',')?;
                    args.push(self.signed_int()?);
                }
                let index = if self.eat(',') { Some(self.int_index()?) } else { None };
                self.expect(')')?;
                if func != QFunc::Int && args[nargs - 1] < 0 {
                    return Err(ExprError::Syntax { pos, msg: format!("{id} needs a nonnegative argument") });
                }
                return Ok(Expr::Quantum { func, args, index });
            }
            "form" => {
                self.expect('(')?;
                let a = self.expr()?;
                self.expect(',')?;
                let b = self.expr()?;
                self.expect(')')?;
                return Ok(Expr::Form(Box::new(a), Box::new(b)));
            }
            "bar" => {
                self.expect('(')?;
                let a = self.expr()?;
                self.expect(')')?;
                return Ok(Expr::Bar(Box::new(a)));
            }
            _ => {}
        }
        for (prefix, kind) in [("E_", GenKind::E), ("F_", GenKind::F), ("th_", GenKind::Theta)] {
            if let Some(raw) = id.strip_prefix(prefix) {
                let index = self.index(raw, pos)?;
                let power = self.divided()?;
                return Ok(Expr::Gen { kind, index, power });
            }
        }
        if let Some(raw) = id.strip_prefix('T') {
            if !raw.is_empty() && raw.bytes().all(|b| b.is_ascii_digit()) {
                let index = self.index(raw, pos)?;
                let mut sign = 1;
                if self.eat('^') {
                    let p = self.pos();
                    sign = match self.signed_int()? {
                        1 => 1,
                        -1 => -1,
                        _ => return Err(ExprError::Syntax { pos: p, msg: "braid exponent must be 1 or -1".into() }),
                    };
                }
                self.expect('(')?;
                let arg = self.expr()?;
                self.expect(')')?;
                return Ok(Expr::Braid { index, sign, arg: Box::new(arg) });
            }
        }
        Err(ExprError::Syntax { pos, msg: format!("unknown name '{id}'") })
    }
}

// ---- printer --------------------------------------------------------------

fn join_ints(v: &[i64]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}

impl Expr {
    fn is_atomic(&self) -> bool {
        !matches!(self, Expr::Sum(_) | Expr::Product(_) | Expr::Pow(..))
    }
}

impl fmt::Display for Expr {
    /// Canonical text: parsing it back gives the same tree.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Int(v) => write!(f, "{v}"),
            Expr::Q => write!(f, "q"),
            Expr::Pi => write!(f, "pi"),
            Expr::Gen { kind, index, power } => {
                let p = match kind {
                    GenKind::E => "E_",
                    GenKind::F => "F_",
                    GenKind::Theta => "th_",
                };
                write!(f, "{p}{}", index + 1)?;
                if *power != 1 {
                    write!(f, "^({power})")?;
                }
                Ok(())
            }
            Expr::K(v) => write!(f, "K{{{}}}", join_ints(v)),
            Expr::J(v) => write!(f, "J{{{}}}", join_ints(v)),
            Expr::Quantum { func, args, index } => {
                let name = match func {
                    QFunc::Int => "qint",
                    QFunc::Fact => "qfact",
                    QFunc::Binom => "qbinom",
                };
                write!(f, "{name}({}", join_ints(args))?;
                if let Some(i) = index {
                    write!(f, ",{}", i + 1)?;
                }
                write!(f, ")")
            }
            Expr::Form(a, b) => write!(f, "form({a}, {b})"),
            Expr::Bar(a) => write!(f, "bar({a})"),
            Expr::Braid { index, sign, arg } => {
                write!(f, "T{}", index + 1)?;
                if *sign < 0 {
                    write!(f, "^-1")?;
                }
                write!(f, "({arg})")
            }
            Expr::Sum(terms) => {
                for (k, (neg, t)) in terms.iter().enumerate() {
                    match (k, neg) {
                        (0, true) => write!(f, "-")?,
                        (0, false) => {}
                        (_, true) => write!(f, " - ")?,
                        (_, false) => write!(f, " + ")?,
                    }
                    // a sum nested as a term, or a leading `-` before a sum, needs brackets
                    if matches!(t, Expr::Sum(_)) {
                        write!(f, "({t})")?;
                    } else {
                        write!(f, "{t}")?;
                    }
                }
                Ok(())
            }
            Expr::Product(fs) => {
                for (k, (div, t)) in fs.iter().enumerate() {
                    if k > 0 {
                        write!(f, "{}", if *div { "/" } else { "*" })?;
                    }
                    if matches!(t, Expr::Sum(_) | Expr::Product(_)) {
                        write!(f, "({t})")?;
                    } else {
                        write!(f, "{t}")?;
                    }
                }
                Ok(())
            }
            Expr::Pow(b, n) => {
                if b.is_atomic() && !matches!(**b, Expr::Gen { power, .. } if power != 1) {
                    write!(f, "{b}^{n}")
                } else {
                    write!(f, "({b})^{n}")
                }
            }
        }
    }
}

// ---- evaluation -----------------------------------------------------------

/// A value of an expression.
#[derive(Clone, Debug, PartialEq)]
pub enum Value {
    Scalar(QPiScalar),
    Half(HalfElement),
    Cover(CoverElement),
}

impl Value {
    fn kind(&self) -> &'static str {
        match self {
            Value::Scalar(_) => "scalar",
            Value::Half(_) => "f",
            Value::Cover(_) => "U",
        }
    }
}

/// Evaluates expressions against the braid operators of one datum.
pub struct Evaluator<'a> {
    braid: &'a Braid,
}

fn arith(e: impl fmt::Display) -> ExprError {
    ExprError::Arithmetic(e.to_string())
}

impl<'a> Evaluator<'a> {
    pub fn new(braid: &'a Braid) -> Evaluator<'a> {
        Evaluator { braid }
    }

    fn datum(&self) -> &CartanDatum {
        self.braid.cover().datum()
    }

    pub fn eval_str(&self, text: &str) -> Result<Value, ExprError> {
        self.eval(&parse(text, self.datum().rank())?)
    }

    pub fn eval(&self, e: &Expr) -> Result<Value, ExprError> {
        let cover = self.braid.cover();
        let half = cover.half();
        let datum = self.datum();
        Ok(match e {
            Expr::Int(v) => Value::Scalar(QPiScalar::int(*v)),
            Expr::Q => Value::Scalar(QPiScalar::q()),
            Expr::Pi => Value::Scalar(QPiScalar::pi()),
            Expr::Gen { kind, index, power } => {
                let p = *power as usize;
                match kind {
                    GenKind::E => Value::Cover(cover.e_div(*index, p)),
                    GenKind::F => Value::Cover(cover.f_div(*index, p)),
                    GenKind::Theta => Value::Half(half.divided_power(*index, p)),
                }
            }
            Expr::K(v) => Value::Cover(cover.k(&Coweight(v.clone()))),
            Expr::J(v) => Value::Cover(cover.j(&Coweight(v.clone()))),
            Expr::Quantum { func, args, index } => {
                let (d, p) = match index {
                    Some(i) => (datum.d(*i), datum.pi_exp(*i)),
                    None => (1, 1),
                };
                Value::Scalar(match func {
                    QFunc::Int => qint_at(args[0], d, p),
                    QFunc::Fact => qfact_at(args[0], d, p),
                    QFunc::Binom => qbinom_at(args[0], args[1], d, p),
                })
            }
            Expr::Form(a, b) => match (self.eval(a)?, self.eval(b)?) {
                (Value::Half(x), Value::Half(y)) => Value::Scalar(half.form(&x, &y)),
                (x, y) => return Err(ExprError::Type(format!("form of {} and {}", x.kind(), y.kind()))),
            },
            Expr::Bar(a) => match self.eval(a)? {
                Value::Scalar(c) => Value::Scalar(c.bar()),
                Value::Cover(x) => Value::Cover(cover.bar(&x)),
                Value::Half(_) => return Err(ExprError::Type("bar on f".into())),
            },
            Expr::Braid { index, sign, arg } => match self.eval(arg)? {
                Value::Scalar(c) => Value::Scalar(c),
                Value::Cover(x) => Value::Cover(self.braid.apply(*index, *sign, &x)),
                Value::Half(_) => return Err(ExprError::Type("braid operator on f".into())),
            },
            Expr::Sum(terms) => {
                let mut acc = Value::Scalar(QPiScalar::zero());
                for (neg, t) in terms {
                    let mut v = self.eval(t)?;
                    if *neg {
                        v = self.scale(v, &QPiScalar::int(-1));
                    }
                    acc = self.add(acc, v)?;
                }
                acc
            }
            Expr::Product(fs) => {
                let mut acc = Value::Scalar(QPiScalar::one());
                for (div, t) in fs {
                    let v = self.eval(t)?;
                    acc = if *div {
                        match v {
                            Value::Scalar(c) => self.scale(acc, &c.inv().map_err(arith)?),
                            other => return Err(ExprError::Type(format!("division by {}", other.kind()))),
                        }
                    } else {
                        self.mul(acc, v)?
                    };
                }
                acc
            }
            Expr::Pow(b, k) => {
                let v = self.eval(b)?;
                match v {
                    Value::Scalar(c) => Value::Scalar(c.pow(*k).map_err(arith)?),
                    _ if *k < 0 => return Err(ExprError::Type(format!("negative power of {}", v.kind()))),
                    _ => {
                        let mut acc = Value::Scalar(QPiScalar::one());
                        for _ in 0..*k {
                            acc = self.mul(acc, v.clone())?;
                        }
                        acc
                    }
                }
            }
        })
    }

    fn scale(&self, v: Value, c: &QPiScalar) -> Value {
        match v {
            Value::Scalar(x) => Value::Scalar(&x * c),
            Value::Half(x) => Value::Half(x.scale(c)),
            Value::Cover(x) => Value::Cover(x.scale(c)),
        }
    }

    fn lift(&self, v: Value, like: &Value) -> Value {
        match (v, like) {
            (Value::Scalar(c), Value::Half(_)) => Value::Half(HalfElement::term(Word::empty(), c)),
            (Value::Scalar(c), Value::Cover(_)) => Value::Cover(self.braid.cover().scalar(c)),
            (v, _) => v,
        }
    }

    fn add(&self, a: Value, b: Value) -> Result<Value, ExprError> {
        let a = self.lift(a, &b);
        let b = self.lift(b, &a);
        Ok(match (a, b) {
            (Value::Scalar(x), Value::Scalar(y)) => Value::Scalar(&x + &y),
            (Value::Half(x), Value::Half(y)) => Value::Half(x.add(&y)),
            (Value::Cover(x), Value::Cover(y)) => Value::Cover(x.add(&y)),
            (x, y) => return Err(ExprError::Type(format!("sum of {} and {}", x.kind(), y.kind()))),
        })
    }

    fn mul(&self, a: Value, b: Value) -> Result<Value, ExprError> {
        Ok(match (a, b) {
            (Value::Scalar(x), v) | (v, Value::Scalar(x)) => self.scale(v, &x),
            (Value::Half(x), Value::Half(y)) => Value::Half(self.braid.cover().half().mul(&x, &y)),
            (Value::Cover(x), Value::Cover(y)) => Value::Cover(self.braid.cover().mul(&x, &y)),
            (x, y) => return Err(ExprError::Type(format!("product of {} and {}", x.kind(), y.kind()))),
        })
    }

    /// Canonical text of a value; it parses back to an equal value.
    pub fn render(&self, v: &Value) -> String {
        match v {
            Value::Scalar(c) => c.to_string(),
            Value::Half(x) => render_terms(x.iter().map(|(w, c)| (word_text(w, "th_"), c))),
            Value::Cover(x) => render_terms(x.iter().map(|(m, c)| (monomial_text(m), c))),
        }
    }
}

fn word_text(w: &Word, prefix: &str) -> String {
    w.0.iter().map(|l| format!("{prefix}{}", l + 1)).collect::<Vec<_>>().join("*")
}

fn torus_text(t: &Torus) -> Vec<String> {
    let mut out = Vec::new();
    if t.j.iter().any(|&x| x != 0) {
        out.push(format!("J{{{}}}", t.j.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")));
    }
    if t.k.iter().any(|&x| x != 0) {
        out.push(format!("K{{{}}}", join_ints(&t.k)));
    }
    out
}

/// F_f·J·K·E_e as text; the empty monomial is the empty string.
pub fn monomial_text(m: &Monomial) -> String {
    let mut parts = Vec::new();
    if !m.f.0.is_empty() {
        parts.push(word_text(&m.f, "F_"));
    }
    parts.extend(torus_text(&m.t));
    if !m.e.0.is_empty() {
        parts.push(word_text(&m.e, "E_"));
    }
    parts.join("*")
}

/// Σ c·m with coefficients bracketed unless they are a single signed monomial.
fn render_terms<'a>(terms: impl Iterator<Item = (String, &'a QPiScalar)>) -> String {
    let mut out = String::new();
    for (m, c) in terms {
        let text = c.to_string();
        let (neg, body) = match text.strip_prefix('-') {
            Some(rest) if !rest.contains(' ') && !rest.contains('/') => (true, rest.to_string()),
            _ => (false, text.clone()),
        };
        let simple = !body.contains(' ') && !body.contains('/') && !body.contains('(');
        let coeff = if simple { body } else { format!("({body})") };
        let piece = match (coeff.as_str(), m.is_empty()) {
            (c, true) => c.to_string(),
            ("1", false) => m,
            (c, false) => format!("{c}*{m}"),
        };
        if out.is_empty() {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        out.push_str(&piece);
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spec_examples() {
        let e = parse("E_1*F_1 - F_1*E_1", 2).unwrap();
        assert!(matches!(&e, Expr::Sum(t) if t.len() == 2));
        assert!(matches!(parse("T1(E_2)", 2).unwrap(), Expr::Braid { index: 0, sign: 1, .. }));
        assert!(matches!(parse("qbinom(4,2)", 2).unwrap(), Expr::Quantum { func: QFunc::Binom, .. }));
    }

    #[test]
    fn errors_carry_positions() {
        assert_eq!(parse("E_1 + E_3", 2), Err(ExprError::Index { pos: 6, index: 3, rank: 2 }));
        assert!(matches!(parse("E_1 + * F_1", 2), Err(ExprError::Syntax { pos: 6, .. })));
        assert!(matches!(parse("K{1}", 2), Err(ExprError::Arity { pos: 1, got: 1, rank: 2 })));
        assert!(matches!(parse("(E_1", 2), Err(ExprError::Syntax { pos: 4, .. })));
    }

    #[test]
    fn nested_sums_keep_brackets() {
        let e = parse("-(q - 1) + (E_1 - F_1)*2", 2).unwrap();
        assert_eq!(parse(&e.to_string(), 2).unwrap(), e);
    }
}
