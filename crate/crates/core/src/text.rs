//! Lexer and term parser shared by every text grammar in the crate.
//!
//! All grammars are sums of signed products. A product is a `*`-separated
//! list of factors: a rational (`3`, `3/2`), a parenthesized sum, a variable
//! `<prefix><index>` with optional `^<power>`, or a wedge chain of form
//! symbols `db1^db3`. Each grammar decides which prefixes it accepts.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type Q = BigRational;

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(BigInt),
    Ident(String, usize),
    Star,
    Slash,
    Caret,
    Plus,
    Minus,
    LParen,
    RParen,
}

fn syntax(pos: usize, msg: impl Into<String>) -> Error {
    Error::Syntax {
        pos,
        msg: msg.into(),
    }
}

fn lex(text: &str) -> Result<Vec<(Tok, usize)>> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let start = i;
        match c {
            c if c.is_whitespace() => {
                i += 1;
                continue;
            }
            '*' => out.push((Tok::Star, start)),
            '/' => out.push((Tok::Slash, start)),
            '^' => out.push((Tok::Caret, start)),
            '+' => out.push((Tok::Plus, start)),
            '-' => out.push((Tok::Minus, start)),
            '(' => out.push((Tok::LParen, start)),
            ')' => out.push((Tok::RParen, start)),
            c if c.is_ascii_digit() => {
                let mut j = i;
                while j < chars.len() && chars[j].is_ascii_digit() {
                    j += 1;
                }
                let digits: String = chars[i..j].iter().collect();
                out.push((Tok::Num(digits.parse().expect("digits")), start));
                i = j;
                continue;
            }
            c if c.is_ascii_alphabetic() => {
                let mut j = i;
                while j < chars.len() && chars[j].is_ascii_alphabetic() {
                    j += 1;
                }
                let prefix: String = chars[i..j].iter().collect();
                let k = j;
                while j < chars.len() && chars[j].is_ascii_digit() {
                    j += 1;
                }
                if k == j {
                    return Err(syntax(start, format!("variable '{prefix}' needs an index")));
                }
                let digits: String = chars[k..j].iter().collect();
                let index: usize = digits
                    .parse()
                    .map_err(|_| syntax(k, "index too large"))?;
                out.push((Tok::Ident(prefix, index), start));
                i = j;
                continue;
            }
            other => return Err(syntax(start, format!("unexpected character '{other}'"))),
        }
        i += 1;
    }
    Ok(out)
}

/// One parsed product. Variables keep their order of appearance, which is
/// what noncommutative grammars rely on.
#[derive(Clone, Debug)]
pub(crate) struct Term {
    pub coeff: Q,
    /// `(prefix, 1-based index, position)`, powers already expanded.
    pub vars: Vec<(String, usize, usize)>,
    /// Wedge chains of form symbols, each as `(1-based indices, position)`.
    pub forms: Vec<(Vec<usize>, usize)>,
    /// Parenthesized sub-sums, multiplied in.
    pub groups: Vec<(Vec<Term>, usize)>,
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    at: usize,
    end: usize,
    form_prefix: Option<&'static str>,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at).map(|(t, _)| t)
    }

    fn pos(&self) -> usize {
        self.toks.get(self.at).map(|(_, p)| *p).unwrap_or(self.end)
    }

    fn expr(&mut self) -> Result<Vec<Term>> {
        let mut terms = Vec::new();
        let mut negative = match self.peek() {
            Some(Tok::Minus) => {
                self.at += 1;
                true
            }
            Some(Tok::Plus) => {
                self.at += 1;
                false
            }
            _ => false,
        };
        loop {
            let mut t = self.term()?;
            if negative {
                t.coeff = -t.coeff;
            }
            terms.push(t);
            match self.peek() {
                Some(Tok::Plus) => negative = false,
                Some(Tok::Minus) => negative = true,
                _ => break,
            }
            self.at += 1;
        }
        Ok(terms)
    }

    fn term(&mut self) -> Result<Term> {
        let mut term = Term {
            coeff: Q::one(),
            vars: Vec::new(),
            forms: Vec::new(),
            groups: Vec::new(),
        };
        loop {
            self.factor(&mut term)?;
            if self.peek() == Some(&Tok::Star) {
                self.at += 1;
            } else {
                break;
            }
        }
        Ok(term)
    }

    fn number(&mut self) -> Result<BigInt> {
        let pos = self.pos();
        match self.peek().cloned() {
            Some(Tok::Num(v)) => {
                self.at += 1;
                Ok(v)
            }
            _ => Err(syntax(pos, "expected a number")),
        }
    }

    fn factor(&mut self, term: &mut Term) -> Result<()> {
        let pos = self.pos();
        match self.peek().cloned() {
            Some(Tok::Num(num)) => {
                self.at += 1;
                let value = if self.peek() == Some(&Tok::Slash) {
                    self.at += 1;
                    let dpos = self.pos();
                    let den = self.number()?;
                    if den.is_zero() {
                        return Err(syntax(dpos, "zero denominator"));
                    }
                    Q::new(num, den)
                } else {
                    Q::from_integer(num)
                };
                term.coeff *= value;
                Ok(())
            }
            Some(Tok::LParen) => {
                self.at += 1;
                let inner = self.expr()?;
                if self.peek() != Some(&Tok::RParen) {
                    return Err(syntax(self.pos(), "expected ')'"));
                }
                self.at += 1;
                term.groups.push((inner, pos));
                Ok(())
            }
            Some(Tok::Ident(prefix, index)) => {
                self.at += 1;
                if Some(prefix.as_str()) == self.form_prefix {
                    let mut chain = vec![index];
                    while self.peek() == Some(&Tok::Caret) {
                        match self.toks.get(self.at + 1) {
                            Some((Tok::Ident(p, j), _)) if Some(p.as_str()) == self.form_prefix => {
                                chain.push(*j);
                                self.at += 2;
                            }
                            _ => return Err(syntax(self.pos(), "expected a form symbol after '^'")),
                        }
                    }
                    term.forms.push((chain, pos));
                    return Ok(());
                }
                let mut power = 1usize;
                if self.peek() == Some(&Tok::Caret) {
                    self.at += 1;
                    let ppos = self.pos();
                    let p = self.number()?;
                    power = p
                        .try_into()
                        .map_err(|_| syntax(ppos, "power too large"))?;
                    if power == 0 {
                        return Err(syntax(ppos, "power must be positive"));
                    }
                }
                for _ in 0..power {
                    term.vars.push((prefix.clone(), index, pos));
                }
                Ok(())
            }
            Some(_) => Err(syntax(pos, "expected a factor")),
            None => Err(syntax(pos, "unexpected end of input")),
        }
    }
}

/// Parses a full sum. `form_prefix` names the wedge-chain symbol (`"db"`),
/// if the grammar has one.
pub(crate) fn parse_sum(text: &str, form_prefix: Option<&'static str>) -> Result<Vec<Term>> {
    let toks = lex(text)?;
    let end = text.chars().count();
    if toks.is_empty() {
        return Err(syntax(0, "empty input"));
    }
    let mut p = Parser {
        toks,
        at: 0,
        end,
        form_prefix,
    };
    let terms = p.expr()?;
    if p.at != p.toks.len() {
        return Err(syntax(p.pos(), "trailing input"));
    }
    Ok(terms)
}

pub(crate) fn reject_groups_and_forms(term: &Term) -> Result<()> {
    if let Some((_, pos)) = term.groups.first() {
        return Err(syntax(*pos, "parentheses are not allowed here"));
    }
    if let Some((_, pos)) = term.forms.first() {
        return Err(syntax(*pos, "forms are not allowed here"));
    }
    Ok(())
}

pub(crate) fn check_prefix(prefix: &str, allowed: &[&str], pos: usize) -> Result<()> {
    if allowed.contains(&prefix) {
        Ok(())
    } else {
        Err(syntax(pos, format!("unknown variable prefix '{prefix}'")))
    }
}

pub(crate) fn check_index(index: usize, max: usize) -> Result<usize> {
    if index == 0 || index > max {
        Err(Error::IndexOutOfRange { index, max })
    } else {
        Ok(index - 1)
    }
}

pub fn format_rational(q: &Q) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Joins `(coefficient, monomial text)` pairs into a signed sum.
/// An empty monomial text denotes a constant term.
pub(crate) fn join_terms<'a, I>(terms: I) -> String
where
    I: IntoIterator<Item = (&'a Q, String)>,
{
    let mut out = String::new();
    for (i, (c, mono)) in terms.into_iter().enumerate() {
        let neg = c.is_negative();
        let abs = c.abs();
        if i == 0 {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        if mono.is_empty() {
            out.push_str(&format_rational(&abs));
        } else if abs.is_one() {
            out.push_str(&mono);
        } else {
            out.push_str(&format_rational(&abs));
            out.push('*');
            out.push_str(&mono);
        }
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

/// Renders letters with runs of a repeated letter collapsed to `^k`.
pub(crate) fn format_letters<I: IntoIterator<Item = usize>>(prefix: &str, letters: I) -> String {
    let mut parts: Vec<String> = Vec::new();
    let mut run: Option<(usize, usize)> = None;
    let flush = |parts: &mut Vec<String>, run: Option<(usize, usize)>| {
        if let Some((l, k)) = run {
            if k == 1 {
                parts.push(format!("{prefix}{}", l + 1));
            } else {
                parts.push(format!("{prefix}{}^{k}", l + 1));
            }
        }
    };
    for l in letters {
        run = match run {
            Some((prev, k)) if prev == l => Some((prev, k + 1)),
            other => {
                flush(&mut parts, other);
                Some((l, 1))
            }
        };
    }
    flush(&mut parts, run);
    parts.join("*")
}
