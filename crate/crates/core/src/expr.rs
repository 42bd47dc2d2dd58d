//! Map expressions: a small recursive-descent parser for formulas such as
//! `2*z - 1/z` or `(z^2-1)/(2z)`, exact lowering to [`RationalMap`], and the
//! canonical printers used by the CLI.
//!
//! Grammar:
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary (('*' | '/') unary)*        number z / number ( imply '*'
//! unary  := '-' unary | power
//! power  := base ('^' integer)?
//! base   := number | 'i' | 'z' | '(' expr ')'
//! ```

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::Result;
use crate::exact::{GaussianRational, Polynomial, RationalMap};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expr {
    /// Nonnegative literal, exact.
    Num(BigRational),
    I,
    Z,
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, u32),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseError {
    pub offset: usize,
    pub expected: Vec<&'static str>,
    pub found: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "syntax error at offset {}: expected {}, found {}",
            self.offset,
            self.expected.join(" or "),
            self.found
        )
    }
}

impl std::error::Error for ParseError {}

/// Source text together with its syntax tree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MapExpression {
    pub source: String,
    pub ast: Expr,
}

impl MapExpression {
    pub fn lower(&self) -> Result<RationalMap> {
        self.ast.lower()
    }
}

pub fn parse_map(text: &str) -> Result<MapExpression, ParseError> {
    let tokens = tokenize(text)?;
    let mut p = Parser { tokens, pos: 0 };
    let ast = p.expr()?;
    p.expect_end()?;
    Ok(MapExpression {
        source: text.to_string(),
        ast,
    })
}

/// Parse and lower in one step.
pub fn parse_rational_map(text: &str) -> Result<RationalMap> {
    parse_map(text)?.lower()
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(BigRational),
    I,
    Z,
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    End,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Num(q) => format!("number {}", format_decimal(q).unwrap_or_default()),
            Tok::I => "'i'".into(),
            Tok::Z => "'z'".into(),
            Tok::Plus => "'+'".into(),
            Tok::Minus => "'-'".into(),
            Tok::Star => "'*'".into(),
            Tok::Slash => "'/'".into(),
            Tok::Caret => "'^'".into(),
            Tok::LParen => "'('".into(),
            Tok::RParen => "')'".into(),
            Tok::End => "end of input".into(),
        }
    }
}

#[derive(Clone, Debug)]
struct Token {
    tok: Tok,
    start: usize,
    end: usize,
    /// Integer literal text, kept for exponents.
    integer: Option<String>,
}

fn tokenize(text: &str) -> Result<Vec<Token>, ParseError> {
    let mut out = Vec::new();
    let mut chars = text.char_indices().peekable();
    while let Some(&(start, ch)) = chars.peek() {
        if ch.is_whitespace() {
            chars.next();
            continue;
        }
        if ch.is_ascii_digit() || ch == '.' {
            let mut end = start;
            let mut seen_dot = false;
            while let Some(&(i, c)) = chars.peek() {
                if c.is_ascii_digit() || (c == '.' && !seen_dot) {
                    seen_dot |= c == '.';
                    end = i + c.len_utf8();
                    chars.next();
                } else {
                    break;
                }
            }
            let lit = &text[start..end];
            let value = parse_decimal(lit).ok_or_else(|| ParseError {
                offset: start,
                expected: vec!["number"],
                found: format!("'{lit}'"),
            })?;
            out.push(Token {
                tok: Tok::Num(value),
                start,
                end,
                integer: (!seen_dot).then(|| lit.to_string()),
            });
            continue;
        }
        let tok = match ch {
            'z' => Tok::Z,
            'i' => Tok::I,
            '+' => Tok::Plus,
            '-' | '\u{2212}' => Tok::Minus,
            '*' => Tok::Star,
            '/' => Tok::Slash,
            '^' => Tok::Caret,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            other => {
                return Err(ParseError {
                    offset: start,
                    expected: vec!["number", "'z'", "'i'", "operator", "parenthesis"],
                    found: format!("'{other}'"),
                })
            }
        };
        chars.next();
        out.push(Token {
            tok,
            start,
            end: start + ch.len_utf8(),
            integer: None,
        });
    }
    out.push(Token {
        tok: Tok::End,
        start: text.len(),
        end: text.len(),
        integer: None,
    });
    Ok(out)
}

fn parse_decimal(lit: &str) -> Option<BigRational> {
    let (int_part, frac_part) = lit.split_once('.').unwrap_or((lit, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    let digits = format!("{int_part}{frac_part}");
    let n: BigInt = if digits.is_empty() { BigInt::zero() } else { digits.parse().ok()? };
    let scale = num_traits::pow(BigInt::from(10), frac_part.len());
    Some(BigRational::new(n, scale))
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Token {
        &self.tokens[self.pos]
    }

    fn bump(&mut self) -> Token {
        let t = self.tokens[self.pos].clone();
        if self.pos + 1 < self.tokens.len() {
            self.pos += 1;
        }
        t
    }

    fn error(&self, expected: Vec<&'static str>) -> ParseError {
        let t = self.peek();
        ParseError {
            offset: t.start,
            expected,
            found: t.tok.describe(),
        }
    }

    fn expect_end(&self) -> Result<(), ParseError> {
        if self.peek().tok == Tok::End {
            Ok(())
        } else {
            Err(self.error(vec!["operator", "end of input"]))
        }
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.term()?;
        loop {
            match self.peek().tok {
                Tok::Plus => {
                    self.bump();
                    lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
                }
                Tok::Minus => {
                    self.bump();
                    lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    /// A number literal immediately followed by `z`, `i` or `(`.
    fn implicit_product(&self) -> bool {
        let prev = &self.tokens[self.pos.saturating_sub(1)];
        let next = self.peek();
        self.pos > 0
            && matches!(prev.tok, Tok::Num(_))
            && prev.end == next.start
            && matches!(next.tok, Tok::Z | Tok::I | Tok::LParen)
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.unary()?;
        loop {
            match self.peek().tok {
                Tok::Star => {
                    self.bump();
                    lhs = Expr::Mul(Box::new(lhs), Box::new(self.unary()?));
                }
                Tok::Slash => {
                    self.bump();
                    lhs = Expr::Div(Box::new(lhs), Box::new(self.unary()?));
                }
                _ if self.implicit_product() => {
                    lhs = Expr::Mul(Box::new(lhs), Box::new(self.unary()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn unary(&mut self) -> Result<Expr, ParseError> {
        if self.peek().tok == Tok::Minus {
            self.bump();
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr, ParseError> {
        let base = self.base()?;
        if self.peek().tok != Tok::Caret {
            return Ok(base);
        }
        self.bump();
        let t = self.peek().clone();
        let exp = t
            .integer
            .as_deref()
            .and_then(|s| s.parse::<u32>().ok())
            .ok_or_else(|| self.error(vec!["integer"]))?;
        self.bump();
        Ok(Expr::Pow(Box::new(base), exp))
    }

    fn base(&mut self) -> Result<Expr, ParseError> {
        let t = self.peek().clone();
        match t.tok {
            Tok::Num(q) => {
                self.bump();
                Ok(Expr::Num(q))
            }
            Tok::I => {
                self.bump();
                Ok(Expr::I)
            }
            Tok::Z => {
                self.bump();
                Ok(Expr::Z)
            }
            Tok::LParen => {
                self.bump();
                let e = self.expr()?;
                if self.peek().tok != Tok::RParen {
                    return Err(self.error(vec!["')'"]));
                }
                self.bump();
                Ok(e)
            }
            _ => Err(self.error(vec!["number", "'z'", "'i'", "'('"])),
        }
    }
}

impl Expr {
    /// Exact lowering; the only failure is division by the zero map.
    pub fn lower(&self) -> Result<RationalMap> {
        Ok(match self {
            Expr::Num(q) => RationalMap::constant(GaussianRational::real(q.clone())),
            Expr::I => RationalMap::constant(GaussianRational::i()),
            Expr::Z => RationalMap::identity(),
            Expr::Neg(e) => -&e.lower()?,
            Expr::Add(a, b) => &a.lower()? + &b.lower()?,
            Expr::Sub(a, b) => &a.lower()? - &b.lower()?,
            Expr::Mul(a, b) => &a.lower()? * &b.lower()?,
            Expr::Div(a, b) => a.lower()?.checked_div(&b.lower()?)?,
            Expr::Pow(a, k) => a.lower()?.pow(*k),
        })
    }

    fn precedence(&self) -> u8 {
        match self {
            Expr::Add(..) | Expr::Sub(..) => 1,
            Expr::Mul(..) | Expr::Div(..) => 2,
            Expr::Neg(_) => 3,
            Expr::Pow(..) => 4,
            Expr::Num(q) if format_decimal(q).is_none() => 2,
            Expr::Num(_) | Expr::I | Expr::Z => 5,
        }
    }
}

fn write_operand(f: &mut fmt::Formatter<'_>, e: &Expr, min_prec: u8) -> fmt::Result {
    if e.precedence() < min_prec {
        write!(f, "({e})")
    } else {
        write!(f, "{e}")
    }
}

/// Prints with the fewest parentheses that reparse to the same tree.
impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Num(q) => match format_decimal(q) {
                Some(s) => f.write_str(&s),
                None => write!(f, "{}/{}", q.numer(), q.denom()),
            },
            Expr::I => f.write_str("i"),
            Expr::Z => f.write_str("z"),
            Expr::Neg(e) => {
                f.write_str("-")?;
                write_operand(f, e, 3)
            }
            Expr::Add(a, b) | Expr::Sub(a, b) => {
                write_operand(f, a, 1)?;
                f.write_str(if matches!(self, Expr::Add(..)) { "+" } else { "-" })?;
                write_operand(f, b, 2)
            }
            Expr::Mul(a, b) | Expr::Div(a, b) => {
                write_operand(f, a, 2)?;
                f.write_str(if matches!(self, Expr::Mul(..)) { "*" } else { "/" })?;
                write_operand(f, b, 3)
            }
            Expr::Pow(a, k) => {
                write_operand(f, a, 5)?;
                write!(f, "^{k}")
            }
        }
    }
}

/// Exact decimal expansion, when the denominator is of the form 2^a 5^b.
fn format_decimal(q: &BigRational) -> Option<String> {
    if q.is_negative() {
        return None;
    }
    if q.is_integer() {
        return Some(q.numer().to_string());
    }
    let mut d = q.denom().clone();
    let (two, five) = (BigInt::from(2), BigInt::from(5));
    let (mut a, mut b) = (0usize, 0usize);
    while d.is_multiple_of(&two) {
        d /= &two;
        a += 1;
    }
    while d.is_multiple_of(&five) {
        d /= &five;
        b += 1;
    }
    if !d.is_one() {
        return None;
    }
    let places = a.max(b);
    let scaled = q * BigRational::from_integer(num_traits::pow(BigInt::from(10), places));
    let digits = scaled.to_integer().to_string();
    let digits = format!("{digits:0>width$}", width = places + 1);
    let (int, frac) = digits.split_at(digits.len() - places);
    Some(format!("{int}.{frac}"))
}

fn rational_text(q: &BigRational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Sign and unsigned text of a coefficient, `None` text meaning "1".
fn coefficient_parts(c: &GaussianRational) -> (bool, Option<String>) {
    let (re, im) = (c.re(), c.im());
    if im.is_zero() {
        let mag = re.abs();
        (re.is_negative(), (!mag.is_one()).then(|| rational_text(&mag)))
    } else if re.is_zero() {
        let mag = im.abs();
        let text = if mag.is_one() { "i".to_string() } else { format!("{}*i", rational_text(&mag)) };
        (im.is_negative(), Some(text))
    } else {
        let sign = if im.is_negative() { "-" } else { "+" };
        (false, Some(format!("({}{}{}*i)", rational_text(re), sign, rational_text(&im.abs()))))
    }
}

/// Terms in descending powers with explicit `*` and `^`.
pub fn format_polynomial(p: &Polynomial) -> String {
    let mut out = String::new();
    for (k, c) in p.coeffs().iter().enumerate().rev() {
        if c.is_zero() {
            continue;
        }
        let (neg, mag) = coefficient_parts(c);
        if neg {
            out.push('-');
        } else if !out.is_empty() {
            out.push('+');
        }
        let power = match k {
            0 => None,
            1 => Some("z".to_string()),
            _ => Some(format!("z^{k}")),
        };
        match (mag, power) {
            (Some(m), Some(pw)) => out.push_str(&format!("{m}*{pw}")),
            (Some(m), None) => out.push_str(&m),
            (None, Some(pw)) => out.push_str(&pw),
            (None, None) => out.push('1'),
        }
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

fn term_count(p: &Polynomial) -> usize {
    p.coeffs().iter().filter(|c| !c.is_zero()).count()
}

/// Numerator and denominator scaled to primitive Gaussian-integer
/// polynomials, the denominator's leading coefficient made positive.
pub fn integer_form(f: &RationalMap) -> (Polynomial, Polynomial) {
    let all = || f.num().coeffs().iter().chain(f.den().coeffs());
    let lcm = all().fold(BigInt::one(), |acc, c| acc.lcm(&c.denom_lcm()));
    let scale = GaussianRational::real(BigRational::from_integer(lcm));
    let (num, den) = (f.num().scale(&scale), f.den().scale(&scale));
    let content = num
        .coeffs()
        .iter()
        .chain(den.coeffs())
        .flat_map(|c| [c.re().numer().clone(), c.im().numer().clone()])
        .fold(BigInt::zero(), |acc, n| acc.gcd(&n));
    let lead = den.leading().expect("denominator is nonzero");
    let flip = lead.re().is_negative() || (lead.re().is_zero() && lead.im().is_negative());
    let mut k = BigRational::new(BigInt::one(), content);
    if flip {
        k = -k;
    }
    let k = GaussianRational::real(k);
    (num.scale(&k), den.scale(&k))
}

/// Canonical text of a map, e.g. `(5*z^2+3*z)/(4*z^2+3*z+1)`.
pub fn format_map(f: &RationalMap) -> String {
    let (num, den) = integer_form(f);
    let num_text = format_polynomial(&num);
    if den.degree() == Some(0) && den.coeffs()[0].is_one() {
        return num_text;
    }
    let num_text = if term_count(&num) > 1 { format!("({num_text})") } else { num_text };
    let den_is_plain_integer = den.degree() == Some(0)
        && den.coeffs()[0].is_real()
        && den.coeffs()[0].re().is_positive();
    // A bare power of z binds tighter than `/`, so it needs no parentheses.
    let den_is_bare_power = term_count(&den) == 1 && den.leading().is_some_and(GaussianRational::is_one);
    let den_text = format_polynomial(&den);
    if den_is_plain_integer || den_is_bare_power {
        format!("{num_text}/{den_text}")
    } else {
        format!("{num_text}/({den_text})")
    }
}

/// Float-friendly rendering used in reports: `None` when a coefficient does
/// not fit in `f64`.
pub fn approx_coefficients(p: &Polynomial) -> Option<Vec<(f64, f64)>> {
    p.coeffs()
        .iter()
        .map(|c| Some((c.re().to_f64()?, c.im().to_f64()?)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn lower(s: &str) -> RationalMap {
        parse_rational_map(s).unwrap()
    }

    #[test]
    fn lowers_paper_formulas() {
        assert_eq!(lower("2*z - 1/z"), RationalMap::from_ints(&[-1, 0, 2], &[0, 1]).unwrap());
        assert_eq!(lower("(z^2-1)/(2*z)"), RationalMap::from_ints(&[-1, 0, 1], &[0, 2]).unwrap());
        assert_eq!(lower("((z^2-1)/(z^2+1))"), crate::exact::phi());
    }

    #[test]
    fn implicit_multiplication() {
        assert_eq!(lower("2z-4/z"), lower("2*z-4/z"));
        assert_eq!(lower("4z^2-2"), lower("4*z^2-2"));
        assert_eq!(lower("3(z+1)"), lower("3*z+3"));
    }

    #[test]
    fn decimals_are_exact() {
        let f = lower("0.5*z^2");
        assert_eq!(f, lower("z^2/2"));
    }

    #[test]
    fn dangling_caret_reports_offset() {
        let err = parse_map("z^").unwrap_err();
        assert_eq!(err.offset, 2);
        assert_eq!(err.expected, vec!["integer"]);
    }

    #[test]
    fn other_syntax_errors() {
        assert_eq!(parse_map("(z+1").unwrap_err().offset, 4);
        assert_eq!(parse_map("z^-1").unwrap_err().offset, 2);
        assert_eq!(parse_map("z $ 2").unwrap_err().offset, 2);
        assert_eq!(parse_map("z z").unwrap_err().offset, 2);
        assert_eq!(parse_map("").unwrap_err().offset, 0);
    }

    #[test]
    fn division_by_zero_is_semantic() {
        assert!(parse_map("1/(z-z)").is_ok());
        assert!(matches!(parse_rational_map("1/(z-z)"), Err(crate::Error::DivisionByZeroMap)));
    }

    #[test]
    fn canonical_map_text() {
        let ft = RationalMap::from_ints(&[0, 3, 5], &[1, 3, 4]).unwrap();
        assert_eq!(format_map(&ft), "(5*z^2+3*z)/(4*z^2+3*z+1)");
        assert_eq!(format_map(&lower("2*z^2-1")), "2*z^2-1");
        assert_eq!(format_map(&lower("(z^2-1)/(2*z)")), "(z^2-1)/(2*z)");
        assert_eq!(format_map(&lower("z^2/6+1/3")), "(z^2+2)/6");
        assert_eq!(format_map(&lower("-z/(z^2+1)")), "-z/(z^2+1)");
        assert_eq!(format_map(&lower("2*z - 4/z")), "(2*z^2-4)/z");
        assert_eq!(format_map(&lower("1/z^3")), "1/z^3");
        assert_eq!(format_map(&lower("i*z^2 - (1+2i)")), "i*z^2+(-1-2*i)");
    }

    #[test]
    fn ast_printing_minimal_parens() {
        let e = parse_map("2z - (1 - z)/z^2").unwrap().ast;
        assert_eq!(e.to_string(), "2*z-(1-z)/z^2");
        assert_eq!(parse_map("-(z*z)").unwrap().ast.to_string(), "-(z*z)");
        assert_eq!(parse_map("(-z)^2").unwrap().ast.to_string(), "(-z)^2");
        assert_eq!(parse_map("0.25*z").unwrap().ast.to_string(), "0.25*z");
    }

    fn corpus() -> Vec<&'static str> {
        include_str!("../tests/data/parser_corpus.txt").lines().collect()
    }

    #[test]
    fn corpus_round_trips() {
        let corpus = corpus();
        assert_eq!(corpus.len(), 50);
        for s in corpus {
            let first = parse_map(s).unwrap().ast;
            let printed = first.to_string();
            let again = parse_map(&printed).unwrap().ast;
            assert_eq!(first, again, "{s} -> {printed}");
            let map = first.lower().unwrap();
            assert_eq!(parse_rational_map(&format_map(&map)).unwrap(), map, "{s}");
        }
    }

    fn arb_expr() -> impl Strategy<Value = Expr> {
        let leaf = prop_oneof![
            (0u32..50).prop_map(|n| Expr::Num(BigRational::from_integer(n.into()))),
            (1u32..400).prop_map(|n| Expr::Num(BigRational::new(n.into(), 8.into()))),
            Just(Expr::Z),
            Just(Expr::I),
        ];
        leaf.prop_recursive(5, 40, 2, |inner| {
            prop_oneof![
                inner.clone().prop_map(|e| Expr::Neg(Box::new(e))),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::Add(Box::new(a), Box::new(b))),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::Sub(Box::new(a), Box::new(b))),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::Mul(Box::new(a), Box::new(b))),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::Div(Box::new(a), Box::new(b))),
                (inner, 0u32..4).prop_map(|(a, k)| Expr::Pow(Box::new(a), k)),
            ]
        })
    }

    proptest! {
        #[test]
        fn printed_ast_reparses_identically(e in arb_expr()) {
            let printed = e.to_string();
            let back = parse_map(&printed).unwrap().ast;
            prop_assert_eq!(back, e);
        }
    }
}
