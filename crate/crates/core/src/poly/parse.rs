//! Text format for homogeneous polynomials with rational coefficients.
//!
//! ```text
//! # Perazzo cubic in P^4
//! vars: 5
//! x0*x1*x2 + x0^2*x4
//!   + x1^2*x3
//! ```
//!
//! A term is an optional sign, an optional coefficient (`3`, `-1/2`) and a
//! product of powers `x<i>` or `x<i>^<e>` joined by `*`. Lines starting with
//! `#` are comments and the body may span several lines. The `vars:` header
//! fixes the number of variables; without it the count is one more than the
//! largest index used.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::multi::MultiPoly;
use crate::error::{Error, Result};
use crate::field::{PrimeField, RationalField};

pub const MAX_VARS: usize = 256;
pub const MAX_EXPONENT: u32 = 64;

struct Lexer<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() {
            match self.src[self.pos] {
                b' ' | b'\t' | b'\r' | b'\n' => self.pos += 1,
                b'#' => {
                    while self.pos < self.src.len() && self.src[self.pos] != b'\n' {
                        self.pos += 1;
                    }
                }
                _ => break,
            }
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn digits(&mut self) -> Option<&'a str> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        (self.pos > start).then(|| std::str::from_utf8(&self.src[start..self.pos]).unwrap())
    }

    fn err(&self, message: impl Into<String>) -> Error {
        Error::Parse { position: self.pos, message: message.into() }
    }
}

struct RawTerm {
    start: usize,
    end: usize,
    coeff: BigRational,
    exps: Vec<(usize, u32)>,
}

impl RawTerm {
    fn degree(&self) -> u32 {
        self.exps.iter().map(|&(_, e)| e).sum()
    }
}

fn small_int<T: std::str::FromStr>(lx: &Lexer<'_>, s: &str, what: &str) -> Result<T> {
    s.parse().map_err(|_| lx.err(format!("{what} `{s}` is too large")))
}

fn parse_term(lx: &mut Lexer<'_>, negative: bool) -> Result<RawTerm> {
    lx.skip_ws();
    let start = lx.pos;
    let mut coeff = BigRational::one();
    let mut exps = Vec::new();
    let mut expect_factor = true;

    if let Some(num) = lx.digits() {
        let num: BigInt = num.parse().unwrap();
        let den = if lx.eat(b'/') {
            let d = lx.digits().ok_or_else(|| lx.err("expected denominator after `/`"))?;
            let d: BigInt = d.parse().unwrap();
            if d.is_zero() {
                return Err(lx.err("zero denominator"));
            }
            d
        } else {
            BigInt::one()
        };
        coeff = BigRational::new(num, den);
        expect_factor = lx.eat(b'*');
    }

    while expect_factor {
        if !lx.eat(b'x') {
            return Err(lx.err("expected a variable `x<i>`"));
        }
        // the index must follow `x` directly
        if !lx.src.get(lx.pos).is_some_and(u8::is_ascii_digit) {
            return Err(lx.err("expected a variable index after `x`"));
        }
        let idx = lx.digits().unwrap();
        let idx: usize = small_int(lx, idx, "variable index")?;
        if idx >= MAX_VARS {
            return Err(lx.err(format!("variable index {idx} exceeds the limit of {MAX_VARS}")));
        }
        let e = if lx.eat(b'^') {
            let e = lx.digits().ok_or_else(|| lx.err("expected exponent after `^`"))?;
            let e: u32 = small_int(lx, e, "exponent")?;
            if e > MAX_EXPONENT {
                return Err(lx.err(format!("exponent {e} exceeds the limit of {MAX_EXPONENT}")));
            }
            e
        } else {
            1
        };
        exps.push((idx, e));
        expect_factor = lx.eat(b'*');
    }

    if negative {
        coeff = -coeff;
    }
    Ok(RawTerm { start, end: lx.pos, coeff, exps })
}

/// Parses the header and the polynomial body.
pub fn parse_polynomial(text: &str) -> Result<MultiPoly<BigRational>> {
    let mut lx = Lexer { src: text.as_bytes(), pos: 0 };
    let mut declared = None;

    lx.skip_ws();
    if text[lx.pos..].starts_with("vars") {
        lx.pos += 4;
        if !lx.eat(b':') {
            return Err(lx.err("expected `:` after `vars`"));
        }
        let k = lx.digits().ok_or_else(|| lx.err("expected a variable count"))?;
        let k: usize = small_int(&lx, k, "variable count")?;
        if k == 0 || k > MAX_VARS {
            return Err(lx.err(format!("variable count must be between 1 and {MAX_VARS}")));
        }
        declared = Some(k);
    }

    let mut terms = Vec::new();
    let mut first = true;
    loop {
        let c = lx.peek();
        if c.is_none() {
            if first {
                return Err(lx.err("empty polynomial"));
            }
            break;
        }
        let negative = match c {
            Some(b'+') => {
                lx.pos += 1;
                false
            }
            Some(b'-') => {
                lx.pos += 1;
                true
            }
            _ if first => false,
            _ => return Err(lx.err("expected `+` or `-` between terms")),
        };
        first = false;
        terms.push(parse_term(&mut lx, negative)?);
    }

    let expected = terms[0].degree();
    for t in &terms {
        let d = t.degree();
        if d != expected {
            return Err(Error::Inhomogeneous {
                term: text[t.start..t.end].trim().to_string(),
                position: t.start,
                found: d,
                expected,
            });
        }
    }

    let used = terms
        .iter()
        .flat_map(|t| t.exps.iter().map(|&(i, _)| i + 1))
        .max()
        .unwrap_or(0);
    let num_vars = match declared {
        Some(k) if used > k => {
            return Err(Error::Parse {
                position: 0,
                message: format!("`vars: {k}` but variable x{} is used", used - 1),
            })
        }
        Some(k) => k,
        None => used.max(1),
    };

    let q = RationalField;
    MultiPoly::from_terms(
        &q,
        num_vars,
        terms.into_iter().map(|t| {
            let mut e = vec![0u32; num_vars];
            for (i, k) in t.exps {
                e[i] += k;
            }
            (e, t.coeff)
        }),
    )
}

pub fn format_rational(c: &BigRational) -> String {
    if c.is_integer() {
        c.numer().to_string()
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

/// Inverse of [`parse_polynomial`], including the `vars:` header.
pub fn format_polynomial(g: &MultiPoly<BigRational>) -> String {
    format!("vars: {}\n{}\n", g.num_vars(), g.render(format_rational))
}

/// Formats a form over `F_p` with symmetric integer representatives.
pub fn format_mod_p(f: &PrimeField, g: &MultiPoly<u64>) -> String {
    g.render(|c| f.to_signed(*c).to_string())
}

/// Reduction modulo `p`, failing if some denominator is divisible by `p`.
pub fn reduce_mod_p(f: &PrimeField, g: &MultiPoly<BigRational>) -> Result<MultiPoly<u64>> {
    for (_, c) in g.terms() {
        if f.from_rational(c).is_none() {
            return Err(Error::BadReduction(f.modulus()));
        }
    }
    Ok(g.map_coeffs(f, |c| f.from_rational(c).unwrap()))
}

/// Clears denominators and content so that the coefficients are coprime
/// integers with positive leading coefficient.
pub fn primitive_part(g: &MultiPoly<BigRational>) -> MultiPoly<BigRational> {
    use num_integer::Integer;
    let q = RationalField;
    let mut lcm = BigInt::one();
    for (_, c) in g.terms() {
        lcm = lcm.lcm(c.denom());
    }
    let mut gcd = BigInt::zero();
    for (_, c) in g.terms() {
        gcd = gcd.gcd(&(c.numer() * (&lcm / c.denom())));
    }
    if gcd.is_zero() {
        return g.clone();
    }
    let mut s = BigRational::new(lcm, gcd);
    if g.terms().next().is_some_and(|(_, c)| c.is_negative()) {
        s = -s;
    }
    g.scale(&q, &s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn r(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn parses_perazzo() {
        let g = parse_polynomial("# comment\nx0*x1*x2 + x0^2*x4\n  + x1^2*x3\n").unwrap();
        assert_eq!(g.num_vars(), 5);
        assert_eq!(g.degree(), Some(3));
        assert_eq!(g.num_terms(), 3);
        assert_eq!(g.coeff(&RationalField, &[2, 0, 0, 0, 1]), r(1, 1));
    }

    #[test]
    fn header_and_coefficients() {
        let g = parse_polynomial("vars: 7\n-1/2*x0^3 + 3*x1*x2*x3 - x4^2*x0").unwrap();
        assert_eq!(g.num_vars(), 7);
        assert_eq!(g.coeff(&RationalField, &[3, 0, 0, 0, 0, 0, 0]), r(-1, 2));
        assert_eq!(g.coeff(&RationalField, &[1, 0, 0, 0, 2, 0, 0]), r(-1, 1));
        assert!(parse_polynomial("3 x1").is_err());
        assert!(parse_polynomial("3*x1").is_ok());
    }

    #[test]
    fn inhomogeneous_reports_term_and_position() {
        let text = "x0^3 + x1^2*x2 + 5*x1";
        match parse_polynomial(text) {
            Err(Error::Inhomogeneous { term, position, found, expected }) => {
                assert_eq!(term, "5*x1");
                assert_eq!(&text[position..position + 4], "5*x1");
                assert_eq!((found, expected), (1, 3));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn malformed_inputs() {
        for bad in ["", "x", "x0 x1", "x0 +", "1/0*x0", "vars: 2\nx5", "x0^", "y0", "x0^99999999999", "vars 3 x0"] {
            assert!(parse_polynomial(bad).is_err(), "{bad:?} should be rejected");
        }
    }

    #[test]
    fn reduction_checks_denominators() {
        let g = parse_polynomial("1/7*x0^3 + x1^3").unwrap();
        assert!(matches!(reduce_mod_p(&PrimeField::new(7).unwrap(), &g), Err(Error::BadReduction(7))));
        let h = reduce_mod_p(&PrimeField::new(11).unwrap(), &g).unwrap();
        assert_eq!(h.coeff(&PrimeField::new(11).unwrap(), &[3, 0]), 8);
    }

    #[test]
    fn primitive_part_clears_denominators() {
        let g = parse_polynomial("-1/2*x0^2 + 3/4*x1^2").unwrap();
        assert_eq!(format_polynomial(&primitive_part(&g)), "vars: 2\n2*x0^2 - 3*x1^2\n");
    }

    proptest! {
        #[test]
        fn never_panics(s in "\\PC{0,80}") {
            let _ = parse_polynomial(&s);
        }

        #[test]
        fn never_panics_on_near_miss(s in "[x0-9 ^*+/\\-:#\n]{0,60}") {
            let _ = parse_polynomial(&s);
        }

        #[test]
        fn roundtrip(terms in proptest::collection::vec((-20i64..20, 1i64..5, 0u32..4, 0u32..4), 1..8)) {
            let body: Vec<String> = terms
                .iter()
                .map(|&(n, d, a, b)| format!("{n}/{d}*x0^{a}*x1^{b}*x2^{}", 6 - a - b))
                .collect();
            let g = parse_polynomial(&format!("vars: 4\n{}", body.join(" + ").replace("+ -", "- "))).unwrap();
            let again = parse_polynomial(&format_polynomial(&g)).unwrap();
            prop_assert_eq!(g, again);
        }
    }
}
