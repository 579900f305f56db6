//! Exact arithmetic over the quadratic field Q(sqrt 2).
//!
//! Every scalar in the engine is `a + b*sqrt2` with arbitrary-precision
//! rational `a` and `b`. The field is closed under the four arithmetic
//! operations, supports an exact sign test (no floating point anywhere on
//! the comparison path), and round-trips through a small literal grammar:
//!
//! ```text
//! SCALAR   := TERM (("+" | "-") TERM)?
//! TERM     := RATIONAL ("*sqrt2")? | "sqrt2"
//! RATIONAL := ("-")? INT ("/" POSINT)?
//! ```
//!
//! Whitespace around tokens is permitted; at most one sqrt2 term per literal.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

/// Element of Q(sqrt 2) in canonical form: both rational parts are kept
/// reduced with positive denominator by construction.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Scalar {
    rat: BigRational,
    sqrt2: BigRational,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ScalarError {
    #[error("division by zero")]
    DivisionByZero,
}

#[derive(Debug, Error, PartialEq, Eq)]
#[error("invalid scalar literal: {reason} (at token `{token}`)")]
pub struct ParseScalarError {
    pub token: String,
    pub reason: String,
}

impl Scalar {
    pub fn new(rat: BigRational, sqrt2: BigRational) -> Self {
        Scalar { rat, sqrt2 }
    }

    pub fn zero() -> Self {
        Scalar::new(BigRational::zero(), BigRational::zero())
    }

    pub fn one() -> Self {
        Scalar::new(BigRational::one(), BigRational::zero())
    }

    /// The generator sqrt2 itself.
    pub fn sqrt2() -> Self {
        Scalar::new(BigRational::zero(), BigRational::one())
    }

    pub fn from_int(n: i64) -> Self {
        Scalar::new(BigRational::from_integer(BigInt::from(n)), BigRational::zero())
    }

    /// Rational `num/den`. Panics if `den == 0`.
    pub fn from_ratio(num: i64, den: i64) -> Self {
        Scalar::new(
            BigRational::new(BigInt::from(num), BigInt::from(den)),
            BigRational::zero(),
        )
    }

    /// `(num/den) * sqrt2`. Panics if `den == 0`.
    pub fn sqrt2_ratio(num: i64, den: i64) -> Self {
        Scalar::new(
            BigRational::zero(),
            BigRational::new(BigInt::from(num), BigInt::from(den)),
        )
    }

    pub fn rat_part(&self) -> &BigRational {
        &self.rat
    }

    pub fn sqrt2_part(&self) -> &BigRational {
        &self.sqrt2
    }

    pub fn is_zero(&self) -> bool {
        self.rat.is_zero() && self.sqrt2.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.rat.is_one() && self.sqrt2.is_zero()
    }

    /// True when the sqrt2 part vanishes.
    pub fn is_rational(&self) -> bool {
        self.sqrt2.is_zero()
    }

    /// Exact sign of `a + b*sqrt2` by case split on the signs of `a`, `b`
    /// and comparison of `a^2` against `2*b^2`. Never touches floats.
    pub fn sign(&self) -> Ordering {
        let sa = rational_sign(&self.rat);
        let sb = rational_sign(&self.sqrt2);
        match (sa, sb) {
            (Ordering::Equal, s) => s,
            (s, Ordering::Equal) => s,
            (Ordering::Greater, Ordering::Greater) => Ordering::Greater,
            (Ordering::Less, Ordering::Less) => Ordering::Less,
            // a > 0, b < 0: positive iff a^2 > 2 b^2 (sqrt2 irrational, so never equal)
            (Ordering::Greater, Ordering::Less) => {
                let a2 = &self.rat * &self.rat;
                let b2 = &self.sqrt2 * &self.sqrt2;
                a2.cmp(&(b2 * BigRational::from_integer(BigInt::from(2))))
            }
            // a < 0, b > 0: positive iff 2 b^2 > a^2
            (Ordering::Less, Ordering::Greater) => {
                let a2 = &self.rat * &self.rat;
                let b2 = &self.sqrt2 * &self.sqrt2;
                (b2 * BigRational::from_integer(BigInt::from(2))).cmp(&a2)
            }
        }
    }

    pub fn is_positive(&self) -> bool {
        self.sign() == Ordering::Greater
    }

    pub fn is_negative(&self) -> bool {
        self.sign() == Ordering::Less
    }

    pub fn abs(&self) -> Scalar {
        if self.is_negative() {
            -self
        } else {
            self.clone()
        }
    }

    /// Multiplicative inverse: `1/(a + b*sqrt2) = (a - b*sqrt2)/(a^2 - 2 b^2)`.
    pub fn recip(&self) -> Result<Scalar, ScalarError> {
        if self.is_zero() {
            return Err(ScalarError::DivisionByZero);
        }
        // a^2 - 2 b^2 = 0 with rational a, b forces a = b = 0.
        let norm = &self.rat * &self.rat
            - &self.sqrt2 * &self.sqrt2 * BigRational::from_integer(BigInt::from(2));
        Ok(Scalar::new(&self.rat / &norm, -&self.sqrt2 / &norm))
    }

    pub fn checked_div(&self, rhs: &Scalar) -> Result<Scalar, ScalarError> {
        Ok(self * &rhs.recip()?)
    }

    /// Double-precision value of the scalar.
    pub fn to_f64(&self) -> f64 {
        let a = self.rat.to_f64().unwrap_or(f64::NAN);
        let b = self.sqrt2.to_f64().unwrap_or(f64::NAN);
        a + b * std::f64::consts::SQRT_2
    }

    pub fn parse(text: &str) -> Result<Scalar, ParseScalarError> {
        parse_literal(text)
    }
}

fn rational_sign(r: &BigRational) -> Ordering {
    if r.is_zero() {
        Ordering::Equal
    } else if r.is_positive() {
        Ordering::Greater
    } else {
        Ordering::Less
    }
}

impl PartialOrd for Scalar {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Scalar {
    fn cmp(&self, other: &Self) -> Ordering {
        (self - other).sign()
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Scalar({self})")
    }
}

// ---------------------------------------------------------------------------
// Arithmetic
// ---------------------------------------------------------------------------

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar::new(-&self.rat, -&self.sqrt2)
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

impl Add for &Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        Scalar::new(&self.rat + &rhs.rat, &self.sqrt2 + &rhs.sqrt2)
    }
}

impl Sub for &Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        Scalar::new(&self.rat - &rhs.rat, &self.sqrt2 - &rhs.sqrt2)
    }
}

impl Mul for &Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        // (a + b s)(c + d s) = (ac + 2bd) + (ad + bc) s  with s^2 = 2
        let two = BigRational::from_integer(BigInt::from(2));
        Scalar::new(
            &self.rat * &rhs.rat + &self.sqrt2 * &rhs.sqrt2 * two,
            &self.rat * &rhs.sqrt2 + &self.sqrt2 * &rhs.rat,
        )
    }
}

/// Exact division. Panics on a zero divisor; use [`Scalar::checked_div`]
/// on input-dependent paths.
impl Div for &Scalar {
    type Output = Scalar;
    fn div(self, rhs: &Scalar) -> Scalar {
        self.checked_div(rhs).expect("division by zero")
    }
}

macro_rules! forward_value_ops {
    ($($Op:ident, $op:ident;)+) => {$(
        impl $Op for Scalar {
            type Output = Scalar;
            fn $op(self, rhs: Scalar) -> Scalar {
                (&self).$op(&rhs)
            }
        }
        impl $Op<&Scalar> for Scalar {
            type Output = Scalar;
            fn $op(self, rhs: &Scalar) -> Scalar {
                (&self).$op(rhs)
            }
        }
        impl $Op<Scalar> for &Scalar {
            type Output = Scalar;
            fn $op(self, rhs: Scalar) -> Scalar {
                self.$op(&rhs)
            }
        }
    )+};
}
forward_value_ops!(Add, add; Sub, sub; Mul, mul; Div, div;);

impl AddAssign<&Scalar> for Scalar {
    fn add_assign(&mut self, rhs: &Scalar) {
        *self = &*self + rhs;
    }
}

impl SubAssign<&Scalar> for Scalar {
    fn sub_assign(&mut self, rhs: &Scalar) {
        *self = &*self - rhs;
    }
}

impl MulAssign<&Scalar> for Scalar {
    fn mul_assign(&mut self, rhs: &Scalar) {
        *self = &*self * rhs;
    }
}

impl std::iter::Sum for Scalar {
    fn sum<I: Iterator<Item = Scalar>>(iter: I) -> Scalar {
        iter.fold(Scalar::zero(), |acc, x| acc + x)
    }
}

// ---------------------------------------------------------------------------
// Printing: canonical literal
// ---------------------------------------------------------------------------

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        if self.sqrt2.is_zero() {
            return write!(f, "{}", self.rat);
        }
        if self.rat.is_zero() {
            return if self.sqrt2.is_one() {
                write!(f, "sqrt2")
            } else {
                write!(f, "{}*sqrt2", self.sqrt2)
            };
        }
        let mag = self.sqrt2.abs();
        let sep = if self.sqrt2.is_negative() { '-' } else { '+' };
        if mag.is_one() {
            write!(f, "{} {} sqrt2", self.rat, sep)
        } else {
            write!(f, "{} {} {}*sqrt2", self.rat, sep, mag)
        }
    }
}

// ---------------------------------------------------------------------------
// Parsing
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Int(String),
    Sqrt2,
    Plus,
    Minus,
    Star,
    Slash,
}

impl fmt::Display for Token {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Token::Int(s) => write!(f, "{s}"),
            Token::Sqrt2 => write!(f, "sqrt2"),
            Token::Plus => write!(f, "+"),
            Token::Minus => write!(f, "-"),
            Token::Star => write!(f, "*"),
            Token::Slash => write!(f, "/"),
        }
    }
}

fn err(token: impl fmt::Display, reason: impl Into<String>) -> ParseScalarError {
    ParseScalarError {
        token: token.to_string(),
        reason: reason.into(),
    }
}

fn tokenize(text: &str) -> Result<Vec<Token>, ParseScalarError> {
    let mut tokens = Vec::new();
    let bytes = text.as_bytes();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        match c {
            ' ' | '\t' => i += 1,
            '+' => {
                tokens.push(Token::Plus);
                i += 1;
            }
            '-' => {
                tokens.push(Token::Minus);
                i += 1;
            }
            '*' => {
                tokens.push(Token::Star);
                i += 1;
            }
            '/' => {
                tokens.push(Token::Slash);
                i += 1;
            }
            '0'..='9' => {
                let start = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                tokens.push(Token::Int(text[start..i].to_string()));
            }
            's' => {
                if text[i..].starts_with("sqrt2") {
                    tokens.push(Token::Sqrt2);
                    i += 5;
                } else {
                    let rest: String = text[i..].chars().take_while(|c| c.is_alphanumeric()).collect();
                    return Err(err(rest, "unknown symbol"));
                }
            }
            other => return Err(err(other, "unexpected character")),
        }
    }
    Ok(tokens)
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
}

/// A parsed TERM: either purely rational or a rational multiple of sqrt2.
struct Term {
    coeff: BigRational,
    has_sqrt2: bool,
}

impl Parser {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn next(&mut self) -> Option<Token> {
        let t = self.tokens.get(self.pos).cloned();
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn parse_rational(&mut self) -> Result<BigRational, ParseScalarError> {
        let negative = if self.peek() == Some(&Token::Minus) {
            self.next();
            true
        } else {
            false
        };
        let numer = match self.next() {
            Some(Token::Int(s)) => BigInt::from_str(&s).expect("digits"),
            Some(t) => return Err(err(t, "expected an integer")),
            None => return Err(err("end of input", "expected an integer")),
        };
        let denom = if self.peek() == Some(&Token::Slash) {
            self.next();
            match self.next() {
                Some(Token::Int(s)) => {
                    let d = BigInt::from_str(&s).expect("digits");
                    if d.is_zero() {
                        return Err(err(s, "denominator must be positive"));
                    }
                    d
                }
                Some(t) => return Err(err(t, "expected a positive integer denominator")),
                None => return Err(err("end of input", "expected a positive integer denominator")),
            }
        } else {
            BigInt::one()
        };
        let mut r = BigRational::new(numer, denom);
        if negative {
            r = -r;
        }
        Ok(r)
    }

    fn parse_term(&mut self) -> Result<Term, ParseScalarError> {
        if self.peek() == Some(&Token::Sqrt2) {
            self.next();
            return Ok(Term {
                coeff: BigRational::one(),
                has_sqrt2: true,
            });
        }
        let coeff = self.parse_rational()?;
        if self.peek() == Some(&Token::Star) {
            self.next();
            match self.next() {
                Some(Token::Sqrt2) => Ok(Term {
                    coeff,
                    has_sqrt2: true,
                }),
                Some(t) => Err(err(t, "expected `sqrt2` after `*`")),
                None => Err(err("end of input", "expected `sqrt2` after `*`")),
            }
        } else {
            Ok(Term {
                coeff,
                has_sqrt2: false,
            })
        }
    }
}

fn parse_literal(text: &str) -> Result<Scalar, ParseScalarError> {
    let tokens = tokenize(text)?;
    if tokens.is_empty() {
        return Err(err("end of input", "empty literal"));
    }
    let mut parser = Parser { tokens, pos: 0 };
    let first = parser.parse_term()?;
    let mut terms = vec![first];
    if let Some(sep) = parser.peek().cloned() {
        match sep {
            Token::Plus | Token::Minus => {
                parser.next();
                let mut term = parser.parse_term()?;
                if sep == Token::Minus {
                    term.coeff = -term.coeff;
                }
                terms.push(term);
            }
            other => return Err(err(other, "expected `+` or `-` between terms")),
        }
    }
    if let Some(t) = parser.peek() {
        return Err(err(t, "trailing input after literal"));
    }
    if terms.iter().filter(|t| t.has_sqrt2).count() > 1 {
        return Err(err("sqrt2", "at most one sqrt2 term per literal"));
    }
    let mut rat = BigRational::zero();
    let mut sqrt2 = BigRational::zero();
    for t in terms {
        if t.has_sqrt2 {
            sqrt2 += t.coeff;
        } else {
            rat += t.coeff;
        }
    }
    Ok(Scalar::new(rat, sqrt2))
}

impl FromStr for Scalar {
    type Err = ParseScalarError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Scalar::parse(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn s(text: &str) -> Scalar {
        Scalar::parse(text).unwrap()
    }

    #[test]
    fn arithmetic_examples() {
        // (1/2) * sqrt2 = (1/2) sqrt2
        assert_eq!(s("1/2") * s("sqrt2"), s("1/2*sqrt2"));
        // 1 / sqrt2 rationalizes to (1/2) sqrt2
        assert_eq!(s("1").checked_div(&s("sqrt2")).unwrap(), s("1/2*sqrt2"));
        // conjugate product (1 + sqrt2)(1 - sqrt2) = -1
        assert_eq!(s("1 + sqrt2") * s("1 - sqrt2"), s("-1"));
    }

    #[test]
    fn division_by_zero_is_an_error() {
        assert_eq!(
            s("1").checked_div(&Scalar::zero()),
            Err(ScalarError::DivisionByZero)
        );
        assert_eq!(Scalar::zero().recip(), Err(ScalarError::DivisionByZero));
    }

    #[test]
    fn parse_examples() {
        assert_eq!(s("-3/2"), Scalar::from_ratio(-3, 2));
        assert_eq!(s("1/2*sqrt2"), Scalar::sqrt2_ratio(1, 2));
        assert_eq!(
            s("1 - 1/2*sqrt2"),
            Scalar::new(
                BigRational::one(),
                BigRational::new(BigInt::from(-1), BigInt::from(2))
            )
        );
        // whitespace tolerance and bare sqrt2 second term
        assert_eq!(s("  1/2 * sqrt2 "), Scalar::sqrt2_ratio(1, 2));
        assert_eq!(s("0 - sqrt2"), Scalar::sqrt2_ratio(-1, 1));
    }

    #[test]
    fn parse_errors_name_the_token() {
        let e = Scalar::parse("1 + 2x").unwrap_err();
        assert_eq!(e.token, "x");
        let e = Scalar::parse("sqrt2 + sqrt2").unwrap_err();
        assert_eq!(e.reason, "at most one sqrt2 term per literal");
        let e = Scalar::parse("1/0").unwrap_err();
        assert_eq!(e.reason, "denominator must be positive");
        let e = Scalar::parse("3*2").unwrap_err();
        assert!(e.reason.contains("sqrt2"));
        let e = Scalar::parse("").unwrap_err();
        assert_eq!(e.reason, "empty literal");
        let e = Scalar::parse("1 1").unwrap_err();
        assert!(e.reason.contains("expected `+` or `-`"));
        let e = Scalar::parse("sqrter").unwrap_err();
        assert_eq!(e.reason, "unknown symbol");
    }

    #[test]
    fn to_float_examples() {
        assert_eq!(Scalar::zero().to_f64(), 0.0);
        let v = Scalar::sqrt2_ratio(-2, 1).to_f64();
        assert!((v - (-2.828_427_124_746_190_3)).abs() < 1e-12);
        assert_eq!(Scalar::from_ratio(-3, 2).to_f64(), -1.5);
    }

    #[test]
    fn sign_cases() {
        assert_eq!(s("0").sign(), Ordering::Equal);
        assert_eq!(s("1/2").sign(), Ordering::Greater);
        assert_eq!(s("-1*sqrt2").sign(), Ordering::Less);
        // mixed signs resolved by comparing a^2 against 2 b^2
        assert_eq!(s("3 - 2*sqrt2").sign(), Ordering::Greater); // 9 > 8
        assert_eq!(s("-3 + 2*sqrt2").sign(), Ordering::Less);
        assert_eq!(s("1 - sqrt2").sign(), Ordering::Less); // 1 < 2
        assert_eq!(s("-1 + sqrt2").sign(), Ordering::Greater);
        assert_eq!(s("7 - 5*sqrt2").sign(), Ordering::Less); // 49 < 50
    }

    #[test]
    fn display_is_canonical() {
        for (lit, expect) in [
            ("0", "0"),
            ("  -3/2", "-3/2"),
            ("sqrt2", "sqrt2"),
            ("0 - sqrt2", "-1*sqrt2"),
            ("1/2*sqrt2", "1/2*sqrt2"),
            ("1 - 1/2*sqrt2", "1 - 1/2*sqrt2"),
            ("1 + sqrt2", "1 + sqrt2"),
            ("2 - sqrt2", "2 - sqrt2"),
            ("1 + 2 ", "3"),
            ("1/2 + 1/2*sqrt2", "1/2 + 1/2*sqrt2"),
        ] {
            assert_eq!(s(lit).to_string(), expect, "literal {lit:?}");
        }
    }

    /// Deterministic pseudo-random scalar stream for the ordering check.
    fn scalar_stream(seed: u64) -> impl Iterator<Item = Scalar> {
        let mut state = seed;
        std::iter::repeat_with(move || {
            let mut next = || {
                state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                ((state >> 33) as i64 % 41) - 20
            };
            let (a, b, c, d) = (next(), next(), next(), next());
            Scalar::new(
                BigRational::new(BigInt::from(a), BigInt::from(1 + c.unsigned_abs() as i64)),
                BigRational::new(BigInt::from(b), BigInt::from(1 + d.unsigned_abs() as i64)),
            )
        })
    }

    #[test]
    fn to_float_respects_exact_order() {
        let mut xs = scalar_stream(7).take(20_000);
        for _ in 0..10_000 {
            let a = xs.next().unwrap();
            let b = xs.next().unwrap();
            if a < b {
                assert!(a.to_f64() <= b.to_f64(), "{a} vs {b}");
            } else if b < a {
                assert!(b.to_f64() <= a.to_f64(), "{a} vs {b}");
            }
        }
    }

    fn arb_scalar() -> impl Strategy<Value = Scalar> {
        (
            -200i64..200,
            1i64..40,
            -200i64..200,
            1i64..40,
        )
            .prop_map(|(an, ad, bn, bd)| {
                Scalar::new(
                    BigRational::new(BigInt::from(an), BigInt::from(ad)),
                    BigRational::new(BigInt::from(bn), BigInt::from(bd)),
                )
            })
    }

    proptest! {
        #[test]
        fn field_axioms(a in arb_scalar(), b in arb_scalar(), c in arb_scalar()) {
            prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &(&b + &c), &a * &b + &a * &c);
            prop_assert_eq!(&a + &(-&a), Scalar::zero());
            if !a.is_zero() {
                prop_assert_eq!(&a * &a.recip().unwrap(), Scalar::one());
            }
        }

        #[test]
        fn parse_print_roundtrip(a in arb_scalar()) {
            let printed = a.to_string();
            let back = Scalar::parse(&printed).unwrap();
            prop_assert_eq!(&back, &a);
            // printing is idempotent on canonical forms
            prop_assert_eq!(back.to_string(), printed);
        }

        #[test]
        fn sign_agrees_with_float(a in arb_scalar()) {
            let f = a.to_f64();
            match a.sign() {
                Ordering::Greater => prop_assert!(f > -1e-9),
                Ordering::Less => prop_assert!(f < 1e-9),
                Ordering::Equal => prop_assert!(f.abs() < 1e-9),
            }
        }
    }
}
