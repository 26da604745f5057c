//! SL(2,Z) monodromy algebra.
//!
//! Torus bundles are described by a monodromy word `±T^{-a₁}S···T^{-aₙ}S` with
//! `T = [[1,1],[0,1]]` and `S = [[0,1],[-1,0]]`. The overall sign is kept on the
//! word, not on the matrix type, since `A` and `-A` glue different bundles.

use std::fmt;
use std::ops::{Mul, Neg};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::linalg::{is_perfect_square, IntMatrix};
use crate::strings::IntString;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn flip(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }

    pub fn to_i64(self) -> i64 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    pub fn from_i64(x: i64) -> Option<Sign> {
        match x {
            1 => Some(Sign::Plus),
            -1 => Some(Sign::Minus),
            _ => None,
        }
    }

    pub fn symbol(self) -> char {
        match self {
            Sign::Plus => '+',
            Sign::Minus => '-',
        }
    }

    pub fn parse_symbol(s: &str) -> Option<Sign> {
        match s {
            "+" | "+1" => Some(Sign::Plus),
            "-" | "-1" => Some(Sign::Minus),
            _ => None,
        }
    }
}

impl Mul for Sign {
    type Output = Sign;

    fn mul(self, rhs: Sign) -> Sign {
        if self == rhs {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.symbol())
    }
}

/// An element `[[a,b],[c,d]]` of SL(2,Z).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Sl2 {
    a: BigInt,
    b: BigInt,
    c: BigInt,
    d: BigInt,
}

impl Sl2 {
    pub fn new(a: BigInt, b: BigInt, c: BigInt, d: BigInt) -> Result<Self> {
        let det = &a * &d - &b * &c;
        if !det.is_one() {
            return Err(Error::NotUnimodular(det.to_string()));
        }
        Ok(Sl2 { a, b, c, d })
    }

    pub fn from_i64(a: i64, b: i64, c: i64, d: i64) -> Result<Self> {
        Self::new(a.into(), b.into(), c.into(), d.into())
    }

    fn raw(a: i64, b: i64, c: i64, d: i64) -> Self {
        Sl2 {
            a: a.into(),
            b: b.into(),
            c: c.into(),
            d: d.into(),
        }
    }

    pub fn identity() -> Self {
        Self::raw(1, 0, 0, 1)
    }

    pub fn t() -> Self {
        Self::raw(1, 1, 0, 1)
    }

    pub fn s() -> Self {
        Self::raw(0, 1, -1, 0)
    }

    /// `T^n`
    pub fn t_pow(n: i64) -> Self {
        Self::raw(1, n, 0, 1)
    }

    /// `T^f·S = [[-f, 1], [-1, 0]]`, the factor contributed by one chain component
    /// of framing `f`.
    pub fn twist(f: i64) -> Self {
        Self::raw(-f, 1, -1, 0)
    }

    pub fn entries(&self) -> [&BigInt; 4] {
        [&self.a, &self.b, &self.c, &self.d]
    }

    pub fn trace(&self) -> BigInt {
        &self.a + &self.d
    }

    pub fn inverse(&self) -> Self {
        Sl2 {
            a: self.d.clone(),
            b: -&self.b,
            c: -&self.c,
            d: self.a.clone(),
        }
    }

    /// `c · self · c⁻¹`
    pub fn conjugate_by(&self, c: &Sl2) -> Self {
        &(c * self) * &c.inverse()
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Sl2::identity();
        let mut base = self.clone();
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            n >>= 1;
        }
        acc
    }

    pub fn scaled(&self, sign: Sign) -> Self {
        match sign {
            Sign::Plus => self.clone(),
            Sign::Minus => -self.clone(),
        }
    }

    pub fn to_matrix(&self) -> IntMatrix {
        IntMatrix::new(
            2,
            2,
            vec![self.a.clone(), self.b.clone(), self.c.clone(), self.d.clone()],
        )
        .expect("2x2")
    }

    /// For parabolic elements, the `(±, n)` with `self` conjugate to `±T^n` in SL(2,Z).
    pub fn parabolic_power(&self) -> Option<(Sign, BigInt)> {
        let tr = self.trace();
        let sign = if tr == BigInt::from(2) {
            Sign::Plus
        } else if tr == BigInt::from(-2) {
            Sign::Minus
        } else {
            return None;
        };
        let u = self.scaled(sign);
        // u - I = n·[[-pr, p²], [-r², pr]] for some primitive (p, r)
        let x = &u.a - BigInt::one();
        let g = x.gcd(&u.b).gcd(&u.c);
        let n = if !u.b.is_zero() {
            if u.b.is_positive() {
                g
            } else {
                -g
            }
        } else if u.c.is_negative() {
            g
        } else {
            -g
        };
        Some((sign, n))
    }
}

impl Mul for &Sl2 {
    type Output = Sl2;

    fn mul(self, r: &Sl2) -> Sl2 {
        Sl2 {
            a: &self.a * &r.a + &self.b * &r.c,
            b: &self.a * &r.b + &self.b * &r.d,
            c: &self.c * &r.a + &self.d * &r.c,
            d: &self.c * &r.b + &self.d * &r.d,
        }
    }
}

impl Neg for Sl2 {
    type Output = Sl2;

    fn neg(self) -> Sl2 {
        Sl2 {
            a: -self.a,
            b: -self.b,
            c: -self.c,
            d: -self.d,
        }
    }
}

impl fmt::Display for Sl2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{};{},{}", self.a, self.b, self.c, self.d)
    }
}

/// `sign · T^{-a₁}S···T^{-aₙ}S`; the empty word is `sign · I`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MonodromyWord {
    pub coeffs: Vec<i64>,
    pub sign: Sign,
}

impl MonodromyWord {
    pub fn new(coeffs: Vec<i64>, sign: Sign) -> Self {
        MonodromyWord { coeffs, sign }
    }

    pub fn positive(coeffs: &[i64]) -> Self {
        Self::new(coeffs.to_vec(), Sign::Plus)
    }

    pub fn matrix(&self) -> Sl2 {
        word_to_matrix(self)
    }
}

impl fmt::Display for MonodromyWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let body = crate::linalg::join_display(&self.coeffs);
        match self.sign {
            Sign::Plus => write!(f, "{body}"),
            Sign::Minus => write!(f, "-:{body}"),
        }
    }
}

/// Parses `3,2,2`, `+:3,2,2` or `-:2,2`. A bare `-` or `-:` is `-I`.
impl FromStr for MonodromyWord {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (sign, body) = if let Some(rest) = s.strip_prefix("-:") {
            (Sign::Minus, rest)
        } else if let Some(rest) = s.strip_prefix("+:") {
            (Sign::Plus, rest)
        } else if s == "-" {
            (Sign::Minus, "")
        } else {
            (Sign::Plus, s.strip_prefix(':').unwrap_or(s))
        };
        let coeffs = parse_int_list(body)?;
        Ok(MonodromyWord::new(coeffs, sign))
    }
}

pub(crate) fn parse_int_list(body: &str) -> Result<Vec<i64>> {
    let body = body.trim();
    if body.is_empty() {
        return Ok(Vec::new());
    }
    body.split(',')
        .map(|t| {
            let t = t.trim();
            t.parse::<i64>()
                .map_err(|_| Error::parse(1, format!("bad integer `{t}`")))
        })
        .collect()
}

pub fn word_to_matrix(w: &MonodromyWord) -> Sl2 {
    w.coeffs
        .iter()
        .fold(Sl2::identity(), |acc, &a| &acc * &Sl2::twist(-a))
        .scaled(w.sign)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TraceKind {
    Elliptic,
    Parabolic,
    Hyperbolic,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TraceSign {
    Positive,
    Negative,
    Zero,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Classification {
    pub kind: TraceKind,
    pub sign: TraceSign,
}

impl fmt::Display for TraceKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TraceKind::Elliptic => "elliptic",
            TraceKind::Parabolic => "parabolic",
            TraceKind::Hyperbolic => "hyperbolic",
        })
    }
}

impl fmt::Display for TraceSign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TraceSign::Positive => "positive",
            TraceSign::Negative => "negative",
            TraceSign::Zero => "zero-trace",
        })
    }
}

pub fn classify(m: &Sl2) -> Classification {
    let tr = m.trace();
    let two = BigInt::from(2);
    let kind = match tr.abs().cmp(&two) {
        std::cmp::Ordering::Less => TraceKind::Elliptic,
        std::cmp::Ordering::Equal => TraceKind::Parabolic,
        std::cmp::Ordering::Greater => TraceKind::Hyperbolic,
    };
    let sign = if tr.is_positive() {
        TraceSign::Positive
    } else if tr.is_negative() {
        TraceSign::Negative
    } else {
        TraceSign::Zero
    };
    Classification { kind, sign }
}

/// Order of the torsion of `H₁` of the torus bundle with monodromy `m`: `|tr(m) − 2|`.
pub fn torsion_order(m: &Sl2) -> Result<BigInt> {
    let shifted = m.trace() - BigInt::from(2);
    if shifted.is_zero() {
        return Err(Error::DegenerateTorsion);
    }
    Ok(shifted.abs())
}

/// `tr(m)² − 4`, the torsion order for the bundle with monodromy `m²`, and whether
/// it is a perfect square.
pub fn square_trace_check(m: &Sl2) -> Result<(BigInt, bool)> {
    let tr = m.trace();
    if tr.abs() <= BigInt::from(2) {
        return Err(Error::NotHyperbolic(tr.abs().to_string()));
    }
    let value = &tr * &tr - 4;
    let sq = is_perfect_square(&value);
    Ok((value, sq))
}

/// True iff `b` is a cyclic rotation of `a`.
pub fn rotation_equivalent(a: &IntString, b: &IntString) -> bool {
    let (a, b) = (a.entries(), b.entries());
    if a.len() != b.len() {
        return false;
    }
    if a.is_empty() {
        return true;
    }
    (0..a.len()).any(|r| a[r..].iter().chain(&a[..r]).eq(b.iter()))
}
