//! Integer strings: negative continued fractions, Riemenschneider duality, and the
//! hyperbolic family
//! `(3+x₁, 2^[x₂], …, 3+x_{2k+1}, 2^[x₁], 3+x₂, 2^[x₃], …, 3+x_{2k}, 2^[x_{2k+1}])`.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::linalg::join_display;
use crate::sl2::parse_int_list;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct IntString {
    entries: Vec<i64>,
}

impl IntString {
    pub fn new(entries: Vec<i64>) -> Self {
        IntString { entries }
    }

    pub fn entries(&self) -> &[i64] {
        &self.entries
    }

    pub fn into_entries(self) -> Vec<i64> {
        self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Left rotation: the string starting at position `r`.
    pub fn rotated(&self, r: usize) -> IntString {
        if self.entries.is_empty() {
            return self.clone();
        }
        let r = r % self.entries.len();
        let mut v = self.entries[r..].to_vec();
        v.extend_from_slice(&self.entries[..r]);
        IntString::new(v)
    }

    fn check_dual_domain(&self) -> Result<()> {
        if self.entries.is_empty() {
            return Err(Error::EmptyString);
        }
        match self.entries.iter().find(|&&b| b < 2) {
            Some(&b) => Err(Error::EntryBelowTwo(b)),
            None => Ok(()),
        }
    }
}

impl From<Vec<i64>> for IntString {
    fn from(v: Vec<i64>) -> Self {
        IntString::new(v)
    }
}

impl From<&[i64]> for IntString {
    fn from(v: &[i64]) -> Self {
        IntString::new(v.to_vec())
    }
}

impl fmt::Display for IntString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&join_display(&self.entries))
    }
}

impl FromStr for IntString {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_int_list(s).map(IntString::new)
    }
}

/// `b₁ − 1/(b₂ − 1/(… − 1/b_k))` as a reduced fraction `p/q`, `p > q ≥ 1`.
pub fn cf_value(b: &IntString) -> Result<BigRational> {
    b.check_dual_domain()?;
    let mut it = b.entries.iter().rev();
    let last = BigRational::from(BigInt::from(*it.next().expect("nonempty")));
    Ok(it.fold(last, |acc, &bi| {
        BigRational::from(BigInt::from(bi)) - acc.recip()
    }))
}

/// Riemenschneider dual, read off the point diagram: row `i` holds `bᵢ − 1` points
/// and starts in the column where row `i−1` ends; column `j` with `n` points gives
/// `cⱼ = n + 1`.
///
/// The result is checked against the continued fraction identity
/// `cf(b) = p/q ⇒ cf(dual b) = p/(p−q)`.
pub fn dual_string(b: &IntString) -> Result<IntString> {
    b.check_dual_domain()?;
    let width: i64 = b.entries.iter().map(|&x| x - 2).sum::<i64>() + 1;
    let mut columns = vec![1i64; width as usize];
    let mut start = 0usize;
    for &bi in &b.entries {
        let points = (bi - 1) as usize;
        for col in &mut columns[start..start + points] {
            *col += 1;
        }
        start += points - 1;
    }
    let dual = IntString::new(columns);

    let p_q = cf_value(b)?;
    let expected = BigRational::new(p_q.numer().clone(), p_q.numer() - p_q.denom());
    if cf_value(&dual)? != expected {
        return Err(Error::CertificateFailed(format!(
            "dual of ({b}) = ({dual}) fails the continued fraction check"
        )));
    }
    Ok(dual)
}

/// Parameters `(k; x₁, …, x_{2k+1})` of the hyperbolic family.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FamilyParams {
    k: usize,
    xs: Vec<u64>,
}

impl FamilyParams {
    pub fn new(k: usize, xs: Vec<u64>) -> Result<Self> {
        if xs.len() != 2 * k + 1 {
            return Err(Error::MalformedParams(format!(
                "k={k} needs {} x values, got {}",
                2 * k + 1,
                xs.len()
            )));
        }
        Ok(FamilyParams { k, xs })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn xs(&self) -> &[u64] {
        &self.xs
    }

    /// `x_i`, 1-based as in the family formula.
    fn x(&self, i: usize) -> i64 {
        self.xs[i - 1] as i64
    }

    /// The two halves of the family string. The first half holds the odd-indexed
    /// `3+x` entries, the second the even-indexed ones.
    pub fn blocks(&self) -> (Vec<i64>, Vec<i64>) {
        let k = self.k;
        let mut first = Vec::new();
        for j in 0..k {
            first.push(3 + self.x(2 * j + 1));
            first.extend(std::iter::repeat_n(2, self.x(2 * j + 2) as usize));
        }
        first.push(3 + self.x(2 * k + 1));

        let mut second = Vec::new();
        for j in 0..k {
            second.extend(std::iter::repeat_n(2, self.x(2 * j + 1) as usize));
            second.push(3 + self.x(2 * j + 2));
        }
        second.extend(std::iter::repeat_n(2, self.x(2 * k + 1) as usize));
        (first, second)
    }

    /// The string `(3)`, which the relabelling does not cover.
    pub fn is_special(&self) -> bool {
        self.k == 0 && self.xs[0] == 0
    }
}

impl fmt::Display for FamilyParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "k={};x={}", self.k, join_display(&self.xs))
    }
}

/// Parses `k=1;x=0,0,0`.
impl FromStr for FamilyParams {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::MalformedParams(s.to_string());
        let (kpart, xpart) = s.split_once(';').ok_or_else(bad)?;
        let k = kpart
            .trim()
            .strip_prefix("k=")
            .and_then(|v| v.trim().parse::<usize>().ok())
            .ok_or_else(bad)?;
        let xs = xpart.trim().strip_prefix("x=").ok_or_else(bad)?;
        let xs = xs
            .split(',')
            .map(|t| t.trim().parse::<u64>().map_err(|_| bad()))
            .collect::<Result<Vec<_>>>()?;
        FamilyParams::new(k, xs)
    }
}

pub fn family_string(p: &FamilyParams) -> IntString {
    let (mut first, second) = p.blocks();
    first.extend(second);
    IntString::new(first)
}

/// Finds family parameters whose string is a rotation of `a`, together with the
/// rotation offset `r` such that `a.rotated(r) == family_string(p)`.
///
/// The number of entries `≥ 3` fixes `k`; each candidate start position pins the
/// `x` values. Different parameters can give rotations of the same string, e.g.
/// `x = (1,0,0)` and `x = (0,1,0)`; the match at the smallest offset wins, so
/// `family_string(p)` is always recognized as `p`.
pub fn recognize_family_at(a: &IntString) -> Option<(FamilyParams, usize)> {
    let e = a.entries();
    if e.is_empty() || e.iter().any(|&x| x < 2) {
        return None;
    }
    let bigs = e.iter().filter(|&&x| x >= 3).count();
    if bigs % 2 == 0 {
        return None;
    }
    let k = (bigs - 1) / 2;
    (0..e.len()).filter(|&r| e[r] >= 3).find_map(|r| {
        let rot = a.rotated(r);
        let big_values: Vec<u64> = rot
            .entries()
            .iter()
            .filter(|&&x| x >= 3)
            .map(|&x| (x - 3) as u64)
            .collect();
        // bigs in order: x₁, x₃, …, x_{2k+1}, x₂, x₄, …, x_{2k}
        let mut xs = vec![0u64; 2 * k + 1];
        for (j, v) in big_values.iter().take(k + 1).enumerate() {
            xs[2 * j] = *v;
        }
        for (j, v) in big_values.iter().skip(k + 1).enumerate() {
            xs[2 * j + 1] = *v;
        }
        let params = FamilyParams::new(k, xs).expect("length matches");
        (family_string(&params) == rot).then_some((params, r))
    })
}

pub fn recognize_family(a: &IntString) -> Option<FamilyParams> {
    recognize_family_at(a).map(|(p, _)| p)
}

/// Splits a family string into the relabelled block `d` and its dual `e`.
///
/// The first half `(3+x₁, …, 3+x_{2k+1})` becomes `d` by lowering its first and
/// last entries by one (a single entry is lowered by two); the second half is `e`.
pub fn split_relabel(a: &IntString) -> Result<(IntString, IntString)> {
    let params = recognize_family(a).ok_or(Error::NotInFamily)?;
    if params.is_special() {
        return Err(Error::SpecialCase);
    }
    let (mut d, e) = params.blocks();
    let last = d.len() - 1;
    d[0] -= 1;
    d[last] -= 1;
    let (d, e) = (IntString::new(d), IntString::new(e));
    if dual_string(&d)? != e {
        return Err(Error::CertificateFailed(format!("({d}) and ({e}) are not dual")));
    }
    Ok((d, e))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_integer::Integer;
    use num_traits::{Signed, Zero};

    fn s(v: &[i64]) -> IntString {
        IntString::new(v.to_vec())
    }

    fn frac(p: i64, q: i64) -> BigRational {
        BigRational::new(p.into(), q.into())
    }

    /// Independent route: expand p/r as a negative continued fraction with
    /// ceiling steps, `c = ⌈x⌉`, `x ← 1/(c − x)`.
    fn expand_negative_cf(p: &BigInt, r: &BigInt) -> Vec<i64> {
        let (mut num, mut den) = (p.clone(), r.clone());
        let mut out = Vec::new();
        while !den.is_zero() {
            let c = num.div_ceil(&den);
            out.push(i64::try_from(&c).unwrap());
            let rem = &c * &den - &num;
            num = den;
            den = rem;
        }
        out
    }

    #[test]
    fn cf_examples() {
        assert_eq!(cf_value(&s(&[3])).unwrap(), frac(3, 1));
        assert_eq!(cf_value(&s(&[2, 2])).unwrap(), frac(3, 2));
        assert_eq!(cf_value(&s(&[3, 2])).unwrap(), frac(5, 2));
        assert_eq!(cf_value(&s(&[])), Err(Error::EmptyString));
        assert_eq!(cf_value(&s(&[3, 1])), Err(Error::EntryBelowTwo(1)));
    }

    #[test]
    fn dual_examples() {
        assert_eq!(dual_string(&s(&[2, 2, 2])).unwrap(), s(&[4]));
        assert_eq!(dual_string(&s(&[3])).unwrap(), s(&[2, 2]));
        assert_eq!(dual_string(&s(&[2, 3, 2])).unwrap(), s(&[3, 3]));
        assert_eq!(dual_string(&s(&[2])).unwrap(), s(&[2]));
        assert_eq!(dual_string(&s(&[])), Err(Error::EmptyString));
        assert_eq!(dual_string(&s(&[2, 0])), Err(Error::EntryBelowTwo(0)));
    }

    #[test]
    fn dual_matches_independent_expansion() {
        crate::sweep::enumerate_strings(6, 2, 6, |b| {
            let b = IntString::from(b);
            let pq = cf_value(&b).unwrap();
            let (p, q) = (pq.numer().clone(), pq.denom().clone());
            assert!(p > q && q.is_positive());
            let oracle = expand_negative_cf(&p, &(&p - &q));
            assert_eq!(dual_string(&b).unwrap().entries(), &oracle[..], "{b}");
        });
    }

    #[test]
    fn dual_properties_exhaustive() {
        crate::sweep::enumerate_strings(6, 2, 6, |b| {
            let b = IntString::from(b);
            let d = dual_string(&b).unwrap();
            assert_eq!(dual_string(&d).unwrap(), b);
            let sum: i64 = b.entries().iter().sum();
            assert_eq!(d.len() as i64, sum - 2 * b.len() as i64 + 1);
        });
    }

    #[test]
    fn family_examples() {
        let p = FamilyParams::new(0, vec![0]).unwrap();
        assert_eq!(family_string(&p), s(&[3]));
        let p = FamilyParams::new(0, vec![1]).unwrap();
        assert_eq!(family_string(&p), s(&[4, 2]));
        let p = FamilyParams::new(1, vec![0, 0, 0]).unwrap();
        assert_eq!(family_string(&p), s(&[3, 3, 3]));
        let p = FamilyParams::new(1, vec![1, 0, 0]).unwrap();
        assert_eq!(family_string(&p), s(&[4, 3, 2, 3]));
        let p = FamilyParams::new(0, vec![2]).unwrap();
        assert_eq!(family_string(&p), s(&[5, 2, 2]));
        assert!(FamilyParams::new(1, vec![0]).is_err());
    }

    #[test]
    fn params_text() {
        let p: FamilyParams = "k=1;x=0,0,0".parse().unwrap();
        assert_eq!(p, FamilyParams::new(1, vec![0, 0, 0]).unwrap());
        assert_eq!(p.to_string(), "k=1;x=0,0,0");
        assert!("k=1;x=0".parse::<FamilyParams>().is_err());
        assert!("k=a;x=0".parse::<FamilyParams>().is_err());
    }

    #[test]
    fn recognize_examples() {
        assert_eq!(recognize_family(&s(&[3, 3, 3])), Some(FamilyParams::new(1, vec![0, 0, 0]).unwrap()));
        assert_eq!(recognize_family(&s(&[2, 4])), Some(FamilyParams::new(0, vec![1]).unwrap()));
        assert_eq!(recognize_family(&s(&[2, 2, 2])), None);
        assert_eq!(recognize_family(&s(&[2, 2, 3])), None);
        assert_eq!(recognize_family(&s(&[3, 4])), None);
        assert_eq!(recognize_family(&s(&[])), None);
    }

    #[test]
    fn recognize_reports_offset() {
        let (p, r) = recognize_family_at(&s(&[2, 4])).unwrap();
        assert_eq!(r, 1);
        assert_eq!(s(&[2, 4]).rotated(r), family_string(&p));
    }

    #[test]
    fn split_examples() {
        assert_eq!(split_relabel(&s(&[4, 2])).unwrap(), (s(&[2]), s(&[2])));
        assert_eq!(split_relabel(&s(&[3, 3, 3])).unwrap(), (s(&[2, 2]), s(&[3])));
        assert_eq!(split_relabel(&s(&[3])), Err(Error::SpecialCase));
        assert_eq!(split_relabel(&s(&[2, 2, 3])), Err(Error::NotInFamily));
        assert_eq!(split_relabel(&s(&[4, 3, 2, 3])).unwrap(), (s(&[3, 2]), s(&[2, 3])));
    }

    #[test]
    fn family_round_trip_and_shape() {
        for p in crate::sweep::family_params(2, 3) {
            let a = family_string(&p);
            assert_eq!(recognize_family(&a).as_ref(), Some(&p));
            assert!(a.entries().iter().all(|&x| x >= 2));
            assert!(a.entries().iter().any(|&x| x >= 3));
            for r in 0..a.len() {
                let rp = recognize_family(&a.rotated(r)).unwrap();
                assert_eq!(family_string(&rp).len(), a.len());
            }
        }
    }
}
