//! Exact integer linear algebra.
//!
//! Everything here works over [`BigInt`]; no operation can overflow. Determinants
//! use fraction-free (Bareiss) elimination, cokernels come from a Smith normal form
//! that carries its unimodular transforms, and signatures are computed by exact
//! symmetric reduction over the rationals.

use std::fmt;
use std::ops::Mul;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Dense integer matrix, row-major.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<BigInt>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch {
                expected: rows * cols,
                got: data.len(),
            });
        }
        Ok(IntMatrix { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            data: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = BigInt::one();
        }
        m
    }

    /// Builds a matrix from rows of machine integers.
    ///
    /// Panics if the rows are ragged.
    pub fn from_rows<R: AsRef<[i64]>>(rows: &[R]) -> Self {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            let r = r.as_ref();
            assert_eq!(r.len(), cols, "ragged rows");
            data.extend(r.iter().map(|&x| BigInt::from(x)));
        }
        IntMatrix {
            rows: rows.len(),
            cols,
            data,
        }
    }

    pub fn diagonal(entries: &[i64]) -> Self {
        let n = entries.len();
        let mut m = Self::zeros(n, n);
        for (i, &e) in entries.iter().enumerate() {
            m.data[i * n + i] = BigInt::from(e);
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: BigInt) {
        self.data[i * self.cols + j] = value;
    }

    pub fn entries(&self) -> &[BigInt] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.data[j * self.rows + i] = self.get(i, j).clone();
            }
        }
        t
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }

    pub fn is_diagonal(&self) -> bool {
        (0..self.rows).all(|i| (0..self.cols).all(|j| i == j || self.get(i, j).is_zero()))
    }

    /// Principal submatrix keeping the listed indices, in the given order.
    pub fn principal_submatrix(&self, keep: &[usize]) -> Self {
        let n = keep.len();
        let mut m = Self::zeros(n, n);
        for (a, &i) in keep.iter().enumerate() {
            for (b, &j) in keep.iter().enumerate() {
                m.data[a * n + b] = self.get(i, j).clone();
            }
        }
        m
    }

    /// Borders a square matrix with a new last row and column `kappa` and the
    /// given corner entry.
    pub fn bordered(&self, kappa: &[BigInt], corner: BigInt) -> Result<Self> {
        if !self.is_square() {
            return Err(Error::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        if kappa.len() != self.rows {
            return Err(Error::DimensionMismatch {
                expected: self.rows,
                got: kappa.len(),
            });
        }
        let n = self.rows + 1;
        let mut m = Self::zeros(n, n);
        for (i, k) in kappa.iter().enumerate() {
            for j in 0..self.cols {
                m.data[i * n + j] = self.get(i, j).clone();
            }
            m.data[i * n + self.rows] = k.clone();
            m.data[self.rows * n + i] = k.clone();
        }
        m.data[n * n - 1] = corner;
        Ok(m)
    }

    /// Appends `v` as an extra column.
    pub fn augmented(&self, v: &[BigInt]) -> Result<Self> {
        if v.len() != self.rows {
            return Err(Error::DimensionMismatch {
                expected: self.rows,
                got: v.len(),
            });
        }
        let c = self.cols + 1;
        let mut m = Self::zeros(self.rows, c);
        for (i, x) in v.iter().enumerate() {
            for j in 0..self.cols {
                m.data[i * c + j] = self.get(i, j).clone();
            }
            m.data[i * c + self.cols] = x.clone();
        }
        Ok(m)
    }

    fn to_rows(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    fn from_vec_rows(rows: usize, cols: usize, v: Vec<Vec<BigInt>>) -> Self {
        IntMatrix {
            rows,
            cols,
            data: v.into_iter().flatten().collect(),
        }
    }

    pub fn det(&self) -> Result<BigInt> {
        det(self)
    }

    pub fn rank(&self) -> usize {
        rank(self)
    }
}

impl Mul for &IntMatrix {
    type Output = IntMatrix;

    fn mul(self, rhs: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, rhs.rows, "incompatible shapes");
        let mut out = IntMatrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    out.data[i * rhs.cols + j] += a * rhs.get(k, j);
                }
            }
        }
        out
    }
}

/// Renders in the matrix text format: a `rows cols` header, then one line per row.
impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{} {}", self.rows, self.cols)?;
        for i in 0..self.rows {
            let line: Vec<String> = self.row(i).iter().map(|x| x.to_string()).collect();
            writeln!(f, "{}", line.join(" "))?;
        }
        Ok(())
    }
}

impl FromStr for IntMatrix {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let mut tokens = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("");
            for tok in line.split_whitespace() {
                tokens.push((lineno + 1, tok));
            }
        }
        let mut it = tokens.into_iter();
        let mut header = |what: &str| -> Result<usize> {
            let (line, tok) = it
                .next()
                .ok_or_else(|| Error::parse(1, format!("missing {what}")))?;
            tok.parse::<usize>()
                .map_err(|_| Error::parse(line, format!("bad {what} `{tok}`")))
        };
        let rows = header("row count")?;
        let cols = header("column count")?;
        let mut data = Vec::with_capacity(rows * cols);
        for (line, tok) in it {
            let v = tok
                .parse::<BigInt>()
                .map_err(|_| Error::parse(line, format!("bad integer `{tok}`")))?;
            data.push(v);
        }
        if data.len() != rows * cols {
            return Err(Error::parse(
                0,
                format!("expected {} entries, found {}", rows * cols, data.len()),
            ));
        }
        IntMatrix::new(rows, cols, data)
    }
}

/// Exact determinant by fraction-free elimination.
pub fn det(m: &IntMatrix) -> Result<BigInt> {
    if !m.is_square() {
        return Err(Error::NotSquare {
            rows: m.rows,
            cols: m.cols,
        });
    }
    let n = m.rows;
    if n == 0 {
        return Ok(BigInt::one());
    }
    let mut a = m.to_rows();
    let mut negate = false;
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(i, k);
                    negate = !negate;
                }
                None => return Ok(BigInt::zero()),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
                a[i][j] = v;
            }
            a[i][k] = BigInt::zero();
        }
        prev = a[k][k].clone();
    }
    let d = a[n - 1][n - 1].clone();
    Ok(if negate { -d } else { d })
}

/// Rank over the rationals, by fraction-free row echelon reduction.
pub fn rank(m: &IntMatrix) -> usize {
    let mut a = m.to_rows();
    let mut r = 0;
    let mut prev = BigInt::one();
    for c in 0..m.cols {
        if r == m.rows {
            break;
        }
        let Some(p) = (r..m.rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(p, r);
        for i in r + 1..m.rows {
            for j in c + 1..m.cols {
                let v = (&a[i][j] * &a[r][c] - &a[i][c] * &a[r][j]) / &prev;
                a[i][j] = v;
            }
            a[i][c] = BigInt::zero();
        }
        prev = a[r][c].clone();
        r += 1;
    }
    r
}

/// Smith normal form `D = U·A·V` with its unimodular certificates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SnfResult {
    pub d: IntMatrix,
    pub u: IntMatrix,
    pub v: IntMatrix,
}

impl SnfResult {
    /// The diagonal `d₁ | d₂ | …`, including trailing zeros up to `min(rows, cols)`.
    pub fn diagonal(&self) -> Vec<BigInt> {
        (0..self.d.rows.min(self.d.cols))
            .map(|i| self.d.get(i, i).clone())
            .collect()
    }

    pub fn rank(&self) -> usize {
        self.diagonal().iter().filter(|x| !x.is_zero()).count()
    }

    /// Checks `U·A·V = D`, the diagonal shape, and the divisor chain.
    pub fn verify(&self, a: &IntMatrix) -> bool {
        let uav = &(&self.u * a) * &self.v;
        if uav != self.d || !self.d.is_diagonal() {
            return false;
        }
        let diag = self.diagonal();
        if diag.iter().any(|x| x.is_negative()) {
            return false;
        }
        diag.windows(2).all(|w| {
            if w[0].is_zero() {
                w[1].is_zero()
            } else {
                w[1].is_multiple_of(&w[0])
            }
        })
    }
}

struct SnfWork {
    a: Vec<Vec<BigInt>>,
    u: Vec<Vec<BigInt>>,
    v: Vec<Vec<BigInt>>,
}

impl SnfWork {
    fn swap_rows(&mut self, i: usize, j: usize) {
        self.a.swap(i, j);
        self.u.swap(i, j);
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        for row in self.a.iter_mut().chain(self.v.iter_mut()) {
            row.swap(i, j);
        }
    }

    /// row[dst] += q · row[src]
    fn add_row(&mut self, dst: usize, src: usize, q: &BigInt) {
        for m in [&mut self.a, &mut self.u] {
            let (s, d) = if src < dst {
                let (lo, hi) = m.split_at_mut(dst);
                (&lo[src], &mut hi[0])
            } else {
                let (lo, hi) = m.split_at_mut(src);
                (&hi[0], &mut lo[dst])
            };
            for (x, y) in d.iter_mut().zip(s) {
                *x += q * y;
            }
        }
    }

    /// col[dst] += q · col[src]
    fn add_col(&mut self, dst: usize, src: usize, q: &BigInt) {
        for row in self.a.iter_mut().chain(self.v.iter_mut()) {
            let t = &row[src] * q;
            row[dst] += t;
        }
    }

    fn negate_row(&mut self, i: usize) {
        for x in self.a[i].iter_mut().chain(self.u[i].iter_mut()) {
            *x = -std::mem::take(x);
        }
    }
}

/// Smith normal form with smallest-absolute-value pivoting.
pub fn snf(m: &IntMatrix) -> SnfResult {
    let (r, c) = (m.rows, m.cols);
    let mut w = SnfWork {
        a: m.to_rows(),
        u: IntMatrix::identity(r).to_rows(),
        v: IntMatrix::identity(c).to_rows(),
    };
    for t in 0..r.min(c) {
        loop {
            let mut best: Option<(usize, usize)> = None;
            for i in t..r {
                for j in t..c {
                    let x = &w.a[i][j];
                    if x.is_zero() {
                        continue;
                    }
                    if best.is_none_or(|(bi, bj)| x.abs() < w.a[bi][bj].abs()) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = best else {
                return finish(w, r, c);
            };
            w.swap_rows(t, pi);
            w.swap_cols(t, pj);

            let mut dirty = false;
            for i in t + 1..r {
                if w.a[i][t].is_zero() {
                    continue;
                }
                let q = -(&w.a[i][t] / &w.a[t][t]);
                w.add_row(i, t, &q);
                dirty |= !w.a[i][t].is_zero();
            }
            for j in t + 1..c {
                if w.a[t][j].is_zero() {
                    continue;
                }
                let q = -(&w.a[t][j] / &w.a[t][t]);
                w.add_col(j, t, &q);
                dirty |= !w.a[t][j].is_zero();
            }
            if dirty {
                continue;
            }
            let p = w.a[t][t].clone();
            let offender = (t + 1..r).find(|&i| (t + 1..c).any(|j| !w.a[i][j].is_multiple_of(&p)));
            match offender {
                Some(i) => w.add_row(t, i, &BigInt::one()),
                None => break,
            }
        }
        if w.a[t][t].is_negative() {
            w.negate_row(t);
        }
    }
    finish(w, r, c)
}

fn finish(w: SnfWork, r: usize, c: usize) -> SnfResult {
    SnfResult {
        d: IntMatrix::from_vec_rows(r, c, w.a),
        u: IntMatrix::from_vec_rows(r, r, w.u),
        v: IntMatrix::from_vec_rows(c, c, w.v),
    }
}

/// A finitely generated abelian group `Z^free ⊕ Z/t₁ ⊕ … ⊕ Z/t_k` with `t₁ | … | t_k`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AbelianGroup {
    pub free_rank: usize,
    pub torsion: Vec<BigInt>,
}

impl AbelianGroup {
    pub fn trivial() -> Self {
        AbelianGroup {
            free_rank: 0,
            torsion: Vec::new(),
        }
    }

    /// Order of the torsion subgroup (1 when torsion-free).
    pub fn torsion_order(&self) -> BigInt {
        self.torsion.iter().product()
    }

    /// `Z ⊕ self`
    pub fn with_extra_free(mut self, extra: usize) -> Self {
        self.free_rank += extra;
        self
    }

    /// Direct sum, with torsion re-normalised into a divisor chain.
    pub fn direct_sum(&self, other: &AbelianGroup) -> AbelianGroup {
        let all: Vec<BigInt> = self.torsion.iter().chain(&other.torsion).cloned().collect();
        let mut diag = IntMatrix::zeros(all.len(), all.len());
        for (i, t) in all.into_iter().enumerate() {
            diag.set(i, i, t);
        }
        let mut g = abelian_group_of(&diag);
        g.free_rank = self.free_rank + other.free_rank;
        g
    }

    pub fn torsion_string(&self) -> String {
        join_display(&self.torsion)
    }
}

impl fmt::Display for AbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        if self.free_rank > 0 {
            parts.push(if self.free_rank == 1 {
                "Z".to_string()
            } else {
                format!("Z^{}", self.free_rank)
            });
        }
        parts.extend(self.torsion.iter().map(|t| format!("Z/{t}")));
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join("+"))
        }
    }
}

pub(crate) fn join_display<T: fmt::Display>(xs: &[T]) -> String {
    xs.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}

/// Cokernel of `m` acting on column vectors: `Z^rows / im(m)`.
pub fn abelian_group_of(m: &IntMatrix) -> AbelianGroup {
    let s = snf(m);
    let diag = s.diagonal();
    let rank = diag.iter().filter(|x| !x.is_zero()).count();
    AbelianGroup {
        free_rank: m.rows - rank,
        torsion: diag.into_iter().filter(|x| x > &BigInt::one()).collect(),
    }
}

/// Counts of positive, negative and zero directions of a symmetric form.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Inertia {
    pub positive: usize,
    pub negative: usize,
    pub zero: usize,
}

impl Inertia {
    pub fn signature(&self) -> i64 {
        self.positive as i64 - self.negative as i64
    }
}

/// Sylvester inertia by exact symmetric reduction over Q.
///
/// A nonzero diagonal pivot is split off as a rank-one summand. When the remaining
/// block has an all-zero diagonal, a hyperbolic pair `[[0,b],[b,0]]` is split off
/// instead; it contributes one positive and one negative direction.
pub fn inertia(m: &IntMatrix) -> Result<Inertia> {
    if !m.is_symmetric() {
        return Err(if m.is_square() {
            Error::NotSymmetric
        } else {
            Error::NotSquare {
                rows: m.rows,
                cols: m.cols,
            }
        });
    }
    let mut a: Vec<Vec<BigRational>> = (0..m.rows)
        .map(|i| m.row(i).iter().map(|x| BigRational::from(x.clone())).collect())
        .collect();
    let mut out = Inertia {
        positive: 0,
        negative: 0,
        zero: 0,
    };
    while !a.is_empty() {
        let n = a.len();
        if let Some(p) = (0..n).find(|&i| !a[i][i].is_zero()) {
            let piv = a[p][p].clone();
            if piv.is_positive() {
                out.positive += 1;
            } else {
                out.negative += 1;
            }
            let rest: Vec<usize> = (0..n).filter(|&i| i != p).collect();
            a = rest
                .iter()
                .map(|&k| {
                    rest.iter()
                        .map(|&l| &a[k][l] - &a[k][p] * &a[p][l] / &piv)
                        .collect()
                })
                .collect();
            continue;
        }
        let pair = (0..n).find_map(|i| (i + 1..n).find(|&j| !a[i][j].is_zero()).map(|j| (i, j)));
        match pair {
            Some((i, j)) => {
                out.positive += 1;
                out.negative += 1;
                let b = a[i][j].clone();
                let rest: Vec<usize> = (0..n).filter(|&k| k != i && k != j).collect();
                a = rest
                    .iter()
                    .map(|&k| {
                        rest.iter()
                            .map(|&l| &a[k][l] - (&a[k][i] * &a[j][l] + &a[k][j] * &a[i][l]) / &b)
                            .collect()
                    })
                    .collect();
            }
            None => {
                out.zero += n;
                break;
            }
        }
    }
    Ok(out)
}

pub fn signature(m: &IntMatrix) -> Result<i64> {
    inertia(m).map(|i| i.signature())
}

pub fn is_perfect_square(n: &BigInt) -> bool {
    if n.is_negative() {
        return false;
    }
    let s = n.sqrt();
    &s * &s == *n
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e8() -> IntMatrix {
        // Even unimodular E8 form (positive definite): Cartan matrix of E8.
        let mut m = IntMatrix::diagonal(&[2; 8]);
        let edges = [(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 6), (2, 7)];
        for (i, j) in edges {
            m.set(i, j, BigInt::from(-1));
            m.set(j, i, BigInt::from(-1));
        }
        m
    }

    fn cofactor_det(m: &[Vec<i64>]) -> i64 {
        let n = m.len();
        if n == 0 {
            return 1;
        }
        (0..n)
            .map(|j| {
                let minor: Vec<Vec<i64>> = m[1..]
                    .iter()
                    .map(|r| r.iter().enumerate().filter(|&(c, _)| c != j).map(|(_, &x)| x).collect())
                    .collect();
                let s = if j % 2 == 0 { 1 } else { -1 };
                s * m[0][j] * cofactor_det(&minor)
            })
            .sum()
    }

    #[test]
    fn det_examples() {
        assert_eq!(det(&IntMatrix::identity(3)).unwrap(), BigInt::from(1));
        let q = IntMatrix::from_rows(&[[-2, 1, -1], [1, -2, 1], [-1, 1, -2]]);
        assert_eq!(det(&q).unwrap(), BigInt::from(-4));
        assert_eq!(det(&IntMatrix::from_rows(&[[-2, 2], [2, -3]])).unwrap(), BigInt::from(2));
        assert_eq!(det(&IntMatrix::zeros(0, 0)).unwrap(), BigInt::from(1));
    }

    #[test]
    fn det_needs_row_swap() {
        let m = IntMatrix::from_rows(&[[0, 1], [1, 0]]);
        assert_eq!(det(&m).unwrap(), BigInt::from(-1));
        let m = IntMatrix::from_rows(&[[0, 0, 1], [0, 1, 0], [1, 0, 0]]);
        assert_eq!(det(&m).unwrap(), BigInt::from(-1));
    }

    #[test]
    fn det_rejects_rectangular() {
        let m = IntMatrix::zeros(2, 3);
        assert_eq!(det(&m), Err(Error::NotSquare { rows: 2, cols: 3 }));
    }

    #[test]
    fn det_matches_cofactor_on_small_grid() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..400 {
            let n = rng.gen_range(1..=5);
            let rows: Vec<Vec<i64>> = (0..n)
                .map(|_| (0..n).map(|_| rng.gen_range(-5..=5)).collect())
                .collect();
            let m = IntMatrix::from_rows(&rows);
            assert_eq!(det(&m).unwrap(), BigInt::from(cofactor_det(&rows)), "{rows:?}");
        }
    }

    #[test]
    fn snf_examples() {
        let s = snf(&IntMatrix::from_rows(&[[0]]));
        assert_eq!(s.d, IntMatrix::from_rows(&[[0]]));
        let a = IntMatrix::diagonal(&[2, 4]);
        assert_eq!(snf(&a).d, a);
        let a = IntMatrix::from_rows(&[[2, 1], [1, 2]]);
        let s = snf(&a);
        assert_eq!(s.d, IntMatrix::diagonal(&[1, 3]));
        assert!(s.verify(&a));
    }

    #[test]
    fn snf_normalises_sign_and_divisibility() {
        let a = IntMatrix::diagonal(&[-6, 4]);
        let s = snf(&a);
        assert_eq!(s.d, IntMatrix::diagonal(&[2, 12]));
        assert!(s.verify(&a));
        assert_eq!(det(&s.u).unwrap().abs(), BigInt::from(1));
        assert_eq!(det(&s.v).unwrap().abs(), BigInt::from(1));
    }

    #[test]
    fn snf_rectangular() {
        let a = IntMatrix::from_rows(&[[2, 4, 4], [-6, 6, 12], [10, -4, -16]]);
        let s = snf(&a);
        assert!(s.verify(&a));
        assert_eq!(s.diagonal(), vec![BigInt::from(2), BigInt::from(6), BigInt::from(12)]);
        let b = IntMatrix::from_rows(&[[1, 2, 3], [2, 4, 6]]);
        let s = snf(&b);
        assert!(s.verify(&b));
        assert_eq!(s.rank(), 1);
    }

    #[test]
    fn abelian_group_examples() {
        let g = abelian_group_of(&IntMatrix::from_rows(&[[0]]));
        assert_eq!((g.free_rank, g.torsion.len()), (1, 0));
        let g = abelian_group_of(&IntMatrix::from_rows(&[[-1, 1], [1, -1]]));
        assert_eq!((g.free_rank, g.torsion.len()), (1, 0));
        let g = abelian_group_of(&IntMatrix::from_rows(&[[-2, 1, -1], [1, -2, 1], [-1, 1, -2]]));
        assert_eq!(g.free_rank, 0);
        assert_eq!(g.torsion, vec![BigInt::from(4)]);
        assert_eq!(g.to_string(), "Z/4");
        assert_eq!(abelian_group_of(&IntMatrix::zeros(0, 0)), AbelianGroup::trivial());
    }

    #[test]
    fn direct_sum_renormalises() {
        let a = AbelianGroup { free_rank: 1, torsion: vec![BigInt::from(2)] };
        let b = AbelianGroup { free_rank: 0, torsion: vec![BigInt::from(3)] };
        let s = a.direct_sum(&b);
        assert_eq!(s.free_rank, 1);
        assert_eq!(s.torsion, vec![BigInt::from(6)]);
    }

    #[test]
    fn signature_examples() {
        assert_eq!(signature(&IntMatrix::identity(3)).unwrap(), 3);
        assert_eq!(signature(&IntMatrix::from_rows(&[[0, 1], [1, 0]])).unwrap(), 0);
        assert_eq!(signature(&e8()).unwrap(), 8);
        assert_eq!(det(&e8()).unwrap(), BigInt::from(1));
        let neg = IntMatrix::from_rows(&[[-2, 1, -1], [1, -2, 1], [-1, 1, -2]]);
        assert_eq!(signature(&neg).unwrap(), -3);
    }

    #[test]
    fn signature_zero_diagonal_blocks() {
        let m = IntMatrix::from_rows(&[[0, 2, 1, 0], [2, 0, 0, 3], [1, 0, 0, 1], [0, 3, 1, 0]]);
        let i = inertia(&m).unwrap();
        assert_eq!(i.positive + i.negative + i.zero, 4);
        assert_eq!(i.zero, 4 - rank(&m));
        let z = IntMatrix::zeros(3, 3);
        assert_eq!(inertia(&z).unwrap(), Inertia { positive: 0, negative: 0, zero: 3 });
    }

    #[test]
    fn signature_rejects_asymmetric() {
        let m = IntMatrix::from_rows(&[[1, 2], [3, 4]]);
        assert_eq!(signature(&m), Err(Error::NotSymmetric));
    }

    #[test]
    fn perfect_squares() {
        assert!(is_perfect_square(&BigInt::from(4)));
        assert!(is_perfect_square(&BigInt::from(0)));
        assert!(!is_perfect_square(&BigInt::from(320)));
        assert!(!is_perfect_square(&BigInt::from(-4)));
        let big = BigInt::from(10).pow(50) + 1;
        assert!(is_perfect_square(&(&big * &big)));
        assert!(!is_perfect_square(&(&big * &big + 1)));
    }

    #[test]
    fn text_format_round_trip() {
        let m: IntMatrix = "2 3\n1 -2 3\n# comment\n4 5 -6\n".parse().unwrap();
        assert_eq!(m, IntMatrix::from_rows(&[[1, -2, 3], [4, 5, -6]]));
        assert_eq!(m.to_string().parse::<IntMatrix>().unwrap(), m);
        assert!("2 2\n1 2 3".parse::<IntMatrix>().is_err());
        assert!("x 2".parse::<IntMatrix>().is_err());
    }

    #[test]
    fn bordered_matrix() {
        let l = IntMatrix::from_rows(&[[0]]);
        let b = l.bordered(&[BigInt::from(2)], BigInt::from(1)).unwrap();
        assert_eq!(b, IntMatrix::from_rows(&[[0, 2], [2, 1]]));
        assert!(l.bordered(&[], BigInt::from(1)).is_err());
    }
}
