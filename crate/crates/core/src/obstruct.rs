//! Homology-level obstructions and two-handle attachment on linking matrices.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed};

use crate::error::{Error, Result};
use crate::linalg::{abelian_group_of, det, is_perfect_square, rank, signature, AbelianGroup, IntMatrix};
use crate::sl2::parse_int_list;

/// Integer surgery on a framed link, recorded by its linking matrix. `H₁` of the
/// result is `coker L`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SurgeryPresentation {
    l: IntMatrix,
}

impl SurgeryPresentation {
    pub fn new(l: IntMatrix) -> Result<Self> {
        if !l.is_square() {
            return Err(Error::NotSquare {
                rows: l.rows(),
                cols: l.cols(),
            });
        }
        if !l.is_symmetric() {
            return Err(Error::NotSymmetric);
        }
        Ok(SurgeryPresentation { l })
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.l
    }

    pub fn homology(&self) -> AbelianGroup {
        abelian_group_of(&self.l)
    }
}

/// A knot in the surgered manifold: linking numbers with the surgery components
/// and a framing.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KnotClass {
    pub kappa: Vec<BigInt>,
    pub framing: BigInt,
}

impl KnotClass {
    pub fn new(kappa: &[i64], framing: i64) -> Self {
        KnotClass {
            kappa: kappa.iter().map(|&k| BigInt::from(k)).collect(),
            framing: framing.into(),
        }
    }
}

impl fmt::Display for KnotClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kappa: Vec<String> = self.kappa.iter().map(ToString::to_string).collect();
        write!(f, "kappa={} framing={}", kappa.join(","), self.framing)
    }
}

/// Parses `kappa=1,0,2 framing=-1`.
impl FromStr for KnotClass {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut kappa = None;
        let mut framing = None;
        for tok in s.split_whitespace() {
            if let Some(v) = tok.strip_prefix("kappa=") {
                kappa = Some(parse_int_list(v)?);
            } else if let Some(v) = tok.strip_prefix("framing=") {
                framing = Some(
                    v.parse::<i64>()
                        .map_err(|_| Error::parse(1, format!("bad framing `{v}`")))?,
                );
            } else {
                return Err(Error::parse(1, format!("unexpected `{tok}`")));
            }
        }
        match (kappa, framing) {
            (Some(k), Some(f)) => Ok(KnotClass::new(&k, f)),
            _ => Err(Error::parse(1, "expected kappa=.. framing=..")),
        }
    }
}

fn check_dims(p: &SurgeryPresentation, k: &KnotClass) -> Result<()> {
    if k.kappa.len() != p.l.rows() {
        return Err(Error::DimensionMismatch {
            expected: p.l.rows(),
            got: k.kappa.len(),
        });
    }
    Ok(())
}

/// `[K]` has infinite order in `coker L` iff `κ` is outside the rational column
/// span of `L`.
pub fn has_infinite_order(p: &SurgeryPresentation, k: &KnotClass) -> Result<bool> {
    check_dims(p, k)?;
    Ok(rank(&p.l.augmented(&k.kappa)?) > rank(&p.l))
}

/// Attaches a 2-handle along `K`: `L` bordered by `κ` with corner `framing`.
/// Returns the new presentation and its homology, whose free rank is one less.
pub fn attach_two_handle(p: &SurgeryPresentation, k: &KnotClass) -> Result<(SurgeryPresentation, AbelianGroup)> {
    if !has_infinite_order(p, k)? {
        return Err(Error::FiniteOrder);
    }
    let bordered = SurgeryPresentation::new(p.l.bordered(&k.kappa, k.framing.clone())?)?;
    let h = bordered.homology();
    let before = p.homology().free_rank;
    if h.free_rank + 1 != before {
        return Err(Error::CertificateFailed(format!(
            "free rank went from {before} to {}",
            h.free_rank
        )));
    }
    Ok((bordered, h))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SquareTest {
    /// The necessary condition holds; nothing is certified.
    Pass,
    Fail,
}

impl fmt::Display for SquareTest {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SquareTest::Pass => "pass",
            SquareTest::Fail => "fail",
        })
    }
}

/// A manifold bounding a rational homology ball or circle has torsion `H₁` of
/// square order.
pub fn square_order_obstruction(torsion_order: &BigInt) -> Result<SquareTest> {
    if !torsion_order.is_positive() {
        return Err(Error::NonPositive(torsion_order.to_string()));
    }
    Ok(if is_perfect_square(torsion_order) {
        SquareTest::Pass
    } else {
        SquareTest::Fail
    })
}

/// `σ/8 mod 2` of an even form with `|det| = 1`.
pub fn rohlin_mu(m: &IntMatrix) -> Result<u8> {
    if !m.is_square() {
        return Err(Error::NotSquare {
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    if !m.is_symmetric() {
        return Err(Error::NotSymmetric);
    }
    if let Some(odd) = (0..m.rows()).map(|i| m.get(i, i)).find(|x| x.is_odd()) {
        return Err(Error::OddDiagonal(odd.to_string()));
    }
    let d = det(m)?;
    if !d.abs().is_one() {
        return Err(Error::NotUnimodularForm(d.abs().to_string()));
    }
    let sigma = signature(m)?;
    Ok((sigma.rem_euclid(16) / 8) as u8)
}
