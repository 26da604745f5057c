//! Blow-ups and blow-downs on cyclic chains of framed unknots.
//!
//! A chain `(f₁,…,fₙ; ε)` is the surgery diagram of the torus bundle with monodromy
//! `ε·T^{f₁}S···T^{fₙ}S`. Every move is checked against the identity
//!
//! ```text
//! T^{a+e}S · T^{e}S · T^{b+e}S = −e · T^{a}S · T^{b}S        (e = ±1)
//! ```
//!
//! Moves away from the ends of the stored list leave the product unchanged. A move
//! across the seam between the last and first component is carried out on a
//! rotated list, which conjugates the product; the state accumulates those
//! conjugators in `frame`, so `frame · monodromy · frame⁻¹` is an exact invariant
//! of every move sequence.

use std::fmt;
use std::str::FromStr;

use rand::Rng;

use crate::error::{Error, Result};
use crate::linalg::join_display;
use crate::sl2::{parse_int_list, rotation_equivalent, Sign, Sl2};
use crate::strings::{recognize_family_at, split_relabel, IntString};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Move {
    /// Insert a component of framing `e` on the edge joining `edge` and `edge+1`
    /// (cyclically).
    Up { edge: usize, e: Sign },
    /// Remove the `±1`-framed component at `index`.
    Down { index: usize },
}

impl fmt::Display for Move {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Move::Up { edge, e } => write!(f, "up {edge} {}1", e.symbol()),
            Move::Down { index } => write!(f, "down {index}"),
        }
    }
}

impl FromStr for Move {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_move(s, 1)
    }
}

fn parse_move(s: &str, line: usize) -> Result<Move> {
    let toks: Vec<&str> = s.split_whitespace().collect();
    let index = |t: &str| {
        t.parse::<usize>()
            .map_err(|_| Error::parse(line, format!("bad index `{t}`")))
    };
    match toks.as_slice() {
        ["up", edge, e] => {
            let e = match *e {
                "+1" | "1" => Sign::Plus,
                "-1" => Sign::Minus,
                other => return Err(Error::parse(line, format!("framing `{other}` is not +1 or -1"))),
            };
            Ok(Move::Up { edge: index(edge)?, e })
        }
        ["down", i] => Ok(Move::Down { index: index(i)? }),
        _ => Err(Error::parse(line, format!("unrecognised move `{}`", s.trim()))),
    }
}

/// One move per line, `#` comments.
pub fn parse_script(text: &str) -> Result<Vec<Move>> {
    text.lines()
        .enumerate()
        .filter_map(|(i, raw)| {
            let content = raw.split('#').next().unwrap_or("").trim();
            (!content.is_empty()).then(|| parse_move(content, i + 1))
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChainState {
    framings: Vec<i64>,
    eps: Sign,
    frame: Sl2,
}

impl ChainState {
    pub fn new(framings: Vec<i64>, eps: Sign) -> Result<Self> {
        if framings.is_empty() {
            return Err(Error::ChainTooShort { len: 0, min: 1 });
        }
        Ok(ChainState {
            framings,
            eps,
            frame: Sl2::identity(),
        })
    }

    pub fn framings(&self) -> &[i64] {
        &self.framings
    }

    pub fn eps(&self) -> Sign {
        self.eps
    }

    /// Accumulated conjugator from seam moves; the identity if there were none.
    pub fn frame(&self) -> &Sl2 {
        &self.frame
    }

    pub fn len(&self) -> usize {
        self.framings.len()
    }

    pub fn is_empty(&self) -> bool {
        self.framings.is_empty()
    }

    /// `ε · T^{f₁}S···T^{fₙ}S`
    pub fn chain_monodromy(&self) -> Sl2 {
        product(&self.framings).scaled(self.eps)
    }

    /// `frame · chain_monodromy · frame⁻¹`, preserved exactly by every move.
    pub fn certified_monodromy(&self) -> Sl2 {
        self.chain_monodromy().conjugate_by(&self.frame)
    }

    /// Same framings up to cyclic rotation.
    pub fn same_up_to_rotation(&self, framings: &[i64]) -> bool {
        rotation_equivalent(&IntString::from(self.framings.as_slice()), &IntString::from(framings))
    }

    /// The list starting at position `k`.
    pub fn rotate_left(&self, k: usize) -> ChainState {
        let n = self.len();
        let k = k % n;
        let mut framings = self.framings[k..].to_vec();
        framings.extend_from_slice(&self.framings[..k]);
        ChainState {
            framings,
            eps: self.eps,
            frame: &self.frame * &product(&self.framings[..k]),
        }
    }

    /// The list ending just before position `n − k`.
    pub fn rotate_right(&self, k: usize) -> ChainState {
        let n = self.len();
        let k = k % n;
        let mut framings = self.framings[n - k..].to_vec();
        framings.extend_from_slice(&self.framings[..n - k]);
        ChainState {
            framings,
            eps: self.eps,
            frame: &self.frame * &product(&self.framings[n - k..]).inverse(),
        }
    }

    /// Removes the `±1`-framed component `i`. Both neighbours change by `−fᵢ`;
    /// `ε` flips for a `+1` component.
    pub fn blow_down(&self, i: usize) -> Result<ChainState> {
        let n = self.len();
        if i >= n {
            return Err(Error::BadIndex { index: i, len: n });
        }
        if n < 3 {
            return Err(Error::ChainTooShort { len: n, min: 3 });
        }
        let e = self.framings[i];
        if e.abs() != 1 {
            return Err(Error::BadFraming(e));
        }
        Ok(if i == 0 {
            self.rotate_right(1).blow_down_inner(1).rotate_left(1)
        } else if i == n - 1 {
            self.rotate_left(1).blow_down_inner(n - 2).rotate_right(1)
        } else {
            self.blow_down_inner(i)
        })
    }

    fn blow_down_inner(&self, i: usize) -> ChainState {
        let e = self.framings[i];
        let mut framings = self.framings.clone();
        framings[i - 1] -= e;
        framings[i + 1] -= e;
        framings.remove(i);
        ChainState {
            framings,
            eps: if e == 1 { self.eps.flip() } else { self.eps },
            frame: self.frame.clone(),
        }
    }

    /// Inserts a component of framing `e` on `edge`; both neighbours change by `e`
    /// and `ε` flips for `e = +1`. On the seam edge `n−1` the new component is
    /// appended at the end. A single component is its own neighbour twice, so it
    /// changes by `2e`.
    pub fn blow_up(&self, edge: usize, e: Sign) -> Result<ChainState> {
        let n = self.len();
        if edge >= n {
            return Err(Error::BadIndex { index: edge, len: n });
        }
        let ev = e.to_i64();
        let eps = match e {
            Sign::Plus => self.eps.flip(),
            Sign::Minus => self.eps,
        };
        if n == 1 {
            return Ok(ChainState {
                framings: vec![self.framings[0] + 2 * ev, ev],
                eps,
                frame: &self.frame * &Sl2::t_pow(-ev),
            });
        }
        if edge == n - 1 {
            return Ok(self.rotate_left(1).blow_up_inner(n - 2, e).rotate_right(1));
        }
        Ok(self.blow_up_inner(edge, e))
    }

    fn blow_up_inner(&self, edge: usize, e: Sign) -> ChainState {
        let ev = e.to_i64();
        let mut framings = self.framings.clone();
        framings[edge] += ev;
        framings[edge + 1] += ev;
        framings.insert(edge + 1, ev);
        ChainState {
            framings,
            eps: if ev == 1 { self.eps.flip() } else { self.eps },
            frame: self.frame.clone(),
        }
    }

    pub fn apply(&self, mv: &Move) -> Result<ChainState> {
        match *mv {
            Move::Up { edge, e } => self.blow_up(edge, e),
            Move::Down { index } => self.blow_down(index),
        }
    }

    pub fn run(&self, moves: &[Move]) -> Result<ChainState> {
        moves.iter().try_fold(self.clone(), |s, mv| s.apply(mv))
    }
}

fn product(framings: &[i64]) -> Sl2 {
    framings
        .iter()
        .fold(Sl2::identity(), |acc, &f| &acc * &Sl2::twist(f))
}

impl fmt::Display for ChainState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "chain {} sign={}", join_display(&self.framings), self.eps)
    }
}

/// Parses `chain -3,-1,-3 sign=+`; the `chain` keyword and the sign are optional.
impl FromStr for ChainState {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut toks = s.split_whitespace().peekable();
        if toks.peek() == Some(&"chain") {
            toks.next();
        }
        let body = toks.next().ok_or_else(|| Error::parse(1, "missing framings"))?;
        let framings = parse_int_list(body)?;
        let eps = match toks.next() {
            None => Sign::Plus,
            Some(t) => t
                .strip_prefix("sign=")
                .and_then(Sign::parse_symbol)
                .ok_or_else(|| Error::parse(1, format!("bad sign `{t}`")))?,
        };
        if let Some(extra) = toks.next() {
            return Err(Error::parse(1, format!("unexpected `{extra}`")));
        }
        ChainState::new(framings, eps)
    }
}

/// A uniformly chosen legal move: a blow-down of some `±1` component when one is
/// available and a coin says so, otherwise a blow-up on a random edge.
pub fn random_move<R: Rng>(state: &ChainState, rng: &mut R) -> Move {
    let downs: Vec<usize> = if state.len() >= 3 {
        (0..state.len()).filter(|&i| state.framings[i].abs() == 1).collect()
    } else {
        Vec::new()
    };
    if !downs.is_empty() && rng.gen_bool(0.5) {
        Move::Down {
            index: downs[rng.gen_range(0..downs.len())],
        }
    } else {
        Move::Up {
            edge: rng.gen_range(0..state.len()),
            e: if rng.gen_bool(0.5) { Sign::Plus } else { Sign::Minus },
        }
    }
}

/// Record of a dualizing run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dualization {
    /// `((−a₁,…,−aₙ); +)`
    pub start: ChainState,
    /// Left rotation applied to `start` before the first move.
    pub rotation: usize,
    pub moves: Vec<Move>,
    pub terminal: ChainState,
    pub d: IntString,
    pub e: IntString,
}

/// Turns the chain of a family string `a ≠ (3)` into `(−d₁,…,−d_p, d₁,…,d_p)`,
/// where `(d, e)` is the relabelling of `a`.
///
/// The chain is rotated so the second half of the family string comes first. Its
/// components are then consumed from the right: a `−1` is blown down, anything
/// else gets a `+1` blow-up on its right edge, which raises it by one.
pub fn dualize_procedure(a: &IntString) -> Result<Dualization> {
    let (d, e) = split_relabel(a)?;
    let (params, r) = recognize_family_at(a).ok_or(Error::NotInFamily)?;
    let (first, second) = params.blocks();
    let start = ChainState::new(a.entries().iter().map(|&x| -x).collect(), Sign::Plus)?;
    let rotation = (r + first.len()) % a.len();

    let mut state = start.rotate_left(rotation);
    let mut moves = Vec::new();
    let mut remaining = second.len();
    // every step either removes a component or raises one toward −1
    let budget = 2 * a.entries().iter().sum::<i64>() as usize + 16;
    while remaining > 0 {
        if moves.len() > budget {
            return Err(Error::CertificateFailed(format!("dualizing ({a}) did not terminate")));
        }
        let i = remaining - 1;
        let mv = if state.framings[i] == -1 {
            remaining -= 1;
            Move::Down { index: i }
        } else {
            Move::Up { edge: i, e: Sign::Plus }
        };
        state = state.apply(&mv)?;
        moves.push(mv);
    }

    let target: Vec<i64> = d.entries().iter().map(|&x| -x).chain(d.entries().iter().copied()).collect();
    if !state.same_up_to_rotation(&target) {
        return Err(Error::CertificateFailed(format!(
            "dualizing ({a}) ended at {state}, expected a rotation of ({})",
            join_display(&target)
        )));
    }
    if state.certified_monodromy() != start.chain_monodromy() {
        return Err(Error::CertificateFailed(format!("dualizing ({a}) changed the monodromy")));
    }
    Ok(Dualization {
        start,
        rotation,
        moves,
        terminal: state,
        d,
        e,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sl2::torsion_order;
    use proptest::prelude::*;

    fn chain(f: &[i64], eps: Sign) -> ChainState {
        ChainState::new(f.to_vec(), eps).unwrap()
    }

    fn m(a: i64, b: i64, c: i64, d: i64) -> Sl2 {
        Sl2::from_i64(a, b, c, d).unwrap()
    }

    #[test]
    fn monodromy_examples() {
        assert_eq!(chain(&[-3], Sign::Plus).chain_monodromy(), m(3, 1, -1, 0));
        assert_eq!(chain(&[-2, -2], Sign::Plus).chain_monodromy(), m(3, 2, -2, -1));
        assert_eq!(chain(&[-1, 1, -1], Sign::Minus).chain_monodromy(), m(3, 2, -2, -1));
    }

    #[test]
    fn blow_down_examples() {
        let s = chain(&[-3, -1, -3], Sign::Plus).blow_down(1).unwrap();
        assert_eq!(s, chain(&[-2, -2], Sign::Plus));
        let s = chain(&[-1, 1, -1], Sign::Minus).blow_down(1).unwrap();
        assert_eq!(s, chain(&[-2, -2], Sign::Plus));
        assert_eq!(chain(&[-3, 2, -3], Sign::Plus).blow_down(1), Err(Error::BadFraming(2)));
        assert!(matches!(chain(&[-1, -1], Sign::Plus).blow_down(0), Err(Error::ChainTooShort { .. })));
        assert!(matches!(chain(&[-1, -1, -1], Sign::Plus).blow_down(3), Err(Error::BadIndex { .. })));
    }

    #[test]
    fn blow_up_examples() {
        let s = chain(&[-2, -2], Sign::Plus);
        assert_eq!(s.blow_up(0, Sign::Minus).unwrap(), chain(&[-3, -1, -3], Sign::Plus));
        assert_eq!(s.blow_up(0, Sign::Plus).unwrap(), chain(&[-1, 1, -1], Sign::Minus));
        let up = s.blow_up(0, Sign::Minus).unwrap();
        assert_eq!(up.blow_down(1).unwrap(), s);
        assert!(matches!(s.blow_up(2, Sign::Plus), Err(Error::BadIndex { .. })));
    }

    #[test]
    fn seam_moves_keep_list_order() {
        let s = chain(&[-3, -2, -4], Sign::Plus);
        let up = s.blow_up(2, Sign::Minus).unwrap();
        assert_eq!(up.framings(), &[-4, -2, -5, -1]);
        assert_eq!(up.certified_monodromy(), s.chain_monodromy());
        let back = up.blow_down(3).unwrap();
        assert_eq!(back, s);

        let s = chain(&[-1, -3, -2, -4], Sign::Plus);
        let down = s.blow_down(0).unwrap();
        assert_eq!(down.framings(), &[-2, -2, -3]);
        assert_eq!(down.certified_monodromy(), s.chain_monodromy());
        assert_ne!(down.frame(), &Sl2::identity());
    }

    #[test]
    fn single_component_blow_up() {
        for f in -5..=5 {
            for e in [Sign::Plus, Sign::Minus] {
                let s = chain(&[f], Sign::Plus);
                let up = s.blow_up(0, e).unwrap();
                assert_eq!(up.framings(), &[f + 2 * e.to_i64(), e.to_i64()]);
                assert_eq!(up.certified_monodromy(), s.chain_monodromy());
            }
        }
    }

    #[test]
    fn rotations_are_conjugations() {
        let s = chain(&[-3, 1, 4, -2, 0], Sign::Minus);
        for k in 0..7 {
            let l = s.rotate_left(k);
            let r = s.rotate_right(k);
            assert_eq!(l.certified_monodromy(), s.chain_monodromy());
            assert_eq!(r.certified_monodromy(), s.chain_monodromy());
            assert_eq!(l.rotate_right(k), s);
        }
    }

    #[test]
    fn text_formats() {
        let s: ChainState = "chain -3,-1,-3 sign=+".parse().unwrap();
        assert_eq!(s, chain(&[-3, -1, -3], Sign::Plus));
        assert_eq!(s.to_string(), "chain -3,-1,-3 sign=+");
        assert_eq!("-2,2 sign=-".parse::<ChainState>().unwrap(), chain(&[-2, 2], Sign::Minus));
        assert!("chain -3 sign=*".parse::<ChainState>().is_err());
        assert!("chain".parse::<ChainState>().is_err());

        let script = parse_script("# demo\nup 0 -1\ndown 1 # inverse\n").unwrap();
        assert_eq!(script, vec![Move::Up { edge: 0, e: Sign::Minus }, Move::Down { index: 1 }]);
        assert_eq!(script[0].to_string(), "up 0 -1");
        assert!(matches!(parse_script("up 0 2"), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(parse_script("\nsideways 1"), Err(Error::Parse { line: 2, .. })));
        let end = chain(&[-2, -2], Sign::Plus).run(&script).unwrap();
        assert_eq!(end, chain(&[-2, -2], Sign::Plus));
    }

    #[test]
    fn dualize_examples() {
        let s = |v: &[i64]| IntString::new(v.to_vec());
        let out = dualize_procedure(&s(&[4, 2])).unwrap();
        assert!(out.terminal.same_up_to_rotation(&[-2, 2]));
        assert_eq!(out.terminal.certified_monodromy(), out.start.chain_monodromy());

        let out = dualize_procedure(&s(&[3, 3, 3])).unwrap();
        assert!(out.terminal.same_up_to_rotation(&[-2, -2, 2, 2]));
        assert_eq!(out.terminal.len(), 2 * out.d.len());

        // replaying the recorded script reproduces the terminal state
        let replay = out.start.rotate_left(out.rotation).run(&out.moves).unwrap();
        assert_eq!(replay, out.terminal);

        assert_eq!(dualize_procedure(&s(&[3])), Err(Error::SpecialCase));
        assert_eq!(dualize_procedure(&s(&[2, 2, 3])), Err(Error::NotInFamily));
    }

    #[test]
    fn dualize_rotated_input() {
        let p = crate::strings::FamilyParams::new(1, vec![1, 0, 2]).unwrap();
        let a = crate::strings::family_string(&p);
        for r in 0..a.len() {
            let out = dualize_procedure(&a.rotated(r)).unwrap();
            assert_eq!(out.terminal.len(), 2 * out.d.len());
        }
    }

    fn chain_strategy() -> impl Strategy<Value = ChainState> {
        (prop::collection::vec(-6i64..=6, 1..=8), any::<bool>()).prop_map(|(f, neg)| {
            ChainState::new(f, if neg { Sign::Minus } else { Sign::Plus }).unwrap()
        })
    }

    proptest! {
        #[test]
        fn moves_preserve_certified_monodromy(start in chain_strategy(), seed in any::<u64>(), n in 1usize..=20) {
            use rand::SeedableRng;
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let target = start.chain_monodromy();
            let torsion = torsion_order(&target);
            let mut s = start.clone();
            for _ in 0..n {
                let mv = random_move(&s, &mut rng);
                s = s.apply(&mv).unwrap();
                prop_assert_eq!(s.certified_monodromy(), target.clone());
                prop_assert_eq!(torsion_order(&s.chain_monodromy()), torsion.clone());
            }
        }

        #[test]
        fn interior_moves_are_exact(start in chain_strategy(), edge in 0usize..8, plus in any::<bool>()) {
            prop_assume!(start.len() >= 2);
            let edge = edge % (start.len() - 1);
            let e = if plus { Sign::Plus } else { Sign::Minus };
            let up = start.blow_up(edge, e).unwrap();
            prop_assert_eq!(up.chain_monodromy(), start.chain_monodromy());
            prop_assert_eq!(up.frame(), &Sl2::identity());
        }

        #[test]
        fn up_then_down_is_identity(start in chain_strategy(), edge in 0usize..8, plus in any::<bool>()) {
            prop_assume!(start.len() >= 2);
            let edge = edge % start.len();
            let e = if plus { Sign::Plus } else { Sign::Minus };
            let up = start.blow_up(edge, e).unwrap();
            let inserted = if edge == start.len() - 1 { start.len() } else { edge + 1 };
            prop_assert_eq!(up.blow_down(inserted).unwrap(), start);
        }
    }
}
