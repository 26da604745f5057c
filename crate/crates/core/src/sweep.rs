//! Exhaustive and randomized batch checks.
//!
//! Every sweep materialises its corpus up front and evaluates one independent
//! check per item. With the `parallel` feature (on by default) [`Exec::Parallel`]
//! spreads the items over the rayon pool; without it both modes run on the calling
//! thread. Results are collected in corpus order either way, so reports are
//! identical across modes.

use num_traits::Signed;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::kirby::{dualize_procedure, random_move, ChainState};
use crate::linalg::{det, is_perfect_square, IntMatrix};
use crate::plumbing::{
    boundary_homology, cycle_monodromy, cycle_plumbing_from_word, intersection_form, torus_bundle_homology,
    PlumbingGraph,
};
use crate::sl2::{torsion_order, MonodromyWord, Sign};
use crate::strings::{cf_value, dual_string, family_string, recognize_family, split_relabel, FamilyParams, IntString};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Exec {
    Sequential,
    Parallel,
}

impl Default for Exec {
    fn default() -> Self {
        if cfg!(feature = "parallel") {
            Exec::Parallel
        } else {
            Exec::Sequential
        }
    }
}

/// `f` over `items`, results in input order.
pub fn par_map<T, R, F>(exec: Exec, items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    match exec {
        #[cfg(feature = "parallel")]
        Exec::Parallel => {
            use rayon::prelude::*;
            items.par_iter().map(f).collect()
        }
        _ => items.iter().map(f).collect(),
    }
}

/// Outcome of a batch check: how many items ran and a message per failure.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SweepReport {
    pub checked: usize,
    pub failures: Vec<String>,
}

impl SweepReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn merge(mut self, other: SweepReport) -> SweepReport {
        self.checked += other.checked;
        self.failures.extend(other.failures);
        self
    }
}

pub fn check_all<T, F>(exec: Exec, items: &[T], check: F) -> SweepReport
where
    T: Sync,
    F: Fn(&T) -> std::result::Result<(), String> + Sync + Send,
{
    let failures = par_map(exec, items, check).into_iter().filter_map(|r| r.err()).collect();
    SweepReport {
        checked: items.len(),
        failures,
    }
}

/// Calls `f` on every string of length `1..=max_len` with entries in `lo..=hi`,
/// shorter strings first, each length in lexicographic order.
pub fn enumerate_strings<F: FnMut(&[i64])>(max_len: usize, lo: i64, hi: i64, mut f: F) {
    if lo > hi {
        return;
    }
    for len in 1..=max_len {
        let mut cur = vec![lo; len];
        'next: loop {
            f(&cur);
            for i in (0..len).rev() {
                if cur[i] < hi {
                    cur[i] += 1;
                    continue 'next;
                }
                cur[i] = lo;
            }
            break;
        }
    }
}

pub fn all_strings(max_len: usize, lo: i64, hi: i64) -> Vec<Vec<i64>> {
    let mut out = Vec::new();
    enumerate_strings(max_len, lo, hi, |s| out.push(s.to_vec()));
    out
}

/// Strings with entries in `2..=hi`, at least one `≥ 3`: the positive hyperbolic
/// normal forms.
pub fn hyperbolic_strings(max_len: usize, hi: i64) -> Vec<Vec<i64>> {
    let mut out = Vec::new();
    enumerate_strings(max_len, 2, hi, |s| {
        if s.iter().any(|&x| x >= 3) {
            out.push(s.to_vec());
        }
    });
    out
}

/// All family parameters with `k ≤ max_k` and every `xᵢ ≤ max_x`.
pub fn family_params(max_k: usize, max_x: u64) -> Vec<FamilyParams> {
    let mut out = Vec::new();
    for k in 0..=max_k {
        let n = 2 * k + 1;
        let mut xs = vec![0u64; n];
        loop {
            out.push(FamilyParams::new(k, xs.clone()).expect("length 2k+1"));
            let Some(i) = (0..n).rev().find(|&i| xs[i] < max_x) else {
                break;
            };
            xs[i] += 1;
            xs[i + 1..].iter_mut().for_each(|x| *x = 0);
        }
    }
    out
}

/// Product of `steps` random elementary operations (row additions, swaps and sign
/// changes) on the `n×n` identity; always `det = ±1`.
pub fn random_unimodular<R: Rng>(n: usize, steps: usize, rng: &mut R) -> IntMatrix {
    let mut m = IntMatrix::identity(n);
    if n == 0 {
        return m;
    }
    for _ in 0..steps {
        let i = rng.gen_range(0..n);
        let j = rng.gen_range(0..n);
        let op = rng.gen_range(0..4);
        let mut e = IntMatrix::identity(n);
        match op {
            0 | 1 if i != j => e.set(i, j, rng.gen_range(-2i64..=2).into()),
            2 if i != j => {
                e.set(i, i, 0.into());
                e.set(j, j, 0.into());
                e.set(i, j, 1.into());
                e.set(j, i, 1.into());
            }
            _ => e.set(i, i, (-1).into()),
        }
        m = &m * &e;
    }
    m
}

fn hyperbolic_words(max_len: usize, hi: i64) -> Vec<MonodromyWord> {
    hyperbolic_strings(max_len, hi)
        .into_iter()
        .map(|s| MonodromyWord::new(s, Sign::Plus))
        .collect()
}

/// `|det Q(cycle a)| = tr A(a) − 2` over every positive hyperbolic string.
pub fn sakuma_sweep(exec: Exec, max_len: usize, hi: i64) -> SweepReport {
    check_all(exec, &hyperbolic_words(max_len, hi), |w| {
        let g = cycle_plumbing_from_word(w).map_err(|e| format!("{w}: {e}"))?;
        let d = det(&intersection_form(&g)).map_err(|e| format!("{w}: {e}"))?;
        let t = w.matrix().trace() - 2;
        if d.abs() == t {
            Ok(())
        } else {
            Err(format!("{w}: |det Q| = {} but tr - 2 = {t}", d.abs()))
        }
    })
}

/// Torsion factors of `coker Q` against those of `coker(±A − I)`, where `±A` is
/// read back from the cyclic graph.
pub fn homology_sweep(exec: Exec, max_len: usize, hi: i64) -> SweepReport {
    check_all(exec, &hyperbolic_words(max_len, hi), |w| {
        let g = cycle_plumbing_from_word(w).map_err(|e| format!("{w}: {e}"))?;
        compare_cycle_homology(&g).map_err(|e| format!("{w}: {e}"))
    })
}

/// `H₁` of the cyclic plumbing's boundary, `Z ⊕ coker Q`, against the torus
/// bundle formula `Z ⊕ coker(±A − I)` with `±A` read back from the graph.
pub fn compare_cycle_homology(g: &PlumbingGraph) -> std::result::Result<(), String> {
    let m = cycle_monodromy(g).map_err(|e| e.to_string())?.monodromy();
    let from_monodromy = torus_bundle_homology(&m);
    let from_graph = boundary_homology(g).map_err(|e| e.to_string())?;
    if from_monodromy != from_graph {
        return Err(format!("graph gives {from_graph}, monodromy gives {from_monodromy}"));
    }
    Ok(())
}

/// Involution, continued fraction duality and the length identity.
pub fn dual_sweep(exec: Exec, max_len: usize, hi: i64) -> SweepReport {
    check_all(exec, &all_strings(max_len, 2, hi), |b| {
        let b = IntString::from(b.as_slice());
        let d = dual_string(&b).map_err(|e| format!("{b}: {e}"))?;
        let back = dual_string(&d).map_err(|e| format!("{d}: {e}"))?;
        if back != b {
            return Err(format!("dual(dual({b})) = {back}"));
        }
        let pq = cf_value(&b).map_err(|e| e.to_string())?;
        let dpq = cf_value(&d).map_err(|e| e.to_string())?;
        if dpq.numer() != pq.numer() || *dpq.denom() != pq.numer() - pq.denom() {
            return Err(format!("cf({b}) = {pq}, cf({d}) = {dpq}"));
        }
        let sum: i64 = b.entries().iter().sum();
        if d.len() as i64 != sum - 2 * b.len() as i64 + 1 {
            return Err(format!("length of dual({b}) is {}", d.len()));
        }
        Ok(())
    })
}

/// For each family member: square `tr − 2`, non-square `tr² − 4`, recognizer
/// round trip and `dual(d) = e` after relabelling.
pub fn family_sweep(exec: Exec, max_k: usize, max_x: u64) -> SweepReport {
    check_all(exec, &family_params(max_k, max_x), |p| {
        let a = family_string(p);
        let m = MonodromyWord::new(a.entries().to_vec(), Sign::Plus).matrix();
        let t = torsion_order(&m).map_err(|e| format!("{p}: {e}"))?;
        if !is_perfect_square(&t) {
            return Err(format!("{p}: tr - 2 = {t} is not a square"));
        }
        let tr = m.trace();
        let q = &tr * &tr - 4;
        if is_perfect_square(&q) {
            return Err(format!("{p}: tr^2 - 4 = {q} is a square"));
        }
        match recognize_family(&a) {
            Some(r) if &r == p => {}
            other => return Err(format!("{p}: recognized as {other:?}")),
        }
        if p.is_special() {
            return Ok(());
        }
        let (d, e) = split_relabel(&a).map_err(|err| format!("{p}: {err}"))?;
        let dd = dual_string(&d).map_err(|err| format!("{p}: {err}"))?;
        if dd != e {
            return Err(format!("{p}: dual({d}) = {dd}, expected {e}"));
        }
        Ok(())
    })
}

/// `count` random move sequences; sequence `i` is driven by its own generator
/// seeded with `seed + i`, so the corpus does not depend on the execution mode.
pub fn kirby_random_sweep(
    exec: Exec,
    count: usize,
    seed: u64,
    max_moves: usize,
    max_len: usize,
    framing_bound: i64,
) -> SweepReport {
    let seeds: Vec<u64> = (0..count as u64).map(|i| seed.wrapping_add(i)).collect();
    check_all(exec, &seeds, |&s| {
        let mut rng = ChaCha8Rng::seed_from_u64(s);
        let len = rng.gen_range(1..=max_len);
        let framings: Vec<i64> = (0..len).map(|_| rng.gen_range(-framing_bound..=framing_bound)).collect();
        let eps = if rng.gen_bool(0.5) { Sign::Plus } else { Sign::Minus };
        let start = ChainState::new(framings, eps).map_err(|e| e.to_string())?;
        let target = start.chain_monodromy();
        let tr = target.trace();
        let moves = rng.gen_range(1..=max_moves);
        let mut state = start.clone();
        for step in 0..moves {
            let mv = random_move(&state, &mut rng);
            state = state.apply(&mv).map_err(|e| format!("seed {s} step {step} {mv}: {e}"))?;
            if state.certified_monodromy() != target {
                return Err(format!("seed {s}: {start} -> {state} after {mv} changes the monodromy"));
            }
            if state.chain_monodromy().trace() != tr {
                return Err(format!("seed {s}: trace changed after {mv}"));
            }
        }
        Ok(())
    })
}

/// Runs the dualizing move sequence on every family string other than `(3)`.
pub fn dualize_sweep(exec: Exec, max_k: usize, max_x: u64) -> SweepReport {
    let params: Vec<FamilyParams> = family_params(max_k, max_x)
        .into_iter()
        .filter(|p| !p.is_special())
        .collect();
    check_all(exec, &params, |p| {
        let a = family_string(p);
        dualize_procedure(&a).map(|_| ()).map_err(|e| format!("{p}: {e}"))
    })
}
