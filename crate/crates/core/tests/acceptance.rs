//! Acceptance gate: one test per criterion, each printing a single PASS/FAIL line.
//! All checks are exact; the only tolerances are wall-clock budgets.

use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_traits::Signed;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use qcircle_core::linalg::{abelian_group_of, det, signature, IntMatrix};
use qcircle_core::obstruct::{attach_two_handle, rohlin_mu, square_order_obstruction, KnotClass, SquareTest, SurgeryPresentation};
use qcircle_core::plumbing::{
    boundary_homology, evaluate_construction, intersection_form, ledger_evaluate, parabolic_cycle_plumbing,
    torus_bundle_homology, Construction, Descriptor, Ledger, PlumbingGraph, Sign, Status,
};
use qcircle_core::strings::{dual_string, IntString};
use qcircle_core::sweep::{
    compare_cycle_homology, dual_sweep, dualize_sweep, family_params, family_sweep, homology_sweep,
    kirby_random_sweep, random_unimodular, sakuma_sweep, Exec, SweepReport,
};
use qcircle_core::MonodromyWord;

fn report(id: u32, name: &str, budget: Duration, start: Instant, failures: &[String]) {
    let elapsed = start.elapsed();
    let ok = failures.is_empty() && elapsed < budget;
    println!(
        "criterion {id} {name}: {} ({:.2}s, budget {}s)",
        if ok { "PASS" } else { "FAIL" },
        elapsed.as_secs_f64(),
        budget.as_secs()
    );
    for f in failures.iter().take(10) {
        println!("  {f}");
    }
    assert!(failures.is_empty(), "criterion {id}: {} failures", failures.len());
    assert!(elapsed < budget, "criterion {id}: {elapsed:?} exceeds {budget:?}");
}

fn failures_of(r: SweepReport, expected_min: usize) -> Vec<String> {
    let mut f = r.failures;
    if r.checked < expected_min {
        f.push(format!("only {} items checked, expected at least {expected_min}", r.checked));
    }
    f
}

#[test]
fn criterion_1_sakuma() {
    let start = Instant::now();
    // 5^6 + … + 5^1 strings over 2..=6 minus the 1+…+1 all-2 strings
    let expected: usize = (1..=6u32).map(|n| 5usize.pow(n) - 1).sum();
    let r = sakuma_sweep(Exec::default(), 6, 6);
    let mut f = failures_of(r.clone(), expected);
    if r.checked != expected {
        f.push(format!("corpus size {} != {expected}", r.checked));
    }
    report(1, "sakuma |det Q| = tr - 2", Duration::from_secs(10), start, &f);
}

#[test]
fn criterion_2_negative_parabolic_cycles() {
    let start = Instant::now();
    let mut f = Vec::new();
    for n in 2..=50usize {
        let g = PlumbingGraph::cyclic(&vec![-2; n], Sign::Minus).unwrap();
        let d = det(&intersection_form(&g)).unwrap();
        if d.abs() != BigInt::from(4) {
            f.push(format!("n={n}: det {d}"));
        }
    }
    report(2, "all -2 negative cycles |det Q| = 4", Duration::from_secs(1), start, &f);
}

#[test]
fn criterion_3_dual_strings() {
    let start = Instant::now();
    let expected: usize = (1..=6u32).map(|n| 5usize.pow(n)).sum();
    let mut f = failures_of(dual_sweep(Exec::default(), 6, 6), expected);
    for k in 1..=20usize {
        let d = dual_string(&IntString::new(vec![2; k])).unwrap();
        if d != IntString::new(vec![k as i64 + 1]) {
            f.push(format!("dual(2^[{k}]) = {d}"));
        }
    }
    report(3, "dual involution, cf duality, dual(2^[k]) = (k+1)", Duration::from_secs(10), start, &f);
}

#[test]
fn criterion_4_family_shadow() {
    let start = Instant::now();
    let mut f = failures_of(family_sweep(Exec::default(), 2, 3), 4 + 64 + 1024);
    // spot values of tr - 2
    for (a, t) in [(&[3][..], 1), (&[4, 2], 4), (&[5, 2, 2], 9), (&[3, 3, 3], 16)] {
        let got = MonodromyWord::positive(a).matrix().trace() - BigInt::from(2);
        if got != BigInt::from(t) {
            f.push(format!("{a:?}: tr - 2 = {got}, expected {t}"));
        }
    }
    report(4, "family square torsion, non-square tr^2-4, round trip, dual(d)=e", Duration::from_secs(30), start, &f);
}

#[test]
fn criterion_5_kirby() {
    let start = Instant::now();
    let mut f = failures_of(kirby_random_sweep(Exec::default(), 1000, 0x5eed, 20, 8, 6), 1000);
    f.extend(failures_of(dualize_sweep(Exec::default(), 2, 2), 3 + 27 + 243 - 1));
    report(5, "kirby moves preserve monodromy; dualize reaches (-d, d)", Duration::from_secs(30), start, &f);
}

#[test]
fn criterion_6_homology() {
    let start = Instant::now();
    let expected: usize = (1..=6u32).map(|n| 5usize.pow(n) - 1).sum();
    let mut f = failures_of(homology_sweep(Exec::default(), 6, 6), expected);
    for n in 2..=12i64 {
        let g = parabolic_cycle_plumbing(n).unwrap();
        if let Err(e) = compare_cycle_homology(&g) {
            f.push(format!("parabolic n={n}: {e}"));
        }
        let want: Vec<BigInt> = if n % 2 == 1 { vec![4.into()] } else { vec![2.into(), 2.into()] };
        let got = abelian_group_of(&intersection_form(&g)).torsion;
        if got != want {
            f.push(format!("parabolic n={n}: torsion {got:?}"));
        }
    }
    report(6, "coker Q matches coker(sign*A - I)", Duration::from_secs(10), start, &f);
}

/// Descriptors exercising every ledger rule.
fn ledger_corpus() -> (Vec<Descriptor>, Vec<Construction>) {
    let mut words = Vec::new();
    for a in qcircle_core::sweep::hyperbolic_strings(4, 6) {
        words.push(Descriptor::Word(MonodromyWord::new(a, Sign::Plus)));
    }
    for p in family_params(1, 2) {
        let a = qcircle_core::strings::family_string(&p);
        for r in 0..a.len() {
            words.push(Descriptor::Word(MonodromyWord::new(a.rotated(r).into_entries(), Sign::Plus)));
        }
    }
    for n in 1..=8 {
        words.push(Descriptor::Word(MonodromyWord::new(vec![2; n], Sign::Minus)));
        words.push(Descriptor::Word(MonodromyWord::new(vec![3; n], Sign::Minus)));
    }
    for n in -12..=12 {
        words.push(Descriptor::Parabolic { sign: Sign::Minus, n });
        words.push(Descriptor::Parabolic { sign: Sign::Plus, n });
    }

    let seed = Construction::seed(PlumbingGraph::path(&[-1, -2, -2, -1]));
    let mut graphs = vec![seed.clone()];
    for sign in [Sign::Plus, Sign::Minus] {
        graphs.push(seed.clone().self_join("v1", "v4", sign));
        graphs.push(seed.clone().self_join("v1", "v3", sign));
        graphs.push(seed.clone().self_join("v2", "v3", sign));
    }
    for w in [-3, -1, 0, 1, 2] {
        let single = Construction::seed(format!("vertex u {w}").parse().unwrap());
        let joined = seed.clone().join_with("v2", single, "u");
        graphs.push(joined.clone());
        graphs.push(joined.self_join("v1", "v4", Sign::Minus));
    }
    for n in 2..=6 {
        let mut weights = vec![-2; n];
        weights[0] = -1;
        weights[n - 1] = -1;
        let path = Construction::seed(PlumbingGraph::path(&weights));
        let last = format!("v{n}");
        graphs.push(path.clone().self_join("v1", &last, Sign::Minus));
        graphs.push(path.self_join("v1", &last, Sign::Plus));
    }
    for a in [&[3, 3, 3][..], &[2, 2, 3], &[4, 2], &[5, 2]] {
        let g = qcircle_core::plumbing::cycle_plumbing_from_word(&MonodromyWord::positive(a)).unwrap();
        graphs.push(Construction::seed(g));
    }
    (words, graphs)
}

#[test]
fn criterion_7_obstruction_consistency() {
    let start = Instant::now();
    let mut f = Vec::new();
    let (words, graphs) = ledger_corpus();
    let mut ledger = Ledger::new();
    let mut bounding = 0;

    let mut check = |label: String, status: &Status, h: qcircle_core::AbelianGroup, f: &mut Vec<String>| {
        if !status.is_bounding() {
            return;
        }
        bounding += 1;
        if h.free_rank != 1 {
            f.push(format!("{label}: certified but b1 = {}", h.free_rank));
        }
        match square_order_obstruction(&h.torsion_order()) {
            Ok(SquareTest::Pass) => {}
            other => f.push(format!("{label}: certified but square test gives {other:?}")),
        }
    };

    for d in &words {
        let (next, entry) = ledger_evaluate(ledger, d).unwrap();
        ledger = next;
        let m = match d {
            Descriptor::Word(w) => w.matrix(),
            Descriptor::Parabolic { sign, n } => qcircle_core::Sl2::t_pow(*n).scaled(*sign),
            Descriptor::Graph(_) => unreachable!(),
        };
        check(entry.descriptor.clone(), &entry.status, torus_bundle_homology(&m), &mut f);
    }
    for c in &graphs {
        let (next, entry) = ledger_evaluate(ledger, &Descriptor::Graph(c.clone())).unwrap();
        ledger = next;
        let (g, status) = evaluate_construction(c).unwrap();
        if status.label() != entry.status.label() {
            f.push(format!("{}: cached {:?} vs {:?}", entry.descriptor, entry.status, status));
        }
        check(entry.descriptor.clone(), &status, boundary_homology(&g).unwrap(), &mut f);
    }
    if bounding < 20 {
        f.push(format!("only {bounding} certified descriptors in the corpus"));
    }

    let (_, e) = ledger_evaluate(Ledger::new(), &"2,2,3".parse().unwrap()).unwrap();
    if e.to_string() != "descriptor=word:2,2,3 status=obstructed reason=square-order(torsion=3)" {
        f.push(format!("(2,2,3): {e}"));
    }

    let l = SurgeryPresentation::new(IntMatrix::from_rows(&[[0]])).unwrap();
    for framing in -10..=10 {
        let (bordered, _) = attach_two_handle(&l, &KnotClass::new(&[1], framing)).unwrap();
        let d = det(bordered.matrix()).unwrap();
        if d.abs() != BigInt::from(1) {
            f.push(format!("framing {framing}: det {d}"));
        }
    }
    report(7, "certified descriptors pass the square test; (2,2,3) obstructed; attach |det| = 1", Duration::from_secs(5), start, &f);
}

fn e8() -> IntMatrix {
    let mut rows = vec![vec![0i64; 8]; 8];
    for (i, row) in rows.iter_mut().enumerate() {
        row[i] = 2;
    }
    for (i, j) in [(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 6), (2, 7)] {
        rows[i][j] = -1;
        rows[j][i] = -1;
    }
    IntMatrix::from_rows(&rows)
}

#[test]
fn criterion_8_rohlin() {
    let start = Instant::now();
    let mut f = Vec::new();
    let e8 = e8();
    if signature(&e8).unwrap() != 8 {
        f.push("signature(E8) != 8".into());
    }
    if rohlin_mu(&e8).unwrap() != 1 {
        f.push("mu(E8) != 1".into());
    }
    let h = IntMatrix::from_rows(&[[0, 1], [1, 0]]);
    if rohlin_mu(&h).unwrap() != 0 {
        f.push("mu(H) != 0".into());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for i in 0..100 {
        let p = random_unimodular(8, 24, &mut rng);
        let moved = &(&p.transpose() * &e8) * &p;
        if signature(&moved).unwrap() != 8 || rohlin_mu(&moved).unwrap() != 1 {
            f.push(format!("change of basis {i} moved the invariants"));
        }
        let q = random_unimodular(2, 12, &mut rng);
        let hm = &(&q.transpose() * &h) * &q;
        if rohlin_mu(&hm).unwrap() != 0 {
            f.push(format!("change of basis {i} moved mu(H)"));
        }
    }
    report(8, "signature(E8) = 8, mu(E8) = 1, mu(H) = 0, congruence invariance", Duration::from_secs(5), start, &f);
}
