//! Acceptance gate: each numbered check runs at its stated corpus size and
//! tolerance and prints one pass/fail line. Run with `--nocapture` to see
//! the lines for passing checks too.

use std::time::Instant;

use terraced::verify::{
    bennett_suite, cesaro_suite, epsl_suite, gram_suite, hadamard_suite, lp_comparison_suite,
    norm_sandwich_suite, sandwich_suite, SuiteResult,
};

const SEED: u64 = 7;

fn report(label: &str, suite: &SuiteResult) {
    let status = if suite.passed() { "PASS" } else { "FAIL" };
    println!(
        "{label}: {status} ({} cases, {} failures)",
        suite.cases, suite.failures
    );
    for note in &suite.notes {
        println!("    {note}");
    }
}

#[test]
fn criterion_1_sandwich() {
    // 500 seeded complex sequences and subintervals (#I <= 64):
    // J/2 <= K <= 2J and |K - L/sqrt(2)| <= 1e-9 (1 + L), in under 60 s.
    let start = Instant::now();
    let suite = sandwich_suite(SEED, 500);
    let elapsed = start.elapsed();
    report("criterion 1 (interval sandwich)", &suite);
    println!("    runtime: {:.2?}", elapsed);
    assert!(suite.passed(), "{:?}", suite.notes);
    assert!(
        elapsed.as_secs_f64() < 60.0,
        "sandwich suite took {elapsed:.2?}"
    );
}

#[test]
fn criterion_2_norm_sandwiches() {
    // J_0 <= s_max <= 2 sqrt(2) J_0 and sup sigma / sqrt(2) <= s_max
    // <= 4 sqrt(2) sup sigma against exact finite-rank SVD, tolerance 1e-9.
    let suite = norm_sandwich_suite(SEED, 500);
    report("criterion 2 (norm sandwiches)", &suite);
    assert!(suite.passed(), "{:?}", suite.notes);
}

#[test]
fn criterion_3_bennett_bound() {
    // 200 random factorable pairs: K_2 <= ||A|| <= 2 sqrt(2) K_2.
    let suite = bennett_suite(SEED, 200);
    report("criterion 3 (factorable bound)", &suite);
    assert!(suite.passed(), "{:?}", suite.notes);
}

#[test]
fn criterion_4_epsl_consistency() {
    // Per corpus element and a 16-point threshold grid spanning
    // (0, sqrt(2) s_max]: every emitted a_{2N+2} upper bound and a_N lower
    // bound holds against the exact singular values; zero violations.
    let suite = epsl_suite(SEED, 500);
    report("criterion 4 (cut-sequence consistency)", &suite);
    assert!(suite.passed(), "{:?}", suite.notes);
}

#[test]
fn criterion_5_lp_comparisons() {
    // p in {1.5, 2, 3}: ||sigma||_p <= (5*8^p + 3*2^{p/2})^{1/p} ||a||_p and
    // ||a||_p^p <= 7 (4 sqrt2 ||sigma||_p)^p + 8 * 6^p zeta(p) ||sigma||_p^p.
    let suite = lp_comparison_suite(SEED, 500);
    report("criterion 5 (lp comparisons)", &suite);
    assert!(suite.passed(), "{:?}", suite.notes);
}

#[test]
fn criterion_6_cesaro_desk_scale() {
    // J_0 bracket contains sqrt(zeta(2)) at width < 1e-4; the section norm
    // at N = 2048 must lie in (1.98, 2.0] and inside [J_0, 2 sqrt(2) J_0];
    // compact verdict no with |sigma_20 - sqrt(ln 2)| < 1e-2.
    //
    // The (1.98, 2.0] window is asserted as stated even though measured
    // sections approach the limiting norm 2 only at rate O(1/ln^2 N)
    // (observed 1.7736 at N = 2048), so this check documents that gap
    // rather than hiding it.
    let suite = cesaro_suite();
    report("criterion 6 (Cesaro desk scale)", &suite);
    assert!(suite.passed(), "{:?}", suite.notes);
}

#[test]
fn criterion_7_hadamard_identities() {
    // Eigen residuals < 1e-12, decomposition residuals < 1e-14 on 200
    // random c; decaying diagonal gives (yes, yes, yes), constant diagonal
    // gives (yes, no, no).
    let suite = hadamard_suite(SEED, 200);
    report("criterion 7 (multiplier identities)", &suite);
    assert!(suite.passed(), "{:?}", suite.notes);
}

#[test]
fn criterion_8_gram_lshape() {
    // Tail-sum Gram sections match the conjugate-transpose product
    // entrywise to 1e-12, and the product entry depends only on
    // max(row, col).
    let suite = gram_suite(SEED, 500);
    report("criterion 8 (Gram tail sums)", &suite);
    assert!(suite.passed(), "{:?}", suite.notes);
}
