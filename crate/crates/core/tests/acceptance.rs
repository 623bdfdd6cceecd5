//! End-to-end acceptance gate. Runs all nine checks sequentially and
//! prints one verdict line per check (visible with `-- --nocapture`).
//! Heavy Groebner checks dominate the runtime; expect tens of minutes
//! on a single core.

use std::time::Instant;

use gpk3::bwb::verify_appendix_a;
use gpk3::ffield::{Matrix, PrimeField, RandomState};
use gpk3::grassmann::{certify_smooth_gpk3, search_orthogonal_smooth, var_index, GPK3Instance};
use gpk3::groebner::ResourceBudget;
use gpk3::motivic::{
    class_grassmannian_25, class_section, count_and_compare, incidence_identity, section_count,
    LPolynomial,
};
use gpk3::traces::{
    allowed_involution_traces, oracle_trace_type1, trace_dtau, trace_type1, trace_type2,
    InvolutionType,
};
use gpk3::MatrixFF;
use num_rational::BigRational;
use num_traits::FromPrimitive;

const FIXTURE: &str = include_str!("../fixtures/appendix_b_f103.txt");

fn f103() -> PrimeField {
    PrimeField::new(103).expect("103 is prime")
}

fn fixture_matrix() -> MatrixFF {
    Matrix::parse_text(f103(), FIXTURE).expect("fixture parses")
}

fn random_invertible(field: PrimeField, seed: u64) -> MatrixFF {
    let mut rng = RandomState::new(seed);
    loop {
        let m = Matrix::from_fn(field, 10, 10, |_, _| rng.below(field.modulus()));
        if m.inverse().is_ok() {
            return m;
        }
    }
}

fn is_orthogonal(m: &MatrixFF) -> bool {
    m.transpose().mul(m).map(|p| p.is_identity()).unwrap_or(false)
}

fn check_1_fixture_orthogonality() -> Result<(), String> {
    let t = fixture_matrix();
    if is_orthogonal(&t) {
        Ok(())
    } else {
        Err("fixture matrix is not orthogonal over F_103".into())
    }
}

fn check_2_fixture_smoothness() -> Result<(), String> {
    let inst = GPK3Instance::with_identity_g1(f103(), fixture_matrix());
    let cert = certify_smooth_gpk3(&inst, &ResourceBudget::default())
        .map_err(|e| format!("certification error: {e}"))?;
    if cert.inconclusive {
        return Err("budget exhausted in at least one patch".into());
    }
    if !cert.smooth {
        return Err("a patch reported a nonempty singular locus".into());
    }
    if cert.patches.len() != 10 || cert.patches.iter().any(|p| p.unit_ideal != Some(true)) {
        return Err("not every patch certified the unit ideal".into());
    }
    Ok(())
}

fn check_3_search_reproducibility() -> Result<(), String> {
    let budget = ResourceBudget::default();
    let seed = 20_250_823;
    let (m1, c1, a1) = search_orthogonal_smooth(f103(), seed, 20, &budget)
        .map_err(|e| format!("first search failed: {e}"))?;
    let (m2, c2, a2) = search_orthogonal_smooth(f103(), seed, 20, &budget)
        .map_err(|e| format!("second search failed: {e}"))?;
    if !is_orthogonal(&m1) {
        return Err("search returned a non-orthogonal matrix".into());
    }
    if !(c1.smooth && c2.smooth) {
        return Err("search returned an uncertified matrix".into());
    }
    if m1.to_text() != m2.to_text() || a1 != a2 || c1.matrix_sha != c2.matrix_sha {
        return Err("rerun with the same seed did not reproduce bit-exactly".into());
    }
    Ok(())
}

fn check_4_cohomology_suite() -> Result<(), String> {
    let report = verify_appendix_a();
    let failed: Vec<&str> = report
        .claims
        .iter()
        .filter(|c| !c.pass)
        .map(|c| c.name.as_str())
        .collect();
    if report.claims.len() != 39 {
        return Err(format!("expected 39 claims, got {}", report.claims.len()));
    }
    if failed.is_empty() {
        Ok(())
    } else {
        Err(format!("failing claims: {failed:?}"))
    }
}

fn check_5_trace_suite() -> Result<(), String> {
    let allowed = allowed_involution_traces();
    let expected: std::collections::BTreeSet<i64> =
        [51, 3, 1, -3, -5, -13, -15, -35].into_iter().collect();
    if allowed != expected {
        return Err(format!("allowed trace set {allowed:?} != {expected:?}"));
    }
    let t41 = InvolutionType::on_v(4, 1).map_err(|e| e.to_string())?;
    let t32 = InvolutionType::on_v(3, 2).map_err(|e| e.to_string())?;
    for (a, b, mult1, trace) in [
        (t41, t41, 19, -13),
        (t41, t32, 23, -5),
        (t32, t32, 27, 3),
    ] {
        let r = trace_type1(a, b).map_err(|e| e.to_string())?;
        if (r.mult1, r.trace) != (mult1, trace) {
            return Err(format!(
                "type I {a:?} x {b:?}: got ({}, {}), want ({mult1}, {trace})",
                r.mult1, r.trace
            ));
        }
    }
    for (p, q, trace) in [(8, 2, -35), (7, 3, -15), (6, 4, -3), (5, 5, 1)] {
        let r = trace_type2(InvolutionType::on_w(p, q).map_err(|e| e.to_string())?)
            .map_err(|e| e.to_string())?;
        if r.trace != trace {
            return Err(format!("type II {{{p},{q}}}: got {}, want {trace}", r.trace));
        }
    }
    if trace_type2(InvolutionType::on_w(9, 1).map_err(|e| e.to_string())?).is_ok() {
        return Err("type {9,1} should be rejected".into());
    }
    if trace_dtau() != -1 {
        return Err(format!("duality trace {} != -1", trace_dtau()));
    }
    if allowed.contains(&trace_dtau()) {
        return Err("duality trace must lie outside the allowed set".into());
    }
    Ok(())
}

fn check_6_oracle_agreement() -> Result<(), String> {
    let start = Instant::now();
    let cases: [([i64; 5], [i64; 5], (u32, u32), (u32, u32)); 3] = [
        ([1, 1, 1, 1, -1], [1, 1, 1, 1, -1], (4, 1), (4, 1)),
        ([1, 1, 1, -1, -1], [1, 1, 1, -1, -1], (3, 2), (3, 2)),
        ([1, 1, 1, 1, -1], [1, 1, 1, -1, -1], (4, 1), (3, 2)),
    ];
    for (a0, b0, ta, tb) in cases {
        let expected = trace_type1(
            InvolutionType::on_v(ta.0, ta.1).map_err(|e| e.to_string())?,
            InvolutionType::on_v(tb.0, tb.1).map_err(|e| e.to_string())?,
        )
        .map_err(|e| e.to_string())?
        .trace;
        for seed in [1u64, 2, 3] {
            let got = oracle_trace_type1(&a0, &b0, seed).map_err(|e| e.to_string())?;
            if got != BigRational::from_i64(expected).expect("small") {
                return Err(format!(
                    "oracle {a0:?} x {b0:?} seed {seed}: got {got}, want {expected}"
                ));
            }
        }
    }
    if start.elapsed().as_secs() > 60 {
        return Err(format!(
            "oracle agreement took {:?}, budget 60 s",
            start.elapsed()
        ));
    }
    Ok(())
}

fn check_7_motivic_suite() -> Result<(), String> {
    let s2 = class_section(2).map_err(|e| e.to_string())?;
    let s4 = class_section(4).map_err(|e| e.to_string())?;
    if s2.sub(&s4) != LPolynomial::l_power(4) {
        return Err("S2 - S4 != L^4".into());
    }
    let (p1, p2, l4) = incidence_identity().map_err(|e| e.to_string())?;
    let diff = p1.sub(&p2);
    if !(diff.constant.is_zero() && diff.x == l4 && diff.y == l4.neg()) {
        return Err("incidence difference is not ([X]-[Y]) L^4".into());
    }
    let gr = class_grassmannian_25();
    if (gr.eval(2), gr.eval(3)) != (155, 1210) {
        return Err("Grassmannian class does not evaluate to 155 / 1210".into());
    }
    for q in [2u64, 3] {
        let field = PrimeField::new(q).map_err(|e| e.to_string())?;
        let mut rank2 = vec![0u64; 10];
        rank2[var_index(0, 1)] = 1;
        let mut rank4 = rank2.clone();
        rank4[var_index(2, 3)] = 1;
        let (n2, n4) = (section_count(field, &rank2), section_count(field, &rank4));
        if q == 2 && (n2, n4) != (91, 75) {
            return Err(format!("q=2 section counts ({n2}, {n4}) != (91, 75)"));
        }
        if n2 != s2.eval(q as i64) as u64 || n4 != s4.eval(q as i64) as u64 {
            return Err(format!("q={q} section counts disagree with the polynomials"));
        }
    }
    Ok(())
}

fn check_8_point_count_shadow() -> Result<(), String> {
    let start = Instant::now();
    let f3 = PrimeField::new(3).map_err(|e| e.to_string())?;
    for seed in 1..=10u64 {
        let g = random_invertible(f3, 3000 + seed);
        let report = count_and_compare(f3, &g).map_err(|e| e.to_string())?;
        if !report.marginals_equal {
            return Err(format!(
                "seed {seed}: #X = {} != #Y = {} over F_3",
                report.n_x, report.n_y
            ));
        }
    }
    let f2 = PrimeField::new(2).map_err(|e| e.to_string())?;
    for seed in 1..=3u64 {
        let g = random_invertible(f2, 2000 + seed);
        let report = count_and_compare(f2, &g).map_err(|e| e.to_string())?;
        if !report.verified() {
            return Err(format!("seed {seed}: incidence identity failed at q = 2"));
        }
    }
    if start.elapsed().as_secs() > 120 {
        return Err(format!(
            "point counts took {:?}, budget 2 minutes",
            start.elapsed()
        ));
    }
    Ok(())
}

fn check_9_simultaneous_smoothness() -> Result<(), String> {
    let field = f103();
    let budget = ResourceBudget::default();
    for seed in [11u64, 12] {
        let g = random_invertible(field, seed);
        if is_orthogonal(&g) {
            return Err(format!("seed {seed} produced an orthogonal matrix"));
        }
        let inst = GPK3Instance::with_identity_g1(field, g);
        let mirror = inst
            .double_mirror()
            .map_err(|e| e.to_string())?
            .normalized()
            .map_err(|e| e.to_string())?;
        let c1 = certify_smooth_gpk3(&inst, &budget).map_err(|e| e.to_string())?;
        let c2 = certify_smooth_gpk3(&mirror, &budget).map_err(|e| e.to_string())?;
        if c1.inconclusive || c2.inconclusive {
            return Err(format!("seed {seed}: a certification was inconclusive"));
        }
        if c1.smooth != c2.smooth {
            return Err(format!(
                "seed {seed}: verdicts differ (X smooth = {}, Y smooth = {})",
                c1.smooth, c2.smooth
            ));
        }
    }
    Ok(())
}

#[test]
fn acceptance() {
    let checks: [(&str, fn() -> Result<(), String>); 9] = [
        ("1 fixture orthogonality", check_1_fixture_orthogonality),
        ("2 fixture smoothness certificate", check_2_fixture_smoothness),
        ("3 search reproducibility", check_3_search_reproducibility),
        ("4 cohomology table and vanishing suite", check_4_cohomology_suite),
        ("5 involution trace suite", check_5_trace_suite),
        ("6 rational trace oracle agreement", check_6_oracle_agreement),
        ("7 motivic class suite", check_7_motivic_suite),
        ("8 point-count L-equivalence shadow", check_8_point_count_shadow),
        ("9 simultaneous smoothness of mirror pairs", check_9_simultaneous_smoothness),
    ];
    let mut failures = 0;
    for (name, check) in checks {
        let start = Instant::now();
        match check() {
            Ok(()) => println!("PASS  {name}  ({:.1?})", start.elapsed()),
            Err(msg) => {
                failures += 1;
                println!("FAIL  {name}  ({:.1?}): {msg}", start.elapsed());
            }
        }
    }
    assert_eq!(failures, 0, "{failures} acceptance check(s) failed");
}
