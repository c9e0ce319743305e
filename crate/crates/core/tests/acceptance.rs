//! Acceptance suite. Each criterion is one test and prints one
//! `PASS`/`FAIL` line. Criteria run one at a time so that their wall-clock
//! limits are measured without interference from each other.

use std::io::Write;
use std::sync::Mutex;
use std::time::Instant;

use num_bigint::BigUint;
use sirdiv::analytic::{self, NormalizedParams, Threshold};
use sirdiv::cli::{cmd_fig, default_params, run_with_output, FigOptions};
use sirdiv::mcsim::{ConditionedSamples, SimConfig};
use sirdiv::specfun::{diversity_poly, diversity_poly_coefficients, log_gamma, DiversityOrder};

static SERIAL: Mutex<()> = Mutex::new(());

fn order(n: usize) -> DiversityOrder {
    DiversityOrder::new(n).unwrap()
}

fn th(t: f64) -> Threshold {
    Threshold::new(t).unwrap()
}

fn run_criterion(id: u32, name: &str, limit_s: f64, body: impl FnOnce() -> (bool, String)) {
    let _guard = SERIAL.lock().unwrap_or_else(|e| e.into_inner());
    let start = Instant::now();
    let (ok, detail) = body();
    let elapsed = start.elapsed().as_secs_f64();
    let in_time = elapsed < limit_s;
    let verdict = if ok && in_time { "PASS" } else { "FAIL" };
    let line = format!(
        "{verdict} criterion {id} ({name}): {detail} [{elapsed:.2} s, limit {limit_s} s]\n"
    );
    // written past the harness capture so the line shows for passing tests too
    let _ = std::io::stdout().lock().write_all(line.as_bytes());
    assert!(ok, "criterion {id}: {detail}");
    assert!(in_time, "criterion {id} took {elapsed:.2} s, limit {limit_s} s");
}

/// Integer polynomial product, coefficients in increasing degree.
fn poly_mul(a: &[u64], b: &[u64]) -> Vec<u64> {
    let mut out = vec![0; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

#[test]
fn criterion_01_diversity_polynomial_exactness() {
    run_criterion(1, "diversity polynomial exactness", 1.0, || {
        let mut failures = Vec::new();
        // D_1 = 1, D_2 = 1 + x, D_3 = (x+1)(x+2)/2, D_4 = (x+1)(x+2)(x+3)/6
        let listed: [(Vec<u64>, u64); 4] = [
            (vec![1], 1),
            (vec![1, 1], 1),
            (poly_mul(&[1, 1], &[2, 1]), 2),
            (poly_mul(&poly_mul(&[1, 1], &[2, 1]), &[3, 1]), 6),
        ];
        for (i, (num, den)) in listed.iter().enumerate() {
            let n = i + 1;
            let c = diversity_poly_coefficients(order(n)).unwrap();
            if c.degree() != num.len() - 1 {
                failures.push(format!("D_{n} degree {}", c.degree()));
                continue;
            }
            for (k, a) in num.iter().enumerate() {
                let (p, q) = c.exact(k).unwrap();
                if p * BigUint::from(*den) != BigUint::from(*a) * q {
                    failures.push(format!("D_{n} coefficient {k}"));
                }
            }
        }
        let grid: Vec<f64> = (0..=20).map(|i| i as f64 / 20.0).collect();
        let mut worst: f64 = 0.0;
        for n in 1..=10_000usize {
            let zero = diversity_poly(order(n), 0.0).unwrap();
            let one = diversity_poly(order(n), 1.0).unwrap();
            worst = worst.max((zero - 1.0).abs()).max(((one - n as f64) / n as f64).abs());
            if n < 10_000 {
                for &x in &grid {
                    let lhs = diversity_poly(order(n + 1), x).unwrap();
                    let rhs = diversity_poly(order(n), x).unwrap() * (1.0 + x / n as f64);
                    worst = worst.max(((lhs - rhs) / rhs).abs());
                }
            }
        }
        if worst > 1e-12 {
            failures.push(format!("identity error {worst:.3e}"));
        }
        (
            failures.is_empty(),
            format!(
                "n <= 4 coefficients exact, worst relative error of D_n(0), D_n(1), recursion {worst:.2e}{}",
                if failures.is_empty() { String::new() } else { format!("; failures: {failures:?}") }
            ),
        )
    });
}

#[test]
fn criterion_02_bounds_suite() {
    run_criterion(2, "bounds suite", 5.0, || {
        let mut violations = 0usize;
        let mut checks = 0usize;
        for n in 2..=1000usize {
            for i in 1..=99 {
                let x = i as f64 / 100.0;
                let d = diversity_poly(order(n), x).unwrap();
                let lower = (n as f64).powf(x);
                let upper = lower / log_gamma(1.0 + x).unwrap().exp();
                let chord = 1.0 + (n as f64 - 1.0) * x;
                checks += 3;
                violations += usize::from(!(lower < d)) + usize::from(!(d <= upper)) + usize::from(!(d <= chord));
            }
        }
        (violations == 0, format!("{violations} violations in {checks} checks"))
    });
}

#[test]
fn criterion_03_joint_success_by_simulation() {
    run_criterion(3, "joint success by simulation", 120.0, || {
        let mut worst: f64 = 0.0;
        let mut detail = Vec::new();
        for (c, d, t) in [(0.25, 0.5, 1.0), (1.0, 2.0 / 3.0, 1.0), (0.5, 1.0 / 3.0, 2.0)] {
            let p = NormalizedParams::new(c, d).unwrap();
            let cfg = SimConfig::new(p.to_model(), 8, vec![t])
                .with_realizations(100_000)
                .with_bias_budget(1e-4);
            let s = ConditionedSamples::generate(&cfg, &[th(t)]).unwrap();
            for n in [1, 2, 4, 8] {
                let want = (-c * t.powf(d) * diversity_poly(order(n), d).unwrap()).exp();
                let z = s.joint_success(0, n).z_score(want);
                worst = worst.max(z.abs());
                detail.push(format!("{z:+.2}"));
            }
        }
        (worst <= 4.0, format!("max |z| = {worst:.2} over 12 cases, z = [{}]", detail.join(", ")))
    });
}

#[test]
fn criterion_04_correlation_by_simulation() {
    run_criterion(4, "indicator correlation by simulation", 180.0, || {
        let mut worst: f64 = 0.0;
        let mut monotone = true;
        let mut detail = Vec::new();
        for c in [0.1, 1.0, 10.0] {
            let mut prev = f64::INFINITY;
            for d in [0.25, 0.5, 0.75] {
                let p = NormalizedParams::new(c, d).unwrap();
                // at Δ = 10 the success probability is e^-10 and a few
                // realizations carry the estimate, so more are drawn
                let realizations = if c > 5.0 { 400_000 } else { 100_000 };
                let cfg = SimConfig::new(p.to_model(), 2, vec![1.0]).with_realizations(realizations);
                let e = ConditionedSamples::generate(&cfg, &[th(1.0)])
                    .unwrap()
                    .indicator_correlation(0)
                    .unwrap();
                // closed form from the one- and two-antenna probabilities
                let p1 = (-c).exp();
                let p2 = (-c * (1.0 + d)).exp();
                let want = (p2 - p1 * p1) / (p1 * (1.0 - p1));
                let z = e.z_score(want);
                worst = worst.max(z.abs());
                monotone &= e.mean < prev;
                prev = e.mean;
                detail.push(format!("{z:+.2}"));
            }
        }
        (
            worst <= 4.0 && monotone,
            format!(
                "max |z| = {worst:.2} over 9 cases, estimates decreasing in delta: {monotone}, z = [{}]",
                detail.join(", ")
            ),
        )
    });
}

#[test]
fn criterion_05_selection_combining_dual_oracle() {
    run_criterion(5, "selection combining dual oracle", 120.0, || {
        let p = NormalizedParams::new(0.5, 0.5).unwrap();
        let exact = 2.0 * (-0.5f64).exp() - (-0.75f64).exp();
        let p2 = analytic::selection_combining_prob(&p, order(2), th(1.0)).unwrap();
        let exact_ok = (p2 - exact).abs() <= 1e-12;
        let cfg = SimConfig::new(p.to_model(), 1, vec![1.0]);
        let s = ConditionedSamples::generate(&cfg, &[th(1.0)]).unwrap();
        let mut worst: f64 = 0.0;
        let mut detail = Vec::new();
        for n in [1, 2, 8, 64] {
            let want = analytic::selection_combining_prob(&p, order(n), th(1.0)).unwrap();
            let z = s.selection_combining(0, n).z_score(want);
            worst = worst.max(z.abs());
            detail.push(format!("n={n}: {z:+.2}"));
        }
        (
            exact_ok && worst <= 4.0,
            format!(
                "|p_2 - (2e^-1/2 - e^-3/4)| = {:.1e}, max |z| = {worst:.2} [{}]",
                (p2 - exact).abs(),
                detail.join(", ")
            ),
        )
    });
}

#[test]
fn criterion_06_two_antenna_joint_law() {
    run_criterion(6, "two-antenna joint law", 60.0, || {
        let mut failures = Vec::new();
        for (c, d) in [(0.25, 0.5), (1.0, 0.5), (0.7, 0.2), (2.0, 0.9)] {
            let p = NormalizedParams::new(c, d).unwrap();
            for t in [0.1, 1.0, 3.0] {
                let diag = analytic::joint_two_antenna_success(&p, th(t), th(t));
                let p2 = (-c * t.powf(d) * (1.0 + d)).exp();
                if ((diag - p2) / p2).abs() > 1e-12 {
                    failures.push(format!("diagonal at ({c}, {d}, {t})"));
                }
                let near = analytic::joint_two_antenna_success(&p, th(t), th(t * (1.0 + 1e-7)));
                if ((near - p2) / p2).abs() > 1e-6 {
                    failures.push(format!("near-diagonal at ({c}, {d}, {t})"));
                }
                let reduced = analytic::joint_two_antenna_success(&p, th(t), th(0.0));
                if (reduced - (-c * t.powf(d)).exp()).abs() > 1e-14 {
                    failures.push(format!("theta2 = 0 at ({c}, {d}, {t})"));
                }
                let a = analytic::joint_two_antenna_success(&p, th(t), th(2.5 * t));
                let b = analytic::joint_two_antenna_success(&p, th(2.5 * t), th(t));
                if a != b {
                    failures.push(format!("symmetry at ({c}, {d}, {t})"));
                }
            }
        }
        let p = NormalizedParams::new(1.0, 0.5).unwrap();
        let want = (-(2f64.powf(1.5) - 1.0) / (2.0 - 1.0)).exp();
        let cfg = SimConfig::new(p.to_model(), 2, vec![2.0, 1.0]);
        let e = ConditionedSamples::generate(&cfg, &[th(2.0), th(1.0)]).unwrap().two_antenna(0, 1);
        let z = e.z_score(want);
        (
            failures.is_empty() && z.abs() <= 4.0,
            format!(
                "identities hold: {}, simulated {:.6} vs {want:.6}, z = {z:+.2}",
                failures.is_empty(),
                e.mean
            ),
        )
    });
}

#[test]
fn criterion_07_diversity_loss_divergence() {
    run_criterion(7, "diversity loss divergence", 1.0, || {
        let mut worst: f64 = 0.0;
        let mut increasing = true;
        for d in [0.25, 0.5, 0.75] {
            let n: f64 = 1e6;
            let l = analytic::diversity_loss(order(1_000_000), d).unwrap();
            let ratio = l / n.powf(1.0 - d);
            let target = log_gamma(1.0 + d).unwrap().exp();
            worst = worst.max(((ratio - target) / target).abs());
            let mut prev = 1.0;
            for k in 1..=6 {
                let lk = analytic::diversity_loss(order(10usize.pow(k)), d).unwrap();
                increasing &= lk > prev;
                prev = lk;
            }
        }
        (
            worst < 0.01 && increasing,
            format!("max relative gap of L(n)/n^(1-delta) to Gamma(1+delta) at n = 1e6: {worst:.2e}, L increasing over decades: {increasing}"),
        )
    });
}

#[test]
fn criterion_08_selection_combining_tail() {
    run_criterion(8, "selection combining tail property", 30.0, || {
        let load: f64 = 0.5;
        let p = NormalizedParams::new(load, 0.5).unwrap();
        let curve = analytic::selection_combining_curve(&p, order(256), th(1.0)).unwrap();
        let increasing = curve.windows(2).all(|w| w[1] > w[0]);
        let miss = -(-load).exp_m1();
        let mut above = true;
        for (i, pn) in curve.iter().enumerate().skip(1) {
            let n = (i + 1) as i32;
            above &= 1.0 - pn >= miss.powi(n);
        }
        (
            increasing && above,
            format!(
                "strictly increasing on 1..256: {increasing}, 1 - p_n >= (1 - e^-1/2)^n for n >= 2: {above}, 1 - p_256 = {:.4e} vs {:.4e}",
                1.0 - curve[255],
                miss.powi(256)
            ),
        )
    });
}

fn column(t: &sirdiv::cli::CurveTable, label: &str) -> Vec<f64> {
    t.column(label).unwrap_or_else(|| panic!("missing column {label}"))
}

/// Product form of D_n, kept separate from the library evaluation.
fn d_product(n: usize, x: f64) -> f64 {
    (1..n).map(|i| 1.0 + x / i as f64).product()
}

/// Alternating sum of p_n in double precision; adequate for n ≤ 16.
fn selection_f64(load: f64, d: f64, n: usize) -> f64 {
    let mut s = 0.0;
    let mut binom = 1.0;
    for k in 1..=n {
        binom = binom * (n + 1 - k) as f64 / k as f64;
        let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
        s += sign * binom * (-load * d_product(k, d)).exp();
    }
    s
}

#[test]
fn criterion_09_figure_reproduction() {
    run_criterion(9, "figure reproduction", 60.0, || {
        let mut worst: f64 = 0.0;
        let mut failures = Vec::new();
        let mut check = |what: &str, got: f64, want: f64| {
            let err = (got - want).abs();
            worst = worst.max(err);
            if !(err <= 1e-10) {
                failures.push(format!("{what}: {got} vs {want}"));
            }
        };
        let param = |fig: u8, key: &str| -> String {
            default_params(fig).unwrap().into_iter().find(|(k, _)| *k == key).unwrap().1.to_string()
        };
        let locked = param(1, "n_values") == "1,2,4,8"
            && param(2, "Delta") == "0.25"
            && param(2, "delta") == "0.5"
            && param(2, "n_max") == "25"
            && param(3, "theta") == "1"
            && param(3, "Delta_values") == "0.1,1,10"
            && param(4, "n_values") == "2,4,16"
            && param(4, "alpha_max") == "8"
            && param(5, "load") == "0.5"
            && param(5, "delta") == "0.5";

        let fig = |n: u8| cmd_fig(&FigOptions::new(n)).unwrap().0;

        let t1 = fig(1);
        let xs = t1.xs();
        for n in [1usize, 2, 4, 8] {
            let (dn, lo, hi) = (
                column(&t1, &format!("D_{n}")),
                column(&t1, &format!("lower_{n}")),
                column(&t1, &format!("upper_{n}")),
            );
            for (i, &x) in xs.iter().enumerate().step_by(10) {
                let g = log_gamma(1.0 + x).unwrap().exp();
                check("fig1 D_n", dn[i], d_product(n, x));
                check("fig1 lower", lo[i], (n as f64).powf(x));
                check("fig1 upper", hi[i], (n as f64).powf(x) / g);
            }
        }

        let t2 = fig(2);
        let (pn, lo, hi, ind) = (column(&t2, "P_n"), column(&t2, "lower"), column(&t2, "upper"), column(&t2, "independent"));
        let g = log_gamma(1.5).unwrap().exp();
        for n in 1..=25usize {
            let nf = n as f64;
            check("fig2 P_n", pn[n - 1], (-0.25 * d_product(n, 0.5)).exp());
            check("fig2 lower", lo[n - 1], (-0.25 * nf.sqrt() / g).exp());
            check("fig2 upper", hi[n - 1], (-0.25 * nf.sqrt()).exp());
            check("fig2 independent", ind[n - 1], (-0.25 * nf).exp());
        }

        let t3 = fig(3);
        let deltas = t3.xs();
        for (label, c) in [("zeta_Delta0.1", 0.1f64), ("zeta_Delta1", 1.0), ("zeta_Delta10", 10.0)] {
            let z = column(&t3, label);
            for (i, &d) in deltas.iter().enumerate().step_by(7) {
                let p1 = (-c).exp();
                let p2 = (-c * (1.0 + d)).exp();
                check("fig3 zeta", z[i], (p2 - p1 * p1) / (p1 * (1.0 - p1)));
            }
        }

        let t4 = fig(4);
        let alphas = t4.xs();
        let contention = column(&t4, "Delta");
        let mut sign_changes = 0;
        for (i, &a) in alphas.iter().enumerate() {
            let d = 2.0 / a;
            let c = std::f64::consts::PI * d / (std::f64::consts::PI * d).sin() / 3.0;
            check("fig4 Delta", contention[i], c);
            for n in [2usize, 4, 16] {
                let out = column(&t4, &format!("outage_n{n}"))[i];
                let indep = column(&t4, &format!("outage_indep_n{n}"))[i];
                check("fig4 outage", out, 1.0 - selection_f64(c, d, n));
                check("fig4 independent outage", indep, (1.0 - (-c).exp()).powi(n as i32));
            }
        }
        let at4 = alphas.iter().position(|a| (a - 4.0).abs() < 1e-12);
        if let Some(i) = at4 {
            check("fig4 Delta at alpha = 4", contention[i], std::f64::consts::PI / 6.0);
        }
        let o16 = column(&t4, "outage_n16");
        let diffs: Vec<f64> = o16.windows(2).map(|w| w[1] - w[0]).collect();
        for w in diffs.windows(2) {
            if w[0] * w[1] < 0.0 {
                sign_changes += 1;
            }
        }

        let t5 = fig(5);
        let p5 = column(&t5, "p_n");
        let ind5 = column(&t5, "p_indep_n");
        let log_n = column(&t5, "log10_n");
        for n in 1..=16usize {
            check("fig5 p_n", p5[n - 1], selection_f64(0.5, 0.5, n));
        }
        // 400-digit references for the range where double precision cancels
        for (n, want) in [
            (64, 0.95076355266006071457),
            (100, 0.95946864364659111294),
            (128, 0.96359495394409327919),
        ] {
            check("fig5 p_n large n", p5[n - 1], want);
        }
        for n in 1..=128usize {
            check("fig5 independent", ind5[n - 1], 1.0 - (1.0 - (-0.5f64).exp()).powi(n as i32));
            check("fig5 log10 n", log_n[n - 1], (n as f64).log10());
        }

        (
            failures.is_empty() && locked && sign_changes >= 1,
            format!(
                "max spot deviation {worst:.2e}, caption parameters locked: {locked}, n=16 outage derivative sign changes: {sign_changes}{}",
                if failures.is_empty() { String::new() } else { format!("; failures: {:?}", &failures[..failures.len().min(5)]) }
            ),
        )
    });
}

#[test]
fn criterion_10_determinism() {
    run_criterion(10, "compare determinism", 120.0, || {
        let dir = tempfile::tempdir().unwrap();
        let config = dir.path().join("scenario.txt");
        std::fs::write(
            &config,
            "Delta = 0.25\ndelta = 0.5\ntheta = 1\nn = 1, 2, 4\n\
             quantities = joint_success, selection_combining, indicator_correlation, two_antenna_joint, first_success_tail\n\
             realizations = 100000\nseed = 42\n",
        )
        .unwrap();
        let config = config.to_str().unwrap().to_string();
        let mut outputs = Vec::new();
        let mut codes = Vec::new();
        for workers in ["1", "8", "1", "8"] {
            let mut out = Vec::new();
            let mut err = Vec::new();
            let code = run_with_output(
                ["sirdiv", "compare", "--config", &config, "--workers", workers],
                &mut out,
                &mut err,
            );
            codes.push(code);
            outputs.push(out);
        }
        let identical = outputs.iter().all(|o| *o == outputs[0]) && !outputs[0].is_empty();
        (
            identical && codes.iter().all(|c| *c == 0),
            format!(
                "4 runs (workers 1, 8, 1, 8) byte-identical: {identical}, {} bytes, exit codes {codes:?}",
                outputs[0].len()
            ),
        )
    });
}
