//! Special functions against values computed independently in 50-digit
//! arithmetic (tests/reference/gen_reference.py).

#![allow(clippy::approx_constant)]

use num_bigint::BigUint;
use sirdiv::analytic::{self, NormalizedParams, Threshold};
use sirdiv::specfun::{
    beta, diversity_poly, diversity_poly_coefficients, log_gamma, DiversityOrder,
};

fn order(n: usize) -> DiversityOrder {
    DiversityOrder::new(n).unwrap()
}

fn rel(a: f64, b: f64) -> f64 {
    if b == 0.0 {
        a.abs()
    } else {
        ((a - b) / b).abs()
    }
}

const LN_GAMMA: &[(f64, f64)] = &[
    (0.1, 2.252712651734205902),
    (0.25, 1.2880225246980774574),
    (0.5, 0.57236494292470008707),
    (0.75, 0.20328095143129537148),
    (0.9, 0.066376239734742954426),
    (0.99, 0.0058548067647097814532),
    (0.999, 0.00057803853289138023817),
    (0.9999, 0.000057729791561193862808),
    (1.0001, -0.000057713342220471268005),
    (1.001, -0.00057639359828330615152),
    (1.01, -0.0056903079460696505037),
    (1.1, -0.049872441259839761785),
    (1.25, -0.098271836421813161464),
    (1.4616321449683622, -0.1214862905358496081),
    (1.5, -0.12078223763524522235),
    (1.75, -0.084401121020485555958),
    (1.9, -0.038984275923083361674),
    (1.99, -0.0041955290887916687019),
    (1.999, -0.00042246180069210728418),
    (1.9999, -0.000042275208772153458011),
    (2.0001, 0.000042281658112919946317),
    (2.001, 0.00042310673480011699119),
    (2.01, 0.0042600229070983458338),
    (2.1, 0.045437738544485179002),
    (2.5, 0.28468287047291915963),
    (3.0, 0.69314718055994530942),
    (3.7, 1.4280723266653881292),
    (5.0, 3.1780538303479456196),
    (8.5, 9.5492672573009977117),
    (10.0, 12.801827480081469611),
    (17.3, 31.515624178175291864),
    (33.0, 81.557959456115037179),
    (64.5, 203.08680483582812261),
    (100.0, 359.13420536957539878),
    (150.25, 601.26150403249972598),
    (200.0, 857.93366982585743682),
];

#[test]
fn log_gamma_table() {
    for &(x, want) in LN_GAMMA {
        let got = log_gamma(x).unwrap();
        assert!(rel(got, want) <= 1e-13, "lnΓ({x}) = {got}, want {want}");
    }
    assert_eq!(log_gamma(1.0).unwrap(), 0.0);
    assert_eq!(log_gamma(2.0).unwrap(), 0.0);
    assert!(log_gamma(0.0).is_err());
    assert!(log_gamma(-1.5).is_err());
}

#[test]
fn beta_table() {
    let table = [
        (2.0, 0.5, 1.3333333333333333333),
        (5.0, 0.3, 1.8855428359978411596),
        (0.7, 0.2, 5.5764636958498753122),
        (12.5, 0.5, 0.50636271379952197817),
        (1000.0, 0.25, 0.64479519661371181283),
        (30.0, 40.0, 1.053942460379654569e-21),
    ];
    for (a, b, want) in table {
        let got = beta(a, b).unwrap();
        assert!(rel(got, want) <= 1e-12, "B({a}, {b}) = {got}, want {want}");
    }
}

#[test]
fn diversity_poly_large_n() {
    let table = [
        (65, 0.01, 1.0484971314258700303),
        (65, 0.3, 3.8918085112179441034),
        (65, 0.5, 9.0798058899319519981),
        (65, 0.9, 44.488998490312284524),
        (65, 1.0, 65.0),
        (100, 0.01, 1.0530518044654778013),
        (100, 0.3, 4.4312210094938027697),
        (100, 0.5, 11.269695801851284449),
        (100, 0.9, 65.574574959099443938),
        (100, 1.0, 100.0),
        (1000, 0.01, 1.0776286255455006829),
        (1000, 0.3, 8.8498135075640716464),
        (1000, 0.5, 35.67802229170864146),
        (1000, 0.9, 521.08805188328721963),
        (1000, 1.0, 1000.0),
        (10000, 0.01, 1.102734734356782689),
        (10000, 0.3, 17.659368239898026826),
        (10000, 0.5, 112.8365062444084012),
        (10000, 0.9, 4139.3171382437148485),
        (10000, 1.0, 10000.0),
        (1000000, 0.01, 1.1547055871449814326),
        (1000000, 0.3, 70.303942048080654591),
        (1000000, 0.5, 1128.3790260481255024),
        (1000000, 0.9, 261174.41846453424717),
        (1000000, 1.0, 1000000.0),
    ];
    for (n, x, want) in table {
        let got = diversity_poly(order(n), x).unwrap();
        assert!(rel(got, want) <= 1e-11, "D_{n}({x}) = {got}, want {want}");
    }
}

#[test]
fn d8_at_one_half_is_exact() {
    assert_eq!(diversity_poly(order(8), 0.5).unwrap(), 6435.0 / 2048.0);
    let c = diversity_poly_coefficients(order(8)).unwrap();
    let exact = c.evaluate_scaled_integer(1);
    // D_8(1) = 8 scaled by the common denominator
    assert_eq!(exact, (c.denominator() * BigUint::from(8u32)).into());
}

#[test]
fn selection_combining_reference() {
    let table = [
        (1, 0.6065306597126334236),
        (2, 0.74069476668425214007),
        (3, 0.79409794759165514262),
        (8, 0.87467272937096732635),
        (16, 0.90903771507801185142),
        (64, 0.95076355266006071457),
        (100, 0.95946864364659111294),
        (128, 0.96359495394409327919),
        (256, 0.97305744723196267305),
    ];
    let p = NormalizedParams::new(0.5, 0.5).unwrap();
    let theta = Threshold::new(1.0).unwrap();
    for (n, want) in table {
        let got = analytic::selection_combining_prob(&p, order(n), theta).unwrap();
        assert!((got - want).abs() <= 1e-13, "p_{n} = {got}, want {want}");
    }
}

#[test]
fn correlation_and_loss_reference() {
    let p = NormalizedParams::new(1.0, 0.5).unwrap();
    let zeta = analytic::indicator_correlation(&p, Threshold::new(1.0).unwrap());
    assert!((zeta - 0.37754066879814543536).abs() <= 1e-14);
    let loss = analytic::diversity_loss(order(1000), 0.5).unwrap();
    assert!(rel(loss, 28.028459420308003069) <= 1e-12);
    let big = analytic::diversity_loss(order(1_000_000), 0.5).unwrap() / 1000.0;
    assert!(rel(big, 0.88622703623113061889) <= 1e-10);
}
