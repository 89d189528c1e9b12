use astro_float::{BigFloat, Consts, RoundingMode};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use uclab::analytic::{
    h, h_interval, psi_interval, psi_k, psi_table, replay_certificate, two_variate_scan,
    verify_gilmer_refinement, verify_key_lemma, PieceKind, Status, PHI, PSI,
};
use uclab::interval::Interval;

const PREC: usize = 192;
const RM: RoundingMode = RoundingMode::ToEven;

/// `h(x)` to about 190 bits.
fn h_big(x: f64, cc: &mut Consts) -> BigFloat {
    let zero = BigFloat::from_f64(0.0, PREC);
    if x <= 0.0 || x >= 1.0 {
        return zero;
    }
    let p = BigFloat::from_f64(x, PREC);
    let q = BigFloat::from_f64(1.0, PREC).sub(&p, PREC, RM);
    let a = p.mul(&p.log2(PREC, RM, cc), PREC, RM);
    let b = q.mul(&q.log2(PREC, RM, cc), PREC, RM);
    a.add(&b, PREC, RM).neg()
}

fn random_point(rng: &mut StdRng) -> f64 {
    match rng.gen_range(0..20) {
        0 => 0.0,
        1 => 1.0,
        2 => 0.5,
        3 => 10f64.powf(-rng.gen_range(1.0..300.0)),
        4 => 1.0 - 10f64.powf(-rng.gen_range(1.0..16.0)),
        _ => rng.gen::<f64>(),
    }
}

#[test]
fn h_interval_encloses_high_precision_value() {
    let mut rng = StdRng::seed_from_u64(0x5eed);
    let mut cc = Consts::new().unwrap();
    for _ in 0..100_000 {
        let x = random_point(&mut rng);
        let below = 10f64.powf(-rng.gen_range(0.0..17.0)) * rng.gen::<f64>();
        let above = 10f64.powf(-rng.gen_range(0.0..17.0)) * rng.gen::<f64>();
        let lo = (x - below).max(0.0);
        let hi = (x + above).min(1.0);
        let enc = h_interval(Interval::new(lo.min(x), hi.max(x))).unwrap();
        let exact = h_big(x, &mut cc);
        assert!(
            BigFloat::from_f64(enc.lo(), PREC) <= exact && exact <= BigFloat::from_f64(enc.hi(), PREC),
            "h({x:e}) escapes {enc}"
        );
    }
}

#[test]
fn point_enclosures_are_tight() {
    let mut cc = Consts::new().unwrap();
    for &x in &[0.2, 0.3, 0.36, 0.0625, 0.25, 1e-100, 0.999] {
        let enc = h_interval(Interval::point(x)).unwrap();
        // relative width for moderate x, absolute near the ends where 1 − x is rounded
        assert!(enc.width() <= 1e-14 * enc.hi() || enc.width() <= 1e-15, "{x}: {enc}");
        let exact = h_big(x, &mut cc);
        assert!(BigFloat::from_f64(enc.lo(), PREC) <= exact);
    }
}

#[test]
fn frozen_scalar_values() {
    // 40-digit oracle values
    for (x, v) in [
        (0.2, 0.7219280948873624),
        (0.3, 0.8812908992306926),
        (0.36, 0.9426831892554922),
        (0.0625, 0.3372900666170139),
        (0.25, 0.8112781244591329),
    ] {
        assert!((h(x) - v).abs() < 2e-16, "h({x})");
    }
    let f = |x: f64| h(x * x) - PHI * x * h(x);
    assert!(f(0.25) > 0.0 && (f(0.25) - 0.009121171690977785).abs() < 1e-15);
    let g = |p: f64| h(2.0 * p - p * p) - h(p);
    assert!(g(0.2) > 0.0 && (g(0.2) - 0.2207550943681299).abs() < 1e-15);
    assert!(f(1.0 / PHI).abs() < 1e-12);
    assert!(g(PSI).abs() < 1e-12);
}

#[test]
fn certificates_tile_their_domains() {
    for cert in [verify_key_lemma(1e-9).unwrap(), verify_gilmer_refinement(1e-9).unwrap()] {
        assert_eq!(cert.status, Status::Proved);
        assert_eq!(cert.pieces.first().unwrap().lo, cert.domain.lo());
        assert_eq!(cert.pieces.last().unwrap().hi, cert.domain.hi());
        for w in cert.pieces.windows(2) {
            assert_eq!(w[0].hi, w[1].lo);
            assert!(w[0].lo < w[0].hi);
        }
        for p in &cert.pieces {
            match p.kind {
                PieceKind::Direct => assert!(p.lower_bound >= 0.0),
                _ => assert!(p.lower_bound > 0.0),
            }
        }
        assert!(replay_certificate(&cert.to_text()).unwrap().ok());
    }
}

#[test]
fn certificate_is_deterministic() {
    let a = verify_key_lemma(1e-9).unwrap().to_text();
    let b = verify_key_lemma(1e-9).unwrap().to_text();
    assert_eq!(a, b);
}

#[test]
fn refinement_domain_ends_at_psi() {
    let cert = verify_gilmer_refinement(1e-9).unwrap();
    assert!(cert.domain.hi() >= psi_interval().lo());
    assert!((cert.domain.hi() - 0.3819660113).abs() < 1e-9);
}

#[test]
fn psi_family() {
    let t = psi_table(10, 1e-13).unwrap();
    assert_eq!(t[0].1, 0.5);
    assert!((t[1].1 - (3.0 - 5f64.sqrt()) / 2.0).abs() < 1e-12);
    for w in t.windows(2) {
        assert!(w[1].1 < w[0].1);
    }
    // 40-digit oracle
    let frozen = [
        0.3176721961719807,
        0.2755080409994844,
        0.2451223337533072,
        0.2219104013213989,
        0.2034556458715429,
        0.1883476799721974,
        0.1756994367703130,
        0.1649209572764410,
    ];
    for (k, v) in (3..=10).zip(frozen) {
        let r = psi_k(k, 1e-13).unwrap();
        assert!((r - v).abs() < 1e-12, "k = {k}");
        assert!(((1.0 - r).powi(k as i32) - r).abs() < 1e-12);
    }
}

#[test]
fn scan_is_labelled_and_finds_the_diagonal_minimum() {
    let s = two_variate_scan(400).unwrap();
    assert!(!s.rigorous);
    assert!((s.min_value - s.reference).abs() < 1e-9);
    assert!((s.reference - 0.8090169943749474).abs() < 1e-15);
}
