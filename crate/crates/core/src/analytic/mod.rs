//! Binary entropy, the threshold constants, and rigorous enclosures.
//!
//! `h(p) = −p·log2 p − (1−p)·log2(1−p)` with `h(0) = h(1) = 0`.

mod certificate;

pub use certificate::{
    replay_certificate, verify, verify_gilmer_refinement, verify_key_lemma, Piece, PieceKind,
    ProofCertificate, ReplayReport, Status, Target,
};

use crate::error::{Error, Result};
use crate::interval::Interval;

/// Golden ratio `(√5 + 1)/2`.
pub const PHI: f64 = 1.618_033_988_749_895;
/// `(3 − √5)/2 = 1/φ²`, the root of `(1 − x)² = x` in `[0, 1]`.
pub const PSI: f64 = 0.381_966_011_250_105_1;

pub fn phi_interval() -> Interval {
    (Interval::sqrt5() + 1.0) / 2.0
}

pub fn psi_interval() -> Interval {
    (3.0 - Interval::sqrt5()) / 2.0
}

/// `1/φ = (√5 − 1)/2`.
pub fn inv_phi_interval() -> Interval {
    (Interval::sqrt5() - 1.0) / 2.0
}

/// Scalar binary entropy in bits.
pub fn h(p: f64) -> f64 {
    if p <= 0.0 || p >= 1.0 {
        return 0.0;
    }
    -(p * p.log2() + (1.0 - p) * (1.0 - p).log2())
}

fn clamp01(x: Interval) -> Interval {
    x.meet(Interval::new(0.0, 1.0))
        .expect("enclosure of a quantity in [0, 1] meets [0, 1]")
}

/// Enclosure of `h` at a single float in `[0, 1]`.
fn h_at(x: f64) -> Interval {
    if x <= 0.0 || x >= 1.0 {
        return Interval::point(0.0);
    }
    let p = Interval::point(x);
    let q = 1.0 - p;
    clamp01(-(p * p.log2() + q * q.log2()))
}

/// Enclosure of `h` over `x ⊆ [0, 1]`, from monotonicity on `[0, 1/2]` and `[1/2, 1]`.
pub fn h_interval(x: Interval) -> Result<Interval> {
    if x.lo() < 0.0 || x.hi() > 1.0 {
        return Err(Error::domain(format!("h is defined on [0, 1], got {x}")));
    }
    Ok(h_enclosure(x))
}

pub(crate) fn h_enclosure(x: Interval) -> Interval {
    let (a, b) = (x.lo(), x.hi());
    if b <= 0.5 {
        Interval::new(h_at(a).lo(), h_at(b).hi())
    } else if a >= 0.5 {
        Interval::new(h_at(b).lo(), h_at(a).hi())
    } else {
        Interval::new(h_at(a).lo().min(h_at(b).lo()), 1.0)
    }
}

/// `h'(t) = log2((1 − t)/t)` at a float `t ∈ (0, 1)`.
fn dh_at(t: f64) -> Interval {
    let p = Interval::point(t);
    (1.0 - p).log2() - p.log2()
}

/// `h'` over `t ⊆ (0, 1)`; `h'` is decreasing.
pub(crate) fn dh_enclosure(t: Interval) -> Interval {
    assert!(t.lo() > 0.0 && t.hi() < 1.0, "h' needs t inside (0, 1), got {t}");
    Interval::new(dh_at(t.hi()).lo(), dh_at(t.lo()).hi())
}

/// `x²` for `x ⊆ [0, 1]`.
pub(crate) fn square01(x: Interval) -> Interval {
    clamp01(x.sqr())
}

/// `2p − p² = 1 − (1 − p)²` for `p ⊆ [0, 1]`, increasing in `p`.
pub(crate) fn or_probability(p: Interval) -> Interval {
    let at = |v: f64| 1.0 - (1.0 - Interval::point(v)).sqr();
    clamp01(Interval::new(at(p.lo()).lo(), at(p.hi()).hi()))
}

/// The unique root of `(1 − x)^k = x` in `[0, 1]`, by bisection to within `tolerance`.
pub fn psi_k(k: u32, tolerance: f64) -> Result<f64> {
    if k == 0 {
        return Err(Error::domain("k must be at least 1"));
    }
    if !(tolerance > 0.0) {
        return Err(Error::domain(format!("tolerance {tolerance} must be positive")));
    }
    let g = |x: f64| (1.0 - x).powi(k as i32) - x;
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    while hi - lo > tolerance {
        let mid = lo + (hi - lo) / 2.0;
        if mid <= lo || mid >= hi {
            break;
        }
        let v = g(mid);
        if v == 0.0 {
            return Ok(mid);
        }
        if v > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(lo + (hi - lo) / 2.0)
}

/// `(k, ψ_k)` for `k = 1..=k_max`.
pub fn psi_table(k_max: u32, tolerance: f64) -> Result<Vec<(u32, f64)>> {
    (1..=k_max).map(|k| Ok((k, psi_k(k, tolerance)?))).collect()
}

/// `f(x, y) = h(xy) / (h(x)·y + h(y)·x)` on `(0, 1)²`.
pub fn two_variate(x: f64, y: f64) -> f64 {
    h(x * y) / (h(x) * y + h(y) * x)
}

/// Result of the floating-point exploration of [`two_variate`].
///
/// This is numerical evidence only; nothing here is an enclosure.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TwoVariateScan {
    pub resolution: usize,
    pub grid_min: f64,
    pub grid_argmin: (f64, f64),
    pub min_value: f64,
    pub argmin: (f64, f64),
    /// `φ/2`, the value on the diagonal at `x = y = 1/φ`.
    pub reference: f64,
    pub rigorous: bool,
}

/// Grid scan of [`two_variate`] at points `i/resolution`, then compass-search refinement.
pub fn two_variate_scan(resolution: usize) -> Result<TwoVariateScan> {
    if resolution < 100 {
        return Err(Error::domain("grid resolution must be at least 100"));
    }
    use rayon::prelude::*;
    let step = 1.0 / resolution as f64;
    let (grid_min, gx, gy) = (1..resolution)
        .into_par_iter()
        .map(|i| {
            let x = i as f64 * step;
            (1..resolution)
                .map(|j| {
                    let y = j as f64 * step;
                    (two_variate(x, y), x, y)
                })
                .fold((f64::INFINITY, 0.0, 0.0), |a, b| if b.0 < a.0 { b } else { a })
        })
        .reduce(
            || (f64::INFINITY, 0.0, 0.0),
            // ties resolved toward the smaller point so the result is order independent
            |a, b| {
                if b.0 < a.0 || (b.0 == a.0 && (b.1, b.2) < (a.1, a.2)) {
                    b
                } else {
                    a
                }
            },
        );
    let (mut best, mut x, mut y) = (grid_min, gx, gy);
    let mut s = step;
    while s > 1e-14 {
        let mut moved = false;
        for (dx, dy) in [(1.0, 0.0), (-1.0, 0.0), (0.0, 1.0), (0.0, -1.0), (1.0, 1.0), (-1.0, -1.0), (1.0, -1.0), (-1.0, 1.0)] {
            let (nx, ny) = (x + dx * s, y + dy * s);
            if nx <= 0.0 || nx >= 1.0 || ny <= 0.0 || ny >= 1.0 {
                continue;
            }
            let v = two_variate(nx, ny);
            if v < best {
                (best, x, y) = (v, nx, ny);
                moved = true;
            }
        }
        if !moved {
            s /= 2.0;
        }
    }
    Ok(TwoVariateScan {
        resolution,
        grid_min,
        grid_argmin: (gx, gy),
        min_value: best,
        argmin: (x, y),
        reference: PHI / 2.0,
        rigorous: false,
    })
}
