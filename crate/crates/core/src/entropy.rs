//! Exact subset distributions and their Shannon entropy.
//!
//! Weights are kept as integer numerators over one common denominator, so
//! the distribution of `A ∪ B` for uniform `A`, `B` on `F` is literally the
//! table of pair counts over `|F|²`. Floating point enters only when the
//! entropy is evaluated, as `log2(D) − (1/D)·Σ c·log2(c)`, and every entropy
//! value carries an explicit bound on its rounding error.

use std::collections::HashMap;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::family::{GroundSet, SetFamily};
use crate::subset::Subset;

/// Upper limit on `|support(D1)|·|support(D2)|` for [`union_distribution`].
pub const MAX_CONVOLUTION_PAIRS: u128 = 100_000_000;

/// Finite distribution over subsets of `[n]` with exact rational weights.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubsetDistribution {
    ground: GroundSet,
    /// Sorted by subset; numerators are positive and sum to `denominator`.
    atoms: Vec<(Subset, BigUint)>,
    denominator: BigUint,
}

impl SubsetDistribution {
    /// Normalizes nonnegative integer masses into a distribution.
    /// Repeated subsets are merged and zero masses dropped.
    pub fn from_counts<I>(ground: GroundSet, counts: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Subset, BigUint)>,
    {
        let n = ground.n();
        let mut merged: HashMap<Subset, BigUint> = HashMap::new();
        for (s, c) in counts {
            if c.is_zero() {
                continue;
            }
            let s = s
                .resized(n)
                .ok_or_else(|| Error::domain(format!("atom {s} is not a subset of [{n}]")))?;
            *merged.entry(s).or_default() += c;
        }
        let denominator: BigUint = merged.values().sum();
        if denominator.is_zero() {
            return Err(Error::domain("a distribution needs positive total mass"));
        }
        let mut atoms: Vec<(Subset, BigUint)> = merged.into_iter().collect();
        atoms.sort_unstable_by(|a, b| a.0.cmp(&b.0));
        Ok(Self::reduced(ground, atoms, denominator))
    }

    /// Builds a distribution from exact weights, which must be nonnegative and sum to 1.
    pub fn from_weights<I>(ground: GroundSet, weights: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Subset, BigRational)>,
    {
        let weights: Vec<(Subset, BigRational)> = weights.into_iter().collect();
        let total: BigRational = weights.iter().map(|(_, w)| w.clone()).sum();
        if total != BigRational::one() {
            return Err(Error::domain(format!("weights sum to {total}, not 1")));
        }
        if weights.iter().any(|(_, w)| w < &BigRational::zero()) {
            return Err(Error::domain("negative weight"));
        }
        let lcm = weights
            .iter()
            .fold(BigInt::one(), |acc, (_, w)| acc.lcm(w.denom()));
        let counts = weights.into_iter().map(|(s, w)| {
            let c = (w.numer() * (&lcm / w.denom()))
                .to_biguint()
                .expect("nonnegative");
            (s, c)
        });
        Self::from_counts(ground, counts)
    }

    /// Every member of `F` with weight `1/|F|`.
    pub fn uniform(f: &SetFamily) -> Self {
        let atoms = f
            .members()
            .iter()
            .map(|s| (s.clone(), BigUint::one()))
            .collect();
        SubsetDistribution {
            ground: f.ground(),
            atoms,
            denominator: BigUint::from(f.len()),
        }
    }

    fn reduced(ground: GroundSet, mut atoms: Vec<(Subset, BigUint)>, mut denominator: BigUint) -> Self {
        let g = atoms
            .iter()
            .fold(denominator.clone(), |g, (_, c)| g.gcd(c));
        if !g.is_one() {
            for (_, c) in &mut atoms {
                *c /= &g;
            }
            denominator /= &g;
        }
        SubsetDistribution {
            ground,
            atoms,
            denominator,
        }
    }

    pub fn ground(&self) -> GroundSet {
        self.ground
    }

    pub fn support_len(&self) -> usize {
        self.atoms.len()
    }

    pub fn support(&self) -> impl Iterator<Item = &Subset> {
        self.atoms.iter().map(|(s, _)| s)
    }

    pub fn denominator(&self) -> &BigUint {
        &self.denominator
    }

    /// `(subset, numerator)` pairs over [`Self::denominator`].
    pub fn numerators(&self) -> impl Iterator<Item = (&Subset, &BigUint)> {
        self.atoms.iter().map(|(s, c)| (s, c))
    }

    pub fn weights(&self) -> impl Iterator<Item = (&Subset, BigRational)> + '_ {
        self.atoms.iter().map(|(s, c)| (s, self.ratio(c)))
    }

    pub fn weight(&self, s: &Subset) -> BigRational {
        match self.atoms.binary_search_by(|(a, _)| a.cmp(s)) {
            Ok(i) => self.ratio(&self.atoms[i].1),
            Err(_) => BigRational::zero(),
        }
    }

    fn ratio(&self, c: &BigUint) -> BigRational {
        BigRational::new(c.clone().into(), self.denominator.clone().into())
    }

    /// `Pr[e ∈ A]`.
    pub fn marginal(&self, e: usize) -> BigRational {
        let mass: BigUint = self
            .atoms
            .iter()
            .filter(|(s, _)| s.contains(e))
            .map(|(_, c)| c)
            .sum();
        self.ratio(&mass)
    }

    /// `max_i Pr[i ∈ A]` over the ground set.
    pub fn max_marginal(&self) -> BigRational {
        let mut mass = vec![BigUint::zero(); self.ground.n()];
        for (s, c) in &self.atoms {
            for e in s.iter() {
                mass[e - 1] += c;
            }
        }
        let best = mass.into_iter().max().unwrap_or_default();
        self.ratio(&best)
    }

    pub fn is_point_mass(&self) -> bool {
        self.atoms.len() == 1
    }
}

/// Exact distribution of `A ∪ B` for independent `A ~ d1`, `B ~ d2`.
pub fn union_distribution(d1: &SubsetDistribution, d2: &SubsetDistribution) -> Result<SubsetDistribution> {
    if d1.ground != d2.ground {
        return Err(Error::domain(format!(
            "ground sets differ: [{}] vs [{}]",
            d1.ground.n(),
            d2.ground.n()
        )));
    }
    let pairs = d1.atoms.len() as u128 * d2.atoms.len() as u128;
    if pairs > MAX_CONVOLUTION_PAIRS {
        return Err(Error::resource(format!(
            "{pairs} atom pairs exceed the convolution guard of {MAX_CONVOLUTION_PAIRS}"
        )));
    }
    let chunk = (4096 / d2.atoms.len().max(1)).max(1);
    let merged = d1
        .atoms
        .par_chunks(chunk)
        .map(|part| {
            let mut acc: HashMap<Subset, BigUint> = HashMap::new();
            for (a, ca) in part {
                for (b, cb) in &d2.atoms {
                    *acc.entry(a.union(b)).or_default() += ca * cb;
                }
            }
            acc
        })
        .reduce(HashMap::new, |mut x, y| {
            for (k, v) in y {
                *x.entry(k).or_default() += v;
            }
            x
        });
    let mut atoms: Vec<(Subset, BigUint)> = merged.into_iter().collect();
    atoms.sort_unstable_by(|a, b| a.0.cmp(&b.0));
    let denominator = &d1.denominator * &d2.denominator;
    Ok(SubsetDistribution::reduced(d1.ground, atoms, denominator))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Provenance {
    ExactRationalWeights,
    Floating,
}

/// An entropy in bits together with a bound on its floating-point error.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EntropyValue {
    pub bits: f64,
    pub error_bound: f64,
    pub provenance: Provenance,
}

/// `log2` of an arbitrarily large integer.
pub(crate) fn log2_big(x: &BigUint) -> f64 {
    let bits = x.bits();
    if bits <= 1000 {
        x.to_f64().expect("finite").log2()
    } else {
        let shift = bits - 64;
        (x >> shift).to_f64().expect("finite").log2() + shift as f64
    }
}

/// Shannon entropy in bits, with `0·log 0 = 0`.
///
/// The error bound covers integer-to-float conversion, `log2` (assumed
/// faithful to within two ulps), the products, the recursive summation and
/// the final division and subtraction.
pub fn shannon_entropy(d: &SubsetDistribution) -> EntropyValue {
    let log_den = log2_big(&d.denominator);
    if d.is_point_mass() {
        return EntropyValue {
            bits: 0.0,
            error_bound: 0.0,
            provenance: Provenance::ExactRationalWeights,
        };
    }
    let den = d.denominator.to_f64().expect("finite");
    let mut sum = 0.0;
    for (_, c) in &d.atoms {
        if c.is_one() {
            continue;
        }
        let cf = c.to_f64().expect("finite");
        sum += cf * log2_big(c);
    }
    let bits = (log_den - sum / den).max(0.0);
    let terms = d.atoms.len() as f64;
    EntropyValue {
        bits,
        error_bound: (terms + 16.0) * f64::EPSILON * log_den.max(1.0),
        provenance: Provenance::ExactRationalWeights,
    }
}

/// Entropy of a floating probability vector (zero entries allowed).
pub fn entropy_of_probabilities(p: &[f64]) -> EntropyValue {
    let bits = -p
        .iter()
        .filter(|&&x| x > 0.0)
        .map(|&x| x * x.log2())
        .sum::<f64>();
    let terms = p.len() as f64;
    EntropyValue {
        bits: bits.max(0.0),
        error_bound: (terms + 4.0) * f64::EPSILON * bits.abs().max(1.0),
        provenance: Provenance::Floating,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Verdict {
    ProvedNotUnionClosed,
    Inconclusive,
}

/// Outcome of the entropy test `H(A ∪ B) > log2|F|` for iid uniform `A`, `B` on `F`.
#[derive(Clone, Debug)]
pub struct CertificateReport {
    pub n: usize,
    pub family_size: usize,
    pub h_a: EntropyValue,
    pub h_aub: EntropyValue,
    pub verdict: Verdict,
    /// Largest element count, over `family_size`.
    pub max_count: usize,
    pub union_distribution: SubsetDistribution,
}

/// JSON shape of a [`CertificateReport`]; entropies keep full precision.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CertificateJson {
    pub n: usize,
    pub family_size: usize,
    pub h_a: f64,
    pub h_aub: f64,
    pub max_fraction_num: usize,
    pub max_fraction_den: usize,
    pub verdict: Verdict,
}

impl CertificateReport {
    pub fn json(&self) -> CertificateJson {
        CertificateJson {
            n: self.n,
            family_size: self.family_size,
            h_a: self.h_a.bits,
            h_aub: self.h_aub.bits,
            max_fraction_num: self.max_count,
            max_fraction_den: self.family_size,
            verdict: self.verdict,
        }
    }

    /// The certified margin `H(A∪B) − H(A)` minus both error bounds.
    pub fn margin(&self) -> f64 {
        self.h_aub.bits - self.h_a.bits - self.h_aub.error_bound - self.h_a.error_bound
    }
}

/// Entropy certificate of non-union-closedness.
///
/// Any random variable supported on `F ∪ F` has entropy at most
/// `log2|F ∪ F|`, so `H(A ∪ B) > log2|F|` forces `|F ∪ F| > |F|`. The verdict
/// is `ProvedNotUnionClosed` only when the gap exceeds the combined rounding
/// bounds, so it never misfires on a union-closed family.
pub fn gilmer_certificate(f: &SetFamily) -> Result<CertificateReport> {
    if f.len() < 2 {
        return Err(Error::domain("the certificate needs |F| ≥ 2"));
    }
    let a = SubsetDistribution::uniform(f);
    let h_a = shannon_entropy(&a);
    let aub = union_distribution(&a, &a)?;
    let h_aub = shannon_entropy(&aub);
    let gap = h_aub.bits - h_a.bits;
    let verdict = if gap > h_a.error_bound + h_aub.error_bound {
        Verdict::ProvedNotUnionClosed
    } else {
        Verdict::Inconclusive
    };
    Ok(CertificateReport {
        n: f.n(),
        family_size: f.len(),
        h_a,
        h_aub,
        verdict,
        max_count: f.frequency_profile().max_count().0,
        union_distribution: aub,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct GilmerRatio {
    /// `H(A ∪ B) / H(A)` for iid `A`, `B`.
    pub ratio: f64,
    pub h_a: EntropyValue,
    pub h_aub: EntropyValue,
    pub max_marginal: BigRational,
}

impl GilmerRatio {
    pub fn max_marginal_f64(&self) -> f64 {
        self.max_marginal.to_f64().expect("finite")
    }

    /// Whether every element has `Pr[i ∈ A] ≤ bound` (exact comparison).
    pub fn sparse(&self, bound: &BigRational) -> bool {
        &self.max_marginal <= bound
    }
}

pub fn gilmer_ratio(d: &SubsetDistribution) -> Result<GilmerRatio> {
    let h_a = shannon_entropy(d);
    if d.is_point_mass() {
        return Err(Error::domain("ratio undefined for a point mass (H(A) = 0)"));
    }
    let h_aub = shannon_entropy(&union_distribution(d, d)?);
    Ok(GilmerRatio {
        ratio: h_aub.bits / h_a.bits,
        h_a,
        h_aub,
        max_marginal: d.max_marginal(),
    })
}

/// Whether `|F ∪ F| ≥ |F|^exponent`.
pub fn power_corollary_check(f: &SetFamily, exponent: f64) -> Result<bool> {
    if f.len() < 2 {
        return Err(Error::domain("needs |F| ≥ 2"));
    }
    if !(exponent > 1.0) || !exponent.is_finite() {
        return Err(Error::domain(format!("exponent {exponent} must exceed 1")));
    }
    let closed = f.union_closure_step().len() as f64;
    Ok(closed >= (f.len() as f64).powf(exponent))
}

/// Exact rational value of a finite float.
pub(crate) fn exact_rational(x: f64) -> Result<BigRational> {
    BigRational::from_float(x).ok_or_else(|| Error::domain(format!("{x} is not finite")))
}

/// Atomwise mixture `(1 − δ)·p + δ·q`.
pub fn mixture(p: &SubsetDistribution, q: &SubsetDistribution, delta: &BigRational) -> Result<SubsetDistribution> {
    if p.ground != q.ground {
        return Err(Error::domain("ground sets differ"));
    }
    if delta < &BigRational::zero() || delta > &BigRational::one() {
        return Err(Error::domain(format!("mixing weight {delta} outside [0, 1]")));
    }
    let keep = BigRational::one() - delta;
    let mut weights: HashMap<Subset, BigRational> = HashMap::new();
    for (s, w) in p.weights() {
        *weights.entry(s.clone()).or_insert_with(BigRational::zero) += &keep * w;
    }
    for (s, w) in q.weights() {
        *weights.entry(s.clone()).or_insert_with(BigRational::zero) += delta * w;
    }
    SubsetDistribution::from_weights(p.ground, weights)
}

/// The distribution `A^δ` with `Pr[A^δ = X] = (1−δ)Pr[A = X] + δ·Pr[A ∪ B = X]`,
/// `A`, `B` iid uniform on `F`. `delta` is taken at its exact binary value.
pub fn perturbed_distribution(f: &SetFamily, delta: f64) -> Result<SubsetDistribution> {
    if !(0.0..=1.0).contains(&delta) {
        return Err(Error::domain(format!("delta {delta} outside [0, 1]")));
    }
    if f.len() < 2 {
        return Err(Error::domain("needs |F| ≥ 2"));
    }
    let a = SubsetDistribution::uniform(f);
    let aub = union_distribution(&a, &a)?;
    mixture(&a, &aub, &exact_rational(delta)?)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GainRow {
    pub delta: f64,
    pub entropy: f64,
    /// `H(A^δ) − H(A)`.
    pub gain: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct GainScan {
    pub h_a: f64,
    pub rows: Vec<GainRow>,
}

impl GainScan {
    pub fn best(&self) -> Option<GainRow> {
        self.rows
            .iter()
            .copied()
            .max_by(|a, b| a.gain.total_cmp(&b.gain))
    }
}

/// `{2^-k : 1 ≤ k ≤ 20}`, largest first.
pub fn default_delta_grid() -> Vec<f64> {
    (1..=20).map(|k| (-(k as f64)).exp2()).collect()
}

/// Tabulates `H(A^δ) − H(A)` over `deltas ⊂ (0, 1]`.
pub fn entropy_gain_scan(f: &SetFamily, deltas: &[f64]) -> Result<GainScan> {
    if f.is_union_closed() {
        return Err(Error::domain(
            "family is union-closed: A^δ stays on F and cannot gain entropy",
        ));
    }
    if let Some(d) = deltas.iter().find(|&&d| !(d > 0.0 && d <= 1.0)) {
        return Err(Error::domain(format!("delta {d} outside (0, 1]")));
    }
    let a = SubsetDistribution::uniform(f);
    let h_a = shannon_entropy(&a).bits;
    let aub = union_distribution(&a, &a)?;
    let rows = deltas
        .iter()
        .map(|&delta| {
            let mix = mixture(&a, &aub, &exact_rational(delta)?)?;
            let entropy = shannon_entropy(&mix).bits;
            Ok(GainRow {
                delta,
                entropy,
                gain: entropy - h_a,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(GainScan { h_a, rows })
}
