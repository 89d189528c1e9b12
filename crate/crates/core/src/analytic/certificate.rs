//! Piecewise interval certificates for the two one-variable inequalities.
//!
//! A certificate covers its domain by contiguous pieces. A `direct` piece
//! carries a rigorous lower bound of the target function on it, which must be
//! nonnegative. The remaining pieces are local arguments that hold where the
//! function touches zero, and carry a lower bound of an auxiliary quantity
//! that must be strictly positive:
//!
//! * `origin`: on `[0, b]` the target divided by its leading power is bounded
//!   below by an explicit expression in `log2(1/b)`.
//! * `endpoint`: the same at `x = 1` in the variable `y = 1 − x`.
//! * `convex-root`: the target and its derivative vanish at `1/φ`, and the
//!   second derivative is positive on the piece, so the target is nonnegative.
//! * `decreasing-root`: the target vanishes at `ψ` and is strictly decreasing
//!   on the piece, so it is nonnegative up to `ψ`.

use std::fmt::Write as _;

use super::{
    dh_enclosure, h_enclosure, inv_phi_interval, or_probability, phi_interval, psi_interval,
    square01,
};
use crate::error::{Error, Result};
use crate::interval::Interval;

const MAX_DEPTH: u32 = 60;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Target {
    /// `h(x²) ≥ φ·x·h(x)` on `[0, 1]`.
    KeyLemma,
    /// `h(2p − p²) ≥ h(p)` on `[0, ψ]`.
    GilmerRefinement,
}

impl Target {
    pub fn name(self) -> &'static str {
        match self {
            Target::KeyLemma => "key-lemma",
            Target::GilmerRefinement => "gilmer-refinement",
        }
    }

    pub fn from_name(s: &str) -> Option<Target> {
        match s {
            "key-lemma" => Some(Target::KeyLemma),
            "gilmer-refinement" => Some(Target::GilmerRefinement),
            _ => None,
        }
    }

    /// The covered domain; for the refinement the right end is an upper enclosure of `ψ`.
    pub fn domain(self) -> Interval {
        match self {
            Target::KeyLemma => Interval::new(0.0, 1.0),
            Target::GilmerRefinement => Interval::new(0.0, psi_interval().hi()),
        }
    }

    fn local_kinds(self) -> &'static [PieceKind] {
        match self {
            Target::KeyLemma => &[PieceKind::Origin, PieceKind::ConvexRoot, PieceKind::Endpoint],
            Target::GilmerRefinement => &[PieceKind::Origin, PieceKind::DecreasingRoot],
        }
    }

    /// Enclosure of the target function itself.
    pub fn enclose(self, x: Interval) -> Interval {
        match self {
            Target::KeyLemma => {
                h_enclosure(square01(x)) - phi_interval() * x * h_enclosure(x)
            }
            Target::GilmerRefinement => h_enclosure(or_probability(x)) - h_enclosure(x),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PieceKind {
    Direct,
    Origin,
    Endpoint,
    ConvexRoot,
    DecreasingRoot,
}

impl PieceKind {
    pub fn name(self) -> &'static str {
        match self {
            PieceKind::Direct => "direct",
            PieceKind::Origin => "origin",
            PieceKind::Endpoint => "endpoint",
            PieceKind::ConvexRoot => "convex-root",
            PieceKind::DecreasingRoot => "decreasing-root",
        }
    }

    fn from_name(s: &str) -> Option<PieceKind> {
        [
            PieceKind::Direct,
            PieceKind::Origin,
            PieceKind::Endpoint,
            PieceKind::ConvexRoot,
            PieceKind::DecreasingRoot,
        ]
        .into_iter()
        .find(|k| k.name() == s)
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Piece {
    pub lo: f64,
    pub hi: f64,
    pub lower_bound: f64,
    pub kind: PieceKind,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Status {
    Proved,
    /// Smallest piece on which no bound could be established.
    Failed { lo: f64, hi: f64 },
}

#[derive(Clone, Debug, PartialEq)]
pub struct ProofCertificate {
    pub target: Target,
    pub domain: Interval,
    pub tolerance: f64,
    pub pieces: Vec<Piece>,
    pub status: Status,
}

/// Lower bound of the quantity a piece of the given kind must make nonnegative
/// (`Direct`) or positive (local kinds). `None` if the kind does not apply to the piece.
fn piece_bound(target: Target, kind: PieceKind, x: Interval) -> Option<f64> {
    let phi = phi_interval();
    let ln2 = Interval::ln2();
    let q = match (target, kind) {
        (_, PieceKind::Direct) => target.enclose(x),
        (Target::KeyLemma, PieceKind::Origin) => {
            if x.lo() != 0.0 || x.hi() >= 0.5 {
                return None;
            }
            // f(x)/x² ≥ (2 − φ)·log2(1/x) − φ/ln 2
            (2.0 - phi) * -Interval::point(x.hi()).log2() - phi / ln2
        }
        (Target::KeyLemma, PieceKind::Endpoint) => {
            if x.hi() != 1.0 || x.lo() <= 0.5 {
                return None;
            }
            // y = 1 − x ∈ [0, b]: f/y ≥ (2 − b − φ)·log2(1/b) − 2 − φ/ln 2
            let b = 1.0 - Interval::point(x.lo());
            let coeff = 2.0 - b - phi;
            if coeff.lo() <= 0.0 {
                return None;
            }
            coeff * -b.log2() - 2.0 - phi / ln2
        }
        (Target::KeyLemma, PieceKind::ConvexRoot) => {
            if !x.contains_interval(inv_phi_interval()) || x.lo() <= 0.0 || x.hi() >= 1.0 {
                return None;
            }
            // f'' = 2h'(x²) − 4/(ln2·(1 − x²)) − 2φh'(x) + φ/(ln2·(1 − x))
            let x2 = square01(x);
            2.0 * dh_enclosure(x2) - 4.0 / (ln2 * (1.0 - x2)) - 2.0 * phi * dh_enclosure(x)
                + phi / (ln2 * (1.0 - x))
        }
        (Target::GilmerRefinement, PieceKind::Origin) => {
            if x.lo() != 0.0 || x.hi() >= 0.5 {
                return None;
            }
            // g(p)/p ≥ (1 − b)·log2(1/b) − 2 − 1/ln 2
            let b = Interval::point(x.hi());
            (1.0 - b) * -b.log2() - 2.0 - 1.0 / ln2
        }
        (Target::GilmerRefinement, PieceKind::DecreasingRoot) => {
            let psi = psi_interval();
            if x.lo() > psi.lo() || x.hi() < psi.hi() || x.lo() <= 0.0 {
                return None;
            }
            // −g'(p) = h'(p) − 2(1 − p)·h'(2p − p²)
            dh_enclosure(x) - 2.0 * (1.0 - x) * dh_enclosure(or_probability(x))
        }
        _ => return None,
    };
    Some(q.lo())
}

fn bound_accepts(kind: PieceKind, lb: f64) -> bool {
    match kind {
        PieceKind::Direct => lb >= 0.0,
        _ => lb > 0.0,
    }
}

/// The largest local piece of `kind` (radius `2^-j`) whose bound is positive.
fn find_local(target: Target, kind: PieceKind, tolerance: f64) -> std::result::Result<Piece, (f64, f64)> {
    let mut last = (0.0, 0.0);
    for j in 1..=MAX_DEPTH as i32 {
        let eta = 2f64.powi(-j);
        let x = match kind {
            PieceKind::Origin => Interval::new(0.0, eta),
            PieceKind::Endpoint => Interval::new(1.0 - eta, 1.0),
            PieceKind::ConvexRoot => {
                let r = inv_phi_interval();
                Interval::new(r.lo() - eta, r.hi() + eta)
            }
            PieceKind::DecreasingRoot => {
                let p = psi_interval();
                Interval::new(p.lo() - eta, p.hi())
            }
            PieceKind::Direct => unreachable!("direct pieces are not located"),
        };
        last = (x.lo(), x.hi());
        if eta < tolerance {
            break;
        }
        if let Some(lb) = piece_bound(target, kind, x) {
            if bound_accepts(kind, lb) {
                return Ok(Piece { lo: x.lo(), hi: x.hi(), lower_bound: lb, kind });
            }
        }
    }
    Err(last)
}

/// Bisects `[lo, hi]` into direct pieces; on failure returns the offending piece.
fn cover_direct(
    target: Target,
    lo: f64,
    hi: f64,
    tolerance: f64,
    out: &mut Vec<Piece>,
) -> std::result::Result<(), (f64, f64)> {
    let mut stack = vec![(lo, hi, 0u32)];
    while let Some((a, b, depth)) = stack.pop() {
        let lb = target.enclose(Interval::new(a, b)).lo();
        if lb >= 0.0 {
            out.push(Piece { lo: a, hi: b, lower_bound: lb, kind: PieceKind::Direct });
            continue;
        }
        let mid = a + (b - a) / 2.0;
        if depth >= MAX_DEPTH || b - a < tolerance || mid <= a || mid >= b {
            return Err((a, b));
        }
        // right half first so the left half is popped next and pieces stay ordered
        stack.push((mid, b, depth + 1));
        stack.push((a, mid, depth + 1));
    }
    Ok(())
}

/// Builds a certificate for `target`. Pieces narrower than `tolerance` are never produced.
pub fn verify(target: Target, tolerance: f64) -> Result<ProofCertificate> {
    if !(tolerance > 0.0 && tolerance <= 0.125) {
        return Err(Error::domain(format!("tolerance {tolerance} must lie in (0, 0.125]")));
    }
    let domain = target.domain();
    let mut cert = ProofCertificate {
        target,
        domain,
        tolerance,
        pieces: Vec::new(),
        status: Status::Proved,
    };
    let mut locals = Vec::new();
    for &kind in target.local_kinds() {
        match find_local(target, kind, tolerance) {
            Ok(p) => locals.push(p),
            Err((lo, hi)) => {
                cert.status = Status::Failed { lo, hi };
                return Ok(cert);
            }
        }
    }
    locals.sort_by(|a, b| a.lo.total_cmp(&b.lo));
    let mut cursor = domain.lo();
    for local in locals {
        if local.lo > cursor {
            if let Err((lo, hi)) = cover_direct(target, cursor, local.lo, tolerance, &mut cert.pieces) {
                cert.status = Status::Failed { lo, hi };
                return Ok(cert);
            }
        }
        cursor = local.hi;
        cert.pieces.push(local);
    }
    if cursor < domain.hi() {
        if let Err((lo, hi)) = cover_direct(target, cursor, domain.hi(), tolerance, &mut cert.pieces) {
            cert.status = Status::Failed { lo, hi };
        }
    }
    Ok(cert)
}

/// `h(x²) ≥ φ·x·h(x)` for all `x ∈ [0, 1]`.
pub fn verify_key_lemma(tolerance: f64) -> Result<ProofCertificate> {
    verify(Target::KeyLemma, tolerance)
}

/// `h(2p − p²) ≥ h(p)` for all `p ∈ [0, ψ]`.
pub fn verify_gilmer_refinement(tolerance: f64) -> Result<ProofCertificate> {
    verify(Target::GilmerRefinement, tolerance)
}

impl ProofCertificate {
    pub fn is_proved(&self) -> bool {
        self.status == Status::Proved
    }

    /// Distinct piece kinds in order of first use.
    pub fn methods(&self) -> Vec<PieceKind> {
        let mut out = Vec::new();
        for p in &self.pieces {
            if !out.contains(&p.kind) {
                out.push(p.kind);
            }
        }
        out
    }

    /// Smallest certified lower bound over the direct pieces.
    pub fn min_direct_bound(&self) -> Option<f64> {
        self.pieces
            .iter()
            .filter(|p| p.kind == PieceKind::Direct)
            .map(|p| p.lower_bound)
            .min_by(f64::total_cmp)
    }

    /// Line-oriented text form; floats use shortest round-trip formatting.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "target={}", self.target.name());
        let _ = writeln!(s, "domain=[{:?}, {:?}]", self.domain.lo(), self.domain.hi());
        let _ = writeln!(s, "tolerance={:?}", self.tolerance);
        for p in &self.pieces {
            let _ = write!(s, "[{:?}, {:?}] lower_bound={:?}", p.lo, p.hi, p.lower_bound);
            if p.kind != PieceKind::Direct {
                let _ = write!(s, " local={}", p.kind.name());
            }
            s.push('\n');
        }
        match self.status {
            Status::Proved => s.push_str("status=Proved\n"),
            Status::Failed { lo, hi } => {
                let _ = writeln!(s, "status=Failed [{lo:?}, {hi:?}]");
            }
        }
        s
    }

    pub fn from_text(text: &str) -> Result<ProofCertificate> {
        let mut target = None;
        let mut domain = None;
        let mut tolerance = None;
        let mut status = None;
        let mut pieces = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line_no = i + 1;
            let line = raw.trim();
            if line.is_empty() {
                continue;
            }
            if status.is_some() {
                return Err(Error::parse(line_no, "content after the status line"));
            }
            if let Some(v) = line.strip_prefix("target=") {
                target = Some(
                    Target::from_name(v)
                        .ok_or_else(|| Error::parse(line_no, format!("unknown target {v:?}")))?,
                );
            } else if let Some(v) = line.strip_prefix("domain=") {
                let (lo, hi) = parse_pair(v).ok_or_else(|| Error::parse(line_no, "bad domain"))?;
                domain = Some(
                    Interval::try_new(lo, hi).ok_or_else(|| Error::parse(line_no, "empty domain"))?,
                );
            } else if let Some(v) = line.strip_prefix("tolerance=") {
                tolerance =
                    Some(v.parse::<f64>().map_err(|e| Error::parse(line_no, e.to_string()))?);
            } else if let Some(v) = line.strip_prefix("status=") {
                status = Some(if v == "Proved" {
                    Status::Proved
                } else if let Some(rest) = v.strip_prefix("Failed") {
                    let (lo, hi) = parse_pair(rest.trim())
                        .ok_or_else(|| Error::parse(line_no, "bad failure witness"))?;
                    Status::Failed { lo, hi }
                } else {
                    return Err(Error::parse(line_no, format!("unknown status {v:?}")));
                });
            } else if line.starts_with('[') {
                pieces.push(parse_piece(line).ok_or_else(|| Error::parse(line_no, "bad piece line"))?);
            } else {
                return Err(Error::parse(line_no, format!("unrecognised line {line:?}")));
            }
        }
        let missing = |what: &str| Error::parse(text.lines().count().max(1), format!("missing {what}"));
        Ok(ProofCertificate {
            target: target.ok_or_else(|| missing("target"))?,
            domain: domain.ok_or_else(|| missing("domain"))?,
            tolerance: tolerance.ok_or_else(|| missing("tolerance"))?,
            pieces,
            status: status.ok_or_else(|| missing("status"))?,
        })
    }
}

fn parse_pair(s: &str) -> Option<(f64, f64)> {
    let inner = s.strip_prefix('[')?.strip_suffix(']')?;
    let (a, b) = inner.split_once(',')?;
    Some((a.trim().parse().ok()?, b.trim().parse().ok()?))
}

fn parse_piece(line: &str) -> Option<Piece> {
    let close = line.find(']')?;
    let (lo, hi) = parse_pair(&line[..=close])?;
    let mut lower_bound = None;
    let mut kind = PieceKind::Direct;
    for tok in line[close + 1..].split_whitespace() {
        if let Some(v) = tok.strip_prefix("lower_bound=") {
            lower_bound = Some(v.parse().ok()?);
        } else if let Some(v) = tok.strip_prefix("local=") {
            kind = PieceKind::from_name(v).filter(|k| *k != PieceKind::Direct)?;
        } else {
            return None;
        }
    }
    (lo <= hi).then_some(Piece { lo, hi, lower_bound: lower_bound?, kind })
}

/// Outcome of independently re-checking a certificate.
#[derive(Clone, Debug, PartialEq)]
pub struct ReplayReport {
    pub target: Target,
    pub pieces_checked: usize,
    pub failures: Vec<String>,
}

impl ReplayReport {
    pub fn ok(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Parses a certificate and re-verifies every piece and the gap-free coverage of the domain.
pub fn replay_certificate(text: &str) -> Result<ReplayReport> {
    let cert = ProofCertificate::from_text(text)?;
    let mut failures = Vec::new();
    let domain = cert.target.domain();
    if cert.domain != domain {
        failures.push(format!("domain {} differs from {}", cert.domain, domain));
    }
    if cert.status != Status::Proved {
        failures.push("certificate records a failed verification".to_string());
    }
    match cert.pieces.first() {
        None => failures.push("no pieces".to_string()),
        Some(first) if first.lo != domain.lo() => {
            failures.push(format!("coverage starts at {:?}, not {:?}", first.lo, domain.lo()))
        }
        _ => {}
    }
    if let Some(last) = cert.pieces.last() {
        if last.hi != domain.hi() {
            failures.push(format!("coverage ends at {:?}, not {:?}", last.hi, domain.hi()));
        }
    }
    for w in cert.pieces.windows(2) {
        if w[0].hi != w[1].lo {
            failures.push(format!("gap or overlap between {:?} and {:?}", w[0].hi, w[1].lo));
        }
    }
    for p in &cert.pieces {
        let x = Interval::new(p.lo, p.hi);
        match piece_bound(cert.target, p.kind, x) {
            None => failures.push(format!(
                "[{:?}, {:?}]: {} argument does not apply",
                p.lo,
                p.hi,
                p.kind.name()
            )),
            Some(lb) => {
                if !bound_accepts(p.kind, lb) {
                    failures.push(format!("[{:?}, {:?}]: recomputed bound {lb:?} is not sufficient", p.lo, p.hi));
                } else if lb < p.lower_bound {
                    failures.push(format!(
                        "[{:?}, {:?}]: recorded bound {:?} exceeds recomputed {lb:?}",
                        p.lo, p.hi, p.lower_bound
                    ));
                }
            }
        }
    }
    Ok(ReplayReport { target: cert.target, pieces_checked: cert.pieces.len(), failures })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn key_lemma_is_proved_and_replays() {
        let c = verify_key_lemma(1e-9).unwrap();
        assert!(c.is_proved(), "{:?}", c.status);
        let m = c.methods();
        assert!(m.contains(&PieceKind::Origin));
        assert!(m.contains(&PieceKind::ConvexRoot));
        assert!(m.contains(&PieceKind::Endpoint));
        assert!(c.pieces.iter().all(|p| p.hi - p.lo >= 1e-9));
        let text = c.to_text();
        assert_eq!(ProofCertificate::from_text(&text).unwrap(), c);
        let r = replay_certificate(&text).unwrap();
        assert!(r.ok(), "{:?}", r.failures);
        assert_eq!(r.pieces_checked, c.pieces.len());
    }

    #[test]
    fn refinement_is_proved_and_replays() {
        let c = verify_gilmer_refinement(1e-9).unwrap();
        assert!(c.is_proved(), "{:?}", c.status);
        assert_eq!(c.domain.hi(), psi_interval().hi());
        assert!((c.domain.hi() - 0.3819660113).abs() < 1e-9);
        let r = replay_certificate(&c.to_text()).unwrap();
        assert!(r.ok(), "{:?}", r.failures);
    }

    #[test]
    fn tampering_is_detected() {
        let c = verify_key_lemma(1e-9).unwrap();
        let mut bad = c.clone();
        bad.pieces.remove(bad.pieces.len() / 2);
        assert!(!replay_certificate(&bad.to_text()).unwrap().ok());
        let mut inflated = c.clone();
        let i = inflated.pieces.iter().position(|p| p.kind == PieceKind::Direct).unwrap();
        inflated.pieces[i].lower_bound += 1.0;
        assert!(!replay_certificate(&inflated.to_text()).unwrap().ok());
        let mut moved = c;
        let i = moved.pieces.iter().position(|p| p.kind == PieceKind::ConvexRoot).unwrap();
        // a convex-root piece must contain 1/φ
        let d = moved.pieces[i + 1].hi;
        moved.pieces[i].lo = moved.pieces[i + 1].lo.min(d);
        assert!(!replay_certificate(&moved.to_text()).unwrap().ok());
    }

    #[test]
    fn false_inequality_fails() {
        // the refinement is false just past ψ; a direct cover of [0.3, 0.45] must fail
        let mut out = Vec::new();
        let r = cover_direct(Target::GilmerRefinement, 0.3, 0.45, 1e-6, &mut out);
        let (lo, hi) = r.unwrap_err();
        assert!(hi > psi_interval().lo() && lo < 0.45);
    }

    #[test]
    fn text_parsing_errors() {
        assert!(ProofCertificate::from_text("target=nope\n").is_err());
        assert!(ProofCertificate::from_text("target=key-lemma\n").is_err());
        assert!(verify_key_lemma(0.0).is_err());
        assert!(verify_key_lemma(f64::NAN).is_err());
    }
}
