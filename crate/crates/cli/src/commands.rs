use std::path::Path;

use anyhow::{Context, Result};
use serde_json::{json, Value};

use uclab::analytic::{self, ProofCertificate, Status, Target};
use uclab::constructions::{self, BinomialMode, ConstructionSpec};
use uclab::entropy::{default_delta_grid, entropy_gain_scan, gilmer_certificate, CertificateReport};
use uclab::enumerate::{certificate_coverage, enumerate_union_closed, SmallFamily};
use uclab::{parse_ucf, FamilyFormat, SetFamily};

use crate::output::{csv_field, jnum, list, num, print_json, read_input, write_output};
use crate::{
    ApproxArgs, ConstructArgs, ConstructKind, Ctx, EnumerateArgs, Format, GainArgs, ModeArg,
    Outcome, UcfStyle, VerifyArgs, VerifyTarget,
};

/// Atoms are listed in text mode only up to this support size unless `-v` is given.
const SHOWN_ATOMS: usize = 64;

fn load_family(path: &Path) -> Result<SetFamily> {
    let text = read_input(path)?;
    parse_ucf(&text).with_context(|| format!("parsing {}", path.display()))
}

fn members_json(f: &SetFamily) -> Value {
    Value::Array(
        f.members()
            .iter()
            .map(|s| Value::Array(s.iter().map(Value::from).collect()))
            .collect(),
    )
}

fn certificate_json(c: &CertificateReport, with_atoms: bool) -> Value {
    let mut v = serde_json::to_value(c.json()).expect("plain data");
    let obj = v.as_object_mut().expect("object");
    obj.insert("h_a_error_bound".into(), json!(c.h_a.error_bound));
    obj.insert("h_aub_error_bound".into(), json!(c.h_aub.error_bound));
    obj.insert("union_support".into(), json!(c.union_distribution.support_len()));
    let atoms = with_atoms.then(|| {
        Value::Array(
            c.union_distribution
                .weights()
                .map(|(s, w)| json!({ "set": s.to_string(), "weight": w.to_string() }))
                .collect(),
        )
    });
    obj.insert("union_distribution".into(), atoms.unwrap_or(Value::Null));
    v
}

pub fn analyze(ctx: &Ctx, file: &Path) -> Result<Outcome> {
    let f = load_family(file)?;
    let profile = f.frequency_profile();
    let blocks = f.blocks();
    let closed = f.is_union_closed();
    let cert = if f.len() >= 2 { Some(gilmer_certificate(&f)?) } else { None };
    let show_atoms = |c: &CertificateReport| ctx.verbose > 0 || c.union_distribution.support_len() <= SHOWN_ATOMS;
    match ctx.format {
        Format::Json => print_json(&json!({
            "n": f.n(),
            "family_size": f.len(),
            "union_closed": closed,
            "counts": profile.counts,
            "max_fraction": profile.max_fraction().to_string(),
            "abundant": profile.abundant(),
            "blocks": blocks.blocks,
            "never_appearing": blocks.never_appearing,
            "certificate": cert.as_ref().map(|c| certificate_json(c, ctx.verbose > 0 || c.union_distribution.support_len() <= 4096)),
        }))?,
        Format::Csv => {
            println!("element,count,fraction,abundant");
            for e in 1..=f.n() {
                println!("{e},{},{},{}", profile.count(e), profile.fraction(e), 2 * profile.count(e) >= f.len());
            }
        }
        Format::Text => {
            println!("n = {}", f.n());
            println!("family_size = {}", f.len());
            println!("union_closed = {closed}");
            let counts: Vec<String> = (1..=f.n()).map(|e| format!("{e}:{}", profile.count(e))).collect();
            println!("counts = {}", counts.join(" "));
            println!("max_fraction = {}", profile.max_fraction());
            println!("abundant = {}", list(&profile.abundant()));
            let classes: Vec<String> = blocks.blocks.iter().map(|b| list(b)).collect();
            println!("blocks = {}", classes.join(" "));
            println!("never_appearing = {}", list(&blocks.never_appearing));
            match &cert {
                None => println!("certificate = not applicable (needs at least two members)"),
                Some(c) => {
                    println!("H(A) = {} (error ≤ {})", num(c.h_a.bits), num(c.h_a.error_bound));
                    println!("H(A∪B) = {} (error ≤ {})", num(c.h_aub.bits), num(c.h_aub.error_bound));
                    println!("verdict = {:?}", c.verdict);
                    println!("union_support = {}", c.union_distribution.support_len());
                    if show_atoms(c) {
                        for (s, w) in c.union_distribution.weights() {
                            println!("  {s} {w}");
                        }
                    }
                }
            }
        }
    }
    Ok(Outcome::Success)
}

fn piece_summary(c: &ProofCertificate) -> String {
    let methods: Vec<&str> = c.methods().iter().map(|k| k.name()).collect();
    format!(
        "{}: {:?}, {} pieces on {}, methods {}",
        c.target.name(),
        c.status,
        c.pieces.len(),
        c.domain,
        methods.join("+")
    )
}

pub fn verify(ctx: &Ctx, args: &VerifyArgs) -> Result<Outcome> {
    let target = match args.target {
        VerifyTarget::PsiTable => return psi_table(ctx, args),
        VerifyTarget::KeyLemma => Target::KeyLemma,
        VerifyTarget::GilmerRefinement => Target::GilmerRefinement,
    };
    let cert = analytic::verify(target, args.tolerance)?;
    let text = cert.to_text();
    if let Some(path) = &args.certificate {
        write_output(path, &text)?;
    }
    match ctx.format {
        Format::Json => print_json(&json!({
            "target": target.name(),
            "status": match cert.status { Status::Proved => "Proved", Status::Failed { .. } => "Failed" },
            "witness": match cert.status { Status::Proved => Value::Null, Status::Failed { lo, hi } => json!([lo, hi]) },
            "domain": [cert.domain.lo(), cert.domain.hi()],
            "tolerance": cert.tolerance,
            "pieces": cert.pieces.len(),
            "methods": cert.methods().iter().map(|k| k.name()).collect::<Vec<_>>(),
            "min_direct_bound": cert.min_direct_bound(),
        }))?,
        Format::Csv => {
            println!("lo,hi,lower_bound,kind");
            for p in &cert.pieces {
                println!("{:?},{:?},{:?},{}", p.lo, p.hi, p.lower_bound, p.kind.name());
            }
        }
        Format::Text => print!("{text}"),
    }
    eprintln!("{}", piece_summary(&cert));
    match cert.status {
        Status::Proved => Ok(Outcome::Success),
        Status::Failed { lo, hi } => {
            eprintln!("verification failed on [{lo:?}, {hi:?}] (no bound established there; not a disproof)");
            Ok(Outcome::VerificationFailed)
        }
    }
}

fn psi_table(ctx: &Ctx, args: &VerifyArgs) -> Result<Outcome> {
    if args.k_max == 0 {
        anyhow::bail!(uclab::Error::Domain("--k-max must be at least 1".into()));
    }
    // bisect at least to 1e-15 so that all twelve printed digits are meaningful
    let table = analytic::psi_table(args.k_max, args.tolerance.min(1e-15))?;
    match ctx.format {
        Format::Json => print_json(&Value::Array(
            table.iter().map(|&(k, v)| json!({ "k": k, "psi_k": jnum(v) })).collect(),
        ))?,
        Format::Csv => {
            println!("k,psi_k");
            for (k, v) in table {
                println!("{k},{}", num(v));
            }
        }
        Format::Text => {
            for (k, v) in table {
                println!("{k} {}", num(v));
            }
        }
    }
    Ok(Outcome::Success)
}

pub fn replay(ctx: &Ctx, file: &Path) -> Result<Outcome> {
    let text = read_input(file)?;
    let report = analytic::replay_certificate(&text).with_context(|| format!("parsing {}", file.display()))?;
    match ctx.format {
        Format::Json => print_json(&json!({
            "target": report.target.name(),
            "pieces_checked": report.pieces_checked,
            "ok": report.ok(),
            "failures": report.failures,
        }))?,
        _ => {
            println!("target = {}", report.target.name());
            println!("pieces_checked = {}", report.pieces_checked);
            println!("ok = {}", report.ok());
            for f in &report.failures {
                println!("failure: {f}");
            }
        }
    }
    Ok(if report.ok() { Outcome::Success } else { Outcome::VerificationFailed })
}

fn spec_of(kind: &ConstructKind) -> (ConstructionSpec, String) {
    match *kind {
        ConstructKind::Fm { m } => (ConstructionSpec::Fm(m), format!("Fm({m})")),
        ConstructKind::Binomial { n, k, mode } => {
            let mode = match mode {
                ModeArg::AtMost => BinomialMode::AtMost,
                ModeArg::AtLeast => BinomialMode::AtLeast,
                ModeArg::Exact => BinomialMode::Exact,
            };
            let label = serde_json::to_value(mode).expect("unit variant");
            let label = label.as_str().expect("string");
            (ConstructionSpec::Binomial { n, mode, k }, format!("Binomial({n},{label},{k})"))
        }
        ConstructKind::S12_4 => (ConstructionSpec::S12_4, "S12_4".into()),
        ConstructKind::Snk { n, k } => (ConstructionSpec::Snk { n, k }, format!("Snk({n},{k})")),
    }
}

pub fn construct(ctx: &Ctx, args: &ConstructArgs) -> Result<Outcome> {
    let (spec, label) = spec_of(&args.kind);
    let cap = constructions::size_cap()?;
    let summary = constructions::summarize(&spec, cap)?;
    if let Some(path) = &args.output {
        let family = spec.build(cap)?;
        let style = match args.style {
            UcfStyle::Braces => FamilyFormat::Braces,
            UcfStyle::Bitstring => FamilyFormat::Bitstring,
        };
        write_output(path, &family.to_ucf(style))?;
    }
    match ctx.format {
        Format::Json => print_json(&json!({
            "kind": label,
            "size": summary.size.to_string(),
            "union_closed": summary.union_closed,
            "abundant": summary.abundant,
            "all_singleton_blocks": summary.all_singleton_blocks,
            "inequality": summary.inequality.as_ref().map(|q| json!({
                "lhs": q.lhs.to_string(),
                "rhs": q.rhs.to_string(),
                "holds": q.holds,
            })),
            "output": args.output.as_ref().map(|p| p.display().to_string()),
        }))?,
        Format::Csv => {
            println!("kind,size,union_closed,abundant,all_singleton_blocks,inequality_holds");
            println!(
                "{},{},{},{},{},{}",
                csv_field(&label),
                summary.size,
                summary.union_closed,
                csv_field(&list(&summary.abundant)),
                summary.all_singleton_blocks,
                summary.inequality.as_ref().map(|q| q.holds.to_string()).unwrap_or_default()
            );
        }
        Format::Text => {
            println!("kind = {label}");
            println!("size = {}", summary.size);
            println!("union_closed = {}", summary.union_closed);
            println!("abundant = {}", list(&summary.abundant));
            println!("all_singleton_blocks = {}", summary.all_singleton_blocks);
            if let Some(q) = &summary.inequality {
                println!("inequality = {q}");
            }
            if let Some(p) = &args.output {
                println!("wrote = {}", p.display());
            }
        }
    }
    Ok(Outcome::Success)
}

fn small_family_json(f: SmallFamily) -> Result<Value> {
    Ok(members_json(&f.to_set_family()?))
}

pub fn enumerate(ctx: &Ctx, args: &EnumerateArgs) -> Result<Outcome> {
    let report = enumerate_union_closed(args.n, |_| {})?;
    let coverage = if args.coverage { Some(certificate_coverage(args.n)?) } else { None };
    if let Some(path) = &args.emit_worst {
        let worst = report.worst_family.to_set_family()?;
        write_output(path, &worst.to_ucf(FamilyFormat::Braces))?;
    }
    match ctx.format {
        Format::Csv => {
            print!("n,families_scanned,uc_count,min_max_fraction,conjecture_holds");
            if coverage.is_some() {
                print!(",total_non_uc,proved_by_entropy");
            }
            println!();
            print!(
                "{},{},{},{},{}",
                report.n, report.families_scanned, report.uc_count, report.min_max_fraction, report.conjecture_holds
            );
            if let Some(c) = &coverage {
                print!(",{},{}", c.total_non_uc, c.proved_by_entropy);
            }
            println!();
        }
        // the report is JSON in text mode as well
        Format::Json | Format::Text => {
            let mut v = json!({
                "n": report.n,
                "families_scanned": report.families_scanned,
                "uc_count": report.uc_count,
                "min_max_fraction": report.min_max_fraction.to_string(),
                "worst_family": small_family_json(report.worst_family)?,
                "conjecture_holds": report.conjecture_holds,
            });
            if let Some(c) = &coverage {
                v["coverage"] = json!({
                    "total_non_uc": c.total_non_uc,
                    "proved_by_entropy": c.proved_by_entropy,
                    "unsound": c.unsound,
                });
            }
            print_json(&v)?;
        }
    }
    Ok(Outcome::Success)
}

pub fn approx_uc(ctx: &Ctx, args: &ApproxArgs) -> Result<Outcome> {
    let r = constructions::approx_uc_experiment(args.n, args.k, args.trials, ctx.seed)?;
    match ctx.format {
        Format::Json => print_json(&json!({
            "n": r.n,
            "k_draws": r.k_draws,
            "trials": r.trials,
            "seed": r.seed,
            "psi_k": jnum(r.psi_k),
            "slice_size": r.slice_size,
            "threshold": r.threshold,
            "successes": r.successes,
            "p_hat": jnum(r.p_hat),
            "mean_union_size": jnum(r.mean_union_size),
            "log_gap": jnum(r.log_gap),
        }))?,
        // one CSV row in text mode as well
        Format::Csv | Format::Text => {
            println!("n,k_draws,trials,seed,p_hat,log_gap");
            println!("{},{},{},{},{},{}", r.n, r.k_draws, r.trials, r.seed, num(r.p_hat), num(r.log_gap));
        }
    }
    Ok(Outcome::Success)
}

pub fn entropy_gain(ctx: &Ctx, args: &GainArgs) -> Result<Outcome> {
    let f = load_family(&args.file)?;
    let deltas = args.deltas.clone().unwrap_or_else(default_delta_grid);
    let scan = entropy_gain_scan(&f, &deltas)?;
    let best = scan.best();
    match ctx.format {
        Format::Json => print_json(&json!({
            "h_a": jnum(scan.h_a),
            "rows": scan.rows.iter().map(|r| json!({
                "delta": r.delta,
                "entropy": jnum(r.entropy),
                "gain": jnum(r.gain),
            })).collect::<Vec<_>>(),
            "best": best.map(|r| json!({ "delta": r.delta, "gain": jnum(r.gain) })),
        }))?,
        Format::Csv => {
            println!("delta,entropy,gain");
            for r in &scan.rows {
                println!("{},{},{}", num(r.delta), num(r.entropy), num(r.gain));
            }
        }
        Format::Text => {
            println!("H(A) = {}", num(scan.h_a));
            println!("delta entropy gain");
            for r in &scan.rows {
                println!("{} {} {}", num(r.delta), num(r.entropy), num(r.gain));
            }
            if let Some(b) = best {
                println!("best: delta = {}, gain = {}", num(b.delta), num(b.gain));
            }
        }
    }
    Ok(Outcome::Success)
}

pub fn scan(ctx: &Ctx, resolution: usize) -> Result<Outcome> {
    let s = analytic::two_variate_scan(resolution)?;
    match ctx.format {
        Format::Json => print_json(&json!({
            "resolution": s.resolution,
            "grid_min": jnum(s.grid_min),
            "grid_argmin": [jnum(s.grid_argmin.0), jnum(s.grid_argmin.1)],
            "min_value": jnum(s.min_value),
            "argmin": [jnum(s.argmin.0), jnum(s.argmin.1)],
            "reference_phi_over_2": jnum(s.reference),
            "rigorous": s.rigorous,
        }))?,
        Format::Csv => {
            println!("resolution,min_value,argmin_x,argmin_y,reference,rigorous");
            println!(
                "{},{},{},{},{},{}",
                s.resolution,
                num(s.min_value),
                num(s.argmin.0),
                num(s.argmin.1),
                num(s.reference),
                s.rigorous
            );
        }
        Format::Text => {
            println!("resolution = {}", s.resolution);
            println!("grid_min = {} at ({}, {})", num(s.grid_min), num(s.grid_argmin.0), num(s.grid_argmin.1));
            println!("min_value = {} at ({}, {})", num(s.min_value), num(s.argmin.0), num(s.argmin.1));
            println!("reference φ/2 = {}", num(s.reference));
            println!("rigorous = false (floating-point exploration only)");
        }
    }
    Ok(Outcome::Success)
}
