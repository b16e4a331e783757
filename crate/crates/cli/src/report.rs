//! JSON and text renderings of a bundle.

use crate::error::CliResult;
use crate::schema::{Artifacts, CertDoc, CertificateBundle, Verdict};
use std::fmt::Write;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Text,
}

pub fn emit_report(b: &CertificateBundle, format: Format) -> CliResult<String> {
    match format {
        Format::Json => Ok(serde_json::to_string_pretty(b)? + "\n"),
        Format::Text => Ok(text_report(b)),
    }
}

fn cert_line(out: &mut String, label: &str, c: &CertDoc) {
    let _ = writeln!(out, "  {label}: {} [{}]", c.relation, c.provenance.join(" > "));
}

pub fn verdict_lines(out: &mut String, vs: &[Verdict]) {
    for v in vs {
        let mark = if v.pass { "ok  " } else { "FAIL" };
        if v.detail.is_empty() {
            let _ = writeln!(out, "  {mark} {}", v.check);
        } else {
            let _ = writeln!(out, "  {mark} {}: {}", v.check, v.detail);
        }
    }
}

fn text_report(b: &CertificateBundle) -> String {
    let mut out = String::new();
    let verdict = if b.passed() { "verified" } else { "FAILED" };
    let _ = writeln!(out, "task {} ({verdict}), engine {}", b.task.name(), b.engine_version);
    match &b.artifacts {
        Artifacts::Gb { order, basis, .. } => {
            let _ = writeln!(out, "Gröbner basis ({order}), {} elements:", basis.len());
            for g in basis {
                let _ = writeln!(out, "  {g}");
            }
        }
        Artifacts::Member { member, .. } => {
            let _ = writeln!(out, "member: {member}");
        }
        Artifacts::Radical { member, exponent, .. } => {
            let _ = writeln!(out, "in the radical: {member}, exponent {exponent:?}");
        }
        Artifacts::IntegralCert { cert } => cert_line(&mut out, &cert.element, cert),
        Artifacts::Zmt { s, s_cert, x_certs, .. } => {
            let _ = writeln!(out, "s = {s}");
            cert_line(&mut out, "s", s_cert);
            for (j, c) in x_certs.iter().enumerate() {
                cert_line(&mut out, &format!("s·x{}", j + 1), c);
            }
        }
        Artifacts::ZmtGlobal { family, certs, x_certs, .. } => {
            let _ = writeln!(out, "family: {}", family.join(", "));
            for (i, c) in certs.iter().enumerate() {
                cert_line(&mut out, &format!("s{}", i + 1), c);
                for (j, x) in x_certs.get(i).into_iter().flatten().enumerate() {
                    cert_line(&mut out, &format!("s{}·x{}", i + 1, j + 1), x);
                }
            }
        }
        Artifacts::Newton { states } => {
            for s in states {
                let _ = writeln!(out, "k = {}: ({})", s.k, s.point.join(", "));
            }
        }
        Artifacts::Hensel { s, s_cert, h, r0, q, n_exp, f, trace, .. } => {
            let _ = writeln!(out, "s = {s}");
            cert_line(&mut out, "s", s_cert);
            let _ = writeln!(out, "h(T) = {h}");
            let _ = writeln!(out, "f(X) = {f}");
            let _ = writeln!(out, "r0 = {r0}, q = {q}, N = {n_exp}");
            if let Some(t) = trace {
                let _ = writeln!(out, "d(T) = {}", t.d);
                let _ = writeln!(out, "mu(T) = {}", t.mu);
                let _ = writeln!(out, "module generators: {}", t.module_gens.join(", "));
            }
        }
        Artifacts::Verify { checked_task } => {
            let _ = writeln!(out, "checked a {checked_task} bundle");
        }
    }
    let _ = writeln!(out, "checks:");
    verdict_lines(&mut out, &b.verdicts);
    if let Some(t) = &b.timing_ms {
        let parts: Vec<String> = t.iter().map(|(k, v)| format!("{k} {v} ms")).collect();
        let _ = writeln!(out, "timing: {}", parts.join(", "));
    }
    out
}
