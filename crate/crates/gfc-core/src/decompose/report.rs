//! Serializable reports for decompositions. Field order is fixed by the
//! struct definitions and no unordered containers are used, so the JSON
//! output is byte-for-byte deterministic.

use serde::Serialize;

use crate::decompose::{group_by_j, Decomposition, DecompositionMode};
use crate::error::Result;

#[derive(Debug, Clone, Serialize)]
pub struct TypeReport {
    pub p: u64,
    pub n: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct FactorReport {
    pub label: String,
    pub equation: String,
    pub genus: Option<u64>,
    pub multiplicity: u64,
    pub j: Option<String>,
    pub reducible: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct CertificateReport {
    pub pairwise_zero: bool,
    pub genus_sum: u64,
    pub expected_genus: u64,
    pub passes: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub r#type: TypeReport,
    pub genus: u64,
    pub parameters: Vec<String>,
    pub factors: Vec<FactorReport>,
    pub certificate: Option<CertificateReport>,
    pub mode: String,
}

/// Build the serializable report for a decomposition.
pub fn report(dec: &Decomposition) -> Report {
    Report {
        r#type: TypeReport { p: dec.k, n: dec.n },
        genus: dec.total_genus,
        parameters: dec.branch.lambdas().iter().map(|l| l.to_string()).collect(),
        factors: dec
            .factors
            .iter()
            .map(|f| FactorReport {
                label: f.label.clone(),
                equation: f.curve.equation(),
                genus: f.genus,
                multiplicity: f.multiplicity,
                j: f.j.as_ref().map(|j| j.to_string()),
                reducible: f.reducible,
            })
            .collect(),
        certificate: dec.certificate.as_ref().map(|c| CertificateReport {
            pairwise_zero: c.pairwise_zero,
            genus_sum: c.genus_sum,
            expected_genus: c.expected_genus,
            passes: c.passes(),
        }),
        mode: match dec.mode {
            DecompositionMode::Theorem => "THEOREM".to_string(),
            DecompositionMode::Conjectural => "CONJECTURAL".to_string(),
        },
    }
}

/// Render a decomposition as human-readable text.
pub fn render_text(dec: &Decomposition) -> Result<String> {
    use std::fmt::Write;
    let mut out = String::new();
    let _ = writeln!(
        out,
        "curve type ({}, {}), genus {}",
        dec.k, dec.n, dec.total_genus
    );
    if !dec.branch.lambdas().is_empty() {
        let params: Vec<String> = dec.branch.lambdas().iter().map(|l| l.to_string()).collect();
        let _ = writeln!(out, "parameters: {}", params.join(", "));
    }
    let mode = match dec.mode {
        DecompositionMode::Theorem => "THEOREM",
        DecompositionMode::Conjectural => "CONJECTURAL",
    };
    let _ = writeln!(out, "mode: {mode}");
    let _ = writeln!(out, "factors ({}):", dec.factors.len());
    for f in &dec.factors {
        let genus = match f.genus {
            Some(g) => g.to_string(),
            None => "-".to_string(),
        };
        let mut line = format!(
            "  [{}] genus {} x{}  {}",
            f.label,
            genus,
            f.multiplicity,
            f.curve.equation()
        );
        if let Some(j) = &f.j {
            line.push_str(&format!("  j = {j}"));
        }
        if f.reducible {
            line.push_str("  (reducible)");
        }
        let _ = writeln!(out, "{line}");
    }
    let classes = group_by_j(dec)?;
    if classes.len() < dec.factors.len() || classes.iter().any(|c| c.multiplicity > 1) {
        let _ = writeln!(out, "isogeny classes:");
        for c in &classes {
            let genus = match c.genus {
                Some(g) => g.to_string(),
                None => "-".to_string(),
            };
            let j = match &c.j {
                Some(j) => format!("  j = {j}"),
                None => String::new(),
            };
            let _ = writeln!(
                out,
                "  {}: genus {} multiplicity {}{}",
                c.label, genus, c.multiplicity, j
            );
        }
    }
    match &dec.certificate {
        Some(c) => {
            let _ = writeln!(
                out,
                "certificate: pairwise products of genus 0: {}; factor genera sum to {} (expected {}): {}",
                if c.pairwise_zero { "yes" } else { "NO" },
                c.genus_sum,
                c.expected_genus,
                if c.passes() { "PASS" } else { "FAIL" }
            );
        }
        None => {
            let _ = writeln!(
                out,
                "certificate: none (conjectural enumeration; genus sum of irreducible factors = {})",
                dec.genus_sum()
            );
        }
    }
    Ok(out)
}
