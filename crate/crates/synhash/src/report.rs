//! Rendering of evaluation reports.

use serde_json::{json, Value};

use synhash_core::{EvalReport, Scheme};

fn columns(report: &EvalReport) -> Vec<&synhash_core::eval::EvalResult> {
    // combinations in run order, category before synset within each
    let mut out: Vec<_> = report.results.iter().collect();
    let combos: Vec<String> = {
        let mut seen = Vec::new();
        for r in &report.results {
            let c = r.combination();
            if !seen.contains(&c) {
                seen.push(c);
            }
        }
        seen
    };
    let rank = |s: Scheme| match s {
        Scheme::Category => 0,
        Scheme::Synset => 1,
    };
    out.sort_by_key(|r| (combos.iter().position(|c| *c == r.combination()), rank(r.scheme)));
    out
}

/// One `p@k` row per k, one column per `combination/scheme`, four decimals,
/// `NA` where nothing was evaluated.
pub fn to_tsv(report: &EvalReport, ks: &[usize]) -> String {
    let cols = columns(report);
    let mut out = String::from("metric");
    for r in &cols {
        out.push_str(&format!("\t{}/{}", r.combination(), r.scheme));
    }
    out.push('\n');
    let mut ks = ks.to_vec();
    ks.sort_unstable();
    ks.dedup();
    for k in ks {
        out.push_str(&format!("p@{k}"));
        for r in &cols {
            match r.precision.get(&k) {
                Some(p) if r.evaluated > 0 => out.push_str(&format!("\t{p:.4}")),
                _ => out.push_str("\tNA"),
            }
        }
        out.push('\n');
    }
    out
}

pub fn to_json(report: &EvalReport) -> Vec<u8> {
    let results: Vec<Value> = columns(report)
        .into_iter()
        .map(|r| {
            let precision: serde_json::Map<String, Value> = r
                .precision
                .iter()
                .map(|(k, p)| (format!("p@{k}"), json!(p)))
                .collect();
            json!({
                "combination": r.combination(),
                "languages": r.languages,
                "scheme": r.scheme.as_str(),
                "sampled": r.sampled,
                "evaluated": r.evaluated,
                "skipped_no_ground_truth": r.skipped_no_ground_truth,
                "skipped_no_hash": r.skipped_no_hash,
                "precision": precision,
            })
        })
        .collect();
    let mut bytes = serde_json::to_vec_pretty(&json!({ "results": results })).expect("in-memory serialization");
    bytes.push(b'\n');
    bytes
}
