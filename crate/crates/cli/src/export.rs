//! JSON, DOT and CSV renderings of an analysis.
//!
//! Numbers are written in Rust's shortest round-trip decimal form, so
//! re-parsing any export reproduces the original `f64` bit for bit.

use std::fmt::Write as _;

use domorder_core::{
    AnalysisConfig, CiMethod, ConfidenceInterval, DominanceNetwork, DominanceResult, PairSummary,
};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConfigEcho {
    pub alpha: f64,
    pub reps: usize,
    pub method: CiMethod,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeanEntry {
    pub category: String,
    pub n: usize,
    pub sample_mean: f64,
    pub ci: ConfidenceInterval,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairEntry {
    pub low_category: String,
    pub high_category: String,
    pub diff_ci: ConfidenceInterval,
    pub p_raw: f64,
    pub p_adjusted: f64,
    pub dominates: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EdgeEntry {
    pub from: String,
    pub to: String,
}

/// The `analyze` JSON document.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnalyzeOutput {
    pub config: ConfigEcho,
    pub order: Vec<String>,
    pub mean_cis: Vec<MeanEntry>,
    pub pairs: Vec<PairEntry>,
    pub edges: Vec<EdgeEntry>,
    pub density: f64,
}

impl From<&DominanceResult> for AnalyzeOutput {
    fn from(r: &DominanceResult) -> Self {
        let label = |i: usize| r.order[i].clone();
        AnalyzeOutput {
            config: ConfigEcho {
                alpha: r.config.alpha,
                reps: r.config.reps,
                method: r.config.ci_method,
                seed: r.config.seed,
            },
            order: r.order.clone(),
            mean_cis: (0..r.order.len())
                .map(|i| MeanEntry {
                    category: label(i),
                    n: r.sample_sizes[i],
                    sample_mean: r.sample_means[i],
                    ci: r.mean_cis[i],
                })
                .collect(),
            pairs: r
                .pairs
                .iter()
                .map(|p| PairEntry {
                    low_category: label(p.low),
                    high_category: label(p.high),
                    diff_ci: p.diff_ci,
                    p_raw: p.p_raw,
                    p_adjusted: p.p_adjusted,
                    dominates: p.dominates,
                })
                .collect(),
            edges: r
                .network
                .labeled_edges()
                .map(|(from, to)| EdgeEntry {
                    from: from.into(),
                    to: to.into(),
                })
                .collect(),
            density: r.density,
        }
    }
}

impl AnalyzeOutput {
    /// Rebuilds the analysis result; fails on labels that are not in `order`.
    pub fn to_result(&self) -> Result<DominanceResult, domorder_core::Error> {
        let index = |label: &str| {
            self.order
                .iter()
                .position(|o| o == label)
                .ok_or_else(|| domorder_core::Error::UnknownCategory(label.into()))
        };
        let mut network = DominanceNetwork::new(self.order.clone(), self.config.alpha);
        for e in &self.edges {
            network.add_edge(index(&e.from)?, index(&e.to)?);
        }
        let pairs = self
            .pairs
            .iter()
            .map(|p| {
                Ok(PairSummary {
                    low: index(&p.low_category)?,
                    high: index(&p.high_category)?,
                    diff_ci: p.diff_ci,
                    p_raw: p.p_raw,
                    p_adjusted: p.p_adjusted,
                    dominates: p.dominates,
                })
            })
            .collect::<Result<Vec<_>, domorder_core::Error>>()?;
        Ok(DominanceResult {
            config: AnalysisConfig {
                alpha: self.config.alpha,
                reps: self.config.reps,
                ci_method: self.config.method,
                seed: self.config.seed,
            },
            order: self.order.clone(),
            sample_means: self.mean_cis.iter().map(|m| m.sample_mean).collect(),
            sample_sizes: self.mean_cis.iter().map(|m| m.n).collect(),
            mean_cis: self.mean_cis.iter().map(|m| m.ci).collect(),
            pairs,
            network,
            density: self.density,
        })
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("analysis output serializes");
        s.push('\n');
        s
    }
}

fn dot_quote(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('"');
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            c => out.push(c),
        }
    }
    out.push('"');
    out
}

/// Graphviz digraph: one node per category (labelled with its sample mean),
/// one edge per dominance, drawn dominator -> dominated.
pub fn dot(r: &DominanceResult) -> String {
    let mut out = String::from("digraph dominance {\n    rankdir=TB;\n");
    for (label, mean) in r.order.iter().zip(&r.sample_means) {
        // The label text goes through dot_quote, which escapes the literal
        // backslash of the `\n` line break.
        let text = format!("{}\nmean={}", label, mean);
        let _ = writeln!(
            out,
            "    {} [label={}];",
            dot_quote(label),
            dot_quote(&text)
        );
    }
    for (from, to) in r.network.labeled_edges() {
        let _ = writeln!(out, "    {} -> {};", dot_quote(from), dot_quote(to));
    }
    out.push_str("}\n");
    out
}

/// Plot-ready interval ladder: category mean intervals ascending by mean,
/// then every pairwise difference interval.
pub fn ci_table_csv(r: &DominanceResult) -> String {
    let mut wtr = csv::Writer::from_writer(Vec::new());
    let row = |wtr: &mut csv::Writer<Vec<u8>>,
               kind: &str,
               low: &str,
               high: &str,
               ci: &ConfidenceInterval| {
        wtr.write_record([
            kind,
            low,
            high,
            &ci.point_estimate.to_string(),
            &ci.lower.to_string(),
            &ci.upper.to_string(),
            &ci.level.to_string(),
            ci.method.as_str(),
            if ci.fallback { "true" } else { "false" },
        ])
        .expect("in-memory csv write");
    };
    wtr.write_record([
        "kind",
        "low_category",
        "high_category",
        "point_estimate",
        "lower",
        "upper",
        "level",
        "method",
        "fallback",
    ])
    .expect("in-memory csv write");
    for (label, ci) in r.order.iter().zip(&r.mean_cis) {
        row(&mut wtr, "mean", label, "", ci);
    }
    for p in &r.pairs {
        row(
            &mut wtr,
            "diff",
            &r.order[p.low],
            &r.order[p.high],
            &p.diff_ci,
        );
    }
    String::from_utf8(wtr.into_inner().expect("in-memory csv flush")).expect("utf-8 csv")
}
