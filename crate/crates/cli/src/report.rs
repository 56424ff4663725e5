//! Report envelope and per-command result payloads.
//!
//! Reports are deterministic for identical (argv, input files, --seed):
//! field order is fixed by the struct definitions, maps are BTreeMaps, and
//! timing is only present when requested.

use qcx_core::codes::Classification;
use qcx_core::scenario::BatteryReport;
use qcx_core::switching::{BoundCertificate, CsstAudit};
use serde::Serialize;
use sha2::{Digest, Sha256};
use std::collections::BTreeMap;

/// Accumulates a digest over every input the command consumed.
pub struct InputDigest {
    hasher: Sha256,
}

impl InputDigest {
    pub fn new() -> Self {
        InputDigest {
            hasher: Sha256::new(),
        }
    }

    pub fn add_str(&mut self, text: &str) {
        self.hasher.update((text.len() as u64).to_le_bytes());
        self.hasher.update(text.as_bytes());
    }

    pub fn finish(self) -> String {
        let bytes = self.hasher.finalize();
        bytes.iter().map(|b| format!("{b:02x}")).collect()
    }
}

#[derive(Debug, Serialize)]
pub struct Report {
    pub schema_version: u32,
    pub command: String,
    pub argv: Vec<String>,
    pub inputs_digest: String,
    pub seed: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timing_ms: Option<u128>,
    pub results: Results,
}

#[derive(Debug, Serialize)]
#[serde(untagged)]
pub enum Results {
    Analyze(AnalyzeResult),
    Closure(ClosureResult),
    Scenario(ScenarioResult),
    Switch(SwitchResult),
    Audit(AuditResult),
    Library(LibraryResult),
    Graph(GraphResult),
}

#[derive(Debug, Serialize)]
pub struct AnalyzeResult {
    pub name: String,
    pub n: usize,
    pub k: usize,
    pub s: usize,
    pub g: usize,
    pub verdict: Classification,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub kl_witness: Option<Vec<String>>,
}

#[derive(Debug, Serialize)]
pub struct ClosureResult {
    pub n: usize,
    pub cap: usize,
    pub base: Vec<String>,
    pub size: usize,
    pub elements: Vec<String>,
}

#[derive(Debug, Serialize, Default)]
pub struct ScenarioChecks {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub kirby_love: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub kl_witness: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub si_avn: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub si_avn_certificate: Option<Vec<ParityEquation>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ks_contextual: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub strongly_contextual: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub global_section: Option<Vec<u8>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub state_dependent_avn: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lp_contextual: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub global_distribution: Option<BTreeMap<String, String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub random_state_models: Option<Vec<StateCheckOutcome>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub battery: Option<BatteryReport>,
}

#[derive(Debug, Serialize)]
pub struct StateCheckOutcome {
    pub state_generators: Vec<String>,
    pub strongly_contextual: bool,
    pub state_dependent_avn: bool,
    pub lp_contextual: bool,
}

/// One Z₂ parity equation: the listed operators multiply to (-1)^rhs · I.
#[derive(Debug, Serialize)]
pub struct ParityEquation {
    pub operators: Vec<String>,
    pub rhs: u8,
}

#[derive(Debug, Serialize)]
pub struct ScenarioResult {
    pub observables: Vec<String>,
    pub closure_applied: bool,
    pub checks: ScenarioChecks,
}

#[derive(Debug, Serialize)]
pub struct CodeSummary {
    pub name: String,
    pub n: usize,
    pub k: usize,
    pub s: usize,
    pub g: usize,
}

#[derive(Debug, Serialize)]
pub struct AuditResult {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub code: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub g1_rows: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub c2_rows: Option<usize>,
    pub triorthogonal: bool,
    pub pair_violations: Vec<(usize, usize)>,
    pub triple_violations: Vec<(usize, usize, usize)>,
    pub weights_mod8_ok: Option<bool>,
    pub complement_weights_mod8_ok: Option<bool>,
    pub dim_gap: i64,
}

impl AuditResult {
    pub fn from_audit(audit: CsstAudit) -> AuditResult {
        AuditResult {
            code: None,
            g1_rows: None,
            c2_rows: None,
            triorthogonal: audit.triorthogonal,
            pair_violations: audit.pair_violations,
            triple_violations: audit.triple_violations,
            weights_mod8_ok: audit.weights_mod8_ok,
            complement_weights_mod8_ok: audit.complement_weights_mod8_ok,
            dim_gap: audit.dim_gap,
        }
    }
}

#[derive(Debug, Serialize)]
pub struct CertificateSummary {
    pub code1_css: bool,
    pub c2_inside_c1_perp: bool,
    pub code2_eta_invariant: bool,
    pub logical_representatives_checked: bool,
    pub dim_v: usize,
    pub dim_v_cap_w2: usize,
    pub bound: usize,
    pub actual_g: usize,
    pub bound_satisfied: bool,
}

impl CertificateSummary {
    pub fn from_certificate(cert: &BoundCertificate) -> CertificateSummary {
        CertificateSummary {
            code1_css: cert.hypotheses.code1_css,
            c2_inside_c1_perp: cert.hypotheses.c2_inside_c1_perp,
            code2_eta_invariant: cert.hypotheses.code2_eta_invariant,
            logical_representatives_checked: cert.hypotheses.logical_representatives_checked,
            dim_v: cert.dim_v,
            dim_v_cap_w2: cert.dim_v_cap_w2,
            bound: cert.bound,
            actual_g: cert.actual_g,
            bound_satisfied: cert.bound_satisfied,
        }
    }
}

#[derive(Debug, Serialize)]
pub struct SwitchResult {
    pub code_a: CodeSummary,
    pub code_b: CodeSummary,
    pub parent: CodeSummary,
    pub parent_gauge_rank: usize,
    pub parent_stabilizer_rank: usize,
    pub verdict: Classification,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub kl_witness: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub audit: Option<AuditResult>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bound_certificate: Option<CertificateSummary>,
}

#[derive(Debug, Serialize)]
pub struct LibraryEntry {
    #[serde(flatten)]
    pub summary: CodeSummary,
    pub documented_distance: usize,
    pub verdict: Classification,
}

#[derive(Debug, Serialize)]
pub struct LibraryResult {
    pub entries: Vec<LibraryEntry>,
}

#[derive(Debug, Serialize)]
pub struct GraphResult {
    pub vertices: Vec<String>,
    pub kirby_love: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub kl_witness: Option<Vec<String>>,
    pub universal_vertices: Vec<usize>,
    pub context_count: usize,
    pub contexts: Vec<Vec<usize>>,
}

impl Report {
    /// Plain-text rendering: one `key: value` line per leaf field.
    pub fn render_text(&self) -> String {
        let value = serde_json::to_value(self).expect("report serializes");
        let mut out = String::new();
        flatten("", &value, &mut out);
        out
    }
}

fn flatten(prefix: &str, value: &serde_json::Value, out: &mut String) {
    match value {
        serde_json::Value::Object(map) => {
            for (key, inner) in map {
                let path = if prefix.is_empty() {
                    key.clone()
                } else {
                    format!("{prefix}.{key}")
                };
                flatten(&path, inner, out);
            }
        }
        serde_json::Value::Array(items) => {
            if items.iter().all(|v| !v.is_object() && !v.is_array()) {
                let rendered: Vec<String> = items.iter().map(render_scalar).collect();
                out.push_str(&format!("{prefix}: [{}]\n", rendered.join(", ")));
            } else {
                for (i, inner) in items.iter().enumerate() {
                    flatten(&format!("{prefix}[{i}]"), inner, out);
                }
            }
        }
        scalar => out.push_str(&format!("{prefix}: {}\n", render_scalar(scalar))),
    }
}

fn render_scalar(value: &serde_json::Value) -> String {
    match value {
        serde_json::Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}
