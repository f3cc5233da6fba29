//! Serializable report structures: JSON with a top-level
//! {meta, inputs, results} shape and stable CSV tables.

use serde::Serialize;

use heun_core::qes::MatchReport;

#[derive(Serialize)]
pub struct Meta {
    pub schema_version: u32,
    pub tool: String,
    pub version: String,
}

#[derive(Serialize)]
pub struct Report<I: Serialize, R: Serialize> {
    pub meta: Meta,
    pub inputs: I,
    pub results: R,
}

#[derive(Serialize)]
pub struct SpectrumInputs {
    pub l: Vec<String>,
    pub p: f64,
    pub a: Option<f64>,
    pub order: usize,
    pub nterms: usize,
    pub levels: usize,
    pub engine: String,
}

#[derive(Serialize)]
pub struct SpectrumLevel {
    pub m: usize,
    pub sector: String,
    /// Energy coefficients E^{k} as exact rationals, in pi^2 units.
    pub coefficients: Vec<String>,
    pub energy_at_p: f64,
    pub truncation_margin: f64,
    pub decay_ratio: Option<f64>,
    pub decay_zone_half_width: Option<f64>,
}

#[derive(Serialize)]
pub struct SpectrumResults {
    /// Rational coefficients are in units of pi^2.
    pub pi2_units: bool,
    pub levels: Vec<SpectrumLevel>,
}

impl SpectrumResults {
    /// Columns: m, sector, energy_at_p, truncation_margin, decay_ratio,
    /// coefficients (semicolon-joined rationals in pi^2 units).
    pub fn to_csv(&self) -> String {
        let mut out =
            String::from("m,sector,energy_at_p,truncation_margin,decay_ratio,coefficients\n");
        for row in &self.levels {
            out.push_str(&format!(
                "{},{},{:.17e},{:.3e},{},{}\n",
                row.m,
                row.sector,
                row.energy_at_p,
                row.truncation_margin,
                row.decay_ratio
                    .map(|r| format!("{:.6e}", r))
                    .unwrap_or_default(),
                row.coefficients.join(";"),
            ));
        }
        out
    }
}

#[derive(Serialize)]
pub struct CensusRow {
    pub alpha: Vec<String>,
    pub dim: usize,
    pub hilbert: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reflected_from: Option<Vec<String>>,
    pub eigenvalues_re: Vec<f64>,
    pub eigenvalues_im: Vec<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trig_spectrum: Option<Vec<String>>,
}

#[derive(Serialize)]
pub struct MatchedPair {
    pub alpha: Vec<String>,
    pub sector: String,
    pub global_level: usize,
    pub algebraic: f64,
    pub series_value: f64,
    pub series_value_a: f64,
    pub gap: f64,
    pub gap_a: f64,
    pub truncation_margin: f64,
}

#[derive(Serialize)]
pub struct MatchOutput {
    pub hypothesis_ok: bool,
    pub warnings: Vec<String>,
    pub pairs: Vec<MatchedPair>,
}

pub fn match_report_to_output(report: &MatchReport) -> MatchOutput {
    MatchOutput {
        hypothesis_ok: report.hypothesis_ok,
        warnings: report.warnings.clone(),
        pairs: report
            .pairs
            .iter()
            .map(|p| MatchedPair {
                alpha: p.alpha.iter().map(|c| c.to_string()).collect(),
                sector: p.hilbert.label().into(),
                global_level: p.global_level,
                algebraic: p.algebraic,
                series_value: p.series_value,
                series_value_a: p.series_value_a,
                gap: p.gap,
                gap_a: p.gap_a,
                truncation_margin: p.truncation_margin,
            })
            .collect(),
    }
}

#[derive(Serialize)]
pub struct QesResults {
    /// Whether trig_spectrum columns are present (rationals in pi^2 units).
    pub pi2_units_trig: bool,
    pub census: Vec<CensusRow>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub match_bottom: Option<MatchOutput>,
}

impl QesResults {
    /// Columns: alpha0..alpha3, dim, hilbert, eigenvalues_re
    /// (semicolon-joined), eigenvalues_im (semicolon-joined), trig_spectrum
    /// (semicolon-joined rationals, present with --trig).
    pub fn to_csv(&self) -> String {
        let mut out = String::from(
            "alpha0,alpha1,alpha2,alpha3,dim,hilbert,eigenvalues_re,eigenvalues_im,trig_spectrum\n",
        );
        for row in &self.census {
            out.push_str(&format!(
                "{},{},{},{},{},{},{},{},{}\n",
                row.alpha[0],
                row.alpha[1],
                row.alpha[2],
                row.alpha[3],
                row.dim,
                row.hilbert,
                row.eigenvalues_re
                    .iter()
                    .map(|v| format!("{:.17e}", v))
                    .collect::<Vec<_>>()
                    .join(";"),
                row.eigenvalues_im
                    .iter()
                    .map(|v| format!("{:.17e}", v))
                    .collect::<Vec<_>>()
                    .join(";"),
                row.trig_spectrum
                    .as_ref()
                    .map(|s| s.join(";"))
                    .unwrap_or_default(),
            ));
        }
        out
    }
}

#[derive(Serialize)]
pub struct ValidateCheck {
    pub id: String,
    pub name: String,
    pub passed: bool,
    pub millis: f64,
    pub details: Vec<String>,
}

#[derive(Serialize)]
pub struct ValidateResults {
    pub checks: Vec<ValidateCheck>,
}
