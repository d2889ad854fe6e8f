//! Machine-readable run reports.
//!
//! Every document carries a `schema` tag (`twistor-gh/1`) so downstream
//! consumers can diff regression runs safely. Serialization is plain
//! `serde_json`; field order is fixed by declaration order, which makes
//! reports byte-identical for identical configurations (timestamps can be
//! suppressed for that purpose).

use crate::analysis::{Classification, GHResiduals};
use serde::{Deserialize, Serialize};

pub const SCHEMA: &str = "twistor-gh/1";

/// Classification report for one `(metric, fibermap, t)` run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GHReport {
    pub schema: String,
    pub class: String,
    /// Component bits `w1 w2 w3 w4` (`1` = present).
    pub pattern: String,
    pub residuals: GHResiduals,
    pub tol: f64,
    pub t: f64,
    /// Base sample points per run.
    pub points: usize,
    /// Fibre sample points per base point.
    pub fiber_points: usize,
    pub fibermap: String,
    pub metric: String,
    pub seed: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timestamp: Option<u64>,
}

impl GHReport {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        cls: &Classification,
        residuals: &GHResiduals,
        tol: f64,
        t: f64,
        points: usize,
        fiber_points: usize,
        fibermap: String,
        metric: String,
        seed: u64,
        timestamp: Option<u64>,
    ) -> Self {
        GHReport {
            schema: SCHEMA.to_string(),
            class: cls.class.clone(),
            pattern: cls.pattern.clone(),
            residuals: *residuals,
            tol,
            t,
            points,
            fiber_points,
            fibermap,
            metric,
            seed,
            timestamp,
        }
    }
}

fn sci(x: f64) -> String {
    format!("{x:.2e}")
}

const RESIDUAL_ROWS: [(&str, fn(&GHResiduals) -> f64); 11] = [
    ("r_total", |r| r.r_total),
    ("r_n", |r| r.r_n),
    ("r_sk", |r| r.r_sk),
    ("r_qk", |r| r.r_qk),
    ("r_124", |r| r.r_124),
    ("r_w1", |r| r.r_w1),
    ("r_d_omega", |r| r.r_d_omega),
    ("r_g1", |r| r.r_g1),
    ("r_g2", |r| r.r_g2),
    ("r_g1_n", |r| r.r_g1_n),
    ("r_g2_n", |r| r.r_g2_n),
];

/// Render one or more reports as a pretty JSON document (an object for a
/// single report, an array otherwise), ending in a newline.
pub fn to_json(reports: &[GHReport]) -> String {
    let body = if reports.len() == 1 {
        serde_json::to_string_pretty(&reports[0])
    } else {
        serde_json::to_string_pretty(reports)
    }
    .expect("report serialization cannot fail");
    format!("{body}\n")
}

/// Render reports as CSV with a header row.
pub fn to_csv(reports: &[GHReport]) -> String {
    let mut out = String::from("metric,fibermap,t,tol,points,fiber_points,seed,class,pattern");
    for (name, _) in RESIDUAL_ROWS {
        out.push(',');
        out.push_str(name);
    }
    out.push('\n');
    for r in reports {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},\"{}\",{}",
            r.metric, r.fibermap, r.t, r.tol, r.points, r.fiber_points, r.seed, r.class, r.pattern
        ));
        for (_, get) in RESIDUAL_ROWS {
            out.push(',');
            out.push_str(&sci(get(&r.residuals)));
        }
        out.push('\n');
    }
    out
}

/// Render reports for humans: residuals in scientific notation, the class
/// verdict on the last line of each block.
pub fn to_human(reports: &[GHReport]) -> String {
    let mut out = String::new();
    for (k, r) in reports.iter().enumerate() {
        if k > 0 {
            out.push('\n');
        }
        out.push_str(&format!("metric      {}\n", r.metric));
        out.push_str(&format!("fibermap    {}\n", r.fibermap));
        out.push_str(&format!("t           {}\n", r.t));
        out.push_str(&format!("tol         {}\n", sci(r.tol)));
        out.push_str(&format!(
            "samples     {} base x {} fibre (seed {})\n",
            r.points, r.fiber_points, r.seed
        ));
        out.push_str("residuals\n");
        for (name, get) in RESIDUAL_ROWS {
            out.push_str(&format!("  {name:<10} {}\n", sci(get(&r.residuals))));
        }
        out.push_str(&format!("class       {}  (pattern {})\n", r.class, r.pattern));
    }
    out
}

/// Curvature decomposition report at one chart point.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CurvatureReport {
    pub schema: String,
    pub metric: String,
    pub point: [f64; 4],
    pub scalar: f64,
    pub w_plus_eigenvalues: [f64; 3],
    pub w_minus_eigenvalues: [f64; 3],
    pub b_norm: f64,
    pub einstein: bool,
    pub self_dual: bool,
    pub anti_self_dual: bool,
    pub scalar_flat: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timestamp: Option<u64>,
}

impl CurvatureReport {
    pub fn to_json(&self) -> String {
        let body = serde_json::to_string_pretty(self).expect("report serialization cannot fail");
        format!("{body}\n")
    }

    pub fn to_human(&self) -> String {
        let ev = |v: &[f64; 3]| format!("{}, {}, {}", sci(v[0]), sci(v[1]), sci(v[2]));
        let mut out = String::new();
        out.push_str(&format!("metric      {}\n", self.metric));
        out.push_str(&format!(
            "point       [{}, {}, {}, {}]\n",
            self.point[0], self.point[1], self.point[2], self.point[3]
        ));
        out.push_str(&format!("scalar      {}\n", sci(self.scalar)));
        out.push_str(&format!("W+ eigen    {}\n", ev(&self.w_plus_eigenvalues)));
        out.push_str(&format!("W- eigen    {}\n", ev(&self.w_minus_eigenvalues)));
        out.push_str(&format!("|B|         {}\n", sci(self.b_norm)));
        out.push_str(&format!(
            "predicates  einstein={} self_dual={} anti_self_dual={} scalar_flat={}\n",
            self.einstein, self.self_dual, self.anti_self_dual, self.scalar_flat
        ));
        out
    }
}

/// One verification suite outcome.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SuiteResult {
    pub suite: String,
    pub pass: bool,
    /// Largest defect norm observed across the suite's samples.
    pub max_defect: f64,
    pub tolerance: f64,
    /// Failure details: identity, sample point, defect norm.
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub failures: Vec<String>,
}

/// Verification report: a pass/fail table over invariant suites.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub schema: String,
    pub metric: String,
    pub fibermap: String,
    pub seed: u64,
    pub all_pass: bool,
    pub suites: Vec<SuiteResult>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timestamp: Option<u64>,
}

impl VerifyReport {
    pub fn to_json(&self) -> String {
        let body = serde_json::to_string_pretty(self).expect("report serialization cannot fail");
        format!("{body}\n")
    }

    pub fn to_human(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!(
            "metric      {}\nfibermap    {}\nseed        {}\n",
            self.metric, self.fibermap, self.seed
        ));
        for s in &self.suites {
            out.push_str(&format!(
                "  {:<34} {}  max defect {}\n",
                s.suite,
                if s.pass { "PASS" } else { "FAIL" },
                sci(s.max_defect)
            ));
            for f in &s.failures {
                out.push_str(&format!("    {f}\n"));
            }
        }
        out.push_str(&format!("result      {}\n", if self.all_pass { "PASS" } else { "FAIL" }));
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample_report() -> GHReport {
        let res = GHResiduals {
            r_total: 1.234e-3,
            r_n: 0.0,
            r_sk: 5.6e-9,
            r_qk: 2.0e-2,
            r_124: 1.0e-2,
            r_w1: 3.0e-2,
            r_d_omega: 4.0e-2,
            r_g1: 0.0,
            r_g2: 1.1e-2,
            r_g1_n: 0.0,
            r_g2_n: 2.2e-2,
        };
        GHReport::new(
            &crate::analysis::Classification {
                class: "W1+W3+W4 (G1)".to_string(),
                pattern: "1011".to_string(),
            },
            &res,
            1e-7,
            1.0,
            4,
            8,
            "omega".to_string(),
            "round_sphere".to_string(),
            0,
            None,
        )
    }

    #[test]
    fn json_round_trips_and_is_stable() {
        let r = sample_report();
        let text = to_json(&[r.clone()]);
        assert!(text.starts_with("{\n  \"schema\": \"twistor-gh/1\""));
        assert!(text.ends_with('\n'));
        let back: GHReport = serde_json::from_str(&text).unwrap();
        assert_eq!(back, r);
        // Byte-identical on re-render.
        assert_eq!(text, to_json(&[back]));
    }

    #[test]
    fn timestamp_is_omitted_when_absent() {
        let mut r = sample_report();
        assert!(!to_json(&[r.clone()]).contains("timestamp"));
        r.timestamp = Some(1_700_000_000);
        assert!(to_json(&[r]).contains("\"timestamp\": 1700000000"));
    }

    #[test]
    fn csv_has_header_and_one_row_per_report() {
        let r = sample_report();
        let text = to_csv(&[r.clone(), r]);
        let lines: Vec<&str> = text.trim_end().lines().collect();
        assert_eq!(lines.len(), 3);
        assert!(lines[0].starts_with("metric,fibermap,t,tol,"));
        assert!(lines[1].contains("\"W1+W3+W4 (G1)\""));
        assert!(lines[1].contains("1011"));
    }

    #[test]
    fn human_output_ends_with_class_verdict() {
        let r = sample_report();
        let text = to_human(&[r]);
        let last = text.trim_end().lines().last().unwrap();
        assert!(last.starts_with("class"), "last line: {last}");
        assert!(last.contains("W1+W3+W4 (G1)"));
        assert!(text.contains("1.23e-3"));
    }
}
