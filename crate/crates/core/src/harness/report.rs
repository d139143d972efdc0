use std::fmt::Write as _;

use serde::Serialize;

use super::config::StudyConfig;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum StudyKind {
    ConvergeDelta,
    ConvergeBeta,
    Regularity,
    Asymptotics,
    Temporal,
}

impl StudyKind {
    pub fn name(&self) -> &'static str {
        match self {
            StudyKind::ConvergeDelta => "converge-delta",
            StudyKind::ConvergeBeta => "converge-beta",
            StudyKind::Regularity => "regularity",
            StudyKind::Asymptotics => "asymptotics",
            StudyKind::Temporal => "temporal",
        }
    }

    /// CSV header: swept, measured, reference, error.
    pub fn columns(&self) -> [&'static str; 4] {
        match self {
            StudyKind::ConvergeDelta => ["delta", "norm_nonlocal", "norm_classical", "error_norm"],
            StudyKind::ConvergeBeta => ["beta", "norm_nonlocal", "norm_classical", "error_norm"],
            StudyKind::Regularity => ["t", "fitted_decay", "predicted_decay", "abs_error"],
            StudyKind::Asymptotics => ["r", "multiplier", "asymptotic", "ratio_error"],
            StudyKind::Temporal => ["h", "quotient_norm", "derivative_norm", "error_norm"],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Row {
    pub swept: f64,
    pub measured: f64,
    pub reference: f64,
    pub error: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Verdict {
    pub name: String,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StudyReport {
    pub study: StudyKind,
    pub config: StudyConfig,
    pub columns: [&'static str; 4],
    pub rows: Vec<Row>,
    /// Index used by the error norm, when the study has one.
    pub norm_index: Option<f64>,
    pub verdicts: Vec<Verdict>,
}

impl StudyReport {
    pub(crate) fn new(study: StudyKind, config: StudyConfig) -> Self {
        StudyReport {
            study,
            config,
            columns: study.columns(),
            rows: Vec::new(),
            norm_index: None,
            verdicts: Vec::new(),
        }
    }

    pub(crate) fn verdict(&mut self, name: &str, pass: bool) {
        self.verdicts.push(Verdict {
            name: name.to_string(),
            pass,
        });
    }

    pub fn passed(&self) -> bool {
        self.verdicts.iter().all(|v| v.pass)
    }

    pub fn errors(&self) -> Vec<f64> {
        self.rows.iter().map(|r| r.error).collect()
    }

    pub fn to_csv(&self) -> String {
        let mut out = format!(
            "# study={} config={}\n{}\n",
            self.study.name(),
            self.config.canonical_json(),
            self.columns.join(",")
        );
        for r in &self.rows {
            let _ = writeln!(
                out,
                "{},{},{},{}",
                fmt_num(r.swept),
                fmt_num(r.measured),
                fmt_num(r.reference),
                fmt_num(r.error)
            );
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// Shortest round-trip decimal, switching to exponent form outside [1e-5, 1e16).
pub fn fmt_num(x: f64) -> String {
    let a = x.abs();
    if x == 0.0 || !x.is_finite() || (1e-5..1e16).contains(&a) {
        format!("{x}")
    } else {
        format!("{x:e}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn numbers_round_trip() {
        for x in [0.0, -4.0, 0.1, 1.0 / 3.0, 1e-300, -2.5e-9, 6.02e23, 123456.789] {
            assert_eq!(fmt_num(x).parse::<f64>().unwrap(), x);
        }
        assert_eq!(fmt_num(-4.0), "-4");
        assert_eq!(fmt_num(1.5e-9), "1.5e-9");
    }

    #[test]
    fn csv_layout() {
        let mut rep = StudyReport::new(StudyKind::Asymptotics, StudyConfig::default());
        rep.rows.push(Row {
            swept: 10.0,
            measured: -1.5,
            reference: -1.25,
            error: 0.2,
        });
        rep.verdict("ok", true);
        let csv = rep.to_csv();
        let lines: Vec<_> = csv.lines().collect();
        assert!(lines[0].starts_with("# study=asymptotics config={"));
        assert_eq!(lines[1], "r,multiplier,asymptotic,ratio_error");
        assert_eq!(lines[2], "10,-1.5,-1.25,0.2");
        assert!(rep.passed());
    }
}
