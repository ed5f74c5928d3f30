use std::fmt;

use crate::scalar::Scalar;

/// One evaluated instance of a law: `lhs <= rhs` up to `tolerance`.
///
/// Equality laws are encoded as `discrepancy <= 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome<S> {
    pub lhs: S,
    pub rhs: S,
    pub tolerance: S,
    /// Premises failed; the instance says nothing.
    pub vacuous: bool,
}

impl<S: Scalar> Outcome<S> {
    pub fn inequality(lhs: S, rhs: S, tolerance: S) -> Self {
        Outcome {
            lhs,
            rhs,
            tolerance,
            vacuous: false,
        }
    }

    pub fn equality(discrepancy: S) -> Self {
        Outcome::inequality(discrepancy, S::zero(), S::weight_tolerance())
    }

    pub fn vacuous() -> Self {
        Outcome {
            lhs: S::zero(),
            rhs: S::zero(),
            tolerance: S::zero(),
            vacuous: true,
        }
    }

    pub fn slack(&self) -> S {
        self.rhs.clone() - self.lhs.clone()
    }

    pub fn holds(&self) -> bool {
        self.vacuous || self.slack() >= -self.tolerance.clone()
    }

    /// Combines two outcomes that must both hold (keeps the tighter one).
    pub fn and(self, other: Outcome<S>) -> Outcome<S> {
        match (self.vacuous, other.vacuous) {
            (true, _) => other,
            (_, true) => self,
            _ => {
                let a = self.slack() + self.tolerance.clone();
                let b = other.slack() + other.tolerance.clone();
                if a <= b {
                    self
                } else {
                    other
                }
            }
        }
    }
}

/// Aggregate of many trials of one law.
#[derive(Debug, Clone, PartialEq)]
pub struct LawReport {
    pub law: String,
    pub context: String,
    pub p: Option<f64>,
    pub trials: usize,
    pub failures: usize,
    pub vacuous: usize,
    /// Minimum of `rhs - lhs` over non-vacuous trials; `+inf` when none.
    pub worst_slack: f64,
    pub tolerance: f64,
    pub witness: Option<String>,
}

impl LawReport {
    pub fn new(law: impl Into<String>, tolerance: f64) -> Self {
        LawReport {
            law: law.into(),
            context: String::new(),
            p: None,
            trials: 0,
            failures: 0,
            vacuous: 0,
            worst_slack: f64::INFINITY,
            tolerance,
            witness: None,
        }
    }

    pub fn with_context(mut self, context: impl Into<String>) -> Self {
        self.context = context.into();
        self
    }

    pub fn with_order(mut self, p: f64) -> Self {
        self.p = Some(p);
        self
    }

    /// Pass/fail is decided in the outcome's own arithmetic, so exact mode
    /// never depends on float rounding.
    pub fn record<S: Scalar>(&mut self, outcome: &Outcome<S>, witness: impl FnOnce() -> String) {
        self.trials += 1;
        if outcome.vacuous {
            self.vacuous += 1;
            return;
        }
        let slack = outcome.slack().to_f64();
        if slack < self.worst_slack {
            self.worst_slack = slack;
        }
        if !outcome.holds() {
            self.failures += 1;
            if self.witness.is_none() {
                self.witness = Some(witness());
            }
        }
    }

    pub fn record_error(&mut self, message: String) {
        self.trials += 1;
        self.failures += 1;
        self.worst_slack = f64::NEG_INFINITY;
        if self.witness.is_none() {
            self.witness = Some(message);
        }
    }

    /// Associative merge of two batches of the same law.
    pub fn merge(mut self, other: LawReport) -> LawReport {
        self.trials += other.trials;
        self.failures += other.failures;
        self.vacuous += other.vacuous;
        self.worst_slack = self.worst_slack.min(other.worst_slack);
        if self.witness.is_none() {
            self.witness = other.witness;
        }
        self
    }

    pub fn passed(&self) -> bool {
        self.failures == 0
    }

    pub fn csv_header() -> &'static str {
        "context,law,p,trials,failures,vacuous,worst_slack,tolerance,status"
    }

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{:e},{:e},{}",
            self.context,
            self.law,
            self.p.map(|p| p.to_string()).unwrap_or_default(),
            self.trials,
            self.failures,
            self.vacuous,
            self.worst_slack,
            self.tolerance,
            if self.passed() { "pass" } else { "FAIL" }
        )
    }
}

impl fmt::Display for LawReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let p = self.p.map(|p| format!("p={p}")).unwrap_or_default();
        write!(
            f,
            "{:<8} {:<26} {:<6} trials={:<6} failures={:<4} vacuous={:<5} worst_slack={:<12.4e} {}",
            self.context,
            self.law,
            p,
            self.trials,
            self.failures,
            self.vacuous,
            self.worst_slack,
            if self.passed() { "pass" } else { "FAIL" }
        )?;
        if let Some(w) = &self.witness {
            write!(f, "  witness: {w}")?;
        }
        Ok(())
    }
}

/// Renders reports as an aligned text table or CSV.
pub fn render_reports(reports: &[LawReport], csv: bool) -> String {
    let mut out = String::new();
    if csv {
        out.push_str(LawReport::csv_header());
        out.push('\n');
        for r in reports {
            out.push_str(&r.csv_row());
            out.push('\n');
        }
    } else {
        for r in reports {
            out.push_str(&r.to_string());
            out.push('\n');
        }
    }
    out
}
