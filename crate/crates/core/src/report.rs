//! Verdict records shared by the analysis layer and the command line.

use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Outcome {
    Pass,
    Fail,
    Skipped,
}

impl Outcome {
    pub fn from_bool(ok: bool) -> Self {
        if ok {
            Outcome::Pass
        } else {
            Outcome::Fail
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Outcome::Pass => "pass",
            Outcome::Fail => "fail",
            Outcome::Skipped => "skipped",
        }
    }
}

/// Dimension data attached to cohomology and obstruction verdicts.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Dims {
    #[serde(rename = "A_rel")]
    pub a_rel: usize,
    #[serde(rename = "H")]
    pub h: usize,
    #[serde(rename = "H_abs", skip_serializing_if = "Option::is_none")]
    pub h_abs: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub isotropy: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub kappa_tangent: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub kappa_vertical: Option<usize>,
}

/// One checked statement. Field order is the serialization order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub check: String,
    pub subject: String,
    pub verdict: Outcome,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub value: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub point: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dims: Option<Dims>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub representatives: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
    /// Paper-notation rendering of `value`/`witness` for the text report.
    #[serde(skip)]
    pub pretty: Option<String>,
}

impl Verdict {
    pub fn new(check: impl Into<String>, subject: impl Into<String>, verdict: Outcome) -> Self {
        Verdict {
            check: check.into(),
            subject: subject.into(),
            verdict,
            value: None,
            witness: None,
            point: None,
            dims: None,
            representatives: None,
            reason: None,
            pretty: None,
        }
    }

    pub fn skipped(
        check: impl Into<String>,
        subject: impl Into<String>,
        reason: impl Into<String>,
    ) -> Self {
        Verdict::new(check, subject, Outcome::Skipped).with_reason(reason)
    }

    pub fn with_value(mut self, v: impl Into<String>) -> Self {
        self.value = Some(v.into());
        self
    }

    pub fn with_witness(mut self, w: impl Into<String>) -> Self {
        self.witness = Some(w.into());
        self
    }

    pub fn with_point(mut self, p: impl Into<String>) -> Self {
        self.point = Some(p.into());
        self
    }

    pub fn with_dims(mut self, d: Dims) -> Self {
        self.dims = Some(d);
        self
    }

    pub fn with_reason(mut self, r: impl Into<String>) -> Self {
        self.reason = Some(r.into());
        self
    }

    pub fn with_pretty(mut self, p: impl Into<String>) -> Self {
        self.pretty = Some(p.into());
        self
    }

    pub fn passed(&self) -> bool {
        self.verdict != Outcome::Fail
    }
}
