//! Result type shared by the explicit inequality checks.

use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundKind {
    /// `log log N_n > log p_n − 0.123/log p_n` for `p_n ≥ 20000`.
    LoglogNLower,
    /// `f(N_n) < −0.698 log p_n + 0.220/log p_n` for `p_n ≥ 20000`.
    FPrimorialUpper,
    /// `σ(n)/n ≤ e^γ log log n + c/log log n` for `n ≥ 3`.
    SigmaUpper,
}

/// Outcome of checking one inequality over a range. `range` and `witness`
/// are primorial indices for the primorial bounds and integers `n` for the
/// σ bound. The margin is always "right side minus left side" so a
/// positive value means the inequality held.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundCheckResult {
    pub bound: BoundKind,
    pub range: (u64, u64),
    pub pass: bool,
    pub worst_margin: f64,
    pub witness: u64,
    pub cases_checked: u64,
    pub escalations: u64,
}

/// Running minimum over `(margin, witness)` pairs; first witness wins ties.
#[derive(Debug, Clone, Copy)]
pub(crate) struct WorstMargin {
    pub margin: f64,
    pub witness: u64,
    pub count: u64,
}

impl WorstMargin {
    pub fn new() -> Self {
        WorstMargin {
            margin: f64::INFINITY,
            witness: 0,
            count: 0,
        }
    }

    #[inline]
    pub fn observe(&mut self, margin: f64, witness: u64) {
        self.count += 1;
        if margin < self.margin {
            self.margin = margin;
            self.witness = witness;
        }
    }

    pub fn merge(self, later: WorstMargin) -> WorstMargin {
        let mut out = if later.margin < self.margin {
            later
        } else {
            self
        };
        out.count = self.count + later.count;
        out
    }

    pub fn finish(self, bound: BoundKind, range: (u64, u64), escalations: u64) -> BoundCheckResult {
        BoundCheckResult {
            bound,
            range,
            pass: self.margin > 0.0,
            worst_margin: self.margin,
            witness: self.witness,
            cases_checked: self.count,
            escalations,
        }
    }
}
