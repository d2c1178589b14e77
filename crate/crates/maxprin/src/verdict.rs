use serde::Serialize;

/// Which pointwise hypothesis a verdict tested.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Hypothesis {
    WeightedBound,
    DecayAtInfinity,
    PuncturedPower,
    PuncturedLog,
}

/// Outcome of sampling one maximum-principle hypothesis. `margin` is the
/// minimum over the sample set of bound(x) - c(x); `holds` is exactly
/// `margin >= 0`; `worst_point` is the first sample attaining the minimum.
#[derive(Clone, Debug, Serialize)]
pub struct MaxPrinVerdict {
    pub hypothesis: Hypothesis,
    pub holds: bool,
    pub margin: f64,
    pub worst_point: Vec<f64>,
    pub params: serde_json::Value,
}

impl MaxPrinVerdict {
    pub(crate) fn from_margin(
        hypothesis: Hypothesis,
        margin: f64,
        worst_point: Vec<f64>,
        params: serde_json::Value,
    ) -> Self {
        MaxPrinVerdict {
            hypothesis,
            holds: margin >= 0.0,
            margin,
            worst_point,
            params,
        }
    }
}
