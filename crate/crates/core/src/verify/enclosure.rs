//! Degree-8 fits enclosing r3 and r4 on the two desingularized charts.

use crate::error::{Error, Result};
use crate::rigor::Interval;

use super::chart::inv_r;

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
pub enum Enclosure {
    /// β with k = 3 on the Inv chart.
    Beta3,
    /// β with k = 4 on the Inv chart.
    Beta4,
    /// r̃ with k = 3 on the Tilde chart.
    RTilde3,
    /// r̃ with k = 4 on the Tilde chart.
    RTilde4,
}

// Highest degree first.
const BETA3: [&str; 9] = [
    "-0.12274496668801302",
    "0.42078810964241387",
    "-0.623996430280739",
    "0.4105016227331515",
    "0.20672452719140819",
    "-1.0572166089549326",
    "1.804198700610401",
    "-0.35416295479734694",
    "0.09216512413383933",
];

const BETA4: [&str; 9] = [
    "-0.04469537027555534",
    "0.27333057184133175",
    "-0.7172811883027264",
    "0.9255018926764634",
    "-0.4952968302717332",
    "-0.6817068021865448",
    "1.8794062687026156",
    "-1.0362653478653305",
    "0.6762522531779247",
];

const RTILDE3: [&str; 9] = [
    "0.09392690553697411",
    "-0.3363741361244845",
    "0.5513544011557324",
    "-0.5710884266256",
    "0.4505971463229239",
    "-0.32115040618229174",
    "0.24173426626160457",
    "-0.21483992525100962",
    "0.23629194339166726",
];

const RTILDE4: [&str; 9] = [
    "0.7369577696743462",
    "-2.476607964088619",
    "3.6967109911654594",
    "-3.320007066074928",
    "2.109818405804556",
    "-1.1104281066548274",
    "0.5846458732584942",
    "-0.3748810478043647",
    "0.3333325002740763",
];

impl Enclosure {
    pub fn coefficients(self) -> &'static [&'static str; 9] {
        match self {
            Enclosure::Beta3 => &BETA3,
            Enclosure::Beta4 => &BETA4,
            Enclosure::RTilde3 => &RTILDE3,
            Enclosure::RTilde4 => &RTILDE4,
        }
    }

    pub fn slack(self) -> &'static str {
        match self {
            Enclosure::Beta3 | Enclosure::Beta4 => "1e-7",
            Enclosure::RTilde3 | Enclosure::RTilde4 => "1e-6",
        }
    }

    pub fn order(self) -> i64 {
        match self {
            Enclosure::Beta3 | Enclosure::RTilde3 => 3,
            Enclosure::Beta4 | Enclosure::RTilde4 => 4,
        }
    }

    pub fn on_inv_chart(self) -> bool {
        matches!(self, Enclosure::Beta3 | Enclosure::Beta4)
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "beta3" | "r3_low" => Ok(Enclosure::Beta3),
            "beta4" | "r3_high" => Ok(Enclosure::Beta4),
            "r3_tilde" => Ok(Enclosure::RTilde3),
            "r4_tilde" => Ok(Enclosure::RTilde4),
            _ => Err(Error::InvalidArgument(format!("unknown enclosure {s:?}"))),
        }
    }
}

/// Enclosure of β_j (Inv chart, γ_inv ∈ [0, 3/5]) or r̃_j (Tilde chart, γ̃ ∈ [0, 2/3]).
pub fn r34_enclosure(chart_gamma: &Interval, which: Enclosure) -> Result<Interval> {
    let prec = chart_gamma.prec();
    let zero = Interval::zero(prec);
    let top = if which.on_inv_chart() { Interval::ratio(3, 5, prec) } else { Interval::ratio(2, 3, prec) };
    if chart_gamma.lo() < zero.lo() || chart_gamma.hi() > top.hi() {
        return Err(Error::OutOfChart(format!(
            "{which:?} is defined for chart gamma in [0, {}]",
            if which.on_inv_chart() { "3/5" } else { "2/3" }
        )));
    }
    let mut acc = Interval::zero(prec);
    for c in which.coefficients() {
        acc = acc * chart_gamma + Interval::decimal(c, prec)?;
    }
    let s = Interval::decimal(which.slack(), prec)?;
    let widen = Interval::new((-&s).lo().clone(), s.hi().clone())?;
    Ok(acc + widen)
}

/// The same enclosure mapped to r.
pub fn enclosure_r(chart_gamma: &Interval, which: Enclosure) -> Result<Interval> {
    let v = r34_enclosure(chart_gamma, which)?;
    Ok(if which.on_inv_chart() { inv_r(chart_gamma, &v) } else { 1i64 + chart_gamma * &v })
}
