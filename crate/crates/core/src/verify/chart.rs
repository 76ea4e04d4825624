use rug::Float;
use serde::Serialize;

use crate::algebra::GasParams;
use crate::error::{Error, Result};
use crate::rigor::Interval;

/// Parameter charts. `Tilde` uses (γ̃, r̃) = (γ − 1, (r − 1)/(γ − 1)); `Inv` uses
/// (γ_inv, β) = (1/γ, β) with r = 13/10 − (5/12)γ_inv + (3/20)β.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Chart {
    Raw,
    Tilde,
    Inv,
}

impl Chart {
    pub fn parse(s: &str) -> Result<Chart> {
        match s {
            "raw" => Ok(Chart::Raw),
            "tilde" => Ok(Chart::Tilde),
            "inv" => Ok(Chart::Inv),
            _ => Err(Error::InvalidArgument(format!("unknown chart {s:?}"))),
        }
    }

    /// Preferred y-width / x-width ratio when splitting.
    pub fn default_aspect(self) -> f64 {
        match self {
            Chart::Raw => 1.0,
            Chart::Tilde => 0.2,
            Chart::Inv => 10.0,
        }
    }
}

/// r on the Inv chart.
pub fn inv_r(u: &Interval, beta: &Interval) -> Interval {
    let prec = u.prec().max(beta.prec());
    Interval::ratio(13, 10, prec) - u * Interval::ratio(5, 12, prec) + beta * Interval::ratio(3, 20, prec)
}

/// β on the Inv chart.
pub fn inv_beta(u: &Interval, r: &Interval) -> Interval {
    let prec = u.prec().max(r.prec());
    (r - Interval::ratio(13, 10, prec) + u * Interval::ratio(5, 12, prec)) * Interval::ratio(20, 3, prec)
}

#[derive(Clone, Debug)]
pub struct ParamBox {
    pub chart: Chart,
    pub x: Interval,
    pub y: Interval,
    pub depth: u32,
}

impl ParamBox {
    pub fn new(chart: Chart, x: Interval, y: Interval) -> Self {
        ParamBox { chart, x, y, depth: 0 }
    }

    pub fn from_f64s(chart: Chart, x: (f64, f64), y: (f64, f64), prec: u32) -> Result<Self> {
        Ok(ParamBox::new(
            chart,
            Interval::from_f64s(x.0, x.1, prec)?,
            Interval::from_f64s(y.0, y.1, prec)?,
        ))
    }

    pub fn point(chart: Chart, x: f64, y: f64, prec: u32) -> Self {
        ParamBox::new(chart, Interval::point(x, prec), Interval::point(y, prec))
    }

    pub fn with_prec(&self, prec: u32) -> Self {
        ParamBox { chart: self.chart, x: self.x.with_prec(prec), y: self.y.with_prec(prec), depth: self.depth }
    }

    pub fn prec(&self) -> u32 {
        self.x.prec().max(self.y.prec())
    }

    /// Raw parameters (γ, r). The Inv chart needs γ_inv bounded away from 0.
    pub fn gas(&self) -> Result<GasParams> {
        match self.chart {
            Chart::Raw => Ok(GasParams::new(self.x.clone(), self.y.clone())),
            Chart::Tilde => {
                let gamma = &self.x + 1i64;
                let r = 1i64 + &self.x * &self.y;
                Ok(GasParams::new(gamma, r))
            }
            Chart::Inv => {
                if !self.x.is_positive() {
                    return Err(Error::OutOfChart("gamma_inv must be positive for raw conversion".into()));
                }
                let gamma = self.x.recip()?;
                Ok(GasParams::new(gamma, inv_r(&self.x, &self.y)))
            }
        }
    }

    /// (γ_inv, r); finite at γ_inv = 0 on the Inv chart.
    pub fn inv_r_pair(&self) -> Result<(Interval, Interval)> {
        match self.chart {
            Chart::Raw => Ok((self.x.recip()?, self.y.clone())),
            Chart::Tilde => Ok(((&self.x + 1i64).recip()?, 1i64 + &self.x * &self.y)),
            Chart::Inv => Ok((self.x.clone(), inv_r(&self.x, &self.y))),
        }
    }

    /// Chart coordinates of raw (γ, r).
    pub fn from_raw(chart: Chart, gamma: &Interval, r: &Interval) -> Result<Self> {
        let (x, y) = match chart {
            Chart::Raw => (gamma.clone(), r.clone()),
            Chart::Tilde => {
                let gt = gamma - 1i64;
                let rt = (r - 1i64).try_div(&gt)?;
                (gt, rt)
            }
            Chart::Inv => {
                let u = gamma.recip()?;
                let b = inv_beta(&u, r);
                (u, b)
            }
        };
        Ok(ParamBox::new(chart, x, y))
    }

    pub fn widths(&self) -> (f64, f64) {
        (self.x.width_f64(), self.y.width_f64())
    }

    pub fn max_width(&self) -> f64 {
        let (a, b) = self.widths();
        a.max(b)
    }

    pub fn center(&self) -> ParamBox {
        ParamBox { chart: self.chart, x: self.x.mid_point(), y: self.y.mid_point(), depth: self.depth }
    }

    /// Splits y when its width exceeds `aspect` times the x-width, x otherwise.
    pub fn split(&self, aspect: f64) -> (ParamBox, ParamBox) {
        let (wx, wy) = self.widths();
        let along_y = wx == 0.0 || (wy > 0.0 && wy > aspect * wx);
        let child = |x: Interval, y: Interval| ParamBox { chart: self.chart, x, y, depth: self.depth + 1 };
        if along_y {
            let (a, b) = self.y.bisect();
            (child(self.x.clone(), a), child(self.x.clone(), b))
        } else {
            let (a, b) = self.x.bisect();
            (child(a, self.y.clone()), child(b, self.y.clone()))
        }
    }

    pub fn contains_point(&self, x: &Float, y: &Float) -> bool {
        self.x.contains_float(x) && self.y.contains_float(y)
    }

    /// Parses "x0,x1,y0,y1".
    pub fn parse(chart: Chart, s: &str, prec: u32) -> Result<Self> {
        let parts: Vec<&str> = s.split(',').map(str::trim).collect();
        if parts.len() != 4 {
            return Err(Error::InvalidArgument(format!("region needs four numbers, got {s:?}")));
        }
        let iv = |a: &str, b: &str| -> Result<Interval> {
            let lo = Interval::decimal(a, prec)?;
            let hi = Interval::decimal(b, prec)?;
            Interval::new(lo.lo().clone(), hi.hi().clone())
        };
        Ok(ParamBox::new(chart, iv(parts[0], parts[1])?, iv(parts[2], parts[3])?))
    }
}
