//! Double-precision field and an adaptive Dormand–Prince integrator with sonic-line stops.

use serde::Serialize;

/// The autonomous field dW/dξ = N_W/D_W, dZ/dξ = N_Z/D_Z in floating point.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Field {
    pub gamma: f64,
    pub r: f64,
    pub alpha: f64,
}

impl Field {
    pub fn new(gamma: f64, r: f64) -> Self {
        Field { gamma, r, alpha: (gamma - 1.0) / 2.0 }
    }

    pub fn dw(&self, w: f64, z: f64) -> f64 {
        1.0 + 0.5 * (w + z + self.alpha * (w - z))
    }

    pub fn dz(&self, w: f64, z: f64) -> f64 {
        1.0 + 0.5 * (w + z - self.alpha * (w - z))
    }

    pub fn nw(&self, w: f64, z: f64) -> f64 {
        let a = self.alpha;
        -(self.r + 0.5 * ((1.0 + 2.0 * a) * w + (1.0 - a) * z)) * w + 0.5 * a * z * z
    }

    pub fn nz(&self, w: f64, z: f64) -> f64 {
        let a = self.alpha;
        -(self.r + 0.5 * ((1.0 - a) * w + (1.0 + 2.0 * a) * z)) * z + 0.5 * a * w * w
    }

    pub fn rhs(&self, w: f64, z: f64) -> [f64; 2] {
        [self.nw(w, z) / self.dw(w, z), self.nz(w, z) / self.dz(w, z)]
    }
}

/// Which denominator reached zero.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Denominator {
    DW,
    DZ,
}

/// Why an integration stopped.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(tag = "kind")]
pub enum Stop {
    Reached,
    /// The trajectory hit D_W = 0 or D_Z = 0. Used by the shooting classifier.
    SonicCrossing { t: f64, which: Denominator, w: f64, z: f64 },
    /// |state| exceeded the escape bound.
    Escaped { t: f64 },
    StepLimit { t: f64 },
}

/// A planar system with two guard functions whose zeros end the integration.
pub trait System {
    fn rhs(&self, t: f64, y: [f64; 2]) -> [f64; 2];
    /// Signed (D_W, D_Z) or a multiple of them.
    fn guards(&self, t: f64, y: [f64; 2]) -> [f64; 2];
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Dopri5 {
    pub rtol: f64,
    pub atol: f64,
    pub h_init: f64,
    pub h_max: f64,
    pub max_steps: usize,
    /// |guard| below this counts as a crossing.
    pub crossing_eps: f64,
    pub escape: f64,
    /// When positive, every step is also capped at this multiple of |g|/|g'| for each guard g,
    /// so steps shrink in proportion to the distance from a sonic line.
    pub sonic_scale: f64,
}

impl Dopri5 {
    pub fn new(tol: f64) -> Self {
        Dopri5 {
            rtol: tol,
            atol: tol,
            h_init: 1e-3,
            h_max: 0.05,
            max_steps: 2_000_000,
            crossing_eps: 1e-9,
            escape: 1e12,
            sonic_scale: 0.0,
        }
    }
}

#[derive(Clone, Debug, Default)]
pub struct Trajectory {
    pub t: Vec<f64>,
    pub y: Vec<[f64; 2]>,
    /// Local error estimate of the step ending at each sample (0 for the seed).
    pub err: Vec<f64>,
}

const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;
const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const B1: f64 = 35.0 / 384.0;
const B3: f64 = 500.0 / 1113.0;
const B4: f64 = 125.0 / 192.0;
const B5: f64 = -2187.0 / 6784.0;
const B6: f64 = 11.0 / 84.0;
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

fn axpy(y: [f64; 2], h: f64, terms: &[(f64, [f64; 2])]) -> [f64; 2] {
    let mut out = y;
    for (c, k) in terms {
        out[0] += h * c * k[0];
        out[1] += h * c * k[1];
    }
    out
}

fn finite(y: [f64; 2]) -> bool {
    y[0].is_finite() && y[1].is_finite()
}

impl Dopri5 {
    /// Integrates from t0 towards t_end (either direction), stopping early on a guard zero.
    pub fn integrate<S: System>(&self, sys: &S, t0: f64, y0: [f64; 2], t_end: f64) -> (Trajectory, Stop) {
        let dir = if t_end >= t0 { 1.0 } else { -1.0 };
        let mut tr = Trajectory { t: vec![t0], y: vec![y0], err: vec![0.0] };
        let (mut t, mut y) = (t0, y0);
        let mut h = self.h_init.min((t_end - t0).abs()).max(1e-300);
        let mut k1 = sys.rhs(t, y);
        let mut g = sys.guards(t, y);
        let mut rate = {
            let eps = 1e-7 * t0.abs().max(1.0) * dir;
            let gp = sys.guards(t + eps, axpy(y, eps, &[(1.0, k1)]));
            [(gp[0] - g[0]) / eps, (gp[1] - g[1]) / eps]
        };
        for _ in 0..self.max_steps {
            if (t_end - t) * dir <= 0.0 {
                return (tr, Stop::Reached);
            }
            // Keep each step short enough that neither guard can jump across zero.
            let mut cap = self.h_max;
            for i in 0..2 {
                if rate[i] == 0.0 || !rate[i].is_finite() {
                    continue;
                }
                let reach = g[i].abs() / rate[i].abs();
                if g[i] * rate[i] * dir < 0.0 {
                    cap = cap.min(0.5 * reach);
                }
                if self.sonic_scale > 0.0 {
                    cap = cap.min(self.sonic_scale * reach);
                }
            }
            h = h.min(cap).min((t_end - t).abs());
            let hs = dir * h;
            let k2 = sys.rhs(t + C2 * hs, axpy(y, hs, &[(A21, k1)]));
            let k3 = sys.rhs(t + C3 * hs, axpy(y, hs, &[(A31, k1), (A32, k2)]));
            let k4 = sys.rhs(t + C4 * hs, axpy(y, hs, &[(A41, k1), (A42, k2), (A43, k3)]));
            let k5 = sys.rhs(t + C5 * hs, axpy(y, hs, &[(A51, k1), (A52, k2), (A53, k3), (A54, k4)]));
            let k6 = sys.rhs(t + hs, axpy(y, hs, &[(A61, k1), (A62, k2), (A63, k3), (A64, k4), (A65, k5)]));
            let yn = axpy(y, hs, &[(B1, k1), (B3, k3), (B4, k4), (B5, k5), (B6, k6)]);
            let k7 = sys.rhs(t + hs, yn);
            let e = axpy([0.0, 0.0], hs, &[(E1, k1), (E3, k3), (E4, k4), (E5, k5), (E6, k6), (E7, k7)]);
            let gn = sys.guards(t + hs, yn);
            let crossed = (0..2).any(|i| gn[i] * g[i] < 0.0);
            let ok_vals = finite(yn) && finite(k7) && finite(e) && !crossed;
            let err = if ok_vals {
                let mut s = 0.0;
                for i in 0..2 {
                    let sc = self.atol + self.rtol * y[i].abs().max(yn[i].abs());
                    s += (e[i] / sc).powi(2);
                }
                (s / 2.0).sqrt()
            } else {
                f64::INFINITY
            };
            if err <= 1.0 {
                for i in 0..2 {
                    rate[i] = (gn[i] - g[i]) / hs;
                }
                t += hs;
                y = yn;
                k1 = k7;
                g = gn;
                tr.t.push(t);
                tr.y.push(y);
                tr.err.push(err * (self.atol + self.rtol * y[0].abs().max(y[1].abs())));
                for (i, which) in [(0, Denominator::DW), (1, Denominator::DZ)] {
                    if g[i].abs() < self.crossing_eps {
                        return (tr, Stop::SonicCrossing { t, which, w: y[0], z: y[1] });
                    }
                }
                if y[0].abs().max(y[1].abs()) > self.escape {
                    return (tr, Stop::Escaped { t });
                }
                let fac = if err == 0.0 { 5.0 } else { (0.9 * err.powf(-0.2)).clamp(0.2, 5.0) };
                h *= fac;
            } else {
                h *= if err.is_finite() { (0.9 * err.powf(-0.2)).clamp(0.1, 0.5) } else { 0.25 };
                if h < 1e-14 * t.abs().max(1.0) {
                    // The step cannot shrink further: we are on top of a guard zero.
                    let which = if g[0].abs() <= g[1].abs() { Denominator::DW } else { Denominator::DZ };
                    return (tr, Stop::SonicCrossing { t, which, w: y[0], z: y[1] });
                }
            }
        }
        (tr, Stop::StepLimit { t })
    }
}

/// The field in ξ with guards (D_W, D_Z).
pub struct XiSystem(pub Field);

impl System for XiSystem {
    fn rhs(&self, _t: f64, y: [f64; 2]) -> [f64; 2] {
        self.0.rhs(y[0], y[1])
    }

    fn guards(&self, _t: f64, y: [f64; 2]) -> [f64; 2] {
        [self.0.dw(y[0], y[1]), self.0.dz(y[0], y[1])]
    }
}

/// The same field in ζ = e^ξ for (𝒲, 𝒵) = ζ(W, Z); regular at ζ = 0 along the smooth solution.
pub struct ZetaSystem(pub Field);

impl System for ZetaSystem {
    fn rhs(&self, zeta: f64, y: [f64; 2]) -> [f64; 2] {
        let (w, z) = (y[0], y[1]);
        let a = self.0.alpha;
        let r = self.0.r;
        let cross = a / (2.0 * zeta) * (w * w - z * z);
        let [vw, vz] = self.guards(zeta, y);
        [-((r - 1.0) * w + cross) / vw, -((r - 1.0) * z - cross) / vz]
    }

    fn guards(&self, zeta: f64, y: [f64; 2]) -> [f64; 2] {
        let (w, z) = (y[0], y[1]);
        let a = self.0.alpha;
        [zeta + 0.5 * (w + z + a * (w - z)), zeta + 0.5 * (w + z - a * (w - z))]
    }
}
