//! Rectifiable curves in the closed upper half plane, parametrised by arc length.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A curve in `(α, β)` coordinates of `C_m^+`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum Curve {
    Segment {
        start: [f64; 2],
        end: [f64; 2],
    },
    /// `center + radius·(cos θ, sin θ)` for θ running from `theta_start` to
    /// `theta_end` (either direction).
    CircularArc {
        center: [f64; 2],
        radius: f64,
        theta_start: f64,
        theta_end: f64,
    },
    Polyline {
        vertices: Vec<[f64; 2]>,
    },
}

fn dist(a: [f64; 2], b: [f64; 2]) -> f64 {
    (a[0] - b[0]).hypot(a[1] - b[1])
}

fn lerp(a: [f64; 2], b: [f64; 2], t: f64) -> [f64; 2] {
    [a[0] + (b[0] - a[0]) * t, a[1] + (b[1] - a[1]) * t]
}

/// Closest point of segment `ab` to `p`: `(t ∈ [0,1], distance)`.
fn project_segment(a: [f64; 2], b: [f64; 2], p: [f64; 2]) -> (f64, f64) {
    let d = [b[0] - a[0], b[1] - a[1]];
    let len2 = d[0] * d[0] + d[1] * d[1];
    let t = if len2 == 0.0 {
        0.0
    } else {
        (((p[0] - a[0]) * d[0] + (p[1] - a[1]) * d[1]) / len2).clamp(0.0, 1.0)
    };
    (t, dist(lerp(a, b, t), p))
}

impl Curve {
    /// The upper unit semicircle `{e^{mθ} : θ ∈ [0, π]}`.
    pub fn upper_unit_semicircle() -> Self {
        Curve::CircularArc {
            center: [0.0, 0.0],
            radius: 1.0,
            theta_start: 0.0,
            theta_end: PI,
        }
    }

    pub fn unit_interval() -> Self {
        Curve::Segment {
            start: [0.0, 0.0],
            end: [1.0, 0.0],
        }
    }

    /// Rejects non-finite data, empty polylines and curves dipping below `β = 0`.
    pub fn validate(&self) -> Result<()> {
        let finite = |p: &[f64; 2]| p[0].is_finite() && p[1].is_finite();
        match self {
            Curve::Segment { start, end } => {
                if !finite(start) || !finite(end) {
                    return Err(Error::Domain("segment endpoints must be finite".into()));
                }
            }
            Curve::CircularArc {
                center,
                radius,
                theta_start,
                theta_end,
            } => {
                if !finite(center) || !radius.is_finite() || *radius <= 0.0 {
                    return Err(Error::Domain("arc needs a finite center and positive radius".into()));
                }
                if !theta_start.is_finite() || !theta_end.is_finite() {
                    return Err(Error::Domain("arc angles must be finite".into()));
                }
            }
            Curve::Polyline { vertices } => {
                if vertices.len() < 2 || !vertices.iter().all(finite) {
                    return Err(Error::Domain("polyline needs at least two finite vertices".into()));
                }
            }
        }
        let low = self.min_beta();
        if low < -1e-12 {
            return Err(Error::Domain(format!("curve leaves the upper half plane (min β = {low})")));
        }
        Ok(())
    }

    fn min_beta(&self) -> f64 {
        match self {
            Curve::Segment { start, end } => start[1].min(end[1]),
            Curve::Polyline { vertices } => vertices.iter().map(|v| v[1]).fold(f64::INFINITY, f64::min),
            Curve::CircularArc {
                center,
                radius,
                theta_start,
                theta_end,
            } => {
                let (lo, hi) = (theta_start.min(*theta_end), theta_start.max(*theta_end));
                let mut m = theta_start.sin().min(theta_end.sin());
                // the bottom of the circle sits at θ = −π/2 + 2πk
                let k = ((lo + PI / 2.0) / (2.0 * PI)).ceil();
                if -PI / 2.0 + 2.0 * PI * k <= hi {
                    m = -1.0;
                }
                center[1] + radius * m
            }
        }
    }

    pub fn length(&self) -> f64 {
        match self {
            Curve::Segment { start, end } => dist(*start, *end),
            Curve::CircularArc {
                radius,
                theta_start,
                theta_end,
                ..
            } => radius * (theta_end - theta_start).abs(),
            Curve::Polyline { vertices } => vertices.windows(2).map(|w| dist(w[0], w[1])).sum(),
        }
    }

    /// Point at arc length `s`, clamped to `[0, length]`.
    pub fn point_at(&self, s: f64) -> [f64; 2] {
        let len = self.length();
        let s = s.clamp(0.0, len);
        match self {
            Curve::Segment { start, end } => {
                if len == 0.0 {
                    *start
                } else {
                    lerp(*start, *end, s / len)
                }
            }
            Curve::CircularArc {
                center,
                radius,
                theta_start,
                theta_end,
            } => {
                let dir = if theta_end >= theta_start { 1.0 } else { -1.0 };
                let th = theta_start + dir * s / radius;
                [center[0] + radius * th.cos(), center[1] + radius * th.sin()]
            }
            Curve::Polyline { vertices } => {
                let mut acc = 0.0;
                for w in vertices.windows(2) {
                    let l = dist(w[0], w[1]);
                    if s <= acc + l && l > 0.0 {
                        return lerp(w[0], w[1], (s - acc) / l);
                    }
                    acc += l;
                }
                *vertices.last().expect("validated polyline")
            }
        }
    }

    /// Closest point on the curve: `(arc-length parameter, distance)`.
    pub fn project(&self, p: [f64; 2]) -> (f64, f64) {
        match self {
            Curve::Segment { start, end } => {
                let (t, d) = project_segment(*start, *end, p);
                (t * self.length(), d)
            }
            Curve::CircularArc {
                center,
                radius,
                theta_start,
                theta_end,
            } => {
                let (lo, hi) = (theta_start.min(*theta_end), theta_start.max(*theta_end));
                let rel = [p[0] - center[0], p[1] - center[1]];
                let rho = rel[0].hypot(rel[1]);
                let phi = rel[1].atan2(rel[0]);
                let param = |th: f64| radius * (th - theta_start).abs();
                // candidates: the radial foot when it falls inside the angle range, and both ends
                let mut best = (param(*theta_start), dist(self.point_at(0.0), p));
                let end = (self.length(), dist(self.point_at(self.length()), p));
                if end.1 < best.1 {
                    best = end;
                }
                let k = ((lo - phi) / (2.0 * PI)).ceil();
                let th = phi + 2.0 * PI * k;
                if th <= hi {
                    let d = (rho - radius).abs();
                    if d < best.1 {
                        best = (param(th), d);
                    }
                }
                best
            }
            Curve::Polyline { vertices } => {
                let mut acc = 0.0;
                let mut best = (0.0, f64::INFINITY);
                for w in vertices.windows(2) {
                    let l = dist(w[0], w[1]);
                    let (t, d) = project_segment(w[0], w[1], p);
                    if d < best.1 {
                        best = (acc + t * l, d);
                    }
                    acc += l;
                }
                best
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lengths_and_points() {
        let c = Curve::upper_unit_semicircle();
        assert!((c.length() - PI).abs() < 1e-15);
        let p = c.point_at(PI / 2.0);
        assert!(p[0].abs() < 1e-15 && (p[1] - 1.0).abs() < 1e-15);
        let s = Curve::unit_interval();
        assert_eq!(s.point_at(0.25), [0.25, 0.0]);
        let poly = Curve::Polyline {
            vertices: vec![[0.0, 0.0], [1.0, 0.0], [1.0, 2.0]],
        };
        assert_eq!(poly.length(), 3.0);
        assert_eq!(poly.point_at(2.0), [1.0, 1.0]);
        let back = Curve::CircularArc {
            center: [0.0, 0.0],
            radius: 2.0,
            theta_start: PI,
            theta_end: 0.0,
        };
        let q = back.point_at(0.0);
        assert!((q[0] + 2.0).abs() < 1e-15);
    }

    #[test]
    fn projection_recovers_parameters() {
        let c = Curve::upper_unit_semicircle();
        for k in 0..=20 {
            let th = PI * k as f64 / 20.0;
            let (s, d) = c.project([th.cos(), th.sin()]);
            assert!((s - th).abs() < 1e-12 && d < 1e-15);
        }
        let (s, d) = c.project([0.0, -0.5]);
        assert!(d > 0.5 && (s == 0.0 || (s - PI).abs() < 1e-15));
        let (s, d) = c.project([0.0, 3.0]);
        assert!((s - PI / 2.0).abs() < 1e-15 && (d - 2.0).abs() < 1e-15);

        let poly = Curve::Polyline {
            vertices: vec![[0.0, 0.0], [1.0, 0.0], [1.0, 2.0]],
        };
        let (s, d) = poly.project([1.5, 1.0]);
        assert!((s - 2.0).abs() < 1e-15 && (d - 0.5).abs() < 1e-15);
    }

    #[test]
    fn validation() {
        assert!(Curve::upper_unit_semicircle().validate().is_ok());
        let full = Curve::CircularArc {
            center: [0.0, 0.0],
            radius: 1.0,
            theta_start: 0.0,
            theta_end: 2.0 * PI,
        };
        assert!(full.validate().is_err());
        let lifted = Curve::CircularArc {
            center: [0.0, 2.0],
            radius: 1.0,
            theta_start: 0.0,
            theta_end: 2.0 * PI,
        };
        assert!(lifted.validate().is_ok());
        assert!(Curve::Polyline { vertices: vec![[0.0, 0.0]] }.validate().is_err());
        assert!(Curve::Segment { start: [0.0, -1.0], end: [1.0, 0.0] }.validate().is_err());
    }

    #[test]
    fn json_forms() {
        let c: Curve = serde_json::from_str(r#"{"kind":"segment","start":[0,0],"end":[1,0]}"#).unwrap();
        assert_eq!(c, Curve::unit_interval());
        let a: Curve = serde_json::from_str(
            r#"{"kind":"circular_arc","center":[0,0],"radius":1,"theta_start":0,"theta_end":3.141592653589793}"#,
        )
        .unwrap();
        assert_eq!(a, Curve::upper_unit_semicircle());
        assert!(serde_json::from_str::<Curve>(r#"{"kind":"spiral"}"#).is_err());
    }
}
