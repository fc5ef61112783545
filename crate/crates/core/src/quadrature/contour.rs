use std::f64::consts::PI;

use num::complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// One piece of a contour, parameterized over `t ∈ [0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Piece {
    Segment {
        start: Complex64,
        end: Complex64,
    },
    /// Traversed from `angle_from` to `angle_to`; `angle_to < angle_from`
    /// means clockwise.
    Arc {
        center: Complex64,
        radius: f64,
        angle_from: f64,
        angle_to: f64,
    },
}

impl Piece {
    pub fn point(&self, t: f64) -> Complex64 {
        match *self {
            Piece::Segment { start, end } => start + (end - start) * t,
            Piece::Arc {
                center,
                radius,
                angle_from,
                angle_to,
            } => center + Complex64::from_polar(radius, angle_from + (angle_to - angle_from) * t),
        }
    }

    /// `dz/dt`.
    pub fn tangent(&self, t: f64) -> Complex64 {
        match *self {
            Piece::Segment { start, end } => end - start,
            Piece::Arc {
                radius,
                angle_from,
                angle_to,
                ..
            } => {
                let sweep = angle_to - angle_from;
                let theta = angle_from + sweep * t;
                Complex64::i() * Complex64::from_polar(radius, theta) * sweep
            }
        }
    }

    pub fn start(&self) -> Complex64 {
        self.point(0.0)
    }

    pub fn end(&self) -> Complex64 {
        self.point(1.0)
    }

    pub fn reversed(&self) -> Piece {
        match *self {
            Piece::Segment { start, end } => Piece::Segment {
                start: end,
                end: start,
            },
            Piece::Arc {
                center,
                radius,
                angle_from,
                angle_to,
            } => Piece::Arc {
                center,
                radius,
                angle_from: angle_to,
                angle_to: angle_from,
            },
        }
    }

    /// The sub-piece over `[t0, t1]`.
    pub fn restrict(&self, t0: f64, t1: f64) -> Piece {
        match *self {
            Piece::Segment { .. } => Piece::Segment {
                start: self.point(t0),
                end: self.point(t1),
            },
            Piece::Arc {
                center,
                radius,
                angle_from,
                angle_to,
            } => {
                let sweep = angle_to - angle_from;
                Piece::Arc {
                    center,
                    radius,
                    angle_from: angle_from + sweep * t0,
                    angle_to: angle_from + sweep * t1,
                }
            }
        }
    }

    /// Smallest distance from the piece to `z`.
    pub fn distance_to(&self, z: Complex64) -> f64 {
        match *self {
            Piece::Segment { start, end } => {
                let d = end - start;
                let len2 = d.norm_sqr();
                if len2 == 0.0 {
                    return (z - start).norm();
                }
                let t = (((z - start) * d.conj()).re / len2).clamp(0.0, 1.0);
                (z - self.point(t)).norm()
            }
            Piece::Arc {
                center,
                radius,
                angle_from,
                angle_to,
            } => {
                let rel = z - center;
                let endpoints = (z - self.start()).norm().min((z - self.end()).norm());
                if rel.norm() == 0.0 {
                    return radius;
                }
                let (lo, hi) = if angle_from <= angle_to {
                    (angle_from, angle_to)
                } else {
                    (angle_to, angle_from)
                };
                let phi = rel.arg();
                // smallest phi + 2πn at or above lo
                let shifted = phi + 2.0 * PI * ((lo - phi) / (2.0 * PI)).ceil();
                if shifted <= hi {
                    (rel.norm() - radius).abs()
                } else {
                    endpoints
                }
            }
        }
    }

    fn validate(&self) -> Result<()> {
        match *self {
            Piece::Segment { start, end } => {
                if !(start.re.is_finite()
                    && start.im.is_finite()
                    && end.re.is_finite()
                    && end.im.is_finite())
                {
                    return Err(Error::InvalidContour("segment endpoint is not finite".into()));
                }
            }
            Piece::Arc {
                center,
                radius,
                angle_from,
                angle_to,
            } => {
                if !(radius > 0.0 && radius.is_finite()) {
                    return Err(Error::InvalidContour(format!("arc radius {radius} must be positive")));
                }
                if !(angle_from.is_finite() && angle_to.is_finite()) {
                    return Err(Error::InvalidContour("arc angles must be finite".into()));
                }
                if !(center.re.is_finite() && center.im.is_finite()) {
                    return Err(Error::InvalidContour("arc center is not finite".into()));
                }
            }
        }
        Ok(())
    }
}

/// Piecewise path of segments and circular arcs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Contour {
    pieces: Vec<Piece>,
    /// `arg(z - z0)` at the start of the path, for multivalued power factors.
    initial_branch_angle: Option<f64>,
}

fn continuity_gap(a: Complex64, b: Complex64) -> Option<f64> {
    let gap = (a - b).norm();
    (gap > 1e-12 * (1.0 + a.norm().max(b.norm()))).then_some(gap)
}

impl Contour {
    pub fn new(pieces: Vec<Piece>) -> Result<Self> {
        if pieces.is_empty() {
            return Err(Error::InvalidContour("no pieces".into()));
        }
        for p in &pieces {
            p.validate()?;
        }
        for (index, pair) in pieces.windows(2).enumerate() {
            if let Some(gap) = continuity_gap(pair[0].end(), pair[1].start()) {
                return Err(Error::DisconnectedContour {
                    index,
                    next: index + 1,
                    gap,
                });
            }
        }
        Ok(Self {
            pieces,
            initial_branch_angle: None,
        })
    }

    pub fn segment(start: Complex64, end: Complex64) -> Result<Self> {
        Self::new(vec![Piece::Segment { start, end }])
    }

    /// Full counterclockwise circle.
    pub fn circle(center: Complex64, radius: f64) -> Result<Self> {
        Self::new(vec![Piece::Arc {
            center,
            radius,
            angle_from: 0.0,
            angle_to: 2.0 * PI,
        }])
    }

    pub fn with_branch_angle(mut self, angle: f64) -> Self {
        self.initial_branch_angle = Some(angle);
        self
    }

    pub fn initial_branch_angle(&self) -> Option<f64> {
        self.initial_branch_angle
    }

    pub fn pieces(&self) -> &[Piece] {
        &self.pieces
    }

    pub fn start(&self) -> Complex64 {
        self.pieces[0].start()
    }

    pub fn end(&self) -> Complex64 {
        self.pieces[self.pieces.len() - 1].end()
    }

    /// The same path traversed backwards. The branch angle is dropped, since
    /// its value at the new start depends on the winding along the path.
    pub fn reversed(&self) -> Self {
        Self {
            pieces: self.pieces.iter().rev().map(Piece::reversed).collect(),
            initial_branch_angle: None,
        }
    }

    /// Every piece cut in two at its parameter midpoint.
    pub fn bisected(&self) -> Self {
        Self {
            pieces: self
                .pieces
                .iter()
                .flat_map(|p| [p.restrict(0.0, 0.5), p.restrict(0.5, 1.0)])
                .collect(),
            initial_branch_angle: self.initial_branch_angle,
        }
    }

    pub fn distance_to(&self, z: Complex64) -> f64 {
        self.pieces
            .iter()
            .map(|p| p.distance_to(z))
            .fold(f64::INFINITY, f64::min)
    }
}

/// Incremental construction from a start point.
#[derive(Debug, Clone)]
pub struct ContourBuilder {
    current: Complex64,
    pieces: Vec<Piece>,
    branch_angle: Option<f64>,
}

impl ContourBuilder {
    pub fn start_at(z: Complex64) -> Self {
        Self {
            current: z,
            pieces: Vec::new(),
            branch_angle: None,
        }
    }

    pub fn line_to(mut self, z: Complex64) -> Self {
        self.pieces.push(Piece::Segment {
            start: self.current,
            end: z,
        });
        self.current = z;
        self
    }

    /// Arc about `center` from the current point through `sweep` radians
    /// (positive is counterclockwise).
    pub fn arc_by(mut self, center: Complex64, sweep: f64) -> Self {
        let rel = self.current - center;
        let angle_from = rel.arg();
        let piece = Piece::Arc {
            center,
            radius: rel.norm(),
            angle_from,
            angle_to: angle_from + sweep,
        };
        self.current = piece.end();
        self.pieces.push(piece);
        self
    }

    pub fn branch_angle(mut self, angle: f64) -> Self {
        self.branch_angle = Some(angle);
        self
    }

    pub fn build(self) -> Result<Contour> {
        let mut c = Contour::new(self.pieces)?;
        c.initial_branch_angle = self.branch_angle;
        Ok(c)
    }
}
