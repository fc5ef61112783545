//! Adaptive Gauss–Kronrod integration along piecewise contours in the complex
//! plane, with continuous branch tracking for `(z - z0)^{a-1}` factors.

mod contour;
mod integrands;

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::f64::consts::PI;

use num::complex::Complex64;

use crate::error::{Error, Result};

pub use contour::{Contour, ContourBuilder, Piece};
pub use integrands::{builtin_integrand, Integrand, IntegrandParams};

/// Environment variable overriding [`QuadratureOptions::max_depth`].
pub const DEPTH_ENV: &str = "SADDLEPOINT_QUAD_DEPTH";

// Kronrod nodes and weights for the 15-point rule; odd indices are the
// 7-point Gauss nodes.
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];

const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];

const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureOptions {
    pub abs_tol: f64,
    pub rel_tol: f64,
    /// Maximum bisection depth of any sub-interval.
    pub max_depth: u32,
    /// Total number of bisections before giving up.
    pub max_subdivisions: usize,
}

impl Default for QuadratureOptions {
    fn default() -> Self {
        Self {
            abs_tol: 1e-13,
            rel_tol: 1e-11,
            max_depth: 40,
            max_subdivisions: 100_000,
        }
    }
}

impl QuadratureOptions {
    pub fn with_tolerances(abs_tol: f64, rel_tol: f64) -> Self {
        Self {
            abs_tol,
            rel_tol,
            ..Self::default()
        }
    }

    /// Defaults, with the depth taken from `SADDLEPOINT_QUAD_DEPTH` when set.
    pub fn from_env() -> Result<Self> {
        let mut opts = Self::default();
        if let Ok(raw) = std::env::var(DEPTH_ENV) {
            opts.max_depth = raw.trim().parse().map_err(|_| {
                Error::Precondition(format!("{DEPTH_ENV} must be a non-negative integer, got '{raw}'"))
            })?;
        }
        Ok(opts)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureResult {
    pub value: Complex64,
    /// Sum of the Kronrod/Gauss discrepancies over the final partition.
    pub error_estimate: f64,
    pub evaluations: usize,
    pub converged: bool,
}

struct Interval {
    piece: usize,
    a: f64,
    b: f64,
    depth: u32,
    value: Complex64,
    error: f64,
}

impl PartialEq for Interval {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Interval {}

impl PartialOrd for Interval {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Interval {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error
            .total_cmp(&other.error)
            .then_with(|| other.piece.cmp(&self.piece))
            .then_with(|| other.a.total_cmp(&self.a))
    }
}

/// 15-point Kronrod estimate over `[a, b]` and its distance to the embedded
/// 7-point Gauss estimate.
fn kronrod<F: Fn(f64) -> Complex64>(g: &F, a: f64, b: f64) -> (Complex64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = g(center);
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for j in 0..7 {
        let dx = half * XGK[j];
        let pair = g(center - dx) + g(center + dx);
        kronrod += pair * WGK[j];
        if j % 2 == 1 {
            gauss += pair * WG[j / 2];
        }
    }
    let k = kronrod * half;
    let e = ((kronrod - gauss) * half).norm();
    (k, e)
}

/// Integrate the parameterized pieces `g_i(t)`, `t ∈ [0, 1]`, with one global
/// error budget. Results are summed in piece order.
fn integrate_pieces<F: Fn(usize, f64) -> Complex64>(
    count: usize,
    g: F,
    opts: &QuadratureOptions,
) -> QuadratureResult {
    let mut heap = BinaryHeap::new();
    let mut finished: Vec<Interval> = Vec::new();
    let mut evaluations = 0;
    for piece in 0..count {
        let (value, error) = kronrod(&|t| g(piece, t), 0.0, 1.0);
        evaluations += 15;
        heap.push(Interval {
            piece,
            a: 0.0,
            b: 1.0,
            depth: 0,
            value,
            error,
        });
    }
    let mut subdivisions = 0;
    let mut converged = true;
    let exact_totals = |heap: &BinaryHeap<Interval>, finished: &[Interval]| {
        heap.iter()
            .chain(finished.iter())
            .fold((Complex64::new(0.0, 0.0), 0.0), |(v, e), iv| (v + iv.value, e + iv.error))
    };
    let (mut total, mut err) = exact_totals(&heap, &finished);
    loop {
        if err <= opts.abs_tol.max(opts.rel_tol * total.norm()) {
            // running sums drift; confirm before stopping
            (total, err) = exact_totals(&heap, &finished);
            if err <= opts.abs_tol.max(opts.rel_tol * total.norm()) {
                break;
            }
        }
        let Some(worst) = heap.pop() else {
            // every remaining interval hit the depth limit
            converged = false;
            break;
        };
        if worst.depth >= opts.max_depth {
            finished.push(worst);
            continue;
        }
        if subdivisions >= opts.max_subdivisions {
            heap.push(worst);
            converged = false;
            break;
        }
        subdivisions += 1;
        total -= worst.value;
        err -= worst.error;
        let mid = 0.5 * (worst.a + worst.b);
        for (a, b) in [(worst.a, mid), (mid, worst.b)] {
            let (value, error) = kronrod(&|t| g(worst.piece, t), a, b);
            evaluations += 15;
            total += value;
            err += error;
            heap.push(Interval {
                piece: worst.piece,
                a,
                b,
                depth: worst.depth + 1,
                value,
                error,
            });
        }
    }
    let mut all: Vec<Interval> = heap.into_vec();
    all.extend(finished);
    all.sort_by(|x, y| x.piece.cmp(&y.piece).then(x.a.total_cmp(&y.a)));
    let value = all.iter().fold(Complex64::new(0.0, 0.0), |acc, iv| acc + iv.value);
    let error_estimate = all.iter().map(|iv| iv.error).sum();
    QuadratureResult {
        value,
        error_estimate,
        evaluations,
        converged,
    }
}

/// `∫_c f(z) dz`.
pub fn integrate<F: Fn(Complex64) -> Complex64>(
    f: F,
    c: &Contour,
    abs_tol: f64,
    rel_tol: f64,
) -> QuadratureResult {
    integrate_with(f, c, &QuadratureOptions::with_tolerances(abs_tol, rel_tol))
}

pub fn integrate_with<F: Fn(Complex64) -> Complex64>(
    f: F,
    c: &Contour,
    opts: &QuadratureOptions,
) -> QuadratureResult {
    let pieces = c.pieces();
    integrate_pieces(
        pieces.len(),
        |i, t| {
            let p = &pieces[i];
            f(p.point(t)) * p.tangent(t)
        },
        opts,
    )
}

/// Continuous `arg(z - z0)` along one piece.
enum BranchTrack {
    /// Arc centered on `z0`: the argument is the arc angle plus a fixed offset.
    Centered { offset: f64 },
    /// Reference samples with unwrapped arguments; intermediate points add the
    /// principal argument of the ratio to the nearest sample.
    Sampled { ts: Vec<f64>, points: Vec<Complex64>, args: Vec<f64> },
}

impl BranchTrack {
    fn build(piece: &Piece, z0: Complex64, start_arg: f64) -> Self {
        if let Piece::Arc {
            center, angle_from, ..
        } = *piece
        {
            if (center - z0).norm() <= 1e-14 * (1.0 + z0.norm()) {
                return BranchTrack::Centered {
                    offset: start_arg - angle_from,
                };
            }
        }
        let mut ts: Vec<f64> = (0..=64).map(|k| k as f64 / 64.0).collect();
        // refine until consecutive samples turn by less than π/4 about z0
        let mut k = 0;
        while k + 1 < ts.len() {
            let za = piece.point(ts[k]) - z0;
            let zb = piece.point(ts[k + 1]) - z0;
            if (zb / za).arg().abs() > PI / 4.0 && ts[k + 1] - ts[k] > 1e-12 {
                ts.insert(k + 1, 0.5 * (ts[k] + ts[k + 1]));
            } else {
                k += 1;
            }
        }
        let points: Vec<Complex64> = ts.iter().map(|&t| piece.point(t)).collect();
        let mut args = Vec::with_capacity(ts.len());
        args.push(start_arg);
        for k in 1..points.len() {
            let step = ((points[k] - z0) / (points[k - 1] - z0)).arg();
            args.push(args[k - 1] + step);
        }
        BranchTrack::Sampled { ts, points, args }
    }

    fn arg(&self, piece: &Piece, z: Complex64, z0: Complex64, t: f64) -> f64 {
        match self {
            BranchTrack::Centered { offset } => match *piece {
                Piece::Arc {
                    angle_from,
                    angle_to,
                    ..
                } => offset + angle_from + (angle_to - angle_from) * t,
                Piece::Segment { .. } => unreachable!("centered tracks are built for arcs"),
            },
            BranchTrack::Sampled { ts, points, args } => {
                let idx = match ts.binary_search_by(|x| x.total_cmp(&t)) {
                    Ok(i) => i,
                    Err(i) => {
                        if i == 0 {
                            0
                        } else if i >= ts.len() || t - ts[i - 1] <= ts[i] - t {
                            i - 1
                        } else {
                            i
                        }
                    }
                };
                args[idx] + ((z - z0) / (points[idx] - z0)).arg()
            }
        }
    }

    fn end_arg(&self, piece: &Piece, z0: Complex64) -> f64 {
        self.arg(piece, piece.end(), z0, 1.0)
    }
}

fn reduce_angle(x: f64) -> f64 {
    let r = x.rem_euclid(2.0 * PI);
    if r > PI {
        r - 2.0 * PI
    } else {
        r
    }
}

/// `∫_c (z - z0)^{a-1} f(z) dz`, with `arg(z - z0)` continued from the
/// contour's initial branch angle. Without a declared angle the principal
/// argument at the start is used.
pub fn integrate_power_factor<F: Fn(Complex64) -> Complex64>(
    f: F,
    a: Complex64,
    z0: Complex64,
    c: &Contour,
    opts: &QuadratureOptions,
) -> Result<QuadratureResult> {
    let distance = c.distance_to(z0);
    if distance <= 1e-12 {
        return Err(Error::ContourThroughBranchPoint { distance });
    }
    let principal = (c.start() - z0).arg();
    let start_arg = match c.initial_branch_angle() {
        Some(angle) => {
            if reduce_angle(angle - principal).abs() > 1e-9 {
                return Err(Error::InconsistentBranchAngle { angle });
            }
            angle
        }
        None => principal,
    };
    let pieces = c.pieces();
    let mut tracks = Vec::with_capacity(pieces.len());
    let mut arg = start_arg;
    for p in pieces {
        let track = BranchTrack::build(p, z0, arg);
        arg = track.end_arg(p, z0);
        tracks.push(track);
    }
    let exponent = a - 1.0;
    Ok(integrate_pieces(
        pieces.len(),
        |i, t| {
            let p = &pieces[i];
            let z = p.point(t);
            let w = z - z0;
            let log_w = Complex64::new(w.norm().ln(), tracks[i].arg(p, z, z0, t));
            (exponent * log_w).exp() * f(z) * p.tangent(t)
        },
        opts,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn constant_over_unit_interval() {
        let r = integrate(|_| c(1.0, 0.0), &Contour::segment(c(0.0, 0.0), c(1.0, 0.0)).unwrap(), 1e-13, 1e-11);
        assert!((r.value - c(1.0, 0.0)).norm() < 1e-15);
        assert!(r.converged);
    }

    #[test]
    fn residue_of_reciprocal() {
        let circle = Contour::circle(c(0.0, 0.0), 1.0).unwrap();
        let r = integrate(|z| 1.0 / z, &circle, 1e-13, 1e-11);
        assert!((r.value - c(0.0, 2.0 * PI)).norm() < 1e-12);
    }

    #[test]
    fn non_convergence_is_flagged() {
        let opts = QuadratureOptions {
            max_subdivisions: 3,
            ..QuadratureOptions::default()
        };
        let seg = Contour::segment(c(0.0, 0.0), c(1.0, 0.0)).unwrap();
        let r = integrate_with(|z| (200.0 * z * z).sin(), &seg, &opts);
        assert!(!r.converged);
    }

    #[test]
    fn power_factor_full_circle() {
        let z0 = c(0.4, -0.3);
        let circle = Contour::circle(z0, 0.5).unwrap().with_branch_angle(0.0);
        let opts = QuadratureOptions::default();
        let r = integrate_power_factor(|_| c(1.0, 0.0), c(0.0, 0.0), z0, &circle, &opts).unwrap();
        assert!((r.value - c(0.0, 2.0 * PI)).norm() < 1e-12);
    }

    #[test]
    fn power_factor_unit_exponent_is_plain_integral() {
        let seg = Contour::segment(c(-1.0, 0.5), c(2.0, 0.7)).unwrap();
        let opts = QuadratureOptions::default();
        let f = |z: Complex64| (z * z).exp();
        let plain = integrate_with(f, &seg, &opts);
        let power = integrate_power_factor(f, c(1.0, 0.0), c(0.0, 0.0), &seg, &opts).unwrap();
        assert_eq!(plain.value, power.value);
    }

    #[test]
    fn winding_is_honored_off_center() {
        // two full turns around z0 on a circle not centered there: the sqrt
        // branch flips sign once per turn, so the two loops cancel
        let z0 = c(0.1, 0.05);
        let start = c(1.0, 0.0);
        let contour = ContourBuilder::start_at(start)
            .arc_by(c(0.0, 0.0), 4.0 * PI)
            .branch_angle((start - z0).arg())
            .build()
            .unwrap();
        let opts = QuadratureOptions::default();
        let r = integrate_power_factor(|_| c(1.0, 0.0), c(0.5, 0.0), z0, &contour, &opts).unwrap();
        assert!(r.value.norm() < 1e-11, "{}", r.value);
        let one_turn = ContourBuilder::start_at(start)
            .arc_by(c(0.0, 0.0), 2.0 * PI)
            .build()
            .unwrap();
        let r1 = integrate_power_factor(|_| c(1.0, 0.0), c(0.5, 0.0), z0, &one_turn, &opts).unwrap();
        // antiderivative 2 (z - z0)^{1/2}: the branch flip doubles the endpoint value
        let expect = -4.0 * (start - z0).sqrt();
        assert!((r1.value - expect).norm() < 1e-11, "{} vs {}", r1.value, expect);
    }

    #[test]
    fn through_branch_point_rejected() {
        let seg = Contour::segment(c(-1.0, 0.0), c(1.0, 0.0)).unwrap();
        let err = integrate_power_factor(|_| c(1.0, 0.0), c(0.5, 0.0), c(0.0, 0.0), &seg, &QuadratureOptions::default())
            .unwrap_err();
        assert!(matches!(err, Error::ContourThroughBranchPoint { .. }));
    }

    #[test]
    fn inconsistent_branch_angle_rejected() {
        let seg = Contour::segment(c(1.0, 0.0), c(2.0, 0.0)).unwrap().with_branch_angle(1.0);
        let err = integrate_power_factor(|_| c(1.0, 0.0), c(0.5, 0.0), c(0.0, 0.0), &seg, &QuadratureOptions::default())
            .unwrap_err();
        assert!(matches!(err, Error::InconsistentBranchAngle { .. }));
        let ok = Contour::segment(c(1.0, 0.0), c(2.0, 0.0))
            .unwrap()
            .with_branch_angle(2.0 * PI);
        assert!(integrate_power_factor(|_| c(1.0, 0.0), c(0.5, 0.0), c(0.0, 0.0), &ok, &QuadratureOptions::default()).is_ok());
    }

    #[test]
    fn depth_override_from_env_parses() {
        // only checks parsing; the variable is not set in the test environment
        if std::env::var(DEPTH_ENV).is_err() {
            assert_eq!(QuadratureOptions::from_env().unwrap().max_depth, 40);
        }
    }
}
