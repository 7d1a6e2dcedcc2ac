//! Single global Bezier curve through the DP waypoints as control points.

use crate::error::{Error, Result};
use crate::geometry::Point2;
use crate::planner::Trajectory;
use crate::radio::Criterion;
use crate::Scalar;

pub const DEFAULT_SAMPLES_PER_INTERVAL: usize = 10;

fn check_unit<T: Scalar>(t_hat: T) -> Result<()> {
    if t_hat >= T::zero() && t_hat <= T::one() {
        Ok(())
    } else {
        Err(Error::Domain(format!("curve parameter {t_hat} outside [0, 1]")))
    }
}

/// Binomial coefficient evaluated in `T` by the multiplicative formula.
fn binomial<T: Scalar>(n: usize, k: usize) -> T {
    let k = k.min(n - k);
    (0..k).fold(T::one(), |acc, j| acc * T::of_usize(n - j) / T::of_usize(j + 1))
}

/// Bernstein basis polynomial `C(n, i) (1 - t)^(n - i) t^i`.
pub fn bernstein<T: Scalar>(i: usize, n: usize, t_hat: T) -> Result<T> {
    if i > n {
        return Err(Error::Domain(format!("basis index {i} exceeds degree {n}")));
    }
    check_unit(t_hat)?;
    Ok(binomial::<T>(n, i) * (T::one() - t_hat).powi((n - i) as i32) * t_hat.powi(i as i32))
}

/// Interpolation that is exact at both ends and when `a == b`.
#[inline]
fn lerp<T: Scalar>(a: T, b: T, t: T) -> T {
    if t <= T::of(0.5) {
        a + t * (b - a)
    } else {
        b - (T::one() - t) * (b - a)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BezierCurve<T> {
    control_points: Vec<Point2<T>>,
}

impl<T: Scalar> BezierCurve<T> {
    pub fn new(control_points: Vec<Point2<T>>) -> Result<Self> {
        if control_points.len() < 2 {
            return Err(Error::Domain(format!(
                "a Bezier curve needs at least 2 control points, got {}",
                control_points.len()
            )));
        }
        Ok(Self { control_points })
    }

    pub fn degree(&self) -> usize {
        self.control_points.len() - 1
    }

    pub fn control_points(&self) -> &[Point2<T>] {
        &self.control_points
    }

    /// De Casteljau evaluation at `t_hat`.
    pub fn eval(&self, t_hat: T) -> Result<Point2<T>> {
        check_unit(t_hat)?;
        let mut pts = self.control_points.clone();
        for level in (1..pts.len()).rev() {
            for i in 0..level {
                pts[i] = Point2::new(lerp(pts[i].x, pts[i + 1].x, t_hat), lerp(pts[i].y, pts[i + 1].y, t_hat));
            }
        }
        Ok(pts[0])
    }

    /// Direct Bernstein sum. Loses accuracy at high degree; kept for
    /// comparison against [`Self::eval`].
    pub fn eval_bernstein(&self, t_hat: T) -> Result<Point2<T>> {
        let n = self.degree();
        let mut acc = Point2::new(T::zero(), T::zero());
        for (i, p) in self.control_points.iter().enumerate() {
            acc = acc + *p * bernstein(i, n, t_hat)?;
        }
        Ok(acc)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sample<T> {
    pub t_s: T,
    pub position: Point2<T>,
}

/// Bezier curve sampled uniformly in its parameter, timestamped `t = T t_hat`.
#[derive(Debug, Clone, PartialEq)]
pub struct SmoothTrajectory<T> {
    pub samples: Vec<Sample<T>>,
    pub curve: BezierCurve<T>,
    pub criterion: Criterion,
    pub samples_per_interval: usize,
    pub total_time_s: T,
}

impl<T: Scalar> SmoothTrajectory<T> {
    pub fn positions(&self) -> Vec<Point2<T>> {
        self.samples.iter().map(|s| s.position).collect()
    }
}

/// Samples the curve at `t_hat = j / (N s)`, `j = 0 ..= N s`.
pub fn smooth_trajectory<T: Scalar>(traj: &Trajectory<T>, samples_per_interval: usize) -> Result<SmoothTrajectory<T>> {
    if samples_per_interval == 0 {
        return Err(Error::Domain("samples_per_interval must be at least 1".into()));
    }
    let curve = BezierCurve::new(traj.positions())?;
    let count = curve.degree() * samples_per_interval;
    let denom = T::of_usize(count);
    let samples = (0..=count)
        .map(|j| {
            let t_hat = T::of_usize(j) / denom;
            Ok(Sample {
                t_s: traj.total_time_s * t_hat,
                position: curve.eval(t_hat)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SmoothTrajectory {
        samples,
        curve,
        criterion: traj.criterion,
        samples_per_interval,
        total_time_s: traj.total_time_s,
    })
}

/// Largest chord speed between consecutive samples, in m/s.
pub fn max_ground_speed<T: Scalar>(st: &SmoothTrajectory<T>) -> T {
    st.samples
        .windows(2)
        .map(|w| w[0].position.distance(w[1].position) / (w[1].t_s - w[0].t_s))
        .fold(T::zero(), T::max)
}
