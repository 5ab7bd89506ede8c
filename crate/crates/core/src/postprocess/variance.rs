use std::fmt;
use std::str::FromStr;

use super::centered;
use crate::track::Trajectory;
use crate::Error;

/// How local motion is summarized inside each window.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum MotionMethod {
    /// `var(x) + var(y)` of positions.
    Displacement,
    /// Variance of step lengths.
    #[default]
    Velocity,
    /// Variance of second-difference magnitudes.
    Acceleration,
    /// `|cov(x, y)|` of positions.
    Covariance,
    /// Spread of step vectors around their window mean.
    Frequency,
}

impl FromStr for MotionMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        Ok(match s.to_ascii_lowercase().as_str() {
            "displacement" => Self::Displacement,
            "velocity" => Self::Velocity,
            "acceleration" => Self::Acceleration,
            "covariance" => Self::Covariance,
            "frequency" => Self::Frequency,
            other => return Err(Error::Argument(format!("unknown motion method `{other}`"))),
        })
    }
}

impl fmt::Display for MotionMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Self::Displacement => "displacement",
            Self::Velocity => "velocity",
            Self::Acceleration => "acceleration",
            Self::Covariance => "covariance",
            Self::Frequency => "frequency",
        };
        f.write_str(s)
    }
}

fn mean(v: &[f64]) -> f64 {
    if v.is_empty() {
        0.0
    } else {
        v.iter().sum::<f64>() / v.len() as f64
    }
}

fn var(v: &[f64]) -> f64 {
    let m = mean(v);
    mean(&v.iter().map(|x| (x - m) * (x - m)).collect::<Vec<_>>())
}

fn cov(a: &[f64], b: &[f64]) -> f64 {
    let (ma, mb) = (mean(a), mean(b));
    mean(&a.iter().zip(b).map(|(x, y)| (x - ma) * (y - mb)).collect::<Vec<_>>())
}

/// Per-sample motion variance over a centered `w_base` window.
///
/// Differences are taken only between samples inside the same window.
/// Trajectories shorter than three samples yield zeros.
pub fn motion_variance(traj: &Trajectory, method: MotionMethod, w_base: usize) -> Vec<f64> {
    let n = traj.len();
    if n < 3 {
        return vec![0.0; n];
    }
    let (xs, ys) = (traj.xs(), traj.ys());
    let dx: Vec<f64> = xs.windows(2).map(|w| w[1] - w[0]).collect();
    let dy: Vec<f64> = ys.windows(2).map(|w| w[1] - w[0]).collect();
    (0..n)
        .map(|i| {
            let (lo, hi) = centered(i, n, w_base);
            // step j spans samples j..=j+1
            let steps = lo..hi.saturating_sub(1).max(lo);
            match method {
                MotionMethod::Displacement => var(&xs[lo..hi]) + var(&ys[lo..hi]),
                MotionMethod::Covariance => cov(&xs[lo..hi], &ys[lo..hi]).abs(),
                MotionMethod::Velocity => {
                    var(&steps.map(|j| dx[j].hypot(dy[j])).collect::<Vec<_>>())
                }
                MotionMethod::Frequency => var(&dx[steps.clone()]) + var(&dy[steps]),
                MotionMethod::Acceleration => {
                    let acc: Vec<f64> = (lo..hi.saturating_sub(2).max(lo))
                        .map(|j| (dx[j + 1] - dx[j]).hypot(dy[j + 1] - dy[j]))
                        .collect();
                    var(&acc)
                }
            }
        })
        .collect()
}
