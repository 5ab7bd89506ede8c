use super::{centered, motion_variance, MotionMethod};
use crate::track::Trajectory;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct M2FParams {
    pub w_base: usize,
    pub w_min: usize,
    pub w_max: usize,
    /// Percentile in `[0, 100]`.
    pub percentile: f64,
    pub method: MotionMethod,
}

impl Default for M2FParams {
    fn default() -> Self {
        Self { w_base: 15, w_min: 3, w_max: 21, percentile: 75.0, method: MotionMethod::Velocity }
    }
}

impl M2FParams {
    pub fn validate(&self) -> Result<()> {
        if self.w_base < 3 {
            return Err(Error::arg("w_base must be >= 3"));
        }
        if self.w_min.is_multiple_of(2) || self.w_max.is_multiple_of(2) || self.w_min > self.w_max {
            return Err(Error::arg(format!("w_min {} and w_max {} must be odd with w_min <= w_max", self.w_min, self.w_max)));
        }
        if !(0.0..=100.0).contains(&self.percentile) {
            return Err(Error::arg(format!("percentile {} outside [0, 100]", self.percentile)));
        }
        Ok(())
    }
}

/// Linearly interpolated percentile of `values` (`p` in `[0, 100]`).
pub fn percentile(values: &[f64], p: f64) -> f64 {
    if values.is_empty() {
        return 0.0;
    }
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let rank = p / 100.0 * (v.len() - 1) as f64;
    let (lo, hi) = (rank.floor() as usize, rank.ceil() as usize);
    v[lo] + (v[hi] - v[lo]) * (rank - lo as f64)
}

fn nearest_odd(v: f64) -> usize {
    let k = ((v - 1.0) / 2.0).round().max(0.0);
    2 * k as usize + 1
}

/// Median window size chosen for every sample.
pub fn adaptive_windows(traj: &Trajectory, params: &M2FParams) -> Result<Vec<usize>> {
    params.validate()?;
    let n = traj.len();
    let variance = motion_variance(traj, params.method, params.w_base);
    let smoothed: Vec<f64> = (0..n)
        .map(|i| {
            let (lo, hi) = centered(i, n, params.w_base);
            variance[lo..hi].iter().sum::<f64>() / (hi - lo) as f64
        })
        .collect();
    let (w_min, w_max) = (params.w_min as f64, params.w_max as f64);
    let median_window: Vec<f64> = smoothed.iter().map(|v| v.clamp(w_min, w_max)).collect();
    Ok((0..n)
        .map(|i| {
            let (lo, hi) = centered(i, n, params.w_base);
            nearest_odd(percentile(&median_window[lo..hi], params.percentile).clamp(w_min, w_max))
        })
        .collect())
}

/// Median of each centered window; `windows[i]` is the size at sample `i`.
/// Even-sized truncated windows average their two middle values.
pub fn rolling_median(values: &[f64], windows: &[usize]) -> Vec<f64> {
    assert_eq!(values.len(), windows.len(), "one window per sample");
    let n = values.len();
    let mut buf = Vec::new();
    (0..n)
        .map(|i| {
            let (lo, hi) = centered(i, n, windows[i]);
            buf.clear();
            buf.extend_from_slice(&values[lo..hi]);
            let mid = buf.len() / 2;
            let even = buf.len() % 2 == 0;
            let (below, &mut upper, _) = buf.select_nth_unstable_by(mid, f64::total_cmp);
            if even {
                let lower = below.iter().copied().fold(f64::NEG_INFINITY, f64::max);
                (lower + upper) / 2.0
            } else {
                upper
            }
        })
        .collect()
}

/// Motion-aware median filtering.
pub fn m2f(traj: &Trajectory, params: &M2FParams) -> Result<Trajectory> {
    let windows = adaptive_windows(traj, params)?;
    let xs = rolling_median(&traj.xs(), &windows);
    let ys = rolling_median(&traj.ys(), &windows);
    Ok(Trajectory::new(xs.into_iter().zip(ys).map(|(x, y)| [x, y]).collect(), format!("{}+m2f", traj.source)))
}
