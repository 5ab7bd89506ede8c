//! Model-agnostic refinement of predicted trajectories.
//!
//! * [`m2f`] - median filter whose window adapts to local motion variance.
//! * [`ofe`] - nudges each prediction one pixel along the event flow in a
//!   region of interest around it.
//! * [`blink_override`] - replaces predictions on frames whose positive to
//!   negative event ratio marks a closed eye.
//!
//! Rolling windows are centered and truncated at the sequence ends.

mod blink;
mod m2f;
mod ofe;
mod variance;

pub use blink::{blink_flags, blink_override, BlinkOutcome, DEFAULT_RATIO_THRESHOLD};
pub use m2f::{adaptive_windows, m2f, percentile, rolling_median, M2FParams};
pub use ofe::{ofe, OFEParams};
pub use variance::{motion_variance, MotionMethod};

/// Centered window `[lo, hi)` of nominal size `w` around `i`, clipped to `0..n`.
pub(crate) fn centered(i: usize, n: usize, w: usize) -> (usize, usize) {
    let w = w.max(1);
    (i.saturating_sub((w - 1) / 2), (i + w / 2 + 1).min(n))
}

#[cfg(test)]
mod tests {
    use super::centered;

    #[test]
    fn centered_windows() {
        assert_eq!(centered(5, 10, 3), (4, 7));
        assert_eq!(centered(0, 10, 5), (0, 3));
        assert_eq!(centered(9, 10, 5), (7, 10));
        assert_eq!(centered(5, 10, 4), (4, 8));
        assert_eq!(centered(3, 10, 1), (3, 4));
    }
}
