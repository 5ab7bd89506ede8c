use crate::repr::FrameStack;
use crate::track::Trajectory;
use crate::{Error, Result};

/// Positive-to-negative event ratio below which a frame counts as a blink.
pub const DEFAULT_RATIO_THRESHOLD: f64 = 0.09;

#[derive(Debug, Clone, PartialEq)]
pub struct BlinkOutcome {
    pub trajectory: Trajectory,
    pub flagged: Vec<bool>,
    /// Set when every frame was flagged and the input was passed through.
    pub all_flagged: bool,
}

/// Flags frames whose `pos / neg` ratio is below `ratio_threshold`.
///
/// A frame with positive events and no negative ones is never flagged; an
/// empty frame always is.
pub fn blink_flags(stack: &FrameStack, ratio_threshold: f64) -> Vec<bool> {
    stack
        .frames
        .iter()
        .map(|f| {
            let (pos, neg) = (f.pos_total(), f.neg_total());
            if neg == 0 {
                pos == 0
            } else {
                (pos as f64 / neg as f64) < ratio_threshold
            }
        })
        .collect()
}

/// Replaces every flagged prediction with the nearest unflagged one,
/// preferring the earlier index on ties.
pub fn blink_override(traj: &Trajectory, stack: &FrameStack, ratio_threshold: f64) -> Result<BlinkOutcome> {
    if traj.len() != stack.len() {
        return Err(Error::arg(format!("{} predictions for {} frames", traj.len(), stack.len())));
    }
    let flagged = blink_flags(stack, ratio_threshold);
    let mut out = traj.clone();
    out.source = format!("{}+blink", traj.source);
    if flagged.iter().all(|&f| f) {
        return Ok(BlinkOutcome { trajectory: out, flagged, all_flagged: !traj.is_empty() });
    }
    // nearest unflagged index to the left and right of every sample
    let n = flagged.len();
    let mut left = vec![None; n];
    let mut last = None;
    for i in 0..n {
        if !flagged[i] {
            last = Some(i);
        }
        left[i] = last;
    }
    let mut right = vec![None; n];
    last = None;
    for i in (0..n).rev() {
        if !flagged[i] {
            last = Some(i);
        }
        right[i] = last;
    }
    for i in (0..n).filter(|&i| flagged[i]) {
        let src = match (left[i], right[i]) {
            (Some(l), Some(r)) => if i - l <= r - i { l } else { r },
            (Some(l), None) => l,
            (None, Some(r)) => r,
            (None, None) => unreachable!("at least one frame is unflagged"),
        };
        out.points[i] = traj.points[src];
    }
    Ok(BlinkOutcome { trajectory: out, flagged, all_flagged: false })
}
