use ndarray::Array2;

use super::Trajectory;
use crate::repr::FrameStack;

/// Activity-weighted centroid tracker.
///
/// Keeps a per-pixel activity map that halves every `half_life` frames and
/// accumulates both polarities. While the total activity is below
/// `min_events` the previous prediction is repeated (the frame center before
/// the first confident one).
pub fn centroid_track(stack: &FrameStack, half_life: f64, min_events: f64) -> Trajectory {
    assert!(half_life > 0.0, "half-life must be positive");
    let Some(first) = stack.frames.first() else {
        return Trajectory::new(Vec::new(), "centroid");
    };
    let (w, h) = (first.width(), first.height());
    let decay = 2f64.powf(-1.0 / half_life);
    let mut activity = Array2::<f64>::zeros((h, w));
    let mut last = [w as f64 / 2.0, h as f64 / 2.0];
    let mut points = Vec::with_capacity(stack.len());
    for frame in &stack.frames {
        activity.zip_mut_with(&frame.combined(), |a, &c| *a = *a * decay + f64::from(c));
        let (mut mass, mut sx, mut sy) = (0.0, 0.0, 0.0);
        for ((y, x), &a) in activity.indexed_iter() {
            mass += a;
            sx += a * x as f64;
            sy += a * y as f64;
        }
        if mass >= min_events && mass > 0.0 {
            last = [sx / mass, sy / mass];
        }
        points.push(last);
    }
    Trajectory::new(points, "centroid")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::repr::Frame;
    use proptest::prelude::*;

    fn stack(frames: Vec<Frame>) -> FrameStack {
        FrameStack { frames, bin_window_us: 10_000, dropped: 0 }
    }

    #[test]
    fn point_mass() {
        let mut f = Frame::zeros(20, 10);
        f.counts_neg[[7, 12]] = 5;
        let t = centroid_track(&stack(vec![f]), 1.0, 1.0);
        assert_eq!(t.points, vec![[12.0, 7.0]]);
    }

    #[test]
    fn empty_prefix_falls_back_to_center() {
        let mut f = Frame::zeros(20, 10);
        f.counts_pos[[2, 3]] = 4;
        let t = centroid_track(&stack(vec![Frame::zeros(20, 10), Frame::zeros(20, 10), f]), 2.0, 3.0);
        assert_eq!(t.points[0], [10.0, 5.0]);
        assert_eq!(t.points[1], [10.0, 5.0]);
        assert_eq!(t.points[2], [3.0, 2.0]);
    }

    #[test]
    fn symmetric_pair() {
        let mut f = Frame::zeros(11, 1);
        f.counts_pos[[0, 0]] = 3;
        f.counts_neg[[0, 10]] = 3;
        assert_eq!(centroid_track(&stack(vec![f]), 1.0, 1.0).points, vec![[5.0, 0.0]]);
    }

    #[test]
    fn below_min_events_holds_previous() {
        let mut a = Frame::zeros(8, 8);
        a.counts_pos[[1, 1]] = 10;
        let mut b = Frame::zeros(8, 8);
        b.counts_pos[[6, 6]] = 1;
        // half-life 1e-3 wipes history; the second frame alone is too weak
        let t = centroid_track(&stack(vec![a, b]), 1e-3, 5.0);
        assert_eq!(t.points, vec![[1.0, 1.0], [1.0, 1.0]]);
    }

    proptest! {
        #[test]
        fn stays_in_bounding_box(cells in prop::collection::vec((0usize..16, 0usize..12, 1u32..5), 1..30), hl in 0.5f64..8.0) {
            let mut f = Frame::zeros(16, 12);
            for &(x, y, c) in &cells {
                f.counts_pos[[y, x]] += c;
            }
            let p = centroid_track(&stack(vec![f]), hl, 0.0).points[0];
            let (xmin, xmax) = cells.iter().fold((usize::MAX, 0), |(a, b), c| (a.min(c.0), b.max(c.0)));
            let (ymin, ymax) = cells.iter().fold((usize::MAX, 0), |(a, b), c| (a.min(c.1), b.max(c.1)));
            prop_assert!(p[0] >= xmin as f64 - 1e-9 && p[0] <= xmax as f64 + 1e-9);
            prop_assert!(p[1] >= ymin as f64 - 1e-9 && p[1] <= ymax as f64 + 1e-9);
        }
    }
}
