//! Pixel error and p-accuracy.

use std::collections::BTreeMap;

use crate::event::LabelTrack;
use crate::track::Trajectory;
use crate::{Error, Result};

/// Reported accuracy thresholds, in pixels.
pub const P_THRESHOLDS: [u32; 3] = [5, 10, 15];

#[derive(Debug, Clone, PartialEq)]
pub struct EvalReport {
    /// Mean Euclidean distance over scored frames.
    pub pixel_error: f64,
    /// Fraction of scored frames with distance `<= p`.
    pub p_acc: BTreeMap<u32, f64>,
    /// Distance for every label; blink frames are still listed when excluded.
    pub per_frame: Vec<f64>,
    pub n_scored: usize,
    pub blink_excluded: bool,
}

impl EvalReport {
    pub fn p(&self, threshold: u32) -> f64 {
        self.p_acc.get(&threshold).copied().unwrap_or(f64::NAN)
    }
}

/// Fraction of `distances` within `p` pixels (inclusive).
pub fn p_accuracy(distances: &[f64], p: f64) -> f64 {
    distances.iter().filter(|&&d| d <= p).count() as f64 / distances.len() as f64
}

pub fn pixel_error(pred: &Trajectory, gt: &LabelTrack, exclude_blink: bool) -> Result<EvalReport> {
    if pred.len() != gt.len() {
        return Err(Error::arg(format!("{} predictions for {} labels", pred.len(), gt.len())));
    }
    let per_frame: Vec<f64> = pred
        .points
        .iter()
        .zip(gt.labels())
        .map(|(p, l)| (p[0] - l.x).hypot(p[1] - l.y))
        .collect();
    let scored: Vec<f64> = per_frame
        .iter()
        .zip(gt.labels())
        .filter(|(_, l)| !(exclude_blink && l.blink))
        .map(|(&d, _)| d)
        .collect();
    if scored.is_empty() {
        return Err(Error::arg("no frames to score"));
    }
    let pixel_error = scored.iter().sum::<f64>() / scored.len() as f64;
    let p_acc = P_THRESHOLDS.iter().map(|&p| (p, p_accuracy(&scored, f64::from(p)))).collect();
    Ok(EvalReport { pixel_error, p_acc, per_frame, n_scored: scored.len(), blink_excluded: exclude_blink })
}

/// One row of a comparison table.
#[derive(Debug, Clone, PartialEq)]
pub struct ComparisonRow {
    pub name: String,
    pub pixel_error: f64,
    pub p5: f64,
    pub p10: f64,
    pub p15: f64,
    pub n_scored: usize,
}

/// Rows ordered by pixel error, ties kept in input order.
pub fn compare(reports: &[(String, EvalReport)]) -> Vec<ComparisonRow> {
    let mut rows: Vec<ComparisonRow> = reports
        .iter()
        .map(|(name, r)| ComparisonRow {
            name: name.clone(),
            pixel_error: r.pixel_error,
            p5: r.p(5),
            p10: r.p(10),
            p15: r.p(15),
            n_scored: r.n_scored,
        })
        .collect();
    rows.sort_by(|a, b| a.pixel_error.total_cmp(&b.pixel_error));
    rows
}

/// `name,pixel_error,p5,p10,p15,n_scored` with four-decimal values.
pub fn report_csv(rows: &[ComparisonRow]) -> String {
    let mut out = String::from("name,pixel_error,p5,p10,p15,n_scored\n");
    for r in rows {
        out.push_str(&format!("{},{:.4},{:.4},{:.4},{:.4},{}\n", r.name, r.pixel_error, r.p5, r.p10, r.p15, r.n_scored));
    }
    out
}

/// Fixed-width table for terminals.
pub fn report_table(rows: &[ComparisonRow]) -> String {
    let width = rows.iter().map(|r| r.name.len()).max().unwrap_or(4).max(4);
    let mut out = format!("{:<width$}  {:>11}  {:>6}  {:>6}  {:>6}  {:>8}\n", "name", "pixel_error", "p5", "p10", "p15", "n_scored");
    for r in rows {
        out.push_str(&format!(
            "{:<width$}  {:>11.4}  {:>6.4}  {:>6.4}  {:>6.4}  {:>8}\n",
            r.name, r.pixel_error, r.p5, r.p10, r.p15, r.n_scored
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn gt(points: &[[f64; 2]], blinks: &[usize]) -> LabelTrack {
        LabelTrack::from_points(points.iter().enumerate().map(|(i, &p)| (p, blinks.contains(&i))))
    }

    #[test]
    fn perfect_prediction() {
        let pts = [[1.0, 2.0], [3.0, 4.0]];
        let r = pixel_error(&Trajectory::new(pts.to_vec(), "p"), &gt(&pts, &[]), true).unwrap();
        assert_eq!(r.pixel_error, 0.0);
        assert!(r.p_acc.values().all(|&v| v == 1.0));
    }

    #[test]
    fn three_four_five() {
        let pts = [[10.0, 10.0], [20.0, 5.0], [0.0, 0.0]];
        let pred: Vec<_> = pts.iter().map(|p| [p[0] + 3.0, p[1] + 4.0]).collect();
        let r = pixel_error(&Trajectory::new(pred, "p"), &gt(&pts, &[]), true).unwrap();
        assert_eq!(r.pixel_error, 5.0);
        assert_eq!((r.p(5), r.p(10), r.p(15)), (1.0, 1.0, 1.0));
    }

    #[test]
    fn half_within_ten() {
        let pts = [[0.0, 0.0], [0.0, 0.0]];
        let pred = vec![[3.0, 4.0], [5.0, 12.0]];
        let r = pixel_error(&Trajectory::new(pred, "p"), &gt(&pts, &[]), false).unwrap();
        assert_eq!(r.per_frame, vec![5.0, 13.0]);
        let pred = vec![[3.0, 4.0], [12.0, 0.0]];
        let r = pixel_error(&Trajectory::new(pred, "p"), &gt(&pts, &[]), false).unwrap();
        assert_eq!(r.p(10), 0.5);
        assert_eq!(r.p(5), 0.5);
        assert_eq!(r.p(15), 1.0);
    }

    #[test]
    fn blink_exclusion() {
        let pts = [[0.0, 0.0], [0.0, 0.0], [0.0, 0.0]];
        let pred = Trajectory::new(vec![[1.0, 0.0], [100.0, 0.0], [3.0, 0.0]], "p");
        let r = pixel_error(&pred, &gt(&pts, &[1]), true).unwrap();
        assert_eq!((r.pixel_error, r.n_scored), (2.0, 2));
        assert_eq!(r.per_frame.len(), 3);
        let r = pixel_error(&pred, &gt(&pts, &[1]), false).unwrap();
        assert_eq!(r.n_scored, 3);
        assert!(pixel_error(&pred, &gt(&pts, &[0, 1, 2]), true).is_err());
        assert!(pixel_error(&Trajectory::new(vec![], "p"), &gt(&pts, &[]), true).is_err());
    }

    #[test]
    fn compare_orders_stably() {
        let mk = |e: f64| EvalReport { pixel_error: e, p_acc: BTreeMap::new(), per_frame: vec![], n_scored: 1, blink_excluded: true };
        let rows = compare(&[("a".into(), mk(1.5)), ("b".into(), mk(1.4)), ("c".into(), mk(1.5))]);
        let names: Vec<_> = rows.iter().map(|r| r.name.as_str()).collect();
        assert_eq!(names, ["b", "a", "c"]);
        assert_eq!(compare(&[("x".into(), mk(2.0))]).len(), 1);
        let csv = report_csv(&rows[..1]);
        assert!(csv.starts_with("name,pixel_error,p5,p10,p15,n_scored\nb,1.4000,"));
        assert!(report_table(&rows).lines().nth(1).unwrap().starts_with("b "));
    }

    proptest! {
        #[test]
        fn monotone_and_bounded(pairs in prop::collection::vec(((0.0f64..80.0, 0.0f64..60.0), (-20.0f64..20.0, -20.0f64..20.0)), 1..50)) {
            let pts: Vec<[f64; 2]> = pairs.iter().map(|((x, y), _)| [*x, *y]).collect();
            let pred: Vec<[f64; 2]> = pairs.iter().map(|((x, y), (dx, dy))| [x + dx, y + dy]).collect();
            let r = pixel_error(&Trajectory::new(pred, "p"), &gt(&pts, &[]), true).unwrap();
            prop_assert!(r.pixel_error >= 0.0);
            prop_assert!(r.p(5) <= r.p(10) && r.p(10) <= r.p(15));
            let max = r.per_frame.iter().copied().fold(0.0, f64::max);
            prop_assert_eq!(p_accuracy(&r.per_frame, max), 1.0);
        }
    }
}
