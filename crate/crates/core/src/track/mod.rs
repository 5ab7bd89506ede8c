//! Trackers producing per-label pupil trajectories.

mod attention;
mod centroid;
mod linear;

use std::path::Path;

pub use attention::{attention_weights, attention_with_bias, brat_attention, build_bias, AttentionConfig, HeadBias};
pub use centroid::centroid_track;
pub use linear::{
    features_from_stack, loss_gradient, predict_linear, read_model_csv, rmse_time_loss, train_linear, write_model_csv,
    LinearModel, TrainConfig, TrainReport,
};

use crate::event::{fmt_coord, write_file};
use crate::{Error, Result};

/// Predicted pupil centers, one per label.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub points: Vec<[f64; 2]>,
    pub source: String,
}

impl Trajectory {
    pub fn new(points: Vec<[f64; 2]>, source: impl Into<String>) -> Self {
        Self { points, source: source.into() }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn xs(&self) -> Vec<f64> {
        self.points.iter().map(|p| p[0]).collect()
    }

    pub fn ys(&self) -> Vec<f64> {
        self.points.iter().map(|p| p[1]).collect()
    }
}

/// Writes `idx,x,y` rows numbered from `first_index`.
pub fn write_trajectory_csv(traj: &Trajectory, first_index: u64, path: impl AsRef<Path>) -> Result<()> {
    let mut out = String::from("idx,x,y\n");
    for (i, p) in traj.points.iter().enumerate() {
        out.push_str(&format!("{},{},{}\n", first_index + i as u64, fmt_coord(p[0]), fmt_coord(p[1])));
    }
    write_file(path.as_ref(), out.as_bytes())
}

/// Reads an `idx,x,y` trajectory; indices must be consecutive. The source tag
/// is the file stem.
pub fn read_trajectory_csv(path: impl AsRef<Path>) -> Result<Trajectory> {
    read_indexed_trajectory_csv(path).map(|(_, t)| t)
}

/// Like [`read_trajectory_csv`], also returning the first `idx` (0 when empty).
pub fn read_indexed_trajectory_csv(path: impl AsRef<Path>) -> Result<(u64, Trajectory)> {
    let path = path.as_ref();
    let file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(file);
    let header = rdr.headers().map_err(|e| Error::Parse { line: 1, msg: e.to_string() })?;
    if header.iter().ne(["idx", "x", "y"]) {
        return Err(Error::Parse { line: 1, msg: "expected header `idx,x,y`".into() });
    }
    let mut points = Vec::new();
    let mut last: Option<u64> = None;
    for rec in rdr.records() {
        let rec = rec.map_err(|e| Error::Parse { line: e.position().map_or(0, |p| p.line() as usize), msg: e.to_string() })?;
        let line = rec.position().map_or(0, |p| p.line() as usize);
        let parse = |i: usize| -> Result<f64> {
            rec.get(i)
                .and_then(|s| s.parse().ok())
                .ok_or_else(|| Error::Parse { line, msg: format!("bad field {i}") })
        };
        let idx = rec.get(0).and_then(|s| s.parse::<u64>().ok()).ok_or_else(|| Error::Parse { line, msg: "bad idx".into() })?;
        if last.is_some_and(|l| idx != l + 1) {
            return Err(Error::Format(format!("line {line}: trajectory index {idx} is not consecutive")));
        }
        last = Some(idx);
        points.push([parse(1)?, parse(2)?]);
    }
    let source = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    let first = last.map_or(0, |l| l + 1 - points.len() as u64);
    Ok((first, Trajectory { points, source }))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trajectory_csv_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("pred.csv");
        let t = Trajectory::new(vec![[1.5, 2.25], [0.1, 1.0 / 3.0]], "pred");
        write_trajectory_csv(&t, 0, &p).unwrap();
        let text = std::fs::read_to_string(&p).unwrap();
        assert!(text.starts_with("idx,x,y\n0,1.5000,2.2500\n"));
        assert_eq!(read_trajectory_csv(&p).unwrap(), t);
        write_trajectory_csv(&t, 7, &p).unwrap();
        assert_eq!(read_indexed_trajectory_csv(&p).unwrap(), (7, t));
        std::fs::write(&p, "idx,x,y\n0,1,1\n2,1,1\n").unwrap();
        assert!(read_trajectory_csv(&p).is_err());
    }
}
