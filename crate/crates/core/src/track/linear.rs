//! Linear readout trained with the sequence RMSE loss
//! `L = (1/T) * sqrt(sum_t |p_t - l_t|^2)`.

use std::path::Path;

use ndarray::{Array1, Array2, ArrayView1, Axis};

use super::Trajectory;
use crate::event::write_file;
use crate::repr::{binarize, downsample, FrameStack};
use crate::{Error, Result};

/// `p = W f + b`, with `W` of shape `2 x d`.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearModel {
    pub weights: Array2<f64>,
    pub bias: [f64; 2],
}

impl LinearModel {
    pub fn zeros(dim: usize, bias: [f64; 2]) -> Self {
        Self { weights: Array2::zeros((2, dim)), bias }
    }

    pub fn dim(&self) -> usize {
        self.weights.ncols()
    }

    pub fn predict_one(&self, f: ArrayView1<f64>) -> [f64; 2] {
        let p = self.weights.dot(&f);
        [p[0] + self.bias[0], p[1] + self.bias[1]]
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrainConfig {
    pub lr: f64,
    pub epochs: usize,
}

impl Default for TrainConfig {
    fn default() -> Self {
        Self { lr: 0.5, epochs: 2_000 }
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct TrainReport {
    /// Loss before each epoch's update, then the final loss.
    pub losses: Vec<f64>,
    /// Epochs skipped because the residual was exactly zero.
    pub skipped: usize,
}

pub fn rmse_time_loss(pred: &[[f64; 2]], label: &[[f64; 2]]) -> Result<f64> {
    if pred.len() != label.len() {
        return Err(Error::arg(format!("{} predictions for {} labels", pred.len(), label.len())));
    }
    if pred.is_empty() {
        return Err(Error::arg("loss over an empty sequence"));
    }
    let sq: f64 = pred.iter().zip(label).map(|(p, l)| (p[0] - l[0]).powi(2) + (p[1] - l[1]).powi(2)).sum();
    Ok(sq.sqrt() / pred.len() as f64)
}

fn check_dims(model: &LinearModel, features: &Array2<f64>) -> Result<()> {
    if features.ncols() != model.dim() {
        return Err(Error::arg(format!("feature dimension {} != model dimension {}", features.ncols(), model.dim())));
    }
    Ok(())
}

fn residuals(model: &LinearModel, features: &Array2<f64>, targets: &[[f64; 2]]) -> Array2<f64> {
    let mut r = features.dot(&model.weights.t());
    for (mut row, t) in r.axis_iter_mut(Axis(0)).zip(targets) {
        row[0] += model.bias[0] - t[0];
        row[1] += model.bias[1] - t[1];
    }
    r
}

/// Analytic gradient of the loss with respect to `(W, b)`.
///
/// Returns `None` when every residual is zero, where the square root is not
/// differentiable.
pub fn loss_gradient(model: &LinearModel, features: &Array2<f64>, targets: &[[f64; 2]]) -> Result<Option<(Array2<f64>, [f64; 2])>> {
    check_dims(model, features)?;
    if features.nrows() != targets.len() || targets.is_empty() {
        return Err(Error::arg(format!("{} feature rows for {} targets", features.nrows(), targets.len())));
    }
    let r = residuals(model, features, targets);
    let norm = r.iter().map(|v| v * v).sum::<f64>().sqrt();
    if norm == 0.0 {
        return Ok(None);
    }
    // dL/dr_t = r_t / (T * norm)
    let g = r / (targets.len() as f64 * norm);
    let grad_w = g.t().dot(features);
    let gb: Array1<f64> = g.sum_axis(Axis(0));
    Ok(Some((grad_w, [gb[0], gb[1]])))
}

/// Full-batch gradient descent from `W = 0`, `b = mean label`.
pub fn train_linear(features: &Array2<f64>, targets: &[[f64; 2]], cfg: TrainConfig) -> Result<(LinearModel, TrainReport)> {
    if !(cfg.lr >= 0.0) {
        return Err(Error::arg("learning rate must be >= 0"));
    }
    if targets.is_empty() || features.nrows() != targets.len() {
        return Err(Error::arg(format!("{} feature rows for {} targets", features.nrows(), targets.len())));
    }
    let n = targets.len() as f64;
    let mean = targets.iter().fold([0.0, 0.0], |a, t| [a[0] + t[0] / n, a[1] + t[1] / n]);
    let mut model = LinearModel::zeros(features.ncols(), mean);
    let mut report = TrainReport::default();
    for _ in 0..cfg.epochs {
        report.losses.push(rmse_time_loss(&predict_points(&model, features), targets)?);
        match loss_gradient(&model, features, targets)? {
            Some((gw, gb)) => {
                model.weights.scaled_add(-cfg.lr, &gw);
                model.bias[0] -= cfg.lr * gb[0];
                model.bias[1] -= cfg.lr * gb[1];
            }
            None => report.skipped += 1,
        }
    }
    report.losses.push(rmse_time_loss(&predict_points(&model, features), targets)?);
    Ok((model, report))
}

fn predict_points(model: &LinearModel, features: &Array2<f64>) -> Vec<[f64; 2]> {
    features.rows().into_iter().map(|f| model.predict_one(f)).collect()
}

pub fn predict_linear(model: &LinearModel, features: &Array2<f64>) -> Result<Trajectory> {
    check_dims(model, features)?;
    Ok(Trajectory::new(predict_points(model, features), "linear"))
}

/// One row per frame: the `factor`-pooled frame, binarized and flattened.
pub fn features_from_stack(stack: &FrameStack, factor: usize) -> Result<Array2<f64>> {
    let Some(first) = stack.frames.first() else {
        return Ok(Array2::zeros((0, 0)));
    };
    let dim = (first.width() / factor.max(1)) * (first.height() / factor.max(1));
    let mut out = Array2::zeros((stack.len(), dim));
    for (mut row, frame) in out.axis_iter_mut(Axis(0)).zip(&stack.frames) {
        let grid = binarize(&downsample(frame, factor, factor)?);
        row.iter_mut().zip(grid.iter()).for_each(|(v, &b)| *v = f64::from(u8::from(b)));
    }
    Ok(out)
}

/// Writes two `w,...` rows followed by one `b,bx,by` row.
pub fn write_model_csv(model: &LinearModel, path: impl AsRef<Path>) -> Result<()> {
    let mut out = String::new();
    for row in model.weights.rows() {
        out.push('w');
        for v in row {
            out.push_str(&format!(",{v}"));
        }
        out.push('\n');
    }
    out.push_str(&format!("b,{},{}\n", model.bias[0], model.bias[1]));
    write_file(path.as_ref(), out.as_bytes())
}

pub fn read_model_csv(path: impl AsRef<Path>) -> Result<LinearModel> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let mut w_rows: Vec<Vec<f64>> = Vec::new();
    let mut bias = None;
    for (i, line) in text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty()) {
        let mut parts = line.split(',');
        let tag = parts.next().unwrap_or_default();
        let vals = parts
            .map(|s| s.trim().parse::<f64>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|e| Error::Parse { line: i + 1, msg: e.to_string() })?;
        match (tag, vals.as_slice()) {
            ("w", _) => w_rows.push(vals),
            ("b", &[bx, by]) => bias = Some([bx, by]),
            _ => return Err(Error::Parse { line: i + 1, msg: format!("unexpected row `{tag}`") }),
        }
    }
    let bias = bias.ok_or_else(|| Error::Format("model has no `b` row".into()))?;
    if w_rows.len() != 2 || w_rows[0].len() != w_rows[1].len() {
        return Err(Error::Format("model needs two `w` rows of equal length".into()));
    }
    let dim = w_rows[0].len();
    let weights = Array2::from_shape_vec((2, dim), w_rows.concat()).expect("shape checked");
    Ok(LinearModel { weights, bias })
}
