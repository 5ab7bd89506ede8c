//! Bidirectional relative-position attention.
//!
//! Each head adds a bias `B[t][s] = m * |t - s|` to its scaled dot-product
//! logits before the row softmax. The bias is assembled from a forward part
//! (`t >= s`) and a backward part (`t < s`) so the two directions can be
//! inspected separately.

use ndarray::{Array2, Axis};

use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct AttentionConfig {
    pub seq_len: usize,
    pub heads: usize,
    pub d_k: usize,
    /// Per-head distance slope, strictly decreasing and negative.
    pub slopes: Vec<f64>,
}

impl AttentionConfig {
    /// Linear slope schedule `m_i = -(i + 1) / heads`.
    pub fn new(seq_len: usize, heads: usize, d_k: usize) -> Result<Self> {
        let slopes = (0..heads).map(|i| -((i + 1) as f64) / heads as f64).collect();
        Self::with_slopes(seq_len, d_k, slopes)
    }

    pub fn with_slopes(seq_len: usize, d_k: usize, slopes: Vec<f64>) -> Result<Self> {
        let cfg = Self { seq_len, heads: slopes.len(), d_k, slopes };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.seq_len == 0 || self.heads == 0 || self.d_k == 0 {
            return Err(Error::arg("seq_len, heads and d_k must be >= 1"));
        }
        if self.slopes.len() != self.heads {
            return Err(Error::arg(format!("{} slopes for {} heads", self.slopes.len(), self.heads)));
        }
        if !self.slopes.iter().all(|&m| m < 0.0) {
            return Err(Error::arg("slopes must be negative"));
        }
        if !self.slopes.windows(2).all(|w| w[1] < w[0]) {
            return Err(Error::arg("slopes must strictly decrease with head index"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct HeadBias {
    pub forward: Array2<f64>,
    pub backward: Array2<f64>,
    pub total: Array2<f64>,
}

fn head_bias(seq_len: usize, slope: f64) -> HeadBias {
    let forward = Array2::from_shape_fn((seq_len, seq_len), |(t, s)| if t >= s { slope * (t - s) as f64 } else { 0.0 });
    let backward = Array2::from_shape_fn((seq_len, seq_len), |(t, s)| if t < s { slope * (s - t) as f64 } else { 0.0 });
    let total = &forward + &backward;
    HeadBias { forward, backward, total }
}

/// Bias matrices for every head of `cfg`.
pub fn build_bias(cfg: &AttentionConfig) -> Vec<HeadBias> {
    cfg.slopes.iter().map(|&m| head_bias(cfg.seq_len, m)).collect()
}

/// Row-softmax of `Q K^T / sqrt(d_k) + bias`.
pub fn attention_weights(q: &Array2<f64>, k: &Array2<f64>, bias: &Array2<f64>) -> Result<Array2<f64>> {
    let t = q.nrows();
    if k.nrows() != t || q.ncols() != k.ncols() || bias.dim() != (t, t) {
        return Err(Error::arg(format!(
            "shape mismatch: Q {:?}, K {:?}, bias {:?}",
            q.dim(),
            k.dim(),
            bias.dim()
        )));
    }
    let scale = (q.ncols() as f64).sqrt().recip();
    let mut logits = q.dot(&k.t()) * scale + bias;
    for mut row in logits.axis_iter_mut(Axis(0)) {
        let max = row.fold(f64::NEG_INFINITY, |a, &b| a.max(b));
        row.mapv_inplace(|v| (v - max).exp());
        let sum = row.sum();
        row /= sum;
    }
    Ok(logits)
}

/// Single-head attention with an explicit bias matrix.
pub fn attention_with_bias(q: &Array2<f64>, k: &Array2<f64>, v: &Array2<f64>, bias: &Array2<f64>) -> Result<Array2<f64>> {
    if v.nrows() != q.nrows() {
        return Err(Error::arg(format!("V has {} rows, expected {}", v.nrows(), q.nrows())));
    }
    Ok(attention_weights(q, k, bias)?.dot(v))
}

/// Multi-head attention with the relative-position bias of `cfg`; heads are
/// evaluated independently.
pub fn brat_attention(q: &[Array2<f64>], k: &[Array2<f64>], v: &[Array2<f64>], cfg: &AttentionConfig) -> Result<Vec<Array2<f64>>> {
    cfg.validate()?;
    if q.len() != cfg.heads || k.len() != cfg.heads || v.len() != cfg.heads {
        return Err(Error::arg(format!("expected {} heads of Q, K and V", cfg.heads)));
    }
    for (name, m) in q.iter().map(|m| ("Q", m)).chain(k.iter().map(|m| ("K", m))) {
        if m.dim() != (cfg.seq_len, cfg.d_k) {
            return Err(Error::arg(format!("{name} is {:?}, expected ({}, {})", m.dim(), cfg.seq_len, cfg.d_k)));
        }
    }
    build_bias(cfg)
        .iter()
        .zip(q.iter().zip(k).zip(v))
        .map(|(b, ((q, k), v))| attention_with_bias(q, k, v, &b.total))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::{array, Array1};
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random(rng: &mut ChaCha8Rng, r: usize, c: usize) -> Array2<f64> {
        Array2::from_shape_fn((r, c), |_| rng.gen_range(-2.0..2.0))
    }

    #[test]
    fn unit_slope_bias() {
        let cfg = AttentionConfig::with_slopes(3, 4, vec![-1.0]).unwrap();
        let b = &build_bias(&cfg)[0];
        assert_eq!(b.forward, array![[0.0, 0.0, 0.0], [-1.0, 0.0, 0.0], [-2.0, -1.0, 0.0]]);
        assert_eq!(b.backward, array![[0.0, -1.0, -2.0], [0.0, 0.0, -1.0], [0.0, 0.0, 0.0]]);
        assert_eq!(b.total, array![[0.0, -1.0, -2.0], [-1.0, 0.0, -1.0], [-2.0, -1.0, 0.0]]);
    }

    #[test]
    fn single_step_bias_is_zero() {
        let cfg = AttentionConfig::new(1, 3, 2).unwrap();
        assert!(build_bias(&cfg).iter().all(|b| b.total == array![[0.0]]));
    }

    #[test]
    fn linear_schedule() {
        let cfg = AttentionConfig::new(4, 4, 8).unwrap();
        assert_eq!(cfg.slopes, vec![-0.25, -0.5, -0.75, -1.0]);
        assert!(AttentionConfig::with_slopes(4, 8, vec![-1.0, -0.5]).is_err());
        assert!(AttentionConfig::with_slopes(4, 8, vec![0.5]).is_err());
        assert!(AttentionConfig::with_slopes(4, 8, vec![-0.5, -0.5]).is_err());
    }

    #[test]
    fn uniform_softmax_averages_values() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let zeros = Array2::zeros((5, 3));
        let v = random(&mut rng, 5, 4);
        let out = attention_with_bias(&zeros, &zeros, &v, &Array2::zeros((5, 5))).unwrap();
        let mean: Array1<f64> = v.mean_axis(Axis(0)).unwrap();
        for row in out.rows() {
            for (a, b) in row.iter().zip(mean.iter()) {
                assert!((a - b).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn steep_bias_selects_diagonal() {
        let t = 6;
        let cfg = AttentionConfig::with_slopes(t, 2, vec![-1e3]).unwrap();
        let zeros = Array2::zeros((t, 2));
        let v = Array2::<f64>::eye(t);
        let out = brat_attention(std::slice::from_ref(&zeros), std::slice::from_ref(&zeros), std::slice::from_ref(&v), &cfg).unwrap();
        // off-diagonal weights are at most ~2 e^-1000, far below 1e-6
        let tail: f64 = (1..t).map(|d| 2.0 * (-1e3 * d as f64).exp()).sum();
        assert!(tail < 1e-300);
        for (a, b) in out[0].iter().zip(v.iter()) {
            assert!((a - b).abs() < 1e-6);
        }
    }

    #[test]
    fn shape_errors() {
        let cfg = AttentionConfig::new(4, 1, 2).unwrap();
        let q = Array2::zeros((4, 2));
        let bad = Array2::zeros((3, 2));
        let (q1, bad1) = (std::slice::from_ref(&q), std::slice::from_ref(&bad));
        assert!(brat_attention(q1, bad1, q1, &cfg).is_err());
        assert!(brat_attention(q1, q1, bad1, &cfg).is_err());
        assert!(brat_attention(&[q.clone(), q.clone()], q1, q1, &cfg).is_err());
    }

    proptest! {
        #[test]
        fn rows_are_distributions(seed in any::<u64>(), t in 1usize..12, dk in 1usize..6, heads in 1usize..4) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let cfg = AttentionConfig::new(t, heads, dk).unwrap();
            for b in build_bias(&cfg) {
                let w = attention_weights(&random(&mut rng, t, dk), &random(&mut rng, t, dk), &b.total).unwrap();
                for row in w.rows() {
                    prop_assert!((row.sum() - 1.0).abs() < 1e-6);
                    prop_assert!(row.iter().all(|&p| p >= 0.0));
                }
            }
        }

        #[test]
        fn row_shift_invariance(seed in any::<u64>(), t in 1usize..10, row in 0usize..10, shift in -50.0f64..50.0) {
            let row = row % t;
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let (q, k, v) = (random(&mut rng, t, 3), random(&mut rng, t, 3), random(&mut rng, t, 2));
            let bias = build_bias(&AttentionConfig::new(t, 1, 3).unwrap()).remove(0).total;
            let mut shifted = bias.clone();
            shifted.row_mut(row).mapv_inplace(|b| b + shift);
            let a = attention_with_bias(&q, &k, &v, &bias).unwrap();
            let b = attention_with_bias(&q, &k, &v, &shifted).unwrap();
            for (x, y) in a.iter().zip(b.iter()) {
                prop_assert!((x - y).abs() < 1e-9);
            }
        }

        #[test]
        fn uniform_case_ignores_value_order(seed in any::<u64>(), t in 1usize..10) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let zeros = Array2::zeros((t, 2));
            let v = random(&mut rng, t, 3);
            let mut perm: Vec<usize> = (0..t).collect();
            perm.reverse();
            let pv = v.select(Axis(0), &perm);
            let a = attention_with_bias(&zeros, &zeros, &v, &Array2::zeros((t, t))).unwrap();
            let b = attention_with_bias(&zeros, &zeros, &pv, &Array2::zeros((t, t))).unwrap();
            for (x, y) in a.iter().zip(b.iter()) {
                prop_assert!((x - y).abs() < 1e-12);
            }
        }
    }
}
