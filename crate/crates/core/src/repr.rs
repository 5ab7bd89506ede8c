//! Frame representations built from event streams.
//!
//! Grids are `ndarray` arrays indexed `[[y, x]]` (row, column).

use ndarray::{Array2, Zip};

use crate::event::{EventStream, LabelTrack, Polarity, LABEL_PERIOD_US};
use crate::{Error, Result};

/// Two-channel event-count image.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Frame {
    pub counts_pos: Array2<u32>,
    pub counts_neg: Array2<u32>,
}

impl Frame {
    pub fn zeros(width: usize, height: usize) -> Self {
        Self { counts_pos: Array2::zeros((height, width)), counts_neg: Array2::zeros((height, width)) }
    }

    pub fn width(&self) -> usize {
        self.counts_pos.ncols()
    }

    pub fn height(&self) -> usize {
        self.counts_pos.nrows()
    }

    pub fn pos_total(&self) -> u64 {
        self.counts_pos.iter().map(|&c| u64::from(c)).sum()
    }

    pub fn neg_total(&self) -> u64 {
        self.counts_neg.iter().map(|&c| u64::from(c)).sum()
    }

    pub fn total(&self) -> u64 {
        self.pos_total() + self.neg_total()
    }

    /// Per-pixel count summed over both polarities.
    pub fn combined(&self) -> Array2<u32> {
        &self.counts_pos + &self.counts_neg
    }

    fn add(&mut self, x: u16, y: u16, p: Polarity) {
        let grid = match p {
            Polarity::Positive => &mut self.counts_pos,
            Polarity::Negative => &mut self.counts_neg,
        };
        grid[[usize::from(y), usize::from(x)]] += 1;
    }
}

/// Frames aligned 1:1 with a label track.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FrameStack {
    pub frames: Vec<Frame>,
    pub bin_window_us: u64,
    /// Events that fell outside every label window.
    pub dropped: usize,
}

impl FrameStack {
    pub fn len(&self) -> usize {
        self.frames.len()
    }

    pub fn is_empty(&self) -> bool {
        self.frames.is_empty()
    }
}

/// Bins events into one frame per label.
///
/// Frame `i` collects the events of the 10 ms bin that closes at the end of
/// label `i`'s period, `[index_i * 10_000, (index_i + 1) * 10_000)`. Events
/// outside every bin are counted in [`FrameStack::dropped`].
pub fn bin_to_frames(stream: &EventStream, track: &LabelTrack) -> FrameStack {
    let (w, h) = (usize::from(stream.width()), usize::from(stream.height()));
    let mut frames = vec![Frame::zeros(w, h); track.len()];
    let mut binned = 0;
    if let Some(first) = track.first_index() {
        let start = first * LABEL_PERIOD_US;
        let end = (first + track.len() as u64) * LABEL_PERIOD_US;
        let inside = stream.window(start, end).expect("start <= end");
        for e in inside {
            let slot = ((e.t_us - start) / LABEL_PERIOD_US) as usize;
            frames[slot].add(e.x, e.y, e.p);
        }
        binned = inside.len();
    }
    FrameStack { frames, bin_window_us: LABEL_PERIOD_US, dropped: stream.len() - binned }
}

/// `true` where the frame has at least one event of either polarity.
pub fn binarize(frame: &Frame) -> Array2<bool> {
    Zip::from(&frame.counts_pos).and(&frame.counts_neg).map_collect(|&p, &n| p + n > 0)
}

/// Bit-stacked binary frames: grid `k` supplies bit `k`, so the earliest
/// frame is the least significant bit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BinaRep {
    pub bits: u32,
    pub values: Array2<u16>,
}

impl BinaRep {
    /// Recovers binary grid `k`.
    pub fn bit_plane(&self, k: u32) -> Array2<bool> {
        self.values.mapv(|v| (v >> k) & 1 == 1)
    }
}

pub fn bina_rep(grids: &[Array2<bool>]) -> Result<BinaRep> {
    let bits = grids.len();
    if !(1..=16).contains(&bits) {
        return Err(Error::arg(format!("bina-rep needs 1..=16 grids, got {bits}")));
    }
    let shape = grids[0].dim();
    if let Some(g) = grids.iter().find(|g| g.dim() != shape) {
        return Err(Error::arg(format!("grid shape {:?} differs from {:?}", g.dim(), shape)));
    }
    let mut values = Array2::<u16>::zeros(shape);
    for (k, g) in grids.iter().enumerate() {
        Zip::from(&mut values).and(g).for_each(|v, &set| *v |= u16::from(set) << k);
    }
    Ok(BinaRep { bits: bits as u32, values })
}

/// Sum-pools each polarity channel over `fx` x `fy` blocks.
pub fn downsample(frame: &Frame, fx: usize, fy: usize) -> Result<Frame> {
    let (w, h) = (frame.width(), frame.height());
    if fx == 0 || fy == 0 || w % fx != 0 || h % fy != 0 {
        return Err(Error::arg(format!("factors {fx}x{fy} do not divide {w}x{h}")));
    }
    let pool = |g: &Array2<u32>| {
        let mut out = Array2::<u32>::zeros((h / fy, w / fx));
        for ((y, x), &c) in g.indexed_iter() {
            out[[y / fy, x / fx]] += c;
        }
        out
    };
    Ok(Frame { counts_pos: pool(&frame.counts_pos), counts_neg: pool(&frame.counts_neg) })
}

/// Multi-step sliding-window sampler parameters.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WindowSpec {
    pub length: usize,
    pub stride: usize,
    pub step: usize,
}

impl WindowSpec {
    pub fn new(length: usize, stride: usize, step: usize) -> Result<Self> {
        if length == 0 || stride == 0 || step == 0 {
            return Err(Error::arg("window length, stride and step must be >= 1"));
        }
        Ok(Self { length, stride, step })
    }
}

/// Frame indices for every window `[s, s+step, ..., s+(L-1)*step]` whose
/// last index is inside `0..n_frames`, with `s` advancing by `stride`.
pub fn sliding_windows(n_frames: usize, spec: WindowSpec) -> Vec<Vec<usize>> {
    let span = (spec.length - 1) * spec.step;
    (0..n_frames.saturating_sub(span))
        .step_by(spec.stride)
        .map(|s| (0..spec.length).map(|k| s + k * spec.step).collect())
        .collect()
}
