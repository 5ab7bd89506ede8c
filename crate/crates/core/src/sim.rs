//! Synthetic pupil trajectories and a DVS renderer.
//!
//! The scene is a bright background (log intensity 0) with a dark pupil disk
//! (log intensity `-contrast`). Each pixel integrates log-intensity changes
//! every `frame_dt_us` and fires one event per full `threshold` crossing.

use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal, Poisson};
use serde::{Deserialize, Serialize};

use crate::event::{Event, EventStream, Label, LabelTrack, Polarity, LABEL_PERIOD_US};
use crate::{Error, Result};

const TRAJECTORY_STREAM: u64 = 0;
const NOISE_STREAM: u64 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SimConfig {
    pub width: u16,
    pub height: u16,
    pub pupil_radius: f64,
    pub contrast: f64,
    pub threshold: f64,
    pub noise_rate_hz: f64,
    pub frame_dt_us: u64,
    pub seed: u64,
}

impl Default for SimConfig {
    fn default() -> Self {
        Self {
            width: 80,
            height: 60,
            pupil_radius: 6.0,
            contrast: 1.0,
            threshold: 0.25,
            noise_rate_hz: 0.2,
            frame_dt_us: 1_000,
            seed: 42,
        }
    }
}

impl SimConfig {
    pub fn validate(&self) -> Result<()> {
        if self.width == 0 || self.height == 0 {
            return Err(Error::arg("sensor size must be non-zero"));
        }
        if !(self.threshold > 0.0) || !(self.contrast > 0.0) || !(self.pupil_radius > 0.0) {
            return Err(Error::arg("threshold, contrast and pupil_radius must be > 0"));
        }
        if !(self.noise_rate_hz >= 0.0) {
            return Err(Error::arg("noise_rate_hz must be >= 0"));
        }
        if self.frame_dt_us == 0 || !LABEL_PERIOD_US.is_multiple_of(self.frame_dt_us) {
            return Err(Error::arg(format!("frame_dt_us {} must divide {LABEL_PERIOD_US}", self.frame_dt_us)));
        }
        Ok(())
    }
}

mod duration_ms {
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(us: &u64, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_f64(*us as f64 / 1_000.0)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<u64, D::Error> {
        let ms = f64::deserialize(d)?;
        if !(ms > 0.0) || !ms.is_finite() {
            return Err(serde::de::Error::custom(format!("duration_ms must be positive, got {ms}")));
        }
        Ok((ms * 1_000.0).round() as u64)
    }
}

fn default_jitter() -> f64 {
    0.3
}

/// One piece of a motion script. Durations are serialized as `duration_ms`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum Segment {
    /// Hold still, optionally after jumping to `target`, with Gaussian jitter.
    Fixation {
        #[serde(rename = "duration_ms", with = "duration_ms")]
        duration_us: u64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        target: Option<[f64; 2]>,
        #[serde(default = "default_jitter")]
        jitter_px: f64,
    },
    /// `x0 + A sin(2 pi f t)`, and likewise on y with `amplitude_y_px`.
    Pursuit {
        #[serde(rename = "duration_ms", with = "duration_ms")]
        duration_us: u64,
        amplitude_px: f64,
        #[serde(default)]
        amplitude_y_px: f64,
        frequency_hz: f64,
    },
    /// Minimum-jerk move to `target` over the segment.
    Saccade {
        #[serde(rename = "duration_ms", with = "duration_ms")]
        duration_us: u64,
        target: [f64; 2],
    },
    /// Position held, blink flag set.
    Blink {
        #[serde(rename = "duration_ms", with = "duration_ms")]
        duration_us: u64,
    },
}

impl Segment {
    pub fn duration_us(&self) -> u64 {
        match *self {
            Segment::Fixation { duration_us, .. }
            | Segment::Pursuit { duration_us, .. }
            | Segment::Saccade { duration_us, .. }
            | Segment::Blink { duration_us } => duration_us,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MotionScript {
    pub start: [f64; 2],
    pub segments: Vec<Segment>,
}

impl MotionScript {
    pub fn duration_us(&self) -> u64 {
        self.segments.iter().map(Segment::duration_us).sum()
    }
}

/// Scenario file: `{ "config": {...}, "start": [x, y], "script": [...] }`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    #[serde(default)]
    pub config: SimConfig,
    #[serde(default)]
    pub start: Option<[f64; 2]>,
    pub script: Vec<Segment>,
}

impl Scenario {
    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_json(&text)
    }

    pub fn motion_script(&self) -> MotionScript {
        let start = self
            .start
            .unwrap_or([f64::from(self.config.width) / 2.0, f64::from(self.config.height) / 2.0]);
        MotionScript { start, segments: self.script.clone() }
    }

    /// Synthesizes labels, then renders events from them.
    pub fn run(&self) -> Result<(LabelTrack, EventStream)> {
        let track = synth_trajectory(&self.motion_script(), &self.config)?;
        let stream = render_events(&track, &self.config)?;
        Ok((track, stream))
    }
}

/// Minimum-jerk position fraction at normalized time `s` in `[0, 1]`.
pub fn min_jerk(s: f64) -> f64 {
    s * s * s * (10.0 + s * (-15.0 + 6.0 * s))
}

/// Derivative of [`min_jerk`] with respect to `s`.
pub fn min_jerk_rate(s: f64) -> f64 {
    30.0 * s * s * (1.0 - s) * (1.0 - s)
}

fn rng_for(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Label coordinates are kept on a 1/1024 px grid so that mirroring them
/// (`w - 1 - x`) is exact.
pub const LABEL_GRID: f64 = 1.0 / 1024.0;

fn snap(v: f64) -> f64 {
    (v / LABEL_GRID).round() * LABEL_GRID
}

/// Samples the script at 100 Hz, one label per 10 ms of script time.
pub fn synth_trajectory(script: &MotionScript, cfg: &SimConfig) -> Result<LabelTrack> {
    cfg.validate()?;
    if script.segments.is_empty() {
        return Err(Error::arg("motion script has no segments"));
    }
    let (w, h, r) = (f64::from(cfg.width), f64::from(cfg.height), cfg.pupil_radius);
    let inside_margin = |p: [f64; 2]| p[0] >= r && p[0] <= w - r && p[1] >= r && p[1] <= h - r;
    let check = |p: [f64; 2], what: &str| {
        if inside_margin(p) {
            Ok(())
        } else {
            Err(Error::arg(format!("{what} ({}, {}) outside sensor bounds minus pupil radius", p[0], p[1])))
        }
    };
    check(script.start, "start")?;

    let mut rng = rng_for(cfg.seed, TRAJECTORY_STREAM);
    let total = script.duration_us();
    let n_labels = total.div_ceil(LABEL_PERIOD_US) as usize;
    let mut points = Vec::with_capacity(n_labels);

    let mut pos = script.start;
    let mut seg_start = 0u64;
    let mut i = 0usize;
    for seg in &script.segments {
        let dur = seg.duration_us();
        let seg_end = seg_start + dur;
        let anchor = match *seg {
            Segment::Fixation { target: Some(t), .. } => {
                check(t, "fixation target")?;
                t
            }
            Segment::Saccade { target, .. } => {
                check(target, "saccade target")?;
                pos
            }
            _ => pos,
        };
        let jitter = match *seg {
            Segment::Fixation { jitter_px, .. } if jitter_px > 0.0 => {
                Some(Normal::new(0.0, jitter_px).map_err(|e| Error::arg(e.to_string()))?)
            }
            _ => None,
        };
        let at = |dt: u64| -> [f64; 2] {
            let secs = dt as f64 * 1e-6;
            match *seg {
                Segment::Pursuit { amplitude_px, amplitude_y_px, frequency_hz, .. } => {
                    let s = (std::f64::consts::TAU * frequency_hz * secs).sin();
                    [anchor[0] + amplitude_px * s, anchor[1] + amplitude_y_px * s]
                }
                Segment::Saccade { target, .. } => {
                    let k = min_jerk(dt as f64 / dur as f64);
                    [anchor[0] + (target[0] - anchor[0]) * k, anchor[1] + (target[1] - anchor[1]) * k]
                }
                _ => anchor,
            }
        };
        while i < n_labels && (i as u64) * LABEL_PERIOD_US < seg_end {
            let mut p = at(i as u64 * LABEL_PERIOD_US - seg_start);
            if let Some(n) = &jitter {
                p[0] += n.sample(&mut rng);
                p[1] += n.sample(&mut rng);
            }
            let p = p.map(snap);
            if !(p[0] >= 0.0 && p[0] < w && p[1] >= 0.0 && p[1] < h) {
                return Err(Error::arg(format!("trajectory leaves the sensor at label {i}: ({}, {})", p[0], p[1])));
            }
            points.push((p, matches!(seg, Segment::Blink { .. })));
            i += 1;
        }
        pos = at(dur);
        if !inside_margin(pos) {
            return Err(Error::arg(format!("segment ends at ({}, {}), outside sensor bounds minus pupil radius", pos[0], pos[1])));
        }
        seg_start = seg_end;
    }
    Ok(LabelTrack::from_points(points))
}

/// Pupil state at time `t_us`, linearly interpolated between labels.
fn pupil_at(labels: &[Label], t_us: u64) -> ([f64; 2], bool) {
    let first = labels[0].index * LABEL_PERIOD_US;
    let rel = t_us.saturating_sub(first);
    let i = ((rel / LABEL_PERIOD_US) as usize).min(labels.len() - 1);
    let a = &labels[i];
    let Some(b) = labels.get(i + 1) else {
        return ([a.x, a.y], a.blink);
    };
    let f = (rel - i as u64 * LABEL_PERIOD_US) as f64 / LABEL_PERIOD_US as f64;
    ([a.x + (b.x - a.x) * f, a.y + (b.y - a.y) * f], a.blink)
}

/// Fraction of the step at which the edge of a disk moving from `a` to `b`
/// passes `q`. Appearing or vanishing disks (blinks) cross at 0.
fn crossing(a: Option<[f64; 2]>, b: Option<[f64; 2]>, q: [f64; 2], r2: f64, entering: bool) -> f64 {
    let (Some(a), Some(b)) = (a, b) else { return 0.0 };
    let d = [b[0] - a[0], b[1] - a[1]];
    let e = [q[0] - a[0], q[1] - a[1]];
    let dd = d[0] * d[0] + d[1] * d[1];
    if dd == 0.0 {
        return 0.0;
    }
    // |e - s d|^2 = r^2
    let half_b = e[0] * d[0] + e[1] * d[1];
    let c = e[0] * e[0] + e[1] * e[1] - r2;
    let disc = (half_b * half_b - dd * c).max(0.0).sqrt();
    let s = if entering { (half_b - disc) / dd } else { (half_b + disc) / dd };
    s.clamp(0.0, 1.0)
}

/// Renders DVS events for a label track.
///
/// Every pixel keeps a residual accumulator of log-intensity change. A change
/// against the sign of the residual resets it first, then one event is
/// emitted per whole threshold and the remainder is kept. Events carry the
/// timestamp of the rendering step that produced them; within a step they
/// are ordered by when the disk edge crossed the pixel center along the
/// step's straight-line path. Background noise is Poisson per pixel with
/// random polarity and follows the edge events of its step.
pub fn render_events(track: &LabelTrack, cfg: &SimConfig) -> Result<EventStream> {
    cfg.validate()?;
    let (w, h) = (usize::from(cfg.width), usize::from(cfg.height));
    let labels = track.labels();
    if labels.is_empty() {
        return Ok(EventStream::empty(cfg.width, cfg.height));
    }
    let t_first = labels[0].index * LABEL_PERIOD_US;
    let t_last = labels[labels.len() - 1].index * LABEL_PERIOD_US;
    let dt = cfg.frame_dt_us;
    let r = cfg.pupil_radius;
    let r2 = r * r;

    let mut residual = vec![0.0f64; w * h];
    let mut events = Vec::new();
    let mut rng = rng_for(cfg.seed, NOISE_STREAM);
    let noise = if cfg.noise_rate_hz > 0.0 {
        let mean = cfg.noise_rate_hz * (w * h) as f64 * dt as f64 * 1e-6;
        Some(Poisson::new(mean).map_err(|e| Error::arg(e.to_string()))?)
    } else {
        None
    };

    let covered = |c: Option<[f64; 2]>, x: usize, y: usize| match c {
        Some([cx, cy]) => {
            let (dx, dy) = (x as f64 - cx, y as f64 - cy);
            dx * dx + dy * dy <= r2
        }
        None => false,
    };
    let disk = |t: u64| {
        let (p, blink) = pupil_at(labels, t);
        (!blink).then_some(p)
    };
    let bbox = |c: Option<[f64; 2]>| {
        c.map(|[cx, cy]| {
            let clamp = |v: f64, hi: usize| (v.max(0.0) as usize).min(hi - 1);
            (clamp((cx - r).floor(), w), clamp((cx + r).ceil(), w), clamp((cy - r).floor(), h), clamp((cy + r).ceil(), h))
        })
    };

    let mut step: Vec<(f64, usize, Event)> = Vec::new();
    let mut prev = disk(t_first);
    let mut t = t_first + dt;
    while t <= t_last {
        let now = disk(t);
        let region = match (bbox(prev), bbox(now)) {
            (Some(a), Some(b)) => Some((a.0.min(b.0), a.1.max(b.1), a.2.min(b.2), a.3.max(b.3))),
            (a, b) => a.or(b),
        };
        step.clear();
        if let Some((x0, x1, y0, y1)) = region {
            for y in y0..=y1 {
                for x in x0..=x1 {
                    let (entering, delta) = match (covered(prev, x, y), covered(now, x, y)) {
                        (false, true) => (true, -cfg.contrast),
                        (true, false) => (false, cfg.contrast),
                        _ => continue,
                    };
                    let acc = &mut residual[y * w + x];
                    if *acc * delta < 0.0 {
                        *acc = 0.0;
                    }
                    *acc += delta;
                    let n = (acc.abs() / cfg.threshold + 1e-9).floor();
                    if n >= 1.0 {
                        let p = if *acc > 0.0 { Polarity::Positive } else { Polarity::Negative };
                        *acc -= acc.signum() * n * cfg.threshold;
                        let key = crossing(prev, now, [x as f64, y as f64], r2, entering);
                        step.push((key, n as usize, Event::new(t, x as u16, y as u16, p)));
                    }
                }
            }
        }
        step.sort_by(|a, b| a.0.total_cmp(&b.0));
        for &(_, n, e) in &step {
            events.extend(std::iter::repeat_n(e, n));
        }
        if let Some(dist) = &noise {
            let count = dist.sample(&mut rng) as u64;
            for _ in 0..count {
                let x = rng.gen_range(0..cfg.width);
                let y = rng.gen_range(0..cfg.height);
                let p = if rng.gen_bool(0.5) { Polarity::Positive } else { Polarity::Negative };
                events.push(Event::new(t, x, y, p));
            }
        }
        prev = now;
        t += dt;
    }
    Ok(EventStream::from_sorted(cfg.width, cfg.height, events))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quiet() -> SimConfig {
        SimConfig { noise_rate_hz: 0.0, ..SimConfig::default() }
    }

    fn fixation(ms: f64, jitter: f64) -> Segment {
        Segment::Fixation { duration_us: (ms * 1000.0) as u64, target: None, jitter_px: jitter }
    }

    #[test]
    fn crossing_fraction() {
        let (a, b) = (Some([0.0, 0.0]), Some([2.0, 0.0]));
        assert_eq!(crossing(a, b, [2.0, 0.0], 1.0, true), 0.5);
        assert_eq!(crossing(a, b, [1.5, 0.0], 1.0, true), 0.25);
        assert_eq!(crossing(a, b, [0.0, 0.0], 1.0, false), 0.5);
        assert_eq!(crossing(None, b, [2.0, 0.0], 1.0, true), 0.0);
    }

    #[test]
    fn still_fixation_is_exact() {
        let script = MotionScript { start: [40.0, 30.0], segments: vec![fixation(200.0, 0.0)] };
        let t = synth_trajectory(&script, &quiet()).unwrap();
        assert_eq!(t.len(), 20);
        assert!(t.labels().iter().all(|l| l.x == 40.0 && l.y == 30.0 && !l.blink));
    }

    #[test]
    fn pursuit_follows_sine() {
        let script = MotionScript {
            start: [40.0, 30.0],
            segments: vec![Segment::Pursuit { duration_us: 1_000_000, amplitude_px: 10.0, amplitude_y_px: 0.0, frequency_hz: 1.0 }],
        };
        let t = synth_trajectory(&script, &quiet()).unwrap();
        assert_eq!(t.labels()[0].x, 40.0);
        for l in t.labels() {
            let expect = 40.0 + 10.0 * (std::f64::consts::TAU * l.index as f64 * 0.01).sin();
            assert!((l.x - expect).abs() <= LABEL_GRID / 2.0);
            assert_eq!(l.x, snap(l.x));
        }
    }

    #[test]
    fn min_jerk_peak_velocity() {
        // numeric maximum of the velocity profile over a fine grid
        let (dur_s, span) = (0.1, 30.0);
        let peak = (0..=100_000)
            .map(|k| min_jerk_rate(k as f64 / 100_000.0) * span / dur_s)
            .fold(f64::MIN, f64::max);
        assert!((peak - 562.5).abs() < 1e-6);
        assert!((peak / (span / dur_s) - 1.875).abs() < 1e-9);
        // and the position profile is consistent with its rate
        let h = 1e-6;
        for s in [0.1, 0.3, 0.5, 0.8] {
            let fd = (min_jerk(s + h) - min_jerk(s - h)) / (2.0 * h);
            assert!((fd - min_jerk_rate(s)).abs() < 1e-6);
        }
    }

    #[test]
    fn saccade_reaches_target() {
        let script = MotionScript {
            start: [20.0, 30.0],
            segments: vec![Segment::Saccade { duration_us: 100_000, target: [50.0, 30.0] }, fixation(50.0, 0.0)],
        };
        let t = synth_trajectory(&script, &quiet()).unwrap();
        assert_eq!(t.labels()[0].x, 20.0);
        assert!((t.labels()[5].x - 35.0).abs() < 1e-12);
        assert_eq!(t.labels()[10].x, 50.0);
    }

    #[test]
    fn blink_holds_position() {
        let script = MotionScript {
            start: [30.0, 30.0],
            segments: vec![fixation(50.0, 0.0), Segment::Blink { duration_us: 30_000 }, fixation(20.0, 0.0)],
        };
        let t = synth_trajectory(&script, &quiet()).unwrap();
        let flags: Vec<_> = t.labels().iter().map(|l| l.blink).collect();
        assert_eq!(flags, [false, false, false, false, false, true, true, true, false, false]);
        assert!(t.labels().iter().all(|l| l.x == 30.0));
    }

    #[test]
    fn out_of_bounds_targets_rejected() {
        let cfg = quiet();
        let bad = MotionScript { start: [40.0, 30.0], segments: vec![Segment::Saccade { duration_us: 50_000, target: [79.0, 30.0] }] };
        assert!(matches!(synth_trajectory(&bad, &cfg), Err(Error::Argument(_))));
        let empty = MotionScript { start: [40.0, 30.0], segments: vec![] };
        assert!(synth_trajectory(&empty, &cfg).is_err());
        let wide = MotionScript {
            start: [40.0, 30.0],
            segments: vec![Segment::Pursuit { duration_us: 1_000_000, amplitude_px: 60.0, amplitude_y_px: 0.0, frequency_hz: 1.0 }],
        };
        assert!(synth_trajectory(&wide, &cfg).is_err());
    }

    #[test]
    fn static_scene_is_silent() {
        let script = MotionScript { start: [40.0, 30.0], segments: vec![fixation(500.0, 0.0)] };
        let cfg = quiet();
        let t = synth_trajectory(&script, &cfg).unwrap();
        assert!(render_events(&t, &cfg).unwrap().is_empty());
    }

    #[test]
    fn newly_covered_pixel_fires_contrast_over_threshold() {
        let cfg = SimConfig { contrast: 0.5, threshold: 0.25, pupil_radius: 3.0, noise_rate_hz: 0.0, frame_dt_us: 10_000, ..SimConfig::default() };
        // one-pixel jump: pixel (14, 30) enters the disk, pixel (7, 30) leaves it
        let t = LabelTrack::from_points([([10.0, 30.0], false), ([11.0, 30.0], false)]);
        let s = render_events(&t, &cfg).unwrap();
        let at = |x, y| s.events().iter().filter(|e| e.x == x && e.y == y).map(|e| e.p).collect::<Vec<_>>();
        assert_eq!(at(14, 30), vec![Polarity::Negative, Polarity::Negative]);
        assert_eq!(at(7, 30), vec![Polarity::Positive, Polarity::Positive]);
        assert!(s.events().iter().all(|e| e.t_us == 10_000));
    }

    #[test]
    fn cover_then_uncover() {
        // contrast 0.3, threshold 0.25: one event each way, remainder kept
        let cfg = SimConfig { contrast: 0.3, threshold: 0.25, pupil_radius: 2.0, noise_rate_hz: 0.0, frame_dt_us: 10_000, ..SimConfig::default() };
        let t = LabelTrack::from_points([([10.0, 10.0], false), ([11.0, 10.0], false), ([10.0, 10.0], false)]);
        let s = render_events(&t, &cfg).unwrap();
        let px: Vec<_> = s.events().iter().filter(|e| e.x == 13 && e.y == 10).map(|e| (e.t_us, e.p)).collect();
        assert_eq!(px, vec![(10_000, Polarity::Negative), (20_000, Polarity::Positive)]);
    }

    #[test]
    fn rendering_is_deterministic_and_in_span() {
        let scenario = Scenario::from_json(
            r#"{"config": {"seed": 7, "noise_rate_hz": 1.0},
                "script": [{"kind": "pursuit", "duration_ms": 400, "amplitude_px": 8, "frequency_hz": 2.0},
                           {"kind": "blink", "duration_ms": 60}]}"#,
        )
        .unwrap();
        let (t1, s1) = scenario.run().unwrap();
        let (t2, s2) = scenario.run().unwrap();
        assert_eq!(t1, t2);
        assert_eq!(s1, s2);
        let (lo, hi) = s1.time_span().unwrap();
        assert!(lo >= 1_000 && hi <= t1.labels().last().unwrap().t_us());
        let other = Scenario { config: SimConfig { seed: 8, ..scenario.config.clone() }, ..scenario };
        assert_ne!(other.run().unwrap().1, s1);
    }

    #[test]
    fn scenario_json_shape() {
        let s = Scenario::from_json(
            r#"{"config": {"width": 64, "height": 48},
                "script": [{"kind": "pursuit", "duration_ms": 2000, "amplitude_px": 20, "frequency_hz": 1.0},
                           {"kind": "saccade", "duration_ms": 80, "target": [20, 20]},
                           {"kind": "fixation", "duration_ms": 100},
                           {"kind": "blink", "duration_ms": 150}]}"#,
        )
        .unwrap();
        assert_eq!(s.config.width, 64);
        assert_eq!(s.script[0].duration_us(), 2_000_000);
        assert!(matches!(s.script[2], Segment::Fixation { jitter_px, .. } if jitter_px == 0.3));
        assert_eq!(s.motion_script().start, [32.0, 24.0]);
        assert!(Scenario::from_json(r#"{"script": [{"kind": "blink", "duration_ms": 0}]}"#).is_err());
        assert!(Scenario::from_json(r#"{"script": [{"kind": "wobble", "duration_ms": 5}]}"#).is_err());
    }

    #[test]
    fn config_validation() {
        assert!(SimConfig { threshold: 0.0, ..quiet() }.validate().is_err());
        assert!(SimConfig { frame_dt_us: 3_000, ..quiet() }.validate().is_err());
        assert!(SimConfig { frame_dt_us: 20_000, ..quiet() }.validate().is_err());
        assert!(SimConfig { frame_dt_us: 2_500, ..quiet() }.validate().is_ok());
    }
}
