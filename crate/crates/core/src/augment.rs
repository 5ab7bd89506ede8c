//! Event-level augmentation: temporal shift with label realignment, spatial
//! flips and random event deletion.

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::event::{Event, EventStream, Label, LabelTrack, LABEL_PERIOD_US};
use crate::{Error, Result};

/// Largest temporal shift magnitude, 200 ms.
pub const MAX_SHIFT_US: i64 = 200_000;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AugSpec {
    pub shift_us: i64,
    pub flip_h: bool,
    pub flip_v: bool,
    pub delete_frac: f64,
    pub seed: u64,
}

impl Default for AugSpec {
    fn default() -> Self {
        Self { shift_us: 0, flip_h: false, flip_v: false, delete_frac: 0.05, seed: 42 }
    }
}

impl AugSpec {
    /// Draws a shift uniformly from `[-200 ms, 200 ms]` and each flip with
    /// probability one half.
    pub fn random(seed: u64, delete_frac: f64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        Self {
            shift_us: rng.gen_range(-MAX_SHIFT_US..=MAX_SHIFT_US),
            flip_h: rng.gen_bool(0.5),
            flip_v: rng.gen_bool(0.5),
            delete_frac,
            seed,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Shifted {
    pub stream: EventStream,
    pub track: LabelTrack,
    /// Set when the shift left nothing to align.
    pub warning: Option<String>,
}

/// Shifts event timestamps by `shift_us` and moves labels by the whole
/// number of label periods it contains (rounded toward zero).
///
/// Label `j` of the result is label `j - k` of the input. Events pushed
/// before zero are dropped, labels without a source are trimmed, and the
/// sub-period remainder of the shift stays on the events only. After a
/// positive shift the track starts at index `k`.
pub fn temporal_shift(stream: &EventStream, track: &LabelTrack, shift_us: i64) -> Result<Shifted> {
    if shift_us.abs() > MAX_SHIFT_US {
        return Err(Error::arg(format!("shift {shift_us} us exceeds +/-{MAX_SHIFT_US} us")));
    }
    let k = shift_us / LABEL_PERIOD_US as i64;
    let events: Vec<Event> = stream
        .events()
        .iter()
        .filter_map(|e| {
            let t = e.t_us as i64 + shift_us;
            (t >= 0).then_some(Event { t_us: t as u64, ..*e })
        })
        .collect();
    let labels: Vec<Label> = track
        .labels()
        .iter()
        .filter_map(|l| {
            let j = l.index as i64 + k;
            (j >= 0).then_some(Label { index: j as u64, ..*l })
        })
        .collect();

    let empty = |why: String| Shifted {
        stream: EventStream::empty(stream.width(), stream.height()),
        track: LabelTrack::from_points([]),
        warning: Some(why),
    };
    if labels.is_empty() {
        return Ok(empty(format!("shift of {shift_us} us leaves no labels")));
    }
    if events.is_empty() && !stream.is_empty() {
        return Ok(empty(format!("shift of {shift_us} us leaves no events")));
    }
    Ok(Shifted {
        stream: EventStream::from_sorted(stream.width(), stream.height(), events),
        track: LabelTrack::new(labels)?,
        warning: None,
    })
}

/// Mirrors coordinates: `x -> width - 1 - x` and/or `y -> height - 1 - y`,
/// for events and labels alike. Blink flags are untouched.
pub fn spatial_flip(stream: &EventStream, track: &LabelTrack, flip_h: bool, flip_v: bool) -> (EventStream, LabelTrack) {
    let (w, h) = (stream.width(), stream.height());
    let events = stream
        .events()
        .iter()
        .map(|e| Event {
            x: if flip_h { w - 1 - e.x } else { e.x },
            y: if flip_v { h - 1 - e.y } else { e.y },
            ..*e
        })
        .collect();
    let labels = track
        .labels()
        .iter()
        .map(|l| Label {
            x: if flip_h { f64::from(w - 1) - l.x } else { l.x },
            y: if flip_v { f64::from(h - 1) - l.y } else { l.y },
            ..*l
        })
        .collect();
    (
        EventStream::from_sorted(w, h, events),
        LabelTrack::new(labels).expect("indices unchanged"),
    )
}

/// Uniform draw in `[0, 1)` for event `ordinal`, independent of every
/// other ordinal.
fn keyed_uniform(seed: u64, ordinal: u64) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_word_pos(u128::from(ordinal) * 2);
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Drops each event independently with probability `frac`.
pub fn event_deletion(stream: &EventStream, frac: f64, seed: u64) -> Result<EventStream> {
    if !(0.0..=1.0).contains(&frac) {
        return Err(Error::arg(format!("deletion fraction {frac} outside [0, 1]")));
    }
    let kept = stream
        .events()
        .iter()
        .enumerate()
        .filter(|(i, _)| keyed_uniform(seed, *i as u64) >= frac)
        .map(|(_, e)| *e)
        .collect();
    Ok(EventStream::from_sorted(stream.width(), stream.height(), kept))
}

#[derive(Debug, Clone, PartialEq)]
pub struct Augmented {
    pub stream: EventStream,
    pub track: LabelTrack,
    pub warning: Option<String>,
}

/// Shift, then flip, then delete.
pub fn apply(stream: &EventStream, track: &LabelTrack, spec: &AugSpec) -> Result<Augmented> {
    let shifted = temporal_shift(stream, track, spec.shift_us)?;
    let (stream, track) = spatial_flip(&shifted.stream, &shifted.track, spec.flip_h, spec.flip_v);
    let stream = event_deletion(&stream, spec.delete_frac, spec.seed)?;
    Ok(Augmented { stream, track, warning: shifted.warning })
}
