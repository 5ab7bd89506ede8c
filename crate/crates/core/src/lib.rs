//! Event-camera eye tracking toolkit.
//!
//! The crate covers the full offline pipeline for pupil-center tracking from
//! DVS event streams:
//!
//! 1. [`event`] - events, 100 Hz label tracks, CSV and `EVIO` binary I/O.
//! 2. [`repr`] - per-label count frames, binary maps, bina-reps, pooling and
//!    sliding-window sample indices.
//! 3. [`sim`] - scripted eye motion and a log-intensity DVS renderer.
//! 4. [`track`] - centroid baseline, linear readout trained on the
//!    temporal RMSE loss, and bidirectional relative-position attention.
//! 5. [`postprocess`] - motion-aware median filtering, event-flow
//!    refinement and the polarity-ratio blink override.
//! 6. [`augment`] - temporal shift, spatial flip and event deletion.
//! 7. [`metrics`] - pixel error and p-accuracy.
//! 8. [`report`] - report CSV and SVG trajectory plots.
#![allow(clippy::neg_cmp_op_on_partial_ord)] // `!(x > 0.0)` also rejects NaN

pub mod augment;
mod error;
pub mod event;
pub mod metrics;
pub mod postprocess;
pub mod repr;
pub mod report;
pub mod sim;
pub mod track;

pub use error::{Error, Result};
pub use event::{Event, EventStream, Label, LabelTrack, Polarity, LABEL_PERIOD_US};
pub use track::Trajectory;
