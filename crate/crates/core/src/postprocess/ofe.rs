use crate::event::EventStream;
use crate::track::Trajectory;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OFEParams {
    /// Scales the ROI half-size (`10 * tau`), the event-count gate and the
    /// jump threshold.
    pub tau: f64,
    /// Number of previous predictions averaged for the jump test.
    pub c: usize,
    /// Jump threshold, in units of `tau` pixels.
    pub gamma: f64,
    /// ROI grows to `(1 + kappa)` or shrinks to `(1 - kappa)` of its base.
    pub kappa: f64,
}

impl Default for OFEParams {
    fn default() -> Self {
        Self { tau: 1.0, c: 5, gamma: 3.0, kappa: 0.5 }
    }
}

impl OFEParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.tau > 0.0) || !(self.gamma > 0.0) {
            return Err(Error::arg("tau and gamma must be > 0"));
        }
        if self.c == 0 {
            return Err(Error::arg("count threshold c must be >= 1"));
        }
        if !(self.kappa > 0.0 && self.kappa < 1.0) {
            return Err(Error::arg("kappa must lie in (0, 1)"));
        }
        Ok(())
    }
}

/// Event-flow refinement.
///
/// The stream's time span is tiled into one window per prediction. For each
/// prediction the events of its window inside the square ROI are gathered;
/// when there are more than `10 * tau` of them, the prediction moves one
/// pixel along the direction from the first to the last ROI event. The ROI
/// grows after a jump away from the mean of the previous `c` predictions
/// and shrinks otherwise.
pub fn ofe(traj: &Trajectory, stream: &EventStream, params: &OFEParams) -> Result<Trajectory> {
    params.validate()?;
    let mut out = traj.clone();
    out.source = format!("{}+ofe", traj.source);
    let n = traj.len();
    let Some((t_min, t_max)) = stream.time_span() else {
        return Ok(out);
    };
    if n == 0 || t_max == t_min {
        return Ok(out);
    }
    let timestep = (t_max - t_min) as f64 / n as f64;
    let base = params.tau * 10.0;
    let jump = params.tau * params.gamma;
    let mut half = base;
    let events = stream.events();

    for (j, p) in traj.points.iter().enumerate() {
        let t0 = t_min + (j as f64 * timestep) as u64;
        let t1 = if j + 1 == n { t_max + 1 } else { t_min + ((j + 1) as f64 * timestep) as u64 };
        if j > params.c {
            let prev = &traj.points[j - params.c..j];
            let mx = prev.iter().map(|q| q[0]).sum::<f64>() / params.c as f64;
            let my = prev.iter().map(|q| q[1]).sum::<f64>() / params.c as f64;
            half = if (p[0] - mx).abs() > jump || (p[1] - my).abs() > jump {
                (1.0 + params.kappa) * base
            } else {
                (1.0 - params.kappa) * base
            };
        }
        let lo = events.partition_point(|e| e.t_us < t0);
        let hi = events.partition_point(|e| e.t_us < t1);
        let mut roi = events[lo..hi]
            .iter()
            .filter(|e| (f64::from(e.x) - p[0]).abs() <= half && (f64::from(e.y) - p[1]).abs() <= half);
        let Some(first) = roi.next() else { continue };
        let (count, last) = roi.fold((1usize, first), |(k, _), e| (k + 1, e));
        if count as f64 <= base {
            continue;
        }
        // the per-event increments telescope to last - first
        let dx = f64::from(last.x) - f64::from(first.x);
        let dy = f64::from(last.y) - f64::from(first.y);
        let norm = dx.hypot(dy);
        if norm > 0.0 {
            out.points[j] = [p[0] + dx / norm, p[1] + dy / norm];
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::event::{Event, Polarity};

    fn ev(t: u64, x: u16, y: u16) -> Event {
        Event::new(t, x, y, Polarity::Positive)
    }

    #[test]
    fn no_nearby_events_is_identity() {
        let s = EventStream::new(100, 100, (0..50).map(|i| ev(i * 100, 95, 95)).collect()).unwrap();
        let t = Trajectory::new(vec![[10.0, 10.0], [12.0, 10.0]], "p");
        assert_eq!(ofe(&t, &s, &OFEParams::default()).unwrap().points, t.points);
    }

    #[test]
    fn pure_x_flow_moves_one_pixel() {
        // 12 events > 10 * tau, positions drifting from x=20 to x=28
        let events: Vec<_> = (0..12).map(|i| ev(i, 20 + (i as u16 * 8) / 11, 30)).collect();
        let s = EventStream::new(64, 64, events).unwrap();
        let t = Trajectory::new(vec![[24.0, 30.0]], "p");
        let out = ofe(&t, &s, &OFEParams::default()).unwrap();
        assert_eq!(out.points, vec![[25.0, 30.0]]);
    }

    #[test]
    fn count_gate_is_strict() {
        // exactly 10 events: not more than 10 * tau
        let s = EventStream::new(64, 64, (0..10).map(|i| ev(i, 20 + i as u16, 30)).collect()).unwrap();
        let t = Trajectory::new(vec![[24.0, 30.0]], "p");
        assert_eq!(ofe(&t, &s, &OFEParams::default()).unwrap().points, t.points);
    }

    #[test]
    fn flow_is_last_minus_first() {
        let s = EventStream::new(64, 64, (0..20).map(|i| ev(i, 24 + (i % 2) as u16, 30)).collect()).unwrap();
        let t = Trajectory::new(vec![[24.0, 30.0]], "p");
        // first (24,30) and last (25,30): still a unit step in x
        assert_eq!(ofe(&t, &s, &OFEParams::default()).unwrap().points, vec![[25.0, 30.0]]);
        let s = EventStream::new(64, 64, (0..21).map(|i| ev(i, 24 + (i % 2) as u16, 30)).collect()).unwrap();
        assert_eq!(ofe(&t, &s, &OFEParams::default()).unwrap().points, t.points);
    }

    #[test]
    fn roi_shrinks_when_steady() {
        // after c steady predictions the half-size drops to 5, excluding events 8 px away
        let p = OFEParams::default();
        let n = 8;
        let mut events = Vec::new();
        for j in 0..n as u64 {
            for k in 0..12 {
                events.push(ev(j * 1_000 + k, 38 + k as u16 / 6, 30));
            }
        }
        events.push(ev(n as u64 * 1_000 - 1, 38, 30));
        let s = EventStream::new(64, 64, events).unwrap();
        let t = Trajectory::new(vec![[30.0, 30.0]; n], "p");
        let out = ofe(&t, &s, &p).unwrap();
        assert_eq!(out.points[0], [31.0, 30.0]);
        assert_eq!(out.points[n - 1], [30.0, 30.0]);
    }

    #[test]
    fn degenerate_inputs_pass_through() {
        let t = Trajectory::new(vec![[1.0, 1.0]], "p");
        assert_eq!(ofe(&t, &EventStream::empty(4, 4), &OFEParams::default()).unwrap().points, t.points);
        let s = EventStream::new(4, 4, vec![ev(5, 1, 1); 20]).unwrap();
        assert_eq!(ofe(&t, &s, &OFEParams::default()).unwrap().points, t.points);
        assert!(ofe(&t, &s, &OFEParams { kappa: 1.0, ..OFEParams::default() }).is_err());
        assert!(ofe(&t, &s, &OFEParams { tau: 0.0, ..OFEParams::default() }).is_err());
    }
}
