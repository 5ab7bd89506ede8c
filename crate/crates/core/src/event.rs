//! DVS events, 100 Hz label tracks and their on-disk formats.
//!
//! Three file formats are supported:
//!
//! * event CSV, header `t_us,x,y,p` with `p` in `{0,1}`;
//! * `EVIO` binary, a 16-byte little-endian header followed by 14-byte
//!   records (`t_us u64, x u16, y u16, p u8, reserved u8`);
//! * label CSV, header `idx,x,y,blink`.
//!
//! CSV files carry no sensor geometry, so event CSV readers take it as an
//! argument. The binary header stores it.

use std::fs;
use std::io::Write;
use std::path::Path;

use crate::{Error, Result};

/// Label spacing in microseconds (100 Hz).
pub const LABEL_PERIOD_US: u64 = 10_000;

const BIN_MAGIC: &[u8; 4] = b"EVIO";
const BIN_VERSION: u16 = 1;
const BIN_HEADER_LEN: usize = 16;
const BIN_RECORD_LEN: usize = 14;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Polarity {
    Negative,
    Positive,
}

impl Polarity {
    /// Signed value used in arithmetic, `-1` or `+1`.
    pub fn sign(self) -> i32 {
        match self {
            Polarity::Negative => -1,
            Polarity::Positive => 1,
        }
    }

    /// On-disk value, `0` or `1`.
    pub fn bit(self) -> u8 {
        match self {
            Polarity::Negative => 0,
            Polarity::Positive => 1,
        }
    }

    pub fn from_bit(bit: u8) -> Option<Self> {
        match bit {
            0 => Some(Polarity::Negative),
            1 => Some(Polarity::Positive),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Event {
    pub t_us: u64,
    pub x: u16,
    pub y: u16,
    pub p: Polarity,
}

impl Event {
    pub fn new(t_us: u64, x: u16, y: u16, p: Polarity) -> Self {
        Self { t_us, x, y, p }
    }
}

/// Time-sorted events from one sensor.
///
/// Construction validates pixel bounds and stable-sorts by timestamp, so a
/// stream is always ordered and in bounds.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EventStream {
    width: u16,
    height: u16,
    events: Vec<Event>,
}

impl EventStream {
    pub fn new(width: u16, height: u16, mut events: Vec<Event>) -> Result<Self> {
        if let Some(e) = events.iter().find(|e| e.x >= width || e.y >= height) {
            return Err(Error::Bounds { x: e.x.into(), y: e.y.into(), width, height });
        }
        if !events.windows(2).all(|w| w[0].t_us <= w[1].t_us) {
            events.sort_by_key(|e| e.t_us);
        }
        Ok(Self { width, height, events })
    }

    pub fn empty(width: u16, height: u16) -> Self {
        Self { width, height, events: Vec::new() }
    }

    /// Builds a stream from events already known to be sorted and in bounds.
    pub(crate) fn from_sorted(width: u16, height: u16, events: Vec<Event>) -> Self {
        debug_assert!(events.windows(2).all(|w| w[0].t_us <= w[1].t_us));
        debug_assert!(events.iter().all(|e| e.x < width && e.y < height));
        Self { width, height, events }
    }

    pub fn width(&self) -> u16 {
        self.width
    }

    pub fn height(&self) -> u16 {
        self.height
    }

    pub fn events(&self) -> &[Event] {
        &self.events
    }

    pub fn into_events(self) -> Vec<Event> {
        self.events
    }

    pub fn len(&self) -> usize {
        self.events.len()
    }

    pub fn is_empty(&self) -> bool {
        self.events.is_empty()
    }

    /// `(first, last)` timestamps, or `None` for an empty stream.
    pub fn time_span(&self) -> Option<(u64, u64)> {
        Some((self.events.first()?.t_us, self.events.last()?.t_us))
    }

    /// Events with `t0 <= t_us < t1`, in their original order.
    pub fn slice(&self, t0: u64, t1: u64) -> Result<EventStream> {
        Ok(EventStream::from_sorted(self.width, self.height, self.window(t0, t1)?.to_vec()))
    }

    /// Borrowing variant of [`EventStream::slice`].
    pub fn window(&self, t0: u64, t1: u64) -> Result<&[Event]> {
        if t0 > t1 {
            return Err(Error::arg(format!("slice start {t0} after end {t1}")));
        }
        let lo = self.events.partition_point(|e| e.t_us < t0);
        let hi = self.events.partition_point(|e| e.t_us < t1);
        Ok(&self.events[lo..hi])
    }
}

/// One ground-truth pupil annotation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Label {
    pub index: u64,
    pub x: f64,
    pub y: f64,
    pub blink: bool,
}

impl Label {
    pub fn t_us(&self) -> u64 {
        self.index * LABEL_PERIOD_US
    }
}

/// Consecutively indexed 100 Hz labels.
///
/// Tracks read from disk or produced by the simulator start at index 0. A
/// temporally shifted track may start later, but indices stay consecutive.
#[derive(Debug, Clone, PartialEq)]
pub struct LabelTrack {
    labels: Vec<Label>,
}

impl LabelTrack {
    pub const RATE_HZ: u32 = 100;

    pub fn new(labels: Vec<Label>) -> Result<Self> {
        for (k, w) in labels.windows(2).enumerate() {
            if w[1].index != w[0].index + 1 {
                return Err(Error::Format(format!(
                    "label index gap: {} follows {} at row {}",
                    w[1].index,
                    w[0].index,
                    k + 2
                )));
            }
        }
        Ok(Self { labels })
    }

    /// Labels `0..n` from positions and blink flags.
    pub fn from_points(points: impl IntoIterator<Item = ([f64; 2], bool)>) -> Self {
        let labels = points
            .into_iter()
            .enumerate()
            .map(|(i, ([x, y], blink))| Label { index: i as u64, x, y, blink })
            .collect();
        Self { labels }
    }

    pub fn labels(&self) -> &[Label] {
        &self.labels
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn first_index(&self) -> Option<u64> {
        self.labels.first().map(|l| l.index)
    }

    pub fn points(&self) -> Vec<[f64; 2]> {
        self.labels.iter().map(|l| [l.x, l.y]).collect()
    }

    /// Checks non-blink positions against the sensor bounds.
    pub fn check_bounds(&self, width: u16, height: u16) -> Result<()> {
        let (w, h) = (f64::from(width), f64::from(height));
        match self
            .labels
            .iter()
            .find(|l| !l.blink && !(l.x >= 0.0 && l.x < w && l.y >= 0.0 && l.y < h))
        {
            Some(l) => Err(Error::Format(format!(
                "label {} at ({}, {}) outside {width}x{height} sensor",
                l.index, l.x, l.y
            ))),
            None => Ok(()),
        }
    }
}

fn csv_reader(path: &Path) -> Result<csv::Reader<fs::File>> {
    let file = fs::File::open(path).map_err(|e| Error::io(path, e))?;
    Ok(csv::ReaderBuilder::new().has_headers(true).trim(csv::Trim::All).from_reader(file))
}

fn check_header(rdr: &mut csv::Reader<fs::File>, expected: &[&str]) -> Result<()> {
    let header = rdr.headers().map_err(|e| Error::Parse { line: 1, msg: e.to_string() })?;
    if header.iter().ne(expected.iter().copied()) {
        return Err(Error::Parse {
            line: 1,
            msg: format!("expected header `{}`, found `{}`", expected.join(","), header.iter().collect::<Vec<_>>().join(",")),
        });
    }
    Ok(())
}

fn field<T: std::str::FromStr>(rec: &csv::StringRecord, i: usize, name: &str, line: usize) -> Result<T> {
    let raw = rec.get(i).ok_or_else(|| Error::Parse { line, msg: format!("missing field `{name}`") })?;
    raw.parse().map_err(|_| Error::Parse { line, msg: format!("bad {name} `{raw}`") })
}

fn records(rdr: &mut csv::Reader<fs::File>, ncols: usize) -> impl Iterator<Item = Result<(usize, csv::StringRecord)>> + '_ {
    rdr.records().map(move |r| {
        let rec = r.map_err(|e| Error::Parse {
            line: e.position().map_or(0, |p| p.line() as usize),
            msg: e.to_string(),
        })?;
        let line = rec.position().map_or(0, |p| p.line() as usize);
        if rec.len() != ncols {
            return Err(Error::Parse { line, msg: format!("expected {ncols} fields, found {}", rec.len()) });
        }
        Ok((line, rec))
    })
}

/// Reads an event CSV for a sensor of the given size.
pub fn read_events_csv(path: impl AsRef<Path>, width: u16, height: u16) -> Result<EventStream> {
    let path = path.as_ref();
    let mut rdr = csv_reader(path)?;
    check_header(&mut rdr, &["t_us", "x", "y", "p"])?;
    let mut events = Vec::new();
    for row in records(&mut rdr, 4) {
        let (line, rec) = row?;
        let t_us = field(&rec, 0, "t_us", line)?;
        let x: u16 = field(&rec, 1, "x", line)?;
        let y: u16 = field(&rec, 2, "y", line)?;
        let bit: u8 = field(&rec, 3, "p", line)?;
        let p = Polarity::from_bit(bit)
            .ok_or_else(|| Error::Parse { line, msg: format!("polarity must be 0 or 1, found {bit}") })?;
        if x >= width || y >= height {
            return Err(Error::Bounds { x: x.into(), y: y.into(), width, height });
        }
        events.push(Event { t_us, x, y, p });
    }
    EventStream::new(width, height, events)
}

pub fn write_events_csv(stream: &EventStream, path: impl AsRef<Path>) -> Result<()> {
    let mut out = String::with_capacity(16 + stream.len() * 16);
    out.push_str("t_us,x,y,p\n");
    for e in stream.events() {
        out.push_str(&format!("{},{},{},{}\n", e.t_us, e.x, e.y, e.p.bit()));
    }
    write_file(path.as_ref(), out.as_bytes())
}

pub(crate) fn write_file(path: &Path, bytes: &[u8]) -> Result<()> {
    let mut f = fs::File::create(path).map_err(|e| Error::io(path, e))?;
    f.write_all(bytes).map_err(|e| Error::io(path, e))
}

/// Serializes a stream into the `EVIO` binary layout.
pub fn encode_events_bin(stream: &EventStream) -> Result<Vec<u8>> {
    let count = u32::try_from(stream.len())
        .map_err(|_| Error::Format(format!("{} events exceed the u32 record count", stream.len())))?;
    let mut buf = Vec::with_capacity(BIN_HEADER_LEN + stream.len() * BIN_RECORD_LEN);
    buf.extend_from_slice(BIN_MAGIC);
    buf.extend_from_slice(&BIN_VERSION.to_le_bytes());
    buf.extend_from_slice(&stream.width.to_le_bytes());
    buf.extend_from_slice(&stream.height.to_le_bytes());
    buf.extend_from_slice(&count.to_le_bytes());
    buf.extend_from_slice(&0u16.to_le_bytes());
    for e in stream.events() {
        buf.extend_from_slice(&e.t_us.to_le_bytes());
        buf.extend_from_slice(&e.x.to_le_bytes());
        buf.extend_from_slice(&e.y.to_le_bytes());
        buf.push(e.p.bit());
        buf.push(0);
    }
    Ok(buf)
}

pub fn decode_events_bin(bytes: &[u8]) -> Result<EventStream> {
    if bytes.len() < BIN_HEADER_LEN {
        return Err(Error::Format(format!("{} bytes is shorter than the 16-byte header", bytes.len())));
    }
    let (header, body) = bytes.split_at(BIN_HEADER_LEN);
    if &header[0..4] != BIN_MAGIC {
        return Err(Error::Format("bad magic, expected `EVIO`".into()));
    }
    let u16_at = |b: &[u8], i: usize| u16::from_le_bytes([b[i], b[i + 1]]);
    let version = u16_at(header, 4);
    if version != BIN_VERSION {
        return Err(Error::Format(format!("unsupported version {version}")));
    }
    let width = u16_at(header, 6);
    let height = u16_at(header, 8);
    let count = u32::from_le_bytes(header[10..14].try_into().unwrap()) as usize;
    if body.len() % BIN_RECORD_LEN != 0 {
        return Err(Error::Format(format!(
            "truncated body: {} bytes is not a multiple of {BIN_RECORD_LEN}",
            body.len()
        )));
    }
    if body.len() / BIN_RECORD_LEN != count {
        return Err(Error::Format(format!(
            "header declares {count} records, body holds {}",
            body.len() / BIN_RECORD_LEN
        )));
    }
    let mut events = Vec::with_capacity(count);
    for (i, rec) in body.chunks_exact(BIN_RECORD_LEN).enumerate() {
        let t_us = u64::from_le_bytes(rec[0..8].try_into().unwrap());
        let x = u16_at(rec, 8);
        let y = u16_at(rec, 10);
        let p = Polarity::from_bit(rec[12])
            .ok_or_else(|| Error::Format(format!("record {i}: polarity byte {}", rec[12])))?;
        events.push(Event { t_us, x, y, p });
    }
    EventStream::new(width, height, events)
}

pub fn write_events_bin(stream: &EventStream, path: impl AsRef<Path>) -> Result<()> {
    write_file(path.as_ref(), &encode_events_bin(stream)?)
}

pub fn read_events_bin(path: impl AsRef<Path>) -> Result<EventStream> {
    let path = path.as_ref();
    let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
    decode_events_bin(&bytes)
}

/// Formats a coordinate with at least four fractional digits while keeping
/// the shortest representation that parses back to the same `f64`.
pub(crate) fn fmt_coord(v: f64) -> String {
    let mut s = format!("{v}");
    if !v.is_finite() {
        return s;
    }
    let frac = match s.find('.') {
        Some(dot) => s.len() - dot - 1,
        None => {
            s.push('.');
            0
        }
    };
    for _ in frac..4 {
        s.push('0');
    }
    s
}

pub fn read_labels_csv(path: impl AsRef<Path>) -> Result<LabelTrack> {
    let path = path.as_ref();
    let mut rdr = csv_reader(path)?;
    check_header(&mut rdr, &["idx", "x", "y", "blink"])?;
    let mut labels: Vec<Label> = Vec::new();
    for row in records(&mut rdr, 4) {
        let (line, rec) = row?;
        let index: u64 = field(&rec, 0, "idx", line)?;
        let x = field(&rec, 1, "x", line)?;
        let y = field(&rec, 2, "y", line)?;
        let blink = match field::<u8>(&rec, 3, "blink", line)? {
            0 => false,
            1 => true,
            b => return Err(Error::Parse { line, msg: format!("blink must be 0 or 1, found {b}") }),
        };
        if let Some(prev) = labels.last() {
            if index != prev.index + 1 {
                return Err(Error::Format(format!(
                    "line {line}: label index {index} does not follow {}",
                    prev.index
                )));
            }
        }
        labels.push(Label { index, x, y, blink });
    }
    LabelTrack::new(labels)
}

pub fn write_labels_csv(track: &LabelTrack, path: impl AsRef<Path>) -> Result<()> {
    let mut out = String::from("idx,x,y,blink\n");
    for l in track.labels() {
        out.push_str(&format!("{},{},{},{}\n", l.index, fmt_coord(l.x), fmt_coord(l.y), u8::from(l.blink)));
    }
    write_file(path.as_ref(), out.as_bytes())
}
