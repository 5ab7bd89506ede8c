//! `evio`: simulate, augment, track, post-process, evaluate and plot
//! event-camera pupil recordings.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;

use evio::augment::{self, AugSpec};
use evio::event::{self, Label};
use evio::metrics::{self, EvalReport};
use evio::postprocess::{self, M2FParams, MotionMethod, OFEParams};
use evio::repr::{self, FrameStack};
use evio::sim::Scenario;
use evio::track::{self, TrainConfig};
use evio::{EventStream, LabelTrack, Trajectory};

const DEFAULT_SEED: u64 = 42;

#[derive(Parser)]
#[command(name = "evio", version, about = "Event-camera pupil tracking toolkit")]
struct Cli {
    /// Seed for every stochastic stage [default: 42, or the scenario's own
    /// seed for `simulate`].
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Sensor geometry for CSV event input, `WxH`.
    #[arg(long, global = true, default_value = "80x60", value_parser = parse_sensor)]
    sensor: (u16, u16),
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a scenario JSON (or every `*.json` in a directory) through the simulator.
    Simulate {
        #[arg(long)]
        scenario: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Convert events between CSV and the binary format, by file extension.
    Convert {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        output: PathBuf,
    },
    /// Temporal shift, flips and random deletion.
    Augment {
        #[command(flatten)]
        rec: Recording,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
        shift_us: i64,
        #[arg(long)]
        flip_h: bool,
        #[arg(long)]
        flip_v: bool,
        #[arg(long, default_value_t = 0.05)]
        delete_frac: f64,
    },
    /// Predict one pupil position per label.
    Track(TrackArgs),
    /// Refine a trajectory with M2F, OFE and the blink override.
    Postprocess(PostArgs),
    /// Score predictions against labels.
    Evaluate {
        /// Prediction CSVs; each becomes one row named after its file stem.
        #[arg(long, required = true, num_args = 1..)]
        pred: Vec<PathBuf>,
        #[arg(long)]
        labels: PathBuf,
        #[arg(long)]
        include_blink: bool,
        #[arg(long, default_value = "report.csv")]
        report: PathBuf,
    },
    /// Write `trajectory.svg` and `report.csv`.
    Report {
        #[arg(long, required = true, num_args = 1..)]
        pred: Vec<PathBuf>,
        #[arg(long)]
        labels: PathBuf,
        #[arg(long)]
        include_blink: bool,
        #[arg(long)]
        out: PathBuf,
    },
    /// Write per-label frames as CSV matrices.
    Dump {
        #[command(flatten)]
        rec: Recording,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, value_enum, default_value_t = Channel::Both)]
        channel: Channel,
        /// Write 0/1 occupancy instead of counts.
        #[arg(long)]
        binarize: bool,
        /// Sum-pool factor applied before writing.
        #[arg(long, default_value_t = 1)]
        downsample: usize,
    },
}

#[derive(Args)]
struct Recording {
    /// Event file, `.csv` or `.bin`.
    #[arg(long)]
    events: PathBuf,
    #[arg(long)]
    labels: PathBuf,
}

#[derive(Clone, Copy, ValueEnum)]
enum Tracker {
    Centroid,
    Linear,
}

#[derive(Clone, Copy, PartialEq, ValueEnum)]
enum Channel {
    Both,
    Pos,
    Neg,
}

#[derive(Args)]
struct TrackArgs {
    #[command(flatten)]
    rec: Recording,
    #[arg(long)]
    out: PathBuf,
    #[arg(long, value_enum, default_value_t = Tracker::Centroid)]
    tracker: Tracker,
    /// Centroid activity half-life, in frames.
    #[arg(long, default_value_t = 1.0)]
    decay: f64,
    #[arg(long, default_value_t = 5.0)]
    min_events: f64,
    /// Trained linear model to apply; without it the model is fit to the labels.
    #[arg(long)]
    model: Option<PathBuf>,
    #[arg(long)]
    model_out: Option<PathBuf>,
    #[arg(long, default_value_t = TrainConfig::default().lr)]
    lr: f64,
    #[arg(long, default_value_t = TrainConfig::default().epochs)]
    epochs: usize,
    #[arg(long, default_value_t = 4)]
    downsample: usize,
}

#[derive(Args)]
struct PostArgs {
    #[arg(long)]
    pred: PathBuf,
    #[arg(long)]
    out: PathBuf,
    /// Events for OFE and the blink override.
    #[arg(long)]
    events: Option<PathBuf>,
    #[arg(long)]
    m2f: bool,
    #[arg(long)]
    ofe: bool,
    #[arg(long)]
    blink_override: bool,
    #[arg(long, default_value_t = MotionMethod::default())]
    method: MotionMethod,
    #[arg(long, default_value_t = M2FParams::default().w_base)]
    w_base: usize,
    #[arg(long, default_value_t = M2FParams::default().w_min)]
    w_min: usize,
    #[arg(long, default_value_t = M2FParams::default().w_max)]
    w_max: usize,
    #[arg(long, default_value_t = M2FParams::default().percentile)]
    percentile: f64,
    #[arg(long, default_value_t = OFEParams::default().tau)]
    tau: f64,
    #[arg(long, default_value_t = OFEParams::default().c)]
    c: usize,
    #[arg(long, default_value_t = OFEParams::default().gamma)]
    gamma: f64,
    #[arg(long, default_value_t = OFEParams::default().kappa)]
    kappa: f64,
    #[arg(long, default_value_t = postprocess::DEFAULT_RATIO_THRESHOLD)]
    ratio_threshold: f64,
}

fn parse_sensor(s: &str) -> Result<(u16, u16), String> {
    let (w, h) = s.split_once(['x', 'X']).ok_or_else(|| format!("expected WxH, got `{s}`"))?;
    let w: u16 = w.trim().parse().map_err(|_| format!("bad width in `{s}`"))?;
    let h: u16 = h.trim().parse().map_err(|_| format!("bad height in `{s}`"))?;
    if w == 0 || h == 0 {
        return Err("sensor size must be non-zero".into());
    }
    Ok((w, h))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            // library errors already embed their source text
            let mut msg = e.to_string();
            for cause in e.chain().skip(1) {
                let cause = cause.to_string();
                if !msg.contains(&cause) {
                    msg = format!("{msg}: {cause}");
                }
            }
            eprintln!("error: {msg}");
            ExitCode::FAILURE
        }
    }
}

fn run(cli: Cli) -> Result<()> {
    let sensor = cli.sensor;
    match cli.cmd {
        Command::Simulate { scenario, out } => simulate(&scenario, &out, cli.seed),
        Command::Convert { input, output } => {
            let stream = read_events(&input, sensor)?;
            write_events(&stream, &output)
        }
        Command::Augment { rec, out, shift_us, flip_h, flip_v, delete_frac } => {
            let (stream, track) = load(&rec, sensor)?;
            let spec = AugSpec { shift_us, flip_h, flip_v, delete_frac, seed: cli.seed.unwrap_or(DEFAULT_SEED) };
            let aug = augment::apply(&stream, &track, &spec)?;
            if let Some(w) = &aug.warning {
                eprintln!("warning: {w}");
            }
            create_dir(&out)?;
            write_events(&aug.stream, &out.join("events.csv"))?;
            write_events(&aug.stream, &out.join("events.bin"))?;
            event::write_labels_csv(&aug.track, out.join("labels.csv"))?;
            Ok(())
        }
        Command::Track(args) => run_track(&args, sensor),
        Command::Postprocess(args) => run_postprocess(&args, sensor),
        Command::Evaluate { pred, labels, include_blink, report } => {
            let rows = evaluate(&pred, &labels, include_blink)?;
            print!("{}", metrics::report_table(&rows));
            fs::write(&report, metrics::report_csv(&rows)).with_context(|| format!("writing {}", report.display()))
        }
        Command::Report { pred, labels, include_blink, out } => {
            let rows = evaluate(&pred, &labels, include_blink)?;
            let gt = event::read_labels_csv(&labels)?;
            let preds = pred.iter().map(track::read_trajectory_csv).collect::<evio::Result<Vec<_>>>()?;
            let named: Vec<(&str, &Trajectory)> = preds.iter().map(|p| (p.source.as_str(), p)).collect();
            create_dir(&out)?;
            let svg = evio::report::trajectory_svg(&gt, &named, sensor.0, sensor.1);
            let path = out.join("trajectory.svg");
            fs::write(&path, svg).with_context(|| format!("writing {}", path.display()))?;
            let path = out.join("report.csv");
            fs::write(&path, metrics::report_csv(&rows)).with_context(|| format!("writing {}", path.display()))
        }
        Command::Dump { rec, out, channel, binarize, downsample } => {
            let (stream, track) = load(&rec, sensor)?;
            let stack = repr::bin_to_frames(&stream, &track);
            create_dir(&out)?;
            for (label, frame) in track.labels().iter().zip(&stack.frames) {
                let frame = repr::downsample(frame, downsample, downsample)?;
                let grid = match channel {
                    Channel::Both => frame.combined(),
                    Channel::Pos => frame.counts_pos.clone(),
                    Channel::Neg => frame.counts_neg.clone(),
                };
                let mut text = String::new();
                for row in grid.rows() {
                    let cells: Vec<String> = row.iter().map(|&c| if binarize { u32::from(c > 0) } else { c }.to_string()).collect();
                    text.push_str(&cells.join(","));
                    text.push('\n');
                }
                let path = out.join(format!("frame_{:06}.csv", label.index));
                fs::write(&path, text).with_context(|| format!("writing {}", path.display()))?;
            }
            Ok(())
        }
    }
}

fn create_dir(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))
}

fn is_bin(path: &Path) -> bool {
    path.extension().is_some_and(|e| e.eq_ignore_ascii_case("bin"))
}

fn read_events(path: &Path, sensor: (u16, u16)) -> Result<EventStream> {
    let stream = if is_bin(path) {
        event::read_events_bin(path)?
    } else {
        event::read_events_csv(path, sensor.0, sensor.1).with_context(|| format!("reading {} as a {}x{} sensor", path.display(), sensor.0, sensor.1))?
    };
    Ok(stream)
}

fn write_events(stream: &EventStream, path: &Path) -> Result<()> {
    if is_bin(path) {
        event::write_events_bin(stream, path)?;
    } else {
        event::write_events_csv(stream, path)?;
    }
    Ok(())
}

fn load(rec: &Recording, sensor: (u16, u16)) -> Result<(EventStream, LabelTrack)> {
    let stream = read_events(&rec.events, sensor)?;
    let track = event::read_labels_csv(&rec.labels)?;
    track.check_bounds(stream.width(), stream.height())?;
    Ok((stream, track))
}

fn threads() -> Result<usize> {
    match std::env::var("EVIO_THREADS") {
        Ok(v) => v.trim().parse().with_context(|| format!("EVIO_THREADS must be a non-negative integer, got `{v}`")),
        Err(_) => Ok(0),
    }
}

fn simulate(scenario: &Path, out: &Path, seed: Option<u64>) -> Result<()> {
    if !scenario.is_dir() {
        return simulate_one(scenario, out, seed);
    }
    let mut files: Vec<PathBuf> = fs::read_dir(scenario)
        .with_context(|| format!("reading {}", scenario.display()))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|e| e == "json"))
        .collect();
    files.sort();
    if files.is_empty() {
        bail!("no .json scenarios in {}", scenario.display());
    }
    let pool = rayon::ThreadPoolBuilder::new().num_threads(threads()?).build()?;
    pool.install(|| {
        files.par_iter().try_for_each(|f| {
            let stem = f.file_stem().unwrap_or_default();
            simulate_one(f, &out.join(stem), seed)
        })
    })
}

fn simulate_one(path: &Path, out: &Path, seed: Option<u64>) -> Result<()> {
    let mut sc = Scenario::load(path).with_context(|| format!("loading scenario {}", path.display()))?;
    if let Some(seed) = seed {
        sc.config.seed = seed;
    }
    let (track, stream) = sc.run().with_context(|| format!("simulating {}", path.display()))?;
    create_dir(out)?;
    write_events(&stream, &out.join("events.csv"))?;
    write_events(&stream, &out.join("events.bin"))?;
    event::write_labels_csv(&track, out.join("labels.csv"))?;
    Ok(())
}

fn run_track(a: &TrackArgs, sensor: (u16, u16)) -> Result<()> {
    let (stream, track) = load(&a.rec, sensor)?;
    let stack = repr::bin_to_frames(&stream, &track);
    let traj = match a.tracker {
        Tracker::Centroid => {
            if a.decay.is_nan() || a.decay <= 0.0 {
                bail!("--decay must be > 0");
            }
            track::centroid_track(&stack, a.decay, a.min_events)
        }
        Tracker::Linear => {
            let features = track::features_from_stack(&stack, a.downsample)?;
            let model = match &a.model {
                Some(p) => track::read_model_csv(p)?,
                None => {
                    let cfg = TrainConfig { lr: a.lr, epochs: a.epochs };
                    let (model, report) = track::train_linear(&features, &track.points(), cfg)?;
                    if let Some(last) = report.losses.last() {
                        eprintln!("trained {} epochs, final loss {last:.6}", a.epochs);
                    }
                    model
                }
            };
            if let Some(p) = &a.model_out {
                track::write_model_csv(&model, p)?;
            }
            track::predict_linear(&model, &features)?
        }
    };
    track::write_trajectory_csv(&traj, track.first_index().unwrap_or(0), &a.out)?;
    Ok(())
}

/// Frames on the prediction's own label grid.
fn frames_for(first: u64, traj: &Trajectory, stream: &EventStream) -> Result<FrameStack> {
    let labels = traj
        .points
        .iter()
        .enumerate()
        .map(|(i, p)| Label { index: first + i as u64, x: p[0], y: p[1], blink: false })
        .collect();
    Ok(repr::bin_to_frames(stream, &LabelTrack::new(labels)?))
}

fn run_postprocess(a: &PostArgs, sensor: (u16, u16)) -> Result<()> {
    let (first, mut traj) = track::read_indexed_trajectory_csv(&a.pred)?;
    let stream = match &a.events {
        Some(p) => Some(read_events(p, sensor)?),
        None if a.ofe || a.blink_override => bail!("--ofe and --blink-override need --events"),
        None => None,
    };
    if a.m2f {
        let params = M2FParams { w_base: a.w_base, w_min: a.w_min, w_max: a.w_max, percentile: a.percentile, method: a.method };
        traj = postprocess::m2f(&traj, &params)?;
    }
    if let (true, Some(s)) = (a.ofe, &stream) {
        traj = postprocess::ofe(&traj, s, &OFEParams { tau: a.tau, c: a.c, gamma: a.gamma, kappa: a.kappa })?;
    }
    if let (true, Some(s)) = (a.blink_override, &stream) {
        let stack = frames_for(first, &traj, s)?;
        let outcome = postprocess::blink_override(&traj, &stack, a.ratio_threshold)?;
        if outcome.all_flagged {
            eprintln!("warning: every frame looks like a blink; predictions left unchanged");
        }
        traj = outcome.trajectory;
    }
    track::write_trajectory_csv(&traj, first, &a.out)?;
    Ok(())
}

fn evaluate(preds: &[PathBuf], labels: &Path, include_blink: bool) -> Result<Vec<metrics::ComparisonRow>> {
    let gt = event::read_labels_csv(labels)?;
    let reports = preds
        .iter()
        .map(|p| {
            let traj = track::read_trajectory_csv(p)?;
            let r: EvalReport = metrics::pixel_error(&traj, &gt, !include_blink).with_context(|| format!("scoring {}", p.display()))?;
            Ok((traj.source, r))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(metrics::compare(&reports))
}
