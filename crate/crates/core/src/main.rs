use std::fs::File;
use std::io::{self, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use evguide::event_core::io::read_events;
use evguide::event_core::{make_event_frame, Resolution, TimeWindow};
use evguide::harness::{
    compare_sampling, frequency_range, run_scenario, sweep_delta_t, sweep_event_rate,
    write_rows_csv, DumpSet, Overrides, RunOptions, Scenario, COMPARE_FILE, DEFAULT_FREQ_RANGE,
    REPORT_FILE,
};
use evguide::projector_sim::{SensorPreset, SENSOR_PRESETS};
use evguide::sampling_policy::active_pixel_fraction;
use evguide::Error;

const DEFAULT_OUT_DIR: &str = "out";

#[derive(Parser)]
#[command(
    name = "evguide",
    version,
    about = "Event-guided structured light simulator"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a scenario and write report.csv plus the requested artifacts.
    Simulate(RunArgs),
    /// Dense dwell time per sensor preset and scan frequency.
    SweepDeltaT(SweepArgs),
    /// Reflection event rate per sensor preset and scan frequency.
    SweepEventRate {
        #[command(flatten)]
        sweep: SweepArgs,
        /// Lit share of the projector pixels.
        #[arg(long, default_value_t = 1.0)]
        fraction: f64,
    },
    /// Run a scenario under dense, sparse and event-guided policies.
    CompareSampling(RunArgs),
    /// Active-pixel fraction of an event CSV, per time window.
    ActivePixels(ActiveArgs),
}

#[derive(Args)]
struct RunArgs {
    /// Scenario TOML file.
    scenario: PathBuf,
    #[arg(long)]
    seed: Option<u64>,
    /// Defaults to the scenario's output_dir, then `out`.
    #[arg(long)]
    out_dir: Option<PathBuf>,
    /// Artifact families to write; repeat or comma-separate.
    #[arg(long, value_enum, value_delimiter = ',')]
    dump: Vec<Dump>,
    #[arg(long)]
    periods: Option<usize>,
    /// Worker threads; results are identical for any value.
    #[arg(long)]
    threads: Option<usize>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Dump {
    Events,
    Masks,
    Depth,
    Ply,
    All,
}

#[derive(Args)]
struct SweepArgs {
    /// Preset names, comma-separated; all presets when omitted.
    #[arg(long, value_delimiter = ',')]
    presets: Vec<String>,
    #[arg(long, default_value_t = DEFAULT_FREQ_RANGE.0)]
    f_min: f64,
    #[arg(long, default_value_t = DEFAULT_FREQ_RANGE.1)]
    f_max: f64,
    #[arg(long, default_value_t = 10.0)]
    f_step: f64,
    /// Output CSV; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ActiveArgs {
    /// Event CSV with header `t_us,x,y,p`.
    events: PathBuf,
    #[arg(long)]
    width: usize,
    #[arg(long)]
    height: usize,
    /// Window length in microseconds; one window spanning the stream when omitted.
    #[arg(long)]
    window_us: Option<f64>,
    /// Minimum events for a pixel to count as active.
    #[arg(long, default_value_t = 1)]
    threshold: u32,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Serialize)]
struct ActiveRow {
    window_start_us: f64,
    window_end_us: f64,
    events: usize,
    active_fraction: f64,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::Config { .. } => ExitCode::from(2),
                _ => ExitCode::FAILURE,
            }
        }
    }
}

fn run(command: Command) -> evguide::Result<()> {
    match command {
        Command::Simulate(args) => {
            let (scenario, options) = prepare(&args)?;
            let reports = run_scenario(&scenario, &options)?;
            let dir = options
                .out_dir
                .as_deref()
                .unwrap_or(Path::new(DEFAULT_OUT_DIR));
            let failed = reports.iter().filter(|r| r.error.is_some()).count();
            eprintln!(
                "{} periods simulated ({failed} with errors); report at {}",
                reports.len(),
                dir.join(REPORT_FILE).display()
            );
            Ok(())
        }
        Command::CompareSampling(args) => {
            let (scenario, options) = prepare(&args)?;
            let rows = compare_sampling(&scenario, &options)?;
            write_rows_csv(&rows, io::stdout().lock())?;
            if let Some(dir) = &options.out_dir {
                eprintln!("comparison at {}", dir.join(COMPARE_FILE).display());
            }
            Ok(())
        }
        Command::SweepDeltaT(args) => {
            let rows = sweep_delta_t(&presets(&args.presets)?, &freqs(&args)?)?;
            emit(&rows, args.out.as_deref())
        }
        Command::SweepEventRate { sweep, fraction } => {
            let rows = sweep_event_rate(&presets(&sweep.presets)?, &freqs(&sweep)?, fraction)?;
            emit(&rows, sweep.out.as_deref())
        }
        Command::ActivePixels(args) => active_pixels(&args),
    }
}

fn prepare(args: &RunArgs) -> evguide::Result<(Scenario, RunOptions)> {
    let overrides = Overrides {
        seed: args.seed,
        periods: args.periods,
    };
    let scenario = Scenario::load_with(&args.scenario, overrides)?;
    let mut dump = DumpSet::default();
    for d in &args.dump {
        match d {
            Dump::Events => dump.events = true,
            Dump::Masks => dump.masks = true,
            Dump::Depth => dump.depth = true,
            Dump::Ply => dump.ply = true,
            Dump::All => dump = DumpSet::all(),
        }
    }
    if args.threads == Some(0) {
        return Err(Error::InvalidArgument("--threads must be >= 1".into()));
    }
    let out_dir = args
        .out_dir
        .clone()
        .or_else(|| scenario.output_dir.clone())
        .unwrap_or_else(|| PathBuf::from(DEFAULT_OUT_DIR));
    let options = RunOptions {
        out_dir: Some(out_dir),
        dump,
        threads: args.threads,
    };
    Ok((scenario, options))
}

fn presets(names: &[String]) -> evguide::Result<Vec<SensorPreset>> {
    if names.is_empty() {
        return Ok(SENSOR_PRESETS.to_vec());
    }
    names
        .iter()
        .map(|n| {
            SensorPreset::by_name(n).ok_or_else(|| {
                let known: Vec<_> = SENSOR_PRESETS.iter().map(|p| p.name).collect();
                Error::InvalidArgument(format!(
                    "unknown preset `{n}` (known: {})",
                    known.join(", ")
                ))
            })
        })
        .collect()
}

fn freqs(args: &SweepArgs) -> evguide::Result<Vec<f64>> {
    frequency_range(args.f_min, args.f_max, args.f_step)
}

fn emit<T: Serialize>(rows: &[T], out: Option<&Path>) -> evguide::Result<()> {
    match out {
        Some(path) => {
            let file = File::create(path).map_err(|e| Error::Io {
                path: path.to_path_buf(),
                source: e,
            })?;
            let mut w = BufWriter::new(file);
            write_rows_csv(rows, &mut w)?;
            w.flush()?;
            Ok(())
        }
        None => write_rows_csv(rows, io::stdout().lock()),
    }
}

fn active_pixels(args: &ActiveArgs) -> evguide::Result<()> {
    let file = File::open(&args.events).map_err(|e| Error::Io {
        path: args.events.clone(),
        source: e,
    })?;
    let stream = read_events(
        BufReader::new(file),
        Some(Resolution::new(args.width, args.height)),
    )?;
    let events = stream.events();
    let mut rows = Vec::new();
    if let (Some(first), Some(last)) = (events.first(), events.last()) {
        let windows: Vec<TimeWindow> = match args.window_us {
            Some(w) if !(w > 0.0 && w.is_finite()) => {
                return Err(Error::InvalidArgument(
                    "--window-us must be positive".into(),
                ));
            }
            Some(w) => {
                let n = ((last.t - first.t) / w).floor() as usize + 1;
                (0..n)
                    .map(|i| TimeWindow::new(first.t + i as f64 * w, first.t + (i + 1) as f64 * w))
                    .collect::<evguide::Result<_>>()?
            }
            None => vec![TimeWindow::new(first.t, last.t.next_up())?],
        };
        for window in windows {
            let frame = make_event_frame(&stream, window);
            rows.push(ActiveRow {
                window_start_us: window.start,
                window_end_us: window.end,
                events: stream.slice(window).len(),
                active_fraction: active_pixel_fraction(&frame, args.threshold),
            });
        }
        let mean = rows.iter().map(|r| r.active_fraction).sum::<f64>() / rows.len() as f64;
        eprintln!("mean active fraction over {} windows: {mean}", rows.len());
    }
    emit(&rows, args.out.as_deref())
}
