//! Command-line front end. Exit status: 0 success, 1 domain or IO error,
//! 2 usage error.

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use omviz_core::chart::{render, Marker};
use omviz_core::datagen::{random_walk, trend_series, TrendKind, STUDY_LENGTH};
use omviz_core::stats::{analyze, AnalysisConfig};
use omviz_core::{ChartSpec, Design, MagnitudeRange, OmcPalette};

use crate::error::{Error, Result};
use crate::series_io::{read_palette, read_series, write_bytes, write_series, DatasetManifest};
use crate::study_io::{
    read_responses, read_scored, read_study, score_rows, scored_csv, write_report, write_study_dir,
};

/// Environment variable naming the directory for outputs whose path is not given.
pub const OUT_DIR_ENV: &str = "OMVIZ_OUT_DIR";

#[derive(Debug, Parser)]
#[command(
    name = "omviz",
    version,
    about = "Order-of-magnitude time-series charts and study tooling"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate a seeded random walk.
    GenWalk {
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value_t = STUDY_LENGTH)]
        n: usize,
        #[command(flatten)]
        out: OutFile,
        #[command(flatten)]
        range: RangeArgs,
    },
    /// Generate a seeded trend series.
    GenTrend {
        /// Trend kind: periodic, linear or exponential.
        #[arg(long, value_parser = parse_trend)]
        kind: TrendKind,
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value_t = STUDY_LENGTH)]
        n: usize,
        #[command(flatten)]
        out: OutFile,
        #[command(flatten)]
        range: RangeArgs,
    },
    /// Render a series as an SVG chart.
    Render(RenderArgs),
    /// Build the 60-trial stimulus set.
    BuildStudy {
        #[arg(long)]
        master_seed: u64,
        /// Defaults to `$OMVIZ_OUT_DIR/study`, or `study`.
        #[arg(long)]
        out_dir: Option<PathBuf>,
        /// Also render every trial's stimulus chart.
        #[arg(long)]
        render: bool,
    },
    /// Score a responses CSV against a study manifest.
    Score {
        #[arg(long)]
        study: PathBuf,
        #[arg(long)]
        responses: PathBuf,
        #[command(flatten)]
        out: OutFile,
    },
    /// Run the significance tests on a scored CSV.
    Analyze {
        #[arg(long)]
        scored: PathBuf,
        #[command(flatten)]
        out: OutFile,
        #[arg(long, default_value_t = 0.05)]
        alpha: f64,
        #[arg(long, default_value_t = 10)]
        bonferroni: u32,
    },
}

#[derive(Debug, Args)]
pub struct OutFile {
    /// Output path; defaults to a file in `$OMVIZ_OUT_DIR` or the current directory.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct RangeArgs {
    #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
    pub e_min: i32,
    #[arg(long, default_value_t = 4, allow_hyphen_values = true)]
    pub e_max: i32,
}

impl RangeArgs {
    fn range(&self) -> Result<MagnitudeRange> {
        Ok(MagnitudeRange::new(self.e_min, self.e_max)?)
    }
}

#[derive(Debug, Args)]
#[command(group(clap::ArgGroup::new("source").required(true).args(["input", "seed"])))]
pub struct RenderArgs {
    /// Chart design: log, oml, horizon, omh or ssb.
    #[arg(long, value_parser = parse_design)]
    pub design: Design,
    /// Series file: CSV with `index,value` columns or a JSON array.
    #[arg(long)]
    pub input: Option<PathBuf>,
    /// Render a freshly generated random walk instead of a file.
    #[arg(long)]
    pub seed: Option<u64>,
    #[command(flatten)]
    pub out: OutFile,
    #[arg(long, default_value_t = omviz_core::chart::DEFAULT_WIDTH)]
    pub width: u32,
    #[arg(long, default_value_t = omviz_core::chart::DEFAULT_HEIGHT)]
    pub height: u32,
    /// Marked sample as LABEL:INDEX; repeatable.
    #[arg(long = "marker", value_parser = parse_marker)]
    pub markers: Vec<Marker>,
    /// Palette override JSON.
    #[arg(long)]
    pub palette: Option<PathBuf>,
    /// Band count of the classic horizon graph.
    #[arg(long, default_value_t = omviz_core::chart::DEFAULT_HORIZON_BANDS)]
    pub bands: usize,
    /// Omit the color legend of the colored designs.
    #[arg(long)]
    pub no_legend: bool,
    #[command(flatten)]
    pub range: RangeArgs,
}

fn parse_design(s: &str) -> std::result::Result<Design, String> {
    s.parse().map_err(|e: omviz_core::Error| e.to_string())
}

fn parse_trend(s: &str) -> std::result::Result<TrendKind, String> {
    s.parse().map_err(|e: omviz_core::Error| e.to_string())
}

fn parse_marker(s: &str) -> std::result::Result<Marker, String> {
    s.parse().map_err(|e: omviz_core::Error| e.to_string())
}

fn out_dir() -> PathBuf {
    std::env::var_os(OUT_DIR_ENV)
        .map(PathBuf::from)
        .unwrap_or_default()
}

fn out_path(out: &OutFile, default_name: &str) -> PathBuf {
    out.out
        .clone()
        .unwrap_or_else(|| out_dir().join(default_name))
}

fn written(path: &Path) {
    println!("wrote {}", path.display());
}

fn render_chart(args: &RenderArgs) -> Result<()> {
    let range = args.range.range()?;
    let series = match (&args.input, args.seed) {
        (Some(input), _) => read_series(input, range)?,
        (None, Some(seed)) => random_walk(seed, STUDY_LENGTH, range)?,
        (None, None) => return Err(Error::Usage("render needs --input or --seed".to_string())),
    };
    let palette = match &args.palette {
        Some(path) => read_palette(path)?,
        None if range.decades() == OmcPalette::default().len() => OmcPalette::default(),
        None => OmcPalette::evenly_spaced(range.decades())?,
    };
    let spec = ChartSpec {
        width_px: args.width,
        height_px: args.height,
        show_legend: !args.no_legend,
        n_bands: args.bands,
        range,
        ..ChartSpec::new(args.design).with_markers(args.markers.clone())
    };
    let chart = render(&series, &spec, &palette)?;
    let path = out_path(&args.out, "chart.svg");
    write_bytes(&path, chart.document.as_bytes())?;
    written(&path);
    Ok(())
}

pub fn execute(cli: Cli) -> Result<()> {
    match cli.command {
        Command::GenWalk {
            seed,
            n,
            out,
            range,
        } => {
            let series = random_walk(seed, n, range.range()?)?;
            let path = out_path(&out, "walk.csv");
            write_series(&path, &series, &DatasetManifest::of(&series))?;
            written(&path);
        }
        Command::GenTrend {
            kind,
            seed,
            n,
            out,
            range,
        } => {
            let series = trend_series(kind, seed, n, range.range()?)?;
            let path = out_path(&out, &format!("{kind}.csv"));
            write_series(&path, &series, &DatasetManifest::of(&series))?;
            written(&path);
        }
        Command::Render(args) => render_chart(&args)?,
        Command::BuildStudy {
            master_seed,
            out_dir: dir,
            render,
        } => {
            let dir = dir.unwrap_or_else(|| out_dir().join("study"));
            let manifest = write_study_dir(master_seed, &dir, render)?;
            println!(
                "wrote {} trials to {}",
                manifest.trials.len(),
                dir.display()
            );
        }
        Command::Score {
            study,
            responses,
            out,
        } => {
            let manifest = read_study(&study)?;
            let rows = read_responses(&responses)?;
            let scored = score_rows(&manifest, &rows, &responses)?;
            let path = out_path(&out, "scored.csv");
            write_bytes(&path, scored_csv(&scored).as_bytes())?;
            written(&path);
        }
        Command::Analyze {
            scored,
            out,
            alpha,
            bonferroni,
        } => {
            let cfg = AnalysisConfig::new(alpha, bonferroni)?;
            let records = read_scored(&scored)?;
            let report = analyze(&records, &cfg)?;
            let path = out_path(&out, "report.json");
            write_report(&path, &report)?;
            written(&path);
        }
    }
    Ok(())
}

/// Parses `argv` (including the program name), runs it and returns the exit status.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    match execute(cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
