use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use segmetrics::pipeline::{self, RunConfig, SweepGrid, SynthSource};
use segmetrics::separability::{ConvFilterBank, ProbeConfig};
use segmetrics::stats::Contiguity;
use segmetrics::synthgen::SynthSpec;
use segmetrics::treelike::TreelikeConfig;

#[derive(Parser)]
#[command(version, about = "Tree-likeness and textural separability metrics for segmentation failure analysis")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct RunArgs {
    /// Contour radius for CPR.
    #[arg(long, default_value_t = 5)]
    r: usize,
    /// Global DoGD window.
    #[arg(long, default_value_t = 127)]
    a: usize,
    /// Local DoGD window.
    #[arg(long, default_value_t = 3)]
    b: usize,
    /// Objects per averaged datapoint.
    #[arg(long, default_value_t = 5)]
    group_size: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Worker threads (0 = all cores).
    #[arg(long, default_value_t = 0)]
    jobs: usize,
    /// Square working resolution.
    #[arg(long, default_value_t = 1024)]
    resize_to: usize,
    /// Compute at native resolution instead.
    #[arg(long)]
    no_resize: bool,
    /// Inverse L2 strength of the separability probe.
    #[arg(long, default_value_t = 2.0)]
    clf_c: f64,
    #[arg(long, default_value_t = 5)]
    boundary_radius: usize,
    /// First-layer filter bank (TXFB file); falls back to $SEGMETRICS_FILTER_BANK.
    #[arg(long)]
    filter_bank: Option<PathBuf>,
}

impl RunArgs {
    fn config(&self) -> RunConfig {
        RunConfig {
            treelike: TreelikeConfig { r: self.r, a: self.a, b: self.b },
            group_size: self.group_size,
            probe: ProbeConfig {
                c: self.clf_c,
                boundary_radius: self.boundary_radius,
                ..ProbeConfig::default()
            },
            resize_to: (!self.no_resize).then_some(self.resize_to),
            seed: self.seed,
            jobs: self.jobs,
            filter_bank: self.filter_bank.clone(),
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum SweepParam {
    R,
    Ab,
    C,
}

#[derive(Subcommand)]
enum Command {
    /// Per-record CPR, DoGD, separability and IoU.
    Metrics {
        manifest: PathBuf,
        #[arg(short, long, default_value = "metrics.csv")]
        out: PathBuf,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Synthetic tree-like dataset with textured renderings.
    Synth {
        out_dir: PathBuf,
        /// Directory of texture tiles (procedural textures if omitted).
        #[arg(long)]
        textures: Option<PathBuf>,
        /// Directory of source masks (procedural trees if omitted).
        #[arg(long)]
        masks: Option<PathBuf>,
        /// Number of procedural trees.
        #[arg(long, default_value_t = 10)]
        count: usize,
        #[arg(long, default_value_t = 1024)]
        canvas: usize,
        #[arg(long, default_value_t = 512)]
        bbox: usize,
        /// Texture pairs per object.
        #[arg(short = 'k', long, default_value_t = 7)]
        pairs: usize,
        #[arg(long)]
        preserve_aspect: bool,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Rank and linear correlation of a metric column with IoU.
    Correlate {
        metrics_csv: PathBuf,
        #[arg(long, default_value = "cpr")]
        metric: String,
        #[arg(long, default_value = "iou")]
        target: String,
        #[arg(long, default_value_t = 5)]
        group_size: usize,
        #[arg(long, default_value = "report.json")]
        out_json: PathBuf,
        #[arg(long, default_value = "scatter.csv")]
        out_scatter: PathBuf,
    },
    /// Correlation at every point of a hyperparameter grid.
    Sweep {
        manifest: PathBuf,
        #[arg(long, value_enum)]
        param: SweepParam,
        /// Grid values for R or C (defaults for R: 1,3,5,7,9,11).
        #[arg(long, value_delimiter = ',')]
        values: Option<Vec<f64>>,
        #[arg(long = "a-grid", value_delimiter = ',')]
        a_grid: Option<Vec<usize>>,
        #[arg(long = "b-grid", value_delimiter = ',')]
        b_grid: Option<Vec<usize>>,
        #[arg(short, long, default_value = "sweep.csv")]
        out: PathBuf,
        #[command(flatten)]
        run: RunArgs,
    },
    /// CPR and DoGD of skeletons re-thickened to several radii.
    AblateThickness {
        manifest: PathBuf,
        #[arg(long, value_delimiter = ',', default_values_t = pipeline::DEFAULT_THICKNESS_RADII.to_vec())]
        radii: Vec<usize>,
        #[arg(short, long, default_value = "thickness.csv")]
        out: PathBuf,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Moran's I of attention maps next to CPR.
    Attention {
        manifest: PathBuf,
        /// Use 8-neighbour instead of 4-neighbour weights.
        #[arg(long)]
        queen: bool,
        #[arg(short, long, default_value = "attention.csv")]
        out: PathBuf,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Writes a seeded random filter bank of the canonical geometry.
    RandomBank {
        out: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

fn run(cli: Cli) -> segmetrics::Result<()> {
    match cli.command {
        Command::Metrics { manifest, out, run } => {
            let summary = pipeline::cmd_metrics(&manifest, &out, &run.config())?;
            println!("{}", serde_json::to_string(&summary)?);
        }
        Command::Synth { out_dir, textures, masks, count, canvas, bbox, pairs, preserve_aspect, seed } => {
            let spec = SynthSpec {
                canvas,
                target_bbox: bbox,
                texture_pairs: pairs,
                seed,
                preserve_aspect,
            };
            let source = match masks {
                Some(dir) => SynthSource::MaskDir(dir),
                None => SynthSource::Procedural { count, size: 256, widths: (1, 15) },
            };
            let m = pipeline::cmd_synth(textures.as_deref(), &source, &out_dir, &spec)?;
            println!("wrote {} objects to {}", m.records.len(), out_dir.display());
        }
        Command::Correlate { metrics_csv, metric, target, group_size, out_json, out_scatter } => {
            let report = pipeline::cmd_correlate(
                &metrics_csv,
                &metric,
                &target,
                group_size,
                &out_json,
                &out_scatter,
            )?;
            println!("{}", serde_json::to_string_pretty(&report)?);
        }
        Command::Sweep { manifest, param, values, a_grid, b_grid, out, run } => {
            let grid = match param {
                SweepParam::R => SweepGrid::R(match values {
                    Some(v) => v.iter().map(|&x| x as usize).collect(),
                    None => pipeline::DEFAULT_R_GRID.to_vec(),
                }),
                SweepParam::Ab => SweepGrid::AB(
                    a_grid.unwrap_or_else(|| pipeline::DEFAULT_A_GRID.to_vec()),
                    b_grid.unwrap_or_else(|| pipeline::DEFAULT_B_GRID.to_vec()),
                ),
                SweepParam::C => SweepGrid::C(values.unwrap_or_else(|| vec![0.5, 1.0, 2.0, 4.0, 8.0])),
            };
            let rows = pipeline::cmd_sweep(&manifest, &grid, &run.config(), &out)?;
            println!("{} grid points written to {}", rows.len(), out.display());
        }
        Command::AblateThickness { manifest, radii, out, run } => {
            let rows = pipeline::cmd_ablate_thickness(&manifest, &radii, &run.config(), &out)?;
            println!("{} rows written to {}", rows.len(), out.display());
        }
        Command::Attention { manifest, queen, out, run } => {
            let weighting = if queen { Contiguity::Queen } else { Contiguity::Rook };
            let rows = pipeline::cmd_attention(&manifest, &run.config(), weighting, &out)?;
            println!("{} rows written to {}", rows.len(), out.display());
        }
        Command::RandomBank { out, seed } => ConvFilterBank::random(seed).save(&out)?,
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
