use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use fgm_core::visualization::ColorMode;
use nalgebra::Point3;

use crate::commands::{cmd_info, cmd_mesh, cmd_query, cmd_slice, cmd_validate, MeshArgs, SliceArgs};
use crate::error::{CliError, EXIT_USAGE};
use crate::spec::load_model_spec;

#[derive(Debug, Parser)]
#[command(name = "fgm", version, about = "Model, render and slice functionally graded objects")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Colormap {
    Rgb,
    Hls,
}

impl From<Colormap> for ColorMode {
    fn from(c: Colormap) -> Self {
        match c {
            Colormap::Rgb => ColorMode::Rgb,
            Colormap::Hls => ColorMode::Hls,
        }
    }
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check a model spec; prints nothing when it is valid.
    Validate { spec: PathBuf },
    /// Summarize materials, cells and regions.
    Info { spec: PathBuf },
    /// Material composition and properties at one point.
    Query {
        spec: PathBuf,
        /// Point as x,y,z in mm.
        #[arg(long, value_parser = parse_point, allow_hyphen_values = true)]
        point: Point3<f64>,
    },
    /// Export the colored boundary mesh as ASCII PLY.
    Mesh {
        spec: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Uniform subdivision levels before adaptive refinement.
        #[arg(long, default_value_t = 1)]
        subdiv: u32,
        /// Largest composition change allowed across one triangle.
        #[arg(long, default_value_t = 0.05)]
        threshold: f64,
        #[arg(long, value_enum, default_value_t = Colormap::Rgb)]
        colormap: Colormap,
    },
    /// Cut the object into layers with material data.
    Slice {
        spec: PathBuf,
        /// Layer thickness in mm.
        #[arg(long)]
        thickness: f64,
        /// Longest triangle edge in each layer mesh, mm.
        #[arg(long)]
        max_edge: f64,
        #[arg(long)]
        out_dir: PathBuf,
        /// Also write one SVG per layer.
        #[arg(long)]
        svg: bool,
        #[arg(long, value_enum, default_value_t = Colormap::Rgb)]
        colormap: Colormap,
    },
}

fn parse_point(s: &str) -> Result<Point3<f64>, String> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let [x, y, z] = parts.as_slice() else {
        return Err(format!("expected x,y,z, got `{s}`"));
    };
    let num = |t: &str| t.parse::<f64>().ok().filter(|v| v.is_finite()).ok_or(format!("`{t}` is not a number"));
    Ok(Point3::new(num(x)?, num(y)?, num(z)?))
}

fn execute(command: Command) -> Result<String, CliError> {
    match command {
        Command::Validate { spec } => cmd_validate(&spec).map(|_| String::new()),
        Command::Info { spec } => Ok(cmd_info(&load_model_spec(&spec)?)),
        Command::Query { spec, point } => cmd_query(&load_model_spec(&spec)?, &point),
        Command::Mesh { spec, out, subdiv, threshold, colormap } => {
            let obj = load_model_spec(&spec)?;
            cmd_mesh(&obj, &MeshArgs { out, subdiv, threshold, colormap: colormap.into() })
        }
        Command::Slice { spec, thickness, max_edge, out_dir, svg, colormap } => {
            let obj = load_model_spec(&spec)?;
            cmd_slice(&obj, &SliceArgs { thickness, max_edge, out_dir, svg, colormap: colormap.into() })
        }
    }
}

/// Runs the command line `args` (program name first) and returns the exit
/// status. Normal output goes to `stdout`, diagnostics to `stderr`.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(stderr, "{text}");
                EXIT_USAGE
            } else {
                let _ = write!(stdout, "{text}");
                0
            };
        }
    };
    match execute(cli.command) {
        Ok(text) => {
            let _ = write!(stdout, "{text}");
            0
        }
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            e.exit_code()
        }
    }
}
