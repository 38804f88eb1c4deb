//! Command-line arguments.

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use std::path::PathBuf;

#[derive(Debug, Parser)]
#[command(name = "geoflow", version, about = "Geodesic flow bundles from Gaussian curvature fields")]
pub struct Cli {
    #[command(flatten)]
    pub common: CommonArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

/// Settings shared by all subcommands; each overrides the config file.
#[derive(Debug, Default, Args)]
pub struct CommonArgs {
    /// Flat TOML file with defaults for the flags below.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Curvature field: constant, inverse_l, wave or lambert_hill.
    #[arg(long, global = true)]
    pub field: Option<String>,
    /// Field parameter as key=value (constant: k; wave: kappa, omega_t).
    #[arg(long = "field-param", global = true, value_parser = parse_key_value)]
    pub field_param: Vec<(String, f64)>,
    /// Side line a of the triangle.
    #[arg(long, global = true, value_parser = parse_number, allow_negative_numbers = true)]
    pub a: Option<f64>,
    /// Base line c of the triangle.
    #[arg(long, global = true, value_parser = parse_number, allow_negative_numbers = true)]
    pub c: Option<f64>,
    /// Angle β between the base line's extension and the side line.
    #[arg(long, global = true, value_parser = parse_number, allow_negative_numbers = true)]
    pub beta: Option<f64>,
    /// Distance of the base point from the origin.
    #[arg(long = "base-l", global = true, value_parser = parse_number, allow_negative_numbers = true)]
    pub base_l: Option<f64>,
    /// Polar angle of the base point.
    #[arg(long = "base-phi", global = true, value_parser = parse_number, allow_negative_numbers = true)]
    pub base_phi: Option<f64>,
    /// Number of slices for the triangulation.
    #[arg(long, global = true)]
    pub n: Option<usize>,
    /// Quadrature tolerance (absolute and relative).
    #[arg(long, global = true, value_parser = parse_number)]
    pub tol: Option<f64>,
    /// Output file; standard output when absent.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Admit directions outside [0, π/2).
    #[arg(long = "allow-unsafe-beta", global = true)]
    pub allow_unsafe_beta: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate the constant-curvature cosine and sine laws and their expansions.
    Laws(LawsArgs),
    /// Sample geodesics leaving base points in several directions.
    Flow(FlowArgs),
    /// Run the finite-N triangulation.
    Triangulate(TriangulateArgs),
    /// Reconstruct the metric along a ray.
    Metric(MetricArgs),
    /// Immerse a rotation-symmetric geometry into 3-space.
    Immerse(ImmerseArgs),
    /// Run a validation suite.
    Validate(ValidateArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum BranchArg {
    Principal,
    Side,
}

#[derive(Debug, Args, Serialize)]
pub struct LawsArgs {
    /// Constant curvature K.
    #[arg(long, value_parser = parse_number, allow_negative_numbers = true)]
    pub k: f64,
    /// Enclosed angle γ.
    #[arg(long, value_parser = parse_number, allow_negative_numbers = true)]
    pub gamma: f64,
    /// Second side b (the first is --a).
    #[arg(long, value_parser = parse_number, allow_negative_numbers = true)]
    pub b: f64,
    #[arg(long, value_enum, default_value = "principal")]
    pub branch: BranchArg,
}

#[derive(Debug, Args, Serialize)]
pub struct FlowArgs {
    /// Directions β, comma separated (angles may use pi, e.g. pi/6).
    #[arg(long, value_parser = parse_list, default_value = "0,pi/12,pi/6,pi/4,pi/3")]
    pub betas: NumList,
    /// Arclengths λ, comma separated.
    #[arg(long, value_parser = parse_list, default_value = "0,0.05,0.1,0.15,0.2")]
    pub lambdas: NumList,
    /// Base distances; defaults to --base-l.
    #[arg(long = "base-ls", value_parser = parse_list)]
    pub base_ls: Option<NumList>,
}

#[derive(Debug, Args, Serialize)]
pub struct TriangulateArgs {
    /// Emit a convergence table over these N instead of the geometry.
    #[arg(long, value_parser = parse_usize_list)]
    pub convergence: Option<SizeList>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum MethodArg {
    Step,
    Fd,
}

#[derive(Debug, Args, Serialize)]
pub struct MetricArgs {
    /// Distances l along the ray at --base-phi.
    #[arg(long, value_parser = parse_list, default_value = "0.3,0.4,0.5,0.6,0.7,0.8,0.9,1")]
    pub ls: NumList,
    #[arg(long, value_enum, default_value = "step")]
    pub method: MethodArg,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum RelationArg {
    Lambert,
    Flat,
}

#[derive(Debug, Args, Serialize)]
pub struct ImmerseArgs {
    #[arg(long, value_enum, default_value = "lambert")]
    pub relation: RelationArg,
    /// Largest circumferential radius.
    #[arg(long = "r-max", value_parser = parse_number, default_value = "3")]
    pub r_max: f64,
    /// Radial samples (excluding r = 0).
    #[arg(long, default_value_t = 24)]
    pub nr: usize,
    /// Angular samples.
    #[arg(long, default_value_t = 24)]
    pub nphi: usize,
    /// Interpolation nodes of the profile table.
    #[arg(long, default_value_t = 400)]
    pub nodes: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Sphere,
    Flat,
    Integrals,
    Roundtrip,
    All,
}

#[derive(Debug, Args, Serialize)]
pub struct ValidateArgs {
    #[arg(long, value_enum, default_value = "all")]
    pub suite: Suite,
}

/// A comma-separated list of numbers.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(transparent)]
pub struct NumList(pub Vec<f64>);

/// A comma-separated list of sizes.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct SizeList(pub Vec<usize>);

/// A number, optionally written as a multiple of π: `1.5`, `pi`, `-pi/2`, `2pi/3`, `3*pi/4`.
pub fn parse_number(s: &str) -> Result<f64, String> {
    let t = s.trim().replace('π', "pi");
    let (num, den) = match t.split_once('/') {
        Some((n, d)) => (n.trim(), Some(d.trim())),
        None => (t.as_str(), None),
    };
    let value = match num.strip_suffix("pi") {
        Some(coef) => {
            let coef = coef.trim().trim_end_matches('*').trim();
            let c = match coef {
                "" | "+" => 1.0,
                "-" => -1.0,
                c => c.parse::<f64>().map_err(|_| format!("invalid number '{s}'"))?,
            };
            c * PI
        }
        None => num.parse::<f64>().map_err(|_| format!("invalid number '{s}'"))?,
    };
    let value = match den {
        Some(d) => value / d.parse::<f64>().map_err(|_| format!("invalid denominator in '{s}'"))?,
        None => value,
    };
    if value.is_finite() {
        Ok(value)
    } else {
        Err(format!("'{s}' is not finite"))
    }
}

fn parse_list(s: &str) -> Result<NumList, String> {
    let v = s.split(',').map(parse_number).collect::<Result<Vec<_>, _>>()?;
    if v.is_empty() {
        return Err("empty list".into());
    }
    Ok(NumList(v))
}

fn parse_usize_list(s: &str) -> Result<SizeList, String> {
    s.split(',').map(|t| t.trim().parse::<usize>().map_err(|_| format!("invalid integer '{t}'"))).collect::<Result<_, _>>().map(SizeList)
}

fn parse_key_value(s: &str) -> Result<(String, f64), String> {
    let (k, v) = s.split_once('=').ok_or_else(|| format!("expected key=value, got '{s}'"))?;
    Ok((k.trim().to_string(), parse_number(v)?))
}
