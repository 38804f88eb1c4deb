//! Run configuration: defaults, an optional flat TOML file, and flags on top.

use crate::args::{CommonArgs, Format};
use crate::CliError;
use geoflow::curvature_field::{make_constant, make_inverse_l, make_lambert_hill, make_wave, CurvatureField};
use geoflow::fundamental_solution::TriangleSpec;
use geoflow::integration::QuadratureConfig;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use std::collections::BTreeMap;
use std::f64::consts::FRAC_PI_3;
use std::path::PathBuf;

/// Keys accepted in a config file. Field parameters sit at the top level.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    field: Option<String>,
    a: Option<f64>,
    c: Option<f64>,
    beta: Option<f64>,
    base_l: Option<f64>,
    base_phi: Option<f64>,
    n: Option<usize>,
    tol: Option<f64>,
    out: Option<PathBuf>,
    format: Option<Format>,
    allow_unsafe_beta: Option<bool>,
    k: Option<f64>,
    kappa: Option<f64>,
    omega_t: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FieldSpec {
    pub name: String,
    pub params: BTreeMap<String, f64>,
}

/// Fully resolved settings shared by all subcommands.
#[derive(Debug, Clone, Serialize)]
pub struct RunConfig {
    pub field: FieldSpec,
    pub a: f64,
    pub c: f64,
    pub beta: f64,
    pub base_l: f64,
    pub base_phi: f64,
    pub n: usize,
    pub tol: f64,
    #[serde(skip)]
    pub out: Option<PathBuf>,
    pub format: Format,
    pub allow_unsafe_beta: bool,
}

/// Parameters each built-in field accepts, with defaults.
fn field_defaults(name: &str) -> Result<&'static [(&'static str, f64)], CliError> {
    Ok(match name {
        "constant" => &[("k", 1.0)],
        "inverse_l" | "lambert_hill" => &[],
        "wave" => &[("kappa", 1.0), ("omega_t", 0.0)],
        other => {
            return Err(CliError::Input(format!(
                "unknown field '{other}' (expected constant, inverse_l, wave or lambert_hill)"
            )))
        }
    })
}

impl RunConfig {
    pub fn resolve(args: &CommonArgs) -> Result<Self, CliError> {
        let file = match &args.config {
            Some(path) => {
                let text = std::fs::read_to_string(path)
                    .map_err(|e| CliError::Input(format!("cannot read config {}: {e}", path.display())))?;
                toml::from_str::<FileConfig>(&text)
                    .map_err(|e| CliError::Input(format!("invalid config {}: {e}", path.display())))?
            }
            None => FileConfig::default(),
        };
        let name = args.field.clone().or(file.field).unwrap_or_else(|| "constant".into());
        let defaults = field_defaults(&name)?;
        let mut params: BTreeMap<String, f64> = defaults.iter().map(|(k, v)| (k.to_string(), *v)).collect();
        let from_file = [("k", file.k), ("kappa", file.kappa), ("omega_t", file.omega_t)];
        let from_flags = args.field_param.iter().map(|(k, v)| (k.as_str(), Some(*v)));
        for (key, value) in from_file.into_iter().chain(from_flags) {
            let Some(value) = value else { continue };
            if !params.contains_key(key) {
                return Err(CliError::Input(format!("field '{name}' has no parameter '{key}'")));
            }
            params.insert(key.to_string(), value);
        }
        let cfg = RunConfig {
            field: FieldSpec { name, params },
            a: args.a.or(file.a).unwrap_or(0.5),
            c: args.c.or(file.c).unwrap_or(1.0),
            beta: args.beta.or(file.beta).unwrap_or(FRAC_PI_3),
            base_l: args.base_l.or(file.base_l).unwrap_or(0.3),
            base_phi: args.base_phi.or(file.base_phi).unwrap_or(0.0),
            n: args.n.or(file.n).unwrap_or(13),
            tol: args.tol.or(file.tol).unwrap_or(1e-10),
            out: args.out.clone().or(file.out),
            format: args.format.or(file.format).unwrap_or(Format::Csv),
            allow_unsafe_beta: args.allow_unsafe_beta || file.allow_unsafe_beta.unwrap_or(false),
        };
        if !(cfg.tol > 0.0 && cfg.tol.is_finite()) {
            return Err(CliError::Input(format!("--tol must be positive, got {}", cfg.tol)));
        }
        Ok(cfg)
    }

    pub fn quadrature(&self) -> QuadratureConfig {
        QuadratureConfig::with_tol(self.tol)
    }

    pub fn spec(&self) -> TriangleSpec {
        TriangleSpec::new(self.a, self.c, self.beta).with_base_phi(self.base_phi)
    }

    pub fn build_field(&self) -> Result<Box<dyn CurvatureField>, CliError> {
        let p = |k: &str| self.field.params[k];
        Ok(match self.field.name.as_str() {
            "constant" => Box::new(make_constant(p("k"))),
            "inverse_l" => Box::new(make_inverse_l()),
            "lambert_hill" => Box::new(make_lambert_hill()),
            "wave" => Box::new(make_wave(p("kappa"), p("omega_t"))?),
            other => return Err(CliError::Input(format!("unknown field '{other}'"))),
        })
    }

    /// SHA-256 over the command, its arguments and this configuration
    /// (the output path excluded).
    pub fn hash<T: Serialize>(&self, command: &str, command_args: &T) -> String {
        let payload = serde_json::json!({ "command": command, "args": command_args, "config": self });
        let digest = Sha256::digest(payload.to_string().as_bytes());
        format!("sha256:{digest:x}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flags_override_file_and_defaults() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("run.toml");
        std::fs::write(&path, "field = \"wave\"\nkappa = 2.0\na = 0.25\n").unwrap();
        let args = CommonArgs { config: Some(path), a: Some(0.75), ..Default::default() };
        let cfg = RunConfig::resolve(&args).unwrap();
        assert_eq!(cfg.field.name, "wave");
        assert_eq!(cfg.field.params["kappa"], 2.0);
        assert_eq!(cfg.field.params["omega_t"], 0.0);
        assert_eq!(cfg.a, 0.75);
        assert_eq!(cfg.c, 1.0);
    }

    #[test]
    fn unknown_keys_and_parameters_are_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("bad.toml");
        std::fs::write(&path, "radius = 3\n").unwrap();
        assert!(RunConfig::resolve(&CommonArgs { config: Some(path), ..Default::default() }).is_err());
        let args = CommonArgs { field_param: vec![("kappa".into(), 1.0)], ..Default::default() };
        assert!(RunConfig::resolve(&args).is_err());
    }

    #[test]
    fn hash_ignores_the_output_path() {
        let a = RunConfig::resolve(&CommonArgs::default()).unwrap();
        let mut b = a.clone();
        b.out = Some("x.csv".into());
        assert_eq!(a.hash("laws", &()), b.hash("laws", &()));
        b.a = 0.7;
        assert_ne!(a.hash("laws", &()), b.hash("laws", &()));
    }
}
