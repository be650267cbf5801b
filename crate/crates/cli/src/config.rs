//! Job configuration: a JSON file whose keys match the flag names, overridden by flags.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use clap::{Args, ValueEnum};
use serde::{Deserialize, Serialize};

use lw_core::gallery::{self, GalleryEntry};
use lw_core::{Domain, FdScheme, SurfaceGrid, WeierstrassData};

use crate::CliError;

pub const DEFAULT_RESOLUTION: usize = 129;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Obj,
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Scheme {
    Central2,
    Richardson,
}

impl From<Scheme> for FdScheme {
    fn from(s: Scheme) -> Self {
        match s {
            Scheme::Central2 => FdScheme::Central2,
            Scheme::Richardson => FdScheme::Richardson,
        }
    }
}

/// Flags shared by every surface-producing command.
#[derive(Debug, Clone, Default, Args)]
pub struct JobArgs {
    /// Named example (see `lw gallery`).
    #[arg(long)]
    pub gallery: Option<String>,
    /// q(u)
    #[arg(long, allow_hyphen_values = true)]
    pub q: Option<String>,
    /// f(u)
    #[arg(long, allow_hyphen_values = true)]
    pub f: Option<String>,
    /// r(v)
    #[arg(long, allow_hyphen_values = true)]
    pub r: Option<String>,
    /// g(v)
    #[arg(long, allow_hyphen_values = true)]
    pub g: Option<String>,
    #[arg(long, num_args = 4, value_names = ["U0", "U1", "V0", "V1"], allow_negative_numbers = true)]
    pub domain: Option<Vec<f64>>,
    #[arg(long)]
    pub nu: Option<usize>,
    #[arg(long)]
    pub nv: Option<usize>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub report: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// String tension.
    #[arg(long = "T")]
    pub tension: Option<f64>,
    /// Finite-difference scheme for measurements.
    #[arg(long, value_enum)]
    pub scheme: Option<Scheme>,
    /// JSON file with the same keys as the flags.
    #[arg(long)]
    pub config: Option<PathBuf>,
}

/// Contents of a `--config` file.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub gallery: Option<String>,
    pub q: Option<String>,
    pub f: Option<String>,
    pub r: Option<String>,
    pub g: Option<String>,
    pub domain: Option<Vec<f64>>,
    pub nu: Option<usize>,
    pub nv: Option<usize>,
    pub out: Option<PathBuf>,
    pub report: Option<PathBuf>,
    pub format: Option<Format>,
    #[serde(rename = "T")]
    pub tension: Option<f64>,
    pub scheme: Option<Scheme>,
    #[serde(default)]
    pub tolerances: BTreeMap<String, f64>,
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
        serde_json::from_str(&text)
            .map_err(|e| CliError::Usage(format!("bad config {}: {e}", path.display())))
    }
}

#[derive(Debug, Clone)]
pub enum Source {
    Gallery(GalleryEntry),
    Data(WeierstrassData),
}

/// A fully resolved job.
#[derive(Debug, Clone)]
pub struct JobConfig {
    pub source: Source,
    pub domain: Domain,
    pub nu: usize,
    pub nv: usize,
    pub out: Option<PathBuf>,
    pub report: Option<PathBuf>,
    pub format: Option<Format>,
    pub tension: f64,
    pub scheme: FdScheme,
    pub tolerances: BTreeMap<String, f64>,
    /// Human-readable description of the source, for metadata.
    pub label: String,
}

impl JobConfig {
    pub fn resolve(args: &JobArgs) -> Result<Self, CliError> {
        let file = match &args.config {
            Some(p) => FileConfig::load(p)?,
            None => FileConfig::default(),
        };
        let pick = |flag: &Option<String>, file: &Option<String>| flag.clone().or(file.clone());
        let gallery_name = pick(&args.gallery, &file.gallery);
        let exprs = [
            pick(&args.q, &file.q),
            pick(&args.f, &file.f),
            pick(&args.r, &file.r),
            pick(&args.g, &file.g),
        ];
        let given = exprs.iter().filter(|e| e.is_some()).count();

        let (source, default_domain, label) = match (gallery_name, given) {
            (Some(name), 0) => {
                let e = gallery::get(&name)?;
                let dom = e.default_domain;
                (Source::Gallery(e), dom, format!("gallery:{name}"))
            }
            (Some(_), _) => {
                return Err(CliError::Usage(
                    "--gallery cannot be combined with --q/--f/--r/--g".into(),
                ))
            }
            (None, 4) => {
                let [q, f, r, g] = exprs.map(Option::unwrap);
                let d = WeierstrassData::parse(&q, &f, &r, &g)?;
                let label = format!("q={q}; f={f}; r={r}; g={g}");
                (Source::Data(d), Domain::square(1.0), label)
            }
            (None, 0) => {
                return Err(CliError::Usage(
                    "no surface given: use --gallery NAME or all of --q --f --r --g".into(),
                ))
            }
            (None, _) => {
                return Err(CliError::Usage(
                    "custom data needs all four of --q --f --r --g".into(),
                ))
            }
        };

        let domain = match args.domain.clone().or(file.domain) {
            Some(v) if v.len() == 4 => Domain::new(v[0], v[1], v[2], v[3])?,
            Some(v) => {
                return Err(CliError::Usage(format!(
                    "domain needs four numbers, got {}",
                    v.len()
                )))
            }
            None => default_domain,
        };
        let tension = args
            .tension
            .or(file.tension)
            .unwrap_or(lw_core::worldsheet::DEFAULT_TENSION);
        if !(tension > 0.0 && tension.is_finite()) {
            return Err(CliError::Usage("--T must be positive".into()));
        }
        Ok(Self {
            source,
            domain,
            nu: args.nu.or(file.nu).unwrap_or(DEFAULT_RESOLUTION),
            nv: args.nv.or(file.nv).unwrap_or(DEFAULT_RESOLUTION),
            out: args.out.clone().or(file.out),
            report: args.report.clone().or(file.report),
            format: args.format.or(file.format),
            tension,
            scheme: args.scheme.or(file.scheme).unwrap_or(Scheme::Richardson).into(),
            tolerances: file.tolerances,
            label,
        })
    }

    pub fn data(&self) -> Option<&WeierstrassData> {
        match &self.source {
            Source::Gallery(e) => e.data(),
            Source::Data(d) => Some(d),
        }
    }

    pub fn gallery(&self) -> Option<&GalleryEntry> {
        match &self.source {
            Source::Gallery(e) => Some(e),
            Source::Data(_) => None,
        }
    }

    pub fn build(&self) -> Result<SurfaceGrid, CliError> {
        Ok(match &self.source {
            Source::Gallery(e) => e.build(self.domain, self.nu, self.nv)?,
            Source::Data(d) => lw_core::weierstrass::integrate_surface(d, self.domain, self.nu, self.nv)?,
        })
    }

    pub fn tolerance(&self, suite: &str, default: f64) -> f64 {
        self.tolerances.get(suite).copied().unwrap_or(default)
    }
}
