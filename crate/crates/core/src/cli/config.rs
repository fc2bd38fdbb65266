//! Run configuration: a flat TOML file of dotted SI keys, optionally layered
//! on a named preset.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use sha2::{Digest, Sha256};
use toml::Value;

use super::CliError;
use crate::geometry::{CavityGeometry, MaterialParams, Preset, Stimulus, Truncation};

pub const DEFAULT_SAMPLES: usize = 1001;

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub preset: Option<String>,
    pub geometry: CavityGeometry,
    pub material: MaterialParams,
    pub stimulus: Stimulus,
    pub truncation: Truncation,
    /// Simulation window, s.
    pub window: f64,
    pub samples: usize,
    pub output_dir: PathBuf,
}

/// Every accepted key, in emission order.
pub const KEYS: [&str; 22] = [
    "preset",
    "geometry.length",
    "geometry.a_cyl",
    "geometry.a_tymp",
    "geometry.beta",
    "material.c",
    "material.c_m",
    "material.rho0",
    "material.rho_m",
    "material.thickness",
    "material.alpha",
    "stimulus.p0",
    "stimulus.omega",
    "stimulus.k_axial",
    "truncation.cavity_n1",
    "truncation.cavity_n2",
    "truncation.cavity_n3",
    "truncation.membrane_k1",
    "truncation.membrane_k2",
    "time.window",
    "time.samples",
    "output.dir",
];

impl RunConfig {
    pub fn from_preset(name: &str) -> Result<Self, CliError> {
        let p = Preset::by_name(name).map_err(|e| CliError::Config(e.to_string()))?;
        Ok(Self {
            preset: Some(p.name.to_string()),
            geometry: p.geometry,
            material: p.material,
            stimulus: p.stimulus,
            truncation: Truncation::default(),
            window: p.window,
            samples: DEFAULT_SAMPLES,
            output_dir: PathBuf::from("out"),
        })
    }

    pub fn validate(&self) -> Result<(), CliError> {
        let cfg = |e: crate::Error| CliError::Config(e.to_string());
        self.geometry.validate().map_err(cfg)?;
        self.material.validate().map_err(cfg)?;
        self.stimulus.validate().map_err(cfg)?;
        self.truncation.validate().map_err(cfg)?;
        if !(self.window > 0.0 && self.window.is_finite()) {
            return Err(CliError::Config(format!("time.window must be > 0, got {}", self.window)));
        }
        if self.samples < 4 {
            return Err(CliError::Config(format!("time.samples must be >= 4, got {}", self.samples)));
        }
        Ok(())
    }

    /// SHA-256 of the emitted configuration without the output directory, so
    /// identical runs written to different places carry the same header.
    pub fn digest(&self) -> String {
        let text = emit_config(self);
        let mut hasher = Sha256::new();
        for line in text.lines().filter(|l| !l.starts_with("output.dir")) {
            hasher.update(line.as_bytes());
            hasher.update(b"\n");
        }
        let hash = hasher.finalize();
        hash.iter().fold(String::with_capacity(64), |mut s, b| {
            let _ = write!(s, "{b:02x}");
            s
        })
    }
}

/// Result of parsing a configuration file.
#[derive(Debug, Clone, PartialEq)]
pub struct Loaded {
    pub config: RunConfig,
    pub warnings: Vec<String>,
}

fn flatten(prefix: &str, table: &toml::Table, out: &mut BTreeMap<String, Value>) {
    for (k, v) in table {
        let key = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
        match v {
            Value::Table(t) => flatten(&key, t, out),
            other => {
                out.insert(key, other.clone());
            }
        }
    }
}

fn as_f64(key: &str, v: &Value) -> Result<f64, CliError> {
    match v {
        Value::Float(x) => Ok(*x),
        Value::Integer(i) => Ok(*i as f64),
        other => Err(CliError::Config(format!("key '{key}' expects a number, got {other}"))),
    }
}

fn as_u32(key: &str, v: &Value) -> Result<u32, CliError> {
    match v {
        Value::Integer(i) if (0..=i64::from(u32::MAX)).contains(i) => Ok(*i as u32),
        other => Err(CliError::Config(format!("key '{key}' expects a non-negative integer, got {other}"))),
    }
}

fn as_str<'a>(key: &str, v: &'a Value) -> Result<&'a str, CliError> {
    v.as_str()
        .ok_or_else(|| CliError::Config(format!("key '{key}' expects a string, got {v}")))
}

fn set(c: &mut RunConfig, key: &str, v: &Value) -> Result<bool, CliError> {
    match key {
        "geometry.length" => c.geometry.length = as_f64(key, v)?,
        "geometry.a_cyl" => c.geometry.a_cyl = as_f64(key, v)?,
        "geometry.a_tymp" => c.geometry.a_tymp = as_f64(key, v)?,
        "geometry.beta" => c.geometry.beta = as_f64(key, v)?,
        "material.c" => c.material.c = as_f64(key, v)?,
        "material.c_m" => c.material.c_m = as_f64(key, v)?,
        "material.rho0" => c.material.rho0 = as_f64(key, v)?,
        "material.rho_m" => c.material.rho_m = as_f64(key, v)?,
        "material.thickness" => c.material.thickness = as_f64(key, v)?,
        "material.alpha" => c.material.alpha = as_f64(key, v)?,
        "stimulus.p0" => c.stimulus.p0 = as_f64(key, v)?,
        "stimulus.omega" => c.stimulus.omega = as_f64(key, v)?,
        "stimulus.k_axial" => c.stimulus.k_axial = as_f64(key, v)?,
        "truncation.cavity_n1" => c.truncation.cavity_n1 = as_u32(key, v)?,
        "truncation.cavity_n2" => c.truncation.cavity_n2 = as_u32(key, v)?,
        "truncation.cavity_n3" => c.truncation.cavity_n3 = as_u32(key, v)?,
        "truncation.membrane_k1" => c.truncation.membrane_k1 = as_u32(key, v)?,
        "truncation.membrane_k2" => c.truncation.membrane_k2 = as_u32(key, v)?,
        "time.window" => c.window = as_f64(key, v)?,
        "time.samples" => c.samples = as_u32(key, v)? as usize,
        "output.dir" => c.output_dir = PathBuf::from(as_str(key, v)?),
        _ => return Ok(false),
    }
    Ok(true)
}

/// Parse configuration text. Without a `preset` key every other key is
/// required. Unknown keys are errors when `strict`, warnings otherwise.
pub fn parse_config(text: &str, strict: bool) -> Result<Loaded, CliError> {
    let table: toml::Table = text
        .parse()
        .map_err(|e: toml::de::Error| CliError::Config(format!("parse error: {e}")))?;
    let mut flat = BTreeMap::new();
    flatten("", &table, &mut flat);

    let mut config = match flat.get("preset") {
        Some(v) => RunConfig::from_preset(as_str("preset", v)?)?,
        None => {
            let missing: Vec<&str> = KEYS
                .iter()
                .copied()
                .filter(|k| *k != "preset" && !flat.contains_key(*k))
                .collect();
            if !missing.is_empty() {
                return Err(CliError::Config(format!(
                    "no preset given and keys missing: {}",
                    missing.join(", ")
                )));
            }
            let mut base = RunConfig::from_preset("gecko")?;
            base.preset = None;
            base
        }
    };
    let mut warnings = Vec::new();
    for (key, value) in &flat {
        if key == "preset" {
            continue;
        }
        if !set(&mut config, key, value)? {
            let msg = format!("unknown configuration key '{key}'");
            if strict {
                return Err(CliError::Config(msg));
            }
            warnings.push(msg);
        }
    }
    config.validate()?;
    Ok(Loaded { config, warnings })
}

pub fn load_config(path: &Path, strict: bool) -> Result<Loaded, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
    parse_config(&text, strict)
}

fn float(x: f64) -> String {
    format!("{x:.16e}")
}

/// Serialise every field; `parse_config(emit_config(c))` reproduces `c`.
pub fn emit_config(c: &RunConfig) -> String {
    let mut s = String::new();
    if let Some(p) = &c.preset {
        let _ = writeln!(s, "preset = {}", Value::String(p.clone()));
    }
    let floats = [
        ("geometry.length", c.geometry.length),
        ("geometry.a_cyl", c.geometry.a_cyl),
        ("geometry.a_tymp", c.geometry.a_tymp),
        ("geometry.beta", c.geometry.beta),
        ("material.c", c.material.c),
        ("material.c_m", c.material.c_m),
        ("material.rho0", c.material.rho0),
        ("material.rho_m", c.material.rho_m),
        ("material.thickness", c.material.thickness),
        ("material.alpha", c.material.alpha),
        ("stimulus.p0", c.stimulus.p0),
        ("stimulus.omega", c.stimulus.omega),
        ("stimulus.k_axial", c.stimulus.k_axial),
    ];
    for (k, v) in floats {
        let _ = writeln!(s, "{k} = {}", float(v));
    }
    let t = &c.truncation;
    for (k, v) in [
        ("truncation.cavity_n1", t.cavity_n1),
        ("truncation.cavity_n2", t.cavity_n2),
        ("truncation.cavity_n3", t.cavity_n3),
        ("truncation.membrane_k1", t.membrane_k1),
        ("truncation.membrane_k2", t.membrane_k2),
    ] {
        let _ = writeln!(s, "{k} = {v}");
    }
    let _ = writeln!(s, "time.window = {}", float(c.window));
    let _ = writeln!(s, "time.samples = {}", c.samples);
    let dir = c.output_dir.to_string_lossy().into_owned();
    let _ = writeln!(s, "output.dir = {}", Value::String(dir));
    s
}
