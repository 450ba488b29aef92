//! Strict parsing of the line-oriented run configuration.
//!
//! The format is deliberately rigid: `[section]` headers, `key = value`
//! lines, `#` full-line comments. Unknown sections or keys are errors, every
//! physics parameter must be explicit, and only numeric tolerances carry
//! defaults.

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::str::FromStr;

use dispersion_kernel::{
    AtomState, DiluteGasMedium, PairConfig, QuadratureSpec, TwoLevelAtom, VolumeOracleSpec,
};

use crate::error::{CliError, Result};

const SECTIONS: [&str; 5] = ["system", "task", "sweep", "quad", "output"];

struct Entry {
    value: String,
    line: usize,
}

/// All `key = value` pairs of a config, consumed one by one so anything left
/// over is reported as unrecognized.
struct KeyBag {
    entries: BTreeMap<(String, String), Entry>,
}

impl KeyBag {
    fn parse(text: &str) -> Result<Self> {
        let mut entries = BTreeMap::new();
        let mut section: Option<String> = None;
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let trimmed = raw.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            if let Some(rest) = trimmed.strip_prefix('[') {
                let name = rest.strip_suffix(']').ok_or_else(|| {
                    CliError::Config(format!("line {line}: malformed section header '{trimmed}'"))
                })?;
                if !SECTIONS.contains(&name) {
                    return Err(CliError::Config(format!(
                        "line {line}: unknown section [{name}] (expected {})",
                        SECTIONS.join(", ")
                    )));
                }
                section = Some(name.to_string());
                continue;
            }
            let (key, value) = trimmed.split_once('=').ok_or_else(|| {
                CliError::Config(format!("line {line}: expected 'key = value', got '{trimmed}'"))
            })?;
            let key = key.trim();
            let value = value.trim();
            let section = section.clone().ok_or_else(|| {
                CliError::Config(format!("line {line}: key '{key}' appears before any [section]"))
            })?;
            if key.is_empty() || value.is_empty() {
                return Err(CliError::Config(format!(
                    "line {line}: empty key or value in '{trimmed}'"
                )));
            }
            let previous = entries.insert(
                (section.clone(), key.to_string()),
                Entry {
                    value: value.to_string(),
                    line,
                },
            );
            if let Some(previous) = previous {
                return Err(CliError::Config(format!(
                    "line {line}: duplicate key '{section}.{key}' (first set on line {})",
                    previous.line
                )));
            }
        }
        Ok(KeyBag { entries })
    }

    fn take(&mut self, section: &str, key: &str) -> Option<Entry> {
        self.entries.remove(&(section.to_string(), key.to_string()))
    }

    fn take_parsed<T: FromStr>(&mut self, section: &str, key: &str) -> Result<Option<T>>
    where
        T::Err: std::fmt::Display,
    {
        match self.take(section, key) {
            None => Ok(None),
            Some(entry) => entry.value.parse::<T>().map(Some).map_err(|e| {
                CliError::Config(format!(
                    "line {}: invalid value for {section}.{key}: {e}",
                    entry.line
                ))
            }),
        }
    }

    fn require_parsed<T: FromStr>(&mut self, section: &str, key: &str) -> Result<T>
    where
        T::Err: std::fmt::Display,
    {
        self.take_parsed(section, key)?.ok_or_else(|| {
            CliError::Config(format!("missing required key {section}.{key}"))
        })
    }

    fn take_choice(&mut self, section: &str, key: &str, choices: &[&str]) -> Result<Option<String>> {
        match self.take(section, key) {
            None => Ok(None),
            Some(entry) => {
                if choices.contains(&entry.value.as_str()) {
                    Ok(Some(entry.value))
                } else {
                    Err(CliError::Config(format!(
                        "line {}: {section}.{key} must be one of {}, got '{}'",
                        entry.line,
                        choices.join(" | "),
                        entry.value
                    )))
                }
            }
        }
    }

    fn require_choice(&mut self, section: &str, key: &str, choices: &[&str]) -> Result<String> {
        self.take_choice(section, key, choices)?.ok_or_else(|| {
            CliError::Config(format!(
                "missing required key {section}.{key} (one of {})",
                choices.join(" | ")
            ))
        })
    }

    fn has_section(&self, section: &str) -> bool {
        self.entries.keys().any(|(s, _)| s == section)
    }

    fn finish(self) -> Result<()> {
        match self
            .entries
            .iter()
            .min_by_key(|(_, entry)| entry.line)
        {
            None => Ok(()),
            Some(((section, key), entry)) => Err(CliError::Config(format!(
                "line {}: unrecognized key '{section}.{key}'",
                entry.line
            ))),
        }
    }
}

/// Task selector with its task-specific parameters.
#[derive(Debug, Clone, PartialEq)]
pub enum TaskSpec {
    PairPotential { state: AtomState },
    PairForce { envelope: EnvelopeSpec },
    PlanarForce { l_ph_override: Option<f64> },
    HemisphereForce { l_ph_override: Option<f64>, radial_cutoff: f64 },
    DivergenceDemo { standoff: f64, l_ph_override: Option<f64> },
    LimitCheck,
}

impl TaskSpec {
    pub fn name(&self) -> &'static str {
        match self {
            TaskSpec::PairPotential { .. } => "pair-potential",
            TaskSpec::PairForce { .. } => "pair-force",
            TaskSpec::PlanarForce { .. } => "planar-force",
            TaskSpec::HemisphereForce { .. } => "hemisphere-force",
            TaskSpec::DivergenceDemo { .. } => "divergence-demo",
            TaskSpec::LimitCheck => "limit-check",
        }
    }

    fn sweep_variable(&self) -> Option<&'static str> {
        match self {
            TaskSpec::PairPotential { .. } | TaskSpec::PairForce { .. } => Some("r"),
            TaskSpec::PlanarForce { .. } => Some("z0"),
            TaskSpec::HemisphereForce { .. } => Some("r0"),
            TaskSpec::DivergenceDemo { .. } => Some("cutoff"),
            TaskSpec::LimitCheck => None,
        }
    }
}

/// Spatial weighting of the pair force.
#[derive(Debug, Clone, PartialEq)]
pub enum EnvelopeSpec {
    Slab,
    Exponential {
        emission_radius: f64,
        l_ph_override: Option<f64>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Spacing {
    Linear,
    Logarithmic,
}

/// The independent-variable grid of a sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub min: f64,
    pub max: f64,
    pub points: usize,
    pub spacing: Spacing,
}

impl SweepSpec {
    /// The grid, endpoints exact, interior points spaced per the rule.
    pub fn grid(&self) -> Vec<f64> {
        let n = self.points;
        (0..n)
            .map(|i| {
                if i == 0 {
                    self.min
                } else if i == n - 1 {
                    self.max
                } else {
                    let t = i as f64 / (n - 1) as f64;
                    match self.spacing {
                        Spacing::Linear => self.min + (self.max - self.min) * t,
                        Spacing::Logarithmic => {
                            (self.min.ln() + (self.max.ln() - self.min.ln()) * t).exp()
                        }
                    }
                }
            })
            .collect()
    }
}

/// A fully validated run: physics, task, grid, and output routing.
/// The rendering format is implied by the task (limit-check emits a JSON
/// summary, everything else CSV); `[output] format` is accepted only as a
/// consistency check.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub pair: PairConfig,
    pub task: TaskSpec,
    pub sweep: Option<SweepSpec>,
    pub output_path: Option<PathBuf>,
}

impl RunConfig {
    pub fn parse(text: &str) -> Result<Self> {
        let mut bag = KeyBag::parse(text)?;

        let quad = parse_quad(&mut bag)?;
        let pair = parse_system(&mut bag, quad)?;
        let task = parse_task(&mut bag, quad)?;
        let sweep = parse_sweep(&mut bag, &task)?;
        let output_path = parse_output(&mut bag, &task)?;

        bag.finish()?;
        Ok(RunConfig {
            pair,
            task,
            sweep,
            output_path,
        })
    }

    /// Number of evaluation points, for sizing the worker pool.
    pub fn point_count(&self) -> usize {
        match &self.sweep {
            Some(sweep) => sweep.points,
            None => 4,
        }
    }
}

fn parse_quad(bag: &mut KeyBag) -> Result<QuadratureSpec> {
    let defaults = QuadratureSpec::default();
    let rel_tol = bag.take_parsed("quad", "rel_tol")?.unwrap_or(defaults.rel_tol);
    let abs_tol = bag.take_parsed("quad", "abs_tol")?.unwrap_or(defaults.abs_tol);
    let max_subdivisions = bag
        .take_parsed("quad", "max_subdivisions")?
        .unwrap_or(defaults.max_subdivisions);
    let tail_decades = bag
        .take_parsed("quad", "tail_decades")?
        .unwrap_or(defaults.tail_decades);
    QuadratureSpec::new(rel_tol, abs_tol, max_subdivisions, tail_decades)
        .map_err(|e| CliError::Config(format!("invalid quadrature spec: {e}")))
}

fn parse_system(bag: &mut KeyBag, quad: QuadratureSpec) -> Result<PairConfig> {
    let omega_a: f64 = bag.require_parsed("system", "omega_a")?;
    let d2_a: f64 = bag.require_parsed("system", "d2_a")?;
    let omega_b: f64 = bag.require_parsed("system", "omega_b")?;
    let d2_b: f64 = bag.require_parsed("system", "d2_b")?;
    let gamma_b: f64 = bag.require_parsed("system", "gamma_b")?;
    let n0: f64 = bag.require_parsed("system", "n0")?;
    let diluteness_limit: Option<f64> = bag.take_parsed("system", "diluteness_limit")?;
    let dissimilarity_factor: Option<f64> = bag.take_parsed("system", "dissimilarity_factor")?;

    let invalid = |e: dispersion_kernel::KernelError| {
        CliError::Config(format!("invalid system parameters: {e}"))
    };
    let atom_a = TwoLevelAtom::lossless(omega_a, d2_a).map_err(invalid)?;
    let atom_b = TwoLevelAtom::new(omega_b, d2_b, gamma_b).map_err(invalid)?;
    let medium = match diluteness_limit {
        Some(limit) => DiluteGasMedium::with_diluteness_limit(atom_b, n0, limit),
        None => DiluteGasMedium::new(atom_b, n0),
    }
    .map_err(invalid)?;
    match dissimilarity_factor {
        Some(factor) => {
            PairConfig::with_dissimilarity_factor(atom_a, atom_b, medium, quad, factor)
        }
        None => PairConfig::new(atom_a, atom_b, medium, quad),
    }
    .map_err(invalid)
}

fn take_positive(bag: &mut KeyBag, section: &str, key: &str) -> Result<Option<f64>> {
    match bag.take_parsed::<f64>(section, key)? {
        None => Ok(None),
        Some(v) if v.is_finite() && v > 0.0 => Ok(Some(v)),
        Some(v) => Err(CliError::Config(format!(
            "{section}.{key} must be finite and positive, got {v}"
        ))),
    }
}

fn require_positive(bag: &mut KeyBag, section: &str, key: &str) -> Result<f64> {
    take_positive(bag, section, key)?.ok_or_else(|| {
        CliError::Config(format!("missing required key {section}.{key}"))
    })
}

fn parse_task(bag: &mut KeyBag, quad: QuadratureSpec) -> Result<TaskSpec> {
    let kind = bag.require_choice(
        "task",
        "type",
        &[
            "pair-potential",
            "pair-force",
            "planar-force",
            "hemisphere-force",
            "divergence-demo",
            "limit-check",
        ],
    )?;
    match kind.as_str() {
        "pair-potential" => {
            let state = match bag.require_choice("task", "state", &["excited", "ground"])?.as_str()
            {
                "excited" => AtomState::Excited,
                _ => AtomState::Ground,
            };
            Ok(TaskSpec::PairPotential { state })
        }
        "pair-force" => {
            let envelope =
                match bag.require_choice("task", "envelope", &["slab", "exponential"])?.as_str() {
                    "slab" => EnvelopeSpec::Slab,
                    _ => EnvelopeSpec::Exponential {
                        emission_radius: require_positive(bag, "task", "emission_radius")?,
                        l_ph_override: take_positive(bag, "task", "l_ph_override")?,
                    },
                };
            Ok(TaskSpec::PairForce { envelope })
        }
        "planar-force" => Ok(TaskSpec::PlanarForce {
            l_ph_override: take_positive(bag, "task", "l_ph_override")?,
        }),
        "hemisphere-force" => {
            let radial_cutoff = take_positive(bag, "task", "radial_cutoff")?
                .unwrap_or(VolumeOracleSpec::default().radial_cutoff);
            // fail at parse time, not per sweep point
            VolumeOracleSpec::new(radial_cutoff, quad)
                .map_err(|e| CliError::Config(format!("invalid task parameters: {e}")))?;
            Ok(TaskSpec::HemisphereForce {
                l_ph_override: take_positive(bag, "task", "l_ph_override")?,
                radial_cutoff,
            })
        }
        "divergence-demo" => Ok(TaskSpec::DivergenceDemo {
            standoff: require_positive(bag, "task", "standoff")?,
            l_ph_override: take_positive(bag, "task", "l_ph_override")?,
        }),
        _ => Ok(TaskSpec::LimitCheck),
    }
}

fn parse_sweep(bag: &mut KeyBag, task: &TaskSpec) -> Result<Option<SweepSpec>> {
    let expected = match task.sweep_variable() {
        None => {
            if bag.has_section("sweep") {
                return Err(CliError::Config(
                    "limit-check evaluates fixed regime points and takes no [sweep] section"
                        .to_string(),
                ));
            }
            return Ok(None);
        }
        Some(expected) => expected,
    };
    let variable = bag.require_choice("sweep", "variable", &["r", "z0", "r0", "cutoff"])?;
    if variable != expected {
        return Err(CliError::Config(format!(
            "sweep.variable must be '{expected}' for {}, got '{variable}'",
            task.name()
        )));
    }
    let min = require_positive(bag, "sweep", "min")?;
    let max = require_positive(bag, "sweep", "max")?;
    let points: usize = bag.require_parsed("sweep", "points")?;
    let spacing = match bag
        .require_choice("sweep", "spacing", &["linear", "logarithmic"])?
        .as_str()
    {
        "linear" => Spacing::Linear,
        _ => Spacing::Logarithmic,
    };
    if min >= max {
        return Err(CliError::Config(format!(
            "sweep range must satisfy min < max, got {min} >= {max}"
        )));
    }
    if points < 2 {
        return Err(CliError::Config(format!(
            "sweep.points must be at least 2, got {points}"
        )));
    }
    if let TaskSpec::DivergenceDemo { standoff, .. } = task {
        if min <= *standoff {
            return Err(CliError::Config(format!(
                "divergence-demo cutoffs must exceed the standoff {standoff}, got min {min}"
            )));
        }
    }
    Ok(Some(SweepSpec {
        min,
        max,
        points,
        spacing,
    }))
}

fn parse_output(bag: &mut KeyBag, task: &TaskSpec) -> Result<Option<PathBuf>> {
    let path = bag.take("output", "path").map(|entry| PathBuf::from(entry.value));
    let format = bag.take_choice("output", "format", &["csv", "json-summary"])?;
    match (format.as_deref(), task) {
        (Some("json-summary"), TaskSpec::LimitCheck) => {}
        (Some("json-summary"), _) => {
            return Err(CliError::Config(
                "format json-summary is only available for limit-check".to_string(),
            ))
        }
        (Some(_), TaskSpec::LimitCheck) => {
            return Err(CliError::Config(
                "limit-check emits a JSON summary, not CSV".to_string(),
            ))
        }
        _ => {}
    }
    Ok(path)
}
