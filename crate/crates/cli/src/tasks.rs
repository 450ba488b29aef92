//! Task execution: map the sweep grid through the library, render CSV or
//! JSON bytes, and build the one-line stdout summary. All numbers come
//! straight from library calls; the only arithmetic here is grid generation
//! and flag counting.

use std::fmt::Write as _;

use dispersion_kernel::{
    asymptotic_limit, divergence_demo, enveloped_radial_force, hemisphere_force_closed,
    hemisphere_force_oracle, hemisphere_regime_warning, mean_free_path, planar_force_closed,
    planar_force_oracle, potential_excited, potential_ground, resonant_force, AsymptoticRegime,
    AtomState, ForceEnvelope, HalfSpaceGeometry, HemisphereGeometry, HemisphereRegime,
    PairConfig, QuadratureSpec, VolumeOracleSpec,
};
use serde::Serialize;

use crate::config::{EnvelopeSpec, RunConfig, SweepSpec, TaskSpec};
use crate::error::Result;
use crate::sweep::map_ordered;

const UNITS_LINE: &str = "# units: natural, hbar = c = 1\n";

/// Rendered output of a task: the bytes to write, the stdout summary, and
/// any advisory notes for stderr.
pub struct Rendered {
    pub body: String,
    pub summary: String,
    pub notes: Vec<String>,
}

pub fn execute(config: &RunConfig, threads: usize) -> Result<Rendered> {
    match &config.task {
        TaskSpec::PairPotential { state } => pair_potential(config, *state, threads),
        TaskSpec::PairForce { envelope } => pair_force(config, envelope, threads),
        TaskSpec::PlanarForce { l_ph_override } => planar_force(config, *l_ph_override, threads),
        TaskSpec::HemisphereForce {
            l_ph_override,
            radial_cutoff,
        } => hemisphere_force(config, *l_ph_override, *radial_cutoff, threads),
        TaskSpec::DivergenceDemo {
            standoff,
            l_ph_override,
        } => divergence(config, *standoff, *l_ph_override),
        TaskSpec::LimitCheck => limit_check(config),
    }
}

fn num(v: f64) -> String {
    format!("{v:.16e}")
}

fn grid(config: &RunConfig) -> &SweepSpec {
    config
        .sweep
        .as_ref()
        .expect("sweep tasks always carry a validated sweep")
}

/// A record is flagged when its error estimate exceeds the tolerance the
/// quadrature was asked for on its primary value.
fn is_flagged(quad: &QuadratureSpec, value: f64, error: f64) -> bool {
    error > (quad.rel_tol * value.abs()).max(quad.abs_tol)
}

fn summary(task: &TaskSpec, points: usize, flagged: usize) -> String {
    format!("{}: {points} points, {flagged} flagged", task.name())
}

fn pair_potential(config: &RunConfig, state: AtomState, threads: usize) -> Result<Rendered> {
    let cfg = &config.pair;
    let points = grid(config).grid();
    let rows = map_ordered(&points, threads, |r| match state {
        AtomState::Excited => potential_excited(cfg, r),
        AtomState::Ground => potential_ground(cfg, r),
    })?;

    let mut body = String::from(UNITS_LINE);
    body.push_str("R,U_total,U_resonant,U_nonresonant,err\n");
    let mut flagged = 0;
    for (r, b) in points.iter().zip(&rows) {
        if is_flagged(&cfg.quad, b.total, b.quadrature_error) {
            flagged += 1;
        }
        let _ = writeln!(
            body,
            "{},{},{},{},{}",
            num(*r),
            num(b.total),
            num(b.resonant),
            num(b.nonresonant),
            num(b.quadrature_error)
        );
    }
    Ok(Rendered {
        body,
        summary: summary(&config.task, points.len(), flagged),
        notes: Vec::new(),
    })
}

fn pair_force(config: &RunConfig, envelope: &EnvelopeSpec, threads: usize) -> Result<Rendered> {
    let cfg = &config.pair;
    let points = grid(config).grid();
    let rows = match envelope {
        EnvelopeSpec::Slab => map_ordered(&points, threads, |r| {
            resonant_force(cfg, ForceEnvelope::SlabModel, r)
        })?,
        EnvelopeSpec::Exponential {
            emission_radius,
            l_ph_override,
        } => {
            let l_ph = match l_ph_override {
                Some(l) => *l,
                None => mean_free_path(&cfg.medium, cfg.atom_a.omega)?.exact,
            };
            let r0 = *emission_radius;
            map_ordered(&points, threads, |r| {
                enveloped_radial_force(cfg, r, r0, l_ph)
            })?
        }
    };

    let mut body = String::from(UNITS_LINE);
    body.push_str("R,F,err\n");
    for (r, force) in points.iter().zip(&rows) {
        let _ = writeln!(body, "{},{},{}", num(*r), num(*force), num(0.0));
    }
    Ok(Rendered {
        body,
        summary: summary(&config.task, points.len(), 0),
        notes: Vec::new(),
    })
}

fn half_space(z0: f64, l_ph_override: Option<f64>) -> Result<HalfSpaceGeometry> {
    Ok(match l_ph_override {
        Some(l) => HalfSpaceGeometry::with_mean_free_path_override(z0, l)?,
        None => HalfSpaceGeometry::new(z0)?,
    })
}

fn planar_force(config: &RunConfig, l_ph_override: Option<f64>, threads: usize) -> Result<Rendered> {
    let cfg = &config.pair;
    let points = grid(config).grid();
    let oracle_spec = VolumeOracleSpec {
        radial_cutoff: VolumeOracleSpec::default().radial_cutoff,
        quad: cfg.quad,
    };
    let rows = map_ordered(&points, threads, |z0| {
        let geometry = match l_ph_override {
            Some(l) => HalfSpaceGeometry::with_mean_free_path_override(z0, l)?,
            None => HalfSpaceGeometry::new(z0)?,
        };
        let closed = planar_force_closed(cfg, &geometry)?;
        let oracle = planar_force_oracle(cfg, &geometry, &oracle_spec)?;
        Ok((closed, oracle))
    })?;

    let mut body = String::from(UNITS_LINE);
    body.push_str("z0,F_closed,F_oracle,err\n");
    let mut flagged = 0;
    for (z0, (closed, oracle)) in points.iter().zip(&rows) {
        if is_flagged(&cfg.quad, oracle.value, oracle.error_estimate) {
            flagged += 1;
        }
        let _ = writeln!(
            body,
            "{},{},{},{}",
            num(*z0),
            num(*closed),
            num(oracle.value),
            num(oracle.error_estimate)
        );
    }
    Ok(Rendered {
        body,
        summary: summary(&config.task, points.len(), flagged),
        notes: Vec::new(),
    })
}

fn hemisphere_force(
    config: &RunConfig,
    l_ph_override: Option<f64>,
    radial_cutoff: f64,
    threads: usize,
) -> Result<Rendered> {
    let cfg = &config.pair;
    let points = grid(config).grid();
    let oracle_spec = VolumeOracleSpec::new(radial_cutoff, cfg.quad)?;
    let build = |r0: f64| -> std::result::Result<HemisphereGeometry, dispersion_kernel::KernelError> {
        match l_ph_override {
            Some(l) => HemisphereGeometry::with_mean_free_path_override(r0, l),
            None => HemisphereGeometry::new(r0),
        }
    };
    let rows = map_ordered(&points, threads, |r0| {
        let geometry = build(r0)?;
        let oracle = hemisphere_force_oracle(cfg, &geometry, &oracle_spec)?;
        let far = hemisphere_force_closed(cfg, &geometry, HemisphereRegime::FarZone)?;
        let near = hemisphere_force_closed(cfg, &geometry, HemisphereRegime::NearZone)?;
        Ok((oracle, far, near))
    })?;

    // advise on closed-form validity at the sweep ends, once per regime
    let mut notes = Vec::new();
    if let (Some(first), Some(last)) = (points.first(), points.last()) {
        for &r0 in &[*first, *last] {
            let geometry = build(r0)?;
            for regime in [HemisphereRegime::FarZone, HemisphereRegime::NearZone] {
                if let Some(warning) = hemisphere_regime_warning(cfg, &geometry, regime)? {
                    notes.push(warning);
                }
            }
        }
    }
    notes.dedup();

    let mut body = String::from(UNITS_LINE);
    body.push_str("r0,F_oracle,F_far,F_near,err\n");
    let mut flagged = 0;
    for (r0, (oracle, far, near)) in points.iter().zip(&rows) {
        if is_flagged(&cfg.quad, oracle.value, oracle.error_estimate) {
            flagged += 1;
        }
        let _ = writeln!(
            body,
            "{},{},{},{},{}",
            num(*r0),
            num(oracle.value),
            num(*far),
            num(*near),
            num(oracle.error_estimate)
        );
    }
    Ok(Rendered {
        body,
        summary: summary(&config.task, points.len(), flagged),
        notes,
    })
}

fn divergence(config: &RunConfig, standoff: f64, l_ph_override: Option<f64>) -> Result<Rendered> {
    let cfg = &config.pair;
    let cutoffs = grid(config).grid();
    let geometry = half_space(standoff, l_ph_override)?;
    let samples = divergence_demo(cfg, &geometry, &cutoffs)?;

    let mut body = String::from(UNITS_LINE);
    body.push_str("cutoff,I_vacuum,I_absorbing,err\n");
    let mut flagged = 0;
    for sample in &samples {
        let scale = sample.vacuum.abs().max(sample.absorbing.abs());
        if is_flagged(&cfg.quad, scale, sample.error_estimate) {
            flagged += 1;
        }
        let _ = writeln!(
            body,
            "{},{},{},{}",
            num(sample.cutoff),
            num(sample.vacuum),
            num(sample.absorbing),
            num(sample.error_estimate)
        );
    }
    Ok(Rendered {
        body,
        summary: summary(&config.task, samples.len(), flagged),
        notes: Vec::new(),
    })
}

#[derive(Serialize)]
struct RegimeReport {
    name: &'static str,
    separation: f64,
    computed: f64,
    asymptote: f64,
    ratio: f64,
    pass: bool,
}

#[derive(Serialize)]
struct LimitReport {
    task: &'static str,
    tolerance: f64,
    regimes: Vec<RegimeReport>,
    all_pass: bool,
}

/// Evaluates every closed-form asymptote at its canonical probe separation
/// (a hundredth of the probe wavelength for the short regimes, a hundred
/// wavelengths for the long ones) and reports the ratio to the computed
/// channel.
fn limit_check(config: &RunConfig) -> Result<Rendered> {
    const TOLERANCE: f64 = 0.01;
    let cfg: &PairConfig = &config.pair;
    let lambda = cfg.atom_a.wavelength();
    let short = lambda / 100.0;
    let long = lambda * 100.0;

    let plan = [
        ("excited-short", short, AsymptoticRegime::VdwExcited),
        ("excited-long", long, AsymptoticRegime::RetardedExcited),
        ("ground-short", short, AsymptoticRegime::VdwGround),
        ("ground-long", long, AsymptoticRegime::RetardedGround),
    ];
    let mut regimes = Vec::new();
    for (name, separation, regime) in plan {
        let computed = match regime {
            AsymptoticRegime::VdwExcited | AsymptoticRegime::RetardedExcited => {
                potential_excited(cfg, separation)?.resonant
            }
            AsymptoticRegime::VdwGround | AsymptoticRegime::RetardedGround => {
                potential_ground(cfg, separation)?.total
            }
        };
        let asymptote = asymptotic_limit(cfg, regime, separation)?;
        let ratio = computed / asymptote;
        regimes.push(RegimeReport {
            name,
            separation,
            computed,
            asymptote,
            ratio,
            pass: (ratio - 1.0).abs() <= TOLERANCE,
        });
    }
    let all_pass = regimes.iter().all(|r| r.pass);
    let passed = regimes.iter().filter(|r| r.pass).count();
    let report = LimitReport {
        task: "limit-check",
        tolerance: TOLERANCE,
        regimes,
        all_pass,
    };
    let mut body =
        serde_json::to_string_pretty(&report).expect("report serialization is infallible");
    body.push('\n');
    Ok(Rendered {
        body,
        summary: format!("limit-check: {passed}/4 regimes within 1%"),
        notes: Vec::new(),
    })
}
