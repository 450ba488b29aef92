//! End-to-end tests driving the compiled binary: output shape, determinism
//! across thread counts, and the exit-code contract for each failure class.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};
use std::sync::atomic::{AtomicUsize, Ordering};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_dispersion-kernel"))
}

static DIR_SEQ: AtomicUsize = AtomicUsize::new(0);

/// Per-test scratch directory, removed on drop.
struct TempDir {
    path: PathBuf,
}

impl TempDir {
    fn new() -> Self {
        let seq = DIR_SEQ.fetch_add(1, Ordering::Relaxed);
        let path = std::env::temp_dir().join(format!(
            "dispersion-cli-{}-{seq}",
            std::process::id()
        ));
        std::fs::create_dir_all(&path).unwrap();
        TempDir { path }
    }

    fn file(&self, name: &str) -> PathBuf {
        self.path.join(name)
    }

    fn write_config(&self, name: &str, body: &str) -> PathBuf {
        let path = self.file(name);
        std::fs::write(&path, body).unwrap();
        path
    }
}

impl Drop for TempDir {
    fn drop(&mut self) {
        let _ = std::fs::remove_dir_all(&self.path);
    }
}

const SYSTEM: &str = "[system]
omega_a = 1.0
d2_a = 1.0
omega_b = 1.5
d2_b = 1.0
gamma_b = 0.01
n0 = 1e-4
";

fn run_expecting_success(config: &Path) -> Output {
    let out = bin().args(["run", "--config"]).arg(config).output().unwrap();
    assert!(
        out.status.success(),
        "run failed\nstdout: {}\nstderr: {}",
        String::from_utf8_lossy(&out.stdout),
        String::from_utf8_lossy(&out.stderr)
    );
    out
}

fn stderr_of(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

/// Splits a CSV body into (units line, header, data rows).
fn split_csv(body: &str) -> (String, String, Vec<Vec<f64>>) {
    let mut lines = body.lines();
    let units = lines.next().unwrap().to_string();
    let header = lines.next().unwrap().to_string();
    let rows = lines
        .map(|line| {
            line.split(',')
                .map(|field| field.parse::<f64>().unwrap())
                .collect()
        })
        .collect();
    (units, header, rows)
}

#[test]
fn pair_potential_csv_has_expected_shape() {
    let dir = TempDir::new();
    let out_path = dir.file("pair.csv");
    let config = dir.write_config(
        "pair.ini",
        &format!(
            "{SYSTEM}
[task]
type = pair-potential
state = excited

[sweep]
variable = r
min = 0.06283185307179587
max = 628.3185307179587
points = 50
spacing = logarithmic

[output]
path = {}
",
            out_path.display()
        ),
    );

    let out = run_expecting_success(&config);
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("pair-potential: 50 points"), "{stdout}");
    assert!(stdout.contains("; wrote "), "{stdout}");

    let body = std::fs::read_to_string(&out_path).unwrap();
    let (units, header, rows) = split_csv(&body);
    assert!(units.starts_with("# units:"), "{units}");
    assert_eq!(header, "R,U_total,U_resonant,U_nonresonant,err");
    assert_eq!(rows.len(), 50);
    for row in &rows {
        assert_eq!(row.len(), 5);
        let (u_total, u_res, u_nonres) = (row[1], row[2], row[3]);
        assert!((u_total - (u_res + u_nonres)).abs() <= 1e-12 * u_total.abs());
    }
    let first = rows.first().unwrap()[0];
    let last = rows.last().unwrap()[0];
    assert!((first - 0.06283185307179587).abs() <= f64::EPSILON * first);
    assert!((last - 628.3185307179587).abs() <= f64::EPSILON * last);
}

#[test]
fn reruns_and_thread_counts_are_byte_identical() {
    let dir = TempDir::new();
    let make_config = |out_name: &str| {
        format!(
            "{SYSTEM}
[task]
type = pair-potential
state = excited

[sweep]
variable = r
min = 0.5
max = 50.0
points = 12
spacing = logarithmic

[output]
path = {}
",
            dir.file(out_name).display()
        )
    };

    let config_a = dir.write_config("a.ini", &make_config("a.csv"));
    run_expecting_success(&config_a);
    let reference = std::fs::read(dir.file("a.csv")).unwrap();

    let config_b = dir.write_config("b.ini", &make_config("b.csv"));
    run_expecting_success(&config_b);
    assert_eq!(reference, std::fs::read(dir.file("b.csv")).unwrap());

    for threads in ["1", "4", "8"] {
        let name = format!("t{threads}.csv");
        let config = dir.write_config(&format!("t{threads}.ini"), &make_config(&name));
        let out = bin()
            .args(["run", "--config"])
            .arg(&config)
            .env("DISPERSION_KERNEL_THREADS", threads)
            .output()
            .unwrap();
        assert!(out.status.success(), "{}", stderr_of(&out));
        assert_eq!(
            reference,
            std::fs::read(dir.file(&name)).unwrap(),
            "output differs with {threads} worker threads"
        );
    }
}

#[test]
fn output_flag_overrides_config_path() {
    let dir = TempDir::new();
    let config = dir.write_config(
        "pair.ini",
        &format!(
            "{SYSTEM}
[task]
type = pair-potential
state = ground

[sweep]
variable = r
min = 1.0
max = 10.0
points = 3
spacing = linear

[output]
path = {}
",
            dir.file("ignored.csv").display()
        ),
    );
    let flagged = dir.file("flagged.csv");
    let out = bin()
        .args(["run", "--config"])
        .arg(&config)
        .arg("--output")
        .arg(&flagged)
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", stderr_of(&out));
    assert!(flagged.exists());
    assert!(!dir.file("ignored.csv").exists());
}

#[test]
fn divergence_demo_vacuum_part_doubles_with_cutoff() {
    let dir = TempDir::new();
    let out_path = dir.file("div.csv");
    // Cutoffs 10, 20, 40, 80 wavelengths: the lossless column grows about
    // linearly in the cutoff, the absorbing one saturates.
    let config = dir.write_config(
        "div.ini",
        &format!(
            "{SYSTEM}
[task]
type = divergence-demo
standoff = 0.3141592653589793
l_ph_override = 62.83185307179586

[sweep]
variable = cutoff
min = 62.83185307179586
max = 502.6548245743669
points = 4
spacing = logarithmic

[output]
path = {}
",
            out_path.display()
        ),
    );
    run_expecting_success(&config);
    let body = std::fs::read_to_string(&out_path).unwrap();
    let (_, header, rows) = split_csv(&body);
    assert_eq!(header, "cutoff,I_vacuum,I_absorbing,err");
    assert_eq!(rows.len(), 4);
    for pair in rows.windows(2) {
        let ratio = pair[1][1] / pair[0][1];
        assert!(
            (1.8..=2.2).contains(&ratio),
            "lossless integral should near-double per cutoff doubling, got {ratio}"
        );
    }
    let absorbing_tail_ratio = rows[3][2] / rows[2][2];
    assert!(
        (absorbing_tail_ratio - 1.0).abs() < 0.05,
        "absorbing integral should saturate, got ratio {absorbing_tail_ratio}"
    );
}

#[test]
fn limit_check_emits_passing_json_summary() {
    let dir = TempDir::new();
    let out_path = dir.file("limits.json");
    let config = dir.write_config(
        "limit.ini",
        &format!(
            "{SYSTEM}
[task]
type = limit-check

[output]
path = {}
format = json-summary
",
            out_path.display()
        ),
    );
    run_expecting_success(&config);
    let body = std::fs::read_to_string(&out_path).unwrap();
    let report: serde_json::Value = serde_json::from_str(&body).unwrap();
    assert_eq!(report["task"], "limit-check");
    assert_eq!(report["regimes"].as_array().unwrap().len(), 4);
    assert_eq!(report["all_pass"], true);
}

#[test]
fn unknown_key_is_named_with_its_section() {
    let dir = TempDir::new();
    let config = dir.write_config(
        "bad.ini",
        &format!(
            "{}omega_c = 2.0

[task]
type = limit-check
",
            SYSTEM
        ),
    );
    let out = bin().args(["run", "--config"]).arg(&config).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr_of(&out).contains("system.omega_c"), "{}", stderr_of(&out));
}

#[test]
fn degenerate_atom_pair_is_a_config_error() {
    let dir = TempDir::new();
    let config = dir.write_config(
        "bad.ini",
        &format!(
            "{}
[task]
type = limit-check
",
            SYSTEM.replace("omega_b = 1.5", "omega_b = 1.0")
        ),
    );
    let out = bin().args(["run", "--config"]).arg(&config).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr_of(&out).contains("degenerate atoms"), "{}", stderr_of(&out));
}

#[test]
fn missing_output_path_is_a_config_error() {
    let dir = TempDir::new();
    let config = dir.write_config(
        "bad.ini",
        &format!(
            "{SYSTEM}
[task]
type = limit-check
"
        ),
    );
    let out = bin().args(["run", "--config"]).arg(&config).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr_of(&out).contains("no output path"), "{}", stderr_of(&out));
}

#[test]
fn lossless_medium_without_override_is_a_compute_error() {
    let dir = TempDir::new();
    let config = dir.write_config(
        "bad.ini",
        &format!(
            "{}
[task]
type = hemisphere-force

[sweep]
variable = r0
min = 10.0
max = 20.0
points = 2
spacing = linear

[output]
path = {}
",
            SYSTEM.replace("n0 = 1e-4", "n0 = 0.0"),
            dir.file("hemi.csv").display()
        ),
    );
    let out = bin().args(["run", "--config"]).arg(&config).output().unwrap();
    assert_eq!(out.status.code(), Some(3));
    let stderr = stderr_of(&out);
    assert!(stderr.contains("compute:"), "{stderr}");
    assert!(stderr.contains("lossless medium"), "{stderr}");
}

#[test]
fn unwritable_output_path_is_an_io_error() {
    let dir = TempDir::new();
    let config = dir.write_config(
        "pair.ini",
        &format!(
            "{SYSTEM}
[task]
type = pair-potential
state = excited

[sweep]
variable = r
min = 1.0
max = 2.0
points = 2
spacing = linear

[output]
path = {}
",
            dir.file("missing-subdir").join("out.csv").display()
        ),
    );
    let out = bin().args(["run", "--config"]).arg(&config).output().unwrap();
    assert_eq!(out.status.code(), Some(4));
    assert!(stderr_of(&out).contains("io:"), "{}", stderr_of(&out));
}

#[test]
fn explain_prints_task_formulas() {
    let out = bin().args(["--explain", "pair-potential"]).output().unwrap();
    assert!(out.status.success());
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("pair-potential"), "{stdout}");
    assert!(stdout.contains("U_nonresonant"), "{stdout}");
}

#[test]
fn explain_rejects_unknown_task() {
    let out = bin().args(["--explain", "bogus"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr_of(&out).contains("pair-potential"), "{}", stderr_of(&out));
}

#[test]
fn version_flag_reports_package_version() {
    let out = bin().arg("--version").output().unwrap();
    assert!(out.status.success());
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains(env!("CARGO_PKG_VERSION")), "{stdout}");
}

#[test]
fn bare_invocation_shows_usage_and_fails() {
    let out = bin().output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    let combined = format!(
        "{}{}",
        String::from_utf8_lossy(&out.stdout),
        String::from_utf8_lossy(&out.stderr)
    );
    assert!(combined.contains("Usage"), "{combined}");
}
