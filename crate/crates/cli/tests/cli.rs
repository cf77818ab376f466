use std::f64::consts::PI;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use mzclock::interfere;
use mzclock_cli::RunConfig;
use tempfile::TempDir;

/// Clock frequency chosen so that `dE*dV/(2 hbar c^2)` is 1 rad/s at
/// `g = 10 m/s^2`, `delta_h = 1 m`.
const ONE_HZ: &str = "
mass = 1e-33 kg
clock_omega = 1.797510357473635e16 rad/s
clock_state = balanced
delta_h = 1 m
delta_T = 1.5707963267948966 s
g = 10 m/s^2
";

/// Laboratory source with `|phi|/c^2 ~ 1e-21` at the origin, so that the
/// proper-time split is `g dh dT / c^2` to well below 1e-12 relative.
const LAB_SOURCE: &str = "source_mass = 1e10 kg\nradius = 1e4 m\n";

/// Envelope `|cos(omega dtau / 2)|` for the Earth-field 1 Hz config, with
/// `dtau = dT (tau_dot(u1) - tau_dot(u0))` written without cancellation.
fn earth_envelope(delta_t: f64) -> f64 {
    let c2 = 299_792_458.0f64.powi(2);
    let u0 = -6.6743e-11 * 5.972e24 / 6.371e6 / c2;
    let du = 10.0 / c2;
    let u1 = u0 + du;
    let rate = |u: f64| (1.0 + 2.0 * u + 2.0 * u * u).sqrt();
    let dtau = delta_t * 2.0 * du * (1.0 + u0 + u1) / (rate(u0) + rate(u1));
    (1.797510357473635e16 * dtau / 2.0).cos().abs()
}

fn mzclock(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mzclock"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let p = dir.path().join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

/// Value of `key = value [unit]` in text output.
fn field(text: &str, key: &str) -> f64 {
    text.lines()
        .find_map(|l| l.strip_prefix(&format!("{key} = ")))
        .and_then(|v| v.split_whitespace().next())
        .unwrap_or_else(|| panic!("no `{key}` in\n{text}"))
        .parse()
        .unwrap()
}

fn csv_rows(text: &str) -> (Vec<String>, Vec<Vec<f64>>) {
    let mut lines = text.lines();
    let header = lines.next().unwrap().split(',').map(String::from).collect();
    let rows = lines
        .map(|l| l.split(',').map(|c| c.parse().unwrap()).collect())
        .collect();
    (header, rows)
}

#[test]
fn eigenstate_clock_has_full_visibility() {
    let dir = TempDir::new().unwrap();
    let cfg = write(&dir, "e.cfg", &ONE_HZ.replace("balanced", "eigenstate 0"));
    let o = mzclock(&["simulate", "--config", s(&cfg)]);
    assert!(o.status.success());
    let out = stdout(&o);
    assert_eq!(field(&out, "visibility"), 1.0);
    for key in [
        "p_plus",
        "p_minus",
        "distinguishability",
        "delta_phi",
        "alpha",
        "delta_tau",
    ] {
        field(&out, key);
    }
    assert!(out.contains(" s\n") && out.contains(" rad\n"));
}

#[test]
fn one_hertz_clock_vanishes_at_quarter_period() {
    let dir = TempDir::new().unwrap();
    let cfg = write(&dir, "a.cfg", &format!("{ONE_HZ}{LAB_SOURCE}"));
    let o = mzclock(&["simulate", "--config", s(&cfg)]);
    assert!(o.status.success());
    let v = field(&stdout(&o), "visibility");
    assert!(v.abs() <= 1e-9, "V = {v}");

    // Earth's potential slows both arms by 1 + phi_R/c^2, moving the zero by ~1e-9 s
    let cfg = write(&dir, "e.cfg", ONE_HZ);
    let v = field(
        &stdout(&mzclock(&["simulate", "--config", s(&cfg)])),
        "visibility",
    );
    let expect = earth_envelope(PI / 2.0);
    assert!(expect > 1e-9);
    assert!((v - expect).abs() < 1e-15, "V = {v}, expected {expect}");
}

#[test]
fn malformed_config_exits_2_without_output() {
    let dir = TempDir::new().unwrap();
    for (name, text) in [
        ("unit.cfg", ONE_HZ.replace("delta_h = 1 m", "delta_h = 1 s")),
        ("nounit.cfg", ONE_HZ.replace("delta_h = 1 m", "delta_h = 1")),
        ("key.cfg", format!("{ONE_HZ}\nwibble = 3 m")),
        ("syntax.cfg", "mass 1e-33 kg".to_string()),
    ] {
        let cfg = write(&dir, name, &text);
        let o = mzclock(&["simulate", "--config", s(&cfg)]);
        assert_eq!(o.status.code(), Some(2), "{name}");
        assert!(o.stdout.is_empty(), "{name}");
        assert!(!o.stderr.is_empty(), "{name}");
    }
    let out = dir.path().join("sweep.csv");
    let bad = write(&dir, "bad.cfg", "mass = heavy");
    let o = mzclock(&[
        "sweep",
        "--config",
        s(&bad),
        "--variable",
        "phi",
        "--from",
        "0",
        "--to",
        "1",
        "--n",
        "5",
        "--output",
        s(&out),
    ]);
    assert_eq!(o.status.code(), Some(2));
    assert!(!out.exists());
}

#[test]
fn physics_errors_exit_3_naming_the_guard() {
    let dir = TempDir::new().unwrap();
    let cfg = write(
        &dir,
        "h.cfg",
        &ONE_HZ.replace("delta_h = 1 m", "delta_h = 100 km"),
    );
    let o = mzclock(&["simulate", "--config", s(&cfg)]);
    assert_eq!(o.status.code(), Some(3));
    assert!(o.stdout.is_empty());
    assert!(String::from_utf8_lossy(&o.stderr).contains("height-offset guard"));

    let cfg = write(
        &dir,
        "v.cfg",
        &format!("{ONE_HZ}\nhorizontal_speed = 1e7 m/s"),
    );
    let o = mzclock(&["simulate", "--config", s(&cfg)]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn sweep_endpoints_only() {
    let dir = TempDir::new().unwrap();
    let cfg = write(&dir, "a.cfg", ONE_HZ);
    let o = mzclock(&[
        "sweep",
        "--config",
        s(&cfg),
        "--variable",
        "delta_T",
        "--from",
        "0",
        "--to",
        "1",
        "--n",
        "2",
    ]);
    assert!(o.status.success());
    let (header, rows) = csv_rows(&stdout(&o));
    assert_eq!(
        header,
        [
            "delta_T [s]",
            "p_plus_minus_p_minus [1]",
            "visibility [1]",
            "phase [rad]"
        ]
    );
    assert_eq!(rows.len(), 2);
    assert_eq!(rows[0][0], 0.0);
    assert_eq!(rows[1][0], 1.0);
}

#[test]
fn sweep_count_is_bounded() {
    let dir = TempDir::new().unwrap();
    let cfg = write(&dir, "a.cfg", ONE_HZ);
    for n in ["1", "10000001"] {
        let o = mzclock(&[
            "sweep",
            "--config",
            s(&cfg),
            "--variable",
            "phi",
            "--from",
            "0",
            "--to",
            "1",
            "--n",
            n,
        ]);
        assert_eq!(o.status.code(), Some(2), "n = {n}");
        assert!(o.stdout.is_empty());
    }
}

#[test]
fn delta_t_sweep_envelope_is_cosine() {
    let dir = TempDir::new().unwrap();
    let cfg = write(&dir, "a.cfg", &format!("{ONE_HZ}{LAB_SOURCE}"));
    let to = format!("{} s", 2.0 * PI);
    let o = mzclock(&[
        "sweep",
        "--config",
        s(&cfg),
        "--variable",
        "delta_T",
        "--from",
        "0 s",
        "--to",
        &to,
        "--n",
        "401",
    ]);
    assert!(o.status.success());
    let (_, rows) = csv_rows(&stdout(&o));
    assert_eq!(rows.len(), 401);
    for r in &rows {
        assert!((r[2] - r[0].cos().abs()).abs() < 1e-9, "{r:?}");
        assert!(r[1].abs() <= r[2] + 1e-11);
    }
    // zeros at pi/2 and 3pi/2, revivals at pi and 2pi
    for (i, v) in [(100, 0.0), (200, 1.0), (300, 0.0), (400, 1.0)] {
        assert!((rows[i][2] - v).abs() < 1e-9, "row {i}: {:?}", rows[i]);
    }

    let cfg = write(&dir, "e.cfg", ONE_HZ);
    let o = mzclock(&[
        "sweep",
        "--config",
        s(&cfg),
        "--variable",
        "delta_T",
        "--from",
        "0 s",
        "--to",
        &to,
        "--n",
        "401",
    ]);
    let (_, rows) = csv_rows(&stdout(&o));
    for r in &rows {
        assert!((r[2] - earth_envelope(r[0])).abs() < 1e-11, "{r:?}");
    }
}

#[test]
fn phi_sweep_swings_by_twice_the_visibility() {
    let dir = TempDir::new().unwrap();
    let cfg = write(
        &dir,
        "a.cfg",
        &ONE_HZ.replace("delta_T = 1.5707963267948966 s", "delta_T = 0.7 s"),
    );
    let o = mzclock(&[
        "sweep",
        "--config",
        s(&cfg),
        "--variable",
        "phi",
        "--from",
        "0",
        "--to",
        &(2.0 * PI).to_string(),
        "--n",
        "20001",
        "--verify",
    ]);
    assert!(o.status.success());
    let (header, rows) = csv_rows(&stdout(&o));
    assert_eq!(header[0], "phi [rad]");
    assert_eq!(header[4], "oracle_visibility [1]");
    let v = rows[0][2];
    assert!((v - 0.7f64.cos()).abs() < 1e-9);
    let max = rows.iter().map(|r| r[1]).fold(f64::MIN, f64::max);
    let min = rows.iter().map(|r| r[1]).fold(f64::MAX, f64::min);
    assert!(((max - min) - 2.0 * v).abs() < 1e-7, "{max} {min} {v}");
    for r in &rows {
        assert!((r[2] - v).abs() < 1e-12);
        assert!((r[4] - r[2]).abs() < 1e-8);
    }
}

#[test]
fn sweep_output_is_ordered_and_deterministic() {
    let dir = TempDir::new().unwrap();
    let cfg = write(&dir, "a.cfg", ONE_HZ);
    let args = |out: &Path| {
        let args: Vec<String> = [
            "sweep",
            "--config",
            s(&cfg),
            "--variable",
            "delta_h",
            "--from",
            "0.1 m",
            "--to",
            "2 m",
            "--n",
            "20000",
            "--output",
            s(out),
        ]
        .iter()
        .map(|a| a.to_string())
        .collect();
        args
    };
    let (a, b) = (dir.path().join("a.csv"), dir.path().join("b.csv"));
    for p in [&a, &b] {
        let o = Command::new(env!("CARGO_BIN_EXE_mzclock"))
            .args(args(p))
            .output()
            .unwrap();
        assert!(o.status.success());
        assert!(o.stdout.is_empty());
    }
    let text = std::fs::read_to_string(&a).unwrap();
    assert_eq!(text, std::fs::read_to_string(&b).unwrap());
    let (_, rows) = csv_rows(&text);
    assert!(rows.windows(2).all(|w| w[0][0] < w[1][0]));
    assert!(!dir.path().join("a.partial").exists());
}

#[test]
fn sweep_directive_from_config() {
    let dir = TempDir::new().unwrap();
    let text = format!("{ONE_HZ}\nsweep_variable = omega\nsweep_from = 1e16 rad/s\nsweep_to = 2e16 rad/s\nsweep_points = 3");
    let cfg = write(&dir, "a.cfg", &text);
    let o = mzclock(&["sweep", "--config", s(&cfg)]);
    assert!(o.status.success());
    let (header, rows) = csv_rows(&stdout(&o));
    assert_eq!(header[0], "omega [rad/s]");
    assert_eq!(rows.len(), 3);
    // an override of the count keeps the configured range
    let o = mzclock(&["sweep", "--config", s(&cfg), "--n", "5"]);
    let (_, rows) = csv_rows(&stdout(&o));
    assert_eq!(rows.len(), 5);
    assert_eq!(rows[4][0], 2e16);
}

#[test]
fn csv_is_locale_independent() {
    let dir = TempDir::new().unwrap();
    let cfg = write(&dir, "a.cfg", ONE_HZ);
    let o = Command::new(env!("CARGO_BIN_EXE_mzclock"))
        .args(["simulate", "--config", s(&cfg), "--format", "csv"])
        .env("LC_ALL", "de_DE.UTF-8")
        .env("LC_NUMERIC", "de_DE.UTF-8")
        .output()
        .unwrap();
    assert!(o.status.success());
    let text = stdout(&o);
    let mut lines = text.lines();
    let header = lines.next().unwrap();
    assert!(header.starts_with(
        "p_plus [1],p_minus [1],visibility [1],distinguishability [1],delta_phi [rad]"
    ));
    let row = lines.next().unwrap();
    assert_eq!(header.split(',').count(), row.split(',').count());
    for cell in row.split(',').take(8) {
        assert!(cell.contains('.') && cell.parse::<f64>().is_ok(), "{cell}");
    }
}

#[test]
fn json_round_trip_is_bit_identical() {
    let dir = TempDir::new().unwrap();
    let text = ONE_HZ
        .replace(
            "delta_T = 1.5707963267948966 s",
            "delta_T = 0.123456789012345678 s",
        )
        .replace("clock_state = balanced", "clock_populations = [0.3, 0.7]")
        + "phase_shift = 0.1 rad\nrise_time = 3 ms\nhorizontal_speed = 0.25 m/s\n";
    let cfg = write(&dir, "a.cfg", &text);
    let first = mzclock(&["simulate", "--config", s(&cfg), "--format", "json"]);
    assert!(first.status.success());
    let json = write(&dir, "a.json", &stdout(&first));
    let second = mzclock(&["simulate", "--config", s(&json), "--format", "json"]);
    assert!(second.status.success());
    assert_eq!(stdout(&first), stdout(&second));

    let a = RunConfig::load(&cfg).unwrap();
    let b = RunConfig::load(&json).unwrap();
    assert_eq!(a, b);
    let ra = interfere(&a.interferometer().unwrap()).unwrap();
    let rb = interfere(&b.interferometer().unwrap()).unwrap();
    assert_eq!(ra.p_plus.to_bits(), rb.p_plus.to_bits());
    assert_eq!(ra.visibility.to_bits(), rb.visibility.to_bits());
    assert_eq!(ra.delta_phi.to_bits(), rb.delta_phi.to_bits());
    assert_eq!(ra.delta_tau.to_bits(), rb.delta_tau.to_bits());
}

#[test]
fn plan_matches_catalog() {
    let o = mzclock(&["plan", "atoms"]);
    assert!(o.status.success());
    let out = stdout(&o);
    assert!((field(&out, "required_dhdt") - 28.2352266690).abs() < 1e-9);
    assert!(out.contains("published_order_of_magnitude = 1e1 m*s"));
    for key in ["achieved_dhdt", "ratio", "visibility_deficit"] {
        field(&out, key);
    }

    let out = stdout(&mzclock(&["plan", "neutrons"]));
    assert!((field(&out, "required_dhdt") / 2.82352266690e6 - 1.0).abs() < 1e-11);

    let out = stdout(&mzclock(&["plan", "--omega", "1e12"]));
    assert!((field(&out, "required_dhdt") / 2.82352266690e4 - 1.0).abs() < 1e-11);
    assert!(out.contains("1e4 m*s"));

    let o = mzclock(&["plan", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["results"].as_array().unwrap().len(), 4);
}

#[test]
fn plan_unknown_system_exits_4() {
    let o = mzclock(&["plan", "photons"]);
    assert_eq!(o.status.code(), Some(4));
    assert!(o.stdout.is_empty());
    let err = String::from_utf8_lossy(&o.stderr);
    for name in ["atoms", "electrons", "molecules", "neutrons"] {
        assert!(err.contains(name), "{err}");
    }
}

#[test]
fn plan_catalog_override() {
    let dir = TempDir::new().unwrap();
    let cat = write(
        &dir,
        "c.txt",
        "[ions]\nclock_mechanism = optical\nomega = 1e16 rad/s\nachieved_dhdt = 1e-6 m*s\n",
    );
    let out = stdout(&mzclock(&["plan", "ions", "--catalog", s(&cat)]));
    assert!((field(&out, "required_dhdt") / 2.82352266690 - 1.0).abs() < 1e-11);
    let o = mzclock(&["plan", "ions"]);
    assert_eq!(o.status.code(), Some(4));
}

#[test]
fn classify_verdicts() {
    let out = stdout(&mzclock(&["classify", "0.5", "0.5", "1e-3", "1e-16"]));
    assert!(out.contains("not a quantum d.o.f. or very broad uncertainty"));

    let out = stdout(&mzclock(&[
        "classify",
        "0.2",
        "0.5",
        "1e-3",
        "1.1127e-16 s",
    ]));
    assert!(out.contains("verdict = dof-with-uncertainty"));
    let bound = field(&out, "sigma_tau_lower_bound");
    let expect = mzclock::sigma_tau_bound(1.1127e-16, 1e-3).unwrap();
    assert!((bound / expect - 1.0).abs() < 1e-11);

    let out = stdout(&mzclock(&["classify", "0.9", "0.5", "1e-3", "0"]));
    assert!(out.contains("verdict = complementarity-violation"));

    let out = stdout(&mzclock(&["classify", "0", "0.5", "1e-3"]));
    assert!(out.contains("verdict = sharp-proper-time-dof-disproved"));

    let o = mzclock(&["classify", "1.5", "0.5", "1e-3"]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn bounds_report() {
    let dir = TempDir::new().unwrap();
    let cfg = write(&dir, "a.cfg", ONE_HZ);
    let o = mzclock(&["bounds", "--config", s(&cfg), "--alpha", "0.5,1,2,4"]);
    assert!(o.status.success());
    let out = stdout(&o);
    let rate = field(&out, "rate");
    for key in [
        "bound_alpha_0.5",
        "bound_alpha_1",
        "bound_alpha_2",
        "bound_alpha_4",
        "tightest_bound",
    ] {
        assert!(rate <= field(&out, key) * (1.0 + 1e-12), "{key}");
    }
    assert!(out.contains("orthogonalization = finite"));

    let cfg = write(&dir, "e.cfg", &ONE_HZ.replace("balanced", "eigenstate 1"));
    let out = stdout(&mzclock(&["bounds", "--config", s(&cfg)]));
    assert!(out.contains("orthogonalization = never"));
    assert_eq!(field(&out, "rate"), 0.0);
}
