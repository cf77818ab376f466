use std::io::Write;

use mzclock::{
    brute_force_oracle, classify_outcome, feasibility_report, interfere, orthogonalization_bound,
    orthogonalization_time, required_dhdt, tightest_orthogonalization_bound, InterferenceResult,
    OrthogonalizationTime, SystemCatalogEntry,
};
use rayon::prelude::*;
use serde_json::{Map, Value};

use crate::config::{RunConfig, SweepDirective};
use crate::error::CliError;
use crate::output::{header_cell, render, sig12, Format, Record};
use crate::units::Dimension;

/// Rows computed in parallel before each ordered write.
const SWEEP_CHUNK: usize = 8192;

fn result_record(r: &InterferenceResult<f64>) -> Record {
    use Dimension::*;
    Record::default()
        .num("p_plus", r.p_plus, Dimensionless)
        .num("p_minus", r.p_minus, Dimensionless)
        .num("visibility", r.visibility, Dimensionless)
        .num("distinguishability", r.distinguishability, Dimensionless)
        .num("delta_phi", r.delta_phi, Angle)
        .num("alpha", r.alpha, Angle)
        .num("delta_tau", r.delta_tau, Time)
        .num("mean_energy_correction", r.mean_energy_correction, Energy)
        .flag(
            "energy_correction_asymmetric",
            r.energy_correction_asymmetric,
        )
}

pub fn simulate(cfg: &RunConfig, format: Format) -> Result<String, CliError> {
    let r = interfere(&cfg.interferometer()?)?;
    let mut extra = Map::new();
    extra.insert(
        "config".into(),
        Value::Object(
            cfg.to_entries()
                .into_iter()
                .map(|(k, v)| (k, Value::String(v)))
                .collect(),
        ),
    );
    render(&[result_record(&r)], format, extra)
}

struct SweepRow {
    x: f64,
    contrast: f64,
    visibility: f64,
    phase: f64,
    oracle_visibility: Option<f64>,
}

fn sweep_row(
    cfg: &RunConfig,
    dir: &SweepDirective,
    i: usize,
    verify: bool,
) -> Result<SweepRow, CliError> {
    let x = dir.value(i);
    let ifc = cfg.with(dir.variable, x).interferometer()?;
    let r = interfere(&ifc)?;
    let oracle_visibility = if verify {
        Some(brute_force_oracle(&ifc)?.visibility)
    } else {
        None
    };
    Ok(SweepRow {
        x,
        contrast: r.contrast(),
        visibility: r.visibility,
        phase: r.fringe_phase() + ifc.phase_shift,
        oracle_visibility,
    })
}

/// Evaluates the sweep and streams it to `out` in sample order. Both
/// endpoints are checked before anything is written.
pub fn sweep(
    cfg: &RunConfig,
    dir: &SweepDirective,
    verify: bool,
    format: Format,
    out: &mut dyn Write,
) -> Result<(), CliError> {
    sweep_row(cfg, dir, 0, verify)?;
    sweep_row(cfg, dir, dir.points - 1, verify)?;

    let var_unit = dir.variable.dimension().si_unit();
    let mut columns = vec![
        (dir.variable.name(), var_unit),
        ("p_plus_minus_p_minus", "1"),
        ("visibility", "1"),
        ("phase", "rad"),
    ];
    if verify {
        columns.push(("oracle_visibility", "1"));
    }
    let json = format == Format::Json;
    if json {
        let names: Vec<Value> = columns.iter().map(|c| Value::String(c.0.into())).collect();
        let units: Vec<Value> = columns.iter().map(|c| Value::String(c.1.into())).collect();
        write!(
            out,
            "{{\n  \"columns\": {},\n  \"units\": {},\n  \"rows\": [",
            Value::Array(names),
            Value::Array(units)
        )?;
    } else {
        let header: Vec<String> = columns.iter().map(|c| header_cell(c.0, c.1)).collect();
        writeln!(out, "{}", header.join(","))?;
    }
    let mut first = true;
    for start in (0..dir.points).step_by(SWEEP_CHUNK) {
        let end = (start + SWEEP_CHUNK).min(dir.points);
        let rows: Vec<SweepRow> = (start..end)
            .into_par_iter()
            .map(|i| sweep_row(cfg, dir, i, verify))
            .collect::<Result<_, _>>()?;
        for row in rows {
            let mut cells = vec![
                sig12(row.x),
                sig12(row.contrast),
                sig12(row.visibility),
                sig12(row.phase),
            ];
            if let Some(v) = row.oracle_visibility {
                cells.push(sig12(v));
            }
            if json {
                let sep = if first { "\n    " } else { ",\n    " };
                write!(
                    out,
                    "{sep}[{}]",
                    cells
                        .iter()
                        .map(|c| json_number(c))
                        .collect::<Vec<_>>()
                        .join(", ")
                )?;
            } else {
                writeln!(out, "{}", cells.join(","))?;
            }
            first = false;
        }
    }
    if json {
        writeln!(out, "\n  ]\n}}")?;
    }
    Ok(())
}

fn json_number(cell: &str) -> String {
    let v: f64 = cell.parse().expect("formatted float");
    serde_json::Number::from_f64(v).map_or("null".into(), |n| n.to_string())
}

pub enum PlanTarget<'a> {
    System(&'a str),
    Omega { omega: f64, achieved: Option<f64> },
    All,
}

fn plan_record(entry: &SystemCatalogEntry<f64>, g: f64) -> Result<Record, CliError> {
    use Dimension::*;
    let k = mzclock::PhysicalConstants::codata();
    let r = feasibility_report(entry, g, &k)?;
    let mut rec = Record::default()
        .text("system", &entry.name)
        .text("clock_mechanism", &entry.clock_mechanism)
        .num("omega", r.omega, AngularFrequency)
        .num("g", g, Acceleration)
        .num("required_dhdt", r.required_dhdt, LengthTime);
    rec = match r.published_required_dhdt {
        Some(p) => rec.text("published_order_of_magnitude", format!("{p:e} m*s")),
        None => rec.text("published_order_of_magnitude", "-"),
    };
    Ok(rec
        .num("achieved_dhdt", r.achieved_dhdt, LengthTime)
        .num("ratio", r.ratio, Dimensionless)
        .num("delta_tau", r.delta_tau, Time)
        .num("t_perp", r.t_perp, Time)
        .num(
            "predicted_visibility",
            r.predicted_visibility,
            Dimensionless,
        )
        .num("visibility_deficit", r.visibility_deficit, Dimensionless))
}

pub fn plan(
    catalog: &[SystemCatalogEntry<f64>],
    target: PlanTarget<'_>,
    g: f64,
    format: Format,
) -> Result<String, CliError> {
    let records = match target {
        PlanTarget::All => catalog
            .iter()
            .map(|e| plan_record(e, g))
            .collect::<Result<Vec<_>, _>>()?,
        PlanTarget::System(name) => {
            let entry =
                catalog
                    .iter()
                    .find(|e| e.name == name)
                    .ok_or_else(|| CliError::UnknownSystem {
                        name: name.to_string(),
                        available: catalog.iter().map(|e| e.name.clone()).collect(),
                    })?;
            vec![plan_record(entry, g)?]
        }
        PlanTarget::Omega { omega, achieved } => {
            let k = mzclock::PhysicalConstants::codata();
            let twin = catalog.iter().find(|e| e.omega == omega);
            match achieved {
                Some(a) => {
                    let mut entry = SystemCatalogEntry::new("custom", "", omega, a)?;
                    entry.published_required_dhdt = twin.and_then(|t| t.published_required_dhdt);
                    vec![plan_record(&entry, g)?]
                }
                None => {
                    let required = required_dhdt(omega, g, &k)?;
                    let published = twin
                        .and_then(|t| {
                            t.published_required_dhdt
                                .map(|p| format!("{p:e} m*s ({})", t.name))
                        })
                        .unwrap_or_else(|| "-".into());
                    vec![Record::default()
                        .text("system", "custom")
                        .num("omega", omega, Dimension::AngularFrequency)
                        .num("g", g, Dimension::Acceleration)
                        .num("required_dhdt", required, Dimension::LengthTime)
                        .text("published_order_of_magnitude", published)]
                }
            }
        }
    };
    render(&records, format, Map::new())
}

pub fn classify(
    measured: f64,
    predicted: f64,
    visibility_error: f64,
    delta_tau: f64,
    format: Format,
) -> Result<String, CliError> {
    let c = classify_outcome(measured, predicted, visibility_error, delta_tau)?;
    let verdict = serde_json::to_value(c.verdict)?;
    let mut rec = Record::default()
        .num("measured_visibility", measured, Dimension::Dimensionless)
        .num("predicted_visibility", predicted, Dimension::Dimensionless)
        .num(
            "visibility_error",
            visibility_error,
            Dimension::Dimensionless,
        )
        .text("verdict", verdict.as_str().unwrap_or_default())
        .text("interpretation", c.verdict.describe());
    if let Some(b) = c.sigma_tau_bound {
        rec = rec.num("sigma_tau_lower_bound", b, Dimension::Time);
    }
    render(&[rec], format, Map::new())
}

pub fn bounds(cfg: &RunConfig, alphas: &[f64], format: Format) -> Result<String, CliError> {
    let k = cfg.constants()?;
    let spec = cfg.clock_spec(&k)?;
    let state = cfg.clock_state(spec.dim())?;
    let t = orthogonalization_time(&state, &spec, &k)?;
    let mut rec = match t {
        OrthogonalizationTime::Finite(t) => Record::default()
            .text("orthogonalization", "finite")
            .num("t_perp", t, Dimension::Time),
        OrthogonalizationTime::Never => Record::default().text("orthogonalization", "never"),
        OrthogonalizationTime::NotWithin { window } => Record::default()
            .text("orthogonalization", "not within search window")
            .num("search_window", window, Dimension::Time),
    };
    rec = rec.num("rate", t.rate(), Dimension::Frequency);
    for &a in alphas {
        let b = orthogonalization_bound(&state, &spec, a, &k)?;
        rec = rec.num(&format!("bound_alpha_{a}"), b, Dimension::Frequency);
    }
    let (alpha, best) = tightest_orthogonalization_bound(&state, &spec, alphas, &k)?;
    rec = rec
        .num("tightest_alpha", alpha, Dimension::Dimensionless)
        .num("tightest_bound", best, Dimension::Frequency);
    render(&[rec], format, Map::new())
}
