//! Run configuration: a flat `key = value unit` file, or a JSON object of
//! `key: "value unit"` strings.
//!
//! ```text
//! # desk-scale balanced clock
//! mass = 1e-33 kg
//! clock_omega = 1.797510357473635e16 rad/s
//! clock_state = balanced
//! delta_h = 1 m
//! delta_T = 1.5707963267948966 s
//! g = 10 m/s^2
//! ```

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use mzclock::{
    ClockSpec, ClockState, DensityMatrix, FieldConfig, InterferometerConfig, Ket,
    PhysicalConstants, RectangularLoop,
};

use num_complex::Complex;

use crate::error::CliError;
use crate::units::{format_list, format_quantity, parse_list, parse_quantity, Dimension};

/// Smallest and largest sample counts a sweep accepts.
pub const SWEEP_POINTS: (usize, usize) = (2, 10_000_000);

#[derive(Clone, Debug, PartialEq)]
pub enum ClockDef {
    /// Level energies (J), ascending.
    Energies(Vec<f64>),
    /// Two levels `0` and `hbar * omega`.
    Omega(f64),
}

#[derive(Clone, Debug, PartialEq)]
pub enum StateDef {
    Balanced,
    Eigenstate(usize),
    MaximallyMixed,
    /// Real amplitudes with optional phases (rad); normalized on use.
    Amplitudes {
        moduli: Vec<f64>,
        phases: Option<Vec<f64>>,
    },
    /// Diagonal mixed state.
    Populations(Vec<f64>),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SweepVariable {
    DeltaT,
    DeltaH,
    Phi,
    Omega,
}

impl SweepVariable {
    pub fn name(self) -> &'static str {
        match self {
            SweepVariable::DeltaT => "delta_T",
            SweepVariable::DeltaH => "delta_h",
            SweepVariable::Phi => "phi",
            SweepVariable::Omega => "omega",
        }
    }

    pub fn dimension(self) -> Dimension {
        match self {
            SweepVariable::DeltaT => Dimension::Time,
            SweepVariable::DeltaH => Dimension::Length,
            SweepVariable::Phi => Dimension::Angle,
            SweepVariable::Omega => Dimension::AngularFrequency,
        }
    }
}

impl FromStr for SweepVariable {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        match s.trim() {
            "delta_T" => Ok(SweepVariable::DeltaT),
            "delta_h" => Ok(SweepVariable::DeltaH),
            "phi" | "phase_shift" => Ok(SweepVariable::Phi),
            "omega" | "clock_omega" => Ok(SweepVariable::Omega),
            other => Err(CliError::Parse(format!(
                "unknown sweep variable `{other}`; expected delta_T, delta_h, phi or omega"
            ))),
        }
    }
}

impl fmt::Display for SweepVariable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SweepDirective {
    pub variable: SweepVariable,
    pub from: f64,
    pub to: f64,
    pub points: usize,
}

impl SweepDirective {
    pub fn new(
        variable: SweepVariable,
        from: f64,
        to: f64,
        points: usize,
    ) -> Result<Self, CliError> {
        if !(from.is_finite() && to.is_finite()) {
            return Err(CliError::Parse("sweep range must be finite".into()));
        }
        if !(SWEEP_POINTS.0..=SWEEP_POINTS.1).contains(&points) {
            return Err(CliError::Parse(format!(
                "sweep count {points} outside [{}, {}]",
                SWEEP_POINTS.0, SWEEP_POINTS.1
            )));
        }
        Ok(SweepDirective {
            variable,
            from,
            to,
            points,
        })
    }

    /// Evenly spaced sample `i`; the last one is exactly `to`.
    pub fn value(&self, i: usize) -> f64 {
        if i + 1 == self.points {
            return self.to;
        }
        self.from + (self.to - self.from) * (i as f64 / (self.points - 1) as f64)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub mass: f64,
    pub clock: ClockDef,
    pub state: StateDef,
    pub delta_h: f64,
    pub delta_t: f64,
    pub phase_shift: f64,
    pub rise_time: f64,
    pub horizontal_speed: f64,
    pub source_mass: f64,
    pub radius: f64,
    /// Replaces `GM/R^2` when set.
    pub g: Option<f64>,
    pub c: f64,
    pub hbar: f64,
    pub big_g: f64,
    pub sweep: Option<SweepDirective>,
}

const KEYS: &[&str] = &[
    "mass",
    "clock_energies",
    "clock_omega",
    "clock_state",
    "clock_amplitudes",
    "clock_phases",
    "clock_populations",
    "delta_h",
    "delta_T",
    "phase_shift",
    "rise_time",
    "horizontal_speed",
    "source_mass",
    "radius",
    "g",
    "c",
    "hbar",
    "G",
    "sweep_variable",
    "sweep_from",
    "sweep_to",
    "sweep_points",
];

struct Entries(BTreeMap<String, String>);

impl Entries {
    fn insert(&mut self, key: &str, value: &str) -> Result<(), CliError> {
        if !KEYS.contains(&key) {
            return Err(CliError::Parse(format!("unknown key `{key}`")));
        }
        if self
            .0
            .insert(key.to_string(), value.trim().to_string())
            .is_some()
        {
            return Err(CliError::Parse(format!("duplicate key `{key}`")));
        }
        Ok(())
    }

    fn get(&self, key: &str) -> Option<&str> {
        self.0.get(key).map(String::as_str)
    }

    fn quantity(&self, key: &str, dim: Dimension) -> Result<Option<f64>, CliError> {
        self.get(key)
            .map(|v| parse_quantity(v, dim, key))
            .transpose()
    }

    fn required(&self, key: &str, dim: Dimension) -> Result<f64, CliError> {
        self.quantity(key, dim)?
            .ok_or_else(|| CliError::Parse(format!("missing required key `{key}`")))
    }

    fn list(&self, key: &str, dim: Dimension) -> Result<Option<Vec<f64>>, CliError> {
        self.get(key).map(|v| parse_list(v, dim, key)).transpose()
    }
}

fn exactly_one(present: &[(&str, bool)]) -> Result<usize, CliError> {
    let set: Vec<usize> = present
        .iter()
        .enumerate()
        .filter(|(_, p)| p.1)
        .map(|(i, _)| i)
        .collect();
    let names: Vec<&str> = present.iter().map(|p| p.0).collect();
    match set.as_slice() {
        [i] => Ok(*i),
        [] => Err(CliError::Parse(format!(
            "one of {} is required",
            names.join(", ")
        ))),
        _ => Err(CliError::Parse(format!(
            "only one of {} may be given",
            names.join(", ")
        ))),
    }
}

impl RunConfig {
    /// Reads a file; JSON when the first non-blank character is `{`.
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Parse(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self, CliError> {
        if text.trim_start().starts_with('{') {
            Self::from_json(text)
        } else {
            Self::from_text(text)
        }
    }

    pub fn from_text(text: &str) -> Result<Self, CliError> {
        let mut entries = Entries(BTreeMap::new());
        for (n, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                CliError::Parse(format!("line {}: expected `key = value unit`", n + 1))
            })?;
            entries
                .insert(key.trim(), value)
                .map_err(|e| CliError::Parse(format!("line {}: {}", n + 1, strip_prefix(&e))))?;
        }
        Self::from_entries(&entries)
    }

    /// Accepts a flat object, or an object whose `config` member is one
    /// (the shape `simulate --format json` emits).
    pub fn from_json(text: &str) -> Result<Self, CliError> {
        let value: serde_json::Value = serde_json::from_str(text)
            .map_err(|e| CliError::Parse(format!("invalid JSON: {e}")))?;
        let object = value
            .get("config")
            .unwrap_or(&value)
            .as_object()
            .ok_or_else(|| CliError::Parse("JSON config must be an object".into()))?;
        let mut entries = Entries(BTreeMap::new());
        for (key, v) in object {
            let s = v.as_str().ok_or_else(|| {
                CliError::Parse(format!("{key}: expected a \"value unit\" string"))
            })?;
            entries.insert(key, s)?;
        }
        Self::from_entries(&entries)
    }

    fn from_entries(e: &Entries) -> Result<Self, CliError> {
        use Dimension::*;
        let clock = match exactly_one(&[
            ("clock_energies", e.get("clock_energies").is_some()),
            ("clock_omega", e.get("clock_omega").is_some()),
        ])? {
            0 => ClockDef::Energies(e.list("clock_energies", Energy)?.unwrap_or_default()),
            _ => ClockDef::Omega(e.required("clock_omega", AngularFrequency)?),
        };
        let state = match exactly_one(&[
            ("clock_state", e.get("clock_state").is_some()),
            ("clock_amplitudes", e.get("clock_amplitudes").is_some()),
            ("clock_populations", e.get("clock_populations").is_some()),
        ])? {
            0 => parse_state_keyword(e.get("clock_state").unwrap_or_default())?,
            1 => StateDef::Amplitudes {
                moduli: e
                    .list("clock_amplitudes", Dimensionless)?
                    .unwrap_or_default(),
                phases: e.list("clock_phases", Angle)?,
            },
            _ => StateDef::Populations(
                e.list("clock_populations", Dimensionless)?
                    .unwrap_or_default(),
            ),
        };
        if e.get("clock_phases").is_some() && !matches!(state, StateDef::Amplitudes { .. }) {
            return Err(CliError::Parse(
                "clock_phases requires clock_amplitudes".into(),
            ));
        }
        let codata = PhysicalConstants::<f64>::codata();
        let earth = FieldConfig::<f64>::earth();
        let sweep = match e.get("sweep_variable") {
            None => {
                if ["sweep_from", "sweep_to", "sweep_points"]
                    .iter()
                    .any(|k| e.get(k).is_some())
                {
                    return Err(CliError::Parse(
                        "sweep_from/sweep_to/sweep_points need sweep_variable".into(),
                    ));
                }
                None
            }
            Some(name) => {
                let variable: SweepVariable = name.parse()?;
                let dim = variable.dimension();
                let points = e
                    .get("sweep_points")
                    .ok_or_else(|| CliError::Parse("missing required key `sweep_points`".into()))?;
                let points: usize = points.trim().parse().map_err(|_| {
                    CliError::Parse(format!("sweep_points: `{points}` is not a count"))
                })?;
                Some(SweepDirective::new(
                    variable,
                    e.required("sweep_from", dim)?,
                    e.required("sweep_to", dim)?,
                    points,
                )?)
            }
        };
        Ok(RunConfig {
            mass: e.required("mass", Mass)?,
            clock,
            state,
            delta_h: e.required("delta_h", Length)?,
            delta_t: e.required("delta_T", Time)?,
            phase_shift: e.quantity("phase_shift", Angle)?.unwrap_or(0.0),
            rise_time: e.quantity("rise_time", Time)?.unwrap_or(0.0),
            horizontal_speed: e.quantity("horizontal_speed", Speed)?.unwrap_or(0.0),
            source_mass: e
                .quantity("source_mass", Mass)?
                .unwrap_or(earth.source_mass),
            radius: e.quantity("radius", Length)?.unwrap_or(earth.radius),
            g: e.quantity("g", Acceleration)?,
            c: e.quantity("c", Speed)?.unwrap_or(codata.c),
            hbar: e.quantity("hbar", Action)?.unwrap_or(codata.hbar),
            big_g: e
                .quantity("G", GravitationalConstant)?
                .unwrap_or(codata.big_g),
            sweep,
        })
    }

    /// Every setting as `key -> "value unit"`, full precision, so that
    /// re-parsing reproduces the configuration bit for bit.
    pub fn to_entries(&self) -> BTreeMap<String, String> {
        use Dimension::*;
        let mut m = BTreeMap::new();
        let mut put = |k: &str, v: String| {
            m.insert(k.to_string(), v);
        };
        put("mass", format_quantity(self.mass, Mass));
        match &self.clock {
            ClockDef::Energies(e) => put("clock_energies", format_list(e, Energy)),
            ClockDef::Omega(w) => put("clock_omega", format_quantity(*w, AngularFrequency)),
        }
        match &self.state {
            StateDef::Balanced => put("clock_state", "balanced".into()),
            StateDef::Eigenstate(n) => put("clock_state", format!("eigenstate {n}")),
            StateDef::MaximallyMixed => put("clock_state", "maximally_mixed".into()),
            StateDef::Amplitudes { moduli, phases } => {
                put("clock_amplitudes", format_list(moduli, Dimensionless));
                if let Some(p) = phases {
                    put("clock_phases", format_list(p, Angle));
                }
            }
            StateDef::Populations(p) => put("clock_populations", format_list(p, Dimensionless)),
        }
        put("delta_h", format_quantity(self.delta_h, Length));
        put("delta_T", format_quantity(self.delta_t, Time));
        put("phase_shift", format_quantity(self.phase_shift, Angle));
        put("rise_time", format_quantity(self.rise_time, Time));
        put(
            "horizontal_speed",
            format_quantity(self.horizontal_speed, Speed),
        );
        put("source_mass", format_quantity(self.source_mass, Mass));
        put("radius", format_quantity(self.radius, Length));
        if let Some(g) = self.g {
            put("g", format_quantity(g, Acceleration));
        }
        put("c", format_quantity(self.c, Speed));
        put("hbar", format_quantity(self.hbar, Action));
        put("G", format_quantity(self.big_g, GravitationalConstant));
        if let Some(s) = &self.sweep {
            let dim = s.variable.dimension();
            put("sweep_variable", s.variable.name().into());
            put("sweep_from", format_quantity(s.from, dim));
            put("sweep_to", format_quantity(s.to, dim));
            put("sweep_points", s.points.to_string());
        }
        m
    }

    pub fn to_text(&self) -> String {
        self.to_entries()
            .into_iter()
            .map(|(k, v)| format!("{k} = {v}\n"))
            .collect()
    }

    /// Copy with one sweep variable set.
    pub fn with(&self, variable: SweepVariable, value: f64) -> Self {
        let mut c = self.clone();
        match variable {
            SweepVariable::DeltaT => c.delta_t = value,
            SweepVariable::DeltaH => c.delta_h = value,
            SweepVariable::Phi => c.phase_shift = value,
            SweepVariable::Omega => c.clock = ClockDef::Omega(value),
        }
        c
    }

    pub fn constants(&self) -> Result<PhysicalConstants<f64>, CliError> {
        Ok(PhysicalConstants::new(self.c, self.hbar, self.big_g)?)
    }

    pub fn field(&self) -> Result<FieldConfig<f64>, CliError> {
        let f = FieldConfig::new(self.source_mass, self.radius)?;
        Ok(match self.g {
            Some(g) => f.with_g(g)?,
            None => f,
        })
    }

    pub fn clock_spec(&self, k: &PhysicalConstants<f64>) -> Result<ClockSpec<f64>, CliError> {
        Ok(match &self.clock {
            ClockDef::Energies(e) => ClockSpec::new(e.clone())?,
            ClockDef::Omega(w) => ClockSpec::from_angular_frequency(*w, k)?,
        })
    }

    pub fn clock_state(&self, dim: usize) -> Result<ClockState<f64>, CliError> {
        Ok(match &self.state {
            StateDef::Balanced => Ket::balanced(dim)?.into(),
            StateDef::Eigenstate(n) => Ket::basis(dim, *n)?.into(),
            StateDef::MaximallyMixed => DensityMatrix::maximally_mixed(dim)?.into(),
            StateDef::Amplitudes { moduli, phases } => {
                let phases = phases.clone().unwrap_or_else(|| vec![0.0; moduli.len()]);
                if phases.len() != moduli.len() {
                    return Err(CliError::Parse(format!(
                        "clock_phases has {} entries, clock_amplitudes {}",
                        phases.len(),
                        moduli.len()
                    )));
                }
                let amps = moduli
                    .iter()
                    .zip(&phases)
                    .map(|(&r, &p)| Complex::from_polar(r, p))
                    .collect();
                let ket = Ket::normalized(amps)?;
                if ket.dim() != dim {
                    return Err(mzclock::Error::DimensionMismatch {
                        expected: dim,
                        found: ket.dim(),
                    }
                    .into());
                }
                ket.into()
            }
            StateDef::Populations(p) => {
                let rho = DensityMatrix::diagonal(p)?;
                if rho.dim() != dim {
                    return Err(mzclock::Error::DimensionMismatch {
                        expected: dim,
                        found: rho.dim(),
                    }
                    .into());
                }
                rho.into()
            }
        })
    }

    pub fn interferometer(&self) -> Result<InterferometerConfig<f64>, CliError> {
        let k = self.constants()?;
        let spec = self.clock_spec(&k)?;
        let state = self.clock_state(spec.dim())?;
        let geometry = RectangularLoop {
            delta_h: self.delta_h,
            delta_t: self.delta_t,
            rise_time: self.rise_time,
            horizontal_speed: self.horizontal_speed,
        };
        Ok(
            InterferometerConfig::rectangular(self.mass, spec, state, &geometry, self.field()?, k)?
                .with_phase_shift(self.phase_shift),
        )
    }
}

fn parse_state_keyword(s: &str) -> Result<StateDef, CliError> {
    let mut words = s.split_whitespace();
    match (words.next(), words.next(), words.next()) {
        (Some("balanced"), None, _) => Ok(StateDef::Balanced),
        (Some("maximally_mixed"), None, _) => Ok(StateDef::MaximallyMixed),
        (Some("eigenstate"), Some(n), None) => n
            .parse()
            .map(StateDef::Eigenstate)
            .map_err(|_| CliError::Parse(format!("clock_state: bad level index `{n}`"))),
        _ => Err(CliError::Parse(format!(
            "clock_state: expected balanced, eigenstate <n> or maximally_mixed, found `{s}`"
        ))),
    }
}

fn strip_prefix(e: &CliError) -> String {
    match e {
        CliError::Parse(m) => m.clone(),
        other => other.to_string(),
    }
}
