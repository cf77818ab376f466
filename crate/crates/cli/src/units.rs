//! Quantities with explicit unit suffixes, converted to SI.

use std::fmt;

use crate::error::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Dimension {
    Dimensionless,
    Mass,
    Length,
    Time,
    Speed,
    Acceleration,
    Energy,
    Angle,
    AngularFrequency,
    Frequency,
    Action,
    GravitationalConstant,
    LengthTime,
}

impl Dimension {
    /// SI unit written on output.
    pub fn si_unit(self) -> &'static str {
        match self {
            Dimension::Dimensionless => "1",
            Dimension::Mass => "kg",
            Dimension::Length => "m",
            Dimension::Time => "s",
            Dimension::Speed => "m/s",
            Dimension::Acceleration => "m/s^2",
            Dimension::Energy => "J",
            Dimension::Angle => "rad",
            Dimension::AngularFrequency => "rad/s",
            Dimension::Frequency => "Hz",
            Dimension::Action => "J*s",
            Dimension::GravitationalConstant => "m^3/(kg*s^2)",
            Dimension::LengthTime => "m*s",
        }
    }
}

impl fmt::Display for Dimension {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            Dimension::Dimensionless => "dimensionless",
            Dimension::Mass => "mass",
            Dimension::Length => "length",
            Dimension::Time => "time",
            Dimension::Speed => "speed",
            Dimension::Acceleration => "acceleration",
            Dimension::Energy => "energy",
            Dimension::Angle => "angle",
            Dimension::AngularFrequency => "angular frequency",
            Dimension::Frequency => "frequency",
            Dimension::Action => "action",
            Dimension::GravitationalConstant => "gravitational constant",
            Dimension::LengthTime => "length x time",
        };
        f.write_str(name)
    }
}

const ELECTRON_VOLT: f64 = 1.602_176_634e-19;

fn lookup(unit: &str) -> Option<(Dimension, f64)> {
    use Dimension::*;
    let compact: String = unit.chars().filter(|c| !c.is_whitespace()).collect();
    Some(match compact.as_str() {
        "" | "1" => (Dimensionless, 1.0),
        "kg" => (Mass, 1.0),
        "g" => (Mass, 1e-3),
        "m" => (Length, 1.0),
        "km" => (Length, 1e3),
        "cm" => (Length, 1e-2),
        "mm" => (Length, 1e-3),
        "um" => (Length, 1e-6),
        "nm" => (Length, 1e-9),
        "s" => (Time, 1.0),
        "ms" => (Time, 1e-3),
        "us" => (Time, 1e-6),
        "ns" => (Time, 1e-9),
        "m/s" => (Speed, 1.0),
        "km/s" => (Speed, 1e3),
        "m/s^2" | "m/s2" => (Acceleration, 1.0),
        "J" => (Energy, 1.0),
        "eV" => (Energy, ELECTRON_VOLT),
        "rad" => (Angle, 1.0),
        "mrad" => (Angle, 1e-3),
        "rad/s" | "1/s" => (AngularFrequency, 1.0),
        "Hz" => (Frequency, 1.0),
        "J*s" | "Js" => (Action, 1.0),
        "eV*s" => (Action, ELECTRON_VOLT),
        "m^3/(kg*s^2)" | "m^3/kg/s^2" => (GravitationalConstant, 1.0),
        // "m s" would collapse to milliseconds, so only the explicit product is accepted
        "m*s" => (LengthTime, 1.0),
        _ => return None,
    })
}

/// Parses `"<number> <unit>"` and converts to SI, requiring `expected`.
/// A bare number is accepted only for dimensionless quantities.
pub fn parse_quantity(text: &str, expected: Dimension, key: &str) -> Result<f64, CliError> {
    let text = text.trim();
    let split = text.find(|c: char| c.is_whitespace()).unwrap_or(text.len());
    let (number, unit) = text.split_at(split);
    let value: f64 = number
        .parse()
        .map_err(|_| CliError::Parse(format!("{key}: `{number}` is not a number")))?;
    let unit = unit.trim();
    let (dim, factor) =
        lookup(unit).ok_or_else(|| CliError::Parse(format!("{key}: unknown unit `{unit}`")))?;
    if dim != expected {
        let found = if unit.is_empty() {
            "no unit".to_string()
        } else {
            format!("`{unit}` ({dim})")
        };
        return Err(CliError::Parse(format!(
            "{key}: expected a {expected} in {}, found {found}",
            expected.si_unit()
        )));
    }
    if !value.is_finite() {
        return Err(CliError::Parse(format!("{key}: value must be finite")));
    }
    Ok(value * factor)
}

/// Parses `"[a, b, c] <unit>"`.
pub fn parse_list(text: &str, expected: Dimension, key: &str) -> Result<Vec<f64>, CliError> {
    let text = text.trim();
    let close = text
        .find(']')
        .filter(|_| text.starts_with('['))
        .ok_or_else(|| CliError::Parse(format!("{key}: expected a list like `[a, b] unit`")))?;
    let unit = text[close + 1..].trim();
    let inner = &text[1..close];
    if inner.trim().is_empty() {
        return Err(CliError::Parse(format!("{key}: empty list")));
    }
    inner
        .split(',')
        .map(|item| parse_quantity(&format!("{} {unit}", item.trim()), expected, key))
        .collect()
}

/// SI value as `"<shortest round-trip> <unit>"`.
pub fn format_quantity(value: f64, dim: Dimension) -> String {
    match dim {
        Dimension::Dimensionless => format!("{value:e}"),
        _ => format!("{value:e} {}", dim.si_unit()),
    }
}

pub fn format_list(values: &[f64], dim: Dimension) -> String {
    let items: Vec<String> = values.iter().map(|v| format!("{v:e}")).collect();
    match dim {
        Dimension::Dimensionless => format!("[{}]", items.join(", ")),
        _ => format!("[{}] {}", items.join(", "), dim.si_unit()),
    }
}
