//! Planning catalog: the built-in systems, optionally extended or
//! overridden from a sectioned text file.
//!
//! ```text
//! [atoms]
//! clock_mechanism = hyperfine states
//! omega = 1e15 rad/s
//! achieved_dhdt = 1e-5 m*s
//! published_required_dhdt = 10 m*s
//! ```

use std::path::Path;

use mzclock::{builtin_catalog, SystemCatalogEntry};

use crate::error::CliError;
use crate::units::{parse_quantity, Dimension};

#[derive(Default)]
struct Section {
    name: String,
    line: usize,
    mechanism: Option<String>,
    omega: Option<f64>,
    achieved: Option<f64>,
    published: Option<f64>,
}

impl Section {
    fn finish(self) -> Result<SystemCatalogEntry<f64>, CliError> {
        let missing = |k: &str| {
            CliError::Parse(format!(
                "[{}] (line {}): missing `{k}`",
                self.name, self.line
            ))
        };
        let omega = self.omega.ok_or_else(|| missing("omega"))?;
        let achieved = self.achieved.ok_or_else(|| missing("achieved_dhdt"))?;
        let mut entry = SystemCatalogEntry::new(
            self.name.clone(),
            self.mechanism.clone().unwrap_or_default(),
            omega,
            achieved,
        )
        .map_err(|e| CliError::Parse(format!("[{}]: {e}", self.name)))?;
        entry.published_required_dhdt = self.published;
        Ok(entry)
    }
}

pub fn parse_catalog(text: &str) -> Result<Vec<SystemCatalogEntry<f64>>, CliError> {
    let mut out: Vec<SystemCatalogEntry<f64>> = Vec::new();
    let mut current: Option<Section> = None;
    for (n, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let err = |m: String| CliError::Parse(format!("catalog line {}: {m}", n + 1));
        if let Some(name) = line.strip_prefix('[').and_then(|l| l.strip_suffix(']')) {
            if let Some(done) = current.take() {
                out.push(done.finish()?);
            }
            let name = name.trim();
            if name.is_empty() || out.iter().any(|e| e.name == name) {
                return Err(err(format!("empty or repeated system name `{name}`")));
            }
            current = Some(Section {
                name: name.to_string(),
                line: n + 1,
                ..Section::default()
            });
            continue;
        }
        let section = current
            .as_mut()
            .ok_or_else(|| err("entry before the first [system] header".into()))?;
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| err("expected `key = value unit`".into()))?;
        let (key, value) = (key.trim(), value.trim());
        let slot = match key {
            "clock_mechanism" => {
                section.mechanism = Some(value.to_string());
                continue;
            }
            "omega" => (&mut section.omega, Dimension::AngularFrequency),
            "achieved_dhdt" => (&mut section.achieved, Dimension::LengthTime),
            "published_required_dhdt" => (&mut section.published, Dimension::LengthTime),
            other => return Err(err(format!("unknown key `{other}`"))),
        };
        if slot.0.is_some() {
            return Err(err(format!("duplicate key `{key}`")));
        }
        *slot.0 = Some(parse_quantity(value, slot.1, key)?);
    }
    if let Some(done) = current.take() {
        out.push(done.finish()?);
    }
    Ok(out)
}

/// Built-in systems, with entries from `path` replacing same-named ones
/// and new names appended.
pub fn load_catalog(path: Option<&Path>) -> Result<Vec<SystemCatalogEntry<f64>>, CliError> {
    let mut catalog = builtin_catalog::<f64>();
    if let Some(path) = path {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Parse(format!("cannot read {}: {e}", path.display())))?;
        for entry in parse_catalog(&text)? {
            match catalog.iter_mut().find(|e| e.name == entry.name) {
                Some(slot) => *slot = entry,
                None => catalog.push(entry),
            }
        }
    }
    Ok(catalog)
}
