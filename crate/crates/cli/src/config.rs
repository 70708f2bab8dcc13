//! Flat `key = value unit` configuration files.
//!
//! Every key is declared once in [`KEYS`] with its dimension, constraint,
//! default and the subcommands that read it. Values are converted to SI on
//! parse and echoed back in a form that parses to the same bits.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;

use anyhow::{anyhow, bail, Context, Result};
use chipnoise_core::constants::HBAR;
use chipnoise_core::gpe::CondensateConfig;
use chipnoise_core::rates::RateOptions;
use chipnoise_core::spectra::Occupation;
use chipnoise_core::units::{format_si, parse_quantity, Dimension};
use chipnoise_core::{AtomSpecies, CorrelationModel, ElectronVelocityDist, HalfInt, Material, SideGuideConfig, WireGeometry};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Command {
    Spectrum,
    Rates,
    Decohere,
    Gpe,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Spectrum => "spectrum",
            Command::Rates => "rates",
            Command::Decohere => "decohere",
            Command::Gpe => "gpe",
        }
    }

    pub fn from_name(name: &str) -> Result<Self> {
        Ok(match name {
            "spectrum" => Command::Spectrum,
            "rates" => Command::Rates,
            "decohere" => Command::Decohere,
            "gpe" => Command::Gpe,
            other => bail!("unknown subcommand '{other}'"),
        })
    }
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Constraint {
    Positive,
    NonNegative,
    Any,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kind {
    Quantity(Dimension, Constraint),
    /// Comma-separated, strictly increasing list of quantities.
    List(Dimension, Constraint),
    Integer,
    Choice(&'static [&'static str]),
}

impl Kind {
    pub fn is_numeric(self) -> bool {
        matches!(self, Kind::Quantity(..))
    }
}

#[derive(Debug, Clone, Copy)]
pub struct KeySpec {
    pub name: &'static str,
    pub kind: Kind,
    pub default: Option<&'static str>,
    pub commands: &'static [Command],
    /// Mandatory for these subcommands.
    pub required: &'static [Command],
}

use Command::{Decohere as D, Gpe as G, Rates as R, Spectrum as S};
use Constraint::{Any, NonNegative as NonNeg, Positive as Pos};
use Dimension as Dim;

const GUIDE: &[Command] = &[S, R];

const fn key(name: &'static str, kind: Kind, default: Option<&'static str>, commands: &'static [Command], required: &'static [Command]) -> KeySpec {
    KeySpec { name, kind, default, commands, required }
}

pub const KEYS: &[KeySpec] = &[
    key("current", Kind::Quantity(Dim::Current, Pos), None, GUIDE, GUIDE),
    key("bias_field", Kind::Quantity(Dim::MagneticField, Pos), None, GUIDE, GUIDE),
    key("longitudinal_field", Kind::Quantity(Dim::MagneticField, NonNeg), Some("1 G"), GUIDE, &[]),
    key("larmor_frequency", Kind::Quantity(Dim::AngularFrequency, NonNeg), None, GUIDE, &[]),
    key("trap_frequency", Kind::Quantity(Dim::AngularFrequency, Pos), None, GUIDE, &[R]),
    key("height", Kind::Quantity(Dim::Length, Pos), None, GUIDE, &[]),
    key("atom.mass", Kind::Quantity(Dim::Mass, Pos), None, GUIDE, GUIDE),
    key("atom.mu_parallel", Kind::Quantity(Dim::MagneticMoment, Pos), None, GUIDE, GUIDE),
    key("atom.delta_mu_parallel", Kind::Quantity(Dim::MagneticMoment, NonNeg), None, GUIDE, &[]),
    key("atom.spin_f", Kind::Quantity(Dim::Dimensionless, Pos), Some("0.5"), GUIDE, &[]),
    key("atom.g_factor", Kind::Quantity(Dim::Dimensionless, Any), Some("2"), GUIDE, &[]),
    key("material.resistivity", Kind::Quantity(Dim::Resistivity, Pos), None, GUIDE, GUIDE),
    key("material.temperature", Kind::Quantity(Dim::Temperature, Pos), None, GUIDE, GUIDE),
    key("wire.radius", Kind::Quantity(Dim::Length, Pos), None, GUIDE, &[]),
    key("noise_ratio", Kind::Quantity(Dim::Dimensionless, NonNeg), Some("1"), GUIDE, &[]),
    key("occupation", Kind::Choice(&["classical", "bose_einstein"]), Some("classical"), GUIDE, &[]),
    key("gravity", Kind::Quantity(Dim::Acceleration, NonNeg), Some("9.81 m/s^2"), &[R], &[]),
    key("frequency", Kind::Quantity(Dim::AngularFrequency, NonNeg), None, &[S], &[]),
    key("spectrum.source", Kind::Choice(&["thermal", "current", "shot"]), Some("thermal"), &[S], &[]),
    key("spectrum.separation", Kind::Quantity(Dim::Length, Any), Some("0 m"), &[S], &[]),
    key("electrons.distribution", Kind::Choice(&["fermi_dirac", "maxwell", "delta"]), Some("fermi_dirac"), &[S], &[]),
    key("electrons.velocity", Kind::Quantity(Dim::Velocity, Pos), Some("1.57e6 m/s"), &[S], &[]),
    key("electrons.drift", Kind::Quantity(Dim::Velocity, Any), Some("0 m/s"), &[S], &[]),
    key("electrons.temperature", Kind::Quantity(Dim::Temperature, NonNeg), None, &[S], &[]),
    key("decohere.correlation", Kind::Choice(&["lorentzian", "nearfield", "homogeneous"]), Some("lorentzian"), &[D], &[]),
    key("decohere.gamma", Kind::Quantity(Dim::Dimensionless, NonNeg), Some("1"), &[D], &[]),
    key("decohere.l_c", Kind::Quantity(Dim::Dimensionless, Pos), Some("1"), &[D], &[]),
    key("decohere.height", Kind::Quantity(Dim::Dimensionless, Pos), Some("1"), &[D], &[]),
    key("decohere.times", Kind::List(Dim::Dimensionless, NonNeg), Some("0.5, 1, 2"), &[D], &[]),
    key("decohere.n_z", Kind::Integer, Some("32"), &[D], &[]),
    key("decohere.n_p", Kind::Integer, Some("256"), &[D], &[]),
    key("decohere.length", Kind::Quantity(Dim::Dimensionless, Pos), Some("40"), &[D], &[]),
    key("decohere.dt", Kind::Quantity(Dim::Dimensionless, Pos), Some("0.01"), &[D], &[]),
    key("decohere.sigma_z", Kind::Quantity(Dim::Dimensionless, Pos), Some("2"), &[D], &[]),
    key("decohere.s_max", Kind::Quantity(Dim::Dimensionless, Pos), Some("10"), &[D], &[]),
    key("gpe.g", Kind::Quantity(Dim::Dimensionless, NonNeg), Some("0"), &[G], &[]),
    key("gpe.gamma", Kind::Quantity(Dim::Dimensionless, NonNeg), Some("10"), &[G], &[]),
    key("gpe.l_c", Kind::Quantity(Dim::Dimensionless, Pos), Some("0.31622776601683794"), &[G], &[]),
    key("gpe.n_realizations", Kind::Integer, Some("500"), &[G], &[]),
    key("gpe.n_z", Kind::Integer, Some("512"), &[G], &[]),
    key("gpe.length", Kind::Quantity(Dim::Dimensionless, Pos), Some("40"), &[G], &[]),
    key("gpe.dt", Kind::Quantity(Dim::Dimensionless, Pos), Some("5e-4"), &[G], &[]),
    key("gpe.times", Kind::List(Dim::Dimensionless, NonNeg), Some("0.1, 0.3, 0.5"), &[G], &[]),
    key("gpe.s_max", Kind::Quantity(Dim::Dimensionless, Pos), Some("3"), &[G], &[]),
    key("seed", Kind::Integer, Some("1"), &[G], &[]),
];

pub fn key_spec(name: &str) -> Option<&'static KeySpec> {
    KEYS.iter().find(|k| k.name == name)
}

/// Where a raw value came from, for error messages.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Origin {
    Line(usize),
    Override,
    Manifest,
}

impl fmt::Display for Origin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Origin::Line(n) => write!(f, "line {n}"),
            Origin::Override => f.write_str("--set"),
            Origin::Manifest => f.write_str("manifest"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RawEntry {
    pub value: String,
    pub origin: Origin,
}

/// Unvalidated key/value pairs with their origins.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RawConfig {
    pub entries: BTreeMap<String, RawEntry>,
}

impl RawConfig {
    pub fn parse(text: &str) -> Result<Self> {
        let mut raw = RawConfig::default();
        let mut problems = Vec::new();
        for (index, line) in text.lines().enumerate() {
            let origin = Origin::Line(index + 1);
            let content = line.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            if let Err(e) = raw.insert_assignment(content, origin, false) {
                problems.push(e.to_string());
            }
        }
        if problems.is_empty() {
            Ok(raw)
        } else {
            bail!("{}", problems.join("\n"))
        }
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("cannot read config {}", path.display()))?;
        RawConfig::parse(&text).with_context(|| format!("invalid config {}", path.display()))
    }

    /// Applies a `key=value` override; later overrides win.
    pub fn set(&mut self, assignment: &str) -> Result<()> {
        self.insert_assignment(assignment, Origin::Override, true)
    }

    pub fn insert(&mut self, key: &str, value: &str, origin: Origin) -> Result<()> {
        self.insert_assignment(&format!("{key}={value}"), origin, true)
    }

    fn insert_assignment(&mut self, assignment: &str, origin: Origin, replace: bool) -> Result<()> {
        let (key, value) = assignment.split_once('=').ok_or_else(|| anyhow!("{origin}: expected 'key = value', got '{assignment}'"))?;
        let key = key.trim();
        let value = value.trim();
        if key_spec(key).is_none() {
            bail!("{origin}: unknown key '{key}'");
        }
        if value.is_empty() {
            bail!("{origin}: key '{key}' has no value");
        }
        if !replace {
            if let Some(previous) = self.entries.get(key) {
                bail!("{origin}: key '{key}' already set at {}", previous.origin);
            }
        }
        self.entries.insert(key.to_string(), RawEntry { value: value.to_string(), origin });
        Ok(())
    }
}

/// Inserts a space between a number and a glued unit, so `100G` reads as
/// `100 G`.
pub fn split_glued_unit(text: &str) -> String {
    let text = text.trim();
    if text.contains(char::is_whitespace) || text.parse::<f64>().is_ok() {
        return text.to_string();
    }
    for cut in (1..text.len()).rev() {
        if !text.is_char_boundary(cut) {
            continue;
        }
        let (num, unit) = text.split_at(cut);
        if num.parse::<f64>().is_ok() && !unit.starts_with(|c: char| c.is_ascii_digit() || c == '.' || c == '-' || c == '+') {
            return format!("{num} {unit}");
        }
    }
    text.to_string()
}

fn check_constraint(name: &str, value: f64, constraint: Constraint) -> Result<()> {
    let ok = value.is_finite()
        && match constraint {
            Constraint::Positive => value > 0.0,
            Constraint::NonNegative => value >= 0.0,
            Constraint::Any => true,
        };
    if ok {
        Ok(())
    } else {
        let need = match constraint {
            Constraint::Positive => "positive",
            Constraint::NonNegative => "non-negative",
            Constraint::Any => "finite",
        };
        bail!("domain error: '{name}' must be {need}, got {value:e}")
    }
}

pub fn parse_value(spec: &KeySpec, text: &str) -> Result<Value> {
    match spec.kind {
        Kind::Quantity(dim, constraint) => {
            let v = parse_quantity(&split_glued_unit(text), dim).map_err(|e| anyhow!("{e}"))?;
            check_constraint(spec.name, v, constraint)?;
            Ok(Value::Number(v))
        }
        Kind::List(dim, constraint) => {
            let values = text
                .split(',')
                .map(|item| {
                    let v = parse_quantity(&split_glued_unit(item), dim).map_err(|e| anyhow!("{e}"))?;
                    check_constraint(spec.name, v, constraint)?;
                    Ok(v)
                })
                .collect::<Result<Vec<f64>>>()?;
            if values.windows(2).any(|w| w[1] <= w[0]) {
                bail!("'{}' must be strictly increasing", spec.name);
            }
            Ok(Value::List(values))
        }
        Kind::Integer => Ok(Value::Integer(text.trim().parse().map_err(|_| anyhow!("'{}' expects a non-negative integer, got '{text}'", spec.name))?)),
        Kind::Choice(options) => {
            if options.contains(&text.trim()) {
                Ok(Value::Text(text.trim().to_string()))
            } else {
                bail!("'{}' must be one of {}, got '{text}'", spec.name, options.join(", "))
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    Number(f64),
    List(Vec<f64>),
    Integer(u64),
    Text(String),
}

impl Value {
    /// Text that parses back to the identical value.
    pub fn echo(&self, kind: Kind) -> String {
        match (self, kind) {
            (Value::Number(v), Kind::Quantity(dim, _)) => format_si(*v, dim),
            (Value::List(vs), Kind::List(dim, _)) => vs.iter().map(|v| format_si(*v, dim)).collect::<Vec<_>>().join(", "),
            (Value::Integer(n), _) => n.to_string(),
            (Value::Text(t), _) => t.clone(),
            (Value::Number(v), _) => format!("{v:e}"),
            (Value::List(vs), _) => vs.iter().map(|v| format!("{v:e}")).collect::<Vec<_>>().join(", "),
        }
    }
}

/// Validated SI values for one subcommand, with defaults filled in.
#[derive(Debug, Clone, PartialEq)]
pub struct Settings {
    pub command: Command,
    values: BTreeMap<&'static str, Value>,
}

impl Settings {
    pub fn from_raw(raw: &RawConfig, command: Command) -> Result<Self> {
        let missing: Vec<&str> = KEYS
            .iter()
            .filter(|k| k.required.contains(&command) && !raw.entries.contains_key(k.name))
            .map(|k| k.name)
            .collect();
        let mut problems = Vec::new();
        if !missing.is_empty() {
            problems.push(format!("missing required keys for '{command}': {}", missing.join(", ")));
        }
        let mut values = BTreeMap::new();
        for spec in KEYS {
            let parsed = match raw.entries.get(spec.name) {
                Some(entry) => parse_value(spec, &entry.value).map_err(|e| anyhow!("{}: {e}", entry.origin)),
                None => match spec.default {
                    Some(d) if spec.commands.contains(&command) => parse_value(spec, d),
                    _ => continue,
                },
            };
            match parsed {
                Ok(v) => {
                    values.insert(spec.name, v);
                }
                Err(e) => problems.push(e.to_string()),
            }
        }
        if !problems.is_empty() {
            bail!("{}", problems.join("\n"));
        }
        let settings = Settings { command, values };
        settings.prevalidate()?;
        Ok(settings)
    }

    /// Builds every module configuration once so precondition failures
    /// surface before any work starts.
    fn prevalidate(&self) -> Result<()> {
        match self.command {
            Command::Spectrum => {
                self.side_guide()?;
                self.electrons()?;
            }
            Command::Rates => {
                self.side_guide()?.validate().map_err(|e| anyhow!("{e}"))?;
            }
            Command::Decohere => {
                self.decohere()?;
            }
            Command::Gpe => {
                self.condensate(None)?.validate().map_err(|e| anyhow!("{e}"))?;
            }
        }
        Ok(())
    }

    pub fn get(&self, key: &str) -> Option<&Value> {
        self.values.get(key)
    }

    pub fn number(&self, key: &str) -> Result<f64> {
        match self.values.get(key) {
            Some(Value::Number(v)) => Ok(*v),
            Some(_) => bail!("'{key}' is not a number"),
            None => bail!("'{key}' is not set"),
        }
    }

    pub fn opt_number(&self, key: &str) -> Option<f64> {
        match self.values.get(key) {
            Some(Value::Number(v)) => Some(*v),
            _ => None,
        }
    }

    pub fn integer(&self, key: &str) -> Result<u64> {
        match self.values.get(key) {
            Some(Value::Integer(n)) => Ok(*n),
            _ => bail!("'{key}' is not set"),
        }
    }

    pub fn list(&self, key: &str) -> Result<&[f64]> {
        match self.values.get(key) {
            Some(Value::List(v)) => Ok(v),
            _ => bail!("'{key}' is not set"),
        }
    }

    pub fn text(&self, key: &str) -> Result<&str> {
        match self.values.get(key) {
            Some(Value::Text(t)) => Ok(t),
            _ => bail!("'{key}' is not set"),
        }
    }

    /// Replaces a numeric value, re-checking its constraint.
    pub fn with_number(&self, key: &str, value: f64) -> Result<Self> {
        let spec = key_spec(key).ok_or_else(|| anyhow!("unknown key '{key}'"))?;
        let Kind::Quantity(_, constraint) = spec.kind else {
            bail!("'{key}' is not a numeric key");
        };
        check_constraint(key, value, constraint)?;
        let mut out = self.clone();
        out.values.insert(spec.name, Value::Number(value));
        Ok(out)
    }

    /// Keys read by this subcommand with their echoed values, in key order.
    pub fn echo(&self) -> BTreeMap<String, String> {
        KEYS.iter()
            .filter(|k| k.commands.contains(&self.command))
            .filter_map(|k| self.values.get(k.name).map(|v| (k.name.to_string(), v.echo(k.kind))))
            .collect()
    }

    pub fn side_guide(&self) -> Result<SideGuideConfig> {
        let mu = self.number("atom.mu_parallel")?;
        let spin = HalfInt::new(self.number("atom.spin_f")?).map_err(|e| anyhow!("atom.spin_f: {e}"))?;
        let mut atom = AtomSpecies::new(self.number("atom.mass")?, mu, spin, self.number("atom.g_factor")?).map_err(|e| anyhow!("{e}"))?;
        if let Some(d) = self.opt_number("atom.delta_mu_parallel") {
            atom.delta_mu_parallel = d;
        }
        let material = Material::new("config", self.number("material.resistivity")?, self.number("material.temperature")?).map_err(|e| anyhow!("{e}"))?;
        let wire = match self.opt_number("wire.radius") {
            Some(a) => WireGeometry::thin_wire(a).map_err(|e| anyhow!("wire.radius: {e}"))?,
            None => WireGeometry::half_space(),
        };
        let longitudinal_field = match self.opt_number("larmor_frequency") {
            Some(w) => HBAR * w / mu,
            None => self.number("longitudinal_field")?,
        };
        let config = SideGuideConfig {
            current: self.number("current")?,
            bias_field: self.number("bias_field")?,
            longitudinal_field,
            trap_frequency: self.opt_number("trap_frequency").unwrap_or(f64::NAN),
            atom,
            material,
            wire,
        };
        let config = match self.opt_number("height") {
            Some(h) => config.with_height(h).map_err(|e| anyhow!("height: {e}"))?,
            None => config,
        };
        config.height().map_err(|e| anyhow!("{e}"))?;
        Ok(config)
    }

    pub fn rate_options(&self) -> Result<RateOptions> {
        Ok(RateOptions {
            noise_ratio: self.number("noise_ratio")?,
            occupation: self.occupation()?,
            gravity: self.number("gravity")?,
        })
    }

    pub fn occupation(&self) -> Result<Occupation> {
        Ok(match self.text("occupation")? {
            "bose_einstein" => Occupation::BoseEinstein,
            _ => Occupation::Classical,
        })
    }

    pub fn electrons(&self) -> Result<ElectronVelocityDist> {
        let v = self.number("electrons.velocity")?;
        let drift = self.number("electrons.drift")?;
        let dist = match self.text("electrons.distribution")? {
            "maxwell" => ElectronVelocityDist::maxwell(v, drift),
            "delta" => ElectronVelocityDist::delta(v, drift),
            _ => {
                let t = match self.opt_number("electrons.temperature") {
                    Some(t) => t,
                    None => self.number("material.temperature")?,
                };
                ElectronVelocityDist::fermi_dirac_thermal(v, drift, t)
            }
        };
        dist.map_err(|e| anyhow!("electrons: {e}"))
    }

    pub fn decohere(&self) -> Result<DecohereSettings> {
        let n_z = self.integer("decohere.n_z")? as usize;
        let n_p = self.integer("decohere.n_p")? as usize;
        if n_z < 2 || n_p < 4 {
            bail!("decohere grid needs n_z ≥ 2 and n_p ≥ 4");
        }
        let model = match self.text("decohere.correlation")? {
            "nearfield" => CorrelationModel::nearfield(self.number("decohere.height")?, 1.0),
            "homogeneous" => CorrelationModel::homogeneous(1.0),
            _ => CorrelationModel::lorentzian(self.number("decohere.l_c")?, 1.0),
        }
        .map_err(|e| anyhow!("decohere.correlation: {e}"))?;
        Ok(DecohereSettings {
            model,
            gamma: self.number("decohere.gamma")?,
            times: self.list("decohere.times")?.to_vec(),
            n_z,
            n_p,
            length: self.number("decohere.length")?,
            dt: self.number("decohere.dt")?,
            sigma_z: self.number("decohere.sigma_z")?,
            s_max: self.number("decohere.s_max")?,
        })
    }

    pub fn condensate(&self, threads: Option<usize>) -> Result<CondensateConfig> {
        Ok(CondensateConfig {
            g: self.number("gpe.g")?,
            gamma: self.number("gpe.gamma")?,
            l_c: self.number("gpe.l_c")?,
            n_realizations: self.integer("gpe.n_realizations")? as usize,
            n_z: self.integer("gpe.n_z")? as usize,
            length: self.number("gpe.length")?,
            dt: self.number("gpe.dt")?,
            times: self.list("gpe.times")?.to_vec(),
            seed: self.integer("seed")?,
            s_max: self.number("gpe.s_max")?,
            threads,
        })
    }
}

/// Master-equation run in scaled units (`ħ = M = 1`).
#[derive(Debug, Clone, PartialEq)]
pub struct DecohereSettings {
    pub model: CorrelationModel,
    pub gamma: f64,
    pub times: Vec<f64>,
    pub n_z: usize,
    pub n_p: usize,
    pub length: f64,
    pub dt: f64,
    pub sigma_z: f64,
    pub s_max: f64,
}

#[cfg(test)]
mod tests {
    use super::*;
    use chipnoise_core::constants::{AMU, GAUSS, MICRON, MU_B};

    pub(crate) const BASE: &str = "\
# copper side guide
current = 1 A
bias_field = 100 G
atom.mass = 87 amu
atom.mu_parallel = 1 muB
material.resistivity = 1.7e-8 ohm*m
material.temperature = 300 K
";

    #[test]
    fn units_convert_to_si() {
        let raw = RawConfig::parse(BASE).unwrap();
        let s = Settings::from_raw(&raw, Command::Spectrum).unwrap();
        assert_eq!(s.number("bias_field").unwrap(), 100.0 * GAUSS);
        assert_eq!(s.number("atom.mass").unwrap(), 87.0 * AMU);
        assert_eq!(s.number("atom.mu_parallel").unwrap(), MU_B);
        let h = s.side_guide().unwrap().height().unwrap();
        assert!((h / (20.0 * MICRON) - 1.0).abs() < 1e-9);
    }

    #[test]
    fn glued_units() {
        assert_eq!(split_glued_unit("100G"), "100 G");
        assert_eq!(split_glued_unit("1.5e-3mA"), "1.5e-3 mA");
        assert_eq!(split_glued_unit("2e3"), "2e3");
        assert_eq!(split_glued_unit("1 um"), "1 um");
    }

    #[test]
    fn equivalent_units_give_identical_values() {
        let a = RawConfig::parse(BASE).unwrap();
        let b = RawConfig::parse(&BASE.replace("100 G", "0.01 T").replace("87 amu", &format!("{:e} kg", 87.0 * AMU))).unwrap();
        let sa = Settings::from_raw(&a, Command::Spectrum).unwrap();
        let sb = Settings::from_raw(&b, Command::Spectrum).unwrap();
        assert_eq!(sa.echo(), sb.echo());
    }

    #[test]
    fn empty_file_lists_all_missing_keys() {
        let err = Settings::from_raw(&RawConfig::parse("").unwrap(), Command::Spectrum).unwrap_err().to_string();
        for key in ["current", "bias_field", "atom.mass", "atom.mu_parallel", "material.resistivity", "material.temperature"] {
            assert!(err.contains(key), "{err}");
        }
    }

    #[test]
    fn negative_bias_names_the_key() {
        let raw = RawConfig::parse(&BASE.replace("100 G", "-3 G")).unwrap();
        let err = Settings::from_raw(&raw, Command::Spectrum).unwrap_err().to_string();
        assert!(err.contains("domain error") && err.contains("bias_field"), "{err}");
    }

    #[test]
    fn unknown_keys_report_line_numbers() {
        let err = RawConfig::parse("current = 1 A\n\n bias = 3 G\nfoo=1").unwrap_err().to_string();
        assert!(err.contains("line 3: unknown key 'bias'"), "{err}");
        assert!(err.contains("line 4: unknown key 'foo'"), "{err}");
    }

    #[test]
    fn duplicates_and_bad_units_are_rejected() {
        assert!(RawConfig::parse("current = 1 A\ncurrent = 2 A").is_err());
        let raw = RawConfig::parse(&BASE.replace("1 A", "1 furlong")).unwrap();
        let err = Settings::from_raw(&raw, Command::Spectrum).unwrap_err().to_string();
        assert!(err.contains("line 2"), "{err}");
    }

    #[test]
    fn overrides_win_and_echo_round_trips() {
        let mut raw = RawConfig::parse(BASE).unwrap();
        raw.set("height=5 um").unwrap();
        raw.set("trap_frequency = 100 kHz").unwrap();
        assert!(raw.set("nope=1").is_err());
        let s = Settings::from_raw(&raw, Command::Rates).unwrap();
        let mut replay = RawConfig::default();
        for (k, v) in s.echo() {
            replay.insert(&k, &v, Origin::Manifest).unwrap();
        }
        let again = Settings::from_raw(&replay, Command::Rates).unwrap();
        assert_eq!(again, s);
        let h = again.side_guide().unwrap().height().unwrap();
        assert!((h - 5.0 * MICRON).abs() < 1e-18);
    }

    #[test]
    fn rates_need_a_trap_frequency() {
        let err = Settings::from_raw(&RawConfig::parse(BASE).unwrap(), Command::Rates).unwrap_err().to_string();
        assert!(err.contains("trap_frequency"), "{err}");
    }

    #[test]
    fn gpe_needs_no_guide_keys() {
        let s = Settings::from_raw(&RawConfig::default(), Command::Gpe).unwrap();
        let c = s.condensate(None).unwrap();
        assert_eq!(c, CondensateConfig { seed: 1, ..CondensateConfig::default() });
    }
}
