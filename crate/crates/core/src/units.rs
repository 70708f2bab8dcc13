//! Boundary unit handling.
//!
//! Values enter the program as text such as `100 G`, `1.5 um` or `87 amu` and
//! are converted once into SI. Nothing past this module sees non-SI numbers.

use std::f64::consts::PI;
use std::fmt;

use crate::constants::{AMU, GAUSS, MU_B};
use crate::error::{Error, Result};

/// Physical dimension of a configuration quantity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Dimension {
    Current,
    MagneticField,
    Length,
    Mass,
    MagneticMoment,
    Resistivity,
    Temperature,
    /// Angular frequency. Plain `Hz`-family units are cyclic and get a 2π.
    AngularFrequency,
    Velocity,
    Angle,
    Time,
    Acceleration,
    Dimensionless,
}

impl Dimension {
    /// Canonical SI unit label written into echoes and manifests.
    pub fn si_label(self) -> &'static str {
        match self {
            Dimension::Current => "A",
            Dimension::MagneticField => "T",
            Dimension::Length => "m",
            Dimension::Mass => "kg",
            Dimension::MagneticMoment => "J/T",
            Dimension::Resistivity => "ohm*m",
            Dimension::Temperature => "K",
            Dimension::AngularFrequency => "rad/s",
            Dimension::Velocity => "m/s",
            Dimension::Angle => "rad",
            Dimension::Time => "s",
            Dimension::Acceleration => "m/s^2",
            Dimension::Dimensionless => "",
        }
    }

    /// Multiplier taking a value in `unit` to SI, or `None` if the unit does
    /// not belong to this dimension.
    pub fn factor(self, unit: &str) -> Option<f64> {
        let u = unit.trim();
        let f = match self {
            Dimension::Current => match u {
                "A" => 1.0,
                "mA" => 1e-3,
                "uA" | "μA" | "µA" => 1e-6,
                _ => return None,
            },
            Dimension::MagneticField => match u {
                "T" => 1.0,
                "mT" => 1e-3,
                "uT" | "μT" | "µT" => 1e-6,
                "G" => GAUSS,
                "mG" => 1e-3 * GAUSS,
                _ => return None,
            },
            Dimension::Length => match u {
                "m" => 1.0,
                "cm" => 1e-2,
                "mm" => 1e-3,
                "um" | "μm" | "µm" => 1e-6,
                "nm" => 1e-9,
                _ => return None,
            },
            Dimension::Mass => match u {
                "kg" => 1.0,
                "g" => 1e-3,
                "amu" | "u" | "Da" => AMU,
                _ => return None,
            },
            Dimension::MagneticMoment => match u {
                "J/T" => 1.0,
                "muB" | "μB" | "µB" | "mu_B" => MU_B,
                _ => return None,
            },
            Dimension::Resistivity => match u {
                "ohm*m" | "ohm.m" | "Ω·m" | "Ωm" | "Ohm*m" => 1.0,
                "ohm*cm" | "ohm.cm" | "Ω·cm" | "Ωcm" | "Ohm*cm" => 1e-2,
                _ => return None,
            },
            Dimension::Temperature => match u {
                "K" => 1.0,
                "mK" => 1e-3,
                _ => return None,
            },
            Dimension::AngularFrequency => match u {
                "rad/s" => 1.0,
                "Hz" => 2.0 * PI,
                "kHz" => 2.0 * PI * 1e3,
                "MHz" => 2.0 * PI * 1e6,
                "GHz" => 2.0 * PI * 1e9,
                _ => return None,
            },
            Dimension::Velocity => match u {
                "m/s" => 1.0,
                "km/s" => 1e3,
                "mm/s" => 1e-3,
                _ => return None,
            },
            Dimension::Angle => match u {
                "rad" => 1.0,
                "deg" => PI / 180.0,
                _ => return None,
            },
            Dimension::Time => match u {
                "s" => 1.0,
                "ms" => 1e-3,
                "us" | "μs" | "µs" => 1e-6,
                _ => return None,
            },
            Dimension::Acceleration => match u {
                "m/s^2" | "m/s2" | "m/s²" => 1.0,
                _ => return None,
            },
            Dimension::Dimensionless => match u {
                "" | "1" => 1.0,
                _ => return None,
            },
        };
        Some(f)
    }
}

impl fmt::Display for Dimension {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

/// Parses `"<number> [unit]"` into an SI value. A missing unit is accepted
/// only when the dimension is SI-labelled dimensionless or when the unit is
/// the SI one.
pub fn parse_quantity(text: &str, dim: Dimension) -> Result<f64> {
    let text = text.trim();
    let (num, unit) = match text.find(char::is_whitespace) {
        Some(i) => (&text[..i], text[i..].trim()),
        None => (text, ""),
    };
    let value: f64 = num
        .parse()
        .map_err(|_| Error::config(format!("cannot parse number from '{text}'")))?;
    let unit = if unit.is_empty() { dim.si_label() } else { unit };
    let factor = dim
        .factor(unit)
        .ok_or_else(|| Error::config(format!("unit '{unit}' is not a valid {dim} unit")))?;
    Ok(value * factor)
}

/// Writes an SI value so that [`parse_quantity`] reproduces it bit for bit.
pub fn format_si(value: f64, dim: Dimension) -> String {
    let label = dim.si_label();
    if label.is_empty() {
        format!("{value:e}")
    } else {
        format!("{value:e} {label}")
    }
}
