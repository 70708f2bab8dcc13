use serde::Serialize;

use super::estimates::{
    current_flip_estimate, displacement_heating_estimate, nearfield_flip_estimate, nearfield_heating_estimate,
    parametric_heating_estimate,
};
use super::heating::{
    dephasing_rate, displacement_heating, displacement_spectrum_from_current, heating_rate_01, parametric_heating,
    temperature_rise, trap_frequency_spectrum_from_current,
};
use super::spin::{spin_flip_rate, SpinTransition};
use crate::constants::{G_GRAV, MU_B};
use crate::error::{Error, Result};
use crate::model::{sag_suppression_ratio, SideGuideConfig, WireKind};
use crate::spectra::{
    current_noise_field_spectrum, current_noise_tensor, halfspace_spectrum_with, nearfield_lorentzian_length,
    thin_wire_spectrum, NoiseTensor, Occupation,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Channel {
    NearfieldFlip,
    CurrentFlip,
    NearfieldDephasing,
    CurrentDephasing,
    NearfieldHeating,
    DisplacementHeating,
    ParametricHeating,
}

impl Channel {
    pub fn tag(self) -> &'static str {
        match self {
            Channel::NearfieldFlip => "nearfield_flip",
            Channel::CurrentFlip => "current_flip",
            Channel::NearfieldDephasing => "nearfield_dephasing",
            Channel::CurrentDephasing => "current_dephasing",
            Channel::NearfieldHeating => "nearfield_heating_01",
            Channel::DisplacementHeating => "displacement_heating_01",
            Channel::ParametricHeating => "parametric_heating_02",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    /// Golden-rule contraction of a computed spectrum.
    FirstPrinciples,
    /// Closed-form scaling estimate.
    Estimate,
}

/// One labelled rate in 1/s.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RateEntry {
    pub tag: String,
    pub channel: Channel,
    pub method: Method,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RateOptions {
    /// `S_I / (e I)` of the wire current.
    pub noise_ratio: f64,
    pub occupation: Occupation,
    /// m/s², for the sag suppression of current-noise dephasing.
    pub gravity: f64,
}

impl Default for RateOptions {
    fn default() -> Self {
        RateOptions { noise_ratio: 1.0, occupation: Occupation::Classical, gravity: G_GRAV }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RateReport {
    /// Stretched-state spin-flip rate, near field plus current noise, 1/s.
    pub flip_rate: f64,
    /// 1/s
    pub dephasing_rate: f64,
    /// 1/s
    pub heating_01: f64,
    /// 1/s
    pub heating_02: f64,
    /// K/s
    pub temperature_rise: f64,
    /// `2 / flip_rate`, s.
    pub loss_timescale: f64,
    pub dominant_channel: Channel,
    pub height: f64,
    pub larmor_frequency: f64,
    pub ground_state_size: f64,
    pub correlation_length: f64,
    pub entries: Vec<RateEntry>,
}

/// Evaluates every channel for one side-guide configuration.
pub fn rate_report(config: &SideGuideConfig, options: &RateOptions) -> Result<RateReport> {
    config.validate()?;
    let atom = &config.atom;
    let material = &config.material;
    let h = config.height()?;
    let omega_l = config.larmor_frequency();
    let trap = config.trap_frequency;
    let a = config.ground_state_size()?;
    let mu_ratio = atom.mu_parallel / MU_B;

    let thermal = |omega: f64| -> Result<NoiseTensor> {
        match config.wire.kind {
            WireKind::HalfSpace => halfspace_spectrum_with(material, h, omega, options.occupation),
            WireKind::ThinWire => thin_wire_spectrum(material, config.wire.radius, h, omega),
        }
    };

    // μ = g μ_scale F, so that the stretched state carries μ∥
    let transition = SpinTransition::stretched_loss(atom.spin_f, atom.g_factor)?;
    let gf = atom.g_factor * atom.spin_f.value();
    if gf == 0.0 {
        return Err(Error::domain("g factor must be non-zero for a trapped state"));
    }
    let mu_scale = atom.mu_parallel / gf;

    let nf_flip = spin_flip_rate(&thermal(omega_l)?, &transition, mu_scale);
    let cur_flip = spin_flip_rate(&current_noise_tensor(config.current, h, options.noise_ratio, omega_l)?, &transition, mu_scale);

    let nf_dephasing = dephasing_rate(atom.delta_mu_parallel, thermal(0.0)?.parallel())?;
    let sag = if options.gravity == 0.0 {
        0.0
    } else {
        sag_suppression_ratio(atom.mass, options.gravity, atom.mu_parallel, config.gradient()?)?
    };
    let s_current = current_noise_field_spectrum(config.current, h, options.noise_ratio)?;
    let cur_dephasing = dephasing_rate(atom.delta_mu_parallel, s_current * sag * sag)?;

    let l_c = nearfield_lorentzian_length(h);
    let nf_heating = heating_rate_01(thermal(trap)?.parallel(), a, l_c, atom.mu_parallel)?;
    let disp_heating = displacement_heating(atom.mass, trap, displacement_spectrum_from_current(h, config.current, options.noise_ratio)?)?;
    let para_heating = parametric_heating(trap_frequency_spectrum_from_current(trap, config.current, options.noise_ratio)?)?;

    let computed = [
        (Channel::NearfieldFlip, nf_flip),
        (Channel::CurrentFlip, cur_flip),
        (Channel::NearfieldDephasing, nf_dephasing),
        (Channel::CurrentDephasing, cur_dephasing),
        (Channel::NearfieldHeating, nf_heating),
        (Channel::DisplacementHeating, disp_heating),
        (Channel::ParametricHeating, para_heating),
    ];
    let dominant_channel = computed.iter().max_by(|x, y| x.1.total_cmp(&y.1)).expect("non-empty").0;

    let estimates = [
        (Channel::NearfieldFlip, nearfield_flip_estimate(mu_ratio, material.temperature, material.resistivity, h, Some(omega_l))?),
        (Channel::CurrentFlip, current_flip_estimate(config.current, h, options.noise_ratio, mu_ratio)?),
        (
            Channel::NearfieldHeating,
            nearfield_heating_estimate(mu_ratio, material.temperature, atom.mass, trap, material.resistivity, h)?,
        ),
        (
            Channel::DisplacementHeating,
            displacement_heating_estimate(atom.mass, trap, config.current, config.bias_field, options.noise_ratio)?,
        ),
        (Channel::ParametricHeating, parametric_heating_estimate(trap, config.current, options.noise_ratio)?),
    ];

    let mut entries: Vec<RateEntry> = computed
        .iter()
        .map(|&(channel, value)| RateEntry { tag: channel.tag().to_string(), channel, method: Method::FirstPrinciples, value })
        .collect();
    entries.extend(estimates.iter().map(|&(channel, value)| RateEntry {
        tag: format!("{}_estimate", channel.tag().trim_end_matches("_01").trim_end_matches("_02")),
        channel,
        method: Method::Estimate,
        value,
    }));

    let flip_rate = nf_flip + cur_flip;
    let heating_01 = nf_heating + disp_heating;
    Ok(RateReport {
        flip_rate,
        dephasing_rate: nf_dephasing + cur_dephasing,
        heating_01,
        heating_02: para_heating,
        temperature_rise: temperature_rise(trap, heating_01)?,
        loss_timescale: if flip_rate > 0.0 { 2.0 / flip_rate } else { f64::INFINITY },
        dominant_channel,
        height: h,
        larmor_frequency: omega_l,
        ground_state_size: a,
        correlation_length: l_c,
        entries,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constants::{AMU, GAUSS, HBAR};
    use crate::model::{current_for_height, AtomSpecies, Material, WireGeometry};
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    fn config() -> SideGuideConfig {
        let b_b = 10.0 * GAUSS;
        let h = 1e-6;
        // |B0| chosen so that ω_L = 2π·1 MHz for μ = μ_B
        let b0 = 2.0 * PI * 1e6 * HBAR / MU_B;
        SideGuideConfig {
            current: current_for_height(h, b_b).unwrap(),
            bias_field: b_b,
            longitudinal_field: b0,
            trap_frequency: 2.0 * PI * 1e5,
            atom: AtomSpecies::spin_half(AMU),
            material: Material::copper(300.0),
            wire: WireGeometry::half_space(),
        }
    }

    #[test]
    fn report_is_consistent() {
        let report = rate_report(&config(), &RateOptions::default()).unwrap();
        let nf = report.entries.iter().find(|e| e.tag == "nearfield_flip").unwrap().value;
        assert!(nf > 50.0 && nf < 200.0, "{nf}");
        assert_relative_eq!(report.height, 1e-6, max_relative = 1e-12);
        assert_relative_eq!(report.loss_timescale, 2.0 / report.flip_rate);
        assert!(report.entries.iter().all(|e| e.value >= 0.0));
        assert_eq!(report.entries.len(), 12);
        for tag in [
            "nearfield_flip_estimate",
            "current_flip_estimate",
            "nearfield_heating_estimate",
            "displacement_heating_estimate",
            "parametric_heating_estimate",
        ] {
            assert!(report.entries.iter().any(|e| e.tag == tag), "{tag}");
        }
        // sag suppresses current dephasing far below the near-field value
        let cur = report.entries.iter().find(|e| e.tag == "current_dephasing").unwrap().value;
        let nfd = report.entries.iter().find(|e| e.tag == "nearfield_dephasing").unwrap().value;
        assert!(cur < 1e-3 * nfd);
        assert!(report.flip_rate >= nf);
    }

    #[test]
    fn thin_wire_report() {
        let mut c = config();
        c.wire = WireGeometry::thin_wire(0.1e-6).unwrap();
        let report = rate_report(&c, &RateOptions { gravity: 0.0, ..RateOptions::default() }).unwrap();
        assert!(report.flip_rate > 0.0);
        assert_eq!(report.entries.iter().find(|e| e.tag == "current_dephasing").unwrap().value, 0.0);
    }
}
