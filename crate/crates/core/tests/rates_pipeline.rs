use approx::assert_relative_eq;
use chipnoise_core::constants::{GAUSS, HBAR, KB, MICRON, MU0, MU_B};
use chipnoise_core::rates::{rate_report, spin_flip_rate, Method, RateOptions, RateReport, SpinTransition};
use chipnoise_core::spectra::halfspace_spectrum;
use chipnoise_core::{AtomSpecies, HalfInt, Material, SideGuideConfig, WireGeometry};

fn copper_guide(height: f64) -> SideGuideConfig {
    SideGuideConfig {
        current: 1.0,
        bias_field: 100.0 * GAUSS,
        longitudinal_field: 0.714 * GAUSS,
        trap_frequency: 2.0 * std::f64::consts::PI * 1e5,
        atom: AtomSpecies::rb87(),
        material: Material::copper(300.0),
        wire: WireGeometry::half_space(),
    }
    .with_height(height)
    .unwrap()
}

fn entry(report: &RateReport, tag: &str) -> f64 {
    report.entries.iter().find(|e| e.tag == tag && e.method == Method::FirstPrinciples).unwrap().value
}

#[test]
fn height_follows_the_wire_field_balance() {
    let guide = copper_guide(3.0 * MICRON);
    // μ0 I / (2π h) = B_bias
    assert_relative_eq!(MU0 * guide.current / (2.0 * std::f64::consts::PI * 3.0 * MICRON), guide.bias_field, max_relative = 1e-12);
    assert_relative_eq!(guide.height().unwrap(), 3.0 * MICRON, max_relative = 1e-12);
}

#[test]
fn report_totals_are_consistent_with_their_parts() {
    let guide = copper_guide(MICRON);
    let report = rate_report(&guide, &RateOptions::default()).unwrap();
    let flip = entry(&report, "nearfield_flip") + entry(&report, "current_flip");
    assert_relative_eq!(report.flip_rate, flip, max_relative = 1e-12);
    assert_relative_eq!(report.loss_timescale, 2.0 / report.flip_rate, max_relative = 1e-12);
    assert_relative_eq!(report.temperature_rise, HBAR * guide.trap_frequency * report.heating_01 / KB, max_relative = 1e-12);
    assert!(report.entries.iter().all(|e| e.value.is_finite() && e.value >= 0.0));
}

#[test]
fn nearfield_flip_matches_a_direct_golden_rule_evaluation() {
    let guide = copper_guide(MICRON);
    let report = rate_report(&guide, &RateOptions::default()).unwrap();
    let s = halfspace_spectrum(&guide.material, MICRON, guide.larmor_frequency()).unwrap();
    let t = SpinTransition::stretched_loss(HalfInt::from_twice(4), 0.5).unwrap();
    assert_relative_eq!(entry(&report, "nearfield_flip"), spin_flip_rate(&s, &t, MU_B), max_relative = 1e-12);
}

#[test]
fn nearfield_flip_scales_inversely_with_height_well_inside_the_skin_depth() {
    let r1 = rate_report(&copper_guide(MICRON), &RateOptions::default()).unwrap();
    let r2 = rate_report(&copper_guide(2.0 * MICRON), &RateOptions::default()).unwrap();
    let ratio = entry(&r1, "nearfield_flip") / entry(&r2, "nearfield_flip");
    assert!((ratio - 2.0).abs() < 0.05, "{ratio}");
}
