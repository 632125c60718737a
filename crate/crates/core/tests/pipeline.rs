//! End-to-end pipeline checks: overlaps -> channel -> state -> metrics.

use nalgebra::Matrix2;
use rindler_core::channel::{accelerated_tmsv, apply_channel, build_channel, ChannelForm};
use rindler_core::gaussian::log_negativity;
use rindler_core::modes::{compute_overlaps, GridControl, ModeFamily};
use rindler_core::protocols::{
    dense_coding_mutual_information, mutual_information_closed_form, teleportation_fidelity,
    teleportation_fidelity_closed_form,
};

#[test]
fn pipeline_channels_are_completely_positive_across_the_box() {
    let family = ModeFamily::default();
    let ctrl = GridControl::default();
    for accel in [0.03, 0.1, 0.3, 0.6, 1.0] {
        let coeffs = compute_overlaps(accel, accel, &family, &ctrl).unwrap();
        for form in [ChannelForm::Simplified, ChannelForm::GeneralM] {
            let channel = build_channel(&coeffs, form).unwrap();
            assert!(
                channel.is_completely_positive(1e-10),
                "channel at A = {accel} ({form:?}) not completely positive"
            );
        }
        // With pipeline-small beta the two constructions coincide.
        let simplified = build_channel(&coeffs, ChannelForm::Simplified).unwrap();
        let general = build_channel(&coeffs, ChannelForm::GeneralM).unwrap();
        let diff = (simplified.matrix - general.matrix).abs().max();
        assert!(diff <= 1e-6, "M forms differ by {diff} at A = {accel}");
    }
}

#[test]
fn pipeline_metrics_match_closed_forms_at_pipeline_overlaps() {
    let family = ModeFamily::default();
    let ctrl = GridControl::default();
    let coeffs = compute_overlaps(0.1, 0.4, &family, &ctrl).unwrap();
    let (alpha_i, alpha_ii) = (coeffs.alpha_i.re, coeffs.alpha_ii.re);
    let r = 1.0;

    let channel = build_channel(&coeffs, ChannelForm::Simplified).unwrap();
    let state = apply_channel(&channel, &rindler_core::gaussian::tmsv_state(r));
    let direct = accelerated_tmsv(alpha_i, alpha_ii, r);
    assert!((state.covariance - direct.covariance).abs().max() <= 1e-12 * direct.covariance.abs().max());

    let fidelity = teleportation_fidelity(&state, &Matrix2::identity()).unwrap().fidelity;
    assert!(
        (fidelity - teleportation_fidelity_closed_form(alpha_i, alpha_ii, r)).abs() <= 1e-12
    );
    let information = dense_coding_mutual_information(&state, 10.0)
        .unwrap()
        .mutual_information;
    assert!(
        (information - mutual_information_closed_form(alpha_i, alpha_ii, r, 10.0)).abs() <= 1e-12
    );

    // Acceleration strictly degrades the inertial figures of merit.
    assert!(fidelity < 1.0 / (1.0 + (-2.0_f64 * r).exp()));
    assert!(log_negativity(&state).log_negativity < 2.0 * r / std::f64::consts::LN_2);
}
