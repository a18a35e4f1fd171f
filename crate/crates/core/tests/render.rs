use std::f64::consts::FRAC_PI_2;

use bincue::analysis::{estimate_itd, Weighting};
use bincue::render::{binauralize, binauralize_scene, RenderSpec};
use bincue::rigsim::{predicted_itd, RigKind, RigSpec, SourceSpec};
use bincue::signals::gen_pink_noise;

const FS: u32 = 48_000;

#[test]
fn rendered_itd_matches_model_with_sign() {
    let x = gen_pink_noise(3.0, FS, 10).unwrap();
    for rig in [RigKind::HumanHead, RigKind::Jecklin, RigKind::Ortf] {
        for a in [-1.2, -0.4, 0.4, 1.2] {
            let spec = RenderSpec::new(RigSpec::preset(rig), a, 20.0, 0.0).unwrap();
            let out = binauralize(&x, &spec).unwrap();
            let model = predicted_itd(
                &RigSpec::preset(rig),
                &SourceSpec::at_azimuth(a.abs()).unwrap(),
                20.0,
            )
            .unwrap();
            let est = estimate_itd(&out, 0.002, Weighting::None).unwrap();
            assert!(
                (est - model * a.signum()).abs() <= 1.0 / FS as f64,
                "{rig} {a}: {est}"
            );
        }
    }
}

#[test]
fn opposite_sources_mirror_each_other() {
    let x = gen_pink_noise(1.0, FS, 11).unwrap();
    let left = binauralize_scene(&[(x.clone(), RenderSpec::human(FRAC_PI_2))]).unwrap();
    let right = binauralize_scene(&[(x.clone(), RenderSpec::human(-FRAC_PI_2))]).unwrap();
    assert_eq!(left.stereo.swapped(), right.stereo);
    let both = binauralize_scene(&[
        (x.clone(), RenderSpec::human(FRAC_PI_2)),
        (x, RenderSpec::human(-FRAC_PI_2)),
    ])
    .unwrap();
    let (l, r) = (both.stereo.left().samples(), both.stereo.right().samples());
    for (a, b) in l.iter().zip(r) {
        assert!((a - b).abs() < 1e-12);
    }
}

#[test]
fn output_never_clips() {
    let x = gen_pink_noise(1.0, FS, 12).unwrap().scaled(2.0);
    let out = binauralize(&x, &RenderSpec::human(0.0)).unwrap();
    assert!(out.peak() <= 1.0);
}
