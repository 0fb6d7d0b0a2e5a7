use powerbeam_web::{curve_average_image, prospect_random, smoothing_image};

#[test]
fn dense_set_yields_a_beam_and_a_full_canvas() {
    let view = prospect_random(128, 0.6, 3, 2.0, 16).ok().expect("prospect runs");
    assert_eq!(view.pixels().len(), 128 * 128 * 4);
    assert!(view.summary().starts_with("certified"), "{}", view.summary());
    let red = view.pixels().chunks(4).filter(|p| p[..3] == [214, 40, 40]).count();
    assert!(red > 0);
}

#[test]
fn field_images_have_canvas_size() {
    assert_eq!(curve_average_image(64, 0.4, 1, 2.0, 0.125).ok().unwrap().len(), 64 * 64 * 4);
    assert_eq!(smoothing_image(64, 0.4, 1, 0, 0.02).ok().unwrap().len(), 64 * 64 * 4);
    assert_eq!(smoothing_image(64, 0.4, 1, 1, 3.0).ok().unwrap().len(), 64 * 64 * 4);
}

#[test]
fn full_set_has_blank_martingale_difference() {
    let px = smoothing_image(32, 1.0, 0, 1, 2.0).ok().unwrap();
    // the full indicator equals its averages, so the difference is blank
    assert!(px.chunks(4).all(|p| p == [255, 255, 255, 255]));
}
