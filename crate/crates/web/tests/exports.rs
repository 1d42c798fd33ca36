use agcodes_web::{analyze_impl, compare_impl, params_impl};

#[test]
fn klein_quartic_report() {
    let v = analyze_impl("d=4; f=x^3*y+y^3*z+x*z^3", 3).unwrap();
    assert_eq!(v["plane_points"], 24);
    assert_eq!(v["genus_lower"], 3);
    assert_eq!(v["abs_irreducible"], "yes");
}

#[test]
fn analyze_rejects_bad_input() {
    assert!(analyze_impl("d=4; f=x^3*w", 3).is_err());
    assert!(analyze_impl("d=4; f=x^4", 9).is_err());
    assert!(analyze_impl("d=4; f=x^4", 0).is_err());
}

#[test]
fn compare_first_row_of_the_rs_table() {
    let v = compare_impl(256, 0, "rs-product,lomont1", "10").unwrap();
    let cells = &v["rows"][0]["cells"];
    assert_eq!(cells[0]["pair"], serde_json::json!([81, 81]));
    assert_eq!(cells[0]["rate"], "0.1009");
    assert_eq!(cells[1]["pair"], serde_json::json!([80, 81]));
    assert_eq!(cells[1]["delta"], "0.47165");
}

#[test]
fn compare_marks_unreachable_targets() {
    // a 3-point curve forces k2 = 1, so the rate stays at or below 1/2
    let v = compare_impl(4, 3, "goppa-product", "99").unwrap();
    assert!(v["rows"][0]["cells"][0].get("n").is_none());
    assert!(compare_impl(4, 2, "lomont2", "50").is_err());
    assert!(compare_impl(4, 5, "lomont3", "50").is_err());
    assert!(compare_impl(4, 5, "lomont1", "100").is_err());
}

#[test]
fn params_for_both_surface_families() {
    let v = params_impl("lomont1", 4, 0, 2, 1).unwrap();
    assert_eq!(v["display"], "[25, 6, >=12]");
    let v = params_impl("lomont2", 256, 255, 181, 179).unwrap();
    assert_eq!((v["n"].as_u64(), v["k"].as_u64()), (Some(257 * 255), Some(182 * 179)));
    assert!(params_impl("lomont2", 4, 3, 1, 0).is_err());
    assert!(params_impl("ruled", 4, 3, 1, 1).is_err());
}
