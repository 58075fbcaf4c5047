use locmod_web::{fiber_report, normal_form_report, torus_report};

fn parse(s: &str) -> serde_json::Value {
    serde_json::from_str(s).unwrap()
}

#[test]
fn torus_report_small() {
    let v = parse(&torus_report(2, 1, 1).unwrap());
    assert_eq!(v["size_of_S"], 7);
    assert_eq!(v["kernel_is_torus"], true);
    assert_eq!(v["quotient_is_torus"], true);
    assert!(torus_report(2, 2, 1).is_err());
}

#[test]
fn fiber_counts() {
    for (g, want) in [(1, 1), (2, 5), (3, 12)] {
        assert_eq!(parse(&fiber_report(g).unwrap())["free_count"], want);
    }
    assert!(fiber_report(0).is_err());
}

#[test]
fn normal_forms() {
    let v = parse(&normal_form_report("1,2", 5, 1, 30).unwrap());
    assert_eq!(v["recovered"], 30);
    assert!(normal_form_report("1,x", 5, 1, 3).is_err());
    assert!(normal_form_report("1,1", 4, 1, 3).is_err());
}
