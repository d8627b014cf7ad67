mod common;

#[test]
fn terms_up_to_size_six_are_deterministic_and_make_progress() {
    let r = common::progress_report(6);
    println!("{r:?}");
    assert!(r.violations.is_empty(), "{:#?}", r.violations);
    assert!(r.typed_nonvalues > 0 && r.stuck > 0);
}
