#![no_main]

use libfuzzer_sys::fuzz_target;
use zassenhaus::symfunc::parse_expr;

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        if let Ok(e) = parse_expr(text) {
            let again = parse_expr(&e.to_string()).expect("printed expression parses");
            let (a, b) = (e.eval(0.25), again.eval(0.25));
            assert!(a == b || (a.is_nan() && b.is_nan()) || (a - b).abs() <= 1e-12 * a.abs().max(1.0));
        }
    }
});
