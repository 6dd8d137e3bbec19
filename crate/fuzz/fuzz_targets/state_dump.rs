#![no_main]

use libfuzzer_sys::fuzz_target;
use zassenhaus::spectral::{read_state_dump, write_state_dump};

fuzz_target!(|data: &[u8]| {
    if let Ok(u) = read_state_dump(data) {
        let mut out = Vec::new();
        write_state_dump(&mut out, &u).expect("write to memory");
        assert_eq!(out, data);
    }
});
