#![no_main]

use libfuzzer_sys::fuzz_target;
use sphere_sections::io::read_section_output;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(out) = read_section_output(text) {
        assert_eq!(out.m, out.new_points.len());
    }
});
