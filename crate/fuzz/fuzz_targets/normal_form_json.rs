#![no_main]

use libfuzzer_sys::fuzz_target;
use sphere_sections::braid::normal_form;
use sphere_sections::io::read_normal_form;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(nf) = read_normal_form(text) {
        if nf.strands() <= 12 && nf.canonical_length() <= 16 && nf.delta_power().abs() <= 16 {
            assert_eq!(normal_form(&nf.to_word()), nf);
        }
    }
});
