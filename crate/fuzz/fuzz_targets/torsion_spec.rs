#![no_main]

use libfuzzer_sys::fuzz_target;
use sphere_sections::io::read_torsion_spec;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(spec) = read_torsion_spec(text) {
        assert!(spec.count() > 0);
    }
});
