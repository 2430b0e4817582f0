#![no_main]

use libfuzzer_sys::fuzz_target;
use sphere_sections::io::read_configuration;
use sphere_sections::mobius::Tolerances;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let tol = Tolerances::default();
    if let Ok(c) = read_configuration(text, &tol) {
        assert!(c.separation() > tol.sep);
    }
});
