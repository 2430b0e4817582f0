#![no_main]

use libfuzzer_sys::fuzz_target;
use sphere_sections::io::read_path_spec;
use sphere_sections::mobius::{Configuration, Tolerances};
use sphere_sections::monodromy::PathSpec;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let Ok(spec) = read_path_spec(text) else { return };
    let small = match &spec {
        PathSpec::Word { word } => word.len() <= 8,
        PathSpec::Samples { points } => points.len() <= 16,
        _ => true,
    };
    if small {
        let _ = spec.build(&Configuration::roots_of_unity(4), &Tolerances::default());
    }
});
