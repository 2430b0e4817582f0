#![no_main]

use libfuzzer_sys::fuzz_target;
use sphere_sections::io::read_word;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(w) = read_word(text) {
        let again = read_word(&serde_json::to_string(&w).unwrap()).unwrap();
        assert_eq!(again, w);
    }
});
