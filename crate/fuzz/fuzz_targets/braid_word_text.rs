#![no_main]

use libfuzzer_sys::fuzz_target;
use sphere_sections::braid::{normal_form, BraidWord};

// First byte picks the strand count, the rest is word text.
fuzz_target!(|data: &[u8]| {
    let Some((&n, rest)) = data.split_first() else { return };
    let n = 1 + n as usize % 12;
    let Ok(text) = std::str::from_utf8(rest) else { return };
    if let Ok(w) = BraidWord::parse(n, text) {
        assert_eq!(BraidWord::parse(n, &w.to_string()).unwrap(), w);
        if w.len() <= 64 {
            let nf = normal_form(&w);
            assert_eq!(normal_form(&nf.to_word()), nf);
        }
    }
});
