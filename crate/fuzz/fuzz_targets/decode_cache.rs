#![no_main]
use libfuzzer_sys::fuzz_target;
use pprloc::io::{decode_cache, encode_cache};

fuzz_target!(|data: &[u8]| {
    if let Ok(g) = decode_cache(data) {
        assert_eq!(encode_cache(&g), data);
    }
});
