#![no_main]
use libfuzzer_sys::fuzz_target;
use pprloc::Norm;

fuzz_target!(|data: &str| {
    if let Ok(norm) = data.parse::<Norm>() {
        assert_eq!(norm.to_string().parse::<Norm>().unwrap(), norm);
    }
});
