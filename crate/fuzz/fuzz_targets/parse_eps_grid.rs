#![no_main]
use libfuzzer_sys::fuzz_target;
use pprloc::localization::parse_eps_grid;

fuzz_target!(|data: &str| {
    if let Ok(grid) = parse_eps_grid(data) {
        assert!(!grid.is_empty());
        assert!(grid.iter().all(|e| *e > 0.0 && e.is_finite()));
        assert!(grid.windows(2).all(|w| w[1] < w[0]));
    }
});
