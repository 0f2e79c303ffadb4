#![no_main]
use libfuzzer_sys::fuzz_target;
use pprloc::degseq::{is_graphical_erdos_gallai, is_graphical_havel_hakimi};
use pprloc::DegreeSequence;

fuzz_target!(|data: &str| {
    let Ok(s) = DegreeSequence::parse(data) else {
        return;
    };
    assert_eq!(DegreeSequence::parse(&s.to_text()).unwrap(), s);
    if s.len() <= 512 {
        assert_eq!(
            is_graphical_erdos_gallai(s.degrees()),
            is_graphical_havel_hakimi(s.degrees())
        );
    }
});
