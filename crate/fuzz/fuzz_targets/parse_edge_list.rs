#![no_main]
use libfuzzer_sys::fuzz_target;
use pprloc::io::{parse_edge_list_bytes, write_edge_list};

fuzz_target!(|data: &[u8]| {
    let Ok(raw) = parse_edge_list_bytes(data) else {
        return;
    };
    for directed in [false, true] {
        let Ok(loaded) = raw.clone().into_graph(directed) else {
            continue;
        };
        // Writing and re-reading the cleaned graph must be lossless.
        let mut buf = Vec::new();
        write_edge_list(&loaded.graph, &mut buf).unwrap();
        let again = parse_edge_list_bytes(&buf).unwrap().into_graph(directed).unwrap();
        assert_eq!(again.graph, loaded.graph);
    }
});
