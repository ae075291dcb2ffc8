#![no_main]

use fim_core::harness::decode_snapshot;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(snap) = decode_snapshot(data) {
        let cells: usize = snap.dims.iter().product();
        assert_eq!(cells, snap.cells.len());
        assert!(snap.cells.iter().all(|c| c.params.theta > 0.0));
    }
});
