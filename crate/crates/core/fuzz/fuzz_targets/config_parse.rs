#![no_main]

use fim_core::harness::{ConfigMap, RunConfig};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(map) = ConfigMap::parse(text) {
        if let Ok(cfg) = RunConfig::from_map(&map) {
            // building the problem validates every numeric range; keep it cheap
            let cells = cfg.problem.n1.saturating_mul(cfg.problem.n2);
            if cells <= 4096 && cfg.problem.order <= 8 {
                let _ = cfg.instantiate();
            }
        }
    }
});
