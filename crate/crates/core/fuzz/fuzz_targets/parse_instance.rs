#![no_main]

use degen::instances::Instance;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(inst) = Instance::from_json(s) {
        assert_eq!(Instance::from_json(&inst.to_json()).unwrap(), inst);
    }
});
