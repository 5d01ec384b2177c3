#![no_main]
use gstab::cache::{decode_entry, resolution_key};
use gstab::format::parse_module_file;
use gstab_core::Budget;
use libfuzzer_sys::fuzz_target;

const MODULE: &str = "field Q\nbasevars y\nfibervars x\ngens (0|0)\nrels\n[y*x] (1|1)\n";

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let m = parse_module_file(MODULE).unwrap().module();
    let key = resolution_key(&m, None);
    // Decoding must reject or accept without panicking, under a bounded budget.
    let _ = decode_entry(text, &key, &m, &Budget::new(20_000));
});
