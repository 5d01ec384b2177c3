#![no_main]
use gstab::format::{parse_module_file, print_module_file};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(file) = parse_module_file(text) {
        // The canonical print is a fixed point of parse then print.
        let printed = print_module_file(&file);
        let again = parse_module_file(&printed).expect("canonical print must parse");
        assert_eq!(print_module_file(&again), printed);
    }
});
