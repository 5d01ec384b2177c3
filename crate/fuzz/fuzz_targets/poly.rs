#![no_main]
use gstab_core::{Field, MonomialOrder, Poly, PolyRing};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Some((&sel, rest)) = data.split_first() else { return };
    let Ok(src) = std::str::from_utf8(rest) else { return };
    let field = if sel & 1 == 0 { Field::Rational } else { Field::prime(7).unwrap() };
    let ring = PolyRing::new(field, &["y1", "y2"], &["x1", "x2"], MonomialOrder::DegRevLex).unwrap();
    if let Ok(p) = Poly::parse(&ring, src) {
        let shown = p.to_string();
        let back = Poly::parse(&ring, &shown).expect("display must parse");
        assert_eq!(back, p);
    }
});
