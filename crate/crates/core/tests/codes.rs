use ams_coding::codes::{
    check_freeness, decode_prefix_stream, decode_two_sided, encode_star, encode_window, phase_recover, Code, ConjCode,
    Fact, TableCode,
};
use ams_coding::strings::TwoSidedWindow;
use proptest::prelude::*;

fn fixfree9() -> TableCode {
    TableCode::parse_text(include_str!("../data/fixfree9.txt")).unwrap()
}

#[test]
fn table_text_round_trips() {
    for text in [include_str!("../data/fixfree9.txt"), include_str!("../data/t2.txt")] {
        let code = TableCode::parse_text(text).unwrap();
        let again = TableCode::parse_text(&code.to_text()).unwrap();
        assert_eq!(again.codewords(), code.codewords());
        assert_eq!(check_freeness(&again), check_freeness(&code));
    }
}

fn fact() -> impl Strategy<Value = Fact> {
    (1u128..5_000, any::<bool>()).prop_map(|(k, z)| Fact::new(k, u32::from(z)))
}

proptest! {
    #[test]
    fn prefix_stream_round_trip(x in prop::collection::vec(0usize..9, 0..80)) {
        let code = fixfree9();
        let y = encode_star(&code, &x).unwrap();
        let (back, rest) = decode_prefix_stream(&code, &y).unwrap();
        prop_assert_eq!(back, x);
        prop_assert!(rest.is_empty());
    }

    #[test]
    fn two_sided_round_trip(left in prop::collection::vec(0usize..9, 0..30), right in prop::collection::vec(0usize..9, 0..30)) {
        let code = fixfree9();
        let x = TwoSidedWindow::new(left, right);
        let d = decode_two_sided(&code, &encode_window(&code, &x).unwrap()).unwrap();
        prop_assert_eq!(d.source, x);
    }

    #[test]
    fn conj_phase_recovery_is_shift_invariant(x in prop::collection::vec(fact(), 2..12), s in 0usize..400) {
        let code = ConjCode::santa_fe();
        let y = encode_star(&code, &x).unwrap();
        let s = s % y.len();
        let full = phase_recover(&code, &y).unwrap();
        prop_assert_eq!(phase_recover(&code, &y[s..]).unwrap().symbols, full.shifted(s));
        prop_assert_eq!(full.symbols.len(), x.len() - 1);
    }

    #[test]
    fn conj_codeword_lengths_add(x in prop::collection::vec(fact(), 0..12)) {
        let code = ConjCode::santa_fe();
        let total: usize = x.iter().map(|f| code.codeword_len(f).unwrap()).sum();
        prop_assert_eq!(encode_star(&code, &x).unwrap().len(), total);
    }
}
