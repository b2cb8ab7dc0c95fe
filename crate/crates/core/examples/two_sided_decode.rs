//! Encode a two-sided window with a fix-free code, cut both edges inside a
//! codeword and decode what is left.

use ams_coding::codes::{decode_two_sided, encode_window, TableCode};
use ams_coding::strings::TwoSidedWindow;

fn show(w: &TwoSidedWindow<u8>) -> String {
    let bits = |b: &[u8]| b.iter().map(|d| d.to_string()).collect::<String>();
    format!("{}|{}", bits(&w.left()), bits(w.right()))
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let code = TableCode::parse_text(include_str!("../data/fixfree9.txt"))?;
    let x = TwoSidedWindow::new(vec![3, 0, 1], vec![2, 8, 5]);
    let y = encode_window(&code, &x)?;
    println!("source  {:?}|{:?}", x.left(), x.right());
    println!("coded   {}", show(&y));

    let cut = TwoSidedWindow::new(y.left()[1..].to_vec(), y.right()[..y.right().len() - 1].to_vec());
    let d = decode_two_sided(&code, &cut)?;
    println!("cut     {}", show(&cut));
    println!("decoded {:?}|{:?}", d.source.left(), d.source.right());
    println!("edges   left '{}' right '{}'", d.left_rem, d.right_rem);
    Ok(())
}
