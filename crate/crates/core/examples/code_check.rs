//! Kraft sum and freeness of a code table.
//!
//! `cargo run --example code_check -- path/to/table.txt`

use ams_coding::codes::{check_freeness, kraft_sum, TableCode};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let text = match std::env::args().nth(1) {
        Some(path) => std::fs::read_to_string(path)?,
        None => include_str!("../data/fixfree9.txt").to_owned(),
    };
    let code = TableCode::parse_text(&text)?;
    for (label, word) in code.labels().iter().zip(code.codewords()) {
        println!("{label:>4}  {word}");
    }
    let f = check_freeness(&code);
    println!("kraft sum     {}", kraft_sum(&code));
    println!("prefix-free   {}", f.prefix_free);
    println!("suffix-free   {}", f.suffix_free);
    println!("complete      {}", f.complete);
    Ok(())
}
