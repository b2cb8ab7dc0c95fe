//! The comma-terminated code resynchronizes after any shift.

use ams_coding::codes::{encode_star, phase_recover, ConjCode, Fact};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let code = ConjCode::santa_fe();
    let x = [Fact::new(1, 0), Fact::new(6, 1), Fact::new(2, 1), Fact::new(13, 0), Fact::new(1, 1)];
    let y = encode_star(&code, &x)?;
    println!("coded {}", y);
    for shift in [0, 3, 5, 9] {
        let parse = phase_recover(&code, &y[shift..])?;
        let facts: Vec<String> = parse.symbols.iter().map(|(o, f)| format!("{f}@{o}")).collect();
        println!("shift {shift:>2}: {}", facts.join(" "));
    }
    Ok(())
}
