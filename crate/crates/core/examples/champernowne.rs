//! Digit statistics of the Champernowne sequence and its zero-entropy blocks.

use ams_coding::entropy::{check_jensen_bound, entropy_of, DeterministicSequence};
use ams_coding::processes::champernowne_digits;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let digits = champernowne_digits(1_000_000);
    let mut counts = [0usize; 10];
    digits.iter().for_each(|&d| counts[d as usize] += 1);
    let freqs: Vec<f64> = counts.iter().map(|&c| c as f64 / digits.len() as f64).collect();
    for (d, f) in freqs.iter().enumerate() {
        println!("digit {d}: {f:.5}");
    }
    println!("H(1) = {:.5}, ln 10 = {:.5}", entropy_of(freqs.iter().copied()), 10f64.ln());

    let seq = DeterministicSequence::champernowne(11);
    let j = check_jensen_bound(&seq, 1, 10)?;
    println!("Jensen gap at n = 10: {:.5}", j.gap());
    Ok(())
}
