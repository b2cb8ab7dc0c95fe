//! Admissible parameters and an empirical energy scan of the coded process.

use ams_coding::codes::ConjCode;
use ams_coding::energy::{corollary_parameter_check, empirical_energy_k, ScanOptions};
use ams_coding::measures::{CylinderCounts, HasLengthLaw, PhaseSampler};
use ams_coding::processes::{SantaFeModel, SourceModel};
use ams_coding::rng::stream;
use ams_coding::strings::Alphabet;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for alpha in [1.1, 1.25, 1.3, 2.0] {
        let c = corollary_parameter_check(alpha, 1)?;
        println!("alpha {alpha}: admissible {}, c₂ {:?}", c.admissible, c.c2);
    }

    let alpha = 1.1;
    let c2 = corollary_parameter_check(alpha, 1)?.c2.ok_or("inadmissible")?;
    let model = SantaFeModel::new(alpha)?;
    let code = ConjCode::santa_fe();
    let law = model.length_law(&code)?;
    let sampler = PhaseSampler::new(&model, &code, &law);
    let mut counts = CylinderCounts::with_alphabet(10, Alphabet::TERNARY);
    for t in 0..20_000 {
        let mut rng = stream(5, 1, t);
        let mut facts = model.realize(&mut rng);
        counts.add_prefixes(sampler.sample(&mut facts, 0, 10, &mut rng)?.coded.right());
    }
    for depth in [4, 7, 10] {
        let scan = empirical_energy_k(&counts, c2, ScanOptions::new(depth))?;
        println!("depth {depth:>2}: K̂ = {:.3}", scan.k_hat);
    }
    Ok(())
}
