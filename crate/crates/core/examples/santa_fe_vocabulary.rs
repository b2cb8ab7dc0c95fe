//! Sample the Santa Fe process and compare its vocabulary with the power law.

use ams_coding::processes::{power_law_bound, u_size, SantaFeModel, SourceModel};
use ams_coding::rng::stream;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let model = SantaFeModel::new(1.5)?;
    let mut rng = stream(1, 0, 0);
    let mut facts = model.realize(&mut rng);
    let x = model.draw_n(&mut facts, 12, &mut rng);
    println!("sample: {}", x.iter().map(|f| f.to_string()).collect::<Vec<_>>().join(" "));

    println!("{:>6} {:>6} {:>10}", "n", "|U|", "bound");
    for n in [10, 100, 1_000, 10_000, 100_000] {
        let size = u_size(&model, 0.75, n)?;
        println!("{n:>6} {size:>6} {:>10.2}", power_law_bound(&model, 0.75, n)?);
    }
    Ok(())
}
