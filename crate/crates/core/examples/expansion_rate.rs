//! Mean codeword length of the coded Santa Fe process.

use ams_coding::codes::ConjCode;
use ams_coding::measures::{analytic_expansion_rate, expansion_rate};
use ams_coding::processes::SantaFeModel;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let code = ConjCode::santa_fe();
    for alpha in [1.5, 2.0, 3.0] {
        let model = SantaFeModel::new(alpha)?;
        let analytic = analytic_expansion_rate(&model, 1).value;
        let est = expansion_rate(&model, &code, 10_000, 50, 2)?.estimate;
        println!("alpha {alpha}: series {analytic:.5}, sampled {:.5} ± {:.5}", est.value, est.stderr);
    }
    Ok(())
}
