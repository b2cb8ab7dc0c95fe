//! Stationary mean of a cylinder under the coded IID fair coin.

use ams_coding::codes::TableCode;
use ams_coding::measures::{estimate_rho, exact_rho_iid, HasLengthLaw};
use ams_coding::processes::IidModel;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let model = IidModel::fair_coin();
    let code = TableCode::parse_text(include_str!("../data/t2.txt"))?;
    let law = model.length_law(&code)?;
    for u in [&[1u8][..], &[0, 0], &[1, 1], &[0, 1, 0]] {
        let exact = exact_rho_iid(&model, &code, u, 8)?;
        let est = estimate_rho(&model, &code, &law, u, 100_000, 4)?;
        println!(
            "{:<4} exact {:<8} estimated {:.4} ± {:.4}",
            u.iter().map(|b| b.to_string()).collect::<String>(),
            exact.exact.map_or("-".into(), |r| r.to_string()),
            est.phase_route.value,
            est.phase_route.stderr
        );
    }
    Ok(())
}
