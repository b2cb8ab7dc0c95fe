//! Exact coded-entropy identities on a truncated Santa Fe source.

use ams_coding::codes::ConjCode;
use ams_coding::entropy::{check_coded_block_identity, check_conditional_n, check_sandwich, TruncatedSantaFe};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let sf = TruncatedSantaFe::new(2.0, 3)?;
    let code = sf.table(&ConjCode::santa_fe())?;
    let model = sf.model();
    for n in 1..=3 {
        let b = check_coded_block_identity(model, &code, n)?;
        let s = check_sandwich(model, &code, n)?;
        println!(
            "n={n}: H(X^n) = {:.6}, H(Y^M) = {:.6}, sandwich {}",
            b.source,
            b.coded,
            s.first_holds() && s.second_holds()
        );
    }
    let phase = check_conditional_n(model, &code, 1, 1)?;
    println!("H(N | window) = {:.6} (ln L + eta = {:.6})", phase.enumerated, phase.log_l + phase.eta);
    Ok(())
}
