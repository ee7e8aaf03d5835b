//! Three outsiders whose singletons earn nothing and whose pairs and grand
//! coalition each earn 1. Prints the average worth, the plane system, the
//! distances and the predicted coalition size.
//!
//!     cargo run --example kannai_prediction

use coalition_evo::predictor::hyperplane_system;
use coalition_evo::{predict, BellTable, SymmetricWorth, DEFAULT_TIE_TOLERANCE};

fn main() -> Result<(), coalition_evo::CoalitionError> {
    let bell = BellTable::new(3);
    let worth = SymmetricWorth::new(vec![0.0, 1.0, 1.0])?;
    let system = hyperplane_system(3, &bell);

    println!("planes (scaled by m·B_m = {}):", system.denominator());
    let scale = 15.0;
    for (k, row) in system.coefficients().iter().enumerate() {
        let scaled: Vec<f64> = row.iter().map(|a| a * scale).collect();
        println!(
            "  k={}: {:?} · v = 0, distance factor {:.3}",
            k + 1,
            scaled,
            1.0 / (scale * system.row_norms()[k])
        );
    }

    let report = predict(&worth, &bell, DEFAULT_TIE_TOLERANCE)?;
    println!("average worth  {:.5}", report.average_worth);
    println!("residuals      {:.5?}", report.residuals);
    println!("distances      {:.3?}", report.distances);
    println!(
        "predicted size {} (argmin set {:?})",
        report.chosen_size, report.argmin_set
    );
    Ok(())
}
