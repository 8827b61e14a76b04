//! Characteristic polynomials of T(2) on M_(6,k).
use siegel::hecke::{discriminant_factored, format_poly};
use siegel::structure::{hecke_row, Workspace};

fn main() -> siegel::error::Result<()> {
    let ws = Workspace::new(12)?;
    for k in [8, 10, 11, 12, 13, 15] {
        let row = hecke_row(2, k, &ws)?;
        println!("k={k:<2} cusp {}", format_poly(&row.cusp));
        if row.cusp.len() > 2 {
            println!("      disc {}", discriminant_factored(&row.cusp));
        }
    }
    Ok(())
}
