//! Builds F11, ..., F23 and prints the coefficient table and its determinant.
use siegel::linalg::det;
use siegel::structure::{table_indices, table_matrix, Workspace};

fn main() -> siegel::error::Result<()> {
    let ws = Workspace::new(10)?;
    for (k, n) in table_indices() {
        let col: Vec<String> = ws.gens.get(k).at(&n).coeffs.iter().map(|c| c.to_string()).collect();
        println!("F{k:<2} {n}  ({})", col.join(","));
    }
    println!("det = {}", det(&table_matrix(&ws.gens)));
    Ok(())
}
