//! The bracket {E6, phi4} is a cusp form proportional to F11.
use siegel::classical::Igusa;
use siegel::structure::{express_in_basis, Workspace};
use siegel::vvforms::bracket;

fn main() -> siegel::error::Result<()> {
    let ws = Workspace::new(10)?;
    let b = bracket(&ws.e6, ws.classical.get(Igusa::Phi4))?;
    println!("weight ({}, {}), cusp {}", b.j, b.k, b.is_cusp());
    for (label, x) in express_in_basis(&b, &ws)? {
        println!("  {x} * {label}");
    }
    Ok(())
}
