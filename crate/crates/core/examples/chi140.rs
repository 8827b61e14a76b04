//! The coefficient of chi140 at (12,8,4).
use siegel::index::Index;
use siegel::structure::{chi140_coefficient, Workspace};

fn main() -> siegel::error::Result<()> {
    let ws = Workspace::new(12)?;
    for r in [4, -4] {
        let n = Index::from_nmr(12, 8, r);
        println!("c(12,8,{r}) = {}", chi140_coefficient(&ws.gens, &n)?);
    }
    Ok(())
}
