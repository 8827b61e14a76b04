//! Stores chi10 in a cache file and reads it back.
use siegel::classical::{igusa_generator, Igusa};
use siegel::cli::{load, store};

fn main() -> siegel::error::Result<()> {
    let dir = tempfile::tempdir()?;
    let f = igusa_generator(Igusa::Chi10, 8)?.to_vector();
    let path = dir.path().join("chi10.t8.txt");
    store(&path, "chi10", &f)?;
    let (name, g) = load(&path)?;
    println!("{name}: {} bytes, round trip {}", std::fs::metadata(&path)?.len(), g == f);
    Ok(())
}
