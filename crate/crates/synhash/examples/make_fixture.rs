//! Regenerates the bundled synthetic fixture.
//!
//! ```text
//! cargo run -p synhash --example make_fixture -- crates/synhash/fixtures/synthetic
//! ```

use std::path::PathBuf;

use synhash_core::synthetic::ThemedSpec;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dir: PathBuf = std::env::args_os()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from("fixtures/synthetic"));
    let config = synhash::fixture::write_themed_fixture(&dir, &ThemedSpec::default())?;
    println!("{}", config.display());
    Ok(())
}
