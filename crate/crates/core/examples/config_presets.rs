//! Lists presets, round-trips one through TOML and shows a validation error.

use nonlocal_rd::config::{preset, presets, RunConfig};

fn main() -> nonlocal_rd::Result<()> {
    for p in presets() {
        println!("{:24} {}", p.name, p.summary);
    }
    let cfg = preset("pulse-alg-neumann", true)?;
    let text = cfg.to_toml_string()?;
    assert_eq!(RunConfig::from_toml_str(&text)?, cfg);
    println!("\n{text}");
    match RunConfig::from_toml_str(&text.replace("m = 2048", "m = -3")) {
        Err(e) => println!("rejected: {e}"),
        Ok(_) => println!("unexpectedly accepted"),
    }
    Ok(())
}
