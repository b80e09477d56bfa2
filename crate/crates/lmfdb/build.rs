// Embeds every file under fixtures/ so offline lookups work from any
// working directory.

use std::env;
use std::fs;
use std::path::Path;

fn main() {
    let root = Path::new(&env::var("CARGO_MANIFEST_DIR").unwrap()).join("fixtures");
    println!("cargo:rerun-if-changed={}", root.display());
    let mut entries = Vec::new();
    if let Ok(dirs) = fs::read_dir(&root) {
        for dir in dirs.flatten() {
            println!("cargo:rerun-if-changed={}", dir.path().display());
            for file in fs::read_dir(dir.path()).into_iter().flatten().flatten() {
                let path = file.path();
                if path.extension().and_then(|e| e.to_str()) == Some("txt") {
                    let label = path.file_stem().unwrap().to_string_lossy().into_owned();
                    entries.push((label, path));
                }
            }
        }
    }
    entries.sort();
    let mut out = String::from("pub static BUNDLED: &[(&str, &str)] = &[\n");
    for (label, path) in &entries {
        out.push_str(&format!("    ({:?}, include_str!({:?})),\n", label, path.display().to_string()));
    }
    out.push_str("];\n");
    let dest = Path::new(&env::var("OUT_DIR").unwrap()).join("bundled.rs");
    fs::write(dest, out).unwrap();
}
