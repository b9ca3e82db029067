use std::env;
use std::path::PathBuf;

fn main() {
    let crate_dir = env::var("CARGO_MANIFEST_DIR").expect("CARGO_MANIFEST_DIR is set");
    let out = PathBuf::from(&crate_dir).join("include").join("ebc.h");
    let config = cbindgen::Config {
        language: cbindgen::Language::C,
        include_guard: Some("EBC_H".to_string()),
        documentation: true,
        cpp_compat: true,
        ..Default::default()
    };
    match cbindgen::Builder::new()
        .with_crate(&crate_dir)
        .with_config(config)
        .generate()
    {
        Ok(bindings) => {
            bindings.write_to_file(out);
        }
        Err(e) => {
            // header generation failure should not break `cargo build` for
            // consumers that only need the library
            println!("cargo:warning=cbindgen failed: {e}");
        }
    }
    println!("cargo:rerun-if-changed=src/lib.rs");
}
