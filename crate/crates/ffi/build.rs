use std::env;
use std::path::PathBuf;

fn main() {
    let crate_dir = PathBuf::from(env::var("CARGO_MANIFEST_DIR").unwrap());
    let mut config = cbindgen::Config::default();
    config.language = cbindgen::Language::C;
    config.include_guard = Some("SQPART_H".to_string());
    config.cpp_compat = true;
    config.documentation = true;
    config.header =
        Some("/* C ABI for the sqpart library. Generated by cbindgen; do not edit. */".to_string());
    config.enumeration.prefix_with_name = true;
    // Referenced only through a validated u32 parameter, so cbindgen
    // would otherwise prune it.
    config.export.include = vec!["SqpartEstimateMethod".to_string()];
    match cbindgen::Builder::new()
        .with_crate(&crate_dir)
        .with_config(config)
        .generate()
    {
        Ok(bindings) => {
            bindings.write_to_file(crate_dir.join("include").join("sqpart.h"));
        }
        Err(err) => {
            // Header generation failing should not block `cargo build` of
            // dependents; surface it as a warning instead.
            println!("cargo:warning=cbindgen failed: {err}");
        }
    }
    println!("cargo:rerun-if-changed=src/lib.rs");
    println!("cargo:rerun-if-changed=build.rs");
}
