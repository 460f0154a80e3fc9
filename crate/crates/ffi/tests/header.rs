use std::path::PathBuf;
use std::process::Command;

fn header() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("include/gegenpsd.h")
}

#[test]
fn header_declares_every_export() {
    let text = std::fs::read_to_string(header()).unwrap();
    let src = std::fs::read_to_string(PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("src/lib.rs")).unwrap();
    let exports: Vec<&str> = src
        .lines()
        .filter_map(|l| l.split("extern \"C\" fn ").nth(1))
        .map(|rest| rest.split('(').next().unwrap())
        .collect();
    assert!(exports.len() >= 20);
    for name in exports {
        assert!(text.contains(&format!("{name}(")), "{name} missing from header");
    }
    assert!(text.contains("typedef struct GpMatrix GpMatrix;"));
    assert!(text.contains("GP_STATUS_OK = 0"));
}

#[test]
fn header_compiles_as_c_and_cpp() {
    let cc = std::env::var("CC").unwrap_or_else(|_| "cc".into());
    for (lang, std) in [("c", "-std=c99"), ("c++", "-std=c++11")] {
        let status = Command::new(&cc)
            .args(["-fsyntax-only", "-Wall", "-Wextra", "-Werror", std, "-x", lang])
            .arg(header())
            .status()
            .expect("C compiler available");
        assert!(status.success(), "{lang} compile failed");
    }
}
