//! Builds a small C program against the generated header and the static
//! library, then runs it.

use std::path::{Path, PathBuf};
use std::process::Command;

/// `cargo test` builds only the rlib, so build the static library here. A
/// separate target directory keeps clear of the outer build lock.
fn static_lib() -> PathBuf {
    // target/<profile>/deps/c_client-<hash>
    let target = std::env::current_exe().unwrap().ancestors().nth(3).unwrap().join("c-client");
    let status = Command::new(env!("CARGO"))
        .args(["build", "--quiet", "-p", "weylkit-ffi", "--lib", "--target-dir"])
        .arg(&target)
        .status()
        .expect("cargo");
    assert!(status.success());
    target.join("debug/libweylkit_ffi.a")
}

#[test]
fn header_declares_every_export() {
    let manifest = Path::new(env!("CARGO_MANIFEST_DIR"));
    let header = std::fs::read_to_string(manifest.join("include/weylkit.h")).unwrap();
    let src = std::fs::read_to_string(manifest.join("src/lib.rs")).unwrap();
    let exports: Vec<&str> = src
        .split("extern \"C\" fn ")
        .skip(1)
        .map(|rest| rest.split('(').next().unwrap())
        .collect();
    assert!(exports.len() >= 12);
    for name in exports {
        assert!(header.contains(&format!("{name}(")), "{name} missing from header");
    }
}

#[test]
fn c_program_links_and_runs() {
    let manifest = Path::new(env!("CARGO_MANIFEST_DIR"));
    let lib = static_lib();
    let exe = std::env::temp_dir().join(format!("weylkit-c-client-{}", std::process::id()));
    let status = Command::new(std::env::var("CC").unwrap_or_else(|_| "cc".into()))
        .args(["-std=c11", "-Wall", "-Werror", "-I"])
        .arg(manifest.join("include"))
        .arg(manifest.join("tests/c/client.c"))
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&exe)
        .status()
        .expect("C compiler");
    assert!(status.success());
    let out = Command::new(&exe).output().unwrap();
    std::fs::remove_file(&exe).ok();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(String::from_utf8_lossy(&out.stdout).starts_with("ok "));
}
