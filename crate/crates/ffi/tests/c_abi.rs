//! Compiles a C program against the generated header and, when the static
//! library from this build is present, links and runs it.

use std::path::{Path, PathBuf};
use std::process::Command;

fn crate_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
}

fn compiler() -> Option<String> {
    let cc = std::env::var("CC").unwrap_or_else(|_| "cc".into());
    Command::new(&cc).arg("--version").output().ok().filter(|o| o.status.success()).map(|_| cc)
}

fn static_lib() -> Option<PathBuf> {
    // The test binary lives in target/<profile>/deps next to the library.
    let exe = std::env::current_exe().ok()?;
    let deps = exe.parent()?;
    let found = [deps, deps.parent()?]
        .into_iter()
        .map(|d| d.join("libtclique_ffi.a"))
        .find(|l| l.exists());
    found
}

fn cc(cc: &str, args: &[&str], include: &Path) -> std::process::Output {
    Command::new(cc)
        .arg("-std=c99")
        .arg("-Wall")
        .arg("-Werror")
        .arg("-I")
        .arg(include)
        .args(args)
        .output()
        .expect("run C compiler")
}

#[test]
fn header_compiles_and_links() {
    let Some(compiler) = compiler() else {
        eprintln!("no C compiler; skipped");
        return;
    };
    let include = crate_dir().join("include");
    assert!(include.join("tclique.h").exists());
    let src = crate_dir().join("tests/smoke.c");
    let src = src.to_str().unwrap();

    let out = cc(&compiler, &["-fsyntax-only", src], &include);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));

    let Some(lib) = static_lib() else {
        eprintln!("static library not built; link step skipped");
        return;
    };
    let dir = tempfile::tempdir().unwrap();
    let exe = dir.path().join("smoke");
    let out = cc(
        &compiler,
        &[src, lib.to_str().unwrap(), "-o", exe.to_str().unwrap(), "-lpthread", "-ldl", "-lm"],
        &include,
    );
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let run = Command::new(&exe).output().unwrap();
    assert!(run.status.success(), "{}", String::from_utf8_lossy(&run.stderr));
    assert!(String::from_utf8_lossy(&run.stdout).starts_with("ok "));
}
