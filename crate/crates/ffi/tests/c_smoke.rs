//! Compiles and runs a small C program against include/dvdbinom.h and the
//! built staticlib, exercising the full create/query/free cycle from C.

use std::path::PathBuf;
use std::process::Command;

const C_PROGRAM: &str = r#"
#include <assert.h>
#include <stdio.h>
#include <string.h>
#include "dvdbinom.h"

int main(void) {
  DvdbModel *model = NULL;
  dvdb_status st = dvdb_model_new(DVDB_MODEL_ZP, 3, 1, NULL, 0, false, 0, -1, &model);
  assert(st == DVDB_STATUS_OK);
  assert(dvdb_model_q(model) == 3);

  int64_t cls = 0;
  assert(dvdb_coeff_class(model, 4, 5, &cls) == DVDB_STATUS_OK);
  assert(cls == 1);

  char *exact = NULL;
  assert(dvdb_coeff_exact(model, 4, 5, &exact) == DVDB_STATUS_OK);
  assert(strcmp(exact, "5") == 0);
  dvdb_string_free(exact);

  uint64_t eps[2] = {0, 0};
  uint64_t zero = 0;
  assert(dvdb_dist(model, 5, eps, 2, &zero) == DVDB_STATUS_OK);
  assert(eps[0] == 4 && eps[1] == 2 && zero == 0);

  uint16_t digits[3];
  assert(dvdb_expand(model, "-1", 3, digits, 3) == DVDB_STATUS_OK);
  assert(digits[0] == 2 && digits[1] == 2 && digits[2] == 2);

  uint64_t first = 0;
  assert(dvdb_verify_gen_poly_product(model, 200, &first) == DVDB_STATUS_OK);
  assert(first == UINT64_MAX);

  dvdb_model_free(model);

  /* error paths */
  assert(dvdb_model_new(DVDB_MODEL_ZP, 4, 1, NULL, 0, false, 0, -1, &model) ==
         DVDB_STATUS_NON_PRIME);
  assert(dvdb_coeff_class(NULL, 1, 1, &cls) == DVDB_STATUS_NULL_POINTER);

  printf("c smoke ok, version %s\n", dvdb_version());
  return 0;
}
"#;

fn target_dir() -> PathBuf {
    // tests run from the crate root; the workspace target dir is two up
    let manifest = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    manifest
        .join("../../target")
        .join(if cfg!(debug_assertions) {
            "debug"
        } else {
            "release"
        })
}

#[test]
fn c_program_links_and_runs() {
    // `cargo test` only emits the rlib; make sure the staticlib artifact is
    // present and current (a no-op when it already is)
    let cargo = std::env::var("CARGO").unwrap_or_else(|_| "cargo".into());
    let build = Command::new(cargo)
        .args(["build", "-p", "dvdbinom-ffi"])
        .current_dir(env!("CARGO_MANIFEST_DIR"))
        .output()
        .expect("cargo runs");
    assert!(
        build.status.success(),
        "{}",
        String::from_utf8_lossy(&build.stderr)
    );

    let staticlib = target_dir().join("libdvdbinom_ffi.a");
    assert!(
        staticlib.exists(),
        "staticlib not built at {}",
        staticlib.display()
    );

    let dir = tempfile::tempdir().unwrap();
    let src = dir.path().join("smoke.c");
    let bin = dir.path().join("smoke");
    std::fs::write(&src, C_PROGRAM).unwrap();

    let include = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("include");
    let compile = Command::new("cc")
        .arg(&src)
        .arg("-I")
        .arg(&include)
        .arg(&staticlib)
        .args(["-lpthread", "-ldl", "-lm"])
        .arg("-o")
        .arg(&bin)
        .output()
        .expect("cc is available");
    assert!(
        compile.status.success(),
        "compilation failed:\n{}",
        String::from_utf8_lossy(&compile.stderr)
    );

    let run = Command::new(&bin).output().expect("smoke binary runs");
    assert!(
        run.status.success(),
        "{}",
        String::from_utf8_lossy(&run.stderr)
    );
    let stdout = String::from_utf8(run.stdout).unwrap();
    assert!(stdout.contains("c smoke ok"), "{stdout}");
}
