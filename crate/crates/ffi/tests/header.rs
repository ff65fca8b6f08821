//! The generated header is in sync with the exported symbols and compiles
//! as C.

use std::path::Path;
use std::process::Command;

const SYMBOLS: &[&str] = &[
    "strongnil_last_error",
    "strongnil_version",
    "strongnil_string_free",
    "strongnil_matrix_from_json",
    "strongnil_matrix_from_fixture",
    "strongnil_matrix_free",
    "strongnil_matrix_size",
    "strongnil_matrix_indices",
    "strongnil_matrix_report",
    "strongnil_matrix_triangularize",
    "strongnil_matrix_to_json",
    "strongnil_map_from_json",
    "strongnil_map_free",
    "strongnil_map_jacobian",
    "strongnil_map_report",
    "strongnil_map_check_qt",
    "strongnil_map_equivalences",
    "strongnil_run_fixtures",
    "strongnil_nc_check",
];

fn header_path() -> std::path::PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("include/strongnil.h")
}

#[test]
fn header_declares_every_symbol() {
    let header = std::fs::read_to_string(header_path()).unwrap();
    for sym in SYMBOLS {
        assert!(header.contains(&format!("{sym}(")), "{sym} missing from header");
    }
    assert!(header.contains("typedef struct StrongnilMatrix StrongnilMatrix;"));
    assert!(header.contains("STRONGNIL_STATUS_TERM_LIMIT = 5"));
}

#[test]
fn header_compiles_as_c() {
    let dir = std::env::temp_dir().join(format!("strongnil-header-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let src = dir.join("use.c");
    let mut body = String::from("#include \"strongnil.h\"\nint main(void) {\n");
    for sym in SYMBOLS {
        body.push_str(&format!("  (void)&{sym};\n"));
    }
    body.push_str("  return STRONGNIL_STATUS_OK;\n}\n");
    std::fs::write(&src, body).unwrap();
    let cc = std::env::var("CC").unwrap_or_else(|_| "cc".into());
    let status = match Command::new(&cc)
        .args(["-std=c99", "-Wall", "-Werror", "-fsyntax-only", "-I"])
        .arg(header_path().parent().unwrap())
        .arg(&src)
        .status()
    {
        Ok(s) => s,
        Err(e) => {
            eprintln!("no C compiler ({cc}: {e}); skipping");
            return;
        }
    };
    assert!(status.success());
}
