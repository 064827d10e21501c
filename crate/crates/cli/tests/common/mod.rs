//! Shared helpers for CLI integration and acceptance tests.

use std::collections::BTreeMap;
use std::path::Path;
use std::process::{Command, Output};

/// Run the built binary with `--out dir` plus the given args.
pub fn drmine(dir: &Path, args: &[&str]) -> Output {
    let mut command = Command::new(env!("CARGO_BIN_EXE_drmine"));
    command.args(args).arg("--out").arg(dir);
    command.env("RUST_LOG", "warn");
    command.output().expect("binary runs")
}

pub fn assert_success(output: &Output) {
    assert!(
        output.status.success(),
        "exit {:?}\nstdout: {}\nstderr: {}",
        output.status.code(),
        String::from_utf8_lossy(&output.stdout),
        String::from_utf8_lossy(&output.stderr)
    );
}

/// Minimal XML well-formedness check: tags balance and nest.
pub fn assert_well_formed_xml(text: &str, name: &str) {
    let mut stack: Vec<String> = Vec::new();
    let mut rest = text;
    while let Some(start) = rest.find('<') {
        let end = rest[start..]
            .find('>')
            .unwrap_or_else(|| panic!("{name}: unclosed tag"))
            + start;
        let tag = &rest[start + 1..end];
        rest = &rest[end + 1..];
        if tag.starts_with('?') || tag.starts_with('!') || tag.ends_with('/') {
            continue;
        }
        if let Some(tag_name) = tag.strip_prefix('/') {
            let open = stack
                .pop()
                .unwrap_or_else(|| panic!("{name}: stray </{tag_name}>"));
            assert_eq!(open, tag_name, "{name}: mismatched tag");
        } else {
            stack.push(tag.split_whitespace().next().unwrap().to_string());
        }
    }
    assert!(stack.is_empty(), "{name}: unclosed tags {stack:?}");
}

/// Parse a two-column CSV of integers keyed by the first column.
pub fn read_int_pairs(path: &Path) -> BTreeMap<usize, usize> {
    let mut reader = csv::Reader::from_path(path).expect("csv opens");
    reader
        .records()
        .map(|row| {
            let row = row.expect("csv row");
            (
                row.get(0).unwrap().parse().expect("int key"),
                row.get(1).unwrap().parse().expect("int value"),
            )
        })
        .collect()
}

/// Compare two artifact directories byte-for-byte, excluding the manifest
/// (whose timestamp legitimately differs).
pub fn assert_dirs_identical_except_manifest(a: &Path, b: &Path) {
    let mut names: Vec<String> = std::fs::read_dir(a)
        .expect("dir a")
        .map(|e| e.expect("entry").file_name().to_string_lossy().into_owned())
        .collect();
    names.sort();
    for name in &names {
        if name == "manifest.json" {
            continue;
        }
        let left = std::fs::read(a.join(name)).expect("left file");
        let right = std::fs::read(b.join(name))
            .unwrap_or_else(|_| panic!("{name} missing from second run"));
        assert_eq!(left, right, "{name} differs between runs");
    }
    // Manifests must agree after dropping the timestamp.
    let strip = |path: &Path| -> serde_json::Value {
        let text = std::fs::read_to_string(path.join("manifest.json")).expect("manifest");
        let mut value: serde_json::Value = serde_json::from_str(&text).expect("manifest JSON");
        value
            .as_object_mut()
            .expect("manifest object")
            .insert("created_utc".to_string(), serde_json::Value::Null);
        value
    };
    assert_eq!(strip(a), strip(b), "manifests differ beyond the timestamp");
}
