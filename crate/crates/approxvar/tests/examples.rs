use std::path::PathBuf;
use std::process::Command;

const EXAMPLES: [&str; 12] = [
    "classical_functionals",
    "epsilon_variation",
    "punctured_line",
    "finite_metric",
    "euclidean_bounds",
    "closed_form_catalog",
    "generate_family",
    "condition_checks",
    "selection_sp",
    "ramsey_irregular",
    "oracle_certification",
    "cli",
];

fn examples_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_BIN_EXE_approxvar")).parent().unwrap().join("examples")
}

#[test]
fn every_example_runs() {
    let dir = examples_dir();
    for name in EXAMPLES {
        let exe = dir.join(format!("{name}{}", std::env::consts::EXE_SUFFIX));
        if !exe.exists() {
            let st = Command::new(env!("CARGO")).args(["build", "-q", "-p", "approxvar", "--example", name]).status().unwrap();
            assert!(st.success(), "building {name}");
        }
        let out = Command::new(&exe).output().unwrap();
        assert!(out.status.success(), "{name}: {}", String::from_utf8_lossy(&out.stderr));
    }
}
