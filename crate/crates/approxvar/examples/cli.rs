//! The command-line front end driven in-process.
fn main() {
    let dir = std::env::temp_dir();
    let fam = dir.join("approxvar_example_sin.json");
    let fam = fam.to_str().unwrap();
    approxvar::cli::run(["approxvar", "family", "--named", "sin", "--j-range", "1:8", "-o", fam]);
    let code = approxvar::cli::run(["approxvar", "check", "--family", fam, "--condition", "vep", "--eps1", "0.25", "-o", "/dev/null"]);
    println!("check exit code {code}");
    approxvar::cli::run(["approxvar", "verify-paper"]);
}
