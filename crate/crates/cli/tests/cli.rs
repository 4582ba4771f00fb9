use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;

fn crnpp(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_crnpp")).current_dir(dir).env_remove("CRNPP_EXAMPLES").args(args).output().expect("runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

/// Value printed on the `name value` line of the output.
fn printed(o: &Output, name: &str) -> f64 {
    stdout(o)
        .lines()
        .find_map(|l| l.strip_prefix(&format!("{name} ")))
        .unwrap_or_else(|| panic!("no `{name}` line in {}", stdout(o)))
        .split_whitespace()
        .next()
        .unwrap()
        .parse()
        .unwrap()
}

/// `max` field of a `check-error` summary line.
fn max_error(o: &Output, name: &str) -> f64 {
    let line = stdout(o).lines().find(|l| l.starts_with(&format!("{name} max "))).map(str::to_string);
    let line = line.unwrap_or_else(|| panic!("no `{name}` line in {}", stdout(o)));
    line.split_whitespace().nth(2).unwrap().parse().unwrap()
}

fn corpus_file(name: &str) -> String {
    format!("{}/../../corpus/{name}.crnpp", env!("CARGO_MANIFEST_DIR"))
}

#[test]
fn compile_writes_network_and_manifest() {
    let tmp = TempDir::new().unwrap();
    let o = crnpp(tmp.path(), &["compile", &corpus_file("gcd"), "-p", "a0=32", "-p", "b0=12", "-o", "out/"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let crn: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(tmp.path().join("out/gcd.crn.json")).unwrap()).unwrap();
    assert!(!crn["reactions"].as_array().unwrap().is_empty());
    assert_eq!(crn["parameters"]["a0"], 32.0);
    let manifest: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(tmp.path().join("out/manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest["command"], "compile");
    assert_eq!(manifest["parameters"]["b0"], "12");
    assert!(Path::new(manifest["program"].as_str().unwrap()).is_absolute());
    assert!(Path::new(manifest["output_dir"].as_str().unwrap()).is_absolute());
}

#[test]
fn stats_show_reference_sizes() {
    let tmp = TempDir::new().unwrap();
    let o = crnpp(tmp.path(), &["compile", "counter", "-p", "c0=3", "--stats"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("reference: 25 species, 31 reactions"), "{}", stdout(&o));
    assert_eq!(printed(&o, "reactions"), 31.0);
}

#[test]
fn restriction_violation_exits_1() {
    let tmp = TempDir::new().unwrap();
    std::fs::write(tmp.path().join("bad.crnpp"), "crn = { conc[a,2], conc[b,3], step[{ mul[a,b,a] }] }\n").unwrap();
    let o = crnpp(tmp.path(), &["compile", "bad.crnpp"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("bad.crnpp:1:"), "{}", stderr(&o));
    assert!(stderr(&o).contains("mul[a,b,a]"));
}

#[test]
fn user_errors_exit_1() {
    let tmp = TempDir::new().unwrap();
    assert_eq!(crnpp(tmp.path(), &["compile", "no_such_program"]).status.code(), Some(1));
    assert_eq!(crnpp(tmp.path(), &["compile", "gcd", "-p", "a0"]).status.code(), Some(1));
    assert_eq!(crnpp(tmp.path(), &["simulate", "gcd", "--bogus"]).status.code(), Some(1));
    std::fs::write(tmp.path().join("p.crnpp"), "crn = { conc[a,a0], step[{ ld[a,b] }] }").unwrap();
    let o = crnpp(tmp.path(), &["compile", "p.crnpp"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("a0"));
}

#[test]
fn divergence_exits_2_with_provenance() {
    let tmp = TempDir::new().unwrap();
    std::fs::write(tmp.path().join("boom.crnpp"), "crn = { conc[x,1], step[{ rxn[x,x+x,1] }] }").unwrap();
    let o = crnpp(tmp.path(), &["simulate", "boom.crnpp", "--cycles", "1"]);
    assert_eq!(o.status.code(), Some(2), "{}", stderr(&o));
    assert!(stderr(&o).contains("rxn[x,x+x,1]"), "{}", stderr(&o));
}

#[test]
fn mul_demo_settles_at_twelve() {
    let tmp = TempDir::new().unwrap();
    let o = crnpp(tmp.path(), &["simulate", "mul_demo"]);
    assert!(o.status.success());
    assert!((printed(&o, "C") - 12.0).abs() <= 0.12);
    let csv = std::fs::read_to_string(tmp.path().join("out/mul_demo.trace.csv")).unwrap();
    // The ideal clock is not part of the integrated state.
    assert_eq!(csv.lines().next().unwrap(), "time,A,B,C");
}

#[test]
fn pi_after_eight_cycles() {
    let tmp = TempDir::new().unwrap();
    let o = crnpp(tmp.path(), &["simulate", "pi", "--cycles", "8", "--plot", "pi"]);
    assert!(o.status.success());
    assert!((printed(&o, "pi") - 3.20185).abs() <= 0.05);
    assert!(tmp.path().join("out/pi.svg").exists());
}

#[test]
fn euler_under_the_oscillator() {
    let tmp = TempDir::new().unwrap();
    let o = crnpp(tmp.path(), &["simulate", "euler", "--clock", "oscillator", "--cycles", "8", "--plot", "e", "--every", "10"]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!((printed(&o, "e") - std::f64::consts::E).abs() <= 1e-3);
    let svg = std::fs::read_to_string(tmp.path().join("out/euler.svg")).unwrap();
    assert!(svg.starts_with("<svg") && svg.contains("<polyline"));
}

#[test]
fn compiled_network_can_be_simulated_directly() {
    let tmp = TempDir::new().unwrap();
    assert!(crnpp(tmp.path(), &["compile", "mul_demo"]).status.success());
    let o = crnpp(tmp.path(), &["simulate", "out/mul_demo.crn.json", "--time", "200", "--plot", "C", "-o", "net"]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!((printed(&o, "C") - 12.0).abs() <= 0.12);
}

#[test]
fn check_error_on_gcd_passes_threshold() {
    let tmp = TempDir::new().unwrap();
    let o = crnpp(tmp.path(), &["check-error", &corpus_file("gcd"), "-p", "a0=32", "-p", "b0=12", "--track", "a", "--max-error", "0.5"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let csv = std::fs::read_to_string(tmp.path().join("out/gcd.error.csv")).unwrap();
    assert_eq!(csv.lines().next().unwrap(), "species,occurrence,cycle,phase,time,simulated,expected,error,undefined");
    assert!(tmp.path().join("out/gcd.error.svg").exists());
}

#[test]
fn conc_only_program_has_zero_error() {
    let tmp = TempDir::new().unwrap();
    std::fs::write(tmp.path().join("c.crnpp"), "crn = { conc[a,2], conc[b,5], step[{ ld[a,c] }] }").unwrap();
    let o = crnpp(tmp.path(), &["check-error", "c.crnpp", "--track", "b", "--max-error", "0"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert_eq!(max_error(&o, "b"), 0.0);
}

#[test]
fn pi_errs_more_than_euler_and_breaches_tight_bounds() {
    let tmp = TempDir::new().unwrap();
    let e = crnpp(tmp.path(), &["check-error", "euler", "--track", "e"]);
    let p = crnpp(tmp.path(), &["check-error", "pi", "--track", "pi", "--max-error", "0.01"]);
    assert_eq!(p.status.code(), Some(2));
    assert!(stderr(&p).contains("exceeds"));
    assert!(max_error(&p, "pi") > max_error(&e, "e"));
}

#[test]
fn sweeps() {
    let tmp = TempDir::new().unwrap();
    let o = crnpp(tmp.path(), &["sweep", "sub", "--min", "0.5", "--max", "10", "--step", "0.5"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("at a=10 b=10"), "{}", stdout(&o));
    let csv = std::fs::read_to_string(tmp.path().join("out/sub.surface.csv")).unwrap();
    assert_eq!(csv.lines().count(), 21);
    assert!(tmp.path().join("out/sub.surface.svg").exists());

    let o = crnpp(tmp.path(), &["sweep", "add", "--min", "2", "--max", "2", "-o", "one"]);
    assert!(o.status.success());
    let csv = std::fs::read_to_string(tmp.path().join("one/add.surface.csv")).unwrap();
    assert_eq!(csv.lines().count(), 2);
    assert_eq!(csv.lines().next().unwrap(), "a\\b,2");

    let o = crnpp(tmp.path(), &["sweep", "mul", "--min", "1", "--max", "0.5"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn reruns_are_byte_identical() {
    let tmp = TempDir::new().unwrap();
    let files = ["counter.trace.csv", "manifest.json"];
    let run = |out: &str| {
        let o = crnpp(tmp.path(), &["simulate", "counter", "--cycles", "3", "-o", out]);
        assert!(o.status.success());
        files.map(|f| std::fs::read(tmp.path().join(out).join(f)).unwrap())
    };
    let a = run("first");
    let b = run("first");
    assert_eq!(a, b);
}

#[test]
fn interpret_prints_final_environment() {
    let tmp = TempDir::new().unwrap();
    let o = crnpp(tmp.path(), &["interpret", "int_division", "--cycles", "10"]);
    assert!(o.status.success());
    assert_eq!(printed(&o, "q"), 6.0);
    assert_eq!(printed(&o, "r"), 2.0);
    let csv = std::fs::read_to_string(tmp.path().join("out/int_division.timeline.csv")).unwrap();
    assert!(csv.lines().next().unwrap().starts_with("cycle,phase,"));
}

#[test]
fn examples_directory_override() {
    let tmp = TempDir::new().unwrap();
    let dir = tmp.path().join("examples");
    std::fs::create_dir(&dir).unwrap();
    std::fs::write(dir.join("mul_demo.crnpp"), "crn = { conc[A,3], conc[B,2], step[{ mul[A,B,C] }] }").unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_crnpp"))
        .current_dir(tmp.path())
        .env("CRNPP_EXAMPLES", &dir)
        .args(["simulate", "mul_demo"])
        .output()
        .unwrap();
    assert!(o.status.success(), "{}", stderr(&o));
    assert!((printed(&o, "C") - 6.0).abs() <= 0.06);
}

#[test]
fn corpus_export_writes_every_program() {
    let tmp = TempDir::new().unwrap();
    let o = crnpp(tmp.path(), &["corpus", "export", "progs"]);
    assert!(o.status.success());
    for name in ["gcd", "counter", "factorial", "int_division", "int_sqrt", "euler", "pi", "sub_alternative"] {
        let path = tmp.path().join(format!("progs/{name}.crnpp"));
        assert!(path.exists(), "{name}");
        let c = crnpp(tmp.path(), &["compile", path.to_str().unwrap(), "-o", "compiled"]);
        assert!(c.status.success(), "{name}: {}", stderr(&c));
    }
}
