//! End-to-end behaviour of the `gstab` binary and its library entry point.

use std::path::{Path, PathBuf};
use std::process::Command;

use gstab::cache::{decode_entry, resolution_key};
use gstab::format::{parse_module_file, print_module_file};
use gstab_core::{Budget, Poly, PolyRing, Field, MonomialOrder};
use proptest::prelude::*;
use serde_json::Value;

const YX: &str = "field Q\nbasevars y\nfibervars x\ngens (0|0)\nrels\n[y*x] (1|1)\nideal I = y\n";

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn run(args: &[&str]) -> (i32, String, String) {
    let args: Vec<String> = args.iter().map(|s| s.to_string()).collect();
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = gstab::run(&args, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn json(s: &str) -> Value {
    serde_json::from_str(s).unwrap()
}

fn fuzz_corpus(target: &str) -> Vec<PathBuf> {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fuzz/corpus").join(target);
    let mut v: Vec<PathBuf> = std::fs::read_dir(dir).unwrap().map(|e| e.unwrap().path()).collect();
    v.sort();
    v
}

#[test]
fn reg_report_shape() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "yx.gsmod", YX);
    let (code, out, _) = run(&["reg", "--no-cache", f.to_str().unwrap()]);
    assert_eq!(code, 0);
    let j = json(&out);
    assert_eq!(j["reg"], 0);
    assert_eq!(j["schema_version"], 1);
    assert_eq!(j["input_hash"].as_str().unwrap().len(), 64);
    let methods: Vec<&str> = j["methods"].as_array().unwrap().iter().map(|m| m["method"].as_str().unwrap()).collect();
    assert_eq!(methods, ["betti", "tor-mod-x", "koszul-homology", "koszul-cohomology"]);
}

#[test]
fn profile_of_yx() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "yx.gsmod", YX);
    let (code, out, err) = run(&["profile", "--ideal", "I", "--prime", "y", "--window", "-1..6", f.to_str().unwrap()]);
    assert_eq!(code, 0, "{err}");
    let j = json(&out);
    let rows = j["profile"].as_array().unwrap();
    let depth: Vec<Value> = rows.iter().map(|r| r["depth"].clone()).collect();
    assert_eq!(depth[1..4], [Value::from(1), Value::from(0), Value::from(0)]);
    let ass: Vec<Value> = rows.iter().map(|r| r["ass"].clone()).collect();
    assert_eq!(ass[1], serde_json::json!(["(0)"]));
    assert_eq!(ass[2], serde_json::json!(["(y)"]));
    assert_eq!(j["ass_union"]["contracted"], serde_json::json!(["(0)", "(y)"]));
    assert!(j["verdicts"].as_array().unwrap().iter().all(|v| v["outcome"] != "fail"));
}

#[test]
fn check_aliases_select_profiles() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "yx.gsmod", YX);
    let (code, out, _) = run(&["profile", "--ideal", "I", "--check", "assdepth2,qsM", f.to_str().unwrap()]);
    assert_eq!(code, 0);
    let j = json(&out);
    assert!(j.get("depth").is_some());
    assert!(j.get("cd").is_none());
    let (code, _, err) = run(&["profile", "--check", "nonsense", f.to_str().unwrap()]);
    assert_eq!(code, 1);
    assert!(err.contains("unknown check"));
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "yx.gsmod", YX);
    let bad = write(dir.path(), "bad.gsmod", "field Q\nfibervars x\ngens (0)\nrels\n[x + 1] (1)\n");
    assert_eq!(run(&["reg", f.to_str().unwrap()]).0, 0);
    assert_eq!(run(&["frobnicate"]).0, 1);
    assert_eq!(run(&["--help"]).0, 0);
    let (code, _, err) = run(&["reg", bad.to_str().unwrap()]);
    assert_eq!(code, 1);
    assert!(err.contains("line 5"), "positioned error expected, got {err}");
    assert_eq!(run(&["reg", "/nonexistent/file.gsmod"]).0, 1);
    assert_eq!(run(&["reg", "--budget", "2", f.to_str().unwrap()]).0, 2);
    assert_eq!(run(&["profile", "--ideal", "x", f.to_str().unwrap()]).0, 1);
}

#[test]
fn tripwires_exit_three() {
    use gstab::commands::{CliError, EXIT_TRIPWIRE};
    let e = CliError::from(gstab_core::AlgebraError::Tripwire("methods disagree".into()));
    assert_eq!(e.code(), EXIT_TRIPWIRE);
}

#[test]
fn reports_are_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "yx.gsmod", YX);
    let strip = |s: String| {
        let mut j = json(&s);
        j.as_object_mut().unwrap().remove("timing_ms");
        j
    };
    for cmd in [&["thresholds"][..], &["tame", "--implications"], &["lc"], &["ass"]] {
        let mut args = cmd.to_vec();
        args.push(f.to_str().unwrap());
        let a = strip(run(&args).1);
        let b = strip(run(&args).1);
        assert_eq!(a, b, "{cmd:?}");
    }
}

#[test]
fn tsv_and_out_file() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "yx.gsmod", YX);
    let out = dir.path().join("report.tsv");
    let (code, stdout, _) = run(&["betti", "--format", "tsv", "--out", out.to_str().unwrap(), f.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert!(stdout.is_empty());
    let text = std::fs::read_to_string(out).unwrap();
    assert!(text.contains("## betti\ni\tfiber\tbase\trank\n0\t0\t0\t1\n1\t1\t1\t1\n"), "{text}");
}

#[test]
fn lc_over_a_field() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "plane.gsmod", "field GF(7)\nfibervars x1 x2\ngens (0)\n");
    let (code, out, err) = run(&["lc", "--i", "2", "--window", "-4..0", "--cech", f.to_str().unwrap()]);
    assert_eq!(code, 0, "{err}");
    let j = json(&out);
    let dims: Vec<i64> = j["local_cohomology"].as_array().unwrap().iter().map(|r| r["dim_Hi_slice"].as_i64().unwrap()).collect();
    // H^2 of k[x1, x2] in degree -d has dimension d - 1.
    assert_eq!(dims, [3, 2, 1, 0, 0]);
    assert_eq!(j["cech_unsettled"], 0);
}

#[test]
fn dmcheck_command() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "yx.gsmod", YX);
    let (code, out, _) = run(&["dmcheck", "--p", "y*x + y^2", "--q", "x^2 - y", f.to_str().unwrap()]);
    assert_eq!(code, 0);
    let j = json(&out);
    assert_eq!(j["holds"], true);
    assert_eq!(j["ell"], 2);
}

#[test]
fn binary_uses_the_cache() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("cache");
    std::fs::create_dir(&cache).unwrap();
    let f = write(dir.path(), "yx.gsmod", YX);
    let bin = env!("CARGO_BIN_EXE_gstab");
    let go = || Command::new(bin).args(["reg", f.to_str().unwrap()]).env("GSTAB_CACHE_DIR", &cache).output().unwrap();
    let first = go();
    assert!(first.status.success());
    let entries: Vec<_> = std::fs::read_dir(&cache).unwrap().filter_map(|e| e.ok()).filter(|e| e.path().extension().is_some_and(|x| x == "json")).collect();
    assert_eq!(entries.len(), 1);
    // A damaged entry is discarded with a warning, and the answer is unchanged.
    std::fs::write(entries[0].path(), "{ not json").unwrap();
    let second = go();
    assert!(second.status.success());
    assert!(String::from_utf8_lossy(&second.stderr).contains("warning"));
    let strip = |o: &std::process::Output| {
        let mut j: Value = serde_json::from_slice(&o.stdout).unwrap();
        j.as_object_mut().unwrap().remove("timing_ms");
        j
    };
    assert_eq!(strip(&first), strip(&second));
    let third = go();
    assert!(third.status.success());
    assert!(third.stderr.is_empty());
}

#[test]
fn fuzz_seeds_replay() {
    for p in fuzz_corpus("module_file") {
        let text = std::fs::read_to_string(&p).unwrap();
        if let Ok(file) = parse_module_file(&text) {
            let printed = print_module_file(&file);
            let again = parse_module_file(&printed).unwrap();
            assert_eq!(print_module_file(&again), printed, "{}", p.display());
        }
    }
    let ring = PolyRing::new(Field::Rational, &["y1", "y2"], &["x1", "x2"], MonomialOrder::DegRevLex).unwrap();
    for p in fuzz_corpus("poly") {
        let bytes = std::fs::read(&p).unwrap();
        let src = std::str::from_utf8(&bytes[1..]).unwrap();
        let poly = Poly::parse(&ring, src).unwrap();
        assert_eq!(Poly::parse(&ring, &poly.to_string()).unwrap(), poly);
    }
    let m = parse_module_file("field Q\nbasevars y\nfibervars x\ngens (0|0)\nrels\n[y*x] (1|1)\n").unwrap().module();
    let key = resolution_key(&m, None);
    let mut accepted = 0;
    for p in fuzz_corpus("cache_entry") {
        let text = std::fs::read_to_string(&p).unwrap();
        if decode_entry(&text, &key, &m, &Budget::new(20_000)).is_ok() {
            accepted += 1;
        }
    }
    assert_eq!(accepted, 1);
}

fn module_text(seed: u64) -> String {
    let m = gstab_corpus::random_module(&mut gstab_corpus::rng(seed), &gstab_corpus::Shape::small((seed % 3) as usize, 1 + (seed % 2) as usize));
    let ring = m.ctx().ring();
    let names = ring.names();
    let nb = ring.nbase();
    let mut s = String::from("field Q\n");
    if nb > 0 {
        s += &format!("basevars {}\n", names[..nb].join(" "));
    }
    s += &format!("fibervars {}\n", names[nb..].join(" "));
    let tw = |t: gstab_core::Bidegree| if nb > 0 { format!("({}|{})", t.fiber, t.base) } else { format!("({})", t.fiber) };
    s += &format!("gens {}\n", m.twists().iter().map(|t| tw(*t)).collect::<Vec<_>>().join(" "));
    if !m.relations().is_empty() {
        s += "rels\n";
        for r in m.relations() {
            let entries: Vec<String> = m.ambient().to_polys(r).iter().map(|p| p.to_string()).collect();
            s += &format!("[{}] {}\n", entries.join(", "), tw(m.ambient().bidegree(r).unwrap()));
        }
    }
    s
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    /// parse, print, parse is the identity, and the parsed module presents the same thing.
    #[test]
    fn module_files_round_trip(seed in 0u64..1_000_000) {
        let text = module_text(seed);
        let file = parse_module_file(&text).unwrap();
        let printed = print_module_file(&file);
        let again = parse_module_file(&printed).unwrap();
        prop_assert_eq!(print_module_file(&again), printed.clone());
        let (a, b) = (file.module(), again.module());
        let budget = Budget::unlimited();
        let (ga, gb) = (a.relation_gb(&budget).unwrap(), b.relation_gb(&budget).unwrap());
        prop_assert!(ga.elems().iter().all(|v| gb.contains(v)) && gb.elems().iter().all(|v| ga.contains(v)));
    }

    /// Arbitrary text never panics the parser.
    #[test]
    fn parser_total(text in "(field|basevars|fibervars|gens|rels|ideal|\\[|\\]|\\(|\\)|[xy][12]|[-+*^,|=0-9 ]|\n){0,60}") {
        let _ = parse_module_file(&text);
    }
}
