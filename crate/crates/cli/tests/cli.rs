use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

use mrd_core::io::{read_code, write_code};
use mrd_core::{Matrix, RankCode};

fn mrdcode(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mrdcode")).current_dir(dir).args(args).output().unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!("{e}: {}{}", String::from_utf8_lossy(&out.stdout), String::from_utf8_lossy(&out.stderr))
    })
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p
}

fn recipe(dir: &Path, name: &str, body: &str) {
    write(dir, name, &format!("# mrdrecipe v1\n{body}\n"));
}

fn load(path: PathBuf) -> RankCode {
    read_code(&fs::read_to_string(path).unwrap()).unwrap()
}

/// Construction 1 at q=2, m=4 built into `out`.
fn construct_c1(dir: &Path, out: &str) -> Output {
    recipe(dir, "c1.txt", "construction=construction1 q=2 m=4 m1=2 n=2 d=2");
    mrdcode(dir, &["construct", "c1.txt", "--out", out, "--level", "anticode-oracle"])
}

#[test]
fn construct_writes_code_and_subcode() {
    let tmp = TempDir::new().unwrap();
    let out = construct_c1(tmp.path(), "o");
    assert_eq!(out.status.code(), Some(0));
    let r = json(&out);
    assert_eq!(r["code"]["cardinality"], 16);
    assert_eq!(r["code"]["mrd_anticode"], true);
    assert_eq!(r["code"]["anticodes_checked"], 48);
    assert_eq!(r["subcode"]["cardinality"], 4);
    assert_eq!(r["subcode"]["mrd_cardinality"], true);
    assert_eq!(load(tmp.path().join("o/subcode.mrd")).params().m, 2);
    assert_eq!(fs::read(tmp.path().join("o/report.json")).unwrap(), out.stdout);
}

#[test]
fn construct_is_deterministic() {
    let tmp = TempDir::new().unwrap();
    let a = construct_c1(tmp.path(), "a");
    let b = construct_c1(tmp.path(), "b");
    assert_eq!(a.stdout, b.stdout);
    for f in ["code.mrd", "subcode.mrd", "report.json"] {
        assert_eq!(fs::read(tmp.path().join("a").join(f)).unwrap(), fs::read(tmp.path().join("b").join(f)).unwrap());
    }
}

#[test]
fn construct_rejects_bad_tower() {
    let tmp = TempDir::new().unwrap();
    recipe(tmp.path(), "bad.txt", "construction=construction1 q=2 m=4 m1=3 n=2 d=2");
    let out = mrdcode(tmp.path(), &["construct", "bad.txt"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("BadTower"));
}

#[test]
fn construct_product_of_files() {
    let tmp = TempDir::new().unwrap();
    let dir = tmp.path();
    recipe(dir, "top.txt", "construction=gabidulin q=2 m=2 n=2 k=1");
    recipe(dir, "bottom.txt", "construction=wedderburn q=2 m=3 n=2");
    assert!(mrdcode(dir, &["construct", "top.txt", "--out", "top"]).status.success());
    assert!(mrdcode(dir, &["construct", "bottom.txt", "--out", "bottom"]).status.success());
    recipe(dir, "prod.txt", "construction=product top=top/code.mrd bottom=bottom/code.mrd");
    let out = mrdcode(dir, &["construct", "prod.txt", "--out", "prod"]);
    assert_eq!(out.status.code(), Some(0));
    let r = json(&out);
    assert_eq!(r["code"]["params"]["m"], 5);
    assert_eq!(r["code"]["cardinality"], 32);
    assert_eq!(r["code"]["kind"], "linear");
}

#[test]
fn verify_levels_and_exit_codes() {
    let tmp = TempDir::new().unwrap();
    let dir = tmp.path();
    recipe(dir, "g.txt", "construction=gabidulin q=2 m=4 n=2 k=1");
    assert!(mrdcode(dir, &["construct", "g.txt", "--out", "g"]).status.success());
    let out = mrdcode(dir, &["verify", "g/code.mrd", "--level", "anticode-oracle"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["anticodes_checked"], 48);

    let g = load(dir.join("g/code.mrd"));
    let mut words = g.members().unwrap();
    words.pop();
    let short = RankCode::explicit(g.field(), g.params(), words).unwrap();
    write(dir, "short.mrd", &write_code(&short));
    let out = mrdcode(dir, &["verify", "short.mrd"]);
    assert_eq!(out.status.code(), Some(3));
    assert_eq!(json(&out)["mrd_cardinality"], false);

    write(dir, "garbage.mrd", "# mrdcode v1\nq=2 m=2 n=2 d=2 kind=linear\n1 0 1\n");
    assert_eq!(mrdcode(dir, &["verify", "garbage.mrd"]).status.code(), Some(4));

    recipe(dir, "big.txt", "construction=gabidulin q=2 m=8 n=4 k=1");
    assert!(mrdcode(dir, &["construct", "big.txt", "--out", "big"]).status.success());
    let out = mrdcode(dir, &["verify", "big/code.mrd", "--level", "anticode-oracle"]);
    assert_eq!(out.status.code(), Some(5));
}

#[test]
fn identity_switch_is_byte_identical() {
    let tmp = TempDir::new().unwrap();
    let dir = tmp.path();
    assert!(construct_c1(dir, "o").status.success());
    write(dir, "id.plan", "# mrdplan v1\nbase=o/code.mrd rows=2\nkeep\nkeep\nkeep\nkeep\n");
    let out = mrdcode(dir, &["switch", "o/code.mrd", "id.plan", "--out", "s"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(fs::read(dir.join("s/switched.mrd")).unwrap(), fs::read(dir.join("o/code.mrd")).unwrap());
}

#[test]
fn switch_applies_replacements_and_rejects_non_mrd() {
    let tmp = TempDir::new().unwrap();
    let dir = tmp.path();
    assert!(construct_c1(dir, "o").status.success());
    recipe(dir, "r.txt", "construction=gabidulin q=2 m=2 n=2 k=1");
    assert!(mrdcode(dir, &["construct", "r.txt", "--out", "r"]).status.success());
    write(dir, "p.plan", "# mrdplan v1\nrows=2\nreplace r/code.mrd\nkeep\ntranslate 1 0 0 0\nkeep\n");
    let out = mrdcode(dir, &["switch", "o/code.mrd", "p.plan", "--out", "s"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["verdict"]["mrd_cardinality"], true);

    let r = load(dir.join("r/code.mrd"));
    let mut words = r.members().unwrap();
    words[1] = Matrix::unit(2, 2, 0, 0);
    words.sort();
    let bad = RankCode::explicit(r.field(), r.params(), words).unwrap();
    write(dir, "bad.mrd", &write_code(&bad));
    write(dir, "bad.plan", "# mrdplan v1\nrows=2\nreplace bad.mrd\nkeep\nkeep\nkeep\n");
    assert_eq!(mrdcode(dir, &["switch", "o/code.mrd", "bad.plan"]).status.code(), Some(3));
}

fn census_inputs(dir: &Path) {
    assert!(construct_c1(dir, "o").status.success());
    recipe(dir, "r.txt", "construction=gabidulin q=2 m=2 n=2 k=1");
    assert!(mrdcode(dir, &["construct", "r.txt", "--out", "r"]).status.success());
    let r = load(dir.join("r/code.mrd"));
    write(dir, "r2.mrd", &write_code(&r.translate(&Matrix::unit(2, 2, 0, 0)).unwrap()));
}

#[test]
fn census_counts_distinct_codes() {
    let tmp = TempDir::new().unwrap();
    let dir = tmp.path();
    census_inputs(dir);
    let args = ["census", "o/code.mrd", "--rows", "2", "--choice", "r/code.mrd", "--choice", "r2.mrd"];
    let out = mrdcode(dir, &[&args[..], &["--out", "c1"]].concat());
    assert_eq!(out.status.code(), Some(0));
    let m = json(&out);
    assert_eq!(m["plans"], 16);
    assert_eq!(m["distinct_count"], 16);
    assert_eq!(m["entries"].as_array().unwrap().len(), 16);
    assert!(dir.join("c1/census_0015.mrd").exists());

    let again = mrdcode(dir, &[&args[..], &["--out", "c2"]].concat());
    assert_eq!(again.stdout, out.stdout);
    for i in 0..16 {
        let f = format!("census_{i:04}.mrd");
        assert_eq!(fs::read(dir.join("c1").join(&f)).unwrap(), fs::read(dir.join("c2").join(&f)).unwrap());
    }

    let capped = mrdcode(dir, &[&args[..], &["--out", "c3", "--cap-census", "8"]].concat());
    assert_eq!(capped.status.code(), Some(5));
    let limited = mrdcode(dir, &[&args[..], &["--out", "c4", "--limit", "3"]].concat());
    assert_eq!(json(&limited)["entries"].as_array().unwrap().len(), 3);
}

#[test]
fn invariants_report_signatures_and_certificates() {
    let tmp = TempDir::new().unwrap();
    let dir = tmp.path();
    recipe(dir, "top.txt", "construction=gabidulin q=2 m=2 n=2 k=1");
    recipe(dir, "bottom.txt", "construction=wedderburn q=2 m=3 n=2");
    recipe(dir, "wed.txt", "construction=wedderburn q=2 m=5 n=2");
    recipe(dir, "aper.txt", "construction=aperiodic q=2 m=4 n=2 d=2");
    for name in ["top", "bottom", "wed", "aper"] {
        assert!(mrdcode(dir, &["construct", &format!("{name}.txt"), "--out", name]).status.success());
    }
    recipe(dir, "prod.txt", "construction=product top=top/code.mrd bottom=bottom/code.mrd");
    assert!(mrdcode(dir, &["construct", "prod.txt", "--out", "prod"]).status.success());

    let out = mrdcode(dir, &["invariants", "prod/code.mrd", "wed/code.mrd", "aper/code.mrd"]);
    assert_eq!(out.status.code(), Some(0));
    let r = json(&out);
    let prod = &r["signatures"][0]["signature"];
    assert_eq!(prod["kernel_dim"], 5);
    assert_eq!(prod["affine_rank"], 5);
    assert_eq!(r["signatures"][2]["signature"]["kernel_dim"], 0);
    assert_eq!(r["certificates"][0][1], "subcode_profile");
    assert_eq!(r["certificates"][0][0], "indistinguishable");

    assert_eq!(mrdcode(dir, &["invariants", "missing.mrd"]).status.code(), Some(4));
}
