// Copyright 2026 The dampath Authors
// SPDX-License-Identifier: Apache-2.0

use std::process::{Command, Output};

fn dampath(args: &[&str], out_dir: Option<&std::path::Path>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_dampath"));
    cmd.args(args).env_remove("DAMPATH_OUT_DIR");
    if let Some(d) = out_dir {
        cmd.env("DAMPATH_OUT_DIR", d);
    }
    cmd.output().unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

#[test]
fn kernel_writes_csv_to_stdout() {
    let o = dampath(&["kernel", "--xb", "0:1:3"], None);
    assert_eq!(code(&o), 0);
    let text = String::from_utf8(o.stdout).unwrap();
    assert!(text.contains("\nT,xa,xb,re_K,im_K,abs_K,arg_K\n"));
    assert_eq!(text.lines().filter(|l| !l.starts_with('#')).count(), 4);
}

#[test]
fn out_dir_names_the_file_after_the_command() {
    let dir = tempfile::tempdir().unwrap();
    let o = dampath(&["compare", "--T-grid", "0:4:5", "--format", "json"], Some(dir.path()));
    assert_eq!(code(&o), 0);
    assert!(dir.path().join("compare.json").exists());
}

#[test]
fn reruns_into_different_files_are_identical() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a.csv"), dir.path().join("sub/b.csv"));
    for p in [&a, &b] {
        assert_eq!(code(&dampath(&["evolve", "--out", p.to_str().unwrap()], None)), 0);
    }
    assert_eq!(std::fs::read(a).unwrap(), std::fs::read(b).unwrap());
}

#[test]
fn config_file_is_overridden_by_flags() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    std::fs::write(&cfg, "# figure run\nkappa = 0.3\nT = 2\n").unwrap();
    let o = dampath(&["kernel", "--config", cfg.to_str().unwrap(), "--T", "0.5", "--format", "json"], None);
    assert_eq!(code(&o), 0);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["metadata"]["config"]["kappa"], 0.3);
    assert_eq!(v["metadata"]["config"]["T"], 0.5);
}

#[test]
fn exit_status_follows_the_failure_kind() {
    assert_eq!(code(&dampath(&["check"], None)), 0);
    assert_eq!(code(&dampath(&["kernel", "--kappa", "-0.1"], None)), 1);
    assert_eq!(code(&dampath(&["kernel", "--no-such-flag"], None)), 1);
    assert_eq!(code(&dampath(&["plot"], None)), 1);
    assert_eq!(code(&dampath(&["--help"], None)), 0);
    assert_eq!(code(&dampath(&["check", "--inject", "kernel-phase"], None)), 2);
    let o = dampath(&["evolve", "--T", "1", "--oracle", "--panels", "1"], None);
    assert_eq!(code(&o), 3);
    assert!(String::from_utf8_lossy(&o.stderr).contains("--panels"));
}

#[test]
fn config_errors_point_at_the_line() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.cfg");
    std::fs::write(&cfg, "kappa = 0.6\nhbar = zero\n").unwrap();
    let o = dampath(&["kernel", "--config", cfg.to_str().unwrap()], None);
    assert_eq!(code(&o), 1);
    assert!(String::from_utf8_lossy(&o.stderr).contains("bad.cfg:2"));
}
