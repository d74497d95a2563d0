use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn raglab(args: &[&str], threads: &str) -> Output {
    Command::new(env!("CARGO_BIN_EXE_raglab"))
        .args(args)
        .env("RAYON_NUM_THREADS", threads)
        .output()
        .expect("spawn raglab")
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn same_seed_gives_identical_files_across_thread_counts() {
    let dir = tempfile::tempdir().unwrap();
    for (fmt, ext) in [("json", "json"), ("csv", "csv")] {
        let a = dir.path().join(format!("a.{ext}"));
        let b = dir.path().join(format!("b.{ext}"));
        for (out, threads) in [(&a, "1"), (&b, "4")] {
            let o = raglab(
                &["ekss1", "--seed", "11", "--replicates", "300", "--d", "9", "--format", fmt, "--raw", "--out", path_str(out)],
                threads,
            );
            assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
        }
        assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap());
    }
    let c = dir.path().join("c.json");
    raglab(&["ekss1", "--seed", "12", "--replicates", "300", "--d", "9", "--out", path_str(&c)], "1");
    assert_ne!(fs::read(dir.path().join("a.json")).unwrap(), fs::read(&c).unwrap());
}

#[test]
fn report_carries_its_own_parameters() {
    let o = raglab(&["ekss1", "--seed", "3", "--replicates", "200", "--d", "6"], "1");
    assert!(o.status.success());
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["experiment"], "ekss1");
    assert_eq!(v["seed"], 3);
    assert_eq!(v["parameters"]["d"], 6);
    assert_eq!(v["parameters"]["replicates"], 200);
    assert!(v["code_version"].as_str().unwrap().starts_with("raglab "));
    assert!(v.get("wall_time").is_none());
    assert!(v.get("values").is_none());

    // rerunning from the embedded parameters reproduces the report
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("params.json");
    fs::write(&cfg, v["parameters"].to_string()).unwrap();
    let again = raglab(&["ekss1", "--config", path_str(&cfg)], "1");
    assert_eq!(again.stdout, o.stdout);
}

#[test]
fn flags_override_config_file() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("params.json");
    fs::write(&cfg, r#"{"d": 5, "replicates": 50, "seed": 8}"#).unwrap();
    let o = raglab(&["ekss1", "--config", path_str(&cfg), "--replicates", "70"], "1");
    assert!(o.status.success());
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["replicates"], 70);
    assert_eq!(v["parameters"]["d"], 5);
    assert_eq!(v["seed"], 8);
}

#[test]
fn csv_header_and_key_in_errors() {
    let o = raglab(&["moment", "--replicates", "100"], "1");
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("'replicates'"));
    let o = raglab(&["moment", "--replicates", "1000", "--format", "csv"], "1");
    assert!(o.status.success());
    let text = String::from_utf8(o.stdout).unwrap();
    assert_eq!(
        text.lines().next().unwrap(),
        "experiment,seed,replicates,mean,se,ci99_low,ci99_high,discarded,theory,parameters,code_version"
    );
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();

    // unused key
    let cfg = dir.path().join("bad.json");
    fs::write(&cfg, r#"{"replicates": 10, "colour": 1}"#).unwrap();
    let o = raglab(&["ekss1", "--config", path_str(&cfg)], "1");
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("colour"));

    // missing config file
    let o = raglab(&["ekss1", "--config", path_str(&dir.path().join("none.json"))], "1");
    assert_eq!(o.status.code(), Some(1));

    // parity violation
    let o = raglab(&["truncate", "--d", "10", "--ell", "5", "--replicates", "2"], "1");
    assert_eq!(o.status.code(), Some(1));

    // a failed invariant check
    let cfg = dir.path().join("band.json");
    fs::write(&cfg, r#"{"d": [4, 8], "replicates": 20, "level": 4, "ratio_low": 10.0, "ratio_high": 20.0}"#).unwrap();
    let o = raglab(&["betti-scaling", "--config", path_str(&cfg)], "1");
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("FAIL ratios_in_band"));

    // unknown experiment is rejected by argument parsing
    let o = raglab(&["nonsense"], "1");
    assert_ne!(o.status.code(), Some(0));
}
