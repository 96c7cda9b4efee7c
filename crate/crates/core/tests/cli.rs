use std::path::Path;

use cymirror::cli::run;
use serde_json::Value;

fn cymirror(args: &[&str]) -> (i32, String, String) {
    let mut full = vec!["cymirror"];
    full.extend_from_slice(args);
    let out = run(full);
    (out.code, out.stdout, out.stderr)
}

fn json(args: &[&str]) -> Value {
    let (code, out, err) = cymirror(args);
    assert_eq!(code, 0, "stderr: {err}");
    serde_json::from_str(&out).unwrap()
}

fn strings(v: &Value) -> Vec<String> {
    v.as_array().unwrap().iter().map(|x| x.as_str().unwrap().to_string()).collect()
}

fn write_config(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn quintic_instantons() {
    let v = json(&["instantons", "--model", "quintic", "--terms", "12"]);
    let n: Vec<&str> = v["instantons"]["degrees"]
        .as_array()
        .unwrap()
        .iter()
        .map(|d| d["n"].as_str().unwrap())
        .collect();
    assert_eq!(n[..3], ["2875", "609250", "317206375"]);
    assert_eq!(v["instantons"]["n0"], "5");
}

#[test]
fn p1x4_report_matches_published_table() {
    let v = json(&["report", "--model", "p1x4-diagonal", "--compare-printed"]);
    let n: Vec<String> = v["instantons"]["degrees"]
        .as_array()
        .unwrap()
        .iter()
        .map(|d| d["n"].as_str().unwrap().to_string())
        .collect();
    assert_eq!(n, ["192", "960", "10304", "147456", "2520576"]);
    assert_eq!(strings(&v["k_q"])[..6], ["48", "192", "7872", "278400", "9445056", "315072192"]);
    let p = &v["diagnostics"]["printed"];
    assert_eq!(p["k_q"]["matches"], true);
    assert_eq!(p["instantons"]["matches"], true);
    // the published operator lacks a square on (2Θ+1)
    assert_eq!(p["operator"]["annihilates_phi0"], false);
    assert_eq!(v["operator"]["fitted"], true);
    assert_eq!(v["operator"]["recurrence"]["m"], 2);
}

#[test]
fn garbage_coefficients_do_not_fit() {
    let dir = tempfile::tempdir().unwrap();
    // 1, then a scrambled sequence with no low-order recurrence
    let mut c = vec!["1".to_string()];
    let mut x: u64 = 7;
    for _ in 0..59 {
        x = x.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        c.push(((x >> 40) % 1000).to_string());
    }
    let cfg = format!(
        r#"{{"name":"junk","dim":3,"w0":"1","model":{{"kind":"explicit_recurrence","coefficients":{}}}}}"#,
        serde_json::to_string(&c).unwrap()
    );
    let path = write_config(dir.path(), "junk.json", &cfg);
    let (code, _, err) = cymirror(&["operator", "--config", &path]);
    assert_eq!(code, 2, "{err}");
    assert!(err.contains("no recurrence"), "{err}");

    let cfg = r#"{"name":"short","dim":3,"w0":"1","model":{"kind":"explicit_recurrence","coefficients":["1","2","3"]}}"#;
    let path = write_config(dir.path(), "short.json", cfg);
    let (code, _, err) = cymirror(&["operator", "--config", &path]);
    assert_eq!(code, 2);
    assert!(err.contains("at least 21 coefficients"), "{err}");
}

#[test]
fn schema_errors_name_the_field() {
    let dir = tempfile::tempdir().unwrap();
    let cases = [
        (r#"{"name":"a","model":{"kind":"complete_intersection","degrees":[5],"degres":[1]}}"#, "degres"),
        (r#"{"name":"a","model":{"kind":"complete_intersection"}}"#, "degrees"),
        (r#"{"name":"a","dim":3,"model":{"kind":"complete_intersection","degrees":[4]}}"#, "dimension 2"),
        (r#"{"name":"a","model":{"kind":"weighted_ci","degrees":[6],"weights":[3,1,1,1,1]}}"#, "model.degrees"),
        (r#"{"name":"a","w0":"18","model":{"kind":"product_projective","dims":[2,2],"matrix":[[3,2]]}}"#, "model.matrix"),
        (r#"{"name":"a","model":{"kind":"product_projective","dims":[2,2],"matrix":[[3,3]]}}"#, "w0"),
        (r#"{"name":"a","w0":"-1","model":{"kind":"complete_intersection","degrees":[5]}}"#, "w0"),
        (r#"{"name":"a","dim":2,"model":{"kind":"complete_intersection","degrees":[5]}}"#, "dim"),
        (r#"{"name":"a","w0":"1","model":{"kind":"two_term","alpha":["1/2","x"],"mu":"4"}}"#, "model.alpha[1]"),
        (r#"{"name":"a","w0":"1","model":{"kind":"toric","generators":[[1,0],[0,1],[-1,-1]],"partition":[[0,1,2]],"mori":[[1,1,2]]}}"#, "model.mori"),
        (r#"{"name":"a","w0":"1","model":{"kind":"explicit_recurrence"}}"#, "model.operator"),
        (r#"{"name":"a","model":{"kind":"quartic"}}"#, "quartic"),
    ];
    for (i, (text, field)) in cases.iter().enumerate() {
        let path = write_config(dir.path(), &format!("c{i}.json"), text);
        let (code, _, err) = cymirror(&["phi0", "--config", &path]);
        assert_eq!(code, 1, "{text}: {err}");
        assert!(err.contains(field), "{text}: expected `{field}` in {err}");
    }
}

#[test]
fn usage_errors_exit_one() {
    assert_eq!(cymirror(&["report", "--model", "quintic", "--bogus"]).0, 1);
    assert_eq!(cymirror(&["nonsense"]).0, 1);
    assert_eq!(cymirror(&["report"]).0, 1);
    assert_eq!(cymirror(&["report", "--model", "no-such-model"]).0, 1);
    assert_eq!(cymirror(&["operator", "--model", "quintic", "--format", "csv"]).0, 1);
    assert_eq!(cymirror(&["multiparam", "--model", "quintic"]).0, 1);
    assert_eq!(cymirror(&["--help"]).0, 0);
}

#[test]
fn output_is_deterministic() {
    for fmt in ["json", "csv", "text"] {
        let args = ["report", "--model", "p2xp2-diagonal", "--compare-printed", "--format", fmt];
        let a = cymirror(&args);
        let b = cymirror(&args);
        assert_eq!(a.0, 0);
        assert_eq!(a, b);
    }
}

#[test]
fn catalog_lists_every_model() {
    let v = json(&["catalog"]);
    let names: Vec<&str> = v["models"].as_array().unwrap().iter().map(|m| m["name"].as_str().unwrap()).collect();
    for n in ["quintic", "wp-21111", "v2222", "p2xp2-diagonal", "p2x3-abelian", "p4xp4-11x5"] {
        assert!(names.contains(&n), "{n}");
    }
    let (code, csv, _) = cymirror(&["catalog", "--format", "csv"]);
    assert_eq!(code, 0);
    assert!(csv.starts_with("name,kind,title\n"));
    assert_eq!(csv.lines().count(), names.len() + 1);
}

#[test]
fn csv_tables() {
    let (code, csv, _) = cymirror(&["report", "--model", "p2xp2-diagonal", "--format", "csv", "--terms", "5"]);
    assert_eq!(code, 0);
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "degree,k_q,n,gamma");
    assert_eq!(lines[1], "0,18,,");
    assert_eq!(lines[2], "1,378,378,378");
    let (_, csv, _) = cymirror(&["phi0", "--model", "quintic", "--terms", "2", "--max-degree", "2", "--format", "csv"]);
    assert_eq!(csv, "index,phi0\n0,1\n1,120\n2,113400\n");
}

#[test]
fn text_format_is_readable() {
    let (code, text, _) = cymirror(&["phi0", "--model", "quintic", "--terms", "2", "--max-degree", "2", "--format", "text"]);
    assert_eq!(code, 0);
    assert!(text.contains("phi0: 1, 120, 113400"), "{text}");
}

#[test]
fn every_kind_reaches_the_quintic_numbers() {
    let dir = tempfile::tempdir().unwrap();
    let configs = [
        r#"{"name":"a","model":{"kind":"weighted_ci","degrees":[5],"weights":[1,1,1,1,1]}}"#,
        r#"{"name":"b","w0":"5","model":{"kind":"two_term","alpha":["1/5","2/5","3/5","4/5"],"mu":"3125"}}"#,
        r#"{"name":"c","w0":"5","model":{"kind":"explicit_recurrence","operator":"T^4 - 5z(5T+1)(5T+2)(5T+3)(5T+4)"}}"#,
        r#"{"name":"d","w0":"5","model":{"kind":"explicit_recurrence","polys":[["-120","-1250","-4375","-6250","-3125"],["0","0","0","0","1"]]}}"#,
        r#"{"name":"e","w0":"5","model":{"kind":"toric","generators":[[1,0,0,0],[0,1,0,0],[0,0,1,0],[0,0,0,1],[-1,-1,-1,-1]],"partition":[[0,1,2,3,4]],"mori":[[1,1,1,1,1]]}}"#,
    ];
    for (i, text) in configs.iter().enumerate() {
        let path = write_config(dir.path(), &format!("k{i}.json"), text);
        let v = json(&["instantons", "--config", &path, "--max-degree", "3"]);
        let n1 = &v["instantons"]["degrees"][0]["n"];
        assert_eq!(n1, "2875", "{text}");
    }
}

#[test]
fn coefficient_configs_are_fitted_and_extended() {
    let dir = tempfile::tempdir().unwrap();
    let v = json(&["phi0", "--model", "p1x4-diagonal", "--terms", "44"]);
    let cfg = serde_json::json!({
        "name": "p1x4-data",
        "dim": 3,
        "w0": "48",
        "max_m": 2,
        "model": { "kind": "explicit_recurrence", "coefficients": v["phi0"] },
    });
    let path = write_config(dir.path(), "data.json", &cfg.to_string());
    let op = json(&["operator", "--config", &path]);
    assert_eq!(op["operator"]["fitted"], true);
    assert_eq!(op["operator"]["recurrence"]["m"], 2);
    let longer = json(&["phi0", "--config", &path, "--terms", "50"]);
    let direct = json(&["phi0", "--model", "p1x4-diagonal", "--terms", "50"]);
    assert_eq!(longer["phi0"], direct["phi0"]);
}

#[test]
fn non_threefolds() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_config(
        dir.path(),
        "k3.json",
        r#"{"name":"quartic-k3","model":{"kind":"complete_intersection","degrees":[4]}}"#,
    );
    let (code, _, err) = cymirror(&["instantons", "--config", &path]);
    assert_eq!(code, 2, "{err}");
    assert!(err.contains("3-folds"), "{err}");
    let v = json(&["report", "--config", &path]);
    assert_eq!(v["dim"], 2);
    assert!(v["instantons"].is_null());
}

#[test]
fn toric_data_gives_the_product_diagonal() {
    let a = json(&["yukawa", "--model", "p2xp2-toric", "--terms", "6"]);
    let b = json(&["yukawa", "--model", "p2xp2-diagonal", "--terms", "6"]);
    assert_eq!(a["k_q"], b["k_q"]);
}

#[test]
fn multiparam_on_p2xp2() {
    let v = json(&["multiparam", "--model", "p2xp2-diagonal", "--max-degree", "5"]);
    assert_eq!(v["q_all_integral"], true);
    assert_eq!(v["symmetric"], true);
    assert_eq!(v["phi0_matches_generator"], true);
    assert_eq!(v["log_identities"], serde_json::json!([true, true]));
    assert_eq!(v["phi0"]["1,1"], "720");
    assert_eq!(v["discriminant"]["equal"], false);
}

#[test]
fn qcoord_quintic_head() {
    let v = json(&["qcoord", "--model", "quintic", "--terms", "3"]);
    assert_eq!(strings(&v["q_of_z"])[..3], ["0", "1", "770"]);
    assert_eq!(strings(&v["z_of_q"])[..3], ["0", "1", "-770"]);
}
