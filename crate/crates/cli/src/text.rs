//! Human-readable summaries of reports.

use serde_json::Value;
use specto::report::Report;

fn line(out: &mut String, key: &str, v: &Value) {
    let shown = match v {
        Value::String(s) => s.clone(),
        Value::Null => "-".into(),
        other => other.to_string(),
    };
    out.push_str(&format!("{key:<24} {shown}\n"));
}

fn certificate(out: &mut String, c: &Value) {
    line(out, "action", &c["action"]);
    line(out, "decision", &c["decision"]);
    line(out, "theta1 lower bound", &c["theta1_lower"]);
    if let Some(b) = c.get("chi_bound").filter(|b| !b.is_null()) {
        line(out, "chi bound", &b["bound"]);
        line(out, "bound method", &b["method"]);
        line(out, "constant term", &b["constant_term"]);
        line(out, "power k", &b["power"]);
    }
    line(out, "substitution power", &c["power_used"]);
    line(out, "projection applied", &c["remark_b_applied"]);
    if let Some(conds) = c["conditions"].as_array() {
        for k in conds {
            let mark = if k["passed"].as_bool() == Some(true) { "ok" } else { "FAIL" };
            out.push_str(&format!("  [{mark}] {}: {}\n", k["name"].as_str().unwrap_or(""), k["detail"].as_str().unwrap_or("")));
        }
    }
    if let Some(notes) = c["notes"].as_array() {
        for n in notes {
            out.push_str(&format!("  note: {}\n", n.as_str().unwrap_or("")));
        }
    }
}

pub fn render(r: &Report) -> String {
    let mut out = format!("specto {} ({})\n", r.tool_version, r.command);
    let res = &r.results;
    match r.command.as_str() {
        "analyze" => certificate(&mut out, &res["certificate"]),
        "bound" => {
            let c = &res["certificate"];
            for key in ["method", "bound", "constant_term", "power", "std_error"] {
                line(&mut out, key, &c[key]);
            }
        }
        "lyapunov" => {
            let e = &res["estimate"];
            for key in ["value", "std_error", "n_steps", "n_samples", "seed"] {
                line(&mut out, key, &e[key]);
            }
            line(&mut out, "consistent with bounds", &res["consistent_with_bounds"]);
        }
        "ud-check" => {
            let v = &res["verdict"];
            line(&mut out, "holds", &v["holds"]);
            line(&mut out, "failed condition", &v["failed_condition"]);
            line(&mut out, "witness", &v["witness"]);
            if let Some(samples) = res["empirical"]["samples"].as_array() {
                for s in samples {
                    line(&mut out, &format!("omega {}", s["omega_index"]), &s["max_weyl_sum"]);
                }
            }
        }
        "reproduce" => {
            for c in res["checks"].as_array().into_iter().flatten() {
                let mark = if c["ok"].as_bool() == Some(true) { "ok" } else { "MISMATCH" };
                out.push_str(&format!(
                    "[{mark}] {}: expected {}, got {}\n",
                    c["name"].as_str().unwrap_or(""),
                    c["expected"].as_str().unwrap_or(""),
                    c["actual"].as_str().unwrap_or("")
                ));
            }
        }
        _ => out.push_str(&serde_json::to_string_pretty(res).unwrap_or_default()),
    }
    out
}
