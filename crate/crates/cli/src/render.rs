//! Plain-text rendering of result documents.

use cyclounits_core::lattice::FgAbelianGroup;
use num_bigint::BigInt;
use serde_json::{Map, Value};

fn as_group(m: &Map<String, Value>) -> Option<String> {
    if m.len() != 2 {
        return None;
    }
    let rank = m.get("rank")?.as_u64()? as usize;
    let torsion = m.get("torsion")?.as_array()?;
    let t: Option<Vec<BigInt>> = torsion.iter().map(|x| x.as_str()?.parse().ok()).collect();
    Some(
        FgAbelianGroup::free(rank)
            .direct_sum(&FgAbelianGroup::from_invariants(t?))
            .to_string(),
    )
}

fn as_matrix(m: &Map<String, Value>) -> Option<String> {
    if m.len() != 3 || !m.contains_key("rows") || !m.contains_key("cols") {
        return None;
    }
    let rows: Vec<String> = m
        .get("entries")?
        .as_array()?
        .iter()
        .map(|r| {
            let cells: Vec<&str> = r
                .as_array()
                .into_iter()
                .flatten()
                .filter_map(Value::as_str)
                .collect();
            format!("[{}]", cells.join(", "))
        })
        .collect();
    Some(format!("[{}]", rows.join(", ")))
}

/// One-line form of a value, when it has one.
fn inline(v: &Value) -> Option<String> {
    match v {
        Value::Null => Some("none".into()),
        Value::Bool(b) => Some(b.to_string()),
        Value::Number(n) => Some(n.to_string()),
        Value::String(s) => Some(s.clone()),
        Value::Array(a) => {
            let parts: Option<Vec<String>> = a.iter().map(inline).collect();
            parts.map(|p| format!("[{}]", p.join(", ")))
        }
        Value::Object(m) => {
            if let Some(t) = m.get("text").and_then(Value::as_str) {
                return Some(t.to_string());
            }
            if let Some(Value::Object(g)) = m.get("scalars_times") {
                return as_group(g).map(|g| {
                    if g == "0" {
                        "k*".to_string()
                    } else {
                        format!("k* x ({})", g)
                    }
                });
            }
            as_group(m).or_else(|| as_matrix(m))
        }
    }
}

fn block(key: &str, v: &Value, indent: usize, out: &mut String) {
    let pad = " ".repeat(indent);
    match (inline(v), v) {
        (Some(s), _) => out.push_str(&format!("{}{}: {}\n", pad, key, s)),
        (None, Value::Object(m)) => {
            out.push_str(&format!("{}{}:\n", pad, key));
            for (k, x) in m {
                block(k, x, indent + 2, out);
            }
        }
        (None, Value::Array(a)) => {
            out.push_str(&format!("{}{}:\n", pad, key));
            for (i, x) in a.iter().enumerate() {
                block(&i.to_string(), x, indent + 2, out);
            }
        }
        (None, _) => unreachable!("scalars always render inline"),
    }
}

/// Renders a result object as indented `key: value` lines.
pub fn render(v: &Value) -> String {
    let mut out = String::new();
    match v {
        Value::Object(m) => {
            for (k, x) in m {
                block(k, x, 0, &mut out);
            }
        }
        other => block("result", other, 0, &mut out),
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn groups_matrices_and_polynomials_render_inline() {
        let v = json!({
            "h": {"rank": 1, "torsion": ["3", "3"]},
            "m": {"rows": 1, "cols": 2, "entries": [["1", "-1"]]},
            "p": {"text": "x^2 - 1", "variables": ["x"], "terms": []},
            "t": {"h0": {"scalars_times": {"rank": 0, "torsion": []}}, "odd": {"rank": 0, "torsion": ["2"]}},
        });
        assert_eq!(
            render(&v),
            "h: Z + (Z/3)^2\nm: [[1, -1]]\np: x^2 - 1\nt:\n  h0: k*\n  odd: Z/2\n"
        );
    }
}
