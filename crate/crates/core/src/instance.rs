//! JSON instance files.
//!
//! ```json
//! { "n": 2,
//!   "entries": [ { "X": [1], "Y": [], "value": 2 },
//!                { "X": [], "Y": [2], "value": "3/2" }, ... ] }
//! ```
//!
//! Every signed subset other than `(∅,∅)` must appear exactly once. The empty
//! pair may be listed, in which case its value must be 0.

use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::bisubfn::{BisubFunction, TableFunction, MAX_TABLE_GROUND};
use crate::error::{Error, Result};
use crate::signed_set::{integer, ElementSet, GroundSet, Rational, SignedSubset};

#[derive(Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
struct InstanceFile {
    n: usize,
    entries: Vec<Entry>,
}

#[derive(Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
struct Entry {
    #[serde(rename = "X")]
    x: Vec<usize>,
    #[serde(rename = "Y")]
    y: Vec<usize>,
    value: Value,
}

fn bad(msg: String) -> Error {
    Error::Instance(msg)
}

fn parse_value(v: &Value, record: usize) -> Result<Rational> {
    match v {
        Value::Number(num) => num.as_i64().map(integer).ok_or_else(|| {
            bad(format!(
                "entry {record}: value {num} is not an integer; write fractions as \"p/q\""
            ))
        }),
        Value::String(s) => s
            .trim()
            .parse::<Rational>()
            .map_err(|e| bad(format!("entry {record}: bad rational {s:?}: {e}"))),
        other => Err(bad(format!(
            "entry {record}: value must be an integer or a \"p/q\" string, got {other}"
        ))),
    }
}

fn side(elems: &[usize], n: usize, record: usize) -> Result<ElementSet> {
    let mut set = ElementSet::EMPTY;
    for &e in elems {
        if e == 0 || e > n {
            return Err(bad(format!(
                "entry {record}: element {e} is outside 1..={n}"
            )));
        }
        if set.contains(e) {
            return Err(bad(format!("entry {record}: element {e} is listed twice")));
        }
        set = set.with(e);
    }
    Ok(set)
}

/// Parses an instance document. Records are numbered from 1 in messages.
pub fn parse_instance(text: &str) -> Result<TableFunction> {
    let file: InstanceFile = serde_json::from_str(text)
        .map_err(|e| bad(format!("line {}, column {}: {e}", e.line(), e.column())))?;
    if file.n == 0 || file.n > MAX_TABLE_GROUND {
        return Err(bad(format!(
            "n must be between 1 and {MAX_TABLE_GROUND}, got {}",
            file.n
        )));
    }
    let ground = GroundSet::new(file.n)?;
    let mut values: Vec<Option<Rational>> = vec![None; ground.family_size()];
    values[0] = Some(integer(0));
    let mut empty_seen = false;
    for (k, entry) in file.entries.iter().enumerate() {
        let record = k + 1;
        let pos = side(&entry.x, file.n, record)?;
        let neg = side(&entry.y, file.n, record)?;
        let p = SignedSubset::new(pos, neg).map_err(|_| {
            bad(format!(
                "entry {record}: X and Y overlap in {}",
                pos.intersection(neg)
            ))
        })?;
        let value = parse_value(&entry.value, record)?;
        let index = ground.index_of(p);
        if p.is_empty() {
            if empty_seen {
                return Err(bad(format!("entry {record}: duplicate entry for {p}")));
            }
            empty_seen = true;
            if value != integer(0) {
                return Err(Error::NonzeroAtEmpty {
                    value: value.to_string(),
                });
            }
        } else if values[index].replace(value).is_some() {
            return Err(bad(format!("entry {record}: duplicate entry for {p}")));
        }
    }
    if let Some(k) = values.iter().position(Option::is_none) {
        return Err(bad(format!("missing entry for {}", ground.subset_at(k))));
    }
    TableFunction::new(ground, values.into_iter().map(Option::unwrap).collect())
}

pub fn load_instance(path: &std::path::Path) -> Result<TableFunction> {
    let text =
        std::fs::read_to_string(path).map_err(|e| bad(format!("{}: {e}", path.display())))?;
    parse_instance(&text).map_err(|e| match e {
        Error::Instance(msg) => bad(format!("{}: {msg}", path.display())),
        other => other,
    })
}

/// The instance document for `f`, one entry per nonempty signed subset in
/// ternary order.
pub fn instance_to_json<F: BisubFunction + ?Sized>(f: &F) -> String {
    let ground = f.ground();
    let values = f.values();
    let entries = ground
        .signed_subsets()
        .zip(values.iter())
        .skip(1)
        .map(|(p, v)| Entry {
            x: p.pos().iter().collect(),
            y: p.neg().iter().collect(),
            value: v
                .is_integer()
                .then(|| v.to_integer().to_i64())
                .flatten()
                .map_or_else(|| Value::from(v.to_string()), Value::from),
        })
        .collect();
    serde_json::to_string_pretty(&InstanceFile {
        n: ground.size(),
        entries,
    })
    .expect("instance serializes")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bisubfn::{gen_random, gen_strict_example};
    use rand::SeedableRng;

    #[test]
    fn round_trip() {
        let f = gen_strict_example(3).unwrap();
        assert_eq!(parse_instance(&instance_to_json(&f)).unwrap(), f);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let g = gen_random(2, &mut rng).unwrap();
        assert_eq!(parse_instance(&instance_to_json(&g)).unwrap(), g);
    }

    #[test]
    fn accepts_explicit_zero_at_empty() {
        let text = r#"{"n":1,"entries":[{"X":[],"Y":[],"value":0},{"X":[1],"Y":[],"value":"1/2"},{"X":[],"Y":[1],"value":1}]}"#;
        let f = parse_instance(text).unwrap();
        assert_eq!(f.table()[1], crate::signed_set::rational(1, 2));
    }

    #[test]
    fn diagnostics() {
        let missing = r#"{"n":1,"entries":[{"X":[1],"Y":[],"value":1}]}"#;
        assert!(parse_instance(missing)
            .unwrap_err()
            .to_string()
            .contains("missing entry for ([],[1])"));
        let dup = r#"{"n":1,"entries":[{"X":[1],"Y":[],"value":1},{"X":[1],"Y":[],"value":2}]}"#;
        assert!(parse_instance(dup)
            .unwrap_err()
            .to_string()
            .contains("entry 2: duplicate"));
        let overlap = r#"{"n":1,"entries":[{"X":[1],"Y":[1],"value":1}]}"#;
        assert!(parse_instance(overlap)
            .unwrap_err()
            .to_string()
            .contains("overlap"));
        let range = r#"{"n":1,"entries":[{"X":[2],"Y":[],"value":1}]}"#;
        assert!(parse_instance(range)
            .unwrap_err()
            .to_string()
            .contains("outside"));
        let nonzero = r#"{"n":1,"entries":[{"X":[],"Y":[],"value":3}]}"#;
        assert!(matches!(
            parse_instance(nonzero),
            Err(Error::NonzeroAtEmpty { .. })
        ));
        let syntax = "{\"n\": 1,\n \"entries\": [ }";
        assert!(parse_instance(syntax)
            .unwrap_err()
            .to_string()
            .contains("line 2"));
        let float =
            r#"{"n":1,"entries":[{"X":[1],"Y":[],"value":1.5},{"X":[],"Y":[1],"value":1}]}"#;
        assert!(parse_instance(float)
            .unwrap_err()
            .to_string()
            .contains("entry 1"));
    }
}
