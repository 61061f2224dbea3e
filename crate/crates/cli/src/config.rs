//! Merges a JSON config file into the command line.
//!
//! Keys mirror long flag names. The file's flags are spliced in right after
//! the (sub)command name, ahead of the user's own flags, so that later
//! occurrences on the command line win. Unknown keys surface as ordinary
//! unknown-flag usage errors.

use std::ffi::OsString;
use std::path::Path;

use serde_json::Value;

const GLOBAL_KEYS: [&str; 2] = ["output", "out"];
const GLOBAL_FLAGS: [&str; 3] = ["--output", "--out", "--config"];

/// Commands whose first positional argument names a nested subcommand.
const NESTED: [&str; 1] = ["verify"];

/// Path given by `--config PATH` or `--config=PATH`, if any.
pub fn config_path(args: &[OsString]) -> Option<OsString> {
    let mut it = args.iter().skip(1);
    while let Some(a) = it.next() {
        let s = a.to_string_lossy();
        if s == "--config" {
            return it.next().cloned();
        }
        if let Some(rest) = s.strip_prefix("--config=") {
            return Some(rest.into());
        }
        if s == "--" {
            break;
        }
    }
    None
}

/// Reads `path` as a flat JSON object and turns it into `(global, local)`
/// flag tokens.
pub fn load(path: &Path) -> Result<(Vec<OsString>, Vec<OsString>), String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("cannot read config {}: {e}", path.display()))?;
    let json: Value = serde_json::from_str(&text).map_err(|e| format!("invalid config {}: {e}", path.display()))?;
    let Value::Object(map) = json else {
        return Err(format!("config {} must be a JSON object", path.display()));
    };
    let mut global = Vec::new();
    let mut local = Vec::new();
    for (key, value) in map {
        let flag = OsString::from(format!("--{key}"));
        let target = if GLOBAL_KEYS.contains(&key.as_str()) {
            &mut global
        } else {
            &mut local
        };
        match value {
            Value::Bool(true) => target.push(flag),
            Value::Bool(false) | Value::Null => {}
            Value::Number(n) => target.extend([flag, n.to_string().into()]),
            Value::String(s) => target.extend([flag, s.into()]),
            Value::Array(items) => {
                let parts: Result<Vec<String>, String> = items
                    .into_iter()
                    .map(|v| match v {
                        Value::Number(n) => Ok(n.to_string()),
                        Value::String(s) => Ok(s),
                        other => Err(format!("config key {key}: unsupported list element {other}")),
                    })
                    .collect();
                target.push(OsString::from(format!("--{key}={}", parts?.join(","))));
            }
            Value::Object(_) => return Err(format!("config key {key}: nested objects are not supported")),
        }
    }
    Ok((global, local))
}

/// Index just past the command (and nested subcommand) name, where config
/// flags are inserted.
fn insertion_point(args: &[OsString]) -> usize {
    let mut i = 1;
    while i < args.len() {
        let s = args[i].to_string_lossy();
        if GLOBAL_FLAGS.contains(&s.as_ref()) {
            i += 2;
            continue;
        }
        if s.starts_with("--") {
            i += 1;
            continue;
        }
        let nested = NESTED.contains(&s.as_ref());
        i += 1;
        if nested && i < args.len() && !args[i].to_string_lossy().starts_with('-') {
            i += 1;
        }
        return i;
    }
    args.len()
}

/// `args` with the config's flags spliced in.
pub fn merge(args: Vec<OsString>, global: Vec<OsString>, local: Vec<OsString>) -> Vec<OsString> {
    let at = insertion_point(&args);
    let mut out = Vec::with_capacity(args.len() + global.len() + local.len());
    out.push(args[0].clone());
    out.extend(global);
    out.extend(args[1..at].iter().cloned());
    out.extend(local);
    out.extend(args[at..].iter().cloned());
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn os(v: &[&str]) -> Vec<OsString> {
        v.iter().map(OsString::from).collect()
    }

    #[test]
    fn finds_config_in_both_spellings() {
        assert_eq!(
            config_path(&os(&["plap", "--config", "a.json", "solve"])),
            Some("a.json".into())
        );
        assert_eq!(
            config_path(&os(&["plap", "solve", "--config=b.json"])),
            Some("b.json".into())
        );
        assert_eq!(config_path(&os(&["plap", "solve"])), None);
    }

    #[test]
    fn splices_after_the_command_name() {
        let args = os(&["plap", "--config", "c", "verify", "barta", "--mu", "1"]);
        let merged = merge(args, os(&["--output", "csv"]), os(&["--mu", "0.5"]));
        assert_eq!(
            merged,
            os(&["plap", "--output", "csv", "--config", "c", "verify", "barta", "--mu", "0.5", "--mu", "1"])
        );
        let merged = merge(os(&["plap", "solve", "--p", "2"]), Vec::new(), os(&["--R", "1"]));
        assert_eq!(merged, os(&["plap", "solve", "--R", "1", "--p", "2"]));
    }
}
