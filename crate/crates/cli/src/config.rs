//! Flat `key = value` config files. Entries are spliced into the argument list
//! right after the subcommand name, so flags given on the command line win.

use std::ffi::OsString;
use std::path::Path;

use crate::error::{CliError, Result};

pub const SUBCOMMANDS: [&str; 6] = ["bound", "radial", "sweep", "verify-lemma", "verify-prop", "tension"];

/// Keys that map to value-less switches.
const SWITCHES: [&str; 2] = ["identity", "euclidean"];

pub fn parse_config(text: &str, path: &str) -> Result<Vec<String>> {
    let mut out = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(CliError::Input {
                path: path.to_string(),
                msg: format!("line {}: expected key = value", lineno + 1),
            });
        };
        let (key, value) = (key.trim(), value.trim());
        if key.is_empty() || key.starts_with('-') || key.contains(char::is_whitespace) {
            return Err(CliError::Input {
                path: path.to_string(),
                msg: format!("line {}: bad key {key:?}", lineno + 1),
            });
        }
        if key == "config" {
            continue;
        }
        if SWITCHES.contains(&key) {
            match value {
                "true" | "" => out.push(format!("--{key}")),
                "false" => {}
                _ => {
                    return Err(CliError::Input {
                        path: path.to_string(),
                        msg: format!("line {}: {key} expects true or false", lineno + 1),
                    })
                }
            }
            continue;
        }
        out.push(format!("--{key}"));
        out.extend(value.split_whitespace().map(str::to_string));
    }
    Ok(out)
}

fn config_path(args: &[OsString]) -> Option<OsString> {
    let mut it = args.iter();
    while let Some(a) = it.next() {
        let s = a.to_string_lossy();
        if s == "--config" {
            return it.next().cloned();
        }
        if let Some(p) = s.strip_prefix("--config=") {
            return Some(p.into());
        }
    }
    None
}

/// Returns `args` with the config file's entries inserted after the subcommand.
pub fn expand_args(args: Vec<OsString>) -> Result<Vec<OsString>> {
    let Some(path) = config_path(&args) else {
        return Ok(args);
    };
    let display = Path::new(&path).display().to_string();
    let text = std::fs::read_to_string(&path).map_err(|e| CliError::Input {
        path: display.clone(),
        msg: e.to_string(),
    })?;
    let extra = parse_config(&text, &display)?;
    let Some(pos) = args.iter().position(|a| SUBCOMMANDS.iter().any(|s| a == *s)) else {
        return Ok(args);
    };
    let mut out = args[..=pos].to_vec();
    out.extend(extra.into_iter().map(OsString::from));
    out.extend_from_slice(&args[pos + 1..]);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn entries_become_flags() {
        let got = parse_config("# grid\nseed = 7\nmap = eqf 0.5 0.3\nidentity = true\neuclidean=false\n", "c").unwrap();
        assert_eq!(got, ["--seed", "7", "--map", "eqf", "0.5", "0.3", "--identity"]);
    }

    #[test]
    fn malformed_lines_are_rejected() {
        assert!(parse_config("seed 7", "c").is_err());
        assert!(parse_config("--seed = 7", "c").is_err());
        assert!(parse_config("identity = maybe", "c").is_err());
    }
}
