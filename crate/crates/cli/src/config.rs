//! `--config <path>`: a flat `key=value` file whose keys are the long flag
//! names. Entries become flags placed before the user's own, so flags given
//! on the command line take precedence.

use std::collections::BTreeMap;
use std::fs;

use clap::CommandFactory;

use crate::Cli;

/// Parses `key=value` lines. Blank lines and `#` comments are skipped.
pub fn parse(text: &str) -> Result<BTreeMap<String, String>, String> {
    let mut out = BTreeMap::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| format!("config line {}: expected key=value, got {line:?}", lineno + 1))?;
        out.insert(key.trim().trim_start_matches("--").to_string(), value.trim().to_string());
    }
    Ok(out)
}

fn config_path(args: &[String]) -> Option<String> {
    let mut it = args.iter();
    while let Some(a) = it.next() {
        if a == "--config" {
            return it.next().cloned();
        }
        if let Some(p) = a.strip_prefix("--config=") {
            return Some(p.to_string());
        }
    }
    None
}

/// Returns `args` with the config file's entries spliced in after the
/// subcommand name. Keys the subcommand does not take are skipped, so one
/// file can serve several subcommands.
pub fn expand(args: Vec<String>) -> Result<Vec<String>, String> {
    let Some(path) = config_path(&args) else {
        return Ok(args);
    };
    let text = fs::read_to_string(&path).map_err(|e| format!("cannot read config {path}: {e}"))?;
    let entries = parse(&text)?;
    let mut cmd = Cli::command();
    cmd.build();
    let Some((pos, sub)) = args
        .iter()
        .enumerate()
        .skip(1)
        .find_map(|(i, a)| cmd.find_subcommand(a).map(|s| (i, s)))
    else {
        return Ok(args);
    };
    let mut injected = Vec::new();
    for (key, value) in entries {
        let Some(arg) = sub.get_arguments().find(|a| a.get_long() == Some(key.as_str())) else {
            log::debug!("config key {key:?} is not a flag of {}", sub.get_name());
            continue;
        };
        if key == "config" {
            continue;
        }
        if arg.get_action().takes_values() {
            injected.push(format!("--{key}"));
            injected.push(value);
        } else if matches!(value.as_str(), "true" | "1" | "yes") {
            injected.push(format!("--{key}"));
        }
    }
    let mut out = args;
    out.splice(pos + 1..pos + 1, injected);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_pairs_and_comments() {
        let m = parse("# params\nc = 1\n\nn=5\n--rho=2\n").unwrap();
        assert_eq!(m["c"], "1");
        assert_eq!(m["n"], "5");
        assert_eq!(m["rho"], "2");
        assert!(parse("oops").is_err());
    }

    #[test]
    fn finds_path() {
        let a: Vec<String> = ["linkop", "eval", "--config", "x.cfg"].map(String::from).to_vec();
        assert_eq!(config_path(&a).as_deref(), Some("x.cfg"));
        let a: Vec<String> = ["linkop", "--config=y.cfg", "eval"].map(String::from).to_vec();
        assert_eq!(config_path(&a).as_deref(), Some("y.cfg"));
    }
}
