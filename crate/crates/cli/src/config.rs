//! Merges a `key = value` config file into the command line.
//!
//! Keys are long flag names (`_` and `-` are interchangeable). Values are
//! inserted ahead of the user's own flags, so anything given on the command
//! line wins.

use std::ffi::OsString;
use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use clap::CommandFactory;
use telehazard::config::KeyValues;

use crate::Cli;

/// Root-level options that take a value.
const GLOBAL_WITH_VALUE: [&str; 4] = ["config", "out", "format", "seed"];

fn long_name(arg: &str) -> Option<(&str, Option<&str>)> {
    let body = arg.strip_prefix("--")?;
    Some(match body.split_once('=') {
        Some((k, v)) => (k, Some(v)),
        None => (body, None),
    })
}

fn find_config(args: &[String]) -> Option<PathBuf> {
    let mut it = args.iter().skip(1);
    while let Some(a) = it.next() {
        if let Some(("config", inline)) = long_name(a) {
            return match inline {
                Some(v) => Some(PathBuf::from(v)),
                None => it.next().map(PathBuf::from),
            };
        }
    }
    None
}

/// Index of the subcommand token, skipping global options and their values.
fn subcommand_index(args: &[String]) -> Option<usize> {
    let mut i = 1;
    while i < args.len() {
        let a = &args[i];
        match long_name(a) {
            Some((k, None)) if GLOBAL_WITH_VALUE.contains(&k) => i += 2,
            Some(_) => i += 1,
            None if a.starts_with('-') => i += 1,
            None => return Some(i),
        }
    }
    None
}

pub fn expand_args(raw: Vec<OsString>) -> Result<Vec<OsString>> {
    let args: Vec<String> = raw
        .into_iter()
        .map(|a| {
            a.into_string()
                .map_err(|a| anyhow::anyhow!("argument {a:?} is not valid UTF-8"))
        })
        .collect::<Result<_>>()?;
    let Some(path) = find_config(&args) else {
        return Ok(args.into_iter().map(OsString::from).collect());
    };
    let text = std::fs::read_to_string(&path).with_context(|| format!("cannot read config {}", path.display()))?;
    let kv = KeyValues::parse(&text)?;
    let Some(sub_at) = subcommand_index(&args) else {
        return Ok(args.into_iter().map(OsString::from).collect());
    };

    let root = Cli::command();
    let longs = |cmd: &clap::Command| -> Vec<String> {
        cmd.get_arguments()
            .filter_map(|a| a.get_long().map(str::to_string))
            .collect()
    };
    let global = longs(&root);
    let Some(sub) = root.find_subcommand(&args[sub_at]) else {
        return Ok(args.into_iter().map(OsString::from).collect());
    };
    let local = longs(sub);
    let known_anywhere = |name: &str| root.get_subcommands().any(|s| longs(s).iter().any(|l| l == name));

    let mut before = Vec::new();
    let mut after = Vec::new();
    for (key, value) in kv.iter() {
        let name = key.replace('_', "-");
        if name == "config" {
            continue;
        }
        let flag = format!("--{name}={value}");
        if global.contains(&name) {
            before.push(flag);
        } else if local.contains(&name) {
            after.push(flag);
        } else if !known_anywhere(&name) {
            bail!("config {}: unknown key `{key}`", path.display());
        }
    }

    let mut out = Vec::with_capacity(args.len() + before.len() + after.len());
    out.push(args[0].clone());
    out.extend(before);
    out.extend(args[1..=sub_at].iter().cloned());
    out.extend(after);
    out.extend(args[sub_at + 1..].iter().cloned());
    Ok(out.into_iter().map(OsString::from).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn strings(xs: &[&str]) -> Vec<String> {
        xs.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn locates_subcommand_after_globals() {
        let a = strings(&[
            "telehazard",
            "--seed",
            "4",
            "--format=report",
            "moments",
            "--t-max",
            "1",
        ]);
        assert_eq!(subcommand_index(&a), Some(4));
        assert_eq!(find_config(&a), None);
        let b = strings(&["telehazard", "band", "--config=x.cfg"]);
        assert_eq!(find_config(&b), Some(PathBuf::from("x.cfg")));
    }
}
