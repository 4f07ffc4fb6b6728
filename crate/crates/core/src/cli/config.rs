//! `key = value` configuration files mirroring command flags.

use std::ffi::OsString;

/// Flags from a configuration text, in file order.
pub fn parse_config(text: &str) -> Result<Vec<(String, String)>, String> {
    let mut out = Vec::new();
    for (no, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| format!("config line {}: expected `key = value`", no + 1))?;
        let key = k.trim().replace('_', "-");
        let value = v.trim().trim_matches('"').to_string();
        if key.is_empty() || value.is_empty() {
            return Err(format!("config line {}: empty key or value", no + 1));
        }
        if key == "config" {
            return Err(format!("config line {}: nested config files are not supported", no + 1));
        }
        out.push((key, value));
    }
    Ok(out)
}

/// Replace `--config PATH` by the file's flags, placed before the remaining flags so those override it.
pub fn expand_config(args: Vec<OsString>) -> Result<Vec<OsString>, String> {
    let mut path = None;
    let mut rest = Vec::with_capacity(args.len());
    let mut it = args.into_iter();
    while let Some(a) = it.next() {
        let s = a.to_string_lossy().into_owned();
        if s == "--config" {
            path = Some(it.next().ok_or("--config needs a path")?.to_string_lossy().into_owned());
        } else if let Some(p) = s.strip_prefix("--config=") {
            path = Some(p.to_string());
        } else {
            rest.push(a);
        }
    }
    let Some(path) = path else { return Ok(rest) };
    let text = std::fs::read_to_string(&path).map_err(|e| format!("cannot read config {path}: {e}"))?;
    let flags = parse_config(&text)?;
    // Program name and subcommand come first.
    let split = rest.len().min(2);
    let mut merged: Vec<OsString> = rest[..split].to_vec();
    for (k, v) in flags {
        merged.push(format!("--{k}").into());
        merged.push(v.into());
    }
    merged.extend_from_slice(&rest[split..]);
    Ok(merged)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_lines_and_comments() {
        let flags = parse_config("# run\nseed = 7\nnlist = 8,16 # short\n\ntrials=3\n").unwrap();
        assert_eq!(
            flags,
            vec![("seed".into(), "7".into()), ("nlist".into(), "8,16".into()), ("trials".into(), "3".into())]
        );
        assert!(parse_config("seed 7").is_err());
        assert!(parse_config("config = x").is_err());
        assert_eq!(parse_config("p_1 = 2").unwrap()[0].0, "p-1");
    }

    #[test]
    fn file_flags_precede_command_line() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("run.cfg");
        std::fs::write(&path, "seed = 3\ncases = 2\n").unwrap();
        let args: Vec<OsString> = ["bht-lab", "verify-bht", "--config", path.to_str().unwrap(), "--seed", "9"]
            .iter()
            .map(OsString::from)
            .collect();
        let merged: Vec<String> = expand_config(args).unwrap().iter().map(|a| a.to_string_lossy().into()).collect();
        assert_eq!(merged, ["bht-lab", "verify-bht", "--seed", "3", "--cases", "2", "--seed", "9"]);
    }
}
