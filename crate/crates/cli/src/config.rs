//! `key=value` configuration files merged beneath command-line flags.

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use crate::CliError;

/// Parse `key = value` lines; `#` starts a comment.
pub fn parse_config(text: &str, path: &Path) -> Result<Vec<(String, String)>, CliError> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line.split_once('=').ok_or_else(|| {
            CliError::Usage(format!("{}:{}: expected key=value, got `{line}`", path.display(), i + 1))
        })?;
        let key = k.trim().trim_start_matches("--").replace('_', "-");
        if key.is_empty() || key == "config" {
            return Err(CliError::Usage(format!("{}:{}: invalid key `{}`", path.display(), i + 1, k.trim())));
        }
        out.push((key, v.trim().to_string()));
    }
    Ok(out)
}

fn config_path(argv: &[OsString]) -> Option<PathBuf> {
    let mut it = argv.iter().skip(1);
    while let Some(a) = it.next() {
        let s = a.to_string_lossy();
        if s == "--config" {
            return it.next().map(PathBuf::from);
        }
        if let Some(p) = s.strip_prefix("--config=") {
            return Some(PathBuf::from(p));
        }
    }
    None
}

fn has_flag(argv: &[OsString], key: &str) -> bool {
    let long = format!("--{key}");
    let eq = format!("--{key}=");
    argv.iter().skip(1).any(|a| {
        let s = a.to_string_lossy();
        s == long.as_str() || s.starts_with(eq.as_str())
    })
}

/// Append config entries not already given on the command line.
pub fn merge_config(mut argv: Vec<OsString>) -> Result<Vec<OsString>, CliError> {
    let Some(path) = config_path(&argv) else {
        return Ok(argv);
    };
    let text = std::fs::read_to_string(&path).map_err(|e| CliError::io(&path, e))?;
    for (key, value) in parse_config(&text, &path)? {
        if has_flag(&argv, &key) {
            continue;
        }
        if key == "strict" {
            match value.as_str() {
                "true" | "1" | "yes" => argv.push("--strict".into()),
                "false" | "0" | "no" => {}
                _ => return Err(CliError::Usage(format!("strict expects true or false, got `{value}`"))),
            }
            continue;
        }
        argv.push(format!("--{key}").into());
        argv.push(value.into());
    }
    Ok(argv)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_comments_and_underscores() {
        let c = parse_config("# run\nalpha = 0.6\nn_max=1e6 # cap\n\n", Path::new("c")).unwrap();
        assert_eq!(c, vec![("alpha".into(), "0.6".into()), ("n-max".into(), "1e6".into())]);
        assert!(parse_config("alpha 0.6", Path::new("c")).is_err());
    }

    #[test]
    fn flags_win() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("run.cfg");
        std::fs::write(&p, "alpha=0.8\nb0=2\nstrict=true\n").unwrap();
        let argv: Vec<OsString> =
            ["jacobi", "density", "--alpha", "0.6", "--config", p.to_str().unwrap()].iter().map(Into::into).collect();
        let merged = merge_config(argv).unwrap();
        let s: Vec<String> = merged.iter().map(|a| a.to_string_lossy().into_owned()).collect();
        assert_eq!(s.iter().filter(|a| *a == "--alpha").count(), 1);
        assert!(s.windows(2).any(|w| w[0] == "--b0" && w[1] == "2"));
        assert!(s.contains(&"--strict".to_string()));
    }
}
