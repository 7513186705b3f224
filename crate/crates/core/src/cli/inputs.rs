//! Resolution of numbered input files.

use std::fs;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};

/// Expands `spec` into an ordered file list. Accepted forms:
///
/// * a directory: every file whose extension is in `exts`, sorted by name;
/// * a printf-style pattern such as `frames/img_%04d.png`, counted up from
///   0 (or 1) until the first missing index;
/// * a single-`*` glob in the file name, e.g. `out/v_o_*.flo`, sorted;
/// * a plain file path.
pub fn resolve_inputs(spec: &str, exts: &[&str]) -> Result<Vec<PathBuf>> {
    let path = Path::new(spec);
    if path.is_dir() {
        let mut files: Vec<PathBuf> = fs::read_dir(path)?
            .filter_map(|e| e.ok().map(|e| e.path()))
            .filter(|p| p.is_file() && has_ext(p, exts))
            .collect();
        files.sort();
        return Ok(files);
    }
    if let Some((prefix, width, suffix)) = split_printf(spec) {
        let name = |i: usize| PathBuf::from(format!("{prefix}{i:0width$}{suffix}"));
        let start = (0..=1).find(|&i| name(i).is_file());
        let mut files = Vec::new();
        if let Some(start) = start {
            let mut i = start;
            while name(i).is_file() {
                files.push(name(i));
                i += 1;
            }
        }
        return Ok(files);
    }
    let file_name = path.file_name().and_then(|n| n.to_str()).unwrap_or("");
    if let Some((head, tail)) = file_name.split_once('*') {
        let dir = match path.parent() {
            Some(p) if !p.as_os_str().is_empty() => p.to_path_buf(),
            _ => PathBuf::from("."),
        };
        if !dir.is_dir() {
            return Ok(Vec::new());
        }
        let mut files: Vec<PathBuf> = fs::read_dir(&dir)?
            .filter_map(|e| e.ok().map(|e| e.path()))
            .filter(|p| {
                p.is_file()
                    && p.file_name().and_then(|n| n.to_str()).is_some_and(|n| {
                        n.len() >= head.len() + tail.len()
                            && n.starts_with(head)
                            && n.ends_with(tail)
                    })
            })
            .collect();
        files.sort();
        return Ok(files);
    }
    if path.is_file() {
        return Ok(vec![path.to_path_buf()]);
    }
    Err(Error::Config(format!("no input found at '{spec}'")))
}

fn has_ext(p: &Path, exts: &[&str]) -> bool {
    p.extension()
        .and_then(|e| e.to_str())
        .is_some_and(|e| exts.iter().any(|x| x.eq_ignore_ascii_case(e)))
}

/// Splits `a%04db` into `("a", 4, "b")`; `%d` has width 0.
fn split_printf(spec: &str) -> Option<(&str, usize, &str)> {
    let at = spec.find('%')?;
    let rest = &spec[at + 1..];
    let digits = rest.chars().take_while(char::is_ascii_digit).count();
    if !rest[digits..].starts_with('d') {
        return None;
    }
    let width = if digits == 0 {
        0
    } else {
        rest[..digits].parse().ok()?
    };
    Some((&spec[..at], width, &rest[digits + 1..]))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn printf_split() {
        assert_eq!(split_printf("a/f_%04d.png"), Some(("a/f_", 4, ".png")));
        assert_eq!(split_printf("%d.pgm"), Some(("", 0, ".pgm")));
        assert_eq!(split_printf("100%.png"), None);
    }

    #[test]
    fn resolves_all_forms() {
        let dir = tempfile::tempdir().unwrap();
        for i in 1..=3 {
            fs::write(dir.path().join(format!("f_{i:03}.png")), b"x").unwrap();
        }
        fs::write(dir.path().join("notes.txt"), b"x").unwrap();
        let d = dir.path().to_str().unwrap();

        let listed = resolve_inputs(d, &["png"]).unwrap();
        assert_eq!(listed.len(), 3);
        let numbered = resolve_inputs(&format!("{d}/f_%03d.png"), &["png"]).unwrap();
        assert_eq!(numbered, listed);
        let globbed = resolve_inputs(&format!("{d}/f_*.png"), &["png"]).unwrap();
        assert_eq!(globbed, listed);
        assert!(resolve_inputs(&format!("{d}/missing.png"), &["png"]).is_err());
    }
}
