//! Memoised polymorphism enumeration under `$MINIONLAB_CACHE`.
//!
//! A cache file holds the template text, the arity and one polymorphism table
//! per line. A file whose header does not match is ignored and rewritten.

use std::path::PathBuf;

use minionlab_core::pcsp::{enumerate_polymorphisms, Polymorphism};
use minionlab_core::Template;

use crate::Outcome;

pub const CACHE_ENV: &str = "MINIONLAB_CACHE";

fn fnv1a(bytes: &[u8]) -> u64 {
    bytes.iter().fold(0xcbf2_9ce4_8422_2325, |h, &b| (h ^ b as u64).wrapping_mul(0x0100_0000_01b3))
}

fn header(template_text: &str, arity: usize) -> String {
    format!("{}\n--- arity={arity}\n", template_text.trim_end())
}

fn path_for(dir: &std::path::Path, template_text: &str, arity: usize) -> PathBuf {
    dir.join(format!("pol-{:016x}-{arity}.txt", fnv1a(template_text.as_bytes())))
}

fn load(path: &std::path::Path, head: &str, t: &Template, arity: usize) -> Option<Vec<Polymorphism>> {
    let text = std::fs::read_to_string(path).ok()?;
    let body = text.strip_prefix(head)?;
    body.lines()
        .map(|line| {
            let table = line.split_whitespace().map(|d| d.parse().ok()).collect::<Option<Vec<u32>>>()?;
            Polymorphism::new(arity, t.a().universe(), t.b().universe(), table).ok()
        })
        .collect()
}

/// Polymorphisms of `t` at `arity`, and whether they came from the cache.
pub fn polymorphisms(t: &Template, template_text: &str, arity: usize) -> Outcome<(Vec<Polymorphism>, bool)> {
    let dir = std::env::var_os(CACHE_ENV).map(PathBuf::from);
    let head = header(template_text, arity);
    if let Some(dir) = &dir {
        if let Some(polys) = load(&path_for(dir, template_text, arity), &head, t, arity) {
            return Ok((polys, true));
        }
    }
    let polys = enumerate_polymorphisms(t, arity)?;
    if let Some(dir) = dir {
        std::fs::create_dir_all(&dir)?;
        let mut body = head;
        for p in &polys {
            body.push_str(&super::commands::join(p.table()));
            body.push('\n');
        }
        let path = path_for(&dir, template_text, arity);
        let tmp = path.with_extension(format!("tmp{}", std::process::id()));
        std::fs::write(&tmp, body)?;
        std::fs::rename(&tmp, &path)?;
    }
    Ok((polys, false))
}
