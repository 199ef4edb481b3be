#![allow(dead_code)]

pub mod oracle;

use std::path::Path;

use capan_core::semantics::Program;
use capan_core::syntax::parse_labeled;

/// Corpus terms shipped with the repository, by file stem.
pub const CORPUS: [&str; 6] = ["linearity", "pingpong", "spawn", "deadcode", "behavior", "flood"];

pub fn corpus_source(name: &str) -> String {
    let p = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../corpus").join(format!("{name}.cap"));
    std::fs::read_to_string(p).unwrap()
}

pub fn program(src: &str) -> Program {
    Program::extract(&parse_labeled(src).unwrap_or_else(|e| panic!("{src}: {e}")))
}
