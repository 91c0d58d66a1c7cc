#![allow(dead_code)]

use foidx::{Automorphism, Options};

pub fn fixture_text(name: &str) -> String {
    let path = format!("{}/../../fixtures/{name}.aut", env!("CARGO_MANIFEST_DIR"));
    std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{path}: {e}"))
}

pub fn fixture(name: &str) -> Automorphism {
    Automorphism::parse(&fixture_text(name)).unwrap()
}

pub fn opts(max_k: Option<u32>, early_exit: bool, budget: usize) -> Options {
    Options { max_k, early_exit, budget }
}
