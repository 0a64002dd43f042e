#![allow(dead_code)]

use std::path::{Path, PathBuf};

use starkit::corpus::{parse_and_resolve, Corpus};
use starkit::{FinCategory, MorId, ObjId};

pub fn fixture_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures")
}

pub fn load(name: &str) -> Corpus {
    let text = std::fs::read_to_string(fixture_dir().join(name)).expect("fixture exists");
    parse_and_resolve(&text).expect("fixture resolves")
}

pub fn mor(cat: &FinCategory, name: &str) -> MorId {
    cat.find_morphism(name)
        .unwrap_or_else(|| panic!("no morphism {name} in {}", cat.name()))
}

pub fn obj(cat: &FinCategory, name: &str) -> ObjId {
    cat.find_object(name)
        .unwrap_or_else(|| panic!("no object {name} in {}", cat.name()))
}

pub fn names(cat: &FinCategory, ms: impl IntoIterator<Item = MorId>) -> Vec<String> {
    let mut v: Vec<String> = ms
        .into_iter()
        .map(|m| cat.morphism_name(m).to_string())
        .collect();
    v.sort();
    v
}
