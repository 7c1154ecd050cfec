#![allow(dead_code)]

use std::collections::BTreeMap;
use std::path::PathBuf;

use lhode::derivation::{derive, instances, Derivation, Instance, StructureRelation};
use lhode::expr::parse_xpoly;
use lhode::family::LHFamily;
use lhode::reduction::reduce_ode;
use lhode::{RatFun, XPoly};
use serde_json::Value;

pub fn golden(file: &str) -> Value {
    let path: PathBuf = [env!("CARGO_MANIFEST_DIR"), "tests", "goldens", file].iter().collect();
    let text = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    serde_json::from_str(&text).expect("golden json")
}

pub fn family(name: &str) -> LHFamily {
    LHFamily::bundled(name).unwrap()
}

pub fn xp(f: &LHFamily, s: &str) -> XPoly {
    parse_xpoly(s, &f.ring).unwrap_or_else(|e| panic!("{s}: {e}"))
}

pub fn xps(f: &LHFamily, items: &[&str]) -> Vec<XPoly> {
    items.iter().map(|s| xp(f, s)).collect()
}

/// A JSON object of expressions, parsed in the family ring.
pub fn expr_map(f: &LHFamily, v: &Value) -> BTreeMap<String, XPoly> {
    v.as_object()
        .expect("object")
        .iter()
        .map(|(k, s)| (k.clone(), xp(f, s.as_str().expect("string"))))
        .collect()
}

/// Pick named entries in order.
pub fn pick(map: &BTreeMap<String, XPoly>, keys: &[&str]) -> Vec<XPoly> {
    keys.iter().map(|k| map.get(*k).unwrap_or_else(|| panic!("missing {k}")).clone()).collect()
}

pub fn all_derivations(f: &LHFamily) -> Vec<Derivation> {
    instances(f, None).unwrap().into_iter().map(|i| derive(f, i.at()).unwrap()).collect()
}

pub fn find<'a>(ds: &'a [Derivation], inst: Instance) -> &'a Derivation {
    ds.iter().find(|d| d.instance() == inst).unwrap_or_else(|| panic!("no instance {inst:?}"))
}

pub fn branch(modulus: i64, residue: i64, min_n: i64) -> Instance {
    Instance::Branch { modulus, residue, min_n }
}

pub fn mismatches(ours: &[XPoly], gold: &[XPoly]) -> Vec<usize> {
    lhode::derivation::disagreements(ours, gold)
}

pub fn unit(ours: &[XPoly], gold: &[XPoly]) -> Option<RatFun> {
    lhode::derivation::common_unit(ours, gold)
}

pub fn reduced(ode: &lhode::derivation::OdeResult) -> Vec<XPoly> {
    reduce_ode(ode).unwrap().reduced
}

/// Relation of `level` with its coefficients replaced by `gold` entries.
pub fn relation_from(level: usize, template: &StructureRelation, gold: &BTreeMap<String, XPoly>) -> StructureRelation {
    let mut rel = template.clone();
    rel.g0 = gold[&format!("G0{level}")].clone();
    rel.g1 = gold[&format!("G1{level}")].clone();
    rel.h = gold[&format!("H{level}")].clone();
    for j in 0..level {
        rel.m[j] = gold[&format!("M{j}{level}")].clone();
    }
    rel
}

pub mod props;
pub mod strategies;
