use std::collections::BTreeMap;

use serde::Deserialize;

pub(super) const FORMAT: &str = "qpainleve-catalog";
pub(super) const VERSION: u32 = 1;

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
pub(super) struct CatalogFile {
    pub format: String,
    pub version: u32,
    pub label: String,
    pub system: SystemRec,
    #[serde(rename = "chart")]
    pub charts: Vec<ChartRec>,
    #[serde(default)]
    pub characterization: Option<CharacterizationRec>,
    pub nagoya: NagoyaRec,
    #[serde(default)]
    pub frame: Option<PairRec>,
    #[serde(rename = "symmetry", default)]
    pub symmetries: Vec<SymmetryRec>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
pub(super) struct SystemRec {
    pub hamiltonian: String,
    pub time_weight: String,
    pub params: Vec<String>,
    pub constraint: String,
    pub normalize: Assignment,
    #[serde(default)]
    pub normalize_before_solve: bool,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
pub(super) struct Assignment {
    pub symbol: String,
    pub value: String,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
pub(super) struct ChartRec {
    pub index: usize,
    #[serde(default)]
    pub base: Option<usize>,
    pub vars: [String; 2],
    pub laurent: String,
    pub forward: [String; 2],
    pub backward: [String; 2],
    #[serde(default)]
    pub as_printed: Option<[String; 2]>,
    pub golden: String,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
pub(super) struct CharacterizationRec {
    pub printed: BTreeMap<String, String>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
pub(super) struct NagoyaRec {
    pub hamiltonian: String,
    pub prefactor: String,
    pub alpha_constraint: String,
    pub dependent: Assignment,
    #[serde(rename = "map")]
    pub maps: Vec<MapRec>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
pub(super) struct MapRec {
    pub name: String,
    pub assign: BTreeMap<String, String>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
pub(super) struct PairRec {
    pub table: [String; 2],
    pub inverse: [String; 2],
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
pub(super) struct SymmetryRec {
    pub name: String,
    pub alpha: BTreeMap<String, String>,
    pub t: String,
    pub q: String,
    pub p: String,
    pub laurent: String,
    #[serde(default)]
    pub straighten: Option<StraightenRec>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
pub(super) struct StraightenRec {
    pub vars: [String; 2],
    pub forward: [String; 2],
    pub backward: [String; 2],
}
