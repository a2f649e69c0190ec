//! Model presets shipped with the crate, in the model-spec JSON schema.

use crate::error::{Error, Result};
use crate::processes::ProcessModel;

/// `(name, json)` for every shipped preset.
pub const PRESETS: &[(&str, &str)] = &[
    ("iid_uniform", include_str!("../presets/iid_uniform.json")),
    ("iid_normal", include_str!("../presets/iid_normal.json")),
    ("gaussian_ma", include_str!("../presets/gaussian_ma.json")),
    (
        "gaussian_ma_interpolable",
        include_str!("../presets/gaussian_ma_interpolable.json"),
    ),
    ("doeblin_normal", include_str!("../presets/doeblin_normal.json")),
    ("doeblin_pareto", include_str!("../presets/doeblin_pareto.json")),
    ("markov_symmetric2", include_str!("../presets/markov_symmetric2.json")),
    ("markov_lazy3", include_str!("../presets/markov_lazy3.json")),
    ("markov_forcing3", include_str!("../presets/markov_forcing3.json")),
    ("markov_iid_rows", include_str!("../presets/markov_iid_rows.json")),
];

pub fn preset_json(name: &str) -> Option<&'static str> {
    PRESETS.iter().find(|(n, _)| *n == name).map(|(_, j)| *j)
}

pub fn preset(name: &str) -> Result<ProcessModel> {
    let json = preset_json(name).ok_or_else(|| Error::Config(format!("unknown preset '{name}'")))?;
    ProcessModel::from_json(json)
}

/// All shipped finite-state chain presets.
pub fn markov_presets() -> Vec<(&'static str, ProcessModel)> {
    PRESETS
        .iter()
        .map(|(n, j)| (*n, ProcessModel::from_json(j).expect("shipped presets parse")))
        .filter(|(_, m)| m.as_chain().is_some())
        .collect()
}
