use std::fmt;
use std::str::FromStr;

use rand::Rng;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::graph::{Graph, Weight};
use crate::search::seeded_rng;

use super::ParsedGraph;

/// Largest weight produced by either synthetic family.
pub const FAMILY_MAX_WEIGHT: Weight = 200;

/// Where vertex weights come from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WeightMode {
    File,
    /// `((id - 1) mod 200) + 1` of the file id.
    FamilyA,
    /// Uniform on `1..=200` from the given seed.
    FamilyB(u64),
}

impl fmt::Display for WeightMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WeightMode::File => f.write_str("file"),
            WeightMode::FamilyA => f.write_str("family-a"),
            WeightMode::FamilyB(seed) => write!(f, "family-b:{seed}"),
        }
    }
}

impl FromStr for WeightMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "file" => Ok(WeightMode::File),
            "family-a" => Ok(WeightMode::FamilyA),
            _ => s
                .strip_prefix("family-b:")
                .and_then(|seed| seed.parse().ok())
                .map(WeightMode::FamilyB)
                .ok_or_else(|| format!("unknown weight mode `{s}` (expected file, family-a or family-b:<seed>)")),
        }
    }
}

impl Serialize for WeightMode {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for WeightMode {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        String::deserialize(deserializer)?.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("weight mode `file` requested but the graph file carries no weights")]
pub struct MissingWeights;

pub fn family_a_weight(id: u64) -> Weight {
    ((id.max(1) - 1) % FAMILY_MAX_WEIGHT as u64) as Weight + 1
}

pub fn assign_weights_family_a(g: &Graph, ids: &[u64]) -> Graph {
    g.with_weights(ids.iter().map(|&id| family_a_weight(id)).collect()).expect("family weights are positive")
}

pub fn assign_weights_family_b(g: &Graph, seed: u64) -> Graph {
    let mut rng = seeded_rng(seed);
    g.with_weights(g.vertices().map(|_| rng.gen_range(1..=FAMILY_MAX_WEIGHT)).collect())
        .expect("family weights are positive")
}

/// Applies `mode` to a parsed graph. Without a mode, file weights are kept
/// when present and family A is used otherwise.
pub fn apply_weights(parsed: &ParsedGraph, mode: Option<WeightMode>) -> Result<Graph, MissingWeights> {
    match mode {
        Some(WeightMode::File) if !parsed.has_weights => Err(MissingWeights),
        Some(WeightMode::File) => Ok(parsed.graph.clone()),
        None if parsed.has_weights => Ok(parsed.graph.clone()),
        None | Some(WeightMode::FamilyA) => Ok(assign_weights_family_a(&parsed.graph, &parsed.ids)),
        Some(WeightMode::FamilyB(seed)) => Ok(assign_weights_family_b(&parsed.graph, seed)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn family_a_formula() {
        assert_eq!(family_a_weight(1), 1);
        assert_eq!(family_a_weight(200), 200);
        assert_eq!(family_a_weight(201), 1);
        assert_eq!(family_a_weight(350), 150);
    }

    #[test]
    fn family_b_is_seeded_and_bounded() {
        let g = Graph::new(100_000, &[], vec![1; 100_000]).unwrap();
        let a = assign_weights_family_b(&g, 4);
        assert_eq!(a, assign_weights_family_b(&g, 4));
        assert!(a.weights().iter().all(|&w| (1..=200).contains(&w)));
        let mean = a.total_weight() as f64 / 1e5;
        assert!((99.0..=102.0).contains(&mean), "mean {mean}");
    }

    #[test]
    fn modes_parse_and_print() {
        for m in [WeightMode::File, WeightMode::FamilyA, WeightMode::FamilyB(7)] {
            assert_eq!(m.to_string().parse::<WeightMode>().unwrap(), m);
        }
        assert!("family-b".parse::<WeightMode>().is_err());
        assert!("family-b:x".parse::<WeightMode>().is_err());
    }

    #[test]
    fn default_mode_follows_file() {
        let unweighted = super::super::parse_metis("2 1\n2\n1\n").unwrap();
        assert_eq!(apply_weights(&unweighted, None).unwrap().weights(), &[1, 2]);
        assert_eq!(apply_weights(&unweighted, Some(WeightMode::File)), Err(MissingWeights));
        let weighted = super::super::parse_metis("2 1 10\n7 2\n9 1\n").unwrap();
        assert_eq!(apply_weights(&weighted, None).unwrap().weights(), &[7, 9]);
        assert_eq!(apply_weights(&weighted, Some(WeightMode::FamilyA)).unwrap().weights(), &[1, 2]);
    }
}
