//! JSON files for instances and solutions.
//!
//! ```json
//! {"kind": "3sp", "n": 9, "sets": [[0,1,2], ...], "k": 3, "planted": {...}, "seed": 7}
//! {"kind": "p2", "n": 9, "edges": [[0,1], ...], "k": 3}
//! {"kind": "3dm", "blocks": [3,3,3], "sets": [[0,3,6], ...], "k": 3}
//! ```

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{
    validate_instance, Graph, Instance, Planted, Problem, ThreeSetFamily, TripartiteFamily,
};
use crate::oracles::Solution;

#[derive(Serialize, Deserialize)]
#[serde(tag = "kind", deny_unknown_fields)]
enum Wire {
    #[serde(rename = "3sp")]
    ThreeSet {
        n: usize,
        sets: Vec<[usize; 3]>,
        k: usize,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        planted: Option<Planted>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        seed: Option<u64>,
    },
    #[serde(rename = "p2")]
    P2 {
        n: usize,
        edges: Vec<[usize; 2]>,
        k: usize,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        planted: Option<Planted>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        seed: Option<u64>,
    },
    #[serde(rename = "3dm")]
    Matching {
        blocks: [usize; 3],
        sets: Vec<[usize; 3]>,
        k: usize,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        planted: Option<Planted>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        seed: Option<u64>,
    },
}

impl From<&Instance> for Wire {
    fn from(i: &Instance) -> Self {
        let (k, planted, seed) = (i.k, i.planted.clone(), i.seed);
        match &i.problem {
            Problem::ThreeSet(f) => Wire::ThreeSet {
                n: f.n,
                sets: f.sets.clone(),
                k,
                planted,
                seed,
            },
            Problem::P2(g) => Wire::P2 {
                n: g.n,
                edges: g.edges.iter().map(|&(a, b)| [a, b]).collect(),
                k,
                planted,
                seed,
            },
            Problem::Matching(f) => Wire::Matching {
                blocks: f.blocks,
                sets: f.sets.clone(),
                k,
                planted,
                seed,
            },
        }
    }
}

impl TryFrom<Wire> for Instance {
    type Error = Error;
    fn try_from(w: Wire) -> Result<Self> {
        let (problem, k, planted, seed) = match w {
            Wire::ThreeSet {
                n,
                sets,
                k,
                planted,
                seed,
            } => (
                Problem::ThreeSet(ThreeSetFamily::new(n, sets)?),
                k,
                planted,
                seed,
            ),
            Wire::P2 {
                n,
                edges,
                k,
                planted,
                seed,
            } => (
                Problem::P2(Graph::new(n, edges.into_iter().map(|[a, b]| (a, b)))?),
                k,
                planted,
                seed,
            ),
            Wire::Matching {
                blocks,
                sets,
                k,
                planted,
                seed,
            } => (
                Problem::Matching(TripartiteFamily::new(blocks, sets)?),
                k,
                planted,
                seed,
            ),
        };
        let inst = Instance {
            problem,
            k,
            planted,
            seed,
        };
        let report = validate_instance(&inst);
        if report.is_empty() {
            Ok(inst)
        } else {
            Err(Error::InvalidInstance(report))
        }
    }
}

pub fn instance_to_json(instance: &Instance) -> String {
    serde_json::to_string_pretty(&Wire::from(instance)).expect("instances always serialize")
}

/// Parses and validates an instance.
pub fn instance_from_json(text: &str) -> Result<Instance> {
    let wire: Wire = serde_json::from_str(text)?;
    Instance::try_from(wire)
}

pub fn read_instance(path: impl AsRef<Path>) -> Result<Instance> {
    instance_from_json(&fs::read_to_string(path)?)
}

pub fn write_instance(path: impl AsRef<Path>, instance: &Instance) -> Result<()> {
    Ok(fs::write(path, instance_to_json(instance) + "\n")?)
}

/// Reads `{"paths": ...}` or `{"sets": ...}`; other fields, such as those of
/// a solve report, are ignored.
pub fn solution_from_json(text: &str) -> Result<Solution> {
    Ok(serde_json::from_str(text)?)
}

pub fn read_solution(path: impl AsRef<Path>) -> Result<Solution> {
    solution_from_json(&fs::read_to_string(path)?)
}

pub fn write_solution(path: impl AsRef<Path>, solution: &Solution) -> Result<()> {
    Ok(fs::write(path, serde_json::to_string(solution)? + "\n")?)
}
