//! JSON file formats: toy tables, system specs, structure families and
//! run traces.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::Value as Json;

use truestage::ordinal::parse_ordinal;
use truestage::structures::{Branch, EtaTree, FinStructure, Relation};
use truestage::system::{Enumerate, Extend, Restraint, States, Tree};
use truestage::{ChainLink, Composite, FinString, FunctionalTable, Ordinal, Run, StageRecord, ToyBehavior, Value};

use crate::CliError;

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|source| CliError::Io { path: path.display().to_string(), source })
}

fn parse<T: for<'de> Deserialize<'de>>(path: &Path, text: &str) -> Result<T, CliError> {
    serde_json::from_str(text).map_err(|source| CliError::Json { path: path.display().to_string(), source })
}

/// A value as JSON: naturals are numbers, codes are arrays.
pub fn value_to_json(v: &Value) -> Json {
    match v {
        Value::Nat(n) => Json::from(*n),
        Value::Code(s) => string_to_json(s),
    }
}

pub fn string_to_json(s: &FinString) -> Json {
    Json::Array(s.iter().map(value_to_json).collect())
}

pub fn value_from_json(j: &Json) -> Result<Value, CliError> {
    match j {
        Json::Number(n) => n.as_u64().map(Value::Nat).ok_or_else(|| CliError::Format(format!("{n} is not a natural number"))),
        Json::Array(items) => {
            let entries = items.iter().map(value_from_json).collect::<Result<Vec<_>, _>>()?;
            Ok(Value::Code(FinString::from_vec(entries)))
        }
        other => Err(CliError::Format(format!("{other} is neither a natural number nor an array"))),
    }
}

#[derive(Debug, Deserialize, Serialize)]
struct GuardEntry {
    pos: usize,
    equals: Json,
}

#[derive(Debug, Deserialize, Serialize)]
struct TableEntry {
    index: u64,
    halt_step: Option<usize>,
    output: Json,
    #[serde(default)]
    guard: Vec<GuardEntry>,
}

/// Reads a toy table: an array of `{index, halt_step, output, guard}`.
pub fn read_table(path: &Path) -> Result<FunctionalTable, CliError> {
    let entries: Vec<TableEntry> = parse(path, &read(path)?)?;
    let mut out = Vec::with_capacity(entries.len());
    for e in entries {
        let guard = e.guard.iter().map(|g| Ok((g.pos, value_from_json(&g.equals)?))).collect::<Result<Vec<_>, CliError>>()?;
        out.push((e.index, ToyBehavior { halt_step: e.halt_step, output: value_from_json(&e.output)?, guard }));
    }
    Ok(FunctionalTable::toy(out))
}

/// A bundled table name, `universal`, or a path to a toy-table file.
pub fn resolve_table(name: &str) -> Result<FunctionalTable, CliError> {
    if name == "universal" {
        return Ok(FunctionalTable::Universal);
    }
    if let Some(t) = truestage::fixtures::table(name) {
        return Ok(t);
    }
    let path = Path::new(name);
    if path.exists() {
        return read_table(path);
    }
    Err(CliError::Format(format!(
        "unknown table {name:?}; expected one of {}, universal, or a table file",
        truestage::fixtures::TABLE_NAMES.join(", ")
    )))
}

#[derive(Debug, Deserialize, Serialize, PartialEq, Eq)]
#[serde(tag = "name", rename_all = "snake_case")]
enum StatesSpec {
    All,
    UpTo { max: u64 },
}

#[derive(Debug, Deserialize, Serialize, PartialEq, Eq)]
#[serde(tag = "name", rename_all = "snake_case")]
enum TreeSpec {
    Any,
    Bounded,
}

#[derive(Debug, Deserialize, Serialize, PartialEq, Eq)]
#[serde(tag = "name", rename_all = "snake_case")]
enum RestraintSpec {
    All,
    Numeric,
    Congruence { cap: u32 },
}

#[derive(Debug, Deserialize, Serialize, PartialEq, Eq)]
#[serde(tag = "name", rename_all = "snake_case")]
enum ExtendSpec {
    Constant { value: u64 },
    Successor,
    Congruent { cap: u32 },
    BreakAt { at: usize, value: u64, inner: Box<ExtendSpec> },
}

#[derive(Debug, Deserialize, Serialize, PartialEq, Eq)]
#[serde(tag = "name", rename_all = "snake_case")]
enum EnumerateSpec {
    Nothing,
    Below,
    BitLength,
}

fn default_enumerate() -> EnumerateSpec {
    EnumerateSpec::Below
}

/// The file form of a [`Composite`] system.
#[derive(Debug, Deserialize, Serialize, PartialEq, Eq)]
pub struct SystemSpec {
    eta: String,
    states: StatesSpec,
    tree: TreeSpec,
    restraint: RestraintSpec,
    extend: ExtendSpec,
    #[serde(default = "default_enumerate")]
    enumerate: EnumerateSpec,
}

fn extend_of(e: &ExtendSpec) -> Extend {
    match e {
        ExtendSpec::Constant { value } => Extend::Constant(*value),
        ExtendSpec::Successor => Extend::Successor,
        ExtendSpec::Congruent { cap } => Extend::Congruent { cap: *cap },
        ExtendSpec::BreakAt { at, value, inner } => Extend::BreakAt { at: *at, value: *value, inner: Box::new(extend_of(inner)) },
    }
}

fn extend_spec(e: &Extend) -> ExtendSpec {
    match e {
        Extend::Constant(value) => ExtendSpec::Constant { value: *value },
        Extend::Successor => ExtendSpec::Successor,
        Extend::Congruent { cap } => ExtendSpec::Congruent { cap: *cap },
        Extend::BreakAt { at, value, inner } => ExtendSpec::BreakAt { at: *at, value: *value, inner: Box::new(extend_spec(inner)) },
    }
}

impl SystemSpec {
    pub fn to_composite(&self) -> Result<Composite, CliError> {
        Ok(Composite {
            eta: parse_ordinal(&self.eta)?,
            states: match self.states {
                StatesSpec::All => States::All,
                StatesSpec::UpTo { max } => States::UpTo(max),
            },
            tree: match self.tree {
                TreeSpec::Any => Tree::Any,
                TreeSpec::Bounded => Tree::Bounded,
            },
            restraint: match self.restraint {
                RestraintSpec::All => Restraint::All,
                RestraintSpec::Numeric => Restraint::Numeric,
                RestraintSpec::Congruence { cap } => Restraint::Congruence { cap },
            },
            extend: extend_of(&self.extend),
            enumerate: match self.enumerate {
                EnumerateSpec::Nothing => Enumerate::Nothing,
                EnumerateSpec::Below => Enumerate::Below,
                EnumerateSpec::BitLength => Enumerate::BitLength,
            },
        })
    }

    pub fn from_composite(c: &Composite) -> SystemSpec {
        SystemSpec {
            eta: c.eta.to_string(),
            states: match c.states {
                States::All => StatesSpec::All,
                States::UpTo(max) => StatesSpec::UpTo { max },
            },
            tree: match c.tree {
                Tree::Any => TreeSpec::Any,
                Tree::Bounded => TreeSpec::Bounded,
            },
            restraint: match c.restraint {
                Restraint::All => RestraintSpec::All,
                Restraint::Numeric => RestraintSpec::Numeric,
                Restraint::Congruence { cap } => RestraintSpec::Congruence { cap },
            },
            extend: extend_spec(&c.extend),
            enumerate: match c.enumerate {
                Enumerate::Nothing => EnumerateSpec::Nothing,
                Enumerate::Below => EnumerateSpec::Below,
                Enumerate::BitLength => EnumerateSpec::BitLength,
            },
        }
    }
}

/// Reads a system spec file, or a built-in system by name.
pub fn read_system(arg: &str, eta: &Ordinal) -> Result<Composite, CliError> {
    if let Some(c) = Composite::builtin(arg, eta.clone()) {
        return Ok(c);
    }
    let path = Path::new(arg);
    let spec: SystemSpec = parse(path, &read(path)?)?;
    spec.to_composite()
}

#[derive(Debug, Deserialize, Serialize)]
struct MemberFile {
    /// The levels where the branch has a 1.
    branch: Vec<u64>,
    universe: usize,
    /// One tuple list per relation of the signature.
    relations: Vec<Vec<Vec<usize>>>,
}

#[derive(Debug, Deserialize, Serialize)]
struct FamilyFile {
    /// The arity of every relation.
    signature: Vec<usize>,
    levels: u64,
    structures: Vec<MemberFile>,
}

/// Reads a structure family and checks the tree condition.
pub fn read_family(path: &Path) -> Result<EtaTree, CliError> {
    let file: FamilyFile = parse(path, &read(path)?)?;
    let mut family = BTreeMap::new();
    for m in file.structures {
        if m.relations.len() != file.signature.len() {
            return Err(CliError::Format(format!(
                "branch {:?} lists {} relations for a signature of {}",
                m.branch,
                m.relations.len(),
                file.signature.len()
            )));
        }
        let relations = file
            .signature
            .iter()
            .zip(m.relations)
            .map(|(&arity, tuples)| Relation { arity, tuples: tuples.into_iter().collect() })
            .collect();
        let branch = Branch::from_ones(m.branch);
        let structure = FinStructure::new(m.universe, relations)?;
        if family.insert(branch.clone(), structure).is_some() {
            return Err(CliError::Format(format!("branch {branch} listed twice")));
        }
    }
    Ok(EtaTree::new(file.levels, family)?)
}

#[derive(Debug, Deserialize, Serialize, PartialEq, Eq)]
struct LinkLine {
    s: usize,
    xi: String,
}

/// One line of a trace file.
#[derive(Debug, Deserialize, Serialize, PartialEq, Eq)]
pub struct TraceLine {
    stage: usize,
    state: u64,
    chain: Vec<LinkLine>,
    enumerated: Vec<u64>,
}

/// The trace of a run, one JSON object per stage.
pub fn trace_lines(run: &Run, enumerate: impl Fn(u64) -> Vec<u64>) -> Vec<String> {
    run.trace
        .iter()
        .map(|rec| {
            let mut enumerated = enumerate(rec.state);
            enumerated.sort_unstable();
            enumerated.dedup();
            let line = TraceLine {
                stage: rec.stage,
                state: rec.state,
                chain: rec.chain.iter().map(|l| LinkLine { s: l.s, xi: l.xi.to_string() }).collect(),
                enumerated,
            };
            serde_json::to_string(&line).expect("trace lines serialize")
        })
        .collect()
}

/// Rebuilds a run from its trace, with the tokens each line recorded.
pub fn read_trace(path: &Path) -> Result<(Run, Vec<Vec<u64>>), CliError> {
    let text = read(path)?;
    let mut run = Run::default();
    let mut tokens = Vec::new();
    for (i, raw) in text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty()) {
        let line: TraceLine = serde_json::from_str(raw)
            .map_err(|source| CliError::Json { path: format!("{}:{}", path.display(), i + 1), source })?;
        if line.stage != run.len() {
            return Err(CliError::Format(format!("line {} records stage {} where {} was expected", i + 1, line.stage, run.len())));
        }
        let mut chain = Vec::with_capacity(line.chain.len());
        for l in &line.chain {
            let state = *run
                .states
                .get(l.s)
                .ok_or_else(|| CliError::Format(format!("line {} links to stage {} before it is recorded", i + 1, l.s)))?;
            chain.push(ChainLink { s: l.s, xi: parse_ordinal(&l.xi)?, state });
        }
        run.states.push(line.state);
        run.trace.push(StageRecord { stage: line.stage, state: line.state, chain });
        tokens.push(line.enumerated);
    }
    Ok((run, tokens))
}

#[cfg(test)]
mod tests {
    use super::*;
    use truestage::system::BUILTIN_SYSTEMS;

    #[test]
    fn values_round_trip_through_json() {
        let s = truestage::value::parse_string("⟨0, [1,[2]], []⟩").unwrap();
        let j = string_to_json(&s);
        assert_eq!(j.to_string(), "[0,[1,[2]],[]]");
        assert_eq!(value_from_json(&j).unwrap(), Value::Code(s));
        assert!(value_from_json(&Json::from(-1)).is_err());
    }

    #[test]
    fn builtin_systems_round_trip_through_specs() {
        for name in BUILTIN_SYSTEMS {
            let c = Composite::builtin(name, Ordinal::omega()).unwrap();
            let text = serde_json::to_string(&SystemSpec::from_composite(&c)).unwrap();
            let back: SystemSpec = serde_json::from_str(&text).unwrap();
            assert_eq!(back.to_composite().unwrap(), c, "{name}");
        }
    }
}
