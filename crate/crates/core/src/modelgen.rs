//! Binary program over job starts and precomputed spaces, written in LP
//! format for external MILP solvers, and decoding of their solutions.
//!
//! `x_<j>_<i>` starts job `j` at interval `i`; `y_<i>_<ip>` bridges intervals
//! `i + 1 ..= ip - 1` with the cheapest switching `φ(i, ip)`. Every interval
//! strictly inside the horizon is covered exactly once. Indices in names are
//! 1-based.

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{compute_tec, Cost, Instance};
use crate::solver::{assemble_segments, SolveResult, SolveStats, SolveStatus};
use crate::spaces::SpacesTable;

pub const INTEGRALITY_TOLERANCE: f64 = 1e-6;
const TERMS_PER_LINE: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum VarKey {
    /// Job index (0-based) and start interval.
    Start {
        job: usize,
        interval: usize,
    },
    Space {
        from: usize,
        to: usize,
    },
}

impl VarKey {
    pub fn name(&self) -> String {
        match *self {
            Self::Start { job, interval } => format!("x_{}_{}", job + 1, interval),
            Self::Space { from, to } => format!("y_{from}_{to}"),
        }
    }

    pub fn parse(name: &str) -> Option<Self> {
        let mut parts = name.split('_');
        let kind = parts.next()?;
        let a: usize = parts.next()?.parse().ok()?;
        let b: usize = parts.next()?.parse().ok()?;
        if parts.next().is_some() {
            return None;
        }
        match kind {
            "x" if a >= 1 => Some(Self::Start {
                job: a - 1,
                interval: b,
            }),
            "y" => Some(Self::Space { from: a, to: b }),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum VarKind {
    X,
    Y,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VarInfo {
    pub kind: VarKind,
    /// 1-based job number.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub j: Option<usize>,
    pub i: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ip: Option<usize>,
    pub cost: Cost,
}

impl VarInfo {
    pub fn key(&self) -> Result<VarKey> {
        match (&self.kind, self.j, self.ip) {
            (VarKind::X, Some(j), None) if j >= 1 => Ok(VarKey::Start {
                job: j - 1,
                interval: self.i,
            }),
            (VarKind::Y, None, Some(ip)) => Ok(VarKey::Space {
                from: self.i,
                to: ip,
            }),
            _ => Err(Error::Parse(format!("malformed variable entry {self:?}"))),
        }
    }
}

/// Variable sidecar of an emitted model.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VarMap {
    /// Cost of the two boundary intervals, not part of the LP objective.
    pub constant_term: Cost,
    pub variables: BTreeMap<String, VarInfo>,
}

impl VarMap {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("varmap serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }
}

#[derive(Debug, Clone)]
pub struct IlpModel {
    pub lp_text: String,
    pub varmap: VarMap,
}

/// `model.lp` -> `model.map.json`.
pub fn sidecar_path(model: &Path) -> PathBuf {
    model.with_extension("map.json")
}

struct Var {
    key: VarKey,
    cost: Cost,
    first: usize,
    last: usize,
}

/// Builds the model. With `prune`, pairs marked in `table` are left out
/// (call [`SpacesTable::apply_pruning`] first).
pub fn emit_ilp_spaces(inst: &Instance, table: &SpacesTable, prune: bool) -> Result<IlpModel> {
    inst.check()?;
    let h = inst.horizon();
    let (t_on, t_off) = table.window();
    let mut vars = Vec::new();
    for (job, &p) in inst.jobs().iter().enumerate() {
        let p = p as usize;
        let before = vars.len();
        if t_off + 1 >= t_on + p {
            for start in t_on..=t_off + 1 - p {
                vars.push(Var {
                    key: VarKey::Start {
                        job,
                        interval: start,
                    },
                    cost: inst.cost_sum(start, start + p - 1) * inst.proc_power(),
                    first: start,
                    last: start + p - 1,
                });
            }
        }
        if vars.len() == before {
            return Err(Error::InfeasibleWindow { job });
        }
    }
    for i in 1..h {
        for ip in i + 2..=h {
            if i == 1 && ip == h {
                continue;
            }
            let phi = if prune {
                table.phi(i, ip)
            } else {
                table.phi_unpruned(i, ip)
            };
            if let Some(cost) = phi {
                vars.push(Var {
                    key: VarKey::Space { from: i, to: ip },
                    cost,
                    first: i + 1,
                    last: ip - 1,
                });
            }
        }
    }

    let mut covering: Vec<Vec<usize>> = vec![Vec::new(); h + 1];
    for (k, v) in vars.iter().enumerate() {
        for list in &mut covering[v.first..=v.last] {
            list.push(k);
        }
    }
    if let Some(interval) = (2..h).find(|&i| covering[i].is_empty()) {
        return Err(Error::Uncoverable { interval });
    }

    let names: Vec<String> = vars.iter().map(|v| v.key.name()).collect();
    let mut lp = String::new();
    let _ = writeln!(lp, "\\ {} jobs, {} intervals", inst.jobs().len(), h);
    lp.push_str("Minimize\n obj:");
    write_terms(
        &mut lp,
        vars.iter()
            .zip(&names)
            .map(|(v, n)| (Some(v.cost), n.as_str())),
    );
    lp.push_str("\nSubject To\n");
    for job in 0..inst.jobs().len() {
        let _ = write!(lp, " assign_{}:", job + 1);
        let terms = vars
            .iter()
            .zip(&names)
            .filter(|(v, _)| matches!(v.key, VarKey::Start { job: j, .. } if j == job))
            .map(|(_, n)| (None, n.as_str()));
        write_terms(&mut lp, terms);
        lp.push_str(" = 1\n");
    }
    for (i, list) in covering.iter().enumerate().take(h).skip(2) {
        let _ = write!(lp, " cover_{i}:");
        write_terms(&mut lp, list.iter().map(|&k| (None, names[k].as_str())));
        lp.push_str(" = 1\n");
    }
    lp.push_str("Binary\n");
    for chunk in names.chunks(TERMS_PER_LINE) {
        let _ = writeln!(lp, " {}", chunk.join(" "));
    }
    lp.push_str("End\n");

    let variables = vars
        .iter()
        .zip(names)
        .map(|(v, name)| {
            let info = match v.key {
                VarKey::Start { job, interval } => VarInfo {
                    kind: VarKind::X,
                    j: Some(job + 1),
                    i: interval,
                    ip: None,
                    cost: v.cost,
                },
                VarKey::Space { from, to } => VarInfo {
                    kind: VarKind::Y,
                    j: None,
                    i: from,
                    ip: Some(to),
                    cost: v.cost,
                },
            };
            (name, info)
        })
        .collect();
    Ok(IlpModel {
        lp_text: lp,
        varmap: VarMap {
            constant_term: inst.boundary_cost(),
            variables,
        },
    })
}

fn write_terms<'n>(out: &mut String, terms: impl Iterator<Item = (Option<Cost>, &'n str)>) {
    for (k, (coef, name)) in terms.enumerate() {
        if k > 0 && k % TERMS_PER_LINE == 0 {
            out.push_str("\n   ");
        }
        let sign = if k == 0 { "" } else { " +" };
        match coef {
            Some(c) => {
                let _ = write!(out, "{sign} {c} {name}");
            }
            None => {
                let _ = write!(out, "{sign} {name}");
            }
        }
    }
}

/// Reads `name value` lines. Lines that do not have exactly that shape,
/// including headers and `#` comments, are skipped.
pub fn parse_solution(text: &str) -> HashMap<String, f64> {
    let mut out = HashMap::new();
    for line in text.lines() {
        let line = line.trim();
        if line.starts_with('#') {
            continue;
        }
        let mut it = line.split_whitespace();
        let (Some(name), Some(value), None) = (it.next(), it.next(), it.next()) else {
            continue;
        };
        if let Ok(v) = value.parse::<f64>() {
            out.insert(name.to_string(), v);
        }
    }
    out
}

/// Decodes a 0/1 assignment into a schedule and checks it against the model.
/// Variables missing from `assignment` are taken as zero.
pub fn import_solution(
    inst: &Instance,
    table: &SpacesTable,
    varmap: &VarMap,
    assignment: &HashMap<String, f64>,
) -> Result<SolveResult> {
    let h = inst.horizon();
    let n = inst.jobs().len();
    let mut blocks = Vec::new();
    let mut spaces = Vec::new();
    let mut objective: Cost = 0;
    let mut covered = vec![0usize; h + 1];
    let mut assigned = vec![0usize; n];
    for (name, info) in &varmap.variables {
        let value = assignment.get(name).copied().unwrap_or(0.0);
        let rounded = value.round();
        if (value - rounded).abs() > INTEGRALITY_TOLERANCE || !(rounded == 0.0 || rounded == 1.0) {
            return Err(Error::NonIntegral {
                name: name.clone(),
                value,
            });
        }
        if rounded == 0.0 {
            continue;
        }
        objective += info.cost;
        match info.key()? {
            VarKey::Start { job, interval } => {
                let p =
                    *inst.jobs().get(job).ok_or_else(|| {
                        Error::Parse(format!("variable {name} names job {}", job + 1))
                    })? as usize;
                for c in covered.iter_mut().skip(interval).take(p) {
                    *c += 1;
                }
                assigned[job] += 1;
                blocks.push((job, interval));
            }
            VarKey::Space { from, to } => {
                for c in covered.iter_mut().take(to).skip(from + 1) {
                    *c += 1;
                }
                spaces.push((from, to));
            }
        }
    }
    if let Some(interval) = (2..h).find(|&i| covered[i] != 1) {
        return Err(Error::CoverViolated {
            interval,
            count: covered[interval],
        });
    }
    if let Some(job) = (0..n).find(|&j| assigned[j] != 1) {
        return Err(Error::AssignmentViolated {
            job,
            count: assigned[job],
        });
    }
    let schedule = assemble_segments(inst, table, &blocks, &spaces)?;
    let tec = compute_tec(inst, &schedule)?;
    if tec != objective + varmap.constant_term {
        return Err(Error::TecMismatch {
            recomputed: tec,
            objective: objective + varmap.constant_term,
        });
    }
    blocks.sort_unstable();
    Ok(SolveResult {
        tec,
        lower_bound: tec,
        status: SolveStatus::Optimal,
        schedule: Some(schedule),
        placement: blocks,
        stats: SolveStats::default(),
    })
}
