//! Machine presets and the random instance generator.
//!
//! Processing times are drawn from U{1,5} and interval costs from U{1,10}.
//! A family shares one job set and one cost vector; each horizon takes a
//! prefix of the costs, so shorter instances agree with longer ones on every
//! interval they have.

use rand::{Rng, SeedableRng};
use rand_xoshiro::SplitMix64;

use crate::error::{Error, Result};
use crate::io::PresetFile;
use crate::model::{Cost, Instance, MachineStateSet, Schedule, StateId, TransitionSpec};

/// Horizon multiples in hundredths.
pub const STANDARD_MULTIPLES: [u32; 4] = [130, 160, 190, 220];

pub const PROCESSING_RANGE: (u32, u32) = (1, 5);
pub const COST_RANGE: (Cost, Cost) = (1, 10);

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MachinePreset {
    pub name: String,
    pub states: MachineStateSet,
    pub transitions: TransitionSpec,
}

impl MachinePreset {
    pub fn instance(&self, costs: Vec<Cost>, jobs: Vec<u32>) -> Instance {
        Instance::new(costs, jobs, self.states.clone(), self.transitions.clone())
    }

    /// Shortest off to proc duration.
    pub fn switch_on_time(&self) -> u32 {
        self.transitions
            .shortest_duration(self.states.off(), self.states.proc())
            .unwrap_or(0)
    }

    /// Shortest proc to off duration.
    pub fn switch_off_time(&self) -> u32 {
        self.transitions
            .shortest_duration(self.states.proc(), self.states.off())
            .unwrap_or(0)
    }

    /// Horizon for total processing time `total` and a multiple in hundredths.
    pub fn horizon_for(&self, total: u64, multiple: u32) -> usize {
        let scaled = (multiple as u64 * total + 50) / 100;
        scaled as usize + self.switch_on_time() as usize + self.switch_off_time() as usize + 1
    }

    pub fn from_file(file: &PresetFile) -> Result<Self> {
        let states = MachineStateSet::new(file.states.iter().cloned(), &file.off, &file.proc)?;
        let mut transitions = TransitionSpec::new(states.len());
        for t in &file.transitions {
            let id = |name: &str| {
                states
                    .id(name)
                    .ok_or_else(|| Error::Parse(format!("unknown state `{name}` in preset")))
            };
            transitions.insert(id(&t.from)?, id(&t.to)?, t.time, t.power);
        }
        Ok(Self {
            name: file.name.clone().unwrap_or_else(|| "custom".into()),
            states,
            transitions,
        })
    }

    pub fn by_name(name: &str) -> Option<Self> {
        match name.to_ascii_lowercase().as_str() {
            "nosby" => Some(preset_nosby()),
            "twosby" => Some(preset_twosby()),
            _ => None,
        }
    }
}

fn build(name: &str, states: &[&str], table: &[(&str, &str, u32, Cost)]) -> MachinePreset {
    let states =
        MachineStateSet::new(states.iter().copied(), "off", "proc").expect("preset states");
    let mut transitions = TransitionSpec::new(states.len());
    for &(a, b, time, power) in table {
        transitions.insert(states.id(a).unwrap(), states.id(b).unwrap(), time, power);
    }
    MachinePreset {
        name: name.into(),
        states,
        transitions,
    }
}

/// Machine without standby: off, proc and a zero-cost-to-enter idle state.
pub fn preset_nosby() -> MachinePreset {
    build(
        "NOSBY",
        &["off", "proc", "idle"],
        &[
            ("off", "off", 1, 0),
            ("off", "proc", 2, 8),
            ("proc", "off", 1, 1),
            ("proc", "proc", 1, 6),
            ("proc", "idle", 0, 0),
            ("idle", "proc", 0, 0),
            ("idle", "idle", 1, 2),
        ],
    )
}

/// Machine with two standby states. `sb1` is cheap to hold and costly to
/// enter; `sb2` is free to enter and costly to hold.
pub fn preset_twosby() -> MachinePreset {
    build(
        "TWOSBY",
        &["off", "proc", "sb1", "sb2"],
        &[
            ("off", "off", 1, 0),
            ("off", "proc", 3, 5),
            ("proc", "off", 2, 2),
            ("proc", "proc", 1, 6),
            ("proc", "sb1", 1, 3),
            ("sb1", "sb1", 1, 1),
            ("sb1", "proc", 1, 3),
            ("proc", "sb2", 0, 0),
            ("sb2", "sb2", 1, 3),
            ("sb2", "proc", 0, 0),
        ],
    )
}

const EXAMPLE_COSTS: [Cost; 16] = [2, 1, 2, 1, 8, 16, 14, 3, 2, 5, 3, 10, 3, 2, 1, 2];

/// Three jobs on a 16-interval horizon under [`preset_nosby`]. Its optimum is
/// [`example_schedule`] with TEC 177.
pub fn example_instance() -> Instance {
    preset_nosby().instance(EXAMPLE_COSTS.to_vec(), vec![2, 1, 2])
}

pub fn example_schedule() -> Schedule {
    let (off, proc, idle) = (StateId(0), StateId(1), StateId(2));
    Schedule {
        sigma: vec![9, 3, 12],
        omega: vec![
            (off, off),
            (off, proc),
            (off, proc),
            (proc, proc),
            (proc, off),
            (off, off),
            (off, off),
            (off, proc),
            (off, proc),
            (proc, proc),
            (proc, proc),
            (idle, idle),
            (proc, proc),
            (proc, proc),
            (proc, off),
            (off, off),
        ],
    }
}

#[derive(Debug, Clone)]
pub struct GenSpec {
    pub n: usize,
    pub preset: MachinePreset,
    /// Hundredths, normally one of [`STANDARD_MULTIPLES`].
    pub multiple: u32,
    pub seed: u64,
}

fn sample_jobs(rng: &mut SplitMix64, n: usize) -> Vec<u32> {
    (0..n)
        .map(|_| rng.gen_range(PROCESSING_RANGE.0..=PROCESSING_RANGE.1))
        .collect()
}

fn sample_costs(rng: &mut SplitMix64, len: usize) -> Vec<Cost> {
    (0..len)
        .map(|_| rng.gen_range(COST_RANGE.0..=COST_RANGE.1))
        .collect()
}

/// One instance per multiple in [`STANDARD_MULTIPLES`], in that order.
pub fn generate_family(preset: &MachinePreset, n: usize, seed: u64) -> Vec<Instance> {
    generate_family_with(preset, n, seed, &STANDARD_MULTIPLES)
}

pub fn generate_family_with(
    preset: &MachinePreset,
    n: usize,
    seed: u64,
    multiples: &[u32],
) -> Vec<Instance> {
    let mut rng = SplitMix64::seed_from_u64(seed);
    let jobs = sample_jobs(&mut rng, n);
    let total: u64 = jobs.iter().map(|&p| p as u64).sum();
    let horizons: Vec<usize> = multiples
        .iter()
        .map(|&m| preset.horizon_for(total, m))
        .collect();
    let longest = horizons.iter().copied().max().unwrap_or(0);
    let costs = sample_costs(&mut rng, longest);
    horizons
        .into_iter()
        .map(|h| preset.instance(costs[..h].to_vec(), jobs.clone()))
        .collect()
}

/// A single instance. Equals the matching member of
/// [`generate_family_with`] called with only `spec.multiple`.
pub fn generate_instance(spec: &GenSpec) -> Instance {
    generate_family_with(&spec.preset, spec.n, spec.seed, &[spec.multiple])
        .pop()
        .expect("one multiple")
}

pub fn file_name(preset: &str, inst: &Instance, seed: u64) -> String {
    format!(
        "inst_{}_{}_{}_{}.json",
        preset.to_ascii_lowercase(),
        inst.jobs().len(),
        inst.horizon(),
        seed
    )
}
