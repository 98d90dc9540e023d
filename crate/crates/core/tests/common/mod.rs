#![allow(dead_code)]

use energysched_core::datagen::MachinePreset;
use energysched_core::{Cost, Instance, MachineStateSet, StateId, TransitionSpec};
use rand::{Rng, SeedableRng};
use rand_xoshiro::SplitMix64;

pub fn rng(seed: u64) -> SplitMix64 {
    SplitMix64::seed_from_u64(seed)
}

/// A random machine with off, proc and `extra` further states. Switching on
/// and off is always possible; extra states hang off proc and sometimes off.
pub fn random_machine(rng: &mut SplitMix64, extra: usize) -> MachinePreset {
    let mut names = vec!["off".to_string(), "proc".to_string()];
    names.extend((0..extra).map(|k| format!("s{k}")));
    let states = MachineStateSet::new(names, "off", "proc").unwrap();
    let (off, proc) = (StateId(0), StateId(1));
    let mut tr = TransitionSpec::new(states.len());
    tr.insert(off, off, 1, rng.gen_range(0..=1));
    tr.insert(proc, proc, 1, rng.gen_range(2..=8));
    tr.insert(off, proc, rng.gen_range(1..=3), rng.gen_range(0..=9));
    tr.insert(proc, off, rng.gen_range(1..=2), rng.gen_range(0..=4));
    for k in 0..extra {
        let s = StateId(2 + k as u16);
        tr.insert(s, s, 1, rng.gen_range(0..=5));
        tr.insert(proc, s, rng.gen_range(0..=2), rng.gen_range(0..=6));
        tr.insert(s, proc, rng.gen_range(0..=2), rng.gen_range(0..=6));
        if rng.gen_bool(0.5) {
            tr.insert(s, off, rng.gen_range(1..=2), rng.gen_range(0..=3));
        }
        if rng.gen_bool(0.3) {
            tr.insert(off, s, rng.gen_range(1..=2), rng.gen_range(0..=3));
        }
    }
    MachinePreset {
        name: "random".into(),
        states,
        transitions: tr,
    }
}

pub fn random_costs(rng: &mut SplitMix64, h: usize) -> Vec<Cost> {
    (0..h).map(|_| rng.gen_range(0..=10)).collect()
}

pub fn random_jobs(rng: &mut SplitMix64, n: usize, max_p: u32) -> Vec<u32> {
    (0..n).map(|_| rng.gen_range(1..=max_p)).collect()
}

/// Random instance with at most `max_states` states and horizon in `h`.
pub fn random_instance(
    rng: &mut SplitMix64,
    max_states: usize,
    h: std::ops::RangeInclusive<usize>,
    n: std::ops::RangeInclusive<usize>,
    max_p: u32,
) -> Instance {
    let extra = rng.gen_range(0..=max_states - 2);
    let machine = random_machine(rng, extra);
    let h = rng.gen_range(h);
    let n = rng.gen_range(n);
    let costs = random_costs(rng, h);
    let jobs = random_jobs(rng, n, max_p);
    machine.instance(costs, jobs)
}

/// Whether the jobs can be split into a left part of total at most `left`
/// and a right part of total at most `right`, each part non-empty when
/// required.
pub fn splits(jobs: &[u32], left: i64, right: i64, need_left: bool, need_right: bool) -> bool {
    let n = jobs.len();
    (0u32..1 << n).any(|mask| {
        let (mut l, mut r, mut nl, mut nr) = (0i64, 0i64, 0, 0);
        for (k, &p) in jobs.iter().enumerate() {
            if mask >> k & 1 == 1 {
                l += p as i64;
                nl += 1;
            } else {
                r += p as i64;
                nr += 1;
            }
        }
        l <= left && r <= right && (!need_left || nl > 0) && (!need_right || nr > 0)
    })
}
