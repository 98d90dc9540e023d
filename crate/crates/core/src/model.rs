//! Problem instances, schedules, feasibility checking and total energy cost.
//!
//! Intervals are numbered from 1 to `h` throughout the public API. Jobs are
//! addressed by their 0-based position in [`Instance::jobs`].

use std::collections::VecDeque;
use std::fmt;

use crate::error::{Error, Result};

/// Energy cost unit. Tariffs, powers and totals are all integral.
pub type Cost = u64;

/// Index of a machine state inside its [`MachineStateSet`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct StateId(pub u16);

impl StateId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// The machine states together with the distinguished `off` and `proc` states.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MachineStateSet {
    names: Vec<String>,
    off: StateId,
    proc: StateId,
}

impl MachineStateSet {
    pub fn new<S: Into<String>>(
        names: impl IntoIterator<Item = S>,
        off: &str,
        proc: &str,
    ) -> Result<Self> {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        if names.len() > u16::MAX as usize {
            return Err(Error::InvalidStateSet("too many states".into()));
        }
        for (k, name) in names.iter().enumerate() {
            if names[..k].contains(name) {
                return Err(Error::InvalidStateSet(format!("duplicate state `{name}`")));
            }
        }
        let find = |wanted: &str| {
            names
                .iter()
                .position(|n| n == wanted)
                .map(|k| StateId(k as u16))
                .ok_or_else(|| Error::InvalidStateSet(format!("missing state `{wanted}`")))
        };
        let off = find(off)?;
        let proc = find(proc)?;
        if off == proc {
            return Err(Error::InvalidStateSet("off and proc must differ".into()));
        }
        Ok(Self { names, off, proc })
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn off(&self) -> StateId {
        self.off
    }

    pub fn proc(&self) -> StateId {
        self.proc
    }

    pub fn name(&self, id: StateId) -> &str {
        &self.names[id.index()]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn id(&self, name: &str) -> Option<StateId> {
        self.names
            .iter()
            .position(|n| n == name)
            .map(|k| StateId(k as u16))
    }

    pub fn ids(&self) -> impl Iterator<Item = StateId> + '_ {
        (0..self.names.len()).map(|k| StateId(k as u16))
    }
}

/// A direct transition: it lasts `duration` intervals and draws `power` in each.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Transition {
    pub duration: u32,
    pub power: Cost,
}

/// Partial transition table. Absent pairs are forbidden transitions.
///
/// The self entry `(s, s)` describes staying in `s` for one interval and must
/// have duration 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransitionSpec {
    states: usize,
    entries: Vec<Option<Transition>>,
}

impl TransitionSpec {
    pub fn new(states: usize) -> Self {
        Self {
            states,
            entries: vec![None; states * states],
        }
    }

    pub fn state_count(&self) -> usize {
        self.states
    }

    pub fn insert(&mut self, from: StateId, to: StateId, duration: u32, power: Cost) {
        self.entries[from.index() * self.states + to.index()] =
            Some(Transition { duration, power });
    }

    #[inline]
    pub fn get(&self, from: StateId, to: StateId) -> Option<Transition> {
        self.entries[from.index() * self.states + to.index()]
    }

    /// All present entries in row-major `(from, to)` order.
    pub fn iter(&self) -> impl Iterator<Item = (StateId, StateId, Transition)> + '_ {
        self.entries.iter().enumerate().filter_map(move |(k, t)| {
            t.map(|t| {
                (
                    StateId((k / self.states) as u16),
                    StateId((k % self.states) as u16),
                    t,
                )
            })
        })
    }

    /// Shortest total duration of a multi-hop transition path, if any.
    pub fn shortest_duration(&self, from: StateId, to: StateId) -> Option<u32> {
        let mut best = vec![u32::MAX; self.states];
        let mut queue = VecDeque::new();
        best[from.index()] = 0;
        queue.push_back(from);
        // Bellman-Ford style relaxation; the state graph is tiny.
        while let Some(s) = queue.pop_front() {
            for t in 0..self.states {
                let t = StateId(t as u16);
                if let Some(tr) = self.get(s, t) {
                    let d = best[s.index()].saturating_add(tr.duration);
                    if d < best[t.index()] {
                        best[t.index()] = d;
                        queue.push_back(t);
                    }
                }
            }
        }
        (best[to.index()] != u32::MAX).then_some(best[to.index()])
    }
}

/// A problem instance: tariff over the horizon, jobs, and the machine model.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    horizon: usize,
    costs: Vec<Cost>,
    jobs: Vec<u32>,
    states: MachineStateSet,
    transitions: TransitionSpec,
    prefix: Vec<Cost>,
}

impl Instance {
    /// Builds an instance with `horizon = costs.len()`.
    pub fn new(
        costs: Vec<Cost>,
        jobs: Vec<u32>,
        states: MachineStateSet,
        transitions: TransitionSpec,
    ) -> Self {
        Self::with_horizon(costs.len(), costs, jobs, states, transitions)
    }

    /// Builds an instance with an explicitly declared horizon. A horizon that
    /// disagrees with the cost vector is reported by [`validate_instance`].
    pub fn with_horizon(
        horizon: usize,
        costs: Vec<Cost>,
        jobs: Vec<u32>,
        states: MachineStateSet,
        transitions: TransitionSpec,
    ) -> Self {
        let mut prefix = Vec::with_capacity(costs.len() + 1);
        prefix.push(0);
        let mut acc: Cost = 0;
        for &c in &costs {
            acc += c;
            prefix.push(acc);
        }
        Self {
            horizon,
            costs,
            jobs,
            states,
            transitions,
            prefix,
        }
    }

    pub fn horizon(&self) -> usize {
        self.horizon
    }

    pub fn costs(&self) -> &[Cost] {
        &self.costs
    }

    /// Cost of interval `i` (1-based).
    #[inline]
    pub fn cost(&self, i: usize) -> Cost {
        self.costs[i - 1]
    }

    pub fn jobs(&self) -> &[u32] {
        &self.jobs
    }

    pub fn states(&self) -> &MachineStateSet {
        &self.states
    }

    pub fn transitions(&self) -> &TransitionSpec {
        &self.transitions
    }

    /// `C[k] = c_1 + ... + c_k`, with `C[0] = 0`.
    pub fn cost_prefix(&self) -> &[Cost] {
        &self.prefix
    }

    /// Sum of `c_first ..= c_last`; zero when the range is empty.
    #[inline]
    pub fn cost_sum(&self, first: usize, last: usize) -> Cost {
        if last < first {
            0
        } else {
            self.prefix[last] - self.prefix[first - 1]
        }
    }

    pub fn total_processing(&self) -> u64 {
        self.jobs.iter().map(|&p| p as u64).sum()
    }

    pub fn max_processing(&self) -> u32 {
        self.jobs.iter().copied().max().unwrap_or(0)
    }

    pub fn proc_power(&self) -> Cost {
        let p = self.states.proc();
        self.transitions.get(p, p).map_or(0, |t| t.power)
    }

    pub fn off_power(&self) -> Cost {
        let o = self.states.off();
        self.transitions.get(o, o).map_or(0, |t| t.power)
    }

    /// Constant cost of the two boundary intervals, which are always spent off.
    pub fn boundary_cost(&self) -> Cost {
        if self.horizon == 0 {
            return 0;
        }
        let both = self.cost(1)
            + if self.horizon > 1 {
                self.cost(self.horizon)
            } else {
                0
            };
        both * self.off_power()
    }

    /// Returns `Err(InvalidInstance)` when [`validate_instance`] finds violations.
    pub fn check(&self) -> Result<()> {
        let v = validate_instance(self);
        if v.is_empty() {
            Ok(())
        } else {
            Err(Error::InvalidInstance(v))
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum InstanceViolation {
    EmptyHorizon,
    HorizonMismatch { horizon: usize, costs: usize },
    NoJobs,
    ZeroProcessingTime { job: usize },
    MissingSelfTransition { state: String },
    SelfTransitionDuration { state: String, duration: u32 },
    ProcUnreachableFromOff,
    OffUnreachableFromProc,
}

impl fmt::Display for InstanceViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::EmptyHorizon => write!(f, "horizon must be ≥ 1"),
            Self::HorizonMismatch { horizon, costs } => {
                write!(f, "horizon {horizon} does not match {costs} interval costs")
            }
            Self::NoJobs => write!(f, "at least one job is required"),
            Self::ZeroProcessingTime { job } => {
                write!(f, "processing time must be ≥ 1 (job {job})")
            }
            Self::MissingSelfTransition { state } => {
                write!(f, "state `{state}` has no self transition")
            }
            Self::SelfTransitionDuration { state, duration } => write!(
                f,
                "self transition of `{state}` must last 1 interval, found {duration}"
            ),
            Self::ProcUnreachableFromOff => write!(f, "proc unreachable from off"),
            Self::OffUnreachableFromProc => write!(f, "off unreachable from proc"),
        }
    }
}

/// Lists every violated instance invariant; an empty list means the instance is valid.
pub fn validate_instance(inst: &Instance) -> Vec<InstanceViolation> {
    let mut out = Vec::new();
    if inst.horizon == 0 {
        out.push(InstanceViolation::EmptyHorizon);
    }
    if inst.horizon != inst.costs.len() {
        out.push(InstanceViolation::HorizonMismatch {
            horizon: inst.horizon,
            costs: inst.costs.len(),
        });
    }
    if inst.jobs.is_empty() {
        out.push(InstanceViolation::NoJobs);
    }
    for (job, &p) in inst.jobs.iter().enumerate() {
        if p == 0 {
            out.push(InstanceViolation::ZeroProcessingTime { job });
        }
    }
    for s in inst.states.ids() {
        let state = inst.states.name(s).to_string();
        match inst.transitions.get(s, s) {
            None => out.push(InstanceViolation::MissingSelfTransition { state }),
            Some(t) if t.duration != 1 => out.push(InstanceViolation::SelfTransitionDuration {
                state,
                duration: t.duration,
            }),
            Some(_) => {}
        }
    }
    let (off, proc) = (inst.states.off(), inst.states.proc());
    if inst.transitions.shortest_duration(off, proc).is_none() {
        out.push(InstanceViolation::ProcUnreachableFromOff);
    }
    if inst.transitions.shortest_duration(proc, off).is_none() {
        out.push(InstanceViolation::OffUnreachableFromProc);
    }
    out
}

/// Cost of processing job `job` (0-based) in intervals `start ..= start + p - 1`.
pub fn job_cost(inst: &Instance, job: usize, start: usize) -> Result<Cost> {
    let p = *inst.jobs.get(job).ok_or(Error::OutOfRange {
        job,
        interval: start,
    })? as usize;
    if start == 0 || start + p - 1 > inst.horizon {
        return Err(Error::OutOfRange {
            job,
            interval: start,
        });
    }
    Ok(inst.cost_sum(start, start + p - 1) * inst.proc_power())
}

/// One interval label of Ω: the active state `(s, s)` or a transition `(s, s')`.
pub type StatePair = (StateId, StateId);

/// A solution: job start times and the per-interval state labels.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Schedule {
    /// 0-based start time of each job; job `j` occupies intervals
    /// `sigma[j] + 1 ..= sigma[j] + p_j`.
    pub sigma: Vec<u32>,
    /// `omega[i - 1]` is the label of interval `i`.
    pub omega: Vec<StatePair>,
}

/// Total energy cost `Σ c_i · P(Ω_i)`.
pub fn compute_tec(inst: &Instance, sched: &Schedule) -> Result<Cost> {
    if sched.omega.len() != inst.horizon {
        return Err(Error::ScheduleShape {
            what: "omega entries",
            expected: inst.horizon,
            found: sched.omega.len(),
        });
    }
    omega_cost(inst, 1, &sched.omega)
}

/// Cost of a run of labels whose first element sits at interval `first`.
pub fn omega_cost(inst: &Instance, first: usize, labels: &[StatePair]) -> Result<Cost> {
    let mut total = 0;
    for (k, &(a, b)) in labels.iter().enumerate() {
        let interval = first + k;
        let t = inst
            .transitions
            .get(a, b)
            .ok_or(Error::UndefinedTransition {
                interval,
                from: a,
                to: b,
            })?;
        total += inst.cost(interval) * t.power;
    }
    Ok(total)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ScheduleViolation {
    SigmaLength {
        expected: usize,
        found: usize,
    },
    OmegaLength {
        expected: usize,
        found: usize,
    },
    /// Condition 1: two jobs share an interval.
    Overlap {
        first: usize,
        second: usize,
        interval: usize,
    },
    /// Condition 2: a job runs past the horizon.
    JobOutsideHorizon {
        job: usize,
    },
    /// Condition 2: a processing interval is not labeled `(proc, proc)`.
    JobNotInProc {
        job: usize,
        interval: usize,
    },
    /// Condition 3: first or last interval not `(off, off)`.
    BoundaryNotOff {
        interval: usize,
    },
    /// Condition 4: no valid transition sequence explains Ω at this interval.
    InvalidTransition {
        interval: usize,
    },
    /// Condition 4: Ω ends in the middle of a transition.
    UnfinishedTransition,
}

impl ScheduleViolation {
    /// Which of the four feasibility conditions the violation belongs to
    /// (0 for shape errors).
    pub fn condition(&self) -> u8 {
        match self {
            Self::SigmaLength { .. } | Self::OmegaLength { .. } => 0,
            Self::Overlap { .. } => 1,
            Self::JobOutsideHorizon { .. } | Self::JobNotInProc { .. } => 2,
            Self::BoundaryNotOff { .. } => 3,
            Self::InvalidTransition { .. } | Self::UnfinishedTransition => 4,
        }
    }
}

impl fmt::Display for ScheduleViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::SigmaLength { expected, found } => {
                write!(f, "sigma has {found} entries, expected {expected}")
            }
            Self::OmegaLength { expected, found } => {
                write!(f, "omega has {found} entries, expected {expected}")
            }
            Self::Overlap {
                first,
                second,
                interval,
            } => write!(
                f,
                "condition 1: jobs {first} and {second} overlap in interval {interval}"
            ),
            Self::JobOutsideHorizon { job } => {
                write!(f, "condition 2: job {job} runs past the horizon")
            }
            Self::JobNotInProc { job, interval } => write!(
                f,
                "condition 2: job {job} runs in interval {interval} which is not (proc, proc)"
            ),
            Self::BoundaryNotOff { interval } => {
                write!(f, "condition 3: interval {interval} must be (off, off)")
            }
            Self::InvalidTransition { interval } => {
                write!(f, "condition 4: invalid transition at interval {interval}")
            }
            Self::UnfinishedTransition => {
                write!(f, "condition 4: omega ends inside a transition")
            }
        }
    }
}

/// Checks the four feasibility conditions. An empty list means feasible.
pub fn validate_schedule(inst: &Instance, sched: &Schedule) -> Vec<ScheduleViolation> {
    let h = inst.horizon;
    let mut out = Vec::new();
    if sched.sigma.len() != inst.jobs.len() {
        out.push(ScheduleViolation::SigmaLength {
            expected: inst.jobs.len(),
            found: sched.sigma.len(),
        });
    }
    if sched.omega.len() != h {
        out.push(ScheduleViolation::OmegaLength {
            expected: h,
            found: sched.omega.len(),
        });
        return out;
    }

    // Conditions 1 and 2.
    let (off, proc) = (inst.states.off(), inst.states.proc());
    let mut owner: Vec<Option<usize>> = vec![None; h + 1];
    for (job, (&start, &p)) in sched.sigma.iter().zip(&inst.jobs).enumerate() {
        let first = start as usize + 1;
        let last = start as usize + p as usize;
        if last > h {
            out.push(ScheduleViolation::JobOutsideHorizon { job });
            continue;
        }
        for i in first..=last {
            match owner[i] {
                Some(other) => out.push(ScheduleViolation::Overlap {
                    first: other,
                    second: job,
                    interval: i,
                }),
                None => owner[i] = Some(job),
            }
            if sched.omega[i - 1] != (proc, proc) {
                out.push(ScheduleViolation::JobNotInProc { job, interval: i });
            }
        }
    }

    // Condition 3.
    if sched.omega[0] != (off, off) {
        out.push(ScheduleViolation::BoundaryNotOff { interval: 1 });
    }
    if h > 1 && sched.omega[h - 1] != (off, off) {
        out.push(ScheduleViolation::BoundaryNotOff { interval: h });
    }

    // Condition 4.
    let automaton = OmegaAutomaton::new(inst);
    let mut configs = automaton.start(off);
    for (k, &label) in sched.omega.iter().enumerate() {
        configs = automaton.step(&configs, label);
        if configs.is_empty() {
            out.push(ScheduleViolation::InvalidTransition { interval: k + 1 });
            return out;
        }
    }
    if !automaton.accepts(&configs, off) {
        out.push(ScheduleViolation::UnfinishedTransition);
    }
    out
}

/// Position of the machine at an interval boundary while reading Ω.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub(crate) enum Config {
    At(StateId),
    Within {
        from: StateId,
        to: StateId,
        elapsed: u32,
    },
}

/// Nondeterministic reader of Ω labels. Zero-duration transitions consume no
/// label, so the machine may sit in any state of the zero-duration closure.
pub(crate) struct OmegaAutomaton<'a> {
    transitions: &'a TransitionSpec,
}

impl<'a> OmegaAutomaton<'a> {
    pub(crate) fn new(inst: &'a Instance) -> Self {
        Self {
            transitions: &inst.transitions,
        }
    }

    pub(crate) fn start(&self, state: StateId) -> Vec<Config> {
        self.close(vec![Config::At(state)])
    }

    fn close(&self, mut configs: Vec<Config>) -> Vec<Config> {
        let mut k = 0;
        while k < configs.len() {
            if let Config::At(s) = configs[k] {
                for (from, to, t) in self.transitions.iter() {
                    if from == s && t.duration == 0 && !configs.contains(&Config::At(to)) {
                        configs.push(Config::At(to));
                    }
                }
            }
            k += 1;
        }
        configs.sort_unstable();
        configs
    }

    pub(crate) fn step(&self, configs: &[Config], (a, b): StatePair) -> Vec<Config> {
        let Some(t) = self.transitions.get(a, b) else {
            return Vec::new();
        };
        if t.duration == 0 {
            return Vec::new();
        }
        let mut next = Vec::new();
        for &c in configs {
            let elapsed = match c {
                Config::At(s) if s == a => 1,
                Config::Within { from, to, elapsed } if (from, to) == (a, b) => elapsed + 1,
                _ => continue,
            };
            let n = if elapsed == t.duration {
                Config::At(b)
            } else {
                Config::Within {
                    from: a,
                    to: b,
                    elapsed,
                }
            };
            if !next.contains(&n) {
                next.push(n);
            }
        }
        self.close(next)
    }

    pub(crate) fn accepts(&self, configs: &[Config], state: StateId) -> bool {
        configs.contains(&Config::At(state))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::datagen::{example_instance, example_schedule, preset_nosby};

    #[test]
    fn example_instance_is_valid() {
        assert!(validate_instance(&example_instance()).is_empty());
    }

    #[test]
    fn zero_processing_time_is_reported() {
        let preset = preset_nosby();
        let inst = preset.instance(vec![1; 10], vec![2, 0]);
        let v = validate_instance(&inst);
        assert_eq!(v, vec![InstanceViolation::ZeroProcessingTime { job: 1 }]);
        assert!(v[0].to_string().contains("processing time must be ≥ 1"));
    }

    #[test]
    fn missing_on_path_is_reported() {
        let states = MachineStateSet::new(["off", "proc"], "off", "proc").unwrap();
        let mut tr = TransitionSpec::new(2);
        tr.insert(StateId(0), StateId(0), 1, 0);
        tr.insert(StateId(1), StateId(1), 1, 5);
        tr.insert(StateId(1), StateId(0), 1, 1);
        let inst = Instance::new(vec![1; 8], vec![1], states, tr);
        let v = validate_instance(&inst);
        assert_eq!(v, vec![InstanceViolation::ProcUnreachableFromOff]);
        assert_eq!(v[0].to_string(), "proc unreachable from off");
    }

    #[test]
    fn horizon_mismatch_and_self_entries() {
        let states = MachineStateSet::new(["off", "proc"], "off", "proc").unwrap();
        let mut tr = TransitionSpec::new(2);
        tr.insert(StateId(0), StateId(0), 2, 0);
        tr.insert(StateId(0), StateId(1), 1, 1);
        tr.insert(StateId(1), StateId(0), 1, 1);
        let inst = Instance::with_horizon(5, vec![1; 4], vec![1], states, tr);
        let v = validate_instance(&inst);
        assert!(v.contains(&InstanceViolation::HorizonMismatch {
            horizon: 5,
            costs: 4
        }));
        assert!(v.contains(&InstanceViolation::MissingSelfTransition {
            state: "proc".into()
        }));
        assert!(v.contains(&InstanceViolation::SelfTransitionDuration {
            state: "off".into(),
            duration: 2
        }));
    }

    #[test]
    fn state_set_rejects_bad_input() {
        assert!(MachineStateSet::new(["off", "off", "proc"], "off", "proc").is_err());
        assert!(MachineStateSet::new(["off", "idle"], "off", "proc").is_err());
        assert!(MachineStateSet::new(["off", "proc"], "off", "off").is_err());
    }

    #[test]
    fn job_costs_on_example_instance() {
        let inst = example_instance();
        assert_eq!(job_cost(&inst, 0, 10).unwrap(), 48);
        assert_eq!(job_cost(&inst, 1, 4).unwrap(), 6);
        assert!(job_cost(&inst, 0, 16).is_err());
        assert!(job_cost(&inst, 0, 0).is_err());
        assert!(job_cost(&inst, 3, 2).is_err());
    }

    #[test]
    fn job_cost_zero_tariff() {
        let inst = preset_nosby().instance(vec![0; 12], vec![3, 2]);
        for i in 1..=10 {
            assert_eq!(job_cost(&inst, 0, i).unwrap(), 0);
        }
    }

    #[test]
    fn example_tec_and_feasibility() {
        let inst = example_instance();
        let sched = example_schedule();
        assert!(validate_schedule(&inst, &sched).is_empty());
        assert_eq!(compute_tec(&inst, &sched).unwrap(), 177);
    }

    #[test]
    fn zero_tariff_gives_zero_tec() {
        let inst = example_instance();
        let zero = Instance::new(
            vec![0; 16],
            inst.jobs().to_vec(),
            inst.states().clone(),
            inst.transitions().clone(),
        );
        assert_eq!(compute_tec(&zero, &example_schedule()).unwrap(), 0);
    }

    #[test]
    fn all_off_omega_costs_nothing() {
        let inst = example_instance();
        let off = inst.states().off();
        let sched = Schedule {
            sigma: vec![],
            omega: vec![(off, off); 16],
        };
        assert_eq!(compute_tec(&inst, &sched).unwrap(), 0);
    }

    #[test]
    fn undefined_transition_is_an_error() {
        let inst = example_instance();
        let mut sched = example_schedule();
        let (off, idle) = (inst.states().off(), inst.states().id("idle").unwrap());
        sched.omega[5] = (off, idle);
        assert!(matches!(
            compute_tec(&inst, &sched),
            Err(Error::UndefinedTransition { interval: 6, .. })
        ));
    }

    #[test]
    fn overlap_violates_condition_one() {
        let inst = example_instance();
        let mut sched = example_schedule();
        sched.sigma = vec![9, 9, 12];
        let v = validate_schedule(&inst, &sched);
        assert!(v.iter().any(|x| x.condition() == 1));
        assert!(v.contains(&ScheduleViolation::Overlap {
            first: 0,
            second: 1,
            interval: 10
        }));
    }

    #[test]
    fn idle_first_interval_violates_condition_three() {
        let inst = example_instance();
        let mut sched = example_schedule();
        let idle = inst.states().id("idle").unwrap();
        sched.omega[0] = (idle, idle);
        let v = validate_schedule(&inst, &sched);
        assert!(v.contains(&ScheduleViolation::BoundaryNotOff { interval: 1 }));
    }

    #[test]
    fn job_outside_proc_violates_condition_two() {
        let inst = example_instance();
        let mut sched = example_schedule();
        sched.sigma[1] = 4;
        let v = validate_schedule(&inst, &sched);
        assert!(v.contains(&ScheduleViolation::JobNotInProc {
            job: 1,
            interval: 5
        }));
        sched.sigma[1] = 16;
        let v = validate_schedule(&inst, &sched);
        assert!(v.contains(&ScheduleViolation::JobOutsideHorizon { job: 1 }));
    }

    #[test]
    fn truncated_transition_violates_condition_four() {
        let inst = example_instance();
        let mut sched = example_schedule();
        // One (off, proc) interval where two are required.
        let off = inst.states().off();
        sched.omega[7] = (off, off);
        let v = validate_schedule(&inst, &sched);
        assert_eq!(v.iter().filter(|x| x.condition() == 4).count(), 1, "{v:?}");
    }

    #[test]
    fn tec_decomposes_into_jobs_and_rest() {
        let inst = example_instance();
        let sched = example_schedule();
        let mut jobs = 0;
        let mut in_job = [false; 17];
        for (j, &s) in sched.sigma.iter().enumerate() {
            jobs += job_cost(&inst, j, s as usize + 1).unwrap();
            for i in s as usize + 1..=s as usize + inst.jobs()[j] as usize {
                in_job[i] = true;
            }
        }
        let rest: Cost = (1..=16)
            .filter(|&i| !in_job[i])
            .map(|i| omega_cost(&inst, i, &sched.omega[i - 1..i]).unwrap())
            .sum();
        assert_eq!(jobs + rest, 177);
    }

    #[test]
    fn shortest_duration_is_multi_hop() {
        let inst = example_instance();
        let s = inst.states();
        let t = inst.transitions();
        assert_eq!(t.shortest_duration(s.off(), s.proc()), Some(2));
        assert_eq!(t.shortest_duration(s.proc(), s.off()), Some(1));
        // idle -> off only through proc
        assert_eq!(t.shortest_duration(s.id("idle").unwrap(), s.off()), Some(1));
    }
}
