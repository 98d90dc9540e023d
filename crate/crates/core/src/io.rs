//! JSON file formats for instances, machine presets and schedules.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{Cost, Instance, MachineStateSet, Schedule, StatePair, TransitionSpec};

fn default_off() -> String {
    "off".into()
}

fn default_proc() -> String {
    "proc".into()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TransitionRecord {
    pub from: String,
    pub to: String,
    pub time: u32,
    pub power: Cost,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InstanceFile {
    pub horizon: usize,
    pub costs: Vec<Cost>,
    pub jobs: Vec<u32>,
    pub states: Vec<String>,
    #[serde(default = "default_off")]
    pub off: String,
    #[serde(default = "default_proc")]
    pub proc: String,
    pub transitions: Vec<TransitionRecord>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PresetFile {
    #[serde(default)]
    pub name: Option<String>,
    pub states: Vec<String>,
    #[serde(default = "default_off")]
    pub off: String,
    #[serde(default = "default_proc")]
    pub proc: String,
    pub transitions: Vec<TransitionRecord>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScheduleStats {
    pub states_expanded: u64,
    pub wall_seconds: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScheduleFile {
    /// Start offsets: job `j` occupies intervals `sigma[j] + 1 ..= sigma[j] + p_j`.
    pub sigma: Vec<u32>,
    pub omega: Vec<[String; 2]>,
    pub tec: Cost,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub status: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lower_bound: Option<Cost>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub stats: Option<ScheduleStats>,
}

fn records(states: &MachineStateSet, transitions: &TransitionSpec) -> Vec<TransitionRecord> {
    transitions
        .iter()
        .map(|(a, b, t)| TransitionRecord {
            from: states.name(a).into(),
            to: states.name(b).into(),
            time: t.duration,
            power: t.power,
        })
        .collect()
}

impl InstanceFile {
    pub fn from_instance(inst: &Instance) -> Self {
        let s = inst.states();
        Self {
            horizon: inst.horizon(),
            costs: inst.costs().to_vec(),
            jobs: inst.jobs().to_vec(),
            states: s.names().to_vec(),
            off: s.name(s.off()).into(),
            proc: s.name(s.proc()).into(),
            transitions: records(s, inst.transitions()),
        }
    }

    /// Builds the instance. Content problems such as a horizon mismatch are
    /// left to [`crate::model::validate_instance`].
    pub fn into_instance(self) -> Result<Instance> {
        let states = MachineStateSet::new(self.states, &self.off, &self.proc)?;
        let mut tr = TransitionSpec::new(states.len());
        for t in &self.transitions {
            let id = |name: &str| {
                states
                    .id(name)
                    .ok_or_else(|| Error::Parse(format!("unknown state `{name}` in transitions")))
            };
            tr.insert(id(&t.from)?, id(&t.to)?, t.time, t.power);
        }
        Ok(Instance::with_horizon(
            self.horizon,
            self.costs,
            self.jobs,
            states,
            tr,
        ))
    }
}

impl PresetFile {
    pub fn from_parts(name: &str, states: &MachineStateSet, transitions: &TransitionSpec) -> Self {
        Self {
            name: Some(name.into()),
            states: states.names().to_vec(),
            off: states.name(states.off()).into(),
            proc: states.name(states.proc()).into(),
            transitions: records(states, transitions),
        }
    }
}

pub fn instance_to_json(inst: &Instance) -> String {
    serde_json::to_string_pretty(&InstanceFile::from_instance(inst)).expect("instance serializes")
}

pub fn instance_from_json(text: &str) -> Result<Instance> {
    serde_json::from_str::<InstanceFile>(text)?.into_instance()
}

pub fn read_instance(path: &Path) -> Result<Instance> {
    instance_from_json(&std::fs::read_to_string(path)?)
}

pub fn write_instance(path: &Path, inst: &Instance) -> Result<()> {
    std::fs::write(path, instance_to_json(inst) + "\n")?;
    Ok(())
}

pub fn read_preset(path: &Path) -> Result<crate::datagen::MachinePreset> {
    let file: PresetFile = serde_json::from_str(&std::fs::read_to_string(path)?)?;
    crate::datagen::MachinePreset::from_file(&file)
}

pub fn omega_names(states: &MachineStateSet, omega: &[StatePair]) -> Vec<[String; 2]> {
    omega
        .iter()
        .map(|&(a, b)| [states.name(a).to_string(), states.name(b).to_string()])
        .collect()
}

impl ScheduleFile {
    pub fn new(inst: &Instance, sched: &Schedule, tec: Cost) -> Self {
        Self {
            sigma: sched.sigma.clone(),
            omega: omega_names(inst.states(), &sched.omega),
            tec,
            status: None,
            lower_bound: None,
            stats: None,
        }
    }

    pub fn to_schedule(&self, inst: &Instance) -> Result<Schedule> {
        let states = inst.states();
        let omega = self
            .omega
            .iter()
            .map(|[a, b]| {
                let id = |name: &str| {
                    states
                        .id(name)
                        .ok_or_else(|| Error::Parse(format!("unknown state `{name}` in omega")))
                };
                Ok((id(a)?, id(b)?))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Schedule {
            sigma: self.sigma.clone(),
            omega,
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("schedule serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::datagen::{example_instance, example_schedule, preset_twosby, MachinePreset};

    #[test]
    fn instance_round_trip() {
        let inst = example_instance();
        let text = instance_to_json(&inst);
        assert_eq!(instance_from_json(&text).unwrap(), inst);
    }

    #[test]
    fn schedule_round_trip() {
        let inst = example_instance();
        let sched = example_schedule();
        let file = ScheduleFile::new(&inst, &sched, 177);
        let back = ScheduleFile::from_json(&file.to_json()).unwrap();
        assert_eq!(back.tec, 177);
        assert_eq!(back.to_schedule(&inst).unwrap(), sched);
        assert_eq!(back.omega[11], ["idle".to_string(), "idle".to_string()]);
    }

    #[test]
    fn preset_round_trip() {
        let p = preset_twosby();
        let file = PresetFile::from_parts(&p.name, &p.states, &p.transitions);
        let text = serde_json::to_string(&file).unwrap();
        let back = MachinePreset::from_file(&serde_json::from_str(&text).unwrap()).unwrap();
        assert_eq!(back, p);
    }

    #[test]
    fn unknown_state_is_a_parse_error() {
        let text = r#"{"horizon":3,"costs":[1,1,1],"jobs":[1],"states":["off","proc"],
            "transitions":[{"from":"off","to":"warm","time":1,"power":1}]}"#;
        assert!(matches!(instance_from_json(text), Err(Error::Parse(_))));
        assert!(matches!(instance_from_json("{"), Err(Error::Json(_))));
    }
}
