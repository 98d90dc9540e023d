//! Fixtures shared by the benchmarks.

use energysched_core::datagen::{self, MachinePreset};
use energysched_core::Instance;

/// Instance with `n` jobs and the horizon multiple 1.6.
pub fn fixture(preset: &MachinePreset, n: usize, seed: u64) -> Instance {
    datagen::generate_family_with(preset, n, seed, &[160]).remove(0)
}
