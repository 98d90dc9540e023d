use crate::error::{Error, Result};
use crate::model::{Instance, Schedule};
use crate::spaces::SpacesTable;

/// Builds `(σ, Ω)` from job start intervals. Gaps between consecutive blocks
/// and towards both horizon ends are filled with the table's switchings.
pub fn assemble_schedule(
    inst: &Instance,
    placement: &[(usize, usize)],
    table: &SpacesTable,
) -> Result<Schedule> {
    let h = inst.horizon();
    let mut blocks: Vec<(usize, usize)> = placement.to_vec();
    blocks.sort_by_key(|&(job, start)| (start, job));
    let mut spaces = Vec::with_capacity(blocks.len() + 1);
    // Interval 1 is always off, so the first block is preceded by a space.
    let mut prev_end = 1;
    for (k, &(job, start)) in blocks.iter().enumerate() {
        let p = *inst
            .jobs()
            .get(job)
            .ok_or_else(|| Error::InconsistentPlacement(format!("unknown job {job}")))?
            as usize;
        if start <= prev_end {
            return Err(Error::InconsistentPlacement(format!(
                "job {job} starts at {start} before interval {} is free",
                prev_end + 1
            )));
        }
        if k == 0 || start > prev_end + 1 {
            spaces.push((prev_end, start));
        }
        prev_end = start + p - 1;
    }
    spaces.push((prev_end, h));
    assemble_segments(inst, table, &blocks, &spaces)
}

/// Tiles intervals `2 ..= h - 1` with job blocks and spaces and expands the
/// result into a schedule.
pub(crate) fn assemble_segments(
    inst: &Instance,
    table: &SpacesTable,
    blocks: &[(usize, usize)],
    spaces: &[(usize, usize)],
) -> Result<Schedule> {
    let h = inst.horizon();
    let n = inst.jobs().len();
    let mut covered = vec![0u32; h + 2];
    let mut sigma = vec![None; n];
    for &(job, start) in blocks {
        let p = *inst
            .jobs()
            .get(job)
            .ok_or_else(|| Error::InconsistentPlacement(format!("unknown job {job}")))?
            as usize;
        if start < 2 || start + p - 1 > h - 1 {
            return Err(Error::InconsistentPlacement(format!(
                "job {job} at {start} leaves the horizon"
            )));
        }
        if sigma[job].replace(start as u32 - 1).is_some() {
            return Err(Error::InconsistentPlacement(format!(
                "job {job} placed twice"
            )));
        }
        for c in &mut covered[start..start + p] {
            *c += 1;
        }
    }
    for &(i, ip) in spaces {
        if i == 0 || ip <= i || ip > h {
            return Err(Error::InconsistentPlacement(format!(
                "bad space ({i}, {ip})"
            )));
        }
        for c in &mut covered[i + 1..ip] {
            *c += 1;
        }
    }
    if let Some(i) = (2..h).find(|&i| covered[i] != 1) {
        return Err(Error::InconsistentPlacement(format!(
            "interval {i} covered {} times",
            covered[i]
        )));
    }
    let sigma = sigma
        .into_iter()
        .enumerate()
        .map(|(j, s)| s.ok_or_else(|| Error::InconsistentPlacement(format!("job {j} not placed"))))
        .collect::<Result<Vec<_>>>()?;

    let (off, proc) = (inst.states().off(), inst.states().proc());
    let mut omega = vec![(proc, proc); h];
    omega[0] = (off, off);
    omega[h - 1] = (off, off);
    for &(i, ip) in spaces {
        let labels = table.expand_space(i, ip)?;
        omega[i..ip - 1].copy_from_slice(&labels);
    }
    Ok(Schedule { sigma, omega })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::datagen::{example_instance, example_schedule, preset_nosby};
    use crate::model::{compute_tec, validate_schedule};

    #[test]
    fn example_placement_reproduces_listing() {
        let inst = example_instance();
        let table = SpacesTable::for_instance(&inst, 1).unwrap();
        let sched = assemble_schedule(&inst, &[(0, 10), (1, 4), (2, 13)], &table).unwrap();
        assert_eq!(sched, example_schedule());
        assert_eq!(compute_tec(&inst, &sched).unwrap(), 177);
    }

    #[test]
    fn forced_single_job() {
        // Window is exactly 3 wide: t_on = 4, t_off = 6.
        let inst = preset_nosby().instance(vec![1, 2, 3, 4, 5, 6, 7, 8], vec![3]);
        let table = SpacesTable::for_instance(&inst, 1).unwrap();
        let sched = assemble_schedule(&inst, &[(0, 4)], &table).unwrap();
        let s = inst.states();
        let (off, proc) = (s.off(), s.proc());
        assert_eq!(
            sched.omega,
            vec![
                (off, off),
                (off, proc),
                (off, proc),
                (proc, proc),
                (proc, proc),
                (proc, proc),
                (proc, off),
                (off, off)
            ]
        );
        assert!(validate_schedule(&inst, &sched).is_empty());
    }

    #[test]
    fn overlapping_or_missing_jobs_are_rejected() {
        let inst = example_instance();
        let table = SpacesTable::for_instance(&inst, 1).unwrap();
        assert!(assemble_schedule(&inst, &[(0, 10), (1, 11), (2, 13)], &table).is_err());
        assert!(assemble_schedule(&inst, &[(0, 10), (2, 13)], &table).is_err());
        assert!(assemble_schedule(&inst, &[(0, 10), (1, 4), (2, 15)], &table).is_err());
        // I_3 cannot be reached in proc.
        assert!(assemble_schedule(&inst, &[(0, 10), (1, 3), (2, 13)], &table).is_err());
    }
}
