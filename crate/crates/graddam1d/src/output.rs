//! CSV, summary and plot-script writers.

use std::fmt::Write as _;
use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use graddam1d_core::{LoadStepRecord, Mesh1D, StepFailure};

pub const LOAD_DISPLACEMENT_CSV: &str = "load_displacement.csv";
pub const SUMMARY_FILE: &str = "run_summary.txt";
pub const PLOT_SCRIPT: &str = "plot.py";

/// 17 significant digits, enough to round-trip an `f64`.
fn num(v: f64) -> String {
    format!("{v:.16e}")
}

pub fn profile_file_name(step: usize) -> String {
    format!("profile_{step}.csv")
}

pub fn load_displacement_csv(records: &[LoadStepRecord]) -> String {
    let mut s = String::from("step,applied_displacement_mm,reaction_N,iterations\n");
    for r in records {
        let _ = writeln!(
            s,
            "{},{},{},{}",
            r.step,
            num(r.applied_displacement),
            num(r.reaction),
            r.iterations
        );
    }
    s
}

/// One row per element, located at the element centroid.
pub fn profile_csv(mesh: &Mesh1D, record: &LoadStepRecord) -> String {
    let mut s = String::from("x_mm,strain,eps_bar,kappa,omega\n");
    for (e, x) in mesh.centroids().into_iter().enumerate() {
        let _ = writeln!(
            s,
            "{},{},{},{},{}",
            num(x),
            num(record.strain[e]),
            num(record.eps_bar[e]),
            num(record.kappa[e]),
            num(record.omega[e])
        );
    }
    s
}

pub fn summary(records: &[LoadStepRecord], failure: Option<&StepFailure>) -> String {
    let mut s = String::new();
    let peak = records
        .iter()
        .max_by(|a, b| a.reaction.total_cmp(&b.reaction));
    let _ = writeln!(s, "steps_completed = {}", records.len());
    if let Some(p) = peak {
        let _ = writeln!(s, "peak_reaction_N = {}", num(p.reaction));
        let _ = writeln!(s, "peak_displacement_mm = {}", num(p.applied_displacement));
    }
    if let Some(last) = records.last() {
        let _ = writeln!(
            s,
            "final_displacement_mm = {}",
            num(last.applied_displacement)
        );
        let _ = writeln!(s, "final_reaction_N = {}", num(last.reaction));
        let _ = writeln!(s, "final_omega_max = {}", num(last.max_omega()));
    }
    let total: usize = records.iter().map(|r| r.iterations).sum();
    let _ = writeln!(s, "newton_iterations = {total}");
    match failure {
        None => s.push_str("status = completed\n"),
        Some(f) => {
            s.push_str("status = failed\n");
            let _ = writeln!(s, "failure = {f}");
        }
    }
    s
}

pub fn plot_script(profile_steps: &[usize]) -> String {
    let steps: Vec<String> = profile_steps.iter().map(|s| s.to_string()).collect();
    format!(
        r#"#!/usr/bin/env python3
# Plots the load-displacement curve and the damage / strain profiles.
import csv
import os
import matplotlib.pyplot as plt

here = os.path.dirname(os.path.abspath(__file__))


def read(name):
    with open(os.path.join(here, name)) as f:
        rows = list(csv.DictReader(f))
    return {{k: [float(r[k]) for r in rows] for k in rows[0]}}


ld = read("{ld}")
plt.figure()
plt.plot(ld["applied_displacement_mm"], ld["reaction_N"], "-")
plt.xlabel("displacement [mm]")
plt.ylabel("force [N]")
plt.savefig(os.path.join(here, "load_displacement.png"), dpi=150)

fig, (ax1, ax2) = plt.subplots(2, 1, sharex=True)
for step in [{steps}]:
    p = read("profile_%d.csv" % step)
    ax1.plot(p["x_mm"], p["omega"], label="step %d" % step)
    ax2.plot(p["x_mm"], p["eps_bar"], label="step %d" % step)
ax1.set_ylabel("damage")
ax2.set_ylabel("nonlocal strain")
ax2.set_xlabel("x [mm]")
ax1.legend()
fig.savefig(os.path.join(here, "profiles.png"), dpi=150)
"#,
        ld = LOAD_DISPLACEMENT_CSV,
        steps = steps.join(", ")
    )
}

/// Steps that get a profile file: the requested ones that were reached plus
/// the last completed step.
pub fn profile_steps(requested: &[usize], records: &[LoadStepRecord]) -> Vec<usize> {
    let mut steps: Vec<usize> = requested
        .iter()
        .copied()
        .filter(|&s| s >= 1 && s <= records.len())
        .collect();
    if let Some(last) = records.last() {
        steps.push(last.step);
    }
    steps.sort_unstable();
    steps.dedup();
    steps
}

/// Writes every output file into `dir` and returns their paths.
pub fn write_all(
    dir: &Path,
    mesh: &Mesh1D,
    records: &[LoadStepRecord],
    requested_profiles: &[usize],
    failure: Option<&StepFailure>,
) -> io::Result<Vec<PathBuf>> {
    fs::create_dir_all(dir)?;
    let mut written = Vec::new();
    let mut put = |name: &str, body: String| -> io::Result<()> {
        let path = dir.join(name);
        fs::write(&path, body)?;
        written.push(path);
        Ok(())
    };
    put(LOAD_DISPLACEMENT_CSV, load_displacement_csv(records))?;
    let steps = profile_steps(requested_profiles, records);
    for &s in &steps {
        put(&profile_file_name(s), profile_csv(mesh, &records[s - 1]))?;
    }
    put(SUMMARY_FILE, summary(records, failure))?;
    put(PLOT_SCRIPT, plot_script(&steps))?;
    Ok(written)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn record(step: usize, n: usize) -> LoadStepRecord {
        LoadStepRecord {
            step,
            applied_displacement: 0.1 * step as f64,
            reaction: 1.0 / 3.0,
            reaction_left: -1.0 / 3.0,
            displacement: vec![0.0; n + 1],
            strain: vec![0.1; n],
            eps_bar: vec![0.1; n],
            kappa: vec![0.1; n],
            kappa_prior: vec![0.1; n],
            sub_increments: 1,
            omega: vec![0.5; n],
            iterations: 2,
        }
    }

    #[test]
    fn full_precision_numbers() {
        let csv = load_displacement_csv(&[record(1, 2)]);
        let line = csv.lines().nth(1).unwrap();
        let reaction: f64 = line.split(',').nth(2).unwrap().parse().unwrap();
        assert_eq!(reaction, 1.0 / 3.0);
        assert_eq!(line.split(',').nth(2).unwrap(), "3.3333333333333331e-1");
    }

    #[test]
    fn profile_rows_at_centroids() {
        let mesh =
            Mesh1D::uniform(4.0, 4, graddam1d_core::AreaProfile::Uniform { area: 1.0 }).unwrap();
        let csv = profile_csv(&mesh, &record(1, 4));
        let xs: Vec<f64> = csv
            .lines()
            .skip(1)
            .map(|l| l.split(',').next().unwrap().parse().unwrap())
            .collect();
        assert_eq!(xs, vec![0.5, 1.5, 2.5, 3.5]);
    }

    #[test]
    fn profile_selection() {
        let recs: Vec<_> = (1..=5).map(|s| record(s, 2)).collect();
        assert_eq!(profile_steps(&[2, 9, 5], &recs), vec![2, 5]);
        assert_eq!(profile_steps(&[], &recs[..3]), vec![3]);
        assert!(profile_steps(&[1], &[]).is_empty());
    }
}
