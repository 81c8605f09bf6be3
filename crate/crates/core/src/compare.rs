//! The six-observer comparison under the two benchmark scenarios.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::observers::ObserverVariant;
use crate::simkernel::{run_batch, Criteria, ScenarioConfig};

/// Published bandwidth and criteria for one observer.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ReferenceRow {
    pub variant: ObserverVariant,
    pub omega_o: f64,
    pub je: f64,
    pub ju: f64,
    pub jf: f64,
}

const fn row(variant: ObserverVariant, omega_o: f64, je: f64, ju: f64, jf: f64) -> ReferenceRow {
    ReferenceRow {
        variant,
        omega_o,
        je,
        ju,
        jf,
    }
}

/// Scenario 1, noise-free.
pub const SCENARIO_1: [ReferenceRow; 6] = [
    row(ObserverVariant::Eso3, 490.03, 0.01, 59.77, 2.41),
    row(ObserverVariant::Eso5, 68.58, 0.01, 65.96, 2.52),
    row(ObserverVariant::Reso, 27.32, 0.01, 59.31, 1.05),
    row(ObserverVariant::AmEso3, 818.86, 0.01, 59.95, 2.42),
    row(ObserverVariant::AmEso5, 340.27, 0.01, 65.31, 2.54),
    row(ObserverVariant::AmReso, 129.61, 0.01, 60.70, 2.15),
];

/// Scenario 2, measurement noise of variance `1e-5`.
pub const SCENARIO_2: [ReferenceRow; 6] = [
    row(ObserverVariant::Eso3, 586.76, 0.01, 623.71, 69.25),
    row(ObserverVariant::Eso5, 76.94, 0.01, 94.58, 19.59),
    row(ObserverVariant::Reso, 31.52, 0.01, 60.06, 3.31),
    row(ObserverVariant::AmEso3, 1057.46, 0.01, 844.89, 92.91),
    row(ObserverVariant::AmEso5, 352.48, 0.01, 91.02, 18.17),
    row(ObserverVariant::AmReso, 140.34, 0.01, 60.41, 3.10),
];

pub fn benchmark_table(scenario: u8) -> Result<&'static [ReferenceRow; 6]> {
    match scenario {
        1 => Ok(&SCENARIO_1),
        2 => Ok(&SCENARIO_2),
        other => Err(Error::config(
            "scenario",
            format!("unknown scenario {other} (expected 1 or 2)"),
        )),
    }
}

/// Bandwidth used for `variant` in the given scenario.
pub fn benchmark_omega(scenario: u8, variant: ObserverVariant) -> Result<f64> {
    let table = benchmark_table(scenario)?;
    Ok(table
        .iter()
        .find(|r| r.variant == variant)
        .expect("every variant is tabulated")
        .omega_o)
}

/// One line of a comparison table; criteria are `None` for a diverged run.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CompareRow {
    pub variant: ObserverVariant,
    pub omega_o: f64,
    pub criteria: Option<Criteria>,
}

/// Runs all six observers at their benchmark bandwidths. Observer `i` (in
/// table order) uses seed `base_seed + i`.
pub fn compare(scenario: u8, base_seed: u64) -> Result<Vec<CompareRow>> {
    let cfgs = ObserverVariant::ALL
        .iter()
        .enumerate()
        .map(|(i, &v)| Ok(ScenarioConfig::preset(scenario, v)?.with_seed(base_seed + i as u64)))
        .collect::<Result<Vec<_>>>()?;
    run_batch(&cfgs)
        .into_iter()
        .map(|r| {
            let rec = r?;
            Ok(CompareRow {
                variant: rec.meta.observer,
                omega_o: rec.meta.omega_o,
                criteria: rec.criteria,
            })
        })
        .collect()
}

/// Per-criterion medians over repeated comparisons with different base seeds.
/// A diverged run anywhere makes that observer's row `None`.
pub fn compare_median(scenario: u8, base_seeds: &[u64]) -> Result<Vec<CompareRow>> {
    let mut cfgs = Vec::new();
    for &seed in base_seeds {
        for (i, &v) in ObserverVariant::ALL.iter().enumerate() {
            cfgs.push(ScenarioConfig::preset(scenario, v)?.with_seed(seed + i as u64));
        }
    }
    let records = run_batch(&cfgs).into_iter().collect::<Result<Vec<_>>>()?;
    let table = benchmark_table(scenario)?;
    Ok(table
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let runs: Option<Vec<Criteria>> = records
                .iter()
                .skip(i)
                .step_by(ObserverVariant::ALL.len())
                .map(|rec| rec.criteria)
                .collect();
            CompareRow {
                variant: r.variant,
                omega_o: r.omega_o,
                criteria: runs.map(|c| Criteria {
                    je: median(c.iter().map(|c| c.je).collect()),
                    ju: median(c.iter().map(|c| c.ju).collect()),
                    jf: median(c.iter().map(|c| c.jf).collect()),
                }),
            }
        })
        .collect())
}

pub fn median(mut v: Vec<f64>) -> f64 {
    assert!(!v.is_empty(), "median of an empty set");
    v.sort_by(f64::total_cmp);
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    }
}

/// `observer,omega_o,J_e,J_u,J_f`, one row per observer.
pub fn compare_csv(rows: &[CompareRow]) -> String {
    let mut out = String::from("observer,omega_o,J_e,J_u,J_f\n");
    for r in rows {
        match r.criteria {
            Some(c) => writeln!(out, "{},{},{},{},{}", r.variant.label(), r.omega_o, c.je, c.ju, c.jf),
            None => writeln!(out, "{},{},diverged,diverged,diverged", r.variant.label(), r.omega_o),
        }
        .expect("writing to a String");
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn omega_columns() {
        let w1: Vec<f64> = SCENARIO_1.iter().map(|r| r.omega_o).collect();
        assert_eq!(w1, vec![490.03, 68.58, 27.32, 818.86, 340.27, 129.61]);
        let w2: Vec<f64> = SCENARIO_2.iter().map(|r| r.omega_o).collect();
        assert_eq!(w2, vec![586.76, 76.94, 31.52, 1057.46, 352.48, 140.34]);
        for (r, v) in SCENARIO_1.iter().zip(ObserverVariant::ALL) {
            assert_eq!(r.variant, v);
        }
    }

    #[test]
    fn unknown_scenario() {
        assert!(benchmark_table(3).is_err());
        assert!(benchmark_omega(0, ObserverVariant::Eso3).is_err());
        assert_eq!(benchmark_omega(2, ObserverVariant::Reso).unwrap(), 31.52);
    }

    #[test]
    fn medians() {
        assert_eq!(median(vec![3.0, 1.0, 2.0]), 2.0);
        assert_eq!(median(vec![4.0, 1.0, 2.0, 3.0]), 2.5);
    }

    #[test]
    fn csv_layout() {
        let rows = [
            CompareRow {
                variant: ObserverVariant::Reso,
                omega_o: 27.32,
                criteria: Some(Criteria { je: 0.01, ju: 59.0, jf: 1.0 }),
            },
            CompareRow {
                variant: ObserverVariant::Eso3,
                omega_o: 1.0,
                criteria: None,
            },
        ];
        let text = compare_csv(&rows);
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "observer,omega_o,J_e,J_u,J_f");
        assert_eq!(lines[1], "RESO,27.32,0.01,59,1");
        assert!(lines[2].ends_with("diverged"));
    }
}
