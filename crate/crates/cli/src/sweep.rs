use std::fmt::Write as _;
use std::path::PathBuf;

use circumfeas::scenario::Generator;
use circumfeas::Termination;
use rayon::prelude::*;

use crate::run::execute;
use crate::{create_dir, write, CliResult, Method, Outcome};

#[derive(Debug, Clone)]
pub struct SweepOptions {
    pub generator: Generator,
    pub count: u64,
    pub seed: u64,
    /// Defaults to product-space CRM for polyhedra and plain CRM otherwise.
    pub method: Option<Method>,
    pub out: PathBuf,
}

/// Aggregate over all starts of one generated scenario.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub seed: u64,
    pub starts: usize,
    pub feasible: usize,
    pub max_iterations_used: usize,
    /// `Feasible` when every start was, else the first other outcome.
    pub terminated: Termination,
}

pub fn default_method(g: Generator) -> Method {
    match g {
        Generator::RandomPolyhedraR2 => Method::CrmProduct,
        _ => Method::Crm,
    }
}

/// Runs `count` scenarios with seeds `seed, seed + 1, …` in parallel and
/// writes `aggregate.csv` and `verdict.txt`.
pub fn cmd_sweep(opts: &SweepOptions) -> CliResult<Outcome> {
    let method = opts.method.unwrap_or_else(|| default_method(opts.generator));
    let rows = sweep_rows(opts.generator, opts.seed, opts.count, method)?;

    let mut csv = String::from("seed,starts,feasible,max_iterations_used,terminated\n");
    for r in &rows {
        let _ = writeln!(csv, "{},{},{},{},{}", r.seed, r.starts, r.feasible, r.max_iterations_used, r.terminated.as_str());
    }
    let (line, pass) = verdict(opts.generator, method, &rows);
    create_dir(&opts.out)?;
    write(&opts.out.join("aggregate.csv"), csv)?;
    write(&opts.out.join("verdict.txt"), format!("{line}\n"))?;
    Ok(if pass { Outcome::Ok } else { Outcome::ExpectationViolated })
}

pub fn sweep_rows(g: Generator, seed: u64, count: u64, method: Method) -> circumfeas::Result<Vec<SweepRow>> {
    (0..count)
        .into_par_iter()
        .map(|i| {
            let s = g.generate(seed.wrapping_add(i));
            let mut row = SweepRow {
                seed: seed.wrapping_add(i),
                starts: s.initial_points.len(),
                feasible: 0,
                max_iterations_used: 0,
                terminated: Termination::Feasible,
            };
            let cap = s.expected.and_then(|e| e.max_steps);
            for k in 0..s.initial_points.len() {
                let t = execute(&s, method, k)?;
                row.max_iterations_used = row.max_iterations_used.max(t.iterations_used);
                let within = cap.map_or(true, |c| t.iterations_used <= c);
                if t.terminated == Termination::Feasible && within {
                    row.feasible += 1;
                } else if row.terminated == Termination::Feasible {
                    row.terminated = t.terminated;
                }
            }
            Ok(row)
        })
        .collect()
}

/// One line naming the claim under test and whether every start upheld it.
pub fn verdict(g: Generator, method: Method, rows: &[SweepRow]) -> (String, bool) {
    let claim = match g {
        Generator::RandomConePairR2 => "cone pairs in R2 reach the intersection in at most 3 steps",
        Generator::RandomPolyhedraR2 => "polyhedral pairs in R2 reach the intersection finitely",
        Generator::RandomProperConePairR3 => "zone starts for proper cone pairs in R3 reach the intersection in at most 3 steps",
    };
    let starts: usize = rows.iter().map(|r| r.starts).sum();
    let feasible: usize = rows.iter().map(|r| r.feasible).sum();
    let worst = rows.iter().map(|r| r.max_iterations_used).max().unwrap_or(0);
    let pass = feasible == starts;
    let line = format!(
        "{} {}: {claim} [{feasible}/{starts} starts, {} instances, max steps {worst}, method {}]",
        if pass { "PASS" } else { "FAIL" },
        g.name(),
        rows.len(),
        method.name()
    );
    (line, pass)
}
