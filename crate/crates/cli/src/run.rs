use std::path::PathBuf;

use circumfeas::sphere::{in_zone, run_srm};
use circumfeas::{
    run_crm, run_crm_product_space, run_dr, run_map, trace_csv, Error, IterationTrace, Scenario, Termination, Tolerance,
};

use crate::{create_dir, scenario_dirs, write, CliResult, Method, Outcome, Summary, TraceFile};

#[derive(Debug, Clone)]
pub struct RunOptions {
    pub scenario: String,
    pub method: Method,
    pub out: PathBuf,
    pub start: usize,
    pub max_iters: Option<usize>,
    pub eps_feas: Option<f64>,
    pub eps_degen: Option<f64>,
}

/// Runs `method` on one scenario start and writes `trace.csv`, `trace.json`
/// and `summary.json` into `out`.
pub fn cmd_run(opts: &RunOptions) -> CliResult<Outcome> {
    let dirs = scenario_dirs();
    let dir_refs: Vec<&std::path::Path> = dirs.iter().map(PathBuf::as_path).collect();
    let mut scenario = Scenario::resolve(&opts.scenario, &dir_refs)?;
    apply_overrides(&mut scenario, opts)?;

    let trace = execute(&scenario, opts.method, opts.start)?;
    let x0 = &scenario.initial_points[opts.start];
    let zone = match scenario.cone_pair() {
        Some((a, b)) if scenario.dim == 3 => in_zone(a, b, x0, &scenario.tol).ok(),
        _ => None,
    };
    let met = expectation_met(&scenario, &trace);

    create_dir(&opts.out)?;
    write(&opts.out.join("trace.csv"), trace_csv::trace_to_string(&trace, opts.method.name())?)?;
    let summary = Summary {
        scenario: scenario.name.clone(),
        method: opts.method,
        start_index: opts.start,
        terminated: trace.terminated,
        iterations_used: trace.iterations_used,
        final_point: trace.final_point.clone(),
        final_dist_a: trace.final_dist_a,
        final_dist_b: trace.final_dist_b,
        in_zone: zone,
        expectation_met: met,
    };
    let file = TraceFile { scenario, method: opts.method, start_index: opts.start, trace };
    write(&opts.out.join("trace.json"), to_json(&file))?;
    write(&opts.out.join("summary.json"), to_json(&summary))?;
    Ok(if met { Outcome::Ok } else { Outcome::ExpectationViolated })
}

fn to_json<T: serde::Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("plain data serializes");
    s.push('\n');
    s
}

fn apply_overrides(s: &mut Scenario, opts: &RunOptions) -> CliResult<()> {
    if let Some(m) = opts.max_iters {
        if m == 0 {
            return Err(Error::InvalidInput("--max-iters must be >= 1".into()).into());
        }
        s.max_iters = m;
    }
    if opts.eps_feas.is_some() || opts.eps_degen.is_some() {
        s.tol = Tolerance::new(opts.eps_feas.unwrap_or(s.tol.eps_feas), opts.eps_degen.unwrap_or(s.tol.eps_degen))?;
    }
    if opts.start >= s.initial_points.len() {
        return Err(Error::InvalidInput(format!(
            "--start {} out of range; scenario has {} initial points",
            opts.start,
            s.initial_points.len()
        ))
        .into());
    }
    Ok(())
}

/// Runs one start of a scenario with the chosen method.
pub fn execute(s: &Scenario, method: Method, start: usize) -> circumfeas::Result<IterationTrace> {
    let x0 = s.initial_points.get(start).ok_or_else(|| Error::InvalidInput(format!("no initial point {start}")))?;
    let (a, b, tol, n) = (&s.set_a, &s.set_b, &s.tol, s.max_iters);
    match method {
        Method::Crm => run_crm(a, b, x0, tol, n),
        Method::CrmProduct => run_crm_product_space(a, b, x0, tol, n),
        Method::Map => run_map(a, b, x0, tol, n),
        Method::Dr => run_dr(a, b, x0, tol, n),
        Method::Srm => {
            if s.dim != 3 {
                return Err(Error::DimensionMismatch { expected: 3, found: s.dim });
            }
            let (ca, cb) =
                s.cone_pair().ok_or_else(|| Error::InvalidInput("srm needs both sets to be cones".into()))?;
            run_srm(ca, cb, x0, tol, n)
        }
    }
}

/// Whether a trace agrees with the scenario's expectation; without one,
/// feasibility is expected.
pub fn expectation_met(s: &Scenario, trace: &IterationTrace) -> bool {
    let feasible = trace.terminated == Termination::Feasible;
    match s.expected {
        None => feasible,
        Some(e) if e.finite => feasible && e.max_steps.map_or(true, |m| trace.iterations_used <= m),
        Some(_) => trace.terminated == Termination::MaxIters,
    }
}
