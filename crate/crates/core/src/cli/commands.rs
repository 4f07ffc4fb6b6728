//! The experiments behind each subcommand.

use std::path::Path;

use super::args::*;
use super::{prepare_out, CliError, Outcome};
use crate::counterexample::experiment::{dual_exponent, predicted_verdict};
use crate::counterexample::{contradiction_summary, expectation_experiment, fl_norm_experiment, make_bump_pair, DEFAULT_PERIOD};
use crate::decomposition::coefficients::coefficient_decay_report;
use crate::decomposition::tiling::tiling_check;
use crate::decomposition::whitney::validate_annulus;
use crate::decomposition::WhitneyConfig;
use crate::grid::Grid;
use crate::multiplier::{oracle_case, OracleEnsemble, Symbol};
use crate::parallel::map_indexed;
use crate::paraproduct::holder::{chosen_slots, family_operator, key_family, roles_for, SLOPE_TOLERANCE};
use crate::paraproduct::tiles::TILE_CSV_HEADER;
use crate::paraproduct::{domination_suite, empirical_holder_bound, HolderExponents, HolderSetup, Roles};
use crate::report::{fmt_float, write_csv};

/// Relative `ℓ²` tolerance of the oracle comparison.
pub const ORACLE_TOLERANCE: f64 = 1e-3;
/// Allowed distance of the expectation slope from `r0/2`, beyond its interval.
pub const EXPECTATION_WINDOW: f64 = 0.15;
/// Allowed distance of the FL-norm slope from `1/q0'`, beyond its interval.
pub const FL_WINDOW: f64 = 0.05;

pub fn execute(cmd: &Command) -> Result<Outcome, CliError> {
    match cmd {
        Command::VerifyBht(a) => verify_bht(a),
        Command::Counterexample(a) => counterexample(a),
        Command::SymbolDecay(a) => symbol_decay(a),
        Command::ModelBound(a) => model_bound(a),
        Command::DumpTiling(a) => dump_tiling(a),
    }
}

fn verdict(pass: bool) -> Outcome {
    if pass {
        Outcome::Pass
    } else {
        Outcome::Fail
    }
}

fn whitney(constant: f64) -> Result<WhitneyConfig, CliError> {
    let cfg = WhitneyConfig { constant };
    cfg.validate()?;
    Ok(cfg)
}

fn write(dir: &Path, name: &str, header: &str, rows: &[String]) -> Result<(), CliError> {
    write_csv(&dir.join(name), header, rows)?;
    Ok(())
}

fn verify_bht(a: &VerifyBhtArgs) -> Result<Outcome, CliError> {
    if a.cases == 0 {
        return Err(CliError::Usage("--cases must be positive".into()));
    }
    let mut ens = OracleEnsemble { samples: a.samples, ..OracleEnsemble::default() };
    ens.pv.eta = a.eta;
    ens.pv.validate()?;
    prepare_out(&a.out)?;
    let errors = map_indexed(a.cases as usize, |c| oracle_case(&ens, a.seed, c as u64))
        .into_iter()
        .collect::<Result<Vec<_>, _>>()?;
    let rows: Vec<String> = errors.iter().enumerate().map(|(c, e)| format!("{c},{}", fmt_float(*e))).collect();
    write(&a.out, "bht_verify.csv", "case_id,rel_l2_err", &rows)?;
    let worst = errors.iter().cloned().fold(0.0, f64::max);
    println!("verify-bht: {} cases, worst relative error {worst:.3e} (tolerance {ORACLE_TOLERANCE:e})", errors.len());
    Ok(verdict(errors.iter().all(|e| *e < ORACLE_TOLERANCE)))
}

fn brackets(slope: f64, ci: f64, target: f64, window: f64) -> bool {
    (slope - target).abs() <= ci + window
}

fn counterexample(a: &CounterexampleArgs) -> Result<Outcome, CliError> {
    let bumps = make_bump_pair(Grid::centered(a.samples, DEFAULT_PERIOD, 0.0)?)?;
    let nlist = &a.nlist.0;
    let exp1 = expectation_experiment(&bumps, a.r0, nlist, a.trials, a.seed)?;
    let exp2 = fl_norm_experiment(&bumps, a.q0, nlist, a.seed)?;
    let summary = contradiction_summary(&exp1, &exp2, a.r0, a.q0)?;
    prepare_out(&a.out)?;
    let mut rows = exp1.csv_rows("expectation");
    rows.push_str(&exp2.csv_rows("fl_norm"));
    write(&a.out, "scaling.csv", "experiment,N,value,stderr", &[rows])?;
    let predicted = predicted_verdict(a.q0);
    let fl_target = 1.0 / dual_exponent(a.q0);
    let text = format!(
        "verdict = {}\npredicted = {predicted}\nexpectation_slope = {}\nexpectation_slope_ci = {}\nexpectation_target = {}\n\
         fl_slope = {}\nfl_slope_ci = {}\nfl_target = {}\nlower_exponent = {}\nupper_exponent = {}\njoint_ci = {}\n",
        summary.verdict,
        fmt_float(exp1.slope),
        fmt_float(exp1.slope_ci),
        fmt_float(summary.target_lower),
        fmt_float(exp2.slope),
        fmt_float(exp2.slope_ci),
        fmt_float(fl_target),
        fmt_float(summary.lower),
        fmt_float(summary.upper),
        fmt_float(summary.joint_ci),
    );
    std::fs::write(a.out.join("verdict.txt"), text)?;
    println!(
        "counterexample: {} (predicted {predicted}); expectation slope {:.4} ± {:.4} vs {:.4}; FL slope {:.4} ± {:.4} vs {:.4}",
        summary.verdict, exp1.slope, exp1.slope_ci, summary.target_lower, exp2.slope, exp2.slope_ci, fl_target
    );
    let pass = summary.verdict == predicted
        && brackets(exp1.slope, exp1.slope_ci, summary.target_lower, EXPECTATION_WINDOW)
        && brackets(exp2.slope, exp2.slope_ci, fl_target, FL_WINDOW);
    Ok(verdict(pass))
}

fn symbol_decay(a: &SymbolDecayArgs) -> Result<Outcome, CliError> {
    if !(a.delta.is_finite() && a.delta >= 0.0) {
        return Err(CliError::Usage(format!("--delta must be finite and non-negative, got {}", a.delta)));
    }
    let cfg = whitney(a.whitney_constant)?;
    let report = coefficient_decay_report(&Symbol::exp_decay(a.delta), a.nmax, &cfg)?;
    prepare_out(&a.out)?;
    let rows: Vec<String> = report
        .rows
        .iter()
        .map(|r| format!("{},{},{},{}", r.n, r.slot, fmt_float(r.max_coefficient), fmt_float(r.envelope)))
        .collect();
    write(&a.out, "coeff_decay.csv", "n,slot,maxC,envelope", &rows)?;
    println!(
        "symbol-decay: delta {} ({}), C0 = {:.4e}, envelope {} for n <= {}",
        a.delta,
        report.note(),
        report.c0,
        if report.envelope_holds { "holds" } else { "violated" },
        a.nmax
    );
    Ok(verdict(report.envelope_holds))
}

fn model_bound(a: &ModelBoundArgs) -> Result<Outcome, CliError> {
    let exps = HolderExponents::new(a.p1, a.p2)?;
    if a.ensemble == 0 || a.triples == 0 {
        return Err(CliError::Usage("--ensemble and --triples must be positive".into()));
    }
    let cfg = whitney(a.whitney_constant)?;
    let slot = match a.k {
        SlotArg::Probe => None,
        SlotArg::Fixed(k) => Some(k),
    };
    let mut families = Vec::new();
    for &n in &a.n.0 {
        for (s, key) in chosen_slots(n, slot, &cfg)? {
            families.push((n, s, family_operator(&key_family(key, n, s)?)?));
        }
    }
    prepare_out(&a.out)?;
    let tile_dir = a.out.join("tiles");
    std::fs::create_dir_all(&tile_dir)?;
    let per_family = a.triples.div_ceil(families.len());
    let mut rows = Vec::new();
    let mut all_pass = true;
    let bool_str = |b: bool| if b { "true" } else { "false" };
    for (i, (n, s, op)) in families.iter().enumerate() {
        write(&tile_dir, &format!("n{n}_k{s}.csv"), TILE_CSV_HEADER, &[op.collection.csv_rows()])?;
        let stream = 2 * i as u64;
        let suite = domination_suite(op, roles_for(*n), per_family, a.seed, stream)?;
        let single = domination_suite(&op.prefix(1), Roles::Standard, 1, a.seed, stream + 1)?;
        all_pass &= suite.all_pass && single.all_pass;
        for (kind, d, tiles) in [("domination", &suite, op.len()), ("domination_single_tile", &single, 1)] {
            rows.push(format!(
                "{kind},{n},{s},{tiles},{},{},{},{}",
                fmt_float(d.worst.lhs),
                fmt_float(d.worst.rhs),
                fmt_float(d.worst_ratio()),
                bool_str(d.all_pass)
            ));
        }
    }
    let setup = HolderSetup { cones: a.n.0.clone(), slot, ensemble: a.ensemble, seed: a.seed, config: cfg };
    let report = empirical_holder_bound(&setup, exps)?;
    for r in &report.rows {
        rows.push(format!("holder,{},{},{},,,{},", r.n, r.slot, r.tiles, fmt_float(r.ratio)));
    }
    let flat = |slope: f64| slope.abs() <= SLOPE_TOLERANCE;
    for (kind, slope) in [("slope_vs_n", report.versus_n.slope), ("slope_vs_size", report.versus_size.slope)] {
        rows.push(format!("{kind},,,,,,{},{}", fmt_float(slope), bool_str(flat(slope))));
    }
    write(&a.out, "model_bound.csv", "kind,n,slot,tiles,lhs,rhs,ratio,pass", &rows)?;
    println!(
        "model-bound: p = {:.4}, {} families, domination {}, max ratio {:.4}, slope vs n {:.4}, slope vs size {:.4}",
        exps.p(),
        families.len(),
        if all_pass { "holds" } else { "violated" },
        report.max_ratio(),
        report.versus_n.slope,
        report.versus_size.slope
    );
    Ok(verdict(all_pass && report.slopes_flat()))
}

fn dump_tiling(a: &DumpTilingArgs) -> Result<Outcome, CliError> {
    let &[rmin, rmax] = a.annulus.0.as_slice() else {
        return Err(CliError::Usage("--annulus takes exactly two numbers `rmin,rmax`".into()));
    };
    validate_annulus(rmin, rmax)?;
    let cfg = whitney(a.whitney_constant)?;
    let check = tiling_check(a.n, (rmin, rmax), &cfg, a.points, a.seed)?;
    prepare_out(&a.out)?;
    let rows: Vec<String> = check
        .cover
        .squares
        .iter()
        .map(|sq| {
            format!(
                "{},{},{},{},{},{},{}",
                a.n,
                sq.scale(),
                sq.q1.index,
                sq.q1.shift.label(),
                sq.q2.index,
                sq.q2.shift.label(),
                sq.slot
            )
        })
        .collect();
    write(&a.out, "tiling.csv", "n,k_scale,j1,alpha1,j2,alpha2,slot", &rows)?;
    if check.cover.is_empty() {
        println!("dump-tiling: empty cover, cone {} has no square in [{rmin}, {rmax}]", a.n);
        return Ok(Outcome::Pass);
    }
    println!(
        "dump-tiling: {} squares, {} slots; coverage {}..{} over {} core points; partition error {:.2e}; proportionality {}",
        check.cover.squares.len(),
        check.cover.slot_count(),
        check.coverage.0,
        check.coverage.1,
        check.points,
        check.partition_error,
        if check.proportionality { "holds" } else { "violated" }
    );
    Ok(verdict(check.passed()))
}
