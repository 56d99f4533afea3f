//! Command implementations.
//!
//! Each command returns its stdout text plus an optional failure message;
//! the caller prints the text, then exits 1 if a failure is present.  Hard
//! errors short-circuit with a `CliError` carrying the exit code.  All
//! output is assembled deterministically: identical file, flags, and seed
//! produce byte-identical text.

use std::path::{Path, PathBuf};

use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use symdef_core::chord::{
    self, generic_h_experiment, scan, transport_fiber_point, ChordAnalyzer, GridSpec,
    HTrialOutcome,
};
use symdef_core::ideal::{degree_of_variety, Budget, IdealHandle};
use symdef_core::poly::{rat, rat_int, Polynomial};
use symdef_core::report::KvReport;
use symdef_core::seed::subseed;
use symdef_core::solve::{solve, SolveError};
use symdef_core::variety::{
    admissibility_certificate, check_general_position, check_strong_ci, choose_admissible_l,
    degree_bounds, k0_closure, l_infinity_of_surplus, surplus_locus, LinearForm, MidpointProblem,
};

use crate::args::{parse_grid, parse_point};
use crate::error::CliError;
use crate::problem::{self, LoadedProblem};

pub struct CmdOutput {
    pub stdout: String,
    /// When set, the run counts as a mathematical failure: the text is still
    /// printed, then the process exits 1 with this message.
    pub failure: Option<String>,
}

impl CmdOutput {
    fn ok(stdout: String) -> CmdOutput {
        CmdOutput { stdout, failure: None }
    }
}

/// Returns the problem with a certified slicing form: the file's form is
/// verified, or an admissible one is drawn from the problem seed.
fn ensure_l(loaded: LoadedProblem, limit: u64) -> Result<MidpointProblem, CliError> {
    let LoadedProblem { problem, l_from_file } = loaded;
    if l_from_file {
        let l = problem.l().expect("file-provided form is set").clone();
        let budget = Budget::new(limit);
        if !admissibility_certificate(&problem, &l, &budget)? {
            return Err(CliError::Math(
                "the slicing form from the file is not admissible: \
                 it vanishes somewhere on the cone at infinity away from the origin"
                    .into(),
            ));
        }
        Ok(problem)
    } else {
        let budget = Budget::new(limit);
        let form = choose_admissible_l(&problem, problem.seed(), &budget)?;
        Ok(problem.with_l(form))
    }
}

fn render_form(l: &LinearForm) -> String {
    let coeffs: Vec<String> = l.coefficients().iter().map(|c| c.to_string()).collect();
    coeffs.join(",")
}

fn render_complex_point(z: &[Complex64]) -> String {
    let coords: Vec<String> = z
        .iter()
        .map(|c| format!("{:.15e},{:.15e}", c.re, c.im))
        .collect();
    coords.join(";")
}

fn write_text(dir: &Path, name: &str, content: &str) -> Result<PathBuf, CliError> {
    std::fs::create_dir_all(dir)
        .map_err(|e| CliError::Input(format!("cannot create {}: {e}", dir.display())))?;
    let path = dir.join(name);
    std::fs::write(&path, content)
        .map_err(|e| CliError::Input(format!("cannot write {}: {e}", path.display())))?;
    Ok(path)
}

fn write_ideal(dir: &Path, name: &str, ideal: &IdealHandle) -> Result<PathBuf, CliError> {
    let content = format!(
        "# variables: {}\n{}\n",
        ideal.ring().var_names().join(" "),
        ideal.render()
    );
    write_text(dir, name, &content)
}

fn describe_ideal(label: &str, ideal: &IdealHandle) -> String {
    if ideal.has_constant_generator() {
        return format!("{label}: empty locus (unit ideal)\n");
    }
    let degrees: Vec<String> = ideal
        .generators()
        .iter()
        .map(|g| g.total_degree().map_or("0".into(), |d| d.to_string()))
        .collect();
    format!(
        "{label}: {} generator(s), degrees [{}]\n",
        ideal.generators().len(),
        degrees.join(", ")
    )
}

pub fn cmd_check(file: &Path, limit: u64, seed: Option<u64>) -> Result<CmdOutput, CliError> {
    let loaded = problem::load(file, seed)?;
    let problem = &loaded.problem;
    let budget = Budget::new(limit);
    let rx = check_strong_ci(problem.x(), &budget)?;
    let ry = check_strong_ci(problem.y(), &budget)?;
    let gp = check_general_position(problem, &budget)?;

    let mut out = String::new();
    out.push_str("== variety X ==\n");
    out.push_str(&format!("{rx}\n"));
    out.push_str("== variety Y ==\n");
    out.push_str(&format!("{ry}\n"));
    out.push_str("== pair position ==\n");
    out.push_str(&format!(
        "cone at infinity is a finite union of lines through the origin (dimension 1): {}\n",
        if gp { "pass" } else { "FAIL" }
    ));
    let ok = rx.passed() && ry.passed() && gp;
    out.push_str(&format!("overall: {}\n", if ok { "pass" } else { "FAIL" }));
    Ok(CmdOutput {
        stdout: out,
        failure: (!ok).then(|| "validity checks failed".to_string()),
    })
}

pub fn cmd_bifurcation(
    file: &Path,
    limit: u64,
    seed: Option<u64>,
    out_dir: &Path,
) -> Result<CmdOutput, CliError> {
    let loaded = problem::load(file, seed)?;
    let problem = ensure_l(loaded, limit)?;
    let mut out = String::new();
    out.push_str(&format!(
        "slicing form: {}\n",
        render_form(problem.l().expect("ensured"))
    ));

    let k0 = k0_closure(&problem, &Budget::new(limit))?;
    let k0_path = write_ideal(out_dir, "k0_closure.ideal", &k0)?;
    out.push_str(&describe_ideal("branch-value hypersurface", &k0));
    out.push_str(&format!("wrote {}\n", k0_path.display()));

    let surplus = surplus_locus(&problem, &Budget::new(limit))?;
    let linf = l_infinity_of_surplus(&problem, &surplus, &Budget::new(limit))?;
    let linf_path = write_ideal(out_dir, "l_infinity.ideal", &linf)?;
    out.push_str(&describe_ideal("hypersurface at infinity", &linf));
    out.push_str(&format!("wrote {}\n", linf_path.display()));

    let surplus_degree = if surplus.has_constant_generator() {
        Some(0)
    } else {
        Some(degree_of_variety(
            &surplus,
            &Budget::new(limit),
            subseed(problem.seed(), 0x5d01),
        )?)
    };
    if let Some(d) = surplus_degree {
        out.push_str(&format!("surplus critical locus degree: {d}\n"));
    }
    let linf_degree = if linf.has_constant_generator() {
        None
    } else {
        Some(degree_of_variety(
            &linf,
            &Budget::new(limit),
            subseed(problem.seed(), 0x5d02),
        )?)
    };
    let bound = degree_bounds(&problem, surplus_degree, None, None, linf_degree);
    out.push_str(&format!("{bound}\n"));
    let failure = (!bound.consistent())
        .then(|| "the degree of the hypersurface at infinity exceeds its bound".to_string());
    Ok(CmdOutput { stdout: out, failure })
}

pub fn cmd_chords(
    file: &Path,
    point: &str,
    limit: u64,
    seed: Option<u64>,
    out_dir: Option<&Path>,
) -> Result<CmdOutput, CliError> {
    let loaded = problem::load(file, seed)?;
    let m = loaded.problem.ambient_dimension();
    let p = parse_point(point, m)?;
    let problem = ensure_l(loaded, limit)?;
    let analyzer = ChordAnalyzer::new(problem, Some(limit))?;
    let report = analyzer.fiber_report(&p)?;

    let mut kv = KvReport::new();
    kv.push("slicing_form", render_form(analyzer.slicing_form()));
    report.write_kv(&mut kv);
    let rendered = kv.render();
    let mut out = rendered.clone();
    if let Some(dir) = out_dir {
        let path = write_text(dir, "report.kv", &rendered)?;
        out.push_str(&format!("wrote {}\n", path.display()));
    }
    Ok(CmdOutput::ok(out))
}

pub fn cmd_scan(
    file: &Path,
    grid: &str,
    base: Option<&str>,
    limit: u64,
    seed: Option<u64>,
    out_dir: Option<&Path>,
) -> Result<CmdOutput, CliError> {
    let loaded = problem::load(file, seed)?;
    let m = loaded.problem.ambient_dimension();
    let var_names: Vec<String> = loaded.problem.ring().var_names().to_vec();
    let base_point = match base {
        Some(s) => parse_point(s, m)?,
        None => vec![rat_int(0); m],
    };
    let axes = parse_grid(grid, &var_names)?;
    let problem = ensure_l(loaded, limit)?;
    let analyzer = ChordAnalyzer::new(problem, Some(limit))?;
    let spec = GridSpec { base: base_point, axes };
    let result = scan(&analyzer, &spec, analyzer.problem().seed())?;

    let csv = result.to_csv();
    let mut summary = String::new();
    summary.push_str(&format!("#cells={}\n", result.cells.len()));
    let locus: Vec<String> = result.locus_cells.iter().map(usize::to_string).collect();
    summary.push_str(&format!("#locus_cells={}\n", locus.join(",")));
    let jumps: Vec<String> = result
        .jump_pairs
        .iter()
        .map(|(a, b)| format!("{a}-{b}"))
        .collect();
    summary.push_str(&format!("#jump_pairs={}\n", jumps.join(";")));

    let out = match out_dir {
        Some(dir) => {
            let path = write_text(dir, "scan.csv", &csv)?;
            format!("{summary}wrote {}\n", path.display())
        }
        None => format!("{csv}{summary}"),
    };
    Ok(CmdOutput::ok(out))
}

pub fn cmd_generic_h(
    file: &Path,
    trials: usize,
    samples: usize,
    limit: u64,
    seed: Option<u64>,
) -> Result<CmdOutput, CliError> {
    let loaded = problem::load(file, seed)?;
    let problem = loaded.problem;
    let report = generic_h_experiment(
        problem.x(),
        problem.y(),
        trials,
        samples,
        problem.seed(),
        Some(limit),
    )?;
    let mut out = String::new();
    for trial in &report.trials {
        match &trial.outcome {
            HTrialOutcome::Computed { mu } => {
                out.push_str(&format!("trial={} status=computed mu={mu}\n", trial.trial));
            }
            HTrialOutcome::Skipped { reason } => {
                out.push_str(&format!(
                    "trial={} status=skipped reason={reason}\n",
                    trial.trial
                ));
            }
        }
    }
    out.push_str(&format!("mu={}\n", report.mu));
    out.push_str(&format!("computed={}\n", report.computed));
    Ok(CmdOutput::ok(out))
}

pub fn cmd_transport(
    file: &Path,
    from: &str,
    to: &str,
    steps: usize,
    limit: u64,
    seed: Option<u64>,
) -> Result<CmdOutput, CliError> {
    let loaded = problem::load(file, seed)?;
    let m = loaded.problem.ambient_dimension();
    let p0 = parse_point(from, m)?;
    let p1 = parse_point(to, m)?;
    let problem = ensure_l(loaded, limit)?;
    let analyzer = ChordAnalyzer::new(problem, Some(limit))?;
    let start = pick_start(&analyzer, &p0, limit)?;
    let result = transport_fiber_point(&analyzer, &p0, &p1, &start, steps)?;

    let mut kv = KvReport::new();
    kv.push("from", render_rational_point(&p0));
    kv.push("to", render_rational_point(&p1));
    kv.push("steps", steps);
    kv.push("start", render_complex_point(&start));
    kv.push("end", render_complex_point(&result.end));
    kv.push("max_step_residual", format!("{:.6e}", result.max_step_residual));
    kv.push("slice_drift", format!("{:.6e}", result.slice_drift));
    kv.push("end_residual", format!("{:.6e}", result.end_residual));
    Ok(CmdOutput::ok(kv.render()))
}

fn render_rational_point(p: &[symdef_core::poly::Rational]) -> String {
    let coords: Vec<String> = p.iter().map(|c| c.to_string()).collect();
    coords.join(",")
}

/// Deterministically finds a fiber point over `p0` by slicing the fiber with
/// the slicing form at seeded random levels and taking the first clean root.
fn pick_start(
    analyzer: &ChordAnalyzer,
    p0: &[symdef_core::poly::Rational],
    limit: u64,
) -> Result<Vec<Complex64>, CliError> {
    let problem = analyzer.problem();
    let ring = problem.ring();
    let fiber = chord::fiber_ideal(problem, p0);
    let l_poly = analyzer.slicing_form().to_polynomial(ring);
    let mut rng = ChaCha8Rng::seed_from_u64(subseed(problem.seed(), 0x57a9_7001));
    for _ in 0..20 {
        let num = loop {
            let v = rng.gen_range(-40i64..=40);
            if v != 0 {
                break v;
            }
        };
        let den = rng.gen_range(1i64..=8);
        let mut gens = fiber.generators().to_vec();
        gens.push(&l_poly - &Polynomial::constant(ring, rat(num, den)));
        let sliced = IdealHandle::new(ring, gens);
        match solve(&sliced, &Budget::new(limit)) {
            Ok(set) => {
                for pt in &set.points {
                    if chord::ideal_residual(&fiber, &pt.coordinates) <= 1e-9 {
                        return Ok(pt.coordinates.clone());
                    }
                }
            }
            Err(SolveError::PositiveDimensional { .. }) => continue,
            Err(e) => return Err(e.into()),
        }
    }
    Err(CliError::Math(
        "no fiber point found over the path start within the retry allowance".into(),
    ))
}
