//! The verification suite: every acceptance criterion as named checks.

use std::collections::BTreeMap;
use std::f64::consts::FRAC_PI_4;
use std::fmt;
use std::io::Write;
use std::sync::Arc;

use num_complex::Complex64;
use phasefluct_core::{
    bp_operators, closed_form_with, compare, convergence_slope, evaluate_state, evolve, evolved_state, evolved_state_adaptive, expectation,
    interaction_hamiltonian, number_op, sg_operators, ClosedFormCoefficients, EvolutionSettings, ExactEvaluation,
    FormalismChoice, ModeOperator, ProcessKind, ProcessSpec, StateVector,
};
use rayon::prelude::*;

use crate::config::{SweepConfig, TimeGrid, Tolerances, VerifyConfig};
use crate::record::{format_number, write_csv, COLUMNS};
use crate::run::run_sweep;
use crate::taylor::taylor_check;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    AtMost,
    AtLeast,
    Below,
    Above,
}

impl Relation {
    fn holds(self, measured: f64, threshold: f64) -> bool {
        match self {
            Relation::AtMost => measured <= threshold,
            Relation::AtLeast => measured >= threshold,
            Relation::Below => measured < threshold,
            Relation::Above => measured > threshold,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Relation::AtMost => "<=",
            Relation::AtLeast => ">=",
            Relation::Below => "<",
            Relation::Above => ">",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub process: Option<ProcessKind>,
    pub passed: bool,
    pub measured: f64,
    pub relation: Relation,
    pub threshold: f64,
    pub detail: String,
}

impl Check {
    fn new(
        name: String,
        process: Option<ProcessKind>,
        measured: f64,
        relation: Relation,
        threshold: f64,
        detail: String,
    ) -> Self {
        let passed = relation.holds(measured, threshold);
        Self { name, process, passed, measured, relation, threshold, detail }
    }

    fn errored(name: String, process: Option<ProcessKind>, relation: Relation, threshold: f64, err: impl fmt::Display) -> Self {
        Self { name, process, passed: false, measured: f64::NAN, relation, threshold, detail: format!("error: {err}") }
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} {:<28} measured {:>12} {} {:<9}",
            if self.passed { "PASS" } else { "FAIL" },
            self.name,
            if self.measured.is_finite() { format!("{:.4e}", self.measured) } else { "undef".into() },
            self.relation.symbol(),
            format!("{:e}", self.threshold),
        )?;
        if !self.detail.is_empty() {
            write!(f, "  {}", self.detail)?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerificationReport {
    pub checks: Vec<Check>,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failing(&self) -> Vec<&str> {
        self.checks.iter().filter(|c| !c.passed).map(|c| c.name.as_str()).collect()
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn write_csv<W: Write>(&self, out: W) -> csv::Result<()> {
        let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(out);
        w.write_record(["check", "process", "status", "measured", "relation", "threshold", "detail"])?;
        for c in &self.checks {
            w.write_record([
                c.name.as_str(),
                c.process.map_or("all", |p| p.name()),
                if c.passed { "pass" } else { "fail" },
                &format_number(c.measured),
                c.relation.symbol(),
                &format_number(c.threshold),
                &c.detail,
            ])?;
        }
        w.flush()?;
        Ok(())
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            writeln!(f, "{c}")?;
        }
        let failed = self.failing();
        write!(f, "{} checks, {} failed", self.checks.len(), failed.len())?;
        if !failed.is_empty() {
            write!(f, ": {}", failed.join(", "))?;
        }
        Ok(())
    }
}

/// Inputs shared by all checks.
#[derive(Debug, Clone)]
struct Ctx {
    settings: EvolutionSettings,
    coefficients: BTreeMap<ProcessKind, ClosedFormCoefficients>,
}

impl Ctx {
    fn coefficients(&self, kind: ProcessKind) -> ClosedFormCoefficients {
        self.coefficients.get(&kind).copied().unwrap_or_else(|| ClosedFormCoefficients::printed(kind))
    }

    fn exact(
        &self,
        kind: ProcessKind,
        alpha_sq: f64,
        theta: f64,
        gt: f64,
        f: FormalismChoice,
    ) -> phasefluct_core::Result<ExactEvaluation> {
        let spec = ProcessSpec::from_mean_photons(kind, 1.0, alpha_sq, theta, gt)?;
        let (psi, _) = evolved_state_adaptive(&spec, &self.settings)?;
        evaluate_state(&spec, &psi, f)
    }

    fn formula_u(&self, kind: ProcessKind, alpha_sq: f64, gt: f64) -> f64 {
        let spec = ProcessSpec::from_mean_photons(kind, 1.0, alpha_sq, 0.0, gt).expect("valid grid point");
        closed_form_with(&spec, &self.coefficients(kind)).u
    }
}

const BASELINE_ALPHAS: [f64; 4] = [0.5, 1.0, 2.0, 4.0];
const SLOPE_GTS: [f64; 4] = [0.01, 0.02, 0.03, 0.05];

fn name(criterion: u32, kind: ProcessKind, what: &str) -> String {
    format!("c{criterion}.{}.{what}", kind.name())
}

/// Runs `f` over `items` in parallel, keeping the first error.
fn collect<T: Sync, R: Send>(
    items: &[T],
    f: impl Fn(&T) -> phasefluct_core::Result<R> + Sync + Send,
) -> phasefluct_core::Result<Vec<R>> {
    items.par_iter().map(f).collect()
}

fn coherent_baseline(ctx: &Ctx, kind: ProcessKind) -> Vec<Check> {
    let bp_name = name(1, kind, "bp_u0");
    let sg_name = name(1, kind, "sg_u0_bound");
    let run = |f: FormalismChoice| {
        collect(&BASELINE_ALPHAS, |&m| Ok(ctx.exact(kind, m, 0.0, 0.0, f)?.cn.u.value().unwrap_or(f64::NAN)))
    };
    let bp = match run(FormalismChoice::Bp) {
        Ok(us) => {
            let dev = us.iter().map(|u| (u - 0.5).abs()).fold(0.0, f64::max);
            Check::new(bp_name, Some(kind), dev, Relation::AtMost, 1e-9, "max |U - 1/2| over |alpha|^2 in {0.5,1,2,4}".into())
        }
        Err(e) => Check::errored(bp_name, Some(kind), Relation::AtMost, 1e-9, e),
    };
    let sg = match run(FormalismChoice::Sg) {
        Ok(us) => Check::new(sg_name, Some(kind), us.iter().cloned().fold(f64::INFINITY, f64::min), Relation::AtLeast, 0.25, "min U".into()),
        Err(e) => Check::errored(sg_name, Some(kind), Relation::AtLeast, 0.25, e),
    };
    vec![bp, sg]
}

fn closed_form_agreement(ctx: &Ctx, kind: ProcessKind) -> Vec<Check> {
    let grid: Vec<(f64, f64)> = [1.0, 2.0].iter().flat_map(|&m| [0.0, FRAC_PI_4].map(|th| (m, th))).collect();
    let k = ctx.coefficients(kind);
    let reports = collect(&grid, |&(m, th)| {
        let gt = (1e-4 / m).sqrt();
        let ex = ctx.exact(kind, m, th, gt, FormalismChoice::Bp)?;
        compare(&ex, &closed_form_with(&ex.spec, &k), 1e-3)
    });
    ["U", "N_bar", "d"]
        .iter()
        .map(|field| {
            let n = name(2, kind, field);
            match &reports {
                Ok(rs) => {
                    let (worst, at) = rs
                        .iter()
                        .zip(&grid)
                        .map(|(r, p)| (r.field(field).map_or(f64::INFINITY, |d| d.relative), p))
                        .fold((0.0, &grid[0]), |acc, x| if x.0 > acc.0 { x } else { acc });
                    let detail = format!("worst at |alpha|^2={}, theta={:.4}, g^2t^2|alpha|^2=1e-4", at.0, at.1);
                    Check::new(n, Some(kind), worst, Relation::AtMost, 1e-3, detail)
                }
                Err(e) => Check::errored(n, Some(kind), Relation::AtMost, 1e-3, e),
            }
        })
        .collect()
}

fn convergence_order(ctx: &Ctx, kind: ProcessKind) -> Vec<Check> {
    let n = name(3, kind, "u_error_slope");
    let k = ctx.coefficients(kind);
    let pts = collect(&SLOPE_GTS, |&gt| {
        let ex = ctx.exact(kind, 1.0, 0.0, gt, FormalismChoice::Bp)?;
        let u = ex.cn.u.value().unwrap_or(f64::NAN);
        Ok((gt, u - closed_form_with(&ex.spec, &k).u))
    });
    vec![match pts.and_then(|p| convergence_slope(&p)) {
        Ok(s) => Check::new(n, Some(kind), s.slope, Relation::AtLeast, 3.0, format!("fit residual {:.2e}", s.residual)),
        Err(e) => Check::errored(n, Some(kind), Relation::AtLeast, 3.0, e),
    }]
}

fn antibunching(ctx: &Ctx, kind: ProcessKind) -> Vec<Check> {
    let k = ctx.coefficients(kind).witness;
    let mut grid = Vec::new();
    for m in BASELINE_ALPHAS {
        for th in [0.0, FRAC_PI_4] {
            for gt in [0.0025, 0.005, 0.0075, 0.01] {
                grid.push((m, th, gt));
            }
        }
    }
    let ds = collect(&grid, |&(m, th, gt)| Ok(ctx.exact(kind, m, th, gt, FormalismChoice::Bp)?.cn.d));
    let (sign, ratio) = (name(4, kind, "d_negative"), name(4, kind, "d_ratio"));
    match ds {
        Ok(ds) => {
            let max_d = ds.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
            let ratios: Vec<f64> =
                ds.iter().zip(&grid).map(|(d, &(m, _, gt))| d / (-k * gt * gt * m * m)).collect();
            let lo = ratios.iter().cloned().fold(f64::INFINITY, f64::min);
            let hi = ratios.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
            let dev = (1.0 - lo).max(hi - 1.0);
            vec![
                Check::new(sign, Some(kind), max_d, Relation::Below, 0.0, "max d over 0 < gt <= 0.01".into()),
                Check::new(
                    ratio,
                    Some(kind),
                    dev,
                    Relation::AtMost,
                    0.1,
                    format!("d/(-{k} g^2t^2|alpha|^4) in [{lo:.4}, {hi:.4}]"),
                ),
            ]
        }
        Err(e) => vec![
            Check::errored(sign, Some(kind), Relation::Below, 0.0, &e),
            Check::errored(ratio, Some(kind), Relation::AtMost, 0.1, &e),
        ],
    }
}

fn sign_equivalence(ctx: &Ctx, kind: ProcessKind) -> Vec<Check> {
    let k = ctx.coefficients(kind);
    let mut violations = 0usize;
    let mut points = 0usize;
    for m in BASELINE_ALPHAS {
        // last gt with smallness <= validity threshold
        let edge = (0.1 / (k.u_numerator * m)).sqrt();
        for th in [0.0, FRAC_PI_4, 2.0 * FRAC_PI_4, 3.0 * FRAC_PI_4] {
            for i in 0..=20 {
                let gt = edge * i as f64 / 20.0;
                let spec = ProcessSpec::from_mean_photons(kind, 1.0, m, th, gt).expect("valid grid point");
                let f = closed_form_with(&spec, &k);
                let su = (f.u - 0.5).partial_cmp(&0.0);
                let sd = f.d.partial_cmp(&0.0);
                let expected = if i == 0 { Some(std::cmp::Ordering::Equal) } else { Some(std::cmp::Ordering::Less) };
                points += 1;
                if su != sd || sd != expected {
                    violations += 1;
                }
            }
        }
    }
    vec![Check::new(
        name(5, kind, "sign_u_equals_sign_d"),
        Some(kind),
        violations as f64,
        Relation::AtMost,
        0.0,
        format!("violations among {points} validity-region points"),
    )]
}

/// `max |entry|` of `[C,S] - (i/2) P0` on the pump interior.
fn sg_commutator_defect(space: &Arc<phasefluct_core::ModeSpace>) -> phasefluct_core::Result<f64> {
    let set = sg_operators(space, space.pump_mode())?;
    let cs = set.cos.commutator(&set.sin)?;
    let expected = set.vacuum_projector.scale(Complex64::new(0.0, 0.5));
    let mut margins = vec![0; space.num_modes()];
    margins[space.pump_mode()] = 1;
    cs.max_abs_diff(&expected, Some(&space.interior_mask(&margins)))
}

struct IdentityDefects {
    sg_identity: f64,
    bp_identity: f64,
    uncertainty_slack: f64,
}

fn operator_identities(ctx: &Ctx, kind: ProcessKind) -> Vec<Check> {
    let mut grid = Vec::new();
    for m in BASELINE_ALPHAS {
        for th in [0.0, FRAC_PI_4] {
            for gt in [0.0, 0.01, 0.03, 0.05] {
                grid.push((m, th, gt));
            }
        }
    }
    let defects = collect(&grid, |&(m, th, gt)| {
        let spec = ProcessSpec::from_mean_photons(kind, 1.0, m, th, gt)?;
        let (psi, _) = evolved_state_adaptive(&spec, &ctx.settings)?;
        let sg = evaluate_state(&spec, &psi, FormalismChoice::Sg)?.moments;
        let n = expectation(&psi, &number_op(psi.space(), psi.space().pump_mode())?)?.re;
        let bp_set = bp_operators(psi.space(), psi.space().pump_mode(), n.max(0.0))?;
        let bp = phasefluct_core::moments(&psi, &bp_set)?;
        let dn = sg.var_n.sqrt();
        Ok(IdentityDefects {
            sg_identity: (sg.mean_c2 + sg.mean_s2 + sg.vacuum_prob / 2.0 - 1.0).abs(),
            bp_identity: (bp.mean_c2 + bp.mean_s2 - 1.0).abs(),
            uncertainty_slack: (dn * sg.var_s.sqrt() - 0.5 * sg.mean_c.abs())
                .min(dn * sg.var_c.sqrt() - 0.5 * sg.mean_s.abs()),
        })
    });
    let commutator = collect(&BASELINE_ALPHAS, |&m| {
        let space = Arc::new(kind.space(&kind.default_cutoffs(m))?);
        sg_commutator_defect(&space)
    });

    let (n_sg, n_comm, n_bp, n_unc) = (
        name(6, kind, "sg_c2_s2_p0"),
        name(6, kind, "sg_commutator"),
        name(6, kind, "bp_c2_s2"),
        name(6, kind, "sg_uncertainty"),
    );
    let states = format!("{} evolved states", grid.len());
    let mut checks = Vec::new();
    match defects {
        Ok(d) => {
            let max = |f: fn(&IdentityDefects) -> f64| d.iter().map(f).fold(0.0, f64::max);
            checks.push(Check::new(n_sg, Some(kind), max(|x| x.sg_identity), Relation::AtMost, 1e-8, states.clone()));
            checks.push(Check::new(n_bp, Some(kind), max(|x| x.bp_identity), Relation::AtMost, 1e-8, states.clone()));
            let slack = d.iter().map(|x| x.uncertainty_slack).fold(f64::INFINITY, f64::min);
            checks.push(Check::new(n_unc, Some(kind), slack, Relation::AtLeast, -1e-10, "min slack dN*dS - |<C>|/2, dN*dC - |<S>|/2".into()));
        }
        Err(e) => {
            checks.push(Check::errored(n_sg, Some(kind), Relation::AtMost, 1e-8, &e));
            checks.push(Check::errored(n_bp, Some(kind), Relation::AtMost, 1e-8, &e));
            checks.push(Check::errored(n_unc, Some(kind), Relation::AtLeast, -1e-10, &e));
        }
    }
    checks.insert(
        1,
        match commutator {
            Ok(c) => Check::new(n_comm, Some(kind), c.iter().cloned().fold(0.0, f64::max), Relation::AtMost, 1e-10, "interior of the default spaces".into()),
            Err(e) => Check::errored(n_comm, Some(kind), Relation::AtMost, 1e-10, e),
        },
    );
    checks
}

fn taylor_fidelity(kind: ProcessKind) -> Vec<Check> {
    let n = name(7, kind, "taylor_order2");
    vec![match taylor_check(kind) {
        Ok(r) => Check::new(
            n,
            Some(kind),
            r.max_diff,
            Relation::AtMost,
            r.threshold,
            format!("cutoffs {:?}, {} interior states", r.cutoffs, r.interior_states),
        ),
        Err(e) => Check::errored(n, Some(kind), Relation::AtMost, crate::taylor::TAYLOR_THRESHOLD, e),
    }]
}

/// Weighted number operators conserved by each process.
pub fn conserved_combinations(kind: ProcessKind) -> &'static [&'static [f64]] {
    match kind {
        ProcessKind::Fwm => &[&[1.0, 2.0, 0.0], &[1.0, 0.0, 2.0]],
        ProcessKind::Swm => &[&[3.0, 2.0, 0.0], &[1.0, 0.0, 2.0]],
        ProcessKind::Shg => &[&[1.0, 2.0]],
    }
}

struct Drifts {
    invariant: f64,
    norm: f64,
    energy: f64,
}

fn drifts(ctx: &Ctx, kind: ProcessKind, alpha_sq: f64) -> phasefluct_core::Result<Drifts> {
    // cutoffs adequate for the whole interval
    let (_, cutoffs) = evolved_state_adaptive(&ProcessSpec::from_mean_photons(kind, 1.0, alpha_sq, 0.3, 0.05)?, &ctx.settings)?;
    let spec = ProcessSpec::from_mean_photons(kind, 1.0, alpha_sq, 0.3, 0.0)?;
    let psi0 = evolved_state(&spec, &cutoffs, &ctx.settings)?;
    let space = psi0.space().clone();
    let h = interaction_hamiltonian(&spec, &space)?;
    let mut ops = Vec::new();
    for weights in conserved_combinations(kind) {
        let mut acc = ModeOperator::zero(space.clone());
        for (mode, &w) in weights.iter().enumerate() {
            acc = acc.add(&number_op(&space, mode)?.scale_real(w))?;
        }
        ops.push(acc);
    }
    let mean = |psi: &StateVector, op: &ModeOperator| expectation(psi, op).map(|z| z.re);
    let before: Vec<f64> = ops.iter().map(|o| mean(&psi0, o)).collect::<Result<_, _>>()?;
    let e0 = mean(&psi0, &h)?;
    let mut d = Drifts { invariant: 0.0, norm: 0.0, energy: 0.0 };
    let mut psi = psi0;
    for _ in 0..5 {
        psi = evolve(&psi, &h, 0.01, &ctx.settings)?;
        for (op, b) in ops.iter().zip(&before) {
            d.invariant = d.invariant.max((mean(&psi, op)? - b).abs());
        }
        d.norm = d.norm.max((psi.norm_sqr().sqrt() - 1.0).abs());
        d.energy = d.energy.max((mean(&psi, &h)? - e0).abs());
    }
    Ok(d)
}

fn conservation(ctx: &Ctx, kind: ProcessKind) -> Vec<Check> {
    let res = collect(&[1.0, 2.0], |&m| drifts(ctx, kind, m));
    let names = [name(8, kind, "invariants"), name(8, kind, "norm"), name(8, kind, "energy")];
    let thresholds = [1e-8, 1e-9, 1e-9];
    match res {
        Ok(ds) => {
            let vals = [
                ds.iter().map(|d| d.invariant).fold(0.0, f64::max),
                ds.iter().map(|d| d.norm).fold(0.0, f64::max),
                ds.iter().map(|d| d.energy).fold(0.0, f64::max),
            ];
            names
                .into_iter()
                .zip(vals)
                .zip(thresholds)
                .map(|((n, v), th)| Check::new(n, Some(kind), v, Relation::AtMost, th, "t in (0, 0.05/g], |alpha|^2 in {1,2}".into()))
                .collect()
        }
        Err(e) => names.into_iter().zip(thresholds).map(|(n, th)| Check::errored(n, Some(kind), Relation::AtMost, th, &e)).collect(),
    }
}

fn monotonicity(ctx: &Ctx, kind: ProcessKind) -> Vec<Check> {
    let gt = 1e-2; // g²t² = 1e-4
    let us: Vec<f64> = BASELINE_ALPHAS.iter().map(|&m| ctx.formula_u(kind, m, gt)).collect();
    let rises = us.windows(2).filter(|w| !(w[1] < w[0])).count();
    let mut checks = vec![Check::new(
        name(9, kind, "u_decreasing"),
        Some(kind),
        rises as f64,
        Relation::AtMost,
        0.0,
        "non-decreasing steps over |alpha|^2 in {0.5,1,2,4}".into(),
    )];
    if kind == ProcessKind::Swm {
        let drop = |k: ProcessKind| ctx.formula_u(k, 0.5, gt) - ctx.formula_u(k, 4.0, gt);
        let others = drop(ProcessKind::Fwm).max(drop(ProcessKind::Shg));
        let swm = drop(ProcessKind::Swm);
        checks.push(Check::new(
            name(9, kind, "steepest"),
            Some(kind),
            swm - others,
            Relation::Above,
            0.0,
            format!("U drop over |alpha|^2 0.5 -> 4: swm {swm:.3e}, best other {others:.3e}"),
        ));
    }
    checks
}

fn determinism(ctx: &Ctx, kind: ProcessKind) -> Vec<Check> {
    let config = SweepConfig {
        process: kind,
        formalism: FormalismChoice::Bp,
        alpha_sq: vec![1.0, 0.5],
        theta: vec![0.0, FRAC_PI_4],
        g: 1.0,
        t: TimeGrid::Values(vec![0.0, 0.01]),
        cutoffs: None,
        tolerances: Tolerances {
            accuracy: ctx.settings.accuracy,
            leakage: ctx.settings.leakage_threshold,
            comparison: 1e-3,
        },
        output: None,
        coefficients: ctx.coefficients.clone(),
    };
    let render = |threads: usize| -> Result<Vec<u8>, String> {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().map_err(|e| e.to_string())?;
        let mut buf = Vec::new();
        write_csv(&mut buf, &run_sweep(&config, &pool)).map_err(|e| e.to_string())?;
        Ok(buf)
    };
    let (det, schema) = (name(10, kind, "byte_identical"), name(10, kind, "schema"));
    match (render(1), render(3)) {
        (Ok(a), Ok(b)) => {
            let text = String::from_utf8_lossy(&a);
            let header_ok = text.lines().next() == Some(COLUMNS.join(",").as_str());
            let rows = text.lines().count().saturating_sub(1);
            let widths_ok = text.lines().all(|l| l.split(',').count() == COLUMNS.len());
            let lf_only = !a.contains(&b'\r');
            vec![
                Check::new(det, Some(kind), f64::from(u8::from(a != b)), Relation::AtMost, 0.0, "two runs, 1 and 3 threads".into()),
                Check::new(
                    schema,
                    Some(kind),
                    f64::from(u8::from(!(header_ok && widths_ok && lf_only && rows == 8))),
                    Relation::AtMost,
                    0.0,
                    format!("header, {rows} rows of {} columns, LF endings", COLUMNS.len()),
                ),
            ]
        }
        (Err(e), _) | (_, Err(e)) => vec![
            Check::errored(det, Some(kind), Relation::AtMost, 0.0, &e),
            Check::errored(schema, Some(kind), Relation::AtMost, 0.0, &e),
        ],
    }
}

/// Runs every criterion for the selected processes, in criterion order.
pub fn verify(config: &VerifyConfig, pool: &rayon::ThreadPool) -> VerificationReport {
    let ctx = Ctx { settings: config.tolerances.evolution(), coefficients: config.coefficients.clone() };
    let suites: [fn(&Ctx, ProcessKind) -> Vec<Check>; 10] = [
        coherent_baseline,
        closed_form_agreement,
        convergence_order,
        antibunching,
        sign_equivalence,
        operator_identities,
        |_, k| taylor_fidelity(k),
        conservation,
        monotonicity,
        determinism,
    ];
    let jobs: Vec<(usize, ProcessKind)> =
        (0..suites.len()).flat_map(|s| config.processes.iter().map(move |&k| (s, k))).collect();
    let checks: Vec<Vec<Check>> = pool.install(|| jobs.par_iter().map(|&(s, k)| suites[s](&ctx, k)).collect());
    VerificationReport { checks: checks.into_iter().flatten().collect() }
}
