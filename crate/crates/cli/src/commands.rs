use std::fmt::Write as _;
use std::path::Path;

use plap_core::asymptotics::{expected_coefficients, fit_expansion, ExpansionSource, FitModel};
use plap_core::bounds::*;
use plap_core::geometry::ModelGeometry;
use plap_core::solver::{solve_with_options, sweep, EigenResult, RadialProfile, SolverOptions};
use plap_core::testfn::{
    barta_margin, implied_lower_bound, quotient_cylinder, quotient_hyperbolic_ball, verify_case1_inequality,
    verify_case2_inequality, CylinderKind, InequalityReport, TestFunctionSpec,
};
use plap_core::Error;

use crate::args::*;
use crate::output::{Document, Record};

/// Command failure, mapped to the exit-code contract.
#[derive(Debug)]
pub enum Failure {
    /// Exit 2: invalid parameters or input data.
    Domain(String),
    /// Exit 3: the numerics did not deliver.
    Numeric(String),
    /// Exit 64: the invocation itself is malformed.
    Usage(String),
}

impl Failure {
    pub fn exit_code(&self) -> u8 {
        match self {
            Failure::Domain(_) => 2,
            Failure::Numeric(_) => 3,
            Failure::Usage(_) => 64,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            Failure::Domain(m) | Failure::Numeric(m) | Failure::Usage(m) => m,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        if e.is_domain_error() {
            Failure::Domain(e.to_string())
        } else {
            Failure::Numeric(e.to_string())
        }
    }
}

/// Output of a command together with the exit code it asks for.
pub struct Outcome {
    pub document: Document,
    pub exit_code: u8,
    /// Diagnostics for stderr.
    pub notes: Vec<String>,
}

impl Outcome {
    fn ok(document: Document) -> Self {
        Self {
            document,
            exit_code: 0,
            notes: Vec::new(),
        }
    }
}

type CmdResult = Result<Outcome, Failure>;

pub fn run(command: &Command) -> CmdResult {
    match command {
        Command::Bound(a) => bound(a),
        Command::Solve(a) => solve(a),
        Command::Sweep(a) => sweep_cmd(a),
        Command::Sandwich(a) => sandwich(a),
        Command::Verify(v) => verify(v),
        Command::Asymptotics(a) => asymptotics(a),
    }
}

fn need<T: Copy>(value: Option<T>, flag: &str, tag: BoundTag) -> Result<T, Failure> {
    value.ok_or_else(|| Failure::Usage(format!("bound {tag:?} needs --{flag}").to_lowercase()))
}

fn kind_name(kind: BoundKind) -> &'static str {
    match kind {
        BoundKind::Lower => "lower",
        BoundKind::Upper => "upper",
    }
}

fn bound_record(b: &BoundValue<f64>, a: &BoundArgs) -> Record {
    let mut r = Record::new()
        .with("theorem_tag", b.theorem_tag.as_str())
        .with("kind", kind_name(b.kind))
        .with("value", b.value);
    echo_bound_params(&mut r, a);
    r
}

fn echo_bound_params(r: &mut Record, a: &BoundArgs) {
    r.push_some("n", a.n);
    r.push_some("k", a.k);
    r.push_some("p", a.p);
    r.push_some("R", a.radius);
    r.push_some("kappa", a.kappa);
    r.push_some("p1", a.p1);
    r.push_some("p2", a.p2);
    r.push_some("C", a.c);
    r.push_some("D", a.d);
    r.push_some("a", a.a);
    r.push_some("b", a.b);
    r.push_some("q", a.q);
    r.push_some("lambda", a.lambda);
}

fn bound(a: &BoundArgs) -> CmdResult {
    let tag = a.tag;
    let domain = || -> Result<DomainParams<f64>, Failure> {
        Ok(DomainParams::new(
            need(a.n, "n", tag)?,
            need(a.k, "k", tag)?,
            need(a.radius, "R", tag)?,
            a.kappa.unwrap_or(1.0),
        )?)
    };
    let values: Vec<BoundValue<f64>> = match tag {
        BoundTag::T11 => {
            let params = Thm11Params::new(
                need(a.p1, "p1", tag)?,
                need(a.p2, "p2", tag)?,
                need(a.c, "C", tag)?,
                need(a.d, "D", tag)?,
            )?;
            vec![lower_bound_t11(params)?]
        }
        BoundTag::T22 => vec![lower_bound_t22(
            need(a.a, "a", tag)?,
            need(a.b, "b", tag)?,
            need(a.q, "q", tag)?,
            need(a.p, "p", tag)?,
        )?],
        BoundTag::T12 => vec![lower_bound_t12(domain()?, need(a.p, "p", tag)?)?],
        BoundTag::C13 => vec![lower_bound_c13(domain()?, need(a.p, "p", tag)?)?],
        BoundTag::C31 => {
            let d = DomainParams::new(
                need(a.n, "n", tag)?,
                a.k.unwrap_or(1.0),
                need(a.radius, "R", tag)?,
                need(a.kappa, "kappa", tag)?,
            )?;
            vec![lower_bound_c31(d, need(a.p, "p", tag)?)?]
        }
        BoundTag::C23 => vec![lower_bound_c23(
            need(a.n, "n", tag)?,
            need(a.p, "p", tag)?,
            need(a.q, "q", tag)?,
            need(a.lambda, "lambda", tag)?,
        )?],
        BoundTag::L42 => vec![upper_bound_l42_with(
            need(a.n, "n", tag)?,
            need(a.p, "p", tag)?,
            need(a.radius, "R", tag)?,
            a.quad_points,
        )?],
        BoundTag::T14 => {
            let (lo, hi) = bracket_t14(need(a.n, "n", tag)?, need(a.p, "p", tag)?, need(a.radius, "R", tag)?)?;
            vec![lo, hi]
        }
        BoundTag::Ex52 => vec![upper_bound_ex52(
            need(a.n, "n", tag)?,
            need(a.p, "p", tag)?,
            need(a.radius, "R", tag)?,
        )?],
        BoundTag::Ex53 => vec![upper_bound_ex53(need(a.p, "p", tag)?, need(a.radius, "R", tag)?)?],
        BoundTag::C23Root => {
            let y = largest_root_c23(
                need(a.n, "n", tag)?,
                need(a.p, "p", tag)?,
                need(a.lambda, "lambda", tag)?,
            )?;
            let mut r = Record::new()
                .with("theorem_tag", "C23_root")
                .with("kind", "root")
                .with("value", y);
            echo_bound_params(&mut r, a);
            return Ok(Outcome::ok(Document::rows(vec![r])));
        }
        BoundTag::P15 => {
            let p = need(a.p, "p", tag)?;
            let r = Record::new()
                .with("theorem_tag", "P15")
                .with("kind", "criterion")
                .with("value", ends_criterion_p15(p))
                .with("p", p);
            return Ok(Outcome::ok(Document::rows(vec![r])));
        }
        BoundTag::Cheeger => {
            let v = cheeger_monotone_value(need(a.p, "p", tag)?, need(a.lambda, "lambda", tag)?)?;
            let mut r = Record::new()
                .with("theorem_tag", "cheeger")
                .with("kind", "value")
                .with("value", v);
            echo_bound_params(&mut r, a);
            return Ok(Outcome::ok(Document::rows(vec![r])));
        }
    };
    Ok(Outcome::ok(Document::rows(
        values.iter().map(|b| bound_record(b, a)).collect(),
    )))
}

fn geometry_label(g: GeometryName) -> &'static str {
    match g {
        GeometryName::Hyperbolic => "hyperbolic",
        GeometryName::Euclidean => "euclidean",
        GeometryName::Interval => "interval",
        GeometryName::ExpCylinder => "exp-cylinder",
        GeometryName::CoshCylinder => "cosh-cylinder",
    }
}

fn build_geometry(name: GeometryName, n: u32, kappa: f64, extent: f64) -> Result<ModelGeometry<f64>, Failure> {
    Ok(match name {
        GeometryName::Hyperbolic => ModelGeometry::hyperbolic_ball(n, kappa, extent)?,
        GeometryName::Euclidean => ModelGeometry::euclidean_ball(n, extent)?,
        GeometryName::Interval => ModelGeometry::interval(extent)?,
        GeometryName::ExpCylinder => ModelGeometry::exp_cylinder(n, extent)?,
        GeometryName::CoshCylinder => ModelGeometry::cosh_cylinder(n, extent)?,
    })
}

fn options(s: &SolverArgs) -> SolverOptions<f64> {
    SolverOptions {
        grid_size: s.grid,
        tol: s.tol,
        max_iterations: s.max_iterations,
    }
}

fn eigen_record(g: &GeometryArgs, p: f64, radius: f64, grid: usize, eig: &EigenResult<f64>) -> Record {
    Record::new()
        .with("geometry", geometry_label(g.geometry))
        .with("n", g.n)
        .with("p", p)
        .with("R", radius)
        .with("grid", grid)
        .with("lambda", eig.lambda)
        .with("residual", eig.residual)
        .with("iterations", eig.iterations)
        .with("continuation_stages", eig.continuation_path.len())
}

fn solve(a: &SolveArgs) -> CmdResult {
    let geom = build_geometry(a.geometry.geometry, a.geometry.n, a.geometry.kappa, a.radius)?;
    let eig = solve_with_options(&geom, a.solver.p, options(&a.solver))?;
    if let Some(path) = &a.dump_profile {
        write_profile(path, &eig)?;
    }
    Ok(Outcome::ok(Document::Object(eigen_record(
        &a.geometry,
        a.solver.p,
        a.radius,
        a.solver.grid,
        &eig,
    ))))
}

fn write_profile(path: &Path, eig: &EigenResult<f64>) -> Result<(), Failure> {
    let mut out = String::from("r,u\n");
    for (r, u) in eig.grid.nodes().iter().zip(eig.profile.values()) {
        let _ = writeln!(out, "{r:.16e},{u:.16e}");
    }
    std::fs::write(path, out).map_err(|e| Failure::Domain(format!("cannot write {}: {e}", path.display())))
}

fn sweep_cmd(a: &SweepArgs) -> CmdResult {
    let family = build_geometry(a.geometry.geometry, a.geometry.n, a.geometry.kappa, a.radii[0])?;
    let results = sweep(&family, a.solver.p, &a.radii, options(&a.solver))?;
    let mut rows = Vec::with_capacity(results.len());
    let mut notes = Vec::new();
    for (r, res) in results {
        match res {
            Ok(eig) => rows.push(eigen_record(&a.geometry, a.solver.p, r, a.solver.grid, &eig).with("status", "ok")),
            Err(e) => {
                notes.push(format!("R = {r}: {e}"));
                rows.push(
                    Record::new()
                        .with("geometry", geometry_label(a.geometry.geometry))
                        .with("n", a.geometry.n)
                        .with("p", a.solver.p)
                        .with("R", r)
                        .with("grid", a.solver.grid)
                        .with("lambda", None::<f64>)
                        .with("residual", None::<f64>)
                        .with("iterations", None::<usize>)
                        .with("continuation_stages", None::<usize>)
                        .with("status", "error"),
                );
            }
        }
    }
    let exit_code = if notes.is_empty() { 0 } else { 3 };
    let header = [
        "geometry",
        "n",
        "p",
        "R",
        "grid",
        "lambda",
        "residual",
        "iterations",
        "continuation_stages",
        "status",
    ];
    Ok(Outcome {
        document: Document::table(&header, rows),
        exit_code,
        notes,
    })
}

pub const SANDWICH_HEADER: [&str; 5] = ["R", "lower", "solver", "upper", "pass"];

fn sandwich(a: &SandwichArgs) -> CmdResult {
    if a.radii.is_empty() {
        return Ok(Outcome::ok(Document::table(&SANDWICH_HEADER, Vec::new())));
    }
    let family = ModelGeometry::hyperbolic_ball(a.n, 1.0, a.radii[0])?;
    let opts = SolverOptions {
        grid_size: a.grid,
        tol: a.tol,
        ..SolverOptions::default()
    };
    let results = sweep(&family, a.p, &a.radii, opts)?;
    let mut rows = Vec::with_capacity(results.len());
    let mut notes = Vec::new();
    let (mut failed, mut errored) = (false, false);
    for (r, res) in results {
        let lower = lower_bound_t12(DomainParams::new(a.n, f64::from(a.n), r, 1.0)?, a.p)?.value;
        let upper = upper_bound_l42_with(a.n, a.p, r, a.quad_points)?.value;
        let row = Record::new().with("R", r).with("lower", lower);
        match res {
            Ok(eig) => {
                let slack = a.upper_tol_cells * r / a.grid as f64;
                let pass = lower - a.lower_tol <= eig.lambda && eig.lambda <= upper + slack;
                failed |= !pass;
                rows.push(row.with("solver", eig.lambda).with("upper", upper).with("pass", pass));
            }
            Err(e) => {
                errored = true;
                notes.push(format!("R = {r}: {e}"));
                rows.push(
                    row.with("solver", None::<f64>)
                        .with("upper", upper)
                        .with("pass", "error"),
                );
            }
        }
    }
    let exit_code = if errored || failed { 3 } else { 0 };
    Ok(Outcome {
        document: Document::table(&SANDWICH_HEADER, rows),
        exit_code,
        notes,
    })
}

fn report_record(rep: &InequalityReport<f64>) -> Record {
    Record::new()
        .with("min_margin", rep.min_margin)
        .with("argmin", rep.argmin)
        .with("grid_size", rep.grid_size)
        .with("tolerance", rep.tolerance)
        .with("passed", rep.passed)
}

fn verify(v: &VerifyCommand) -> CmdResult {
    let record = match v {
        VerifyCommand::Eq31(a) => {
            let spec = TestFunctionSpec::eq31(a.p, a.k, a.radius, a.eps)?;
            let c = (a.p - 1.0) * a.k / a.p;
            let (case, rep) = if a.p <= 2.0 {
                ("case1", verify_case1_inequality(&spec, c, a.grid)?)
            } else {
                ("case2", verify_case2_inequality(&spec, c, a.grid)?)
            };
            Record::new()
                .with("test_function", "eq31")
                .with("case", case)
                .with("p", a.p)
                .with("k", a.k)
                .with("R", a.radius)
                .with("eps", a.eps)
                .with("C", c)
                .with("implied_bound", implied_lower_bound(&spec)?)
                .with_all(report_record(&rep))
        }
        VerifyCommand::Barta(a) => {
            let (geom, profile) = read_profile(&a.profile, a)?;
            let rep = barta_margin(&profile, &geom, a.p, a.mu)?;
            Record::new()
                .with("test_function", "barta")
                .with("geometry", geometry_label(a.geometry))
                .with("p", a.p)
                .with("R", geom.extent())
                .with("mu", a.mu)
                .with_all(report_record(&rep))
        }
        VerifyCommand::HyperbolicQuotient(a) => {
            let q = quotient_hyperbolic_ball(a.n, a.p, a.radius, a.quad_points)?;
            Record::new()
                .with("test_function", "hyperbolic_quotient")
                .with("n", a.n)
                .with("p", a.p)
                .with("R", a.radius)
                .with("f", q.f)
                .with("g", q.g)
                .with("value", q.value)
                .with("alpha", q.alpha)
                .with("sine_integral", q.sine_integral)
                .with("deficit", q.deficit)
                .with("deficit_constant", q.deficit_constant)
                .with("f_bound_holds", q.f_bound_holds)
                .with("g_bound_holds", q.g_bound_holds)
                .with("passed", q.f_bound_holds && q.g_bound_holds)
        }
        VerifyCommand::Cylinder(a) => {
            let (kind, label) = match a.kind {
                CylinderName::Exp => (CylinderKind::Exp, "exp"),
                CylinderName::Cosh => (CylinderKind::Cosh, "cosh"),
            };
            let q = &a.quotient;
            let value = quotient_cylinder(kind, q.n, q.p, q.radius, q.quad_points)?;
            Record::new()
                .with("test_function", "cylinder")
                .with("kind", label)
                .with("n", q.n)
                .with("p", q.p)
                .with("R", q.radius)
                .with("value", value)
        }
    };
    Ok(Outcome::ok(Document::Object(record)))
}

/// Reads an `r,u` profile and rebuilds the geometry whose uniform grid it
/// was sampled on; the extent is the last `r`.
fn read_profile(path: &Path, a: &BartaArgs) -> Result<(ModelGeometry<f64>, RadialProfile<f64>), Failure> {
    let text =
        std::fs::read_to_string(path).map_err(|e| Failure::Domain(format!("cannot read {}: {e}", path.display())))?;
    let pairs = parse_pairs(&text).map_err(|e| Failure::Domain(format!("{}: {e}", path.display())))?;
    if pairs.len() < 3 {
        return Err(Failure::Domain(format!(
            "{}: profile needs at least three rows",
            path.display()
        )));
    }
    let extent = pairs[pairs.len() - 1].0;
    let geom = build_geometry(a.geometry, a.n, a.kappa, extent)?;
    let (start, end) = geom.domain();
    let cells = pairs.len() - 1;
    let h = (end - start) / cells as f64;
    for (i, (r, _)) in pairs.iter().enumerate() {
        let expected = start + h * i as f64;
        if (r - expected).abs() > 1e-9 * (end - start) {
            return Err(Failure::Domain(format!(
                "{}: row {} has r = {r}, expected {expected} for the {} grid",
                path.display(),
                i + 1,
                geometry_label(a.geometry)
            )));
        }
    }
    let profile = RadialProfile::new(pairs.into_iter().map(|(_, u)| u).collect(), geom.boundary_condition())?;
    Ok((geom, profile))
}

/// Two numeric columns per line; a non-numeric first line is a header.
pub fn parse_pairs(text: &str) -> Result<Vec<(f64, f64)>, String> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let mut cols = line.split(',').map(str::trim);
        let (Some(x), Some(y)) = (cols.next(), cols.next()) else {
            return Err(format!("line {} needs two columns", i + 1));
        };
        match (x.parse::<f64>(), y.parse::<f64>()) {
            (Ok(x), Ok(y)) => out.push((x, y)),
            _ if i == 0 => continue,
            _ => return Err(format!("line {} is not numeric", i + 1)),
        }
    }
    Ok(out)
}

fn source_of(name: SourceName, kappa: f64) -> (ExpansionSource<f64>, &'static str) {
    match name {
        SourceName::T14Lower => (ExpansionSource::T14Lower, "t14_lower"),
        SourceName::T14Upper => (ExpansionSource::T14Upper, "t14_upper"),
        SourceName::Ex52 => (ExpansionSource::Ex52, "ex52"),
        SourceName::Ex53 => (ExpansionSource::Ex53, "ex53"),
        SourceName::C31Lower => (ExpansionSource::C31Lower { kappa }, "c31_lower"),
    }
}

fn default_sources(g: GeometryName) -> Vec<SourceName> {
    match g {
        GeometryName::Hyperbolic => vec![SourceName::T14Lower, SourceName::T14Upper],
        GeometryName::ExpCylinder => vec![SourceName::Ex52],
        GeometryName::CoshCylinder => vec![SourceName::Ex53],
        GeometryName::Euclidean | GeometryName::Interval => Vec::new(),
    }
}

fn radii(a: &AsymptoticsArgs) -> Result<Vec<f64>, Failure> {
    if !a.radii.is_empty() {
        return Ok(a.radii.clone());
    }
    if a.count < 2 || a.r_min.partial_cmp(&a.r_max) != Some(std::cmp::Ordering::Less) {
        return Err(Failure::Domain("need count ≥ 2 and r-min < r-max".into()));
    }
    let step = (a.r_max - a.r_min) / (a.count - 1) as f64;
    Ok((0..a.count).map(|i| a.r_min + step * i as f64).collect())
}

/// `(R, λ)` pairs.
type Samples = Vec<(f64, f64)>;

fn samples(a: &AsymptoticsArgs) -> Result<(Samples, &'static str), Failure> {
    if let Some(path) = &a.from_csv {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Failure::Domain(format!("cannot read {}: {e}", path.display())))?;
        let pairs = parse_pairs(&text).map_err(|e| Failure::Domain(format!("{}: {e}", path.display())))?;
        return Ok((pairs, "csv"));
    }
    let rs = radii(a)?;
    let g = &a.geometry;
    match a.quantity {
        Quantity::Solver => {
            let family = build_geometry(g.geometry, g.n, g.kappa, rs[0])?;
            let opts = SolverOptions {
                grid_size: a.grid,
                tol: a.tol,
                ..SolverOptions::default()
            };
            let out = sweep(&family, a.p, &rs, opts)?
                .into_iter()
                .map(|(r, res)| {
                    res.map(|e| (r, e.lambda))
                        .map_err(|e| Failure::Numeric(format!("R = {r}: {e}")))
                })
                .collect::<Result<Vec<_>, _>>()?;
            Ok((out, "solver"))
        }
        Quantity::Upper => {
            let out = rs
                .iter()
                .map(|&r| -> Result<(f64, f64), Failure> {
                    let v = match g.geometry {
                        GeometryName::Hyperbolic => quotient_hyperbolic_ball(g.n, a.p, r, a.quad_points)?.value,
                        GeometryName::ExpCylinder => quotient_cylinder(CylinderKind::Exp, g.n, a.p, r, a.quad_points)?,
                        GeometryName::CoshCylinder => {
                            quotient_cylinder(CylinderKind::Cosh, g.n, a.p, r, a.quad_points)?
                        }
                        other => {
                            return Err(Failure::Domain(format!(
                                "no upper-bound test function for {}",
                                geometry_label(other)
                            )))
                        }
                    };
                    Ok((r, v))
                })
                .collect::<Result<Vec<_>, _>>()?;
            Ok((out, "upper"))
        }
    }
}

fn asymptotics(a: &AsymptoticsArgs) -> CmdResult {
    let (data, quantity) = samples(a)?;
    let model = match a.model {
        ModelName::Ab => FitModel::AB,
        ModelName::Abc => FitModel::ABC,
    };
    let fit = fit_expansion(&data, model)?;
    let from_csv = a.from_csv.is_some();
    let mut r = Record::new()
        .with("geometry", (!from_csv).then(|| geometry_label(a.geometry.geometry)))
        .with("n", a.geometry.n)
        .with("p", a.p)
        .with("quantity", quantity)
        .with("model", if model == FitModel::AB { "ab" } else { "abc" })
        .with("samples", data.len())
        .with("A", fit.a)
        .with("B", fit.b)
        .with("C", fit.c)
        .with("residual_rms", fit.residual_rms)
        .with("r_min", fit.r_range.0)
        .with("r_max", fit.r_range.1);
    // imported samples carry no geometry, so only explicit sources apply
    let sources = if a.source.is_empty() && !from_csv {
        default_sources(a.geometry.geometry)
    } else {
        a.source.clone()
    };
    for name in sources {
        let (src, label) = source_of(name, a.geometry.kappa);
        let (ea, eb) = expected_coefficients(a.geometry.n, a.p, src)?;
        r.push(&format!("{label}_expected_A"), ea);
        r.push(&format!("{label}_expected_B"), eb);
        r.push(&format!("{label}_dev_A"), (fit.a - ea).abs() / ea.abs());
        r.push(&format!("{label}_dev_B"), (fit.b - eb).abs() / eb.abs());
    }
    Ok(Outcome::ok(Document::Object(r)))
}
