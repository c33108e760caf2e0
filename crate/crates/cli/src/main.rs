//! `isokw`: build isoradial maps, evaluate Kac-Ward determinants and check the identities.
//!
//! Every subcommand prints one JSON object on stdout. `gen` and `dual` print a
//! map document; the others print a report with `command`, `status`,
//! `map_sha256`, `hypotheses`, `tolerance` and `result`.
//!
//! Exit codes: 0 ok, 1 error or failed check, 2 usage, 3 hypothesis violation.

use std::fs;
use std::io::{self, Read};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use isoradial_kw::cohomology::{
    character_to_cocycle, h1_mod2_reps, spin_structures, tree_cotree_basis, Character, Cocycle,
};
use isoradial_kw::identities::{
    delta_identity_check, duality_check, free_energy_table, kw_coupling_check, nonproportionality_probe,
};
use isoradial_kw::kacward::{partition_function_kw_terms, tau, vdw_convert};
use isoradial_kw::laplacian::det_laplacian;
use isoradial_kw::oracles::{even_subgraph_z, spin_config_z};
use isoradial_kw::weights::WeightSystem;
use isoradial_kw::{
    gen_genus2_bouquet, gen_torus_lattice, read_map, write_map, AnglePi, CombinatorialMap, Error, HypothesisMode,
    IsoradialMap, LatticeKind, MapDocument,
};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

#[derive(Parser)]
#[command(name = "isokw", version, about = "Twisted Kac-Ward determinants on isoradial maps")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Map document to read (stdin when absent).
    #[arg(long, global = true)]
    input: Option<PathBuf>,
    /// Write the JSON output here instead of stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    /// Seed for every random choice.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Acceptance threshold for checks.
    #[arg(long, global = true)]
    tolerance: Option<f64>,
}

#[derive(Args, Clone, Default)]
struct CharacterArgs {
    /// Comma-separated unit values on the homology basis: `re+imi` or `exp:p/q` (e^{iπp/q}).
    #[arg(long, allow_hyphen_values = true)]
    character: Option<String>,
    /// Use all 2^{2g} sign characters.
    #[arg(long, conflicts_with_all = ["character", "random_characters"])]
    all_sign_characters: bool,
    /// Draw this many uniformly random unit characters (needs --seed).
    #[arg(long, conflicts_with = "character")]
    random_characters: Option<usize>,
}

#[derive(Clone, Copy, ValueEnum)]
enum GenKind {
    Square,
    Triangular,
    Hexagonal,
    Bouquet,
}

#[derive(Clone, Copy, ValueEnum)]
enum Method {
    Kw,
    Oracle,
    Spins,
}

#[derive(Clone, Copy, ValueEnum)]
enum WeightSource {
    Critical,
    Document,
}

#[derive(Clone, Copy, ValueEnum)]
enum Lattice {
    Square,
    Triangular,
    Hexagonal,
}

impl From<Lattice> for LatticeKind {
    fn from(l: Lattice) -> Self {
        match l {
            Lattice::Square => LatticeKind::Square,
            Lattice::Triangular => LatticeKind::Triangular,
            Lattice::Hexagonal => LatticeKind::Hexagonal,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Write a corpus map document.
    Gen {
        #[arg(long, value_enum)]
        kind: GenKind,
        #[arg(long, default_value_t = 1)]
        n: usize,
        /// Defaults to `n`.
        #[arg(long)]
        m: Option<usize>,
    },
    /// Check a map document and report its topology and cone angles.
    Validate,
    /// Write the dual map document.
    Dual,
    /// List the spin structures with Arf invariants and Gauss sums.
    SpinStructures,
    /// Evaluate τ^φ(G, ν) at critical weights.
    Tau {
        #[command(flatten)]
        chars: CharacterArgs,
        #[arg(long, value_enum, default_value = "critical")]
        weights: WeightSource,
    },
    /// Partition function of the even-subgraph model.
    Partition {
        #[arg(long, value_enum, default_value = "kw")]
        method: Method,
        #[arg(long, value_enum, default_value = "critical")]
        weights: WeightSource,
    },
    /// Determinant of the twisted Laplacian at critical conductances.
    Laplacian {
        #[command(flatten)]
        chars: CharacterArgs,
    },
    /// Primal/dual identity for characters on the quad graph.
    DualityCheck {
        #[command(flatten)]
        chars: CharacterArgs,
    },
    /// Kac-Ward versus Laplacian identity on genus ≤ 1.
    DeltaCheck {
        #[command(flatten)]
        chars: CharacterArgs,
    },
    /// Spread of τ/det Δ on genus ≥ 2.
    NonpropProbe {
        #[command(flatten)]
        chars: CharacterArgs,
    },
    /// sinh 2J(θ) · sinh 2J(π/2 − θ) = 1.
    CouplingCheck {
        /// Single angle as a multiple of π, `p/q`.
        #[arg(long)]
        theta: Option<String>,
        /// Number of equally spaced angles in (0, π/2) when no θ is given.
        #[arg(long, default_value_t = 1000)]
        sweep: usize,
    },
    /// Finite-size free energies of the n×n critical tori.
    FreeEnergy {
        #[arg(long, value_enum, default_value = "square")]
        kind: Lattice,
        #[arg(long, default_value_t = 6)]
        n_max: usize,
    },
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Hypothesis(String),
    Compute(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::HypothesisViolation(_) => Failure::Hypothesis(e.to_string()),
            _ => Failure::Compute(e.to_string()),
        }
    }
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Compute(_) => 1,
            Failure::Usage(_) => 2,
            Failure::Hypothesis(_) => 3,
        }
    }

    fn status(&self) -> &'static str {
        match self {
            Failure::Hypothesis(_) => "hypothesis_violation",
            _ => "error",
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Usage(m) | Failure::Hypothesis(m) | Failure::Compute(m) => m,
        }
    }
}

type CliResult<T> = Result<T, Failure>;

/// What a subcommand hands back for printing.
enum Output {
    Document(MapDocument),
    Report { passed: bool, body: Value },
}

struct Ctx {
    input: Option<PathBuf>,
    seed: Option<u64>,
    tolerance: Option<f64>,
}

struct Loaded {
    map: IsoradialMap,
    doc: MapDocument,
}

impl Ctx {
    fn load(&self) -> CliResult<Loaded> {
        let text = match &self.input {
            Some(p) => fs::read_to_string(p).map_err(|e| Failure::Compute(format!("{}: {e}", p.display())))?,
            None => {
                let mut s = String::new();
                io::stdin().read_to_string(&mut s).map_err(|e| Failure::Compute(e.to_string()))?;
                s
            }
        };
        let doc = MapDocument::from_json(&text)?;
        let map = read_map(&doc)?;
        Ok(Loaded { map, doc })
    }

    fn rng(&self) -> CliResult<ChaCha8Rng> {
        self.seed
            .map(ChaCha8Rng::seed_from_u64)
            .ok_or_else(|| Failure::Usage("random characters need --seed".into()))
    }
}

fn report(command: &str, loaded: Option<&Loaded>, mode: Option<HypothesisMode>, tolerance: Option<f64>, passed: bool, result: Value) -> Output {
    let hypotheses = match (loaded, mode) {
        (Some(l), Some(m)) => json!(l.map.check_hypotheses(m)),
        _ => Value::Null,
    };
    let body = json!({
        "command": command,
        "status": if passed { "ok" } else { "error" },
        "map_sha256": loaded.map(|l| l.doc.sha256()),
        "hypotheses": hypotheses,
        "tolerance": tolerance,
        "result": result,
    });
    Output::Report { passed, body }
}

fn parse_unit(s: &str) -> CliResult<Complex64> {
    let s = s.trim();
    let z = if let Some(frac) = s.strip_prefix("exp:") {
        let (p, q) = frac.split_once('/').unwrap_or((frac, "1"));
        let p: i64 = p.trim().parse().map_err(|_| Failure::Usage(format!("bad exponent `{s}`")))?;
        let q: i64 = q.trim().parse().map_err(|_| Failure::Usage(format!("bad exponent `{s}`")))?;
        if q == 0 {
            return Err(Failure::Usage(format!("zero denominator in `{s}`")));
        }
        AnglePi::new(p, q).cis::<f64>()
    } else {
        s.parse::<Complex64>().map_err(|_| Failure::Usage(format!("cannot parse `{s}` as a complex number")))?
    };
    if (z.norm() - 1.0).abs() > 1e-9 {
        return Err(Failure::Usage(format!("`{s}` is not of unit modulus")));
    }
    Ok(z)
}

fn parse_pi_fraction(s: &str) -> CliResult<AnglePi> {
    let (p, q) = s.split_once('/').unwrap_or((s, "1"));
    match (p.trim().parse::<i64>(), q.trim().parse::<i64>()) {
        (Ok(p), Ok(q)) if q != 0 => Ok(AnglePi::new(p, q)),
        _ => Err(Failure::Usage(format!("expected p/q, got `{s}`"))),
    }
}

/// Labeled cocycles selected by the character flags; sign characters when none are given.
fn characters(ctx: &Ctx, map: &CombinatorialMap, args: &CharacterArgs) -> CliResult<Vec<(Value, Cocycle)>> {
    let basis = tree_cotree_basis(map)?;
    let k = basis.rank();
    let build = |vals: Vec<Complex64>| -> CliResult<(Value, Cocycle)> {
        let label = json!(vals.iter().map(|z| [z.re, z.im]).collect::<Vec<_>>());
        let phi = character_to_cocycle(map, &Character::on_basis(&basis, vals))?;
        Ok((label, phi))
    };
    if let Some(list) = &args.character {
        let vals = list.split(',').map(parse_unit).collect::<CliResult<Vec<_>>>()?;
        if vals.len() != k {
            return Err(Failure::Usage(format!("{} character values for a basis of rank {k}", vals.len())));
        }
        return Ok(vec![build(vals)?]);
    }
    if let Some(count) = args.random_characters {
        let mut rng = ctx.rng()?;
        return (0..count)
            .map(|_| {
                let vals = (0..k)
                    .map(|_| Complex64::from_polar(1.0, rng.gen_range(0.0..std::f64::consts::TAU)))
                    .collect();
                build(vals)
            })
            .collect();
    }
    Ok(h1_mod2_reps(map)?
        .into_iter()
        .enumerate()
        .map(|(bits, phi)| {
            let signs: Vec<i8> = (0..k).map(|i| if bits >> i & 1 == 1 { -1 } else { 1 }).collect();
            (json!(signs), phi)
        })
        .collect())
}

fn weights_for(l: &Loaded, source: WeightSource) -> CliResult<WeightSystem<f64>> {
    match source {
        WeightSource::Critical => Ok(WeightSystem::critical_nu(&l.map)),
        WeightSource::Document => {
            let w = l.doc.parsed_weights()?.ok_or_else(|| Failure::Usage("map document has no weights".into()))?;
            if w.len() != l.map.edge_count() {
                return Err(Failure::Compute(format!("{} weights for {} edges", w.len(), l.map.edge_count())));
            }
            Ok(WeightSystem::from_real(&w))
        }
    }
}

fn cx(z: Complex64) -> [f64; 2] {
    [z.re, z.im]
}

fn run(cli: Cli) -> CliResult<Output> {
    let ctx = Ctx {
        input: cli.input,
        seed: cli.seed,
        tolerance: cli.tolerance,
    };
    match cli.command {
        Command::Gen { kind, n, m } => {
            let m = m.unwrap_or(n);
            let (map, name) = match kind {
                GenKind::Bouquet => (gen_genus2_bouquet(), "genus2_bouquet".to_string()),
                GenKind::Square => (gen_torus_lattice(LatticeKind::Square, n, m)?, format!("square_{n}x{m}")),
                GenKind::Triangular => (gen_torus_lattice(LatticeKind::Triangular, n, m)?, format!("triangular_{n}x{m}")),
                GenKind::Hexagonal => (gen_torus_lattice(LatticeKind::Hexagonal, n, m)?, format!("hexagonal_{n}x{m}")),
            };
            let mut doc = write_map(&map);
            doc.name = Some(name);
            Ok(Output::Document(doc))
        }
        Command::Dual => {
            let l = ctx.load()?;
            let mut doc = write_map(&l.map.dual());
            doc.name = l.doc.name.as_ref().map(|n| format!("{n}_dual"));
            Ok(Output::Document(doc))
        }
        Command::Validate => {
            let l = ctx.load()?;
            let t = l.map.topology();
            let turns = |v: &[AnglePi]| v.iter().map(|a| a.div_int(2).to_string()).collect::<Vec<_>>();
            let result = json!({
                "vertices": t.vertices,
                "edges": t.edges,
                "faces": t.faces,
                "euler_characteristic": t.euler_characteristic,
                "genus": t.genus,
                "primal_cone_angles": turns(&t.primal_cone_angles),
                "dual_cone_angles": turns(&t.dual_cone_angles),
                "cone_angle_unit": "2π",
                "curvature_total": t.curvature_total().to_string(),
                "trivial_local_holonomy": l.map.has_trivial_local_holonomy(),
                "three_mod_four_edges": l.map.count_three_mod_four(),
                "primal_odd": l.map.check_hypotheses(HypothesisMode::PrimalOdd).passed,
                "all_odd": l.map.check_hypotheses(HypothesisMode::AllOdd).passed,
            });
            Ok(report("validate", Some(&l), Some(HypothesisMode::AllOdd), None, true, result))
        }
        Command::SpinStructures => {
            let l = ctx.load()?;
            let list = spin_structures(&l.map)?;
            let plus = list.iter().filter(|s| s.arf.gauss_sum > 0).count();
            let rows: Vec<Value> = list
                .iter()
                .map(|s| {
                    json!({
                        "label": s.label,
                        "arf": s.arf.arf,
                        "gauss_sum": s.arf.gauss_sum,
                        "q": s.arf.q,
                        "winding": s.winding,
                        "trivial_class": s.trivial_class,
                    })
                })
                .collect();
            let result = json!({
                "genus": l.map.surface_genus(),
                "count": rows.len(),
                "positive_gauss_sums": plus,
                "negative_gauss_sums": rows.len() - plus,
                "structures": rows,
            });
            Ok(report("spin-structures", Some(&l), Some(HypothesisMode::AllOdd), None, true, result))
        }
        Command::Tau { chars, weights } => {
            let l = ctx.load()?;
            let w = weights_for(&l, weights)?;
            let mut rows = Vec::new();
            for (label, phi) in characters(&ctx, &l.map, &chars)? {
                rows.push(json!({"character": label, "tau": cx(tau(&l.map, &w, &phi)?)}));
            }
            Ok(report("tau", Some(&l), Some(HypothesisMode::AllOdd), None, true, json!({"values": rows})))
        }
        Command::Partition { method, weights } => {
            let l = ctx.load()?;
            let w = weights_for(&l, weights)?;
            let result = match method {
                Method::Kw => {
                    let p = partition_function_kw_terms(&l.map, &w)?;
                    json!({"method": "kw", "z": p.z, "genus": p.genus, "terms": p.terms})
                }
                Method::Oracle => {
                    let z = even_subgraph_z(&l.map, w.values())?;
                    json!({"method": "oracle", "z": z.re, "z_imag": z.im})
                }
                Method::Spins => {
                    if !w.is_real() {
                        return Err(Error::ComplexWeights.into());
                    }
                    let j: Vec<f64> = w.values().iter().map(|x| x.re.atanh()).collect();
                    let zj = spin_config_z(&l.map, &j)?;
                    let (pre, _) = vdw_convert(&l.map, &j)?;
                    json!({"method": "spins", "z": zj / pre, "z_spins": zj, "prefactor": pre})
                }
            };
            Ok(report("partition", Some(&l), Some(HypothesisMode::AllOdd), None, true, result))
        }
        Command::Laplacian { chars } => {
            let l = ctx.load()?;
            let c = WeightSystem::critical_c(&l.map);
            let mut rows = Vec::new();
            for (label, phi) in characters(&ctx, &l.map, &chars)? {
                rows.push(json!({"character": label, "det": cx(det_laplacian(&l.map, &c, &phi)?)}));
            }
            Ok(report("laplacian", Some(&l), Some(HypothesisMode::PrimalOdd), None, true, json!({"values": rows})))
        }
        Command::DualityCheck { chars } => {
            let l = ctx.load()?;
            let tol = ctx.tolerance.unwrap_or(1e-9);
            let quad = l.map.quad_graph();
            let mut rows = Vec::new();
            let mut worst = 0f64;
            for (label, psi) in characters(&ctx, &quad.map, &chars)? {
                let r = duality_check(&l.map, &psi)?;
                worst = worst.max(r.residual);
                rows.push(json!({"character": label, "lhs": r.lhs, "rhs": r.rhs, "residual": r.residual}));
            }
            let result = json!({"max_residual": worst, "checks": rows});
            Ok(report("duality-check", Some(&l), Some(HypothesisMode::AllOdd), Some(tol), worst <= tol, result))
        }
        Command::DeltaCheck { chars } => {
            let l = ctx.load()?;
            let tol = ctx.tolerance.unwrap_or(1e-9);
            let mut rows = Vec::new();
            let mut worst = 0f64;
            for (label, phi) in characters(&ctx, &l.map, &chars)? {
                let r = delta_identity_check(&l.map, &phi)?;
                // both sides vanish on the trivial class; compare against the matrix scale there
                let scale = r.lhs[0].hypot(r.lhs[1]).max(r.rhs[0].hypot(r.rhs[1]));
                let residual = if scale < tol { r.absolute } else { r.residual };
                worst = worst.max(residual);
                rows.push(json!({"character": label, "lhs": r.lhs, "rhs": r.rhs, "residual": residual}));
            }
            let result = json!({"max_residual": worst, "checks": rows});
            Ok(report("delta-check", Some(&l), Some(HypothesisMode::PrimalOdd), Some(tol), worst <= tol, result))
        }
        Command::NonpropProbe { chars } => {
            let l = ctx.load()?;
            let threshold = ctx.tolerance.unwrap_or(1.01);
            let list: Vec<Cocycle> = characters(&ctx, &l.map, &chars)?.into_iter().map(|(_, c)| c).collect();
            let p = nonproportionality_probe(&l.map, &list)?;
            let passed = p.spread > threshold;
            Ok(report("nonprop-probe", Some(&l), Some(HypothesisMode::AllOdd), Some(threshold), passed, json!(p)))
        }
        Command::CouplingCheck { theta, sweep } => {
            let tol = ctx.tolerance.unwrap_or(1e-12);
            let angles: Vec<f64> = match theta {
                Some(s) => vec![parse_pi_fraction(&s)?.to_radians()],
                None if sweep > 0 => (0..sweep)
                    .map(|k| (k as f64 + 0.5) / sweep as f64 * std::f64::consts::FRAC_PI_2)
                    .collect(),
                None => return Err(Failure::Usage("--sweep must be positive".into())),
            };
            let mut worst = 0f64;
            for &t in &angles {
                worst = worst.max(kw_coupling_check(t)?.residual);
            }
            let quarter = kw_coupling_check(std::f64::consts::FRAC_PI_4)?;
            let result = json!({
                "points": angles.len(),
                "max_residual": worst,
                "single": if angles.len() == 1 { json!(kw_coupling_check(angles[0])?) } else { Value::Null },
                "j_quarter_pi": quarter.inputs["J"],
                "j_quarter_pi_expected": (1.0 + 2f64.sqrt()).sqrt().ln(),
            });
            Ok(report("coupling-check", None, None, Some(tol), worst <= tol, result))
        }
        Command::FreeEnergy { kind, n_max } => {
            let tol = ctx.tolerance.unwrap_or(1e-9);
            let rows = free_energy_table(kind.into(), n_max)?;
            let monotone = rows.windows(2).filter(|w| w[0].n >= 2).all(|w| w[1].difference <= w[0].difference);
            let worst = rows.iter().map(|r| r.delta_residual).fold(0f64, f64::max);
            let result = json!({
                "rows": rows,
                "max_delta_residual": worst,
                "monotone_from_n2": monotone,
            });
            Ok(report("free-energy", None, None, Some(tol), worst <= tol && monotone, result))
        }
    }
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Gen { .. } => "gen",
        Command::Validate => "validate",
        Command::Dual => "dual",
        Command::SpinStructures => "spin-structures",
        Command::Tau { .. } => "tau",
        Command::Partition { .. } => "partition",
        Command::Laplacian { .. } => "laplacian",
        Command::DualityCheck { .. } => "duality-check",
        Command::DeltaCheck { .. } => "delta-check",
        Command::NonpropProbe { .. } => "nonprop-probe",
        Command::CouplingCheck { .. } => "coupling-check",
        Command::FreeEnergy { .. } => "free-energy",
    }
}

fn emit(output: &Option<PathBuf>, text: &str) -> io::Result<()> {
    match output {
        Some(p) => fs::write(p, text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let name = command_name(&cli.command);
    let output = cli.output.clone();
    let (text, code) = match run(cli) {
        Ok(Output::Document(doc)) => (doc.to_json(), 0),
        Ok(Output::Report { passed, body }) => {
            if !passed {
                eprintln!("isokw {name}: check failed");
            }
            (format!("{body}\n"), if passed { 0 } else { 1 })
        }
        Err(f) => {
            eprintln!("isokw {name}: {}", f.message());
            let body = json!({"command": name, "status": f.status(), "error": f.message()});
            (format!("{body}\n"), f.code())
        }
    };
    if let Err(e) = emit(&output, &text) {
        eprintln!("isokw: cannot write output: {e}");
        return ExitCode::from(1);
    }
    ExitCode::from(code)
}
