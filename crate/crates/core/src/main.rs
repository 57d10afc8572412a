use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use sha2::{Digest, Sha256};

use hochdef::config::{self, Config};
use hochdef::deformation::DeformedAlgebra;
use hochdef::eulerian::{self, Convention};
use hochdef::hkr_poly::{self, PolyRing};
use hochdef::hochschild::{self, Cochain, ComplexMode, HochschildComplex};
use hochdef::morita;
use hochdef::mutation_lattice::{self, GramLattice};
use hochdef::quiver_algebra::{algebra_from_text, catalog, FiniteDimAlgebra};
use hochdef::report::{Check, Format, Report};
use hochdef::selftest::{self, Fault};

#[derive(Parser)]
#[command(name = "hochdef", version, about = "Exact Hochschild cohomology and deformations of quiver algebras")]
struct Cli {
    /// Output format.
    #[arg(long, global = true, default_value = "human")]
    format: Format,
    /// Largest cochain-space dimension for the full complex.
    #[arg(long, global = true, env = config::ENV_BUDGET)]
    budget: Option<u64>,
    /// Largest n for computations in Q[S_n].
    #[arg(long, global = true, env = config::ENV_EULER_BOUND)]
    euler_bound: Option<usize>,
    /// Largest total degree in HKR checks.
    #[arg(long, global = true, env = config::ENV_HKR_DEGREE)]
    hkr_degree: Option<u32>,
    /// Seed for sampled checks.
    #[arg(long, global = true, env = config::ENV_SEED)]
    seed: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct AlgebraArgs {
    /// Quiver file.
    #[arg(long, conflicts_with = "algebra")]
    quiver: Option<PathBuf>,
    /// Built-in algebra: a3, a3-rel, kronecker, point, beilinson-p2.
    #[arg(long)]
    algebra: Option<String>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Auto,
    Full,
    Reduced,
}

#[derive(Clone, Copy, ValueEnum)]
enum ConventionArg {
    Standard,
    Untwisted,
}

#[derive(Clone, Copy, ValueEnum)]
enum BaseArg {
    K,
    Dual,
    Cubic,
}

#[derive(Subcommand)]
enum Command {
    /// Dimension of HH^n and a basis of representatives.
    Hh {
        #[command(flatten)]
        alg: AlgebraArgs,
        #[arg(long)]
        degree: usize,
        #[arg(long, value_enum, default_value = "auto")]
        mode: Mode,
        /// Write the basis of representatives here.
        #[arg(long)]
        basis_out: Option<PathBuf>,
        /// Cache directory for degree-2 bases.
        #[arg(long, env = "HOCHDEF_CACHE", default_value = ".hochdef-cache")]
        cache_dir: PathBuf,
    },
    /// First-order deformation along a 2-cocycle.
    Deform {
        #[command(flatten)]
        alg: AlgebraArgs,
        /// `zero`, a 1-based index into the HH^2 basis, or a cochain file.
        #[arg(long)]
        cocycle: String,
        #[arg(long, env = "HOCHDEF_CACHE", default_value = ".hochdef-cache")]
        cache_dir: PathBuf,
    },
    /// Checks that the vertex projectives form a strong exceptional collection, optionally after deforming.
    VerifyEc {
        #[command(flatten)]
        alg: AlgebraArgs,
        #[arg(long)]
        cocycle: Option<String>,
        #[arg(long, env = "HOCHDEF_CACHE", default_value = ".hochdef-cache")]
        cache_dir: PathBuf,
    },
    /// Applies a mutation word such as `R1 L2` to a lattice.
    Mutate {
        #[arg(long)]
        lattice: PathBuf,
        #[arg(long)]
        word: String,
    },
    /// Numerical helix check on a lattice.
    HelixCheck {
        #[arg(long)]
        lattice: PathBuf,
    },
    /// Eulerian idempotents in Q[S_n].
    EulerIdem {
        #[arg(long)]
        n: usize,
        /// Also check chain compatibility on k[x]/(x^2) and k[x]/(x^3).
        #[arg(long)]
        chain: bool,
        #[arg(long, value_enum, default_value = "standard")]
        convention: ConventionArg,
    },
    /// Cotrace, inc* and the homotopy for M_r(B).
    MoritaCheck {
        #[arg(long, value_enum, default_value = "dual")]
        base: BaseArg,
        #[arg(long, default_value_t = 2)]
        size: usize,
        #[arg(long, default_value_t = 2)]
        degree: usize,
    },
    /// b(ε_n(θ)) = 0 on monomial tuples.
    HkrCheck {
        #[arg(long, default_value_t = 3)]
        vars: usize,
        /// Largest total degree of the tuples.
        #[arg(long, default_value_t = 4)]
        degree: u32,
        /// Derivations separated by `;`, e.g. `dx; x*dy`. Without this the standard family is checked.
        #[arg(long)]
        derivations: Option<String>,
        #[arg(long, default_value_t = 3)]
        max_n: usize,
    },
    /// The full acceptance suite.
    Selftest {
        #[arg(long)]
        fault: Option<Fault>,
    },
}

/// An error in the input: bad file, bad syntax, bad value.
struct InputError(String);

impl<E: std::fmt::Display> From<E> for InputError {
    fn from(e: E) -> Self {
        InputError(e.to_string())
    }
}

fn read(path: &Path) -> Result<String, InputError> {
    fs::read_to_string(path).map_err(|e| InputError(format!("{}: {e}", path.display())))
}

fn load_algebra(args: &AlgebraArgs) -> Result<(FiniteDimAlgebra, String), InputError> {
    let text = match (&args.quiver, &args.algebra) {
        (Some(p), _) => read(p)?,
        (None, Some(name)) => catalog::by_name(name)
            .ok_or_else(|| InputError(format!("unknown algebra `{name}`")))?
            .to_string(),
        (None, None) => return Err(InputError("one of --quiver or --algebra is required".into())),
    };
    let alg = algebra_from_text(&text).map_err(|e| match &args.quiver {
        Some(p) => InputError(format!("{}: {e}", p.display())),
        None => InputError(e.to_string()),
    })?;
    Ok((alg, text))
}

fn cache_path(dir: &Path, quiver_text: &str, degree: usize) -> PathBuf {
    let digest = hex::encode(Sha256::digest(quiver_text.as_bytes()));
    dir.join(format!("{digest}-hh{degree}.txt"))
}

fn hh_basis_cached(cfg: &Config, alg: &FiniteDimAlgebra, text: &str, cache_dir: &Path) -> Result<Vec<Cochain>, InputError> {
    let path = cache_path(cache_dir, text, 2);
    if let Ok(cached) = fs::read_to_string(&path) {
        if let Ok(fs) = hochschild::cochains_from_text(alg, &cached) {
            return Ok(fs);
        }
    }
    let basis: Vec<Cochain> = HochschildComplex::new(alg)
        .with_budget(cfg.budget)
        .hh_basis(2)?
        .into_iter()
        .map(|c| c.representative)
        .collect();
    store_cache(&path, &hochschild::cochains_to_text(alg, &basis));
    Ok(basis)
}

fn store_cache(path: &Path, text: &str) {
    if let Some(dir) = path.parent() {
        let _ = fs::create_dir_all(dir);
    }
    let _ = fs::write(path, text);
}

fn resolve_cocycle(cfg: &Config, alg: &FiniteDimAlgebra, text: &str, choice: &str, cache_dir: &Path) -> Result<Cochain, InputError> {
    if choice == "zero" {
        return Ok(Cochain::zero(alg.dim(), 2));
    }
    if let Ok(k) = choice.parse::<usize>() {
        let basis = hh_basis_cached(cfg, alg, text, cache_dir)?;
        return basis
            .get(k.wrapping_sub(1))
            .cloned()
            .ok_or_else(|| InputError(format!("cocycle index {k} out of range 1..={}", basis.len())));
    }
    let path = Path::new(choice);
    let f = Cochain::from_text(alg, &read(path)?).map_err(|e| InputError(format!("{}: {e}", path.display())))?;
    if f.degree() != 2 {
        return Err(InputError(format!("{}: expected a 2-cochain, got degree {}", path.display(), f.degree())));
    }
    Ok(f)
}

fn load_lattice(path: &Path) -> Result<GramLattice, InputError> {
    GramLattice::from_text(&read(path)?).map_err(|e| InputError(format!("{}: {e}", path.display())))
}

fn ec_report(alg: &FiniteDimAlgebra) -> Result<Report, InputError> {
    let mut r = Report::new("vertex projectives");
    let qs = alg.quiver().ok_or_else(|| InputError("not a quiver algebra".into()))?;
    let n = qs.vertex_count();
    for i in 0..n {
        for j in 0..n {
            let d = alg.hom_dimension(i, j)?;
            r.info(format!("dim Hom(P_{}, P_{}) = {d}", i + 1, j + 1));
            if i > j {
                r.check(format!("Hom(P_{}, P_{}) = 0", i + 1, j + 1), d == 0, || format!("dimension {d}"));
            } else if i == j {
                r.check(format!("End(P_{}) = k", i + 1), d == 1, || format!("dimension {d}"));
            }
        }
    }
    r.info("higher Ext between projectives vanishes");
    Ok(r)
}

fn run(cli: Cli) -> Result<Report, InputError> {
    let mut cfg = Config::from_env()?;
    cfg.format = cli.format;
    if let Some(b) = cli.budget {
        cfg.budget = b;
    }
    if let Some(b) = cli.euler_bound {
        cfg.euler_bound = b;
    }
    if let Some(d) = cli.hkr_degree {
        cfg.hkr_degree = d;
    }
    if let Some(s) = cli.seed {
        cfg.seed = s;
    }
    cfg.validate()?;
    match cli.command {
        Command::Hh {
            alg,
            degree,
            mode,
            basis_out,
            cache_dir,
        } => {
            let (a, text) = load_algebra(&alg)?;
            let mode = match mode {
                Mode::Auto => ComplexMode::Auto,
                Mode::Full => ComplexMode::Full,
                Mode::Reduced => ComplexMode::Reduced,
            };
            let hc = HochschildComplex::new(&a).with_budget(cfg.budget).with_mode(mode);
            let mut r = Report::new(format!("hh --degree {degree}"));
            let basis: Vec<Cochain> = r.timed("hh", || hc.hh_basis(degree))?.into_iter().map(|c| c.representative).collect();
            r.info(format!("dim HH^{degree} = {}", basis.len()));
            let body = hochschild::cochains_to_text(&a, &basis);
            if degree == 2 {
                store_cache(&cache_path(&cache_dir, &text, 2), &body);
            }
            if let Some(p) = basis_out {
                fs::write(&p, &body).map_err(|e| InputError(format!("{}: {e}", p.display())))?;
                r.info(format!("basis written to {}", p.display()));
            }
            Ok(r)
        }
        Command::Deform { alg, cocycle, cache_dir } => {
            let (a, text) = load_algebra(&alg)?;
            let u = resolve_cocycle(&cfg, &a, &text, &cocycle, &cache_dir)?;
            let mut r = Report::new(format!("deform --cocycle {cocycle}"));
            match DeformedAlgebra::new(&a, u).and_then(|d| d.report()) {
                Ok(sub) => r.extend("", sub),
                Err(e) => r.push(Check::fail("deformation", e.to_string())),
            }
            Ok(r)
        }
        Command::VerifyEc { alg, cocycle, cache_dir } => {
            let (a, text) = load_algebra(&alg)?;
            let mut r = Report::new("verify-ec");
            r.extend("", ec_report(&a)?);
            if let Some(choice) = cocycle {
                let u = resolve_cocycle(&cfg, &a, &text, &choice, &cache_dir)?;
                match DeformedAlgebra::new(&a, u).and_then(|d| d.report()) {
                    Ok(sub) => r.extend("deformed: ", sub),
                    Err(e) => r.push(Check::fail("deformed collection", e.to_string())),
                }
            }
            Ok(r)
        }
        Command::Mutate { lattice, word } => {
            let latt = load_lattice(&lattice)?;
            let w = mutation_lattice::parse_word(&word).map_err(InputError)?;
            let out = latt.apply_word(&w)?;
            let mut r = Report::new(format!("mutate {word}"));
            for (label, c) in out.labels().iter().zip(out.classes()) {
                r.info(format!("[{label}] = {}", mutation_lattice::fmt_vec(c)));
            }
            r.info(format!("Gram = {}", mutation_lattice::fmt_matrix(&out.gram())));
            r.check("Gram matrix unit upper-triangular", out.is_unitriangular(), || mutation_lattice::fmt_matrix(&out.gram()));
            Ok(r)
        }
        Command::HelixCheck { lattice } => Ok(load_lattice(&lattice)?.helix_check()),
        Command::EulerIdem { n, chain, convention } => {
            let mut r = eulerian::idempotent_report(n, cfg.euler_bound)?;
            if chain {
                let conv = match convention {
                    ConventionArg::Standard => Convention::Standard,
                    ConventionArg::Untwisted => Convention::Untwisted,
                };
                for m in [2, 3] {
                    let b = FiniteDimAlgebra::truncated_polynomial(m);
                    for i in 0..=n + 1 {
                        let mut c = eulerian::chain_compatibility_check(&b, n, i, cfg.euler_bound, conv)?;
                        c.name = format!("k[x]/(x^{m}): {}", c.name);
                        r.push(c);
                    }
                }
            }
            Ok(r)
        }
        Command::MoritaCheck { base, size, degree } => {
            let b = match base {
                BaseArg::K => FiniteDimAlgebra::ground_field(),
                BaseArg::Dual => FiniteDimAlgebra::truncated_polynomial(2),
                BaseArg::Cubic => FiniteDimAlgebra::truncated_polynomial(3),
            };
            Ok(morita::morita_report(&b, size, degree)?)
        }
        Command::HkrCheck {
            vars,
            degree,
            derivations,
            max_n,
        } => match derivations {
            None => Ok(hkr_poly::hkr_report(vars, max_n, degree, cfg.hkr_degree)?),
            Some(text) => {
                let ring = PolyRing::new(vars)?;
                let fs = text
                    .split(';')
                    .map(|t| ring.parse_derivation(t.trim()))
                    .collect::<Result<Vec<_>, _>>()?;
                let c = hkr_poly::antisymmetrize(&ring, &fs);
                let res = hkr_poly::verify_cocycle(&ring, &c, degree, cfg.hkr_degree)?;
                let mut r = Report::new(format!("hkr-check --derivations {text}"));
                r.push(Check::from_failure(format!("b(ε_{}) = 0 on {} tuples", fs.len(), res.tuples), res.witness));
                Ok(r)
            }
        },
        Command::Selftest { fault } => Ok(selftest::selftest(&cfg, fault)),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let format = cli.format;
    match run(cli) {
        Ok(report) => {
            print!("{}", report.render(format));
            if report.all_passed() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(InputError(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
