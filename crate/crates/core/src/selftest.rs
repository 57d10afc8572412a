//! The desk-scale acceptance suite behind `hochdef selftest`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::config::Config;
use crate::deformation::{coboundary_isomorphism, DeformedAlgebra};
use crate::eulerian::{self, Convention};
use crate::exact_linalg::q;
use crate::hkr_poly;
use crate::hochschild::{self, Cochain, ComplexMode, HochschildComplex};
use crate::morita;
use crate::mutation_lattice;
use crate::quiver_algebra::{algebra_from_text, catalog, FiniteDimAlgebra};
use crate::report::{Check, Report};

/// Deliberate faults for checking that the suite can fail.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Fault {
    /// Eulerian idempotents without the sign twist.
    EulerianSign,
}

impl std::str::FromStr for Fault {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "eulerian-sign" => Ok(Fault::EulerianSign),
            other => Err(format!("unknown fault `{other}` (expected eulerian-sign)")),
        }
    }
}

/// A cochain with entries drawn from `-range..=range`, each nonzero with probability `density`.
pub fn random_cochain<R: Rng>(rng: &mut R, dim: usize, degree: usize, range: i64, density: f64) -> Cochain {
    let total = dim.pow(degree as u32 + 1);
    let coeffs = (0..total)
        .filter_map(|i| {
            if !rng.gen_bool(density) {
                return None;
            }
            let v = rng.gen_range(-range..=range);
            (v != 0).then(|| (i, q(v)))
        })
        .collect();
    Cochain::from_sparse(dim, degree, coeffs)
}

fn summarize(name: &str, sub: &Report) -> Check {
    let failures: Vec<String> = sub
        .failures()
        .map(|c| match &c.witness {
            Some(w) => format!("{}: {}", c.name, w),
            None => c.name.clone(),
        })
        .collect();
    let count = match sub.checks.len() {
        1 => "1 check".to_string(),
        n => format!("{n} checks"),
    };
    if failures.is_empty() {
        Check::pass(format!("{name} ({count})"))
    } else {
        Check::fail(format!("{name} ({count})"), failures.join("\n"))
    }
}

fn err_check(name: &str, e: impl std::fmt::Display) -> Report {
    let mut r = Report::new(name);
    r.push(Check::fail(name, e.to_string()));
    r
}

fn p2() -> FiniteDimAlgebra {
    algebra_from_text(catalog::BEILINSON_P2).expect("catalog entry parses")
}

pub fn hh_baseline(cfg: &Config) -> Report {
    let mut r = Report::new("HH of the ground field");
    let k = FiniteDimAlgebra::ground_field();
    let hc = HochschildComplex::new(&k).with_budget(cfg.budget);
    for n in 0..=3 {
        let expected = usize::from(n == 0);
        match hc.hh_dimension(n) {
            Ok(d) => r.check(format!("dim HH^{n}(k) = {expected}"), d == expected, || format!("got {d}")),
            Err(e) => r.push(Check::fail(format!("dim HH^{n}(k)"), e.to_string())),
        }
    }
    r
}

pub fn hereditary(cfg: &Config) -> Report {
    let mut r = Report::new("Kronecker quiver");
    let a = algebra_from_text(catalog::KRONECKER).expect("catalog entry parses");
    let hc = HochschildComplex::new(&a).with_budget(cfg.budget).with_mode(ComplexMode::Full);
    for (n, expected) in [(0, 1), (1, 3), (2, 0)] {
        match hc.hh_dimension(n) {
            Ok(d) => r.check(format!("dim HH^{n} = {expected}"), d == expected, || format!("got {d}")),
            Err(e) => r.push(Check::fail(format!("dim HH^{n}"), e.to_string())),
        }
    }
    r
}

pub fn beilinson_hh2(cfg: &Config) -> Report {
    let mut r = Report::new("Beilinson P^2, full complex");
    let a = p2();
    let hc = HochschildComplex::new(&a).with_budget(cfg.budget).with_mode(ComplexMode::Full);
    match hc.hh_dimension(2) {
        Ok(d) => {
            r.info(format!("dim HH^2 = {d}"));
            r.check("dim HH^2 = 10", d == 10, || format!("got {d}"));
        }
        Err(e) => r.push(Check::fail("dim HH^2", e.to_string())),
    }
    r
}

pub fn deformation_pipeline(cfg: &Config) -> Report {
    let mut r = Report::new("deformed idempotents and Hom blocks on P^2");
    let a = p2();
    let hc = HochschildComplex::new(&a).with_budget(cfg.budget);
    let basis = match hc.hh_basis(2) {
        Ok(b) => b,
        Err(e) => return err_check("HH^2 basis", e),
    };
    r.check("10 basis cocycles", basis.len() == 10, || format!("got {}", basis.len()));
    for (k, class) in basis.iter().enumerate() {
        match DeformedAlgebra::new(&a, class.representative.clone()).and_then(|d| d.report()) {
            Ok(sub) => r.push(summarize(&format!("cocycle {}", k + 1), &sub)),
            Err(e) => r.push(Check::fail(format!("cocycle {}", k + 1), e.to_string())),
        }
    }
    r
}

pub fn coboundary_triviality(cfg: &Config, count: usize) -> Report {
    let mut r = Report::new("A_{bv} ≅ A_0");
    let a = p2();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0x5);
    for k in 0..count {
        let v = random_cochain(&mut rng, a.dim(), 1, 3, 0.3);
        let phi = coboundary_isomorphism(&a, &v);
        let mut problems = Vec::new();
        if let Some((i, j)) = phi.multiplicativity_failure() {
            problems.push(format!("not multiplicative on ({}, {})", a.label(i), a.label(j)));
        }
        if !phi.is_unital() {
            problems.push("not unital".to_string());
        }
        if !phi.is_bijective() {
            problems.push("not bijective".to_string());
        }
        r.push(Check::from_failure(format!("sample {}", k + 1), (!problems.is_empty()).then(|| problems.join("; "))));
    }
    r
}

/// Test algebras for the cocycle criterion.
pub fn small_algebras() -> Vec<(&'static str, FiniteDimAlgebra)> {
    vec![
        ("A3", algebra_from_text(catalog::A3).expect("parses")),
        ("A3/(ab)", algebra_from_text(catalog::A3_WITH_RELATION).expect("parses")),
        ("Kronecker", algebra_from_text(catalog::KRONECKER).expect("parses")),
        ("k[x]/(x^2)", FiniteDimAlgebra::truncated_polynomial(2)),
        ("k[x]/(x^3)", FiniteDimAlgebra::truncated_polynomial(3)),
    ]
}

/// 2-cochains `z + b(v)` with `z` a random combination of `cocycles`, and the
/// same plus a single noise term on odd samples, which usually breaks the cocycle condition.
pub fn sample_two_cochains<R: Rng>(rng: &mut R, a: &FiniteDimAlgebra, cocycles: &[Cochain], count: usize) -> Vec<Cochain> {
    let n = a.dim();
    (0..count)
        .map(|k| {
            let v = random_cochain(rng, n, 1, 3, 0.4);
            let mut u = hochschild::differential(a, &v);
            for z in cocycles {
                u = u.add_scaled(z, &q(rng.gen_range(-2..=2)));
            }
            if k % 2 == 1 {
                let idx = rng.gen_range(0..n * n * n);
                let c = if rng.gen_bool(0.5) { q(1) } else { q(-2) };
                u = u.add(&Cochain::from_sparse(n, 2, vec![(idx, c)]));
            }
            u
        })
        .collect()
}

pub fn gerstenhaber(cfg: &Config, count: usize) -> Report {
    let mut r = Report::new("associativity of ·_u iff b(u) = 0");
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0x6);
    for (name, a) in small_algebras() {
        let z = HochschildComplex::new(&a).hh_basis(2).map(|b| b.into_iter().map(|c| c.representative).collect::<Vec<_>>());
        let z = match z {
            Ok(z) => z,
            Err(e) => {
                r.push(Check::fail(format!("{name}: HH^2 basis"), e.to_string()));
                continue;
            }
        };
        let (mut cocycles, mut others, mut mismatch) = (0, 0, None);
        for (k, u) in sample_two_cochains(&mut rng, &a, &z, count).into_iter().enumerate() {
            let is_cocycle = hochschild::differential(&a, &u).is_zero();
            let assoc = DeformedAlgebra::new_unchecked(&a, u).map(|d| d.associativity_failure().is_none()).unwrap_or(false);
            if is_cocycle {
                cocycles += 1;
            } else {
                others += 1;
            }
            if assoc != is_cocycle && mismatch.is_none() {
                mismatch = Some(format!("sample {}: cocycle = {is_cocycle}, associative = {assoc}", k + 1));
            }
        }
        r.info(format!("{name}: {cocycles} cocycles, {others} non-cocycles"));
        r.push(Check::from_failure(format!("{name}: associative iff cocycle"), mismatch));
        r.check(format!("{name}: both directions sampled"), cocycles > 0 && others > 0, || {
            format!("{cocycles} cocycles, {others} non-cocycles")
        });
    }
    r
}

pub fn eulerian_suite(cfg: &Config) -> Report {
    let mut r = Report::new("Eulerian idempotents, n <= 5");
    for n in 1..=5 {
        match eulerian::idempotent_report(n, cfg.euler_bound) {
            Ok(sub) => {
                for c in sub.checks {
                    r.push(c);
                }
            }
            Err(e) => r.push(Check::fail(format!("n={n}"), e.to_string())),
        }
    }
    r
}

pub fn chain_compatibility(cfg: &Config, convention: Convention) -> Report {
    let mut r = Report::new("b ∘ e_n^(i) = e_{n+1}^(i) ∘ b");
    for m in [2, 3] {
        let b = FiniteDimAlgebra::truncated_polynomial(m);
        for n in 0..=3 {
            for i in 0..=n + 1 {
                match eulerian::chain_compatibility_check(&b, n, i, cfg.euler_bound, convention) {
                    Ok(mut c) => {
                        c.name = format!("k[x]/(x^{m}): {}", c.name);
                        r.push(c);
                    }
                    Err(e) => r.push(Check::fail(format!("k[x]/(x^{m}), n={n}, i={i}"), e.to_string())),
                }
            }
        }
    }
    r
}

pub fn morita_suite() -> Report {
    let mut r = Report::new("Morita cotrace, inc* and homotopy");
    for (name, b) in [("k", FiniteDimAlgebra::ground_field()), ("k[x]/(x^2)", FiniteDimAlgebra::truncated_polynomial(2))] {
        for size in 1..=3 {
            match morita::morita_report(&b, size, 2) {
                Ok(sub) => r.push(summarize(&format!("B = {name}, r = {size}"), &sub)),
                Err(e) => r.push(Check::fail(format!("B = {name}, r = {size}"), e.to_string())),
            }
        }
    }
    r
}

pub fn hkr_suite(cfg: &Config) -> Report {
    match hkr_poly::hkr_report(3, 3, 4.min(cfg.hkr_degree), cfg.hkr_degree) {
        Ok(r) => r,
        Err(e) => err_check("HKR", e),
    }
}

pub fn mutation_suite(cfg: &Config, count: usize) -> Report {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0xb);
    mutation_lattice::mutation_report(&mut rng, count, 6, 5)
}

/// Re-runs the seeded samplers and compares machine renderings.
pub fn determinism(cfg: &Config) -> Report {
    let mut r = Report::new("seeded suites repeat byte for byte");
    let runs = |cfg: &Config| {
        [
            coboundary_triviality(cfg, 3).to_machine(),
            gerstenhaber(cfg, 4).to_machine(),
            mutation_suite(cfg, 10).to_machine(),
        ]
    };
    let (first, second) = (runs(cfg), runs(cfg));
    for (k, name) in ["coboundary samples", "2-cochain samples", "random lattices"].iter().enumerate() {
        r.check(format!("{name} identical"), first[k] == second[k], || "renderings differ".into());
    }
    r
}

/// All twelve criteria; one summary check per criterion.
pub fn selftest(cfg: &Config, fault: Option<Fault>) -> Report {
    let mut rep = Report::new("selftest");
    let convention = match fault {
        Some(Fault::EulerianSign) => Convention::Untwisted,
        None => Convention::Standard,
    };
    if let Some(f) = fault {
        rep.info(format!("fault injected: {f:?}"));
    }
    rep.info(format!("seed {}", cfg.seed));
    type Step<'a> = (&'a str, Box<dyn Fn() -> Report + 'a>);
    let steps: Vec<Step> = vec![
        ("1 HH of k", Box::new(|| hh_baseline(cfg))),
        ("2 Kronecker HH^1 = 3, HH^2 = 0", Box::new(|| hereditary(cfg))),
        ("3 Beilinson P^2 HH^2 = 10", Box::new(|| beilinson_hh2(cfg))),
        ("4 deformation pipeline on P^2", Box::new(|| deformation_pipeline(cfg))),
        ("5 coboundary triviality", Box::new(|| coboundary_triviality(cfg, 20))),
        ("6 associativity iff cocycle", Box::new(|| gerstenhaber(cfg, 20))),
        ("7 Eulerian identities", Box::new(|| eulerian_suite(cfg))),
        ("8 λ-chain compatibility", Box::new(move || chain_compatibility(cfg, convention))),
        ("9 Morita identities", Box::new(morita_suite)),
        ("10 HKR cocycles", Box::new(|| hkr_suite(cfg))),
        ("11 mutation suite", Box::new(|| mutation_suite(cfg, 100))),
        ("12 determinism", Box::new(|| determinism(cfg))),
    ];
    for (name, step) in steps {
        let sub = rep.timed(name, || step());
        for line in &sub.info {
            rep.info(format!("[{name}] {line}"));
        }
        rep.push(summarize(name, &sub));
    }
    rep
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn samplers_are_seeded() {
        let a = algebra_from_text(catalog::A3).unwrap();
        let x = sample_two_cochains(&mut ChaCha8Rng::seed_from_u64(3), &a, &[], 4);
        let y = sample_two_cochains(&mut ChaCha8Rng::seed_from_u64(3), &a, &[], 4);
        assert_eq!(x, y);
    }

    #[test]
    fn fault_breaks_chain_compatibility() {
        let cfg = Config::default();
        assert!(chain_compatibility(&cfg, Convention::Standard).all_passed());
        let bad = chain_compatibility(&cfg, Convention::Untwisted);
        assert!(!bad.all_passed());
        assert!(bad.failures().all(|c| c.witness.as_deref().is_some_and(|w| w.contains("basis cochain"))));
    }

    #[test]
    fn small_criteria() {
        let cfg = Config::default();
        for r in [hh_baseline(&cfg), hereditary(&cfg), eulerian_suite(&cfg), gerstenhaber(&cfg, 6)] {
            assert!(r.all_passed(), "{}", r.to_human());
        }
    }
}
