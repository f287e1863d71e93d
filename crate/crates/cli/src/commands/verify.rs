//! Randomized oracle-equivalence and identity suites.
//!
//! Every suite draws from one seeded generator, so a report is exactly
//! reproducible from its printed seed.

use num_complex::Complex64;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use plasmode_core::charpoly::{det_recursive, eval_charpoly, fq_dp, fq_enum, g_coeff};
use plasmode_core::field::AmplitudeVariant;
use plasmode_core::field::{field_coeffs, perturbation_amplitude, transmission_residual};
use plasmode_core::linalg::{eig_dense, k_matrix, lu_det, p_matrix_3d};
use plasmode_core::modes::{solve_modes_2d, solve_modes_3d};
use plasmode_core::structure::{
    alternating_contrasts, alternating_profile, contrasts, epsilon_from_lambda, ratio_table,
    Dimension, LayeredStructure, MaterialProfile,
};

use crate::CliError;

#[derive(Debug, clap::Args)]
pub struct VerifyArgs {
    /// Largest layer count to draw
    #[arg(long, default_value_t = 12)]
    pub nmax: usize,
    /// Random geometries per suite
    #[arg(long, default_value_t = 50)]
    pub trials: usize,
    /// RNG seed (printed in the report)
    #[arg(long, default_value_t = 7)]
    pub seed: u64,
}

struct Suite {
    name: &'static str,
    checks: usize,
    failures: Vec<String>,
}

impl Suite {
    fn new(name: &'static str) -> Self {
        Self {
            name,
            checks: 0,
            failures: Vec::new(),
        }
    }

    fn check(&mut self, ok: bool, detail: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok && self.failures.len() < 8 {
            self.failures.push(detail());
        }
    }

    fn report(&self) -> bool {
        if self.failures.is_empty() {
            println!("  PASS  {:<28} {} checks", self.name, self.checks);
            true
        } else {
            println!(
                "  FAIL  {:<28} {} checks, {} failed",
                self.name,
                self.checks,
                self.failures.len()
            );
            for f in &self.failures {
                println!("        {f}");
            }
            false
        }
    }
}

fn random_radii(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    let mut radii = Vec::with_capacity(n);
    let mut acc = 0.0;
    for _ in 0..n {
        acc += rng.gen_range(0.05..1.05);
        radii.push(acc);
    }
    radii.reverse();
    radii
}

pub fn run(args: &VerifyArgs) -> Result<(), CliError> {
    if args.nmax < 1 {
        return Err(CliError::validation("nmax must be at least 1"));
    }
    if args.trials < 1 {
        return Err(CliError::validation("trials must be at least 1"));
    }
    println!(
        "verify: nmax = {}, trials = {}, seed = {}",
        args.nmax, args.trials, args.seed
    );
    let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
    let mut suites = Vec::new();

    // determinant routes agree pairwise
    let mut suite = Suite::new("determinant-equivalence");
    for _ in 0..args.trials {
        let n = rng.gen_range(1..=args.nmax);
        let s = LayeredStructure::new(random_radii(&mut rng, n), Dimension::Three).unwrap();
        let table = ratio_table(&s, 3);
        let by_dp = fq_dp(&table);
        let by_enum = fq_enum(&table);
        for _ in 0..4 {
            let lambda = Complex64::new(rng.gen_range(-2.0..3.0), rng.gen_range(-1.0..1.0));
            let cv = alternating_contrasts(lambda, n, Dimension::Three);
            let mut values = vec![
                eval_charpoly(&by_dp, lambda),
                det_recursive(&s, cv.values()),
                lu_det(&p_matrix_3d(&s, cv.values())),
            ];
            if let Ok(cp) = &by_enum {
                values.push(eval_charpoly(cp, lambda));
            }
            let scale = values[0].norm().max(1.0);
            for pair in values.windows(2) {
                suite.check((pair[0] - pair[1]).norm() <= 1e-8 * scale, || {
                    format!("n={n} lambda={lambda}: {} vs {}", pair[0], pair[1])
                });
            }
        }
    }
    suites.push(suite);

    // K spectrum equals the mode multiset
    let mut suite = Suite::new("spectral-equivalence-3d");
    for _ in 0..args.trials {
        let n = rng.gen_range(1..=args.nmax);
        let s = LayeredStructure::new(random_radii(&mut rng, n), Dimension::Three).unwrap();
        match (solve_modes_3d(&s, 1.0), eig_dense(&k_matrix(&s))) {
            (Ok(ms), Ok(eigs)) => {
                let lambdas = ms.lambda_multiset();
                let mut re: Vec<f64> = eigs.iter().map(|z| z.re).collect();
                re.sort_by(|a, b| a.partial_cmp(b).unwrap());
                for (e, l) in re.iter().zip(&lambdas) {
                    suite.check((e - l).abs() <= 1e-6, || format!("n={n}: {e} vs {l}"));
                }
            }
            (a, b) => suite.check(false, || format!("n={n}: {a:?} / {}", b.is_err())),
        }
    }
    suites.push(suite);

    // 2D spectra real, bounded, on the determinant zero set
    let mut suite = Suite::new("spectral-2d");
    for _ in 0..args.trials {
        let n = rng.gen_range(1..=args.nmax);
        let s = LayeredStructure::new(random_radii(&mut rng, n), Dimension::Two).unwrap();
        let order = rng.gen_range(1..=4u32);
        match solve_modes_2d(&s, order) {
            Ok(roots) => {
                suite.check(roots.len() == n, || format!("n={n}: {} roots", roots.len()));
                for r in roots {
                    suite.check((-1.0 - 1e-9..=1.0 + 1e-9).contains(&r), || {
                        format!("n={n} order={order}: root {r}")
                    });
                }
            }
            Err(e) => suite.check(false, || format!("n={n}: {e}")),
        }
    }
    suites.push(suite);

    // exact integer identities
    let mut suite = Suite::new("combinatorial-identities");
    for n in 1..=22usize {
        let l = n / 2;
        let binom = |k: usize| -> i64 {
            let mut b: i128 = 1;
            for i in 0..k {
                b = b * (l - i) as i128 / (i + 1) as i128;
            }
            b as i64
        };
        for k in 0..=l {
            let sign = if k % 2 == 0 { 1 } else { -1 };
            suite.check(g_coeff(n, 2 * k).unwrap() == sign * binom(k), || {
                format!("g({n},{})", 2 * k)
            });
        }
        suite.check(
            g_coeff(n, 1).unwrap() == if n % 2 == 0 { 0 } else { -1 },
            || format!("g({n},1)"),
        );
        if n % 2 == 0 {
            for k in 1..=n / 2 {
                suite.check(g_coeff(n, 2 * k - 1).unwrap() == 0, || {
                    format!("g({n},{})", 2 * k - 1)
                });
            }
        }
    }
    suites.push(suite);

    // transmission conditions and amplitude consistency
    let mut suite = Suite::new("field-transmission");
    for _ in 0..args.trials {
        let n = rng.gen_range(1..=args.nmax.min(10));
        let s = LayeredStructure::new(random_radii(&mut rng, n), Dimension::Three).unwrap();
        let eps: Vec<Complex64> = (0..n)
            .map(|_| Complex64::new(rng.gen_range(0.1..8.0), 0.0))
            .collect();
        let profile = MaterialProfile::new(1.0, eps).unwrap();
        match field_coeffs(&s, &profile, 1.0) {
            Ok(fc) => {
                let res = transmission_residual(&fc, &s, &profile);
                suite.check(res < 1e-10, || format!("n={n}: residual {res}"));
                match perturbation_amplitude(&s, &profile, AmplitudeVariant::General, None) {
                    Ok(amp) => suite.check(
                        (amp - fc.amplitude()).norm() <= 1e-10 * amp.norm().max(1.0),
                        || format!("n={n}: amplitude mismatch"),
                    ),
                    Err(e) => suite.check(false, || format!("n={n}: {e}")),
                }
            }
            Err(e) => suite.check(false, || format!("n={n}: {e}")),
        }
    }
    suites.push(suite);

    // permittivity <-> contrast round trip
    let mut suite = Suite::new("lambda-round-trip");
    for _ in 0..args.trials {
        for dim in [Dimension::Three, Dimension::Two] {
            let hi = if dim == Dimension::Three {
                1.999
            } else {
                0.999
            };
            let lambda = rng.gen_range(-0.999..hi);
            let eps = epsilon_from_lambda(lambda, 1.0, dim).unwrap();
            if eps >= 0.0 {
                continue;
            }
            let profile = alternating_profile(-eps, 0.0, 1.0, 4).unwrap();
            let cv = contrasts(&profile, dim).unwrap();
            suite.check((cv.values()[0].re - lambda).abs() < 1e-12, || {
                format!("lambda {lambda}: got {}", cv.values()[0].re)
            });
        }
    }
    suites.push(suite);

    let mut all_ok = true;
    let mut total = 0usize;
    for s in &suites {
        all_ok &= s.report();
        total += s.checks;
    }
    println!(
        "verify: {} suites, {} checks, seed = {} -> {}",
        suites.len(),
        total,
        args.seed,
        if all_ok { "all passed" } else { "FAILURES" }
    );
    if all_ok {
        Ok(())
    } else {
        Err(CliError::numerical("verification suites reported failures"))
    }
}
