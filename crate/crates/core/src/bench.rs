//! Engine timing and the floating-point stability sweep.

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::{factorial, Rational};
use crate::identities::{
    random_int_vector, random_rank2_from, trial_rng, SampleMode, RESAMPLE_BUDGET,
};
use crate::linalg::Matrix;
use crate::permanent::{perm_naive_bounded, perm_rank2_determinantal, perm_ryser_bounded, Guards};

/// Smallest vector bound used for benchmark and stability instances.
pub const DEFAULT_BOUND: i64 = 9;

/// Vector entries for order-`n` instances lie in `[-bound, bound]` with
/// `bound = max(9, n²)`. `det(X∘(n-1))` vanishes whenever two of the ratios
/// `uᵢ : wᵢ` (or `vⱼ : xⱼ`) coincide, and a fixed small bound makes that
/// collision near-certain once `n` reaches a few dozen.
pub fn instance_bound(n: usize) -> i64 {
    DEFAULT_BOUND.max((n * n) as i64)
}
const REPETITIONS: usize = 3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum BenchMethod {
    Naive,
    Ryser,
    Determinantal,
}

impl FromStr for BenchMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "naive" => Ok(BenchMethod::Naive),
            "ryser" => Ok(BenchMethod::Ryser),
            "det" | "determinantal" => Ok(BenchMethod::Determinantal),
            other => Err(Error::InvalidArgument(format!(
                "unknown method {other:?} (expected naive, ryser or det)"
            ))),
        }
    }
}

impl fmt::Display for BenchMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BenchMethod::Naive => "naive",
            BenchMethod::Ryser => "ryser",
            BenchMethod::Determinantal => "determinantal",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BenchRecord {
    pub n: usize,
    pub method: BenchMethod,
    /// Median wall time in seconds.
    pub wall_time: f64,
    pub value_digits: usize,
    pub value: Rational,
}

/// A random rank-2 matrix of order `n` whose `(n-1)`-th Hadamard power is
/// nonsingular, so every engine applies. Deterministic in `(n, seed)`.
pub fn bench_instance(n: usize, entry_bound: i64, seed: u64) -> Result<Matrix> {
    for attempt in 0..RESAMPLE_BUDGET as u64 {
        let mut rng = trial_rng(seed ^ (n as u64).rotate_left(32), attempt);
        let x = random_rank2_from(&mut rng, n, entry_bound, SampleMode::General)?;
        if !x.hadamard_power(n as i64 - 1)?.determinant()?.is_zero() {
            return Ok(x);
        }
    }
    Err(Error::ExhaustedResampling {
        mode: "nondegenerate",
        attempts: RESAMPLE_BUDGET,
    })
}

fn run_engine(method: BenchMethod, x: &Matrix, guards: &Guards) -> Result<Rational> {
    match method {
        BenchMethod::Naive => perm_naive_bounded(x, guards.naive_max),
        BenchMethod::Ryser => perm_ryser_bounded(x, guards.ryser_max),
        BenchMethod::Determinantal => perm_rank2_determinantal(x),
    }
}

/// Times each engine on one instance per size (median of three runs) and
/// checks that all engines return the same exact value.
pub fn bench_permanent(
    sizes: &[usize],
    methods: &[BenchMethod],
    seed: u64,
    guards: &Guards,
) -> Result<Vec<BenchRecord>> {
    // Reject oversize requests before spending time on smaller ones.
    for &n in sizes {
        if n == 0 {
            return Err(Error::InvalidArgument("sizes must be positive".into()));
        }
        for &method in methods {
            let (engine, limit) = match method {
                BenchMethod::Naive => ("naive", guards.naive_max),
                BenchMethod::Ryser => ("ryser", guards.ryser_max),
                BenchMethod::Determinantal => continue,
            };
            if n > limit {
                return Err(Error::TooLarge { engine, n, limit });
            }
        }
    }

    let mut records = Vec::new();
    for &n in sizes {
        let x = bench_instance(n, instance_bound(n), seed)?;
        let mut reference: Option<(BenchMethod, Rational)> = None;
        for &method in methods {
            let mut times = Vec::with_capacity(REPETITIONS);
            let mut value = Rational::zero();
            for _ in 0..REPETITIONS {
                let start = Instant::now();
                value = run_engine(method, &x, guards)?;
                times.push(start.elapsed().as_secs_f64());
            }
            times.sort_by(f64::total_cmp);
            match &reference {
                Some((first, v)) if *v != value => {
                    return Err(Error::EngineDisagreement {
                        n,
                        detail: format!("{first} gave {v}, {method} gave {value}"),
                    })
                }
                Some(_) => {}
                None => reference = Some((method, value.clone())),
            }
            records.push(BenchRecord {
                n,
                method,
                wall_time: times[REPETITIONS / 2],
                value_digits: value.numerator_digits(),
                value,
            });
        }
    }
    Ok(records)
}

pub fn bench_csv(records: &[BenchRecord]) -> String {
    let mut out = String::from("n,method,wall_time_s,value_digits\n");
    for r in records {
        out.push_str(&format!(
            "{},{},{:.6},{}\n",
            r.n, r.method, r.wall_time, r.value_digits
        ));
    }
    out
}

/// Determinant by LU with partial pivoting in `f64`.
pub fn float_determinant(mut a: Vec<f64>, n: usize) -> f64 {
    let mut det = 1.0;
    for k in 0..n {
        let p = (k..n)
            .max_by(|&i, &j| a[i * n + k].abs().total_cmp(&a[j * n + k].abs()))
            .expect("nonempty range");
        if a[p * n + k] == 0.0 {
            return 0.0;
        }
        if p != k {
            for j in 0..n {
                a.swap(p * n + j, k * n + j);
            }
            det = -det;
        }
        let pivot = a[k * n + k];
        det *= pivot;
        for i in k + 1..n {
            let factor = a[i * n + k] / pivot;
            for j in k + 1..n {
                a[i * n + j] -= factor * a[k * n + j];
            }
        }
    }
    det
}

/// The determinantal permanent formula evaluated entirely in `f64`.
pub fn float_determinantal_permanent(x: &Matrix) -> Result<f64> {
    let n = x.order()?;
    let entries: Vec<f64> = x.entries().iter().map(Rational::to_f64).collect();
    let power = |p: i32| entries.iter().map(|e| e.powi(p)).collect::<Vec<_>>();
    let numer_det = float_determinant(power(n as i32), n);
    let denom_det = float_determinant(power(n as i32 - 1), n);
    let f = factorial(n as u64)
        .to_string()
        .parse::<f64>()
        .expect("finite");
    Ok(f * f * numer_det / ((n as f64).powi(n as i32) * denom_det))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StabilityRecord {
    pub epsilon: Rational,
    pub exact_value: Rational,
    pub float_value: f64,
    /// `|float - exact| / |exact|`, or the absolute error when `exact = 0`.
    pub relative_error: f64,
}

/// One ε of the sweep: a record, or the exact determinantal path's error.
#[derive(Clone, Debug, PartialEq)]
pub struct StabilityOutcome {
    pub epsilon: Rational,
    pub result: Result<StabilityRecord>,
}

/// `X(ε) = u vᵀ + ε w xᵀ` for fixed random integer vectors; compares the
/// float determinantal permanent against the exact Ryser value. As ε → 0,
/// `X(ε)` tends to rank 1 and both determinants vanish.
pub fn stability_experiment(
    n: usize,
    epsilons: &[Rational],
    seed: u64,
    guards: &Guards,
) -> Result<Vec<StabilityOutcome>> {
    let (u, v, w, x) = stability_vectors(n, seed, guards)?;
    let base = Matrix::outer(&u, &v);
    let tail = Matrix::outer(&w, &x);

    epsilons
        .iter()
        .map(|eps| {
            let m = base.add(&tail.scale(eps))?;
            let result = match perm_rank2_determinantal(&m) {
                Err(e) => Err(e),
                Ok(exact_det) => {
                    let exact_value = perm_ryser_bounded(&m, guards.ryser_max)?;
                    debug_assert_eq!(exact_det, exact_value);
                    let float_value = float_determinantal_permanent(&m)?;
                    let exact_f = exact_value.to_f64();
                    let abs = (float_value - exact_f).abs();
                    let relative_error = if exact_value.is_zero() {
                        abs
                    } else {
                        abs / exact_f.abs()
                    };
                    Ok(StabilityRecord {
                        epsilon: eps.clone(),
                        exact_value,
                        float_value,
                        relative_error,
                    })
                }
            };
            Ok(StabilityOutcome {
                epsilon: eps.clone(),
                result,
            })
        })
        .collect()
}

type Vectors = (Vec<Rational>, Vec<Rational>, Vec<Rational>, Vec<Rational>);

/// Vectors whose ε = 1 instance has a nonzero permanent and a nonsingular
/// `(n-1)`-th Hadamard power.
fn stability_vectors(n: usize, seed: u64, guards: &Guards) -> Result<Vectors> {
    if n == 0 {
        return Err(Error::InvalidArgument("n must be positive".into()));
    }
    if n > guards.ryser_max {
        return Err(Error::TooLarge {
            engine: "ryser",
            n,
            limit: guards.ryser_max,
        });
    }
    for attempt in 0..RESAMPLE_BUDGET as u64 {
        let rng = &mut trial_rng(seed, attempt);
        let draw = |rng: &mut rand_chacha::ChaCha8Rng| {
            random_int_vector(rng, n, -instance_bound(n), instance_bound(n)).into_vec()
        };
        let (u, v, w, x) = (draw(rng), draw(rng), draw(rng), draw(rng));
        let m = Matrix::outer(&u, &v).add(&Matrix::outer(&w, &x))?;
        let nondegenerate = !m.hadamard_power(n as i64 - 1)?.determinant()?.is_zero()
            && !perm_ryser_bounded(&m, guards.ryser_max)?.is_zero();
        if nondegenerate {
            return Ok((u, v, w, x));
        }
    }
    Err(Error::ExhaustedResampling {
        mode: "nondegenerate",
        attempts: RESAMPLE_BUDGET,
    })
}

pub fn stability_csv(outcomes: &[StabilityOutcome]) -> String {
    let mut out = String::from("epsilon,relative_error\n");
    for o in outcomes {
        match &o.result {
            Ok(r) => out.push_str(&format!("{},{:e}\n", o.epsilon, r.relative_error)),
            Err(Error::DegenerateDenominator) => {
                out.push_str(&format!("{},DegenerateDenominator\n", o.epsilon))
            }
            Err(e) => out.push_str(&format!("{},error: {e}\n", o.epsilon)),
        }
    }
    out
}
