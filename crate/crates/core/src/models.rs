//! Signal generators, their theoretical signal-strength quantities, the
//! qualitative risk-bound curve, and adversarial near-threshold instances.
//!
//! Reproducibility contract: every random draw goes through [`SimRng`]
//! (ChaCha8 plus the documented mappings), and generators consume their
//! stream in a fixed order — slopes first (row 0 upward), then intercepts,
//! then, where applicable, noise in row-major order. A seed therefore pins
//! the generated data bit for bit.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::DataMatrix;
use crate::perm::Permutation;
use crate::rng::SimRng;
use crate::scalar::Scalar;
use crate::spectra::{row_center, top_svd};

/// Linear growth signal: `theta[i][j] = a[i] * eta[j] + b[i]` with
/// nonnegative slopes and intercepts and a nondecreasing nonnegative `eta`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LinearGrowthSpec<F: Scalar> {
    pub a: Vec<F>,
    pub b: Vec<F>,
    pub eta: Vec<F>,
}

impl<F: Scalar> LinearGrowthSpec<F> {
    pub fn new(a: Vec<F>, b: Vec<F>, eta: Vec<F>) -> Result<Self> {
        let spec = Self { a, b, eta };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if self.a.len() != self.b.len() || self.a.is_empty() {
            return Err(Error::Dimension(
                "slope and intercept vectors must share a positive length".into(),
            ));
        }
        if self.eta.len() < 2 {
            return Err(Error::Dimension("eta needs at least two entries".into()));
        }
        let nonneg = |name: &str, v: &[F]| -> Result<()> {
            for (i, x) in v.iter().enumerate() {
                if !x.is_finite() || *x < F::zero() {
                    return Err(Error::Domain(format!(
                        "{name}[{i}] must be finite and nonnegative"
                    )));
                }
            }
            Ok(())
        };
        nonneg("a", &self.a)?;
        nonneg("b", &self.b)?;
        nonneg("eta", &self.eta)?;
        if self.eta.windows(2).any(|w| w[0] > w[1]) {
            return Err(Error::Domain("eta must be nondecreasing".into()));
        }
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.a.len()
    }

    pub fn p(&self) -> usize {
        self.eta.len()
    }
}

/// `theta[i][j] = a[i] * eta[j] + b[i]`; rows are nondecreasing by
/// construction.
pub fn generate_linear<F: Scalar>(spec: &LinearGrowthSpec<F>) -> Result<DataMatrix<F>> {
    spec.validate()?;
    DataMatrix::from_fn(spec.n(), spec.p(), |i, j| {
        spec.a[i] * spec.eta[j] + spec.b[i]
    })
}

/// The four simulation regimes. S1/S3 grow logarithmically, S2/S4 linearly;
/// S1/S2 make half the samples informative, S3/S4 only the first three.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Regime {
    S1,
    S2,
    S3,
    S4,
}

impl Regime {
    pub fn name(self) -> &'static str {
        match self {
            Regime::S1 => "S1",
            Regime::S2 => "S2",
            Regime::S3 => "S3",
            Regime::S4 => "S4",
        }
    }

    fn is_logarithmic(self) -> bool {
        matches!(self, Regime::S1 | Regime::S3)
    }

    fn informative_rows(self, n: usize) -> usize {
        match self {
            Regime::S1 | Regime::S2 => n / 2,
            Regime::S3 | Regime::S4 => 3,
        }
    }
}

impl std::str::FromStr for Regime {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "S1" | "s1" => Ok(Regime::S1),
            "S2" | "s2" => Ok(Regime::S2),
            "S3" | "s3" => Ok(Regime::S3),
            "S4" | "s4" => Ok(Regime::S4),
            other => Err(Error::Domain(format!("unknown regime '{other}'"))),
        }
    }
}

/// Parameters of one simulation setting.
///
/// `sigma2` is the noise *variance*; the additive noise has standard
/// deviation `sqrt(sigma2)`. Zero is allowed and means noiseless.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RegimeSpec {
    pub regime: Regime,
    pub alpha: f64,
    pub n: usize,
    pub p: usize,
    pub sigma2: f64,
}

impl RegimeSpec {
    pub fn validate(&self) -> Result<()> {
        if !self.alpha.is_finite() || self.alpha <= 0.0 {
            return Err(Error::Domain("alpha must be positive".into()));
        }
        if !self.sigma2.is_finite() || self.sigma2 < 0.0 {
            return Err(Error::Domain("sigma2 must be finite and >= 0".into()));
        }
        if self.p < 2 {
            return Err(Error::Domain("p must be at least 2".into()));
        }
        match self.regime {
            Regime::S1 | Regime::S2 => {
                if self.n < 2 || !self.n.is_multiple_of(2) {
                    return Err(Error::Domain(
                        "S1/S2 need an even n >= 2 (half the samples are informative)".into(),
                    ));
                }
            }
            Regime::S3 | Regime::S4 => {
                if self.n < 4 {
                    return Err(Error::Domain(
                        "S3/S4 need n >= 4 (three informative samples plus the rest)".into(),
                    ));
                }
            }
        }
        Ok(())
    }
}

/// The slope/intercept draws behind one generated signal matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct RegimeDraw {
    pub alphas: Vec<f64>,
    pub betas: Vec<f64>,
}

/// Generates one signal matrix for the regime, returning the drawn
/// parameters alongside. Column index `j` runs 1..=p inside the formulas:
///
/// * S1/S3: `theta[i][j] = ln(1 + j * alpha_i) + beta_i`
/// * S2/S4: `theta[i][j] = j * alpha_i + beta_i`
///
/// Informative rows draw `alpha_i ~ U(alpha/2, alpha)`; the rest draw
/// `U(0, 0.01)` in the logarithmic regimes and `U(0, alpha/10)` in the
/// linear ones. All rows draw `beta_i ~ U(1, 3)`.
pub fn generate_regime_with(
    spec: &RegimeSpec,
    rng: &mut SimRng,
) -> Result<(DataMatrix<f64>, RegimeDraw)> {
    spec.validate()?;
    let n = spec.n;
    let informative = spec.regime.informative_rows(n);
    let mut alphas = Vec::with_capacity(n);
    for i in 0..n {
        let a = if i < informative {
            rng.uniform_in(spec.alpha / 2.0, spec.alpha)
        } else if spec.regime.is_logarithmic() {
            rng.uniform_in(0.0, 0.01)
        } else {
            rng.uniform_in(0.0, spec.alpha / 10.0)
        };
        alphas.push(a);
    }
    let betas: Vec<f64> = (0..n).map(|_| rng.uniform_in(1.0, 3.0)).collect();

    let log_growth = spec.regime.is_logarithmic();
    let theta = DataMatrix::from_fn(n, spec.p, |i, j| {
        let jj = (j + 1) as f64;
        if log_growth {
            (jj * alphas[i]).ln_1p() + betas[i]
        } else {
            jj * alphas[i] + betas[i]
        }
    })?;
    Ok((theta, RegimeDraw { alphas, betas }))
}

/// Seeded wrapper around [`generate_regime_with`].
pub fn generate_regime(spec: &RegimeSpec, seed: u64) -> Result<(DataMatrix<f64>, RegimeDraw)> {
    generate_regime_with(spec, &mut SimRng::new(seed))
}

/// Adds i.i.d. centred Gaussian noise of variance `sigma2`, drawn row-major
/// from `rng` (polar Box-Muller; see [`crate::rng`]). `sigma2 = 0` returns
/// the input unchanged and consumes no randomness.
pub fn add_noise_with<F: Scalar>(
    theta: &DataMatrix<F>,
    sigma2: f64,
    rng: &mut SimRng,
) -> Result<DataMatrix<F>> {
    if !sigma2.is_finite() || sigma2 < 0.0 {
        return Err(Error::Domain("sigma2 must be finite and >= 0".into()));
    }
    if sigma2 == 0.0 {
        return Ok(theta.clone());
    }
    let sd = sigma2.sqrt();
    // Row-major fill with a single pass over the stream.
    let mut rows = Vec::with_capacity(theta.n());
    for i in 0..theta.n() {
        let mut row = Vec::with_capacity(theta.p());
        for j in 0..theta.p() {
            row.push(theta.get(i, j) + F::cast(sd * rng.normal()));
        }
        rows.push(row);
    }
    DataMatrix::from_rows(&rows)
}

/// Seeded wrapper around [`add_noise_with`].
pub fn add_noise<F: Scalar>(theta: &DataMatrix<F>, sigma2: f64, seed: u64) -> Result<DataMatrix<F>> {
    add_noise_with(theta, sigma2, &mut SimRng::new(seed))
}

/// Signal-strength summary of a matrix:
///
/// * `gamma`  — local minimal signal gap,
/// * `lambda` — global signal strength,
/// * `xi`     — local maximal signal gap (largest consecutive column
///   difference of the centered signal),
/// * `sigma`  — the noise level the quantities are to be compared against.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SignalQuantities<F: Scalar> {
    pub gamma: F,
    pub lambda: F,
    pub xi: F,
    pub sigma: F,
}

/// Closed-form quantities for a linear growth signal:
/// `gamma = ||a|| * min gap(eta)`, `lambda = ||a||^2 * sum (eta - mean)^2`,
/// `xi = ||a|| * max consecutive gap(eta)`.
pub fn signal_quantities_linear<F: Scalar>(
    spec: &LinearGrowthSpec<F>,
    sigma: F,
) -> Result<SignalQuantities<F>> {
    spec.validate()?;
    let a_norm_sq: F = spec.a.iter().map(|&x| x * x).sum();
    let a_norm = a_norm_sq.sqrt();

    // eta is sorted, so the min/max pairwise gaps are consecutive gaps.
    let mut min_gap = F::infinity();
    let mut max_gap = F::zero();
    for w in spec.eta.windows(2) {
        let gap = w[1] - w[0];
        min_gap = min_gap.min(gap);
        max_gap = max_gap.max(gap);
    }
    let eta_mean = spec.eta.iter().copied().sum::<F>() / F::from_count(spec.p());
    let spread: F = spec
        .eta
        .iter()
        .map(|&e| (e - eta_mean) * (e - eta_mean))
        .sum();

    Ok(SignalQuantities {
        gamma: a_norm * min_gap,
        lambda: a_norm_sq * spread,
        xi: a_norm * max_gap,
        sigma,
    })
}

/// Spectral quantities of a general signal matrix: with `T = row_center(theta)`
/// and singular values `s1 >= s2`,
/// `gamma = s1 * min_{i<j} |v1_i - v1_j|`, `lambda = s1^2 - s2^2`, and
/// `xi = max_i ||T_col(i) - T_col(i+1)||`. A centered zero matrix yields all
/// zeros.
pub fn signal_quantities_general<F: Scalar>(
    theta: &DataMatrix<F>,
    sigma: F,
    tol: F,
) -> Result<SignalQuantities<F>> {
    let centered = row_center(theta);
    let zero = centered.array().iter().all(|&v| v == F::zero());
    if zero {
        return Ok(SignalQuantities {
            gamma: F::zero(),
            lambda: F::zero(),
            xi: F::zero(),
            sigma,
        });
    }

    let k = 2.min(theta.n().min(theta.p()));
    let svd = top_svd(&centered, k, tol)?;
    let s1 = svd.singular_values[0];
    let s2 = if k > 1 { svd.singular_values[1] } else { F::zero() };

    // Min pairwise |v1_i - v1_j| equals the min consecutive gap of the
    // sorted components.
    let mut v1: Vec<F> = svd.right_vectors.column(0).to_vec();
    v1.sort_by(|a, b| a.partial_cmp(b).expect("finite"));
    let min_gap = v1
        .windows(2)
        .map(|w| w[1] - w[0])
        .fold(F::infinity(), F::min);

    let xi = (0..theta.p() - 1)
        .map(|j| {
            let a = centered.column(j);
            let b = centered.column(j + 1);
            a.iter()
                .zip(b.iter())
                .map(|(&x, &y)| (x - y) * (x - y))
                .sum::<F>()
                .sqrt()
        })
        .fold(F::zero(), F::max);

    Ok(SignalQuantities {
        gamma: s1 * min_gap,
        lambda: s1 * s1 - s2 * s2,
        xi,
        sigma,
    })
}

/// Qualitative risk-bound curve (constants set to 1): the maximum of a
/// polynomial floor `p^-(c+2)` and a clipped tail term
/// `min(1, sigma/(p*gamma) * [exp(-gamma^2/(2 sigma^2)) when gamma/sigma >= 1])`.
///
/// Equals the dominant regime expression in each of the three ranges of
/// `gamma/sigma` and is nonincreasing in `gamma` throughout; at
/// `gamma/sigma >= sqrt(2(c+1) ln p)` it returns exactly `p^-(c+2)`.
pub fn risk_bound(gamma: f64, sigma: f64, p: usize, c: f64) -> Result<f64> {
    if !sigma.is_finite() || sigma <= 0.0 {
        return Err(Error::Domain("sigma must be positive".into()));
    }
    if p < 2 {
        return Err(Error::Domain("p must be at least 2".into()));
    }
    if !c.is_finite() || c <= 0.0 {
        return Err(Error::Domain("c must be positive".into()));
    }
    if !gamma.is_finite() || gamma < 0.0 {
        return Err(Error::Domain("gamma must be nonnegative".into()));
    }
    let pf = p as f64;
    let poly = pf.powf(-(c + 2.0));
    let ratio = gamma / sigma;
    let tail = if gamma == 0.0 {
        1.0
    } else {
        let base = sigma / (pf * gamma);
        let t = if ratio >= 1.0 {
            base * (-ratio * ratio / 2.0).exp()
        } else {
            base
        };
        t.min(1.0)
    };
    Ok(tail.max(poly))
}

/// Which near-threshold adversarial construction to build.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HardInstanceKind {
    /// Equispaced linear signal at the exact-recovery threshold scale,
    /// paired with the identity or one adjacent transposition.
    ExactLb,
    /// Uniform-slope signal with gap `t`, paired with the identity.
    PartialLb,
}

/// Builds the adversarial instance family.
///
/// `ExactLb`: slopes all 1, `eta_j = j * delta` with
/// `delta = sigma/4 * sqrt(ln p / n)`, paired with the identity when
/// `which = 0` and with the adjacent transposition of positions
/// `(which - 1, which)` otherwise. The instance has
/// `gamma = sigma/4 * sqrt(ln p)`.
///
/// `PartialLb`: slopes all `1/sqrt(320 n)`, `eta = (t, 2t, ..., pt)`
/// (requires `t >= 2 sigma`), paired with the identity.
pub fn hard_instance<F: Scalar>(
    p: usize,
    n: usize,
    sigma: F,
    kind: HardInstanceKind,
    which: usize,
    t: F,
) -> Result<(DataMatrix<F>, Permutation)> {
    if p < 2 || n < 1 {
        return Err(Error::Domain("need p >= 2 and n >= 1".into()));
    }
    if sigma <= F::zero() || !sigma.is_finite() {
        return Err(Error::Domain("sigma must be positive".into()));
    }
    match kind {
        HardInstanceKind::ExactLb => {
            if which >= p {
                return Err(Error::Domain(format!(
                    "which = {which} out of range 0..{p}"
                )));
            }
            let delta =
                sigma / F::cast(4.0) * (F::from_count(p).ln() / F::from_count(n)).sqrt();
            let spec = LinearGrowthSpec {
                a: vec![F::one(); n],
                b: vec![F::zero(); n],
                eta: (0..p).map(|j| F::from_count(j) * delta).collect(),
            };
            let theta = generate_linear(&spec)?;
            let pi = if which == 0 {
                Permutation::identity(p)
            } else {
                Permutation::transposition(p, which - 1, which)?
            };
            Ok((theta, pi))
        }
        HardInstanceKind::PartialLb => {
            if t < F::cast(2.0) * sigma {
                return Err(Error::Domain(
                    "partial-recovery instance needs t >= 2 sigma".into(),
                ));
            }
            let slope = F::one() / (F::cast(320.0) * F::from_count(n)).sqrt();
            let spec = LinearGrowthSpec {
                a: vec![slope; n],
                b: vec![F::zero(); n],
                eta: (1..=p).map(|j| F::from_count(j) * t).collect(),
            };
            Ok((generate_linear(&spec)?, Permutation::identity(p)))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn linear_generator_examples() {
        let spec = LinearGrowthSpec::new(vec![1.0], vec![0.0], vec![0.0, 1.0, 2.0]).unwrap();
        let theta = generate_linear(&spec).unwrap();
        assert_eq!(theta.row(0).to_vec(), vec![0.0, 1.0, 2.0]);

        let flat = LinearGrowthSpec::new(vec![0.0, 0.0], vec![3.0, 5.0], vec![0.0, 9.0]).unwrap();
        let theta = generate_linear(&flat).unwrap();
        assert_eq!(theta.row(0).to_vec(), vec![3.0, 3.0]);
        assert_eq!(theta.row(1).to_vec(), vec![5.0, 5.0]);
    }

    #[test]
    fn linear_spec_validation() {
        assert!(LinearGrowthSpec::new(vec![1.0], vec![-0.1], vec![0.0, 1.0]).is_err());
        assert!(LinearGrowthSpec::new(vec![1.0], vec![0.0], vec![1.0, 0.5]).is_err());
        assert!(LinearGrowthSpec::new(vec![1.0, 2.0], vec![0.0], vec![0.0, 1.0]).is_err());
    }

    #[test]
    fn regime_rows_are_nondecreasing_and_nonnegative() {
        for regime in [Regime::S1, Regime::S2, Regime::S3, Regime::S4] {
            let spec = RegimeSpec {
                regime,
                alpha: 0.15,
                n: 8,
                p: 12,
                sigma2: 0.01,
            };
            for seed in 0..50 {
                let (theta, _) = generate_regime(&spec, seed).unwrap();
                for i in 0..theta.n() {
                    let row = theta.row(i);
                    assert!(row.iter().all(|&v| v >= 0.0));
                    for j in 1..theta.p() {
                        assert!(row[j] >= row[j - 1]);
                    }
                }
            }
        }
    }

    #[test]
    fn regime_draw_split_counts() {
        let spec = RegimeSpec {
            regime: Regime::S3,
            alpha: 0.2,
            n: 10,
            p: 5,
            sigma2: 0.01,
        };
        for seed in 0..200 {
            let (_, draw) = generate_regime(&spec, seed).unwrap();
            for &a in &draw.alphas[..3] {
                assert!((0.1..0.2).contains(&a), "informative slope {a}");
            }
            for &a in &draw.alphas[3..] {
                assert!((0.0..0.01).contains(&a), "background slope {a}");
            }
            for &b in &draw.betas {
                assert!((1.0..3.0).contains(&b));
            }
        }
    }

    #[test]
    fn degenerate_draw_matches_generate_linear() {
        // With every slope forced to a common constant, S2 reduces to the
        // linear generator with eta = (1, ..., p).
        let c = 0.3;
        let betas = [1.5, 2.5];
        let spec = LinearGrowthSpec::new(
            vec![c, c],
            betas.to_vec(),
            (1..=4).map(|j| j as f64).collect(),
        )
        .unwrap();
        let theta = generate_linear(&spec).unwrap();
        for (i, beta) in betas.iter().enumerate() {
            for j in 0..4 {
                assert_abs_diff_eq!(
                    theta.get(i, j),
                    (j + 1) as f64 * c + beta,
                    epsilon = 1e-15
                );
            }
        }
    }

    #[test]
    fn noise_zero_variance_is_identity() {
        let theta = DataMatrix::from_rows(&[vec![1.0, 2.0, 3.0]]).unwrap();
        let noisy = add_noise(&theta, 0.0, 9).unwrap();
        assert_eq!(noisy, theta);
    }

    #[test]
    fn noise_is_seed_deterministic() {
        let theta = DataMatrix::from_rows(&[vec![1.0, 2.0, 3.0], vec![0.0, 0.5, 1.0]]).unwrap();
        let a = add_noise(&theta, 0.25, 1234).unwrap();
        let b = add_noise(&theta, 0.25, 1234).unwrap();
        assert_eq!(a, b);
        let c = add_noise(&theta, 0.25, 1235).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn noise_moments_match() {
        // 10^6 draws: sample mean within 4 SE of 0, sample variance within
        // 4 SE of sigma^2.
        let n = 1_000_000usize;
        let sigma2: f64 = 0.49;
        let sd = sigma2.sqrt();
        let mut rng = SimRng::new(2024);
        let mut sum = 0.0;
        let mut sumsq = 0.0;
        for _ in 0..n {
            let z = sd * rng.normal();
            sum += z;
            sumsq += z * z;
        }
        let mean = sum / n as f64;
        let var = sumsq / n as f64 - mean * mean;
        let se_mean = sd / (n as f64).sqrt();
        let se_var = sigma2 * (2.0 / n as f64).sqrt();
        assert!(mean.abs() < 4.0 * se_mean, "mean {mean} vs se {se_mean}");
        assert!((var - sigma2).abs() < 4.0 * se_var, "var {var} vs {sigma2}");
    }

    #[test]
    fn quantities_linear_reference_values() {
        let spec =
            LinearGrowthSpec::new(vec![3.0, 4.0], vec![0.0, 0.0], vec![0.0, 1.0, 2.0]).unwrap();
        let q = signal_quantities_linear(&spec, 1.0).unwrap();
        assert_abs_diff_eq!(q.gamma, 5.0, epsilon = 1e-12);
        assert_abs_diff_eq!(q.lambda, 50.0, epsilon = 1e-12);
        assert_abs_diff_eq!(q.xi, 5.0, epsilon = 1e-12);
    }

    #[test]
    fn quantities_linear_edge_cases() {
        let repeated =
            LinearGrowthSpec::new(vec![1.0], vec![0.0], vec![0.0, 1.0, 1.0, 2.0]).unwrap();
        assert_eq!(signal_quantities_linear(&repeated, 1.0).unwrap().gamma, 0.0);

        let zero_slope =
            LinearGrowthSpec::new(vec![0.0, 0.0], vec![1.0, 2.0], vec![0.0, 1.0]).unwrap();
        let q = signal_quantities_linear(&zero_slope, 1.0).unwrap();
        assert_eq!(q.gamma, 0.0);
        assert_eq!(q.lambda, 0.0);
    }

    #[test]
    fn quantities_general_zero_matrix() {
        let theta = DataMatrix::from_rows(&[vec![2.0, 2.0, 2.0]]).unwrap();
        let q = signal_quantities_general(&theta, 1.0, 1e-10).unwrap();
        assert_eq!((q.gamma, q.lambda, q.xi), (0.0, 0.0, 0.0));
    }

    #[test]
    fn quantities_general_identical_columns_give_zero_gamma() {
        let theta =
            DataMatrix::from_rows(&[vec![0.0, 1.0, 1.0, 2.0], vec![0.5, 2.0, 2.0, 3.0]]).unwrap();
        let q: SignalQuantities<f64> = signal_quantities_general(&theta, 1.0, 1e-12).unwrap();
        assert!(q.gamma.abs() < 1e-10);
    }

    #[test]
    fn quantities_general_xi_matches_bruteforce() {
        let theta = DataMatrix::from_rows(&[
        vec![0.1, 0.9, 1.7, 2.0, 4.0, 4.5],
            vec![1.0, 1.2, 3.0, 3.1, 3.2, 6.0],
            vec![0.0, 0.0, 0.5, 0.6, 0.7, 0.7],
            vec![2.0, 2.5, 2.6, 2.9, 3.4, 3.9],
        ])
        .unwrap();
        let centered: DataMatrix<f64> = row_center(&theta);
        let mut expected: f64 = 0.0;
        for j in 0..theta.p() - 1 {
            let d: f64 = (0..theta.n())
                .map(|i| (centered.get(i, j) - centered.get(i, j + 1)).powi(2))
                .sum::<f64>()
                .sqrt();
            expected = expected.max(d);
        }
        let q = signal_quantities_general(&theta, 1.0, 1e-12).unwrap();
        assert_abs_diff_eq!(q.xi, expected, epsilon = 1e-12);
    }

    #[test]
    fn risk_bound_branches() {
        let p = 50;
        let c = 1.0;
        let sigma = 1.0;
        // Strong-signal branch returns the polynomial floor exactly.
        let hi = (2.0 * (c + 1.0) * (p as f64).ln()).sqrt();
        let bound = risk_bound(hi * sigma, sigma, p, c).unwrap();
        assert_abs_diff_eq!(bound, (p as f64).powf(-(c + 2.0)), epsilon = 1e-15);
        // Vanishing gap saturates at 1.
        assert_eq!(risk_bound(0.0, sigma, p, c).unwrap(), 1.0);
        assert_eq!(risk_bound(1e-12, sigma, p, c).unwrap(), 1.0);
        // Monotone between the reference ratios.
        assert!(risk_bound(1.0, sigma, p, c).unwrap() >= risk_bound(3.0, sigma, p, c).unwrap());
    }

    #[test]
    fn risk_bound_is_nonincreasing_on_a_grid() {
        let p = 40;
        let c = 0.5;
        let mut last = f64::INFINITY;
        for k in 0..200 {
            let gamma = 0.05 * k as f64;
            let b = risk_bound(gamma, 1.0, p, c).unwrap();
            assert!(
                b <= last + 1e-15,
                "bound increased at gamma = {gamma}: {b} > {last}"
            );
            last = b;
        }
    }

    #[test]
    fn risk_bound_domain_errors() {
        assert!(risk_bound(1.0, 0.0, 10, 1.0).is_err());
        assert!(risk_bound(1.0, -1.0, 10, 1.0).is_err());
        assert!(risk_bound(1.0, 1.0, 1, 1.0).is_err());
        assert!(risk_bound(1.0, 1.0, 10, 0.0).is_err());
    }

    #[test]
    fn hard_instance_exact_reference() {
        let (theta, pi) = hard_instance(10, 4, 1.0, HardInstanceKind::ExactLb, 0, 0.0).unwrap();
        assert!(pi.is_identity());
        // gamma should equal sigma/4 * sqrt(ln p).
        let delta = 0.25 * (10f64.ln() / 4.0).sqrt();
        let spec = LinearGrowthSpec::new(
            vec![1.0; 4],
            vec![0.0; 4],
            (0..10).map(|j| j as f64 * delta).collect(),
        )
        .unwrap();
        let q = signal_quantities_linear(&spec, 1.0).unwrap();
        assert_abs_diff_eq!(q.gamma, 0.25 * 10f64.ln().sqrt(), epsilon = 1e-12);
        assert_eq!(theta.get(0, 1), delta);

        let (_, pi3) = hard_instance(10, 4, 1.0, HardInstanceKind::ExactLb, 3, 0.0).unwrap();
        assert_eq!(pi3.as_slice(), &[0, 1, 3, 2, 4, 5, 6, 7, 8, 9]);
        assert!(hard_instance(10, 4, 1.0, HardInstanceKind::ExactLb, 10, 0.0).is_err());
    }

    #[test]
    fn hard_instance_partial_reference() {
        let sigma = 0.5;
        let t = 2.0 * sigma;
        let (theta, pi) = hard_instance(6, 5, sigma, HardInstanceKind::PartialLb, 0, t).unwrap();
        assert!(pi.is_identity());
        let slope = 1.0 / (320.0 * 5.0f64).sqrt();
        assert_abs_diff_eq!(theta.get(0, 0), slope * t, epsilon = 1e-15);
        // gamma tracks t up to the fixed slope norm: ||a|| * t = t / sqrt(320).
        let spec = LinearGrowthSpec::new(
            vec![slope; 5],
            vec![0.0; 5],
            (1..=6).map(|j| j as f64 * t).collect(),
        )
        .unwrap();
        let q = signal_quantities_linear(&spec, sigma).unwrap();
        assert_abs_diff_eq!(q.gamma, t / 320.0f64.sqrt(), epsilon = 1e-12);

        assert!(hard_instance(6, 5, sigma, HardInstanceKind::PartialLb, 0, 0.9).is_err());
    }
}
