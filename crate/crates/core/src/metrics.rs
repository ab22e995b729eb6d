//! Losses between permutations: exact (0-1), Kendall's tau, and Spearman's
//! footrule, plus reversal-aware evaluation.
//!
//! Kendall's tau here is the *normalized distance*: the number of discordant
//! pairs divided by `C(p, 2)`, so it is 0 at equality and 1 at total
//! reversal. The normalized footrule `2/(p(p-1)) * sum |pi1(i) - pi2(i)|`
//! shares the same denominator, which is what makes the Diaconis-Graham
//! sandwich `tau <= rho <= 2 tau` hold exactly as stated.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::perm::Permutation;

/// Partial/exact recovery metrics selectable in configs and on the CLI.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Metric {
    ZeroOne,
    Kendall,
    Footrule,
}

impl Metric {
    pub const ALL: [Metric; 3] = [Metric::ZeroOne, Metric::Kendall, Metric::Footrule];

    pub fn name(self) -> &'static str {
        match self {
            Metric::ZeroOne => "zero_one",
            Metric::Kendall => "kendall",
            Metric::Footrule => "footrule",
        }
    }

    pub fn evaluate(self, a: &Permutation, b: &Permutation) -> Result<f64> {
        match self {
            Metric::ZeroOne => zero_one_loss(a, b).map(f64::from),
            Metric::Kendall => kendall_tau(a, b),
            Metric::Footrule => spearman_footrule(a, b),
        }
    }
}

impl std::str::FromStr for Metric {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "zero_one" => Ok(Metric::ZeroOne),
            "kendall" => Ok(Metric::Kendall),
            "footrule" => Ok(Metric::Footrule),
            other => Err(Error::Domain(format!("unknown metric '{other}'"))),
        }
    }
}

fn check_sizes(a: &Permutation, b: &Permutation) -> Result<usize> {
    if a.len() != b.len() {
        return Err(Error::Dimension(format!(
            "permutations of sizes {} and {} are not comparable",
            a.len(),
            b.len()
        )));
    }
    Ok(a.len())
}

/// 0-1 loss: 0 iff the permutations are identical componentwise.
pub fn zero_one_loss(est: &Permutation, truth: &Permutation) -> Result<u8> {
    check_sizes(est, truth)?;
    Ok(u8::from(est != truth))
}

/// Counts inversions of `seq` by merge sort, consuming it.
fn count_inversions(seq: &mut [usize], buf: &mut [usize]) -> u64 {
    let n = seq.len();
    if n < 2 {
        return 0;
    }
    let mid = n / 2;
    let (left, right) = seq.split_at_mut(mid);
    let mut inversions = count_inversions(left, buf) + count_inversions(right, buf);

    let merged = &mut buf[..n];
    let (mut i, mut j) = (0, 0);
    for slot in merged.iter_mut() {
        if i < left.len() && (j >= right.len() || left[i] <= right[j]) {
            *slot = left[i];
            i += 1;
        } else {
            // right[j] jumps ahead of the remaining left entries
            inversions += (left.len() - i) as u64;
            *slot = right[j];
            j += 1;
        }
    }
    seq.copy_from_slice(merged);
    inversions
}

fn discordant_pairs_fast(a: &Permutation, b: &Permutation) -> u64 {
    // Relabel: position k of the sequence holds a(b^-1(k)); inversions of
    // that sequence are exactly the discordant pairs of (a, b).
    let p = a.len();
    let b_inv = b.inverse();
    let mut seq: Vec<usize> = (0..p).map(|k| a[b_inv[k]]).collect();
    let mut buf = vec![0usize; p];
    count_inversions(&mut seq, &mut buf)
}

fn pair_count(p: usize) -> f64 {
    (p as f64) * (p as f64 - 1.0) / 2.0
}

/// Normalized Kendall's tau distance in `O(p log p)`.
pub fn kendall_tau(a: &Permutation, b: &Permutation) -> Result<f64> {
    let p = check_sizes(a, b)?;
    if p < 2 {
        return Err(Error::Domain("kendall_tau needs p >= 2".into()));
    }
    Ok(discordant_pairs_fast(a, b) as f64 / pair_count(p))
}

/// Normalized Kendall's tau by direct `O(p^2)` enumeration of discordant
/// pairs; the independent cross-check for [`kendall_tau`].
pub fn kendall_tau_bruteforce(a: &Permutation, b: &Permutation) -> Result<f64> {
    let p = check_sizes(a, b)?;
    if p < 2 {
        return Err(Error::Domain("kendall_tau needs p >= 2".into()));
    }
    let mut discordant = 0u64;
    for i in 0..p {
        for j in (i + 1)..p {
            let da = a[i] < a[j];
            let db = b[i] < b[j];
            if da != db {
                discordant += 1;
            }
        }
    }
    Ok(discordant as f64 / pair_count(p))
}

/// Normalized Spearman's footrule `2/(p(p-1)) * sum_i |a(i) - b(i)|`.
///
/// Ranges over `[0, p/(p-1)]`: slightly above 1 at total reversal.
pub fn spearman_footrule(a: &Permutation, b: &Permutation) -> Result<f64> {
    let p = check_sizes(a, b)?;
    if p < 2 {
        return Err(Error::Domain("spearman_footrule needs p >= 2".into()));
    }
    let total: u64 = (0..p)
        .map(|i| (a[i] as i64 - b[i] as i64).unsigned_abs())
        .sum();
    Ok(total as f64 / pair_count(p))
}

/// Evaluates `metric` against both `truth` and its reversal and returns the
/// minimum, flagging whether the reversal attained it (ties favor `false`).
pub fn loss_up_to_reversal(
    est: &Permutation,
    truth: &Permutation,
    metric: Metric,
) -> Result<(f64, bool)> {
    let direct = metric.evaluate(est, truth)?;
    let reversed = metric.evaluate(est, &truth.reverse())?;
    if reversed < direct {
        Ok((reversed, true))
    } else {
        Ok((direct, false))
    }
}

/// The simulation-harness evaluation: compares the *rankings* (inverse
/// permutations) of the estimate and of each truth orientation, minimized
/// over `{truth, reverse(truth)}`.
///
/// Ranking-space losses are invariant to relabeling the items by a common
/// permutation, so the measured loss does not depend on which hidden shuffle
/// produced the data — an estimate that misranks one adjacent column pair
/// scores `1/C(p,2)` no matter where that pair ended up. Comparing the
/// one-line forms directly would not have this property for the pairwise
/// metrics. For the 0-1 loss the two readings agree.
pub fn ranking_loss_up_to_reversal(
    est: &Permutation,
    truth: &Permutation,
    metric: Metric,
) -> Result<(f64, bool)> {
    let est_ranking = est.inverse();
    let direct = metric.evaluate(&est_ranking, &truth.inverse())?;
    let reversed = metric.evaluate(&est_ranking, &truth.reverse().inverse())?;
    if reversed < direct {
        Ok((reversed, true))
    } else {
        Ok((direct, false))
    }
}

/// All three losses for one (estimate, truth) pair.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LossReport {
    pub zero_one: u8,
    pub kendall_tau: f64,
    pub spearman_footrule: f64,
    /// True when reversing the truth strictly reduced the tau distance.
    pub reversal_used: bool,
}

impl LossReport {
    pub fn direct(est: &Permutation, truth: &Permutation) -> Result<Self> {
        Ok(Self {
            zero_one: zero_one_loss(est, truth)?,
            kendall_tau: kendall_tau(est, truth)?,
            spearman_footrule: spearman_footrule(est, truth)?,
            reversal_used: false,
        })
    }

    /// Each metric is minimized over `{truth, reverse(truth)}` independently;
    /// the Diaconis-Graham sandwich survives the independent minimization.
    pub fn up_to_reversal(est: &Permutation, truth: &Permutation) -> Result<Self> {
        let (zero_one, _) = loss_up_to_reversal(est, truth, Metric::ZeroOne)?;
        let (tau, reversal_used) = loss_up_to_reversal(est, truth, Metric::Kendall)?;
        let (footrule, _) = loss_up_to_reversal(est, truth, Metric::Footrule)?;
        Ok(Self {
            zero_one: u8::from(zero_one != 0.0),
            kendall_tau: tau,
            spearman_footrule: footrule,
            reversal_used,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::SimRng;

    fn perm(v: &[usize]) -> Permutation {
        Permutation::from_mapping(v.to_vec()).unwrap()
    }

    #[test]
    fn zero_one_basics() {
        let id = Permutation::identity(3);
        assert_eq!(zero_one_loss(&id, &id).unwrap(), 0);
        assert_eq!(zero_one_loss(&perm(&[1, 0, 2]), &id).unwrap(), 1);
        // Reversal is not free in the raw loss.
        assert_eq!(zero_one_loss(&id.reverse(), &id).unwrap(), 1);
    }

    #[test]
    fn tau_zero_at_equality_one_at_total_reversal() {
        let mut rng = SimRng::new(5);
        for p in [2usize, 3, 7, 20] {
            let pi = Permutation::random(p, &mut rng);
            assert_eq!(kendall_tau(&pi, &pi).unwrap(), 0.0);
            // The reverse-ordered counterpart flips every pair: it maps each
            // image v to p-1-v.
            let complement =
                Permutation::from_mapping(pi.iter().map(|v| p - 1 - v).collect()).unwrap();
            assert_eq!(kendall_tau(&pi, &complement).unwrap(), 1.0);
        }
    }

    #[test]
    fn tau_single_discordant_pair() {
        let est = perm(&[0, 2, 1, 3]);
        let id = Permutation::identity(4);
        let tau = kendall_tau(&est, &id).unwrap();
        assert!((tau - 1.0 / 6.0).abs() < 1e-15);
        assert_eq!(tau, kendall_tau_bruteforce(&est, &id).unwrap());
    }

    #[test]
    fn footrule_reference_value() {
        // p = 2 full swap: 2/(2*1) * (1 + 1) = 2, and rho <= 2 tau holds.
        let rho = spearman_footrule(&perm(&[1, 0]), &perm(&[0, 1])).unwrap();
        assert_eq!(rho, 2.0);
        let tau = kendall_tau(&perm(&[1, 0]), &perm(&[0, 1])).unwrap();
        assert!(tau <= rho && rho <= 2.0 * tau);
    }

    #[test]
    fn size_mismatch_everywhere() {
        let a = Permutation::identity(3);
        let b = Permutation::identity(4);
        assert!(zero_one_loss(&a, &b).is_err());
        assert!(kendall_tau(&a, &b).is_err());
        assert!(kendall_tau_bruteforce(&a, &b).is_err());
        assert!(spearman_footrule(&a, &b).is_err());
        assert!(loss_up_to_reversal(&a, &b, Metric::Kendall).is_err());
    }

    #[test]
    fn reversal_flag_semantics() {
        let truth = perm(&[2, 0, 1, 3]);
        let (loss, used) = loss_up_to_reversal(&truth.reverse(), &truth, Metric::Kendall).unwrap();
        assert_eq!(loss, 0.0);
        assert!(used);
        let (loss, used) = loss_up_to_reversal(&truth, &truth, Metric::Kendall).unwrap();
        assert_eq!(loss, 0.0);
        assert!(!used);
    }

    #[test]
    fn reversal_picks_the_closer_orientation() {
        // est one adjacent swap away from truth, far from the reversal.
        let truth = Permutation::identity(6);
        let est = perm(&[1, 0, 2, 3, 4, 5]);
        let (loss, used) = loss_up_to_reversal(&est, &truth, Metric::Kendall).unwrap();
        assert!((loss - 1.0 / 15.0).abs() < 1e-15);
        assert!(!used);
    }

    #[test]
    fn fast_matches_bruteforce_on_random_pairs() {
        let mut rng = SimRng::new(17);
        for _ in 0..200 {
            let p = 2 + rng.below(60);
            let a = Permutation::random(p, &mut rng);
            let b = Permutation::random(p, &mut rng);
            assert_eq!(
                kendall_tau(&a, &b).unwrap(),
                kendall_tau_bruteforce(&a, &b).unwrap()
            );
        }
    }

    #[test]
    fn ranking_loss_is_shuffle_invariant() {
        // Relabeling both permutations through a hidden shuffle leaves the
        // ranking-space loss unchanged: est', truth' = shuffle o est,
        // shuffle o truth give the same value.
        let mut rng = SimRng::new(31);
        for _ in 0..200 {
            let p = 2 + rng.below(30);
            let est = Permutation::random(p, &mut rng);
            let truth = Permutation::random(p, &mut rng);
            let shuffle = Permutation::random(p, &mut rng);
            let est2 = shuffle.compose(&est).unwrap();
            let truth2 = shuffle.compose(&truth).unwrap();
            for metric in Metric::ALL {
                let (a, _) = ranking_loss_up_to_reversal(&est, &truth, metric).unwrap();
                let (b, _) = ranking_loss_up_to_reversal(&est2, &truth2, metric).unwrap();
                assert_eq!(a, b, "metric {} p {}", metric.name(), p);
            }
        }
    }

    #[test]
    fn ranking_loss_matches_direct_loss_at_identity_truth() {
        let mut rng = SimRng::new(37);
        for _ in 0..100 {
            let p = 2 + rng.below(20);
            let est = Permutation::random(p, &mut rng);
            let id = Permutation::identity(p);
            let (a, _) = ranking_loss_up_to_reversal(&est, &id, Metric::Kendall).unwrap();
            let (b, _) = loss_up_to_reversal(&est, &id, Metric::Kendall).unwrap();
            assert_eq!(a, b);
        }
    }

    #[test]
    fn loss_report_invariants() {
        let mut rng = SimRng::new(23);
        for _ in 0..100 {
            let p = 2 + rng.below(20);
            let a = Permutation::random(p, &mut rng);
            let b = Permutation::random(p, &mut rng);
            for report in [
                LossReport::direct(&a, &b).unwrap(),
                LossReport::up_to_reversal(&a, &b).unwrap(),
            ] {
                assert!(report.kendall_tau <= report.spearman_footrule + 1e-12);
                assert!(report.spearman_footrule <= 2.0 * report.kendall_tau + 1e-12);
                if report.zero_one == 0 {
                    assert_eq!(report.kendall_tau, 0.0);
                }
            }
        }
    }
}
