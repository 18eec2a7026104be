//! Born-rule shot sampling of the four measurement contexts.
//!
//! Each context is sampled from its own shot pool: no joint distribution
//! over F and W outcomes is ever constructed.
//!
//! RNG layout: context `k` (in the order WW, WF, FW, FF) uses ChaCha8
//! seeded with `seed + k` (wrapping), and shot batch `b` of
//! [`BATCH_SIZE`] shots within it uses stream `b`. Outcomes are drawn by
//! inverse CDF over the four product-basis outcomes in fixed order, so the
//! records do not depend on how batches are scheduled.

use std::fmt;
use std::io::{self, Write};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::hilbert::{born_probability, ContextProbabilities, Qubit, StateVector};

/// Shots per RNG stream.
pub const BATCH_SIZE: usize = 1 << 16;

/// Smallest shot count accepted by [`estimate`].
pub const MIN_SHOTS_FOR_ESTIMATE: usize = 100;

/// A pair of compatible measurements, system 1 first.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Context {
    WW,
    WF,
    FW,
    FF,
}

impl Context {
    pub const ALL: [Context; 4] = [Context::WW, Context::WF, Context::FW, Context::FF];

    pub fn index(self) -> usize {
        self as usize
    }

    /// Outcomes of one system's measurement: `[0, 1]` for F, `[a, b]` for W.
    fn side(is_w: bool) -> [Qubit; 2] {
        if is_w {
            [Qubit::A, Qubit::B]
        } else {
            [Qubit::Zero, Qubit::One]
        }
    }

    /// The four joint outcomes in sampling order.
    pub fn outcomes(self) -> [(Qubit, Qubit); 4] {
        let (w1, w2) = match self {
            Context::WW => (true, true),
            Context::WF => (true, false),
            Context::FW => (false, true),
            Context::FF => (false, false),
        };
        let (s1, s2) = (Self::side(w1), Self::side(w2));
        [
            (s1[0], s2[0]),
            (s1[0], s2[1]),
            (s1[1], s2[0]),
            (s1[1], s2[1]),
        ]
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Context::WW => "WW",
            Context::WF => "WF",
            Context::FW => "FW",
            Context::FF => "FF",
        }
    }
}

impl fmt::Display for Context {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One simulated shot.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ShotRecord {
    pub context: Context,
    pub outcome1: Qubit,
    pub outcome2: Qubit,
}

impl fmt::Display for ShotRecord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{},{}", self.context, self.outcome1, self.outcome2)
    }
}

/// Born distribution of the four outcomes of `context`.
pub fn outcome_probabilities(psi: &StateVector, context: Context) -> [f64; 4] {
    context
        .outcomes()
        .map(|(x, y)| born_probability(psi, &StateVector::product(x, y)))
}

struct Sampler {
    cdf: [f64; 4],
    last_possible: usize,
}

impl Sampler {
    fn new(probs: [f64; 4]) -> Self {
        let total: f64 = probs.iter().sum();
        let mut cdf = [0.0; 4];
        let mut acc = 0.0;
        for (c, p) in cdf.iter_mut().zip(&probs) {
            acc += p / total;
            *c = acc;
        }
        let last_possible = probs.iter().rposition(|&p| p > 0.0).unwrap_or(3);
        Self { cdf, last_possible }
    }

    fn draw(&self, u: f64) -> usize {
        self.cdf
            .iter()
            .position(|&c| u < c)
            .unwrap_or(self.last_possible)
            .min(self.last_possible)
    }
}

fn context_rng(seed: u64, context: Context, batch: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(context.index() as u64));
    rng.set_stream(batch as u64);
    rng
}

fn batches(n: usize) -> usize {
    n.div_ceil(BATCH_SIZE)
}

fn batch_len(n: usize, b: usize) -> usize {
    BATCH_SIZE.min(n - b * BATCH_SIZE)
}

/// `n` independent shots of `context` on `psi`.
pub fn sample_context(
    psi: &StateVector,
    context: Context,
    n: usize,
    seed: u64,
) -> Result<Vec<ShotRecord>> {
    if n == 0 {
        return Err(Error::InvalidInput("at least one shot is required".into()));
    }
    let sampler = Sampler::new(outcome_probabilities(psi, context));
    let outcomes = context.outcomes();
    let mut records = Vec::with_capacity(n);
    for b in 0..batches(n) {
        let mut rng = context_rng(seed, context, b);
        for _ in 0..batch_len(n, b) {
            let (outcome1, outcome2) = outcomes[sampler.draw(rng.random::<f64>())];
            records.push(ShotRecord {
                context,
                outcome1,
                outcome2,
            });
        }
    }
    Ok(records)
}

/// Outcome counts of `n` shots, identical to tallying [`sample_context`].
pub fn count_context(
    psi: &StateVector,
    context: Context,
    n: usize,
    seed: u64,
    exec: Exec,
) -> Result<[u64; 4]> {
    if n == 0 {
        return Err(Error::InvalidInput("at least one shot is required".into()));
    }
    let sampler = Sampler::new(outcome_probabilities(psi, context));
    let per_batch = exec.map(batches(n), |b| {
        let mut rng = context_rng(seed, context, b);
        let mut counts = [0u64; 4];
        for _ in 0..batch_len(n, b) {
            counts[sampler.draw(rng.random::<f64>())] += 1;
        }
        counts
    });
    Ok(per_batch.iter().fold([0; 4], |mut acc, c| {
        for (a, x) in acc.iter_mut().zip(c) {
            *a += x;
        }
        acc
    }))
}

/// Empirical estimates of the four paradox probabilities and the
/// inequality slack.
#[derive(Debug, Clone, PartialEq)]
pub struct EstimateReport {
    pub shots_per_context: usize,
    /// Raw counts, indexed `[context][outcome]` in [`Context::ALL`] /
    /// [`Context::outcomes`] order.
    pub counts: [[u64; 4]; 4],
    pub estimates: ContextProbabilities,
    /// `√(p̂(1−p̂)/n)` for `p_wf_a0`, `p_fw_0a`, `p_ff_11`, `p_ww_aa`.
    pub std_errors: [f64; 4],
    /// `p̂_ww − (p̂_wf + p̂_fw + p̂_ff)`.
    pub slack_estimate: f64,
    /// Slack over its standard error. The variance is floored at `1/n²`
    /// so the score stays finite when every estimate is 0 or 1.
    pub slack_z: f64,
}

/// Samples all four contexts with `n` shots each.
pub fn estimate(psi: &StateVector, n: usize, seed: u64) -> Result<EstimateReport> {
    estimate_with(psi, n, seed, Exec::default())
}

pub fn estimate_with(psi: &StateVector, n: usize, seed: u64, exec: Exec) -> Result<EstimateReport> {
    if n < MIN_SHOTS_FOR_ESTIMATE {
        return Err(Error::InvalidInput(format!(
            "at least {MIN_SHOTS_FOR_ESTIMATE} shots per context are required, got {n}"
        )));
    }
    let mut counts = [[0u64; 4]; 4];
    for context in Context::ALL {
        counts[context.index()] = count_context(psi, context, n, seed, exec)?;
    }
    let freq = |c: Context| counts[c.index()][0] as f64 / n as f64;
    // (a,a), (a,0) and (0,a) are outcome 0 of their contexts; (1,1) is outcome 3 of FF
    let estimates = ContextProbabilities {
        p_wf_a0: freq(Context::WF),
        p_fw_0a: freq(Context::FW),
        p_ff_11: counts[Context::FF.index()][3] as f64 / n as f64,
        p_ww_aa: freq(Context::WW),
    };
    let se = |p: f64| (p * (1.0 - p) / n as f64).sqrt();
    let std_errors = [
        se(estimates.p_wf_a0),
        se(estimates.p_fw_0a),
        se(estimates.p_ff_11),
        se(estimates.p_ww_aa),
    ];
    let slack_estimate = estimates.slack();
    Ok(EstimateReport {
        shots_per_context: n,
        counts,
        estimates,
        std_errors,
        slack_estimate,
        slack_z: slack_z(&std_errors, slack_estimate, n),
    })
}

fn slack_z(std_errors: &[f64; 4], slack: f64, n: usize) -> f64 {
    let variance: f64 = std_errors.iter().map(|s| s * s).sum();
    let floor = 1.0 / (n as f64 * n as f64);
    slack / variance.max(floor).sqrt()
}

/// Writes one `context,outcome1,outcome2` line per record.
pub fn write_records<W: Write>(records: &[ShotRecord], mut out: W) -> io::Result<()> {
    for r in records {
        writeln!(out, "{r}")?;
    }
    out.flush()
}
