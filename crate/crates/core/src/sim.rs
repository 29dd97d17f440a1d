//! Randomized round trips: draw messages, encode, decode at every receiver
//! from its side information alone, and compare.
//!
//! Trials run side by side. A [`MessageBatch`] stores one byte lane per
//! message symbol with one entry per trial, so encoding and decoding a symbol
//! touches all trials with a single pass over contiguous memory.

use std::cell::RefCell;
use std::fmt;
use std::str::FromStr;

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::air::AirMatrix;
use crate::codec::{
    complexity_stats, decode_plan_for, encoding_matrix, split_index, DecodeCase, DecodePlan, MessageVector,
    OracleDecoder, SideInfo,
};
use crate::error::{Error, Result};
use crate::field::PrimeField;
use crate::rates::{rate_gap, Rate, RatePair, SniProblem};

/// Identity of the message generator, printed in every report.
pub const GENERATOR: &str =
    "ChaCha8 (rand_chacha 0.3): seed_from_u64(seed), stream = trial index, bytes rejection-sampled mod p";

/// Which decoder(s) a simulation runs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DecoderChoice {
    Plan,
    Oracle,
    Both,
}

impl DecoderChoice {
    fn uses_plan(self) -> bool {
        matches!(self, DecoderChoice::Plan | DecoderChoice::Both)
    }

    fn uses_oracle(self) -> bool {
        matches!(self, DecoderChoice::Oracle | DecoderChoice::Both)
    }
}

impl fmt::Display for DecoderChoice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DecoderChoice::Plan => "plan",
            DecoderChoice::Oracle => "oracle",
            DecoderChoice::Both => "both",
        })
    }
}

impl FromStr for DecoderChoice {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "plan" => Ok(DecoderChoice::Plan),
            "oracle" => Ok(DecoderChoice::Oracle),
            "both" => Ok(DecoderChoice::Both),
            _ => Err(Error::Config(format!("unknown decoder {s:?}; expected plan, oracle or both"))),
        }
    }
}

/// A validated simulation request.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SimConfig {
    problem: SniProblem,
    pair: RatePair,
    trials: usize,
    seed: u64,
    field: PrimeField,
    decoder: DecoderChoice,
}

impl SimConfig {
    /// Fails for zero trials, a pair outside the achievable set, plan
    /// decoding away from GF(2), or a field too large for byte lanes.
    pub fn new(
        problem: SniProblem,
        pair: RatePair,
        trials: usize,
        seed: u64,
        field: PrimeField,
        decoder: DecoderChoice,
    ) -> Result<Self> {
        if trials == 0 {
            return Err(Error::Config("at least one trial is required".into()));
        }
        rate_gap(&pair, &problem)?;
        if decoder.uses_plan() && !field.is_binary() {
            return Err(Error::Config(format!("the plan decoder needs p = 2, got p = {}", field.modulus())));
        }
        check_lane_field(field)?;
        Ok(SimConfig {
            problem,
            pair,
            trials,
            seed,
            field,
            decoder,
        })
    }

    pub fn problem(&self) -> &SniProblem {
        &self.problem
    }

    pub fn pair(&self) -> &RatePair {
        &self.pair
    }

    pub fn trials(&self) -> usize {
        self.trials
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn decoder(&self) -> DecoderChoice {
        self.decoder
    }
}

fn check_lane_field(field: PrimeField) -> Result<()> {
    if field.modulus() > u8::MAX as u32 {
        return Err(Error::Config(format!(
            "simulation stores symbols in bytes and needs p < 256, got p = {}",
            field.modulus()
        )));
    }
    Ok(())
}

/// Receiver `t`'s view of `x`: every component of the messages it knows and
/// nothing else.
pub fn side_info_view<'a>(x: &'a MessageVector, problem: &SniProblem, t: usize) -> Result<SideInfo<'a>> {
    SideInfo::new(x, problem, t)
}

/// Messages for many trials, one lane of `trials` bytes per symbol.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MessageBatch {
    k: usize,
    b: usize,
    field: PrimeField,
    trials: usize,
    lanes: Vec<u8>,
}

impl MessageBatch {
    /// Draws `trials` uniform message vectors. Trial `r` reads stream `r` of
    /// the generator seeded with `seed`, so a trial's messages do not depend
    /// on how many trials run.
    pub fn sample(k: usize, b: usize, field: PrimeField, trials: usize, seed: u64) -> Result<Self> {
        check_lane_field(field)?;
        let len = k * b;
        let p = field.modulus();
        let bound = 256 - 256 % p;
        let mut lanes = vec![0u8; len * trials];
        let mut buf = [0u8; 64];
        for r in 0..trials {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(r as u64);
            let mut idx = 0;
            while idx < len {
                rng.fill_bytes(&mut buf);
                for &byte in buf.iter().filter(|&&v| (v as u32) < bound) {
                    if idx == len {
                        break;
                    }
                    lanes[idx * trials + r] = (byte as u32 % p) as u8;
                    idx += 1;
                }
            }
        }
        Ok(MessageBatch {
            k,
            b,
            field,
            trials,
            lanes,
        })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn b(&self) -> usize {
        self.b
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn trials(&self) -> usize {
        self.trials
    }

    /// The values of flattened symbol `idx` across trials.
    pub fn lane(&self, idx: usize) -> &[u8] {
        &self.lanes[idx * self.trials..(idx + 1) * self.trials]
    }

    /// The messages of one trial.
    pub fn trial(&self, r: usize) -> MessageVector {
        let values = (0..self.k * self.b).map(|i| self.lane(i)[r] as u32).collect();
        MessageVector::from_values(self.k, self.b, self.field, values).expect("lanes hold reduced values")
    }
}

/// Broadcast symbols for every trial of a batch.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CodewordBatch {
    trials: usize,
    lanes: Vec<u8>,
}

impl CodewordBatch {
    pub fn len(&self) -> usize {
        self.lanes.len() / self.trials
    }

    pub fn is_empty(&self) -> bool {
        self.lanes.is_empty()
    }

    pub fn lane(&self, c: usize) -> &[u8] {
        &self.lanes[c * self.trials..(c + 1) * self.trials]
    }
}

/// `y = x · L` for every trial at once.
pub fn encode_batch(air: &AirMatrix, x: &MessageBatch) -> Result<CodewordBatch> {
    if air.m() != x.k * x.b {
        return Err(Error::DimensionMismatch {
            expected: air.m(),
            got: x.k * x.b,
        });
    }
    let lf = LaneField::new(x.field);
    let trials = x.trials;
    let mut lanes = vec![0u8; air.n() * trials];
    for (c, out) in lanes.chunks_exact_mut(trials).enumerate() {
        for &r in air.col_support(c) {
            lf.add(out, x.lane(r as usize));
        }
    }
    Ok(CodewordBatch { trials, lanes })
}

/// Receiver `t`'s view of a batch. Reading a symbol it does not know fails
/// with [`Error::MissingSideInfo`].
#[derive(Debug)]
pub struct SideLanes<'a> {
    x: &'a MessageBatch,
    problem: SniProblem,
    t: usize,
    log: Option<RefCell<Vec<usize>>>,
}

impl<'a> SideLanes<'a> {
    pub fn new(x: &'a MessageBatch, problem: &SniProblem, t: usize) -> Result<Self> {
        if x.k != problem.k() || t >= problem.k() {
            return Err(Error::Precondition(format!("receiver {t} does not fit {problem} with {} messages", x.k)));
        }
        Ok(SideLanes {
            x,
            problem: *problem,
            t,
            log: None,
        })
    }

    /// Records every successful read, for auditing.
    pub fn with_audit(mut self) -> Self {
        self.log = Some(RefCell::new(Vec::new()));
        self
    }

    pub fn receiver(&self) -> usize {
        self.t
    }

    pub fn get(&self, idx: usize) -> Result<&'a [u8]> {
        let owner = idx / self.x.b;
        if owner >= self.x.k || !self.problem.is_side_info(self.t, owner) {
            let (t, j) = split_index(self.x.b, idx);
            return Err(Error::MissingSideInfo { t, j });
        }
        if let Some(log) = &self.log {
            log.borrow_mut().push(idx);
        }
        let x: &'a MessageBatch = self.x;
        Ok(x.lane(idx))
    }

    /// Flattened indices read so far. Empty unless auditing.
    pub fn accesses(&self) -> Vec<usize> {
        self.log.as_ref().map(|l| l.borrow().clone()).unwrap_or_default()
    }
}

/// Byte-lane arithmetic in GF(p), `p < 256`.
#[derive(Debug, Clone)]
struct LaneField {
    p: u8,
    /// `mul[w * 256 + v] = w · v`, filled only for fields beyond GF(3).
    mul: Vec<u8>,
}

impl LaneField {
    fn new(field: PrimeField) -> Self {
        let p = field.modulus();
        let mul = if p > 3 {
            (0..p * 256)
                .map(|i| if i % 256 < p { field.mul(i / 256, i % 256) as u8 } else { 0 })
                .collect()
        } else {
            Vec::new()
        };
        LaneField { p: p as u8, mul }
    }

    fn add(&self, dst: &mut [u8], src: &[u8]) {
        if self.p == 2 {
            dst.iter_mut().zip(src).for_each(|(d, &s)| *d ^= s);
        } else {
            let p = self.p;
            dst.iter_mut().zip(src).for_each(|(d, &s)| {
                let (sum, carry) = d.overflowing_add(s);
                *d = if carry || sum >= p { sum.wrapping_sub(p) } else { sum };
            });
        }
    }

    fn sub(&self, dst: &mut [u8], src: &[u8]) {
        if self.p == 2 {
            return self.add(dst, src);
        }
        let p = self.p;
        dst.iter_mut().zip(src).for_each(|(d, &s)| {
            let diff = d.wrapping_sub(s);
            *d = if *d < s { diff.wrapping_add(p) } else { diff };
        });
    }

    /// `dst += w · src`.
    fn axpy(&self, dst: &mut [u8], src: &[u8], w: u32) {
        let p = self.p as u32;
        match w % p {
            0 => {}
            1 => self.add(dst, src),
            w if w == p - 1 => self.sub(dst, src),
            w => {
                let row = &self.mul[w as usize * 256..(w as usize + 1) * 256];
                dst.iter_mut().zip(src).for_each(|(d, &s)| {
                    let prod = row[s as usize];
                    let (sum, carry) = d.overflowing_add(prod);
                    *d = if carry || sum >= self.p { sum.wrapping_sub(self.p) } else { sum };
                });
            }
        }
    }
}

/// Which decoder produced a wrong symbol.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DecoderKind {
    Plan,
    Oracle,
}

impl fmt::Display for DecoderKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DecoderKind::Plan => "plan",
            DecoderKind::Oracle => "oracle",
        })
    }
}

/// A symbol decoded wrongly in one trial.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Failure {
    pub trial: usize,
    pub t: usize,
    pub j: usize,
    pub decoder: DecoderKind,
    pub expected: u32,
    pub got: u32,
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "trial {}: {} decoder recovered x_{{{},{}}} = {} instead of {}",
            self.trial, self.decoder, self.t, self.j, self.got, self.expected
        )
    }
}

/// Failures and decoder disagreements over one batch.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct BatchOutcome {
    pub failures: Vec<Failure>,
    /// `(trial, symbol)` decodes where plan and oracle disagree.
    pub disagreements: usize,
    /// Symbol decodes performed, summed over decoders and trials.
    pub decodes: usize,
}

/// Decodes every symbol of every trial in `x` with the given decoders,
/// each receiver seeing only `y` and its own [`SideLanes`].
pub fn run_batch(
    air: &AirMatrix,
    problem: &SniProblem,
    x: &MessageBatch,
    plan: Option<&DecodePlan>,
    oracle: Option<&OracleDecoder>,
) -> Result<BatchOutcome> {
    let b = x.b;
    if let Some(plan) = plan {
        if !x.field.is_binary() {
            return Err(Error::Config("the plan decoder needs p = 2".into()));
        }
        if plan.problem() != problem || plan.b() != b {
            return Err(Error::Precondition(format!("plan was built for {}", plan.problem())));
        }
    }
    if let Some(o) = oracle {
        if o.field() != x.field || o.problem() != problem || o.b() != b {
            return Err(Error::Precondition(format!("oracle was built for {} over {}", o.problem(), o.field())));
        }
    }
    let y = encode_batch(air, x)?;
    let lf = LaneField::new(x.field);
    let trials = x.trials;
    let mut out = BatchOutcome::default();
    let mut plan_lane = vec![0u8; trials];
    let mut oracle_lane = vec![0u8; trials];
    for t in 0..problem.k() {
        let side = SideLanes::new(x, problem, t)?;
        for k in t * b..(t + 1) * b {
            let (_, j) = split_index(b, k);
            let truth = x.lane(k);
            if let Some(plan) = plan {
                let e = &plan.entries()[k];
                plan_lane.fill(0);
                for &c in &e.codes {
                    lf.add(&mut plan_lane, y.lane(c));
                }
                for &s in &e.side_terms {
                    lf.add(&mut plan_lane, side.get(s)?);
                }
                record(&mut out, DecoderKind::Plan, truth, &plan_lane, t, j);
            }
            if let Some(o) = oracle {
                let dec = o.symbol(k);
                oracle_lane.fill(0);
                for &(c, w) in dec.weights {
                    lf.axpy(&mut oracle_lane, y.lane(c as usize), w);
                }
                for &(r, coef) in dec.corrections {
                    lf.axpy(&mut oracle_lane, side.get(r as usize)?, x.field.neg(coef));
                }
                record(&mut out, DecoderKind::Oracle, truth, &oracle_lane, t, j);
            }
            if plan.is_some() && oracle.is_some() {
                out.disagreements += plan_lane.iter().zip(&oracle_lane).filter(|(a, b)| a != b).count();
            }
        }
    }
    Ok(out)
}

fn record(out: &mut BatchOutcome, decoder: DecoderKind, truth: &[u8], got: &[u8], t: usize, j: usize) {
    out.decodes += truth.len();
    if truth == got {
        return;
    }
    for (trial, (&e, &g)) in truth.iter().zip(got).enumerate().filter(|(_, (e, g))| e != g) {
        out.failures.push(Failure {
            trial,
            t,
            j,
            decoder,
            expected: e as u32,
            got: g as u32,
        });
    }
}

/// What decoding one symbol costs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SymbolUsage {
    pub t: usize,
    pub j: usize,
    /// Absent when only the oracle ran.
    pub case: Option<DecodeCase>,
    pub num_codes: usize,
    pub gamma: usize,
}

/// Minimum, maximum and total of a per-symbol count.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Spread {
    pub min: usize,
    pub max: usize,
    pub total: usize,
    pub count: usize,
}

impl Spread {
    pub fn of(values: impl IntoIterator<Item = usize>) -> Self {
        let mut s = Spread {
            min: usize::MAX,
            max: 0,
            total: 0,
            count: 0,
        };
        for v in values {
            s.min = s.min.min(v);
            s.max = s.max.max(v);
            s.total += v;
            s.count += 1;
        }
        if s.count == 0 {
            s.min = 0;
        }
        s
    }

    pub fn mean(&self) -> f64 {
        if self.count == 0 {
            0.0
        } else {
            self.total as f64 / self.count as f64
        }
    }
}

/// Outcome of [`run`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimReport {
    pub generator: &'static str,
    pub config: SimConfig,
    pub failures: Vec<Failure>,
    pub disagreements: usize,
    /// Per symbol; from the plan when it ran, else from the oracle.
    pub usage: Vec<SymbolUsage>,
    pub codes: Spread,
    pub gamma: Spread,
    pub rate: Rate,
    pub gap: Rate,
}

impl SimReport {
    pub fn trials(&self) -> usize {
        self.config.trials
    }

    pub fn is_clean(&self) -> bool {
        self.failures.is_empty() && self.disagreements == 0
    }

    /// `t,j,case,num_codes,gamma` rows followed by `#`-prefixed summary lines.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("t,j,case,num_codes,gamma\n");
        for u in &self.usage {
            let case = u.case.map_or_else(|| "-".to_string(), |c| c.to_string());
            s.push_str(&format!("{},{},{},{},{}\n", u.t, u.j, case, u.num_codes, u.gamma));
        }
        s.push_str(&format!("# trials,{}\n", self.trials()));
        s.push_str(&format!("# failures,{}\n", self.failures.len()));
        s.push_str(&format!("# disagreements,{}\n", self.disagreements));
        s.push_str(&format!("# rate,{}\n", self.rate));
        s.push_str(&format!("# gap,{}\n", self.gap));
        s
    }
}

impl fmt::Display for SimReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = &self.config;
        writeln!(f, "generator: {}", self.generator)?;
        writeln!(
            f,
            "problem {} pair (a, b) = ({}, {}) over {} with {} decoder, seed {}",
            c.problem,
            c.pair.a(),
            c.pair.b(),
            c.field,
            c.decoder,
            c.seed
        )?;
        writeln!(f, "trials: {}", c.trials)?;
        writeln!(f, "failures: {}", self.failures.len())?;
        if c.decoder == DecoderChoice::Both {
            writeln!(f, "plan/oracle disagreements: {}", self.disagreements)?;
        }
        for fail in self.failures.iter().take(10) {
            writeln!(f, "  {fail}")?;
        }
        writeln!(
            f,
            "code symbols per decode: min {} max {} mean {:.4}",
            self.codes.min,
            self.codes.max,
            self.codes.mean()
        )?;
        writeln!(
            f,
            "side-information symbols per decode: min {} max {} mean {:.4}",
            self.gamma.min,
            self.gamma.max,
            self.gamma.mean()
        )?;
        write!(f, "rate {} (gap {} above D + 1)", self.rate, self.gap)
    }
}

/// Runs the configured round trip.
pub fn run(config: &SimConfig) -> Result<SimReport> {
    let problem = config.problem;
    let b = config.pair.b();
    let air = encoding_matrix(&problem, &config.pair)?;
    let plan = if config.decoder.uses_plan() {
        Some(decode_plan_for(&air, &problem, b)?)
    } else {
        None
    };
    let oracle = if config.decoder.uses_oracle() {
        Some(OracleDecoder::new(&air, &problem, b, config.field)?)
    } else {
        None
    };
    let x = MessageBatch::sample(problem.k(), b, config.field, config.trials, config.seed)?;
    let outcome = run_batch(&air, &problem, &x, plan.as_ref(), oracle.as_ref())?;
    let usage: Vec<SymbolUsage> = match (&plan, &oracle) {
        (Some(plan), _) => complexity_stats(plan, &air)
            .into_iter()
            .map(|s| SymbolUsage {
                t: s.t,
                j: s.j,
                case: Some(s.case),
                num_codes: s.num_codes,
                gamma: s.gamma,
            })
            .collect(),
        (None, Some(o)) => (0..air.m())
            .map(|k| {
                let (t, j) = split_index(b, k);
                let dec = o.symbol(k);
                SymbolUsage {
                    t,
                    j,
                    case: None,
                    num_codes: dec.weights.len(),
                    gamma: dec.corrections.len(),
                }
            })
            .collect(),
        (None, None) => unreachable!("every decoder choice runs a decoder"),
    };
    let mut failures = outcome.failures;
    failures.sort_by_key(|f| (f.trial, f.t, f.j, f.decoder == DecoderKind::Oracle));
    Ok(SimReport {
        generator: GENERATOR,
        config: *config,
        failures,
        disagreements: outcome.disagreements,
        codes: Spread::of(usage.iter().map(|u| u.num_codes)),
        gamma: Spread::of(usage.iter().map(|u| u.gamma)),
        usage,
        rate: config.pair.rate(),
        gap: config.pair.gap(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::air::build_air;
    use crate::codec::encode;

    fn example() -> (SniProblem, RatePair) {
        let p = SniProblem::new(13, 4, 1).unwrap();
        (p, RatePair::new(&p, 1, 5).unwrap())
    }

    #[test]
    fn example_round_trip_is_clean() {
        let (p, pair) = example();
        let cfg = SimConfig::new(p, pair, 100, 7, PrimeField::new(2).unwrap(), DecoderChoice::Both).unwrap();
        let report = run(&cfg).unwrap();
        assert!(report.is_clean(), "{report}");
        assert_eq!(report.usage.len(), 65);
        assert_eq!(report.rate, Rate::new(26, 5));
    }

    #[test]
    fn plan_needs_gf2() {
        let (p, pair) = example();
        let f3 = PrimeField::new(3).unwrap();
        assert!(matches!(
            SimConfig::new(p, pair, 1, 0, f3, DecoderChoice::Plan),
            Err(Error::Config(_))
        ));
        assert!(SimConfig::new(p, pair, 1, 0, f3, DecoderChoice::Oracle).is_ok());
        assert!(SimConfig::new(p, pair, 0, 0, f3, DecoderChoice::Oracle).is_err());
    }

    #[test]
    fn batch_encoding_matches_scalar_encoding() {
        let air = build_air(65, 26).unwrap();
        for p in [2, 3, 7] {
            let f = PrimeField::new(p).unwrap();
            let x = MessageBatch::sample(13, 5, f, 9, 11).unwrap();
            let y = encode_batch(&air, &x).unwrap();
            for r in 0..9 {
                let scalar = encode(&air, &x.trial(r)).unwrap();
                let lanes: Vec<u32> = (0..26).map(|c| y.lane(c)[r] as u32).collect();
                assert_eq!(scalar.symbols(), &lanes[..]);
            }
        }
    }

    #[test]
    fn trials_are_independent_of_batch_size() {
        let f = PrimeField::new(3).unwrap();
        let small = MessageBatch::sample(13, 5, f, 3, 42).unwrap();
        let large = MessageBatch::sample(13, 5, f, 10, 42).unwrap();
        for r in 0..3 {
            assert_eq!(small.trial(r), large.trial(r));
        }
    }

    #[test]
    fn side_lanes_refuse_unknown_messages() {
        let (p, _) = example();
        let x = MessageBatch::sample(13, 5, PrimeField::default(), 4, 1).unwrap();
        let side = SideLanes::new(&x, &p, 0).unwrap().with_audit();
        assert!(side.get(5 * 5).is_ok());
        assert_eq!(side.get(0), Err(Error::MissingSideInfo { t: 0, j: 1 }));
        assert_eq!(side.get(4 * 5 + 2), Err(Error::MissingSideInfo { t: 4, j: 3 }));
        assert_eq!(side.get(12 * 5), Err(Error::MissingSideInfo { t: 12, j: 1 }));
        assert_eq!(side.accesses(), vec![25]);
    }

    #[test]
    fn lane_arithmetic_matches_field() {
        for p in [2u32, 3, 5, 251] {
            let f = PrimeField::new(p).unwrap();
            let lf = LaneField::new(f);
            let vals: Vec<u8> = (0..p).map(|v| v as u8).collect();
            for w in 0..p {
                for &a in &vals {
                    let mut dst = vec![a; vals.len()];
                    lf.axpy(&mut dst, &vals, w);
                    let want: Vec<u8> = vals.iter().map(|&s| f.add(a as u32, f.mul(w, s as u32)) as u8).collect();
                    assert_eq!(dst, want, "p={p} w={w} a={a}");
                }
            }
        }
    }

    #[test]
    fn report_is_reproducible() {
        let p = SniProblem::new(71, 4, 1).unwrap();
        let pair = RatePair::new(&p, 1, 14).unwrap();
        let cfg = SimConfig::new(p, pair, 10, 3, PrimeField::default(), DecoderChoice::Both).unwrap();
        let a = run(&cfg).unwrap();
        assert!(a.is_clean());
        assert_eq!(a, run(&cfg).unwrap());
    }
}
