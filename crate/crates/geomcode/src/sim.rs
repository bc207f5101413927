//! BPSK over AWGN and the Monte Carlo bit-error-rate harness.
//!
//! Frame `f` at grid point `p` draws its noise from a ChaCha stream keyed by
//! `(seed, p, f)`, and frames are merged in fixed-size batches, so results do
//! not depend on the number of worker threads.

use std::fmt;
use std::fmt::Write as _;

use geomcode_core::ldpc::{LdpcCode, SumProductDecoder};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

/// Frames decoded between two checks of the stop rule.
pub const BATCH: usize = 64;

#[derive(Debug, Clone, PartialEq)]
pub enum SimError {
    TrivialCode { n: usize, rank: usize },
    BadRate(f64),
    ZeroIterations,
    ZeroFrames,
    BadGrid(String),
    ThreadPool(String),
}

impl fmt::Display for SimError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SimError::TrivialCode { n, rank } => write!(
                f,
                "parity-check matrix has full column rank ({} of {} columns); the code has dimension 0 and cannot carry data",
                rank, n
            ),
            SimError::BadRate(r) => write!(f, "rate {} is not in (0, 1)", r),
            SimError::ZeroIterations => write!(f, "max iterations must be at least 1"),
            SimError::ZeroFrames => write!(f, "max frames must be at least 1"),
            SimError::BadGrid(s) => write!(f, "bad Eb/N0 grid '{}', expected start:step:stop", s),
            SimError::ThreadPool(e) => write!(f, "cannot start worker threads: {}", e),
        }
    }
}

impl std::error::Error for SimError {}

/// `sigma^2 = 1 / (2 R Eb/N0)` with Eb/N0 in dB.
pub fn noise_variance(ebn0_db: f64, rate: f64) -> f64 {
    1.0 / (2.0 * rate * 10f64.powf(ebn0_db / 10.0))
}

/// Maps bit 0 to +1 and bit 1 to -1, adds Gaussian noise, and returns the
/// channel LLRs `2 y / sigma^2`.
pub fn awgn_llrs<R: Rng>(bits: &[u8], ebn0_db: f64, rate: f64, rng: &mut R) -> Vec<f64> {
    let var = noise_variance(ebn0_db, rate);
    let sigma = var.sqrt();
    bits.iter()
        .map(|&b| {
            let x = if b & 1 == 0 { 1.0 } else { -1.0 };
            let z: f64 = rng.sample(StandardNormal);
            2.0 * (x + sigma * z) / var
        })
        .collect()
}

/// Noise stream for one frame.
pub fn frame_rng(seed: u64, point: usize, frame: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(((point as u64) << 40) ^ frame);
    rng
}

/// Parses `start:step:stop`; `stop` is included when it lies within half a
/// step of the grid.
pub fn parse_grid(s: &str) -> Result<Vec<f64>, SimError> {
    let bad = || SimError::BadGrid(s.to_string());
    let parts: Vec<f64> = s
        .split(':')
        .map(|p| p.trim().parse::<f64>().map_err(|_| bad()))
        .collect::<Result<_, _>>()?;
    match parts[..] {
        [x] if x.is_finite() => Ok(vec![x]),
        [start, step, stop] if start.is_finite() && stop.is_finite() && step.is_finite() => {
            if step <= 0.0 || stop < start {
                return Err(bad());
            }
            let count = ((stop - start) / step + 0.5).floor() as usize + 1;
            if count > 10_000 {
                return Err(bad());
            }
            Ok((0..count).map(|i| start + i as f64 * step).collect())
        }
        _ => Err(bad()),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ChannelConfig {
    pub ebn0_db: Vec<f64>,
    /// Defaults to the code rate when `None`.
    pub rate: Option<f64>,
    pub max_iterations: usize,
    pub min_frame_errors: u64,
    pub max_frames: u64,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BerPoint {
    pub ebn0_db: f64,
    pub frames: u64,
    pub bit_errors: u64,
    pub frame_errors: u64,
    pub ber: f64,
    pub fer: f64,
    pub mean_iterations: f64,
    pub ci_low: f64,
    pub ci_high: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BerResult {
    pub n: usize,
    pub rate: f64,
    pub points: Vec<BerPoint>,
}

/// Wilson score interval at 95% for `k` successes in `n` trials.
pub fn wilson_interval(k: u64, n: u64) -> (f64, f64) {
    if n == 0 {
        return (0.0, 1.0);
    }
    let z = 1.959_963_984_540_054;
    let (k, n) = (k as f64, n as f64);
    let p = k / n;
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let centre = (p + z2 / (2.0 * n)) / denom;
    let half = z * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt() / denom;
    let lo = if k == 0.0 { 0.0 } else { (centre - half).max(0.0) };
    let hi = if k == n { 1.0 } else { (centre + half).min(1.0) };
    (lo, hi)
}

#[derive(Default, Clone, Copy)]
struct Tally {
    frames: u64,
    bit_errors: u64,
    frame_errors: u64,
    iterations: u64,
}

impl Tally {
    fn merge(self, o: Tally) -> Tally {
        Tally {
            frames: self.frames + o.frames,
            bit_errors: self.bit_errors + o.bit_errors,
            frame_errors: self.frame_errors + o.frame_errors,
            iterations: self.iterations + o.iterations,
        }
    }
}

/// Sends the all-zero codeword at each grid point until `min_frame_errors`
/// frame errors or `max_frames` frames.
pub fn ber_sweep(code: &LdpcCode, cfg: &ChannelConfig) -> Result<BerResult, SimError> {
    if code.dimension() == 0 {
        return Err(SimError::TrivialCode {
            n: code.n(),
            rank: code.rank(),
        });
    }
    let rate = cfg.rate.unwrap_or_else(|| code.rate());
    if !(rate > 0.0 && rate < 1.0) {
        return Err(SimError::BadRate(rate));
    }
    if cfg.max_iterations == 0 {
        return Err(SimError::ZeroIterations);
    }
    if cfg.max_frames == 0 {
        return Err(SimError::ZeroFrames);
    }
    let n = code.n();
    let zero = vec![0u8; n];
    let mut points = Vec::with_capacity(cfg.ebn0_db.len());
    for (pi, &ebn0) in cfg.ebn0_db.iter().enumerate() {
        let mut total = Tally::default();
        while total.frames < cfg.max_frames && total.frame_errors < cfg.min_frame_errors.max(1) {
            let start = total.frames;
            let end = (start + BATCH as u64).min(cfg.max_frames);
            let batch = (start..end)
                .into_par_iter()
                .map_init(
                    || SumProductDecoder::new(code),
                    |dec, f| {
                        let mut rng = frame_rng(cfg.seed, pi, f);
                        let llrs = awgn_llrs(&zero, ebn0, rate, &mut rng);
                        let r = dec.decode(&llrs, cfg.max_iterations).expect("length matches");
                        let errs = r.bits.iter().filter(|&&b| b != 0).count() as u64;
                        Tally {
                            frames: 1,
                            bit_errors: errs,
                            frame_errors: (errs > 0 || !r.syndrome_ok) as u64,
                            iterations: r.iterations as u64,
                        }
                    },
                )
                .reduce(Tally::default, Tally::merge);
            total = total.merge(batch);
        }
        let trials = total.frames * n as u64;
        let (ci_low, ci_high) = wilson_interval(total.bit_errors, trials);
        points.push(BerPoint {
            ebn0_db: ebn0,
            frames: total.frames,
            bit_errors: total.bit_errors,
            frame_errors: total.frame_errors,
            ber: total.bit_errors as f64 / trials as f64,
            fer: total.frame_errors as f64 / total.frames as f64,
            mean_iterations: total.iterations as f64 / total.frames as f64,
            ci_low,
            ci_high,
        });
    }
    Ok(BerResult { n, rate, points })
}

/// Runs `f` on a pool of `threads` workers, or the global pool when `None`.
pub fn with_threads<T: Send>(threads: Option<usize>, f: impl FnOnce() -> T + Send) -> Result<T, SimError> {
    match threads {
        None => Ok(f()),
        Some(t) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(t.max(1))
                .build()
                .map_err(|e| SimError::ThreadPool(e.to_string()))?;
            Ok(pool.install(f))
        }
    }
}

/// `printf("%.*g")` formatting.
pub fn format_g(x: f64, precision: usize) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return format!("{}", x);
    }
    let p = precision.max(1);
    let sci = format!("{:.*e}", p - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -4 || exp >= p as i32 {
        let m = trim_zeros(mantissa);
        format!("{}e{}{:02}", m, if exp < 0 { '-' } else { '+' }, exp.abs())
    } else {
        let decimals = (p as i32 - 1 - exp).max(0) as usize;
        trim_zeros(&format!("{:.*}", decimals, x)).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

pub const CSV_HEADER: &str = "ebn0_db,frames,bit_errors,frame_errors,ber,fer,mean_iters,ci_low,ci_high";

pub fn to_csv(result: &BerResult) -> String {
    let mut out = String::new();
    writeln!(out, "{}", CSV_HEADER).unwrap();
    for p in &result.points {
        writeln!(
            out,
            "{},{},{},{},{},{},{},{},{}",
            format_g(p.ebn0_db, 6),
            p.frames,
            p.bit_errors,
            p.frame_errors,
            format_g(p.ber, 6),
            format_g(p.fer, 6),
            format_g(p.mean_iterations, 6),
            format_g(p.ci_low, 6),
            format_g(p.ci_high, 6)
        )
        .unwrap();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use geomcode_core::BinaryMatrix;

    #[test]
    fn g_format_matches_printf() {
        // expected strings from C printf("%.6g")
        let cases = [
            (0.0, "0"),
            (1.0, "1"),
            (0.5, "0.5"),
            (2.5, "2.5"),
            (-10.0, "-10"),
            (0.875, "0.875"),
            (1234567.0, "1.23457e+06"),
            (123456.0, "123456"),
            (0.0001, "0.0001"),
            (0.00001234, "1.234e-05"),
            (1.0 / 3.0, "0.333333"),
            (0.000123456789, "0.000123457"),
            (99999.95, "99999.9"),
            (999999.5, "1e+06"),
        ];
        for (x, s) in cases {
            assert_eq!(format_g(x, 6), s, "{}", x);
        }
    }

    #[test]
    fn grid_parsing() {
        assert_eq!(parse_grid("1:0.5:5").unwrap().len(), 9);
        assert_eq!(parse_grid("-10").unwrap(), vec![-10.0]);
        let g = parse_grid("0:0.1:1").unwrap();
        assert_eq!(g.len(), 11);
        assert!((g[10] - 1.0).abs() < 1e-12);
        assert_eq!(parse_grid("1:0.5:5.2").unwrap().len(), 9);
        assert_eq!(parse_grid("1:0.5:5.3").unwrap().len(), 10);
        for bad in ["", "1:2", "1:0:5", "5:1:1", "a:1:2", "1:-1:3"] {
            assert!(parse_grid(bad).is_err(), "{}", bad);
        }
    }

    #[test]
    fn wilson_brackets_estimate() {
        let (lo, hi) = wilson_interval(30, 100);
        assert!(lo < 0.3 && 0.3 < hi);
        assert!((lo - 0.2189).abs() < 1e-3 && (hi - 0.3958).abs() < 1e-3);
        let (lo, hi) = wilson_interval(0, 1000);
        assert_eq!(lo, 0.0);
        assert!(hi > 0.0 && hi < 0.004);
    }

    #[test]
    fn noiseless_limit_preserves_signs() {
        let bits: Vec<u8> = (0..200).map(|i| (i % 3 == 0) as u8).collect();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let llrs = awgn_llrs(&bits, 60.0, 0.5, &mut rng);
        for (b, l) in bits.iter().zip(&llrs) {
            assert_eq!(*b == 0, *l > 0.0);
        }
    }

    #[test]
    fn llr_magnitude_moments() {
        // sigma = 1 when 2 R Eb/N0 = 1: R = 0.5 at 0 dB. Then |llr| = 2|1 + z|,
        // E|1 + z| = sqrt(2/pi) exp(-1/2) + (1 - 2 Q(1)), Var = 2 - E^2.
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        let n = 100_000;
        let llrs = awgn_llrs(&vec![0u8; n], 0.0, 0.5, &mut rng);
        let q1 = 0.158_655_253_931_457_05;
        let e_abs = (2.0 / std::f64::consts::PI).sqrt() * (-0.5f64).exp() + (1.0 - 2.0 * q1);
        let var_abs = 2.0 - e_abs * e_abs;
        let mean = llrs.iter().map(|l| l.abs()).sum::<f64>() / n as f64;
        let se = 2.0 * (var_abs / n as f64).sqrt();
        assert!((mean - 2.0 * e_abs).abs() < 3.0 * se, "mean {} vs {}", mean, 2.0 * e_abs);
    }

    #[test]
    fn llr_stream_is_reproducible() {
        let a = awgn_llrs(&[0; 50], 2.0, 0.8, &mut frame_rng(5, 1, 7));
        let b = awgn_llrs(&[0; 50], 2.0, 0.8, &mut frame_rng(5, 1, 7));
        assert_eq!(a, b);
        let c = awgn_llrs(&[0; 50], 2.0, 0.8, &mut frame_rng(5, 1, 8));
        assert_ne!(a, c);
    }

    fn hamming() -> LdpcCode {
        LdpcCode::new(BinaryMatrix::from_rows(&[
            [1u8, 1, 0, 1, 1, 0, 0],
            [1, 0, 1, 1, 0, 1, 0],
            [0, 1, 1, 1, 0, 0, 1],
        ]))
    }

    #[test]
    fn sweep_is_thread_count_independent() {
        let cfg = ChannelConfig {
            ebn0_db: vec![0.0, 3.0],
            rate: None,
            max_iterations: 20,
            min_frame_errors: 50,
            max_frames: 2000,
            seed: 4,
        };
        let one = with_threads(Some(1), || ber_sweep(&hamming(), &cfg)).unwrap().unwrap();
        let four = with_threads(Some(4), || ber_sweep(&hamming(), &cfg)).unwrap().unwrap();
        assert_eq!(one, four);
        assert_eq!(to_csv(&one), to_csv(&four));
        for p in &one.points {
            assert!(p.ci_low <= p.ber && p.ber <= p.ci_high);
            assert_eq!(p.ber, p.bit_errors as f64 / (p.frames * 7) as f64);
            assert!(p.frames <= 2000);
        }
    }

    #[test]
    fn trivial_code_is_refused() {
        let cfg = ChannelConfig {
            ebn0_db: vec![1.0],
            rate: None,
            max_iterations: 10,
            min_frame_errors: 1,
            max_frames: 10,
            seed: 0,
        };
        let code = LdpcCode::new(BinaryMatrix::identity(4));
        assert!(matches!(ber_sweep(&code, &cfg), Err(SimError::TrivialCode { n: 4, rank: 4 })));
    }

    #[test]
    fn csv_layout() {
        let r = BerResult {
            n: 7,
            rate: 4.0 / 7.0,
            points: vec![BerPoint {
                ebn0_db: 1.5,
                frames: 10,
                bit_errors: 3,
                frame_errors: 2,
                ber: 3.0 / 70.0,
                fer: 0.2,
                mean_iterations: 4.5,
                ci_low: 0.01,
                ci_high: 0.12,
            }],
        };
        assert_eq!(
            to_csv(&r),
            "ebn0_db,frames,bit_errors,frame_errors,ber,fer,mean_iters,ci_low,ci_high\n1.5,10,3,2,0.0428571,0.2,4.5,0.01,0.12\n"
        );
    }
}
