//! Command-line front-end: one subcommand per sweep, each producing a
//! schema-versioned JSON report.

use std::time::Instant;

use clap::{Parser, Subcommand};
use divpow::chow::BlowupModel;
use divpow::verify::{self, Check};
use serde::Serialize;
use serde_json::{json, Value};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Parser)]
#[command(name = "divpow", version, about = "Exact verification sweeps for divided powers and their stabilizers")]
pub struct RunConfig {
    #[command(subcommand)]
    pub command: Command,

    /// Field characteristic, 0 for the rationals.
    #[arg(long = "char", global = true)]
    pub characteristic: Option<u64>,

    /// Vector space dimension (maximum dimension for sweeps).
    #[arg(long, global = true)]
    pub dim: Option<usize>,

    /// Maximum degree of the divided powers in random sweeps.
    #[arg(long, global = true)]
    pub degree: Option<u32>,

    /// Maximum sum of parts, or of `a + b` for multiplication maps.
    #[arg(long, global = true)]
    pub max_sum: Option<u64>,

    /// Comma-separated primes.
    #[arg(long, global = true, value_delimiter = ',')]
    pub primes: Option<Vec<u64>>,

    /// Comma-separated exponent sequence.
    #[arg(long, global = true, value_delimiter = ',')]
    pub a: Option<Vec<u64>>,

    #[arg(long, global = true)]
    pub m: Option<u64>,

    #[arg(long, global = true)]
    pub q: Option<u64>,

    /// Coefficient bound for the automorphism search.
    #[arg(long, global = true)]
    pub bound: Option<i64>,

    /// Random samples per case.
    #[arg(long, global = true)]
    pub samples: Option<usize>,

    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,

    /// Skip the brute-force point stabilizer.
    #[arg(long, global = true)]
    pub no_brute: bool,

    /// Write the JSON report to this path.
    #[arg(long, global = true)]
    pub output: Option<std::path::PathBuf>,

    /// Print a human-readable summary instead of JSON.
    #[arg(long, global = true)]
    pub pretty: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    /// Carry counts and multinomial residues against big integers.
    VerifyKummer,
    /// Divided-power relations and canonical-map composites.
    VerifyGamma,
    /// The pairing formula on pure symbols.
    VerifyPairing,
    /// Trivial stabilizer of the free tensor.
    VerifyFreeTensor,
    /// Injectivity of multiplication maps and of `τ`.
    VerifyDivprod,
    /// Shape separation and the shifted subspace `L`.
    VerifyTannakaShape,
    /// Automorphism search on the two-blow-up Chow model.
    ChowPhi,
    /// Point count of a projective bundle.
    CountBundle,
    /// Nakayama lifting over dual numbers.
    VerifyNakayama,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::VerifyKummer => "verify-kummer",
            Command::VerifyGamma => "verify-gamma",
            Command::VerifyPairing => "verify-pairing",
            Command::VerifyFreeTensor => "verify-free-tensor",
            Command::VerifyDivprod => "verify-divprod",
            Command::VerifyTannakaShape => "verify-tannaka-shape",
            Command::ChowPhi => "chow-phi",
            Command::CountBundle => "count-bundle",
            Command::VerifyNakayama => "verify-nakayama",
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub schema_version: u32,
    pub subcommand: &'static str,
    pub inputs: Value,
    pub seed: u64,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub result: Option<Value>,
    pub assertions: Vec<Check>,
    pub timing_ms: f64,
}

impl Report {
    pub fn render(&self) -> String {
        let mut out = format!("{} ({})\n", self.subcommand, if self.passed { "pass" } else { "FAIL" });
        if let Some(result) = &self.result {
            out.push_str(&format!("  result: {result}\n"));
        }
        for c in &self.assertions {
            out.push_str(&format!("  [{}] {}: {} cases\n", if c.passed { "ok" } else { "FAIL" }, c.name, c.cases));
            if let Some(d) = &c.detail {
                out.push_str(&format!("      {d}\n"));
            }
            if let Some(w) = &c.witness {
                out.push_str(&format!("      witness: {w}\n"));
            }
        }
        out.push_str(&format!("  time: {:.1} ms\n", self.timing_ms));
        out
    }
}

fn chars(config: &RunConfig, default: &[u64]) -> Vec<u64> {
    config.characteristic.map_or_else(|| default.to_vec(), |c| vec![c])
}

fn single_u32(v: Option<u64>, name: &str) -> divpow::Result<u32> {
    let v = v.ok_or_else(|| divpow::Error::InvalidArgument(format!("--{name} is required")))?;
    u32::try_from(v).map_err(|_| divpow::Error::InvalidArgument(format!("--{name} too large")))
}

/// Runs the configured sweep. Defaults reproduce the acceptance suite.
pub fn run(config: &RunConfig) -> divpow::Result<Report> {
    let start = Instant::now();
    let seed = config.seed;
    let dim = config.dim;
    let (inputs, assertions, result) = match config.command {
        Command::VerifyKummer => {
            let max_sum = config.max_sum.unwrap_or(12);
            let primes = config.primes.clone().unwrap_or_else(|| vec![2, 3, 5]);
            (json!({"max_sum": max_sum, "primes": primes}), verify::kummer_suite(max_sum, &primes)?, None)
        }
        Command::VerifyGamma => {
            let chars = chars(config, &[0, 2, 3, 5]);
            let (d, n, samples) = (dim.unwrap_or(3), config.degree.unwrap_or(4), config.samples.unwrap_or(200));
            let inputs = json!({"chars": chars, "max_dim": d, "max_degree": n, "samples": samples, "max_composite_degree": 6});
            (inputs, verify::gamma_suite(&chars, d, n, samples, 6, seed)?, None)
        }
        Command::VerifyPairing => {
            let chars = chars(config, &[0, 2, 3, 5]);
            let (d, n, samples) = (dim.unwrap_or(3), config.degree.unwrap_or(4), config.samples.unwrap_or(200));
            let inputs = json!({"chars": chars, "max_dim": d, "max_degree": n, "samples": samples});
            (inputs, verify::pairing_suite(&chars, d, n, samples, seed)?, None)
        }
        Command::VerifyFreeTensor => {
            let p = config.characteristic.unwrap_or(2);
            let d = dim.unwrap_or(3);
            let inputs = json!({"char": p, "dim": d, "a": config.a, "brute": !config.no_brute});
            (inputs, verify::free_tensor_suite(p, d, config.a.as_deref(), !config.no_brute)?, None)
        }
        Command::VerifyDivprod => {
            let primes = config.primes.clone().unwrap_or_else(|| vec![2, 3]);
            let d = dim.unwrap_or(3);
            let max_sum = u32::try_from(config.max_sum.unwrap_or(12))
                .map_err(|_| divpow::Error::InvalidArgument("--max-sum too large".into()))?;
            let tau_p = config.characteristic.unwrap_or(3);
            let tau_a = config.a.clone().unwrap_or_else(|| vec![3, 9]);
            let inputs = json!({"primes": primes, "max_dim": d, "max_sum": max_sum, "tau": {"char": tau_p, "dim": 2, "a": tau_a}});
            (inputs, verify::divprod_suite(&primes, d, max_sum, tau_p, 2, &tau_a)?, None)
        }
        Command::VerifyTannakaShape => {
            let chars = chars(config, &[0, 2, 3]);
            let m = config.m.unwrap_or(8);
            (json!({"chars": chars, "max_m": m}), verify::tannaka_suite(&chars, m)?, None)
        }
        Command::ChowPhi => {
            let bound = config.bound.unwrap_or(3);
            let model = BlowupModel::new(10, [2, 3], [1, 5])?;
            (json!({"model": model, "bound": bound}), verify::chow_suite(&model, bound)?, None)
        }
        Command::CountBundle => {
            let a = single_u32(config.a.as_ref().and_then(|a| a.first().copied()), "a")?;
            let m = single_u32(config.m, "m")?;
            let q = config.q.ok_or_else(|| divpow::Error::InvalidArgument("--q is required".into()))?;
            let (count, check) = verify::bundle_count_check(a, m, q)?;
            (json!({"a": a, "m": m, "q": q}), vec![check], Some(json!({"count": count.to_string()})))
        }
        Command::VerifyNakayama => {
            let p = config.characteristic.unwrap_or(2);
            let size = dim.unwrap_or(2);
            (json!({"char": p, "rows": size, "cols": size}), verify::nakayama_suite(p, size, size)?, None)
        }
    };
    Ok(Report {
        schema_version: SCHEMA_VERSION,
        subcommand: config.command.name(),
        inputs,
        seed,
        passed: verify::all_passed(&assertions),
        result,
        assertions,
        timing_ms: start.elapsed().as_secs_f64() * 1e3,
    })
}
