//! Command-line front end: the sender, server and receiver roles plus the
//! experiment runners.

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::covert::{self, Case, CovertResult, Semantics, DEFAULT_OUTER_CAP};
use crate::error::{Error, Result};
use crate::experiments::{self, FeasibilityConfig, SteganalysisConfig, CAPACITIES};
use crate::gf2::{BitMatrix, HidingKey, MatrixMode};
use crate::image::{load_pgm, save_pgm};
use crate::stego::{Codec, Payload};

const KEY_BYTES: usize = 32;

#[derive(Debug, Parser)]
#[command(name = "dccd", version, about = "Computation on data hidden in grayscale images")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum CaseArg {
    Add,
    Outer,
    Inner,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SemanticsArg {
    Gf2,
    Int,
}

impl From<SemanticsArg> for Semantics {
    fn from(s: SemanticsArg) -> Self {
        match s {
            SemanticsArg::Gf2 => Semantics::Gf2,
            SemanticsArg::Int => Semantics::Integer,
        }
    }
}

fn matrix_mode(case: CaseArg) -> MatrixMode {
    match case {
        CaseArg::Inner => MatrixMode::Permutation,
        CaseArg::Add | CaseArg::Outer => MatrixMode::General,
    }
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Write a random hiding key (raw bytes).
    Keygen {
        #[arg(long)]
        out: PathBuf,
        /// Derive the key from a seed instead of OS entropy.
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Hide a payload bit file in a PGM cover.
    Embed {
        #[arg(long)]
        key: PathBuf,
        /// Cover image.
        #[arg(long = "in")]
        input: PathBuf,
        /// Payload bit file.
        #[arg(long = "in2")]
        payload: PathBuf,
        #[arg(long)]
        bits: usize,
        #[arg(long)]
        out: PathBuf,
        /// `inner` embeds with a permutation matrix (needs --bits equal to the pixel count).
        #[arg(long, value_enum, default_value = "add")]
        case: CaseArg,
        /// Search for a minimum-weight change (small covers only).
        #[arg(long)]
        minimize: bool,
    },
    /// Recover a payload bit file from a stego image.
    Extract {
        #[arg(long)]
        key: PathBuf,
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        bits: usize,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, value_enum, default_value = "add")]
        case: CaseArg,
    },
    /// Combine two stego images without the key.
    Compute {
        #[arg(long, value_enum)]
        case: CaseArg,
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long = "in2")]
        input2: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, value_enum, default_value = "gf2")]
        semantics: SemanticsArg,
        /// Largest pixel count allowed for the outer case.
        #[arg(long, default_value_t = DEFAULT_OUTER_CAP)]
        capacity: usize,
    },
    /// Decode a computed result with the key.
    Recover {
        #[arg(long)]
        key: Option<PathBuf>,
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        bits: Option<usize>,
        /// Output file; standard output when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    ExpFeasibility {
        #[command(flatten)]
        common: ExpArgs,
    },
    ExpSecurity {
        #[command(flatten)]
        common: ExpArgs,
    },
    /// `--trials` is the number of timed runs per capacity (at least 5).
    ExpTiming {
        #[command(flatten)]
        common: ExpArgs,
    },
    ExpSteganalysis {
        #[command(flatten)]
        common: ExpArgs,
        /// Directory of PGM covers.
        #[arg(long)]
        corpus: PathBuf,
    },
}

#[derive(Debug, Args)]
struct ExpArgs {
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long)]
    trials: Option<usize>,
    /// Run a single capacity instead of 1000..5000.
    #[arg(long)]
    capacity: Option<usize>,
    #[arg(long)]
    out: Option<PathBuf>,
}

impl ExpArgs {
    fn capacities(&self) -> Vec<usize> {
        self.capacity.map_or_else(|| CAPACITIES.to_vec(), |c| vec![c])
    }
}

fn read_key(path: &Path) -> Result<HidingKey> {
    HidingKey::new(std::fs::read(path)?)
}

fn emit(text: &str, out: Option<&Path>) -> Result<()> {
    match out {
        Some(p) => std::fs::write(p, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn render_matrix(m: &BitMatrix) -> String {
    let mut s = String::with_capacity(m.rows() * (m.cols() + 1));
    for r in 0..m.rows() {
        for c in 0..m.cols() {
            s.push(if m.get(r, c) { '1' } else { '0' });
        }
        s.push('\n');
    }
    s
}

fn run(cmd: Command) -> Result<()> {
    match cmd {
        Command::Keygen { out, seed } => {
            let mut key = [0u8; KEY_BYTES];
            match seed {
                Some(s) => ChaCha8Rng::seed_from_u64(s).fill_bytes(&mut key),
                None => rand::thread_rng().fill(&mut key),
            }
            std::fs::write(out, key)?;
        }
        Command::Embed {
            key,
            input,
            payload,
            bits,
            out,
            case,
            minimize,
        } => {
            let cover = load_pgm(input)?;
            let m = Payload::load(payload, bits)?;
            let codec = Codec::for_cover(&read_key(&key)?, bits, &cover, matrix_mode(case))?;
            save_pgm(&codec.embed(&cover, &m, minimize)?, out)?;
        }
        Command::Extract {
            key,
            input,
            bits,
            out,
            case,
        } => {
            let stego = load_pgm(input)?;
            let codec = Codec::for_cover(&read_key(&key)?, bits, &stego, matrix_mode(case))?;
            codec.extract(&stego)?.save(out)?;
        }
        Command::Compute {
            case,
            input,
            input2,
            out,
            semantics,
            capacity,
        } => {
            let (y1, y2) = (load_pgm(input)?, load_pgm(input2)?);
            let res = match case {
                CaseArg::Add => covert::covert_add(&y1, &y2)?,
                CaseArg::Outer => covert::covert_outer(&y1, &y2, capacity)?,
                CaseArg::Inner => covert::covert_inner(&y1, &y2, semantics.into())?,
            };
            std::fs::write(out, res.to_bytes())?;
        }
        Command::Recover { key, input, bits, out } => {
            let res = CovertResult::from_bytes(&std::fs::read(input)?)?;
            let need = |what: &'static str| Error::InvalidInput(format!("{} result needs --{what}", res.case()));
            match res.case() {
                Case::Inner => emit(&format!("{}\n", covert::recover_inner(&res)?), out.as_deref())?,
                Case::Add | Case::Outer => {
                    let key = read_key(&key.ok_or_else(|| need("key"))?)?;
                    let bits = bits.ok_or_else(|| need("bits"))?;
                    if res.case() == Case::Add {
                        let m = covert::recover_add(&res, &key, bits)?;
                        let out = out.ok_or_else(|| need("out"))?;
                        m.save(out)?;
                    } else {
                        let m = covert::recover_outer(&res, &key, bits)?;
                        emit(&render_matrix(&m), out.as_deref())?;
                    }
                }
            }
        }
        Command::ExpFeasibility { common } => {
            let mut cfg = FeasibilityConfig::default();
            if let Some(t) = common.trials {
                cfg.trials = t;
            }
            if let Some(k) = common.capacity {
                cfg.add_bits = k;
            }
            let report = experiments::run_feasibility(common.seed, &cfg)?;
            emit(&report.to_string(), common.out.as_deref())?;
        }
        Command::ExpSecurity { common } => {
            let trials = common.trials.unwrap_or(100);
            let report = experiments::run_security(common.seed, trials, &common.capacities(), (512, 384))?;
            emit(&report.to_string(), common.out.as_deref())?;
        }
        Command::ExpTiming { common } => {
            let runs = common.trials.unwrap_or(5);
            let report = experiments::run_timing(common.seed, &common.capacities(), (512, 512), runs)?;
            emit(&report.to_string(), common.out.as_deref())?;
        }
        Command::ExpSteganalysis { common, corpus } => {
            let images: Vec<_> = experiments::load_corpus(&corpus)?.into_iter().map(|(_, img)| img).collect();
            let report =
                experiments::run_steganalysis(&images, &common.capacities(), common.seed, &SteganalysisConfig::default())?;
            emit(&report.to_string(), common.out.as_deref())?;
        }
    }
    Ok(())
}

/// Parses `args` (program name first) and runs the subcommand. Returns the
/// process exit status: 0 on success, 2 on usage errors, 1 otherwise.
pub fn cli_main<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let _ = e.print();
            return code;
        }
    };
    match run(cli.command) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("dccd: {}", e.to_string().replace('\n', " "));
            1
        }
    }
}
