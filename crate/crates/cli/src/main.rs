//! `ncdisk`: command-line front end.
//!
//! Exit codes: 0 on success or PASS, 1 when a computation reports a
//! mathematical failure, 2 on usage or input errors.

use std::fs;
use std::io::{self, Read};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use ncdisk::atiyah::{
    cech_difference, coboundary_solve, omega2_extract, verify_witness, BilinearMapForm, Coboundary,
};
use ncdisk::aut::NCAutomorphism;
use ncdisk::chart::{gauge_connection, Gauge};
use ncdisk::comm::CommSeries;
use ncdisk::conn::{ConnectionData, Flatness, TwistedShape};
use ncdisk::der::NCDerivation;
use ncdisk::dga::DgaElement;
use ncdisk::form::BaseForm;
use ncdisk::lcs::{lcs_ideal_table, lcs_quotient_table, DimensionTable};
use ncdisk::oracle::{dense_series, oracle_ideal_dims, oracle_lcs_dims, oracle_leibniz_apply};
use ncdisk::random::{Sampler, DEFAULT_SEED};
use ncdisk::series::NCSeries;
use ncdisk::text::Q;
use ncdisk::word::Word;
use ncdisk::Error;

#[derive(Parser)]
#[command(name = "ncdisk", version, about = "Exact algebra on the noncommutative formal disk")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Dimension table of the lower central series ideals M_k (or quotients N_k)
    LcsDims {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        kmax: usize,
        #[arg(long)]
        dmax: usize,
        /// Print JSON instead of an aligned table
        #[arg(long)]
        json: bool,
        /// Report N_k = M_k / M_{k+1} instead of M_k
        #[arg(long)]
        quotient: bool,
    },
    /// Augmented automorphisms; each input holds one image per line
    Aut {
        #[command(subcommand)]
        op: AutOp,
    },
    /// Derivations; each input holds one image per line
    Der {
        #[command(subcommand)]
        op: DerOp,
    },
    /// Check D^2 = 0 and the leading-term shape of a connection
    FlatCheck {
        #[arg(long)]
        conn: PathBuf,
    },
    /// Echelon basis of flat sections inside a degree box
    FlatSections {
        #[arg(long)]
        conn: PathBuf,
        #[arg(long)]
        fiber_max: usize,
        #[arg(long)]
        base_max: usize,
    },
    /// Quadratic part of a connection and chart-level coboundaries
    Atiyah {
        #[command(subcommand)]
        op: AtiyahOp,
    },
    /// Connection constructors
    Conn {
        #[command(subcommand)]
        op: ConnOp,
    },
    /// Validate text against one of the grammars
    Parse {
        /// Only report OK or the first error
        #[arg(long)]
        check: bool,
        #[arg(long, value_enum, default_value = "series")]
        kind: Kind,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 8)]
        trunc: usize,
        #[arg(long, default_value_t = 8)]
        base_trunc: usize,
        /// Input file; stdin when absent
        input: Option<PathBuf>,
    },
    /// Seeded randomized self-check of the core identities
    Check {
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long, default_value_t = 20)]
        trials: usize,
    },
    #[command(hide = true)]
    Oracle {
        #[command(subcommand)]
        op: OracleOp,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Series,
    Comm,
    Form,
    Dga,
}

#[derive(Args)]
struct Shape {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    trunc: usize,
}

#[derive(Subcommand)]
enum AutOp {
    /// (g∘h)(x_i) = h_i(g)
    Compose {
        #[command(flatten)]
        shape: Shape,
        g: PathBuf,
        h: PathBuf,
    },
    Invert {
        #[command(flatten)]
        shape: Shape,
        input: Option<PathBuf>,
    },
    Abelianize {
        #[command(flatten)]
        shape: Shape,
        input: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum DerOp {
    /// Apply a derivation to a series given as text
    Apply {
        #[command(flatten)]
        shape: Shape,
        der: PathBuf,
        #[arg(long)]
        to: String,
    },
    Bracket {
        #[command(flatten)]
        shape: Shape,
        a: PathBuf,
        b: PathBuf,
    },
    Exp {
        #[command(flatten)]
        shape: Shape,
        input: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum AtiyahOp {
    /// Read off omega_2 as JSON
    Extract {
        #[arg(long)]
        conn: PathBuf,
    },
    /// Entrywise difference of two omega_2 JSON files
    Diff { a: PathBuf, b: PathBuf },
    /// Solve dg = delta with entries of degree <= bound
    Coboundary {
        form: PathBuf,
        #[arg(long, default_value_t = 4)]
        bound: usize,
    },
}

#[derive(Subcommand)]
enum ConnOp {
    /// The connection D(xi_i) = db_i as JSON
    Tautological {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        fiber_trunc: usize,
        #[arg(long)]
        base_trunc: usize,
    },
    /// Transform a connection by a gauge given as JSON
    Gauge {
        #[arg(long)]
        conn: PathBuf,
        #[arg(long)]
        gauge: PathBuf,
    },
    /// A seeded random gauge as JSON
    RandomGauge {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
    },
}

#[derive(Subcommand)]
enum OracleOp {
    LcsDims {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        kmax: usize,
        #[arg(long)]
        dmax: usize,
        #[arg(long)]
        quotient: bool,
    },
    Leibniz {
        #[command(flatten)]
        shape: Shape,
        der: PathBuf,
        /// Letters of the word, 1-based and comma separated
        #[arg(long, value_delimiter = ',')]
        word: Vec<usize>,
    },
}

enum Failure {
    /// Bad flags, unreadable or malformed input.
    Usage(String),
    /// The computation ran and reported a negative result.
    Math(String),
}

type Outcome = Result<String, Failure>;

fn classify(e: Error) -> Failure {
    match e {
        Error::Syntax { .. } | Error::IndexOutOfRange { .. } | Error::DimensionMismatch(_) | Error::Invalid(_) => {
            Failure::Usage(e.to_string())
        }
        _ => Failure::Math(e.to_string()),
    }
}

trait OrFail<T> {
    fn or_fail(self) -> Result<T, Failure>;
}

impl<T> OrFail<T> for ncdisk::Result<T> {
    fn or_fail(self) -> Result<T, Failure> {
        self.map_err(classify)
    }
}

fn read_input(path: Option<&PathBuf>) -> Result<String, Failure> {
    match path {
        Some(p) if p.as_os_str() != "-" => {
            fs::read_to_string(p).map_err(|e| Failure::Usage(format!("{}: {e}", p.display())))
        }
        _ => {
            let mut s = String::new();
            io::stdin()
                .read_to_string(&mut s)
                .map_err(|e| Failure::Usage(format!("stdin: {e}")))?;
            Ok(s)
        }
    }
}

fn read_aut(path: Option<&PathBuf>, shape: &Shape) -> Result<NCAutomorphism, Failure> {
    NCAutomorphism::parse(&read_input(path)?, shape.n, shape.trunc).or_fail()
}

fn read_der(path: Option<&PathBuf>, shape: &Shape) -> Result<NCDerivation, Failure> {
    NCDerivation::parse(&read_input(path)?, shape.n, shape.trunc).or_fail()
}

fn read_conn(path: &PathBuf) -> Result<ConnectionData, Failure> {
    ConnectionData::from_json_str(&read_input(Some(path))?).or_fail()
}

fn read_form(path: &PathBuf) -> Result<BilinearMapForm, Failure> {
    let text = read_input(Some(path))?;
    let j = serde_json::from_str(&text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    BilinearMapForm::from_json(&j).or_fail()
}

fn to_json<T: serde::Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("serializable")
}

fn table(n: usize, kmax: usize, dmax: usize, quotient: bool) -> ncdisk::Result<DimensionTable> {
    if quotient {
        lcs_quotient_table(kmax, dmax, n)
    } else {
        lcs_ideal_table(kmax, dmax, n)
    }
}

fn run(cmd: Command) -> Outcome {
    match cmd {
        Command::LcsDims {
            n,
            kmax,
            dmax,
            json,
            quotient,
        } => {
            let t = table(n, kmax, dmax, quotient).or_fail()?;
            Ok(if json { to_json(&t) } else { t.to_text() })
        }
        Command::Aut { op } => match op {
            AutOp::Compose { shape, g, h } => {
                let g = read_aut(Some(&g), &shape)?;
                let h = read_aut(Some(&h), &shape)?;
                Ok(g.compose(&h).or_fail()?.to_string())
            }
            AutOp::Invert { shape, input } => Ok(read_aut(input.as_ref(), &shape)?.invert().or_fail()?.to_string()),
            AutOp::Abelianize { shape, input } => Ok(read_aut(input.as_ref(), &shape)?.abelianize().to_string()),
        },
        Command::Der { op } => match op {
            DerOp::Apply { shape, der, to } => {
                let d = read_der(Some(&der), &shape)?;
                let a = NCSeries::parse(&to, shape.n, shape.trunc).or_fail()?;
                Ok(d.apply(&a).or_fail()?.to_string())
            }
            DerOp::Bracket { shape, a, b } => {
                let a = read_der(Some(&a), &shape)?;
                let b = read_der(Some(&b), &shape)?;
                Ok(a.bracket(&b).or_fail()?.to_string())
            }
            DerOp::Exp { shape, input } => Ok(read_der(input.as_ref(), &shape)?.exp().or_fail()?.to_string()),
        },
        Command::FlatCheck { conn } => {
            let c = read_conn(&conn)?;
            if let TwistedShape::Violation { generator, reason } = c.validate_twisted_shape() {
                return Err(Failure::Math(format!("FAIL\nshape violation at {generator}: {reason}")));
            }
            match c.flatness_check() {
                Flatness::Pass => Ok("PASS".into()),
                Flatness::Counterexample { generator, value } => {
                    Err(Failure::Math(format!("FAIL\nD^2({generator}) = {value}")))
                }
            }
        }
        Command::FlatSections {
            conn,
            fiber_max,
            base_max,
        } => {
            let fs = read_conn(&conn)?.flat_sections(fiber_max, base_max).or_fail()?;
            Ok(fs.basis().iter().map(ToString::to_string).collect::<Vec<_>>().join("\n"))
        }
        Command::Atiyah { op } => match op {
            AtiyahOp::Extract { conn } => Ok(to_json(&omega2_extract(&read_conn(&conn)?).to_json())),
            AtiyahOp::Diff { a, b } => {
                let d = cech_difference(&read_form(&a)?, &read_form(&b)?).or_fail()?;
                Ok(to_json(&d.to_json()))
            }
            AtiyahOp::Coboundary { form, bound } => {
                let delta = read_form(&form)?;
                match coboundary_solve(&delta, bound).or_fail()? {
                    Coboundary::Witness(g) => {
                        debug_assert!(verify_witness(&g, &delta));
                        let lines: Vec<String> = g
                            .entries()
                            .iter()
                            .map(|(&((j, k), l), p)| format!("g[xi{} xi{} -> xi{}] = {}", j + 1, k + 1, l + 1, p.to_text("b")))
                            .collect();
                        Ok(std::iter::once("WITNESS".to_string()).chain(lines).collect::<Vec<_>>().join("\n"))
                    }
                    Coboundary::NotCoboundaryWithinBounds { bound } => {
                        Err(Failure::Math(format!("NOT A COBOUNDARY within degree {bound}")))
                    }
                }
            }
        },
        Command::Conn { op } => match op {
            ConnOp::Tautological {
                n,
                fiber_trunc,
                base_trunc,
            } => {
                if n == 0 {
                    return Err(Failure::Usage("--n must be positive".into()));
                }
                Ok(ConnectionData::tautological(n, fiber_trunc, base_trunc).to_json_string())
            }
            ConnOp::Gauge { conn, gauge } => {
                let c = read_conn(&conn)?;
                let g = Gauge::from_json_str(&read_input(Some(&gauge))?).or_fail()?;
                Ok(gauge_connection(&c, &g).or_fail()?.to_json_string())
            }
            ConnOp::RandomGauge { n, seed } => {
                if n == 0 {
                    return Err(Failure::Usage("--n must be positive".into()));
                }
                Ok(to_json(&Sampler::new(seed).gauge(n).to_json(2, 1)))
            }
        },
        Command::Parse {
            check,
            kind,
            n,
            trunc,
            base_trunc,
            input,
        } => {
            let text = read_input(input.as_ref())?;
            let text = text.trim();
            let shown = match kind {
                Kind::Series => NCSeries::parse(text, n, trunc).map(|v| v.to_string()),
                Kind::Comm => CommSeries::parse(text, n, trunc).map(|v| v.to_string()),
                Kind::Form => BaseForm::parse(text, n).map(|v| v.to_string()),
                Kind::Dga => DgaElement::parse(text, n, trunc, base_trunc).map(|v| v.to_string()),
            };
            match shown {
                Ok(v) if check => {
                    let _ = v;
                    Ok("OK".into())
                }
                Ok(v) => Ok(v),
                Err(e) => Err(Failure::Math(e.to_string())),
            }
        }
        Command::Check { seed, trials } => self_check(seed, trials),
        Command::Oracle { op } => match op {
            OracleOp::LcsDims {
                n,
                kmax,
                dmax,
                quotient,
            } => {
                if quotient {
                    Ok(oracle_lcs_dims(n, kmax, dmax).or_fail()?.to_text())
                } else {
                    let m = oracle_ideal_dims(n, kmax, dmax).or_fail()?;
                    let t = DimensionTable {
                        n,
                        rows: m
                            .into_iter()
                            .enumerate()
                            .map(|(k, dims)| ncdisk::lcs::DimensionRow { k: k + 1, dims })
                            .collect(),
                    };
                    Ok(t.to_text())
                }
            }
            OracleOp::Leibniz { shape, der, word } => {
                let d = read_der(Some(&der), &shape)?;
                if word.iter().any(|&l| l == 0 || l > shape.n) {
                    return Err(Failure::Usage(format!("--word letters must lie in 1..={}", shape.n)));
                }
                let letters: Vec<usize> = word.iter().map(|l| l - 1).collect();
                let dense = oracle_leibniz_apply(&d, &letters).or_fail()?;
                let fast = d.apply(&NCSeries::monomial(shape.n, shape.trunc, Word::from_letters(letters), Q::from_integer(1.into()))).or_fail()?;
                let agree = dense == dense_series(&fast);
                Ok(format!("{}\n{}", fast, if agree { "agrees" } else { "DISAGREES" }))
            }
        },
    }
}

fn self_check(seed: u64, trials: usize) -> Outcome {
    let mut s = Sampler::new(seed);
    let mut failures = Vec::new();
    for t in 0..trials {
        let g = s.automorphism(2, 4, 3);
        if !g.compose(&g.invert().expect("invertible")).expect("same shape").is_identity() {
            failures.push(format!("trial {t}: inverse"));
        }
        let (a, b, c) = (s.derivation(2, 4, 1, 3), s.derivation(2, 4, 1, 3), s.derivation(2, 4, 1, 3));
        let br = |x: &NCDerivation, y: &NCDerivation| x.bracket(y).expect("same shape");
        let jac = br(&a, &br(&b, &c))
            .add(&br(&b, &br(&c, &a)))
            .and_then(|x| x.add(&br(&c, &br(&a, &b))))
            .expect("same shape");
        if !jac.is_zero() {
            failures.push(format!("trial {t}: Jacobi"));
        }
        let d = s.derivation(2, 4, 0, 3);
        let w = s.word(2, 0, 4);
        let letters: Vec<usize> = w.letters().collect();
        let fast = d.apply(&NCSeries::monomial(2, 4, w, Q::from_integer(1.into()))).expect("same shape");
        if dense_series(&fast) != oracle_leibniz_apply(&d, &letters).expect("small") {
            failures.push(format!("trial {t}: Leibniz"));
        }
        let n = 1 + t % 2;
        let gauged = gauge_connection(&ConnectionData::tautological(n, 3, 2), &s.gauge(n)).expect("valid gauge");
        if !gauged.flatness_check().is_pass() {
            failures.push(format!("trial {t}: gauge flatness"));
        }
    }
    if failures.is_empty() {
        Ok(format!("PASS: {trials} trials, seed {seed}"))
    } else {
        Err(Failure::Math(format!("FAIL\n{}", failures.join("\n"))))
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(out) => {
            println!("{}", out.trim_end());
            ExitCode::SUCCESS
        }
        Err(Failure::Math(msg)) => {
            println!("{msg}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
