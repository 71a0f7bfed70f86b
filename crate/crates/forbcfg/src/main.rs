//! Command-line surface. Identical inputs and flags produce byte-identical
//! stdout; diagnostics go to stderr.
//!
//! Exit codes: 0 success (`contains` uses 1 for "no"; `verify` uses 2 for
//! reject and 3 for malformed), 64 usage, 65 unparseable or invalid data,
//! 66 file access, 70 internal guard exceeded.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand, ValueEnum};

use forbcfg::classify::{enumerate_boundary, ClassifyError};
use forbcfg::config::{generator, ConfigError, Configuration, FactorKind};
use forbcfg::containment::contains;
use forbcfg::forb::{forb_exact, ForbError};
use forbcfg::hardness::{parse_dimacs, reduction_matrix, DimacsError, HardnessError};
use forbcfg::io::{
    parse_certificate, parse_fc, parse_fcm, write_certificate, write_fc, write_fcm, FormatError,
};
use forbcfg::xcompute::{verify_certificate, x_of_with, CertificateVerdict, XError, XOptions};

const EXIT_USAGE: u8 = 64;
const EXIT_DATA: u8 = 65;
const EXIT_FILE: u8 = 66;
const EXIT_GUARD: u8 = 70;

#[derive(Parser)]
#[command(name = "forbcfg", version, about = "Exact toolkit for forbidden configurations")]
struct Cli {
    /// Configuration file format for inputs and outputs, where applicable.
    #[arg(long, global = true, value_enum, default_value_t = FileFormat::Dense)]
    format: FileFormat,
    /// Worker threads for the X search; 1 keeps timing reproducible.
    #[arg(long, global = true, default_value_t = 1)]
    jobs: usize,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FileFormat {
    /// Dense rows (.fc)
    Dense,
    /// Multiplicity vector (.fcm)
    Mult,
}

#[derive(Clone, Copy, ValueEnum)]
enum GenKind {
    Identity,
    Identityc,
    Tower,
}

#[derive(Subcommand)]
enum Cmd {
    /// Compute X(F) and an avoiding shape for a configuration file.
    X {
        file: PathBuf,
        /// Write a certificate for X(F) < X+1 in X-CERT format.
        #[arg(long)]
        certificate: Option<PathBuf>,
    },
    /// Decide whether the first configuration occurs in the second.
    Contains { f_file: PathBuf, a_file: PathBuf },
    /// Exact forb(m, F) with a maximum avoiding witness.
    Forb { m: u32, f_file: PathBuf },
    /// Build the coloring-reduction configuration F(G) from a DIMACS graph.
    Reduce {
        graph: PathBuf,
        /// Reduction parameter; defaults to the minimum n + 2.
        #[arg(long = "M")]
        m_param: Option<u32>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check a certificate against a configuration file.
    Verify { f_file: PathBuf, cert_file: PathBuf },
    /// Report minimal/maximal configurations with X = K on S rows.
    Classify {
        s: usize,
        k: u32,
        #[arg(long, default_value_t = 6)]
        max_cols: usize,
    },
    /// Emit a generator matrix (identity, identity complement, or tower).
    Gen {
        kind: GenKind,
        r: u32,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

struct CliError {
    code: u8,
    message: String,
}

impl CliError {
    fn new(code: u8, message: impl Into<String>) -> Self {
        CliError { code, message: message.into() }
    }
}

impl From<FormatError> for CliError {
    fn from(e: FormatError) -> Self {
        CliError::new(EXIT_DATA, e.to_string())
    }
}

impl From<ConfigError> for CliError {
    fn from(e: ConfigError) -> Self {
        let code = match e {
            ConfigError::TooManyRows { .. } | ConfigError::CanonicalKeyGuard { .. } => EXIT_GUARD,
            _ => EXIT_DATA,
        };
        CliError::new(code, e.to_string())
    }
}

impl From<XError> for CliError {
    fn from(e: XError) -> Self {
        let code = match e {
            XError::RowGuard { .. } => EXIT_GUARD,
            _ => EXIT_DATA,
        };
        CliError::new(code, e.to_string())
    }
}

impl From<ForbError> for CliError {
    fn from(e: ForbError) -> Self {
        let code = match e {
            ForbError::RowGuard { .. } => EXIT_GUARD,
            ForbError::Unavoidable => EXIT_DATA,
        };
        CliError::new(code, e.to_string())
    }
}

impl From<DimacsError> for CliError {
    fn from(e: DimacsError) -> Self {
        CliError::new(EXIT_DATA, e.to_string())
    }
}

impl From<HardnessError> for CliError {
    fn from(e: HardnessError) -> Self {
        let code = match e {
            HardnessError::VertexGuard { .. } => EXIT_GUARD,
            HardnessError::X(XError::RowGuard { .. }) => EXIT_GUARD,
            _ => EXIT_DATA,
        };
        CliError::new(code, e.to_string())
    }
}

impl From<ClassifyError> for CliError {
    fn from(e: ClassifyError) -> Self {
        let code = match e {
            ClassifyError::RowGuard { .. } | ClassifyError::ColsGuard { .. } => EXIT_GUARD,
            ClassifyError::X(XError::RowGuard { .. }) => EXIT_GUARD,
            ClassifyError::X(_) | ClassifyError::Config(_) => EXIT_DATA,
        };
        CliError::new(code, e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = e.print();
                return ExitCode::SUCCESS;
            }
            eprint!("{e}");
            return ExitCode::from(EXIT_USAGE);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("forbcfg: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}

fn read_file(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path)
        .map_err(|e| CliError::new(EXIT_FILE, format!("{}: {e}", path.display())))
}

fn write_file(path: &Path, content: &str) -> Result<(), CliError> {
    fs::write(path, content)
        .map_err(|e| CliError::new(EXIT_FILE, format!("{}: {e}", path.display())))
}

fn load_configuration(path: &Path, format: FileFormat) -> Result<Configuration, CliError> {
    let text = read_file(path)?;
    let cfg = match format {
        FileFormat::Dense => parse_fc(&text)?,
        FileFormat::Mult => parse_fcm(&text)?,
    };
    Ok(cfg)
}

fn render_configuration(cfg: &Configuration, format: FileFormat) -> String {
    match format {
        FileFormat::Dense => write_fc(cfg),
        FileFormat::Mult => write_fcm(cfg),
    }
}

fn run(cli: Cli) -> Result<u8, CliError> {
    if cli.jobs == 0 {
        return Err(CliError::new(EXIT_USAGE, "--jobs must be at least 1"));
    }
    match cli.cmd {
        Cmd::X { file, certificate } => {
            let f = load_configuration(&file, cli.format)?;
            let result = x_of_with(&f, XOptions { reduce: true, jobs: cli.jobs })?;
            if let Some(path) = certificate {
                write_file(&path, &write_certificate(&result.certificate))?;
            }
            println!("X = {}", result.x_value);
            println!("avoider: {}", result.avoiding_shape);
            Ok(0)
        }
        Cmd::Contains { f_file, a_file } => {
            let f = load_configuration(&f_file, cli.format)?;
            let a = load_configuration(&a_file, cli.format)?;
            match contains(&f, &a) {
                Some(embedding) => {
                    println!("yes");
                    let map: Vec<String> =
                        embedding.row_map.iter().map(|r| r.to_string()).collect();
                    println!("row_map: {}", map.join(" "));
                    for (alpha, have) in &embedding.witness_counts {
                        let need = f.mult()[*alpha as usize];
                        println!("column {alpha}: need {need}, have {have}");
                    }
                    Ok(0)
                }
                None => {
                    println!("no");
                    Ok(1)
                }
            }
        }
        Cmd::Forb { m, f_file } => {
            let f = load_configuration(&f_file, cli.format)?;
            let result = forb_exact(m, &f)?;
            println!("forb = {}", result.value);
            print!("{}", render_configuration(&result.witness, cli.format));
            Ok(0)
        }
        Cmd::Reduce { graph, m_param, out } => {
            let text = read_file(&graph)?;
            let parsed = parse_dimacs(&text)?;
            if parsed.duplicate_edges > 0 {
                eprintln!("forbcfg: warning: {} duplicate edge(s) collapsed", parsed.duplicate_edges);
            }
            let m_param = m_param.unwrap_or(parsed.graph.n() as u32 + 2);
            let f = reduction_matrix(&parsed.graph, m_param)?;
            let rendered = write_fc(&f);
            match out {
                Some(path) => write_file(&path, &rendered)?,
                None => print!("{rendered}"),
            }
            Ok(0)
        }
        Cmd::Verify { f_file, cert_file } => {
            let f = load_configuration(&f_file, cli.format)?;
            let cert_text = read_file(&cert_file)?;
            let cert = match parse_certificate(&cert_text, f.rows()) {
                Ok(cert) => cert,
                Err(e) => {
                    eprintln!("forbcfg: {e}");
                    println!("malformed");
                    return Ok(3);
                }
            };
            match verify_certificate(&f, &cert) {
                CertificateVerdict::Accepted => {
                    println!("accepted");
                    Ok(0)
                }
                CertificateVerdict::Rejected(reason) => {
                    eprintln!("forbcfg: {reason}");
                    println!("rejected");
                    Ok(2)
                }
                CertificateVerdict::Malformed(reason) => {
                    eprintln!("forbcfg: {reason}");
                    println!("malformed");
                    Ok(3)
                }
            }
        }
        Cmd::Classify { s, k, max_cols } => {
            let report = enumerate_boundary(s, k, max_cols)?;
            print!("{}", render_boundary_report(&report.minimal, &report.maximal));
            Ok(0)
        }
        Cmd::Gen { kind, r, out } => {
            let kind = match kind {
                GenKind::Identity => FactorKind::Identity,
                GenKind::Identityc => FactorKind::IdentityComplement,
                GenKind::Tower => FactorKind::Tower,
            };
            let cfg = generator(kind, r).map_err(|e| match e {
                ConfigError::GeneratorSize { .. } => CliError::new(EXIT_GUARD, e.to_string()),
                other => CliError::from(other),
            })?;
            let rendered = render_configuration(&cfg, cli.format);
            match out {
                Some(path) => write_file(&path, &rendered)?,
                None => print!("{rendered}"),
            }
            Ok(0)
        }
    }
}

fn render_boundary_report(minimal: &[Configuration], maximal: &[Configuration]) -> String {
    let mut out = String::new();
    for (header, list) in [("# minimal", minimal), ("# maximal", maximal)] {
        out.push_str(header);
        out.push('\n');
        for (i, cfg) in list.iter().enumerate() {
            if i > 0 {
                out.push_str("---\n");
            }
            out.push_str(&write_fc(cfg));
        }
    }
    out
}
