use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use spanforge_core::backends::{ProverBounds, Template};
use spanforge_core::corpus;
use spanforge_core::frontend::commands::{self, instance_document, AdjunctionPart};
use spanforge_core::frontend::{error_exit_code, parse_document, print_document, render_error, Document, Emit, Report};
use spanforge_core::structures::AxiomMode;
use spanforge_core::{Error, RelationKind, Result};

#[derive(Parser)]
#[command(name = "spanforge", version, about = "Quotients of span categories over finite categories")]
struct Cli {
    /// Output format: table, dot or json.
    #[arg(long, global = true, default_value = "table", value_parser = parse_emit)]
    emit: Emit,
    /// Seed for generated instances.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Write output here instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

fn parse_emit(s: &str) -> std::result::Result<Emit, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

#[derive(Subcommand)]
enum Command {
    /// Check category laws, classes, factorization systems, functors,
    /// restriction structures and certificates.
    Validate { file: PathBuf },
    /// Build the quotient of the span category by a relation.
    Build {
        /// span, z, a, zstar, zcirc, az or zT:<class>
        #[arg(long)]
        relation: String,
        file: PathBuf,
    },
    /// Check restriction, range or splitting axioms. Without a file the
    /// built-in and generated instances are checked.
    Check {
        #[arg(long, value_parser = ["restriction", "range", "split"])]
        axioms: String,
        /// Number of generated instances when no file is given.
        #[arg(long, default_value_t = 100)]
        count: usize,
        file: Option<PathBuf>,
    },
    /// Unit, counit and triangle identities of the partial map adjunction.
    Adjunction {
        #[arg(value_parser = ["eta", "epsilon", "triangles", "lemma91"])]
        part: String,
        file: PathBuf,
    },
    /// Certificates over finite sets and finite preorders.
    Cert {
        #[command(subcommand)]
        action: CertAction,
    },
    /// Compare two relations as partitions of the span classes.
    Compare {
        #[arg(long)]
        left: String,
        #[arg(long)]
        right: String,
        file: PathBuf,
    },
    /// Print generated instances; with --out, write one file each into
    /// that directory.
    Corpus {
        #[arg(long, default_value_t = 10)]
        count: usize,
    },
}

#[derive(Subcommand)]
enum CertAction {
    Verify {
        file: PathBuf,
    },
    Derive {
        #[arg(long)]
        template: String,
        file: PathBuf,
    },
    Search {
        #[arg(long, default_value_t = 4)]
        max_apex: usize,
        #[arg(long, default_value_t = 6)]
        max_steps: usize,
        file: PathBuf,
    },
}

fn load(path: &Path) -> Result<Document> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Input(format!("{}: {e}", path.display())))?;
    parse_document(&text)
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Validate { .. } => "validate",
        Command::Build { .. } => "build",
        Command::Check { .. } => "check",
        Command::Adjunction { .. } => "adjunction",
        Command::Cert { .. } => "cert",
        Command::Compare { .. } => "compare",
        Command::Corpus { .. } => "corpus",
    }
}

fn axiom_mode(s: &str) -> AxiomMode {
    match s {
        "range" => AxiomMode::Range,
        "split" => AxiomMode::Split,
        _ => AxiomMode::Restriction,
    }
}

fn run(cli: &Cli) -> Result<Report> {
    match &cli.command {
        Command::Validate { file } => commands::validate(&load(file)?),
        Command::Build { relation, file } => {
            let kind: RelationKind = relation.parse()?;
            commands::build(&load(file)?, &kind)
        }
        Command::Check { axioms, count, file } => {
            let mode = axiom_mode(axioms);
            match file {
                Some(f) => commands::check(&load(f)?, mode),
                None => {
                    let mut all = corpus::builtin();
                    all.extend(corpus::random_instances(cli.seed, *count)?);
                    commands::check_instances(&all, mode)
                }
            }
        }
        Command::Adjunction { part, file } => {
            let part: AdjunctionPart = part.parse()?;
            commands::adjunction(&load(file)?, part)
        }
        Command::Cert { action } => match action {
            CertAction::Verify { file } => commands::cert_verify(&load(file)?),
            CertAction::Derive { template, file } => {
                let t: Template = template.parse()?;
                commands::cert_derive(&load(file)?, t)
            }
            CertAction::Search {
                max_apex,
                max_steps,
                file,
            } => commands::cert_search(
                &load(file)?,
                ProverBounds {
                    max_apex: *max_apex,
                    max_steps: *max_steps,
                },
            ),
        },
        Command::Compare { left, right, file } => {
            let (l, r): (RelationKind, RelationKind) = (left.parse()?, right.parse()?);
            commands::compare(&load(file)?, &l, &r)
        }
        Command::Corpus { .. } => unreachable!("handled by corpus()"),
    }
}

/// Standard output, where a closed pipe (`spanforge corpus | head`) is not an error.
fn stdout(text: &str) {
    use std::io::Write;
    let _ = std::io::stdout().lock().write_all(text.as_bytes());
}

fn write_out(out: &Option<PathBuf>, text: &str) -> Result<()> {
    match out {
        Some(p) => std::fs::write(p, text).map_err(|e| Error::Input(format!("{}: {e}", p.display()))),
        None => {
            stdout(text);
            Ok(())
        }
    }
}

fn corpus(cli: &Cli, count: usize) -> Result<()> {
    let instances = corpus::random_instances(cli.seed, count)?;
    match &cli.out {
        Some(dir) => {
            std::fs::create_dir_all(dir).map_err(|e| Error::Input(format!("{}: {e}", dir.display())))?;
            for inst in &instances {
                let path = dir.join(format!("{}.sf", inst.name));
                let text = print_document(&instance_document(inst));
                std::fs::write(&path, text).map_err(|e| Error::Input(format!("{}: {e}", path.display())))?;
            }
            Ok(())
        }
        None => {
            for inst in &instances {
                stdout(&format!("# {}\n{}\n", inst.name, print_document(&instance_document(inst))));
            }
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let name = command_name(&cli.command);
    let result = match &cli.command {
        Command::Corpus { count } => corpus(&cli, *count).map(|_| 0),
        _ => run(&cli).and_then(|rep| {
            write_out(&cli.out, &rep.render(cli.emit))?;
            Ok(rep.exit_code())
        }),
    };
    match result {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            let text = render_error(name, &e, cli.emit);
            match cli.emit {
                Emit::Json => stdout(&text),
                _ => eprint!("{text}"),
            }
            ExitCode::from(error_exit_code(&e) as u8)
        }
    }
}
