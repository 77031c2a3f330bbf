use std::fmt::Write as _;
use std::io::{self, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use pluralism::io::emit_positions;
use pluralism::{
    canonical_index, classify, coanswered_partition, emit_report, enumerate_positions,
    merge_questions, parse_compact_spec, parse_model_document, position_from_index,
    serialize_model, verify_laws, Format, Model, Position, ReportRef, Space,
};

/// Classify question/answer/position models and check the taxonomy laws.
#[derive(Parser)]
#[command(name = "pluralism", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Classify a model.
    Classify {
        #[command(flatten)]
        input: Input,
        #[arg(long, default_value_t = Format::Text)]
        format: Format,
    },
    /// List every position of a space in canonical order.
    Enumerate {
        #[arg(long)]
        space: Space,
        #[arg(long, default_value_t = Format::Text)]
        format: Format,
    },
    /// Print the canonical index of an assignment.
    Index {
        #[arg(long)]
        space: Space,
        /// Answer labels, one per question, comma separated.
        #[arg(long, value_delimiter = ',', required = true)]
        assign: Vec<String>,
    },
    /// Print the assignment with a given canonical index.
    Position {
        #[arg(long)]
        space: Space,
        #[arg(long)]
        index: u64,
    },
    /// Merge co-answered questions and print the reduced model.
    Reduce {
        /// Model document; `-` reads standard input.
        file: PathBuf,
        #[arg(long, default_value_t = Format::Text)]
        format: Format,
    },
    /// Check the classification laws over every non-empty subset of a space.
    Verify {
        #[arg(long)]
        space: Space,
        #[arg(long, default_value_t = Format::Text)]
        format: Format,
    },
    /// Explain the classification of a model, condition by condition.
    Explain {
        #[command(flatten)]
        input: Input,
    },
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct Input {
    /// Model document; `-` reads standard input.
    file: Option<PathBuf>,
    /// Compact model, e.g. `3x2:{1,8}`.
    #[arg(long)]
    spec: Option<String>,
}

enum Failure {
    Input(String),
    Laws,
}

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure::Input(e.to_string())
    }
}

fn read_document(path: &PathBuf) -> Result<Vec<u8>, Failure> {
    let mut bytes = Vec::new();
    if path.as_os_str() == "-" {
        io::stdin().read_to_end(&mut bytes)?;
    } else {
        bytes = std::fs::read(path).map_err(|e| format!("{}: {e}", path.display()))?;
    }
    Ok(bytes)
}

fn load_file(path: &PathBuf) -> Result<Model, Failure> {
    let bytes = read_document(path)?;
    let model = parse_model_document(&bytes).map_err(|e| format!("{}: {e}", path.display()))?;
    match model.duplicates_dropped() {
        0 => {}
        1 => eprintln!("warning: 1 duplicate position ignored"),
        k => eprintln!("warning: {k} duplicate positions ignored"),
    }
    Ok(model)
}

fn load(input: &Input) -> Result<Model, Failure> {
    match (&input.file, &input.spec) {
        (Some(path), _) => load_file(path),
        (None, Some(spec)) => Ok(parse_compact_spec(spec)?),
        (None, None) => unreachable!("clap requires one input"),
    }
}

fn run(command: Command) -> Result<String, Failure> {
    Ok(match command {
        Command::Classify { input, format } => {
            let model = load(&input)?;
            let report = classify(&model);
            emit_report(
                ReportRef::Taxon {
                    model: &model,
                    report: &report,
                },
                format,
            )
        }
        Command::Explain { input } => {
            let model = load(&input)?;
            let report = classify(&model);
            emit_report(
                ReportRef::Taxon {
                    model: &model,
                    report: &report,
                },
                Format::Text,
            )
        }
        Command::Enumerate { space, format } => {
            let positions = enumerate_positions(&space)?;
            emit_positions(&space, &positions, format)
        }
        Command::Index { space, assign } => {
            let answers = assign
                .iter()
                .map(|label| {
                    space
                        .answer_ordinal(label.trim())
                        .ok_or_else(|| format!("unknown answer label {label:?}"))
                })
                .collect::<Result<Vec<_>, _>>()?;
            format!("{}\n", canonical_index(&space, &Position::single(answers))?)
        }
        Command::Position { space, index } => {
            let position = position_from_index(&space, index)?;
            let labels: Vec<_> = (0..space.n())
                .map(|q| position.cell(q).render(&space))
                .collect();
            format!("{}\n", labels.join(","))
        }
        Command::Reduce { file, format } => {
            let model = load_file(&file)?;
            let merged = merge_questions(&model)?;
            match format {
                Format::Json => serialize_model(&merged),
                Format::Text => {
                    let partition = coanswered_partition(&model);
                    let space = model.space();
                    let mut out = String::new();
                    for (label, class) in partition.merged_labels.iter().zip(&partition.classes) {
                        let members: Vec<_> =
                            class.iter().map(|&q| space.question_label(q)).collect();
                        let _ = writeln!(out, "{label}: {}", members.join(", "));
                    }
                    let _ = writeln!(out, "space: {} -> {}", space, merged.space());
                    for i in 0..merged.len() {
                        let _ = writeln!(
                            out,
                            "{} = {}",
                            merged.position_label(i),
                            merged.render_position(i)
                        );
                    }
                    out
                }
            }
        }
        Command::Verify { space, format } => {
            let report = verify_laws(&space)?;
            let text = emit_report(ReportRef::Sweep(&report), format);
            if !report.is_clean() {
                print!("{text}");
                return Err(Failure::Laws);
            }
            text
        }
    })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli.command) {
        Ok(out) => {
            let mut stdout = io::stdout().lock();
            if stdout
                .write_all(out.as_bytes())
                .and_then(|_| stdout.flush())
                .is_err()
            {
                return ExitCode::from(1);
            }
            ExitCode::SUCCESS
        }
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Laws) => {
            eprintln!("error: law violations found");
            ExitCode::from(2)
        }
    }
}
