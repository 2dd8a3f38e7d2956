use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};

use polydegen::harness::{self, GenSpec, PipelineConfig};
use polydegen::io::{format_graph, parse_pattern, read_graph, CertificateFile};
use polydegen::Certificate;

#[derive(Parser)]
#[command(name = "polydegen", version, about = "Degeneracy certificates, bicliques and induced trees")]
struct Cli {
    /// Seed for generators and experiment rows without their own seed.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Node budget for each search stage.
    #[arg(long, global = true)]
    budget_nodes: Option<u64>,
    /// Skip the bound check until all searches have failed.
    #[arg(long, global = true)]
    eager: bool,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a graph, e.g. `gen gnp n=20 p=0.3`.
    Gen {
        #[arg(required = true, num_args = 1..)]
        spec: Vec<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Degeneracy, greedy colouring and τ of a graph.
    Analyze {
        graph: PathBuf,
        /// Also write the degeneracy certificate here.
        #[arg(long)]
        cert_out: Option<PathBuf>,
    },
    /// Certificate, biclique or induced copy of the target tree.
    Pipeline {
        graph: PathBuf,
        /// Target tree file (`p`, `e` and `r` lines).
        tree: Option<PathBuf>,
        /// Target given inline: `path k`, `star k` or `spider legs len`.
        #[arg(long, conflicts_with = "tree")]
        target: Option<String>,
        #[arg(long, default_value_t = 2)]
        t: usize,
        /// Write the outcome as a certificate file.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Re-check a certificate file; exit 0 valid, 1 invalid, 2 malformed.
    Verify {
        cert: PathBuf,
        /// Graph to check against instead of the one named in the file.
        #[arg(long)]
        graph: Option<PathBuf>,
    },
    /// Run a seeded sweep and print CSV.
    Experiment {
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Write each row's graph and certificate here.
        #[arg(long)]
        witness_dir: Option<PathBuf>,
        /// Fill the runtime_ms column.
        #[arg(long)]
        timing: bool,
    },
}

fn write_or_print(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(p) => std::fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Gen { spec, out } => {
            let spec: GenSpec = spec.join(" ").parse()?;
            let g = spec.generate(cli.seed.unwrap_or(0))?;
            write_or_print(out.as_deref(), &format_graph(&g))?;
        }
        Command::Analyze { graph, cert_out } => {
            let g = read_graph(&graph)?.graph;
            let (a, cert) = harness::analyze(&g, cli.budget_nodes);
            match cli.format {
                Format::Json => println!("{}", serde_json::to_string_pretty(&a)?),
                Format::Text => {
                    println!("n {}\nm {}\ndegeneracy {}\ngreedy_chi {}", a.n, a.m, a.degeneracy, a.greedy_chi);
                    println!("tau {}{}", a.tau, if a.tau_exhausted { " (lower bound, budget exhausted)" } else { "" });
                }
            }
            if let Some(p) = cert_out {
                let file = CertificateFile { graph: Some(absolute(&graph)?), certificate: Certificate::Degeneracy(cert) };
                std::fs::write(&p, file.to_json())?;
            }
        }
        Command::Pipeline { graph, tree, target, t, out } => {
            let g = read_graph(&graph)?.graph;
            let h = match (tree, target) {
                (Some(p), _) => parse_pattern(&std::fs::read_to_string(&p).with_context(|| format!("reading {}", p.display()))?)?,
                (None, Some(s)) => harness::parse_target(&s)?,
                (None, None) => bail!("give a tree file or --target"),
            };
            if t == 0 {
                bail!("--t must be positive");
            }
            let cfg = PipelineConfig { t, budget_nodes: cli.budget_nodes, eager: cli.eager };
            let report = harness::pipeline(&g, &h, &cfg);
            let file = report
                .certificate()
                .map(|certificate| -> Result<_> { Ok(CertificateFile { graph: Some(absolute(&graph)?), certificate }) })
                .transpose()?;
            match cli.format {
                Format::Json => match &file {
                    Some(f) => print!("{}", f.to_json()),
                    None => println!("{{\"kind\": \"budget\"}}"),
                },
                Format::Text => {
                    println!("outcome {}", report.kind());
                    for line in &report.provenance {
                        println!("  {line}");
                    }
                }
            }
            if let (Some(p), Some(f)) = (out, &file) {
                std::fs::write(&p, f.to_json())?;
            }
        }
        Command::Verify { cert, graph } => {
            let v = harness::verify_file(&cert, graph.as_deref());
            if v.code == harness::EXIT_VALID {
                println!("{}", v.message);
            } else {
                eprintln!("{}", v.message);
            }
            return Ok(ExitCode::from(v.code as u8));
        }
        Command::Experiment { config, out, witness_dir, timing } => {
            let text = std::fs::read_to_string(&config).with_context(|| format!("reading {}", config.display()))?;
            let mut cfg = harness::parse_config(&text, cli.seed)?;
            if let Some(b) = cli.budget_nodes {
                cfg.budget_nodes = Some(b);
            }
            cfg.eager |= cli.eager;
            let rows = harness::run_experiment(&cfg, timing)?;
            if let Some(dir) = witness_dir {
                harness::write_witnesses(&dir, &rows)?;
            }
            write_or_print(out.as_deref(), &harness::experiment_csv(&rows))?;
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn absolute(p: &Path) -> Result<String> {
    let abs = std::fs::canonicalize(p).with_context(|| format!("resolving {}", p.display()))?;
    Ok(abs.to_string_lossy().into_owned())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(harness::EXIT_MALFORMED as u8)
        }
    }
}
