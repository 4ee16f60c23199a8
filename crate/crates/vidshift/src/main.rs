//! Thin CLI over the vidshift library. Exit codes: 0 success, 1 processing
//! failure, 2 usage error.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{CommandFactory, FromArgMatches, Parser, Subcommand};

use vidshift::bench::{read_test_list, BuildOptions};
use vidshift::clipio::{read_clip, write_clip};
use vidshift::report::{
    accuracy_vs_severity_csv, markdown_report, read_scores_csv, write_scores_csv,
};
use vidshift::{
    accuracy, apply, build_benchmark, enumerate_specs, parse_prediction_log, score_models,
    verify_benchmark, ApplyOptions, Category, Kind, Ladders, PerturbationSpec, ProtocolConfig,
    SeedContext,
};

#[derive(Parser)]
#[command(name = "vidshift", version, about = "Deterministic video-robustness benchmark toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Apply one perturbation to one clip
    Perturb {
        /// Perturbation kind (see --help for the full list)
        #[arg(long, value_parser = parse_kind)]
        kind: Kind,
        /// Severity level, 1-5
        #[arg(long)]
        severity: u8,
        /// Master seed
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Reuse one noise pattern for every frame instead of redrawing
        #[arg(long)]
        consistent_noise: bool,
        /// Clean clip: a directory of frames or a video file
        input: PathBuf,
        /// Output directory
        output: PathBuf,
    },
    /// Apply all (or a filtered subset of) specs to a test list
    BuildBench {
        /// CSV test list: video_id,path,label
        #[arg(long)]
        test_list: PathBuf,
        /// Master seed
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Comma-separated categories, kinds, or kind:severity cells
        #[arg(long)]
        only: Option<String>,
        /// Worker threads (0 = automatic)
        #[arg(long, default_value_t = 0)]
        workers: usize,
        /// Protocol preset: kinetics10, ucf5, hmdb5, ssv2-1
        #[arg(long, default_value = "kinetics10")]
        protocol: String,
        /// Write the manifest only; no decoding, no outputs
        #[arg(long)]
        dry_run: bool,
        /// Exit nonzero if any row failed
        #[arg(long)]
        strict: bool,
        #[arg(long)]
        consistent_noise: bool,
        /// Benchmark root directory
        out_root: PathBuf,
    },
    /// Score a prediction log into scores.csv
    Score {
        /// Prediction CSV: video_id,model,perturbation,severity,crop_id,true_label,pred
        #[arg(long)]
        predictions: PathBuf,
        /// Output scores CSV
        #[arg(long)]
        out: PathBuf,
        /// Aggregate over whatever cells are present instead of failing
        #[arg(long)]
        allow_partial: bool,
    },
    /// Emit markdown tables and plot-ready CSV from scores.csv
    Report {
        #[arg(long)]
        scores: PathBuf,
        #[arg(long)]
        out_dir: PathBuf,
    },
    /// Re-check an existing benchmark against its manifest
    Verify {
        root: PathBuf,
    },
    /// Print the severity ladder table
    DumpLadders,
}

fn parse_kind(s: &str) -> Result<Kind, String> {
    s.parse().map_err(|e| format!("{e}"))
}

fn kinds_help() -> String {
    let mut s = String::from("Perturbation kinds by category:\n");
    for cat in Category::ALL {
        s.push_str(&format!("  {cat}:"));
        for kind in cat.kinds() {
            s.push_str(&format!(" {kind}"));
        }
        s.push('\n');
    }
    s
}

fn parse_filter(only: &str) -> vidshift::Result<Vec<PerturbationSpec>> {
    let mut out = Vec::new();
    for token in only.split(',').map(str::trim).filter(|t| !t.is_empty()) {
        if let Ok(cat) = token.parse::<Category>() {
            out.extend(enumerate_specs().into_iter().filter(|s| s.kind.category() == cat));
        } else if let Ok(kind) = token.parse::<Kind>() {
            out.extend((1..=5).map(|s| PerturbationSpec::new(kind, s).unwrap()));
        } else {
            out.push(token.parse::<PerturbationSpec>()?);
        }
    }
    out.sort();
    out.dedup();
    Ok(out)
}

fn run(cmd: Cmd) -> vidshift::Result<i32> {
    match cmd {
        Cmd::Perturb { kind, severity, seed, consistent_noise, input, output } => {
            let spec = PerturbationSpec::new(kind, severity)?;
            let id = input
                .file_stem()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_else(|| "clip".into());
            let clip = read_clip(&input, &id)?;
            let opts = ApplyOptions {
                consistent_noise,
                scratch_dir: Some(output.clone()),
            };
            let applied = apply(spec, &clip, &SeedContext::new(seed), &Ladders::default(), &opts)?;
            write_clip(&applied.clip, &output)?;
            if let Some(map) = &applied.index_map {
                std::fs::write(
                    output.join("indices.txt"),
                    format!("{}\n", map.to_line(&id, kind, severity)),
                )?;
            }
            println!("{}", output.display());
            Ok(0)
        }
        Cmd::BuildBench {
            test_list,
            seed,
            only,
            workers,
            protocol,
            dry_run,
            strict,
            consistent_noise,
            out_root,
        } => {
            let list = read_test_list(std::fs::File::open(&test_list)?)?;
            let filter = only.as_deref().map(parse_filter).transpose()?;
            let opts = BuildOptions { dry_run, workers, filter, consistent_noise };
            let (manifest, stats) = build_benchmark(
                &list,
                &SeedContext::new(seed),
                &Ladders::default(),
                ProtocolConfig::preset(&protocol)?,
                &out_root,
                &opts,
            )?;
            if dry_run {
                println!("planned: {} rows", stats.planned);
            } else {
                println!(
                    "built: {}, skipped: {}, failed: {}",
                    stats.built, stats.skipped, stats.failed
                );
            }
            for row in manifest.rows.iter().filter(|r| r.error.is_some()) {
                eprintln!(
                    "failed {}:{}/{}: {}",
                    row.kind,
                    row.severity,
                    row.video_id,
                    row.error.as_deref().unwrap_or("")
                );
            }
            Ok(if strict && stats.failed > 0 { 1 } else { 0 })
        }
        Cmd::Score { predictions, out, allow_partial } => {
            let records = parse_prediction_log(std::fs::File::open(&predictions)?)?;
            let table = accuracy(&records)?;
            let models = score_models(&table, allow_partial)?;
            let mut file = std::io::BufWriter::new(std::fs::File::create(&out)?);
            write_scores_csv(&models, &mut file)?;
            println!("{}", out.display());
            Ok(0)
        }
        Cmd::Report { scores, out_dir } => {
            let models = read_scores_csv(std::fs::File::open(&scores)?)?;
            std::fs::create_dir_all(&out_dir)?;
            let tables = out_dir.join("tables.md");
            std::fs::write(&tables, markdown_report(&models))?;
            let plot = out_dir.join("accuracy_vs_severity.csv");
            let mut file = std::io::BufWriter::new(std::fs::File::create(&plot)?);
            accuracy_vs_severity_csv(&models, &mut file)?;
            println!("{}", tables.display());
            println!("{}", plot.display());
            Ok(0)
        }
        Cmd::Verify { root } => {
            let report = verify_benchmark(&root)?;
            println!(
                "checked: {}, missing: {}, corrupt: {}, failed rows: {}",
                report.checked,
                report.missing.len(),
                report.corrupt.len(),
                report.failed_rows.len()
            );
            for tag in &report.missing {
                eprintln!("missing: {tag}");
            }
            for tag in &report.corrupt {
                eprintln!("corrupt: {tag}");
            }
            Ok(if report.is_clean() { 0 } else { 1 })
        }
        Cmd::DumpLadders => {
            print!("{}", Ladders::default().dump());
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    let help = kinds_help();
    let matches = Cli::command().after_help(help).get_matches();
    let cli = match Cli::from_arg_matches(&matches) {
        Ok(cli) => cli,
        Err(e) => e.exit(),
    };
    match run(cli.command) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
