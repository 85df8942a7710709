//! R-MAT streaming update benchmark.
//!
//! ```text
//! bench single  --scale 22 --edges 10000000 --batch 100000 --cuts many-narrow
//! bench scaling --instances 4 --cuts few-wide
//! bench sweep   --cuts none --cuts few-wide --cuts many-narrow
//! ```

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use hyperassoc::bench::{self, BenchConfig, CutChoice, RunReport};
use hyperassoc::rmat::RmatConfig;
use hyperassoc::{Result, Semiring};

#[derive(Parser)]
#[command(
    name = "bench",
    about = "Hierarchical associative array streaming benchmark"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// One instance, one cut schedule.
    Single(Common),
    /// Several share-nothing instances running concurrently.
    Scaling(Common),
    /// Several cut schedules on the identical stream.
    Sweep(Common),
}

#[derive(Args)]
struct Common {
    /// log2 of the vertex count.
    #[arg(long, default_value_t = 22)]
    scale: u32,
    /// Total edges per instance.
    #[arg(long, default_value_t = 10_000_000)]
    edges: u64,
    /// Edges per batch.
    #[arg(long, default_value_t = 100_000)]
    batch: usize,
    /// Cut schedule: none, few-wide, many-narrow, layers:N or a comma list.
    /// Repeat for sweep.
    #[arg(long)]
    cuts: Vec<String>,
    #[arg(long, default_value = "plus_times")]
    semiring: String,
    #[arg(long, default_value_t = 1)]
    instances: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Batches excluded from the cumulative rate.
    #[arg(long, default_value_t = 2)]
    warmup: usize,
    /// Output directory for CSV files.
    #[arg(long, default_value = "bench-out")]
    out: PathBuf,
    /// Dump the raw edge stream of instance 0 as TSV triples.
    #[arg(long)]
    dump_triples: Option<PathBuf>,
}

impl Common {
    fn config(&self, cuts: CutChoice) -> Result<BenchConfig> {
        let cfg = BenchConfig {
            rmat: RmatConfig {
                scale: self.scale,
                total_edges: self.edges,
                batch_size: self.batch,
                seed: self.seed,
                ..RmatConfig::default()
            },
            cuts,
            semiring: Semiring::builtin(&self.semiring)?,
            instances: self.instances,
            warmup_batches: self.warmup,
            out_dir: Some(self.out.clone()),
            dump_triples: self.dump_triples.clone(),
        };
        cfg.validate()?;
        Ok(cfg)
    }

    fn presets(&self) -> Result<Vec<CutChoice>> {
        self.cuts.iter().map(|c| CutChoice::parse(c)).collect()
    }

    fn single_preset(&self) -> Result<CutChoice> {
        match self.presets()?.as_slice() {
            [] => Ok(CutChoice::many_narrow()),
            [one] => Ok(one.clone()),
            many => Err(hyperassoc::Error::Config(format!(
                "--cuts given {} times; only sweep accepts several",
                many.len()
            ))),
        }
    }
}

fn print_report(report: &RunReport) {
    println!("# {}", report.comment());
    for inst in &report.instances {
        println!(
            "instance {} seed {}: {} edges, cum_rate {:.0} updates/s, layers {:?}, cascades {:?}, flush nnz {}{}",
            inst.instance,
            inst.seed,
            inst.total_edges,
            inst.cum_rate(),
            inst.final_layer_nnz,
            inst.total_cascades(),
            inst.flush_nnz,
            match inst.reference_nnz {
                Some(n) => format!(" (verified against flat reference, {n} nnz)"),
                None => String::new(),
            }
        );
    }
    println!("aggregate rate: {:.0} updates/s", report.aggregate_rate);
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Single(c) => {
            let mut cfg = c.config(c.single_preset()?)?;
            cfg.instances = 1;
            print_report(&bench::run_single(&cfg)?);
        }
        Command::Scaling(c) => {
            let cfg = c.config(c.single_preset()?)?;
            print_report(&bench::run_scaling(&cfg)?);
        }
        Command::Sweep(c) => {
            let mut presets = c.presets()?;
            if presets.is_empty() {
                presets = vec![
                    CutChoice::none(),
                    CutChoice::few_wide(),
                    CutChoice::many_narrow(),
                ];
            }
            let cfg = c.config(presets[0].clone())?;
            let (rows, _) = bench::run_sweep(&cfg, &presets)?;
            println!("# {}", bench::sweep_echo(&cfg, &presets));
            println!("{}", bench::SWEEP_HEADER);
            for r in rows {
                println!("{}", r.csv_line());
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("bench: {e}");
            ExitCode::FAILURE
        }
    }
}
