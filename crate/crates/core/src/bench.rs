//! Streaming update benchmark.
//!
//! Feeds an R-MAT edge stream batch by batch into a [`HierArray`] and records
//! per-batch rates. One update is one submitted edge. The timed path for a
//! batch is `construct` + `update`; generation time is recorded separately.

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::time::{Instant, SystemTime, UNIX_EPOCH};

use crate::assoc::{AssocArray, TripleList};
use crate::error::{Error, Result};
use crate::hier::{CutSpec, HierArray, LayerStats};
use crate::io::{self, MetricsRow};
use crate::rmat::{rmat_stream, RmatConfig};
use crate::semiring::Semiring;

/// Runs up to this many edges are checked against a flat reference array.
pub const VERIFY_EDGE_LIMIT: u64 = 1_000_000;

/// A cut schedule with the label it was requested under.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CutChoice {
    pub label: String,
    pub cuts: CutSpec,
}

impl CutChoice {
    pub fn parse(s: &str) -> Result<Self> {
        let cuts = CutSpec::parse(s)?;
        let label = match s.trim() {
            "" | "0" => "none".to_string(),
            named @ ("none" | "few-wide" | "many-narrow") => named.to_string(),
            _ => format!("cuts-{}", cuts.to_string().replace(',', "-")),
        };
        Ok(CutChoice { label, cuts })
    }

    pub fn none() -> Self {
        CutChoice {
            label: "none".into(),
            cuts: CutSpec::none(),
        }
    }

    pub fn few_wide() -> Self {
        CutChoice {
            label: "few-wide".into(),
            cuts: CutSpec::few_wide(),
        }
    }

    pub fn many_narrow() -> Self {
        CutChoice {
            label: "many-narrow".into(),
            cuts: CutSpec::many_narrow(),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct BenchConfig {
    pub rmat: RmatConfig,
    pub cuts: CutChoice,
    pub semiring: Semiring,
    pub instances: usize,
    pub warmup_batches: usize,
    /// Directory for CSV output; nothing is written when `None`.
    pub out_dir: Option<PathBuf>,
    /// Where to dump the raw edge stream of instance 0 as TSV.
    pub dump_triples: Option<PathBuf>,
}

impl Default for BenchConfig {
    fn default() -> Self {
        BenchConfig {
            rmat: RmatConfig::default(),
            cuts: CutChoice::many_narrow(),
            semiring: Semiring::PlusTimes,
            instances: 1,
            warmup_batches: 2,
            out_dir: None,
            dump_triples: None,
        }
    }
}

impl BenchConfig {
    pub fn validate(&self) -> Result<()> {
        self.rmat.validate()?;
        if self.instances == 0 {
            return Err(Error::Config("instances must be >= 1".into()));
        }
        self.semiring.validate(1.0)?;
        Ok(())
    }

    /// One-line `key=value` echo of the resolved configuration.
    pub fn echo(&self) -> String {
        self.echo_with(&format!("cuts={}({})", self.cuts.label, self.cuts.cuts))
    }

    fn echo_with(&self, cuts: &str) -> String {
        let mut s = String::new();
        let r = &self.rmat;
        let _ = write!(
            s,
            "scale={} edges={} batch={} probs={}:{}:{}:{} seed={} {cuts} semiring={} instances={} warmup={}",
            r.scale,
            r.total_edges,
            r.batch_size,
            r.probs[0],
            r.probs[1],
            r.probs[2],
            r.probs[3],
            r.seed,
            self.semiring,
            self.instances,
            self.warmup_batches,
        );
        s
    }

    fn for_instance(&self, instance: usize) -> BenchConfig {
        let mut cfg = self.clone();
        cfg.rmat.seed = self.rmat.seed.wrapping_add(instance as u64);
        cfg
    }
}

/// Time split of one batch.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct BatchTiming {
    pub gen_seconds: f64,
    pub construct_seconds: f64,
    pub update_seconds: f64,
}

#[derive(Clone, Debug)]
pub struct InstanceReport {
    pub instance: usize,
    pub seed: u64,
    pub rows: Vec<MetricsRow>,
    pub timings: Vec<BatchTiming>,
    pub total_edges: u64,
    /// Edges and timed seconds after the warmup batches.
    pub steady_edges: u64,
    pub steady_seconds: f64,
    pub layer_stats: Vec<LayerStats>,
    pub final_layer_nnz: Vec<usize>,
    pub flush_nnz: usize,
    /// nnz of the flat reference array, for runs small enough to verify.
    pub reference_nnz: Option<usize>,
}

impl InstanceReport {
    /// Cumulative update rate excluding warmup batches.
    pub fn cum_rate(&self) -> f64 {
        rate(self.steady_edges, self.steady_seconds)
    }

    fn steady_rows(&self, warmup: usize) -> &[MetricsRow] {
        if self.rows.len() > warmup {
            &self.rows[warmup..]
        } else {
            &self.rows
        }
    }

    pub fn total_cascades(&self) -> Vec<u64> {
        self.layer_stats.iter().map(|s| s.cascades).collect()
    }
}

#[derive(Clone, Debug)]
pub struct RunReport {
    pub config: BenchConfig,
    pub instances: Vec<InstanceReport>,
    /// Total steady-state updates over the slowest instance's steady time.
    pub aggregate_rate: f64,
    pub host: String,
    pub timestamp: u64,
}

impl RunReport {
    fn new(config: BenchConfig, instances: Vec<InstanceReport>) -> Self {
        let edges: u64 = instances.iter().map(|i| i.steady_edges).sum();
        let slowest = instances
            .iter()
            .map(|i| i.steady_seconds)
            .fold(0.0, f64::max);
        RunReport {
            aggregate_rate: rate(edges, slowest),
            config,
            instances,
            host: host_name(),
            timestamp: SystemTime::now()
                .duration_since(UNIX_EPOCH)
                .map_or(0, |d| d.as_secs()),
        }
    }

    pub fn comment(&self) -> String {
        format!(
            "{} host={} timestamp={}",
            self.config.echo(),
            self.host,
            self.timestamp
        )
    }
}

fn rate(edges: u64, seconds: f64) -> f64 {
    if seconds > 0.0 {
        edges as f64 / seconds
    } else {
        0.0
    }
}

fn host_name() -> String {
    std::env::var("HOSTNAME")
        .ok()
        .or_else(|| std::fs::read_to_string("/etc/hostname").ok())
        .map(|h| h.trim().to_string())
        .filter(|h| !h.is_empty())
        .unwrap_or_else(|| "unknown".into())
}

/// Streams one instance's edges through a fresh hierarchical array.
pub fn run_instance(cfg: &BenchConfig, instance: usize) -> Result<InstanceReport> {
    let cfg = cfg.for_instance(instance);
    cfg.validate()?;
    let stream = rmat_stream(&cfg.rmat)?;
    let mut h = HierArray::new(cfg.cuts.cuts.clone(), cfg.semiring);
    let mut rows = Vec::with_capacity(stream.len());
    let mut timings = Vec::with_capacity(stream.len());
    let (mut edges, mut elapsed) = (0u64, 0.0f64);
    let (mut steady_edges, mut steady_seconds) = (0u64, 0.0f64);

    let mut gen_start = Instant::now();
    for batch in stream {
        let gen_seconds = gen_start.elapsed().as_secs_f64();
        let t0 = Instant::now();
        let array = AssocArray::construct(&batch.triples, cfg.semiring)?;
        let t1 = Instant::now();
        h.update(array)?;
        let t2 = Instant::now();
        if !h.layer_bound_holds() {
            return Err(Error::Config(format!(
                "layer bound violated after batch {}: {:?} vs cuts {}",
                batch.index,
                h.layer_nnz(),
                h.cuts()
            )));
        }

        let construct_seconds = (t1 - t0).as_secs_f64();
        let update_seconds = (t2 - t1).as_secs_f64();
        let batch_seconds = construct_seconds + update_seconds;
        let n = batch.len();
        edges += n as u64;
        elapsed += batch_seconds;
        if batch.index >= cfg.warmup_batches {
            steady_edges += n as u64;
            steady_seconds += batch_seconds;
        }
        rows.push(MetricsRow {
            batch_index: batch.index,
            batch_nnz: n,
            cumulative_edges: edges,
            batch_seconds,
            inst_rate: rate(n as u64, batch_seconds),
            cum_rate: rate(edges, elapsed),
            layer_nnz: h.layer_nnz(),
            cascades: h.stats().iter().map(|s| s.cascades).collect(),
        });
        timings.push(BatchTiming {
            gen_seconds,
            construct_seconds,
            update_seconds,
        });
        gen_start = Instant::now();
    }
    // Too few batches to have a steady state: fall back to the whole run.
    if steady_edges == 0 {
        steady_edges = edges;
        steady_seconds = elapsed;
    }

    let flushed = h.flush();
    let reference_nnz = if cfg.rmat.total_edges <= VERIFY_EDGE_LIMIT {
        let reference = flat_reference(&cfg.rmat, cfg.semiring)?;
        if reference != flushed {
            return Err(Error::Config(format!(
                "instance {instance}: hierarchical flush ({} nnz) differs from flat reference ({} nnz)",
                flushed.nnz(),
                reference.nnz()
            )));
        }
        Some(reference.nnz())
    } else {
        None
    };

    if instance == 0 {
        if let Some(path) = &cfg.dump_triples {
            dump_stream(&cfg.rmat, path)?;
        }
    }

    Ok(InstanceReport {
        instance,
        seed: cfg.rmat.seed,
        rows,
        timings,
        total_edges: edges,
        steady_edges,
        steady_seconds,
        layer_stats: h.stats().to_vec(),
        final_layer_nnz: h.layer_nnz(),
        flush_nnz: flushed.nnz(),
        reference_nnz,
    })
}

/// The whole stream as one array, built in a single construct.
pub fn flat_reference(rmat: &RmatConfig, semiring: Semiring) -> Result<AssocArray> {
    let mut all = TripleList::with_capacity(rmat.total_edges as usize);
    for b in rmat_stream(rmat)? {
        all.extend_from(&b.triples);
    }
    AssocArray::construct(&all, semiring)
}

/// Writes the raw edge stream as TSV triples, in stream order.
pub fn dump_stream(rmat: &RmatConfig, path: &Path) -> Result<()> {
    let stream = rmat_stream(rmat)?;
    io::write_atomic(path, |w| {
        for b in stream {
            for (r, c, v) in b.triples.iter() {
                writeln!(w, "{r}\t{c}\t{v}")?;
            }
        }
        Ok(())
    })
}

/// Single-instance run.
pub fn run_single(cfg: &BenchConfig) -> Result<RunReport> {
    cfg.validate()?;
    let mut single = cfg.clone();
    single.instances = 1;
    let inst = run_instance(&single, 0)?;
    let report = RunReport::new(single, vec![inst]);
    if let Some(dir) = &cfg.out_dir {
        write_instance_csvs(
            &report,
            &report.instances[0],
            dir,
            &format!("single_{}", cfg.cuts.label),
        )?;
    }
    Ok(report)
}

/// `instances` share-nothing workers, each with its own seed and array.
pub fn run_scaling(cfg: &BenchConfig) -> Result<RunReport> {
    cfg.validate()?;
    let p = cfg.instances;
    let results: Vec<Result<InstanceReport>> = std::thread::scope(|scope| {
        let handles: Vec<_> = (0..p)
            .map(|i| scope.spawn(move || run_instance(cfg, i)))
            .collect();
        handles
            .into_iter()
            .enumerate()
            .map(|(i, h)| {
                h.join()
                    .unwrap_or_else(|_| Err(Error::Config(format!("instance {i} panicked"))))
            })
            .collect()
    });
    let mut instances = Vec::with_capacity(p);
    for (i, r) in results.into_iter().enumerate() {
        instances.push(r.map_err(|e| Error::Config(format!("instance {i} failed: {e}")))?);
    }
    let report = RunReport::new(cfg.clone(), instances);
    if let Some(dir) = &cfg.out_dir {
        for inst in &report.instances {
            let stem = format!("scaling_p{p}_inst{}", inst.instance);
            write_instance_csvs(&report, inst, dir, &stem)?;
        }
        write_aggregate_csv(&report, &dir.join(format!("scaling_p{p}_aggregate.csv")))?;
    }
    Ok(report)
}

/// One row of a sweep comparison.
#[derive(Clone, Debug, PartialEq)]
pub struct SweepRow {
    pub label: String,
    pub cuts: CutSpec,
    pub cum_rate: f64,
    pub min_inst_rate: f64,
    pub max_inst_rate: f64,
    pub cascades: Vec<u64>,
    pub flush_nnz: usize,
}

impl SweepRow {
    /// The row as written under [`SWEEP_HEADER`].
    pub fn csv_line(&self) -> String {
        let cascades: Vec<String> = self.cascades.iter().map(u64::to_string).collect();
        format!(
            "{},{},{},{},{},{},{}",
            self.label,
            self.cuts.to_string().replace(',', ";"),
            self.cum_rate,
            self.min_inst_rate,
            self.max_inst_rate,
            cascades.join(";"),
            self.flush_nnz
        )
    }
}

/// Configuration echo for a sweep, listing every preset instead of one cut.
pub fn sweep_echo(base: &BenchConfig, presets: &[CutChoice]) -> String {
    let labels: Vec<&str> = presets.iter().map(|p| p.label.as_str()).collect();
    base.echo_with(&format!("presets={}", labels.join(";")))
}

pub const SWEEP_HEADER: &str =
    "preset,cuts,final_cum_rate,min_inst_rate,max_inst_rate,cascades,flush_nnz";

/// Runs every cut choice on the identical stream.
pub fn run_sweep(
    base: &BenchConfig,
    presets: &[CutChoice],
) -> Result<(Vec<SweepRow>, Vec<RunReport>)> {
    if presets.len() < 2 {
        return Err(Error::Config(format!(
            "a sweep needs at least 2 cut presets, got {}",
            presets.len()
        )));
    }
    base.validate()?;
    let mut rows = Vec::with_capacity(presets.len());
    let mut reports = Vec::with_capacity(presets.len());
    for preset in presets {
        let mut cfg = base.clone();
        cfg.cuts = preset.clone();
        cfg.instances = 1;
        cfg.out_dir = None;
        let inst = run_instance(&cfg, 0)?;
        let steady = inst.steady_rows(cfg.warmup_batches);
        let (lo, hi) = steady.iter().fold((f64::INFINITY, 0.0f64), |(lo, hi), r| {
            (lo.min(r.inst_rate), hi.max(r.inst_rate))
        });
        rows.push(SweepRow {
            label: preset.label.clone(),
            cuts: preset.cuts.clone(),
            cum_rate: inst.cum_rate(),
            min_inst_rate: if lo.is_finite() { lo } else { 0.0 },
            max_inst_rate: hi,
            cascades: inst.total_cascades(),
            flush_nnz: inst.flush_nnz,
        });
        let report = RunReport::new(cfg, vec![inst]);
        if let Some(dir) = &base.out_dir {
            write_instance_csvs(
                &report,
                &report.instances[0],
                dir,
                &format!("sweep_{}", preset.label),
            )?;
        }
        reports.push(report);
    }
    if let Some(dir) = &base.out_dir {
        write_sweep_csv(
            &rows,
            &sweep_echo(base, presets),
            &dir.join("sweep_comparison.csv"),
        )?;
    }
    Ok((rows, reports))
}

fn ensure_dir(dir: &Path) -> Result<()> {
    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))
}

fn write_instance_csvs(
    report: &RunReport,
    inst: &InstanceReport,
    dir: &Path,
    stem: &str,
) -> Result<()> {
    ensure_dir(dir)?;
    let comment = format!(
        "{} instance={} instance_seed={}",
        report.comment(),
        inst.instance,
        inst.seed
    );
    io::write_metrics(&inst.rows, dir.join(format!("{stem}.csv")), Some(&comment))?;
    let mut body =
        format!("# {comment}\nbatch_index,gen_seconds,construct_seconds,update_seconds\n");
    for (row, t) in inst.rows.iter().zip(&inst.timings) {
        let _ = writeln!(
            body,
            "{},{},{},{}",
            row.batch_index, t.gen_seconds, t.construct_seconds, t.update_seconds
        );
    }
    io::write_atomic(&dir.join(format!("{stem}_timing.csv")), |w| {
        w.write_all(body.as_bytes())
    })
}

pub const AGGREGATE_HEADER: &str = "instance,seed,steady_edges,steady_seconds,cum_rate,flush_nnz";

fn write_aggregate_csv(report: &RunReport, path: &Path) -> Result<()> {
    let mut body = format!("# {}\n{AGGREGATE_HEADER}\n", report.comment());
    let mut edges = 0u64;
    let mut slowest = 0.0f64;
    for inst in &report.instances {
        edges += inst.steady_edges;
        slowest = slowest.max(inst.steady_seconds);
        let _ = writeln!(
            body,
            "{},{},{},{},{},{}",
            inst.instance,
            inst.seed,
            inst.steady_edges,
            inst.steady_seconds,
            inst.cum_rate(),
            inst.flush_nnz
        );
    }
    let flush_total: usize = report.instances.iter().map(|i| i.flush_nnz).sum();
    let _ = writeln!(
        body,
        "aggregate,,{edges},{slowest},{},{flush_total}",
        report.aggregate_rate
    );
    io::write_atomic(path, |w| w.write_all(body.as_bytes()))
}

fn write_sweep_csv(rows: &[SweepRow], echo: &str, path: &Path) -> Result<()> {
    if let Some(dir) = path.parent() {
        ensure_dir(dir)?;
    }
    let mut body = format!("# {echo}\n{SWEEP_HEADER}\n");
    for r in rows {
        let _ = writeln!(body, "{}", r.csv_line());
    }
    io::write_atomic(path, |w| w.write_all(body.as_bytes()))
}

/// Least-squares slope of `ln(inst_rate)` against `ln(cumulative_edges)`.
pub fn log_log_slope(rows: &[MetricsRow]) -> Option<f64> {
    let pts: Vec<(f64, f64)> = rows
        .iter()
        .filter(|r| r.inst_rate > 0.0 && r.cumulative_edges > 0)
        .map(|r| ((r.cumulative_edges as f64).ln(), r.inst_rate.ln()))
        .collect();
    if pts.len() < 2 {
        return None;
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}
