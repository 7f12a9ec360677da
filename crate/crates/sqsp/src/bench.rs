//! Grid sweeps over `(n, d, m)` producing one CSV row per cell.

use std::io::Write;

use rayon::prelude::*;
use serde::Serialize;
use sqsp_core::sqsp::SynthesisOptions;

use crate::error::CliError;
use crate::gen::{cell_seed, random_spec};
use crate::run::{dense_name, run, VerifyPolicy};

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Grid {
    pub n: Vec<usize>,
    pub d: Vec<usize>,
    pub m: Vec<usize>,
}

impl Grid {
    /// Cells in row order: `n` outermost, `m` innermost.
    pub fn cells(&self) -> Vec<(usize, usize, usize)> {
        let mut out = Vec::with_capacity(self.n.len() * self.d.len() * self.m.len());
        for &n in &self.n {
            for &d in &self.d {
                for &m in &self.m {
                    out.push((n, d, m));
                }
            }
        }
        out
    }
}

#[derive(Clone, Debug, Default)]
pub struct BenchConfig {
    pub grid: Grid,
    pub seed: u64,
    pub opts: SynthesisOptions,
    pub verify: VerifyPolicy,
}

/// One CSV row. Metric fields are empty when the cell did not synthesize,
/// `verify_pass` is empty when simulation was skipped.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BenchRow {
    pub n: usize,
    pub d: usize,
    pub m: usize,
    pub m_eff: Option<usize>,
    pub r: Option<usize>,
    pub k: Option<usize>,
    pub dense: Option<&'static str>,
    pub size_elementary: Option<usize>,
    pub depth_elementary: Option<usize>,
    pub depth_logical: Option<usize>,
    pub qubits_total: Option<usize>,
    pub stage0_size: Option<usize>,
    pub stage0_depth: Option<usize>,
    pub phase1_size: Option<usize>,
    pub phase1_depth: Option<usize>,
    pub phase2_size: Option<usize>,
    pub phase2_depth: Option<usize>,
    pub verify_pass: Option<bool>,
    /// `ok`, `verify_failed`, `budget_too_small`, `spec_invalid` or `error`.
    pub status: &'static str,
}

impl BenchRow {
    fn empty(n: usize, d: usize, m: usize, status: &'static str) -> Self {
        BenchRow {
            n,
            d,
            m,
            m_eff: None,
            r: None,
            k: None,
            dense: None,
            size_elementary: None,
            depth_elementary: None,
            depth_logical: None,
            qubits_total: None,
            stage0_size: None,
            stage0_depth: None,
            phase1_size: None,
            phase1_depth: None,
            phase2_size: None,
            phase2_depth: None,
            verify_pass: None,
            status,
        }
    }
}

fn bench_cell(cfg: &BenchConfig, (n, d, m): (usize, usize, usize)) -> BenchRow {
    let spec = match random_spec(n, d, cell_seed(cfg.seed, n, d)) {
        Ok(s) => s,
        Err(_) => return BenchRow::empty(n, d, m, "spec_invalid"),
    };
    let out = match run(&spec, m, &cfg.opts, cfg.verify, false) {
        Ok(o) => o,
        Err(CliError::Budget { message }) => {
            log::warn!("n={n} d={d} m={m}: {message}");
            return BenchRow::empty(n, d, m, "budget_too_small");
        }
        Err(e) => {
            log::error!("n={n} d={d} m={m}: {e}");
            return BenchRow::empty(n, d, m, "error");
        }
    };
    let syn = &out.synthesis;
    let st = |i: usize| (Some(syn.stages[i].size_elementary), Some(syn.stages[i].depth_elementary));
    let (stage0_size, stage0_depth) = st(0);
    let (phase1_size, phase1_depth) = st(1);
    let (phase2_size, phase2_depth) = st(2);
    BenchRow {
        n,
        d,
        m,
        m_eff: Some(syn.plan.m_eff),
        r: Some(syn.plan.r),
        k: Some(syn.plan.k),
        dense: Some(dense_name(syn.plan.dense)),
        size_elementary: Some(syn.metrics.size_elementary),
        depth_elementary: Some(syn.metrics.depth_elementary),
        depth_logical: Some(syn.metrics.depth_logical),
        qubits_total: Some(syn.metrics.qubits_total),
        stage0_size,
        stage0_depth,
        phase1_size,
        phase1_depth,
        phase2_size,
        phase2_depth,
        verify_pass: out.verify.as_ref().map(|v| v.pass),
        status: if out.passed() { "ok" } else { "verify_failed" },
    }
}

/// Runs every cell in parallel; rows come back in grid order.
pub fn run_bench(cfg: &BenchConfig) -> Result<Vec<BenchRow>, CliError> {
    let cells = cfg.grid.cells();
    if cells.is_empty() {
        return Err(CliError::Usage(
            "empty grid: pass --grid-n, --grid-d and --grid-m, e.g. --grid-n 8,16 --grid-d 4 --grid-m 48".into(),
        ));
    }
    Ok(cells.into_par_iter().map(|c| bench_cell(cfg, c)).collect())
}

pub fn write_csv(rows: &[BenchRow], out: impl Write) -> Result<(), CliError> {
    let io = |e: csv::Error| CliError::Io(e.to_string());
    let mut w = csv::Writer::from_writer(out);
    for row in rows {
        w.serialize(row).map_err(io)?;
    }
    w.flush().map_err(|e| CliError::Io(e.to_string()))
}
