//! The full replication pipeline: density sweep, backend-size sweep,
//! runtime table and growth fits, written to one directory.

use std::fs;
use std::io::Write;
use std::path::Path;
use std::time::{SystemTime, UNIX_EPOCH};

use codesign::analysis::{
    fit_groups, summarize, sweep_backend_size, sweep_density, write_fits, write_records, DensityTarget,
    SweepSpec,
};
use codesign::perfmodel::{scenario_table, write_scenario_csv, RuntimeParams, Scenario};
use codesign::topology::{backend_series, heavy_hex, BackendSize};

use crate::config::ExperimentConfig;
use crate::{exec_for, CliError};

struct Log(fs::File);

impl Log {
    fn line(&mut self, msg: &str) -> std::io::Result<()> {
        let t = SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs_f64()).unwrap_or(0.0);
        writeln!(self.0, "[{t:.3}] {msg}")
    }
}

pub fn run(cfg: &ExperimentConfig, out: &Path) -> Result<(), CliError> {
    fs::create_dir_all(out)?;
    let exec = exec_for(cfg.jobs);
    let mut log = Log(fs::File::create(out.join("run_log.txt"))?);
    log.line("effective configuration:")?;
    for l in cfg.to_ini().lines() {
        log.line(&format!("  {l}"))?;
    }

    let spec = SweepSpec::new(cfg.graph_density, cfg.layers, cfg.trials, cfg.seed);
    let size = BackendSize::new(cfg.rows, cfg.cols);
    let base = heavy_hex(cfg.rows, cfg.cols)?;
    log.line(&format!("density sweep on {} qubits", base.n_qubits()))?;
    let density = sweep_density(&cfg.density_nodes, &spec, &cfg.densities, &base, size, exec)?;
    write_records(&density, fs::File::create(out.join("density_sweep.csv"))?)?;
    log.line(&format!("density sweep: {} records", density.len()))?;

    log.line("backend-size sweep")?;
    let sizes = sweep_backend_size(cfg.size_nodes, &spec, &backend_series(), &cfg.size_densities, exec)?;
    write_records(&sizes, fs::File::create(out.join("size_sweep.csv"))?)?;
    log.line(&format!("backend-size sweep: {} records", sizes.len()))?;

    // t_circ measured as the mean makespan over trials of the configured
    // instance on the undensified lattice.
    let measured = if cfg.density_nodes.contains(&cfg.t_circ_nodes) {
        let base_c = codesign::topology::coupling_density(&base);
        summarize(&density)
            .into_iter()
            .find(|p| p.n_nodes == cfg.t_circ_nodes && p.coupling_density == base_c)
            .map(|p| p.mean_time_ns * 1e-9)
    } else {
        let recs = sweep_density(&[cfg.t_circ_nodes], &spec, &[DensityTarget::Base], &base, size, exec)?;
        summarize(&recs).first().map(|p| p.mean_time_ns * 1e-9)
    };
    let mut table = fs::File::create(out.join("runtime_table.csv"))?;
    let runtime = |t_circ| RuntimeParams {
        n_iter: cfg.n_iter,
        n_samp: cfg.n_samp,
        t_circ,
        t_meas: cfg.t_meas,
        t_opt: cfg.t_opt,
        t_comm: 0.0,
    };
    let reference = runtime(cfg.t_circ_reference);
    reference.validate()?;
    let mut bytes = Vec::new();
    write_scenario_csv(&scenario_table(&reference, &Scenario::ALL), &reference, &mut bytes)?;
    if let Some(t) = measured {
        let own = runtime(t);
        let mut rows = Vec::new();
        write_scenario_csv(&scenario_table(&own, &Scenario::ALL), &own, &mut rows)?;
        // Skip the second header.
        let body = rows.iter().position(|&b| b == b'\n').map_or(&rows[..], |i| &rows[i + 1..]);
        bytes.extend_from_slice(body);
        log.line(&format!("measured t_circ {t:e} s"))?;
    }
    table.write_all(&bytes)?;

    let fits = fit_groups(&density, &cfg.group_by, cfg.tau, cfg.degree)?;
    let mut f = fs::File::create(out.join("fit_coefficients.csv"))?;
    write_fits(&fits, &cfg.group_by, cfg.degree, &mut f)?;
    log.line("done")?;
    Ok(())
}
