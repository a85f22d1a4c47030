//! Flat INI experiment configuration.
//!
//! Every key has a default; a config file may override any subset. Unknown
//! sections or keys are rejected so typos cannot silently fall back to a
//! default.

use std::fmt::Write as _;
use std::path::Path;

use codesign::analysis::{parse_densities, DensityTarget, GroupColumn};

use crate::CliError;

#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    pub seed: u64,
    pub jobs: usize,
    pub graph_density: f64,
    pub layers: usize,
    pub rows: usize,
    pub cols: usize,
    pub trials: usize,
    pub density_nodes: Vec<usize>,
    pub densities: Vec<DensityTarget>,
    pub size_nodes: usize,
    pub size_densities: Vec<DensityTarget>,
    pub n_iter: u64,
    pub n_samp: u64,
    pub t_meas: f64,
    pub t_opt: f64,
    pub t_circ_reference: f64,
    pub t_circ_nodes: usize,
    pub tau: f64,
    pub degree: usize,
    pub group_by: Vec<GroupColumn>,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            seed: 2024,
            jobs: 0,
            graph_density: 0.5,
            layers: 1,
            rows: 6,
            cols: 3,
            trials: 20,
            density_nodes: vec![10, 20, 30, 40, 50, 60],
            densities: parse_densities("base,0.05,0.1,0.2,0.4,0.8,1.0").expect("valid default"),
            size_nodes: 60,
            size_densities: parse_densities("base,0.1,0.2,1.0").expect("valid default"),
            n_iter: 25,
            n_samp: 1024,
            t_meas: 28.6e-6,
            t_opt: 159e-6,
            t_circ_reference: 120e-6,
            t_circ_nodes: 20,
            tau: 0.5,
            degree: 2,
            group_by: vec![GroupColumn::CouplingDensity],
        }
    }
}

fn list<T: std::str::FromStr>(v: &str) -> Option<Vec<T>> {
    v.split(',').map(|s| s.trim().parse().ok()).collect()
}

impl ExperimentConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self, CliError> {
        let ini = ini::Ini::load_from_str(text).map_err(|e| CliError::Config(e.to_string()))?;
        let mut cfg = ExperimentConfig::default();
        for (section, props) in ini.iter() {
            let section = section.unwrap_or("global");
            for (key, value) in props.iter() {
                cfg.set(section, key, value.trim())?;
            }
        }
        Ok(cfg)
    }

    fn set(&mut self, section: &str, key: &str, v: &str) -> Result<(), CliError> {
        let bad = || CliError::Config(format!("bad value '{v}' for {section}.{key}"));
        fn num<T: std::str::FromStr>(v: &str) -> Option<T> {
            v.parse().ok()
        }
        match (section, key) {
            ("global", "seed") => self.seed = num(v).ok_or_else(bad)?,
            ("global", "jobs") => self.jobs = num(v).ok_or_else(bad)?,
            ("graph", "density") => self.graph_density = num(v).ok_or_else(bad)?,
            ("graph", "layers") => self.layers = num(v).ok_or_else(bad)?,
            ("topology", "rows") => self.rows = num(v).ok_or_else(bad)?,
            ("topology", "cols") => self.cols = num(v).ok_or_else(bad)?,
            ("transpile", "trials") => self.trials = num(v).ok_or_else(bad)?,
            ("sweep", "density_nodes") => self.density_nodes = list(v).ok_or_else(bad)?,
            ("sweep", "densities") => self.densities = parse_densities(v).map_err(|_| bad())?,
            ("sweep", "size_nodes") => self.size_nodes = num(v).ok_or_else(bad)?,
            ("sweep", "size_densities") => self.size_densities = parse_densities(v).map_err(|_| bad())?,
            ("runtime", "n_iter") => self.n_iter = num(v).ok_or_else(bad)?,
            ("runtime", "n_samp") => self.n_samp = num(v).ok_or_else(bad)?,
            ("runtime", "t_meas") => self.t_meas = num(v).ok_or_else(bad)?,
            ("runtime", "t_opt") => self.t_opt = num(v).ok_or_else(bad)?,
            ("runtime", "t_circ_reference") => self.t_circ_reference = num(v).ok_or_else(bad)?,
            ("runtime", "t_circ_nodes") => self.t_circ_nodes = num(v).ok_or_else(bad)?,
            ("fit", "tau") => self.tau = num(v).ok_or_else(bad)?,
            ("fit", "degree") => self.degree = num(v).ok_or_else(bad)?,
            ("fit", "group_by") => self.group_by = list(v).ok_or_else(bad)?,
            _ => return Err(CliError::Config(format!("unknown key {section}.{key}"))),
        }
        Ok(())
    }

    /// The effective configuration in the same INI format.
    pub fn to_ini(&self) -> String {
        let join = |xs: Vec<String>| xs.join(",");
        let dens = |d: &[DensityTarget]| join(d.iter().map(|x| x.to_string()).collect());
        let mut s = String::new();
        let _ = writeln!(s, "seed = {}\njobs = {}\n", self.seed, self.jobs);
        let _ = writeln!(s, "[graph]\ndensity = {}\nlayers = {}\n", self.graph_density, self.layers);
        let _ = writeln!(s, "[topology]\nrows = {}\ncols = {}\n", self.rows, self.cols);
        let _ = writeln!(s, "[transpile]\ntrials = {}\n", self.trials);
        let _ = writeln!(
            s,
            "[sweep]\ndensity_nodes = {}\ndensities = {}\nsize_nodes = {}\nsize_densities = {}\n",
            join(self.density_nodes.iter().map(|n| n.to_string()).collect()),
            dens(&self.densities),
            self.size_nodes,
            dens(&self.size_densities)
        );
        let _ = writeln!(
            s,
            "[runtime]\nn_iter = {}\nn_samp = {}\nt_meas = {:e}\nt_opt = {:e}\nt_circ_reference = {:e}\nt_circ_nodes = {}\n",
            self.n_iter, self.n_samp, self.t_meas, self.t_opt, self.t_circ_reference, self.t_circ_nodes
        );
        let _ = writeln!(
            s,
            "[fit]\ntau = {}\ndegree = {}\ngroup_by = {}",
            self.tau,
            self.degree,
            join(self.group_by.iter().map(|c| c.name().to_string()).collect())
        );
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_round_trip() {
        let d = ExperimentConfig::default();
        let back = ExperimentConfig::parse(&d.to_ini()).unwrap();
        assert_eq!(back.to_ini(), d.to_ini());
    }

    #[test]
    fn overrides_and_rejections() {
        let c = ExperimentConfig::parse("seed = 7\n[sweep]\ndensities = base,1.0\n").unwrap();
        assert_eq!(c.seed, 7);
        assert_eq!(c.densities.len(), 2);
        assert!(ExperimentConfig::parse("[sweep]\ndensitys = 1\n").is_err());
        assert!(ExperimentConfig::parse("[graph]\nlayers = x\n").is_err());
    }
}
