//! Gate-time scheduling and the hybrid CPU–QPU runtime model
//! T = n_iter·[n_samp·(t_circ + t_meas) + t_opt + t_comm].

use std::io::Write;
use std::str::FromStr;

use crate::circuit::{Circuit, GateKind};
use crate::error::{Error, Result};

/// Gate durations in nanoseconds.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GateTimes {
    pub rz: f64,
    pub sx: f64,
    pub x: f64,
    pub cx: f64,
    /// Spread of the CX duration across pairs; informational only.
    pub cx_std: f64,
}

impl Default for GateTimes {
    fn default() -> Self {
        GateTimes {
            rz: 0.0,
            sx: 35.56,
            x: 35.56,
            cx: 370.0,
            cx_std: 80.0,
        }
    }
}

impl GateTimes {
    pub fn duration(&self, kind: GateKind) -> Result<f64> {
        match kind {
            GateKind::RZ => Ok(self.rz),
            GateKind::SX => Ok(self.sx),
            GateKind::X => Ok(self.x),
            GateKind::CX => Ok(self.cx),
            k => Err(Error::contract(format!("{k} is not a native gate"))),
        }
    }

    /// Defaults overridden by lines `kind duration_ns`; `#` starts a comment.
    pub fn from_text(text: &str) -> Result<Self> {
        let mut t = GateTimes::default();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let mut parts = line.split_whitespace();
            let (Some(kind), Some(value), None) = (parts.next(), parts.next(), parts.next()) else {
                return Err(Error::parse(i + 1, "expected 'kind duration_ns'"));
            };
            let value: f64 = value
                .parse()
                .ok()
                .filter(|v: &f64| v.is_finite() && *v >= 0.0)
                .ok_or_else(|| Error::parse(i + 1, format!("bad duration '{value}'")))?;
            match GateKind::from_name(&kind.to_ascii_lowercase()) {
                Some(GateKind::RZ) if value != 0.0 => {
                    return Err(Error::parse(i + 1, "rz duration must be 0"));
                }
                Some(GateKind::RZ) => {}
                Some(GateKind::SX) => t.sx = value,
                Some(GateKind::X) => t.x = value,
                Some(GateKind::CX) => t.cx = value,
                _ => return Err(Error::parse(i + 1, format!("unknown native gate '{kind}'"))),
            }
        }
        Ok(t)
    }
}

/// As-soon-as-possible makespan in nanoseconds.
pub fn circuit_time(c: &Circuit, t: &GateTimes) -> Result<f64> {
    let mut ready = vec![0.0f64; c.n_qubits()];
    let mut makespan = 0.0f64;
    for g in c.gates() {
        let d = t.duration(g.kind())?;
        let start = g.qubit_list().map(|q| ready[q]).fold(0.0, f64::max);
        let end = start + d;
        g.qubit_list().for_each(|q| ready[q] = end);
        makespan = makespan.max(end);
    }
    Ok(makespan)
}

/// Inputs of the hybrid model, times in seconds.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RuntimeParams {
    pub n_iter: u64,
    pub n_samp: u64,
    pub t_circ: f64,
    pub t_meas: f64,
    pub t_opt: f64,
    pub t_comm: f64,
}

impl Default for RuntimeParams {
    fn default() -> Self {
        RuntimeParams {
            n_iter: 25,
            n_samp: 1024,
            t_circ: 120e-6,
            t_meas: 28.6e-6,
            t_opt: 159e-6,
            t_comm: Scenario::Cloud.t_comm(),
        }
    }
}

impl RuntimeParams {
    pub fn validate(&self) -> Result<()> {
        if self.n_iter == 0 || self.n_samp == 0 {
            return Err(Error::contract("n_iter and n_samp must be at least 1"));
        }
        let times = [self.t_circ, self.t_meas, self.t_opt, self.t_comm];
        if times.iter().any(|t| !t.is_finite() || *t < 0.0) {
            return Err(Error::contract("times must be finite and nonnegative"));
        }
        Ok(())
    }
}

pub fn hybrid_time(p: &RuntimeParams) -> f64 {
    p.n_iter as f64 * (p.n_samp as f64 * (p.t_circ + p.t_meas) + p.t_opt + p.t_comm)
}

/// (∂T/∂t_comm, ∂T/∂t_circ).
pub fn sensitivities(p: &RuntimeParams) -> (f64, f64) {
    (p.n_iter as f64, (p.n_iter * p.n_samp) as f64)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Scenario {
    Cloud,
    LocalBus,
    Soc,
}

impl Scenario {
    pub const ALL: [Scenario; 3] = [Scenario::Cloud, Scenario::LocalBus, Scenario::Soc];

    pub fn name(self) -> &'static str {
        match self {
            Scenario::Cloud => "cloud",
            Scenario::LocalBus => "local_bus",
            Scenario::Soc => "soc",
        }
    }

    /// Round-trip communication time in seconds.
    pub fn t_comm(self) -> f64 {
        match self {
            Scenario::Cloud => 50e-3,
            Scenario::LocalBus => 1e-3,
            Scenario::Soc => 25e-6,
        }
    }
}

impl FromStr for Scenario {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "cloud" => Ok(Scenario::Cloud),
            "local-bus" | "local_bus" => Ok(Scenario::LocalBus),
            "soc" => Ok(Scenario::Soc),
            _ => Err(Error::contract(format!("unknown scenario '{s}'"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScenarioRow {
    pub scenario: Scenario,
    pub t_comm: f64,
    pub total: f64,
}

pub fn scenario_table(base: &RuntimeParams, scenarios: &[Scenario]) -> Vec<ScenarioRow> {
    scenarios
        .iter()
        .map(|&s| {
            let p = RuntimeParams { t_comm: s.t_comm(), ..*base };
            ScenarioRow { scenario: s, t_comm: s.t_comm(), total: hybrid_time(&p) }
        })
        .collect()
}

/// Three significant digits, the precision used for presentation.
pub fn sig3(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let digits = 2 - x.abs().log10().floor() as i32;
    if digits > 0 {
        format!("{:.*}", digits as usize, x)
    } else {
        let scale = 10f64.powi(-digits);
        format!("{}", (x / scale).round() * scale)
    }
}

/// CSV with exact values plus a rounded total column.
pub fn write_scenario_csv<W: Write>(rows: &[ScenarioRow], base: &RuntimeParams, mut w: W) -> std::io::Result<()> {
    writeln!(w, "scenario,t_comm_s,t_circ_s,total_s,total_s_3sig")?;
    for r in rows {
        writeln!(
            w,
            "{},{:e},{:e},{},{}",
            r.scenario.name(),
            r.t_comm,
            base.t_circ,
            r.total,
            sig3(r.total)
        )?;
    }
    Ok(())
}
