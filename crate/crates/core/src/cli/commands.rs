use std::fmt::Write as _;
use std::fs;
use std::path::PathBuf;

use super::{CliError, RunConfig};
use crate::geometry::{membrane_mode, ModeBasis};
use crate::oracle1d::equivalence_errors;
use crate::perturbation::{QuasiStationary, TimeGrid};
use crate::spinning::{coupling_matrix_with, ModeOrdering};
use crate::transient::{closed_form_snapshot, relaxation_time, TransientProfile};

const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Axial indices covered by the coupling census.
const COUPLING_N3: [u32; 4] = [1, 2, 3, 4];
/// Oracle discretisation: cosine modes and final time.
const ORACLE_MODES: usize = 32;
const ORACLE_T_END: f64 = 10.0;
const ORACLE_TOL: f64 = 1e-6;
/// Relative frequency distance below which a mode is flagged as near resonance.
const PROXIMITY: f64 = 0.01;
/// Minimum sample count for the settling-time scan.
const SETTLING_SAMPLES: usize = 20001;

/// Result of one command: stdout summary, non-fatal warnings and written files.
#[derive(Debug, Default, Clone, PartialEq)]
pub struct Output {
    pub summary: String,
    pub warnings: Vec<String>,
    pub files: Vec<PathBuf>,
}

/// First line of every CSV file.
pub fn csv_header(config: &RunConfig) -> String {
    format!("# ice-sim {VERSION} config_sha256={}", config.digest())
}

/// 17 significant digits.
fn num(x: f64) -> String {
    format!("{x:.16e}")
}

struct Writer<'a> {
    config: &'a RunConfig,
    out: Output,
}

impl<'a> Writer<'a> {
    fn new(config: &'a RunConfig) -> Self {
        Self { config, out: Output::default() }
    }

    fn csv(&mut self, name: &str, columns: &str, body: &str) -> Result<(), CliError> {
        let dir = &self.config.output_dir;
        fs::create_dir_all(dir)?;
        let path = dir.join(name);
        fs::write(&path, format!("{}\n{columns}\n{body}", csv_header(self.config)))?;
        self.out.files.push(path);
        Ok(())
    }

    fn raw(&mut self, name: &str, text: &str) -> Result<(), CliError> {
        let dir = &self.config.output_dir;
        fs::create_dir_all(dir)?;
        let path = dir.join(name);
        fs::write(&path, text)?;
        self.out.files.push(path);
        Ok(())
    }

    fn finish(mut self, summary: String) -> Output {
        self.out.summary = summary;
        self.out
    }
}

fn grid(config: &RunConfig) -> Result<TimeGrid, CliError> {
    Ok(TimeGrid::new(config.window, config.samples)?)
}

pub(super) fn modes(config: &RunConfig) -> Result<Output, CliError> {
    let basis = ModeBasis::new(config.geometry, config.truncation)?;
    let mat = &config.material;
    let mut body = String::new();
    for n in basis.cavity() {
        let _ = writeln!(
            body,
            "cavity,{},{},{},{},{},{},{},{}",
            n.n1,
            n.n2,
            n.n3,
            n.n2.unsigned_abs(),
            num(n.mu),
            num(n.lambda),
            num(n.omega(mat.c)),
            num(n.norm)
        );
    }
    for k in basis.membrane() {
        let _ = writeln!(
            body,
            "membrane,{},{},0,{},{},{},{},{}",
            k.k1,
            k.k2,
            num(k.q),
            num(k.nu),
            num(k.gamma),
            num(k.stiffness(mat.c_m).sqrt()),
            num(k.norm)
        );
    }
    let mut w = Writer::new(config);
    w.csv("modes.csv", "kind,i1,i2,i3,order,root,eigenvalue,frequency_rad_s,norm", &body)?;
    let summary = format!("{} cavity modes, {} membrane modes", basis.cavity().len(), basis.membrane().len());
    Ok(w.finish(summary))
}

pub(super) fn simulate(config: &RunConfig) -> Result<Output, CliError> {
    let basis = ModeBasis::new(config.geometry, config.truncation)?;
    let (mat, stim) = (&config.material, &config.stimulus);
    let qs = QuasiStationary::new(&basis, mat, stim);
    let mut body = String::new();
    for t in grid(config)?.times() {
        let snap = closed_form_snapshot(&basis, mat, stim, &qs, t)?;
        let t = num(t);
        for (n, p) in basis.cavity().iter().zip(&snap.pressure) {
            let _ = writeln!(body, "{t},pressure,{},{},{},{},{}", n.n1, n.n2, n.n3, num(p.re), num(p.im));
        }
        for (label, values) in [("membrane0", &snap.membrane0), ("membraneL", &snap.membrane_l)] {
            for (k, u) in basis.membrane().iter().zip(values) {
                let _ = writeln!(body, "{t},{label},{},{},0,{},{}", k.k1, k.k2, num(u.re), num(u.im));
            }
        }
    }
    let mut w = Writer::new(config);
    w.csv("simulate.csv", "t,field,i1,i2,i3,re,im", &body)?;
    let summary = format!(
        "{} samples over {} s, {} cavity and {} membrane modes",
        config.samples,
        config.window,
        basis.cavity().len(),
        basis.membrane().len()
    );
    Ok(w.finish(summary))
}

pub(super) fn coupling(config: &RunConfig) -> Result<Output, CliError> {
    let (geom, mat, stim) = (&config.geometry, &config.material, &config.stimulus);
    let ordering = ModeOrdering::new(geom)?;
    let mut w = Writer::new(config);
    let mut summary = String::new();
    for n3 in COUPLING_N3 {
        let report = coupling_matrix_with(geom, mat, stim, n3, &ordering)?;
        let mut body = String::new();
        for e in &report.entries {
            let _ = writeln!(
                body,
                "{},{},{},{},{},{},{},{},{},{}",
                e.n3,
                e.rank_n,
                e.rank_k,
                e.n1,
                e.n2,
                e.k1,
                e.k2,
                num(e.spin),
                num(e.overlap),
                num(e.value)
            );
        }
        w.csv(
            &format!("coupling_n3_{n3}.csv"),
            "n3,rank_n,rank_k,n1,n2,k1,k2,spin,overlap,value",
            &body,
        )?;
        if let Some(m) = report.argmax() {
            let _ = writeln!(summary, "n3={n3}: max |value| at rank_n={} rank_k={}", m.rank_n, m.rank_k);
        }
    }
    Ok(w.finish(summary.trim_end().to_string()))
}

pub(super) fn transient(config: &RunConfig) -> Result<Output, CliError> {
    let (geom, mat, stim) = (&config.geometry, &config.material, &config.stimulus);
    let times = grid(config)?.times();
    let g = mat.coupling();
    let mut w = Writer::new(config);
    let mut summary = format!("T_eq = {:.6e} s", relaxation_time(mat)?);
    for k1 in 1..=config.truncation.membrane_k1 {
        for k2 in 1..=config.truncation.membrane_k2 {
            let k = membrane_mode(geom, k1, k2)?;
            let prof = TransientProfile::new(mat, &k, stim, &times)?;
            let mut body = String::new();
            for (j, t) in prof.times.iter().enumerate() {
                let (h, e, s) = (prof.harmonic[j], prof.transient[j], prof.total[j]);
                let _ = writeln!(
                    body,
                    "{},{},{},{},{},{},{}",
                    num(*t),
                    num(h.re),
                    num(h.im),
                    num(e.re),
                    num(e.im),
                    num(s.re),
                    num(s.im)
                );
            }
            w.csv(
                &format!("transient_k{k1}_{k2}.csv"),
                "t,re_harm,im_harm,re_trans,im_trans,re_total,im_total",
                &body,
            )?;
            if (k1, k2) == (1, 1) {
                match prof.settling_time(g) {
                    Some(ts) => {
                        let _ = write!(summary, ", mode (1,1) settles at {ts:.6e} s");
                    }
                    None => summary.push_str(", mode (1,1) not settled within the window"),
                }
            }
        }
    }
    Ok(w.finish(summary))
}

pub(super) fn oracle1d(config: &RunConfig, seed: u64, sets: usize) -> Result<Output, CliError> {
    let errors = equivalence_errors(seed, sets, ORACLE_MODES, ORACLE_T_END)?;
    let mut body = String::new();
    for (i, e) in errors.iter().enumerate() {
        let pass = *e <= ORACLE_TOL;
        let _ = writeln!(body, "{i},{},{},{pass}", seed.wrapping_add(i as u64), num(*e));
    }
    let mut w = Writer::new(config);
    w.csv("oracle1d.csv", "set,seed,rel_l2,pass", &body)?;
    let worst = errors.iter().copied().fold(0.0, f64::max);
    let failed = errors.iter().filter(|e| **e > ORACLE_TOL).count();
    if failed > 0 {
        return Err(CliError::Check(format!(
            "{failed} of {sets} data sets exceed {ORACLE_TOL:e} (worst {worst:.3e})"
        )));
    }
    Ok(w.finish(format!("PASS: {sets} data sets, worst relative L2 {worst:.3e}")))
}

pub(super) fn report(config: &RunConfig) -> Result<Output, CliError> {
    let (geom, mat, stim) = (&config.geometry, &config.material, &config.stimulus);
    let g = mat.coupling();
    let t_eq = relaxation_time(mat)?;

    let window = config.window.max(2.0 * t_eq);
    let times = TimeGrid::new(window, config.samples.max(SETTLING_SAMPLES))?.times();
    let fundamental = membrane_mode(geom, 1, 1)?;
    let settling = TransientProfile::new(mat, &fundamental, stim, &times)?.settling_time(g);

    let ordering = ModeOrdering::new(geom)?;
    let mut dominance = Vec::new();
    for n3 in COUPLING_N3 {
        let report = coupling_matrix_with(geom, mat, stim, n3, &ordering)?;
        let m = report.argmax().ok_or_else(|| crate::Error::EmptyTruncation("empty census".into()))?;
        dominance.push(serde_json::json!({
            "n3": n3,
            "rank_n": m.rank_n,
            "rank_k": m.rank_k,
            "value": m.value,
            "axial_dominant": m.rank_n == 0,
        }));
    }

    let basis = ModeBasis::new(*geom, config.truncation)?;
    let w0 = stim.omega;
    let mut proximity = Vec::new();
    for n in basis.cavity() {
        let rel = (n.omega(mat.c) - w0).abs() / w0;
        if rel < PROXIMITY {
            proximity.push(format!("cavity mode ({}, {}, {}) within {:.2}% of the stimulus", n.n1, n.n2, n.n3, rel * 100.0));
        }
    }
    for k in basis.membrane() {
        let rel = (k.stiffness(mat.c_m).sqrt() - w0).abs() / w0;
        if rel < PROXIMITY {
            proximity.push(format!("membrane mode ({}, {}) within {:.2}% of the stimulus", k.k1, k.k2, rel * 100.0));
        }
    }

    let json = serde_json::json!({
        "version": VERSION,
        "config_sha256": config.digest(),
        "preset": config.preset,
        "coupling": g,
        "relaxation_time_s": t_eq,
        "settling_time_s": settling,
        "settling_window_s": window,
        "dominance": dominance,
        "resonance_warnings": proximity,
    });
    let mut w = Writer::new(config);
    let text = serde_json::to_string_pretty(&json).map_err(|e| CliError::Check(e.to_string()))?;
    w.raw("report.json", &(text + "\n"))?;

    let mut summary = format!("T_eq = {:.4} ms (coupling {g:.3e})\n", t_eq * 1e3);
    match settling {
        Some(ts) => {
            let _ = writeln!(summary, "settling time (mode 1,1) = {:.4} ms", ts * 1e3);
        }
        None => {
            let _ = writeln!(summary, "settling time (mode 1,1): not reached within {:.4} ms", window * 1e3);
        }
    }
    for d in &dominance {
        let _ = writeln!(
            summary,
            "n3={}: dominant rank_n={} rank_k={}{}",
            d["n3"],
            d["rank_n"],
            d["rank_k"],
            if d["axial_dominant"] == true { " (axial)" } else { "" }
        );
    }
    w.out.warnings = proximity;
    Ok(w.finish(summary.trim_end().to_string()))
}
