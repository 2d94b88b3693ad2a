//! Subcommand bodies.

use std::io::Write;
use std::path::Path;

use msta::dynamics::{hamiltonian, trajectory, ExchangeHamiltonian};
use msta::entanglement::{
    bloch_entropy, chsh_maximize_with, concurrence_2q, entanglement_entropy, ChshOptions,
};
use msta::invariants::{
    feasibility, invariants_2q, invariants_3q, invariants_3q_unchecked, sudbery,
    three_tangle_oracle,
};
use msta::region::region_scan as scan;
use msta::solver::{solve_invariants, SolveOptions};
use msta::states::{bell as bell_state, Bell};
use msta::vec3;
use serde_json::{json, Map, Value};

use crate::io::{sink, CliError, CliResult, StateFile};
use crate::{BellArg, Format, Output};

/// Named values, kept in insertion order.
#[derive(Default)]
pub struct Report {
    entries: Vec<(String, Value)>,
}

impl Report {
    pub fn add(&mut self, key: impl Into<String>, value: impl Into<Value>) {
        self.entries.push((key.into(), value.into()));
    }

    fn render(v: &Value) -> String {
        match v {
            Value::String(s) => s.clone(),
            Value::Array(items) => items.iter().map(Self::render).collect::<Vec<_>>().join(" "),
            other => other.to_string(),
        }
    }

    pub fn write(&self, output: &Output) -> CliResult<()> {
        let mut w = sink(output.out.as_ref())?;
        match output.format_or(Format::Text) {
            Format::Text => {
                for (k, v) in &self.entries {
                    writeln!(w, "{k}: {}", Self::render(v))?;
                }
            }
            Format::Csv => {
                let mut csv = csv::Writer::from_writer(w);
                csv.write_record(["quantity", "value"])?;
                for (k, v) in &self.entries {
                    csv.write_record([k.as_str(), Self::render(v).as_str()])?;
                }
                csv.flush()?;
                return Ok(());
            }
            Format::Json => {
                let map: Map<String, Value> = self.entries.iter().cloned().collect();
                serde_json::to_writer_pretty(&mut w, &Value::Object(map))?;
                writeln!(w)?;
            }
        }
        w.flush()?;
        Ok(())
    }
}

pub fn invariants(state: &Path, output: &Output) -> CliResult<()> {
    let file = StateFile::load(state)?;
    let rho = file.density()?;
    let mut r = Report::default();
    r.add("n_qubits", file.n_qubits);
    match file.n_qubits {
        2 => {
            let v = invariants_2q(&rho)?;
            r.add("v", v);
            r.add("concurrence", concurrence_2q(&rho)?);
            r.add("entropy", entanglement_entropy(&rho, 0)?);
        }
        3 => invariants_3(&file, &rho, &mut r)?,
        n => {
            return Err(CliError::Validation(format!(
                "invariants need 2 or 3 qubits, got {n}"
            )))
        }
    }
    r.write(output)
}

fn invariants_3(file: &StateFile, rho: &msta::DensityOperator, r: &mut Report) -> CliResult<()> {
    // With a vanishing Bloch vector the pair invariants are not required to agree.
    let (inv, checked) = match invariants_3q(rho) {
        Ok(inv) => (inv, true),
        Err(msta::Error::VanishingVector(_)) => (invariants_3q_unchecked(rho), false),
        Err(e) => return Err(e.into()),
    };
    let s = sudbery(&inv);
    r.add("v_a", inv.v_a);
    r.add("v_b", inv.v_b);
    r.add("v_c", inv.v_c);
    r.add("vbar2", inv.vbar2);
    r.add("vbar3", inv.vbar3);
    r.add("I2", s.i2);
    r.add("I3", s.i3);
    r.add("I4", s.i4);
    r.add("I5", s.i5);
    r.add("I6", s.i6);
    r.add("tangle_oracle", three_tangle_oracle(&file.amplitudes())?);
    let verdict = feasibility(&inv);
    r.add("feasible", verdict.is_feasible());
    if !verdict.is_feasible() {
        r.add("violations", verdict.summary());
    }
    if checked {
        let sols = solve_invariants(&inv, &SolveOptions::default())?;
        r.add("solutions", sols.len());
        for (k, s) in sols.iter().enumerate() {
            r.add(format!("angles_{k}"), s.as_array().to_vec());
        }
    } else {
        r.add(
            "solutions",
            "not applicable: a reduced Bloch vector vanishes",
        );
    }
    Ok(())
}

fn bool_str(b: bool) -> &'static str {
    if b {
        "true"
    } else {
        "false"
    }
}

pub fn region_scan(v: [f64; 3], grid: usize, output: &Output) -> CliResult<()> {
    if grid < 2 {
        return Err(CliError::Validation(
            "grid needs at least 2 points per axis".into(),
        ));
    }
    let s = scan(v, grid)?;
    let mut w = sink(output.out.as_ref())?;
    match output.format_or(Format::Csv) {
        Format::Json => {
            let points: Vec<Value> = s
                .points
                .iter()
                .map(|p| {
                    json!({"vbar2": p.vbar2, "vbar3": p.vbar3, "p_ok": p.p_ok, "b_value": p.b_value,
                           "b_ok": p.b_ok, "feasible": p.feasible, "i6": p.i6})
                })
                .collect();
            let markers: Vec<Value> = s
                .markers
                .iter()
                .map(|m| {
                    json!({"label": m.label.to_string(), "state": m.kind.name(), "vbar2": m.vbar2,
                           "vbar3": m.vbar3, "b_value": m.b_value, "i6": m.i6})
                })
                .collect();
            let doc = json!({
                "v": v, "grid": grid, "vbar2_range": [s.vbar2_range.0, s.vbar2_range.1],
                "vbar3_range": [s.vbar3_range.0, s.vbar3_range.1], "simply_connected": s.is_simply_connected(),
                "points": points, "markers": markers,
            });
            serde_json::to_writer(&mut w, &doc)?;
            writeln!(w)?;
            w.flush()?;
        }
        Format::Csv | Format::Text => {
            let mut csv = csv::Writer::from_writer(w);
            csv.write_record([
                "row", "label", "vbar2", "vbar3", "p_ok", "b_value", "b_ok", "feasible", "i6",
            ])?;
            for p in &s.points {
                csv.write_record([
                    "grid",
                    "",
                    &p.vbar2.to_string(),
                    &p.vbar3.to_string(),
                    bool_str(p.p_ok),
                    &p.b_value.to_string(),
                    bool_str(p.b_ok),
                    bool_str(p.feasible),
                    &p.i6.to_string(),
                ])?;
            }
            for m in &s.markers {
                let feasible = msta::region::scan_point(v, m.vbar2, m.vbar3, (0.0, 0.0));
                csv.write_record([
                    "marker",
                    &m.label.to_string(),
                    &m.vbar2.to_string(),
                    &m.vbar3.to_string(),
                    bool_str(feasible.p_ok),
                    &m.b_value.to_string(),
                    bool_str(feasible.b_ok),
                    bool_str(feasible.feasible),
                    &m.i6.to_string(),
                ])?;
            }
            csv.flush()?;
        }
    }
    Ok(())
}

pub fn evolve(
    state: &Path,
    h: &ExchangeHamiltonian,
    times: (f64, f64, usize),
    output: &Output,
) -> CliResult<()> {
    let (t0, t1, steps) = times;
    let params = [h.omega_x, h.omega_y, h.omega_z, h.beta_a, h.beta_b, t0, t1];
    if params.iter().any(|x| !x.is_finite()) {
        return Err(CliError::Validation(
            "Hamiltonian parameters and times must be finite".into(),
        ));
    }
    let file = StateFile::load(state)?;
    if file.n_qubits != 2 {
        return Err(CliError::Validation(format!(
            "evolve needs 2 qubits, got {}",
            file.n_qubits
        )));
    }
    let rows: Vec<[f64; 9]> = trajectory(&file.density()?, &hamiltonian(h), t0, t1, steps)?
        .into_iter()
        .map(|(t, rho)| {
            let (a, b) = (rho.bloch_vector(0), rho.bloch_vector(1));
            [
                t,
                a[0],
                a[1],
                a[2],
                b[0],
                b[1],
                b[2],
                bloch_entropy(vec3::norm(a)),
                rho.purity(),
            ]
        })
        .collect();
    const COLUMNS: [&str; 9] = [
        "t", "a_x", "a_y", "a_z", "b_x", "b_y", "b_z", "entropy", "purity",
    ];
    let mut w = sink(output.out.as_ref())?;
    match output.format_or(Format::Csv) {
        Format::Json => {
            let doc: Vec<Value> = rows
                .iter()
                .map(|row| {
                    Value::Object(
                        COLUMNS
                            .iter()
                            .map(|c| c.to_string())
                            .zip(row.map(Value::from))
                            .collect(),
                    )
                })
                .collect();
            serde_json::to_writer(&mut w, &doc)?;
            writeln!(w)?;
            w.flush()?;
        }
        Format::Csv | Format::Text => {
            let mut csv = csv::Writer::from_writer(w);
            csv.write_record(COLUMNS)?;
            for row in &rows {
                csv.write_record(row.map(|x| x.to_string()))?;
            }
            csv.flush()?;
        }
    }
    Ok(())
}

pub fn chsh(state: &Path, seed: Option<u64>, output: &Output) -> CliResult<()> {
    let file = StateFile::load(state)?;
    if file.n_qubits != 2 {
        return Err(CliError::Validation(format!(
            "chsh needs 2 qubits, got {}",
            file.n_qubits
        )));
    }
    let mut opts = ChshOptions::default();
    if let Some(seed) = seed {
        opts.seed = seed;
    }
    let (value, setting) = chsh_maximize_with(&file.density()?, &opts)?;
    let mut r = Report::default();
    r.add("chsh", value);
    r.add("q", setting.q.to_vec());
    r.add("r", setting.r.to_vec());
    r.add("s", setting.s.to_vec());
    r.add("t", setting.t.to_vec());
    r.write(output)
}

pub fn bell(which: BellArg, output: &Output) -> CliResult<()> {
    let (name, b) = match which {
        BellArg::PhiPlus => ("phi-plus", Bell::PhiPlus),
        BellArg::PhiMinus => ("phi-minus", Bell::PhiMinus),
        BellArg::PsiPlus => ("psi-plus", Bell::PsiPlus),
        BellArg::PsiMinus => ("psi-minus", Bell::PsiMinus),
    };
    let rho = bell_state(b);
    let mut r = Report::default();
    r.add("state", name);
    r.add("expansion", rho.mv().to_string());
    r.add(
        "amplitudes",
        Value::Array(
            StateFile::from_amplitudes(&b.amplitudes())
                .amplitudes
                .iter()
                .map(|&[re, im]| json!([re + 0.0, im + 0.0]))
                .collect(),
        ),
    );
    r.write(output)
}
