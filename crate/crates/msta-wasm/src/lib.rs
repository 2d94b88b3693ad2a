//! Browser bindings: region scans, CHSH along a family of states, and
//! exchange-coupling trajectories. Each export wraps a plain function that
//! is also tested natively.

use msta::dynamics::{hamiltonian, trajectory, ExchangeHamiltonian};
use msta::entanglement::{bloch_entropy, chsh_maximize};
use msta::region::region_scan;
use msta::states::{product_state, pure_state};
use msta::vec3;
use msta::{Complex64, ProductState};
use wasm_bindgen::prelude::*;

/// A region scan flattened for drawing.
#[wasm_bindgen]
pub struct Scan {
    grid: usize,
    range: [f64; 4],
    cells: Vec<u8>,
    markers: Vec<f64>,
    labels: String,
    simply_connected: bool,
}

#[wasm_bindgen]
impl Scan {
    pub fn grid(&self) -> usize {
        self.grid
    }

    /// `[vbar2_min, vbar2_max, vbar3_min, vbar3_max]`.
    pub fn range(&self) -> Vec<f64> {
        self.range.to_vec()
    }

    /// Row-major, `vbar3` outer: bit 0 = probabilities nonnegative,
    /// bit 1 = `B <= 0`; both set means feasible.
    pub fn cells(&self) -> Vec<u8> {
        self.cells.clone()
    }

    /// `(vbar2, vbar3, I6)` per marker.
    pub fn markers(&self) -> Vec<f64> {
        self.markers.clone()
    }

    /// One letter per marker, in the order of [`Scan::markers`].
    pub fn labels(&self) -> String {
        self.labels.clone()
    }

    pub fn simply_connected(&self) -> bool {
        self.simply_connected
    }
}

pub fn scan_native(v_a: f64, v_b: f64, v_c: f64, grid: usize) -> msta::Result<Scan> {
    let s = region_scan([v_a, v_b, v_c], grid.max(2))?;
    Ok(Scan {
        grid: s.grid,
        range: [
            s.vbar2_range.0,
            s.vbar2_range.1,
            s.vbar3_range.0,
            s.vbar3_range.1,
        ],
        cells: s
            .points
            .iter()
            .map(|p| p.p_ok as u8 | (p.b_ok as u8) << 1)
            .collect(),
        markers: s
            .markers
            .iter()
            .flat_map(|m| [m.vbar2, m.vbar3, m.i6])
            .collect(),
        labels: s.markers.iter().map(|m| m.label).collect(),
        simply_connected: s.is_simply_connected(),
    })
}

#[wasm_bindgen]
pub fn scan(v_a: f64, v_b: f64, v_c: f64, grid: usize) -> Result<Scan, JsError> {
    scan_native(v_a, v_b, v_c, grid).map_err(|e| JsError::new(&e.to_string()))
}

/// Maximal CHSH value of `cos(theta/2)|00> + sin(theta/2)|11>` at `steps + 1`
/// angles in `[0, pi]`.
pub fn chsh_curve_native(steps: usize) -> msta::Result<Vec<f64>> {
    let steps = steps.max(1);
    (0..=steps)
        .map(|k| {
            let half = 0.5 * std::f64::consts::PI * k as f64 / steps as f64;
            let zero = Complex64::new(0.0, 0.0);
            let amps = [
                Complex64::new(half.cos(), 0.0),
                zero,
                zero,
                Complex64::new(half.sin(), 0.0),
            ];
            chsh_maximize(&pure_state(&amps)?).map(|(value, _)| value)
        })
        .collect()
}

#[wasm_bindgen]
pub fn chsh_curve(steps: usize) -> Result<Vec<f64>, JsError> {
    chsh_curve_native(steps).map_err(|e| JsError::new(&e.to_string()))
}

/// Evolves the product state with Bloch vectors at polar angles `theta_a`,
/// `theta_b` (in the x-z plane). Rows of `(t, |r_a|, |r_b|, entropy)`, flattened.
pub fn trajectory_native(
    theta_a: f64,
    theta_b: f64,
    h: ExchangeHamiltonian,
    t1: f64,
    steps: usize,
) -> msta::Result<Vec<f64>> {
    let axis = |t: f64| [t.sin(), 0.0, t.cos()];
    let rho0 = product_state(&ProductState::from_axes(
        &[axis(theta_a), axis(theta_b)],
        &[1, 1],
    )?);
    Ok(trajectory(&rho0, &hamiltonian(&h), 0.0, t1, steps)?
        .into_iter()
        .flat_map(|(t, rho)| {
            let (a, b) = (
                vec3::norm(rho.bloch_vector(0)),
                vec3::norm(rho.bloch_vector(1)),
            );
            [t, a, b, bloch_entropy(a)]
        })
        .collect())
}

#[wasm_bindgen]
#[allow(clippy::too_many_arguments)]
pub fn evolve_product(
    theta_a: f64,
    theta_b: f64,
    omega_x: f64,
    omega_y: f64,
    omega_z: f64,
    beta_a: f64,
    beta_b: f64,
    t1: f64,
    steps: usize,
) -> Result<Vec<f64>, JsError> {
    let h = ExchangeHamiltonian {
        omega_x,
        omega_y,
        omega_z,
        beta_a,
        beta_b,
    };
    trajectory_native(theta_a, theta_b, h, t1, steps).map_err(|e| JsError::new(&e.to_string()))
}
