//! Torus-grid transforms on t_j = −π + 2πj/L.
//!
//! With that grid e^{imt_j} = (−1)^m e^{2πimj/L}, so both directions reduce to
//! an unnormalised FFT plus a sign flip on odd m.

use std::cell::RefCell;

use num_complex::Complex64;
use rustfft::{FftDirection, FftPlanner};

thread_local! {
    static PLANNER: RefCell<FftPlanner<f64>> = RefCell::new(FftPlanner::new());
}

fn run(buf: &mut [Complex64], direction: FftDirection) {
    let fft = PLANNER.with(|p| p.borrow_mut().plan_fft(buf.len(), direction));
    fft.process(buf);
}

fn sign(m: i64) -> f64 {
    if m.rem_euclid(2) == 0 {
        1.0
    } else {
        -1.0
    }
}

/// Evaluate Σ_m c_m e^{−imt_j} at every grid point, for coefficients c_m
/// at consecutive m starting from `m_start`.
pub fn series_on_grid(coeffs: &[Complex64], m_start: i64, l: usize) -> Vec<Complex64> {
    let mut buf = vec![Complex64::new(0.0, 0.0); l];
    for (k, &c) in coeffs.iter().enumerate() {
        let m = m_start + k as i64;
        buf[m.rem_euclid(l as i64) as usize] += c * sign(m);
    }
    run(&mut buf, FftDirection::Forward);
    buf
}

/// Evaluate (1/L) Σ_j g_j e^{imt_j} for m = m_start, m_start+1, …, m_start+count−1.
pub fn grid_to_sequence(g: &[Complex64], m_start: i64, count: usize) -> Vec<Complex64> {
    let l = g.len();
    let mut buf = g.to_vec();
    run(&mut buf, FftDirection::Inverse);
    let scale = 1.0 / l as f64;
    (0..count)
        .map(|k| {
            let m = m_start + k as i64;
            buf[m.rem_euclid(l as i64) as usize] * (sign(m) * scale)
        })
        .collect()
}
