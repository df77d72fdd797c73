//! Zero-phase Butterworth low-pass filtering.
//!
//! The filter is designed by the bilinear transform with frequency
//! prewarping, realised as a cascade of second-order sections, and applied
//! forward and backward over an odd-extended copy of the signal.

use std::f64::consts::PI;

use crate::error::{Error, Result};

pub const DEFAULT_ORDER: usize = 4;
pub const DEFAULT_CUTOFF_HZ: f64 = 10.0;

#[derive(Clone, Copy, Debug, PartialEq)]
struct Section {
    b: [f64; 3],
    a: [f64; 3],
}

impl Section {
    /// Transposed direct form II state that outputs `u` for constant input `u`.
    fn steady_state(&self, u: f64) -> [f64; 2] {
        [(1.0 - self.b[0]) * u, (self.b[2] - self.a[2]) * u]
    }

    fn run(&self, data: &mut [f64], mut state: [f64; 2]) {
        let [b0, b1, b2] = self.b;
        let [_, a1, a2] = self.a;
        for x in data.iter_mut() {
            let input = *x;
            let y = b0 * input + state[0];
            state[0] = b1 * input - a1 * y + state[1];
            state[1] = b2 * input - a2 * y;
            *x = y;
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Butterworth {
    order: usize,
    cutoff_hz: f64,
    sample_rate_hz: f64,
    sections: Vec<Section>,
}

impl Butterworth {
    pub fn lowpass(order: usize, cutoff_hz: f64, sample_rate_hz: f64) -> Result<Self> {
        if order == 0 {
            return Err(Error::param("order", "must be at least 1"));
        }
        if !(sample_rate_hz.is_finite() && sample_rate_hz > 0.0) {
            return Err(Error::param(
                "sample_rate_hz",
                format!("{sample_rate_hz} must be positive"),
            ));
        }
        if !(cutoff_hz.is_finite() && cutoff_hz > 0.0 && sample_rate_hz > 2.0 * cutoff_hz) {
            return Err(Error::param(
                "cutoff_hz",
                format!(
                    "{cutoff_hz} Hz needs a sample rate above {} Hz, got {sample_rate_hz}",
                    2.0 * cutoff_hz
                ),
            ));
        }
        let k = (PI * cutoff_hz / sample_rate_hz).tan();
        let mut sections = Vec::with_capacity(order.div_ceil(2));
        for pair in 1..=order / 2 {
            let q = 1.0 / (2.0 * ((2 * pair - 1) as f64 * PI / (2 * order) as f64).sin());
            let norm = 1.0 / (1.0 + k / q + k * k);
            let b0 = k * k * norm;
            sections.push(Section {
                b: [b0, 2.0 * b0, b0],
                a: [1.0, 2.0 * (k * k - 1.0) * norm, (1.0 - k / q + k * k) * norm],
            });
        }
        if order % 2 == 1 {
            let b0 = k / (1.0 + k);
            sections.push(Section {
                b: [b0, b0, 0.0],
                a: [1.0, (k - 1.0) / (k + 1.0), 0.0],
            });
        }
        Ok(Butterworth {
            order,
            cutoff_hz,
            sample_rate_hz,
            sections,
        })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn cutoff_hz(&self) -> f64 {
        self.cutoff_hz
    }

    pub fn sample_rate_hz(&self) -> f64 {
        self.sample_rate_hz
    }

    /// Single-pass magnitude response at `freq_hz`.
    pub fn magnitude(&self, freq_hz: f64) -> f64 {
        let w = 2.0 * PI * freq_hz / self.sample_rate_hz;
        let (c1, s1) = (w.cos(), -w.sin());
        let (c2, s2) = ((2.0 * w).cos(), -(2.0 * w).sin());
        self.sections
            .iter()
            .map(|sec| {
                let num = (sec.b[0] + sec.b[1] * c1 + sec.b[2] * c2, sec.b[1] * s1 + sec.b[2] * s2);
                let den = (sec.a[0] + sec.a[1] * c1 + sec.a[2] * c2, sec.a[1] * s1 + sec.a[2] * s2);
                (num.0.hypot(num.1)) / (den.0.hypot(den.1))
            })
            .product()
    }

    fn pass(&self, data: &mut [f64]) {
        let first = data[0];
        for sec in &self.sections {
            sec.run(data, sec.steady_state(first));
        }
    }

    pub fn min_len(&self) -> usize {
        3 * self.order
    }

    fn pad_len(&self) -> usize {
        3 * (2 * self.sections.len() + 1)
    }

    /// Forward-backward application: zero phase, squared magnitude.
    pub fn filtfilt(&self, series: &[f64]) -> Result<Vec<f64>> {
        let n = series.len();
        if n < self.min_len() {
            return Err(Error::TooShort {
                len: n,
                min: self.min_len(),
            });
        }
        let pad = self.pad_len().min(n - 1);
        let (head, tail) = (series[0], series[n - 1]);
        let mut ext = Vec::with_capacity(n + 2 * pad);
        ext.extend((1..=pad).rev().map(|i| 2.0 * head - series[i]));
        ext.extend_from_slice(series);
        ext.extend((1..=pad).map(|i| 2.0 * tail - series[n - 1 - i]));

        self.pass(&mut ext);
        ext.reverse();
        self.pass(&mut ext);
        ext.reverse();
        Ok(ext[pad..pad + n].to_vec())
    }
}

/// Zero-phase fourth-order Butterworth low-pass.
pub fn lowpass(series: &[f64], sample_rate_hz: f64, cutoff_hz: f64) -> Result<Vec<f64>> {
    Butterworth::lowpass(DEFAULT_ORDER, cutoff_hz, sample_rate_hz)?.filtfilt(series)
}
