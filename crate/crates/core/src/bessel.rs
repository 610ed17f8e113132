//! Integer-order Bessel functions of the first kind.
//!
//! Rows `J_0(x) .. J_N(x)` come from Miller's downward recurrence normalized
//! with the Neumann sum `J_0 + 2 Σ J_{2k} = 1`; tiny arguments use the
//! leading terms of the power series. Negative orders follow from
//! `J_{-n}(x) = (-1)^n J_n(x)`.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

use crate::error::{Error, Result};

/// Largest accepted `|n|`.
pub const MAX_ORDER: i64 = 1_000_000;

/// Below this argument the two-term power series is exact to double precision.
const SERIES_THRESHOLD: f64 = 1e-6;

const RESCALE_LIMIT: f64 = 1e250;

fn check_argument(x: f64) -> Result<()> {
    if !x.is_finite() {
        return Err(Error::invalid("x", format!("must be finite, got {x}")));
    }
    if x < 0.0 {
        return Err(Error::invalid("x", format!("must be non-negative, got {x}")));
    }
    Ok(())
}

fn check_order(n: i64) -> Result<()> {
    if n.unsigned_abs() > MAX_ORDER as u64 {
        return Err(Error::invalid(
            "n",
            format!("|n| must not exceed {MAX_ORDER}, got {n}"),
        ));
    }
    Ok(())
}

/// Log10 of the small-argument envelope `(e x / 2n)^n / sqrt(2 pi n)`, which
/// bounds `|J_n(x)|` from above once `n` is well past `x`.
fn log10_envelope(n: usize, x: f64) -> f64 {
    let n = n as f64;
    n * (std::f64::consts::E * x / (2.0 * n)).log10() - 0.5 * (2.0 * PI * n).log10()
}

/// Starting order for the downward recurrence: at least
/// `reach + ceil(10 + 2 sqrt(reach))` with `reach = max(n_max, x)`, pushed
/// further until the envelope of `J_start(x)` falls below `1e-20`.
fn recurrence_start(n_max: usize, x: f64) -> usize {
    let reach = n_max.max(x.ceil() as usize);
    let mut start = reach + (10.0 + 2.0 * (reach as f64).sqrt()).ceil() as usize;
    while log10_envelope(start, x) > -20.0 {
        start += 1;
    }
    start
}

/// `J_0(x) ..= J_{n_max}(x)` for a validated `x >= 0`.
fn nonnegative_orders(n_max: usize, x: f64) -> Vec<f64> {
    let mut out = vec![0.0; n_max + 1];
    if x == 0.0 {
        out[0] = 1.0;
        return out;
    }
    if x < SERIES_THRESHOLD {
        let half = 0.5 * x;
        let mut lead = 1.0;
        for (n, slot) in out.iter_mut().enumerate() {
            if n > 0 {
                lead *= half / n as f64;
            }
            if lead == 0.0 {
                break;
            }
            *slot = lead * (1.0 - half * half / (n as f64 + 1.0));
        }
        return out;
    }

    let mut start = recurrence_start(n_max, x);
    if start % 2 == 1 {
        start += 1;
    }

    let two_over_x = 2.0 / x;
    let mut upper = 0.0_f64; // J_{k+1}
    let mut current = 1e-300_f64; // J_k, arbitrary scale
    let mut norm = 0.0_f64;
    for k in (0..=start).rev() {
        if k <= n_max {
            out[k] = current;
        }
        if k == 0 {
            norm += current;
        } else if k % 2 == 0 {
            norm += 2.0 * current;
        }
        if k == 0 {
            break;
        }
        let lower = k as f64 * two_over_x * current - upper;
        upper = current;
        current = lower;
        if current.abs() > RESCALE_LIMIT {
            let s = 1.0 / RESCALE_LIMIT;
            current *= s;
            upper *= s;
            norm *= s;
            for v in out.iter_mut().skip(k) {
                *v *= s;
            }
        }
    }
    let inv = 1.0 / norm;
    for v in &mut out {
        *v *= inv;
    }
    out
}

fn parity_sign(n: i64) -> f64 {
    if n.rem_euclid(2) == 0 {
        1.0
    } else {
        -1.0
    }
}

/// `J_n(x)` for any integer order and `x >= 0`.
pub fn bessel_j(n: i64, x: f64) -> Result<f64> {
    check_order(n)?;
    check_argument(x)?;
    let order = n.unsigned_abs() as usize;
    let value = nonnegative_orders(order, x)[order];
    Ok(if n < 0 { parity_sign(n) * value } else { value })
}

/// `J_n(x)` for `n` in `-n_max ..= n_max`, all evaluated at one argument.
#[derive(Debug, Clone, PartialEq)]
pub struct BesselRow {
    n_max: usize,
    values: Vec<f64>,
}

impl BesselRow {
    pub fn n_max(&self) -> usize {
        self.n_max
    }

    /// `J_n`; zero outside the stored range.
    pub fn get(&self, n: i64) -> f64 {
        if n.unsigned_abs() as usize > self.n_max {
            return 0.0;
        }
        self.values[(n + self.n_max as i64) as usize]
    }

    /// Values ordered from `n = -n_max` to `n = n_max`.
    pub fn as_slice(&self) -> &[f64] {
        &self.values
    }

    pub fn iter(&self) -> impl Iterator<Item = (i64, f64)> + '_ {
        let offset = self.n_max as i64;
        self.values
            .iter()
            .enumerate()
            .map(move |(i, &v)| (i as i64 - offset, v))
    }
}

/// Batch evaluation over the symmetric order range `-n_max ..= n_max`.
pub fn bessel_j_row(n_max: usize, x: f64) -> Result<BesselRow> {
    check_order(n_max as i64)?;
    check_argument(x)?;
    let positive = nonnegative_orders(n_max, x);
    let mut values = Vec::with_capacity(2 * n_max + 1);
    for order in (1..=n_max).rev() {
        values.push(parity_sign(order as i64) * positive[order]);
    }
    values.extend_from_slice(&positive);
    Ok(BesselRow { n_max, values })
}

/// Leading large-argument form `sqrt(2/(pi x)) cos(x - n pi/2 - pi/4)`.
///
/// Meaningful for `x >> 1` and `n < x`; the error of the leading term is
/// `O(x^{-3/2})`.
pub fn bessel_asymptotic(n: i64, x: f64) -> Result<f64> {
    check_order(n)?;
    if !x.is_finite() || x <= 0.0 {
        return Err(Error::invalid(
            "x",
            format!("must be finite and positive, got {x}"),
        ));
    }
    Ok((2.0 / (PI * x)).sqrt() * (x - n as f64 * FRAC_PI_2 - FRAC_PI_4).cos())
}
