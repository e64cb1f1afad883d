//! Distance sweeps and their CSV form.

use std::io::{self, Write};

use rayon::prelude::*;
use thiserror::Error;

use crate::asymptotics::hamaker_c3_in_gap;
use crate::lifshitz::{bound_envelope, force, LifshitzError, PlanarCavity, QuadratureConfig};
use crate::scalar::{lit, Real};

/// ħ in J·s.
pub const HBAR_SI: f64 = 1.054_571_817e-34;
/// c in m/s.
pub const C_SI: f64 = 299_792_458.0;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SweepError {
    #[error("at d = {d}: {source}")]
    Force { d: f64, source: LifshitzError },
    #[error("at d = {d}: pressure {pressure:e} outside [{lo:e}, {hi:e}]")]
    BoundViolation { d: f64, pressure: f64, lo: f64, hi: f64 },
}

/// One output line.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SweepRow<T = f64> {
    pub d_over_c_by_omega: T,
    pub d_over_lambda: T,
    pub pressure_norm: T,
    pub te_part: T,
    pub tm_part: T,
    pub bound_lo: T,
    pub bound_hi: T,
    /// Hamaker prediction c₃/d³ in the same normalization (i.e. c₃ itself).
    pub c3_over_d3: Option<T>,
    pub est_error: T,
}

pub const HEADER: [&str; 9] = [
    "d_over_c_by_omega",
    "d_over_lambda",
    "pressure_norm",
    "te_part",
    "tm_part",
    "bound_lo",
    "bound_hi",
    "c3_over_d3",
    "est_error",
];

fn f64_of<T: Real>(x: T) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

/// Evaluates the pressure at every distance, in parallel, in input order.
///
/// Each row is checked against an independently recomputed envelope before
/// it is returned.
pub fn run_sweep<T: Real>(
    cavity: &PlanarCavity<T>,
    distances: &[T],
    tau: T,
    cfg: &QuadratureConfig<T>,
) -> Result<Vec<SweepRow<T>>, SweepError> {
    let c3 = if cavity.mirror1.is_homogeneous() && cavity.mirror2.is_homogeneous() {
        hamaker_c3_in_gap(&cavity.mirror1.substrate, &cavity.mirror2.substrate, &cavity.gap, tau).ok()
    } else {
        None
    };
    let two_pi = lit::<T>(2.0) * T::PI();
    let rows = distances
        .par_iter()
        .map(|&d| {
            let r = force(cavity, d, tau, cfg).map_err(|source| SweepError::Force {
                d: f64_of(d),
                source,
            })?;
            Ok(SweepRow {
                d_over_c_by_omega: d,
                d_over_lambda: d / two_pi,
                pressure_norm: r.pressure_norm,
                te_part: r.te_part,
                tm_part: r.tm_part,
                bound_lo: r.bound_lo,
                bound_hi: r.bound_hi,
                c3_over_d3: c3,
                est_error: r.est_error,
            })
        })
        .collect::<Result<Vec<_>, SweepError>>()?;
    for row in &rows {
        recheck(row, tau)?;
    }
    Ok(rows)
}

fn recheck<T: Real>(row: &SweepRow<T>, tau: T) -> Result<(), SweepError> {
    let d = row.d_over_c_by_omega;
    let (lo, hi) = bound_envelope(d, tau).map_err(|source| SweepError::Force {
        d: f64_of(d),
        source,
    })?;
    let slack = row.est_error + lit::<T>(1e-9) * hi.abs();
    let p = row.pressure_norm;
    if p < lo - slack || p > hi + slack || !p.is_finite() {
        return Err(SweepError::BoundViolation {
            d: f64_of(d),
            pressure: f64_of(p),
            lo: f64_of(lo),
            hi: f64_of(hi),
        });
    }
    Ok(())
}

/// C `printf("%.12e")`: twelve fraction digits, signed exponent of at least
/// two digits.
pub fn format_e12(x: f64) -> String {
    if x.is_nan() {
        return "nan".to_string();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf" } else { "-inf" }.to_string();
    }
    let s = format!("{x:.12e}");
    let (mantissa, exponent) = s.split_once('e').expect("exponent present");
    let (sign, digits) = match exponent.strip_prefix('-') {
        Some(d) => ('-', d),
        None => ('+', exponent),
    };
    format!("{mantissa}e{sign}{digits:0>2}")
}

/// Pressure in pascal for a reference frequency `omega` in rad/s.
pub fn pressure_si(pressure_norm: f64, d: f64, omega: f64) -> f64 {
    pressure_norm / (d * d * d) * HBAR_SI * omega.powi(4) / (C_SI * C_SI * C_SI)
}

/// Writes the header and rows; `omega_rad_s` adds an `F_SI_Pa` column.
pub fn write_csv<T: Real, W: Write>(
    mut out: W,
    rows: &[SweepRow<T>],
    omega_rad_s: Option<f64>,
) -> io::Result<()> {
    let mut header = HEADER.join(",");
    if omega_rad_s.is_some() {
        header.push_str(",F_SI_Pa");
    }
    writeln!(out, "{header}")?;
    for r in rows {
        let mut fields: Vec<String> = [
            r.d_over_c_by_omega,
            r.d_over_lambda,
            r.pressure_norm,
            r.te_part,
            r.tm_part,
            r.bound_lo,
            r.bound_hi,
        ]
        .iter()
        .map(|&v| format_e12(f64_of(v)))
        .collect();
        fields.push(r.c3_over_d3.map_or(String::new(), |c| format_e12(f64_of(c))));
        fields.push(format_e12(f64_of(r.est_error)));
        if let Some(omega) = omega_rad_s {
            fields.push(format_e12(pressure_si(
                f64_of(r.pressure_norm),
                f64_of(r.d_over_c_by_omega),
                omega,
            )));
        }
        writeln!(out, "{}", fields.join(","))?;
    }
    Ok(())
}
