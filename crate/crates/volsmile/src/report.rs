//! CSV table emitters.
//!
//! One header row, comma separator, LF line endings, numbers at 17
//! significant digits so identical inputs yield byte-identical files and the
//! values round-trip exactly through `f64` parsing.

use crate::arbitrage::DiagnosticsReport;
use crate::dupire;
use crate::pricing::VolSwapResult;
use crate::shorttime;
use crate::smile::{Smile, Surface};
use crate::transform;
use crate::Result;

/// 17-significant-digit scientific notation.
pub fn fmt(x: f64) -> String {
    format!("{x:.16e}")
}

/// Header `butterfly_min,f0_prime_min,f1_prime_min,fhalf_prime_min,mass_at_zero,beta_minus,passed`
/// plus one row.
pub fn diagnostics_csv(rep: &DiagnosticsReport) -> String {
    let mut out = String::from(
        "butterfly_min,f0_prime_min,f1_prime_min,fhalf_prime_min,mass_at_zero,beta_minus,passed\n",
    );
    out.push_str(&format!(
        "{},{},{},{},{},{},{}\n",
        fmt(rep.butterfly_min),
        fmt(rep.f0_prime_min),
        fmt(rep.f1_prime_min),
        fmt(rep.fhalf_prime_min),
        fmt(rep.mass_at_zero),
        fmt(rep.beta_minus),
        rep.passed
    ));
    out
}

/// `k,v,h` table over the grid.
pub fn smile_table(smile: &Smile, ks: &[f64]) -> Result<String> {
    let mut out = String::from("k,v,h\n");
    for &k in ks {
        let v = smile.v(k)?;
        let h = transform::h_of_k(k, smile)?;
        out.push_str(&format!("{},{},{}\n", fmt(k), fmt(v), fmt(h)));
    }
    Ok(out)
}

/// `z,v_half` table over the grid (numeric inversion, any smile).
pub fn vhalf_table(smile: &Smile, zs: &[f64]) -> Result<String> {
    let normalized = transform::NormalizedSmile::new(smile, 0.5)?;
    let mut out = String::from("z,v_half\n");
    for &z in zs {
        out.push_str(&format!("{},{}\n", fmt(z), fmt(normalized.v(z)?)));
    }
    Ok(out)
}

/// `T,k,sigma_bs,sigma_dup,sigma_upper,a,b,residual` table.
pub fn dupire_table(surface: &Surface, ts: &[f64], ks: &[f64]) -> Result<String> {
    let mut out = String::from("T,k,sigma_bs,sigma_dup,sigma_upper,a,b,residual\n");
    for &t in ts {
        for &k in ks {
            let p = dupire::local_vol_point(t, k, surface)?;
            let residual = dupire::sigma_dupire_identity_residual(t, k, surface)?;
            out.push_str(&format!(
                "{},{},{},{},{},{},{},{}\n",
                fmt(t),
                fmt(k),
                fmt(surface.sigma(t, k)?),
                fmt(p.sigma_dup),
                fmt(p.sigma_upper),
                fmt(p.a),
                fmt(p.b),
                fmt(residual)
            ));
        }
    }
    Ok(out)
}

/// `T,z,sigma_half,sigma_dup_half,residual` table in the rescaled coordinate.
/// The `z = 0` residual is the limit `sigma_BS(T,0) - sigma_Dup(T,0)`.
pub fn shorttime_table(surface: &Surface, ts: &[f64], zs: &[f64]) -> Result<String> {
    let mut out = String::from("T,z,sigma_half,sigma_dup_half,residual\n");
    for &t in ts {
        for &z in zs {
            let p = shorttime::rescaled_point(t, z, surface)?;
            let residual = shorttime::arithmetic_mean_residual(t, z, surface)?;
            out.push_str(&format!(
                "{},{},{},{},{}\n",
                fmt(t),
                fmt(z),
                fmt(p.sigma_half),
                fmt(p.sigma_dup_half),
                fmt(residual)
            ));
        }
    }
    Ok(out)
}

/// `theta,quadrature,asymptotic,rel_gap` table.
pub fn volswap_table(rows: &[VolSwapResult]) -> String {
    let mut out = String::from("theta,quadrature,asymptotic,rel_gap\n");
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{}\n",
            fmt(r.theta),
            fmt(r.quadrature_value),
            fmt(r.asymptotic_value),
            fmt(r.rel_gap)
        ));
    }
    out
}

/// `payoff,value` table.
pub fn price_table(rows: &[(String, f64)]) -> String {
    let mut out = String::from("payoff,value\n");
    for (label, value) in rows {
        out.push_str(&format!("{label},{}\n", fmt(*value)));
    }
    out
}
