//! Plat expectation values, colored Jones values, the surgery invariant τ
//! and the volume-conjecture scan.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::blocks::vacuum_label;
use crate::braid::ColoredBraidWord;
use crate::error::{Error, Result};
use crate::kaulrep::KaulRep;
use crate::library::{recolor, LibraryEntry};
use crate::oracle::{fig8_colored_jones, jones_at_q_angle};
use crate::qalgebra::{casimir, Root, Spin};

/// Most colour assignments `rt_invariant` will sum.
pub const MAX_RT_TERMS: usize = 1 << 16;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InvariantResult {
    /// Π[2j_i+1] times the vacuum matrix element.
    pub v: Complex64,
    /// Unknot-normalized value.
    pub j: Complex64,
    pub writhe: i64,
    pub q_used: Complex64,
    /// Twice-spin of each component.
    pub colors: Vec<u32>,
}

/// ⟨vac|K(word)|vac⟩ between the bottom and top cap states.
pub fn plat_expectation(rep: &KaulRep, word: &ColoredBraidWord) -> Result<Complex64> {
    word.validate_plat().map_err(|e| match e {
        Error::Plat(msg) => Error::NotPlatCompatible(msg),
        other => other,
    })?;
    let u = rep.represent_word(word)?;
    let vin = u.basis_in.index_of(&vacuum_label(&u.basis_in)?)?;
    let vout = u.basis_out.index_of(&vacuum_label(&u.basis_out)?)?;
    Ok(u.matrix[(vout, vin)])
}

pub fn colored_jones(rep: &KaulRep, word: &ColoredBraidWord) -> Result<InvariantResult> {
    let root = rep.root();
    let amp = plat_expectation(rep, word)?;
    let c = word.colors();
    let pre: f64 = (0..word.m()).map(|i| root.qint(c[2 * i] as f64 + 1.0)).product();
    let v = amp * pre;
    let colors = word.component_colors();
    // each further component contributes the sign of its unknot value
    let sign: f64 = colors[1..].iter().map(|&t| if t % 2 == 0 { 1.0 } else { -1.0 }).product();
    let j = v * sign / root.qint(colors[0] as f64 + 1.0);
    Ok(InvariantResult { v, j, writhe: word.writhe(), q_used: root.q(), colors })
}

/// Which k enters the constants b and c.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub enum RtLevel {
    #[default]
    Verbatim,
    Shifted,
}

/// b = √(2/k)·sin(π/k), c = exp(−2πi(k−2)/8k), with k → k+2 when shifted.
pub fn rt_constants(k: u32, level: RtLevel) -> (f64, Complex64) {
    let kk = match level {
        RtLevel::Verbatim => k as f64,
        RtLevel::Shifted => k as f64 + 2.0,
    };
    let b = (2.0 / kk).sqrt() * (PI / kk).sin();
    let c = Complex64::from_polar(1.0, -2.0 * PI * (kk - 2.0) / (8.0 * kk));
    (b, c)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RtTerm {
    pub colors: Vec<u32>,
    /// Π[2j_c+1].
    pub weight: f64,
    /// Framed colored value E_j.
    pub e: Complex64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RtResult {
    pub tau: Complex64,
    pub k: u32,
    pub alpha: Complex64,
    pub b: f64,
    pub c: Complex64,
    pub n_components: usize,
    pub signature: i64,
    pub terms: Vec<RtTerm>,
}

/// τ = α Σ_j [j] E_j with α = b^{n_L} c^{σ_L}; `None` is the empty link.
pub fn rt_invariant(rep: &KaulRep, word: Option<&ColoredBraidWord>, framings: &[i64], level: RtLevel) -> Result<RtResult> {
    let root = rep.root();
    let k = root.k();
    let (b, c) = rt_constants(k, level);
    let (nl, signature) = match word {
        None => {
            if !framings.is_empty() {
                return Err(Error::Range("the empty link takes no framings".into()));
            }
            (0, 0)
        }
        Some(w) => {
            let ld = w.linking_matrix(framings)?;
            (framings.len(), ld.signature)
        }
    };
    let count = (k as usize + 1).checked_pow(nl as u32).filter(|&n| n <= MAX_RT_TERMS);
    let Some(count) = count else {
        return Err(Error::Resource(format!("(k+1)^n_L colourings exceed {MAX_RT_TERMS}")));
    };
    let colorings: Vec<Vec<u32>> = (0..count)
        .map(|mut code| {
            let mut v = vec![0u32; nl];
            for slot in v.iter_mut().rev() {
                *slot = (code % (k as usize + 1)) as u32;
                code /= k as usize + 1;
            }
            v
        })
        .collect();
    let terms: Vec<RtTerm> = colorings
        .into_par_iter()
        .map(|cols| rt_term(rep, word, framings, cols))
        .collect::<Result<_>>()?;
    let sum: Complex64 = terms.iter().map(|t| t.e * t.weight).sum();
    let alpha = b.powi(nl as i32) * c.powi(signature as i32);
    Ok(RtResult { tau: alpha * sum, k, alpha, b, c, n_components: nl, signature, terms })
}

fn rt_term(rep: &KaulRep, word: Option<&ColoredBraidWord>, framings: &[i64], cols: Vec<u32>) -> Result<RtTerm> {
    let root = rep.root();
    let Some(w) = word else {
        return Ok(RtTerm { colors: cols, weight: 1.0, e: Complex64::new(1.0, 0.0) });
    };
    let weight = cols.iter().map(|&t| root.qint(t as f64 + 1.0)).product();
    let v = colored_jones(rep, &recolor(w, &cols)?)?.v;
    // framing f_c contributes the twist θ_j^{f_c} = q^{f_c c_j}
    let twist: f64 = cols.iter().zip(framings).map(|(&t, &f)| f as f64 * casimir(Spin(t))).sum();
    Ok(RtTerm { colors: cols, weight, e: v * root.q_pow(twist) })
}

/// Unknot-normalized N-colored value of a single-component entry at level k.
pub fn kaul_colored_jones(entry: &LibraryEntry, n: u32, k: u32) -> Result<Complex64> {
    if entry.components != 1 {
        return Err(Error::Range(format!("{} has {} components; a knot is required", entry.name, entry.components)));
    }
    if n == 0 {
        return Err(Error::Domain("N must be at least 1".into()));
    }
    let rep = KaulRep::new(Root::new(k)?);
    Ok(colored_jones(&rep, &entry.word(n - 1)?)?.j)
}

/// 2π·log|J_N|/N at q = exp(2πi/N).
///
/// Spin (N−1)/2 is not admissible at k = N−2, so only two routes exist:
/// the closed form for the figure-eight and the spin-½ bracket at N = 2.
pub fn volume_ratio(entry: &LibraryEntry, n: u32) -> Result<f64> {
    if entry.components != 1 {
        return Err(Error::Range(format!("{} has {} components; a knot is required", entry.name, entry.components)));
    }
    if n < 2 {
        return Err(Error::Domain(format!("N = {n}; the scan starts at N = 2")));
    }
    let phi = 2.0 * PI / n as f64;
    let jn = if entry.name == "fig8" {
        fig8_colored_jones(n, Complex64::from_polar(1.0, phi))
    } else if n == 2 {
        jones_at_q_angle(&entry.word(1)?, phi)?
    } else {
        return Err(Error::Admissibility(format!(
            "spin {}/2 exceeds k/2 = {}/2 and no closed form is known for {}",
            n - 1,
            n - 2,
            entry.name
        )));
    };
    Ok(2.0 * PI * jn.norm().ln() / n as f64)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VolPoint {
    pub n: u32,
    pub abs_j: f64,
    pub ratio: f64,
}

/// Figure-eight scan over N = 2..=nmax, in order.
pub fn volscan(nmax: u32) -> Result<Vec<VolPoint>> {
    if nmax < 2 {
        return Err(Error::Domain(format!("nmax = {nmax}; need at least 2")));
    }
    Ok((2..=nmax)
        .into_par_iter()
        .map(|n| {
            let j = fig8_colored_jones(n, Complex64::from_polar(1.0, 2.0 * PI / n as f64));
            let abs_j = j.norm();
            VolPoint { n, abs_j, ratio: 2.0 * PI * abs_j.ln() / n as f64 }
        })
        .collect())
}
