//! Quantum integers, q-factorials, SU(2)_k fusion rules and q-6j
//! duality coefficients at the root of unity q = exp(2πi/(k+2)).

use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Level k and the derived root q. `conjugate` flips q to its complex conjugate.
#[derive(Debug, Clone, PartialEq)]
pub struct Root {
    k: u32,
    conjugate: bool,
    facts: Vec<f64>,
}

impl Root {
    pub fn new(k: u32) -> Result<Self> {
        Self::with_conjugation(k, false)
    }

    pub fn with_conjugation(k: u32, conjugate: bool) -> Result<Self> {
        if k == 0 {
            return Err(Error::Domain("level k must be at least 1".into()));
        }
        let mut root = Root { k, conjugate, facts: Vec::new() };
        let mut acc = 1.0;
        root.facts.push(1.0);
        for n in 1..=(k + 1) {
            acc *= root.qint(n as f64);
            root.facts.push(acc);
        }
        Ok(root)
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn is_conjugated(&self) -> bool {
        self.conjugate
    }

    /// k + 2, the order of q.
    pub fn order(&self) -> u32 {
        self.k + 2
    }

    pub fn q(&self) -> Complex64 {
        self.q_pow(1.0)
    }

    /// q^x taken on the principal branch of the exponent.
    pub fn q_pow(&self, x: f64) -> Complex64 {
        let s = if self.conjugate { -1.0 } else { 1.0 };
        Complex64::from_polar(1.0, s * 2.0 * PI * x / self.order() as f64)
    }

    /// [x] = sin(πx/(k+2)) / sin(π/(k+2)).
    pub fn qint(&self, x: f64) -> f64 {
        let n = self.order() as f64;
        (PI * x / n).sin() / (PI / n).sin()
    }

    /// [n]! for n ≤ k+1.
    pub fn qfact(&self, n: u32) -> Result<f64> {
        self.facts.get(n as usize).copied().ok_or_else(|| {
            Error::Domain(format!("[{n}]! needs n <= k+1 = {}", self.k + 1))
        })
    }
}

/// A spin stored as its twice-value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Spin(pub u32);

impl Spin {
    pub fn value(self) -> f64 {
        self.0 as f64 / 2.0
    }

    pub fn casimir(self) -> f64 {
        casimir(self)
    }
}

/// c_j = j(j+1).
pub fn casimir(j: Spin) -> f64 {
    let j = j.value();
    j * (j + 1.0)
}

/// Fusion rule of SU(2)_k on twice-values.
pub fn admissible(a: u32, b: u32, c: u32, root: &Root) -> bool {
    a.abs_diff(b) <= c && c <= a + b && (a + b + c).is_multiple_of(2) && a + b + c <= 2 * root.k()
}

/// All c with (a, b, c) admissible, ascending.
pub fn fusion(a: u32, b: u32, root: &Root) -> impl Iterator<Item = u32> + '_ {
    (0..=root.k()).filter(move |&c| admissible(a, b, c, root))
}

/// The six entries of {j1 j2 l; j3 j4 m}, as twice-values.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct QRacahArgs {
    pub j1: u32,
    pub j2: u32,
    pub j3: u32,
    pub j4: u32,
    pub l: u32,
    pub m: u32,
}

impl QRacahArgs {
    pub fn new(j1: u32, j2: u32, j3: u32, j4: u32, l: u32, m: u32) -> Self {
        QRacahArgs { j1, j2, j3, j4, l, m }
    }

    fn triads(&self) -> [(u32, u32, u32); 4] {
        [
            (self.j1, self.j2, self.l),
            (self.j3, self.j4, self.l),
            (self.j1, self.j4, self.m),
            (self.j2, self.j3, self.m),
        ]
    }

    pub fn check(&self, root: &Root) -> Result<()> {
        for (a, b, c) in self.triads() {
            if !admissible(a, b, c, root) {
                return Err(Error::Admissibility(format!(
                    "triple ({a}/2, {b}/2, {c}/2) violates the level-{} fusion rules",
                    root.k()
                )));
            }
        }
        Ok(())
    }
}

fn delta(a: u32, b: u32, c: u32, root: &Root) -> Result<f64> {
    let num = root.qfact((b + c - a) / 2)? * root.qfact((a + c - b) / 2)? * root.qfact((a + b - c) / 2)?;
    Ok((num / root.qfact((a + b + c) / 2 + 1)?).sqrt())
}

/// The q-Racah coefficient as a Δ-prefactored alternating sum over x.
///
/// Terms with x + 1 > k + 1 contain the vanishing factor [k+2] and are dropped.
pub fn qracah(args: &QRacahArgs, root: &Root) -> Result<f64> {
    args.check(root)?;
    let QRacahArgs { j1, j2, j3, j4, l, m } = *args;
    let lows = [j1 + j2 + l, j3 + j4 + l, j1 + j4 + m, j2 + j3 + m].map(|s| s / 2);
    let highs = [j1 + j2 + j3 + j4, j1 + j3 + l + m, j2 + j4 + l + m].map(|s| s / 2);
    let lo = *lows.iter().max().unwrap();
    let hi = (*highs.iter().min().unwrap()).min(root.k());
    let mut sum = 0.0;
    for x in lo..=hi {
        let mut den = 1.0;
        for s in lows {
            den *= root.qfact(x - s)?;
        }
        for s in highs {
            den *= root.qfact(s - x)?;
        }
        let sign = if x % 2 == 0 { 1.0 } else { -1.0 };
        sum += sign * root.qfact(x + 1)? / den;
    }
    let pre = delta(j1, j2, l, root)? * delta(j3, j4, l, root)? * delta(j1, j4, m, root)? * delta(j2, j3, m, root)?;
    Ok(pre * sum)
}

/// (−1)^{j1+j2+j3+j4}; the exponent must be an integer.
fn parity_sign(twice_sum: u32) -> Result<f64> {
    if !twice_sum.is_multiple_of(2) {
        return Err(Error::Domain(format!("phase exponent {twice_sum}/2 is not an integer")));
    }
    Ok(if (twice_sum / 2).is_multiple_of(2) { 1.0 } else { -1.0 })
}

/// Duality coefficient A_m^l[j1 j2; j3 j4] = ⟨(j1 (j2 j3)_m) j4 | ((j1 j2)_l j3) j4⟩.
pub fn duality6j(args: &QRacahArgs, root: &Root) -> Result<f64> {
    let r = qracah(args, root)?;
    let s = parity_sign(args.j1 + args.j2 + args.j3 + args.j4)?;
    Ok(s * (root.qint(args.l as f64 + 1.0) * root.qint(args.m as f64 + 1.0)).sqrt() * r)
}

/// Full elementary duality block for fixed outer spins.
#[derive(Debug, Clone)]
pub struct DualityBlock {
    /// Labels l of the ((j1 j2)_l j3) side, ascending.
    pub ls: Vec<u32>,
    /// Labels m of the (j1 (j2 j3)_m) side, ascending.
    pub ms: Vec<u32>,
    /// Rows indexed by m, columns by l.
    pub matrix: DMatrix<f64>,
}

pub fn duality_block(j1: u32, j2: u32, j3: u32, j4: u32, root: &Root) -> Result<DualityBlock> {
    let ls: Vec<u32> = fusion(j1, j2, root).filter(|&l| admissible(j3, j4, l, root)).collect();
    let ms: Vec<u32> = fusion(j1, j4, root).filter(|&m| admissible(j2, j3, m, root)).collect();
    let mut matrix = DMatrix::zeros(ms.len(), ls.len());
    for (r, &m) in ms.iter().enumerate() {
        for (c, &l) in ls.iter().enumerate() {
            matrix[(r, c)] = duality6j(&QRacahArgs::new(j1, j2, j3, j4, l, m), root)?;
        }
    }
    Ok(DualityBlock { ls, ms, matrix })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn qint_spot_values() {
        let r2 = Root::new(2).unwrap();
        assert_eq!(r2.qint(0.0), 0.0);
        assert!((r2.qint(1.0) - 1.0).abs() < 1e-15);
        assert!((r2.qint(2.0) - 2f64.sqrt()).abs() < 1e-12);
        let r3 = Root::new(3).unwrap();
        let phi = (1.0 + 5f64.sqrt()) / 2.0;
        assert!((r3.qint(3.0) - phi).abs() < 1e-12);
    }

    #[test]
    fn qfact_values_and_domain() {
        let r3 = Root::new(3).unwrap();
        assert_eq!(r3.qfact(0).unwrap(), 1.0);
        assert!((r3.qfact(1).unwrap() - 1.0).abs() < 1e-15);
        let phi = (1.0 + 5f64.sqrt()) / 2.0;
        assert!((r3.qfact(3).unwrap() - phi * phi).abs() < 1e-12);
        assert!(r3.qfact(4).is_ok());
        assert!(matches!(r3.qfact(5), Err(Error::Domain(_))));
    }

    #[test]
    fn casimir_values() {
        assert_eq!(casimir(Spin(0)), 0.0);
        assert_eq!(casimir(Spin(1)), 0.75);
        assert_eq!(casimir(Spin(2)), 2.0);
    }

    #[test]
    fn admissible_examples() {
        assert!(admissible(1, 1, 0, &Root::new(2).unwrap()));
        assert!(!admissible(1, 1, 2, &Root::new(1).unwrap()));
        for k in 1..8 {
            assert!(!admissible(2, 2, 6, &Root::new(k).unwrap()));
        }
    }

    #[test]
    fn root_rejects_level_zero() {
        assert!(Root::new(0).is_err());
    }

    #[test]
    fn all_half_block_at_k2() {
        let root = Root::new(2).unwrap();
        let b = duality_block(1, 1, 1, 1, &root).unwrap();
        assert_eq!(b.ls, vec![0, 2]);
        assert_eq!(b.ms, vec![0, 2]);
        let d = root.qint(2.0);
        let s3 = root.qint(3.0).sqrt();
        for r in 0..2 {
            for c in 0..2 {
                let e = if r == c { 1.0 / d } else { s3 / d };
                assert!((b.matrix[(r, c)].abs() - e).abs() < 1e-12);
            }
        }
        // the alternating sum has the single term x = 1, so the sign is negative
        let a00 = duality6j(&QRacahArgs::new(1, 1, 1, 1, 0, 0), &root).unwrap();
        assert!((a00 + 1.0 / d).abs() < 1e-12);
    }

    #[test]
    fn spin_zero_block_is_unimodular() {
        let root = Root::new(4).unwrap();
        let b = duality_block(2, 0, 3, 3, &root).unwrap();
        assert_eq!(b.matrix.shape(), (1, 1));
        assert!((b.matrix[(0, 0)].abs() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn inadmissible_args_error() {
        let root = Root::new(3).unwrap();
        let e = qracah(&QRacahArgs::new(1, 1, 1, 1, 1, 0), &root);
        assert!(matches!(e, Err(Error::Admissibility(_))));
    }

    fn ortho_err(b: &DualityBlock) -> f64 {
        let p = &b.matrix * b.matrix.transpose();
        let mut e: f64 = 0.0;
        for r in 0..p.nrows() {
            for c in 0..p.ncols() {
                let t = if r == c { 1.0 } else { 0.0 };
                e = e.max((p[(r, c)] - t).abs());
            }
        }
        e
    }

    #[test]
    fn fixed_block_orthogonal_k5() {
        let root = Root::new(5).unwrap();
        let b = duality_block(3, 2, 3, 2, &root).unwrap();
        assert!(b.ls.len() > 1);
        assert!(ortho_err(&b) < 1e-10);
    }

    proptest! {
        #[test]
        fn qint_reflection(k in 1u32..12, x in -20.0f64..20.0) {
            let r = Root::new(k).unwrap();
            prop_assert!((r.qint((k + 2) as f64 - x) - r.qint(x)).abs() < 1e-9);
        }

        #[test]
        fn admissible_symmetric(k in 1u32..8, a in 0u32..9, b in 0u32..9, c in 0u32..9) {
            let r = Root::new(k).unwrap();
            let v = admissible(a, b, c, &r);
            for p in [(a, c, b), (b, a, c), (b, c, a), (c, a, b), (c, b, a)] {
                prop_assert_eq!(admissible(p.0, p.1, p.2, &r), v);
            }
        }

        #[test]
        fn blocks_orthogonal(k in 1u32..7, a in 0u32..64, b in 0u32..64, c in 0u32..64, d in 0u32..64) {
            let r = Root::new(k).unwrap();
            let n = k + 1;
            let blk = duality_block(a % n, b % n, c % n, d % n, &r).unwrap();
            prop_assert_eq!(blk.ls.len(), blk.ms.len());
            prop_assert!(ortho_err(&blk) < 1e-10);
        }

        #[test]
        fn racah_column_swap_symmetry(k in 1u32..7, a in 0u32..64, b in 0u32..64, c in 0u32..64, li in 0usize..8, di in 0usize..8, mi in 0usize..8) {
            let r = Root::new(k).unwrap();
            let n = k + 1;
            let (j1, j2, j3) = (a % n, b % n, c % n);
            let ls: Vec<u32> = fusion(j1, j2, &r).collect();
            let l = ls[li % ls.len()];
            let ds: Vec<u32> = fusion(l, j3, &r).collect();
            let j4 = ds[di % ds.len()];
            let blk = duality_block(j1, j2, j3, j4, &r).unwrap();
            let m = blk.ms[mi % blk.ms.len()];
            let x = QRacahArgs::new(j1, j2, j3, j4, l, m);
            let y = QRacahArgs::new(j3, j4, j1, j2, l, m);
            prop_assert!((qracah(&x, &r).unwrap() - qracah(&y, &r).unwrap()).abs() < 1e-10);
        }
    }
}
