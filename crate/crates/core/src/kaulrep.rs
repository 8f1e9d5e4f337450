//! Kaul's unitary representation of the colored braid groupoid on the
//! odd (p;r) block basis.
//!
//! Three auxiliary trees appear only while building even generators:
//! the left comb a_0 = j1, a_i = fuse(a_{i-1}, j_{i+1}) whose labels are
//! a_{2i+1} = r_i and a_{2i} = t_i; the left comb over the even pairs
//! q_l = (j_{2l}, j_{2l+1}); and the even (q;s) tree with s a right comb
//! over the q's and q_0 = s_0 coupling j1 to j_{2m}.

use std::collections::HashMap;
use std::sync::{Arc, RwLock};

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::blocks::{enumerate_basis, BlockBasis, BlockLabel};
use crate::braid::ColoredBraidWord;
use crate::error::{Error, Result};
use crate::qalgebra::{admissible, casimir, duality6j, fusion, QRacahArgs, Root, Spin};

/// Largest basis the dense path accepts.
pub const MAX_DENSE_DIM: usize = 1 << 14;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RelativeOrientation {
    Parallel,
    Antiparallel,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Handedness {
    Over,
    Under,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EigenvalueSpec {
    pub t: Spin,
    pub j: Spin,
    pub i: Spin,
    pub orientation: RelativeOrientation,
    pub handedness: Handedness,
}

fn neg_one_pow(twice: i64) -> f64 {
    debug_assert!(twice % 2 == 0);
    if (twice / 2).rem_euclid(2) == 0 {
        1.0
    } else {
        -1.0
    }
}

/// λ_t(ĵ, î) for an over-crossing, conjugated for an under-crossing.
pub fn braiding_eigenvalue(spec: &EigenvalueSpec, root: &Root) -> Result<Complex64> {
    let (t, j, i) = (spec.t, spec.j, spec.i);
    if !admissible(j.0, i.0, t.0, root) {
        return Err(Error::Admissibility(format!(
            "({}/2, {}/2, {}/2) is not admissible at level {}",
            j.0,
            i.0,
            t.0,
            root.k()
        )));
    }
    let (cj, ci, ct) = (casimir(j), casimir(i), casimir(t));
    let v = match spec.orientation {
        RelativeOrientation::Parallel => {
            let s = neg_one_pow(j.0 as i64 + i.0 as i64 - t.0 as i64);
            s * root.q_pow((cj + ci) / 2.0 + casimir(j.min(i)) - ct / 2.0)
        }
        RelativeOrientation::Antiparallel => {
            let s = neg_one_pow((j.0 as i64 - i.0 as i64).abs() - t.0 as i64);
            s * root.q_pow(-(cj - ci).abs() / 2.0 + ct / 2.0)
        }
    };
    Ok(match spec.handedness {
        Handedness::Over => v,
        Handedness::Under => v.conj(),
    })
}

/// Eigenvalue for a letter of the given sign acting on strands with
/// orientations (o, o'); the crossing is over when ε = sign·o·o' = +1.
pub fn letter_eigenvalue(t: u32, j: u32, i: u32, o: (i8, i8), sign: i8, root: &Root) -> Result<Complex64> {
    let spec = EigenvalueSpec {
        t: Spin(t),
        j: Spin(j),
        i: Spin(i),
        orientation: if o.0 == o.1 { RelativeOrientation::Parallel } else { RelativeOrientation::Antiparallel },
        handedness: if sign * o.0 * o.1 > 0 { Handedness::Over } else { Handedness::Under },
    };
    braiding_eigenvalue(&spec, root)
}

/// A_m^l with inadmissible arguments read as zero.
pub(crate) fn a6(j1: u32, j2: u32, j3: u32, j4: u32, l: u32, m: u32, root: &Root) -> f64 {
    let args = QRacahArgs::new(j1, j2, j3, j4, l, m);
    if args.check(root).is_err() {
        return 0.0;
    }
    duality6j(&args, root).expect("checked admissible")
}

/// Label of the even (q;s) basis.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EvenLabel {
    pub q: Vec<u32>,
    pub s: Vec<u32>,
}

/// Label of the left comb over the even pairs: q_1..q_{m-1} and t_0..t_{m-1}.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub(crate) struct EvenCombLabel {
    pub q: Vec<u32>,
    pub t: Vec<u32>,
}

fn index_map<T: Clone + std::hash::Hash + Eq>(v: &[T]) -> HashMap<T, usize> {
    v.iter().cloned().enumerate().map(|(i, x)| (x, i)).collect()
}

/// Left-comb labels a_0..a_{n-2}.
pub(crate) fn comb_labels(colors: &[u32], root: &Root) -> Vec<Vec<u32>> {
    let n = colors.len();
    let mut out = Vec::new();
    fn rec(colors: &[u32], root: &Root, a: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        let n = colors.len();
        let i = a.len();
        if i == n - 1 {
            if a[n - 2] == colors[n - 1] {
                out.push(a.clone());
            }
            return;
        }
        for x in fusion(a[i - 1], colors[i], root) {
            a.push(x);
            rec(colors, root, a, out);
            a.pop();
        }
    }
    let mut a = vec![colors[0]];
    if n == 2 {
        if colors[0] == colors[1] {
            out.push(a);
        }
        return out;
    }
    rec(colors, root, &mut a, &mut out);
    out.sort();
    out
}

pub(crate) fn even_comb_labels(colors: &[u32], root: &Root) -> Vec<EvenCombLabel> {
    let n = colors.len();
    let m = n / 2;
    let mut out = Vec::new();
    fn rec(colors: &[u32], root: &Root, q: &mut Vec<u32>, t: &mut Vec<u32>, out: &mut Vec<EvenCombLabel>) {
        let n = colors.len();
        let m = n / 2;
        let l = q.len() + 1;
        if l == m {
            if *t.last().unwrap() == colors[n - 1] {
                out.push(EvenCombLabel { q: q.clone(), t: t.clone() });
            }
            return;
        }
        for qv in fusion(colors[2 * l - 1], colors[2 * l], root) {
            for tv in fusion(*t.last().unwrap(), qv, root) {
                q.push(qv);
                t.push(tv);
                rec(colors, root, q, t, out);
                q.pop();
                t.pop();
            }
        }
    }
    if m >= 2 {
        rec(colors, root, &mut Vec::new(), &mut vec![colors[0]], &mut out);
    }
    out.sort();
    out
}

/// Even (q;s) labels in lexicographic order.
pub fn even_labels(colors: &[u32], root: &Root) -> Vec<EvenLabel> {
    let n = colors.len();
    let m = n / 2;
    let mut out = Vec::new();
    if m < 2 {
        return out;
    }
    let qchoices: Vec<Vec<u32>> = (1..m).map(|l| fusion(colors[2 * l - 1], colors[2 * l], root).collect()).collect();
    let mut q = vec![0; m - 1];
    fn rec_q(i: usize, ch: &[Vec<u32>], q: &mut Vec<u32>, colors: &[u32], root: &Root, out: &mut Vec<EvenLabel>) {
        if i == ch.len() {
            let m = ch.len() + 1;
            // s_{m-2} = q_{m-1}; walk s_{i-1} = fuse(q_i, s_i) down to s_0
            let mut s = vec![0; m - 1];
            s[m - 2] = q[m - 2];
            rec_s(m - 2, q, &mut s, colors, root, out);
            return;
        }
        for &v in &ch[i] {
            q[i] = v;
            rec_q(i + 1, ch, q, colors, root, out);
        }
    }
    // q here holds q_1..q_{m-1}; s[i] is s_i
    fn rec_s(i: usize, q: &[u32], s: &mut Vec<u32>, colors: &[u32], root: &Root, out: &mut Vec<EvenLabel>) {
        if i == 0 {
            let n = colors.len();
            if admissible(colors[0], colors[n - 1], s[0], root) {
                let mut full_q = vec![s[0]];
                full_q.extend_from_slice(q);
                out.push(EvenLabel { q: full_q, s: s.clone() });
            }
            return;
        }
        for v in fusion(q[i - 1], s[i], root) {
            s[i - 1] = v;
            rec_s(i - 1, q, s, colors, root, out);
        }
    }
    rec_q(0, &qchoices, &mut q, colors, root, &mut out);
    out.sort();
    out
}

/// Odd basis → left comb.
fn stage_odd_to_comb(colors: &[u32], odd: &BlockBasis, comb: &[Vec<u32>], root: &Root) -> DMatrix<f64> {
    let m = colors.len() / 2;
    let cidx = index_map(comb);
    let mut mat = DMatrix::zeros(comb.len(), odd.dim());
    for (oi, lab) in odd.labels().iter().enumerate() {
        if m == 1 {
            mat[(0, oi)] = 1.0;
            continue;
        }
        let mut t = vec![0u32; m];
        t[0] = colors[0];
        t[m - 1] = colors[2 * m - 1];
        fill_t(1, colors, lab, &mut t, 1.0, root, &mut |t, v| {
            let mut a = vec![colors[0]];
            for i in 0..m - 1 {
                a.push(lab.r[i]);
                a.push(t[i + 1]);
            }
            if let Some(&ci) = cidx.get(&a) {
                mat[(ci, oi)] += v;
            }
        });
    }
    mat
}

/// Enumerate t_i, i = 1..m-2, accumulating Π A(r_{i-1}, j_{2i+1}, j_{2i+2}, r_i; t_i, p_i).
fn fill_t(
    i: usize,
    colors: &[u32],
    lab: &BlockLabel,
    t: &mut Vec<u32>,
    acc: f64,
    root: &Root,
    emit: &mut dyn FnMut(&[u32], f64),
) {
    let m = colors.len() / 2;
    if i + 1 >= m {
        emit(t, acc);
        return;
    }
    for x in fusion(lab.r[i - 1], colors[2 * i], root) {
        let v = a6(lab.r[i - 1], colors[2 * i], colors[2 * i + 1], lab.r[i], x, lab.p[i], root);
        if v != 0.0 {
            t[i] = x;
            fill_t(i + 1, colors, lab, t, acc * v, root, emit);
        }
    }
}

/// Left comb → left comb over even pairs.
fn stage_comb_to_even_comb(colors: &[u32], comb: &[Vec<u32>], ecomb: &[EvenCombLabel], root: &Root) -> DMatrix<f64> {
    let m = colors.len() / 2;
    let eidx = index_map(ecomb);
    let mut mat = DMatrix::zeros(ecomb.len(), comb.len());
    for (ci, a) in comb.iter().enumerate() {
        let t: Vec<u32> = (0..m).map(|l| a[2 * l]).collect();
        let mut q = Vec::with_capacity(m - 1);
        fn rec(
            l: usize,
            colors: &[u32],
            a: &[u32],
            t: &[u32],
            q: &mut Vec<u32>,
            acc: f64,
            root: &Root,
            emit: &mut dyn FnMut(&[u32], f64),
        ) {
            let m = colors.len() / 2;
            if l + 1 == m {
                emit(q, acc);
                return;
            }
            for x in fusion(colors[2 * l + 1], colors[2 * l + 2], root) {
                let v = a6(t[l], colors[2 * l + 1], colors[2 * l + 2], t[l + 1], a[2 * l + 1], x, root);
                if v != 0.0 {
                    q.push(x);
                    rec(l + 1, colors, a, t, q, acc * v, root, emit);
                    q.pop();
                }
            }
        }
        rec(0, colors, a, &t, &mut q, 1.0, root, &mut |q, v| {
            let key = EvenCombLabel { q: q.to_vec(), t: t.clone() };
            if let Some(&ei) = eidx.get(&key) {
                mat[(ei, ci)] += v;
            }
        });
    }
    mat
}

/// Left comb over even pairs → even (q;s) tree.
fn stage_even_comb_to_even(colors: &[u32], ecomb: &[EvenCombLabel], even: &[EvenLabel], root: &Root) -> DMatrix<f64> {
    let n = colors.len();
    let m = n / 2;
    let jn = colors[n - 1];
    let eidx = index_map(even);
    let mut mat = DMatrix::zeros(even.len(), ecomb.len());
    for (ci, lab) in ecomb.iter().enumerate() {
        // q_i = lab.q[i-1], t_i = lab.t[i]
        let qv = |i: usize| lab.q[i - 1];
        let mut s = vec![0u32; m - 1];
        s[m - 2] = qv(m - 1);
        fn rec(
            i: usize,
            qv: &dyn Fn(usize) -> u32,
            t: &[u32],
            jn: u32,
            s: &mut Vec<u32>,
            acc: f64,
            root: &Root,
            emit: &mut dyn FnMut(&[u32], f64),
        ) {
            if i == 0 {
                emit(s, acc);
                return;
            }
            for x in fusion(qv(i), s[i], root) {
                let v = a6(t[i - 1], qv(i), s[i], jn, t[i], x, root);
                if v != 0.0 {
                    s[i - 1] = x;
                    rec(i - 1, qv, t, jn, s, acc * v, root, emit);
                }
            }
        }
        rec(m - 2, &qv, &lab.t, jn, &mut s, 1.0, root, &mut |s, v| {
            let mut q = vec![s[0]];
            q.extend_from_slice(&lab.q);
            if let Some(&ei) = eidx.get(&EvenLabel { q, s: s.to_vec() }) {
                mat[(ei, ci)] += v;
            }
        });
    }
    mat
}

/// The odd → even change of basis for one colouring.
#[derive(Debug, Clone)]
pub struct DualityMatrix {
    pub odd: Arc<BlockBasis>,
    pub even: Vec<EvenLabel>,
    /// Rows indexed by even labels, columns by odd labels.
    pub matrix: DMatrix<f64>,
}

/// Groupoid morphism between block bases of possibly different colourings.
#[derive(Debug, Clone)]
pub struct UnitaryOp {
    pub basis_in: Arc<BlockBasis>,
    pub basis_out: Arc<BlockBasis>,
    pub matrix: DMatrix<Complex64>,
}

impl UnitaryOp {
    pub fn identity(basis: Arc<BlockBasis>) -> Self {
        let d = basis.dim();
        UnitaryOp { basis_out: basis.clone(), basis_in: basis, matrix: DMatrix::identity(d, d) }
    }

    /// self applied after `first`.
    pub fn after(&self, first: &UnitaryOp) -> Result<UnitaryOp> {
        if first.basis_out.colors() != self.basis_in.colors() {
            return Err(Error::DimensionMismatch { expected: self.basis_in.dim(), got: first.basis_out.dim() });
        }
        Ok(UnitaryOp {
            basis_in: first.basis_in.clone(),
            basis_out: self.basis_out.clone(),
            matrix: &self.matrix * &first.matrix,
        })
    }

    /// max |U†U − I|.
    pub fn unitarity_error(&self) -> f64 {
        let p = self.matrix.adjoint() * &self.matrix;
        max_dev_from_identity(&p)
    }
}

pub(crate) fn max_dev_from_identity(p: &DMatrix<Complex64>) -> f64 {
    let mut e: f64 = 0.0;
    for r in 0..p.nrows() {
        for c in 0..p.ncols() {
            let t = if r == c { 1.0 } else { 0.0 };
            e = e.max((p[(r, c)] - t).norm());
        }
    }
    e
}

struct Recoupling {
    odd: Arc<BlockBasis>,
    even: Vec<EvenLabel>,
    staged: DMatrix<f64>,
}

/// Representation builder for one root; caches change-of-basis data per colouring.
pub struct KaulRep {
    root: Root,
    bases: RwLock<HashMap<Vec<u32>, Arc<BlockBasis>>>,
    recouplings: RwLock<HashMap<Vec<u32>, Arc<Recoupling>>>,
}

impl KaulRep {
    pub fn new(root: Root) -> Self {
        KaulRep { root, bases: RwLock::new(HashMap::new()), recouplings: RwLock::new(HashMap::new()) }
    }

    pub fn root(&self) -> &Root {
        &self.root
    }

    pub fn basis(&self, colors: &[u32]) -> Result<Arc<BlockBasis>> {
        if let Some(b) = self.bases.read().unwrap().get(colors) {
            return Ok(b.clone());
        }
        let b = Arc::new(enumerate_basis(colors, &self.root)?);
        if b.dim() > MAX_DENSE_DIM {
            return Err(Error::Resource(format!("basis dimension {} exceeds the dense cap {MAX_DENSE_DIM}", b.dim())));
        }
        self.bases.write().unwrap().insert(colors.to_vec(), b.clone());
        Ok(b)
    }

    fn recoupling(&self, colors: &[u32]) -> Result<Arc<Recoupling>> {
        if let Some(r) = self.recouplings.read().unwrap().get(colors) {
            return Ok(r.clone());
        }
        let odd = self.basis(colors)?;
        let root = &self.root;
        let comb = comb_labels(colors, root);
        let ecomb = even_comb_labels(colors, root);
        let even = even_labels(colors, root);
        let m1 = stage_odd_to_comb(colors, &odd, &comb, root);
        let m2 = stage_comb_to_even_comb(colors, &comb, &ecomb, root);
        let m3 = stage_even_comb_to_even(colors, &ecomb, &even, root);
        let staged = m3 * m2 * m1;
        let rec = Arc::new(Recoupling { odd, even, staged });
        self.recouplings.write().unwrap().insert(colors.to_vec(), rec.clone());
        Ok(rec)
    }

    /// Odd → even duality as a product of the three recoupling stages.
    pub fn full_duality_matrix(&self, colors: &[u32]) -> Result<DualityMatrix> {
        if colors.len() < 4 {
            return Err(Error::Range("the duality matrix needs at least 4 punctures".into()));
        }
        let r = self.recoupling(colors)?;
        Ok(DualityMatrix { odd: r.odd.clone(), even: r.even.clone(), matrix: r.staged.clone() })
    }

    /// Odd → even duality evaluated entry by entry as the sum over
    /// t_1..t_{m-2} of products of elementary coefficients.
    pub fn factored_duality_matrix(&self, colors: &[u32]) -> Result<DualityMatrix> {
        if colors.len() < 4 {
            return Err(Error::Range("the duality matrix needs at least 4 punctures".into()));
        }
        let root = &self.root;
        let odd = self.basis(colors)?;
        let even = even_labels(colors, root);
        let n = colors.len();
        let m = n / 2;
        let j = |i: usize| colors[i - 1];
        let mut mat = DMatrix::zeros(even.len(), odd.dim());
        for (oi, pr) in odd.labels().iter().enumerate() {
            for (ei, qs) in even.iter().enumerate() {
                let mut t = vec![0u32; m];
                t[0] = j(1);
                t[m - 1] = j(n);
                let mut total = 0.0;
                sum_over_t(1, m, &mut t, &mut |t| {
                    let mut v = 1.0;
                    for i in 1..m - 1 {
                        v *= a6(pr.r[i - 1], j(2 * i + 1), j(2 * i + 2), pr.r[i], t[i], pr.p[i], root);
                        v *= a6(t[i - 1], qs.q[i], qs.s[i], j(n), t[i], qs.s[i - 1], root);
                        if v == 0.0 {
                            return;
                        }
                    }
                    for l in 0..m - 1 {
                        v *= a6(t[l], j(2 * l + 2), j(2 * l + 3), t[l + 1], pr.r[l], qs.q[l + 1], root);
                    }
                    total += v;
                }, root.k());
                mat[(ei, oi)] = total;
            }
        }
        Ok(DualityMatrix { odd, even, matrix: mat })
    }

    pub fn odd_generator(&self, l: usize, colors: &[u32], orient: &[i8], sign: i8) -> Result<UnitaryOp> {
        check_letter(l, colors, orient, sign)?;
        if l.is_multiple_of(2) {
            return Err(Error::Range(format!("b_{l} is not an odd generator")));
        }
        let a = (l - 1) / 2;
        let basis_in = self.basis(colors)?;
        let swapped = swap(colors, l);
        let basis_out = self.basis(&swapped)?;
        let (j, i) = (colors[l - 1], colors[l]);
        let o = (orient[l - 1], orient[l]);
        let mut matrix = DMatrix::zeros(basis_out.dim(), basis_in.dim());
        for (x, lab) in basis_in.labels().iter().enumerate() {
            let y = basis_out.index_of(lab)?;
            matrix[(y, x)] = letter_eigenvalue(lab.p[a], j, i, o, sign, &self.root)?;
        }
        Ok(UnitaryOp { basis_in, basis_out, matrix })
    }

    pub fn even_generator(&self, l: usize, colors: &[u32], orient: &[i8], sign: i8) -> Result<UnitaryOp> {
        check_letter(l, colors, orient, sign)?;
        if l % 2 == 1 {
            return Err(Error::Range(format!("b_{l} is not an even generator")));
        }
        let a = l / 2;
        let swapped = swap(colors, l);
        let rin = self.recoupling(colors)?;
        let rout = self.recoupling(&swapped)?;
        let (j, i) = (colors[l - 1], colors[l]);
        let o = (orient[l - 1], orient[l]);
        let eout = index_map(&rout.even);
        let mut phases = DMatrix::<Complex64>::zeros(rout.even.len(), rin.even.len());
        for (x, lab) in rin.even.iter().enumerate() {
            let y = *eout.get(lab).ok_or(Error::NotFound)?;
            phases[(y, x)] = letter_eigenvalue(lab.q[a], j, i, o, sign, &self.root)?;
        }
        let ain = rin.staged.map(Complex64::from);
        let aout_t = rout.staged.transpose().map(Complex64::from);
        Ok(UnitaryOp { basis_in: rin.odd.clone(), basis_out: rout.odd.clone(), matrix: aout_t * phases * ain })
    }

    pub fn generator(&self, l: usize, colors: &[u32], orient: &[i8], sign: i8) -> Result<UnitaryOp> {
        if l % 2 == 1 {
            self.odd_generator(l, colors, orient, sign)
        } else {
            self.even_generator(l, colors, orient, sign)
        }
    }

    /// Ordered product of generator images, bottom letter first.
    pub fn represent_word(&self, word: &ColoredBraidWord) -> Result<UnitaryOp> {
        let mut colors = word.colors().to_vec();
        let mut orient = word.orient().to_vec();
        let mut u = UnitaryOp::identity(self.basis(&colors)?);
        for letter in word.letters() {
            let g = self.generator(letter.index, &colors, &orient, letter.sign)?;
            u = g.after(&u)?;
            colors.swap(letter.index - 1, letter.index);
            orient.swap(letter.index - 1, letter.index);
        }
        Ok(u)
    }
}

fn sum_over_t(i: usize, m: usize, t: &mut Vec<u32>, f: &mut dyn FnMut(&[u32]), k: u32) {
    if i + 1 >= m {
        f(t);
        return;
    }
    for x in 0..=k {
        t[i] = x;
        sum_over_t(i + 1, m, t, f, k);
    }
}

fn swap(colors: &[u32], l: usize) -> Vec<u32> {
    let mut c = colors.to_vec();
    c.swap(l - 1, l);
    c
}

fn check_letter(l: usize, colors: &[u32], orient: &[i8], sign: i8) -> Result<()> {
    if l == 0 || l >= colors.len() {
        return Err(Error::Range(format!("generator index {l} outside 1..={}", colors.len().saturating_sub(1))));
    }
    if orient.len() != colors.len() {
        return Err(Error::Range("orientation list length differs from colour list".into()));
    }
    if sign.abs() != 1 {
        return Err(Error::Range(format!("sign {sign} is not +1 or -1")));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::braid::Letter;

    fn rep(k: u32) -> KaulRep {
        KaulRep::new(Root::new(k).unwrap())
    }

    fn close(a: Complex64, b: Complex64) -> bool {
        (a - b).norm() < 1e-12
    }

    fn ev(t: u32, par: bool) -> EigenvalueSpec {
        EigenvalueSpec {
            t: Spin(t),
            j: Spin(1),
            i: Spin(1),
            orientation: if par { RelativeOrientation::Parallel } else { RelativeOrientation::Antiparallel },
            handedness: Handedness::Over,
        }
    }

    #[test]
    fn eigenvalue_examples() {
        let r = Root::new(3).unwrap();
        assert!(close(braiding_eigenvalue(&ev(0, true), &r).unwrap(), -r.q_pow(1.5)));
        assert!(close(braiding_eigenvalue(&ev(2, true), &r).unwrap(), r.q_pow(0.5)));
        assert!(close(braiding_eigenvalue(&ev(0, false), &r).unwrap(), Complex64::new(1.0, 0.0)));
        assert!(close(braiding_eigenvalue(&ev(2, false), &r).unwrap(), -r.q()));
        let mut u = ev(2, true);
        u.handedness = Handedness::Under;
        assert!(close(braiding_eigenvalue(&u, &r).unwrap(), r.q_pow(0.5).conj()));
        assert!(braiding_eigenvalue(&ev(4, true), &Root::new(1).unwrap()).is_err());
    }

    #[test]
    fn b2_singlet() {
        let kr = rep(2);
        let g = kr.odd_generator(1, &[1, 1], &[1, -1], 1).unwrap();
        assert_eq!(g.matrix.shape(), (1, 1));
        assert!(close(g.matrix[(0, 0)], Complex64::new(1.0, 0.0)));
    }

    #[test]
    fn b4_odd_diag_and_inverse_conj() {
        let kr = rep(3);
        let o = [1, -1, 1, -1];
        let g = kr.odd_generator(1, &[1; 4], &o, 1).unwrap();
        let h = kr.odd_generator(1, &[1; 4], &o, -1).unwrap();
        let r = kr.root();
        for (x, t) in [0u32, 2].iter().enumerate() {
            let l = letter_eigenvalue(*t, 1, 1, (1, -1), 1, r).unwrap();
            assert!(close(g.matrix[(x, x)], l));
            assert!(close(h.matrix[(x, x)], l.conj()));
        }
    }

    #[test]
    fn m2_duality_is_single_block() {
        let kr = rep(2);
        let d = kr.full_duality_matrix(&[1; 4]).unwrap();
        let b = crate::qalgebra::duality_block(1, 1, 1, 1, kr.root()).unwrap();
        // rows q_1 = m side, columns p_0 = l side
        assert_eq!(d.matrix.shape(), (2, 2));
        for r in 0..2 {
            for c in 0..2 {
                assert!((d.matrix[(r, c)] - b.matrix[(r, c)]).abs() < 1e-12);
            }
        }
        let z = kr.full_duality_matrix(&[0, 0, 2, 2]).unwrap();
        assert_eq!(z.matrix.shape(), (1, 1));
        assert!((z.matrix[(0, 0)].abs() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn factored_equals_staged() {
        for k in 2..5 {
            let kr = rep(k);
            for colors in [vec![1u32; 6], vec![1, 1, 2, 2, 1, 1], vec![2, 1, 1, 2, 2, 2], vec![1; 8]] {
                if colors.iter().any(|&c| c > k) {
                    continue;
                }
                let a = kr.full_duality_matrix(&colors).unwrap();
                let b = kr.factored_duality_matrix(&colors).unwrap();
                assert_eq!(a.even, b.even);
                assert!((a.matrix - b.matrix).abs().max() < 1e-12);
            }
        }
    }

    #[test]
    fn even_generator_spectrum() {
        let kr = rep(2);
        let o = [1, -1, 1, -1];
        let g = kr.even_generator(2, &[1; 4], &o, 1).unwrap();
        assert!(g.unitarity_error() < 1e-12);
        let tr = g.matrix.trace();
        let r = kr.root();
        let want = letter_eigenvalue(0, 1, 1, (-1, 1), 1, r).unwrap() + letter_eigenvalue(2, 1, 1, (-1, 1), 1, r).unwrap();
        assert!(close(tr, want));
        let g2 = kr.even_generator(2, &[1; 4], &[1, -1, -1, 1], -1).unwrap();
        let prod = &kr.even_generator(2, &[1; 4], &[1, -1, -1, 1], 1).unwrap().matrix * &g2.matrix;
        assert!(max_dev_from_identity(&prod) < 1e-12);
    }

    #[test]
    fn zero_colour_even_generator_is_diagonal() {
        let kr = rep(3);
        let g = kr.even_generator(2, &[2, 2, 0, 0], &[1, -1, 1, -1], 1).unwrap();
        assert_eq!(g.matrix.shape(), (1, 1));
        assert!((g.matrix[(0, 0)].norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn word_times_inverse_is_identity() {
        let kr = rep(4);
        let letters = vec![Letter::new(2, 1), Letter::new(1, -1), Letter::new(2, 1), Letter::new(3, 1)];
        let w = ColoredBraidWord::new(vec![1, 1, 2, 2], vec![1, -1, 1, -1], letters).unwrap();
        let full = w.compose(&w.inverse()).unwrap();
        let u = kr.represent_word(&full).unwrap();
        assert!(max_dev_from_identity(&u.matrix) < 1e-9);
        let e = ColoredBraidWord::new(vec![1, 1, 2, 2], vec![1, -1, 1, -1], vec![]).unwrap();
        assert!(max_dev_from_identity(&kr.represent_word(&e).unwrap().matrix) < 1e-15);
    }
}
