//! Independent ground truth: the Kauffman bracket at spin ½, a generic
//! tree-rewriting recoupling oracle, the cyclotomic figure-eight formula
//! and the figure-eight volume.
//!
//! Everything here is allowed to be exponential.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::braid::ColoredBraidWord;
use crate::error::{Error, Result};
use crate::kaulrep::{even_labels, DualityMatrix, EvenLabel, KaulRep};
use crate::qalgebra::{duality6j, fusion, QRacahArgs, Root};

/// Largest crossing count the state sum accepts.
pub const MAX_BRACKET_CROSSINGS: usize = 18;

/// Integer Laurent polynomial in A.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Laurent {
    terms: BTreeMap<i64, i64>,
}

impl Laurent {
    pub fn monomial(exp: i64, coeff: i64) -> Self {
        let mut p = Laurent::default();
        p.add_term(exp, coeff);
        p
    }

    pub fn one() -> Self {
        Self::monomial(0, 1)
    }

    fn add_term(&mut self, exp: i64, coeff: i64) {
        let e = self.terms.entry(exp).or_insert(0);
        *e += coeff;
        if *e == 0 {
            self.terms.remove(&exp);
        }
    }

    pub fn add(&self, other: &Laurent) -> Laurent {
        let mut out = self.clone();
        for (&e, &c) in &other.terms {
            out.add_term(e, c);
        }
        out
    }

    pub fn mul(&self, other: &Laurent) -> Laurent {
        let mut out = Laurent::default();
        for (&e1, &c1) in &self.terms {
            for (&e2, &c2) in &other.terms {
                out.add_term(e1 + e2, c1 * c2);
            }
        }
        out
    }

    /// (exponent, coefficient) pairs, ascending.
    pub fn terms(&self) -> impl Iterator<Item = (i64, i64)> + '_ {
        self.terms.iter().map(|(&e, &c)| (e, c))
    }

    pub fn coeff(&self, exp: i64) -> i64 {
        self.terms.get(&exp).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Value at A = e^{iθ}.
    pub fn eval_phase(&self, theta: f64) -> Complex64 {
        self.terms().map(|(e, c)| c as f64 * Complex64::from_polar(1.0, theta * e as f64)).sum()
    }

    /// A ↦ A^{-1}.
    pub fn mirror(&self) -> Laurent {
        Laurent { terms: self.terms.iter().map(|(&e, &c)| (-e, c)).collect() }
    }
}

impl fmt::Display for Laurent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (n, (e, c)) in self.terms().enumerate() {
            let sign = if c < 0 { "-" } else if n > 0 { "+" } else { "" };
            let sep = if n > 0 { " " } else { "" };
            let mag = c.abs();
            let body = match (mag, e) {
                (m, 0) => format!("{m}"),
                (1, e) => format!("A^{e}"),
                (m, e) => format!("{m}A^{e}"),
            };
            if n > 0 {
                write!(f, "{sep}{sign} {body}")?;
            } else {
                write!(f, "{sign}{body}")?;
            }
        }
        Ok(())
    }
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind((0..n).collect())
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.0[x] != x {
            self.0[x] = self.0[self.0[x]];
            x = self.0[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        self.0[ra] = rb;
    }
}

/// Loops of the plat diagram once every crossing is smoothed.
/// `vertical[h]` chooses the identity smoothing for letter h, else cup-cap.
fn count_loops(word: &ColoredBraidWord, vertical: &[bool]) -> usize {
    let n = word.strands();
    let levels = word.letters().len();
    let node = |h: usize, p: usize| h * n + p;
    let mut uf = UnionFind::new((levels + 1) * n);
    for i in 0..n / 2 {
        uf.union(node(0, 2 * i), node(0, 2 * i + 1));
        uf.union(node(levels, 2 * i), node(levels, 2 * i + 1));
    }
    for (h, l) in word.letters().iter().enumerate() {
        let i = l.index - 1;
        for p in (0..n).filter(|&p| p != i && p != i + 1) {
            uf.union(node(h, p), node(h + 1, p));
        }
        if vertical[h] {
            uf.union(node(h, i), node(h + 1, i));
            uf.union(node(h, i + 1), node(h + 1, i + 1));
        } else {
            uf.union(node(h, i), node(h, i + 1));
            uf.union(node(h + 1, i), node(h + 1, i + 1));
        }
    }
    let mut roots: Vec<usize> = (0..(levels + 1) * n).map(|x| uf.find(x)).collect();
    roots.sort_unstable();
    roots.dedup();
    roots.len()
}

fn loop_value() -> Laurent {
    Laurent::monomial(2, -1).add(&Laurent::monomial(-2, -1))
}

/// Unknot-normalized Kauffman bracket of the plat closure, resolving
/// crossings in word order.
pub fn kauffman_bracket(word: &ColoredBraidWord) -> Result<Laurent> {
    let order: Vec<usize> = (0..word.letters().len()).collect();
    kauffman_bracket_in_order(word, &order)
}

/// Same bracket with the skein relation applied to crossings in `order`.
pub fn kauffman_bracket_in_order(word: &ColoredBraidWord, order: &[usize]) -> Result<Laurent> {
    let n = word.letters().len();
    if n > MAX_BRACKET_CROSSINGS {
        return Err(Error::Resource(format!("{n} crossings exceed the bracket cap {MAX_BRACKET_CROSSINGS}")));
    }
    let mut seen = order.to_vec();
    seen.sort_unstable();
    if seen != (0..n).collect::<Vec<_>>() {
        return Err(Error::Range("resolution order is not a permutation of the crossings".into()));
    }
    let d = loop_value();
    let mut dpow = vec![Laurent::one()];
    let mut vertical = vec![false; n];
    let mut total = Laurent::default();
    resolve(word, order, 0, 0, &mut vertical, &d, &mut dpow, &mut total);
    Ok(total)
}

#[allow(clippy::too_many_arguments)]
fn resolve(
    word: &ColoredBraidWord,
    order: &[usize],
    depth: usize,
    a_exp: i64,
    vertical: &mut Vec<bool>,
    d: &Laurent,
    dpow: &mut Vec<Laurent>,
    total: &mut Laurent,
) {
    if depth == order.len() {
        let loops = count_loops(word, vertical);
        while dpow.len() < loops {
            let next = dpow.last().unwrap().mul(d);
            dpow.push(next);
        }
        *total = total.add(&Laurent::monomial(a_exp, 1).mul(&dpow[loops - 1]));
        return;
    }
    let h = order[depth];
    let positive = word.letters()[h].sign > 0;
    // A-smoothing of a positive letter is the vertical one
    vertical[h] = positive;
    resolve(word, order, depth + 1, a_exp + 1, vertical, d, dpow, total);
    vertical[h] = !positive;
    resolve(word, order, depth + 1, a_exp - 1, vertical, d, dpow, total);
}

fn require_spin_half(word: &ColoredBraidWord) -> Result<()> {
    if let Some(c) = word.colors().iter().find(|&&c| c != 1) {
        return Err(Error::Range(format!("the bracket oracle needs spin 1/2 on every strand, found {c}/2")));
    }
    Ok(())
}

/// Writhe-normalized bracket (−A³)^{−w}⟨L⟩ at A = e^{iθ}.
pub fn jones_at_phase(word: &ColoredBraidWord, a_theta: f64) -> Result<Complex64> {
    require_spin_half(word)?;
    let br = kauffman_bracket(word)?;
    let w = word.total_writhe();
    let sign = if w % 2 == 0 { 1.0 } else { -1.0 };
    Ok(sign * Complex64::from_polar(1.0, -3.0 * w as f64 * a_theta) * br.eval_phase(a_theta))
}

/// Jones value at the root, with A = q^{-1/4} so that t = A^{-4} = q.
pub fn jones_at(word: &ColoredBraidWord, root: &Root) -> Result<Complex64> {
    jones_at_q_angle(word, q_theta_of(root))
}

fn q_theta_of(root: &Root) -> f64 {
    let s = if root.is_conjugated() { -1.0 } else { 1.0 };
    s * 2.0 * std::f64::consts::PI / root.order() as f64
}

/// Jones value at q = e^{iφ}, taking A = e^{-iφ/4}.
pub fn jones_at_q_angle(word: &ColoredBraidWord, phi: f64) -> Result<Complex64> {
    jones_at_phase(word, -phi / 4.0)
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
enum Tree {
    Leaf(usize),
    Node(Box<Tree>, Box<Tree>, u32),
}

impl Tree {
    fn spin(&self, colors: &[u32]) -> u32 {
        match self {
            Tree::Leaf(i) => colors[*i],
            Tree::Node(_, _, s) => *s,
        }
    }

    fn node(l: Tree, r: Tree, s: u32) -> Tree {
        Tree::Node(Box::new(l), Box::new(r), s)
    }

    /// Internal labels of a right comb, top down; None if not a right comb.
    fn right_comb_labels(&self) -> Option<Vec<u32>> {
        let mut out = Vec::new();
        let mut t = self;
        loop {
            match t {
                Tree::Leaf(_) => return Some(out),
                Tree::Node(l, r, s) => {
                    if !matches!(**l, Tree::Leaf(_)) {
                        return None;
                    }
                    out.push(*s);
                    t = r;
                }
            }
        }
    }
}

/// One F-move ((a b)_e c)_f → Σ_g A(a,b,c,f; e,g) (a (b c)_g)_f at the
/// first left-heavy node in pre-order. None once the tree is a right comb.
fn rotate_once(t: &Tree, colors: &[u32], root: &Root) -> Option<Vec<(Tree, f64)>> {
    let Tree::Node(l, r, f) = t else { return None };
    if let Tree::Node(a, b, e) = &**l {
        let (sa, sb, sc) = (a.spin(colors), b.spin(colors), r.spin(colors));
        let out = fusion(sb, sc, root)
            .filter_map(|g| {
                let args = QRacahArgs::new(sa, sb, sc, *f, *e, g);
                args.check(root).ok()?;
                let c = duality6j(&args, root).ok()?;
                Some((Tree::node((**a).clone(), Tree::node((**b).clone(), (**r).clone(), g), *f), c))
            })
            .collect();
        return Some(out);
    }
    rotate_once(r, colors, root).map(|v| v.into_iter().map(|(nr, c)| (Tree::node((**l).clone(), nr, *f), c)).collect())
}

/// Expand a labelled tree over the right-comb basis.
fn to_right_comb(t: Tree, colors: &[u32], root: &Root) -> HashMap<Vec<u32>, f64> {
    let mut state: HashMap<Tree, f64> = HashMap::from([(t, 1.0)]);
    loop {
        let mut next: HashMap<Tree, f64> = HashMap::new();
        let mut moved = false;
        for (tree, amp) in state.iter() {
            match rotate_once(tree, colors, root) {
                Some(terms) => {
                    moved = true;
                    for (nt, c) in terms {
                        *next.entry(nt).or_insert(0.0) += amp * c;
                    }
                }
                None => *next.entry(tree.clone()).or_insert(0.0) += amp,
            }
        }
        state = next;
        if !moved {
            break;
        }
    }
    state.into_iter().map(|(t, a)| (t.right_comb_labels().expect("fully rotated"), a)).collect()
}

/// Odd tree (((j1 j2)_{p0} (j3 j4)_{p1})_{r1} …)_{r_{m-2}} j_{n-1}, total j_n.
fn odd_tree(colors: &[u32], p: &[u32], r: &[u32]) -> Tree {
    let m = colors.len() / 2;
    let pair = |i: usize| Tree::node(Tree::Leaf(2 * i), Tree::Leaf(2 * i + 1), p[i]);
    let mut t = pair(0);
    for i in 1..m - 1 {
        t = Tree::node(t, pair(i), r[i]);
    }
    Tree::node(t, Tree::Leaf(colors.len() - 2), colors[colors.len() - 1])
}

/// Even tree j1 (q_1 (q_2 … (q_{m-2} q_{m-1})_{s_{m-3}} …)_{s_1})_{s_0}, total j_n.
fn even_tree(colors: &[u32], lab: &EvenLabel) -> Tree {
    let m = colors.len() / 2;
    let pair = |i: usize| Tree::node(Tree::Leaf(2 * i - 1), Tree::Leaf(2 * i), lab.q[i]);
    let mut t = pair(m - 1);
    for i in (1..m - 1).rev() {
        t = Tree::node(pair(i), t, lab.s[i - 1]);
    }
    Tree::node(Tree::Leaf(0), t, colors[colors.len() - 1])
}

/// Odd → even change of basis built by rewriting both trees into the
/// right comb with single F-moves, then D = Eᵀ·O.
pub fn tree_recoupling_oracle(colors: &[u32], rep: &KaulRep) -> Result<DualityMatrix> {
    if colors.len() < 4 {
        return Err(Error::Range("the duality matrix needs at least 4 punctures".into()));
    }
    if colors.len() > 8 {
        return Err(Error::Resource(format!("tree oracle limited to 8 punctures, got {}", colors.len())));
    }
    let root = rep.root();
    let odd = rep.basis(colors)?;
    let even = even_labels(colors, root);
    let odd_cols: Vec<_> = odd.labels().iter().map(|l| to_right_comb(odd_tree(colors, &l.p, &l.r), colors, root)).collect();
    let even_cols: Vec<_> = even.iter().map(|l| to_right_comb(even_tree(colors, l), colors, root)).collect();
    let mut matrix = DMatrix::zeros(even.len(), odd.dim());
    for (ei, e) in even_cols.iter().enumerate() {
        for (oi, o) in odd_cols.iter().enumerate() {
            matrix[(ei, oi)] = e.iter().map(|(k, v)| v * o.get(k).copied().unwrap_or(0.0)).sum();
        }
    }
    Ok(DualityMatrix { odd, even, matrix })
}

/// Σ_{j=0}^{N-1} Π_{l=1}^{j} (q^N + q^{-N} − q^l − q^{-l}), unknot-normalized.
pub fn fig8_colored_jones(n: u32, q: Complex64) -> Complex64 {
    let qn = q.powi(n as i32) + q.powi(-(n as i32));
    let mut total = Complex64::new(0.0, 0.0);
    let mut prod = Complex64::new(1.0, 0.0);
    for j in 0..n {
        if j > 0 {
            prod *= qn - q.powi(j as i32) - q.powi(-(j as i32));
        }
        total += prod;
    }
    total
}

/// 2·Σ_{n ≤ terms} sin(nπ/3)/n², summed tail first.
pub fn fig8_volume_series(terms: u64) -> f64 {
    let h = 3f64.sqrt() / 2.0;
    // sin(nπ/3) cycles through h, h, 0, -h, -h, 0
    let weight = |n: u64| match n % 6 {
        1 | 2 => h,
        4 | 5 => -h,
        _ => 0.0,
    };
    let mut s = 0.0;
    for n in (1..=terms).rev() {
        let w = weight(n);
        if w != 0.0 {
            let x = n as f64;
            s += w / (x * x);
        }
    }
    2.0 * s
}

/// Hyperbolic volume of the figure-eight complement, 2·Im Li₂(e^{iπ/3}).
pub fn fig8_volume() -> f64 {
    fig8_volume_series(10_000_000)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::braid::Letter;

    fn half(n: usize, letters: &[(usize, i8)]) -> ColoredBraidWord {
        let l = letters.iter().map(|&(i, s)| Letter::new(i, s)).collect();
        ColoredBraidWord::plat_auto_oriented(vec![1; n], l).unwrap()
    }

    #[test]
    fn unknot_bracket_is_one() {
        assert_eq!(kauffman_bracket(&half(2, &[])).unwrap(), Laurent::one());
        let k = half(2, &[(1, 1)]);
        assert_eq!(kauffman_bracket(&k).unwrap(), Laurent::monomial(-3, -1));
        assert!((jones_at(&k, &Root::new(3).unwrap()).unwrap() - 1.0).norm() < 1e-12);
    }

    #[test]
    fn hopf_four_term_expansion() {
        // states: AA → 2 loops, AB and BA → 1 loop, BB → 2 loops
        let w = half(4, &[(2, 1), (2, 1)]);
        let b = kauffman_bracket(&w).unwrap();
        let want = Laurent::monomial(2, 1)
            .mul(&loop_value())
            .add(&Laurent::monomial(0, 2))
            .add(&Laurent::monomial(-2, 1).mul(&loop_value()));
        assert_eq!(b, want);
        assert_eq!(b.to_string(), "-A^-4 - A^4");
    }

    #[test]
    fn trefoil_jones_polynomial() {
        let w = half(4, &[(2, 1), (2, 1), (2, 1)]);
        let br = kauffman_bracket(&w).unwrap();
        // (−A³)^{−w}⟨L⟩ with w = 3, then t = A^{-4}: −t^{-4} + t^{-3} + t^{-1} or its mirror
        let f = Laurent::monomial(-9, -1).mul(&br);
        let exps: Vec<(i64, i64)> = f.terms().collect();
        let t_form: Vec<(i64, i64)> = exps.iter().map(|&(e, c)| (-e / 4, c)).collect();
        let mut sorted = t_form.clone();
        sorted.sort();
        assert!(sorted == vec![(1, 1), (3, 1), (4, -1)] || sorted == vec![(-4, -1), (-3, 1), (-1, 1)], "{sorted:?}");
    }

    #[test]
    fn resolution_order_irrelevant() {
        let w = half(4, &[(2, 1), (2, 1), (1, -1), (2, 1)]);
        let base = kauffman_bracket(&w).unwrap();
        for order in [[3, 2, 1, 0], [1, 3, 0, 2], [2, 0, 3, 1]] {
            assert_eq!(kauffman_bracket_in_order(&w, &order).unwrap(), base);
        }
        assert!(kauffman_bracket_in_order(&w, &[0, 0, 1, 2]).is_err());
    }

    #[test]
    fn bracket_cap() {
        let w = half(4, &vec![(2, 1); MAX_BRACKET_CROSSINGS + 1]);
        assert!(matches!(kauffman_bracket(&w), Err(Error::Resource(_))));
    }

    #[test]
    fn mirror_conjugates() {
        let r = Root::new(5).unwrap();
        let w = half(4, &[(2, 1), (2, 1), (2, 1)]);
        let a = jones_at(&w, &r).unwrap();
        let b = jones_at(&w.mirror(), &r).unwrap();
        assert!((a - b.conj()).norm() < 1e-12);
        assert_eq!(kauffman_bracket(&w.mirror()).unwrap(), kauffman_bracket(&w).unwrap().mirror());
    }

    #[test]
    fn needs_spin_half() {
        let w = ColoredBraidWord::plat_auto_oriented(vec![2, 2], vec![]).unwrap();
        assert!(matches!(jones_at(&w, &Root::new(3).unwrap()), Err(Error::Range(_))));
    }

    #[test]
    fn tree_oracle_m2_matches() {
        let kr = KaulRep::new(Root::new(3).unwrap());
        for c in [[1u32, 1, 1, 1], [1, 2, 1, 2], [0, 0, 3, 3], [2, 1, 3, 2]] {
            let a = tree_recoupling_oracle(&c, &kr).unwrap();
            let b = kr.full_duality_matrix(&c).unwrap();
            assert_eq!(a.even, b.even);
            assert!((a.matrix - b.matrix).abs().max() < 1e-12, "{c:?}");
        }
    }

    #[test]
    fn tree_oracle_m3_matches() {
        let kr = KaulRep::new(Root::new(3).unwrap());
        for c in [[1u32; 6], [1, 2, 1, 2, 1, 2], [2, 2, 1, 1, 3, 3]] {
            let a = tree_recoupling_oracle(&c, &kr).unwrap();
            let b = kr.full_duality_matrix(&c).unwrap();
            assert_eq!(a.even, b.even);
            assert!((a.matrix - b.matrix).abs().max() < 1e-9, "{c:?}");
        }
    }

    #[test]
    fn tree_oracle_zero_colour_blocks() {
        let kr = KaulRep::new(Root::new(4).unwrap());
        let d = tree_recoupling_oracle(&[0, 0, 2, 2, 2, 2], &kr).unwrap();
        let e = tree_recoupling_oracle(&[2, 2, 2, 2], &kr).unwrap();
        assert_eq!(d.matrix.shape(), e.matrix.shape());
        assert!((d.matrix.abs() - e.matrix.abs()).abs().max() < 1e-12);
    }

    #[test]
    fn fig8_small_values() {
        let q = Complex64::from_polar(1.0, 0.7);
        assert_eq!(fig8_colored_jones(1, q), Complex64::new(1.0, 0.0));
        // N = 2 is the Jones polynomial t² − t + 1 − t⁻¹ + t⁻²
        let t = q;
        let want = t * t - t + 1.0 - t.inv() + t.inv() * t.inv();
        assert!((fig8_colored_jones(2, q) - want).norm() < 1e-12);
        let z = fig8_colored_jones(5, Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI / 5.0));
        assert!(z.im.abs() < 1e-9);
    }

    #[test]
    fn volume_constant() {
        let v = fig8_volume();
        assert!(v > 2.0 && v < 2.1);
        assert!((v - 2.029_883_212_819_307).abs() < 1e-12);
        assert!((fig8_volume_series(1_000_000) - fig8_volume_series(10_000_000)).abs() < 1e-10);
        assert!((v / 2.0 - 1.014_941_606_409_653_6).abs() < 1e-12);
    }
}
