//! Conformal-block basis |Φ_(p;r)(j1…j2m)⟩ for 2m punctures.
//!
//! p_i couples the pair (j_{2i+1}, j_{2i+2}); the r chain is r_0 = p_0,
//! r_i = fuse(r_{i-1}, p_i), closing with r_{m-2} = p_{m-1}.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qalgebra::{admissible, Root};

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct BlockLabel {
    pub p: Vec<u32>,
    pub r: Vec<u32>,
}

impl BlockLabel {
    /// The all-zero label for m pairs.
    pub fn vacuum(m: usize) -> Self {
        BlockLabel { p: vec![0; m], r: vec![0; m.saturating_sub(1)] }
    }

    pub fn m(&self) -> usize {
        self.p.len()
    }

    /// Independent labels in register order: p_0..p_{m-1}, r_1..r_{m-3}.
    /// For m = 2 only p_0 is free; for m = 1 nothing is.
    pub fn free_slots(&self) -> Vec<u32> {
        match self.m() {
            0 | 1 => Vec::new(),
            2 => vec![self.p[0]],
            m => {
                let mut v = self.p.clone();
                v.extend_from_slice(&self.r[1..m - 2]);
                v
            }
        }
    }

    /// Inverse of `free_slots`.
    pub fn from_free_slots(m: usize, slots: &[u32]) -> Self {
        match m {
            0 => BlockLabel { p: vec![], r: vec![] },
            1 => BlockLabel::vacuum(1),
            2 => BlockLabel { p: vec![slots[0], slots[0]], r: vec![slots[0]] },
            _ => {
                let p = slots[..m].to_vec();
                let mut r = vec![p[0]];
                r.extend_from_slice(&slots[m..]);
                r.push(p[m - 1]);
                BlockLabel { p, r }
            }
        }
    }
}

/// Number of free labels, the register slot count.
pub fn slot_count(m: usize) -> usize {
    match m {
        0 | 1 => 0,
        2 => 1,
        m => 2 * m - 3,
    }
}

/// Whether a label satisfies every fusion constraint for these colours.
pub fn label_is_admissible(colors: &[u32], label: &BlockLabel, root: &Root) -> bool {
    let m = colors.len() / 2;
    if label.p.len() != m || label.r.len() != m.saturating_sub(1) {
        return false;
    }
    if m == 1 {
        return label.p[0] == 0 && colors[0] == colors[1];
    }
    for i in 0..m {
        if !admissible(colors[2 * i], colors[2 * i + 1], label.p[i], root) {
            return false;
        }
    }
    if label.r[0] != label.p[0] || label.r[m - 2] != label.p[m - 1] {
        return false;
    }
    (1..m - 1).all(|i| admissible(label.r[i - 1], label.p[i], label.r[i], root))
}

#[derive(Debug, Clone)]
pub struct BlockBasis {
    colors: Vec<u32>,
    labels: Vec<BlockLabel>,
    index: HashMap<BlockLabel, usize>,
}

pub(crate) fn check_colors(colors: &[u32], root: &Root) -> Result<()> {
    if colors.is_empty() || !colors.len().is_multiple_of(2) {
        return Err(Error::Range(format!("need an even, positive number of punctures, got {}", colors.len())));
    }
    if let Some(&c) = colors.iter().find(|&&c| c > root.k()) {
        return Err(Error::Range(format!("spin {c}/2 exceeds k/2 = {}/2", root.k())));
    }
    Ok(())
}

/// All admissible (p;r) labels in lexicographic order.
pub fn enumerate_basis(colors: &[u32], root: &Root) -> Result<BlockBasis> {
    check_colors(colors, root)?;
    let m = colors.len() / 2;
    let mut labels = Vec::new();
    if m == 1 {
        if colors[0] == colors[1] {
            labels.push(BlockLabel::vacuum(1));
        }
    } else {
        let choices: Vec<Vec<u32>> = (0..m)
            .map(|i| (0..=root.k()).filter(|&p| admissible(colors[2 * i], colors[2 * i + 1], p, root)).collect())
            .collect();
        let mut p = vec![0; m];
        rec_p(0, &choices, &mut p, root, &mut labels);
    }
    labels.sort();
    let index = labels.iter().cloned().enumerate().map(|(i, l)| (l, i)).collect();
    Ok(BlockBasis { colors: colors.to_vec(), labels, index })
}

fn rec_p(i: usize, choices: &[Vec<u32>], p: &mut Vec<u32>, root: &Root, out: &mut Vec<BlockLabel>) {
    let m = choices.len();
    if i == m {
        if m == 2 {
            if p[0] == p[1] {
                out.push(BlockLabel { p: p.clone(), r: vec![p[0]] });
            }
            return;
        }
        let mut r = vec![p[0]];
        rec_r(1, p, &mut r, root, out);
        return;
    }
    for &v in &choices[i] {
        p[i] = v;
        rec_p(i + 1, choices, p, root, out);
    }
}

fn rec_r(i: usize, p: &[u32], r: &mut Vec<u32>, root: &Root, out: &mut Vec<BlockLabel>) {
    let m = p.len();
    if i == m - 1 {
        if r[m - 2] == p[m - 1] {
            out.push(BlockLabel { p: p.to_vec(), r: r.clone() });
        }
        return;
    }
    for v in 0..=root.k() {
        if admissible(r[i - 1], p[i], v, root) {
            r.push(v);
            rec_r(i + 1, p, r, root, out);
            r.pop();
        }
    }
}

impl BlockBasis {
    pub fn colors(&self) -> &[u32] {
        &self.colors
    }

    pub fn m(&self) -> usize {
        self.colors.len() / 2
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[BlockLabel] {
        &self.labels
    }

    pub fn index_of(&self, label: &BlockLabel) -> Result<usize> {
        self.index.get(label).copied().ok_or(Error::NotFound)
    }

    pub fn label_at(&self, i: usize) -> Result<&BlockLabel> {
        self.labels.get(i).ok_or(Error::OutOfRange(i, self.labels.len()))
    }
}

/// The plat vacuum (0;0); requires each adjacent pair to carry equal spins.
pub fn vacuum_label(basis: &BlockBasis) -> Result<BlockLabel> {
    let c = basis.colors();
    for i in 0..basis.m() {
        if c[2 * i] != c[2 * i + 1] {
            return Err(Error::NotPlatCompatible(format!(
                "strands {} and {} carry spins {}/2 and {}/2",
                2 * i + 1,
                2 * i + 2,
                c[2 * i],
                c[2 * i + 1]
            )));
        }
    }
    let v = BlockLabel::vacuum(basis.m());
    basis.index_of(&v)?;
    Ok(v)
}
