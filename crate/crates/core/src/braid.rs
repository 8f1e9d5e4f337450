//! Colored oriented braid words and data of their plat closures.

use nalgebra::{DMatrix, SymmetricEigen};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// One generator b_index^{sign}; index is 1-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Letter {
    pub index: usize,
    pub sign: i8,
}

impl Letter {
    pub fn new(index: usize, sign: i8) -> Self {
        Letter { index, sign }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColoredBraidWord {
    colors: Vec<u32>,
    orient: Vec<i8>,
    letters: Vec<Letter>,
    framings: Option<Vec<i64>>,
}

/// State of the two strands meeting at one crossing.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Crossing {
    /// 0-based position of the left strand.
    pub pos: usize,
    pub sign: i8,
    /// Bottom-boundary ids of the left and right strands.
    pub strands: (usize, usize),
    pub colors: (u32, u32),
    pub orient: (i8, i8),
}

impl Crossing {
    pub fn parallel(&self) -> bool {
        self.orient.0 == self.orient.1
    }

    /// Oriented crossing sign ε = letter sign × o × o'.
    pub fn epsilon(&self) -> i8 {
        self.sign * self.orient.0 * self.orient.1
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinkComponents {
    /// Component id of each bottom strand.
    pub component_of: Vec<usize>,
    pub n_components: usize,
    pub framings: Vec<i64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LinkingData {
    pub matrix: Vec<Vec<i64>>,
    pub signature: i64,
}

#[derive(Serialize, Deserialize)]
struct WordJson {
    strands: usize,
    colors_twice: Vec<u32>,
    orient: Vec<String>,
    word: Vec<(i64, i64)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    framings: Option<Vec<i64>>,
}

impl ColoredBraidWord {
    /// Range-checked word; no plat condition.
    pub fn new(colors: Vec<u32>, orient: Vec<i8>, letters: Vec<Letter>) -> Result<Self> {
        let n = colors.len();
        if n < 2 || !n.is_multiple_of(2) {
            return Err(Error::Range(format!("strand count must be even and at least 2, got {n}")));
        }
        if orient.len() != n {
            return Err(Error::Range(format!("orient has {} entries for {n} strands", orient.len())));
        }
        if let Some(o) = orient.iter().find(|o| o.abs() != 1) {
            return Err(Error::Range(format!("orientation {o} is not +1 or -1")));
        }
        for (i, l) in letters.iter().enumerate() {
            if l.index == 0 || l.index >= n {
                return Err(Error::Range(format!("letter {i}: index {} outside 1..={}", l.index, n - 1)));
            }
            if l.sign.abs() != 1 {
                return Err(Error::Range(format!("letter {i}: sign {} is not +1 or -1", l.sign)));
            }
        }
        Ok(ColoredBraidWord { colors, orient, letters, framings: None })
    }

    /// Range-checked and plat-validated word.
    pub fn plat(colors: Vec<u32>, orient: Vec<i8>, letters: Vec<Letter>) -> Result<Self> {
        let w = Self::new(colors, orient, letters)?;
        w.validate_plat()?;
        Ok(w)
    }

    /// Plat word whose orientation is traced along each component, each
    /// component starting upward at its leftmost bottom strand.
    pub fn plat_auto_oriented(colors: Vec<u32>, letters: Vec<Letter>) -> Result<Self> {
        let n = colors.len();
        let orient = consistent_orientation(n, &letters)?;
        Self::plat(colors, orient, letters)
    }

    pub fn with_framings(mut self, framings: Vec<i64>) -> Result<Self> {
        let nc = self.components().n_components;
        if framings.len() != nc {
            return Err(Error::Range(format!("{} framings given for {nc} components", framings.len())));
        }
        self.framings = Some(framings);
        Ok(self)
    }

    pub fn strands(&self) -> usize {
        self.colors.len()
    }

    pub fn m(&self) -> usize {
        self.colors.len() / 2
    }

    pub fn colors(&self) -> &[u32] {
        &self.colors
    }

    pub fn orient(&self) -> &[i8] {
        &self.orient
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn framings(&self) -> Option<&[i64]> {
        self.framings.as_deref()
    }

    /// Bottom-strand id at each top position.
    pub fn top_strands(&self) -> Vec<usize> {
        let mut pos: Vec<usize> = (0..self.strands()).collect();
        for l in &self.letters {
            pos.swap(l.index - 1, l.index);
        }
        pos
    }

    pub fn top_colors(&self) -> Vec<u32> {
        self.top_strands().iter().map(|&s| self.colors[s]).collect()
    }

    pub fn top_orient(&self) -> Vec<i8> {
        self.top_strands().iter().map(|&s| self.orient[s]).collect()
    }

    /// Crossing data in word order, with colours and orientations carried along.
    pub fn crossings(&self) -> Vec<Crossing> {
        let mut pos: Vec<usize> = (0..self.strands()).collect();
        let mut out = Vec::with_capacity(self.letters.len());
        for l in &self.letters {
            let i = l.index - 1;
            let (a, b) = (pos[i], pos[i + 1]);
            out.push(Crossing {
                pos: i,
                sign: l.sign,
                strands: (a, b),
                colors: (self.colors[a], self.colors[b]),
                orient: (self.orient[a], self.orient[b]),
            });
            pos.swap(i, i + 1);
        }
        out
    }

    /// Bottom and top caps must join equal spins with opposite orientations.
    pub fn validate_plat(&self) -> Result<()> {
        let check = |side: &str, c: &[u32], o: &[i8]| -> Result<()> {
            for i in 0..c.len() / 2 {
                if c[2 * i] != c[2 * i + 1] {
                    return Err(Error::Plat(format!(
                        "{side} pair ({}, {}) joins spins {}/2 and {}/2",
                        2 * i + 1,
                        2 * i + 2,
                        c[2 * i],
                        c[2 * i + 1]
                    )));
                }
                if o[2 * i] == o[2 * i + 1] {
                    return Err(Error::Plat(format!(
                        "{side} pair ({}, {}) joins parallel orientations",
                        2 * i + 1,
                        2 * i + 2
                    )));
                }
            }
            Ok(())
        };
        check("bottom", &self.colors, &self.orient)?;
        check("top", &self.top_colors(), &self.top_orient())
    }

    pub fn components(&self) -> LinkComponents {
        let n = self.strands();
        let mut uf: Vec<usize> = (0..n).collect();
        fn find(uf: &mut [usize], mut x: usize) -> usize {
            while uf[x] != x {
                uf[x] = uf[uf[x]];
                x = uf[x];
            }
            x
        }
        let top = self.top_strands();
        for i in 0..n / 2 {
            for (a, b) in [(2 * i, 2 * i + 1), (top[2 * i], top[2 * i + 1])] {
                let (ra, rb) = (find(&mut uf, a), find(&mut uf, b));
                uf[ra] = rb;
            }
        }
        let mut ids: Vec<Option<usize>> = vec![None; n];
        let mut next = 0;
        let mut component_of = vec![0; n];
        for (s, slot) in component_of.iter_mut().enumerate() {
            let r = find(&mut uf, s);
            *slot = *ids[r].get_or_insert_with(|| {
                next += 1;
                next - 1
            });
        }
        let framings = self.framings.clone().unwrap_or_else(|| vec![0; next]);
        LinkComponents { component_of, n_components: next, framings }
    }

    /// Spin carried by each component.
    pub fn component_colors(&self) -> Vec<u32> {
        let c = self.components();
        let mut out = vec![0; c.n_components];
        for (s, &id) in c.component_of.iter().enumerate() {
            out[id] = self.colors[s];
        }
        out
    }

    /// Sum of ε over self-crossings of each component.
    pub fn writhe(&self) -> i64 {
        let c = self.components();
        self.crossings()
            .iter()
            .filter(|x| c.component_of[x.strands.0] == c.component_of[x.strands.1])
            .map(|x| x.epsilon() as i64)
            .sum()
    }

    /// Sum of ε over all crossings.
    pub fn total_writhe(&self) -> i64 {
        self.crossings().iter().map(|x| x.epsilon() as i64).sum()
    }

    pub fn linking_matrix(&self, framings: &[i64]) -> Result<LinkingData> {
        let c = self.components();
        let nc = c.n_components;
        if framings.len() != nc {
            return Err(Error::Range(format!("{} framings given for {nc} components", framings.len())));
        }
        let mut twice = vec![vec![0i64; nc]; nc];
        for x in self.crossings() {
            let (a, b) = (c.component_of[x.strands.0], c.component_of[x.strands.1]);
            if a != b {
                twice[a][b] += x.epsilon() as i64;
                twice[b][a] += x.epsilon() as i64;
            }
        }
        let mut matrix = vec![vec![0i64; nc]; nc];
        for a in 0..nc {
            for b in 0..nc {
                if a == b {
                    matrix[a][b] = framings[a];
                } else if twice[a][b] % 2 != 0 {
                    return Err(Error::OddCrossingParity(a.min(b), a.max(b)));
                } else {
                    matrix[a][b] = twice[a][b] / 2;
                }
            }
        }
        let signature = signature(&matrix);
        Ok(LinkingData { matrix, signature })
    }

    /// All letter signs flipped.
    pub fn mirror(&self) -> Self {
        let mut w = self.clone();
        for l in &mut w.letters {
            l.sign = -l.sign;
        }
        w
    }

    /// The inverse braid, read from the top boundary.
    pub fn inverse(&self) -> Self {
        let letters = self.letters.iter().rev().map(|l| Letter::new(l.index, -l.sign)).collect();
        ColoredBraidWord { colors: self.top_colors(), orient: self.top_orient(), letters, framings: None }
    }

    /// self followed by other; other must start where self ends.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        if other.colors != self.top_colors() || other.orient != self.top_orient() {
            return Err(Error::Plat("composed words do not match at the shared boundary".into()));
        }
        let mut letters = self.letters.clone();
        letters.extend_from_slice(&other.letters);
        Ok(ColoredBraidWord { colors: self.colors.clone(), orient: self.orient.clone(), letters, framings: None })
    }

    pub fn to_json(&self) -> String {
        let j = WordJson {
            strands: self.strands(),
            colors_twice: self.colors.clone(),
            orient: self.orient.iter().map(|&o| if o > 0 { "+".into() } else { "-".into() }).collect(),
            word: self.letters.iter().map(|l| (l.index as i64, l.sign as i64)).collect(),
            framings: self.framings.clone(),
        };
        serde_json::to_string(&j).expect("word serializes")
    }
}

/// Orientation consistent with the plat caps, found by walking each component.
pub fn consistent_orientation(strands: usize, letters: &[Letter]) -> Result<Vec<i8>> {
    let w = ColoredBraidWord::new(vec![0; strands], vec![1; strands], letters.to_vec())?;
    let pos = w.top_strands();
    let mut top_of = vec![0; strands];
    for (t, &s) in pos.iter().enumerate() {
        top_of[s] = t;
    }
    let mut o = vec![0i8; strands];
    for start in 0..strands {
        if o[start] != 0 {
            continue;
        }
        let mut b = start;
        loop {
            o[b] = 1;
            o[b ^ 1] = -1;
            // up along b, across the top cap, down to the bottom, across the bottom cap
            let down = pos[top_of[b] ^ 1];
            let next = down ^ 1;
            if o[next] != 0 {
                break;
            }
            b = next;
        }
    }
    Ok(o)
}

/// (#positive − #negative) eigenvalues of a symmetric integer matrix.
pub fn signature(m: &[Vec<i64>]) -> i64 {
    let n = m.len();
    if n == 0 {
        return 0;
    }
    let a = DMatrix::from_fn(n, n, |i, j| m[i][j] as f64);
    let eig = SymmetricEigen::new(a);
    eig.eigenvalues.iter().map(|&v| if v > 1e-9 { 1 } else if v < -1e-9 { -1 } else { 0 }).sum()
}

/// Parse the JSON braid schema and validate the plat condition.
pub fn parse_word(text: &str) -> Result<ColoredBraidWord> {
    let j: WordJson = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    if j.colors_twice.len() != j.strands {
        return Err(Error::Parse(format!("colors_twice has {} entries for {} strands", j.colors_twice.len(), j.strands)));
    }
    let orient = j
        .orient
        .iter()
        .map(|s| match s.as_str() {
            "+" => Ok(1),
            "-" => Ok(-1),
            other => Err(Error::Parse(format!("orient entry {other:?} is not \"+\" or \"-\""))),
        })
        .collect::<Result<Vec<i8>>>()?;
    let mut letters = Vec::with_capacity(j.word.len());
    for (i, &(idx, s)) in j.word.iter().enumerate() {
        if idx < 1 || idx >= j.strands as i64 {
            return Err(Error::Range(format!("word[{i}]: index {idx} outside 1..={}", j.strands.saturating_sub(1))));
        }
        if s != 1 && s != -1 {
            return Err(Error::Range(format!("word[{i}]: sign {s} is not +1 or -1")));
        }
        letters.push(Letter::new(idx as usize, s as i8));
    }
    let w = ColoredBraidWord::plat(j.colors_twice, orient, letters)?;
    match j.framings {
        Some(f) => w.with_framings(f),
        None => Ok(w),
    }
}
