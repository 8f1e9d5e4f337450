//! Qubit encoding of (p;r) labels, compilation of braid letters into
//! diagonal-phase and controlled q-6j gates, a statevector simulator and
//! the Hadamard-test sampler.

use std::collections::HashMap;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::distributions::{Bernoulli, Distribution};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::blocks::{slot_count, vacuum_label, BlockLabel};
use crate::braid::ColoredBraidWord;
use crate::error::{Error, Result};
use crate::invariant::plat_expectation;
use crate::kaulrep::{letter_eigenvalue, KaulRep};
use crate::qalgebra::{duality_block, Root};

/// Largest register the statevector simulator accepts.
pub const MAX_QUBITS: u32 = 24;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct QubitRegister {
    pub m: usize,
    pub k: u32,
    pub slot_width: u32,
    pub slots: usize,
}

impl QubitRegister {
    pub fn new(m: usize, k: u32) -> Self {
        let slot_width = 32 - k.leading_zeros();
        QubitRegister { m, k, slot_width, slots: slot_count(m) }
    }

    pub fn qubits(&self) -> u32 {
        self.slots as u32 * self.slot_width
    }

    pub fn dim(&self) -> usize {
        1 << self.qubits()
    }

    fn shift(&self, slot: usize) -> u32 {
        (self.slots - 1 - slot) as u32 * self.slot_width
    }

    fn mask(&self) -> usize {
        (1 << self.slot_width) - 1
    }

    fn read(&self, index: usize, slot: usize) -> u32 {
        ((index >> self.shift(slot)) & self.mask()) as u32
    }

    /// Register slot holding p_i.
    pub fn slot_of_p(&self, i: usize) -> usize {
        if self.m == 2 {
            0
        } else {
            i
        }
    }

    /// Register slot holding r_i; r_0 shares p_0's slot, r_{m-2} shares p_{m-1}'s.
    pub fn slot_of_r(&self, i: usize) -> usize {
        if i == 0 {
            0
        } else if i == self.m - 2 {
            self.slot_of_p(self.m - 1)
        } else {
            self.m + i - 1
        }
    }

    /// Basis-state index; slot 0 is the most significant field.
    pub fn index(&self, label: &BlockLabel) -> Result<usize> {
        if label.m() != self.m {
            return Err(Error::DimensionMismatch { expected: self.m, got: label.m() });
        }
        let mut idx = 0usize;
        for v in label.free_slots() {
            if v > self.mask() as u32 {
                return Err(Error::Width { value: v, width: self.slot_width });
            }
            idx = (idx << self.slot_width) | v as usize;
        }
        Ok(idx)
    }

    /// Bitstring, most significant qubit first.
    pub fn encode(&self, label: &BlockLabel) -> Result<Vec<bool>> {
        let idx = self.index(label)?;
        let n = self.qubits();
        Ok((0..n).rev().map(|b| (idx >> b) & 1 == 1).collect())
    }

    pub fn decode(&self, index: usize) -> BlockLabel {
        let slots: Vec<u32> = (0..self.slots).map(|s| self.read(index, s)).collect();
        BlockLabel::from_free_slots(self.m, &slots)
    }

    pub fn decode_bits(&self, bits: &[bool]) -> Result<BlockLabel> {
        if bits.len() != self.qubits() as usize {
            return Err(Error::DimensionMismatch { expected: self.qubits() as usize, got: bits.len() });
        }
        Ok(self.decode(bits.iter().fold(0, |acc, &b| (acc << 1) | b as usize)))
    }
}

#[derive(Debug, Clone)]
pub enum Gate {
    /// Phase read off the listed slots; missing keys act as 1.
    DiagPhase { slots: Vec<usize>, table: HashMap<Vec<u32>, Complex64> },
    /// Orthogonal map on `target` chosen by the control values; missing keys act as identity.
    ControlledQ6J { controls: Vec<usize>, target: usize, table: HashMap<Vec<u32>, DMatrix<f64>> },
}

#[derive(Debug, Clone)]
pub struct GateList {
    pub register: QubitRegister,
    pub colors_in: Vec<u32>,
    pub colors_out: Vec<u32>,
    pub gates: Vec<Gate>,
}

/// Where a move reads a spin: a register slot or a fixed colour.
#[derive(Clone, Copy)]
enum Src {
    Slot(usize),
    Fixed(u32),
}

struct Move {
    target: usize,
    /// (j1, j2, j3, j4) of the duality block.
    spins: [Src; 4],
    /// true: l side → m side; false: m side → l side.
    l_to_m: bool,
}

/// Orthogonal completion of one duality block on 2^w target values.
fn completed_block(spins: [u32; 4], l_to_m: bool, width: u32, root: &Root) -> Option<DMatrix<f64>> {
    let blk = duality_block(spins[0], spins[1], spins[2], spins[3], root).ok()?;
    if blk.ls.is_empty() {
        return None;
    }
    let size = 1usize << width;
    let (ins, outs) = if l_to_m { (&blk.ls, &blk.ms) } else { (&blk.ms, &blk.ls) };
    let mut u = DMatrix::zeros(size, size);
    for (a, &x) in ins.iter().enumerate() {
        for (b, &y) in outs.iter().enumerate() {
            let (mi, li) = if l_to_m { (b, a) } else { (a, b) };
            u[(y as usize, x as usize)] = blk.matrix[(mi, li)];
        }
    }
    let free_in = (0..size as u32).filter(|v| !ins.contains(v));
    let free_out = (0..size as u32).filter(|v| !outs.contains(v));
    for (x, y) in free_in.zip(free_out) {
        u[(y as usize, x as usize)] = 1.0;
    }
    Some(u)
}

fn build_move(mv: &Move, reg: &QubitRegister, root: &Root) -> Gate {
    let controls: Vec<usize> = mv.spins.iter().filter_map(|s| if let Src::Slot(i) = s { Some(*i) } else { None }).collect();
    let mut table = HashMap::new();
    let k = reg.k;
    let n = controls.len() as u32;
    for code in 0..(k as usize + 1).pow(n) {
        let mut c = code;
        let vals: Vec<u32> = (0..n)
            .map(|_| {
                let v = (c % (k as usize + 1)) as u32;
                c /= k as usize + 1;
                v
            })
            .collect();
        let mut it = vals.iter();
        let spins = mv.spins.map(|s| match s {
            Src::Slot(_) => *it.next().unwrap(),
            Src::Fixed(v) => v,
        });
        if let Some(u) = completed_block(spins, mv.l_to_m, reg.slot_width, root) {
            table.insert(vals, u);
        }
    }
    Gate::ControlledQ6J { controls, target: mv.target, table }
}

/// Odd basis → left comb over the even pairs, as 2m−3 moves.
fn chain(colors: &[u32], reg: &QubitRegister) -> Vec<Move> {
    let m = reg.m;
    let n = colors.len();
    let mut out = Vec::new();
    // p_i → t_i under controls r_{i-1}, r_i
    for i in 1..m.saturating_sub(1) {
        out.push(Move {
            target: reg.slot_of_p(i),
            spins: [Src::Slot(reg.slot_of_r(i - 1)), Src::Fixed(colors[2 * i]), Src::Fixed(colors[2 * i + 1]), Src::Slot(reg.slot_of_r(i))],
            l_to_m: false,
        });
    }
    // r_l → q_{l+1} under controls t_l, t_{l+1}; t_0 = j_1, t_{m-1} = j_n
    let t = |l: usize| if l == 0 { Src::Fixed(colors[0]) } else if l == m - 1 { Src::Fixed(colors[n - 1]) } else { Src::Slot(reg.slot_of_p(l)) };
    for l in 0..m.saturating_sub(1) {
        out.push(Move {
            target: reg.slot_of_r(l),
            spins: [t(l), Src::Fixed(colors[2 * l + 1]), Src::Fixed(colors[2 * l + 2]), t(l + 1)],
            l_to_m: true,
        });
    }
    out
}

fn transpose_gate(g: Gate) -> Gate {
    match g {
        Gate::ControlledQ6J { controls, target, table } => Gate::ControlledQ6J {
            controls,
            target,
            table: table.into_iter().map(|(k, u)| (k, u.transpose())).collect(),
        },
        other => other,
    }
}

pub fn compile_word(word: &ColoredBraidWord, rep: &KaulRep) -> Result<GateList> {
    let root = rep.root();
    // the dense basis enforces the colour range and resource cap
    rep.basis(word.colors())?;
    let reg = QubitRegister::new(word.m(), root.k());
    if reg.qubits() > MAX_QUBITS {
        return Err(Error::Resource(format!("{} qubits exceed the simulator cap {MAX_QUBITS}", reg.qubits())));
    }
    let mut colors = word.colors().to_vec();
    let mut orient = word.orient().to_vec();
    let mut gates = Vec::new();
    for letter in word.letters() {
        let l = letter.index;
        let (j, i) = (colors[l - 1], colors[l]);
        let o = (orient[l - 1], orient[l]);
        let phase_table = |slot_used: bool| -> HashMap<Vec<u32>, Complex64> {
            if !slot_used {
                return letter_eigenvalue(0, j, i, o, letter.sign, root).map(|v| HashMap::from([(vec![], v)])).unwrap_or_default();
            }
            (0..=root.k()).filter_map(|x| letter_eigenvalue(x, j, i, o, letter.sign, root).ok().map(|v| (vec![x], v))).collect()
        };
        if l % 2 == 1 {
            let a = (l - 1) / 2;
            let slots = if reg.m == 1 { vec![] } else { vec![reg.slot_of_p(a)] };
            gates.push(Gate::DiagPhase { table: phase_table(!slots.is_empty()), slots });
        } else {
            let a = l / 2;
            let mut swapped = colors.clone();
            swapped.swap(l - 1, l);
            rep.basis(&swapped)?;
            gates.extend(chain(&colors, &reg).iter().map(|mv| build_move(mv, &reg, root)));
            gates.push(Gate::DiagPhase { slots: vec![reg.slot_of_r(a - 1)], table: phase_table(true) });
            let back: Vec<Gate> = chain(&swapped, &reg).iter().map(|mv| transpose_gate(build_move(mv, &reg, root))).collect();
            gates.extend(back.into_iter().rev());
        }
        colors.swap(l - 1, l);
        orient.swap(l - 1, l);
    }
    Ok(GateList { register: reg, colors_in: word.colors().to_vec(), colors_out: colors, gates })
}

pub type StateVec = DVector<Complex64>;

pub fn simulate_statevector(gates: &GateList, initial: &StateVec) -> Result<StateVec> {
    let reg = &gates.register;
    if initial.len() != reg.dim() {
        return Err(Error::DimensionMismatch { expected: reg.dim(), got: initial.len() });
    }
    let mut psi = initial.clone();
    for g in &gates.gates {
        match g {
            Gate::DiagPhase { slots, table } => {
                for (idx, amp) in psi.iter_mut().enumerate() {
                    let key: Vec<u32> = slots.iter().map(|&s| reg.read(idx, s)).collect();
                    if let Some(ph) = table.get(&key) {
                        *amp *= ph;
                    }
                }
            }
            Gate::ControlledQ6J { controls, target, table } => {
                let shift = reg.shift(*target);
                let field = reg.mask() << shift;
                let size = 1usize << reg.slot_width;
                let mut buf = DVector::<Complex64>::zeros(size);
                for base in (0..psi.len()).filter(|i| i & field == 0) {
                    let key: Vec<u32> = controls.iter().map(|&s| reg.read(base, s)).collect();
                    let Some(u) = table.get(&key) else { continue };
                    for v in 0..size {
                        buf[v] = psi[base | (v << shift)];
                    }
                    for y in 0..size {
                        let mut acc = Complex64::new(0.0, 0.0);
                        for x in 0..size {
                            acc += buf[x] * u[(y, x)];
                        }
                        psi[base | (y << shift)] = acc;
                    }
                }
            }
        }
    }
    Ok(psi)
}

/// Basis state |label⟩ in the register.
pub fn basis_state(reg: &QubitRegister, label: &BlockLabel) -> Result<StateVec> {
    let mut v = StateVec::zeros(reg.dim());
    v[reg.index(label)?] = Complex64::new(1.0, 0.0);
    Ok(v)
}

/// Vacuum matrix element obtained by running the compiled circuit.
pub fn circuit_plat_expectation(word: &ColoredBraidWord, rep: &KaulRep) -> Result<Complex64> {
    let gl = compile_word(word, rep)?;
    let vin = vacuum_label(&*rep.basis(&gl.colors_in)?)?;
    let vout = vacuum_label(&*rep.basis(&gl.colors_out)?)?;
    let psi = simulate_statevector(&gl, &basis_state(&gl.register, &vin)?)?;
    Ok(psi[gl.register.index(&vout)?])
}

/// Largest |circuit − dense| entry over every basis input, including
/// amplitude leaking onto non-basis register states.
pub fn circuit_deviation(word: &ColoredBraidWord, rep: &KaulRep) -> Result<f64> {
    let gl = compile_word(word, rep)?;
    let dense = rep.represent_word(word)?;
    let reg = &gl.register;
    let out_idx: Vec<usize> = dense.basis_out.labels().iter().map(|l| reg.index(l)).collect::<Result<_>>()?;
    let mut outside = vec![true; reg.dim()];
    for &i in &out_idx {
        outside[i] = false;
    }
    let mut dev: f64 = 0.0;
    for (x, lab) in dense.basis_in.labels().iter().enumerate() {
        let psi = simulate_statevector(&gl, &basis_state(reg, lab)?)?;
        for (y, &i) in out_idx.iter().enumerate() {
            dev = dev.max((psi[i] - dense.matrix[(y, x)]).norm());
        }
        for (i, a) in psi.iter().enumerate() {
            if outside[i] {
                dev = dev.max(a.norm());
            }
        }
    }
    Ok(dev)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Component {
    Re,
    Im,
}

impl Component {
    fn stream(self) -> u64 {
        match self {
            Component::Re => 0,
            Component::Im => 1,
        }
    }
}

/// Ancilla probability of outcome 0 in the Hadamard test.
pub fn ancilla_zero_probability(amplitude: Complex64, component: Component) -> f64 {
    let x = match component {
        Component::Re => amplitude.re,
        Component::Im => amplitude.im,
    };
    ((1.0 + x) / 2.0).clamp(0.0, 1.0)
}

/// Smallest N with 2·exp(−Nδ²/(4v)) ≤ 1 − confidence.
pub fn required_samples(delta: f64, v: f64, confidence: f64) -> Result<u64> {
    if !(delta > 0.0 && delta.is_finite()) {
        return Err(Error::Domain(format!("delta = {delta}; need a finite positive value")));
    }
    if !(v > 0.0 && v.is_finite()) {
        return Err(Error::Domain(format!("variance bound v = {v}; need a finite positive value")));
    }
    if !(confidence > 0.0 && confidence < 1.0) {
        return Err(Error::Domain(format!("confidence = {confidence}; need 0 < confidence < 1")));
    }
    let ok = |n: u64| 2.0 * (-(n as f64) * delta * delta / (4.0 * v)).exp() <= 1.0 - confidence;
    let mut n = (4.0 * v / (delta * delta) * (2.0 / (1.0 - confidence)).ln()).ceil().max(0.0) as u64;
    while n > 0 && ok(n - 1) {
        n -= 1;
    }
    while !ok(n) {
        n += 1;
    }
    Ok(n)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SamplePlan {
    pub delta: f64,
    pub v: f64,
    pub confidence: f64,
    pub shots: u64,
    pub seed: u64,
}

impl SamplePlan {
    pub fn new(delta: f64, v: f64, confidence: f64, seed: u64) -> Result<Self> {
        let shots = required_samples(delta, v, confidence)?;
        Ok(SamplePlan { delta, v, confidence, shots, seed })
    }

    /// Override the shot count; it may not drop below the bound.
    pub fn with_shots(mut self, shots: u64) -> Result<Self> {
        let need = required_samples(self.delta, self.v, self.confidence)?;
        if shots < need {
            return Err(Error::Range(format!("{shots} shots is below the required {need}")));
        }
        self.shots = shots;
        Ok(self)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HadamardOutcome {
    pub estimate: f64,
    /// Ancilla outcomes (zeros, ones).
    pub counts: (u64, u64),
    pub shots: u64,
    pub seed: u64,
    pub component: Component,
}

/// Draw `shots` ancilla measurements with P(0) = p0.
pub fn sample_ancilla(p0: f64, shots: u64, seed: u64, component: Component) -> HadamardOutcome {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(component.stream());
    let dist = Bernoulli::new(p0.clamp(0.0, 1.0)).expect("probability clamped");
    let zeros = (0..shots).filter(|_| dist.sample(&mut rng)).count() as u64;
    let estimate = if shots == 0 { 0.0 } else { 2.0 * zeros as f64 / shots as f64 - 1.0 };
    HadamardOutcome { estimate, counts: (zeros, shots - zeros), shots, seed, component }
}

/// Estimate Re or Im of the vacuum matrix element of K(word).
pub fn hadamard_test(word: &ColoredBraidWord, rep: &KaulRep, component: Component, plan: &SamplePlan) -> Result<HadamardOutcome> {
    let amp = plat_expectation(rep, word)?;
    Ok(sample_ancilla(ancilla_zero_probability(amp, component), plan.shots, plan.seed, component))
}

/// Independent trials with seeds plan.seed, plan.seed + 1, ….
pub fn hadamard_trials(
    word: &ColoredBraidWord,
    rep: &KaulRep,
    component: Component,
    plan: &SamplePlan,
    trials: u64,
) -> Result<Vec<HadamardOutcome>> {
    let p0 = ancilla_zero_probability(plat_expectation(rep, word)?, component);
    Ok((0..trials)
        .into_par_iter()
        .map(|t| sample_ancilla(p0, plan.shots, plan.seed.wrapping_add(t), component))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::blocks::enumerate_basis;
    use crate::library::library;

    #[test]
    fn register_size() {
        let r = QubitRegister::new(3, 3);
        assert_eq!((r.slots, r.slot_width, r.qubits()), (3, 2, 6));
        assert_eq!(QubitRegister::new(3, 4).slot_width, 3);
        assert_eq!(QubitRegister::new(1, 4).qubits(), 0);
        let z = BlockLabel::vacuum(3);
        assert!(r.encode(&z).unwrap().iter().all(|b| !b));
    }

    #[test]
    fn round_trip_all_labels() {
        for k in 1..=4 {
            let root = Root::new(k).unwrap();
            for colors in [vec![1u32, 1], vec![1; 4], vec![k, k, 1, 1], vec![1; 6], vec![k, k, 1, 1, k.min(2), k.min(2)]] {
                let reg = QubitRegister::new(colors.len() / 2, k);
                let b = enumerate_basis(&colors, &root).unwrap();
                let mut seen = std::collections::HashSet::new();
                for l in b.labels() {
                    let bits = reg.encode(l).unwrap();
                    assert!(seen.insert(bits.clone()));
                    assert_eq!(&reg.decode_bits(&bits).unwrap(), l);
                }
            }
        }
    }

    #[test]
    fn width_error() {
        let reg = QubitRegister::new(2, 3);
        let l = BlockLabel { p: vec![4, 4], r: vec![4] };
        assert!(matches!(reg.index(&l), Err(Error::Width { value: 4, width: 2 })));
    }

    #[test]
    fn gate_counts() {
        let kr = KaulRep::new(Root::new(3).unwrap());
        let o = vec![1, -1, 1, -1, 1, -1];
        let w = |l: Vec<crate::braid::Letter>| ColoredBraidWord::new(vec![1; 6], o.clone(), l).unwrap();
        assert!(compile_word(&w(vec![]), &kr).unwrap().gates.is_empty());
        assert_eq!(compile_word(&w(vec![crate::braid::Letter::new(3, 1)]), &kr).unwrap().gates.len(), 1);
        assert_eq!(compile_word(&w(vec![crate::braid::Letter::new(2, 1)]), &kr).unwrap().gates.len(), 7);
    }

    #[test]
    fn required_samples_examples() {
        assert_eq!(required_samples(0.1, 1.0, 0.75).unwrap(), 832);
        assert_eq!(required_samples(1.0, 1.0, 0.75).unwrap(), 9);
        assert!(required_samples(0.0, 1.0, 0.75).is_err());
        assert!(required_samples(0.1, -1.0, 0.75).is_err());
        assert!(required_samples(0.1, 1.0, 1.0).is_err());
    }

    #[test]
    fn identity_sampling() {
        let w = library().get("unknot").unwrap().word(1).unwrap();
        let kr = KaulRep::new(Root::new(3).unwrap());
        let plan = SamplePlan::new(0.1, 1.0, 0.75, 3).unwrap();
        let re = hadamard_test(&w, &kr, Component::Re, &plan).unwrap();
        assert_eq!(re.estimate, 1.0);
        assert_eq!(re.counts, (plan.shots, 0));
        let im = hadamard_test(&w, &kr, Component::Im, &plan).unwrap();
        assert!(im.estimate.abs() <= 0.2);
        assert_eq!(hadamard_test(&w, &kr, Component::Im, &plan).unwrap(), im);
    }

    #[test]
    fn shots_override_floor() {
        let p = SamplePlan::new(0.1, 1.0, 0.75, 0).unwrap();
        assert!(p.with_shots(100).is_err());
        assert_eq!(p.with_shots(2000).unwrap().shots, 2000);
    }
}
