use kauljones::invariant::colored_jones;
use kauljones::oracle::{fig8_colored_jones, jones_at, tree_recoupling_oracle};
use kauljones::qalgebra::duality_block;
use kauljones::qcircuit::circuit_deviation;
use kauljones::{library, ColoredBraidWord, KaulRep, Letter, Result, UnitaryOp};
use serde_json::{json, Value};

use crate::output::{num, object};

/// Colour values tried per strand; keeps the run short for large k.
const MAX_COLOR: u32 = 6;
/// The circuit check simulates a dense register, so it stops here.
const MAX_CIRCUIT_K: u32 = 8;

pub struct Check {
    pub name: String,
    pub cases: usize,
    /// None when skipped.
    pub max_err: Option<f64>,
    pub pass: bool,
}

fn check(name: &str, cases: usize, err: f64, tol: f64) -> Check {
    Check { name: name.into(), cases, max_err: Some(err), pass: err <= tol }
}

fn colorings(n: usize, top: u32) -> impl Iterator<Item = Vec<u32>> {
    let base = top as usize + 1;
    (0..base.pow(n as u32)).map(move |mut code| {
        let mut v = vec![0u32; n];
        for x in v.iter_mut() {
            *x = (code % base) as u32;
            code /= base;
        }
        v
    })
}

fn op(rep: &KaulRep, colors: &[u32], letters: &[(usize, i8)]) -> Result<UnitaryOp> {
    let orient = (0..colors.len()).map(|i| if i % 2 == 0 { 1 } else { -1 }).collect();
    let l = letters.iter().map(|&(i, s)| Letter::new(i, s)).collect();
    rep.represent_word(&ColoredBraidWord::new(colors.to_vec(), orient, l)?)
}

fn diff(a: &UnitaryOp, b: &UnitaryOp) -> f64 {
    (&a.matrix - &b.matrix).iter().map(|z| z.norm()).fold(0.0, f64::max)
}

pub fn run(rep: &KaulRep, tol: f64) -> Result<Vec<Check>> {
    let root = rep.root();
    let k = root.k();
    let top = k.min(MAX_COLOR);
    let mut out = Vec::new();

    let (mut n, mut e) = (0, 0f64);
    for j in colorings(4, top) {
        let b = duality_block(j[0], j[1], j[2], j[3], root)?;
        if b.ls.is_empty() {
            continue;
        }
        n += 1;
        let p = &b.matrix * b.matrix.transpose();
        for r in 0..p.nrows() {
            for c in 0..p.ncols() {
                e = e.max((p[(r, c)] - if r == c { 1.0 } else { 0.0 }).abs());
            }
        }
    }
    out.push(check("6j orthogonality", n, e, tol));

    let (mut n, mut unit, mut yb) = (0, 0f64, 0f64);
    for colors in colorings(4, top.min(3)) {
        if rep.basis(&colors)?.dim() == 0 {
            continue;
        }
        n += 1;
        for l in 1..4 {
            for s in [1i8, -1] {
                unit = unit.max(op(rep, &colors, &[(l, s)])?.unitarity_error());
            }
        }
        for i in 1..3 {
            let a = op(rep, &colors, &[(i, 1), (i + 1, 1), (i, 1)])?;
            let b = op(rep, &colors, &[(i + 1, 1), (i, 1), (i + 1, 1)])?;
            yb = yb.max(diff(&a, &b));
        }
    }
    out.push(check("generator unitarity", n, unit, tol));
    out.push(check("Yang-Baxter", n, yb, tol));

    let (mut n, mut e) = (0, 0f64);
    let uniform = (0..=top).map(|t| vec![t; 6]);
    for colors in colorings(4, top.min(4)).chain(uniform) {
        let oracle = tree_recoupling_oracle(&colors, rep)?;
        if oracle.odd.dim() == 0 {
            continue;
        }
        n += 1;
        let staged = rep.full_duality_matrix(&colors)?;
        let factored = rep.factored_duality_matrix(&colors)?;
        e = e.max((&staged.matrix - &oracle.matrix).abs().max());
        e = e.max((&factored.matrix - &oracle.matrix).abs().max());
    }
    out.push(check("recoupling vs tree oracle", n, e, tol));

    let e = (0..=k)
        .map(|t| {
            let w = ColoredBraidWord::plat(vec![t, t], vec![1, -1], vec![])?;
            Ok((colored_jones(rep, &w)?.v.re - root.qint(t as f64 + 1.0)).abs())
        })
        .collect::<Result<Vec<f64>>>()?
        .into_iter()
        .fold(0.0, f64::max);
    out.push(check("unknot closed form", k as usize + 1, e, tol));

    let lib = library();
    let (mut n, mut e) = (0, 0f64);
    for entry in &lib.links {
        let w = entry.word(1)?;
        n += 1;
        e = e.max((colored_jones(rep, &w)?.j - jones_at(&w, root)?).norm());
    }
    out.push(check("spin-1/2 vs Kauffman bracket", n, e, tol));

    let fig8 = lib.get("fig8")?;
    let (mut n, mut e) = (0, 0f64);
    for big_n in 2..=(k + 1).min(MAX_COLOR) {
        n += 1;
        let j = colored_jones(rep, &fig8.word(big_n - 1)?)?.j;
        e = e.max((j - fig8_colored_jones(big_n, root.q())).norm());
    }
    out.push(check("figure-eight closed form", n, e, tol));

    if k <= MAX_CIRCUIT_K {
        let (mut n, mut e) = (0, 0f64);
        for entry in &lib.links {
            for t in 1..=k.min(2) {
                n += 1;
                e = e.max(circuit_deviation(&entry.word(t)?, rep)?);
            }
        }
        out.push(check("circuit vs dense", n, e, tol));
    } else {
        out.push(Check { name: "circuit vs dense".into(), cases: 0, max_err: None, pass: true });
    }
    Ok(out)
}

pub fn table(report: &[Check]) -> String {
    let mut s = format!("{:<30} {:>6} {:>10}  status\n", "check", "cases", "max error");
    for c in report {
        let err = c.max_err.map_or("-".to_string(), |e| format!("{e:.1e}"));
        let status = match (c.max_err, c.pass) {
            (None, _) => "skip",
            (_, true) => "pass",
            (_, false) => "FAIL",
        };
        s.push_str(&format!("{:<30} {:>6} {:>10}  {status}\n", c.name, c.cases, err));
    }
    s.pop();
    s
}

pub fn to_json(report: &[Check], meta: &Value) -> String {
    let rows = report
        .iter()
        .map(|c| {
            object(vec![
                ("check", json!(c.name)),
                ("cases", json!(c.cases)),
                ("max_error", c.max_err.map_or(Value::Null, num)),
                ("pass", json!(c.pass)),
            ])
        })
        .collect();
    let v = object(vec![("checks", Value::Array(rows)), ("meta", meta.clone())]);
    serde_json::to_string_pretty(&v).expect("json serializes")
}
