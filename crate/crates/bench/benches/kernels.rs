use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use kauljones::oracle::kauffman_bracket;
use kauljones::qcircuit::{basis_state, simulate_statevector};
use kauljones::{compile_word, library, KaulRep, Root};

fn represent(c: &mut Criterion) {
    let lib = library();
    let mut g = c.benchmark_group("represent_word");
    for (name, k, t) in [("trefoil_right", 4, 1), ("fig8", 6, 3), ("trefoil6", 4, 1), ("trefoil6", 4, 2)] {
        let w = lib.get(name).unwrap().word(t).unwrap();
        g.bench_function(format!("{name}/k{k}/t{t}"), |b| {
            b.iter(|| {
                // fresh cache each pass
                let rep = KaulRep::new(Root::new(k).unwrap());
                black_box(rep.represent_word(black_box(&w)).unwrap())
            })
        });
    }
    g.finish();
}

fn circuit(c: &mut Criterion) {
    let lib = library();
    let rep = KaulRep::new(Root::new(4).unwrap());
    let w = lib.get("trefoil6").unwrap().word(2).unwrap();
    c.bench_function("compile_word/trefoil6/k4/t2", |b| b.iter(|| black_box(compile_word(black_box(&w), &rep).unwrap())));
    let gl = compile_word(&w, &rep).unwrap();
    let psi = basis_state(&gl.register, &rep.basis(w.colors()).unwrap().labels()[0]).unwrap();
    c.bench_function("simulate/trefoil6/k4/t2", |b| b.iter(|| black_box(simulate_statevector(&gl, black_box(&psi)).unwrap())));
}

fn bracket(c: &mut Criterion) {
    let lib = library();
    for name in ["fig8", "trefoil6"] {
        let w = lib.get(name).unwrap().word(1).unwrap();
        c.bench_function(&format!("kauffman_bracket/{name}"), |b| b.iter(|| black_box(kauffman_bracket(black_box(&w)).unwrap())));
    }
}

criterion_group!(benches, represent, circuit, bracket);
criterion_main!(benches);
