#![allow(dead_code)]

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use zonolat::constructions::{a_n_lattice, cographic_lattice, graphic_lattice, tensor_lattice, Digraph};
use zonolat::rational::{int, ratio};
use zonolat::{CvpInstance, Rational, ZonotopalLattice};

/// Random connected digraph: a random spanning tree plus extra arcs, with
/// random orientations.
pub fn random_connected_digraph(rng: &mut ChaCha8Rng, max_vertices: usize, max_arcs: usize) -> Digraph {
    let n = rng.gen_range(2..=max_vertices);
    let mut arcs = Vec::new();
    for v in 1..n {
        let u = rng.gen_range(0..v);
        arcs.push(if rng.gen_bool(0.5) { (u, v) } else { (v, u) });
    }
    let total = rng.gen_range(arcs.len()..=max_arcs.max(arcs.len()));
    while arcs.len() < total {
        let a = rng.gen_range(0..n);
        let b = rng.gen_range(0..n);
        if a != b {
            arcs.push((a, b));
        }
    }
    Digraph::new(n, arcs).unwrap()
}

/// Random digraph, not necessarily connected.
pub fn random_digraph(rng: &mut ChaCha8Rng, max_vertices: usize, max_arcs: usize) -> Digraph {
    let n = rng.gen_range(2..=max_vertices);
    let count = rng.gen_range(1..=max_arcs);
    let mut arcs = Vec::new();
    while arcs.len() < count {
        let a = rng.gen_range(0..n);
        let b = rng.gen_range(0..n);
        if a != b {
            arcs.push((a, b));
        }
    }
    Digraph::new(n, arcs).unwrap()
}

/// `p/q` with `p ∈ 1..=max_num`, `q ∈ 1..=max_den`.
pub fn random_weights(rng: &mut ChaCha8Rng, m: usize, max_num: i64, max_den: i64) -> Vec<Rational> {
    (0..m).map(|_| ratio(rng.gen_range(1..=max_num), rng.gen_range(1..=max_den))).collect()
}

pub fn random_target(rng: &mut ChaCha8Rng, m: usize) -> Vec<Rational> {
    (0..m).map(|_| ratio(rng.gen_range(-40..=40), rng.gen_range(1..=12))).collect()
}

pub fn k4() -> Digraph {
    Digraph::complete(4)
}

pub fn triangle() -> Digraph {
    Digraph::cycle(3).unwrap()
}

/// A family-labelled random lattice from the acceptance mix.
pub fn random_lattice(rng: &mut ChaCha8Rng, family: usize) -> (String, ZonotopalLattice) {
    match family % 6 {
        0 | 1 => {
            let d = random_connected_digraph(rng, 6, 10);
            let g = random_weights(rng, d.arc_count(), 8, 4);
            (format!("graphic({}, {})", d.vertex_count(), d.arc_count()), graphic_lattice(&d, Some(g)).unwrap())
        }
        2 => {
            let d = if rng.gen_bool(0.5) { triangle() } else { k4() };
            let g = random_weights(rng, d.arc_count(), 8, 4);
            (format!("cographic({})", d.vertex_count()), cographic_lattice(&d, Some(g)).unwrap())
        }
        3 | 4 => {
            let n = rng.gen_range(1..=5);
            let g = random_weights(rng, n + 1, 8, 4);
            (format!("A{n}"), a_n_lattice(n, Some(g)).unwrap())
        }
        _ => {
            let k = rng.gen_range(1..=2);
            let m = (k + 1) * (k + 1);
            let g = random_weights(rng, m, 8, 4);
            (format!("A{k}xA{k}"), tensor_lattice(k, k, Some(g)).unwrap())
        }
    }
}

pub fn random_instance(rng: &mut ChaCha8Rng, family: usize) -> (String, CvpInstance) {
    let (name, lattice) = random_lattice(rng, family);
    let t = random_target(rng, lattice.dim());
    (name, CvpInstance::projected(lattice, &t).unwrap())
}

/// Every nonzero `v ∈ L` with `(v, v)_g ≤ bound`, by coordinate DFS.
pub fn short_lattice_vectors(lattice: &ZonotopalLattice, bound: &Rational) -> Vec<Vec<i64>> {
    fn go(
        lattice: &ZonotopalLattice,
        bound: &Rational,
        i: usize,
        used: Rational,
        x: &mut Vec<i64>,
        out: &mut Vec<Vec<i64>>,
    ) {
        let m = lattice.dim();
        if i == m {
            if x.iter().any(|&c| c != 0) && lattice.contains(x) {
                out.push(x.clone());
            }
            return;
        }
        let g = &lattice.weights()[i];
        let mut k = 0i64;
        loop {
            let cost = g * int(k * k);
            if &used + &cost > *bound {
                break;
            }
            let choices: &[i64] = if k == 0 { &[0] } else { &[k, -k] };
            for &c in choices {
                x[i] = c;
                go(lattice, bound, i + 1, &used + &cost, x, out);
            }
            k += 1;
        }
        x[i] = 0;
    }
    let mut out = Vec::new();
    let mut x = vec![0; lattice.dim()];
    go(lattice, bound, 0, int(0), &mut x, &mut out);
    out.sort();
    out
}

pub fn lattice_catalog() -> Vec<(String, ZonotopalLattice)> {
    vec![
        ("A1".into(), a_n_lattice(1, None).unwrap()),
        ("A2".into(), a_n_lattice(2, None).unwrap()),
        ("A3".into(), a_n_lattice(3, None).unwrap()),
        ("A5".into(), a_n_lattice(5, None).unwrap()),
        ("cographic C3".into(), cographic_lattice(&triangle(), None).unwrap()),
        ("cographic K4".into(), cographic_lattice(&k4(), None).unwrap()),
        ("graphic K4".into(), graphic_lattice(&k4(), None).unwrap()),
        ("A1xA1".into(), tensor_lattice(1, 1, None).unwrap()),
        ("A2xA2".into(), tensor_lattice(2, 2, None).unwrap()),
    ]
}
