use super::tree::{Forest, Tree, VertexDec};

/// All planar trees with exactly `n` vertices decorated from `decs`.
pub fn planar_trees(n: usize, decs: &[VertexDec]) -> Vec<Tree> {
    if n == 0 {
        return Vec::new();
    }
    let mut out = Vec::new();
    for f in planar_forests(n - 1, decs) {
        for d in decs {
            out.push(Tree::node(d.clone(), f.0.clone()));
        }
    }
    out
}

/// All ordered forests with exactly `n` vertices.
pub fn planar_forests(n: usize, decs: &[VertexDec]) -> Vec<Forest> {
    if n == 0 {
        return vec![Forest::unit()];
    }
    let mut out = Vec::new();
    for k in 1..=n {
        let firsts = planar_trees(k, decs);
        let rests = planar_forests(n - k, decs);
        for t in &firsts {
            for r in &rests {
                let mut v = vec![t.clone()];
                v.extend(r.0.iter().cloned());
                out.push(Forest(v));
            }
        }
    }
    out
}

/// All ordered forests with at most `n` vertices, including the unit.
pub fn forests_up_to(n: usize, decs: &[VertexDec]) -> Vec<Forest> {
    (0..=n).flat_map(|k| planar_forests(k, decs)).collect()
}

pub fn letters(names: &[&str]) -> Vec<VertexDec> {
    names.iter().map(|s| VertexDec::label(s)).collect()
}
