mod common;

use common::positive::*;
use common::*;
use num_traits::{One, Zero};
use planarhopf_core::deformed_positive::*;
use planarhopf_core::free_postlie::{b_plus, gl_product};
use planarhopf_core::rough_model::{delta_plus_pb, phi_forest};
use planarhopf_core::tree_core::enumerate::{forests_up_to, letters};
use planarhopf_core::tree_core::{tree_regularity, EdgeDec, Error, LinComb, MultiIndex, Rational, RegularityConfig, Tree};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn cfg(beta: Rational) -> RegularityConfig {
    RegularityConfig::default().with_kernel(1, beta).with_alpha(1, r(1, 3))
}

fn terms(pairs: &[(Tree, i64)]) -> LinComb<Tree> {
    let mut out = LinComb::zero();
    for (t, c) in pairs {
        out.add_term(t.clone(), r(*c, 1));
    }
    out
}

fn small_plus_trees() -> Vec<Tree> {
    typed_trees_up_to(2, &[0, 1], &[kern(1, 0), kern(1, 1), noise(1)])
        .into_iter()
        .filter(|t| t.children.iter().all(|(e, _)| !e.is_noise()))
        .collect()
}

#[test]
fn rs_tree_coerces_and_validates() {
    assert_eq!(rs_tree(&t("•[K1#2:•]"), 1).unwrap(), v(0, vec![(kern(1, 2), leaf(0))]));
    assert_eq!(rs_tree(&t("1[K1#0:2]"), 1).unwrap(), v(1, vec![(kern(1, 0), leaf(2))]));
    assert!(matches!(rs_tree(&t("•[1:•]"), 1), Err(Error::ModeMismatch(_))));
    assert!(rs_tree(&t("0[X1#0:0[K1#0:0]]"), 1).is_err());
}

#[test]
fn multinomial_basics() {
    assert_eq!(multinomial(&m1(4), &[m1(1), m1(2)]), 12.into());
    assert_eq!(multinomial(&m1(2), &[m1(3)]), 0.into());
    assert_eq!(compositions(&m1(2), 2).len(), 3);
    assert_eq!(compositions(&MultiIndex(vec![1, 1]), 2).len(), 4);
}

#[test]
fn up_examples() {
    let chain = v(0, vec![(kern(1, 0), leaf(0))]);
    let expect = terms(&[
        (v(2, vec![(kern(1, 0), leaf(0))]), 1),
        (v(1, vec![(kern(1, 0), leaf(1))]), 2),
        (v(0, vec![(kern(1, 0), leaf(2))]), 1),
    ]);
    assert_eq!(up_all(&chain, &m1(2)), expect);
    assert_eq!(up_all(&chain, &m1(0)), LinComb::basis(chain.clone()));
    assert_eq!(up(&chain, &[0], &m1(3)).unwrap(), v(0, vec![(kern(1, 0), leaf(3))]));
    let noisy = v(0, vec![(noise(1), leaf(0))]);
    assert!(up(&noisy, &[0], &m1(1)).is_err());
    assert_eq!(up_all(&noisy, &m1(1)), LinComb::basis(v(1, vec![(noise(1), leaf(0))])));
}

#[test]
fn down_examples() {
    let p0 = v(0, vec![(kern(1, 0), leaf(3))]);
    assert!(down_root_tree(&p0, &m1(1)).is_zero());
    let p2 = v(0, vec![(kern(1, 2), leaf(3))]);
    assert_eq!(down_root_tree(&p2, &m1(1)), LinComb::basis(v(0, vec![(kern(1, 1), leaf(3))])));
    // derivation over two root edges
    let w = v(0, vec![(kern(1, 1), leaf(0)), (kern(1, 1), leaf(1))]);
    let expect = terms(&[
        (v(0, vec![(kern(1, 0), leaf(0)), (kern(1, 1), leaf(1))]), 1),
        (v(0, vec![(kern(1, 1), leaf(0)), (kern(1, 0), leaf(1))]), 1),
    ]);
    assert_eq!(down_root_tree(&w, &m1(1)), expect);
    // ↓² by unit steps carries the binomial 2
    let w2 = terms(&[(v(0, vec![(kern(1, 0), leaf(0)), (kern(1, 0), leaf(1))]), 2)]);
    assert_eq!(down_root_tree(&w, &m1(2)), w2);
}

#[test]
fn dgraft_examples() {
    let p1 = v(0, vec![(kern(1, 2), leaf(0))]);
    let p2 = v(0, vec![(kern(1, 0), leaf(1))]);
    let expect = terms(&[
        (v(0, vec![(kern(1, 0), v(1, vec![(kern(1, 2), leaf(0))]))]), 1),
        (v(0, vec![(kern(1, 0), v(0, vec![(kern(1, 1), leaf(0))]))]), 1),
    ]);
    assert_eq!(dgraft_planted(&p1, &p2).unwrap(), expect);
    // zero-decorated target: only the undeformed term
    let p3 = v(0, vec![(kern(1, 0), leaf(0))]);
    assert_eq!(dgraft_planted(&p1, &p3).unwrap().len(), 1);
    // noise leaves receive nothing
    let p4 = v(0, vec![(kern(1, 0), v(0, vec![(noise(1), leaf(0))]))]);
    let out = dgraft_planted(&p1, &p4).unwrap();
    assert_eq!(out, LinComb::basis(v(0, vec![(kern(1, 0), v(0, vec![(kern(1, 2), leaf(0)), (noise(1), leaf(0))]))])));
    assert!(dgraft_planted(&leaf(1), &p1).is_err());
}

#[test]
fn v_operations_examples() {
    let x = LinComb::basis(x_unit(1, 0));
    assert!(bracket0(&x, &x).is_zero());
    let p = LinComb::basis(v(0, vec![(kern(1, 0), leaf(0))]));
    assert_eq!(dgraft_v(&x, &p), LinComb::basis(v(0, vec![(kern(1, 0), leaf(1))])));
    assert!(dgraft_v(&p, &x).is_zero());
    assert!(dgraft_v(&x, &x).is_zero());
    let q = LinComb::basis(v(0, vec![(kern(1, 1), leaf(1))]));
    let br = bracket0(&p, &q);
    let expect = terms(&[
        (v(0, vec![(kern(1, 0), leaf(0)), (kern(1, 1), leaf(1))]), 1),
        (v(0, vec![(kern(1, 1), leaf(1)), (kern(1, 0), leaf(0))]), -1),
    ]);
    assert_eq!(br, expect);
    assert_eq!(bracket0(&q, &x), LinComb::basis(v(0, vec![(kern(1, 0), leaf(1))])));
    assert_eq!(bracket0(&x, &q), -LinComb::basis(v(0, vec![(kern(1, 0), leaf(1))])));
}

#[test]
fn post_lie_axioms_random() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..150 {
        let x = random_v(&mut rng, 5, 2);
        let y = random_v(&mut rng, 5, 2);
        let z = random_v(&mut rng, 5, 2);
        let bad = post_lie_failures(&x, &y, &z);
        assert!(bad.is_empty(), "{:?} on {:?} {:?} {:?}", bad, x, y, z);
    }
}

#[test]
fn almost_derivation() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let i = m1(1);
    let upv = |x: &LinComb<Tree>| x.flat_map(|t| if t.children.is_empty() { LinComb::zero() } else { up_nonroot(t, &i) });
    for _ in 0..150 {
        let y = random_v(&mut rng, 4, 2);
        let z = random_v(&mut rng, 4, 2);
        let lhs = upv(&dgraft_v(&y, &z));
        let rhs = dgraft_v(&upv(&y), &z) + dgraft_v(&y, &upv(&z)) - dgraft_v(&down_root(&y, &i), &z);
        assert_eq!(lhs, rhs, "{:?} {:?}", y, z);
    }
}

#[test]
fn x_omega_x_rewriting() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for _ in 0..100 {
        let k = rand::Rng::gen_range(&mut rng, 1..=3);
        let branches: Vec<(EdgeDec, Tree)> =
            (0..k).map(|_| random_planted(&mut rng, 3, 2, true).children.remove(0)).collect();
        let (m, n) = (rand::Rng::gen_range(&mut rng, 0..=2u32), rand::Rng::gen_range(&mut rng, 0..=3u32));
        let omega = v(0, branches.clone());
        let mut word = word_of(&leaf(m));
        word.extend(word_of(&omega));
        word.extend(word_of(&leaf(n)));
        let lhs = normalize_word(&word, 1);
        let mut rhs = LinComb::zero();
        for r2 in 0..=n {
            let r1 = n - r2;
            let c = r(binom(n, r2), 1);
            for (w, cw) in down_root_tree(&omega, &m1(r2)).iter() {
                rhs.add_term(v(m + r1, w.children.clone()), &c * cw);
            }
        }
        assert_eq!(lhs, rhs);
    }
    // two dimensions
    let e = |a: u32, b: u32| EdgeDec::Typed(planarhopf_core::EdgeKind::Kernel(1), MultiIndex(vec![a, b]));
    let z = |a: u32, b: u32| Tree::multi(MultiIndex(vec![a, b]));
    let omega = Tree { dec: MultiIndex::zeros(2).into_dec(), children: vec![(e(1, 1), z(0, 0))] };
    let mut word = word_of(&omega);
    word.extend(word_of(&z(1, 1)));
    let expect = {
        let mut out = LinComb::zero();
        let with = |root: (u32, u32), edge: (u32, u32)| Tree { dec: MultiIndex(vec![root.0, root.1]).into_dec(), children: vec![(e(edge.0, edge.1), z(0, 0))] };
        out.add_term(with((1, 1), (1, 1)), Rational::one());
        out.add_term(with((0, 1), (0, 1)), Rational::one());
        out.add_term(with((1, 0), (1, 0)), Rational::one());
        out.add_term(with((0, 0), (0, 0)), Rational::one());
        out
    };
    assert_eq!(normalize_word(&word, 2), expect);
}

fn binom(n: u32, k: u32) -> i64 {
    planarhopf_core::tree_core::binomial(n as u64, k as u64).try_into().unwrap()
}

trait IntoDec {
    fn into_dec(self) -> planarhopf_core::VertexDec;
}

impl IntoDec for MultiIndex {
    fn into_dec(self) -> planarhopf_core::VertexDec {
        planarhopf_core::VertexDec::Multi(self)
    }
}

#[test]
fn star_plus_examples() {
    let p = v(0, vec![(kern(1, 0), leaf(0))]);
    assert_eq!(star_plus_tree(&p, &leaf(1)).unwrap(), LinComb::basis(v(1, vec![(kern(1, 0), leaf(0))])));
    let one = leaf(0);
    for y in small_plus_trees() {
        assert_eq!(star_plus_tree(&one, &y).unwrap(), LinComb::basis(y.clone()));
    }
    let bad = v(0, vec![(noise(1), leaf(0))]);
    assert!(star_plus_tree(&bad, &p).is_err());
}

#[test]
fn star_plus_four_families() {
    for d in cartesian(&vec![vec![0u32, 1]; 8]) {
        let x = v(d[0], vec![(kern(1, d[5]), leaf(d[1])), (kern(1, d[6]), leaf(d[2]))]);
        let y = v(d[3], vec![(kern(1, d[7]), leaf(d[4]))]);
        let expect = four_family(d[0], d[1], d[2], d[3], d[4], d[5], d[6], d[7]);
        assert_eq!(star_plus_tree(&x, &y).unwrap(), expect, "{} ∗₊ {}", x, y);
    }
}

#[test]
fn star_plus_matches_guin_oudom() {
    let trees = small_plus_trees();
    for x in &trees {
        for y in &trees {
            assert_eq!(star_plus_tree(x, y).unwrap(), go_star(x, y), "{} ∗₊ {}", x, y);
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    for _ in 0..60 {
        let x = random_typed_tree(&mut rng, 3, 2, true);
        let y = random_typed_tree(&mut rng, 3, 2, true);
        if x.children.iter().chain(&y.children).any(|(e, _)| e.is_noise()) {
            continue;
        }
        assert_eq!(star_plus_tree(&x, &y).unwrap(), go_star(&x, &y), "{} ∗₊ {}", x, y);
    }
}

#[test]
fn star_plus_associative() {
    let plus: Vec<Tree> = typed_trees_up_to(1, &[0, 1], &[kern(1, 0), kern(1, 1)]);
    let all = typed_trees_up_to(2, &[0, 1], &[kern(1, 0), kern(1, 1), noise(1)]);
    for a in &plus {
        for b in &plus {
            let ab = star_plus_tree(a, b).unwrap();
            for c in &all {
                let left = star_plus(&ab, &LinComb::basis(c.clone())).unwrap();
                let right = star_plus(&LinComb::basis(a.clone()), &star_plus_tree(b, c).unwrap()).unwrap();
                assert_eq!(left, right, "({} ∗ {}) ∗ {}", a, b, c);
            }
        }
    }
}

#[test]
fn uv_product_is_star_on_bare_vertices() {
    // with no vertex but the root to graft on, ∗₊ is the product of U(V)
    let xs = [leaf(1), leaf(2), v(0, vec![(kern(1, 2), leaf(0))]), v(1, vec![(kern(1, 1), leaf(0)), (kern(1, 0), leaf(1))])];
    for a in &xs {
        for n in 0..3 {
            assert_eq!(uv_product(a, &leaf(n)), star_plus_tree(a, &leaf(n)).unwrap(), "{} · X^{}", a, n);
        }
    }
}

#[test]
fn delta_plus_planted_example() {
    let c = cfg(r(3, 2));
    let tau = v(0, vec![(kern(1, 0), leaf(0))]);
    let mut expect = LinComb::zero();
    expect.add_term((leaf(0), tau.clone()), Rational::one());
    expect.add_term((tau.clone(), leaf(0)), Rational::one());
    expect.add_term((v(0, vec![(kern(1, 1), leaf(0))]), leaf(1)), Rational::one());
    assert_eq!(delta_plus(&tau, &c).unwrap(), expect);
}

#[test]
fn delta_plus_bare_vertex() {
    let c = cfg(r(3, 2));
    for i in 0..4 {
        let mut expect = LinComb::zero();
        for k in 0..=i {
            expect.add_term((leaf(k), leaf(i - k)), Rational::one());
        }
        assert_eq!(delta_plus(&leaf(i), &c).unwrap(), expect);
    }
}

#[test]
fn delta_plus_family_formula() {
    for beta in [r(3, 2), r(5, 2)] {
        let c = cfg(beta);
        for dv in cartesian(&vec![vec![0u32, 1]; 4]) {
            for ev in [[0u32, 0, 0], [0, 1, 0], [1, 0, 1]] {
                let dv = [dv[0], dv[1], dv[2], dv[3]];
                let tau = v(
                    dv[0],
                    vec![(kern(1, ev[0]), leaf(dv[1])), (kern(1, ev[1]), v(dv[2], vec![(kern(1, ev[2]), leaf(dv[3]))]))],
                );
                let got = delta_plus(&tau, &c).unwrap();
                assert_eq!(got, delta_plus_families(dv, ev, &c, 12), "Δ⁺({})", tau);
                // the displayed families contain 1 ⊗ τ and τ ⊗ 1 already
                assert_eq!(got.coeff(&(leaf(0), tau.clone())), Rational::one());
                assert_eq!(got.coeff(&(tau.clone(), leaf(0))), Rational::one());
            }
        }
    }
}

#[test]
fn delta_plus_0_duality_small() {
    let zs = typed_trees_up_to(3, &[0, 1], &[kern(1, 0), kern(1, 1), noise(1)]);
    let rep = duality_sweep(&zs, 2);
    assert!(rep.mismatches.is_empty(), "{:#?}", &rep.mismatches[..rep.mismatches.len().min(10)]);
}

#[test]
fn delta_plus_grading() {
    let c = cfg(r(3, 2));
    let mut rng = ChaCha8Rng::seed_from_u64(15);
    for _ in 0..40 {
        let tau = random_typed_tree(&mut rng, 4, 1, true);
        let rt = tree_regularity(&tau, &c).unwrap();
        for ((x, y), _) in delta_plus(&tau, &c).unwrap().iter() {
            let rx = tree_regularity(x, &c).unwrap();
            assert_eq!(&rx + tree_regularity(y, &c).unwrap(), rt);
            assert!(rx > Rational::zero() || (x.children.is_empty() && rx.is_zero()));
        }
    }
}

fn test_character(salt: u64) -> impl Fn(&Tree) -> Rational {
    move |x: &Tree| {
        if x.children.is_empty() && x.dec.multi().unwrap().is_zero() {
            return Rational::one();
        }
        let s = format!("{}{}", salt, x);
        let h = s.bytes().fold(salt, |a, b| a.wrapping_mul(31).wrapping_add(b as u64));
        r((h % 7) as i64 - 3, 1 + (h % 3) as i64)
    }
}

fn gamma_lc(g: &dyn Fn(&Tree) -> Rational, x: &LinComb<Tree>, c: &RegularityConfig) -> LinComb<Tree> {
    let mut out = LinComb::zero();
    for (t, k) in x.iter() {
        out.add_scaled(&gamma_g(g, t, c).unwrap(), k);
    }
    out
}

#[test]
fn gamma_counit_and_grading() {
    let c = cfg(r(3, 2));
    let counit = |x: &Tree| if x.children.is_empty() && x.dec.multi().unwrap().is_zero() { Rational::one() } else { Rational::zero() };
    let g = test_character(3);
    let mut rng = ChaCha8Rng::seed_from_u64(16);
    for _ in 0..40 {
        let tau = random_typed_tree(&mut rng, 5, 1, true);
        assert_eq!(gamma_g(&counit, &tau, &c).unwrap(), LinComb::basis(tau.clone()));
        let rt = tree_regularity(&tau, &c).unwrap();
        let rest = gamma_g(&g, &tau, &c).unwrap() - LinComb::basis(tau.clone());
        for (y, _) in rest.iter() {
            assert!(tree_regularity(y, &c).unwrap() < rt, "{} in Γτ − τ for {}", y, tau);
        }
    }
}

#[test]
fn gamma_composition() {
    let c = cfg(r(3, 2));
    let g = test_character(5);
    let h = test_character(8);
    let k = convolve(&h, &g, &c);
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for _ in 0..25 {
        let tau = random_typed_tree(&mut rng, 3, 1, true);
        let two = gamma_lc(&g, &gamma_g(&h, &tau, &c).unwrap(), &c);
        assert_eq!(two, gamma_g(&k, &tau, &c).unwrap(), "{}", tau);
    }
}

#[test]
fn delta_plus_coassociative() {
    let c = cfg(r(3, 2));
    let mut rng = ChaCha8Rng::seed_from_u64(18);
    for _ in 0..25 {
        let tau = random_typed_tree(&mut rng, 3, 1, true);
        let d = delta_plus(&tau, &c).unwrap();
        let mut left = LinComb::zero();
        let mut right = LinComb::zero();
        for ((x, y), k) in d.iter() {
            for ((a, b), kk) in delta_plus_hopf(x, &c).unwrap().iter() {
                left.add_term((a.clone(), b.clone(), y.clone()), k * kk);
            }
            for ((a, b), kk) in delta_plus(y, &c).unwrap().iter() {
                right.add_term((x.clone(), a.clone(), b.clone()), k * kk);
            }
        }
        assert_eq!(left, right, "{}", tau);
    }
}

#[test]
fn degenerates_to_blue_trees() {
    let base = RegularityConfig::default().with_alpha(1, r(1, 3)).with_alpha(2, r(1, 3));
    let c = pb_config(&base);
    let ws = forests_up_to(3, &letters(&["1", "2"]));
    let lift = |w: &planarhopf_core::Forest| from_pb(&b_plus(&phi_forest(w).unwrap()));
    for w1 in &ws {
        for w2 in &ws {
            let gl = gl_product(&LinComb::basis(w1.clone()), &LinComb::basis(w2.clone())).unwrap();
            let expect = gl.map_basis(lift);
            assert_eq!(star_plus_tree(&lift(w1), &lift(w2)).unwrap(), expect, "{:?} ∗ {:?}", w1, w2);
        }
    }
    for w in forests_up_to(4, &letters(&["1", "2"])) {
        let tb = b_plus(&phi_forest(&w).unwrap());
        let got = delta_plus(&from_pb(&tb), &c).unwrap().filter(|(x, y)| all_zero(x) && all_zero(y));
        let expect = delta_plus_pb(&tb).map_basis(|(x, y)| (from_pb(x), from_pb(y)));
        assert_eq!(got, expect, "{}", tb);
    }
}
