//! Named collections of invariant sweeps and worked examples.
//!
//! Suites use their own fixed regularity configurations, since most laws are
//! stated for a particular grading. The session contributes the π
//! normalisation and the seed of every randomized sweep.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use num_traits::{One, Zero};
use planarhopf_core::coactions::{
    admissible_partitions, cointeraction_t0, counit_left, rho_s, rho_t, sym_product, PiNorm, Tagged,
};
use planarhopf_core::deformed_negative::{
    chu_vandermonde, cointeraction_check_ex, cointeraction_check_trunc, delta_minus, dinsert, dinsert_lemma_v,
    dinsert_multi, dinsert_v, insert, insertable, NegMonomial,
};
use planarhopf_core::deformed_positive::{
    bracket0, delta_plus_0, dgraft_v, down_root, down_root_tree, gamma_g, normalize_word,
    star_plus_tree, up_nonroot, word_of,
};
use planarhopf_core::free_postlie::{
    antipode, b_minus, b_plus, bracket, ck_coproduct, forest_lc, gl_product_forest, go_graft, graft_tree,
    mkw_coproduct, mkw_forest, omega_embed, shuffle,
};
use planarhopf_core::rough_model::{
    delta_minus_pb, delta_minus_via_rho, delta_plus_pb, phi_forest, phi_inv_forest, ExpCharacter, Model,
    RenormCharacter,
};
use planarhopf_core::tree_core::enumerate::{forests_up_to, letters};
use planarhopf_core::tree_core::{binomial, factorial, to_rational, tree_regularity, Multiset, NonplanarForest};
use planarhopf_core::{
    parse_forest, parse_lincomb, parse_tree, rat, Forest, LinComb, MultiIndex, Rational, RegularityConfig, Tree,
    TensorSum, VertexDec,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::json;

use crate::gen::*;
use crate::render::Format;
use crate::{CliError, Result};

pub const SUITES: &[&str] =
    &["postlie", "hopf", "coactions", "rough", "model", "deformed", "negative", "cointeraction", "golden"];

const KEPT: usize = 3;

/// Outcome of one law or example over all its cases.
#[derive(Clone, Debug, Default)]
pub struct Check {
    pub name: String,
    pub cases: usize,
    pub failed: usize,
    /// The first few failing inputs in tree grammar, replayable with `eval`.
    pub counterexamples: Vec<String>,
    pub note: Option<String>,
}

impl Check {
    fn new(name: &str) -> Self {
        Check { name: name.to_string(), ..Default::default() }
    }

    fn case(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok {
            self.failed += 1;
            if self.counterexamples.len() < KEPT {
                self.counterexamples.push(what());
            }
        }
    }

    pub fn passed(&self) -> bool {
        self.failed == 0
    }
}

#[derive(Clone, Debug)]
pub struct SuiteReport {
    pub suite: String,
    pub seed: u64,
    pub checks: Vec<Check>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(Check::passed)
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => {
                let checks: Vec<_> = self
                    .checks
                    .iter()
                    .map(|c| {
                        json!({
                            "name": c.name,
                            "passed": c.passed(),
                            "cases": c.cases,
                            "failed": c.failed,
                            "counterexamples": c.counterexamples,
                            "note": c.note,
                        })
                    })
                    .collect();
                let v = json!({ "suite": self.suite, "seed": self.seed, "passed": self.passed(), "checks": checks });
                serde_json::to_string_pretty(&v).expect("json")
            }
            Format::Text | Format::Latex => {
                let mut out = format!("suite {} (seed {})\n", self.suite, self.seed);
                for c in &self.checks {
                    let status = if c.passed() { "PASS" } else { "FAIL" };
                    out.push_str(&format!("  {} {} [{} cases", status, c.name, c.cases));
                    if c.failed > 0 {
                        out.push_str(&format!(", {} failed", c.failed));
                    }
                    out.push(']');
                    if let Some(n) = &c.note {
                        out.push_str(&format!(" {}", n));
                    }
                    out.push('\n');
                    for x in &c.counterexamples {
                        out.push_str(&format!("      counterexample: {}\n", x));
                    }
                }
                out.push_str(if self.passed() { "result: PASS" } else { "result: FAIL" });
                out
            }
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct Ctx {
    pub seed: u64,
    pub norm: PiNorm,
}

fn rng(ctx: &Ctx, salt: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(ctx.seed.wrapping_mul(0x9E37_79B9_7F4A_7C15) ^ salt)
}

type CheckFn = fn(&Ctx) -> Check;

pub fn run_suite(name: &str, norm: PiNorm, seed: u64) -> Result<SuiteReport> {
    let checks: &[CheckFn] = match name {
        "postlie" => &[free_post_lie, v_post_lie],
        "hopf" => &[gl_mkw_duality, mkw_coassociative, antipode_axiom, omega_hopf_morphism],
        "coactions" => &[cointeraction_norms, rho_t_counit],
        "rough" => &[phi_round_trip, delta_plus_mkw_route, delta_minus_rho_route],
        "model" => &[chen_identity, pi_of_unit, model_axioms, renormalised_model_axioms],
        "deformed" => &[star_plus_duality, almost_derivation, x_omega_x, grading_drop],
        "negative" => &[insertion_pre_lie, lemma_route, minus_duality],
        "cointeraction" => &[cointeraction_rho_t0, cointeraction_truncated, cointeraction_extended, chu_vandermonde_totals],
        "golden" => &[
            golden_grafting,
            golden_b_plus_minus,
            golden_mkw,
            golden_omega,
            golden_partitions,
            golden_rho_s,
            golden_delta_plus_pb,
            golden_delta_minus_pb,
            golden_cointeraction,
        ],
        other => return Err(CliError::UnknownSuite(other.to_string())),
    };
    let ctx = Ctx { seed, norm };
    let checks = checks.par_iter().map(|f| f(&ctx)).collect();
    Ok(SuiteReport { suite: name.to_string(), seed, checks })
}

fn t(s: &str) -> Tree {
    parse_tree(s).expect("static tree")
}

fn f(s: &str) -> Forest {
    parse_forest(s).expect("static forest")
}

fn lc(s: &str) -> LinComb<Forest> {
    parse_lincomb(s).expect("static linear combination")
}

fn typed_cfg(beta: Rational, alpha: Rational) -> RegularityConfig {
    RegularityConfig::default().with_kernel(1, beta).with_alpha(1, alpha)
}

fn blue_cfg(a: Rational) -> RegularityConfig {
    (1..=4).fold(RegularityConfig::default(), |c, i| c.with_alpha(i, a.clone()))
}

fn ab() -> Vec<VertexDec> {
    letters(&["a", "b"])
}

// ---- post-Lie ----

fn random_lie(rng: &mut ChaCha8Rng) -> LinComb<Forest> {
    if rng.gen_bool(0.5) {
        forest_lc(random_labelled_tree(rng, 3, &["a", "b"]))
    } else {
        let a = forest_lc(random_labelled_tree(rng, 2, &["a", "b"]));
        let b = forest_lc(random_labelled_tree(rng, 2, &["a", "b"]));
        bracket(&a, &b)
    }
}

fn free_post_lie(ctx: &Ctx) -> Check {
    let mut c = Check::new("post-Lie axioms, free structure");
    let mut rng = rng(ctx, 1);
    let g = |a: &LinComb<Forest>, b: &LinComb<Forest>| go_graft(a, b).expect("labelled forests");
    for _ in 0..250 {
        let (x, y, z) = (random_lie(&mut rng), random_lie(&mut rng), random_lie(&mut rng));
        let assoc = g(&x, &g(&y, &z)) - g(&g(&x, &y), &z) - g(&y, &g(&x, &z)) + g(&g(&y, &x), &z);
        let ok_assoc = assoc == g(&bracket(&x, &y), &z);
        let ok_deriv = g(&x, &bracket(&y, &z)) == bracket(&g(&x, &y), &z) + bracket(&y, &g(&x, &z));
        c.case(ok_assoc && ok_deriv, || format!("x = {x}; y = {y}; z = {z}"));
    }
    c
}

fn v_assoc(x: &LinComb<Tree>, y: &LinComb<Tree>, z: &LinComb<Tree>) -> LinComb<Tree> {
    dgraft_v(x, &dgraft_v(y, z)) - dgraft_v(&dgraft_v(x, y), z)
}

fn v_post_lie(ctx: &Ctx) -> Check {
    let mut c = Check::new("post-Lie axioms on V");
    let mut rng = rng(ctx, 2);
    for _ in 0..250 {
        let (x, y, z) = (random_v(&mut rng, 5, 2), random_v(&mut rng, 5, 2), random_v(&mut rng, 5, 2));
        let deriv = dgraft_v(&x, &bracket0(&y, &z)) == bracket0(&dgraft_v(&x, &y), &z) + bracket0(&y, &dgraft_v(&x, &z));
        let assoc = dgraft_v(&bracket0(&x, &y), &z) == v_assoc(&x, &y, &z) - v_assoc(&y, &x, &z);
        c.case(deriv && assoc, || format!("x = {x}; y = {y}; z = {z}"));
    }
    c
}

// ---- Hopf algebras of forests ----

/// ⟨x ∗ y, z⟩ = ⟨x ⊗ y, Δ_MKW z⟩ for all forests with at most `n` vertices in total.
pub fn gl_mkw_duality_upto(n: usize) -> Check {
    let mut c = Check::new("GL product dual to MKW coproduct");
    let all = forests_up_to(n, &ab());
    let mut from_delta: BTreeMap<(Forest, Forest), LinComb<Forest>> = BTreeMap::new();
    for z in &all {
        for ((x, y), k) in mkw_forest(z) {
            from_delta.entry((x, y)).or_default().add_term(z.clone(), k);
        }
    }
    for x in &all {
        for y in &all {
            if x.size() + y.size() > n {
                continue;
            }
            let dual = from_delta.get(&(x.clone(), y.clone())).cloned().unwrap_or_default();
            c.case(gl_product_forest(x, y) == dual, || format!("x = {x}; y = {y}"));
        }
    }
    c
}

fn gl_mkw_duality(_: &Ctx) -> Check {
    gl_mkw_duality_upto(4)
}

fn mkw_coassociative(_: &Ctx) -> Check {
    let mut c = Check::new("MKW coassociativity");
    for z in forests_up_to(4, &ab()) {
        let mut left = LinComb::zero();
        let mut right = LinComb::zero();
        for ((x, y), k) in mkw_forest(&z) {
            for ((a, b), k2) in mkw_forest(&x) {
                left.add_term((a, b, y.clone()), &k * k2);
            }
            for ((a, b), k2) in mkw_forest(&y) {
                right.add_term((x.clone(), a, b), &k * k2);
            }
        }
        c.case(left == right, || z.to_string());
    }
    c
}

fn antipode_axiom(_: &Ctx) -> Check {
    let mut c = Check::new("antipode: m(S ⊗ id)Δ = ηε");
    for z in forests_up_to(4, &ab()) {
        if z.is_unit() {
            continue;
        }
        let mut total = LinComb::zero();
        for ((x, y), k) in mkw_forest(&z) {
            let s = antipode(&LinComb::basis(x));
            total.add_scaled(&shuffle(&s, &LinComb::basis(y)).expect("labelled forests"), &k);
        }
        c.case(total.is_zero(), || z.to_string());
    }
    c
}

fn omega_hopf_morphism(_: &Ctx) -> Check {
    let mut c = Check::new("Ω intertwines BCK and MKW coproducts");
    let nps: BTreeSet<NonplanarForest> = forests_up_to(4, &ab()).iter().map(NonplanarForest::from_forest).collect();
    for x in nps {
        let lhs = mkw_coproduct(&omega_embed(&x));
        let mut rhs = LinComb::zero();
        for ((a, b), k) in ck_coproduct(&x) {
            rhs.add_scaled(&omega_embed(&a).tensor(&omega_embed(&b)), &k);
        }
        c.case(lhs == rhs, || x.as_forest().to_string());
    }
    c
}

// ---- coactions ----

/// ρ_T⁰ cointeraction on forests up to `n` vertices; passes when at least one
/// normalisation holds everywhere, and names the ones that do.
pub fn cointeraction_t0_upto(n: usize, preferred: PiNorm) -> Check {
    let mut c = Check::new("ρ_T⁰ cointeraction with Δ_MKW");
    let all = forests_up_to(n, &ab());
    let mut norms = vec![preferred];
    norms.extend([PiNorm::Eulerian, PiNorm::LeftBracket].into_iter().filter(|n| *n != preferred));
    let mut passing = Vec::new();
    let mut first_bad = BTreeMap::new();
    for &norm in &norms {
        match all.par_iter().find_first(|w| !cointeraction_t0(w, norm)) {
            None => passing.push(norm.name()),
            Some(w) => {
                first_bad.insert(norm.name(), w.to_string());
            }
        }
    }
    c.cases = all.len();
    if passing.is_empty() {
        c.failed = all.len();
        c.counterexamples = first_bad.iter().map(|(n, w)| format!("{w} (π = {n})")).collect();
    }
    let mut note = format!("passing π: {}", if passing.is_empty() { "none".into() } else { passing.join(", ") });
    for (n, w) in &first_bad {
        note.push_str(&format!("; π = {n} fails on {w}"));
    }
    c.note = Some(note);
    c
}

fn cointeraction_norms(ctx: &Ctx) -> Check {
    cointeraction_t0_upto(4, ctx.norm)
}

fn rho_t_counit(ctx: &Ctx) -> Check {
    let mut c = Check::new("(ε ⊗ id)ρ_T = id");
    for w in forests_up_to(4, &ab()) {
        let r = rho_t(&w, &letters(&["0", "1"]), ctx.norm);
        c.case(counit_left(&r) == LinComb::basis(w.clone()), || w.to_string());
    }
    c
}

// ---- blue trees ----

fn phi_round_trip(_: &Ctx) -> Check {
    let mut c = Check::new("φ⁻¹φ = id");
    for w in forests_up_to(4, &letters(&["0", "1", "2", "3"])) {
        let back = phi_forest(&w).and_then(|p| phi_inv_forest(&p));
        c.case(back.as_ref() == Ok(&w), || w.to_string());
    }
    c
}

/// Δ⁺ read off Δ_MKW through B₊φ, with the B₋ correction for decorated roots.
fn delta_plus_oracle(tau: &Tree) -> TensorSum<Tree, Tree> {
    let mut out = LinComb::zero();
    if tau.children.iter().all(|(e, _)| e.is_undecorated()) {
        let w = phi_inv_forest(&b_minus(tau).expect("tree")).expect("blue tree");
        for ((l, r), k) in mkw_forest(&w) {
            out.add_term((b_plus(&phi_forest(&l).expect("φ")), b_plus(&phi_forest(&r).expect("φ"))), k);
        }
    } else {
        let lifted = b_plus(&Forest::single(tau.clone()));
        let dot = Tree::blank();
        for ((l, r), k) in delta_plus_oracle(&lifted) {
            if l == lifted && r == dot {
                continue;
            }
            out.add_term((l, b_minus(&r).expect("tree").0[0].clone()), k);
        }
    }
    out
}

fn delta_plus_mkw_route(_: &Ctx) -> Check {
    let mut c = Check::new("Δ⁺ on blue trees through Δ_MKW");
    for tau in image_trees(6, &["0", "1", "2"]) {
        c.case(delta_plus_pb(&tau) == delta_plus_oracle(&tau), || tau.to_string());
    }
    c
}

fn delta_minus_rho_route(_: &Ctx) -> Check {
    let mut c = Check::new("Δ⁻ on blue trees through ρ_S");
    for a in [rat(49, 100), rat(1, 4)] {
        let cfg = blue_cfg(a);
        for tau in image_trees(5, &["0", "1", "2"]) {
            let direct = delta_minus_pb(&tau, &cfg);
            for norm in [PiNorm::Eulerian, PiNorm::LeftBracket] {
                let ok = direct.is_ok() && direct == delta_minus_via_rho(&tau, &cfg, norm);
                c.case(ok, || format!("{tau} (π = {})", norm.name()));
            }
        }
    }
    c
}

// ---- the model ----

fn letters_l(c: Rational) -> BTreeMap<u32, Rational> {
    BTreeMap::from([(0, Rational::one()), (1, c)])
}

fn random_rat(rng: &mut ChaCha8Rng) -> Rational {
    rat(rng.gen_range(-20..=20), rng.gen_range(1..=7))
}

fn chen_identity(ctx: &Ctx) -> Check {
    let mut c = Check::new("Chen identity for exp(aL)");
    let mut rng = rng(ctx, 3);
    let x = ExpCharacter::from_letters(&letters_l(rat(2, 3)), 5).expect("letters are primitive");
    let words = forests_up_to(4, &letters(&["0", "1"]));
    for _ in 0..3 {
        let (s, u, tt) = (random_rat(&mut rng), random_rat(&mut rng), random_rat(&mut rng));
        for w in &words {
            let lhs = x.pair(&(&tt - &s), w).expect("within truncation");
            let rhs = mkw_forest(w).iter().fold(Rational::zero(), |acc, ((l, r), k)| {
                acc + k * x.pair(&(&u - &s), l).expect("truncation") * x.pair(&(&tt - &u), r).expect("truncation")
            });
            c.case(lhs == rhs, || format!("{w} at s = {s}, u = {u}, t = {tt}"));
        }
    }
    c
}

fn base_model() -> Model {
    Model::new(ExpCharacter::from_letters(&letters_l(rat(2, 3)), 6).expect("primitive"), blue_cfg(rat(1, 4)))
}

fn pi_of_unit(ctx: &Ctx) -> Check {
    let mut c = Check::new("Π_s(•)(t) = 1");
    let mut rng = rng(ctx, 4);
    let renorm = base_model().renormalised(RenormCharacter::single(t("•[1:•]"), rat(3, 5)));
    for m in [base_model(), renorm] {
        for _ in 0..20 {
            let (s, tt) = (random_rat(&mut rng), random_rat(&mut rng));
            c.case(m.pi(&s, &tt, &Tree::blank()) == Ok(Rational::one()), || format!("s = {s}, t = {tt}"));
        }
    }
    c
}

/// Γ_xx = id, Γ_xyΓ_yz = Γ_xz and Π_xΓ_xy = Π_y on blue trees up to `n` vertices.
pub fn model_checks(m: &Model, n: usize, c: &mut Check) {
    let (x, y, z, tt) = (rat(1, 3), rat(-2, 5), rat(7, 4), rat(5, 2));
    for tau in image_trees(n, &["0", "1"]) {
        let one = LinComb::basis(tau.clone());
        let ok = (|| -> planarhopf_core::Result<bool> {
            let id = m.gamma(&x, &x, &one)? == one;
            let comp = m.gamma(&x, &y, &m.gamma(&y, &z, &one)?)? == m.gamma(&x, &z, &one)?;
            let pg = m.pi_lc(&x, &tt, &m.gamma(&x, &y, &one)?)? == m.pi(&y, &tt, &tau)?;
            Ok(id && comp && pg)
        })();
        c.case(ok == Ok(true), || tau.to_string());
    }
}

fn model_axioms(_: &Ctx) -> Check {
    let mut c = Check::new("model: Γ composition and Π_xΓ_xy = Π_y");
    model_checks(&base_model(), 5, &mut c);
    c
}

fn renormalised_model_axioms(_: &Ctx) -> Check {
    let mut c = Check::new("renormalised model: Γ composition and Π_xΓ_xy = Π_y");
    model_checks(&base_model().renormalised(RenormCharacter::single(t("•[1:•]"), rat(3, 5))), 5, &mut c);
    c
}

// ---- deformed positive side ----

fn max_edge_index(t: &Tree) -> u32 {
    t.children.iter().map(|(e, c)| e.index().map_or(0, |m| m.0[0]).max(max_edge_index(c))).max().unwrap_or(0)
}

/// ⟨x ∗₊ y, z⟩ = ⟨x ⊗ y, Δ⁺₀ z⟩ over `zs`, both directions. Pairs with a left
/// edge above the cap only bound the product coefficient from below.
pub fn star_plus_duality_on(zs: &[Tree], cap: u32) -> Check {
    let mut c = Check::new("∗₊ dual to Δ⁺₀");
    let capm = m1(cap);
    let index: HashMap<&Tree, usize> = zs.iter().enumerate().map(|(i, z)| (z, i)).collect();
    let mut by_pair: BTreeMap<(Tree, Tree), BTreeMap<usize, Rational>> = BTreeMap::new();
    let coproducts: Vec<_> = zs.par_iter().map(|z| delta_plus_0(z, &capm)).collect();
    for (i, d) in coproducts.into_iter().enumerate() {
        match d {
            Ok(d) => {
                for (pair, k) in d {
                    by_pair.entry(pair).or_default().insert(i, k);
                }
            }
            Err(e) => c.case(false, || format!("{}: {e}", zs[i])),
        }
    }
    let results: Vec<(usize, Vec<String>)> = by_pair
        .into_par_iter()
        .map(|((x, y), claimed)| {
            let mut bad = Vec::new();
            let mut cases = 0;
            let prod = match star_plus_tree(&x, &y) {
                Ok(p) => p,
                Err(e) => return (1, vec![format!("{x} ∗₊ {y}: {e}")]),
            };
            let exact = max_edge_index(&x) <= cap;
            for (i, k) in &claimed {
                cases += 1;
                let p = prod.coeff(&zs[*i]);
                if !(if exact { &p == k } else { k <= &p }) {
                    bad.push(format!("Δ⁺₀({}) has {k} on {x} ⊗ {y}, product gives {p}", zs[*i]));
                }
            }
            if exact {
                for (z, k) in prod.iter() {
                    if let Some(i) = index.get(z) {
                        cases += 1;
                        let q = claimed.get(i).cloned().unwrap_or_else(Rational::zero);
                        if &q != k {
                            bad.push(format!("{x} ∗₊ {y} has {k} on {z}, Δ⁺₀ gives {q}"));
                        }
                    }
                }
            }
            (cases, bad)
        })
        .collect();
    for (cases, bad) in results {
        c.cases += cases - bad.len();
        for b in bad {
            c.case(false, || b);
        }
    }
    c
}

fn star_plus_duality(_: &Ctx) -> Check {
    star_plus_duality_on(&small_typed(3), 2)
}

fn almost_derivation(ctx: &Ctx) -> Check {
    let mut c = Check::new("↑ is a derivation of ⋆̂ up to the ↓ correction");
    let mut rng = rng(ctx, 5);
    let i = m1(1);
    let upv = |x: &LinComb<Tree>| x.flat_map(|t| if t.children.is_empty() { LinComb::zero() } else { up_nonroot(t, &i) });
    for _ in 0..100 {
        let (y, z) = (random_v(&mut rng, 4, 2), random_v(&mut rng, 4, 2));
        let lhs = upv(&dgraft_v(&y, &z));
        let rhs = dgraft_v(&upv(&y), &z) + dgraft_v(&y, &upv(&z)) - dgraft_v(&down_root(&y, &i), &z);
        c.case(lhs == rhs, || format!("y = {y}; z = {z}"));
    }
    c
}

fn x_omega_x(ctx: &Ctx) -> Check {
    let mut c = Check::new("X^m ω X^n rewriting");
    let mut rng = rng(ctx, 6);
    let v = |k: u32, ch: Vec<_>| Tree::new(VertexDec::Multi(m1(k)), ch);
    for _ in 0..100 {
        let k = rng.gen_range(1..=3);
        let branches: Vec<_> = (0..k).map(|_| random_planted(&mut rng, 3, 2, true).children.remove(0)).collect();
        let (m, n) = (rng.gen_range(0..=2u32), rng.gen_range(0..=3u32));
        let omega = v(0, branches);
        let mut word = word_of(&v(m, vec![]));
        word.extend(word_of(&omega));
        word.extend(word_of(&v(n, vec![])));
        let mut rhs = LinComb::zero();
        for r2 in 0..=n {
            let b = to_rational(binomial(n as u64, r2 as u64));
            for (w, cw) in down_root_tree(&omega, &m1(r2)).iter() {
                rhs.add_term(v(m + n - r2, w.children.clone()), &b * cw);
            }
        }
        c.case(normalize_word(&word, 1) == rhs, || format!("m = {m}, n = {n}, ω = {omega}"));
    }
    c
}

/// A fixed pseudo-random character with g(1) = 1.
fn test_character(salt: u64) -> impl Fn(&Tree) -> Rational {
    move |x: &Tree| {
        if x.children.is_empty() && x.dec.multi().is_some_and(|m| m.is_zero()) {
            return Rational::one();
        }
        let h = format!("{salt}{x}").bytes().fold(salt, |a, b| a.wrapping_mul(31).wrapping_add(b as u64));
        rat((h % 7) as i64 - 3, 1 + (h % 3) as i64)
    }
}

fn grading_drop(ctx: &Ctx) -> Check {
    let mut c = Check::new("|Γ_g τ − τ| < |τ|");
    let cfg = typed_cfg(rat(3, 2), rat(1, 3));
    let g = test_character(ctx.seed);
    let mut rng = rng(ctx, 7);
    for _ in 0..40 {
        let tau = random_typed_tree(&mut rng, 5, 1, true);
        let ok = (|| -> planarhopf_core::Result<bool> {
            let rt = tree_regularity(&tau, &cfg)?;
            let rest = gamma_g(&g, &tau, &cfg)? - LinComb::basis(tau.clone());
            for (y, _) in rest.iter() {
                if tree_regularity(y, &cfg)? >= rt {
                    return Ok(false);
                }
            }
            Ok(true)
        })();
        c.case(ok == Ok(true), || tau.to_string());
    }
    c
}

// ---- deformed negative side ----

fn random_negative(rng: &mut ChaCha8Rng, cfg: &RegularityConfig, max_edges: usize) -> Tree {
    loop {
        let t = random_typed_tree(rng, max_edges, 1, true);
        if tree_regularity(&t, cfg).is_ok_and(|r| r < Rational::zero()) {
            return t;
        }
    }
}

fn tree_assoc(op: fn(&Tree, &Tree) -> LinComb<Tree>, a: &Tree, b: &Tree, z: &Tree) -> LinComb<Tree> {
    let lift = |x: &LinComb<Tree>, y: &LinComb<Tree>| x.bilinear(y, op);
    let (a, b, z) = (LinComb::basis(a.clone()), LinComb::basis(b.clone()), LinComb::basis(z.clone()));
    lift(&a, &lift(&b, &z)) - lift(&lift(&a, &b), &z)
}

fn insertion_pre_lie(ctx: &Ctx) -> Check {
    let mut c = Check::new("◇ and ⋄̂ are pre-Lie");
    let cfg = typed_cfg(rat(1, 2), rat(-1, 2));
    let mut rng = rng(ctx, 8);
    for _ in 0..30 {
        let (a, b, z) = (random_negative(&mut rng, &cfg, 3), random_negative(&mut rng, &cfg, 3), random_negative(&mut rng, &cfg, 3));
        let ok = tree_assoc(insert, &a, &b, &z) == tree_assoc(insert, &b, &a, &z)
            && tree_assoc(dinsert, &a, &b, &z) == tree_assoc(dinsert, &b, &a, &z);
        c.case(ok, || format!("a = {a}; b = {b}; z = {z}"));
    }
    c
}

fn lemma_route(ctx: &Ctx) -> Check {
    let mut c = Check::new("⋄̂ as ∗₊ on the pruned part");
    let cfg = typed_cfg(rat(1, 2), rat(-1, 2));
    let mut rng = rng(ctx, 9);
    for _ in 0..100 {
        let t1 = random_negative(&mut rng, &cfg, 3);
        let t2 = random_typed_tree(&mut rng, 4, 2, true);
        for p in insertable(&t2) {
            let ok = dinsert_v(&t1, &p, &t2) == dinsert_lemma_v(&t1, &p, &t2);
            c.case(ok, || format!("{t1} into {t2} at {p:?}"));
        }
    }
    c
}

fn symmetry(w: &NegMonomial) -> Rational {
    let mut counts: BTreeMap<&Tree, u64> = BTreeMap::new();
    for x in w.items() {
        *counts.entry(x).or_default() += 1;
    }
    counts.values().fold(Rational::one(), |acc, &n| acc * to_rational(factorial(n)))
}

/// ⟨ω ⋄̂ τ', τ⟩ = sym(ω)⟨ω ⊗ τ', Δ⁻τ⟩ over `zs`, both directions.
pub fn minus_duality_on(zs: &[Tree], cfg: &RegularityConfig) -> Check {
    let mut c = Check::new("⋄̂ dual to Δ⁻");
    let index: HashMap<&Tree, usize> = zs.iter().enumerate().map(|(i, z)| (z, i)).collect();
    let mut by_pair: BTreeMap<(NegMonomial, Tree), BTreeMap<usize, Rational>> = BTreeMap::new();
    let coactions: Vec<_> = zs.par_iter().map(|z| delta_minus(z, cfg)).collect();
    for (i, d) in coactions.into_iter().enumerate() {
        match d {
            Ok(d) => {
                for (pair, k) in d {
                    by_pair.entry(pair).or_default().insert(i, k);
                }
            }
            Err(e) => c.case(false, || format!("{}: {e}", zs[i])),
        }
    }
    let results: Vec<(usize, Vec<String>)> = by_pair
        .into_par_iter()
        .map(|((w, tp), claimed)| {
            let sym = symmetry(&w);
            let prod = dinsert_multi(&w, &tp);
            let mut bad = Vec::new();
            let mut cases = 0;
            for (i, k) in &claimed {
                cases += 1;
                let p = prod.coeff(&zs[*i]);
                if p != k * &sym {
                    bad.push(format!("Δ⁻({}) has {k} on {w} ⊗ {tp}, insertion gives {p}", zs[*i]));
                }
            }
            for (z, p) in prod.iter() {
                if let Some(i) = index.get(z) {
                    cases += 1;
                    let q = claimed.get(i).cloned().unwrap_or_else(Rational::zero);
                    if &(&q * &sym) != p {
                        bad.push(format!("{w} ⋄̂ {tp} has {p} on {z}, Δ⁻ gives {q}"));
                    }
                }
            }
            (cases, bad)
        })
        .collect();
    for (cases, bad) in results {
        c.cases += cases - bad.len();
        for b in bad {
            c.case(false, || b);
        }
    }
    c
}

fn minus_duality(_: &Ctx) -> Check {
    minus_duality_on(&small_typed(3), &typed_cfg(rat(1, 2), rat(-1, 2)))
}

// ---- cointeraction ----

/// k1[d1:k2, d2:k3[d3:k4, Ξ2:•], Ξ1:•] at k = (1,0,1,0), d = (0,1,0).
pub const COINTERACTION_EXAMPLE: &str = "1[K1#0:0,K1#1:1[K1#0:0,X2#0:0],X1#0:0]";

/// β = 3/2, α₁ = −1/2, α₂ = −1/4.
pub fn two_noise_cfg() -> RegularityConfig {
    typed_cfg(rat(3, 2), rat(-1, 2)).with_alpha(2, rat(-1, 4))
}

fn cointeraction_rho_t0(ctx: &Ctx) -> Check {
    cointeraction_t0_upto(4, ctx.norm)
}

pub fn cointeraction_truncated_on(zs: &[Tree], cap: u32) -> Check {
    let mut c = Check::new("(Id ⊗ Δ⁺₀)Δ⁻ = m¹³(Δ⁻_nr ⊗ Δ⁻)Δ⁺₀ under cap");
    let capm = m1(cap);
    let ex = cointeraction_check_trunc(&t(COINTERACTION_EXAMPLE), &capm, &two_noise_cfg());
    c.case(ex == Ok(true), || COINTERACTION_EXAMPLE.to_string());
    let cfg = typed_cfg(rat(1, 2), rat(-1, 2));
    let oks: Vec<bool> = zs.par_iter().map(|z| cointeraction_check_trunc(z, &capm, &cfg) == Ok(true)).collect();
    for (z, ok) in zs.iter().zip(oks) {
        c.case(ok, || z.to_string());
    }
    c
}

pub fn cointeraction_extended_on(zs: &[Tree]) -> Check {
    let mut c = Check::new("extended-decoration cointeraction");
    let ex = cointeraction_check_ex(&t(COINTERACTION_EXAMPLE), &two_noise_cfg());
    c.case(ex == Ok(true), || COINTERACTION_EXAMPLE.to_string());
    let cfg = typed_cfg(rat(1, 2), rat(-1, 2));
    let oks: Vec<bool> = zs.par_iter().map(|z| cointeraction_check_ex(z, &cfg) == Ok(true)).collect();
    for (z, ok) in zs.iter().zip(oks) {
        c.case(ok, || z.to_string());
    }
    c
}

fn cointeraction_truncated(_: &Ctx) -> Check {
    cointeraction_truncated_on(&small_typed(3), 2)
}

fn cointeraction_extended(_: &Ctx) -> Check {
    cointeraction_extended_on(&small_typed(3))
}

/// Chu–Vandermonde for one-dimensional profiles of length ≤ 3 and totals ≤ `max`.
pub fn chu_vandermonde_upto(max: u32) -> Check {
    let mut c = Check::new("Chu–Vandermonde");
    for n in 0..=max {
        for m in 0..=n {
            for len in 1..=3usize {
                for prof in cartesian(&vec![(0..=max).collect::<Vec<_>>(); len]) {
                    if prof.iter().sum::<u32>() > max {
                        continue;
                    }
                    let prof: Vec<MultiIndex> = prof.into_iter().map(m1).collect();
                    c.case(chu_vandermonde(&m1(n), &m1(m), &prof), || format!("n = {n}, m = {m}, ℓ = {prof:?}"));
                }
            }
        }
    }
    let two = chu_vandermonde(
        &MultiIndex(vec![2, 3]),
        &MultiIndex(vec![1, 1]),
        &[MultiIndex(vec![1, 2]), MultiIndex(vec![1, 0])],
    );
    c.case(two, || "n = (2,3), m = (1,1), ℓ = [(1,2), (1,0)]".into());
    c
}

fn chu_vandermonde_totals(_: &Ctx) -> Check {
    chu_vandermonde_upto(6)
}

// ---- worked examples ----

fn golden(name: &str, ok: bool, input: &str) -> Check {
    let mut c = Check::new(name);
    c.case(ok, || input.to_string());
    c
}

pub fn golden_grafting(_: &Ctx) -> Check {
    let want: LinComb<Tree> = ["c[a[b],d,e]", "c[d[a[b]],e]", "c[d,e[a[b]]]"].iter().map(|s| (t(s), Rational::one())).collect();
    golden("left grafting a[b] → c[d,e]", graft_tree(&t("a[b]"), &t("c[d,e]")) == Ok(want), "graft(a[b], c[d,e])")
}

pub fn golden_b_plus_minus(_: &Ctx) -> Check {
    let ok = b_plus(&f("{•[•] • •[•[•],•]}")) == t("•[•[•],•,•[•[•],•]]") && b_minus(&t("•[•,•[•,•]]")) == Ok(f("{• •[•,•]}"));
    golden("B₊ and B₋", ok, "bplus({•[•] • •[•[•],•]}), bminus(•[•,•[•,•]])")
}

fn tensor(pairs: &[(&str, &str)]) -> TensorSum<Forest, Forest> {
    pairs.iter().map(|(a, b)| ((f(a), f(b)), Rational::one())).collect()
}

pub fn golden_mkw(_: &Ctx) -> Check {
    let want = tensor(&[
        ("{}", "{a b[c,d]}"),
        ("{a b[c,d]}", "{}"),
        ("a", "b[c,d]"),
        ("c", "{a b[d]}"),
        ("{a c}", "b[d]"),
        ("{c a}", "b[d]"),
        ("{c d}", "{a b}"),
        ("{a c d}", "b"),
        ("{c a d}", "b"),
        ("{c d a}", "b"),
    ]);
    golden("Δ_MKW of {a b[c,d]}", mkw_coproduct(&lc("{a b[c,d]}")) == want, "mkw({a b[c,d]})")
}

pub fn golden_omega(_: &Ctx) -> Check {
    let x = NonplanarForest::from_forest(&f("{a[b[c],d] e[f]}"));
    let want = lc("{a[b[c],d] e[f]} + {a[d,b[c]] e[f]} + {e[f] a[b[c],d]} + {e[f] a[d,b[c]]}");
    golden("Ω of {a[b[c],d] e[f]}", omega_embed(&x) == want, "omega({a[b[c],d] e[f]})")
}

pub fn golden_partitions(_: &Ctx) -> Check {
    let got: BTreeSet<BTreeSet<Vec<usize>>> = admissible_partitions(&f("a[b,c[d]]"), true)
        .iter()
        .map(|p| p.block_vertices().into_iter().collect())
        .collect();
    // preorder ids: a=0, b=1, c=2, d=3
    let want: BTreeSet<BTreeSet<Vec<usize>>> = [
        vec![vec![0, 1, 2, 3]],
        vec![vec![0], vec![1], vec![2], vec![3]],
        vec![vec![0, 2, 3], vec![1]],
        vec![vec![1, 2, 3], vec![0]],
        vec![vec![0, 1, 2], vec![3]],
        vec![vec![0, 2], vec![1], vec![3]],
        vec![vec![0], vec![1, 2], vec![3]],
        vec![vec![0], vec![1], vec![2, 3]],
    ]
    .into_iter()
    .map(|p| p.into_iter().collect())
    .collect();
    golden("8 spanning admissible partitions of a[b,c[d]]", got == want, "a[b,c[d]]")
}

/// The eight-term ρ_S expansion of a[b,c[d]] over one letter, brackets weighted by `w`.
fn rho_s_expected(w: Rational) -> TensorSum<Multiset<Tagged>, Forest> {
    let x = VertexDec::label("x");
    let tag = |s: &str| LinComb::basis(Tagged { forest: f(s), tag: x.clone() });
    let lie = |a: &str, b: &str| {
        let mut l = LinComb::basis(f(&format!("{{{a} {b}}}")));
        l.add_term(f(&format!("{{{b} {a}}}")), -Rational::one());
        l.scaled(&w).map_basis(|g| Tagged { forest: g.clone(), tag: x.clone() })
    };
    let rows: Vec<(Vec<LinComb<Tagged>>, LinComb<Forest>)> = vec![
        (vec![tag("a[b,c[d]]")], lc("x")),
        (vec![tag("a"), tag("b"), tag("c"), tag("d")], lc("x[x,x[x]]")),
        (vec![tag("b"), tag("a[c[d]]")], lc("x[x]")),
        (vec![tag("a"), lie("b", "c[d]")], lc("x[x]")),
        (vec![tag("d"), tag("a[b,c]")], lc("x[x]")),
        (vec![tag("b"), tag("d"), tag("a[c]")], lc("2*x[x,x]")),
        (vec![tag("a"), lie("b", "c"), tag("d")], lc("x[x[x]]")),
        (vec![tag("a"), tag("b"), tag("c[d]")], lc("x[x,x]")),
    ];
    let mut out = LinComb::zero();
    for (factors, right) in rows {
        out += &sym_product(&factors).tensor(&right);
    }
    out
}

pub fn golden_rho_s(_: &Ctx) -> Check {
    let w = f("a[b,c[d]]");
    let x = letters(&["x"]);
    let ok = rho_s(&w, &x, PiNorm::LeftBracket) == rho_s_expected(Rational::one())
        && rho_s(&w, &x, PiNorm::Eulerian) == rho_s_expected(rat(1, 2));
    let mut c = golden("ρ_S skeleton of a[b,c[d]]", ok, "rhoS(a[b,c[d]])");
    c.note = Some("leftbracket reproduces the displayed weights; eulerian halves each bracket".into());
    c
}

const TWO_BRANCH: &str = "•[•[•,1:•],•[•[3:•],•[4:•]]]";
const MINUS_EXAMPLE: &str = "•[•[•,2:•],•[3:•],1:•]";

pub fn golden_delta_plus_pb(_: &Ctx) -> Check {
    let (a, cc, d) = ("•[•,1:•]", "•[3:•]", "•[4:•]");
    let rows: Vec<(Vec<String>, String)> = vec![
        (vec![TWO_BRANCH.into()], "•".into()),
        (vec!["•".into()], TWO_BRANCH.into()),
        (vec!["•[•]".into()], format!("•[•[1:•],•[{cc},{d}]]")),
        (vec![format!("•[{a}]")], format!("•[•[{cc},{d}]]")),
        (vec![format!("•[{cc}]")], format!("•[{a},•[{d}]]")),
        (vec![format!("•[•,{cc}]"), format!("•[{cc},•]")], format!("•[•[1:•],•[{d}]]")),
        (vec![format!("•[{a},{cc}]"), format!("•[{cc},{a}]")], format!("•[•[{d}]]")),
        (vec![format!("•[{cc},{d}]")], format!("•[{a},•]")),
        (vec![format!("•[•,{cc},{d}]"), format!("•[{cc},•,{d}]"), format!("•[{cc},{d},•]")], "•[•[1:•],•]".into()),
        (vec![format!("•[{a},{cc},{d}]"), format!("•[{cc},{a},{d}]"), format!("•[{cc},{d},{a}]")], "•[•]".into()),
    ];
    let mut want = LinComb::zero();
    for (ls, right) in &rows {
        for l in ls {
            want.add_term((t(l), t(right)), Rational::one());
        }
    }
    golden("Δ⁺ of the two-branch blue tree", delta_plus_pb(&t(TWO_BRANCH)) == want, TWO_BRANCH)
}

pub fn golden_delta_minus_pb(_: &Ctx) -> Check {
    let rows: &[(&[&str], &str)] = &[
        (&[], MINUS_EXAMPLE),
        (&["•[1:•]"], "•[•[•,2:•],•[3:•]]"),
        (&["•[2:•]"], "•[•[•],•[3:•],1:•]"),
        (&["•[3:•]"], "•[•[•,2:•],•,1:•]"),
        (&["•[•[3:•],1:•]"], "•[•[•,2:•]]"),
        (&["•[1:•]", "•[2:•]"], "•[•[•],•[3:•]]"),
        (&["•[1:•]", "•[3:•]"], "•[•[•,2:•],•]"),
        (&["•[2:•]", "•[3:•]"], "•[•[•],•,1:•]"),
        (&["•[•[3:•],1:•]", "•[2:•]"], "•[•[•]]"),
        (&["•[1:•]", "•[2:•]", "•[3:•]"], "•[•[•],•]"),
    ];
    let mut want = LinComb::zero();
    for (ls, right) in rows {
        want.add_term((Multiset::from_vec(ls.iter().map(|s| t(s)).collect()), t(right)), Rational::one());
    }
    let got = delta_minus_pb(&t(MINUS_EXAMPLE), &blue_cfg(rat(49, 100)));
    let mut c = golden("Δ⁻ at α = 49/100", got == Ok(want), MINUS_EXAMPLE);
    c.note = Some("the displayed eight families plus the empty family and {1}{2}{3}".into());
    c
}

pub fn golden_cointeraction(_: &Ctx) -> Check {
    let ok = cointeraction_check_trunc(&t(COINTERACTION_EXAMPLE), &m1(2), &two_noise_cfg()) == Ok(true);
    golden("truncated cointeraction on the worked example, cap 2", ok, COINTERACTION_EXAMPLE)
}
