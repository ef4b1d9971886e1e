//! Benchmark inputs for the enumeration kernels.

use planarhopf_core::{parse_lincomb, parse_tree, rat, Forest, LinComb, RegularityConfig, Tree};

/// Forest with a wide and a deep tree, five vertices each.
pub fn mkw_input() -> LinComb<Forest> {
    parse_lincomb("{a[b,c,d] e[f[g[h]]]}").expect("static input")
}

/// The worked cointeraction tree with two noises.
pub fn example_tree() -> Tree {
    parse_tree("1[K1#0:0,K1#1:1[K1#0:0,X2#0:0],X1#0:0]").expect("static input")
}

/// A planted tree and a target for ∗₊.
pub fn star_plus_pair() -> (Tree, Tree) {
    let x = parse_tree("0[K1#1:1[K1#0:0]]").expect("static input");
    let y = parse_tree("1[K1#0:0[K1#1:1],K1#0:0]").expect("static input");
    (x, y)
}

/// A blue tree of seven vertices for the rough path coproducts.
pub fn blue_tree() -> Tree {
    parse_tree("•[•[•,2:•],•[3:•],1:•,•[1:•]]").expect("static input")
}

pub fn two_noise_cfg() -> RegularityConfig {
    RegularityConfig::default().with_kernel(1, rat(3, 2)).with_alpha(1, rat(-1, 2)).with_alpha(2, rat(-1, 4))
}

pub fn blue_cfg() -> RegularityConfig {
    (1..=3).fold(RegularityConfig::default(), |c, i| c.with_alpha(i, rat(49, 100)))
}
