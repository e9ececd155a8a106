//! Named sub-seeds.
//!
//! Every random stream in the toolkit is derived from one user seed plus a
//! label such as `"graph"` or `"templates"`, so changing how one stage draws
//! numbers never perturbs another.

/// Derive an independent 64-bit seed for `label` from `seed`.
pub fn derive_seed(seed: u64, label: &str) -> u64 {
    // FNV-1a over the label, then splitmix64 to decorrelate nearby seeds.
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in label.as_bytes() {
        h ^= u64::from(*b);
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    splitmix64(seed ^ h)
}

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    x = (x ^ (x >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    x ^ (x >> 31)
}
