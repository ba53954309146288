//! Random rational evaluation points for the numeric oracle: symbolic
//! identities are re-checked by evaluating their ingredients at sampled
//! points and redoing the matrix arithmetic over plain fractions.

use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;

use crate::qlinalg::{Mat, MatQ};
use crate::qscalar::{rat, Rat};
use crate::Result;

/// Fixed fallback seed so unconfigured runs are reproducible.
pub const DEFAULT_SEED: u64 = 0x0051_4752_4146_5431;

/// RNG for evaluation points; the `QGRAFT_SEED` environment variable
/// overrides the default seed.
pub fn seeded_rng() -> ChaCha20Rng {
    let seed = std::env::var("QGRAFT_SEED")
        .ok()
        .and_then(|v| v.parse::<u64>().ok())
        .unwrap_or(DEFAULT_SEED);
    ChaCha20Rng::seed_from_u64(seed)
}

/// A random rational point, avoiding 0 and ±1 where q-expressions collapse.
pub fn random_point<R: Rng>(rng: &mut R) -> Rat {
    loop {
        let n = rng.gen_range(-12i64..=12);
        let d = rng.gen_range(1i64..=12);
        let p = rat(n, d);
        if !p.is_zero() && !p.abs().is_one() {
            return p;
        }
    }
}

/// `count` distinct evaluation points.
pub fn sample_points<R: Rng>(rng: &mut R, count: usize) -> Vec<Rat> {
    let mut out: Vec<Rat> = Vec::new();
    while out.len() < count {
        let p = random_point(rng);
        if !out.contains(&p) {
            out.push(p);
        }
    }
    out
}

/// Evaluates each factor at the point and multiplies numerically, so the
/// product is formed by an independent code path from the symbolic one.
pub fn eval_product(factors: &[&Mat], s0: &Rat) -> Result<MatQ> {
    assert!(!factors.is_empty());
    let mut acc = factors[0].eval_numeric(s0)?;
    for f in &factors[1..] {
        acc = acc.matmul(&f.eval_numeric(s0)?);
    }
    Ok(acc)
}

/// True iff the two factor products agree at every point; poles are errors,
/// not verdicts.
pub fn products_agree_at(lhs: &[&Mat], rhs: &[&Mat], points: &[Rat]) -> Result<bool> {
    for p in points {
        if eval_product(lhs, p)? != eval_product(rhs, p)? {
            return Ok(false);
        }
    }
    Ok(true)
}
