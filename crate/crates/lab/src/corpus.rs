//! Named instance collections for the verification suites.

use container_lab_core::rational::ratio;
use container_lab_core::{Hypergraph, Result, VertexSet};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::generators as gen;
use crate::report::hypergraph_digest;
use crate::suites::Suite;

#[derive(Debug, Clone)]
pub struct Instance {
    pub name: String,
    pub h: Hypergraph,
    pub digest: String,
}

impl Instance {
    pub fn new(name: impl Into<String>, h: Hypergraph) -> Self {
        let digest = hypergraph_digest(&h);
        Self { name: name.into(), h, digest }
    }
}

fn uniform(n: usize, r: usize, m: usize, seed: u64) -> Result<Instance> {
    Ok(Instance::new(format!("random-uniform(n={n},r={r},m={m},seed={seed})"), gen::random_uniform(n, r, m, seed)?))
}

fn nonuniform(n: usize, m: usize, max: usize, seed: u64) -> Result<Instance> {
    Ok(Instance::new(
        format!("random-nonuniform(n={n},m={m},max={max},seed={seed})"),
        gen::random_nonuniform(n, m, max, seed)?,
    ))
}

fn complete(n: usize, r: usize) -> Result<Instance> {
    Ok(Instance::new(format!("complete(n={n},r={r})"), gen::complete(n, r)?))
}

fn triangles(n: usize) -> Result<Instance> {
    Ok(Instance::new(format!("triangles(n={n})"), gen::triangles(n)?))
}

fn aps(n: usize, k: usize) -> Result<Instance> {
    Ok(Instance::new(format!("aps(n={n},k={k})"), gen::aps(n, k)?))
}

fn star(leaves: usize) -> Instance {
    Instance::new(format!("star(leaves={leaves})"), gen::star(leaves))
}

fn binom(n: usize, k: usize) -> usize {
    container_lab_core::rational::binomial(n, k).try_into().unwrap_or(usize::MAX)
}

/// The fixed corpus each suite is accepted against.
pub fn standard(suite: Suite, seed: u64) -> Result<Vec<Instance>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    match suite {
        Suite::CoverLemmas => {
            for i in 0..150u64 {
                let r = 2 + (i % 3) as usize;
                let n = rng.random_range(r.max(6)..=60);
                let cap = if r == 2 { binom(n, 2) } else { 600.min(binom(n, r)) };
                let m = rng.random_range(1..=cap);
                out.push(uniform(n, r, m, seed ^ i)?);
            }
            for n in 3..=6 {
                out.push(triangles(n)?);
            }
            for n in 3..=20 {
                out.push(aps(n, 3)?);
            }
            for n in (4..=64).step_by(4).chain((66..=120).step_by(2)) {
                out.push(complete(n, 2)?);
            }
            for (j, n) in [70usize, 85, 100, 115].into_iter().enumerate() {
                let s = seed.wrapping_add(1000 + j as u64);
                let h = gen::random_graph(n, &ratio(9, 10), s)?;
                out.push(Instance::new(format!("random-graph(n={n},density=9/10,seed={s})"), h));
            }
        }
        Suite::HardcoreLemmas => {
            for i in 0..60u64 {
                let n = rng.random_range(4..=14);
                let m = rng.random_range(1..=2 * n);
                out.push(nonuniform(n, m, 3.min(n), seed ^ i)?);
            }
            for i in 0..30u64 {
                let n = rng.random_range(5..=16);
                let m = rng.random_range(1..=2 * n);
                out.push(uniform(n, 2, m.min(binom(n, 2)), seed ^ (100 + i))?);
            }
            for i in 0..4u64 {
                out.push(uniform(18, 2, 14 + 2 * i as usize, seed ^ (200 + i))?);
            }
            for leaves in 2..=8 {
                out.push(star(leaves));
            }
            out.push(triangles(4)?);
            for n in 5..=10 {
                out.push(aps(n, 3)?);
            }
        }
        Suite::InterpolatingLemmas | Suite::Crosscheck => {
            for i in 0..36u64 {
                let r = 2 + (i % 2) as usize;
                let n = rng.random_range(5..=12);
                let m = rng.random_range(1..=2 * n).min(binom(n, r));
                out.push(uniform(n, r, m, seed ^ i)?);
            }
            out.push(triangles(4)?);
            out.push(triangles(5)?);
            for n in 5..=12 {
                out.push(aps(n, 3)?);
            }
            for n in 3..=6 {
                out.push(complete(n, 2)?);
            }
            if suite == Suite::InterpolatingLemmas {
                for leaves in 2..=5 {
                    out.push(star(leaves));
                }
                for i in 0..6u64 {
                    out.push(nonuniform(10, 8, 3, seed ^ (300 + i))?);
                }
            }
        }
        Suite::Prop23 => {
            let densities = [ratio(1, 10), ratio(1, 5), ratio(1, 3), ratio(1, 2)];
            for i in 0..500u64 {
                let n = rng.random_range(4..=12);
                let d = &densities[(i % 4) as usize];
                let s = seed ^ i;
                let h = gen::decreasing_family(n, d, s)?;
                out.push(Instance::new(format!("decreasing(n={n},density={d},seed={s})"), h));
            }
            for u in 0u64..256 {
                let u = VertexSet::from_mask(u);
                out.push(Instance::new(format!("power-set(n=8,U={u})"), gen::power_set_family(8, &u)?));
            }
        }
        Suite::Prop21 | Suite::Janson => {
            for i in 0..100u64 {
                let r = 2 + (i % 2) as usize;
                let n = rng.random_range(r + 2..=14);
                let m = rng.random_range(1..=(3 * n).min(binom(n, r)));
                out.push(uniform(n, r, m, seed ^ i)?);
            }
        }
        Suite::Lymb => {
            for i in 0..500u64 {
                let n = rng.random_range(3..=14);
                let m = rng.random_range(1..=3 * n);
                let max = rng.random_range(1..=4.min(n));
                let m = m.min((1..=max).map(|k| binom(n, k)).sum());
                out.push(nonuniform(n, m, max, seed ^ i)?);
            }
        }
        Suite::Efficient => out.push(complete(1000, 2)?),
        Suite::Packaged => {
            out.push(complete(100, 2)?);
            out.push(triangles(5)?);
        }
    }
    Ok(out)
}

/// `count` seeded random instances suited to `suite`.
pub fn random(suite: Suite, count: usize, seed: u64) -> Result<Vec<Instance>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    for i in 0..count as u64 {
        let s = seed.wrapping_mul(0x9e37_79b9).wrapping_add(i);
        let inst = match suite {
            Suite::Prop23 => {
                let n = rng.random_range(2..=12);
                let d = [ratio(1, 10), ratio(1, 4), ratio(1, 2)][(i % 3) as usize].clone();
                Instance::new(format!("decreasing(n={n},density={d},seed={s})"), gen::decreasing_family(n, &d, s)?)
            }
            Suite::Lymb | Suite::HardcoreLemmas => {
                let n = rng.random_range(3..=12);
                let m = rng.random_range(1..=2 * n);
                nonuniform(n, m, 3.min(n), s)?
            }
            Suite::Efficient => {
                let n = rng.random_range(200..=600);
                complete(n, 2)?
            }
            _ => {
                let r = rng.random_range(2..=3);
                let n = rng.random_range(r + 2..=12);
                let m = rng.random_range(1..=(2 * n).min(binom(n, r)));
                uniform(n, r, m, s)?
            }
        };
        out.push(inst);
    }
    Ok(out)
}
