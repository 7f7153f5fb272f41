//! Seeded random instances with bounds sampled inside the hypothesis windows.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::bounds::{BoundsRole, DegreeBounds};
use crate::error::{Error, Result};
use crate::graph::{Graph, Side, VertexId};
use crate::io::emit_instance;
use crate::oracle::Caps;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    /// `q` in `[ceil(d/2), d]`, `p` in `[max(0, ceil(q/2) - 2), q - 1]`.
    Theorem,
    /// `p` in `[max(0, ceil((d-4)/3)), floor(d/2)]`,
    /// `q` in `[ceil(d/2), floor((2d+4)/3)]`, `p < q`.
    Corollary,
    /// Bipartite graph; factor bounds whose orientation image is theorem-regime.
    Factor,
}

#[derive(Debug, Clone, Copy, Default)]
pub struct RunConfig {
    pub seed: u64,
    pub caps: Caps,
    pub force: bool,
    pub trace: bool,
    pub json: bool,
}

impl RunConfig {
    pub fn with_seed(seed: u64) -> Self {
        RunConfig {
            seed,
            ..Default::default()
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    pub graph: Graph,
    pub bounds: DegreeBounds,
}

impl Instance {
    pub fn to_text(&self) -> String {
        emit_instance(&self.graph, &self.bounds)
    }
}

pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// G(n, p): each pair `u < v`, in lexicographic order, kept with probability `prob`.
pub fn random_graph<R: Rng>(rng: &mut R, n: usize, prob: f64) -> Graph {
    let prob = prob.clamp(0.0, 1.0);
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(prob) {
                edges.push((u, v));
            }
        }
    }
    Graph::new(n, edges).expect("pairs are distinct and loop-free")
}

/// Vertices `0..left` against `left..left + right`, each cross pair kept with
/// probability `prob`.
pub fn random_bipartite<R: Rng>(rng: &mut R, left: usize, right: usize, prob: f64) -> Graph {
    let prob = prob.clamp(0.0, 1.0);
    let mut edges = Vec::new();
    for u in 0..left {
        for v in left..left + right {
            if rng.gen_bool(prob) {
                edges.push((u, v));
            }
        }
    }
    Graph::new(left + right, edges).expect("pairs are distinct and loop-free")
}

fn pick<R: Rng>(rng: &mut R, lo: i64, hi: i64, vertex: VertexId, degree: usize) -> Result<usize> {
    if lo > hi || hi < 0 {
        return Err(Error::WindowEmpty { vertex, degree });
    }
    Ok(rng.gen_range(lo.max(0)..=hi) as usize)
}

fn ceil_div(a: i64, b: i64) -> i64 {
    a.div_euclid(b) + i64::from(a.rem_euclid(b) != 0)
}

/// `(p, q)` with `2q >= d`, `2p >= q - 4`, `p < q <= d`.
pub fn sample_theorem_window<R: Rng>(rng: &mut R, v: VertexId, d: usize) -> Result<(usize, usize)> {
    if d == 0 {
        return Ok((0, 0));
    }
    let di = d as i64;
    let q = pick(rng, ceil_div(di, 2), di, v, d)?;
    let p = pick(rng, (ceil_div(q as i64, 2) - 2).max(0), q as i64 - 1, v, d)?;
    Ok((p, q))
}

/// `(p, q)` with `3p >= d - 4`, `2p <= d <= 2q`, `3q <= 2d + 4`, `p < q`.
pub fn sample_corollary_window<R: Rng>(rng: &mut R, v: VertexId, d: usize) -> Result<(usize, usize)> {
    if d == 0 {
        return Ok((0, 0));
    }
    let di = d as i64;
    let (p_lo, p_hi) = (ceil_div(di - 4, 3).max(0), di / 2);
    let (q_lo, q_hi) = (ceil_div(di, 2), ((2 * di + 4) / 3).min(di));
    if p_lo >= q_hi {
        return Err(Error::WindowEmpty { vertex: v, degree: d });
    }
    loop {
        let p = pick(rng, p_lo, p_hi, v, d)?;
        let q = pick(rng, q_lo, q_hi, v, d)?;
        if p < q {
            return Ok((p, q));
        }
    }
}

/// A seeded instance. Identical arguments give identical instances.
pub fn generate_instance(cfg: &RunConfig, n: usize, prob: f64, regime: Regime) -> Result<Instance> {
    let mut rng = rng_from_seed(cfg.seed);
    let graph = match regime {
        Regime::Theorem | Regime::Corollary => random_graph(&mut rng, n, prob),
        Regime::Factor => random_bipartite(&mut rng, n.div_ceil(2), n / 2, prob),
    };
    let bounds = sample_bounds(&mut rng, &graph, regime)?;
    Ok(Instance { graph, bounds })
}

/// Bounds for an existing graph. In the factor regime the sides come from
/// [`Graph::bipartition`], so the graph must be bipartite.
pub fn sample_bounds<R: Rng>(rng: &mut R, g: &Graph, regime: Regime) -> Result<DegreeBounds> {
    let n = g.vertex_count();
    match regime {
        Regime::Theorem => {
            let mut out = Vec::with_capacity(n);
            for v in 0..n {
                out.push(sample_theorem_window(rng, v, g.degree(v))?);
            }
            DegreeBounds::from_fn(n, BoundsRole::Orientation, |v| out[v])
        }
        Regime::Corollary => {
            let mut out = Vec::with_capacity(n);
            for v in 0..n {
                out.push(sample_corollary_window(rng, v, g.degree(v))?);
            }
            DegreeBounds::from_fn(n, BoundsRole::Orientation, |v| out[v])
        }
        Regime::Factor => {
            let part = g.bipartition()?;
            let mut out = Vec::with_capacity(n);
            for v in 0..n {
                let d = g.degree(v);
                let (p, q) = sample_theorem_window(rng, v, d)?;
                out.push(match part.side(v) {
                    Side::X => (p, q),
                    Side::Y => (d - q, d - p),
                });
            }
            DegreeBounds::from_fn(n, BoundsRole::Factor, |v| out[v])
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bounds::{check_hypotheses, validate_bounds};
    use crate::factor::check_factor_hypotheses;

    #[test]
    fn same_seed_same_bytes() {
        for regime in [Regime::Theorem, Regime::Corollary, Regime::Factor] {
            let a = generate_instance(&RunConfig::with_seed(7), 20, 0.4, regime).unwrap();
            let b = generate_instance(&RunConfig::with_seed(7), 20, 0.4, regime).unwrap();
            assert_eq!(a.to_text(), b.to_text());
        }
        let a = generate_instance(&RunConfig::with_seed(7), 20, 0.4, Regime::Theorem).unwrap();
        let c = generate_instance(&RunConfig::with_seed(8), 20, 0.4, Regime::Theorem).unwrap();
        assert_ne!(a.to_text(), c.to_text());
    }

    #[test]
    fn regimes_land_inside_their_windows() {
        for seed in 0..50 {
            let cfg = RunConfig::with_seed(seed);
            let t = generate_instance(&cfg, 15, 0.5, Regime::Theorem).unwrap();
            validate_bounds(&t.graph, &t.bounds).unwrap();
            assert!(check_hypotheses(&t.graph, &t.bounds).theorem_ok);

            let c = generate_instance(&cfg, 15, 0.5, Regime::Corollary).unwrap();
            validate_bounds(&c.graph, &c.bounds).unwrap();
            assert!(check_hypotheses(&c.graph, &c.bounds).corollary_ok);

            let f = generate_instance(&cfg, 15, 0.5, Regime::Factor).unwrap();
            f.bounds.check_range(&f.graph).unwrap();
            f.bounds.check_strict(&f.graph).unwrap();
            let part = f.graph.bipartition().unwrap();
            assert!(check_factor_hypotheses(&f.graph, &part, &f.bounds).all_ok);
        }
    }

    #[test]
    fn degree_one_window_collapses() {
        let mut rng = rng_from_seed(1);
        for _ in 0..20 {
            assert_eq!(sample_theorem_window(&mut rng, 0, 1).unwrap(), (0, 1));
        }
        assert_eq!(sample_theorem_window(&mut rng, 0, 0).unwrap(), (0, 0));
        assert_eq!(sample_corollary_window(&mut rng, 0, 0).unwrap(), (0, 0));
    }

    #[test]
    fn ceil_division() {
        assert_eq!(ceil_div(-3, 3), -1);
        assert_eq!(ceil_div(-2, 3), 0);
        assert_eq!(ceil_div(5, 2), 3);
        assert_eq!(ceil_div(4, 2), 2);
    }
}
