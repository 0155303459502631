//! Exhaustive genus distributions by enumerating rotation systems and
//! tracing faces. Works on any connected loopless multigraph.
//!
//! Edge `e` owns darts `2e` (at its first endpoint) and `2e + 1` (at its
//! second), so the partner of a dart is `d ^ 1`.

use num_bigint::BigUint;
use num_traits::ToPrimitive;
use rayon::prelude::*;
use thiserror::Error;

use crate::multigraph::{Multigraph, VertexId};
use crate::pgd::GenusDistribution;

pub type Dart = usize;

pub const DEFAULT_LIMIT: u64 = 1 << 20;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("{census} rotation systems exceed the limit of {limit}")]
    LimitExceeded { census: BigUint, limit: u64 },
    #[error("graph is disconnected")]
    Disconnected,
    #[error("rotation at vertex {0} is not a permutation of its darts")]
    InvalidRotation(VertexId),
}

/// Cyclic order of darts at each vertex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RotationSystem {
    rotations: Vec<Vec<Dart>>,
}

pub fn darts_at(g: &Multigraph, v: VertexId) -> Vec<Dart> {
    g.incident(v)
        .iter()
        .map(|&e| if g.endpoints(e)[0] == v { 2 * e } else { 2 * e + 1 })
        .collect()
}

impl RotationSystem {
    pub fn new(g: &Multigraph, rotations: Vec<Vec<Dart>>) -> Result<Self, OracleError> {
        for v in 0..g.vertex_count() {
            let mut expected = darts_at(g, v);
            let mut got = rotations.get(v).cloned().unwrap_or_default();
            expected.sort_unstable();
            got.sort_unstable();
            if expected != got {
                return Err(OracleError::InvalidRotation(v));
            }
        }
        Ok(RotationSystem { rotations })
    }

    /// Darts at each vertex in incidence order.
    pub fn identity(g: &Multigraph) -> Self {
        RotationSystem {
            rotations: (0..g.vertex_count()).map(|v| darts_at(g, v)).collect(),
        }
    }

    pub fn rotation(&self, v: VertexId) -> &[Dart] {
        &self.rotations[v]
    }

    fn successor_table(&self, dart_count: usize) -> Vec<Dart> {
        let mut succ = vec![0; dart_count];
        for rot in &self.rotations {
            for (i, &d) in rot.iter().enumerate() {
                succ[d] = rot[(i + 1) % rot.len()];
            }
        }
        succ
    }
}

/// Number of orbits of the face permutation `d -> succ(partner(d))`.
pub fn trace_faces(g: &Multigraph, rot: &RotationSystem) -> usize {
    let succ = rot.successor_table(2 * g.edge_count());
    let mut seen = vec![0u32; succ.len()];
    count_orbits(&succ, &mut seen, 1)
}

/// Genus from Euler's formula for a connected graph.
pub fn genus(g: &Multigraph, rot: &RotationSystem) -> usize {
    euler_genus(g.vertex_count(), g.edge_count(), trace_faces(g, rot))
}

fn euler_genus(v: usize, e: usize, f: usize) -> usize {
    let chi2 = 2 + e;
    let rest = v + f;
    assert!(
        chi2 >= rest && (chi2 - rest).is_multiple_of(2),
        "Euler parity violated: V={v} E={e} F={f}"
    );
    (chi2 - rest) / 2
}

fn count_orbits(succ: &[Dart], seen: &mut [u32], stamp: u32) -> usize {
    let mut faces = 0;
    for start in 0..succ.len() {
        if seen[start] == stamp {
            continue;
        }
        faces += 1;
        let mut d = start;
        while seen[d] != stamp {
            seen[d] = stamp;
            d = succ[d ^ 1];
        }
    }
    faces
}

/// `prod (deg(v) - 1)!` over all vertices.
pub fn rotation_census(g: &Multigraph) -> BigUint {
    let mut total = BigUint::from(1u32);
    for v in 0..g.vertex_count() {
        for k in 2..g.degree(v) {
            total *= k as u64;
        }
    }
    total
}

/// All orderings of `items`, in lexicographic order of positions.
fn permutations(items: &[Dart]) -> Vec<Vec<Dart>> {
    if items.len() <= 1 {
        return vec![items.to_vec()];
    }
    let mut out = Vec::new();
    for i in 0..items.len() {
        let mut rest = items.to_vec();
        let first = rest.remove(i);
        for mut tail in permutations(&rest) {
            tail.insert(0, first);
            out.push(tail);
        }
    }
    out
}

struct Enumeration {
    /// Vertices with at least three darts, each with its candidate cyclic orders.
    varying: Vec<Vec<Vec<Dart>>>,
    base: Vec<Dart>,
    dart_count: usize,
}

impl Enumeration {
    fn new(g: &Multigraph) -> Self {
        let mut base = RotationSystem::identity(g).successor_table(2 * g.edge_count());
        let mut varying = Vec::new();
        for v in 0..g.vertex_count() {
            let darts = darts_at(g, v);
            if darts.len() >= 3 {
                // first dart anchors the cycle
                let orders = permutations(&darts[1..])
                    .into_iter()
                    .map(|tail| std::iter::once(darts[0]).chain(tail).collect())
                    .collect();
                varying.push(orders);
            }
        }
        if g.edge_count() == 0 {
            base.clear();
        }
        Enumeration {
            varying,
            base,
            dart_count: 2 * g.edge_count(),
        }
    }

    fn write_rotation(succ: &mut [Dart], order: &[Dart]) {
        for (i, &d) in order.iter().enumerate() {
            succ[d] = order[(i + 1) % order.len()];
        }
    }

    /// Tallies genera for odometer indices `start..end`.
    fn run(&self, g: &Multigraph, start: u64, end: u64) -> Vec<u64> {
        let mut tally = Vec::new();
        if start >= end {
            return tally;
        }
        let mut digits: Vec<usize> = Vec::with_capacity(self.varying.len());
        let mut rem = start;
        for orders in &self.varying {
            let radix = orders.len() as u64;
            digits.push((rem % radix) as usize);
            rem /= radix;
        }
        let mut succ = self.base.clone();
        for (orders, &d) in self.varying.iter().zip(&digits) {
            Self::write_rotation(&mut succ, &orders[d]);
        }
        let mut seen = vec![0u32; self.dart_count];
        let mut stamp = 0u32;
        for _ in start..end {
            stamp = stamp.wrapping_add(1);
            if stamp == 0 {
                seen.iter_mut().for_each(|s| *s = 0);
                stamp = 1;
            }
            let faces = count_orbits(&succ, &mut seen, stamp);
            let genus = euler_genus(g.vertex_count(), g.edge_count(), faces);
            if tally.len() <= genus {
                tally.resize(genus + 1, 0);
            }
            tally[genus] += 1;
            for (orders, d) in self.varying.iter().zip(digits.iter_mut()) {
                *d += 1;
                if *d < orders.len() {
                    Self::write_rotation(&mut succ, &orders[*d]);
                    break;
                }
                *d = 0;
                Self::write_rotation(&mut succ, &orders[0]);
            }
        }
        tally
    }
}

/// Genus distribution by brute force over all rotation systems, refusing
/// inputs whose census exceeds `limit`.
pub fn gd_brute_force(g: &Multigraph, limit: u64) -> Result<GenusDistribution, OracleError> {
    if !g.is_connected() {
        return Err(OracleError::Disconnected);
    }
    let census = rotation_census(g);
    let total = match census.to_u64() {
        Some(t) if t <= limit => t,
        _ => return Err(OracleError::LimitExceeded { census, limit }),
    };
    let enumeration = Enumeration::new(g);
    let chunks: u64 = if total < 4096 { 1 } else { 256 };
    let step = total.div_ceil(chunks);
    let tallies: Vec<Vec<u64>> = (0..chunks)
        .into_par_iter()
        .map(|c| enumeration.run(g, c * step, ((c + 1) * step).min(total)))
        .collect();
    let mut merged: Vec<u64> = Vec::new();
    for t in tallies {
        if merged.len() < t.len() {
            merged.resize(t.len(), 0);
        }
        for (m, x) in merged.iter_mut().zip(t) {
            *m += x;
        }
    }
    Ok(GenusDistribution::new(merged.into_iter().map(BigUint::from).collect()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn k2_single_face() {
        let k2 = Multigraph::dipole(1);
        let rot = RotationSystem::identity(&k2);
        assert_eq!(trace_faces(&k2, &rot), 1);
        assert_eq!(genus(&k2, &rot), 0);
    }

    #[test]
    fn dipole_rotations() {
        let d3 = Multigraph::dipole(3);
        // vertex 0 holds darts 0,2,4; vertex 1 holds 1,3,5
        let planar = RotationSystem::new(&d3, vec![vec![0, 2, 4], vec![5, 3, 1]]).unwrap();
        assert_eq!(trace_faces(&d3, &planar), 3);
        assert_eq!(genus(&d3, &planar), 0);
        let toroidal = RotationSystem::new(&d3, vec![vec![0, 2, 4], vec![1, 3, 5]]).unwrap();
        assert_eq!(trace_faces(&d3, &toroidal), 1);
        assert_eq!(genus(&d3, &toroidal), 1);
        assert!(RotationSystem::new(&d3, vec![vec![0, 2], vec![1, 3, 5]]).is_err());
    }

    #[test]
    fn small_distributions() {
        assert_eq!(
            gd_brute_force(&Multigraph::dipole(3), DEFAULT_LIMIT).unwrap(),
            GenusDistribution::from_u64s(&[2, 2])
        );
        assert_eq!(
            gd_brute_force(&Multigraph::complete(4), DEFAULT_LIMIT).unwrap(),
            GenusDistribution::from_u64s(&[2, 14])
        );
        assert_eq!(
            gd_brute_force(&Multigraph::cycle(5), DEFAULT_LIMIT).unwrap(),
            GenusDistribution::one()
        );
        // K_{3,3} is nonplanar
        let k33 =
            Multigraph::from_edges(&[(0, 3), (0, 4), (0, 5), (1, 3), (1, 4), (1, 5), (2, 3), (2, 4), (2, 5)]).unwrap();
        let gd = gd_brute_force(&k33, DEFAULT_LIMIT).unwrap();
        assert_eq!(gd.total(), BigUint::from(64u32));
        assert_eq!(gd.min_genus(), Some(1));
    }

    #[test]
    fn chunked_enumeration_matches_single_pass() {
        let k4 = Multigraph::complete(4);
        let (g, _) = k4.subdivide(0).unwrap();
        let g = g.with_edges(&[(4, 5), (5, 1), (5, 2)]).unwrap();
        let e = Enumeration::new(&g);
        let total = rotation_census(&g).to_u64().unwrap();
        let whole = e.run(&g, 0, total);
        let mut parts = vec![0u64; whole.len()];
        for c in 0..7 {
            let step = total.div_ceil(7);
            for (i, x) in e.run(&g, c * step, ((c + 1) * step).min(total)).into_iter().enumerate() {
                parts[i] += x;
            }
        }
        assert_eq!(whole, parts);
        assert_eq!(whole.iter().sum::<u64>(), total);
    }

    #[test]
    fn limit_is_enforced() {
        let k4 = Multigraph::complete(4);
        assert!(matches!(
            gd_brute_force(&k4, 15),
            Err(OracleError::LimitExceeded { .. })
        ));
        assert!(gd_brute_force(&k4, 16).is_ok());
    }
}
