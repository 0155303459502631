#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use spgenus_core::decompose::{merge_strands, random_cubic_sp};
use spgenus_core::{DmtExpression, Multigraph, VertexId};

pub fn d_hat_2() -> DmtExpression {
    DmtExpression::d_hat_2()
}

/// The three strings of the 18-vertex worked example.
pub fn example_strands() -> [DmtExpression; 3] {
    let n1 = DmtExpression::series(vec![d_hat_2(), d_hat_2()]);
    let n2 = DmtExpression::series(vec![d_hat_2(), DmtExpression::parallel(d_hat_2(), DmtExpression::K2)]);
    let n3 = DmtExpression::parallel(d_hat_2(), d_hat_2());
    [n1, n2, n3]
}

/// The worked example graph; its terminals are vertices 0 and 1.
pub fn example_graph() -> Multigraph {
    let strings: Vec<_> = example_strands().iter().map(DmtExpression::realize).collect();
    merge_strands(&strings)
}

pub const EXAMPLE_GD: [u64; 5] = [512, 10752, 68608, 129024, 53248];

/// Two dipoles, each with one edge subdivided, bridged at the subdivision
/// vertices.
pub fn bridged_dipoles() -> Multigraph {
    Multigraph::from_edges(&[(0, 1), (0, 1), (0, 2), (2, 1), (3, 4), (3, 4), (3, 5), (5, 4), (2, 5)]).unwrap()
}

pub fn trivalent_count(g: &Multigraph) -> usize {
    (0..g.vertex_count()).filter(|&v| g.degree(v) == 3).count()
}

struct Builder {
    vertex_count: usize,
    edges: Vec<[VertexId; 2]>,
}

impl Builder {
    fn degree(&self, v: VertexId) -> usize {
        self.edges.iter().filter(|e| e.contains(&v)).count()
    }

    fn subdivide(&mut self, e: usize) -> VertexId {
        let [a, b] = self.edges[e];
        let m = self.vertex_count;
        self.vertex_count += 1;
        self.edges[e] = [a, m];
        self.edges.push([m, b]);
        m
    }

    /// Adds a piece and returns its vertex range.
    fn add_piece(&mut self, rng: &mut ChaCha8Rng) -> std::ops::Range<VertexId> {
        let start = self.vertex_count;
        match rng.gen_range(0..4) {
            0 => self.vertex_count += 1,
            1 => {
                let len = rng.gen_range(2..5);
                for i in 0..len {
                    self.edges.push([start + i, start + (i + 1) % len]);
                }
                self.vertex_count += len;
            }
            _ => {
                let g = random_cubic_sp(rng.gen_range(0..3), rng.gen());
                self.edges.extend(g.edges().iter().map(|e| e.map(|v| v + start)));
                self.vertex_count += g.vertex_count();
            }
        }
        start..self.vertex_count
    }

    /// A vertex of degree at most 2 among `range`, or a fresh one made by
    /// subdividing an edge of the piece.
    fn attachment(&mut self, range: std::ops::Range<VertexId>, rng: &mut ChaCha8Rng) -> VertexId {
        let free: Vec<VertexId> = range.clone().filter(|&v| self.degree(v) <= 2).collect();
        if !free.is_empty() && rng.gen_bool(0.5) {
            return free[rng.gen_range(0..free.len())];
        }
        let mut inside: Vec<usize> = (0..self.edges.len())
            .filter(|&e| self.edges[e].iter().all(|v| range.contains(v)))
            .collect();
        if inside.is_empty() {
            if !free.is_empty() {
                return free[rng.gen_range(0..free.len())];
            }
            // a saturated lone vertex: split one of its bridges
            inside = (0..self.edges.len())
                .filter(|&e| self.edges[e].iter().any(|v| range.contains(v)))
                .collect();
        }
        self.subdivide(inside[rng.gen_range(0..inside.len())])
    }
}

/// A random connected graph of treewidth at most 2 and maximum degree at
/// most 3: small series-parallel blocks joined by bridges, with extra
/// subdivisions. At most `max_trivalent` vertices have degree 3.
pub fn random_tw2_graph(seed: u64, max_trivalent: usize) -> Multigraph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let mut b = Builder {
            vertex_count: 0,
            edges: Vec::new(),
        };
        let mut ranges = vec![b.add_piece(&mut rng)];
        for _ in 0..rng.gen_range(1..5) {
            let host = ranges[rng.gen_range(0..ranges.len())].clone();
            let u = b.attachment(host, &mut rng);
            let piece = b.add_piece(&mut rng);
            let v = b.attachment(piece.start..b.vertex_count, &mut rng);
            b.edges.push([u, v]);
            ranges.push(piece.start..b.vertex_count);
        }
        for _ in 0..rng.gen_range(0..4) {
            let e = rng.gen_range(0..b.edges.len());
            b.subdivide(e);
        }
        let g = Multigraph::new(b.vertex_count, b.edges).unwrap();
        if g.edge_count() > 0 && trivalent_count(&g) <= max_trivalent {
            assert!(g.is_connected() && g.max_degree() <= 3);
            return g;
        }
    }
}
