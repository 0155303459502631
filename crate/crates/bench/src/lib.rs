//! Benchmark inputs.

use spgenus_core::decompose::random_cubic_sp;
use spgenus_core::Multigraph;

/// `blocks` random cubic series-parallel blocks of `2 * steps + 2` vertices,
/// each with two edges subdivided, chained by bridges between consecutive
/// subdivision vertices.
pub fn bridged_chain(blocks: usize, steps: usize) -> Multigraph {
    let mut edges: Vec<(usize, usize)> = Vec::new();
    let mut offset = 0;
    let mut previous = None;
    for seed in 0..blocks as u64 {
        let block = random_cubic_sp(steps, seed);
        let (left, right) = (offset + block.vertex_count(), offset + block.vertex_count() + 1);
        for (i, &[a, b]) in block.edges().iter().enumerate() {
            let (a, b) = (a + offset, b + offset);
            match i {
                0 => edges.extend([(a, left), (left, b)]),
                1 => edges.extend([(a, right), (right, b)]),
                _ => edges.push((a, b)),
            }
        }
        if let Some(p) = previous {
            edges.push((p, left));
        }
        previous = Some(right);
        offset = right + 1;
    }
    Multigraph::from_edges(&edges).expect("chain is loopless")
}
