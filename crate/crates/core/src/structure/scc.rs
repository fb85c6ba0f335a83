use crate::graph::SignedDigraph;

/// Where a node sits in the sink/non-sink block form of `P`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Block {
    /// Member of `X`, the union of all non-sink components.
    NonSink,
    /// Member of sink `Z_i`, indexed into [`Decomposition::sinks`].
    Sink(usize),
}

/// Condensation of a signed digraph into strongly connected components.
///
/// Components are numbered in order of their smallest node id. Sinks are
/// the components with no edge leaving them; every other node belongs to
/// the non-sink set `X`. Each node also carries a local index inside its
/// block, which is how the `P_X`, `P_Y_i` and `P_Z_i` views are addressed.
#[derive(Clone, Debug)]
pub struct Decomposition {
    scc_id: Vec<usize>,
    components: Vec<Vec<usize>>,
    sinks: Vec<usize>,
    non_sink: Vec<usize>,
    block: Vec<Block>,
    local: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockEdgeCounts {
    pub within_x: usize,
    pub x_to_sink: Vec<usize>,
    pub within_sink: Vec<usize>,
}

impl BlockEdgeCounts {
    pub fn total(&self) -> usize {
        self.within_x
            + self.x_to_sink.iter().sum::<usize>()
            + self.within_sink.iter().sum::<usize>()
    }
}

pub fn decompose(g: &SignedDigraph) -> Decomposition {
    let raw = tarjan(g);
    let n = g.node_count();

    let mut components: Vec<Vec<usize>> = raw
        .into_iter()
        .map(|mut c| {
            c.sort_unstable();
            c
        })
        .collect();
    components.sort_unstable_by_key(|c| c[0]);

    let mut scc_id = vec![0; n];
    for (c, nodes) in components.iter().enumerate() {
        for &v in nodes {
            scc_id[v] = c;
        }
    }

    let sinks: Vec<usize> = (0..components.len())
        .filter(|&c| {
            components[c]
                .iter()
                .all(|&v| g.out_edges(v).iter().all(|e| scc_id[e.target] == c))
        })
        .collect();

    let mut block = vec![Block::NonSink; n];
    let mut local = vec![0; n];
    for (i, &c) in sinks.iter().enumerate() {
        for (pos, &v) in components[c].iter().enumerate() {
            block[v] = Block::Sink(i);
            local[v] = pos;
        }
    }
    let non_sink: Vec<usize> = (0..n).filter(|&v| block[v] == Block::NonSink).collect();
    for (pos, &v) in non_sink.iter().enumerate() {
        local[v] = pos;
    }

    Decomposition {
        scc_id,
        components,
        sinks,
        non_sink,
        block,
        local,
    }
}

impl Decomposition {
    pub fn node_count(&self) -> usize {
        self.scc_id.len()
    }

    pub fn scc_id(&self, node: usize) -> usize {
        self.scc_id[node]
    }

    pub fn components(&self) -> &[Vec<usize>] {
        &self.components
    }

    pub fn component(&self, c: usize) -> &[usize] {
        &self.components[c]
    }

    /// Component ids of the sinks, ascending.
    pub fn sinks(&self) -> &[usize] {
        &self.sinks
    }

    pub fn sink_count(&self) -> usize {
        self.sinks.len()
    }

    /// Nodes of sink `Z_i`, sorted.
    pub fn sink_nodes(&self, i: usize) -> &[usize] {
        &self.components[self.sinks[i]]
    }

    pub fn is_sink_component(&self, c: usize) -> bool {
        self.sinks.binary_search(&c).is_ok()
    }

    /// The non-sink set `X`, sorted.
    pub fn non_sink(&self) -> &[usize] {
        &self.non_sink
    }

    pub fn block_of(&self, node: usize) -> Block {
        self.block[node]
    }

    /// Position of `node` inside its block (`X` or its sink).
    pub fn local_index(&self, node: usize) -> usize {
        self.local[node]
    }

    pub fn is_strongly_connected(&self) -> bool {
        self.components.len() == 1
    }

    /// Counts edges by the block of `P` they land in.
    pub fn block_edge_counts(&self, g: &SignedDigraph) -> BlockEdgeCounts {
        let m = self.sinks.len();
        let mut counts = BlockEdgeCounts {
            within_x: 0,
            x_to_sink: vec![0; m],
            within_sink: vec![0; m],
        };
        for (src, e) in g.edges() {
            match (self.block[src], self.block[e.target]) {
                (Block::NonSink, Block::NonSink) => counts.within_x += 1,
                (Block::NonSink, Block::Sink(i)) => counts.x_to_sink[i] += 1,
                (Block::Sink(i), Block::Sink(j)) if i == j => counts.within_sink[i] += 1,
                (a, b) => unreachable!("edge from {a:?} to {b:?} leaves a sink"),
            }
        }
        counts
    }
}

/// Iterative Tarjan; recursion would overflow on long paths.
fn tarjan(g: &SignedDigraph) -> Vec<Vec<usize>> {
    const UNSEEN: usize = usize::MAX;
    let n = g.node_count();
    let mut index = vec![UNSEEN; n];
    let mut low = vec![0; n];
    let mut on_stack = vec![false; n];
    let mut stack = Vec::new();
    let mut call: Vec<(usize, usize)> = Vec::new();
    let mut next_index = 0;
    let mut out = Vec::new();

    for root in 0..n {
        if index[root] != UNSEEN {
            continue;
        }
        call.push((root, 0));
        index[root] = next_index;
        low[root] = next_index;
        next_index += 1;
        stack.push(root);
        on_stack[root] = true;

        while let Some(&mut (v, ref mut pos)) = call.last_mut() {
            let edges = g.out_edges(v);
            if *pos < edges.len() {
                let w = edges[*pos].target;
                *pos += 1;
                if index[w] == UNSEEN {
                    index[w] = next_index;
                    low[w] = next_index;
                    next_index += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    call.push((w, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
                continue;
            }

            call.pop();
            if let Some(&(parent, _)) = call.last() {
                low[parent] = low[parent].min(low[v]);
            }
            if low[v] == index[v] {
                let mut comp = Vec::new();
                loop {
                    let w = stack.pop().expect("tarjan stack underflow");
                    on_stack[w] = false;
                    comp.push(w);
                    if w == v {
                        break;
                    }
                }
                out.push(comp);
            }
        }
    }
    out
}
