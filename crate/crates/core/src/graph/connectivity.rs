use super::{EdgeId, Multigraph};

/// Number of connected components, isolated vertices included.
pub fn component_count(g: &Multigraph) -> usize {
    let mut uf = UnionFind::new(g.vertex_count());
    for e in g.edges() {
        uf.union(e.u, e.v);
    }
    uf.count()
}

pub fn is_connected(g: &Multigraph) -> bool {
    g.vertex_count() > 0 && component_count(g) == 1
}

/// Connected, at least two vertices, no cut vertex. K2 and the doubled edge
/// both qualify; a single vertex never does.
pub fn is_two_connected(g: &Multigraph) -> bool {
    g.vertex_count() >= 2 && is_connected(g) && articulation_points(g).is_empty()
}

/// Cut vertices, sorted.
pub fn articulation_points(g: &Multigraph) -> Vec<usize> {
    let mut cuts: Vec<usize> = BlockSearch::run(g).cut.iter().enumerate().filter(|(_, &c)| c).map(|(v, _)| v).collect();
    cuts.sort_unstable();
    cuts
}

/// Block decomposition. Bridges come out as K2 blocks, every non-loop edge
/// lies in exactly one block and isolated vertices are dropped. Blocks are
/// ordered by their smallest edge position in `g`.
pub fn blocks(g: &Multigraph) -> Vec<Multigraph> {
    let mut groups = BlockSearch::run(g).blocks;
    let position = |id: EdgeId| g.edges().iter().position(|e| e.id == id).unwrap();
    for b in &mut groups {
        b.sort_by_key(|&id| position(id));
    }
    groups.sort_by_key(|b| position(b[0]));
    groups.iter().map(|ids| g.edge_subgraph(ids)).collect()
}

struct BlockSearch {
    disc: Vec<usize>,
    low: Vec<usize>,
    cut: Vec<bool>,
    timer: usize,
    stack: Vec<EdgeId>,
    blocks: Vec<Vec<EdgeId>>,
}

impl BlockSearch {
    fn run(g: &Multigraph) -> BlockSearch {
        let n = g.vertex_count();
        let mut incident: Vec<Vec<(usize, EdgeId)>> = vec![Vec::new(); n];
        for e in g.edges() {
            if !e.is_loop() {
                incident[e.u].push((e.v, e.id));
                incident[e.v].push((e.u, e.id));
            }
        }
        let mut s = BlockSearch {
            disc: vec![usize::MAX; n],
            low: vec![0; n],
            cut: vec![false; n],
            timer: 0,
            stack: Vec::new(),
            blocks: Vec::new(),
        };
        for root in 0..n {
            if s.disc[root] == usize::MAX {
                let children = s.dfs(&incident, root, None);
                s.cut[root] = children > 1;
            }
        }
        s
    }

    // Returns the number of DFS children of `v`.
    fn dfs(&mut self, incident: &[Vec<(usize, EdgeId)>], v: usize, parent_edge: Option<EdgeId>) -> usize {
        self.disc[v] = self.timer;
        self.low[v] = self.timer;
        self.timer += 1;
        let mut children = 0;
        for &(w, id) in &incident[v] {
            if Some(id) == parent_edge {
                continue;
            }
            if self.disc[w] == usize::MAX {
                children += 1;
                self.stack.push(id);
                self.dfs(incident, w, Some(id));
                self.low[v] = self.low[v].min(self.low[w]);
                if self.low[w] >= self.disc[v] {
                    if parent_edge.is_some() {
                        self.cut[v] = true;
                    }
                    let mut block = Vec::new();
                    while let Some(top) = self.stack.pop() {
                        block.push(top);
                        if top == id {
                            break;
                        }
                    }
                    self.blocks.push(block);
                }
            } else if self.disc[w] < self.disc[v] {
                self.stack.push(id);
                self.low[v] = self.low[v].min(self.disc[w]);
            }
        }
        children
    }
}

#[derive(Clone)]
pub(crate) struct UnionFind {
    parent: Vec<usize>,
    components: usize,
}

impl UnionFind {
    pub(crate) fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect(), components: n }
    }

    pub(crate) fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Returns false when `a` and `b` were already joined.
    pub(crate) fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        self.parent[ra] = rb;
        self.components -= 1;
        true
    }

    pub(crate) fn count(&self) -> usize {
        self.components
    }
}
