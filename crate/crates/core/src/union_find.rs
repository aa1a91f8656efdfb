/// Disjoint-set forest over `0..len` with path halving and union by size.
pub(crate) struct UnionFind {
    parent: alloc::vec::Vec<u32>,
    size: alloc::vec::Vec<u32>,
}

impl UnionFind {
    pub(crate) fn new(len: usize) -> Self {
        assert!(len <= u32::MAX as usize, "union-find capacity exceeded");
        Self {
            parent: (0..len as u32).collect(),
            size: alloc::vec![1; len],
        }
    }

    pub(crate) fn find(&mut self, mut x: u32) -> u32 {
        while self.parent[x as usize] != x {
            let grand = self.parent[self.parent[x as usize] as usize];
            self.parent[x as usize] = grand;
            x = grand;
        }
        x
    }

    pub(crate) fn union(&mut self, a: u32, b: u32) {
        let ra = self.find(a);
        let rb = self.find(b);
        if ra == rb {
            return;
        }
        let (big, small) = if self.size[ra as usize] >= self.size[rb as usize] {
            (ra, rb)
        } else {
            (rb, ra)
        };
        self.parent[small as usize] = big;
        self.size[big as usize] += self.size[small as usize];
    }
}
