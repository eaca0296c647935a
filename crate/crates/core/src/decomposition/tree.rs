use crate::error::{Error, Result};

/// Derived structure of a rooted tree given as a parent array.
#[derive(Debug, Clone)]
pub struct Shape {
    pub root: usize,
    pub parent: Vec<Option<usize>>,
    pub children: Vec<Vec<usize>>,
    pub depth: Vec<usize>,
    /// Maximum distance to a descendant; leaves have height 0.
    pub height: Vec<usize>,
    /// Preorder, children in increasing id order.
    pub preorder: Vec<usize>,
    tin: Vec<usize>,
    tout: Vec<usize>,
}

impl Shape {
    pub fn new(parent: &[Option<usize>]) -> Result<Self> {
        let n = parent.len();
        if n == 0 {
            return Err(Error::InvalidDecomposition("the tree has no nodes".into()));
        }
        let roots: Vec<usize> = (0..n).filter(|&t| parent[t].is_none()).collect();
        let [root] = roots[..] else {
            return Err(Error::InvalidDecomposition(format!("expected one root, found {}", roots.len())));
        };
        let mut children = vec![Vec::new(); n];
        for (t, p) in parent.iter().enumerate() {
            if let Some(p) = *p {
                if p >= n {
                    return Err(Error::InvalidDecomposition(format!("node {t} has unknown parent {p}")));
                }
                children[p].push(t);
            }
        }
        let mut depth = vec![0; n];
        let mut preorder = Vec::with_capacity(n);
        let mut tin = vec![0; n];
        let mut tout = vec![0; n];
        let mut stack = vec![(root, false)];
        let mut clock = 0;
        while let Some((t, done)) = stack.pop() {
            if done {
                tout[t] = clock;
                continue;
            }
            tin[t] = clock;
            clock += 1;
            preorder.push(t);
            stack.push((t, true));
            for &c in children[t].iter().rev() {
                depth[c] = depth[t] + 1;
                stack.push((c, false));
            }
        }
        if preorder.len() != n {
            return Err(Error::InvalidDecomposition("parent array contains a cycle".into()));
        }
        let mut height = vec![0; n];
        for &t in preorder.iter().rev() {
            if let Some(p) = parent[t] {
                height[p] = height[p].max(height[t] + 1);
            }
        }
        Ok(Shape {
            root,
            parent: parent.to_vec(),
            children,
            depth,
            height,
            preorder,
            tin,
            tout,
        })
    }

    pub fn len(&self) -> usize {
        self.parent.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parent.is_empty()
    }

    /// Whether `b` lies in the subtree of `a` (including `a`).
    pub fn in_subtree(&self, a: usize, b: usize) -> bool {
        self.tin[a] <= self.tin[b] && self.tout[b] <= self.tout[a]
    }

    pub fn subtree(&self, t: usize) -> Vec<usize> {
        self.preorder.iter().copied().filter(|&b| self.in_subtree(t, b)).collect()
    }

    pub fn lca(&self, mut a: usize, mut b: usize) -> usize {
        while !self.in_subtree(a, b) {
            a = self.parent[a].expect("root is an ancestor of everything");
        }
        while self.depth[b] > self.depth[a] {
            b = self.parent[b].expect("non-root");
        }
        a
    }

    /// Tree path from `a` to `b`, endpoints included.
    pub fn path(&self, a: usize, b: usize) -> Vec<usize> {
        let l = self.lca(a, b);
        let mut up = Vec::new();
        let mut x = a;
        while x != l {
            up.push(x);
            x = self.parent[x].unwrap();
        }
        up.push(l);
        let mut down = Vec::new();
        let mut y = b;
        while y != l {
            down.push(y);
            y = self.parent[y].unwrap();
        }
        up.extend(down.into_iter().rev());
        up
    }

    pub fn adjacent(&self, a: usize, b: usize) -> bool {
        self.parent[a] == Some(b) || self.parent[b] == Some(a)
    }

    pub fn siblings(&self, t: usize) -> Vec<usize> {
        match self.parent[t] {
            None => Vec::new(),
            Some(p) => self.children[p].iter().copied().filter(|&c| c != t).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shape_of_small_tree() {
        //     0
        //    / \
        //   1   2
        //   |
        //   3
        let s = Shape::new(&[None, Some(0), Some(0), Some(1)]).unwrap();
        assert_eq!(s.root, 0);
        assert_eq!(s.height, vec![2, 1, 0, 0]);
        assert_eq!(s.depth, vec![0, 1, 1, 2]);
        assert_eq!(s.path(3, 2), vec![3, 1, 0, 2]);
        assert_eq!(s.lca(3, 1), 1);
        assert!(s.in_subtree(1, 3) && !s.in_subtree(2, 3));
        assert_eq!(s.subtree(1), vec![1, 3]);
    }

    #[test]
    fn bad_parent_arrays() {
        assert!(Shape::new(&[]).is_err());
        assert!(Shape::new(&[None, None]).is_err());
        assert!(Shape::new(&[None, Some(2), Some(1)]).is_err());
        assert!(Shape::new(&[None, Some(7)]).is_err());
    }
}
