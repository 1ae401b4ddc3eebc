use std::fmt;

/// A rooted binary tree with labeled leaves.
///
/// Used for bracket expressions: Whitney disk subscripts `(I,J)`, grope
/// branch trees `[[T1,T2],T3]` and the rooted shorthand for labeled trees.
/// An internal node `Node(a, b)` becomes a trivalent vertex with cyclic
/// order `(a, b, up)` when the tree is turned into a diagram.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum RootedTree<L> {
    Leaf(L),
    Node(Box<RootedTree<L>>, Box<RootedTree<L>>),
}

impl<L> RootedTree<L> {
    pub fn leaf(label: L) -> Self {
        RootedTree::Leaf(label)
    }

    pub fn node(left: RootedTree<L>, right: RootedTree<L>) -> Self {
        RootedTree::Node(Box::new(left), Box::new(right))
    }

    pub fn is_leaf(&self) -> bool {
        matches!(self, RootedTree::Leaf(_))
    }

    /// Leaves in left-to-right order.
    pub fn leaves(&self) -> Vec<&L> {
        let mut out = Vec::new();
        self.collect_leaves(&mut out);
        out
    }

    fn collect_leaves<'a>(&'a self, out: &mut Vec<&'a L>) {
        match self {
            RootedTree::Leaf(l) => out.push(l),
            RootedTree::Node(a, b) => {
                a.collect_leaves(out);
                b.collect_leaves(out);
            }
        }
    }

    pub fn leaf_count(&self) -> usize {
        match self {
            RootedTree::Leaf(_) => 1,
            RootedTree::Node(a, b) => a.leaf_count() + b.leaf_count(),
        }
    }

    /// Number of internal nodes. For a Whitney disk bracket this is its order.
    pub fn internal_count(&self) -> usize {
        match self {
            RootedTree::Leaf(_) => 0,
            RootedTree::Node(a, b) => 1 + a.internal_count() + b.internal_count(),
        }
    }

    pub fn map<M, F: FnMut(&L) -> M>(&self, f: &mut F) -> RootedTree<M> {
        match self {
            RootedTree::Leaf(l) => RootedTree::Leaf(f(l)),
            RootedTree::Node(a, b) => {
                let a = a.map(f);
                let b = b.map(f);
                RootedTree::node(a, b)
            }
        }
    }

    pub fn try_map<M, E, F: FnMut(&L) -> Result<M, E>>(&self, f: &mut F) -> Result<RootedTree<M>, E> {
        Ok(match self {
            RootedTree::Leaf(l) => RootedTree::Leaf(f(l)?),
            RootedTree::Node(a, b) => {
                let a = a.try_map(f)?;
                let b = b.try_map(f)?;
                RootedTree::node(a, b)
            }
        })
    }

    /// All subtrees, children before parents.
    pub fn subtrees(&self) -> Vec<&RootedTree<L>> {
        let mut out = Vec::new();
        self.collect_subtrees(&mut out);
        out
    }

    fn collect_subtrees<'a>(&'a self, out: &mut Vec<&'a RootedTree<L>>) {
        if let RootedTree::Node(a, b) = self {
            a.collect_subtrees(out);
            b.collect_subtrees(out);
        }
        out.push(self);
    }
}

impl<L: PartialEq> RootedTree<L> {
    /// True when `x` and `y` are the two leaf children of one node.
    pub fn are_siblings(&self, x: &L, y: &L) -> bool {
        match self {
            RootedTree::Leaf(_) => false,
            RootedTree::Node(a, b) => {
                if let (RootedTree::Leaf(p), RootedTree::Leaf(q)) = (a.as_ref(), b.as_ref()) {
                    if (p == x && q == y) || (p == y && q == x) {
                        return true;
                    }
                }
                a.are_siblings(x, y) || b.are_siblings(x, y)
            }
        }
    }

    pub fn contains_leaf(&self, x: &L) -> bool {
        match self {
            RootedTree::Leaf(l) => l == x,
            RootedTree::Node(a, b) => a.contains_leaf(x) || b.contains_leaf(x),
        }
    }
}

impl<L: fmt::Display> RootedTree<L> {
    /// Render with the given delimiters, e.g. `[[1,2],3]` or `((1,2),3)`.
    pub fn render(&self, open: char, close: char) -> String {
        let mut s = String::new();
        self.render_into(&mut s, open, close);
        s
    }

    fn render_into(&self, s: &mut String, open: char, close: char) {
        match self {
            RootedTree::Leaf(l) => s.push_str(&l.to_string()),
            RootedTree::Node(a, b) => {
                s.push(open);
                a.render_into(s, open, close);
                s.push(',');
                b.render_into(s, open, close);
                s.push(close);
            }
        }
    }
}

impl<L: fmt::Display> fmt::Display for RootedTree<L> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render('[', ']'))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t() -> RootedTree<u32> {
        RootedTree::node(RootedTree::node(RootedTree::leaf(1), RootedTree::leaf(2)), RootedTree::leaf(3))
    }

    #[test]
    fn counts() {
        assert_eq!(t().leaf_count(), 3);
        assert_eq!(t().internal_count(), 2);
        assert_eq!(t().leaves(), vec![&1, &2, &3]);
        assert_eq!(t().subtrees().len(), 5);
    }

    #[test]
    fn siblings() {
        assert!(t().are_siblings(&2, &1));
        assert!(!t().are_siblings(&2, &3));
    }

    #[test]
    fn render() {
        assert_eq!(t().to_string(), "[[1,2],3]");
        assert_eq!(t().render('(', ')'), "((1,2),3)");
    }
}
