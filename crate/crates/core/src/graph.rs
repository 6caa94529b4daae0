//! Strongly connected components of explicit graphs.

/// Strongly connected components, in reverse topological order: every edge
/// leaving component `k` goes to a component with a smaller index.
#[derive(Clone, Debug)]
pub struct Sccs {
    /// Component index of every node.
    pub comp: Vec<usize>,
    /// Members of each component, ascending.
    pub members: Vec<Vec<usize>>,
}

impl Sccs {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
}

/// Iterative Tarjan over `succ`. Nodes outside `active` (when given) are
/// ignored, as are edges to them.
pub fn sccs(succ: &[Vec<usize>], active: Option<&[bool]>) -> Sccs {
    let n = succ.len();
    let is_active = |v: usize| active.map_or(true, |a| a[v]);
    const UNSEEN: usize = usize::MAX;
    let mut index = vec![UNSEEN; n];
    let mut low = vec![0usize; n];
    let mut on_stack = vec![false; n];
    let mut stack: Vec<usize> = Vec::new();
    let mut comp = vec![UNSEEN; n];
    let mut members: Vec<Vec<usize>> = Vec::new();
    let mut counter = 0usize;
    // (node, next successor position)
    let mut work: Vec<(usize, usize)> = Vec::new();

    for root in 0..n {
        if index[root] != UNSEEN || !is_active(root) {
            continue;
        }
        work.push((root, 0));
        index[root] = counter;
        low[root] = counter;
        counter += 1;
        stack.push(root);
        on_stack[root] = true;
        while let Some(&mut (v, ref mut pos)) = work.last_mut() {
            if *pos < succ[v].len() {
                let w = succ[v][*pos];
                *pos += 1;
                if !is_active(w) {
                    continue;
                }
                if index[w] == UNSEEN {
                    index[w] = counter;
                    low[w] = counter;
                    counter += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    work.push((w, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
                continue;
            }
            work.pop();
            if let Some(&(parent, _)) = work.last() {
                low[parent] = low[parent].min(low[v]);
            }
            if low[v] == index[v] {
                let k = members.len();
                let mut m = Vec::new();
                loop {
                    let w = stack.pop().expect("tarjan stack underflow");
                    on_stack[w] = false;
                    comp[w] = k;
                    m.push(w);
                    if w == v {
                        break;
                    }
                }
                m.sort_unstable();
                members.push(m);
            }
        }
    }
    Sccs { comp, members }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn components_in_reverse_topological_order() {
        // 0 -> 1 <-> 2 -> 3, 3 -> 3
        let succ = vec![vec![1], vec![2], vec![1, 3], vec![3]];
        let s = sccs(&succ, None);
        assert_eq!(s.len(), 3);
        assert_eq!(s.members[0], vec![3]);
        assert_eq!(s.members[1], vec![1, 2]);
        assert_eq!(s.members[2], vec![0]);
        for (v, ws) in succ.iter().enumerate() {
            for &w in ws {
                assert!(s.comp[w] <= s.comp[v]);
            }
        }
    }

    #[test]
    fn inactive_nodes_are_skipped() {
        let succ = vec![vec![1], vec![0]];
        let s = sccs(&succ, Some(&[true, false]));
        assert_eq!(s.members, vec![vec![0]]);
        assert_eq!(s.comp[1], usize::MAX);
    }
}
