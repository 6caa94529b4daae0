use super::{Formula, SignalPartition};

/// One conjunct group of a decomposed specification.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubSpecification {
    pub formula: Formula,
    /// Outputs this component is responsible for (subset of `O`, in
    /// partition order).
    pub outputs: Vec<String>,
    pub inputs: Vec<String>,
}

/// Splits the top-level conjunction of `f` into groups with pairwise
/// disjoint output variables.
///
/// Conjuncts are grouped by connected components of the "shares an output"
/// relation. Conjuncts mentioning no output join the first component, and
/// outputs not mentioned anywhere are assigned to the first component so that
/// the components' output sets cover `O`.
pub fn decompose(f: &Formula, p: &SignalPartition) -> Vec<SubSpecification> {
    let conjuncts = f.conjuncts();
    let outs: Vec<Vec<String>> = conjuncts
        .iter()
        .map(|c| c.atoms().into_iter().filter(|a| p.is_output(a)).collect())
        .collect();

    // union-find over conjunct indices
    let mut parent: Vec<usize> = (0..conjuncts.len()).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for o in &p.outputs {
        let mut first: Option<usize> = None;
        for (k, os) in outs.iter().enumerate() {
            if os.contains(o) {
                match first {
                    None => first = Some(k),
                    Some(j) => {
                        let (a, b) = (find(&mut parent, j), find(&mut parent, k));
                        if a != b {
                            parent[a.max(b)] = a.min(b);
                        }
                    }
                }
            }
        }
    }

    // components in order of their first conjunct
    let mut order: Vec<usize> = Vec::new();
    let mut members: Vec<Vec<usize>> = Vec::new();
    let mut input_only: Vec<usize> = Vec::new();
    for k in 0..conjuncts.len() {
        if outs[k].is_empty() {
            input_only.push(k);
            continue;
        }
        let root = find(&mut parent, k);
        match order.iter().position(|&r| r == root) {
            Some(i) => members[i].push(k),
            None => {
                order.push(root);
                members.push(vec![k]);
            }
        }
    }
    if members.is_empty() {
        members.push(Vec::new());
    }
    members[0].extend(input_only);
    members[0].sort_unstable();

    let mut out: Vec<SubSpecification> = members
        .iter()
        .map(|ks| {
            let formula = Formula::and_all(ks.iter().map(|&k| conjuncts[k].clone()));
            let used: Vec<String> = p
                .outputs
                .iter()
                .filter(|o| ks.iter().any(|&k| outs[k].contains(o)))
                .cloned()
                .collect();
            SubSpecification { formula, outputs: used, inputs: p.inputs.clone() }
        })
        .collect();

    let unused: Vec<String> = p
        .outputs
        .iter()
        .filter(|o| !outs.iter().any(|os| os.contains(o)))
        .cloned()
        .collect();
    if !unused.is_empty() {
        let first = &mut out[0];
        first.outputs.extend(unused);
        first.outputs.sort_by_key(|o| p.outputs.iter().position(|x| x == o));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ltl::parse_ltl;
    use std::collections::{BTreeSet, HashMap};

    fn part(i: &[&str], o: &[&str]) -> SignalPartition {
        SignalPartition::new(i, o).unwrap()
    }

    #[test]
    fn disjoint_outputs_split() {
        let f = parse_ltl("G(i1 <-> o1) & G F o2").unwrap();
        let d = decompose(&f, &part(&["i1"], &["o1", "o2"]));
        assert_eq!(d.len(), 2);
        assert_eq!(d[0].formula, parse_ltl("G(i1 <-> o1)").unwrap());
        assert_eq!(d[0].outputs, vec!["o1"]);
        assert_eq!(d[1].formula, parse_ltl("G F o2").unwrap());
        assert_eq!(d[1].outputs, vec!["o2"]);
    }

    #[test]
    fn single_conjunct_is_singleton() {
        let f = parse_ltl("G(o1 & o2)").unwrap();
        let d = decompose(&f, &part(&[], &["o1", "o2"]));
        assert_eq!(d.len(), 1);
        assert_eq!(d[0].outputs, vec!["o1", "o2"]);
    }

    #[test]
    fn shared_output_groups_conjuncts() {
        let f = parse_ltl("(G o1) & (F o1) & (G o2)").unwrap();
        let d = decompose(&f, &part(&[], &["o1", "o2"]));
        assert_eq!(d.len(), 2);
        assert_eq!(d[0].formula, parse_ltl("G o1 & F o1").unwrap());
        assert_eq!(d[1].formula, parse_ltl("G o2").unwrap());
    }

    #[test]
    fn input_only_conjuncts_join_first_component() {
        let f = parse_ltl("G o1 & G F i & G o2").unwrap();
        let d = decompose(&f, &part(&["i"], &["o1", "o2"]));
        assert_eq!(d.len(), 2);
        assert_eq!(d[0].formula, parse_ltl("G o1 & G F i").unwrap());
    }

    #[test]
    fn unused_outputs_are_covered() {
        let f = parse_ltl("G(i -> o1)").unwrap();
        let d = decompose(&f, &part(&["i"], &["o1", "o2"]));
        assert_eq!(d.len(), 1);
        assert_eq!(d[0].outputs, vec!["o1", "o2"]);
    }

    #[test]
    fn conjunct_multiset_and_disjointness_are_preserved() {
        let specs = [
            "G(i -> X o1) & G(o2 -> F i) & F o3 & G(o1 | o3) & G F i",
            "o1 & o2 & o3",
            "G(o1 <-> o2) & G(o2 <-> o3)",
        ];
        let p = part(&["i"], &["o1", "o2", "o3"]);
        for s in specs {
            let f = parse_ltl(s).unwrap();
            let d = decompose(&f, &p);
            let mut before: HashMap<String, usize> = HashMap::new();
            for c in f.conjuncts() {
                *before.entry(c.to_string()).or_default() += 1;
            }
            let mut after: HashMap<String, usize> = HashMap::new();
            for sub in &d {
                for c in sub.formula.conjuncts() {
                    *after.entry(c.to_string()).or_default() += 1;
                }
            }
            assert_eq!(before, after, "{s}");
            let mut seen = BTreeSet::new();
            for sub in &d {
                for o in &sub.outputs {
                    assert!(seen.insert(o.clone()), "output {o} assigned twice in {s}");
                }
            }
            assert_eq!(seen.len(), 3);
        }
    }
}
