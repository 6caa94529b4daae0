//! Boolean edge labels over a proposition alphabet, stored as reduced ordered
//! cube sets.
//!
//! A [`Label`] is always kept in canonical form: the set of one-paths of the
//! reduced ordered decision diagram of the function under the variable order
//! `0 < 1 < ... < 63`. Two labels are equal as values iff they denote the same
//! Boolean function, so labels can be hashed and compared structurally.

use std::fmt;

/// Maximum number of propositions a label may mention.
pub const MAX_VARS: usize = 64;

/// A conjunction of literals: variables in `pos` must be true, variables in
/// `neg` must be false. `pos & neg` is always empty.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Cube {
    pos: u64,
    neg: u64,
}

impl Cube {
    pub const TRUE: Cube = Cube { pos: 0, neg: 0 };

    pub fn new(pos: u64, neg: u64) -> Option<Cube> {
        (pos & neg == 0).then_some(Cube { pos, neg })
    }

    pub fn literal(var: usize, positive: bool) -> Cube {
        assert!(var < MAX_VARS, "variable index {var} out of range");
        if positive {
            Cube { pos: 1 << var, neg: 0 }
        } else {
            Cube { pos: 0, neg: 1 << var }
        }
    }

    /// The minterm cube fixing every variable of `mask` to its value in `bits`.
    pub fn minterm(mask: u64, bits: u64) -> Cube {
        Cube { pos: bits & mask, neg: !bits & mask }
    }

    pub fn pos(self) -> u64 {
        self.pos
    }

    pub fn neg(self) -> u64 {
        self.neg
    }

    pub fn support(self) -> u64 {
        self.pos | self.neg
    }

    pub fn is_true(self) -> bool {
        self.pos == 0 && self.neg == 0
    }

    pub fn and(self, other: Cube) -> Option<Cube> {
        Cube::new(self.pos | other.pos, self.neg | other.neg)
    }

    pub fn eval(self, assignment: u64) -> bool {
        assignment & self.pos == self.pos && assignment & self.neg == 0
    }

    /// Drops the literals on the variables of `mask`.
    pub fn forget(self, mask: u64) -> Cube {
        Cube { pos: self.pos & !mask, neg: self.neg & !mask }
    }

    pub fn literals(self) -> impl Iterator<Item = (usize, bool)> {
        let support = self.support();
        (0..MAX_VARS)
            .filter(move |v| support >> v & 1 == 1)
            .map(move |v| (v, self.pos >> v & 1 == 1))
    }
}

impl fmt::Debug for Cube {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_true() {
            return write!(f, "t");
        }
        let mut first = true;
        for (v, positive) in self.literals() {
            if !first {
                write!(f, "&")?;
            }
            first = false;
            if !positive {
                write!(f, "!")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

/// A Boolean function over at most [`MAX_VARS`] propositions.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Label {
    cubes: Vec<Cube>,
}

impl Label {
    pub fn tt() -> Label {
        Label { cubes: vec![Cube::TRUE] }
    }

    pub fn ff() -> Label {
        Label { cubes: Vec::new() }
    }

    pub fn literal(var: usize, positive: bool) -> Label {
        Label { cubes: vec![Cube::literal(var, positive)] }
    }

    pub fn from_cube(cube: Cube) -> Label {
        Label { cubes: vec![cube] }
    }

    pub fn from_cubes(cubes: impl IntoIterator<Item = Cube>) -> Label {
        let mut cubes: Vec<Cube> = cubes.into_iter().collect();
        normalize_cubes(&mut cubes);
        Label { cubes: canonical(&cubes) }
    }

    /// Minterm over `mask` with the values given by `bits`.
    pub fn minterm(mask: u64, bits: u64) -> Label {
        Label::from_cube(Cube::minterm(mask, bits))
    }

    /// The canonical cube cover. Cubes are pairwise disjoint.
    pub fn cubes(&self) -> &[Cube] {
        &self.cubes
    }

    pub fn is_false(&self) -> bool {
        self.cubes.is_empty()
    }

    pub fn is_sat(&self) -> bool {
        !self.cubes.is_empty()
    }

    pub fn is_true(&self) -> bool {
        self.cubes.len() == 1 && self.cubes[0].is_true()
    }

    pub fn support(&self) -> u64 {
        self.cubes.iter().fold(0, |acc, c| acc | c.support())
    }

    pub fn eval(&self, assignment: u64) -> bool {
        self.cubes.iter().any(|c| c.eval(assignment))
    }

    pub fn and(&self, other: &Label) -> Label {
        if self.is_true() {
            return other.clone();
        }
        if other.is_true() {
            return self.clone();
        }
        let mut cubes = Vec::with_capacity(self.cubes.len() * other.cubes.len());
        for a in &self.cubes {
            for b in &other.cubes {
                if let Some(c) = a.and(*b) {
                    cubes.push(c);
                }
            }
        }
        Label::from_cubes(cubes)
    }

    pub fn or(&self, other: &Label) -> Label {
        if self.is_false() {
            return other.clone();
        }
        if other.is_false() {
            return self.clone();
        }
        Label::from_cubes(self.cubes.iter().chain(other.cubes.iter()).copied())
    }

    pub fn not(&self) -> Label {
        Label { cubes: negate(&self.cubes) }
    }

    pub fn and_not(&self, other: &Label) -> Label {
        self.and(&other.not())
    }

    pub fn intersects(&self, other: &Label) -> bool {
        self.cubes
            .iter()
            .any(|a| other.cubes.iter().any(|b| a.and(*b).is_some()))
    }

    /// `self → other` is valid.
    pub fn implies(&self, other: &Label) -> bool {
        self.and_not(other).is_false()
    }

    /// Existential projection of the variables in `mask`.
    pub fn exists(&self, mask: u64) -> Label {
        Label::from_cubes(self.cubes.iter().map(|c| c.forget(mask)))
    }

    /// Restriction to the sub-alphabet `keep`: every other variable is
    /// projected out.
    pub fn restrict_to(&self, keep: u64) -> Label {
        self.exists(!keep)
    }

    /// Cofactor by a partial assignment given as a cube.
    pub fn cofactor(&self, cube: Cube) -> Label {
        let fixed = cube.support();
        Label::from_cubes(
            self.cubes
                .iter()
                .filter(|c| c.and(cube).is_some())
                .map(|c| c.forget(fixed)),
        )
    }

    /// All assignments of the variables in `mask` (as bit patterns) that
    /// satisfy the label. Variables outside `mask` must not occur.
    pub fn minterms(&self, mask: u64) -> Vec<u64> {
        debug_assert_eq!(self.support() & !mask, 0);
        let vars: Vec<usize> = (0..MAX_VARS).filter(|v| mask >> v & 1 == 1).collect();
        assert!(vars.len() <= 24, "too many variables to enumerate minterms");
        let mut out = Vec::new();
        for k in 0u64..(1u64 << vars.len()) {
            let bits = spread(k, &vars);
            if self.eval(bits) {
                out.push(bits);
            }
        }
        out
    }

    /// Renders the label with proposition names, e.g. `a & !b | c`.
    pub fn display_with<'a>(&'a self, names: &'a [String]) -> impl fmt::Display + 'a {
        NamedLabel { label: self, names }
    }
}

/// Atoms of the Boolean algebra generated by `labels`: pairwise disjoint
/// satisfiable labels whose union is true, each inside or outside every
/// given label.
pub fn refine(labels: &[Label]) -> Vec<Label> {
    let mut blocks = vec![Label::tt()];
    for l in labels {
        if l.is_true() || l.is_false() {
            continue;
        }
        let mut next = Vec::with_capacity(blocks.len() * 2);
        for b in &blocks {
            let inside = b.and(l);
            let outside = b.and_not(l);
            if inside.is_sat() {
                next.push(inside);
            }
            if outside.is_sat() {
                next.push(outside);
            }
        }
        blocks = next;
    }
    blocks
}

/// Maps the bits of `k` onto the positions listed in `vars`.
pub fn spread(k: u64, vars: &[usize]) -> u64 {
    vars.iter()
        .enumerate()
        .fold(0, |acc, (i, &v)| acc | ((k >> i & 1) << v))
}

/// Iterates the variable indices set in `mask`.
pub fn mask_vars(mask: u64) -> impl Iterator<Item = usize> {
    (0..MAX_VARS).filter(move |v| mask >> v & 1 == 1)
}

impl fmt::Debug for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.cubes.is_empty() {
            return write!(f, "f");
        }
        for (i, c) in self.cubes.iter().enumerate() {
            if i > 0 {
                write!(f, " | ")?;
            }
            write!(f, "{c:?}")?;
        }
        Ok(())
    }
}

struct NamedLabel<'a> {
    label: &'a Label,
    names: &'a [String],
}

impl fmt::Display for NamedLabel<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.label.is_false() {
            return write!(f, "false");
        }
        if self.label.is_true() {
            return write!(f, "true");
        }
        for (i, c) in self.label.cubes.iter().enumerate() {
            if i > 0 {
                write!(f, " | ")?;
            }
            for (j, (v, positive)) in c.literals().enumerate() {
                if j > 0 {
                    write!(f, " & ")?;
                }
                if !positive {
                    write!(f, "!")?;
                }
                match self.names.get(v) {
                    Some(n) => write!(f, "{n}")?,
                    None => write!(f, "p{v}")?,
                }
            }
        }
        Ok(())
    }
}

fn normalize_cubes(cubes: &mut Vec<Cube>) {
    cubes.sort_unstable();
    cubes.dedup();
}

fn cofactor_var(cubes: &[Cube], var: usize, value: bool) -> Vec<Cube> {
    let bit = 1u64 << var;
    let mut out: Vec<Cube> = cubes
        .iter()
        .filter(|c| if value { c.neg & bit == 0 } else { c.pos & bit == 0 })
        .map(|c| c.forget(bit))
        .collect();
    normalize_cubes(&mut out);
    out
}

fn with_literal(cubes: Vec<Cube>, var: usize, value: bool) -> impl Iterator<Item = Cube> {
    let lit = Cube::literal(var, value);
    cubes.into_iter().map(move |c| c.and(lit).expect("variable already eliminated"))
}

/// Shannon expansion on the lowest support variable, skipping variables the
/// function does not depend on.
fn canonical(cubes: &[Cube]) -> Vec<Cube> {
    if cubes.is_empty() {
        return Vec::new();
    }
    if cubes.iter().any(|c| c.is_true()) {
        return vec![Cube::TRUE];
    }
    if cubes.len() == 1 {
        return cubes.to_vec();
    }
    let support = cubes.iter().fold(0u64, |acc, c| acc | c.support());
    let var = support.trailing_zeros() as usize;
    let lo = canonical(&cofactor_var(cubes, var, false));
    let hi = canonical(&cofactor_var(cubes, var, true));
    if lo == hi {
        return lo;
    }
    merge_branches(lo, hi, var)
}

fn merge_branches(lo: Vec<Cube>, hi: Vec<Cube>, var: usize) -> Vec<Cube> {
    let mut out: Vec<Cube> = with_literal(lo, var, false).chain(with_literal(hi, var, true)).collect();
    out.sort_unstable();
    out
}

fn negate(cubes: &[Cube]) -> Vec<Cube> {
    if cubes.is_empty() {
        return vec![Cube::TRUE];
    }
    if cubes.iter().any(|c| c.is_true()) {
        return Vec::new();
    }
    let support = cubes.iter().fold(0u64, |acc, c| acc | c.support());
    let var = support.trailing_zeros() as usize;
    let lo = negate(&canonical(&cofactor_var(cubes, var, false)));
    let hi = negate(&canonical(&cofactor_var(cubes, var, true)));
    if lo == hi {
        return lo;
    }
    merge_branches(lo, hi, var)
}
