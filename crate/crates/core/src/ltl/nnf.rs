use super::{Formula, Kind};

/// Rewrites `f` into negation normal form: negations only on atoms, and
/// `xor`, `<->`, `->` expanded into `&`/`|`. Constants are folded.
pub fn to_nnf(f: &Formula) -> Formula {
    nnf(f, false)
}

fn nnf(f: &Formula, negated: bool) -> Formula {
    use Kind::*;
    match f.kind() {
        True => Formula::constant(!negated),
        False => Formula::constant(negated),
        Ap => {
            if negated {
                Formula::not(f.clone())
            } else {
                f.clone()
            }
        }
        Not => nnf(f.child(), !negated),
        And | Or => {
            let l = nnf(f.lhs(), negated);
            let r = nnf(f.rhs(), negated);
            if (f.kind() == And) != negated {
                mk_and(l, r)
            } else {
                mk_or(l, r)
            }
        }
        Implies => {
            // a -> b  ==  !a | b
            let l = nnf(f.lhs(), !negated);
            let r = nnf(f.rhs(), negated);
            if negated {
                mk_and(l, r)
            } else {
                mk_or(l, r)
            }
        }
        Iff | Xor => {
            // a <-> b == (a & b) | (!a & !b); xor is its negation
            let positive = (f.kind() == Iff) != negated;
            let a = nnf(f.lhs(), false);
            let na = nnf(f.lhs(), true);
            let b = nnf(f.rhs(), false);
            let nb = nnf(f.rhs(), true);
            if positive {
                mk_or(mk_and(a, b), mk_and(na, nb))
            } else {
                mk_or(mk_and(a, nb), mk_and(na, b))
            }
        }
        Next => mk_unary(Next, nnf(f.child(), negated)),
        Eventually => {
            let c = nnf(f.child(), negated);
            mk_unary(if negated { Globally } else { Eventually }, c)
        }
        Globally => {
            let c = nnf(f.child(), negated);
            mk_unary(if negated { Eventually } else { Globally }, c)
        }
        Until => {
            let l = nnf(f.lhs(), negated);
            let r = nnf(f.rhs(), negated);
            if negated {
                mk_release(l, r)
            } else {
                mk_until(l, r)
            }
        }
        Release => {
            let l = nnf(f.lhs(), negated);
            let r = nnf(f.rhs(), negated);
            if negated {
                mk_until(l, r)
            } else {
                mk_release(l, r)
            }
        }
        WeakUntil => {
            if negated {
                // !(a W b) == !b U (!a & !b)
                let na = nnf(f.lhs(), true);
                let nb = nnf(f.rhs(), true);
                mk_until(nb.clone(), mk_and(na, nb))
            } else {
                let a = nnf(f.lhs(), false);
                let b = nnf(f.rhs(), false);
                mk_weak_until(a, b)
            }
        }
    }
}

fn mk_and(a: Formula, b: Formula) -> Formula {
    match (a.kind(), b.kind()) {
        (Kind::False, _) | (_, Kind::False) => Formula::ff(),
        (Kind::True, _) => b,
        (_, Kind::True) => a,
        _ if a == b => a,
        _ => Formula::and(a, b),
    }
}

fn mk_or(a: Formula, b: Formula) -> Formula {
    match (a.kind(), b.kind()) {
        (Kind::True, _) | (_, Kind::True) => Formula::tt(),
        (Kind::False, _) => b,
        (_, Kind::False) => a,
        _ if a == b => a,
        _ => Formula::or(a, b),
    }
}

fn mk_unary(kind: Kind, c: Formula) -> Formula {
    if c.is_constant() {
        return c;
    }
    match (kind, c.kind()) {
        (Kind::Eventually, Kind::Eventually) | (Kind::Globally, Kind::Globally) => c,
        _ => Formula::unary(kind, c),
    }
}

fn mk_until(a: Formula, b: Formula) -> Formula {
    match (a.kind(), b.kind()) {
        (_, Kind::True) | (_, Kind::False) => b,
        (Kind::False, _) => b,
        (Kind::True, _) => mk_unary(Kind::Eventually, b),
        _ => Formula::until(a, b),
    }
}

fn mk_release(a: Formula, b: Formula) -> Formula {
    match (a.kind(), b.kind()) {
        (_, Kind::True) | (_, Kind::False) => b,
        (Kind::True, _) => b,
        (Kind::False, _) => mk_unary(Kind::Globally, b),
        _ => Formula::release(a, b),
    }
}

fn mk_weak_until(a: Formula, b: Formula) -> Formula {
    match (a.kind(), b.kind()) {
        (_, Kind::True) => b,
        (Kind::True, _) => Formula::tt(),
        (Kind::False, _) => b,
        (_, Kind::False) => mk_unary(Kind::Globally, a),
        _ => Formula::weak_until(a, b),
    }
}

/// Whether `f` is in the negation normal form produced by [`to_nnf`].
pub fn is_nnf(f: &Formula) -> bool {
    match f.kind() {
        Kind::Not => f.child().is_ap(),
        Kind::Xor | Kind::Iff | Kind::Implies => false,
        _ => f.children().iter().all(is_nnf),
    }
}
