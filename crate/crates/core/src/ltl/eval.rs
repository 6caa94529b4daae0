//! Direct semantic evaluation of LTL on ultimately periodic words.
//!
//! Used as an oracle: it shares no code with the automaton translation.

use std::collections::HashMap;

use super::{Formula, Kind};

/// Whether `prefix · period^ω` satisfies `f`. Letters are bit sets over
/// `aps`; atoms missing from `aps` are false everywhere.
pub fn holds_on_lasso(f: &Formula, aps: &[String], prefix: &[u64], period: &[u64]) -> bool {
    assert!(!period.is_empty(), "lasso period must be nonempty");
    let word: Vec<u64> = prefix.iter().chain(period.iter()).copied().collect();
    let ctx = Lasso { word, loop_start: prefix.len(), aps };
    let mut memo = HashMap::new();
    ctx.eval(f, &mut memo)[0]
}

struct Lasso<'a> {
    word: Vec<u64>,
    loop_start: usize,
    aps: &'a [String],
}

impl Lasso<'_> {
    fn succ(&self, i: usize) -> usize {
        if i + 1 < self.word.len() {
            i + 1
        } else {
            self.loop_start
        }
    }

    fn eval(&self, f: &Formula, memo: &mut HashMap<Formula, Vec<bool>>) -> Vec<bool> {
        if let Some(v) = memo.get(f) {
            return v.clone();
        }
        let n = self.word.len();
        let v: Vec<bool> = match f.kind() {
            Kind::True => vec![true; n],
            Kind::False => vec![false; n],
            Kind::Ap => {
                let name = f.name().unwrap_or_default();
                match self.aps.iter().position(|a| a == name) {
                    Some(k) => self.word.iter().map(|w| w >> k & 1 == 1).collect(),
                    None => vec![false; n],
                }
            }
            Kind::Not => self.eval(f.child(), memo).into_iter().map(|b| !b).collect(),
            Kind::And | Kind::Or | Kind::Xor | Kind::Iff | Kind::Implies => {
                let a = self.eval(f.lhs(), memo);
                let b = self.eval(f.rhs(), memo);
                let op: fn(bool, bool) -> bool = match f.kind() {
                    Kind::And => |x, y| x && y,
                    Kind::Or => |x, y| x || y,
                    Kind::Xor => |x, y| x != y,
                    Kind::Iff => |x, y| x == y,
                    _ => |x, y| !x || y,
                };
                a.iter().zip(b.iter()).map(|(&x, &y)| op(x, y)).collect()
            }
            Kind::Next => {
                let a = self.eval(f.child(), memo);
                (0..n).map(|i| a[self.succ(i)]).collect()
            }
            Kind::Eventually => {
                let a = self.eval(f.child(), memo);
                self.fixpoint(false, |i, cur| a[i] || cur[self.succ(i)])
            }
            Kind::Globally => {
                let a = self.eval(f.child(), memo);
                self.fixpoint(true, |i, cur| a[i] && cur[self.succ(i)])
            }
            Kind::Until => {
                let a = self.eval(f.lhs(), memo);
                let b = self.eval(f.rhs(), memo);
                self.fixpoint(false, |i, cur| b[i] || (a[i] && cur[self.succ(i)]))
            }
            Kind::WeakUntil => {
                let a = self.eval(f.lhs(), memo);
                let b = self.eval(f.rhs(), memo);
                self.fixpoint(true, |i, cur| b[i] || (a[i] && cur[self.succ(i)]))
            }
            Kind::Release => {
                let a = self.eval(f.lhs(), memo);
                let b = self.eval(f.rhs(), memo);
                self.fixpoint(true, |i, cur| b[i] && (a[i] || cur[self.succ(i)]))
            }
        };
        memo.insert(f.clone(), v.clone());
        v
    }

    /// Least (`init = false`) or greatest (`init = true`) fixpoint of the
    /// one-step unfolding.
    fn fixpoint(&self, init: bool, step: impl Fn(usize, &[bool]) -> bool) -> Vec<bool> {
        let n = self.word.len();
        let mut cur = vec![init; n];
        loop {
            let next: Vec<bool> = (0..n).map(|i| step(i, &cur)).collect();
            if next == cur {
                return cur;
            }
            cur = next;
        }
    }
}

/// Every lasso `(prefix, period)` over `num_aps` propositions with
/// `1 <= |period|` and `|prefix| + |period| <= max_len`.
pub fn all_lassos(num_aps: usize, max_len: usize) -> Vec<(Vec<u64>, Vec<u64>)> {
    let letters = 1u64 << num_aps;
    let mut out = Vec::new();
    for total in 1..=max_len {
        let count = letters.pow(total as u32);
        for code in 0..count {
            let mut word = Vec::with_capacity(total);
            let mut c = code;
            for _ in 0..total {
                word.push(c % letters);
                c /= letters;
            }
            for split in 0..total {
                out.push((word[..split].to_vec(), word[split..].to_vec()));
            }
        }
    }
    out
}
