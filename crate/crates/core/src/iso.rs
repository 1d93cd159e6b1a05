//! Backtracking search for isomorphisms of finite spaces carrying labels
//! and partial unary operations (module and bimodule actions).

use crate::finspace::FinSpace;

pub(crate) const NONE: usize = usize::MAX;

/// A space with a label per point and a family of partial self-maps, one
/// table per operation, `NONE` where undefined. Two structures are compared
/// operation by operation, so both must list their operations in the same
/// order.
pub(crate) struct Structure<'a> {
    pub space: &'a FinSpace,
    pub labels: Vec<u64>,
    pub ops: Vec<Vec<usize>>,
}

impl Structure<'_> {
    fn signature(&self, x: usize) -> (u64, usize, usize) {
        (
            self.labels[x],
            self.space.up(x).len(),
            self.space.down(x).len(),
        )
    }
}

struct Search<'s, 'a> {
    a: &'s Structure<'a>,
    b: &'s Structure<'a>,
    sig_a: Vec<(u64, usize, usize)>,
    sig_b: Vec<(u64, usize, usize)>,
    fwd: Vec<usize>,
    used: Vec<bool>,
    trail: Vec<usize>,
    found: Vec<Vec<usize>>,
    limit: usize,
}

impl Search<'_, '_> {
    /// Assigns `x ↦ y` and everything the operations force; on failure the
    /// partial assignment is left on the trail for the caller to undo.
    fn assign(&mut self, x: usize, y: usize) -> bool {
        let mut queue = vec![(x, y)];
        while let Some((x, y)) = queue.pop() {
            if self.fwd[x] != NONE {
                if self.fwd[x] != y {
                    return false;
                }
                continue;
            }
            if self.used[y] || self.sig_a[x] != self.sig_b[y] {
                return false;
            }
            for &x2 in &self.trail {
                let y2 = self.fwd[x2];
                if self.a.space.leq(x, x2) != self.b.space.leq(y, y2)
                    || self.a.space.leq(x2, x) != self.b.space.leq(y2, y)
                {
                    return false;
                }
            }
            self.fwd[x] = y;
            self.used[y] = true;
            self.trail.push(x);
            for (oa, ob) in self.a.ops.iter().zip(&self.b.ops) {
                match (oa[x], ob[y]) {
                    (NONE, NONE) => {}
                    (NONE, _) | (_, NONE) => return false,
                    (xa, yb) => queue.push((xa, yb)),
                }
            }
        }
        true
    }

    fn undo(&mut self, mark: usize) {
        while self.trail.len() > mark {
            let x = self.trail.pop().unwrap();
            self.used[self.fwd[x]] = false;
            self.fwd[x] = NONE;
        }
    }

    fn go(&mut self) {
        if self.found.len() >= self.limit {
            return;
        }
        let Some(x) = self.fwd.iter().position(|&y| y == NONE) else {
            self.found.push(self.fwd.clone());
            return;
        };
        for y in 0..self.b.space.len() {
            if self.used[y] || self.sig_a[x] != self.sig_b[y] {
                continue;
            }
            let mark = self.trail.len();
            if self.assign(x, y) {
                self.go();
            }
            self.undo(mark);
            if self.found.len() >= self.limit {
                return;
            }
        }
    }
}

/// Up to `limit` isomorphisms `a → b`: order isomorphisms preserving labels
/// and commuting with every operation (including its domain of definition).
pub(crate) fn find_isos(a: &Structure, b: &Structure, limit: usize) -> Vec<Vec<usize>> {
    let n = a.space.len();
    if n != b.space.len() || a.ops.len() != b.ops.len() || limit == 0 {
        return Vec::new();
    }
    let sig_a: Vec<_> = (0..n).map(|x| a.signature(x)).collect();
    let sig_b: Vec<_> = (0..n).map(|x| b.signature(x)).collect();
    let (mut sa, mut sb) = (sig_a.clone(), sig_b.clone());
    sa.sort_unstable();
    sb.sort_unstable();
    if sa != sb {
        return Vec::new();
    }
    let mut search = Search {
        a,
        b,
        sig_a,
        sig_b,
        fwd: vec![NONE; n],
        used: vec![false; n],
        trail: Vec::new(),
        found: Vec::new(),
        limit,
    };
    search.go();
    search.found
}

pub(crate) fn find_iso(a: &Structure, b: &Structure) -> Option<Vec<usize>> {
    find_isos(a, b, 1).pop()
}
