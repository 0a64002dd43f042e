//! Exhaustive enumeration of small categories up to isomorphism, and seeded
//! random generation past the enumeration cap.
//!
//! Morphism counts include identities. A category is built from a matrix of
//! non-identity hom-set sizes, canonical under simultaneous permutation of the
//! objects, by filling the composition table cell by cell and pruning on
//! associativity. Isomorphic tables are merged through a canonical code.

use std::collections::HashSet;

use itertools::Itertools;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::fincat::{validate_category, FinCategory, RawCategory};

/// Default hard cap on `max_morphisms` for exhaustive enumeration.
pub const DEFAULT_ENUMERATION_CAP: usize = 6;

/// Environment variable overriding the cap.
pub const CAP_ENV: &str = "STARKIT_MAX_MORPHISMS";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EnumerationError {
    #[error(
        "BoundExceeded: {requested} morphisms requested, cap is {cap} (set {CAP_ENV} to raise it)"
    )]
    BoundExceeded { requested: usize, cap: usize },
}

pub fn enumeration_cap() -> usize {
    std::env::var(CAP_ENV)
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .unwrap_or(DEFAULT_ENUMERATION_CAP)
}

/// A composition table under construction. Morphisms `0..n` are the
/// identities; the rest are grouped by hom-cell in row-major order.
#[derive(Clone)]
struct Table {
    n: usize,
    dom: Vec<usize>,
    cod: Vec<usize>,
    /// `comp[g * m + f]`, `usize::MAX` while unassigned or not composable.
    comp: Vec<usize>,
}

const UNSET: usize = usize::MAX;

impl Table {
    fn new(n: usize, counts: &[usize]) -> Table {
        let mut dom: Vec<usize> = (0..n).collect();
        let mut cod: Vec<usize> = (0..n).collect();
        for x in 0..n {
            for y in 0..n {
                for _ in 0..counts[x * n + y] {
                    dom.push(x);
                    cod.push(y);
                }
            }
        }
        let m = dom.len();
        let mut comp = vec![UNSET; m * m];
        for f in 0..m {
            comp[cod[f] * m + f] = f;
            comp[f * m + dom[f]] = f;
        }
        Table { n, dom, cod, comp }
    }

    fn m(&self) -> usize {
        self.dom.len()
    }

    fn get(&self, g: usize, f: usize) -> usize {
        self.comp[g * self.m() + f]
    }

    /// Composable non-identity pairs `(g, f)` in a fixed order.
    fn cells(&self) -> Vec<(usize, usize)> {
        let m = self.m();
        (self.n..m)
            .cartesian_product(self.n..m)
            .filter(|&(g, f)| self.cod[f] == self.dom[g])
            .collect()
    }

    fn hom(&self, x: usize, y: usize) -> Vec<usize> {
        (0..self.m())
            .filter(|&h| self.dom[h] == x && self.cod[h] == y)
            .collect()
    }

    /// Sets `g ∘ f = h` and everything associativity then forces, recording
    /// each newly set cell on `trail`. False on a contradiction; the caller
    /// undoes the trail.
    fn assign(&mut self, g: usize, f: usize, h: usize, trail: &mut Vec<usize>) -> bool {
        let m = self.m();
        let mut queue = vec![(g, f, h)];
        while let Some((g, f, h)) = queue.pop() {
            let cell = g * m + f;
            match self.comp[cell] {
                UNSET => {
                    self.comp[cell] = h;
                    trail.push(cell);
                }
                cur if cur == h => continue,
                _ => return false,
            }
            // Two sides of an associativity equation, each a cell whose
            // factors are known; one known value forces the other.
            let equate = |x1: usize, y1: usize, x2: usize, y2: usize, q: &mut Vec<_>| {
                let (v1, v2) = (self.comp[x1 * m + y1], self.comp[x2 * m + y2]);
                match (v1 == UNSET, v2 == UNSET) {
                    (false, false) => v1 == v2,
                    (false, true) => {
                        q.push((x2, y2, v1));
                        true
                    }
                    (true, false) => {
                        q.push((x1, y1, v2));
                        true
                    }
                    (true, true) => true,
                }
            };
            for k in 0..m {
                // k ∘ (g ∘ f) = (k ∘ g) ∘ f
                if self.dom[k] == self.cod[g] {
                    let kg = self.comp[k * m + g];
                    if kg != UNSET && !equate(k, h, kg, f, &mut queue) {
                        return false;
                    }
                }
                // (g ∘ f) ∘ k = g ∘ (f ∘ k)
                if self.cod[k] == self.dom[f] {
                    let fk = self.comp[f * m + k];
                    if fk != UNSET && !equate(h, k, g, fk, &mut queue) {
                        return false;
                    }
                }
            }
            for a in 0..m {
                for b in 0..m {
                    // g ∘ (b ∘ a) = (g ∘ b) ∘ a where b ∘ a = f
                    if self.cod[a] == self.dom[b] && self.comp[b * m + a] == f {
                        let gb = self.comp[g * m + b];
                        if gb != UNSET && !equate(g, f, gb, a, &mut queue) {
                            return false;
                        }
                    }
                    // (a ∘ b) ∘ f = a ∘ (b ∘ f) where a ∘ b = g
                    if self.cod[b] == self.dom[a]
                        && self.dom[b] == self.cod[f]
                        && self.comp[a * m + b] == g
                    {
                        let bf = self.comp[b * m + f];
                        if bf != UNSET && !equate(g, f, a, bf, &mut queue) {
                            return false;
                        }
                    }
                }
            }
        }
        true
    }

    fn undo(&mut self, trail: &mut Vec<usize>, mark: usize) {
        for cell in trail.drain(mark..) {
            self.comp[cell] = UNSET;
        }
    }

    fn to_category(&self, name: String) -> FinCategory {
        let obj_name = |x: usize| object_label(x);
        let mor_name = |f: usize| {
            if f < self.n {
                format!("1_{}", obj_name(f))
            } else {
                format!("f{}", f - self.n + 1)
            }
        };
        let mut raw = RawCategory::new(name);
        raw.objects = (0..self.n).map(obj_name).collect();
        for f in self.n..self.m() {
            raw = raw.morphism(mor_name(f), obj_name(self.dom[f]), obj_name(self.cod[f]));
        }
        for (g, f) in self.cells() {
            raw = raw.composite(mor_name(g), mor_name(f), mor_name(self.get(g, f)));
        }
        validate_category(&raw).expect("enumerated tables are categories")
    }
}

/// `A`, `B`, ..., `Z`, `AA`, `AB`, ...
fn object_label(x: usize) -> String {
    let mut x = x;
    let mut out = Vec::new();
    loop {
        out.push(b'A' + (x % 26) as u8);
        if x < 26 {
            break;
        }
        x = x / 26 - 1;
    }
    out.reverse();
    String::from_utf8(out).expect("ascii")
}

/// Hom-count matrices with the given total, lexicographically maximal under
/// simultaneous permutation of objects.
fn canonical_matrices(n: usize, total: usize) -> Vec<Vec<usize>> {
    let perms: Vec<Vec<usize>> = (0..n).permutations(n).collect();
    let mut out = Vec::new();
    let mut current = vec![0; n * n];
    fn fill(
        i: usize,
        left: usize,
        n: usize,
        current: &mut Vec<usize>,
        perms: &[Vec<usize>],
        out: &mut Vec<Vec<usize>>,
    ) {
        if i == n * n {
            if left == 0 && is_maximal(current, n, perms) {
                out.push(current.clone());
            }
            return;
        }
        for v in 0..=left {
            current[i] = v;
            fill(i + 1, left - v, n, current, perms, out);
        }
        current[i] = 0;
    }
    fill(0, total, n, &mut current, &perms, &mut out);
    out
}

fn permuted(mat: &[usize], n: usize, p: &[usize]) -> Vec<usize> {
    let mut out = vec![0; n * n];
    for x in 0..n {
        for y in 0..n {
            out[p[x] * n + p[y]] = mat[x * n + y];
        }
    }
    out
}

fn is_maximal(mat: &[usize], n: usize, perms: &[Vec<usize>]) -> bool {
    perms.iter().all(|p| permuted(mat, n, p).as_slice() <= mat)
}

/// Morphism relabellings preserving the hom-count matrix: an automorphism of
/// the matrix on objects combined with a permutation inside each hom-cell.
fn relabellings(t: &Table, counts: &[usize]) -> Vec<Vec<usize>> {
    let n = t.n;
    let m = t.m();
    let auts: Vec<Vec<usize>> = (0..n)
        .permutations(n)
        .filter(|p| permuted(counts, n, p) == counts)
        .collect();
    let cell_members: Vec<Vec<usize>> = (0..n * n)
        .map(|c| (n..m).filter(|&f| t.dom[f] * n + t.cod[f] == c).collect())
        .collect();
    let mut out = Vec::new();
    for p in &auts {
        // For each cell (x, y) the morphisms must go to cell (p x, p y).
        let per_cell: Vec<Vec<Vec<usize>>> = (0..n * n)
            .map(|c| {
                let (x, y) = (c / n, c % n);
                let target = &cell_members[p[x] * n + p[y]];
                target.iter().copied().permutations(target.len()).collect()
            })
            .collect();
        for choice in per_cell.iter().multi_cartesian_product() {
            let mut perm: Vec<usize> = (0..n).map(|x| p[x]).collect();
            perm.resize(m, 0);
            for (c, images) in choice.iter().enumerate() {
                for (f, &img) in cell_members[c].iter().zip(images.iter()) {
                    perm[*f] = img;
                }
            }
            out.push(perm);
        }
    }
    out
}

fn canonical_code(t: &Table, perms: &[Vec<usize>], cells: &[(usize, usize)]) -> Vec<usize> {
    let m = t.m();
    let mut best: Vec<usize> = Vec::new();
    let mut inv = vec![0; m];
    'perm: for perm in perms {
        for (old, &new) in perm.iter().enumerate() {
            inv[new] = old;
        }
        let mut smaller = best.is_empty();
        for (i, &(g, f)) in cells.iter().enumerate() {
            let v = perm[t.get(inv[g], inv[f])];
            if smaller {
                if best.len() > i {
                    best[i] = v;
                } else {
                    best.push(v);
                }
            } else if v < best[i] {
                smaller = true;
                best[i] = v;
            } else if v > best[i] {
                continue 'perm;
            }
        }
    }
    best
}

/// Fills the table cell by cell, calling `emit` on every complete
/// associative table.
fn backtrack(
    t: &mut Table,
    cells: &[(usize, usize)],
    i: usize,
    trail: &mut Vec<usize>,
    emit: &mut dyn FnMut(&Table),
) {
    let m = t.m();
    let Some(pos) = (i..cells.len()).find(|&j| t.comp[cells[j].0 * m + cells[j].1] == UNSET) else {
        emit(t);
        return;
    };
    let (g, f) = cells[pos];
    for h in t.hom(t.dom[f], t.cod[g]) {
        let mark = trail.len();
        if t.assign(g, f, h, trail) {
            backtrack(t, cells, pos + 1, trail, emit);
        }
        t.undo(trail, mark);
    }
}

/// All categories with exactly `total` morphisms, up to isomorphism, in a
/// deterministic order.
fn categories_of_size(total: usize) -> Vec<Table> {
    let mut out = Vec::new();
    for n in 1..=total {
        for counts in canonical_matrices(n, total - n) {
            let mut t = Table::new(n, &counts);
            let cells = t.cells();
            if cells
                .iter()
                .any(|&(g, f)| t.hom(t.dom[f], t.cod[g]).is_empty())
            {
                continue;
            }
            let perms = relabellings(&t, &counts);
            let mut seen: HashSet<Vec<usize>> = HashSet::new();
            backtrack(&mut t, &cells, 0, &mut Vec::new(), &mut |table| {
                if seen.insert(canonical_code(table, &perms, &cells)) {
                    out.push(table.clone());
                }
            });
        }
    }
    out
}

/// Every category with at most `max_morphisms` morphisms (identities
/// included), one per isomorphism class. Names are `C<size>_<k>`.
pub fn enumerate_categories(max_morphisms: usize) -> Result<Vec<FinCategory>, EnumerationError> {
    let cap = enumeration_cap();
    if max_morphisms > cap {
        return Err(EnumerationError::BoundExceeded {
            requested: max_morphisms,
            cap,
        });
    }
    let mut out = Vec::new();
    for total in 1..=max_morphisms {
        for (k, t) in categories_of_size(total).into_iter().enumerate() {
            out.push(t.to_category(format!("C{total}_{}", k + 1)));
        }
    }
    Ok(out)
}

/// A random category with exactly `total` morphisms, or `None` if the
/// attempt budget runs out. Deterministic in the RNG state.
pub fn random_category(rng: &mut ChaCha8Rng, total: usize, name: String) -> Option<FinCategory> {
    for _ in 0..64 {
        let n = rng.gen_range(1..=total);
        let mut counts = vec![0; n * n];
        for _ in 0..total - n {
            let c = rng.gen_range(0..n * n);
            counts[c] += 1;
        }
        let mut t = Table::new(n, &counts);
        let cells = t.cells();
        if cells
            .iter()
            .any(|&(g, f)| t.hom(t.dom[f], t.cod[g]).is_empty())
        {
            continue;
        }
        if random_fill(&mut t, &cells, &mut Vec::new(), rng, &mut 0) {
            return Some(t.to_category(name));
        }
    }
    None
}

/// Randomised backtracking with a node budget.
fn random_fill(
    t: &mut Table,
    cells: &[(usize, usize)],
    trail: &mut Vec<usize>,
    rng: &mut ChaCha8Rng,
    nodes: &mut usize,
) -> bool {
    let m = t.m();
    let Some(&(g, f)) = cells.iter().find(|&&(g, f)| t.comp[g * m + f] == UNSET) else {
        return true;
    };
    *nodes += 1;
    if *nodes > 10_000 {
        return false;
    }
    let mut options = t.hom(t.dom[f], t.cod[g]);
    options.shuffle(rng);
    for h in options {
        let mark = trail.len();
        if t.assign(g, f, h, trail) && random_fill(t, cells, trail, rng, nodes) {
            return true;
        }
        t.undo(trail, mark);
    }
    false
}

pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn object_labels() {
        assert_eq!(object_label(0), "A");
        assert_eq!(object_label(25), "Z");
        assert_eq!(object_label(26), "AA");
    }

    #[test]
    fn canonical_matrices_two_objects_one_arrow() {
        // One non-identity arrow on two objects: A -> B (B -> A is the same
        // up to relabelling) or a loop on A (a loop on B likewise).
        let mut got = canonical_matrices(2, 1);
        got.sort();
        assert_eq!(got, vec![vec![0, 1, 0, 0], vec![1, 0, 0, 0]]);
    }
}
