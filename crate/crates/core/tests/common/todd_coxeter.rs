//! Hasse-Lowe-Todd coset enumeration over the trivial subgroup, used to build
//! the right regular representation of a finitely presented group from its
//! relators alone.

use regdessin::group::{Family, GroupSpec};

const NONE: usize = usize::MAX;

/// Generator letters: 0 = a, 1 = a^-1, 2 = b, 3 = b^-1.
pub const A: usize = 0;
pub const A_INV: usize = 1;
pub const B: usize = 2;
pub const B_INV: usize = 3;

fn inv(x: usize) -> usize {
    x ^ 1
}

pub fn power(letter: usize, n: u64) -> Vec<usize> {
    vec![letter; n as usize]
}

pub struct CosetTable {
    /// Action of the four letters on cosets `0..len`; coset 0 is the identity.
    pub table: Vec<[usize; 4]>,
}

impl CosetTable {
    pub fn len(&self) -> usize {
        self.table.len()
    }

    pub fn walk(&self, mut c: usize, word: &[usize]) -> usize {
        for &x in word {
            c = self.table[c][x];
        }
        c
    }
}

struct Enumerator {
    table: Vec<[usize; 4]>,
    parent: Vec<usize>,
    queue: Vec<usize>,
    limit: usize,
}

impl Enumerator {
    fn live(&self, c: usize) -> bool {
        self.parent[c] == c
    }

    fn rep(&mut self, c: usize) -> usize {
        let mut r = c;
        while self.parent[r] != r {
            r = self.parent[r];
        }
        let mut k = c;
        while self.parent[k] != r {
            let next = self.parent[k];
            self.parent[k] = r;
            k = next;
        }
        r
    }

    fn define(&mut self, c: usize, x: usize) {
        let n = self.table.len();
        assert!(n < self.limit, "coset enumeration exceeded {} cosets", self.limit);
        self.table.push([NONE; 4]);
        self.parent.push(n);
        self.table[c][x] = n;
        self.table[n][inv(x)] = c;
    }

    fn merge(&mut self, k: usize, l: usize) {
        let (k, l) = (self.rep(k), self.rep(l));
        if k == l {
            return;
        }
        let (lo, hi) = (k.min(l), k.max(l));
        self.parent[hi] = lo;
        self.queue.push(hi);
    }

    fn coincidence(&mut self, a: usize, b: usize) {
        self.queue.clear();
        self.merge(a, b);
        let mut head = 0;
        while head < self.queue.len() {
            let e = self.queue[head];
            head += 1;
            for x in 0..4 {
                let f = self.table[e][x];
                if f == NONE {
                    continue;
                }
                self.table[f][inv(x)] = NONE;
                let (e1, f1) = (self.rep(e), self.rep(f));
                if self.table[e1][x] != NONE {
                    let t = self.table[e1][x];
                    self.merge(f1, t);
                } else if self.table[f1][inv(x)] != NONE {
                    let t = self.table[f1][inv(x)];
                    self.merge(e1, t);
                } else {
                    self.table[e1][x] = f1;
                    self.table[f1][inv(x)] = e1;
                }
            }
        }
    }

    fn scan_and_fill(&mut self, c: usize, w: &[usize]) {
        if w.is_empty() {
            return;
        }
        let (mut f, mut b) = (c, c);
        let (mut i, mut j) = (0usize, w.len() as isize - 1);
        loop {
            while (i as isize) <= j && self.table[f][w[i]] != NONE {
                f = self.table[f][w[i]];
                i += 1;
            }
            if (i as isize) > j {
                if f != b {
                    self.coincidence(f, b);
                }
                return;
            }
            while j >= i as isize && self.table[b][inv(w[j as usize])] != NONE {
                b = self.table[b][inv(w[j as usize])];
                j -= 1;
            }
            if j < i as isize {
                self.coincidence(f, b);
                return;
            } else if j == i as isize {
                self.table[f][w[i]] = b;
                self.table[b][inv(w[i])] = f;
                return;
            }
            self.define(f, w[i]);
        }
    }
}

/// Enumerates the cosets of the trivial subgroup in `<a, b | relators>`.
pub fn enumerate(relators: &[Vec<usize>], limit: usize) -> CosetTable {
    let mut en = Enumerator {
        table: vec![[NONE; 4]],
        parent: vec![0],
        queue: Vec::new(),
        limit,
    };
    let mut c = 0;
    while c < en.table.len() {
        for w in relators {
            if !en.live(c) {
                break;
            }
            en.scan_and_fill(c, w);
        }
        if en.live(c) {
            for x in 0..4 {
                if en.table[c][x] == NONE {
                    en.define(c, x);
                }
            }
        }
        c += 1;
    }
    // compact live cosets, keeping coset 0 first
    let live: Vec<usize> = (0..en.table.len()).filter(|&k| en.live(k)).collect();
    let mut new_index = vec![NONE; en.table.len()];
    for (n, &k) in live.iter().enumerate() {
        new_index[k] = n;
    }
    let table = live
        .iter()
        .map(|&k| {
            let mut row = [NONE; 4];
            for x in 0..4 {
                let target = en.rep(en.table[k][x]);
                row[x] = new_index[target];
            }
            row
        })
        .collect();
    CosetTable { table }
}

/// `a^(q)` as a short word, using `a^-1` when that is shorter.
fn a_power(q: u64, ord: u64) -> Vec<usize> {
    let q = q % ord;
    if q <= ord - q {
        power(A, q)
    } else {
        power(A_INV, ord - q)
    }
}

/// Relators of the defining presentation of `spec`, straight from the
/// presentation (no normal-form knowledge).
pub fn relators(spec: &GroupSpec) -> Vec<Vec<usize>> {
    let p = spec.p;
    let pw = |k: u32| p.pow(k);
    let conj = |ord_a: u64| {
        // b^-1 a b a^-q
        let q = 1 + pw(spec.f());
        let mut w = vec![B_INV, A, B];
        w.extend(a_power(ord_a - q % ord_a, ord_a));
        w
    };
    match spec.family {
        Family::Cyclic => vec![vec![A], power(B, pw(spec.e))],
        Family::M1 => vec![power(A, pw(spec.e)), power(B, pw(spec.d)), conj(pw(spec.e))],
        Family::M2 => vec![power(A, pw(spec.d)), power(B, pw(spec.e)), conj(pw(spec.d))],
        Family::M3 => {
            let h = spec.h();
            let mut mixed = power(B, pw(spec.d + spec.e - h));
            mixed.extend(power(A_INV, pw(spec.d)));
            vec![power(A, pw(h)), mixed, conj(pw(h))]
        }
    }
}
