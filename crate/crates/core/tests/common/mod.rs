#![allow(dead_code)]

use ugl_core::Graph;

/// All permutations of `0..n` in lexicographic order.
pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut p: Vec<usize> = (0..n).collect();
    loop {
        out.push(p.clone());
        let Some(i) = (1..n).rev().find(|&i| p[i - 1] < p[i]) else { return out };
        let j = (i..n).rev().find(|&j| p[j] > p[i - 1]).unwrap();
        p.swap(i - 1, j);
        p[i..].reverse();
    }
}

pub fn pairs(n: usize) -> Vec<(usize, usize)> {
    (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect()
}

/// The labeled graph on `n` vertices whose edge `pairs(n)[i]` is bit `i` of `code`.
pub fn labeled(n: usize, code: u64) -> Graph {
    let mut g = Graph::empty(n);
    for (i, (u, v)) in pairs(n).into_iter().enumerate() {
        if code >> i & 1 == 1 {
            g.insert_edge(u, v);
        }
    }
    g
}

pub fn all_labeled(n: usize) -> impl Iterator<Item = Graph> {
    let m = n * n.saturating_sub(1) / 2;
    (0..1u64 << m).map(move |c| labeled(n, c))
}

/// Minimum edge-bit code over all relabelings, by trying every permutation.
pub fn brute_canonical(g: &Graph, perms: &[Vec<usize>]) -> u64 {
    let ps = pairs(g.n());
    perms
        .iter()
        .map(|p| {
            ps.iter().enumerate().fold(0u64, |m, (i, &(u, v))| if g.has_edge(p[u], p[v]) { m | 1 << i } else { m })
        })
        .min()
        .unwrap()
}

/// Tiny deterministic generator so oracles do not share code with the library.
pub struct Lcg(pub u64);

impl Lcg {
    pub fn next(&mut self) -> u64 {
        self.0 = self.0.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        self.0 >> 33
    }

    pub fn below(&mut self, n: u64) -> u64 {
        self.next() % n
    }

    pub fn graph(&mut self, n: usize, density_pct: u64) -> Graph {
        let mut g = Graph::empty(n);
        for (u, v) in pairs(n) {
            if self.below(100) < density_pct {
                g.insert_edge(u, v);
            }
        }
        g
    }
}

/// Interval oracle: some ordering of the maximal cliques has, for every
/// vertex, the cliques containing it consecutive. Orders are grown one
/// clique at a time, rejecting a clique that revives a vertex whose run of
/// cliques already ended.
pub fn interval_by_clique_orders(g: &Graph) -> bool {
    let n = g.n();
    if n == 0 {
        return true;
    }
    let all = (1u64 << n) - 1;
    let is_clique = |m: u64| (0..n).all(|u| m >> u & 1 == 0 || (0..n).all(|v| v == u || m >> v & 1 == 0 || g.has_edge(u, v)));
    let cliques: Vec<u64> = (1..=all)
        .filter(|&m| is_clique(m) && (0..n).all(|v| m >> v & 1 == 1 || !is_clique(m | 1 << v)))
        .collect();
    fn grow(cliques: &[u64], used: &mut Vec<bool>, last: u64, ended: u64) -> bool {
        if used.iter().all(|&u| u) {
            return true;
        }
        for i in 0..cliques.len() {
            if used[i] || cliques[i] & ended != 0 {
                continue;
            }
            used[i] = true;
            let ended2 = ended | (last & !cliques[i]);
            if grow(cliques, used, cliques[i], ended2) {
                return true;
            }
            used[i] = false;
        }
        false
    }
    grow(&cliques, &mut vec![false; cliques.len()], 0, 0)
}
