//! Minimum-cost assignment of rows to distinct columns (`rows <= cols`).

/// Above this many columns the exhaustive search gives way to the
/// Hungarian method.
pub const BRUTE_FORCE_LIMIT: usize = 6;

pub fn total(cost: &[Vec<f64>], assignment: &[usize]) -> f64 {
    assignment.iter().enumerate().map(|(r, &c)| cost[r][c]).sum()
}

/// Tries every injection; the first minimum in lexicographic order wins.
pub fn brute_force(cost: &[Vec<f64>]) -> Vec<usize> {
    let rows = cost.len();
    let cols = cost.first().map_or(0, Vec::len);
    assert!(rows <= cols, "more rows than columns");
    let mut best = (f64::INFINITY, Vec::new());
    let mut current = Vec::with_capacity(rows);
    let mut used = vec![false; cols];
    fn go(cost: &[Vec<f64>], acc: f64, current: &mut Vec<usize>, used: &mut [bool], best: &mut (f64, Vec<usize>)) {
        let r = current.len();
        if r == cost.len() {
            if acc < best.0 {
                *best = (acc, current.clone());
            }
            return;
        }
        for c in 0..used.len() {
            if !used[c] {
                used[c] = true;
                current.push(c);
                go(cost, acc + cost[r][c], current, used, best);
                current.pop();
                used[c] = false;
            }
        }
    }
    go(cost, 0.0, &mut current, &mut used, &mut best);
    best.1
}

/// Shortest augmenting path Hungarian method with potentials, O(rows² · cols).
pub fn hungarian(cost: &[Vec<f64>]) -> Vec<usize> {
    let n = cost.len();
    let m = cost.first().map_or(0, Vec::len);
    assert!(n <= m, "more rows than columns");
    if n == 0 {
        return Vec::new();
    }
    // 1-based arrays; column 0 is a virtual source.
    let mut u = vec![0.0; n + 1];
    let mut v = vec![0.0; m + 1];
    let mut owner = vec![0usize; m + 1];
    let mut way = vec![0usize; m + 1];
    for row in 1..=n {
        owner[0] = row;
        let mut j0 = 0;
        let mut minv = vec![f64::INFINITY; m + 1];
        let mut used = vec![false; m + 1];
        loop {
            used[j0] = true;
            let i0 = owner[j0];
            let mut delta = f64::INFINITY;
            let mut j1 = 0;
            for j in 1..=m {
                if !used[j] {
                    let cur = cost[i0 - 1][j - 1] - u[i0] - v[j];
                    if cur < minv[j] {
                        minv[j] = cur;
                        way[j] = j0;
                    }
                    if minv[j] < delta {
                        delta = minv[j];
                        j1 = j;
                    }
                }
            }
            for j in 0..=m {
                if used[j] {
                    u[owner[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
            if owner[j0] == 0 {
                break;
            }
        }
        loop {
            let j1 = way[j0];
            owner[j0] = owner[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }
    let mut out = vec![0; n];
    for j in 1..=m {
        if owner[j] != 0 {
            out[owner[j] - 1] = j - 1;
        }
    }
    out
}

pub fn solve(cost: &[Vec<f64>]) -> Vec<usize> {
    let cols = cost.first().map_or(0, Vec::len);
    if cols <= BRUTE_FORCE_LIMIT {
        brute_force(cost)
    } else {
        hungarian(cost)
    }
}
