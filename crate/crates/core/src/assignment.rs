//! Square assignment problems: min-sum (shortest augmenting paths with
//! potentials) and min-max (threshold search over bipartite matchings).

use std::ops::{Add, Sub};

use num_traits::Zero;

/// Minimum-cost perfect assignment on a square matrix. Returns `col[row]`.
///
/// Works for any ordered additive cost type, in particular exact rationals,
/// so optimality is exact when the costs are.
pub fn min_sum<T>(cost: &[Vec<T>]) -> Vec<usize>
where
    T: Clone + PartialOrd + Zero + Add<Output = T> + Sub<Output = T>,
{
    let n = cost.len();
    if n == 0 {
        return Vec::new();
    }
    // 1-based potentials; column 0 is a virtual source.
    let mut u = vec![T::zero(); n + 1];
    let mut v = vec![T::zero(); n + 1];
    let mut owner = vec![0usize; n + 1];
    let mut way = vec![0usize; n + 1];
    for i in 1..=n {
        owner[0] = i;
        let mut j0 = 0;
        let mut minv: Vec<Option<T>> = vec![None; n + 1];
        let mut used = vec![false; n + 1];
        loop {
            used[j0] = true;
            let i0 = owner[j0];
            let mut delta: Option<T> = None;
            let mut j1 = 0;
            for j in 1..=n {
                if used[j] {
                    continue;
                }
                let cur = cost[i0 - 1][j - 1].clone() - u[i0].clone() - v[j].clone();
                if minv[j].as_ref().is_none_or(|m| cur < *m) {
                    minv[j] = Some(cur);
                    way[j] = j0;
                }
                let mj = minv[j].as_ref().expect("set above");
                if delta.as_ref().is_none_or(|d| mj < d) {
                    delta = Some(mj.clone());
                    j1 = j;
                }
            }
            let delta = delta.expect("an unused column remains");
            for j in 0..=n {
                if used[j] {
                    u[owner[j]] = u[owner[j]].clone() + delta.clone();
                    v[j] = v[j].clone() - delta.clone();
                } else if let Some(m) = minv[j].take() {
                    minv[j] = Some(m - delta.clone());
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
    let mut col = vec![0; n];
    for j in 1..=n {
        col[owner[j] - 1] = j - 1;
    }
    col
}

/// Perfect assignment minimizing the largest used cost. Returns `col[row]`.
pub fn min_max<T: Clone + Ord>(cost: &[Vec<T>]) -> Vec<usize> {
    let n = cost.len();
    if n == 0 {
        return Vec::new();
    }
    let mut thresholds: Vec<&T> = cost.iter().flatten().collect();
    thresholds.sort();
    thresholds.dedup();
    let (mut lo, mut hi) = (0, thresholds.len() - 1);
    while lo < hi {
        let mid = (lo + hi) / 2;
        if perfect_matching(cost, thresholds[mid]).is_some() {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    perfect_matching(cost, thresholds[lo]).expect("the largest threshold admits every edge")
}

/// Kuhn's augmenting-path algorithm on edges with cost `<= t`.
fn perfect_matching<T: Ord>(cost: &[Vec<T>], t: &T) -> Option<Vec<usize>> {
    let n = cost.len();
    let mut row_of: Vec<Option<usize>> = vec![None; n];
    fn augment<T: Ord>(
        i: usize,
        cost: &[Vec<T>],
        t: &T,
        seen: &mut [bool],
        row_of: &mut [Option<usize>],
    ) -> bool {
        for j in 0..cost.len() {
            if cost[i][j] <= *t && !seen[j] {
                seen[j] = true;
                if row_of[j].is_none_or(|r| augment(r, cost, t, seen, row_of)) {
                    row_of[j] = Some(i);
                    return true;
                }
            }
        }
        false
    }
    for i in 0..n {
        let mut seen = vec![false; n];
        if !augment(i, cost, t, &mut seen, &mut row_of) {
            return None;
        }
    }
    let mut col = vec![0; n];
    for (j, r) in row_of.iter().enumerate() {
        col[r.expect("perfect")] = j;
    }
    Some(col)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute<T: Clone + PartialOrd + Zero + Add<Output = T>>(cost: &[Vec<T>]) -> T {
        fn rec<T: Clone + PartialOrd + Zero + Add<Output = T>>(
            i: usize,
            cost: &[Vec<T>],
            used: &mut Vec<bool>,
            acc: T,
            best: &mut Option<T>,
        ) {
            if i == cost.len() {
                if best.as_ref().is_none_or(|b| acc < *b) {
                    *best = Some(acc);
                }
                return;
            }
            for j in 0..cost.len() {
                if !used[j] {
                    used[j] = true;
                    rec(i + 1, cost, used, acc.clone() + cost[i][j].clone(), best);
                    used[j] = false;
                }
            }
        }
        let mut best = None;
        rec(0, cost, &mut vec![false; cost.len()], T::zero(), &mut best);
        best.unwrap_or_else(T::zero)
    }

    #[test]
    fn min_sum_matches_brute_force() {
        let cost = vec![vec![4i64, 1, 3], vec![2, 0, 5], vec![3, 2, 2]];
        let a = min_sum(&cost);
        let total: i64 = a.iter().enumerate().map(|(i, &j)| cost[i][j]).sum();
        assert_eq!(total, brute(&cost));
        assert_eq!(total, 5);
    }

    #[test]
    fn min_max_threshold() {
        let cost = vec![vec![1, 9], vec![2, 3]];
        let a = min_max(&cost);
        assert_eq!(a, vec![0, 1]);
    }
}
