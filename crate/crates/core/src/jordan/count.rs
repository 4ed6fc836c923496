use super::JordanSignature;

/// Integer partitions of `n`, each descending, in reverse lexicographic order.
pub fn partitions(n: usize) -> Vec<Vec<usize>> {
    fn rec(n: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if n == 0 {
            out.push(cur.clone());
            return;
        }
        for part in (1..=n.min(max)).rev() {
            cur.push(part);
            rec(n - part, part, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, n, &mut Vec::new(), &mut out);
    out
}

/// All Jordan signatures of total dimension `d`, i.e. multisets of integer
/// partitions whose parts sum to `d`, in canonical (descending) order.
pub fn enumerate_signatures(d: usize) -> Vec<JordanSignature> {
    // Every partition of every size, sorted descending so that a multiset can
    // be generated as a non-increasing sequence of indices.
    let mut all: Vec<Vec<usize>> = (1..=d).flat_map(partitions).collect();
    all.sort_by(|a, b| b.cmp(a));

    fn rec(
        remaining: usize,
        start: usize,
        all: &[Vec<usize>],
        cur: &mut Vec<Vec<usize>>,
        out: &mut Vec<JordanSignature>,
    ) {
        if remaining == 0 {
            out.push(JordanSignature::new(cur.clone()).expect("non-empty groups"));
            return;
        }
        for (k, p) in all.iter().enumerate().skip(start) {
            let size: usize = p.iter().sum();
            if size <= remaining {
                cur.push(p.clone());
                rec(remaining - size, k, all, cur, out);
                cur.pop();
            }
        }
    }
    let mut out = Vec::new();
    if d > 0 {
        rec(d, 0, &all, &mut Vec::new(), &mut out);
    }
    out.sort_by(|a, b| b.cmp(a));
    out
}

/// Partition numbers `p(0..=n)`.
fn partition_numbers(n: usize) -> Vec<u128> {
    let mut p = vec![0u128; n + 1];
    p[0] = 1;
    for part in 1..=n {
        for total in part..=n {
            p[total] += p[total - part];
        }
    }
    p
}

/// Number of Jordan signatures of dimension `d` (double partitions), from the
/// Euler transform of the partition numbers.
pub fn count_signatures(d: usize) -> u128 {
    let p = partition_numbers(d);
    // prod_k (1 - x^k)^{-p(k)}: multiply in p(k) copies of 1/(1 - x^k).
    let mut a = vec![0u128; d + 1];
    a[0] = 1;
    for k in 1..=d {
        for _ in 0..p[k] {
            for total in k..=d {
                a[total] += a[total - k];
            }
        }
    }
    a[d]
}

/// Number of signatures with one block per eigenvalue, which is `p(d)`.
pub fn count_unique_classes(d: usize) -> u128 {
    partition_numbers(d)[d]
}
