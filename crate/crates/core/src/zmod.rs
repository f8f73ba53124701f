//! Linear systems over `ℤ/n`.
//!
//! Prime powers are handled by a Smith-style elimination that always
//! pivots on an entry of minimal `p`-valuation; composite moduli are split
//! with the Chinese remainder theorem.

pub fn egcd(a: i128, b: i128) -> (i128, i128, i128) {
    if b == 0 {
        (a, 1, 0)
    } else {
        let (g, x, y) = egcd(b, a % b);
        (g, y, x - (a / b) * y)
    }
}

/// Inverse of `a` modulo `n`, if it exists.
pub fn inv_mod(a: u64, n: u64) -> Option<u64> {
    let (g, x, _) = egcd(a as i128 % n as i128, n as i128);
    if g != 1 {
        return None;
    }
    Some(x.rem_euclid(n as i128) as u64)
}

pub fn mul_mod(a: u64, b: u64, n: u64) -> u64 {
    ((a as u128 * b as u128) % n as u128) as u64
}

pub fn pow_mod(mut a: u64, mut e: u64, n: u64) -> u64 {
    let mut r = 1 % n;
    a %= n;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, a, n);
        }
        a = mul_mod(a, a, n);
        e >>= 1;
    }
    r
}

/// `n = ∏ p^k` as `(p, k)` pairs.
pub fn factor(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        let mut k = 0;
        while n % p == 0 {
            n /= p;
            k += 1;
        }
        if k > 0 {
            out.push((p, k));
        }
        p += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

fn valuation(mut x: u64, p: u64, cap: u32) -> u32 {
    if x == 0 {
        return cap;
    }
    let mut v = 0;
    while x % p == 0 {
        x /= p;
        v += 1;
    }
    v.min(cap)
}

/// Outcome of solving `A x ≡ b (mod n)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Solve {
    Solution(Vec<u64>),
    /// Index of an equation of the transformed system that cannot hold,
    /// together with its residue and the pivot modulus it failed against.
    Inconsistent { residue: u64, modulus: u64 },
}

impl Solve {
    pub fn solution(self) -> Option<Vec<u64>> {
        match self {
            Solve::Solution(x) => Some(x),
            Solve::Inconsistent { .. } => None,
        }
    }
}

fn solve_prime_power(a: &[Vec<u64>], b: &[u64], ncols: usize, p: u64, k: u32) -> Solve {
    let n = p.pow(k);
    let rows = a.len();
    let mut m: Vec<Vec<u64>> = a.iter().map(|r| r.iter().map(|x| x % n).collect()).collect();
    let mut rhs: Vec<u64> = b.iter().map(|x| x % n).collect();
    // column operations are recorded in v (x = v y)
    let mut v: Vec<Vec<u64>> = (0..ncols).map(|i| (0..ncols).map(|j| (i == j) as u64).collect()).collect();
    let mut pivots: Vec<u32> = Vec::new();
    let mut r = 0;
    while r < rows.min(ncols) {
        // minimal valuation in the remaining block
        let mut best: Option<(u32, usize, usize)> = None;
        for (i, row) in m.iter().enumerate().skip(r) {
            for (j, &x) in row.iter().enumerate().skip(r) {
                let val = valuation(x, p, k);
                if val < k && best.is_none_or(|(bv, _, _)| val < bv) {
                    best = Some((val, i, j));
                }
            }
        }
        let Some((val, pi, pj)) = best else { break };
        m.swap(r, pi);
        rhs.swap(r, pi);
        for row in m.iter_mut() {
            row.swap(r, pj);
        }
        for row in v.iter_mut() {
            row.swap(r, pj);
        }
        let pv = m[r][r];
        let unit = pv / p.pow(val);
        let uinv = inv_mod(unit, n).expect("unit");
        // normalize the pivot to p^val
        for x in m[r].iter_mut() {
            *x = mul_mod(*x, uinv, n);
        }
        rhs[r] = mul_mod(rhs[r], uinv, n);
        let pp = p.pow(val);
        for i in 0..rows {
            if i == r || m[i][r] == 0 {
                continue;
            }
            let f = m[i][r] / pp;
            for j in 0..ncols {
                m[i][j] = (m[i][j] + n - mul_mod(f, m[r][j], n)) % n;
            }
            rhs[i] = (rhs[i] + n - mul_mod(f, rhs[r], n)) % n;
        }
        for j in 0..ncols {
            if j == r || m[r][j] == 0 {
                continue;
            }
            let f = m[r][j] / pp;
            m[r][j] = 0;
            for row in v.iter_mut() {
                row[j] = (row[j] + n - mul_mod(f, row[r], n)) % n;
            }
        }
        pivots.push(val);
        r += 1;
    }
    let mut y = vec![0u64; ncols];
    for (i, &val) in pivots.iter().enumerate() {
        let pp = p.pow(val);
        if rhs[i] % pp != 0 {
            return Solve::Inconsistent { residue: rhs[i] % pp, modulus: pp };
        }
        y[i] = rhs[i] / pp;
    }
    for &x in rhs.iter().skip(pivots.len()) {
        if x != 0 {
            return Solve::Inconsistent { residue: x, modulus: n };
        }
    }
    let x: Vec<u64> = (0..ncols).map(|i| (0..ncols).fold(0, |acc, j| (acc + mul_mod(v[i][j], y[j], n)) % n)).collect();
    Solve::Solution(x)
}

/// One solution of `A x ≡ b (mod n)` with `ncols` unknowns.
pub fn solve_mod(a: &[Vec<u64>], b: &[u64], ncols: usize, n: u64) -> Solve {
    assert_eq!(a.len(), b.len());
    if n == 1 {
        return Solve::Solution(vec![0; ncols]);
    }
    let mut acc: Vec<u64> = vec![0; ncols];
    let mut modulus = 1u64;
    for (p, k) in factor(n) {
        let pk = p.pow(k);
        match solve_prime_power(a, b, ncols, p, k) {
            Solve::Solution(x) => {
                // CRT merge of acc (mod modulus) with x (mod pk)
                let inv = inv_mod(modulus % pk, pk).unwrap_or(0);
                for (s, xi) in acc.iter_mut().zip(x) {
                    let diff = (xi + pk - *s % pk) % pk;
                    let t = mul_mod(diff, inv, pk);
                    *s += modulus * t;
                }
                modulus *= pk;
            }
            bad => return bad,
        }
    }
    Solve::Solution(acc)
}

/// Lexicographically least solution, found by fixing coordinates one at a
/// time. Only meant for small `n` and few unknowns.
pub fn solve_lex_least(a: &[Vec<u64>], b: &[u64], ncols: usize, n: u64) -> Option<Vec<u64>> {
    solve_mod(a, b, ncols, n).solution()?;
    let mut fixed: Vec<u64> = Vec::new();
    for c in 0..ncols {
        let mut found = false;
        for val in 0..n {
            // move fixed columns to the right-hand side
            let mut rows: Vec<Vec<u64>> = Vec::new();
            let mut rhs: Vec<u64> = Vec::new();
            for (row, &bi) in a.iter().zip(b) {
                let mut r = bi % n;
                for (j, &fj) in fixed.iter().chain(std::iter::once(&val)).enumerate() {
                    r = (r + n - mul_mod(row[j] % n, fj, n)) % n;
                }
                rows.push(row[c + 1..].to_vec());
                rhs.push(r);
            }
            if solve_mod(&rows, &rhs, ncols - c - 1, n).solution().is_some() {
                fixed.push(val);
                found = true;
                break;
            }
        }
        if !found {
            return None;
        }
    }
    Some(fixed)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn check(a: &[Vec<u64>], b: &[u64], x: &[u64], n: u64) -> bool {
        a.iter().zip(b).all(|(row, &bi)| row.iter().zip(x).fold(0, |acc, (r, xi)| (acc + mul_mod(*r, *xi, n)) % n) == bi % n)
    }

    /// Exhaustive search for tiny systems.
    fn brute(a: &[Vec<u64>], b: &[u64], ncols: usize, n: u64) -> Option<Vec<u64>> {
        let total = n.pow(ncols as u32);
        (0..total).map(|mut t| {
            (0..ncols).map(|_| { let d = t % n; t /= n; d }).collect::<Vec<u64>>()
        }).filter(|x| check(a, b, x, n)).min()
    }

    #[test]
    fn basics() {
        assert_eq!(inv_mod(3, 8), Some(3));
        assert_eq!(inv_mod(2, 8), None);
        assert_eq!(factor(360), vec![(2, 3), (3, 2), (5, 1)]);
        // 2x ≡ 1 mod 4 has no solution
        assert!(matches!(solve_mod(&[vec![2]], &[1], 1, 4), Solve::Inconsistent { .. }));
        let x = solve_mod(&[vec![2, 0], vec![0, 3]], &[2, 3], 2, 12).solution().unwrap();
        assert!(check(&[vec![2, 0], vec![0, 3]], &[2, 3], &x, 12));
    }

    proptest! {
        #[test]
        fn agrees_with_brute_force(
            n in prop::sample::select(vec![2u64, 4, 6, 8, 9, 12]),
            rows in 1usize..4,
            cols in 1usize..4,
            seed in proptest::collection::vec(0u64..1000, 16),
        ) {
            let a: Vec<Vec<u64>> = (0..rows).map(|i| (0..cols).map(|j| seed[i * 4 + j] % n).collect()).collect();
            let b: Vec<u64> = (0..rows).map(|i| seed[12 + i] % n).collect();
            let expect = brute(&a, &b, cols, n);
            let got = solve_mod(&a, &b, cols, n).solution();
            prop_assert_eq!(expect.is_some(), got.is_some());
            if let Some(x) = got {
                prop_assert!(check(&a, &b, &x, n));
            }
            prop_assert_eq!(solve_lex_least(&a, &b, cols, n), expect);
        }
    }
}
