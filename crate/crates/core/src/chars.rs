//! Character tables over a prime field.
//!
//! Tables come from the class-algebra method: the central characters are
//! the common eigenvectors of the class multiplication matrices, computed
//! over `F_p` with `p ≡ 1 (mod exp G)` and `p > 2|G|`. Every multiplicity
//! and inner product is then an honest integer below `p`.

use std::collections::HashMap;

use crate::error::{invalid, precondition, Error, Result};
use crate::group::{FiniteGroup, GroupElement};
use crate::zmod::{self, inv_mod, pow_mod, Solve};

pub const MAX_TABLE_ORDER: usize = 50_000;
pub const MAX_CLASSES: usize = 300;

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Smallest prime `p > 2·order` with `p ≡ 1 (mod exponent)`.
pub fn table_prime(order: usize, exponent: u64) -> u64 {
    let lo = 2 * order as u64 + 1;
    let mut p = (lo.div_ceil(exponent)) * exponent + 1;
    while !is_prime(p) {
        p += exponent;
    }
    p
}

fn primitive_root(p: u64) -> u64 {
    let fs = zmod::factor(p - 1);
    (2..p).find(|&g| fs.iter().all(|&(q, _)| pow_mod(g, (p - 1) / q, p) != 1)).unwrap_or(1)
}

fn inv(a: u64, p: u64) -> u64 {
    inv_mod(a % p, p).expect("nonzero mod p")
}

/// Row-reduce in place; returns pivot columns.
fn rref(m: &mut [Vec<u64>], p: u64) -> Vec<usize> {
    let rows = m.len();
    let cols = if rows == 0 { 0 } else { m[0].len() };
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(pr) = (r..rows).find(|&i| m[i][c] != 0) else { continue };
        m.swap(r, pr);
        let f = inv(m[r][c], p);
        for x in m[r].iter_mut() {
            *x = *x * f % p;
        }
        for i in 0..rows {
            if i != r && m[i][c] != 0 {
                let f = m[i][c];
                for j in 0..cols {
                    m[i][j] = (m[i][j] + p - f * m[r][j] % p) % p;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// Basis of `{x : m x = 0}`.
fn kernel(m: &[Vec<u64>], ncols: usize, p: u64) -> Vec<Vec<u64>> {
    let mut a = m.to_vec();
    let piv = rref(&mut a, p);
    let free: Vec<usize> = (0..ncols).filter(|c| !piv.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![0u64; ncols];
            v[f] = 1;
            for (r, &pc) in piv.iter().enumerate() {
                v[pc] = (p - a[r][f]) % p;
            }
            v
        })
        .collect()
}

/// Characteristic polynomial (coefficients from the constant term up) via
/// reduction to Hessenberg form.
fn charpoly(mut a: Vec<Vec<u64>>, p: u64) -> Vec<u64> {
    let n = a.len();
    for j in 0..n.saturating_sub(2) {
        let Some(i) = (j + 1..n).find(|&i| a[i][j] != 0) else { continue };
        if i != j + 1 {
            a.swap(i, j + 1);
            for row in a.iter_mut() {
                row.swap(i, j + 1);
            }
        }
        let pinv = inv(a[j + 1][j], p);
        for i in j + 2..n {
            let u = a[i][j] * pinv % p;
            if u == 0 {
                continue;
            }
            for c in 0..n {
                a[i][c] = (a[i][c] + p - u * a[j + 1][c] % p) % p;
            }
            for row in a.iter_mut() {
                row[j + 1] = (row[j + 1] + u * row[i]) % p;
            }
        }
    }
    // p_m = (x − h_mm) p_{m−1} − Σ_i h_im (h_{m,m−1} ⋯ h_{i+1,i}) p_{i−1}
    let mut polys: Vec<Vec<u64>> = vec![vec![1]];
    for m in 0..n {
        let prev = &polys[m];
        let mut next = vec![0u64; m + 2];
        for (d, &c) in prev.iter().enumerate() {
            next[d + 1] = (next[d + 1] + c) % p;
            next[d] = (next[d] + p - a[m][m] * c % p) % p;
        }
        let mut t = 1u64;
        for i in (0..m).rev() {
            t = t * a[i + 1][i] % p;
            let coef = a[i][m] * t % p;
            for (d, &c) in polys[i].iter().enumerate() {
                next[d] = (next[d] + p - coef * c % p) % p;
            }
        }
        polys.push(next);
    }
    polys.pop().unwrap()
}

fn roots(poly: &[u64], p: u64) -> Vec<u64> {
    (0..p)
        .filter(|&x| poly.iter().rev().fold(0, |acc, &c| (acc * x + c) % p) == 0)
        .collect()
}

/// Irreducible characters of a finite group, values in `F_p`.
#[derive(Debug, Clone)]
pub struct CharTable<E: GroupElement> {
    group: FiniteGroup<E>,
    pub p: u64,
    root: u64,
    pub class_sizes: Vec<usize>,
    /// class of the inverses of the elements of each class
    pub inverse_class: Vec<usize>,
    /// `irr[χ][k] = χ(g_k)`; the trivial character comes first
    pub irr: Vec<Vec<u64>>,
    pub degrees: Vec<u64>,
}

impl<E: GroupElement> CharTable<E> {
    pub fn new(g: &FiniteGroup<E>) -> Result<Self> {
        Self::with_prime(g, table_prime(g.order(), g.exponent()))
    }

    /// Table over a given prime, so that tables of a group and its
    /// subgroups can be compared directly.
    pub fn with_prime(g: &FiniteGroup<E>, p: u64) -> Result<Self> {
        let n = g.order();
        if n > MAX_TABLE_ORDER {
            return Err(Error::CapExceeded { what: "character table".into(), cap: MAX_TABLE_ORDER });
        }
        let e = g.exponent();
        if !is_prime(p) || (p - 1) % e != 0 || p <= 2 * n as u64 {
            return invalid(format!("prime {p} unusable for a group of order {n} and exponent {e}"));
        }
        let group = g.clone();
        let cl = group.classes().clone();
        let r = cl.len();
        if r > MAX_CLASSES {
            return Err(Error::CapExceeded { what: "conjugacy classes".into(), cap: MAX_CLASSES });
        }
        let class_sizes = cl.sizes();
        let inverse_class: Vec<usize> =
            (0..r).map(|k| group.class_of(&group.element(cl.rep(k)).inverse())).collect();

        // (A_j)_{ik} = #{x ∈ C_j : x⁻¹ z_k ∈ C_i}
        let class_matrix = |j: usize| -> Vec<Vec<u64>> {
            let mut a = vec![vec![0u64; r]; r];
            for k in 0..r {
                let z = group.element(cl.rep(k));
                for &xi in &cl.members[j] {
                    let y = group.element(xi).inverse().op(z);
                    a[cl.class_of[group.index_of(&y).unwrap()]][k] += 1;
                }
            }
            a
        };
        let mut mats: Vec<Option<Vec<Vec<u64>>>> = vec![None; r];

        // split F_p^r into common eigenspaces; bases kept in RREF
        let mut done: Vec<Vec<u64>> = Vec::new();
        let mut todo: Vec<Vec<Vec<u64>>> = vec![(0..r).map(|i| (0..r).map(|j| (i == j) as u64).collect()).collect()];
        while let Some(mut basis) = todo.pop() {
            if basis.len() == 1 {
                done.push(basis.pop().unwrap());
                continue;
            }
            let piv = rref(&mut basis, p);
            let dim = basis.len();
            let mut split = None;
            for j in 1..r {
                let a = mats[j].get_or_insert_with(|| class_matrix(j));
                // X[s][t] = (A b_t)[piv_s]
                let x: Vec<Vec<u64>> = (0..dim)
                    .map(|s| {
                        (0..dim)
                            .map(|t| (0..r).fold(0, |acc, k| (acc + a[piv[s]][k] * basis[t][k]) % p))
                            .collect()
                    })
                    .collect();
                let scalar = (0..dim).all(|s| (0..dim).all(|t| x[s][t] == if s == t { x[0][0] } else { 0 }));
                if scalar {
                    continue;
                }
                let mut parts = Vec::new();
                for mu in roots(&charpoly(x.clone(), p), p) {
                    let shifted: Vec<Vec<u64>> = (0..dim)
                        .map(|s| (0..dim).map(|t| (x[s][t] + if s == t { p - mu } else { 0 }) % p).collect())
                        .collect();
                    let ker = kernel(&shifted, dim, p);
                    let sub: Vec<Vec<u64>> = ker
                        .iter()
                        .map(|c| (0..r).map(|k| (0..dim).fold(0, |acc, t| (acc + c[t] * basis[t][k]) % p)).collect())
                        .collect();
                    parts.push(sub);
                }
                if parts.iter().map(|s| s.len()).sum::<usize>() != dim {
                    return precondition("class algebra does not split over the chosen prime");
                }
                split = Some(parts);
                break;
            }
            match split {
                Some(parts) => todo.extend(parts),
                None => return precondition("common eigenspace of dimension > 1"),
            }
        }

        let order = n as u64 % p;
        let mut irr = Vec::with_capacity(r);
        let mut degrees = Vec::with_capacity(r);
        for mut w in done {
            let f = inv(w[0], p);
            for x in w.iter_mut() {
                *x = *x * f % p;
            }
            // χ(1)² = |G| / Σ_k ω_k ω_{k'} / |C_k|
            let s = (0..r).fold(0, |acc, k| (acc + w[k] * w[inverse_class[k]] % p * inv(class_sizes[k] as u64, p)) % p);
            if s == 0 {
                return precondition("degenerate central character");
            }
            let d2 = order * inv(s, p) % p;
            let d = (1..=(n as f64).sqrt() as u64 + 1)
                .find(|d| d * d % p == d2)
                .ok_or_else(|| Error::Precondition("character degree not an integer".into()))?;
            irr.push((0..r).map(|k| w[k] * (d % p) % p * inv(class_sizes[k] as u64, p) % p).collect::<Vec<u64>>());
            degrees.push(d);
        }
        let mut order_idx: Vec<usize> = (0..r).collect();
        order_idx.sort_by(|&a, &b| {
            let triv = |i: usize| irr[i].iter().any(|&v| v != 1);
            (triv(a), degrees[a], &irr[a]).cmp(&(triv(b), degrees[b], &irr[b]))
        });
        let irr: Vec<Vec<u64>> = order_idx.iter().map(|&i| irr[i].clone()).collect();
        let degrees: Vec<u64> = order_idx.iter().map(|&i| degrees[i]).collect();
        let root = primitive_root(p);
        Ok(CharTable { group, p, root, class_sizes, inverse_class, irr, degrees })
    }

    pub fn group(&self) -> &FiniteGroup<E> {
        &self.group
    }

    pub fn order(&self) -> usize {
        self.group.order()
    }

    pub fn num_classes(&self) -> usize {
        self.class_sizes.len()
    }

    pub fn class_of(&self, x: &E) -> usize {
        self.group.class_of(x)
    }

    /// `⟨χ, ψ⟩` as an integer below `p`.
    pub fn inner(&self, chi: &[u64], psi: &[u64]) -> u64 {
        let p = self.p;
        let s = (0..self.num_classes())
            .fold(0, |acc, k| (acc + self.class_sizes[k] as u64 % p * chi[k] % p * psi[self.inverse_class[k]]) % p);
        s * inv(self.order() as u64, p) % p
    }

    /// Multiplicities of the irreducibles in a class function.
    pub fn decompose(&self, f: &[u64]) -> Vec<u64> {
        self.irr.iter().map(|chi| self.inner(f, chi)).collect()
    }

    /// Index of the irreducible character with these class values.
    pub fn find(&self, f: &[u64]) -> Option<usize> {
        self.irr.iter().position(|chi| chi.as_slice() == f)
    }

    pub fn value(&self, chi: &[u64], x: &E) -> u64 {
        chi[self.class_of(x)]
    }

    /// Class function evaluated on every element, in element order.
    pub fn elementwise(&self, chi: &[u64]) -> Vec<u64> {
        self.group.classes().class_of.iter().map(|&k| chi[k]).collect()
    }

    /// Class values of an element-indexed function, or `None` when it is
    /// not constant on classes.
    pub fn class_values(&self, f: &[u64]) -> Option<Vec<u64>> {
        let cl = self.group.classes();
        let out: Vec<u64> = (0..cl.len()).map(|k| f[cl.rep(k)]).collect();
        cl.class_of.iter().enumerate().all(|(i, &k)| f[i] == out[k]).then_some(out)
    }

    /// Class map from a subgroup's table into this one.
    pub fn fusion(&self, sub: &CharTable<E>) -> Result<Vec<usize>> {
        if sub.p != self.p {
            return invalid("tables over different primes");
        }
        if !sub.group.is_subgroup_of(&self.group) {
            return precondition("not a subgroup");
        }
        let cl = sub.group.classes();
        Ok((0..cl.len()).map(|d| self.class_of(sub.group.element(cl.rep(d)))).collect())
    }

    pub fn restrict(&self, chi: &[u64], sub: &CharTable<E>) -> Result<Vec<u64>> {
        Ok(self.fusion(sub)?.iter().map(|&k| chi[k]).collect())
    }

    /// `θ^G` for a class function `θ` of a subgroup.
    pub fn induce(&self, theta: &[u64], sub: &CharTable<E>) -> Result<Vec<u64>> {
        let p = self.p;
        let fuse = self.fusion(sub)?;
        let mut sums = vec![0u64; self.num_classes()];
        for (d, &k) in fuse.iter().enumerate() {
            sums[k] = (sums[k] + sub.class_sizes[d] as u64 % p * theta[d]) % p;
        }
        let idx = self.order() as u64 % p * inv(sub.order() as u64, p) % p;
        Ok((0..self.num_classes())
            .map(|k| sums[k] * idx % p * inv(self.class_sizes[k] as u64, p) % p)
            .collect())
    }

    /// Exponents `t` with `χ(g_k) = ρ^t` for a primitive `m`-th root `ρ`,
    /// when `χ` is linear of order dividing `m`.
    pub fn linear_exponents(&self, chi: &[u64], m: u64) -> Option<Vec<u64>> {
        if (self.p - 1) % m != 0 {
            return None;
        }
        let rho = pow_mod(self.root, (self.p - 1) / m, self.p);
        let powers: HashMap<u64, u64> = {
            let mut acc = 1u64;
            (0..m)
                .map(|t| {
                    let v = acc;
                    acc = acc * rho % self.p;
                    (v, t)
                })
                .collect()
        };
        chi.iter().map(|v| powers.get(v).copied()).collect()
    }

    /// The value `ρ^t` for a primitive `m`-th root of unity `ρ`.
    pub fn root_power(&self, m: u64, t: u64) -> u64 {
        pow_mod(pow_mod(self.root, (self.p - 1) / m, self.p), t % m, self.p)
    }

    /// Permutation of the irreducibles under conjugation by `x`, which must
    /// normalize the group: `(x·χ)(g) = χ(x⁻¹ g x)`.
    pub fn conjugate(&self, chi: &[u64], x: &E) -> Vec<u64> {
        let xi = x.inverse();
        let act = self.group.class_action(&xi);
        (0..self.num_classes()).map(|k| chi[act[k]]).collect()
    }
}

/// Constituents of `χ^K` of degree `χ(1)`, i.e. the extensions of a
/// `K`-invariant `χ ∈ Irr(N)` to `K`.
pub fn extensions<E: GroupElement>(n: &CharTable<E>, chi: &[u64], k: &CharTable<E>) -> Result<Vec<usize>> {
    if !k.group().gens().iter().all(|x| n.group().normalizes(x, n.group())) {
        return precondition("normal subgroup expected");
    }
    if k.group().gens().iter().any(|x| n.conjugate(chi, x) != chi) {
        return precondition("character is not invariant");
    }
    let ind = k.induce(chi, n)?;
    let d = chi[0];
    Ok((0..k.irr.len()).filter(|&i| k.irr[i][0] == d && k.inner(&ind, &k.irr[i]) > 0).collect())
}

pub fn extends_to<E: GroupElement>(n: &CharTable<E>, chi: &[u64], k: &CharTable<E>) -> Result<bool> {
    Ok(!extensions(n, chi, k)?.is_empty())
}

/// Result of the linear extension problem for `λ: H → ℤ/m`, `H ◁ K`.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub enum LinearExtension {
    /// `values[c]` is the extension on the coset representative `reps[c]`
    /// (so it is `values[c] + λ(h)` on `reps[c]·h`).
    Witness { values: Vec<u64> },
    /// The cocycle is not a coboundary; the residue is the obstruction
    /// left after elimination.
    Obstruction { residue: u64, modulus: u64 },
}

impl LinearExtension {
    pub fn is_witness(&self) -> bool {
        matches!(self, LinearExtension::Witness { .. })
    }
}

/// Coset bookkeeping for `K = ⊔ t_c H`.
pub struct Cosets<E: GroupElement> {
    pub reps: Vec<E>,
    coset: HashMap<E, (usize, E)>,
}

impl<E: GroupElement> Cosets<E> {
    pub fn new(h: &FiniteGroup<E>, k: &FiniteGroup<E>) -> Self {
        let mut coset = HashMap::new();
        let mut reps = Vec::new();
        for x in k.elements() {
            if coset.contains_key(x) {
                continue;
            }
            for y in h.elements() {
                coset.insert(x.op(y), (reps.len(), y.clone()));
            }
            reps.push(x.clone());
        }
        Cosets { reps, coset }
    }

    /// `x = t_c h`, returned as `(c, h)`.
    pub fn split(&self, x: &E) -> &(usize, E) {
        &self.coset[x]
    }
}

/// Solve for a homomorphism `f: K → ℤ/m` extending `λ` on `H ◁ K`.
///
/// With `f(t_c h) = u_c + λ(h)` the homomorphism condition on a generator
/// `g` reads `u_{c'} = u_c + f(g) − λ(t_{c'}⁻¹ g t_c)` where `g t_c ∈ t_{c'} H`.
/// A spanning tree of the coset graph expresses every `u_c` in the unknowns
/// `f(g)`; the remaining edges give a linear system mod `m`.
pub fn linear_ext_cocycle<E, F>(h: &FiniteGroup<E>, k: &FiniteGroup<E>, lambda: F, m: u64) -> Result<LinearExtension>
where
    E: GroupElement,
    F: Fn(&E) -> u64,
{
    if !h.is_subgroup_of(k) || !k.is_normal(h) {
        return precondition("H is not normal in K");
    }
    for g in k.gens() {
        for x in h.gens() {
            if lambda(&g.conj(x)) % m != lambda(x) % m {
                return precondition("λ is not K-invariant");
            }
        }
    }
    let cos = Cosets::new(h, k);
    let n = cos.reps.len();
    let gens = k.gens();
    let ng = gens.len();
    // affine forms: coefficients over f(g) plus constant
    let mut form: Vec<Option<(Vec<u64>, u64)>> = vec![None; n];
    form[0] = Some((vec![0; ng], 0));
    let mut queue = std::collections::VecDeque::from([0usize]);
    let mut rows: Vec<Vec<u64>> = Vec::new();
    let mut rhs: Vec<u64> = Vec::new();
    let mut seen = std::collections::HashSet::new();
    while let Some(c) = queue.pop_front() {
        let (fc, kc) = form[c].clone().unwrap();
        for (gi, g) in gens.iter().enumerate() {
            let (c2, hh) = cos.split(&g.op(&cos.reps[c]));
            let mut coeffs = fc.clone();
            coeffs[gi] = (coeffs[gi] + 1) % m;
            let konst = (kc + m - lambda(hh) % m) % m;
            match &form[*c2] {
                None => {
                    form[*c2] = Some((coeffs, konst));
                    queue.push_back(*c2);
                }
                Some((f2, k2)) => {
                    // coeffs·y + konst = f2·y + k2
                    let row: Vec<u64> = coeffs.iter().zip(f2).map(|(a, b)| (a + m - b) % m).collect();
                    let b = (k2 + m - konst) % m;
                    if row.iter().all(|&x| x == 0) && b == 0 {
                        continue;
                    }
                    if seen.insert((row.clone(), b)) {
                        rows.push(row);
                        rhs.push(b);
                    }
                }
            }
        }
    }
    match zmod::solve_mod(&rows, &rhs, ng, m) {
        Solve::Inconsistent { residue, modulus } => Ok(LinearExtension::Obstruction { residue, modulus }),
        Solve::Solution(y) => {
            let values = form
                .iter()
                .map(|f| {
                    let (co, kc) = f.as_ref().expect("coset graph connected");
                    co.iter().zip(&y).fold(*kc, |acc, (a, b)| (acc + a * b) % m)
                })
                .collect();
            Ok(LinearExtension::Witness { values })
        }
    }
}

/// Evaluate a witness on an arbitrary element of `K`.
pub fn eval_witness<E: GroupElement, F: Fn(&E) -> u64>(cos: &Cosets<E>, values: &[u64], lambda: F, m: u64, x: &E) -> u64 {
    let (c, h) = cos.split(x);
    (values[*c] + lambda(h)) % m
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::Perm;
    use crate::small;
    use proptest::prelude::*;

    fn sorted_degrees<E: GroupElement>(t: &CharTable<E>) -> Vec<u64> {
        let mut d = t.degrees.clone();
        d.sort_unstable();
        d
    }

    fn check_orthogonality<E: GroupElement>(t: &CharTable<E>) {
        let r = t.num_classes();
        assert_eq!(t.irr.len(), r);
        assert_eq!(t.degrees.iter().map(|d| d * d).sum::<u64>(), t.order() as u64);
        for i in 0..r {
            for j in 0..r {
                assert_eq!(t.inner(&t.irr[i], &t.irr[j]), (i == j) as u64);
            }
        }
        // column orthogonality: Σ_χ χ(g_k) χ(g_l⁻¹) = |C_G(g_k)| δ_kl
        let p = t.p;
        for k in 0..r {
            for l in 0..r {
                let s = t.irr.iter().fold(0, |acc, chi| (acc + chi[k] * chi[t.inverse_class[l]]) % p);
                let expect = if k == l { (t.order() / t.class_sizes[k]) as u64 % p } else { 0 };
                assert_eq!(s, expect);
            }
        }
    }

    #[test]
    fn small_tables() {
        let c2 = CharTable::new(&small::cyclic(2)).unwrap();
        assert_eq!(c2.degrees, vec![1, 1]);
        let s3 = CharTable::new(&small::symmetric(3)).unwrap();
        assert_eq!(sorted_degrees(&s3), vec![1, 1, 2]);
        let d8 = CharTable::new(&small::dihedral(4)).unwrap();
        assert_eq!(sorted_degrees(&d8), vec![1, 1, 1, 1, 2]);
        let q8 = CharTable::new(&small::quaternion()).unwrap();
        assert_eq!(sorted_degrees(&q8), vec![1, 1, 1, 1, 2]);
        let s4 = CharTable::new(&small::symmetric(4)).unwrap();
        assert_eq!(sorted_degrees(&s4), vec![1, 1, 2, 3, 3]);
        let s5 = CharTable::new(&small::symmetric(5)).unwrap();
        assert_eq!(sorted_degrees(&s5), vec![1, 1, 4, 4, 5, 5, 6]);
        for t in [&s3, &d8, &q8, &s4, &s5] {
            check_orthogonality(t);
            assert!(t.irr[0].iter().all(|&v| v == 1));
        }
    }

    #[test]
    fn restriction_and_induction() {
        let g = small::dihedral(4);
        let gt = CharTable::new(&g).unwrap();
        let refl = Perm(vec![0, 3, 2, 1]);
        let h = g.subgroup(vec![refl]);
        let ht = CharTable::with_prime(&h, gt.p).unwrap();
        let ind = gt.induce(&ht.irr[0], &ht).unwrap();
        assert_eq!(ind[0], 4);
        // Frobenius reciprocity for every pair
        for theta in &ht.irr {
            let ind = gt.induce(theta, &ht).unwrap();
            for chi in &gt.irr {
                let res = gt.restrict(chi, &ht).unwrap();
                assert_eq!(gt.inner(&ind, chi), ht.inner(theta, &res));
            }
        }
        assert_eq!(gt.restrict(&gt.irr[3], &gt).unwrap(), gt.irr[3]);
        let outside = small::cyclic(4).subgroup(vec![Perm(vec![1, 2, 3, 0])]);
        let ot = CharTable::with_prime(&outside, gt.p).unwrap();
        assert!(gt.fusion(&ot).is_err() == !outside.is_subgroup_of(&g));
    }

    #[test]
    fn center_of_q8_does_not_extend() {
        let q = small::quaternion();
        let qt = CharTable::new(&q).unwrap();
        let z = q.filter(|x| q.element_order(x) <= 2);
        let zt = CharTable::with_prime(&z, qt.p).unwrap();
        let faithful = zt.irr.iter().find(|c| c.iter().any(|&v| v != 1)).unwrap().clone();
        assert!(!extends_to(&zt, &faithful, &qt).unwrap());
        assert!(extends_to(&zt, &zt.irr[0], &qt).unwrap());
        let m = q.exponent();
        let lam = |x: &Perm| zt.linear_exponents(&faithful, m).unwrap()[zt.class_of(x)];
        let out = linear_ext_cocycle(&z, &q, lam, m).unwrap();
        assert!(matches!(out, LinearExtension::Obstruction { residue, .. } if residue != 0));
    }

    #[test]
    fn center_of_d8_does_not_extend() {
        let g = small::dihedral(4);
        let gt = CharTable::new(&g).unwrap();
        let z = g.derived_subgroup();
        assert_eq!(z.order(), 2);
        let zt = CharTable::with_prime(&z, gt.p).unwrap();
        assert!(!extends_to(&zt, &zt.irr[1], &gt).unwrap());
        // the degree-two character restricts to twice the sign of the centre
        let two = gt.degrees.iter().position(|&d| d == 2).unwrap();
        let res = gt.restrict(&gt.irr[two], &zt).unwrap();
        assert_eq!(zt.inner(&res, &zt.irr[1]), 2);
    }

    #[test]
    fn cyclic_quotient_always_extends() {
        // N = A₃ in S₃ and N = C₄ in D₈: invariant characters extend
        for (g, n) in [(small::symmetric(3), 3usize), (small::dihedral(4), 4)] {
            let rot = Perm((0..n as u32).map(|i| (i + 1) % n as u32).chain(n as u32..g.identity().degree() as u32).collect());
            let gt = CharTable::new(&g).unwrap();
            let sub = g.subgroup(vec![rot]);
            assert_eq!(g.order() / sub.order(), 2);
            let nt = CharTable::with_prime(&sub, gt.p).unwrap();
            for chi in &nt.irr {
                if g.gens().iter().all(|x| nt.conjugate(chi, x) == *chi) {
                    assert!(extends_to(&nt, chi, &gt).unwrap());
                }
            }
        }
    }

    #[test]
    fn trivial_h_extends_trivially() {
        let g = small::symmetric(3);
        let h = FiniteGroup::trivial(g.identity().clone());
        let out = linear_ext_cocycle(&h, &g, |_| 0, 6).unwrap();
        assert!(out.is_witness());
    }

    /// The cocycle solver agrees with the table test on every linear
    /// character of every normal subgroup of some small groups, and the
    /// witnesses are homomorphisms.
    #[test]
    fn cocycle_agrees_with_tables() {
        let groups = vec![
            small::quaternion(),
            small::dihedral(4),
            small::symmetric(4),
            small::direct_product(&small::cyclic(4), &small::cyclic(2)),
            small::wreath(&small::cyclic(2), 3),
        ];
        for g in groups {
            let gt = CharTable::new(&g).unwrap();
            let m = g.exponent();
            // normal closures of single elements
            let mut normals: Vec<FiniteGroup<Perm>> = Vec::new();
            for x in g.elements() {
                let n = g.normal_closure(vec![x.clone()]);
                if !normals.iter().any(|o| o.same_elements(&n)) {
                    normals.push(n);
                }
            }
            for n in normals {
                let nt = CharTable::with_prime(&n, gt.p).unwrap();
                for chi in nt.irr.iter().filter(|c| c[0] == 1) {
                    if g.gens().iter().any(|x| nt.conjugate(chi, x) != *chi) {
                        continue;
                    }
                    let ex = nt.linear_exponents(chi, m).unwrap();
                    let lam = |x: &Perm| ex[nt.class_of(x)];
                    let sol = linear_ext_cocycle(&n, &g, lam, m).unwrap();
                    let by_table = gt.irr.iter().any(|psi| psi[0] == 1 && gt.restrict(psi, &nt).unwrap() == *chi);
                    assert_eq!(sol.is_witness(), by_table);
                    assert_eq!(extends_to(&nt, chi, &gt).unwrap(), by_table);
                    if let LinearExtension::Witness { values } = sol {
                        let cos = Cosets::new(&n, &g);
                        for a in g.elements() {
                            for b in g.gens() {
                                let f = |x: &Perm| eval_witness(&cos, &values, lam, m, x);
                                assert_eq!(f(&a.op(b)), (f(a) + f(b)) % m);
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn charpoly_of_companion() {
        // companion matrix of x² − 3x + 2 over F_7
        let a = vec![vec![0, 5], vec![1, 3]];
        assert_eq!(charpoly(a, 7), vec![2, 4, 1]);
        assert_eq!(roots(&[2, 4, 1], 7), vec![1, 2]);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]
        /// Tables of random 2-generated permutation groups on 5 points
        /// satisfy both orthogonality relations.
        #[test]
        fn random_groups_orthogonal(
            v in Just((0..5u32).collect::<Vec<u32>>()).prop_shuffle(),
            w in Just((0..5u32).collect::<Vec<u32>>()).prop_shuffle(),
        ) {
            let g = FiniteGroup::generate(Perm::identity(5), vec![Perm(v), Perm(w)]);
            let t = CharTable::new(&g).unwrap();
            check_orthogonality(&t);
        }
    }
}
