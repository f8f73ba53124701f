//! Characters of the weight lattice `P = ℤ^l + ℤ·s`, `s = (½,…,½)`, with
//! values in a cyclic group of order `M = 2^K`. These model the 2-power
//! torsion of the maximal torus of the simply connected group.

use std::collections::BTreeSet;
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::group::{FiniteGroup, GroupElement};
use crate::levi::{Decomposition, Root};
use crate::signed::SignedPerm;
use crate::zmod;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct TorusChar {
    #[serde(rename = "K")]
    pub k: u32,
    pub a: Vec<u64>,
    pub b: u64,
}

impl TorusChar {
    pub fn modulus(&self) -> u64 {
        1 << self.k
    }

    pub fn identity(l: usize, k: u32) -> Self {
        TorusChar { k, a: vec![0; l], b: 0 }
    }

    pub fn new(k: u32, a: Vec<u64>, b: u64) -> Result<Self> {
        let m = 1u64 << k;
        let a: Vec<u64> = a.into_iter().map(|x| x % m).collect();
        let b = b % m;
        let sum = a.iter().fold(0, |s, x| (s + x) % m);
        if (2 * b) % m != sum {
            return Err(Error::InvalidArgument(format!("2b != sum(a) mod {m}")));
        }
        Ok(TorusChar { k, a, b })
    }

    pub fn rank(&self) -> usize {
        self.a.len()
    }

    pub fn is_identity(&self) -> bool {
        self.b == 0 && self.a.iter().all(|&x| x == 0)
    }

    pub fn pow(&self, e: u64) -> Self {
        let m = self.modulus();
        TorusChar {
            k: self.k,
            a: self.a.iter().map(|&x| zmod::mul_mod(x, e, m)).collect(),
            b: zmod::mul_mod(self.b, e, m),
        }
    }

    /// Value exponent at an integral vector `Σ c_i e_i`.
    pub fn eval(&self, v: &[i32]) -> u64 {
        let m = self.modulus() as i64;
        let s: i64 = v.iter().zip(&self.a).map(|(&c, &x)| c as i64 * x as i64).sum();
        s.rem_euclid(m) as u64
    }

    /// Value exponent at the weight `(½ε₁, …, ½ε_l)` given by its negative
    /// coordinates: `s − Σ_{i∈neg} e_i`.
    pub fn eval_weight(&self, neg: impl Iterator<Item = usize>) -> u64 {
        let m = self.modulus();
        neg.fold(self.b, |acc, i| (acc + m - self.a[i]) % m)
    }

    pub fn order(&self) -> u64 {
        let mut n = 1;
        let mut x = self.clone();
        while !x.is_identity() {
            x = x.op(self);
            n += 1;
        }
        n
    }
}

impl fmt::Debug for TorusChar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "T[a={:?}, b={} mod {}]", self.a, self.b, self.modulus())
    }
}

impl GroupElement for TorusChar {
    fn op(&self, o: &Self) -> Self {
        let m = self.modulus();
        TorusChar {
            k: self.k,
            a: self.a.iter().zip(&o.a).map(|(x, y)| (x + y) % m).collect(),
            b: (self.b + o.b) % m,
        }
    }
    fn inverse(&self) -> Self {
        let m = self.modulus();
        TorusChar { k: self.k, a: self.a.iter().map(|x| (m - x) % m).collect(), b: (m - self.b) % m }
    }
}

/// `h_α(ω^c)` for `α ∈ Φ̄` (short roots `±e_i` included).
pub fn h_root(alpha: &[i32], c: u64, k: u32) -> TorusChar {
    let l = alpha.len();
    let m = 1u64 << k;
    let c = c % m;
    let neg = |x: u64| (m - x) % m;
    let supp: Vec<usize> = (0..l).filter(|&i| alpha[i] != 0).collect();
    let mut a = vec![0u64; l];
    let b;
    match supp.as_slice() {
        [i] => {
            let c = if alpha[*i] > 0 { c } else { neg(c) };
            a[*i] = (2 * c) % m;
            b = c;
        }
        [i, j] => {
            let (si, sj) = (alpha[*i], alpha[*j]);
            if si == sj {
                let c = if si > 0 { c } else { neg(c) };
                a[*i] = c;
                a[*j] = c;
                b = c;
            } else {
                a[*i] = if si > 0 { c } else { neg(c) };
                a[*j] = if sj > 0 { c } else { neg(c) };
                b = 0;
            }
        }
        _ => panic!("not a root: {alpha:?}"),
    }
    TorusChar { k, a, b }
}

/// Contragredient action `(w·χ)(λ) = χ(w⁻¹λ)`.
pub fn weyl_act(w: &SignedPerm, chi: &TorusChar) -> TorusChar {
    let m = chi.modulus();
    let winv = w.inverse();
    let l = chi.rank();
    let mut a = vec![0u64; l];
    let mut b = chi.b;
    for (i, ai) in a.iter_mut().enumerate() {
        let (j, neg) = winv.apply(i);
        *ai = if neg { (m - chi.a[j]) % m } else { chi.a[j] };
        if neg {
            // w⁻¹s = s − Σ_{negated} e_{j}
            b = (b + m - chi.a[j]) % m;
        }
    }
    TorusChar { k: chi.k, a, b }
}

pub type TorusSubgroup = FiniteGroup<TorusChar>;

/// Fixed model parameters: rank, modulus exponent and the odd prime power `q`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TorusModel {
    pub rank: usize,
    pub k: u32,
    pub q: u64,
}

pub fn v2(mut n: u64) -> u32 {
    let mut v = 0;
    while n % 2 == 0 && n > 0 {
        n /= 2;
        v += 1;
    }
    v
}

impl TorusModel {
    /// `K = v₂(q−1) + 3`, enough room for `ζ` and the half-weights.
    pub fn new(rank: usize, q: u64) -> Result<Self> {
        if q % 2 == 0 || q < 3 {
            return Err(Error::InvalidArgument(format!("q = {q} must be odd and at least 3")));
        }
        Ok(TorusModel { rank, k: v2(q - 1) + 3, q })
    }

    pub fn with_k(rank: usize, k: u32, q: u64) -> Self {
        TorusModel { rank, k, q }
    }

    pub fn m(&self) -> u64 {
        1 << self.k
    }
    /// exponent of `−1`
    pub fn minus_one(&self) -> u64 {
        self.m() / 2
    }
    /// exponent of `ϖ`, a fixed element of order 4
    pub fn varpi(&self) -> u64 {
        self.m() / 4
    }
    /// exponent of `ζ` with `ζ^{(q−1)₂} = ϖ`
    pub fn zeta(&self) -> u64 {
        (self.m() / 4) >> v2(self.q - 1)
    }

    pub fn one(&self) -> TorusChar {
        TorusChar::identity(self.rank, self.k)
    }

    pub fn unit(&self, i: usize) -> Root {
        let mut v = vec![0; self.rank];
        v[i] = 1;
        v
    }

    pub fn h(&self, alpha: &[i32], c: u64) -> TorusChar {
        h_root(alpha, c, self.k)
    }

    /// `h_{e_i}(ω^c)`, 0-based `i`
    pub fn h_e(&self, i: usize, c: u64) -> TorusChar {
        self.h(&self.unit(i), c)
    }

    /// `h_I(t) = ∏_{i∈I} h_{e_i}(t)`, 0-based indices
    pub fn h_set(&self, set: &[usize], c: u64) -> TorusChar {
        set.iter().fold(self.one(), |acc, &i| acc.op(&self.h_e(i, c)))
    }

    pub fn h0(&self) -> TorusChar {
        self.h_e(0, self.minus_one())
    }

    pub fn group(&self, gens: Vec<TorusChar>) -> TorusSubgroup {
        FiniteGroup::generate(self.one(), gens)
    }

    /// `H₀ = ⟨h₀, h_{e_i}(ϖ)h_{e_j}(−ϖ)⟩`
    pub fn h_zero(&self) -> TorusSubgroup {
        let mut gens = vec![self.h0()];
        let mv = (self.varpi() + self.minus_one()) % self.m();
        for i in 0..self.rank {
            for j in 0..self.rank {
                if i != j {
                    gens.push(self.h_e(i, self.varpi()).op(&self.h_e(j, mv)));
                }
            }
        }
        self.group(gens)
    }

    /// `H̃_I = ⟨h_{e_i}(ϖ) | i ∈ I⟩`
    pub fn h_tilde_set(&self, set: &[usize]) -> TorusSubgroup {
        self.group(set.iter().map(|&i| self.h_e(i, self.varpi())).collect())
    }

    /// `H_I = ⟨h₀, h_{±e_i±e_j}(−1) | i ≠ j ∈ I⟩`
    pub fn h_set_group(&self, set: &[usize]) -> TorusSubgroup {
        let mut gens = vec![self.h0()];
        for &i in set {
            for &j in set {
                if i < j {
                    for (si, sj) in [(1, 1), (1, -1)] {
                        let mut v = vec![0; self.rank];
                        v[i] = si;
                        v[j] = sj;
                        gens.push(self.h(&v, self.minus_one()));
                    }
                }
            }
        }
        self.group(gens)
    }

    /// `Z(G) = ⟨h₀, h_{l̲}(ϖ)⟩`
    pub fn center(&self) -> TorusSubgroup {
        let all: Vec<usize> = (0..self.rank).collect();
        self.group(vec![self.h0(), self.h_set(&all, self.varpi())])
    }

    /// Every character trivial on all roots of `Φ`, by brute force over
    /// the whole modeled torus.
    pub fn center_brute_force(&self) -> Vec<TorusChar> {
        let m = self.m();
        let l = self.rank;
        let roots = crate::levi::RootSystem { rank: l }.roots();
        let mut out = Vec::new();
        let total = m.pow(l as u32);
        for mut t in 0..total {
            let a: Vec<u64> = (0..l)
                .map(|_| {
                    let d = t % m;
                    t /= m;
                    d
                })
                .collect();
            let sum = a.iter().sum::<u64>() % m;
            for b in [sum / 2, sum / 2 + m / 2] {
                if sum % 2 != 0 {
                    continue;
                }
                let chi = TorusChar { k: self.k, a: a.clone(), b: b % m };
                if roots.iter().all(|r| chi.eval(r) == 0) {
                    out.push(chi);
                }
            }
        }
        out
    }

    /// Lang map on torus 2-parts: `χ ↦ χ^{q−1}`.
    pub fn lang2(&self, chi: &TorusChar) -> TorusChar {
        chi.pow(self.q - 1)
    }

    /// Lexicographically least `(c_1, …, c_r)` with
    /// `lang2(∏ h_{β_i}(ω^{c_i})) = target`, the `β_i` spanning the allowed
    /// one-parameter subgroups.
    pub fn lang2_preimage(&self, target: &TorusChar, directions: &[Root]) -> Result<(Vec<u64>, TorusChar)> {
        let m = self.m();
        let units: Vec<TorusChar> = directions.iter().map(|d| self.h(d, 1)).collect();
        let qm1 = (self.q - 1) % m;
        // coordinates a_1..a_l, b as equations
        let mut rows: Vec<Vec<u64>> = Vec::new();
        let mut rhs = Vec::new();
        for coord in 0..=self.rank {
            let get = |t: &TorusChar| if coord < self.rank { t.a[coord] } else { t.b };
            rows.push(units.iter().map(|u| zmod::mul_mod(get(u), qm1, m)).collect());
            rhs.push(get(target));
        }
        let sol = zmod::solve_lex_least(&rows, &rhs, units.len(), m)
            .ok_or_else(|| Error::NoWitness(format!("no Lang preimage of {target:?} with K = {}", self.k)))?;
        let t = units.iter().zip(&sol).fold(self.one(), |acc, (u, &c)| acc.op(&u.pow(c)));
        debug_assert_eq!(self.lang2(&t), *target);
        Ok((sol, t))
    }

    /// Whether every element of `h` is trivial on every root in `phi`.
    pub fn check_central(&self, h: &TorusSubgroup, phi: &[Root]) -> bool {
        h.gens().iter().all(|chi| phi.iter().all(|r| chi.eval(r) == 0))
    }

    /// Subgroups attached to a decomposition.
    pub fn subgroup_h(&self, dec: &Decomposition) -> HData {
        let vp = self.varpi();
        let mv = (vp + self.minus_one()) % self.m();
        let zero = |o: &crate::levi::Orbit| -> Vec<usize> { o.elems.iter().map(|x| x - 1).collect() };
        let h_zero = self.h_zero();
        let mut h_tilde_d = Vec::new();
        let mut h_d = Vec::new();
        for d in dec.d_set() {
            let orbs = dec.orbits_of(d);
            let mut gt = vec![self.h0()];
            let mut g = vec![self.h0()];
            for o in &orbs {
                gt.push(self.h_set(&zero(o), vp));
                for o2 in &orbs {
                    g.push(self.h_set(&zero(o), vp).op(&self.h_set(&zero(o2), mv)));
                }
            }
            h_tilde_d.push((d, self.group(gt)));
            h_d.push((d, self.group(g)));
        }
        let span = |pred: &dyn Fn(i32) -> bool| -> TorusSubgroup {
            let gens: Vec<TorusChar> =
                h_tilde_d.iter().filter(|(d, _)| pred(*d)).flat_map(|(_, g)| g.gens().to_vec()).collect();
            self.group(gens).intersection(&h_zero)
        };
        let h = span(&|_| true);
        let h_even = span(&|d| d % 2 == 0);
        let h_odd = span(&|d| d % 2 != 0);
        HData { h_zero, h_tilde_d, h_d, h, h_even, h_odd, z_g: self.center() }
    }
}

/// `H₀`, `H̃_d`, `H_d`, `H`, `H_even`, `H_odd` and `Z(G)`.
pub struct HData {
    pub h_zero: TorusSubgroup,
    pub h_tilde_d: Vec<(i32, TorusSubgroup)>,
    pub h_d: Vec<(i32, TorusSubgroup)>,
    pub h: TorusSubgroup,
    pub h_even: TorusSubgroup,
    pub h_odd: TorusSubgroup,
    pub z_g: TorusSubgroup,
}

/// How `H` decomposes into its even and odd parts.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HSplit {
    pub order_h: usize,
    pub order_even: usize,
    pub order_odd: usize,
    pub intersection: usize,
    pub commuting: bool,
    pub generating: bool,
    /// intersection is contained in `⟨h₀⟩`
    pub meet_in_h0: bool,
    pub direct: bool,
}

impl HData {
    pub fn split(&self, model: &TorusModel) -> HSplit {
        let (e, o) = (&self.h_even, &self.h_odd);
        let meet = e.intersection(o);
        let h0 = model.group(vec![model.h0()]);
        let prod = model.group(e.gens().iter().chain(o.gens()).cloned().collect());
        let commuting = e.gens().iter().all(|x| o.gens().iter().all(|y| x.op(y) == y.op(x)));
        let generating = prod.same_elements(&self.h);
        HSplit {
            order_h: self.h.order(),
            order_even: e.order(),
            order_odd: o.order(),
            intersection: meet.order(),
            commuting,
            generating,
            meet_in_h0: meet.is_subgroup_of(&h0),
            direct: self.h.is_internal_direct_product(e, o),
        }
    }
}

/// `h_0 = h_I(ζ) ∏_{i≠j} h_{e_i−e_j}(ζ^{−2})` with `ζ` of order `2|I|₂`.
pub fn h0_product_holds(model: &TorusModel, set: &[usize]) -> bool {
    let n = set.len() as u64;
    let two_part = 1u64 << v2(n);
    let m = model.m();
    if 2 * two_part > m {
        return false;
    }
    let c = m / (2 * two_part);
    let j = set[0];
    let mut acc = model.h_set(set, c);
    for &i in &set[1..] {
        let mut r = vec![0; model.rank];
        r[i] = 1;
        r[j] = -1;
        acc = acc.op(&model.h(&r, (m - (2 * c) % m) % m));
    }
    acc == model.h0()
}

/// Structure of the centre: order and whether it is cyclic.
pub fn center_summary(model: &TorusModel) -> (usize, bool) {
    let z = model.center();
    let cyclic = z.elements().iter().any(|x| x.order() as usize == z.order());
    (z.order(), cyclic)
}

/// Set of characters as a sorted set, for comparisons.
pub fn as_set(g: &TorusSubgroup) -> BTreeSet<TorusChar> {
    g.elements().iter().cloned().collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::levi::{all_normalized, decompose, normalize_levi};
    use proptest::prelude::*;

    fn model(l: usize) -> TorusModel {
        TorusModel::new(l, 3).unwrap()
    }

    #[test]
    fn h_root_rules() {
        let t = model(3);
        let h0 = t.h0();
        assert_eq!(h0.a, vec![0, 0, 0]);
        assert_eq!(h0.b, t.m() / 2);
        let hv = t.h_set(&[0, 2], t.varpi());
        assert_eq!(hv.a, vec![t.m() / 2, 0, t.m() / 2]);
        assert_eq!(hv.b, t.m() / 2);
        // every h_root is a well-defined character
        for r in (crate::levi::RootSystem { rank: 3 }).roots_b() {
            for c in 0..t.m() {
                let x = t.h(&r, c);
                assert!(TorusChar::new(x.k, x.a.clone(), x.b).is_ok());
                let neg: Vec<i32> = r.iter().map(|v| -v).collect();
                assert_eq!(t.h(&neg, c), x.inverse());
            }
        }
    }

    #[test]
    fn weyl_act_examples() {
        let t = model(2);
        let x = t.h_e(0, t.varpi());
        assert_eq!(weyl_act(&SignedPerm::identity(2), &x), x);
        assert_eq!(weyl_act(&SignedPerm::flip(2, 0), &x), x.inverse());
        assert_eq!(weyl_act(&SignedPerm::transposition(2, 0, 1), &x), t.h_e(1, t.varpi()));
    }

    #[test]
    fn weyl_act_matches_coroot_transport() {
        // w · h_α(t) = h_{wα}(t) for every root and every w ∈ W(B_3)
        let t = model(3);
        let wb = crate::signed::weyl_b(3, 1000).unwrap();
        for w in wb.elements() {
            for r in (crate::levi::RootSystem { rank: 3 }).roots_b() {
                let x = t.h(&r, 1);
                assert_eq!(weyl_act(w, &x), t.h(&w.act_vec(&r), 1));
            }
            assert_eq!(weyl_act(w, &t.h0()), t.h0());
        }
    }

    #[test]
    fn subgroup_orders() {
        for l in 2..=6 {
            let t = model(l);
            assert_eq!(t.h_zero().order(), 1 << l);
            for n in 1..=l {
                let set: Vec<usize> = (0..n).collect();
                assert_eq!(t.h_tilde_set(&set).order(), 1 << (n + 1));
                assert_eq!(t.h_set_group(&set).order(), 1 << n);
            }
            // h_I(ϖ) ∈ H₀ iff |I| even
            let h0 = t.h_zero();
            for n in 1..=l {
                let set: Vec<usize> = (0..n).collect();
                assert_eq!(h0.contains(&t.h_set(&set, t.varpi())), n % 2 == 0);
            }
        }
    }

    #[test]
    fn center_examples() {
        assert_eq!(center_summary(&model(4)), (4, false));
        assert_eq!(center_summary(&model(5)), (4, true));
        for l in 4..=7 {
            let small = TorusModel::with_k(l, 2, 3);
            let brute: BTreeSet<TorusChar> = small.center_brute_force().into_iter().collect();
            assert_eq!(brute, as_set(&small.center()), "l={l}");
        }
    }

    #[test]
    fn h_is_central_and_splits() {
        for l in 4..=6 {
            let t = model(l);
            for lv in all_normalized(l) {
                let d = decompose(&lv);
                let hd = t.subgroup_h(&d);
                assert!(t.check_central(&hd.h, &d.phi_prime));
                let sp = hd.split(&t);
                assert!(sp.generating && sp.commuting && sp.meet_in_h0, "{:?}", lv.delta);
                // both parts contain h₀ as soon as both parities occur
                let both = d.d_set().iter().any(|x| x % 2 == 0) && d.d_set().iter().any(|x| x % 2 != 0);
                assert_eq!(sp.direct, !both, "{:?}", lv.delta);
                for (_, g) in &hd.h_d {
                    assert!(g.contains(&t.h0()));
                }
            }
        }
    }

    #[test]
    fn check_central_negative() {
        let t = model(4);
        let d = decompose(&normalize_levi(4, &[1, 3]).unwrap().0);
        let all: Vec<usize> = (0..4).collect();
        assert!(!t.check_central(&t.h_tilde_set(&all), &d.phi_prime));
        assert!(t.check_central(&t.group(vec![]), &d.phi_prime));
    }

    #[test]
    fn h0_product_identity() {
        for q in [3, 5, 7, 9] {
            let t = TorusModel::new(8, q).unwrap();
            for n in [2usize, 4, 6, 8] {
                let set: Vec<usize> = (0..n).collect();
                assert!(h0_product_holds(&t, &set), "q={q} n={n}");
            }
        }
    }

    #[test]
    fn lang_map_examples() {
        let t = TorusModel::new(3, 3).unwrap();
        assert_eq!(t.lang2(&t.h_e(0, t.varpi())), t.h0());
        assert_eq!(t.lang2(&t.one()), t.one());
        // L(h_Q(ζ)) = h_Q(ϖ) when (q−1)/(q−1)₂ ≡ 1 mod 4
        for q in [3u64, 5, 9, 17] {
            let t = TorusModel::new(4, q).unwrap();
            for q_set in [vec![0usize], vec![0, 1], vec![0, 1, 2, 3]] {
                assert_eq!(t.lang2(&t.h_set(&q_set, t.zeta())), t.h_set(&q_set, t.varpi()));
            }
        }
        // otherwise the two sides differ by h₀^{|Q|}
        let t = TorusModel::new(4, 7).unwrap();
        for q_set in [vec![0usize], vec![0, 1], vec![0, 1, 2]] {
            let lhs = t.lang2(&t.h_set(&q_set, t.zeta()));
            let rhs = t.h_set(&q_set, t.varpi()).op(&t.h0().pow(q_set.len() as u64));
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn lang_preimages() {
        for q in [3u64, 5, 7] {
            let t = TorusModel::new(4, q).unwrap();
            // t_I ∈ T_I ∩ L⁻¹(h₀) for I = {1, 2}
            let dirs = vec![t.unit(0), t.unit(1)];
            let (c, w) = t.lang2_preimage(&t.h0(), &dirs).unwrap();
            assert_eq!(t.lang2(&w), t.h0());
            assert_eq!(c.len(), 2);
            // h_l(ϖ) has a preimage in h_l(·)
            let all = vec![vec![1, 1, 1, 1]];
            let _ = all;
            let dirs: Vec<Root> = (0..4).map(|i| t.unit(i)).collect();
            let target = t.h_set(&[0, 1, 2, 3], t.varpi());
            let (_, w) = t.lang2_preimage(&target, &dirs).unwrap();
            assert_eq!(t.lang2(&w), target);
        }
        // with K too small no preimage of h₀ exists along e₁ when q ≡ 1 mod 4
        let t = TorusModel::with_k(2, 2, 5);
        assert!(t.lang2_preimage(&t.h0(), &[t.unit(0)]).is_err());
    }

    proptest! {
        #[test]
        fn characters_form_an_abelian_group(a in proptest::collection::vec(0u64..32, 4), b in proptest::collection::vec(0u64..32, 4), s in 0u64..2, t in 0u64..2) {
            let mk = |v: Vec<u64>, half: u64| {
                let v: Vec<u64> = v.into_iter().map(|x| x * 2 % 32).collect();
                let sum: u64 = v.iter().sum::<u64>() % 32;
                TorusChar::new(5, v, sum / 2 + 16 * half).unwrap()
            };
            let x = mk(a, s);
            let y = mk(b, t);
            prop_assert_eq!(x.op(&y), y.op(&x));
            prop_assert_eq!(x.op(&x.inverse()), TorusChar::identity(4, 5));
            prop_assert_eq!(32 % x.order(), 0);
        }

        #[test]
        fn weyl_act_is_an_action(p in Just((0..4).collect::<Vec<usize>>()).prop_shuffle(), s in proptest::collection::vec(any::<bool>(), 4), c in 0u64..32) {
            let t = TorusModel::with_k(4, 5, 3);
            let w = SignedPerm::from_pairs(&p.into_iter().zip(s).collect::<Vec<_>>());
            let x = t.h(&[1, -1, 0, 0], c).op(&t.h_e(2, 3));
            let w2 = w.op(&w);
            prop_assert_eq!(weyl_act(&w2, &x), weyl_act(&w, &weyl_act(&w, &x)));
            prop_assert_eq!(weyl_act(&w, &t.h0()), t.h0());
        }
    }
}
