//! Weighted signed permutation groups `𝒮_{±M}`, their type-D subgroups,
//! Young-like subgroups, the embeddings `κ̄_d` and the relative Weyl group
//! of a standard Levi datum.

use std::collections::{BTreeMap, HashSet};
use std::fmt;

use serde::Serialize;

use crate::error::{invalid, Error, Result};
use crate::group::{FiniteGroup, GroupElement, Perm};
use crate::levi::{Decomposition, Orbit, Root, RootSystem};

/// Signed permutation of `0..n`: `img[i] = ±(j+1)` means `i ↦ ±j`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SignedPerm {
    img: Vec<i8>,
}

impl SignedPerm {
    pub fn identity(n: usize) -> Self {
        SignedPerm { img: (1..=n as i8).collect() }
    }

    /// From `(target, negated)` pairs.
    pub fn from_pairs(pairs: &[(usize, bool)]) -> Self {
        let img: Vec<i8> = pairs.iter().map(|&(j, neg)| if neg { -(j as i8 + 1) } else { j as i8 + 1 }).collect();
        let p = SignedPerm { img };
        debug_assert!(p.is_valid());
        p
    }

    /// From 1-based signed images, e.g. `[2, -1]` for `(1,2,−1,−2)`.
    pub fn from_signed(img: &[i8]) -> Result<Self> {
        let p = SignedPerm { img: img.to_vec() };
        if !p.is_valid() {
            return invalid(format!("{img:?} is not a signed permutation"));
        }
        Ok(p)
    }

    fn is_valid(&self) -> bool {
        let n = self.img.len();
        let mut seen = vec![false; n];
        for &x in &self.img {
            let j = x.unsigned_abs() as usize;
            if x == 0 || j > n || seen[j - 1] {
                return false;
            }
            seen[j - 1] = true;
        }
        true
    }

    pub fn degree(&self) -> usize {
        self.img.len()
    }

    /// `(j, negated)` with `i ↦ ±j`.
    pub fn apply(&self, i: usize) -> (usize, bool) {
        let x = self.img[i];
        (x.unsigned_abs() as usize - 1, x < 0)
    }

    pub fn target(&self, i: usize) -> usize {
        self.apply(i).0
    }

    pub fn negates(&self, i: usize) -> bool {
        self.img[i] < 0
    }

    pub fn signed_images(&self) -> &[i8] {
        &self.img
    }

    /// `(i,j)(−i,−j)`
    pub fn transposition(n: usize, i: usize, j: usize) -> Self {
        let mut p = Self::identity(n);
        p.img[i] = j as i8 + 1;
        p.img[j] = i as i8 + 1;
        p
    }

    /// `(i,−i)`
    pub fn flip(n: usize, i: usize) -> Self {
        let mut p = Self::identity(n);
        p.img[i] = -p.img[i];
        p
    }

    pub fn flips(n: usize, pts: &[usize]) -> Self {
        let mut p = Self::identity(n);
        for &i in pts {
            p.img[i] = -p.img[i];
        }
        p
    }

    pub fn num_negated(&self) -> usize {
        self.img.iter().filter(|&&x| x < 0).count()
    }

    /// Underlying unsigned permutation.
    pub fn unsigned(&self) -> Perm {
        Perm(self.img.iter().map(|&x| x.unsigned_abs() as u32 - 1).collect())
    }

    /// Action on integer vectors: `e_i ↦ ±e_j`.
    pub fn act_vec(&self, v: &[i32]) -> Vec<i32> {
        let mut out = vec![0; v.len()];
        for (i, &c) in v.iter().enumerate() {
            let (j, neg) = self.apply(i);
            out[j] += if neg { -c } else { c };
        }
        out
    }

    /// Restriction to the labels in `pts` (which must be a union of cycles),
    /// renumbered in the given order.
    pub fn restrict(&self, pts: &[usize]) -> Self {
        let pos: BTreeMap<usize, usize> = pts.iter().enumerate().map(|(k, &i)| (i, k)).collect();
        let pairs: Vec<(usize, bool)> = pts
            .iter()
            .map(|&i| {
                let (j, neg) = self.apply(i);
                (pos[&j], neg)
            })
            .collect();
        Self::from_pairs(&pairs)
    }

    /// Cycle notation with 1-based labels, e.g. `(1,2)(-1,-2)(3,-3)`.
    pub fn cycle_string(&self) -> String {
        let n = self.img.len() as i32;
        let mut seen = HashSet::new();
        let mut out = String::new();
        let f = |x: i32| -> i32 {
            let y = self.img[x.unsigned_abs() as usize - 1] as i32;
            if x < 0 {
                -y
            } else {
                y
            }
        };
        for start in (1..=n).flat_map(|i| [i, -i]) {
            if seen.contains(&start) {
                continue;
            }
            let mut cyc = vec![start];
            seen.insert(start);
            let mut x = f(start);
            while x != start {
                seen.insert(x);
                cyc.push(x);
                x = f(x);
            }
            if cyc.len() > 1 {
                let s: Vec<String> = cyc.iter().map(|c| c.to_string()).collect();
                out.push_str(&format!("({})", s.join(",")));
            }
        }
        if out.is_empty() {
            "()".into()
        } else {
            out
        }
    }
}

impl fmt::Debug for SignedPerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.cycle_string())
    }
}

impl fmt::Display for SignedPerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.cycle_string())
    }
}

impl Serialize for SignedPerm {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.img.serialize(s)
    }
}

impl GroupElement for SignedPerm {
    fn op(&self, other: &Self) -> Self {
        let img = other
            .img
            .iter()
            .map(|&x| {
                let y = self.img[x.unsigned_abs() as usize - 1];
                if x < 0 {
                    -y
                } else {
                    y
                }
            })
            .collect();
        SignedPerm { img }
    }

    fn inverse(&self) -> Self {
        let mut img = vec![0i8; self.img.len()];
        for (i, &x) in self.img.iter().enumerate() {
            let j = x.unsigned_abs() as usize - 1;
            img[j] = if x < 0 { -(i as i8 + 1) } else { i as i8 + 1 };
        }
        SignedPerm { img }
    }
}

/// Labels `0..n` with weights; `-1` tags `J_{−1}` and counts as odd.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct WeightedSet {
    pub weights: Vec<i32>,
}

impl WeightedSet {
    pub fn new(weights: Vec<i32>) -> Result<Self> {
        if weights.iter().any(|&w| w == 0 || w < -1) {
            return invalid("weights must be positive or -1");
        }
        Ok(WeightedSet { weights })
    }

    pub fn uniform(n: usize) -> Self {
        WeightedSet { weights: vec![1; n] }
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn is_odd(&self, i: usize) -> bool {
        self.weights[i] % 2 != 0
    }

    pub fn has_odd(&self) -> bool {
        (0..self.len()).any(|i| self.is_odd(i))
    }

    /// Labels grouped by weight, in label order.
    pub fn classes(&self) -> BTreeMap<i32, Vec<usize>> {
        let mut m: BTreeMap<i32, Vec<usize>> = BTreeMap::new();
        for (i, &w) in self.weights.iter().enumerate() {
            m.entry(w).or_default().push(i);
        }
        m
    }

    pub fn full_order(&self) -> u128 {
        self.classes().values().map(|c| (1u128 << c.len()) * (1..=c.len() as u128).product::<u128>()).product()
    }

    pub fn preserves(&self, p: &SignedPerm) -> bool {
        (0..self.len()).all(|i| self.weights[p.target(i)] == self.weights[i])
    }
}

pub type SignedPermGroup = FiniteGroup<SignedPerm>;

/// Default cap on enumerated group orders.
pub const GROUP_CAP: usize = 10_000_000;

/// `𝒮_{±M}` for a weighted set.
pub fn full_group(ws: &WeightedSet, cap: usize) -> Result<SignedPermGroup> {
    let order = ws.full_order();
    if order > cap as u128 {
        return Err(Error::CapExceeded { what: format!("S_±M with weights {:?}", ws.weights), cap });
    }
    let n = ws.len();
    let mut gens = Vec::new();
    for pts in ws.classes().values() {
        for w in pts.windows(2) {
            gens.push(SignedPerm::transposition(n, w[0], w[1]));
        }
        gens.push(SignedPerm::flip(n, pts[0]));
    }
    FiniteGroup::closure(SignedPerm::identity(n), gens, cap)
}

/// Type-D condition: an even number of odd-weight labels change sign.
pub fn in_d(p: &SignedPerm, ws: &WeightedSet) -> bool {
    (0..ws.len()).filter(|&i| ws.is_odd(i) && p.negates(i)).count() % 2 == 0
}

pub fn d_subgroup(g: &SignedPermGroup, ws: &WeightedSet) -> SignedPermGroup {
    g.filter(|p| in_d(p, ws))
}

/// Young-like subgroup `𝒴_J` (or `𝒴_{±J}` when `signed`) for a partition
/// `J` of the labels; only weight-preserving moves are included.
pub fn young(ws: &WeightedSet, parts: &[Vec<usize>], signed: bool) -> Result<SignedPermGroup> {
    let n = ws.len();
    let mut seen = vec![false; n];
    for b in parts {
        for &i in b {
            if i >= n || seen[i] {
                return invalid("blocks do not form a partition of the labels");
            }
            seen[i] = true;
        }
    }
    if seen.iter().any(|s| !s) {
        return invalid("blocks do not cover the labels");
    }
    Ok(FiniteGroup::generate(SignedPerm::identity(n), young_gens(ws, parts, signed)))
}

pub fn young_gens(ws: &WeightedSet, parts: &[Vec<usize>], signed: bool) -> Vec<SignedPerm> {
    let n = ws.len();
    let mut gens = Vec::new();
    for b in parts {
        let mut by_w: BTreeMap<i32, Vec<usize>> = BTreeMap::new();
        for &i in b {
            by_w.entry(ws.weights[i]).or_default().push(i);
        }
        for pts in by_w.values() {
            for w in pts.windows(2) {
                gens.push(SignedPerm::transposition(n, w[0], w[1]));
            }
            if signed {
                gens.push(SignedPerm::flip(n, pts[0]));
            }
        }
    }
    gens
}

/// `κ̄_d(π)` on `{1..l}` (0-based labels): `I_{d,j}(k) ↦ ε·I_{d,π(j)}(k)`.
pub fn kappa_bar(d: i32, dec: &Decomposition, pi: &SignedPerm) -> Result<SignedPerm> {
    if d == -1 {
        return invalid("kappa_bar is undefined for d = -1");
    }
    let orbs = dec.orbits_of(d);
    if pi.degree() != orbs.len() {
        return invalid(format!("expected a signed permutation of {} points", orbs.len()));
    }
    let l = dec.rank();
    let mut pairs: Vec<(usize, bool)> = (0..l).map(|i| (i, false)).collect();
    for (j, o) in orbs.iter().enumerate() {
        let (pj, neg) = pi.apply(j);
        for (k, &x) in o.elems.iter().enumerate() {
            pairs[x - 1] = (orbs[pj].elems[k] - 1, neg);
        }
    }
    Ok(SignedPerm::from_pairs(&pairs))
}

/// Reflection `s_α` for `α ∈ Φ̄` as a signed permutation of `{1..l}`.
pub fn reflection(alpha: &[i32]) -> SignedPerm {
    let l = alpha.len();
    let mut pairs: Vec<(usize, bool)> = (0..l).map(|i| (i, false)).collect();
    let supp: Vec<usize> = (0..l).filter(|&i| alpha[i] != 0).collect();
    match supp.as_slice() {
        [i] => pairs[*i] = (*i, true),
        [i, j] => {
            // s_α(e_i) = e_i − ⟨e_i, α^∨⟩α
            let neg = alpha[*i] * alpha[*j] > 0;
            pairs[*i] = (*j, neg);
            pairs[*j] = (*i, neg);
        }
        _ => panic!("not a root: {alpha:?}"),
    }
    SignedPerm::from_pairs(&pairs)
}

/// Relative Weyl group data for a decomposition: the orbits in report
/// order (sorted by weight, then minimal element), their weighted set, the
/// full group `𝒮_{±𝒪}` and its D-subgroup.
#[derive(Debug, Clone)]
pub struct RelWeyl {
    pub orbits: Vec<Orbit>,
    pub weights: WeightedSet,
    pub full: SignedPermGroup,
    pub d: SignedPermGroup,
}

pub fn sorted_orbits(dec: &Decomposition) -> Vec<Orbit> {
    let mut orbs = dec.orbits.clone();
    orbs.sort_by_key(|o| (o.weight, o.min()));
    orbs
}

pub fn rel_weyl(dec: &Decomposition) -> Result<RelWeyl> {
    let orbits = sorted_orbits(dec);
    let weights = WeightedSet::new(orbits.iter().map(|o| o.weight).collect())?;
    let full = full_group(&weights, GROUP_CAP)?;
    let d = d_subgroup(&full, &weights);
    Ok(RelWeyl { orbits, weights, full, d })
}

/// `W(B_l)` acting on `{1..l}`.
pub fn weyl_b(l: usize, cap: usize) -> Result<SignedPermGroup> {
    full_group(&WeightedSet::uniform(l), cap)
}

/// Output of the brute-force relative Weyl group computation.
pub struct RelWeylOracle {
    pub stab_b: SignedPermGroup,
    pub stab_d: SignedPermGroup,
    pub w_levi: SignedPermGroup,
    pub quotient_b: FiniteGroup<Perm>,
    pub quotient_d: FiniteGroup<Perm>,
}

/// Full enumeration of `Stab_{W(B_l)}(Φ′)` and `Stab_{W(D_l)}(Φ′)` modulo
/// `W_{Φ′}`.
pub fn rel_weyl_oracle(dec: &Decomposition, cap: usize) -> Result<RelWeylOracle> {
    let l = dec.rank();
    let wb = weyl_b(l, cap)?;
    let phi: HashSet<Root> = dec.phi_prime.iter().cloned().collect();
    let rs = RootSystem { rank: l };
    let delta: Vec<Root> = dec.levi.delta.iter().map(|&i| rs.simple(i)).collect();
    let stab_b = wb.filter(|w| delta.iter().all(|a| phi.contains(&w.act_vec(a))));
    let stab_d = stab_b.filter(|w| w.num_negated() % 2 == 0);
    let w_levi = FiniteGroup::generate(SignedPerm::identity(l), delta.iter().map(|a| reflection(a)).collect());
    let (quotient_b, _) = stab_b.quotient(&w_levi)?;
    let (quotient_d, _) = stab_d.quotient(&w_levi)?;
    Ok(RelWeylOracle { stab_b, stab_d, w_levi, quotient_b, quotient_d })
}

/// Orbit-labelling map `Stab(Φ′) → 𝒮_{±𝒪}` for the report orbit order.
/// Type-A orbits and singletons carry the common sign of their points;
/// `J_{−1}` carries the parity of its negations.
pub fn orbit_label(w: &SignedPerm, orbits: &[Orbit]) -> Option<SignedPerm> {
    let mut pairs = Vec::with_capacity(orbits.len());
    for o in orbits {
        let tgt = w.target(o.elems[0] - 1) + 1;
        let j = orbits.iter().position(|p| p.elems.contains(&tgt))?;
        if orbits[j].elems.len() != o.elems.len() {
            return None;
        }
        let neg = if o.weight == -1 {
            o.elems.iter().filter(|&&x| w.negates(x - 1)).count() % 2 == 1
        } else {
            let negs: Vec<bool> = o.elems.iter().map(|&x| w.negates(x - 1)).collect();
            if negs.iter().any(|&b| b != negs[0]) {
                return None;
            }
            negs[0]
        };
        for &x in &o.elems {
            if !orbits[j].elems.contains(&(w.target(x - 1) + 1)) {
                return None;
            }
        }
        pairs.push((j, neg));
    }
    Some(SignedPerm::from_pairs(&pairs))
}

/// Result of comparing `rel_weyl` with the oracle.
#[derive(Debug, Clone, Serialize)]
pub struct RelWeylCheck {
    pub order_b: usize,
    pub order_d: usize,
    pub oracle_b: usize,
    pub oracle_d: usize,
    pub kernel_is_levi_weyl: bool,
    pub image_b_matches: bool,
    pub image_d_matches: bool,
}

impl RelWeylCheck {
    pub fn ok(&self) -> bool {
        self.order_b == self.oracle_b
            && self.order_d == self.oracle_d
            && self.kernel_is_levi_weyl
            && self.image_b_matches
            && self.image_d_matches
    }
}

pub fn check_rel_weyl(dec: &Decomposition, cap: usize) -> Result<RelWeylCheck> {
    let rw = rel_weyl(dec)?;
    let or = rel_weyl_oracle(dec, cap)?;
    let label = |w: &SignedPerm| orbit_label(w, &rw.orbits);
    // the labelling map must be defined and multiplicative on the stabilizer
    let mut hom = true;
    for g in or.stab_b.gens() {
        for x in or.stab_b.elements() {
            match (label(g), label(x), label(&g.op(x))) {
                (Some(a), Some(b), Some(c)) => hom &= a.op(&b) == c,
                _ => hom = false,
            }
        }
    }
    let id = SignedPerm::identity(rw.orbits.len());
    let kernel = or.stab_b.filter(|w| label(w).as_ref() == Some(&id));
    let image_b: HashSet<SignedPerm> = or.stab_b.elements().iter().filter_map(label).collect();
    let image_d: HashSet<SignedPerm> = or.stab_d.elements().iter().filter_map(label).collect();
    let same = |img: &HashSet<SignedPerm>, g: &SignedPermGroup| img.len() == g.order() && g.elements().iter().all(|x| img.contains(x));
    Ok(RelWeylCheck {
        order_b: rw.full.order(),
        order_d: rw.d.order(),
        oracle_b: or.quotient_b.order(),
        oracle_d: or.quotient_d.order(),
        kernel_is_levi_weyl: hom && kernel.same_elements(&or.w_levi),
        image_b_matches: hom && same(&image_b, &rw.full),
        image_d_matches: hom && same(&image_d, &rw.d),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::levi::{decompose, normalize_levi};
    use proptest::prelude::*;

    fn dec(rank: usize, delta: &[usize]) -> Decomposition {
        decompose(&normalize_levi(rank, delta).unwrap().0)
    }

    /// Brute-force enumeration of every weight-preserving signed permutation.
    fn naive_full(ws: &WeightedSet) -> usize {
        let n = ws.len();
        let mut count = 0;
        let mut perm: Vec<usize> = (0..n).collect();
        fn rec(k: usize, perm: &mut Vec<usize>, ws: &WeightedSet, count: &mut usize) {
            let n = perm.len();
            if k == n {
                if (0..n).all(|i| ws.weights[perm[i]] == ws.weights[i]) {
                    *count += 1 << n;
                }
                return;
            }
            for i in k..n {
                perm.swap(k, i);
                rec(k + 1, perm, ws, count);
                perm.swap(k, i);
            }
        }
        rec(0, &mut perm, ws, &mut count);
        count
    }

    #[test]
    fn full_group_orders() {
        for w in [vec![2, 1, 1], vec![1], vec![2, 2], vec![3, 1, 1, 2], vec![-1, 1, 1, 1]] {
            let ws = WeightedSet::new(w.clone()).unwrap();
            let g = full_group(&ws, GROUP_CAP).unwrap();
            assert_eq!(g.order(), naive_full(&ws), "{w:?}");
            assert_eq!(g.order() as u128, ws.full_order());
            let d = d_subgroup(&g, &ws);
            assert_eq!(g.order() / d.order(), if ws.has_odd() { 2 } else { 1 });
        }
        assert_eq!(full_group(&WeightedSet::new(vec![2, 1, 1]).unwrap(), GROUP_CAP).unwrap().order(), 16);
        assert!(full_group(&WeightedSet::uniform(8), 1000).is_err());
    }

    #[test]
    fn in_d_examples() {
        let ws = WeightedSet::new(vec![1, 1, 2]).unwrap();
        assert!(in_d(&SignedPerm::identity(3), &ws));
        assert!(!in_d(&SignedPerm::flip(3, 0), &ws));
        assert!(in_d(&SignedPerm::flips(3, &[0, 1]), &ws));
        assert!(in_d(&SignedPerm::flip(3, 2), &ws));
    }

    #[test]
    fn young_examples() {
        let ws = WeightedSet::new(vec![1, 1, 1]).unwrap();
        assert_eq!(young(&ws, &[vec![0, 1, 2]], false).unwrap().order(), 6);
        assert_eq!(young(&ws, &[vec![0], vec![1], vec![2]], true).unwrap().order(), 8);
        assert_eq!(young(&ws, &[vec![0, 1], vec![2]], true).unwrap().order(), 16);
        assert!(young(&ws, &[vec![0, 1]], true).is_err());
        assert!(young(&ws, &[vec![0, 1], vec![1, 2]], true).is_err());
    }

    #[test]
    fn cycle_notation() {
        let t = SignedPerm::transposition(3, 0, 1);
        assert_eq!(t.to_string(), "(1,2)(-1,-2)");
        assert_eq!(SignedPerm::flip(2, 1).to_string(), "(2,-2)");
        assert_eq!(SignedPerm::identity(2).to_string(), "()");
    }

    #[test]
    fn kappa_bar_examples() {
        let d = dec(4, &[1, 4]);
        // orbits {1,2}, {3,4}; weight 2, a_2 = 2
        assert_eq!(d.a(2), 2);
        let pi = SignedPerm::transposition(2, 0, 1);
        let k = kappa_bar(2, &d, &pi).unwrap();
        assert_eq!(k.to_string(), "(1,3)(-1,-3)(2,4)(-2,-4)");
        assert_eq!(kappa_bar(2, &d, &SignedPerm::identity(2)).unwrap(), SignedPerm::identity(4));
        let d = dec(5, &[1, 3]);
        let k = kappa_bar(3, &d, &SignedPerm::flip(1, 0)).unwrap();
        assert_eq!(k, SignedPerm::flips(5, &[0, 1, 2]));
        let d = dec(4, &[1, 2]);
        assert!(kappa_bar(-1, &d, &SignedPerm::identity(1)).is_err());
    }

    #[test]
    fn kappa_bar_semidirect_decomposition() {
        // Stab_{S_±J_d}(Φ_d) = W_{Φ_d} ⋊ κ̄_d(S_±a_d)
        for (l, delta) in [(4usize, vec![1usize, 4]), (5, vec![1, 3]), (6, vec![1, 4, 6]), (6, vec![3, 4, 6])] {
            let d = dec(l, &delta);
            for dd in d.d_set() {
                if dd < 2 {
                    continue;
                }
                let j: Vec<usize> = d.j(dd).into_iter().collect();
                let phi: HashSet<Root> = d.phi_d[&dd].iter().cloned().collect();
                let wb = weyl_b(l, GROUP_CAP).unwrap();
                let stab = wb.filter(|w| {
                    (0..l).all(|i| j.contains(&(i + 1)) || w.apply(i) == (i, false))
                        && phi.iter().all(|r| phi.contains(&w.act_vec(r)))
                });
                let a = d.a(dd);
                let sa = weyl_b(a, GROUP_CAP).unwrap();
                let img: Vec<SignedPerm> = sa.elements().iter().map(|p| kappa_bar(dd, &d, p).unwrap()).collect();
                let img_set: HashSet<&SignedPerm> = img.iter().collect();
                assert_eq!(img_set.len(), sa.order(), "injective");
                let wphi = FiniteGroup::generate(SignedPerm::identity(l), d.phi_d[&dd].iter().map(|r| reflection(r)).collect());
                assert_eq!(stab.order(), wphi.order() * sa.order());
                assert!(img.iter().all(|x| stab.contains(x)));
                assert_eq!(img.iter().filter(|x| wphi.contains(x)).count(), 1);
            }
        }
    }

    #[test]
    fn rel_weyl_examples() {
        let d = dec(4, &[1]);
        let rw = rel_weyl(&d).unwrap();
        assert_eq!((rw.full.order(), rw.d.order()), (16, 8));
        let rw = rel_weyl(&dec(4, &[])).unwrap();
        assert_eq!(rw.d.order(), 192);
        let rw = rel_weyl(&dec(5, &[1, 3])).unwrap();
        assert_eq!(rw.full.order(), 16);
    }

    #[test]
    fn oracle_small_cases() {
        let c = check_rel_weyl(&dec(4, &[1]), GROUP_CAP).unwrap();
        assert!(c.ok(), "{c:?}");
        assert_eq!((c.oracle_b, c.oracle_d), (16, 8));
        let c = check_rel_weyl(&dec(4, &[1, 2, 3, 4]), GROUP_CAP).unwrap();
        assert!(c.ok());
        assert_eq!(c.oracle_d, 1);
        let or = rel_weyl_oracle(&dec(2, &[]), GROUP_CAP).unwrap();
        assert_eq!(or.quotient_d.order(), 4);
        assert_eq!(or.quotient_d.exponent(), 2);
    }

    #[test]
    fn oracle_all_subsets_rank_up_to_5() {
        for l in 2..=5 {
            for lv in crate::levi::all_normalized(l) {
                let d = decompose(&lv);
                let c = check_rel_weyl(&d, GROUP_CAP).unwrap();
                assert!(c.ok(), "l={l} {:?}: {c:?}", lv.delta);
            }
        }
    }

    fn arb_signed(n: usize) -> impl Strategy<Value = SignedPerm> {
        (Just((0..n).collect::<Vec<usize>>()).prop_shuffle(), proptest::collection::vec(any::<bool>(), n))
            .prop_map(|(p, s)| SignedPerm::from_pairs(&p.into_iter().zip(s).collect::<Vec<_>>()))
    }

    proptest! {
        #[test]
        fn in_d_is_a_homomorphism(a in arb_signed(5), b in arb_signed(5)) {
            let ws = WeightedSet::uniform(5);
            prop_assert_eq!(in_d(&a.op(&b), &ws), in_d(&a, &ws) == in_d(&b, &ws));
        }

        #[test]
        fn kappa_bar_is_a_homomorphism(a in arb_signed(3), b in arb_signed(3)) {
            let d = dec(6, &[1, 4, 6]);
            let ka = kappa_bar(2, &d, &a).unwrap();
            let kb = kappa_bar(2, &d, &b).unwrap();
            prop_assert_eq!(kappa_bar(2, &d, &a.op(&b)).unwrap(), ka.op(&kb));
            if a != b {
                prop_assert_ne!(ka, kb);
            }
        }

        #[test]
        fn inverse_and_action(a in arb_signed(6), b in arb_signed(6), v in proptest::collection::vec(-3i32..4, 6)) {
            prop_assert_eq!(a.op(&a.inverse()), SignedPerm::identity(6));
            prop_assert_eq!(a.op(&b).act_vec(&v), a.act_vec(&b.act_vec(&v)));
        }
    }
}
