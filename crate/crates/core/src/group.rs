//! Finite groups by full enumeration.
//!
//! Everything here works for any element type with a product and an
//! inverse; the groups in this crate stay below a few hundred thousand
//! elements, so enumeration plus hashing beats anything cleverer.

use std::collections::{BTreeMap, HashMap, VecDeque};
use std::fmt::Debug;
use std::hash::Hash;
use std::sync::OnceLock;

use indexmap::IndexSet;

use crate::error::{Error, Result};

pub const DEFAULT_CAP: usize = 2_000_000;

pub trait GroupElement: Clone + Eq + Hash + Debug + Send + Sync {
    /// `self · other`, where `other` acts first when elements are maps.
    fn op(&self, other: &Self) -> Self;
    fn inverse(&self) -> Self;

    fn pow(&self, mut e: u64, id: &Self) -> Self {
        let mut acc = id.clone();
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.op(&base);
            }
            base = base.op(&base);
            e >>= 1;
        }
        acc
    }

    /// `self · x · self⁻¹`
    fn conj(&self, x: &Self) -> Self {
        self.op(x).op(&self.inverse())
    }
}

/// Plain permutation of `0..n`, composed as maps: `(a·b)(i) = a(b(i))`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Perm(pub Vec<u32>);

impl Perm {
    pub fn identity(n: usize) -> Self {
        Perm((0..n as u32).collect())
    }

    pub fn from_cycles(n: usize, cycles: &[&[u32]]) -> Self {
        let mut v: Vec<u32> = (0..n as u32).collect();
        for c in cycles {
            for w in 0..c.len() {
                v[c[w] as usize] = c[(w + 1) % c.len()];
            }
        }
        Perm(v)
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    pub fn apply(&self, i: usize) -> usize {
        self.0[i] as usize
    }
}

impl Debug for Perm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Perm{:?}", self.0)
    }
}

impl GroupElement for Perm {
    fn op(&self, other: &Self) -> Self {
        Perm(other.0.iter().map(|&j| self.0[j as usize]).collect())
    }
    fn inverse(&self) -> Self {
        let mut v = vec![0; self.0.len()];
        for (i, &j) in self.0.iter().enumerate() {
            v[j as usize] = i as u32;
        }
        Perm(v)
    }
}

#[derive(Debug, Clone)]
pub struct Classes {
    /// element index → class index
    pub class_of: Vec<usize>,
    /// members of each class as element indices; class 0 holds the identity
    pub members: Vec<Vec<usize>>,
}

impl Classes {
    pub fn len(&self) -> usize {
        self.members.len()
    }
    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
    pub fn sizes(&self) -> Vec<usize> {
        self.members.iter().map(|m| m.len()).collect()
    }
    pub fn rep(&self, c: usize) -> usize {
        self.members[c][0]
    }
}

#[derive(Debug)]
pub struct FiniteGroup<E: GroupElement> {
    identity: E,
    gens: Vec<E>,
    elems: IndexSet<E>,
    classes: OnceLock<Classes>,
}

impl<E: GroupElement> Clone for FiniteGroup<E> {
    fn clone(&self) -> Self {
        FiniteGroup {
            identity: self.identity.clone(),
            gens: self.gens.clone(),
            elems: self.elems.clone(),
            classes: OnceLock::new(),
        }
    }
}

/// Fingerprint used as an isomorphism proxy.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, serde::Serialize)]
pub struct Fingerprint {
    pub order: usize,
    pub exponent: u64,
    pub class_sizes: Vec<usize>,
    /// elementary divisors of G/G′, as prime powers in ascending order
    pub abelianization: Vec<u64>,
    pub derived_order: usize,
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            out.push(p);
            while n % p == 0 {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

pub fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

pub fn lcm(a: u64, b: u64) -> u64 {
    a / gcd(a, b) * b
}

impl<E: GroupElement> FiniteGroup<E> {
    /// Breadth-first closure of `gens`; element order is deterministic.
    pub fn closure(identity: E, gens: Vec<E>, cap: usize) -> Result<Self> {
        let mut elems = IndexSet::new();
        elems.insert(identity.clone());
        let gens: Vec<E> = gens.into_iter().filter(|g| *g != identity).collect();
        let mut queue = VecDeque::from([0usize]);
        while let Some(i) = queue.pop_front() {
            let x = elems[i].clone();
            for g in &gens {
                let y = g.op(&x);
                let (idx, fresh) = elems.insert_full(y);
                if fresh {
                    if elems.len() > cap {
                        return Err(Error::CapExceeded { what: "group closure".into(), cap });
                    }
                    queue.push_back(idx);
                }
            }
        }
        Ok(FiniteGroup { identity, gens, elems, classes: OnceLock::new() })
    }

    pub fn generate(identity: E, gens: Vec<E>) -> Self {
        Self::closure(identity, gens, DEFAULT_CAP).expect("group within default cap")
    }

    /// Subgroup of `self` generated by `gens` (membership is not checked).
    pub fn subgroup(&self, gens: Vec<E>) -> Self {
        Self::generate(self.identity.clone(), gens)
    }

    pub fn trivial(identity: E) -> Self {
        Self::generate(identity, vec![])
    }

    pub fn identity(&self) -> &E {
        &self.identity
    }
    pub fn gens(&self) -> &[E] {
        &self.gens
    }
    pub fn order(&self) -> usize {
        self.elems.len()
    }
    pub fn elements(&self) -> &IndexSet<E> {
        &self.elems
    }
    pub fn element(&self, i: usize) -> &E {
        &self.elems[i]
    }
    pub fn index_of(&self, x: &E) -> Option<usize> {
        self.elems.get_index_of(x)
    }
    pub fn contains(&self, x: &E) -> bool {
        self.elems.contains(x)
    }

    pub fn is_subgroup_of(&self, other: &Self) -> bool {
        self.gens.iter().all(|g| other.contains(g))
    }

    pub fn same_elements(&self, other: &Self) -> bool {
        self.order() == other.order() && self.elems.iter().all(|x| other.contains(x))
    }

    /// Subgroup cut out by a predicate that is known to define a subgroup.
    /// Generators are picked greedily, so the result has few of them.
    pub fn filter<F: Fn(&E) -> bool>(&self, pred: F) -> Self {
        let keep: Vec<&E> = self.elems.iter().filter(|x| pred(x)).collect();
        let mut gens = Vec::new();
        let mut cur = Self::trivial(self.identity.clone());
        for x in keep.iter() {
            if cur.order() == keep.len() {
                break;
            }
            if !cur.contains(x) {
                gens.push((*x).clone());
                cur = Self::generate(self.identity.clone(), gens.clone());
            }
        }
        debug_assert_eq!(cur.order(), keep.len(), "predicate does not define a subgroup");
        cur
    }

    pub fn intersection(&self, other: &Self) -> Self {
        self.filter(|x| other.contains(x))
    }

    pub fn centralizer(&self, g: &E) -> Self {
        self.filter(|x| x.op(g) == g.op(x))
    }

    pub fn normalizes(&self, x: &E, h: &Self) -> bool {
        h.gens.iter().all(|y| h.contains(&x.conj(y)))
    }

    pub fn normalizer(&self, h: &Self) -> Self {
        self.filter(|x| self.normalizes(x, h))
    }

    pub fn is_normal(&self, n: &Self) -> bool {
        n.is_subgroup_of(self) && self.gens.iter().all(|g| self.normalizes(g, n))
    }

    pub fn is_abelian(&self) -> bool {
        self.gens.iter().enumerate().all(|(i, a)| self.gens[i + 1..].iter().all(|b| a.op(b) == b.op(a)))
    }

    pub fn element_order(&self, x: &E) -> u64 {
        let mut y = x.clone();
        let mut n = 1;
        while y != self.identity {
            y = y.op(x);
            n += 1;
        }
        n
    }

    pub fn exponent(&self) -> u64 {
        self.elems.iter().fold(1, |acc, x| lcm(acc, self.element_order(x)))
    }

    pub fn classes(&self) -> &Classes {
        self.classes.get_or_init(|| {
            let n = self.order();
            let mut class_of = vec![usize::MAX; n];
            let mut members = Vec::new();
            for start in 0..n {
                if class_of[start] != usize::MAX {
                    continue;
                }
                let c = members.len();
                let mut m = vec![start];
                class_of[start] = c;
                let mut head = 0;
                while head < m.len() {
                    let x = self.elems[m[head]].clone();
                    head += 1;
                    for g in &self.gens {
                        let y = g.conj(&x);
                        let j = self.index_of(&y).expect("closed under conjugation");
                        if class_of[j] == usize::MAX {
                            class_of[j] = c;
                            m.push(j);
                        }
                    }
                }
                members.push(m);
            }
            Classes { class_of, members }
        })
    }

    pub fn class_of(&self, x: &E) -> usize {
        self.classes().class_of[self.index_of(x).expect("element of group")]
    }

    /// Normal closure of `gens` in `self`.
    pub fn normal_closure(&self, gens: Vec<E>) -> Self {
        let mut gens = gens;
        loop {
            let n = self.subgroup(gens.clone());
            let extra: Vec<E> = self
                .gens
                .iter()
                .flat_map(|g| n.gens.iter().map(move |y| g.conj(y)))
                .filter(|z| !n.contains(z))
                .collect();
            if extra.is_empty() {
                return n;
            }
            gens.extend(extra.into_iter().take(1));
        }
    }

    pub fn derived_subgroup(&self) -> Self {
        let mut comms = Vec::new();
        for a in &self.gens {
            for b in &self.gens {
                comms.push(a.op(b).op(&a.inverse()).op(&b.inverse()));
            }
        }
        self.normal_closure(comms)
    }

    /// Elementary divisors of `self / n` for a normal subgroup `n` with
    /// abelian quotient.
    fn abelian_invariants_mod(&self, n: &Self) -> Vec<u64> {
        let q = (self.order() / n.order()) as u64;
        let mut out = Vec::new();
        for p in prime_factors(q) {
            let mut counts = vec![1u64];
            let mut pk = 1u64;
            loop {
                pk *= p;
                let c = self.elems.iter().filter(|x| n.contains(&x.pow(pk, &self.identity))).count() as u64
                    / n.order() as u64;
                counts.push(c);
                if c == counts[counts.len() - 2] {
                    break;
                }
            }
            // r_k = #{i : e_i ≥ k} from |A[p^k]| / |A[p^{k-1}]|
            let r: Vec<u32> = counts.windows(2).map(|w| (w[1] / w[0]).ilog(p)).collect();
            for k in 1..r.len() + 1 {
                let ge_k = r[k - 1];
                let ge_k1 = if k < r.len() { r[k] } else { 0 };
                for _ in 0..(ge_k - ge_k1) {
                    out.push(p.pow(k as u32));
                }
            }
        }
        out.sort_unstable();
        out
    }

    pub fn fingerprint(&self) -> Fingerprint {
        let d = self.derived_subgroup();
        let mut class_sizes = self.classes().sizes();
        class_sizes.sort_unstable();
        Fingerprint {
            order: self.order(),
            exponent: self.exponent(),
            class_sizes,
            abelianization: self.abelian_invariants_mod(&d),
            derived_order: d.order(),
        }
    }

    /// Quotient by a normal subgroup, realised as a permutation group on
    /// the cosets. `reps[i]` is the first element (in enumeration order) of
    /// coset `i`.
    pub fn quotient(&self, n: &Self) -> Result<(FiniteGroup<Perm>, Vec<E>)> {
        if !self.is_normal(n) {
            return Err(Error::Precondition("quotient by a non-normal subgroup".into()));
        }
        let mut coset_of: HashMap<E, usize> = HashMap::new();
        let mut reps = Vec::new();
        for x in &self.elems {
            if coset_of.contains_key(x) {
                continue;
            }
            let c = reps.len();
            reps.push(x.clone());
            for y in &n.elems {
                coset_of.insert(x.op(y), c);
            }
        }
        let k = reps.len();
        let act = |g: &E| Perm(reps.iter().map(|r| coset_of[&g.op(r)] as u32).collect());
        let gens: Vec<Perm> = self.gens.iter().map(act).collect();
        let q = FiniteGroup::generate(Perm::identity(k), gens);
        debug_assert_eq!(q.order(), k);
        Ok((q, reps))
    }

    /// Generators of the stabilizer of `point` under a left action,
    /// via Schreier generators on the orbit.
    pub fn stabilizer<P, F>(&self, point: &P, act: F) -> Self
    where
        P: Clone + Eq + Hash,
        F: Fn(&E, &P) -> P,
    {
        let mut orbit: IndexSet<P> = IndexSet::new();
        let mut trans: Vec<E> = vec![self.identity.clone()];
        orbit.insert(point.clone());
        let mut head = 0;
        let mut sgens: Vec<E> = Vec::new();
        while head < orbit.len() {
            let p = orbit[head].clone();
            let u = trans[head].clone();
            head += 1;
            for g in &self.gens {
                let gp = act(g, &p);
                let gu = g.op(&u);
                match orbit.get_index_of(&gp) {
                    Some(j) => {
                        let s = trans[j].inverse().op(&gu);
                        if s != self.identity {
                            sgens.push(s);
                        }
                    }
                    None => {
                        orbit.insert(gp);
                        trans.push(gu);
                    }
                }
            }
        }
        let st = self.subgroup(sgens);
        debug_assert_eq!(st.order() * orbit.len(), self.order());
        st
    }

    /// Internal direct product test: `a`, `b` ≤ `self` commute elementwise,
    /// meet trivially and together have the right order.
    pub fn is_internal_direct_product(&self, a: &Self, b: &Self) -> bool {
        a.is_subgroup_of(self)
            && b.is_subgroup_of(self)
            && a.order() * b.order() == self.order()
            && a.gens.iter().all(|x| b.gens.iter().all(|y| x.op(y) == y.op(x)))
            && a.elems.iter().filter(|x| b.contains(x)).count() == 1
    }

    /// Permutation of the conjugacy classes of `self` induced by
    /// conjugation with `x` (which must normalize `self`).
    pub fn class_action(&self, x: &E) -> Vec<usize> {
        let cl = self.classes();
        (0..cl.len()).map(|c| self.class_of(&x.conj(self.element(cl.rep(c))))).collect()
    }

    /// Histogram of class sizes, handy in debug output.
    pub fn class_size_histogram(&self) -> BTreeMap<usize, usize> {
        let mut h = BTreeMap::new();
        for s in self.classes().sizes() {
            *h.entry(s).or_insert(0) += 1;
        }
        h
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::small;

    #[test]
    fn closure_basics() {
        let s2 = FiniteGroup::generate(Perm::identity(2), vec![Perm::from_cycles(2, &[&[0, 1]])]);
        assert_eq!(s2.order(), 2);
        let t = FiniteGroup::generate(Perm::identity(3), vec![]);
        assert_eq!(t.order(), 1);
        let err = FiniteGroup::closure(Perm::identity(6), small::symmetric(6).gens().to_vec(), 100);
        assert!(matches!(err, Err(Error::CapExceeded { .. })));
    }

    #[test]
    fn closure_independent_of_generator_order() {
        let g = small::symmetric(4);
        let mut gens = g.gens().to_vec();
        gens.reverse();
        let h = FiniteGroup::generate(Perm::identity(4), gens);
        assert!(g.same_elements(&h));
    }

    #[test]
    fn classes_of_s3() {
        let g = small::symmetric(3);
        let mut s = g.classes().sizes();
        s.sort();
        assert_eq!(s, vec![1, 2, 3]);
        assert_eq!(g.classes().sizes().iter().sum::<usize>(), 6);
        let e = g.identity().clone();
        assert_eq!(g.centralizer(&e).order(), 6);
    }

    #[test]
    fn quotient_d8_by_center() {
        let d8 = small::dihedral(4);
        let z = d8.filter(|x| d8.gens().iter().all(|g| g.op(x) == x.op(g)));
        assert_eq!(z.order(), 2);
        let (q, reps) = d8.quotient(&z).unwrap();
        assert_eq!(q.order(), 4);
        assert_eq!(q.exponent(), 2);
        assert_eq!(reps.len(), 4);
        let c4 = d8.subgroup(vec![d8.gens()[0].clone()]);
        assert!(d8.is_normal(&c4));
        let refl = d8.subgroup(vec![d8.gens()[1].clone()]);
        assert!(d8.quotient(&refl).is_err());
    }

    #[test]
    fn fingerprints() {
        let b2 = small::weyl_b(2);
        let f = b2.fingerprint();
        assert_eq!(f.order, 8);
        assert_eq!(f.exponent, 4);
        assert_eq!(f.class_sizes, vec![1, 1, 2, 2, 2]);
        assert_eq!(f.abelianization, vec![2, 2]);
        assert_eq!(f.derived_order, 2);
        let d2 = small::weyl_d(2);
        let f = d2.fingerprint();
        assert_eq!((f.order, f.exponent, f.derived_order), (4, 2, 1));
        assert_eq!(f.class_sizes, vec![1, 1, 1, 1]);
        assert_eq!(f.abelianization, vec![2, 2]);
        // C2 wr S2 is D8, same as W(B2)
        assert_eq!(small::dihedral(4).fingerprint(), b2.fingerprint());
        assert_eq!(small::cyclic(12).fingerprint().abelianization, vec![3, 4]);
    }

    #[test]
    fn stabilizer_orbit_counting() {
        let g = small::symmetric(4);
        let st = g.stabilizer(&2usize, |x, p| x.apply(*p));
        assert_eq!(st.order(), 6);
        assert!(st.elements().iter().all(|x| x.apply(2) == 2));
    }

    #[test]
    fn direct_product_test() {
        let k = small::cyclic(2);
        let g = small::direct_product(&k, &small::cyclic(3));
        let a = g.filter(|x| g.element_order(x) <= 2);
        let b = g.filter(|x| [1, 3].contains(&g.element_order(x)));
        assert!(g.is_internal_direct_product(&a, &b));
        assert!(!g.is_internal_direct_product(&a, &a));
    }
}
