//! Extension maps and the constructions that produce them.
//!
//! Characters are stored elementwise (one value per group element, in the
//! group's enumeration order) so that conjugating them under arbitrary
//! automorphisms needs no class bookkeeping. All values live in one prime
//! field per map.

use std::collections::{HashMap, HashSet, VecDeque};

use serde::Serialize;

use crate::chars::{extends_to, linear_ext_cocycle, table_prime, CharTable, Cosets, LinearExtension};
use crate::error::{precondition, Error, Result};
use crate::group::{lcm, FiniteGroup, GroupElement, Perm};
use crate::small::{self, leak_table, TableElt};
use crate::spin::{MonomialElt, SpinCtx};
use crate::zmod::inv_mod;

/// `(α·v)(α(x)) = v(x)` for an automorphism `α` of `g`.
pub fn transport<E: GroupElement>(g: &FiniteGroup<E>, v: &[u64], alpha: impl Fn(&E) -> E) -> Vec<u64> {
    let mut out = vec![0; v.len()];
    for (i, x) in g.elements().iter().enumerate() {
        let j = g.index_of(&alpha(x)).expect("automorphism preserves the group");
        out[j] = v[i];
    }
    out
}

/// Character values pulled back along an inclusion `sub ≤ g`.
pub fn restrict_values<E: GroupElement>(g: &FiniteGroup<E>, v: &[u64], sub: &FiniteGroup<E>) -> Option<Vec<u64>> {
    sub.elements().iter().map(|x| g.index_of(x).map(|i| v[i])).collect()
}

/// `⟨ψ, ψ⟩` computed elementwise.
pub fn norm<E: GroupElement>(g: &FiniteGroup<E>, v: &[u64], p: u64) -> u64 {
    let s = g
        .elements()
        .iter()
        .enumerate()
        .fold(0, |acc, (i, x)| (acc + v[i] * v[g.index_of(&x.inverse()).unwrap()]) % p);
    s * inv_mod(g.order() as u64 % p, p).unwrap() % p
}

#[derive(Debug, Clone)]
pub struct Extension<E: GroupElement> {
    /// the character of the base group
    pub base: Vec<u64>,
    /// its stabilizer in the overgroup
    pub stabilizer: FiniteGroup<E>,
    /// the chosen extension, elementwise on the stabilizer
    pub values: Vec<u64>,
}

/// Extension map with respect to `base ◁ over` on a set of characters.
#[derive(Debug, Clone)]
pub struct ExtensionMap<E: GroupElement> {
    pub p: u64,
    pub base: FiniteGroup<E>,
    pub over: FiniteGroup<E>,
    pub entries: Vec<Extension<E>>,
    index: HashMap<Vec<u64>, usize>,
}

impl<E: GroupElement> ExtensionMap<E> {
    pub fn new(p: u64, base: FiniteGroup<E>, over: FiniteGroup<E>, entries: Vec<Extension<E>>) -> Self {
        let index = entries.iter().enumerate().map(|(i, e)| (e.base.clone(), i)).collect();
        ExtensionMap { p, base, over, entries, index }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, lambda: &[u64]) -> Option<&Extension<E>> {
        self.index.get(lambda).map(|&i| &self.entries[i])
    }

    /// Every entry is an irreducible character of the full stabilizer
    /// restricting to its base character.
    pub fn check_extensions(&self) -> std::result::Result<(), String> {
        for (n, e) in self.entries.iter().enumerate() {
            let stab = self.over.stabilizer(&e.base, |g, v| transport(&self.base, v, |x| g.conj(x)));
            if stab.order() != e.stabilizer.order() || !stab.elements().iter().all(|x| e.stabilizer.contains(x)) {
                return Err(format!("entry {n}: stored group is not the stabilizer"));
            }
            if restrict_values(&e.stabilizer, &e.values, &self.base).as_deref() != Some(&e.base[..]) {
                return Err(format!("entry {n}: does not restrict to its base character"));
            }
            if norm(&e.stabilizer, &e.values, self.p) != 1 {
                return Err(format!("entry {n}: not irreducible"));
            }
        }
        Ok(())
    }

    /// `Λ(a·λ) = a·Λ(λ)` for every entry and every given automorphism.
    pub fn check_equivariant<A, F>(&self, gens: &[A], act: F) -> std::result::Result<(), String>
    where
        F: Fn(&A, &E) -> E,
    {
        for (n, e) in self.entries.iter().enumerate() {
            for (gi, a) in gens.iter().enumerate() {
                let moved = transport(&self.base, &e.base, |x| act(a, x));
                let Some(target) = self.get(&moved) else {
                    return Err(format!("entry {n}: image under generator {gi} is outside the set"));
                };
                if target.stabilizer.order() != e.stabilizer.order() {
                    return Err(format!("entry {n}: stabilizers of conjugates differ in order"));
                }
                for (i, y) in e.stabilizer.elements().iter().enumerate() {
                    let Some(j) = target.stabilizer.index_of(&act(a, y)) else {
                        return Err(format!("entry {n}: stabilizer not transported by generator {gi}"));
                    };
                    if target.values[j] != e.values[i] {
                        return Err(format!("entry {n}: extension not transported by generator {gi}"));
                    }
                }
            }
        }
        Ok(())
    }
}

/// Build an equivariant extension map by choosing, on each orbit of the
/// acting group, an extension fixed by the stabilizer of the orbit
/// representative, and transporting it along the orbit.
///
/// `accept` can narrow the admissible extensions further. The acting group
/// must act on `over` and normalize `base`; `over` acts on itself by
/// conjugation and should be contained in the acting group's image for
/// the result to be an `over`-equivariant map.
pub fn equivariant_extension_map<E, A, F, P>(
    base: &FiniteGroup<E>,
    over: &FiniteGroup<E>,
    acting: &FiniteGroup<A>,
    act: F,
    chars: &[Vec<u64>],
    p: u64,
    accept: P,
) -> Result<ExtensionMap<E>>
where
    E: GroupElement,
    A: GroupElement,
    F: Fn(&A, &E) -> E,
    P: Fn(&[u64], &FiniteGroup<E>, &[u64]) -> bool,
{
    let wanted: HashSet<&Vec<u64>> = chars.iter().collect();
    let mut entries: Vec<Extension<E>> = Vec::new();
    let mut seen: HashSet<Vec<u64>> = HashSet::new();
    for lambda in chars {
        if seen.contains(lambda) {
            continue;
        }
        let stab = over.stabilizer(lambda, |g, v| transport(base, v, |x| g.conj(x)));
        let stab_act = acting.stabilizer(lambda, |a, v| transport(base, v, |x| act(a, x)));
        let table = CharTable::with_prime(&stab, p)?;
        let degree = lambda[0];
        let chosen = table
            .irr
            .iter()
            .filter(|psi| psi[0] == degree)
            .map(|psi| table.elementwise(psi))
            .find(|psi| {
                restrict_values(&stab, psi, base).as_deref() == Some(&lambda[..])
                    && stab_act.gens().iter().all(|a| transport(&stab, psi, |y| act(a, y)) == *psi)
                    && accept(lambda, &stab, psi)
            })
            .ok_or_else(|| Error::NoWitness("no invariant extension on an orbit".into()))?;
        // walk the orbit
        let mut queue = VecDeque::from([Extension { base: lambda.clone(), stabilizer: stab, values: chosen }]);
        seen.insert(lambda.clone());
        while let Some(e) = queue.pop_front() {
            for a in acting.gens() {
                let moved = transport(base, &e.base, |x| act(a, x));
                if seen.contains(&moved) {
                    continue;
                }
                if !wanted.contains(&moved) {
                    return precondition("character set is not stable under the acting group");
                }
                let st = over.subgroup(e.stabilizer.gens().iter().map(|y| act(a, y)).collect());
                let mut vals = vec![0; st.order()];
                for (i, y) in e.stabilizer.elements().iter().enumerate() {
                    vals[st.index_of(&act(a, y)).expect("stabilizer transported")] = e.values[i];
                }
                seen.insert(moved.clone());
                queue.push_back(Extension { base: moved, stabilizer: st, values: vals });
            }
            entries.push(e);
        }
    }
    Ok(ExtensionMap::new(p, base.clone(), over.clone(), entries))
}

/// Irreducible characters of `g` over `p`, elementwise.
pub fn irr_elementwise<E: GroupElement>(g: &FiniteGroup<E>, p: u64) -> Result<Vec<Vec<u64>>> {
    let t = CharTable::with_prime(g, p)?;
    Ok(t.irr.iter().map(|c| t.elementwise(c)).collect())
}

fn shift(x: &Perm, block: usize, n: usize, total: usize) -> Perm {
    let mut v: Vec<u32> = (0..total as u32).collect();
    for i in 0..n {
        v[block * n + i] = (block * n + x.apply(i)) as u32;
    }
    Perm(v)
}

fn diagonal(x: &Perm, n: usize, a: usize) -> Perm {
    Perm((0..a).flat_map(|b| (0..n).map(move |i| (b * n + x.apply(i)) as u32)).collect())
}

/// Block permutation and block components of an element of `G ≀ S_a` in
/// its imprimitive action: `π(bn + i) = σ(b)n + g_b(i)`.
pub fn wreath_coords(pi: &Perm, n: usize, a: usize) -> (Vec<usize>, Vec<Perm>) {
    let sigma: Vec<usize> = (0..a).map(|b| pi.apply(b * n) / n).collect();
    let comps = (0..a).map(|b| Perm((0..n).map(|i| (pi.apply(b * n + i) - sigma[b] * n) as u32).collect())).collect();
    (sigma, comps)
}

/// The groups around `X^a ◁ (X⋊Y) ≀ S_a` with `A` acting diagonally.
pub struct WreathSetup {
    pub n: usize,
    pub a: usize,
    /// `X⋊Y` on `n` points
    pub top: FiniteGroup<Perm>,
    pub x: FiniteGroup<Perm>,
    /// generators of `A`, as permutations of the same `n` points
    pub auts: Vec<Perm>,
    /// `⟨X⋊Y, A⟩`
    pub top_acting: FiniteGroup<Perm>,
    pub base: FiniteGroup<Perm>,
    pub wreath: FiniteGroup<Perm>,
    /// `(X⋊Y) ≀ S_a` together with `ΔA`
    pub acting: FiniteGroup<Perm>,
    pub p: u64,
}

impl WreathSetup {
    pub fn new(top: &FiniteGroup<Perm>, x: &FiniteGroup<Perm>, auts: &[Perm], a: usize) -> Result<Self> {
        if a == 0 {
            return precondition("need at least one copy");
        }
        if !x.is_subgroup_of(top) || !top.is_normal(x) {
            return precondition("X is not normal in X⋊Y");
        }
        if !auts.iter().all(|g| top.normalizes(g, x) && top.normalizes(g, top)) {
            return precondition("A does not stabilize X and X⋊Y");
        }
        let n = top.identity().degree();
        let total = n * a;
        let mut tgens = top.gens().to_vec();
        tgens.extend(auts.iter().cloned());
        let top_acting = top.subgroup(tgens);
        let base = FiniteGroup::generate(
            Perm::identity(total),
            (0..a).flat_map(|b| x.gens().iter().map(move |g| shift(g, b, n, total))).collect(),
        );
        let wreath = small::wreath(top, a);
        let mut agens = wreath.gens().to_vec();
        agens.extend(auts.iter().map(|g| diagonal(g, n, a)));
        let acting = wreath.subgroup(agens);
        let p = table_prime(acting.order(), acting.exponent());
        Ok(WreathSetup {
            n,
            a,
            top: top.clone(),
            x: x.clone(),
            auts: auts.to_vec(),
            top_acting,
            base,
            wreath,
            acting,
            p,
        })
    }

    /// An `⟨X⋊Y, A⟩`-equivariant extension map for `X ◁ X⋊Y` on all of
    /// `Irr(X)`, built orbit by orbit.
    pub fn input_map(&self) -> Result<ExtensionMap<Perm>> {
        let chars = irr_elementwise(&self.x, self.p)?;
        equivariant_extension_map(&self.x, &self.top, &self.top_acting, |g, y| g.conj(y), &chars, self.p, |_, _, _| true)
    }

    /// `λ₁ ⊗ ⋯ ⊗ λ_a` on the base group.
    pub fn tensor(&self, parts: &[&[u64]]) -> Vec<u64> {
        self.base
            .elements()
            .iter()
            .map(|y| {
                let (_, comps) = wreath_coords(y, self.n, self.a);
                comps
                    .iter()
                    .zip(parts)
                    .fold(1, |acc, (c, l)| acc * l[self.x.index_of(c).expect("base component in X")] % self.p)
            })
            .collect()
    }

    /// Extension map for `X^a ◁ (X⋊Y) ≀ S_a` on `𝕂^a`, equivariant under
    /// the wreath product and `ΔA`, whose restriction to the base part of
    /// each stabilizer is the tensor product of the input extensions.
    pub fn extend(&self, input: &ExtensionMap<Perm>) -> Result<ExtensionMap<Perm>> {
        if input.p != self.p {
            return precondition(format!("input map over {} but the wreath product needs {}", input.p, self.p));
        }
        if let Err(e) = input.check_extensions() {
            return precondition(format!("input is not an extension map: {e}"));
        }
        let tgens = self.top_acting.gens();
        if let Err(e) = input.check_equivariant(tgens, |g, y| g.conj(y)) {
            return precondition(format!("input map is not equivariant: {e}"));
        }
        let ks: Vec<&Extension<Perm>> = input.entries.iter().collect();
        let mut chars = Vec::new();
        let mut labels: HashMap<Vec<u64>, Vec<usize>> = HashMap::new();
        let count = ks.len().pow(self.a as u32);
        for mut t in 0..count {
            let idx: Vec<usize> = (0..self.a)
                .map(|_| {
                    let d = t % ks.len();
                    t /= ks.len();
                    d
                })
                .collect();
            let parts: Vec<&[u64]> = idx.iter().map(|&i| &ks[i].base[..]).collect();
            let lam = self.tensor(&parts);
            labels.insert(lam.clone(), idx);
            chars.push(lam);
        }
        let accept = |lam: &[u64], stab: &FiniteGroup<Perm>, psi: &[u64]| {
            let idx = &labels[lam];
            stab.elements().iter().enumerate().all(|(i, y)| {
                let (sigma, comps) = wreath_coords(y, self.n, self.a);
                if sigma.iter().enumerate().any(|(b, &s)| b != s) {
                    return true;
                }
                let expect = comps.iter().zip(idx).fold(1, |acc, (c, &k)| {
                    let e = ks[k];
                    acc * e.values[e.stabilizer.index_of(c).expect("component stabilizes its factor")] % self.p
                });
                psi[i] == expect
            })
        };
        equivariant_extension_map(&self.base, &self.wreath, &self.acting, |g, y| g.conj(y), &chars, self.p, accept)
    }
}

/// `K₀ ⋊ ε(V)` for `ε: V → V/H`, with `V` acting on `K₀` by conjugation.
pub struct Semidirect<E: GroupElement> {
    pub group: FiniteGroup<TableElt>,
    /// image of `K₀`
    pub k0: FiniteGroup<TableElt>,
    k0_src: FiniteGroup<E>,
    cosets: Cosets<E>,
    first: TableElt,
}

impl<E: GroupElement> Semidirect<E> {
    pub fn new(k0: &FiniteGroup<E>, v: &FiniteGroup<E>, h: &FiniteGroup<E>) -> Result<Self> {
        if !v.is_normal(h) {
            return precondition("H is not normal in V");
        }
        if !v.gens().iter().all(|g| v.normalizes(g, k0)) {
            return precondition("V does not normalize K₀");
        }
        if !h.gens().iter().all(|x| k0.gens().iter().all(|y| x.op(y) == y.op(x))) {
            return precondition("H does not centralize K₀");
        }
        let cosets = Cosets::new(h, v);
        let nk = k0.order();
        let nq = cosets.reps.len();
        let size = nk * nq;
        if size > u16::MAX as usize {
            return Err(Error::CapExceeded { what: "semidirect product".into(), cap: u16::MAX as usize });
        }
        let code = |i: usize, c: usize| (c * nk + i) as u16;
        let mut table = vec![vec![0u16; size]; size];
        for c1 in 0..nq {
            let r1 = &cosets.reps[c1];
            for i1 in 0..nk {
                let k1 = k0.element(i1);
                for c2 in 0..nq {
                    let c = cosets.split(&r1.op(&cosets.reps[c2])).0;
                    for i2 in 0..nk {
                        let k = k1.op(&r1.conj(k0.element(i2)));
                        table[c1 * nk + i1][c2 * nk + i2] = code(k0.index_of(&k).expect("K₀ normalized"), c);
                    }
                }
            }
        }
        let first = leak_table(table);
        let mut gens: Vec<TableElt> = k0.gens().iter().map(|g| first.sibling(k0.index_of(g).unwrap())).collect();
        let kimg = FiniteGroup::generate(first, gens.clone());
        gens.extend(v.gens().iter().map(|g| first.sibling(cosets.split(g).0 * nk)));
        let group = FiniteGroup::generate(first, gens);
        debug_assert_eq!(group.order(), size);
        Ok(Semidirect { group, k0: kimg, k0_src: k0.clone(), cosets, first })
    }

    pub fn embed(&self, x: &E) -> TableElt {
        self.first.sibling(self.k0_src.index_of(x).expect("element of K₀"))
    }

    pub fn eps(&self, v: &E) -> TableElt {
        self.first.sibling(self.cosets.split(v).0 * self.k0_src.order())
    }

    /// `(k, vH) ↦ (a k a⁻¹, a v a⁻¹ H)` for `a` normalizing `K₀`, `V`, `H`.
    pub fn act(&self, a: &E, x: &TableElt) -> TableElt {
        let nk = self.k0_src.order();
        let (i, c) = (x.idx as usize % nk, x.idx as usize / nk);
        let k = a.conj(self.k0_src.element(i));
        let v = a.conj(&self.cosets.reps[c]);
        self.first.sibling(self.cosets.split(&v).0 * nk + self.k0_src.index_of(&k).expect("a normalizes K₀"))
    }
}

/// Groups for assembling an extension map for `K ◁ M` out of maps for
/// `H ◁ V` and `K₀ ◁ K₀ ⋊ ε(V)`, with the group-theoretic hypotheses
/// already verified.
pub struct ExtensionTool<E: GroupElement> {
    pub k0: FiniteGroup<E>,
    pub v: FiniteGroup<E>,
    pub h: FiniteGroup<E>,
    pub d: Vec<E>,
    pub k: FiniteGroup<E>,
    pub m: FiniteGroup<E>,
    pub semi: Semidirect<E>,
    pub p: u64,
}

impl<E: GroupElement> ExtensionTool<E> {
    pub fn new(k0: &FiniteGroup<E>, v: &FiniteGroup<E>, h: &FiniteGroup<E>, d: &[E]) -> Result<Self> {
        let mut kg = k0.gens().to_vec();
        kg.extend(h.gens().iter().cloned());
        let k = k0.subgroup(kg);
        let mut mg = k.gens().to_vec();
        mg.extend(v.gens().iter().cloned());
        let m = k0.subgroup(mg);
        if !h.is_subgroup_of(v) {
            return precondition("H is not contained in V");
        }
        if !h.gens().iter().all(|x| k.gens().iter().all(|y| x.op(y) == y.op(x))) {
            return precondition("H is not central in K");
        }
        if !k.intersection(v).same_elements(h) {
            return precondition("K ∩ V differs from H");
        }
        if m.order() * h.order() != k.order() * v.order() {
            return precondition("M is larger than KV");
        }
        for g in d {
            if !(m.normalizes(g, k0) && m.normalizes(g, v) && m.normalizes(g, h)) {
                return precondition("D does not stabilize K₀, V and H");
            }
        }
        let semi = Semidirect::new(k0, v, h)?;
        let mut ag = m.gens().to_vec();
        ag.extend(d.iter().cloned());
        let amb = m.subgroup(ag);
        let p = table_prime(amb.order().max(semi.group.order()), lcm(amb.exponent(), semi.group.exponent()));
        Ok(ExtensionTool { k0: k0.clone(), v: v.clone(), h: h.clone(), d: d.to_vec(), k, m, semi, p })
    }

    /// `⟨V, D⟩`, the group acting on the semidirect product.
    pub fn vd(&self) -> FiniteGroup<E> {
        let mut g = self.v.gens().to_vec();
        g.extend(self.d.iter().cloned());
        self.v.subgroup(g)
    }

    /// `⟨M, D⟩`
    pub fn md(&self) -> FiniteGroup<E> {
        let mut g = self.m.gens().to_vec();
        g.extend(self.d.iter().cloned());
        self.m.subgroup(g)
    }

    /// Restriction of `λ ∈ Irr(K)` to `K₀`, in the semidirect product's
    /// copy of `K₀`.
    pub fn restrict_k0(&self, lambda: &[u64]) -> Vec<u64> {
        self.semi
            .k0
            .elements()
            .iter()
            .map(|t| lambda[self.k.index_of(self.k0.element(t.idx as usize)).unwrap()])
            .collect()
    }

    /// `ν` with `λ|_H = λ(1)ν`.
    pub fn central_part(&self, lambda: &[u64]) -> Result<Vec<u64>> {
        let d_inv = inv_mod(lambda[0] % self.p, self.p).unwrap();
        let nu: Vec<u64> = self.h.elements().iter().map(|x| lambda[self.k.index_of(x).unwrap()] * d_inv % self.p).collect();
        Ok(nu)
    }

    /// Assemble `Λ(λ)(k₀v) = Λ_ε(λ|_{K₀})(k₀, ε(v)) · Λ₀(ν)(v)` and verify
    /// that the result is an `MD`-equivariant extension map on `kset`.
    pub fn build(
        &self,
        lambda0: &ExtensionMap<E>,
        lambda_eps: &ExtensionMap<TableElt>,
        kset: &[Vec<u64>],
    ) -> Result<ExtensionMap<E>> {
        let p = self.p;
        if lambda0.p != p || lambda_eps.p != p {
            return precondition(format!("input maps must use the prime {p}"));
        }
        if !lambda0.base.same_elements(&self.h) || !lambda0.over.same_elements(&self.v) {
            return precondition("first map is not for H ◁ V");
        }
        let vd = self.vd();
        let conj = |g: &E, y: &E| g.conj(y);
        lambda0.check_extensions().map_err(|e| Error::Precondition(format!("first map: {e}")))?;
        lambda0
            .check_equivariant(vd.gens(), conj)
            .map_err(|e| Error::Precondition(format!("first map not VD-equivariant: {e}")))?;
        if !lambda_eps.base.same_elements(&self.semi.k0) || !lambda_eps.over.same_elements(&self.semi.group) {
            return precondition("second map is not for K₀ ◁ K₀ ⋊ ε(V)");
        }
        lambda_eps.check_extensions().map_err(|e| Error::Precondition(format!("second map: {e}")))?;
        lambda_eps
            .check_equivariant(vd.gens(), |a, x| self.semi.act(a, x))
            .map_err(|e| Error::Precondition(format!("second map not ε(V)D-equivariant: {e}")))?;

        // m ↦ (k₀, v), first factorization found
        let mut split: HashMap<E, (E, E)> = HashMap::new();
        for x in self.k0.elements() {
            for y in self.v.elements() {
                split.entry(x.op(y)).or_insert_with(|| (x.clone(), y.clone()));
            }
        }
        let mut entries = Vec::new();
        for lambda in kset {
            let l0 = self.restrict_k0(lambda);
            let nu = self.central_part(lambda)?;
            let e_eps = lambda_eps
                .get(&l0)
                .ok_or_else(|| Error::Precondition("restriction to K₀ not covered by the second map".into()))?;
            let e_0 = lambda0
                .get(&nu)
                .ok_or_else(|| Error::Precondition("central character not covered by the first map".into()))?;
            let stab = self.m.stabilizer(lambda, |g, v| transport(&self.k, v, |x| g.conj(x)));
            let mut values = Vec::with_capacity(stab.order());
            for y in stab.elements() {
                let (k, v) = &split[y];
                let s = self.semi.embed(k).op(&self.semi.eps(v));
                let i = e_eps.stabilizer.index_of(&s);
                let j = e_0.stabilizer.index_of(v);
                match (i, j) {
                    (Some(i), Some(j)) => values.push(e_eps.values[i] * e_0.values[j] % p),
                    _ => return precondition("factorization leaves the stabilizers"),
                }
            }
            let table = CharTable::with_prime(&stab, p)?;
            let cv = table
                .class_values(&values)
                .ok_or_else(|| Error::NoWitness("assembled function is not a class function".into()))?;
            if table.find(&cv).is_none() {
                return Err(Error::NoWitness("assembled function is not irreducible".into()));
            }
            if restrict_values(&stab, &values, &self.k).as_deref() != Some(&lambda[..]) {
                return Err(Error::NoWitness("assembled character does not extend λ".into()));
            }
            entries.push(Extension { base: lambda.clone(), stabilizer: stab, values });
        }
        let out = ExtensionMap::new(p, self.k.clone(), self.m.clone(), entries);
        let md = self.md();
        out.check_equivariant(md.gens(), conj).map_err(|e| Error::NoWitness(format!("output not MD-equivariant: {e}")))?;
        Ok(out)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct TransversalCheck {
    /// a `Ŷ`-stable `X̃`-transversal exists
    pub stable_transversal: bool,
    /// every character has an `X̃`-conjugate with `Z_ζ = X̃_ζ Ŷ_ζ`
    pub conjugate_factorizes: bool,
    /// every character satisfies `Z_ζ = (Ŷ^x)_ζ X̃_ζ` for some `x ∈ X̃`
    pub twisted_factorizes: bool,
}

impl TransversalCheck {
    pub fn consistent(&self) -> bool {
        self.stable_transversal == self.conjugate_factorizes && self.conjugate_factorizes == self.twisted_factorizes
    }
}

/// `X = X̃ ∩ Ŷ`, the group whose characters the transversal check takes.
pub fn transversal_base<E: GroupElement>(y_hat: &FiniteGroup<E>, x_tilde: &FiniteGroup<E>) -> FiniteGroup<E> {
    x_tilde.intersection(y_hat)
}

/// Evaluate the three equivalent conditions on stable transversals
/// independently. `chars` are elementwise on [`transversal_base`].
pub fn transversal_check<E: GroupElement>(
    y_hat: &FiniteGroup<E>,
    x_tilde: &FiniteGroup<E>,
    z: &FiniteGroup<E>,
    chars: &[Vec<u64>],
) -> Result<TransversalCheck> {
    let x = transversal_base(y_hat, x_tilde);
    if !y_hat.is_subgroup_of(z) || !x_tilde.is_subgroup_of(z) || !z.is_normal(x_tilde) {
        return precondition("X̃ must be a normal subgroup of Z and Ŷ a subgroup");
    }
    if y_hat.order() * x_tilde.order() != z.order() * x.order() {
        return precondition("Z ≠ Ŷ X̃");
    }
    if !z.is_normal(&x) {
        return precondition("X̃ ∩ Ŷ is not normal in Z");
    }
    let act = |g: &E, v: &Vec<u64>| transport(&x, v, |y| g.conj(y));
    let set: HashSet<&Vec<u64>> = chars.iter().collect();
    for c in chars {
        for g in z.gens() {
            if !set.contains(&act(g, c)) {
                return precondition("character set is not Z-stable");
            }
        }
    }
    let orbit = |g: &FiniteGroup<E>, c: &Vec<u64>| -> Vec<Vec<u64>> {
        let mut seen: Vec<Vec<u64>> = vec![c.clone()];
        let mut i = 0;
        while i < seen.len() {
            for s in g.gens() {
                let d = act(s, &seen[i]);
                if !seen.contains(&d) {
                    seen.push(d);
                }
            }
            i += 1;
        }
        seen
    };
    let stab = |g: &FiniteGroup<E>, c: &Vec<u64>| g.stabilizer(c, act);
    let product_order = |a: &FiniteGroup<E>, b: &FiniteGroup<E>| a.order() * b.order() / a.intersection(b).order();

    // X̃-orbits, labelled
    let mut xorbit: HashMap<Vec<u64>, usize> = HashMap::new();
    let mut orbits: Vec<Vec<Vec<u64>>> = Vec::new();
    for c in chars {
        if !xorbit.contains_key(c) {
            let o = orbit(x_tilde, c);
            for d in &o {
                xorbit.insert(d.clone(), orbits.len());
            }
            orbits.push(o);
        }
    }

    // (a) per Ŷ-family of X̃-orbits, some Ŷ-orbit meets each X̃-orbit once
    let mut stable_transversal = true;
    let mut covered: HashSet<usize> = HashSet::new();
    for (oi, o) in orbits.iter().enumerate() {
        if covered.contains(&oi) {
            continue;
        }
        let mut ok = false;
        for zeta in o {
            let yo = orbit(y_hat, zeta);
            let mut hit: HashSet<usize> = HashSet::new();
            if yo.iter().all(|d| hit.insert(xorbit[d])) {
                covered.extend(hit);
                ok = true;
                break;
            }
        }
        if !ok {
            stable_transversal = false;
            break;
        }
    }

    // (b)
    let conjugate_factorizes = orbits.iter().all(|o| {
        o.iter().any(|zeta| {
            let (zs, xs, ys) = (stab(z, zeta), stab(x_tilde, zeta), stab(y_hat, zeta));
            product_order(&xs, &ys) == zs.order()
        })
    });

    // (c)
    let twisted_factorizes = chars.iter().all(|zeta| {
        let zs = stab(z, zeta);
        let xs = stab(x_tilde, zeta);
        x_tilde.elements().iter().any(|t| {
            let yt = y_hat.subgroup(y_hat.gens().iter().map(|g| t.inverse().conj(g)).collect());
            let ys = stab(&yt, zeta);
            product_order(&ys, &xs) == zs.order()
        })
    });
    Ok(TransversalCheck { stable_transversal, conjugate_factorizes, twisted_factorizes })
}

/// Per-character record of the maximal extendibility check for `H′ ◁ V̄′`.
#[derive(Debug, Clone, Serialize)]
pub struct CharacterRecord {
    pub index: usize,
    /// `λ(h₀) = ±1`
    pub h0_sign: i8,
    pub stabilizer_order: usize,
    pub witness: bool,
    pub obstruction: Option<(u64, u64)>,
    /// independent answer from character tables, when computed
    pub table_extends: Option<bool>,
}

/// The structure found for a character with `λ(h₀) = −1`.
#[derive(Debug, Clone, Serialize)]
pub struct SignedRecord {
    pub index: usize,
    /// index of the conjugate `λ′` that works
    pub conjugate: Option<usize>,
    /// `|V̄′_{λ̃′}|`, `|V̄′_{λ′}|`
    pub orders: Option<(usize, usize)>,
    pub holds: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct MaxExtReport {
    pub rank: usize,
    pub order_v: usize,
    pub order_h: usize,
    pub order_h_tilde: usize,
    pub characters: Vec<CharacterRecord>,
    pub signed: Vec<SignedRecord>,
    pub all_extend: bool,
    pub structure_holds: bool,
}

/// The groups `H′ ≤ H̃′` and `V̄′` inside the spin model of rank `l`.
pub struct PrimeGroups {
    pub ctx: SpinCtx,
    pub h_tilde: FiniteGroup<MonomialElt>,
    pub h: FiniteGroup<MonomialElt>,
    pub v: FiniteGroup<MonomialElt>,
    pub p: u64,
}

impl PrimeGroups {
    pub fn new(l: usize) -> Result<Self> {
        let ctx = SpinCtx::new(l, 3)?;
        let set: Vec<usize> = (0..l).collect();
        let ht = ctx.torus.h_tilde_set(&set);
        let hp = ht.intersection(&ctx.torus.h_zero());
        let h_tilde = ctx.group(ht.gens().iter().map(|c| ctx.t(c)).collect())?;
        let h = ctx.group(hp.gens().iter().map(|c| ctx.t(c)).collect())?;
        let v = ctx.group(ctx.v_bar_set_gens(&set))?;
        if !v.is_normal(&h) || !v.gens().iter().all(|g| v.normalizes(g, &h_tilde)) {
            return precondition("H′ and H̃′ must be normalized by V̄′");
        }
        let p = table_prime(v.order(), v.exponent());
        Ok(PrimeGroups { ctx, h_tilde, h, v, p })
    }

    /// A `V̄′`-equivariant extension map for `H′ ◁ V̄′` on all of `Irr(H′)`.
    pub fn extension_map(&self) -> Result<ExtensionMap<MonomialElt>> {
        let chars = irr_elementwise(&self.h, self.p)?;
        equivariant_extension_map(&self.h, &self.v, &self.v, |g, y| g.conj(y), &chars, self.p, |_, _, _| true)
    }
}

/// Maximal extendibility for `H′ ◁ V̄′` with cocycle witnesses, plus the
/// structure of stabilizers of characters that are nontrivial on `h₀`.
/// `cross_check` adds the character-table answer for every character.
pub fn max_ext_suite(l: usize, cross_check: bool) -> Result<MaxExtReport> {
    let g = PrimeGroups::new(l)?;
    let p = g.p;
    let ht = CharTable::with_prime(&g.h, p)?;
    let htt = CharTable::with_prime(&g.h_tilde, p)?;
    let h0 = g.ctx.h0();
    let conj_act = |base: &FiniteGroup<MonomialElt>| {
        let base = base.clone();
        move |x: &MonomialElt, v: &Vec<u64>| transport(&base, v, |y| x.conj(y))
    };
    let act_h = conj_act(&g.h);
    let act_ht = conj_act(&g.h_tilde);
    let lambdas: Vec<Vec<u64>> = ht.irr.iter().map(|c| ht.elementwise(c)).collect();
    let tildes: Vec<Vec<u64>> = htt.irr.iter().map(|c| htt.elementwise(c)).collect();
    let h0_idx = g.h.index_of(&h0).unwrap();

    let mut characters = Vec::new();
    for (idx, chi) in ht.irr.iter().enumerate() {
        let lam = &lambdas[idx];
        let stab = g.v.stabilizer(lam, &act_h);
        let m = stab.exponent();
        let ex = ht.linear_exponents(chi, m).expect("linear character");
        let sol = linear_ext_cocycle(&g.h, &stab, |x| ex[ht.class_of(x)], m)?;
        let table_extends = if cross_check {
            let st = CharTable::with_prime(&stab, p)?;
            Some(extends_to(&ht, chi, &st)?)
        } else {
            None
        };
        let obstruction = match sol {
            LinearExtension::Obstruction { residue, modulus } => Some((residue, modulus)),
            LinearExtension::Witness { .. } => None,
        };
        characters.push(CharacterRecord {
            index: idx,
            h0_sign: if lam[h0_idx] == 1 { 1 } else { -1 },
            stabilizer_order: stab.order(),
            witness: obstruction.is_none(),
            obstruction,
            table_extends,
        });
    }

    let sym_order: usize = (1..=l).product();
    let mut signed = Vec::new();
    for rec in characters.iter().filter(|r| r.h0_sign == -1) {
        let lam = &lambdas[rec.index];
        let mut found = None;
        'search: for (ci, conj) in lambdas.iter().enumerate() {
            // λ′ must be V̄′-conjugate to λ
            let orbit_has = {
                let mut seen = vec![lam.clone()];
                let mut i = 0;
                while i < seen.len() {
                    for s in g.v.gens() {
                        let d = act_h(s, &seen[i]);
                        if !seen.contains(&d) {
                            seen.push(d);
                        }
                    }
                    i += 1;
                }
                seen.contains(conj)
            };
            if !orbit_has {
                continue;
            }
            let stab_l = g.v.stabilizer(conj, &act_h);
            for tl in &tildes {
                if restrict_values(&g.h_tilde, tl, &g.h).as_ref() != Some(conj) {
                    continue;
                }
                let stab_t = g.v.stabilizer(tl, &act_ht);
                let images: HashSet<Vec<i8>> = stab_t.elements().iter().map(|x| x.w.signed_images().to_vec()).collect();
                let symmetric =
                    images.len() == sym_order && stab_t.elements().iter().all(|x| x.w.num_negated() == 0);
                if !symmetric {
                    continue;
                }
                let c = stab_l.elements().iter().find(|x| (0..l).all(|i| x.w.apply(i) == (i, true)));
                if let Some(c) = c {
                    let mut gens = stab_t.gens().to_vec();
                    gens.push(c.clone());
                    if g.v.subgroup(gens).order() == stab_l.order() {
                        found = Some((ci, stab_t.order(), stab_l.order()));
                        break 'search;
                    }
                }
            }
        }
        signed.push(SignedRecord {
            index: rec.index,
            conjugate: found.map(|f| f.0),
            orders: found.map(|f| (f.1, f.2)),
            holds: found.is_some(),
        });
    }
    let all_extend = characters.iter().all(|r| r.witness && r.table_extends.unwrap_or(true));
    let structure_holds = signed.iter().all(|s| s.holds);
    Ok(MaxExtReport {
        rank: l,
        order_v: g.v.order(),
        order_h: g.h.order(),
        order_h_tilde: g.h_tilde.order(),
        characters,
        signed,
        all_extend,
        structure_holds,
    })
}
