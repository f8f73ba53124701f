//! Weight-monomial model of the torus normalizer of `Spin_{2l+1}` inside
//! its spin representation, the extended Weyl groups built from it and the
//! relation suite.
//!
//! Basis vectors are indexed by bitmasks `n ∈ {0,1}^l`; bit `i` set means the
//! weight has `+½` in coordinate `i`. Root vectors come from a Jordan–Wigner
//! realization of the Clifford algebra, so all signs are those of an honest
//! Chevalley basis.

use std::collections::BTreeMap;
use std::fmt;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{invalid, Result};
use crate::group::{FiniteGroup, GroupElement};
use crate::levi::{Decomposition, Orbit, Root, RootSystem};
use crate::signed::{kappa_bar, reflection, weyl_b, SignedPerm, GROUP_CAP};
use crate::torus::{h0_product_holds, weyl_act, TorusChar, TorusModel};

pub const MAX_SPIN_RANK: usize = 8;

/// `g · v_μ = ω^{ph[μ]} v_{w(μ)}`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct MonomialElt {
    pub w: SignedPerm,
    pub ph: Vec<u8>,
    k: u8,
}

/// Image of the weight mask under a signed permutation.
pub fn weight_image(w: &SignedPerm, mask: usize) -> usize {
    let mut out = 0;
    for i in 0..w.degree() {
        let (j, neg) = w.apply(i);
        let bit = (mask >> i) & 1 == 1;
        if bit != neg {
            out |= 1 << j;
        }
    }
    out
}

/// `weight_image` for every mask at once.
pub fn weight_table(w: &SignedPerm) -> Vec<usize> {
    let l = w.degree();
    let mut base = 0;
    let mut bit = vec![0usize; l];
    for (i, b) in bit.iter_mut().enumerate() {
        let (j, neg) = w.apply(i);
        *b = 1 << j;
        if neg {
            base |= 1 << j;
        }
    }
    let mut t = vec![base; 1 << l];
    for mask in 1usize..1 << l {
        let low = mask.trailing_zeros() as usize;
        t[mask] = t[mask & (mask - 1)] ^ bit[low];
    }
    t
}

impl MonomialElt {
    pub fn modulus(&self) -> u16 {
        1 << self.k
    }

    pub fn is_torus(&self) -> bool {
        self.w == SignedPerm::identity(self.w.degree())
    }

    /// Diagonal part as a character, if this is a torus element.
    pub fn as_torus(&self) -> Option<TorusChar> {
        if !self.is_torus() {
            return None;
        }
        let l = self.w.degree();
        let all = (1usize << l) - 1;
        let m = self.modulus() as u64;
        let b = self.ph[all] as u64;
        let a: Vec<u64> = (0..l).map(|i| (b + m - self.ph[all ^ (1 << i)] as u64) % m).collect();
        let chi = TorusChar { k: self.k as u32, a, b };
        (embed_torus(&chi) == *self).then_some(chi)
    }
}

impl fmt::Debug for MonomialElt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {:?})", self.w, self.ph)
    }
}

impl GroupElement for MonomialElt {
    fn op(&self, o: &Self) -> Self {
        let mask = (self.modulus() - 1) as u8;
        let t = weight_table(&o.w);
        let ph = o.ph.iter().zip(&t).map(|(&p, &mu)| p.wrapping_add(self.ph[mu]) & mask).collect();
        MonomialElt { w: self.w.op(&o.w), ph, k: self.k }
    }

    fn inverse(&self) -> Self {
        let mask = (self.modulus() - 1) as u8;
        let mut ph = vec![0u8; self.ph.len()];
        for (&mu, &p) in weight_table(&self.w).iter().zip(&self.ph) {
            ph[mu] = p.wrapping_neg() & mask;
        }
        MonomialElt { w: self.w.inverse(), ph, k: self.k }
    }
}

pub fn embed_torus(chi: &TorusChar) -> MonomialElt {
    let l = chi.rank();
    let ph = (0..1usize << l)
        .map(|mask| chi.eval_weight((0..l).filter(|i| (mask >> i) & 1 == 0)) as u8)
        .collect();
    MonomialElt { w: SignedPerm::identity(l), ph, k: chi.k as u8 }
}

// Fermionic operators on basis masks: Some((mask, negative)).
type Op = Option<(usize, bool)>;

fn jw_sign(mask: usize, i: usize) -> bool {
    (mask & ((1 << i) - 1)).count_ones() % 2 == 1
}
fn create(i: usize, x: Op) -> Op {
    let (m, s) = x?;
    ((m >> i) & 1 == 0).then(|| (m | 1 << i, s ^ jw_sign(m, i)))
}
fn annihilate(i: usize, x: Op) -> Op {
    let (m, s) = x?;
    ((m >> i) & 1 == 1).then(|| (m & !(1 << i), s ^ jw_sign(m, i)))
}
fn parity(x: Op) -> Op {
    let (m, s) = x?;
    Some((m, s ^ (m.count_ones() % 2 == 1)))
}

/// Root vector `E_α` applied to a basis mask. Negative root vectors are the
/// transposes of positive ones.
pub fn root_vector(alpha: &[i32], mask: usize) -> Op {
    let x = Some((mask, false));
    let supp: Vec<usize> = (0..alpha.len()).filter(|&i| alpha[i] != 0).collect();
    match supp.as_slice() {
        [i] if alpha[*i] > 0 => parity(create(*i, x)),
        [i] => annihilate(*i, parity(x)),
        [i, j] => {
            let (i, j) = (*i, *j);
            match (alpha[i] > 0, alpha[j] > 0) {
                (true, false) => create(i, annihilate(j, x)),
                (false, true) => create(j, annihilate(i, x)),
                (true, true) => create(i, create(j, x)),
                (false, false) => annihilate(j, annihilate(i, x)),
            }
        }
        _ => panic!("not a root: {alpha:?}"),
    }
}

/// Rank, phase modulus and the torus model sharing them.
#[derive(Debug, Clone, Copy)]
pub struct SpinCtx {
    pub rank: usize,
    pub k: u32,
    pub torus: TorusModel,
}

impl SpinCtx {
    pub fn new(rank: usize, k: u32) -> Result<Self> {
        if !(1..=MAX_SPIN_RANK).contains(&rank) {
            return invalid(format!("rank {rank} outside 1..={MAX_SPIN_RANK}"));
        }
        if !(2..=8).contains(&k) {
            return invalid(format!("modulus exponent {k} outside 2..=8"));
        }
        Ok(SpinCtx { rank, k, torus: TorusModel::with_k(rank, k, 3) })
    }

    pub fn m(&self) -> u64 {
        1 << self.k
    }

    pub fn one(&self) -> MonomialElt {
        embed_torus(&self.torus.one())
    }

    pub fn t(&self, chi: &TorusChar) -> MonomialElt {
        embed_torus(chi)
    }

    pub fn h0(&self) -> MonomialElt {
        self.t(&self.torus.h0())
    }

    /// `n_α(1) = x_α(1)x_{−α}(−1)x_α(1)`: on each string `v₋ ↦ v₊ = E_α v₋`
    /// it acts by `v₊ ↦ −v₋`, `v₋ ↦ v₊`.
    pub fn n_one(&self, alpha: &[i32]) -> MonomialElt {
        let l = self.rank;
        let half = (self.m() / 2) as u8;
        let mut tgt: Vec<Option<(usize, bool)>> = vec![None; 1 << l];
        for mask in 0..1usize << l {
            if let Some((up, neg)) = root_vector(alpha, mask) {
                tgt[mask] = Some((up, neg));
                tgt[up] = Some((mask, !neg));
            }
        }
        let w = reflection(alpha);
        let ph = tgt
            .iter()
            .enumerate()
            .map(|(mask, t)| {
                let (to, neg) = t.unwrap_or((mask, false));
                assert_eq!(to, weight_image(&w, mask), "string does not follow s_α");
                if neg {
                    half
                } else {
                    0
                }
            })
            .collect();
        MonomialElt { w, ph, k: self.k as u8 }
    }

    /// `n_α(ω^c) = h_α(ω^c) n_α(1)`
    pub fn n(&self, alpha: &[i32], c: u64) -> MonomialElt {
        self.t(&self.torus.h(alpha, c)).op(&self.n_one(alpha))
    }

    pub fn unit(&self, i: usize) -> Root {
        self.torus.unit(i)
    }

    fn diff(&self, i: usize, j: usize) -> Root {
        let mut r = vec![0; self.rank];
        r[i] = 1;
        r[j] = -1;
        r
    }

    /// `n̄₁ = n_{e₁}(ϖ)`
    pub fn n_bar1(&self) -> MonomialElt {
        self.n(&self.unit(0), self.torus.varpi())
    }

    /// `n̄_i = n_{α_i}(−1)` with `α_i = e_i − e_{i−1}`, `i ≥ 2` (1-based).
    pub fn n_bar(&self, i: usize) -> MonomialElt {
        self.n(&self.diff(i - 1, i - 2), self.torus.minus_one())
    }

    pub fn group(&self, gens: Vec<MonomialElt>) -> Result<FiniteGroup<MonomialElt>> {
        FiniteGroup::closure(self.one(), gens, GROUP_CAP)
    }

    /// Group generated by a large set, picking generators greedily.
    pub fn span(&self, elems: &[MonomialElt]) -> Result<FiniteGroup<MonomialElt>> {
        let mut gens = Vec::new();
        let mut cur = self.group(vec![])?;
        for x in elems {
            if !cur.contains(x) {
                gens.push(x.clone());
                cur = self.group(gens.clone())?;
            }
        }
        Ok(cur)
    }

    /// `V′_Weyl = ⟨n_{e₁}(1), n_{α_i}(−1)⟩`
    pub fn v_weyl(&self) -> Result<FiniteGroup<MonomialElt>> {
        let mut gens = vec![self.n_one(&self.unit(0))];
        gens.extend((2..=self.rank).map(|i| self.n_bar(i)));
        self.group(gens)
    }

    /// `V̄₀ = ⟨n̄₁, n̄_i⟩`
    pub fn v_bar0(&self) -> Result<FiniteGroup<MonomialElt>> {
        let mut gens = vec![self.n_bar1()];
        gens.extend((2..=self.rank).map(|i| self.n_bar(i)));
        self.group(gens)
    }

    /// Generators of `V_I = ⟨h₀, n_{±e_i±e_j}(1)⟩`, 0-based `I`.
    pub fn v_set_gens(&self, set: &[usize]) -> Vec<MonomialElt> {
        let mut gens = vec![self.h0()];
        for &i in set {
            for &j in set {
                if i < j {
                    for sj in [1, -1] {
                        let mut r = vec![0; self.rank];
                        r[i] = 1;
                        r[j] = sj;
                        gens.push(self.n_one(&r));
                    }
                }
            }
        }
        gens
    }

    /// Generators of `V̄_I = V_I⟨n_{e_i}(ϖ)⟩`.
    pub fn v_bar_set_gens(&self, set: &[usize]) -> Vec<MonomialElt> {
        let mut gens = self.v_set_gens(set);
        gens.extend(set.iter().map(|&i| self.n(&self.unit(i), self.torus.varpi())));
        gens
    }

    /// A lift of an unsigned permutation `f` (0-based images) as a product
    /// of `n_{e_i−e_j}(−1)`.
    pub fn lift_perm(&self, f: &[usize]) -> MonomialElt {
        // f = t_1 ⋯ t_r, built by sorting f back to the identity
        let mut cur: Vec<usize> = f.to_vec();
        let mut ts = Vec::new();
        for i in 0..cur.len() {
            if cur[i] != i {
                let j = cur.iter().position(|&x| x == i).unwrap();
                // right-multiplying by (i j) swaps positions i and j
                cur.swap(i, j);
                ts.push((i, j));
            }
        }
        // f = cur_0 and cur_0 ∘ t_1 ∘ ⋯ ∘ t_r = id, so f = t_r ∘ ⋯ ∘ t_1
        let mut m = self.one();
        for &(i, j) in ts.iter().rev() {
            m = m.op(&self.n(&self.diff(i, j), self.torus.minus_one()));
        }
        debug_assert_eq!(m.w, SignedPerm::from_pairs(&f.iter().map(|&x| (x, false)).collect::<Vec<_>>()));
        m
    }
}

/// `κ_d` with its chosen lifts `m_k^{(d)}`.
pub struct Kappa {
    pub d: i32,
    pub a: usize,
    pub lifts: Vec<MonomialElt>,
}

impl Kappa {
    pub fn new(ctx: &SpinCtx, dec: &Decomposition, d: i32) -> Result<Self> {
        if d == -1 || dec.a(d) == 0 {
            return invalid(format!("kappa_{d} is undefined"));
        }
        let dd = dec.orbits_of(d)[0].elems.len();
        let lifts = (1..=dd)
            .map(|k| {
                let f: Vec<usize> = dec.f_map(d, k).into_iter().map(|x| x - 1).collect();
                ctx.lift_perm(&f)
            })
            .collect();
        Ok(Kappa { d, a: dec.a(d), lifts })
    }

    /// `x ↦ ∏_k m_k x m_k⁻¹`
    pub fn apply(&self, x: &MonomialElt) -> MonomialElt {
        let mut acc: Option<MonomialElt> = None;
        for m in &self.lifts {
            let y = m.conj(x);
            acc = Some(match acc {
                None => y,
                Some(a) => a.op(&y),
            });
        }
        acc.unwrap()
    }

    pub fn apply_reversed(&self, x: &MonomialElt) -> MonomialElt {
        let mut acc: Option<MonomialElt> = None;
        for m in self.lifts.iter().rev() {
            let y = m.conj(x);
            acc = Some(match acc {
                None => y,
                Some(a) => a.op(&y),
            });
        }
        acc.unwrap()
    }

    pub fn domain(&self) -> Vec<usize> {
        (0..self.a).collect()
    }
}

/// Subgroups of the normalizer attached to a decomposition.
pub struct SpinGroups {
    pub v_bar_d: Vec<(i32, FiniteGroup<MonomialElt>)>,
    pub v_bar: FiniteGroup<MonomialElt>,
    pub v_d: FiniteGroup<MonomialElt>,
    pub v_s: FiniteGroup<MonomialElt>,
    /// `c_I` for every orbit (report order of `dec.orbits`)
    pub c: Vec<(Orbit, MonomialElt)>,
    pub kappas: Vec<Kappa>,
}

fn zero_based(o: &Orbit) -> Vec<usize> {
    o.elems.iter().map(|x| x - 1).collect()
}

pub fn build_groups(ctx: &SpinCtx, dec: &Decomposition) -> Result<SpinGroups> {
    let hd = ctx.torus.subgroup_h(dec);
    let mut v_bar_d = Vec::new();
    let mut kappas = Vec::new();
    let mut c = Vec::new();
    let mut vs_gens: Vec<MonomialElt> = Vec::new();
    for d in dec.d_set() {
        if d == -1 {
            let g = ctx.group(vec![ctx.h0(), ctx.n_bar1()])?;
            v_bar_d.push((d, g));
            continue;
        }
        let kap = Kappa::new(ctx, dec, d)?;
        let dom = ctx.group(ctx.v_bar_set_gens(&kap.domain()))?;
        let imgs: Vec<MonomialElt> = dom.elements().par_iter().map(|x| kap.apply(x)).collect();
        v_bar_d.push((d, ctx.span(&imgs)?));
        for j in 0..kap.a {
            let cj = kap.apply(&ctx.n(&ctx.unit(j), ctx.torus.varpi()));
            c.push((dec.orbits_of(d)[j].clone(), cj));
        }
        let h_d = &hd.h_d.iter().find(|(x, _)| *x == d).unwrap().1;
        vs_gens.extend(h_d.gens().iter().map(|x| ctx.t(x)));
        for i in 0..kap.a.saturating_sub(1) {
            vs_gens.push(kap.apply(&ctx.n(&ctx.diff(i, i + 1), ctx.torus.minus_one())));
        }
        kappas.push(kap);
    }
    if let Some(o) = dec.j_minus1() {
        c.push((o.clone(), ctx.n_bar1()));
    }
    let order_key = |o: &Orbit| dec.orbits.iter().position(|p| p == o).unwrap();
    c.sort_by_key(|(o, _)| order_key(o));
    let mut gens: Vec<MonomialElt> = hd.h.gens().iter().map(|x| ctx.t(x)).collect();
    for (_, g) in &v_bar_d {
        gens.extend(g.gens().iter().cloned());
    }
    let v_bar = ctx.group(gens)?;
    let v_d = v_bar.filter(|x| x.w.num_negated() % 2 == 0);
    let v_s = ctx.group(vs_gens)?;
    Ok(SpinGroups { v_bar_d, v_bar, v_d, v_s, c, kappas })
}

/// One entry of the relation report.
#[derive(Debug, Clone, Serialize)]
pub struct Relation {
    pub name: String,
    pub holds: bool,
    #[serde(skip_serializing_if = "String::is_empty")]
    pub detail: String,
}

fn rel(name: impl Into<String>, holds: bool, detail: impl Into<String>) -> Relation {
    Relation { name: name.into(), holds, detail: detail.into() }
}

/// Commutator subgroup `[A, B]` when all generator commutators are central
/// in `⟨A, B⟩`: `None` otherwise.
fn central_commutators(
    ctx: &SpinCtx,
    a: &[MonomialElt],
    b: &[MonomialElt],
) -> Result<Option<FiniteGroup<MonomialElt>>> {
    let mut comms = Vec::new();
    let all: Vec<&MonomialElt> = a.iter().chain(b).collect();
    for x in a {
        for y in b {
            let c = x.op(y).op(&x.inverse()).op(&y.inverse());
            if !all.iter().all(|g| g.op(&c) == c.op(g)) {
                return Ok(None);
            }
            comms.push(c);
        }
    }
    Ok(Some(ctx.group(comms)?))
}

/// Relations that only depend on the rank.
pub fn verify_rank_relations(ctx: &SpinCtx) -> Result<Vec<Relation>> {
    let mut out = Vec::new();
    let l = ctx.rank;
    let tor = &ctx.torus;
    let rs = RootSystem { rank: l };

    // n_α(1) realizes s_α and squares to h_α(−1)
    let mut ok = true;
    for r in rs.roots_b() {
        let n = ctx.n_one(&r);
        ok &= n.op(&n) == ctx.t(&tor.h(&r, tor.minus_one()));
        let neg: Vec<i32> = r.iter().map(|x| -x).collect();
        ok &= ctx.n_one(&neg) == n.inverse();
    }
    out.push(rel("n_alpha(1)^2 = h_alpha(-1)", ok, ""));

    let nb1 = ctx.n_bar1();
    out.push(rel("n_bar_1^2 = h0", nb1.op(&nb1) == ctx.h0(), ""));
    out.push(rel("w(n_e1(varpi)) = (1,-1)", nb1.w == SignedPerm::flip(l, 0), ""));

    // V̄₀ ∩ T = H₀ and |V̄₀| = |H₀|·|𝒮_{±l}|
    let v0 = ctx.v_bar0()?;
    let h0g = tor.h_zero();
    let tpart: Vec<TorusChar> = v0.elements().iter().filter_map(|x| x.as_torus()).collect();
    let meet_ok = tpart.len() == h0g.order() && tpart.iter().all(|x| h0g.contains(x));
    out.push(rel("V0bar cap T = H0", meet_ok, format!("|V0bar cap T| = {}", tpart.len())));
    let wb = weyl_b(l, GROUP_CAP)?;
    out.push(rel(
        "|V0bar| = |H0| |S_{+-l}|",
        v0.order() == h0g.order() * wb.order(),
        format!("{} vs {}", v0.order(), h0g.order() * wb.order()),
    ));
    let vw = ctx.v_weyl()?;
    out.push(rel("|V'_Weyl| = |V0bar|", vw.order() == v0.order(), ""));

    // conjugation on the torus factors through w
    let mut ok = true;
    for g in v0.gens() {
        for i in 0..l {
            let chi = tor.h_e(i, 1);
            ok &= g.conj(&ctx.t(&chi)) == ctx.t(&weyl_act(&g.w, &chi));
        }
    }
    out.push(rel("conjugation factors through w", ok, ""));

    // [V̄_I, V_{I'}] = 1 and [V̄_I, V̄_{I'}] = ⟨h₀⟩ for {1}, {2}
    if l >= 2 {
        out.extend(commutator_relations(ctx, &[0], &[1])?);
    }
    Ok(out)
}

fn commutator_relations(ctx: &SpinCtx, i: &[usize], j: &[usize]) -> Result<Vec<Relation>> {
    let tag = format!("{:?},{:?}", i.iter().map(|x| x + 1).collect::<Vec<_>>(), j.iter().map(|x| x + 1).collect::<Vec<_>>());
    let vb_i = ctx.v_bar_set_gens(i);
    let v_j = ctx.v_set_gens(j);
    let vb_j = ctx.v_bar_set_gens(j);
    let h0 = ctx.group(vec![ctx.h0()])?;
    let trivial = central_commutators(ctx, &vb_i, &v_j)?.is_some_and(|g| g.order() == 1);
    let full = central_commutators(ctx, &vb_i, &vb_j)?.is_some_and(|g| g.same_elements(&h0));
    Ok(vec![
        rel(format!("[Vbar_I, V_I'] = 1 ({tag})"), trivial, ""),
        rel(format!("[Vbar_I, Vbar_I'] = <h0> ({tag})"), full, ""),
    ])
}

/// Relations attached to one decomposition.
pub fn verify_relations(ctx: &SpinCtx, dec: &Decomposition) -> Result<Vec<Relation>> {
    let mut out = Vec::new();
    let tor = &ctx.torus;
    let l = ctx.rank;
    let groups = build_groups(ctx, dec)?;
    let hd = tor.subgroup_h(dec);
    let vp = tor.varpi();
    let mv = (vp + tor.minus_one()) % tor.m();

    for (x, o1) in dec.orbits.iter().enumerate() {
        for o2 in dec.orbits.iter().skip(x + 1) {
            out.extend(commutator_relations(ctx, &zero_based(o1), &zero_based(o2))?);
        }
    }

    for kap in &groups.kappas {
        let d = kap.d;
        let dom_v = ctx.group(ctx.v_set_gens(&kap.domain()))?;
        let dom_vb = ctx.group(ctx.v_bar_set_gens(&kap.domain()))?;
        // (a) homomorphism on V_a: generators against all elements suffice
        let hom = dom_v.gens().iter().all(|g| {
            let kg = kap.apply(g);
            dom_v.elements().iter().all(|y| kap.apply(&g.op(y)) == kg.op(&kap.apply(y)))
        });
        out.push(rel(format!("kappa_{d} is a morphism on V_a"), hom, ""));
        let indep = dom_v.gens().iter().all(|g| kap.apply(g) == kap.apply_reversed(g));
        out.push(rel(format!("kappa_{d} independent of order on V_a"), indep, ""));
        // (b) equivariance
        let equi = dom_vb.elements().par_iter().all(|x| {
            let kx = kap.apply(x);
            dom_v.gens().iter().all(|v| kap.apply(&x.inverse().conj(v)) == kx.inverse().conj(&kap.apply(v)))
        });
        out.push(rel(format!("kappa_{d}(v^x) = kappa_{d}(v)^kappa_{d}(x)"), equi, ""));
        // (c), (d)
        let orbs: Vec<Vec<usize>> = dec.orbits_of(d).iter().map(|o| zero_based(o)).collect();
        let h0d = tor.h0().pow(d.unsigned_abs() as u64);
        let h_a = tor.h_set_group(&kap.domain());
        let img_c = ctx.group(h_a.gens().iter().map(|x| kap.apply(&ctx.t(x))).collect())?;
        let mut exp_c = vec![ctx.t(&h0d)];
        for o in &orbs {
            for o2 in &orbs {
                exp_c.push(ctx.t(&tor.h_set(o, vp).op(&tor.h_set(o2, mv))));
            }
        }
        out.push(rel(format!("kappa_{d}(H_a) = <h0^d, h_I(w)h_I'(-w)>"), img_c.same_elements(&ctx.group(exp_c)?), ""));
        let ht_a = tor.h_tilde_set(&kap.domain());
        let img_d = ctx.group(ht_a.gens().iter().map(|x| kap.apply(&ctx.t(x))).collect())?;
        let mut exp_d = vec![ctx.t(&h0d)];
        exp_d.extend(orbs.iter().map(|o| ctx.t(&tor.h_set(o, vp))));
        out.push(rel(format!("kappa_{d}(Htilde_a) = <h0^d, h_I(w)>"), img_d.same_elements(&ctx.group(exp_d)?), ""));
        // (e) ρ∘κ = κ̄∘ρ on the whole domain
        let mut ok = true;
        for x in dom_vb.elements() {
            let pi = x.w.restrict(&kap.domain());
            ok &= kap.apply(x).w == kappa_bar(d, dec, &pi)?;
        }
        out.push(rel(format!("rho kappa_{d} = kappa_bar_{d} rho"), ok, ""));
    }

    // c_I
    let mut ok = true;
    for (o, c) in &groups.c {
        let expect = SignedPerm::flips(l, &zero_based(o));
        if o.weight == -1 {
            ok &= *c == ctx.n_bar1();
        } else {
            ok &= c.w == expect;
        }
    }
    out.push(rel("rho(c_I) = prod (i,-i); c_J-1 = n_bar_1", ok, ""));

    // ρ(V̄) = W°(L) and Stab_{W̄₀}(Φ′) = W_{Φ′} W°(L)
    let wb = weyl_b(l, GROUP_CAP)?;
    let rho_vbar = FiniteGroup::generate(SignedPerm::identity(l), groups.v_bar.gens().iter().map(|x| x.w.clone()).collect());
    let mut wo_gens = Vec::new();
    for d in dec.d_set() {
        if d == -1 {
            wo_gens.push(SignedPerm::flip(l, 0));
            continue;
        }
        let a = dec.a(d);
        let sa = weyl_b(a, GROUP_CAP)?;
        for g in sa.gens() {
            wo_gens.push(kappa_bar(d, dec, g)?);
        }
    }
    let w_o = FiniteGroup::generate(SignedPerm::identity(l), wo_gens);
    out.push(rel("rho(Vbar) = W°(L)", rho_vbar.same_elements(&w_o), ""));
    let phi: std::collections::HashSet<Root> = dec.phi_prime.iter().cloned().collect();
    let stab = wb.filter(|w| dec.phi_prime.iter().all(|a| phi.contains(&w.act_vec(a))));
    let mut gens: Vec<SignedPerm> = dec.phi_prime.iter().map(|a| reflection(a)).collect();
    gens.extend(w_o.gens().iter().cloned());
    let prod = FiniteGroup::generate(SignedPerm::identity(l), gens.clone());
    out.push(rel("Stab(Phi') = W_Phi' W°(L)", prod.same_elements(&stab), format!("|Stab| = {}", stab.order())));
    // N = L V_D at the level of Weyl groups
    let stab_d = stab.filter(|w| w.num_negated() % 2 == 0);
    let mut gens_d: Vec<SignedPerm> = dec.phi_prime.iter().map(|a| reflection(a)).collect();
    gens_d.extend(groups.v_d.gens().iter().map(|x| x.w.clone()));
    let prod_d = FiniteGroup::generate(SignedPerm::identity(l), gens_d);
    out.push(rel("N = L V_D", prod_d.same_elements(&stab_d) && groups.v_d.elements().iter().all(|x| x.w.num_negated() % 2 == 0), ""));
    // V̄ ∩ L ≤ H: torus part of V̄ inside H, and V̄ normalizes Φ′
    let tor_part: Vec<TorusChar> = groups.v_bar.elements().iter().filter_map(|x| x.as_torus()).collect();
    out.push(rel(
        "Vbar cap T = H",
        tor_part.len() == hd.h.order() && tor_part.iter().all(|x| hd.h.contains(x)),
        format!("{} vs {}", tor_part.len(), hd.h.order()),
    ));

    // torus layer
    let sp = hd.split(tor);
    out.push(rel(
        "H = H_even H_odd, commuting, meeting in <h0>",
        sp.generating && sp.commuting && sp.meet_in_h0,
        format!("|H|={} |H_even|={} |H_odd|={} meet={}", sp.order_h, sp.order_even, sp.order_odd, sp.intersection),
    ));
    out.push(rel(
        "H = H_even x H_odd (literal)",
        sp.direct,
        if sp.direct { String::new() } else { format!("H_even and H_odd meet in a group of order {}", sp.intersection) },
    ));
    out.push(rel("H <= Z(L)", tor.check_central(&hd.h, &dec.phi_prime), ""));
    let big = TorusModel::new(l, 3)?;
    let mut ok = true;
    for o in &dec.orbits {
        if o.elems.len() % 2 == 0 {
            ok &= h0_product_holds(&big, &zero_based(o));
        }
    }
    out.push(rel("h0 = h_I(zeta) prod h_{ei-ej}(zeta^-2) on even orbits", ok, ""));
    Ok(out)
}

/// Relation suite for a rank: rank-level relations plus those of every
/// normalized Levi datum.
pub fn relation_suite(l: usize, k: u32) -> Result<BTreeMap<String, Vec<Relation>>> {
    let ctx = SpinCtx::new(l, k)?;
    let mut out = BTreeMap::new();
    out.insert("rank".to_string(), verify_rank_relations(&ctx)?);
    for lv in crate::levi::all_normalized(l) {
        let dec = crate::levi::decompose(&lv);
        let key = format!("{:?}", lv.delta);
        out.insert(key, verify_relations(&ctx, &dec)?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::levi::{decompose, normalize_levi};

    #[test]
    fn rank_one_and_torus_embedding() {
        let ctx = SpinCtx::new(1, 3).unwrap();
        let n = ctx.n_one(&[1]);
        let h0 = ctx.h0();
        assert_eq!(n.op(&n), h0);
        assert!(h0.ph.iter().all(|&p| p as u64 == ctx.m() / 2));
        assert_eq!(ctx.t(&ctx.torus.one()), ctx.one());
    }

    #[test]
    fn embedding_is_faithful() {
        let ctx = SpinCtx::new(3, 3).unwrap();
        let g = ctx.torus.h_zero();
        for x in g.elements() {
            let e = ctx.t(x);
            assert_eq!(e.as_torus().as_ref(), Some(x));
            assert_eq!(e.is_torus() && e == ctx.one(), x.is_identity());
        }
    }

    #[test]
    fn rank_relations_hold() {
        for l in 2..=4 {
            let ctx = SpinCtx::new(l, 3).unwrap();
            for r in verify_rank_relations(&ctx).unwrap() {
                assert!(r.holds, "l={l}: {} {}", r.name, r.detail);
            }
        }
    }

    #[test]
    fn weight_table_matches_pointwise() {
        let w = SignedPerm::from_signed(&[3, -1, 2, -4]).unwrap();
        let t = weight_table(&w);
        for mask in 0..16 {
            assert_eq!(t[mask], weight_image(&w, mask));
        }
    }

    #[test]
    fn kappa_two_example() {
        let ctx = SpinCtx::new(4, 3).unwrap();
        let dec = decompose(&normalize_levi(4, &[1, 4]).unwrap().0);
        assert_eq!(dec.a(2), 2);
        let kap = Kappa::new(&ctx, &dec, 2).unwrap();
        let x = ctx.n(&[1, -1, 0, 0], ctx.torus.minus_one());
        let pi = x.w.restrict(&[0, 1]);
        assert_eq!(kap.apply(&x).w, kappa_bar(2, &dec, &pi).unwrap());
    }

    #[test]
    fn relations_hold_at_rank_four() {
        let ctx = SpinCtx::new(4, 3).unwrap();
        for lv in crate::levi::all_normalized(4) {
            let dec = decompose(&lv);
            for r in verify_relations(&ctx, &dec).unwrap() {
                if r.name.contains("literal") {
                    continue;
                }
                assert!(r.holds, "{:?}: {} {}", lv.delta, r.name, r.detail);
            }
        }
    }
}
