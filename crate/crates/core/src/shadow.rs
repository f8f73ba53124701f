//! Cuspidal shadows: the part of a cuspidal character `λ` of a standard
//! Levi subgroup that the relative Weyl group layer actually sees.
//!
//! Every orbit `I ∈ 𝒪` carries a class token standing for the
//! `V_S`-conjugacy class of `λ̂_I`. The sign change `(I,−I)` acts on tokens
//! through `c_I`, the twist by the order-2 character `μ_I` of `L̂_I/L_I`
//! acts through `mu`, and the field generator acts through `fp`. The groups
//! `W̄(λ̂)`, `W̄(λ̃)`, `W̄(λ)` and `K(λ)` are stabilizers of the resulting
//! labelling of `𝒪` inside `𝒮_{±𝒪}`; [`CuspidalShadow::oracle`] computes
//! them that way, while [`CuspidalShadow::rel_weyl`] builds them from
//! generators.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};
use std::sync::{Arc, Mutex, OnceLock};

use rand::seq::SliceRandom;
use rand::Rng;
use serde::Serialize;
use serde_json::{json, Value};

use crate::chars::{extends_to, table_prime, CharTable};
use crate::error::{Error, Result};
use crate::group::{Fingerprint, FiniteGroup};
use crate::levi::Decomposition;
use crate::signed::{full_group, in_d, sorted_orbits, weyl_b, young_gens, SignedPerm, SignedPermGroup, WeightedSet, GROUP_CAP};

/// Which of `L ≤ L̂ ≤ L̃` is the stabilizer `L̃_λ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Stab {
    L,
    #[serde(rename = "Lhat")]
    LHat,
    #[serde(rename = "Ltilde")]
    LTilde,
}

impl Stab {
    pub const ALL: [Stab; 3] = [Stab::L, Stab::LHat, Stab::LTilde];

    pub fn name(self) -> &'static str {
        match self {
            Stab::L => "L",
            Stab::LHat => "Lhat",
            Stab::LTilde => "Ltilde",
        }
    }

    fn parse(s: &str) -> Result<Self> {
        match s {
            "L" => Ok(Stab::L),
            "Lhat" => Ok(Stab::LHat),
            "Ltilde" => Ok(Stab::LTilde),
            _ => Err(Error::InvalidArgument(format!("unknown stab level {s:?}"))),
        }
    }
}

/// Multiplicative order of a linear `λ̂_I` on a weight-1 orbit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum LinOrder {
    One,
    Two,
    Four,
    Other,
}

impl LinOrder {
    pub const ALL: [LinOrder; 4] = [LinOrder::One, LinOrder::Two, LinOrder::Four, LinOrder::Other];

    pub fn divides_two(self) -> bool {
        matches!(self, LinOrder::One | LinOrder::Two)
    }

    fn to_json(self) -> Value {
        match self {
            LinOrder::One => json!(1),
            LinOrder::Two => json!(2),
            LinOrder::Four => json!(4),
            LinOrder::Other => json!("other"),
        }
    }

    fn from_json(v: &Value) -> Result<Self> {
        match (v.as_u64(), v.as_str()) {
            (Some(1), _) => Ok(LinOrder::One),
            (Some(2), _) => Ok(LinOrder::Two),
            (Some(4), _) => Ok(LinOrder::Four),
            (_, Some("other")) => Ok(LinOrder::Other),
            _ => Err(Error::InvalidArgument(format!("bad lin_order {v}"))),
        }
    }

    /// Order of `κ μ_I` for `κ` of this order.
    fn mu_partner(self) -> LinOrder {
        match self {
            LinOrder::One => LinOrder::Two,
            LinOrder::Two => LinOrder::One,
            o => o,
        }
    }
}

/// Data attached to one class token.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ClassData {
    pub name: String,
    pub weight: i32,
    pub c_stable: bool,
    /// sign with `λ̂_I(t²_{I,2}) = ε λ̂_I(1)`; only for `c_stable` classes
    pub eps: Option<i8>,
    /// `I ∈ 𝒪_ind`: the restriction of `λ̂_I` to `L_I` is reducible
    pub ext_split: bool,
    pub lin_order: Option<LinOrder>,
}

/// Image of a class under `μ` or `fp`: another class, possibly composed
/// with `c`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Twist {
    pub class: usize,
    pub c: bool,
}

/// Label carried by an orbit in a decorated labelling. `fresh` marks the
/// `μ`-partner of a class whose partner does not occur in the shadow.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
struct Label {
    class: u8,
    c: bool,
    fresh: bool,
}

type State = Vec<Label>;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CuspidalShadow {
    pub classes: Vec<ClassData>,
    /// class of each orbit; orbits are sorted by `(weight, class)`
    pub orbit_class: Vec<usize>,
    pub h0_in_ker: bool,
    pub stab: Stab,
    /// `None` when the `μ`-partner of the class is not among the classes
    pub mu: Vec<Option<Twist>>,
    pub fp: Vec<Twist>,
}

/// A failed admissibility axiom or consistency rule.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub axiom: &'static str,
    pub detail: String,
}

fn violation(axiom: &'static str, detail: impl Into<String>) -> Violation {
    Violation { axiom, detail: detail.into() }
}

impl CuspidalShadow {
    /// Sorts the orbits; the class list is kept as given.
    pub fn new(
        classes: Vec<ClassData>,
        mut orbit_class: Vec<usize>,
        h0_in_ker: bool,
        stab: Stab,
        mu: Vec<Option<Twist>>,
        fp: Vec<Twist>,
    ) -> Result<Self> {
        let k = classes.len();
        if k > u8::MAX as usize || mu.len() != k || fp.len() != k {
            return Err(Error::InvalidArgument("class tables have inconsistent lengths".into()));
        }
        if orbit_class.iter().any(|&c| c >= k)
            || mu.iter().flatten().chain(fp.iter()).any(|t| t.class >= k)
        {
            return Err(Error::InvalidArgument("class index out of range".into()));
        }
        orbit_class.sort_by_key(|&c| (classes[c].weight, c));
        Ok(CuspidalShadow { classes, orbit_class, h0_in_ker, stab, mu, fp })
    }

    pub fn len(&self) -> usize {
        self.orbit_class.len()
    }

    pub fn is_empty(&self) -> bool {
        self.orbit_class.is_empty()
    }

    pub fn weights(&self) -> WeightedSet {
        WeightedSet { weights: self.orbit_class.iter().map(|&c| self.classes[c].weight).collect() }
    }

    fn class_of(&self, i: usize) -> &ClassData {
        &self.classes[self.orbit_class[i]]
    }

    /// Orbits of class `c`, in order.
    pub fn members(&self, c: usize) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.orbit_class[i] == c).collect()
    }

    pub fn j_minus1(&self) -> Option<usize> {
        (0..self.len()).find(|&i| self.class_of(i).weight == -1)
    }

    // ---- label actions ----

    fn norm(&self, mut l: Label) -> Label {
        if self.classes[l.class as usize].c_stable {
            l.c = false;
        }
        l
    }

    fn c_act(&self, l: Label) -> Label {
        self.norm(Label { c: !l.c, ..l })
    }

    fn mu_act(&self, l: Label) -> Label {
        if l.fresh {
            return Label { fresh: false, ..l };
        }
        match self.mu[l.class as usize] {
            Some(t) => self.norm(Label { class: t.class as u8, c: l.c ^ t.c, fresh: false }),
            None => Label { fresh: true, ..l },
        }
    }

    fn fp_act(&self, l: Label) -> Label {
        let t = self.fp[l.class as usize];
        self.norm(Label { class: t.class as u8, c: l.c ^ t.c, fresh: l.fresh })
    }

    fn state(&self) -> State {
        self.orbit_class.iter().map(|&c| Label { class: c as u8, c: false, fresh: false }).collect()
    }

    /// `(w·s)(w(I)) = s(I)`, composed with `c` when `w` negates `I`.
    fn act(&self, w: &SignedPerm, s: &State) -> State {
        let mut out = s.clone();
        for (i, &l) in s.iter().enumerate() {
            let (j, neg) = w.apply(i);
            out[j] = if neg { self.c_act(l) } else { l };
        }
        out
    }

    fn mu_state(&self, s: &State) -> State {
        s.iter().map(|&l| self.mu_act(l)).collect()
    }

    /// Labellings `φ^k(s)` and `μφ^k(s)` for all `k`.
    fn fp_orbit(&self, s: &State) -> HashSet<State> {
        let mut out = HashSet::new();
        let mut cur = s.clone();
        loop {
            if !out.insert(cur.clone()) {
                break;
            }
            if self.stab != Stab::L {
                out.insert(self.mu_state(&cur));
            }
            cur = cur.iter().map(|&l| self.fp_act(l)).collect();
        }
        out
    }

    // ---- admissibility ----

    /// Consistency rules of the model followed by the axioms A1 to A6.
    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        let k = self.classes.len();
        let used: BTreeSet<usize> = self.orbit_class.iter().copied().collect();
        if used.len() != k {
            out.push(violation("consistency", "every class must label at least one orbit"));
        }
        if self.orbit_class.iter().filter(|&&c| self.classes[c].weight == -1).count() > 1 {
            out.push(violation("consistency", "at most one orbit has weight -1"));
        }
        let mut seen_orders = BTreeMap::new();
        for (c, d) in self.classes.iter().enumerate() {
            let n = &d.name;
            if d.weight == 0 || d.weight < -1 {
                out.push(violation("consistency", format!("{n}: weight {} is not allowed", d.weight)));
            }
            if d.eps.is_some() != d.c_stable || d.eps.is_some_and(|e| e != 1 && e != -1) {
                out.push(violation("consistency", format!("{n}: eps must be ±1 exactly on c-stable classes")));
            }
            if d.lin_order.is_some() != (d.weight == 1) {
                out.push(violation("consistency", format!("{n}: lin_order is given exactly on weight-1 classes")));
            }
            if d.weight == 1 {
                let o = d.lin_order.unwrap_or(LinOrder::Other);
                if d.ext_split {
                    out.push(violation("consistency", format!("{n}: linear characters restrict irreducibly")));
                }
                if d.c_stable != o.divides_two() {
                    out.push(violation("consistency", format!("{n}: a linear character is c-stable iff its order divides 2")));
                }
                let want = match o {
                    LinOrder::One => Some(1),
                    LinOrder::Two => Some(-1),
                    _ => None,
                };
                if want.is_some() && d.eps != want {
                    out.push(violation("consistency", format!("{n}: eps is {want:?} for order {o:?}")));
                }
                if o != LinOrder::Other && seen_orders.insert(o, c).is_some() {
                    out.push(violation("consistency", format!("{n}: only one class has order {o:?}")));
                }
                if o == LinOrder::Four && self.mu[c] != Some(Twist { class: c, c: true }) {
                    out.push(violation("consistency", format!("{n}: for order 4, κμ is κ^c")));
                }
            }
            if d.weight % 2 != 0 && d.c_stable && d.ext_split {
                out.push(violation("consistency", format!("{n}: μ flips eps on odd weights, so c-stable classes there do not split")));
            }
            if d.weight >= 3 && d.weight % 2 == 1 {
                if d.ext_split {
                    out.push(violation("consistency", format!("{n}: odd weight classes restrict irreducibly")));
                }
                if self.mu[c].is_some_and(|t| t.class == c) {
                    out.push(violation("consistency", format!("{n}: odd weight classes are not μ-paired with themselves")));
                }
            }
            // μ
            match self.mu[c] {
                Some(t) if t.class == c && !t.c => {
                    if !d.ext_split {
                        out.push(violation("consistency", format!("{n}: μ fixes only split classes")));
                    }
                }
                _ if d.ext_split => out.push(violation("consistency", format!("{n}: split classes are μ-fixed"))),
                Some(t) => {
                    let e = &self.classes[t.class];
                    if self.mu[t.class] != Some(Twist { class: c, c: t.c }) {
                        out.push(violation("consistency", format!("{n}: μ must be an involution")));
                    }
                    if t.c && d.c_stable {
                        out.push(violation("consistency", format!("{n}: twist by c on a c-stable class")));
                    }
                    let eps_ok = match (d.eps, e.eps) {
                        // t²_{I,2} lies in L̂ ∖ L exactly for odd weights
                        (Some(a), Some(b)) => if d.weight % 2 != 0 { a == -b } else { a == b },
                        (None, None) => true,
                        _ => false,
                    };
                    if e.weight != d.weight
                        || e.c_stable != d.c_stable
                        || e.ext_split
                        || !eps_ok
                        || e.lin_order != d.lin_order.map(LinOrder::mu_partner)
                    {
                        out.push(violation("consistency", format!("{n}: μ-partner {} has incompatible data", e.name)));
                    }
                }
                None => {}
            }
            if matches!(d.lin_order, Some(LinOrder::One | LinOrder::Two)) && self.mu[c].is_none() {
                let partner = d.lin_order.unwrap().mu_partner();
                if seen_orders.contains_key(&partner)
                    || self.classes.iter().any(|e| e.weight == 1 && e.lin_order == Some(partner))
                {
                    out.push(violation("consistency", format!("{n}: the class of order {partner:?} is present but not paired")));
                }
            }
        }
        // fp
        let images: BTreeSet<usize> = self.fp.iter().map(|t| t.class).collect();
        if images.len() != k {
            out.push(violation("consistency", "fp must permute the classes"));
        }
        for (c, d) in self.classes.iter().enumerate() {
            let t = self.fp[c];
            let e = &self.classes[t.class];
            if (t.c && d.c_stable)
                || (e.weight, e.c_stable, e.eps, e.ext_split, e.lin_order)
                    != (d.weight, d.c_stable, d.eps, d.ext_split, d.lin_order)
            {
                out.push(violation("consistency", format!("{}: fp must preserve the class data", d.name)));
            }
            let l = Label { class: c as u8, c: false, fresh: false };
            if self.fp_act(self.mu_act(l)) != self.mu_act(self.fp_act(l)) {
                out.push(violation("consistency", format!("{}: fp must commute with μ", d.name)));
            }
        }
        // stabilizer level
        let all_split = self.classes.iter().all(|d| d.ext_split);
        if (self.stab == Stab::L) != all_split {
            out.push(violation("consistency", "stab is L exactly when every class is split"));
        }
        if self.stab == Stab::LHat {
            match self.j_minus1() {
                None => out.push(violation("consistency", "stab Lhat needs an orbit of weight -1")),
                Some(j) if self.h0_in_ker && !self.class_of(j).c_stable => {
                    out.push(violation("consistency", "stab Lhat with h0 in the kernel needs a c-stable J_-1"))
                }
                _ => {}
            }
        }
        if !out.is_empty() {
            return out;
        }

        // A1
        for d in &self.classes {
            if d.c_stable && d.weight >= 3 && d.weight % 2 == 1 {
                out.push(violation("A1", format!("{} is c-stable on an orbit of odd weight {}", d.name, d.weight)));
            }
        }
        let minus: Vec<&ClassData> = self.classes.iter().filter(|d| d.eps == Some(-1)).collect();
        if !self.h0_in_ker {
            // A2
            if let Some(d) = minus.iter().find(|d| d.weight != 2) {
                out.push(violation("A2", format!("{} has eps = -1 on weight {}", d.name, d.weight)));
            }
            if minus.len() > 1 {
                out.push(violation("A2", "the orbits with eps = -1 lie in more than one class"));
            }
            // A4
            if let Some(j) = self.j_minus1() {
                if self.class_of(j).c_stable {
                    out.push(violation("A4", "J_-1 is c-stable although h0 is not in the kernel"));
                }
            }
            // A5
            for d in &self.classes {
                if d.lin_order.is_some_and(LinOrder::divides_two) {
                    out.push(violation("A5", format!("{} has order dividing 2 on a weight-1 orbit", d.name)));
                }
            }
        } else {
            // A3
            for d in &minus {
                let ok = d.weight == -1 || (d.weight == 1 && d.lin_order.is_some_and(LinOrder::divides_two));
                if !ok {
                    out.push(violation("A3", format!("{} has eps = -1 on weight {}", d.name, d.weight)));
                }
            }
        }
        // A6
        if self.stab == Stab::LHat && self.index_two() {
            let mut counts: BTreeMap<i32, usize> = BTreeMap::new();
            for &c in &self.orbit_class {
                let w = self.classes[c].weight;
                if w >= 3 && w % 2 == 1 {
                    *counts.entry(w).or_default() += 1;
                }
            }
            for (w, n) in counts {
                if n % 2 == 1 {
                    out.push(violation("A6", format!("{n} orbits of odd weight {w} in Q2")));
                }
            }
        }
        out
    }

    pub fn is_admissible(&self) -> bool {
        self.validate().is_empty()
    }

    pub fn check(&self) -> Result<()> {
        let v = self.validate();
        if v.is_empty() {
            Ok(())
        } else {
            let msg: Vec<String> = v.iter().map(|v| format!("{}: {}", v.axiom, v.detail)).collect();
            Err(Error::Inadmissible(msg.join("; ")))
        }
    }

    // ---- groups from formulas ----

    fn partitions(&self) -> (Vec<Vec<usize>>, Vec<Vec<usize>>) {
        let mut y = Vec::new();
        let mut y_prime = Vec::new();
        for (c, d) in self.classes.iter().enumerate() {
            let m = self.members(c);
            if m.is_empty() {
                continue;
            }
            if d.c_stable {
                y.push(m);
            } else {
                y_prime.push(m);
            }
        }
        (y, y_prime)
    }

    fn generate(&self, gens: Vec<SignedPerm>) -> SignedPermGroup {
        FiniteGroup::generate(SignedPerm::identity(self.len()), gens)
    }

    /// `W̄(λ̂) = 𝒴_{±Y(λ̂)} × 𝒴_{Y′(λ̂)}`.
    pub fn w_hat_bar(&self) -> SignedPermGroup {
        let ws = self.weights();
        let (y, y_prime) = self.partitions();
        let mut gens = young_gens(&ws, &y, true);
        gens.extend(young_gens(&ws, &y_prime, false));
        self.generate(gens)
    }

    /// `𝒪_{c,1}` and `𝒪_{c,−1}`.
    pub fn o_c(&self, eps: i8) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.class_of(i).eps == Some(eps)).collect()
    }

    /// `W̄(λ̃)`: sign changes on `𝒪_{c,1}`, even sign changes on
    /// `𝒪_{c,−1}`, and the permutations of `𝒴_{Y ∪ Y′}`.
    pub fn w_tilde_bar(&self) -> SignedPermGroup {
        let n = self.len();
        let ws = self.weights();
        let (mut y, y_prime) = self.partitions();
        y.extend(y_prime);
        let mut gens = young_gens(&ws, &y, false);
        for i in self.o_c(1) {
            gens.push(SignedPerm::flip(n, i));
        }
        for w in self.o_c(-1).windows(2) {
            gens.push(SignedPerm::flips(n, w));
        }
        self.generate(gens)
    }

    /// The element `x ∈ W̄(λ) ∖ W̄(λ̂)` obtained by pairing the orbits of
    /// `μ`-paired classes in order, with a sign change exactly when the
    /// pairing involves `c`.
    pub fn canonical_x(&self) -> Option<SignedPerm> {
        if self.stab == Stab::L {
            return None;
        }
        let n = self.len();
        let mut pairs: Vec<(usize, bool)> = (0..n).map(|i| (i, false)).collect();
        for c in 0..self.classes.len() {
            let t = self.mu[c]?;
            let src = self.members(c);
            let dst = self.members(t.class);
            if src.len() != dst.len() {
                return None;
            }
            for (&i, &j) in src.iter().zip(&dst) {
                pairs[i] = (j, t.c);
            }
        }
        let x = SignedPerm::from_pairs(&pairs);
        debug_assert_eq!(self.act(&x, &self.state()), self.mu_state(&self.state()));
        Some(x)
    }

    /// `[W(λ) : W(λ̂)] = 2`, decided combinatorially.
    pub fn index_two(&self) -> bool {
        let Some(x) = self.canonical_x() else { return false };
        let ws = self.weights();
        in_d(&x, &ws) || (0..self.len()).any(|i| self.class_of(i).c_stable && ws.is_odd(i))
    }

    pub fn rel_weyl(&self) -> RelWeylResult {
        let ws = self.weights();
        let w_hat_bar = self.w_hat_bar();
        let w_tilde_bar = self.w_tilde_bar();
        let x = self.canonical_x();
        let w_lambda_bar = match &x {
            Some(x) => {
                let mut gens = w_hat_bar.gens().to_vec();
                gens.push(x.clone());
                self.generate(gens)
            }
            None => w_hat_bar.clone(),
        };
        let d = |g: &SignedPermGroup| g.filter(|p| in_d(p, &ws));
        RelWeylResult {
            w_hat: d(&w_hat_bar),
            w_tilde: d(&w_tilde_bar),
            w_lambda: d(&w_lambda_bar),
            k_lambda: self.k_lambda(),
            w_hat_bar,
            w_tilde_bar,
            w_lambda_bar,
            x,
        }
    }

    /// `K(λ)`: stabilizer in `𝒮_{±𝒪}` of the `fp`-orbit of the labelling.
    pub fn k_lambda(&self) -> SignedPermGroup {
        let s = self.state();
        let orbit = self.fp_orbit(&s);
        ambient(&self.weights()).filter(|w| orbit.contains(&self.act(w, &s)))
    }

    /// Brute-force stabilizers of the decorated labelling.
    pub fn oracle(&self) -> OracleGroups {
        let amb = ambient(&self.weights());
        let s = self.state();
        let mu_s = self.mu_state(&s);
        let minus = self.o_c(-1);
        let w_hat_bar = amb.filter(|w| self.act(w, &s) == s);
        let w_tilde_bar =
            amb.filter(|w| self.act(w, &s) == s && minus.iter().filter(|&&i| w.negates(i)).count() % 2 == 0);
        let w_lambda_bar = if self.stab == Stab::L {
            w_hat_bar.clone()
        } else {
            amb.filter(|w| {
                let t = self.act(w, &s);
                t == s || t == mu_s
            })
        };
        OracleGroups { w_hat_bar, w_tilde_bar, w_lambda_bar }
    }

    // ---- the Q¹/Q² split ----

    /// `Q¹(λ̂)`: the variant for `stab = Lhat` with `h0 ∈ ker` uses the
    /// orders `{1,2,4}`, the others follow the `h0` branch.
    pub fn q1(&self) -> Vec<usize> {
        (0..self.len())
            .filter(|&i| {
                let d = self.class_of(i);
                if self.stab == Stab::LHat && self.h0_in_ker {
                    d.weight == -1 || matches!(d.lin_order, Some(LinOrder::One | LinOrder::Two | LinOrder::Four))
                } else if self.h0_in_ker {
                    d.weight == -1 || d.lin_order.is_some_and(LinOrder::divides_two)
                } else {
                    d.eps == Some(-1)
                }
            })
            .collect()
    }

    /// Normal subgroup whose characters are to be covered: `W(λ̃)`, or
    /// `W(λ̂)` when `L̃_λ = L̂`, or `W(λ)` itself when `L̃_λ = L`.
    pub fn cover_base(&self, rw: &RelWeylResult) -> SignedPermGroup {
        match self.stab {
            Stab::LTilde => rw.w_tilde.clone(),
            Stab::LHat => rw.w_hat.clone(),
            Stab::L => rw.w_lambda.clone(),
        }
    }

    pub fn q_split(&self, rw: &RelWeylResult) -> QSplit {
        let n = self.len();
        let q1 = self.q1();
        let q2: Vec<usize> = (0..n).filter(|i| !q1.contains(i)).collect();
        let base = self.cover_base(rw);
        let supported = |w: &SignedPerm, q: &[usize]| (0..n).all(|i| q.contains(&i) || w.apply(i) == (i, false));
        let w1 = base.filter(|w| supported(w, &q1));
        let w2 = base.filter(|w| supported(w, &q2));
        let k = &rw.k_lambda;
        let stabilizes = k.gens().iter().all(|w| q1.iter().all(|&i| q1.contains(&w.target(i))));
        let project = |q: &[usize]| {
            let gens = k
                .gens()
                .iter()
                .map(|w| SignedPerm::from_pairs(&(0..n).map(|i| if q.contains(&i) { w.apply(i) } else { (i, false) }).collect::<Vec<_>>()))
                .collect();
            self.generate(gens)
        };
        let (k1, k2) = if stabilizes { (project(&q1), project(&q2)) } else { (k.clone(), k.clone()) };
        QSplit { direct: base.is_internal_direct_product(&w1, &w2), k_stabilizes_q1: stabilizes, q1, q2, w1, w2, k1, k2 }
    }

    // ---- serialization ----

    pub fn to_json(&self) -> Value {
        let name = |t: Twist| {
            let n = &self.classes[t.class].name;
            if t.c {
                format!("{n}^c")
            } else {
                n.clone()
            }
        };
        let orbits: Vec<Value> = self
            .orbit_class
            .iter()
            .map(|&c| {
                let d = &self.classes[c];
                json!({
                    "weight": d.weight,
                    "class": d.name,
                    "c_stable": d.c_stable,
                    "eps": d.eps,
                    "ext_split": d.ext_split,
                    "lin_order": d.lin_order.map(LinOrder::to_json),
                })
            })
            .collect();
        let mu: serde_json::Map<String, Value> = (0..self.classes.len())
            .filter_map(|c| self.mu[c].map(|t| (self.classes[c].name.clone(), json!(name(t)))))
            .collect();
        let fp: serde_json::Map<String, Value> =
            (0..self.classes.len()).map(|c| (self.classes[c].name.clone(), json!(name(self.fp[c])))).collect();
        json!({
            "orbits": orbits,
            "h0_in_ker": self.h0_in_ker,
            "stab": self.stab.name(),
            "mu_pair": mu,
            "fp": fp,
        })
    }

    /// Parses the JSON schema. A class missing from `mu_pair` is its own
    /// partner when split and has no partner otherwise; a class missing
    /// from `fp` is fixed.
    pub fn from_json(v: &Value) -> Result<Self> {
        let bad = |m: &str| Error::InvalidArgument(format!("shadow JSON: {m}"));
        let orbits = v.get("orbits").and_then(Value::as_array).ok_or_else(|| bad("missing orbits"))?;
        let mut classes: Vec<ClassData> = Vec::new();
        let mut index: HashMap<String, usize> = HashMap::new();
        let mut orbit_class = Vec::new();
        for o in orbits {
            let name = o.get("class").and_then(Value::as_str).ok_or_else(|| bad("orbit without class"))?.to_string();
            if name.ends_with("^c") {
                return Err(bad("class names may not end in ^c"));
            }
            let weight = o.get("weight").and_then(Value::as_i64).ok_or_else(|| bad("orbit without weight"))? as i32;
            let c_stable = o.get("c_stable").and_then(Value::as_bool).unwrap_or(false);
            let eps = match o.get("eps") {
                None | Some(Value::Null) => None,
                Some(e) => Some(e.as_i64().ok_or_else(|| bad("eps must be ±1 or null"))? as i8),
            };
            let ext_split = o.get("ext_split").and_then(Value::as_bool).unwrap_or(false);
            let lin_order = match o.get("lin_order") {
                None | Some(Value::Null) => None,
                Some(x) => Some(LinOrder::from_json(x)?),
            };
            let data = ClassData { name: name.clone(), weight, c_stable, eps, ext_split, lin_order };
            let c = match index.get(&name) {
                Some(&c) => {
                    if classes[c] != data {
                        return Err(bad(&format!("orbits of class {name} disagree")));
                    }
                    c
                }
                None => {
                    index.insert(name, classes.len());
                    classes.push(data);
                    classes.len() - 1
                }
            };
            orbit_class.push(c);
        }
        let twist = |s: &str| -> Result<Twist> {
            let (base, c) = match s.strip_suffix("^c") {
                Some(b) => (b, true),
                None => (s, false),
            };
            let class = *index.get(base).ok_or_else(|| bad(&format!("unknown class {base}")))?;
            Ok(Twist { class, c })
        };
        let map_of = |key: &str| -> Result<HashMap<usize, Twist>> {
            let mut m = HashMap::new();
            if let Some(obj) = v.get(key).and_then(Value::as_object) {
                for (k, val) in obj {
                    let src = twist(k)?;
                    let dst = twist(val.as_str().ok_or_else(|| bad("map values must be strings"))?)?;
                    m.insert(src.class, dst);
                }
            }
            Ok(m)
        };
        let mu_map = map_of("mu_pair")?;
        let fp_map = map_of("fp")?;
        let mu = (0..classes.len())
            .map(|c| mu_map.get(&c).copied().or(classes[c].ext_split.then_some(Twist { class: c, c: false })))
            .collect();
        let fp = (0..classes.len()).map(|c| fp_map.get(&c).copied().unwrap_or(Twist { class: c, c: false })).collect();
        let h0_in_ker = v.get("h0_in_ker").and_then(Value::as_bool).ok_or_else(|| bad("missing h0_in_ker"))?;
        let stab = Stab::parse(v.get("stab").and_then(Value::as_str).ok_or_else(|| bad("missing stab"))?)?;
        CuspidalShadow::new(classes, orbit_class, h0_in_ker, stab, mu, fp)
    }

    /// Key invariant under renaming classes; orbits are re-sorted.
    pub fn canonical_key(&self) -> Vec<u8> {
        let k = self.classes.len();
        let mut best: Option<Vec<u8>> = None;
        for perm in permutations(k) {
            // class c becomes perm[c]; only weight-order preserving relabelings
            if (0..k).any(|a| (0..k).any(|b| self.classes[a].weight < self.classes[b].weight && perm[a] > perm[b])) {
                continue;
            }
            let key = self.key_under(&perm);
            if best.as_ref().is_none_or(|b| key < *b) {
                best = Some(key);
            }
        }
        best.unwrap_or_default()
    }

    fn key_under(&self, perm: &[usize]) -> Vec<u8> {
        let k = perm.len();
        let mut inv = vec![0; k];
        for (a, &b) in perm.iter().enumerate() {
            inv[b] = a;
        }
        let mut orbits: Vec<usize> = self.orbit_class.iter().map(|&c| perm[c]).collect();
        orbits.sort();
        let mut key = vec![self.h0_in_ker as u8, self.stab as u8, k as u8];
        key.extend(orbits.iter().map(|&c| c as u8));
        for &c in &inv {
            let d = &self.classes[c];
            key.extend([
                (d.weight + 1) as u8,
                d.c_stable as u8,
                d.eps.map_or(0, |e| (e + 2) as u8),
                d.ext_split as u8,
                d.lin_order.map_or(0, |o| o as u8 + 1),
            ]);
            key.extend(match self.mu[c] {
                Some(t) => [perm[t.class] as u8, t.c as u8 + 1],
                None => [0, 0],
            });
            key.extend([perm[self.fp[c].class] as u8, self.fp[c].c as u8]);
        }
        key
    }
}

fn permutations(k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(k - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, k - 1);
            out.push(q);
        }
    }
    out
}

/// `𝒮_{±𝒪}` for a weight vector, cached.
pub fn ambient(ws: &WeightedSet) -> Arc<SignedPermGroup> {
    static CACHE: OnceLock<Mutex<HashMap<Vec<i32>, Arc<SignedPermGroup>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(g) = cache.lock().unwrap().get(&ws.weights) {
        return g.clone();
    }
    let g = Arc::new(full_group(ws, GROUP_CAP).expect("ambient group within cap"));
    cache.lock().unwrap().insert(ws.weights.clone(), g.clone());
    g
}

/// Groups computed from the closed formulas; `K(λ)` is always a
/// stabilizer computation.
#[derive(Debug, Clone)]
pub struct RelWeylResult {
    pub w_hat_bar: SignedPermGroup,
    pub w_hat: SignedPermGroup,
    pub w_tilde_bar: SignedPermGroup,
    pub w_tilde: SignedPermGroup,
    pub w_lambda_bar: SignedPermGroup,
    pub w_lambda: SignedPermGroup,
    pub k_lambda: SignedPermGroup,
    pub x: Option<SignedPerm>,
}

#[derive(Debug, Clone)]
pub struct OracleGroups {
    pub w_hat_bar: SignedPermGroup,
    pub w_tilde_bar: SignedPermGroup,
    pub w_lambda_bar: SignedPermGroup,
}

impl OracleGroups {
    /// Formula groups agree with the stabilizers, elementwise.
    pub fn matches(&self, rw: &RelWeylResult) -> bool {
        self.w_hat_bar.same_elements(&rw.w_hat_bar)
            && self.w_tilde_bar.same_elements(&rw.w_tilde_bar)
            && self.w_lambda_bar.same_elements(&rw.w_lambda_bar)
    }
}

#[derive(Debug, Clone)]
pub struct QSplit {
    pub q1: Vec<usize>,
    pub q2: Vec<usize>,
    pub w1: SignedPermGroup,
    pub w2: SignedPermGroup,
    pub k1: SignedPermGroup,
    pub k2: SignedPermGroup,
    pub direct: bool,
    pub k_stabilizes_q1: bool,
}

// ---- Clifford checks on the relative Weyl groups ----

/// Outcome of the stable-cover verification for one shadow.
#[derive(Debug, Clone, Default, Serialize)]
pub struct CoverReport {
    pub order_base: usize,
    pub order_w_lambda: usize,
    pub order_k: usize,
    pub eta0_count: usize,
    /// `η₀` with some `K(λ)_{η₀}`-stable constituent above it
    pub covered: usize,
    /// every constituent above every `η₀` is stable (only for `Lhat`)
    pub all_stable: Option<bool>,
    pub split_direct: Option<bool>,
    pub factor_max_ext: Option<bool>,
    pub hat_max_ext: Option<bool>,
    pub failures: Vec<String>,
}

impl CoverReport {
    pub fn ok(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Maximal extendibility for `N ◁ K`: every `χ ∈ Irr(N)` extends to
/// `K_χ`.
pub fn max_extendible(n: &SignedPermGroup, k: &SignedPermGroup) -> Result<bool> {
    if !k.is_normal(n) {
        return Err(Error::Precondition("not a normal subgroup".into()));
    }
    let p = table_prime(k.order(), k.exponent());
    let tn = CharTable::with_prime(n, p)?;
    let mut cache: Vec<(SignedPermGroup, CharTable<SignedPerm>)> = Vec::new();
    for i in 0..tn.irr.len() {
        let st = k.stabilizer(&i, |x, &j| tn.find(&tn.conjugate(&tn.irr[j], x)).expect("permutes Irr"));
        if st.order() == n.order() {
            continue;
        }
        let pos = match cache.iter().position(|(g, _)| g.same_elements(&st)) {
            Some(pos) => pos,
            None => {
                let t = CharTable::with_prime(&st, p)?;
                cache.push((st, t));
                cache.len() - 1
            }
        };
        if !extends_to(&tn, &tn.irr[i], &cache[pos].1)? {
            return Ok(false);
        }
    }
    Ok(true)
}

impl CuspidalShadow {
    /// For every `η₀ ∈ Irr(base)` look for a `K(λ)_{η₀}`-stable
    /// `η ∈ Irr(W(λ) | η₀)`; for `Lhat` require all of them to be stable;
    /// check maximal extendibility on the two factors of the split.
    pub fn verify_stable_cover(&self) -> Result<CoverReport> {
        self.check()?;
        let rw = self.rel_weyl();
        let base = self.cover_base(&rw);
        let g = &rw.w_lambda;
        let k = &rw.k_lambda;
        let mut rep = CoverReport {
            order_base: base.order(),
            order_w_lambda: g.order(),
            order_k: k.order(),
            ..Default::default()
        };
        for (what, ok) in [
            ("W(λ̃) ◁ W(λ)", g.is_normal(&base)),
            ("W(λ) ◁ K(λ)", k.is_normal(g)),
            ("W(λ̃) ◁ K(λ)", k.is_normal(&base)),
            ("W(λ) ≤ K(λ)", g.is_subgroup_of(k)),
        ] {
            if !ok {
                rep.failures.push(format!("{what} fails"));
            }
        }
        if !rep.failures.is_empty() {
            return Ok(rep);
        }
        let p = table_prime(k.order(), k.exponent());
        let tb = CharTable::with_prime(&base, p)?;
        let tg = CharTable::with_prime(g, p)?;
        let mult: Vec<Vec<u64>> = tg.irr.iter().map(|eta| tg.restrict(eta, &tb).map(|r| tb.decompose(&r))).collect::<Result<_>>()?;
        rep.eta0_count = tb.irr.len();
        let mut all_stable = true;
        for i in 0..tb.irr.len() {
            let st = k.stabilizer(&i, |x, &j| tb.find(&tb.conjugate(&tb.irr[j], x)).expect("permutes Irr"));
            let above: Vec<usize> = (0..tg.irr.len()).filter(|&e| mult[e][i] > 0).collect();
            let stable: Vec<bool> =
                above.iter().map(|&e| st.gens().iter().all(|x| tg.conjugate(&tg.irr[e], x) == tg.irr[e])).collect();
            if stable.iter().any(|&s| s) {
                rep.covered += 1;
            } else {
                rep.failures.push(format!("no K(λ)_η₀-stable constituent above η₀ #{i}"));
            }
            all_stable &= stable.iter().all(|&s| s);
        }
        if self.stab == Stab::LHat {
            rep.all_stable = Some(all_stable);
            if !all_stable {
                rep.failures.push("some constituent above some η₀ is not K(λ)_η₀-stable".into());
            }
        }
        if self.stab != Stab::L {
            let qs = self.q_split(&rw);
            rep.split_direct = Some(qs.direct && qs.k_stabilizes_q1);
            if !qs.direct {
                rep.failures.push("the base is not W¹ × W²".into());
            }
            if !qs.k_stabilizes_q1 {
                rep.failures.push("K(λ) does not stabilize Q¹".into());
            }
            if qs.direct && qs.k_stabilizes_q1 {
                let second = if self.stab == Stab::LHat {
                    // normalizer of W² in 𝒮_{±Q²}
                    let amb = ambient(&self.weights());
                    let n = self.len();
                    amb.filter(|w| (0..n).all(|i| qs.q2.contains(&i) || w.apply(i) == (i, false)))
                        .normalizer(&qs.w2)
                } else {
                    qs.k2.clone()
                };
                let ok = max_extendible(&qs.w1, &qs.k1)? && max_extendible(&qs.w2, &second)?;
                rep.factor_max_ext = Some(ok);
                if !ok {
                    rep.failures.push("maximal extendibility fails on a factor".into());
                }
            }
        }
        if !self.h0_in_ker && self.stab != Stab::L && rw.w_hat.order() != g.order() {
            let ok = max_extendible(&rw.w_hat, k)?;
            rep.hat_max_ext = Some(ok);
            if !ok {
                rep.failures.push("maximal extendibility fails for W(λ̂) ◁ K(λ)".into());
            }
        }
        Ok(rep)
    }
}

// ---- named configurations ----

fn class(name: &str, weight: i32, c_stable: bool, eps: Option<i8>, ext_split: bool, lin_order: Option<LinOrder>) -> ClassData {
    ClassData { name: name.into(), weight, c_stable, eps, ext_split, lin_order }
}

fn fixed(k: usize) -> Vec<Twist> {
    (0..k).map(|c| Twist { class: c, c: false }).collect()
}

/// Two weight-2 orbits with `c`-stable, `μ`-paired classes that are not
/// `V_S`-conjugate, both with `ε = −1`, and `h0 ∉ ker`. The uniqueness
/// clause for weight 2 rules this out (it violates A2), but its groups
/// show the obstruction that clause is needed for.
pub fn two_class_weight_two() -> CuspidalShadow {
    let classes = vec![
        class("t1", 2, true, Some(-1), false, None),
        class("t2", 2, true, Some(-1), false, None),
    ];
    let mu = vec![Some(Twist { class: 1, c: false }), Some(Twist { class: 0, c: false })];
    CuspidalShadow::new(classes, vec![0, 1], false, Stab::LTilde, mu, fixed(2)).expect("well formed")
}

/// Clifford data for `N ◁ G`: for every `η₀ ∈ Irr(N)`, whether it is
/// `G`-stable, whether it extends to `G`, and its largest multiplicity in
/// a restriction from `G`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CliffordRow {
    pub degree: u64,
    pub stable: bool,
    pub extends: bool,
    pub max_multiplicity: u64,
}

pub fn clifford_rows(n: &SignedPermGroup, g: &SignedPermGroup) -> Result<Vec<CliffordRow>> {
    let p = table_prime(g.order(), g.exponent());
    let tn = CharTable::with_prime(n, p)?;
    let tg = CharTable::with_prime(g, p)?;
    let mult: Vec<Vec<u64>> = tg.irr.iter().map(|eta| tg.restrict(eta, &tn).map(|r| tn.decompose(&r))).collect::<Result<_>>()?;
    (0..tn.irr.len())
        .map(|i| {
            let chi = &tn.irr[i];
            let stable = g.gens().iter().all(|x| tn.conjugate(chi, x) == *chi);
            let extends = stable && extends_to(&tn, chi, &tg)?;
            Ok(CliffordRow {
                degree: tn.degrees[i],
                stable,
                extends,
                max_multiplicity: mult.iter().map(|m| m[i]).max().unwrap_or(0),
            })
        })
        .collect()
}

/// Rows of the table of isomorphism types of `W¹(λ̃)` and `K¹(λ)`,
/// indexed by the position of `J_{−1}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum TableRow {
    /// `J_{−1} ∉ 𝒪_c(λ̂)`
    NotStable,
    /// `J_{−1} ∈ 𝒪_{c,1}`
    Plus,
    /// `J_{−1} ∈ 𝒪_{c,−1}`
    Minus,
}

impl TableRow {
    pub const ALL: [TableRow; 3] = [TableRow::NotStable, TableRow::Plus, TableRow::Minus];
}

/// Shadow realising a row with `l₁` orbits of order 1 and `l₂` of order 2.
pub fn table_shadow(l1: usize, l2: usize, row: TableRow) -> CuspidalShadow {
    let j = match row {
        TableRow::NotStable => class("j", -1, false, None, false, None),
        TableRow::Plus => class("j", -1, true, Some(1), false, None),
        TableRow::Minus => class("j", -1, true, Some(-1), false, None),
    };
    let mut classes = vec![j];
    let mut mu = vec![(row == TableRow::NotStable).then_some(Twist { class: 0, c: true })];
    let mut fp = vec![Twist { class: 0, c: row == TableRow::NotStable }];
    let mut orbit_class = vec![0];
    let mut add = |d: ClassData, count: usize, classes: &mut Vec<ClassData>| {
        if count > 0 {
            classes.push(d);
            orbit_class.extend(std::iter::repeat_n(classes.len() - 1, count));
        }
    };
    add(class("a", 1, true, Some(1), false, Some(LinOrder::One)), l1, &mut classes);
    add(class("b", 1, true, Some(-1), false, Some(LinOrder::Two)), l2, &mut classes);
    let a = (l1 > 0).then_some(1);
    let b = (l2 > 0).then_some(if l1 > 0 { 2 } else { 1 });
    for c in 1..classes.len() {
        let partner = if Some(c) == a { b } else { a };
        mu.push(partner.map(|p| Twist { class: p, c: false }));
        fp.push(Twist { class: c, c: false });
    }
    CuspidalShadow::new(classes, orbit_class, true, Stab::LTilde, mu, fp).expect("well formed")
}

fn embed(p: &SignedPerm, offset: usize, n: usize) -> SignedPerm {
    let mut pairs: Vec<(usize, bool)> = (0..n).map(|i| (i, false)).collect();
    for i in 0..p.degree() {
        let (j, neg) = p.apply(i);
        pairs[offset + i] = (offset + j, neg);
    }
    SignedPerm::from_pairs(&pairs)
}

fn coxeter_gens(l: usize, type_d: bool) -> Vec<SignedPerm> {
    if l == 0 {
        return vec![];
    }
    let b = weyl_b(l, GROUP_CAP).expect("small");
    let g = if type_d { b.filter(|p| p.num_negated() % 2 == 0) } else { b };
    g.gens().to_vec()
}

/// Product of the given factors on disjoint points, plus extra generators
/// that may mix the blocks.
fn product(blocks: &[(usize, Vec<SignedPerm>)], extra: Vec<SignedPerm>) -> SignedPermGroup {
    let n: usize = blocks.iter().map(|b| b.0).sum();
    let mut gens = extra;
    let mut off = 0;
    for (size, g) in blocks {
        gens.extend(g.iter().map(|p| embed(p, off, n)));
        off += size;
    }
    FiniteGroup::generate(SignedPerm::identity(n), gens)
}

pub fn order_b(n: usize) -> usize {
    (1usize << n) * (1..=n).product::<usize>()
}

pub fn order_d(n: usize) -> usize {
    if n == 0 {
        1
    } else {
        order_b(n) / 2
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct TableCase {
    pub l1: usize,
    pub l2: usize,
    pub row: TableRow,
    pub expected_w1: Fingerprint,
    pub computed_w1: Fingerprint,
    pub expected_k1: Fingerprint,
    pub computed_k1: Fingerprint,
    pub formula_orders: (usize, usize),
}

impl TableCase {
    pub fn matches(&self) -> bool {
        self.expected_w1 == self.computed_w1
            && self.expected_k1 == self.computed_k1
            && self.formula_orders == (self.computed_w1.order, self.computed_k1.order)
    }
}

/// Computes `W¹(λ̃)` and `K¹(λ)` for a row and compares them with the
/// stated isomorphism types.
pub fn table_case(l1: usize, l2: usize, row: TableRow) -> Result<TableCase> {
    let sh = table_shadow(l1, l2, row);
    sh.check()?;
    let rw = sh.rel_weyl();
    let qs = sh.q_split(&rw);
    let (b1, d1, b2, d2) = (coxeter_gens(l1, false), coxeter_gens(l1, true), coxeter_gens(l2, false), coxeter_gens(l2, true));
    let (w1, w1_order) = match row {
        TableRow::NotStable => (product(&[(l1, d1), (l2, d2)], vec![]), order_d(l1) * order_d(l2)),
        TableRow::Plus => (product(&[(l1, b1.clone()), (l2, d2)], vec![]), order_b(l1) * order_d(l2)),
        TableRow::Minus => (product(&[(l1, d1), (l2, b2.clone())], vec![]), order_d(l1) * order_b(l2)),
    };
    let c2 = vec![SignedPerm::flip(1, 0)];
    let (k1, k1_order) = if row == TableRow::NotStable && l1 == l2 {
        let n = 1 + 2 * l1;
        let swap = SignedPerm::from_pairs(
            &(0..n).map(|i| if i == 0 { (0, false) } else if i <= l1 { (i + l1, false) } else { (i - l1, false) }).collect::<Vec<_>>(),
        );
        (product(&[(1, c2), (l1, b1), (l2, b2)], vec![swap]), 2 * order_b(l1) * order_b(l1) * 2)
    } else {
        (product(&[(1, c2), (l1, b1), (l2, b2)], vec![]), 2 * order_b(l1) * order_b(l2))
    };
    Ok(TableCase {
        l1,
        l2,
        row,
        expected_w1: w1.fingerprint(),
        computed_w1: qs.w1.fingerprint(),
        expected_k1: k1.fingerprint(),
        computed_k1: qs.k1.fingerprint(),
        formula_orders: (w1_order, k1_order),
    })
}

// ---- enumeration ----

/// Limits for [`enumerate_shadows`].
#[derive(Debug, Clone, Copy)]
pub struct EnumCaps {
    pub max_classes: usize,
    /// keep only the identity for `fp`
    pub fp_identity_only: bool,
}

impl Default for EnumCaps {
    fn default() -> Self {
        EnumCaps { max_classes: 4, fp_identity_only: false }
    }
}

fn int_partitions(n: usize, max: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for first in (1..=n.min(max)).rev() {
        for mut rest in int_partitions(n - first, first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

fn flag_options(weight: i32) -> Vec<ClassData> {
    let mut out = Vec::new();
    let mk = |c_stable, eps, ext_split, lin| class("", weight, c_stable, eps, ext_split, lin);
    if weight == 1 {
        out.push(mk(true, Some(1), false, Some(LinOrder::One)));
        out.push(mk(true, Some(-1), false, Some(LinOrder::Two)));
        out.push(mk(false, None, false, Some(LinOrder::Four)));
        out.push(mk(false, None, false, Some(LinOrder::Other)));
    } else if weight >= 3 && weight % 2 == 1 {
        out.push(mk(false, None, false, None));
    } else {
        for split in [false, true] {
            out.push(mk(false, None, split, None));
            out.push(mk(true, Some(1), split, None));
            out.push(mk(true, Some(-1), split, None));
        }
    }
    out
}

fn mu_choices(classes: &[ClassData]) -> Vec<Vec<Option<Twist>>> {
    fn rec(classes: &[ClassData], cur: &mut Vec<Option<Option<Twist>>>, out: &mut Vec<Vec<Option<Twist>>>) {
        let Some(c) = cur.iter().position(|x| x.is_none()) else {
            out.push(cur.iter().map(|x| x.unwrap()).collect());
            return;
        };
        let d = &classes[c];
        let mut opts: Vec<(usize, Option<Twist>)> = Vec::new();
        if d.ext_split {
            opts.push((c, Some(Twist { class: c, c: false })));
        } else {
            opts.push((c, None));
            if !d.c_stable {
                opts.push((c, Some(Twist { class: c, c: true })));
            }
            for e in c + 1..classes.len() {
                if cur[e].is_none() {
                    opts.push((e, Some(Twist { class: e, c: false })));
                    if !d.c_stable {
                        opts.push((e, Some(Twist { class: e, c: true })));
                    }
                }
            }
        }
        for (e, t) in opts {
            cur[c] = Some(t);
            if e != c {
                cur[e] = Some(Some(Twist { class: c, c: t.unwrap().c }));
            }
            rec(classes, cur, out);
            cur[c] = None;
            cur[e] = None;
        }
    }
    let mut out = Vec::new();
    rec(classes, &mut vec![None; classes.len()], &mut out);
    out
}

fn fp_choices(classes: &[ClassData], identity_only: bool) -> Vec<Vec<Twist>> {
    let k = classes.len();
    if identity_only {
        return vec![fixed(k)];
    }
    let mut out = Vec::new();
    for perm in permutations(k) {
        if (0..k).any(|c| {
            let (a, b) = (&classes[c], &classes[perm[c]]);
            (a.weight, a.c_stable, a.eps, a.ext_split, a.lin_order) != (b.weight, b.c_stable, b.eps, b.ext_split, b.lin_order)
        }) {
            continue;
        }
        let free: Vec<usize> = (0..k).filter(|&c| !classes[c].c_stable).collect();
        for bits in 0..1u32 << free.len() {
            let mut t: Vec<Twist> = perm.iter().map(|&p| Twist { class: p, c: false }).collect();
            for (b, &c) in free.iter().enumerate() {
                t[c].c = bits >> b & 1 == 1;
            }
            out.push(t);
        }
    }
    out
}

/// All admissible shadows on orbits of the given weights, one per
/// renaming class, in a deterministic order.
pub fn enumerate_shadows(weights: &[i32], caps: EnumCaps) -> Vec<CuspidalShadow> {
    let mut ws = weights.to_vec();
    ws.sort();
    let mut groups: BTreeMap<i32, usize> = BTreeMap::new();
    for &w in &ws {
        *groups.entry(w).or_default() += 1;
    }
    // class sizes per weight
    let mut layouts: Vec<Vec<(i32, usize)>> = vec![vec![]];
    for (&w, &n) in &groups {
        let mut next = Vec::new();
        for l in &layouts {
            for p in int_partitions(n, n) {
                let mut l2 = l.clone();
                l2.extend(p.into_iter().map(|s| (w, s)));
                next.push(l2);
            }
        }
        layouts = next;
    }
    let mut seen: HashSet<Vec<u8>> = HashSet::new();
    let mut out: Vec<(Vec<u8>, CuspidalShadow)> = Vec::new();
    for layout in layouts {
        let k = layout.len();
        if k > caps.max_classes {
            continue;
        }
        let orbit_class: Vec<usize> = layout.iter().enumerate().flat_map(|(c, &(_, s))| std::iter::repeat_n(c, s)).collect();
        let opts: Vec<Vec<ClassData>> = layout.iter().map(|&(w, _)| flag_options(w)).collect();
        let mut idx = vec![0usize; k];
        loop {
            let classes: Vec<ClassData> = (0..k)
                .map(|c| ClassData { name: format!("t{}", c + 1), ..opts[c][idx[c]].clone() })
                .collect();
            for mu in mu_choices(&classes) {
                for fp in fp_choices(&classes, caps.fp_identity_only) {
                    for h0 in [true, false] {
                        for stab in Stab::ALL {
                            let Ok(sh) = CuspidalShadow::new(classes.clone(), orbit_class.clone(), h0, stab, mu.clone(), fp.clone())
                            else {
                                continue;
                            };
                            if !sh.is_admissible() {
                                continue;
                            }
                            let key = sh.canonical_key();
                            if seen.insert(key.clone()) {
                                out.push((key, sh));
                            }
                        }
                    }
                }
            }
            // next flag combination
            let mut c = 0;
            while c < k {
                idx[c] += 1;
                if idx[c] < opts[c].len() {
                    break;
                }
                idx[c] = 0;
                c += 1;
            }
            if c == k {
                break;
            }
        }
    }
    out.sort_by(|a, b| a.0.cmp(&b.0));
    out.into_iter().map(|(_, s)| s).collect()
}

/// Orbit weights of a decomposition, in report order.
pub fn decomposition_weights(dec: &Decomposition) -> Vec<i32> {
    sorted_orbits(dec).iter().map(|o| o.weight).collect()
}

/// Weight vectors over `{−1, 1, 2, 3, 4}` with at most one `−1` and at
/// most `max_orbits` entries; these cover every behaviour the axioms
/// distinguish.
pub fn representative_weights(max_orbits: usize) -> Vec<Vec<i32>> {
    fn rec(start: usize, left: usize, cur: &mut Vec<i32>, out: &mut Vec<Vec<i32>>) {
        const W: [i32; 4] = [1, 2, 3, 4];
        if !cur.is_empty() {
            out.push(cur.clone());
        }
        if left == 0 {
            return;
        }
        for i in start..W.len() {
            cur.push(W[i]);
            rec(i, left - 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, max_orbits, &mut vec![], &mut out);
    let mut with_j: Vec<Vec<i32>> = vec![vec![-1]];
    with_j.extend(out.iter().filter(|w| w.len() < max_orbits).map(|w| {
        let mut v = vec![-1];
        v.extend(w);
        v
    }));
    out.extend(with_j);
    out
}

/// A random admissible shadow with `n` orbits.
pub fn random_shadow<R: Rng>(rng: &mut R, n: usize) -> CuspidalShadow {
    loop {
        let mut ws: Vec<i32> = (0..n).map(|_| *[1, 2, 2, 3, 4, 1].choose(rng).unwrap()).collect();
        if rng.gen_bool(0.3) {
            ws[0] = -1;
        }
        ws.sort();
        // classes: split each weight block at random cut points
        let mut orbit_class = Vec::new();
        let mut weights_of = Vec::new();
        for (i, &w) in ws.iter().enumerate() {
            let new = i == 0 || ws[i - 1] != w || rng.gen_bool(0.4);
            if new {
                weights_of.push(w);
            }
            orbit_class.push(weights_of.len() - 1);
        }
        let classes: Vec<ClassData> = weights_of
            .iter()
            .enumerate()
            .map(|(c, &w)| ClassData { name: format!("t{}", c + 1), ..flag_options(w).choose(rng).unwrap().clone() })
            .collect();
        let mus = mu_choices(&classes);
        let mu = mus.choose(rng).unwrap().clone();
        let fp = if rng.gen_bool(0.5) || classes.len() > 5 {
            fixed(classes.len())
        } else {
            fp_choices(&classes, false).choose(rng).cloned().unwrap_or_else(|| fixed(classes.len()))
        };
        let h0 = rng.gen_bool(0.5);
        let stab = *Stab::ALL.choose(rng).unwrap();
        if let Ok(sh) = CuspidalShadow::new(classes, orbit_class, h0, stab, mu, fp) {
            if sh.is_admissible() {
                return sh;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn shadow(v: Value) -> CuspidalShadow {
        CuspidalShadow::from_json(&v).unwrap()
    }

    fn orbit(weight: i32, class: &str, c_stable: bool, eps: Option<i8>, split: bool) -> Value {
        json!({"weight": weight, "class": class, "c_stable": c_stable, "eps": eps, "ext_split": split})
    }

    #[test]
    fn validate_examples() {
        let s = shadow(json!({"orbits": [orbit(3, "t1", true, Some(1), false)], "h0_in_ker": true, "stab": "Ltilde"}));
        assert!(s.validate().iter().any(|v| v.axiom == "A1"));
        let s = shadow(json!({"orbits": [orbit(4, "t1", true, Some(-1), false)], "h0_in_ker": false, "stab": "Ltilde"}));
        assert!(s.validate().iter().any(|v| v.axiom == "A2"));
        let s = shadow(json!({"orbits": [orbit(2, "t1", true, Some(1), true), orbit(4, "t2", true, Some(1), true)], "h0_in_ker": true, "stab": "L"}));
        assert_eq!(s.validate(), vec![]);
        // A4 and A5
        let s = shadow(json!({"orbits": [orbit(-1, "j", true, Some(1), false)], "h0_in_ker": false, "stab": "Ltilde"}));
        assert!(s.validate().iter().any(|v| v.axiom == "A4"));
        let s = shadow(json!({"orbits": [{"weight": 1, "class": "a", "c_stable": true, "eps": 1, "lin_order": 1}],
            "h0_in_ker": false, "stab": "Ltilde"}));
        assert!(s.validate().iter().any(|v| v.axiom == "A5"));
        // A3: eps = -1 on an even weight with h0 in the kernel
        let s = shadow(json!({"orbits": [orbit(2, "t", true, Some(-1), false)], "h0_in_ker": true, "stab": "Ltilde"}));
        assert!(s.validate().iter().any(|v| v.axiom == "A3"));
    }

    #[test]
    fn w_hat_examples() {
        let s = shadow(json!({"orbits": [orbit(2, "t", true, Some(1), false), orbit(2, "t", true, Some(1), false)],
            "h0_in_ker": true, "stab": "Ltilde"}));
        assert_eq!(s.w_hat_bar().order(), 8);
        let s = shadow(json!({"orbits": [orbit(2, "a", false, None, false), orbit(2, "b", false, None, false), orbit(3, "c", false, None, false)],
            "h0_in_ker": true, "stab": "Ltilde"}));
        assert_eq!(s.w_hat_bar().order(), 1);
        let s = shadow(json!({"orbits": [orbit(2, "t", false, None, false), orbit(2, "t", false, None, false), orbit(2, "t", false, None, false)],
            "h0_in_ker": true, "stab": "Ltilde"}));
        assert_eq!(s.w_hat_bar().order(), 6);
        assert_eq!(s.oracle().w_hat_bar.order(), 6);
    }

    #[test]
    fn w_tilde_examples() {
        let s = shadow(json!({"orbits": [orbit(2, "t", true, Some(-1), false), orbit(2, "t", true, Some(-1), false)],
            "h0_in_ker": false, "stab": "Ltilde"}));
        assert!(s.is_admissible());
        assert_eq!(s.w_tilde_bar().order(), 4);
        let s = shadow(json!({"orbits": [orbit(2, "t", true, Some(1), false), orbit(4, "u", true, Some(1), false)],
            "h0_in_ker": true, "stab": "Ltilde"}));
        assert!(s.w_tilde_bar().same_elements(&s.w_hat_bar()));
    }

    fn weight_one(orders: &[(&str, u64, usize)], mu: Value) -> CuspidalShadow {
        let mut orbits = Vec::new();
        for &(name, o, n) in orders {
            let (cs, eps) = match o {
                1 => (true, json!(1)),
                2 => (true, json!(-1)),
                _ => (false, Value::Null),
            };
            for _ in 0..n {
                orbits.push(json!({"weight": 1, "class": name, "c_stable": cs, "eps": eps, "lin_order": o}));
            }
        }
        shadow(json!({"orbits": orbits, "h0_in_ker": true, "stab": "Ltilde", "mu_pair": mu}))
    }

    #[test]
    fn w_lambda_examples() {
        // μ swaps the classes of order 1 and 2
        let s = weight_one(&[("a", 1, 2), ("b", 2, 2)], json!({"a": "b", "b": "a"}));
        assert!(s.is_admissible(), "{:?}", s.validate());
        let rw = s.rel_weyl();
        assert_eq!(rw.w_lambda_bar.order(), 2 * rw.w_hat_bar.order());
        assert_eq!(rw.w_lambda.order(), 2 * rw.w_hat.order());
        assert!(s.oracle().matches(&rw));
        // unequal multiplicities: no x
        let s = weight_one(&[("a", 1, 2), ("b", 2, 1)], json!({"a": "b", "b": "a"}));
        assert!(s.is_admissible());
        assert!(s.canonical_x().is_none());
        let rw = s.rel_weyl();
        assert_eq!(rw.w_lambda.order(), rw.w_hat.order());
        assert!(s.oracle().matches(&rw));
        // all split: W(λ) = W(λ̂)
        let s = shadow(json!({"orbits": [orbit(2, "t", true, Some(1), true), orbit(2, "u", false, None, true)],
            "h0_in_ker": true, "stab": "L"}));
        let rw = s.rel_weyl();
        assert!(rw.w_lambda.same_elements(&rw.w_hat));
    }

    #[test]
    fn k_lambda_examples() {
        let base = json!({"orbits": [orbit(2, "a", false, None, false), orbit(2, "b", false, None, false)],
            "h0_in_ker": true, "stab": "Ltilde"});
        let s = shadow(base.clone());
        let rw = s.rel_weyl();
        assert!(rw.k_lambda.same_elements(&rw.w_lambda_bar));
        let mut v = base;
        v["fp"] = json!({"a": "b", "b": "a"});
        let s = shadow(v);
        assert!(s.is_admissible());
        let rw = s.rel_weyl();
        assert_eq!(rw.w_lambda.order(), 1);
        assert_eq!(rw.k_lambda.order(), 2);
    }

    #[test]
    fn q_split_examples() {
        let s = shadow(json!({"orbits": [orbit(2, "t", true, Some(1), false)], "h0_in_ker": true, "stab": "Ltilde"}));
        let qs = s.q_split(&s.rel_weyl());
        assert!(qs.q1.is_empty() && qs.w1.order() == 1 && qs.direct);
        let s = shadow(json!({"orbits": [orbit(2, "t", true, Some(-1), false), orbit(2, "t", true, Some(-1), false),
            orbit(4, "u", true, Some(1), false)], "h0_in_ker": false, "stab": "Ltilde"}));
        let rw = s.rel_weyl();
        let qs = s.q_split(&rw);
        assert_eq!(qs.q1, vec![0, 1]);
        assert_eq!(qs.w1.order(), 4);
        assert!(qs.direct && qs.k_stabilizes_q1);
        // weight-1 orders 1, 2, 4, other under the Lhat variant
        let v = json!({"orbits": [
            orbit(-1, "j", true, Some(1), false),
            {"weight": 1, "class": "a", "c_stable": true, "eps": 1, "lin_order": 1},
            {"weight": 1, "class": "b", "c_stable": true, "eps": -1, "lin_order": 2},
            {"weight": 1, "class": "c", "c_stable": false, "lin_order": 4},
            {"weight": 1, "class": "d", "c_stable": false, "lin_order": "other"}],
            "h0_in_ker": true, "stab": "Lhat", "mu_pair": {"a": "b", "b": "a", "c": "c^c"}});
        let s = shadow(v);
        assert!(s.is_admissible(), "{:?}", s.validate());
        assert_eq!(s.q1(), vec![0, 1, 2, 3]);
    }

    #[test]
    fn json_round_trip_and_keys() {
        let s = table_shadow(2, 1, TableRow::NotStable);
        let t = CuspidalShadow::from_json(&s.to_json()).unwrap();
        assert_eq!(s.canonical_key(), t.canonical_key());
        assert!(t.is_admissible());
    }

    #[test]
    fn table_rows() {
        for (l1, l2, row, w1, k1) in [
            (2, 1, TableRow::NotStable, 4, 32),
            (2, 2, TableRow::NotStable, 16, 256),
            (1, 1, TableRow::Plus, 2, 8),
            (1, 1, TableRow::Minus, 2, 8),
        ] {
            let c = table_case(l1, l2, row).unwrap();
            assert!(c.matches(), "{l1} {l2} {row:?}: {c:?}");
            assert_eq!((c.computed_w1.order, c.computed_k1.order), (w1, k1));
        }
    }

    #[test]
    fn two_class_configuration() {
        let s = two_class_weight_two();
        assert!(s.validate().iter().any(|v| v.axiom == "A2"));
        let rw = s.rel_weyl();
        assert_eq!((rw.w_hat.order(), rw.w_tilde.order(), rw.w_lambda.order()), (4, 2, 8));
        let rows = clifford_rows(&rw.w_tilde, &rw.w_lambda).unwrap();
        let nontrivial = &rows[1];
        assert!(nontrivial.stable && !nontrivial.extends);
        assert_eq!(nontrivial.max_multiplicity, 2);
    }

    #[test]
    fn single_weight_two_orbit() {
        let list = enumerate_shadows(&[2], EnumCaps::default());
        for s in &list {
            assert!(s.is_admissible());
        }
        // h0 ∈ ker forces eps = 1. Split classes (stab L): stable, or
        // unstable with fp = id or c. Non-split (stab Ltilde): stable with
        // no partner, or unstable with μ ∈ {absent, c} and fp ∈ {id, c}.
        let with = list.iter().filter(|s| s.h0_in_ker).count();
        let without = list.len() - with;
        assert_eq!(with, 3 + 1 + 4);
        // h0 ∉ ker also allows eps = -1, split or not
        assert_eq!(without, with + 1 + 1);
    }

    /// Independent count: all orbit-level assignments over a two-letter
    /// alphabet, every flag and map, deduplicated by canonical key.
    #[test]
    fn two_weight_two_orbits_recount() {
        let fast = enumerate_shadows(&[2, 2], EnumCaps::default());
        let flags = flag_options(2);
        let mut keys = HashSet::new();
        for assign in [vec![0, 0], vec![0, 1]] {
            let k = assign.iter().max().unwrap() + 1;
            let mut twists: Vec<Option<Twist>> = vec![None];
            for c in 0..k {
                for t in [false, true] {
                    twists.push(Some(Twist { class: c, c: t }));
                }
            }
            let combos = |len: usize, n: usize| -> Vec<Vec<usize>> {
                (0..n.pow(len as u32)).map(|mut x| (0..len).map(|_| { let d = x % n; x /= n; d }).collect()).collect()
            };
            for fl in combos(k, flags.len()) {
                let classes: Vec<ClassData> =
                    fl.iter().enumerate().map(|(c, &f)| ClassData { name: format!("t{c}"), ..flags[f].clone() }).collect();
                for mu in combos(k, twists.len()) {
                    for fp in combos(k, 2 * k) {
                        let fp: Vec<Twist> = fp.iter().map(|&f| Twist { class: f / 2, c: f % 2 == 1 }).collect();
                        for h0 in [true, false] {
                            for stab in Stab::ALL {
                                let mu: Vec<Option<Twist>> = mu.iter().map(|&m| twists[m]).collect();
                                let s = CuspidalShadow::new(classes.clone(), assign.clone(), h0, stab, mu, fp.clone()).unwrap();
                                if s.is_admissible() {
                                    keys.insert(s.canonical_key());
                                }
                            }
                        }
                    }
                }
            }
        }
        assert_eq!(fast.len(), keys.len());
        assert!(fast.iter().all(|s| keys.contains(&s.canonical_key())));
    }

    #[test]
    fn cover_on_small_cases() {
        let rep = table_shadow(1, 1, TableRow::NotStable).verify_stable_cover().unwrap();
        assert!(rep.ok(), "{rep:?}");
        let triv = shadow(json!({"orbits": [orbit(2, "t", true, Some(1), true)], "h0_in_ker": true, "stab": "L"}));
        let rep = triv.verify_stable_cover().unwrap();
        assert!(rep.ok() && rep.eta0_count >= 1);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(40))]
        #[test]
        fn formulas_match_stabilizers(seed in any::<u64>(), n in 1usize..=4) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let s = random_shadow(&mut rng, n);
            let rw = s.rel_weyl();
            prop_assert!(s.oracle().matches(&rw), "{}", s.to_json());
            // containments and the index bound
            prop_assert!(rw.w_tilde.is_subgroup_of(&rw.w_hat));
            prop_assert!(rw.w_hat.is_subgroup_of(&rw.w_lambda));
            prop_assert!(rw.w_lambda.is_subgroup_of(&rw.k_lambda) || s.stab == Stab::L);
            prop_assert!(rw.w_lambda.order() / rw.w_hat.order() <= 2);
            prop_assert_eq!(s.index_two(), rw.w_lambda.order() == 2 * rw.w_hat.order());
            let qs = s.q_split(&rw);
            prop_assert!(qs.k_stabilizes_q1);
            prop_assert!(qs.direct, "{}", s.to_json());
        }
    }
}
