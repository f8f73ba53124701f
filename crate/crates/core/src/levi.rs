//! Root systems of type D_l / B_l, standard Levi data and the orbit
//! decomposition of the Levi root subsystem.
//!
//! Indices are 1-based everywhere in the public API, matching the usual
//! numbering of simple roots: `α₁ = e₂−e₁`, `α₂ = e₂+e₁`, `αᵢ = eᵢ−eᵢ₋₁`.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::error::{invalid, precondition, Result};

pub type Root = Vec<i32>;

/// Largest rank accepted anywhere in the crate.
pub const MAX_RANK: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RootSystem {
    pub rank: usize,
}

impl RootSystem {
    pub fn new(rank: usize) -> Result<Self> {
        if !(2..=MAX_RANK).contains(&rank) {
            return invalid(format!("rank {rank} outside 2..={MAX_RANK}"));
        }
        Ok(RootSystem { rank })
    }

    fn unit(&self, i: usize, c: i32, v: &mut Root) {
        v[i - 1] += c;
    }

    /// `±e_i ± e_j` for `i < j`.
    pub fn roots(&self) -> Vec<Root> {
        let l = self.rank;
        let mut out = Vec::with_capacity(2 * l * (l - 1));
        for i in 1..=l {
            for j in i + 1..=l {
                for (si, sj) in [(1, 1), (1, -1), (-1, 1), (-1, -1)] {
                    let mut v = vec![0; l];
                    self.unit(i, si, &mut v);
                    self.unit(j, sj, &mut v);
                    out.push(v);
                }
            }
        }
        out
    }

    /// Φ̄ = Φ ∪ {±e_i}.
    pub fn roots_b(&self) -> Vec<Root> {
        let mut out = self.roots();
        for i in 1..=self.rank {
            for s in [1, -1] {
                let mut v = vec![0; self.rank];
                self.unit(i, s, &mut v);
                out.push(v);
            }
        }
        out
    }

    pub fn simple(&self, i: usize) -> Root {
        assert!(i >= 1 && i <= self.rank);
        let mut v = vec![0; self.rank];
        match i {
            1 => {
                v[1] = 1;
                v[0] = -1;
            }
            2 => {
                v[1] = 1;
                v[0] = 1;
            }
            _ => {
                v[i - 1] = 1;
                v[i - 2] = -1;
            }
        }
        v
    }

    pub fn simple_roots(&self) -> Vec<Root> {
        (1..=self.rank).map(|i| self.simple(i)).collect()
    }
}

/// Reflection of `v` in the hyperplane orthogonal to `a`.
pub fn reflect(a: &[i32], v: &[i32]) -> Root {
    let aa: i32 = a.iter().map(|x| x * x).sum();
    let av: i32 = a.iter().zip(v).map(|(x, y)| x * y).sum();
    let c = 2 * av / aa;
    v.iter().zip(a).map(|(y, x)| y - c * x).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum LeviCase {
    #[serde(rename = "i")]
    I,
    #[serde(rename = "ii")]
    II,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LeviDatum {
    pub rank: usize,
    /// chosen simple roots, by index
    pub delta: BTreeSet<usize>,
    pub case: LeviCase,
}

/// Bring `Δ′₀` to a standard form. The only non-standard configuration
/// (`α₂ ∈ Δ′₀`, `α₁ ∉ Δ′₀`) is fixed by the graph automorphism swapping
/// `α₁` and `α₂`.
pub fn normalize_levi(rank: usize, delta0: &[usize]) -> Result<(LeviDatum, bool)> {
    RootSystem::new(rank)?;
    let mut delta = BTreeSet::new();
    for &i in delta0 {
        if i == 0 || i > rank {
            return invalid(format!("simple root index {i} outside 1..={rank}"));
        }
        delta.insert(i);
    }
    let has1 = delta.contains(&1);
    let has2 = delta.contains(&2);
    let mut gamma = false;
    if has2 && !has1 {
        delta.remove(&2);
        delta.insert(1);
        gamma = true;
    }
    let case = if has1 && has2 { LeviCase::II } else { LeviCase::I };
    Ok((LeviDatum { rank, delta, case }, gamma))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Minus1Type {
    A1xA1,
    A3,
    D(usize),
}

impl std::fmt::Display for Minus1Type {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Minus1Type::A1xA1 => write!(f, "A1xA1"),
            Minus1Type::A3 => write!(f, "A3"),
            Minus1Type::D(m) => write!(f, "D{m}"),
        }
    }
}

/// A W_{Φ′}-orbit on `{1..l}`. For type-A orbits `elems` follows the
/// Δ′-adjacency chain, so `elems[k]` is `I(k+1)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Orbit {
    pub weight: i32,
    pub elems: Vec<usize>,
}

impl Orbit {
    pub fn min(&self) -> usize {
        *self.elems.iter().min().unwrap()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decomposition {
    pub levi: LeviDatum,
    /// Φ′ as integer vectors.
    pub phi_prime: Vec<Root>,
    /// Φ_d for d ∈ 𝔻′ (d ≥ 2 or d = −1).
    pub phi_d: BTreeMap<i32, Vec<Root>>,
    /// orbits sorted by minimal element
    pub orbits: Vec<Orbit>,
}

impl Decomposition {
    pub fn rank(&self) -> usize {
        self.levi.rank
    }

    /// 𝔻: weights occurring among the orbits.
    pub fn d_set(&self) -> BTreeSet<i32> {
        self.orbits.iter().map(|o| o.weight).collect()
    }

    /// 𝔻′: weights with nonempty Φ_d.
    pub fn d_prime(&self) -> BTreeSet<i32> {
        self.phi_d.keys().copied().collect()
    }

    /// I_{d,1}, I_{d,2}, … ordered by minimal element.
    pub fn orbits_of(&self, d: i32) -> Vec<&Orbit> {
        self.orbits.iter().filter(|o| o.weight == d).collect()
    }

    pub fn a(&self, d: i32) -> usize {
        self.orbits_of(d).len()
    }

    pub fn j(&self, d: i32) -> BTreeSet<usize> {
        self.orbits_of(d).iter().flat_map(|o| o.elems.iter().copied()).collect()
    }

    pub fn j_minus1(&self) -> Option<&Orbit> {
        self.orbits.iter().find(|o| o.weight == -1)
    }

    /// `I_{d,j}(k)`, 1-based in both `j` and `k`.
    pub fn element(&self, d: i32, j: usize, k: usize) -> usize {
        self.orbits_of(d)[j - 1].elems[k - 1]
    }

    pub fn type_of_minus1(&self) -> Result<Minus1Type> {
        match self.j_minus1() {
            None => precondition("-1 is not in D"),
            Some(o) => Ok(match o.elems.len() {
                2 => Minus1Type::A1xA1,
                3 => Minus1Type::A3,
                m => Minus1Type::D(m),
            }),
        }
    }

    /// `f_k^{(d)}` as a map `{1..l} → {1..l}`, stored 0-based
    /// (`out[i-1] = f(i)`). It sends `j ↦ I_{d,j}(k)` on `{1..a_d}` and is
    /// completed to a bijection with as many fixed points as possible.
    pub fn f_map(&self, d: i32, k: usize) -> Vec<usize> {
        assert!(d != -1);
        let l = self.rank();
        let a = self.a(d);
        let mut img: Vec<Option<usize>> = vec![None; l];
        let mut used = BTreeSet::new();
        for j in 1..=a {
            let t = self.element(d, j, k);
            img[j - 1] = Some(t);
            used.insert(t);
        }
        let domain: BTreeSet<usize> = (1..=a).collect();
        let free_src: Vec<usize> = (1..=l).filter(|i| !domain.contains(i)).collect();
        // fix what can be fixed, then pair the leftovers in sorted order
        let mut leftover_src = Vec::new();
        for &i in &free_src {
            if !used.contains(&i) {
                img[i - 1] = Some(i);
                used.insert(i);
            } else {
                leftover_src.push(i);
            }
        }
        let leftover_dst: Vec<usize> = (1..=l).filter(|i| !used.contains(i)).collect();
        debug_assert_eq!(leftover_src.len(), leftover_dst.len());
        for (s, t) in leftover_src.into_iter().zip(leftover_dst) {
            img[s - 1] = Some(t);
        }
        img.into_iter().map(|x| x.unwrap()).collect()
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "rank": self.rank(),
            "delta_prime": self.levi.delta.iter().collect::<Vec<_>>(),
            "case": self.levi.case,
            "orbits": self.orbits.iter().map(|o| o.elems.clone()).collect::<Vec<_>>(),
            "D": self.d_set().into_iter().collect::<Vec<_>>(),
        })
    }
}

/// Root subsystem spanned by `gens`: closure of ±gens under their reflections.
pub fn root_closure(gens: &[Root]) -> Vec<Root> {
    let mut set: BTreeSet<Root> = BTreeSet::new();
    let mut todo: Vec<Root> = Vec::new();
    for g in gens {
        for v in [g.clone(), g.iter().map(|x| -x).collect()] {
            if set.insert(v.clone()) {
                todo.push(v);
            }
        }
    }
    while let Some(v) = todo.pop() {
        for g in gens {
            let w = reflect(g, &v);
            if set.insert(w.clone()) {
                todo.push(w);
            }
        }
    }
    set.into_iter().collect()
}

fn find(parent: &mut [usize], x: usize) -> usize {
    let mut r = x;
    while parent[r] != r {
        r = parent[r];
    }
    let mut y = x;
    while parent[y] != r {
        let n = parent[y];
        parent[y] = r;
        y = n;
    }
    r
}

pub fn decompose(levi: &LeviDatum) -> Decomposition {
    let rs = RootSystem { rank: levi.rank };
    let l = levi.rank;
    let gens: Vec<Root> = levi.delta.iter().map(|&i| rs.simple(i)).collect();
    let phi_prime = root_closure(&gens);

    let mut parent: Vec<usize> = (0..=l).collect();
    for &i in &levi.delta {
        let (a, b) = if i <= 2 { (1, 2) } else { (i - 1, i) };
        let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
        if ra != rb {
            parent[ra.max(rb)] = ra.min(rb);
        }
    }
    let mut comps: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for i in 1..=l {
        let r = find(&mut parent, i);
        comps.entry(r).or_default().push(i);
    }
    let mut orbits: Vec<Orbit> = comps
        .into_values()
        .map(|mut elems| {
            elems.sort_unstable();
            let weight = if levi.case == LeviCase::II && elems[0] == 1 {
                -1
            } else {
                elems.len() as i32
            };
            Orbit { weight, elems }
        })
        .collect();
    orbits.sort_by_key(|o| o.min());

    let mut phi_d: BTreeMap<i32, Vec<Root>> = BTreeMap::new();
    for r in &phi_prime {
        let i = r.iter().position(|&x| x != 0).unwrap() + 1;
        let o = orbits.iter().find(|o| o.elems.contains(&i)).unwrap();
        phi_d.entry(o.weight).or_default().push(r.clone());
    }
    Decomposition { levi: levi.clone(), phi_prime, phi_d, orbits }
}

/// Every normalized Levi datum of the given rank, each once.
pub fn all_normalized(rank: usize) -> Vec<LeviDatum> {
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for mask in 0u32..(1 << rank) {
        let delta: Vec<usize> = (1..=rank).filter(|i| mask >> (i - 1) & 1 == 1).collect();
        let (lv, _) = normalize_levi(rank, &delta).expect("indices in range");
        if seen.insert(lv.delta.clone()) {
            out.push(lv);
        }
    }
    out
}
