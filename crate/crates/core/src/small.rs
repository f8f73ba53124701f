//! Small named groups used as test fixtures and as the "expected" side of
//! the isomorphism-type comparisons.

use crate::group::{FiniteGroup, GroupElement, Perm};
use crate::signed::{full_group, SignedPerm, WeightedSet, GROUP_CAP};

pub fn cyclic(n: usize) -> FiniteGroup<Perm> {
    let gen: Vec<u32> = (0..n as u32).map(|i| (i + 1) % n as u32).collect();
    FiniteGroup::generate(Perm::identity(n), vec![Perm(gen)])
}

/// Dihedral group of order `2n` acting on an `n`-gon.
pub fn dihedral(n: usize) -> FiniteGroup<Perm> {
    let rot: Vec<u32> = (0..n as u32).map(|i| (i + 1) % n as u32).collect();
    let refl: Vec<u32> = (0..n as u32).map(|i| (n as u32 - i) % n as u32).collect();
    FiniteGroup::generate(Perm::identity(n), vec![Perm(rot), Perm(refl)])
}

pub fn symmetric(n: usize) -> FiniteGroup<Perm> {
    let mut gens = Vec::new();
    if n > 1 {
        gens.push(Perm::from_cycles(n, &[&[0, 1]]));
        let cyc: Vec<u32> = (0..n as u32).collect();
        gens.push(Perm::from_cycles(n, &[&cyc]));
    }
    FiniteGroup::generate(Perm::identity(n), gens)
}

/// Quaternion group of order 8 in its regular representation.
/// Elements `±1, ±i, ±j, ±k` are numbered `0..8` as `(sign, unit)`.
pub fn quaternion() -> FiniteGroup<Perm> {
    // unit products: table[a][b] = (sign, unit) of u_a·u_b with units 1,i,j,k
    const T: [[(bool, usize); 4]; 4] = [
        [(false, 0), (false, 1), (false, 2), (false, 3)],
        [(false, 1), (true, 0), (false, 3), (true, 2)],
        [(false, 2), (true, 3), (true, 0), (false, 1)],
        [(false, 3), (false, 2), (true, 1), (true, 0)],
    ];
    let idx = |neg: bool, u: usize| (neg as usize) * 4 + u;
    let left = |a: usize| {
        let (na, ua) = (a >= 4, a % 4);
        Perm(
            (0..8)
                .map(|b| {
                    let (nb, ub) = (b >= 4, b % 4);
                    let (s, u) = T[ua][ub];
                    idx(na ^ nb ^ s, u) as u32
                })
                .collect(),
        )
    };
    FiniteGroup::generate(Perm::identity(8), vec![left(1), left(2)])
}

pub fn weyl_b(n: usize) -> FiniteGroup<SignedPerm> {
    full_group(&WeightedSet::uniform(n), GROUP_CAP).expect("small rank")
}

pub fn weyl_d(n: usize) -> FiniteGroup<SignedPerm> {
    weyl_b(n).filter(|p| p.num_negated() % 2 == 0)
}

/// Signed permutation of `n` points as a permutation of `2n` points
/// (`i ↦ i`, `-i ↦ n + i`).
pub fn signed_as_perm(p: &SignedPerm) -> Perm {
    let n = p.degree();
    let mut v = vec![0u32; 2 * n];
    for i in 0..n {
        let (j, neg) = p.apply(i);
        v[i] = if neg { (n + j) as u32 } else { j as u32 };
        v[n + i] = if neg { j as u32 } else { (n + j) as u32 };
    }
    Perm(v)
}

pub fn as_perm_group(g: &FiniteGroup<SignedPerm>) -> FiniteGroup<Perm> {
    let n = g.identity().degree();
    FiniteGroup::generate(Perm::identity(2 * n), g.gens().iter().map(signed_as_perm).collect())
}

fn shift(p: &Perm, offset: usize, total: usize) -> Perm {
    let mut v: Vec<u32> = (0..total as u32).collect();
    for i in 0..p.degree() {
        v[offset + i] = (offset + p.apply(i)) as u32;
    }
    Perm(v)
}

/// Direct product acting on the disjoint union of the two point sets.
pub fn direct_product(a: &FiniteGroup<Perm>, b: &FiniteGroup<Perm>) -> FiniteGroup<Perm> {
    let (na, nb) = (a.identity().degree(), b.identity().degree());
    let n = na + nb;
    let mut gens: Vec<Perm> = a.gens().iter().map(|g| shift(g, 0, n)).collect();
    gens.extend(b.gens().iter().map(|g| shift(g, na, n)));
    FiniteGroup::generate(Perm::identity(n), gens)
}

/// `G ≀ S_a` in the imprimitive action on `a` copies of the points of `G`.
pub fn wreath(g: &FiniteGroup<Perm>, a: usize) -> FiniteGroup<Perm> {
    let n = g.identity().degree();
    let total = n * a;
    let mut gens: Vec<Perm> = g.gens().iter().map(|x| shift(x, 0, total)).collect();
    for c in 0..a.saturating_sub(1) {
        let mut v: Vec<u32> = (0..total as u32).collect();
        for i in 0..n {
            v[c * n + i] = ((c + 1) * n + i) as u32;
            v[(c + 1) * n + i] = (c * n + i) as u32;
        }
        gens.push(Perm(v));
    }
    FiniteGroup::generate(Perm::identity(total), gens)
}

/// Element of a group given by an explicit multiplication table.
#[derive(Clone, Copy)]
pub struct TableElt {
    pub idx: u16,
    table: &'static [Vec<u16>],
}

impl TableElt {
    /// Element with index `idx` of the same table.
    pub fn sibling(&self, idx: usize) -> TableElt {
        TableElt { idx: idx as u16, table: self.table }
    }
}

/// Identity of a group given by a multiplication table whose element 0 is
/// the identity. The table is leaked.
pub fn leak_table(table: Vec<Vec<u16>>) -> TableElt {
    let table: &'static [Vec<u16>] = Box::leak(table.into_boxed_slice());
    TableElt { idx: 0, table }
}

impl PartialEq for TableElt {
    fn eq(&self, other: &Self) -> bool {
        self.idx == other.idx && std::ptr::eq(self.table.as_ptr(), other.table.as_ptr())
    }
}

impl Eq for TableElt {}

impl std::hash::Hash for TableElt {
    fn hash<H: std::hash::Hasher>(&self, h: &mut H) {
        self.idx.hash(h);
    }
}

impl std::fmt::Debug for TableElt {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "#{}", self.idx)
    }
}

impl GroupElement for TableElt {
    fn op(&self, other: &Self) -> Self {
        TableElt { idx: self.table[self.idx as usize][other.idx as usize], table: self.table }
    }
    fn inverse(&self) -> Self {
        let row = &self.table[self.idx as usize];
        let e = row.iter().position(|&x| x == 0).expect("identity is element 0");
        TableElt { idx: e as u16, table: self.table }
    }
}

/// Multiplication table of a permutation group, leaked so that elements can
/// be `Copy`. Meant for small fixtures only.
pub fn table_group(g: &FiniteGroup<Perm>) -> FiniteGroup<TableElt> {
    let n = g.order();
    let table: Vec<Vec<u16>> = (0..n)
        .map(|i| (0..n).map(|j| g.index_of(&g.element(i).op(g.element(j))).unwrap() as u16).collect())
        .collect();
    let table: &'static [Vec<u16>] = Box::leak(table.into_boxed_slice());
    let mk = |i: usize| TableElt { idx: i as u16, table };
    let gens = g.gens().iter().map(|x| mk(g.index_of(x).unwrap())).collect();
    FiniteGroup::generate(mk(0), gens)
}
