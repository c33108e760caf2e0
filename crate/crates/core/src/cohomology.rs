//! Characters, the discrete canonical bundle, spin structures and Arf invariants.
//!
//! Everything is done in a tree-cotree gauge. A breadth-first spanning tree
//! `T` of the graph is chosen first, then a breadth-first spanning tree `C*`
//! of the dual graph using only edges outside `T`. The `2g` edges in neither
//! tree are the generators, and the generator cycles (generator dart followed
//! by the tree path back) form the homology basis. A cocycle is fixed by its
//! values on the generators: it is 1 on tree darts, and the cotree darts are
//! solved face by face from the leaves of `C*` inwards.

use num_complex::Complex64;
use serde::Serialize;

use crate::angle::AnglePi;
use crate::error::{Error, Result};
use crate::ribbon::{CombinatorialMap, Dart, HypothesisMode, IsoradialMap, QuadGraph};
use crate::scalar::{cast_cx, Cx, Real};

/// Per-dart tolerance on numeric face products and conjugate symmetry.
const NUMERIC_TOL: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum EdgeRole {
    Tree,
    Cotree,
    Generator,
}

/// Tree-cotree decomposition and the resulting homology basis.
#[derive(Clone, Debug)]
pub struct HomologyBasis {
    /// Dart from the parent for every non-root vertex, in breadth-first order.
    pub spanning_tree_darts: Vec<Dart>,
    /// Smallest dart of every edge outside the spanning tree.
    pub chords: Vec<Dart>,
    /// Smallest dart of each of the `2g` generator edges.
    pub generators: Vec<Dart>,
    /// `fundamental_cycles[i]` starts with `generators[i]`, then follows the tree.
    pub fundamental_cycles: Vec<Vec<Dart>>,
    parent: Vec<Option<Dart>>,
    role: Vec<EdgeRole>,
    /// Non-root faces in breadth-first order, with the dart on that face
    /// whose edge joins it to its parent face.
    cotree: Vec<(usize, Dart)>,
    root_face: usize,
}

pub fn tree_cotree_basis(map: &CombinatorialMap) -> Result<HomologyBasis> {
    if !map.is_connected() {
        return Err(Error::DisconnectedGraph);
    }
    let nv = map.vertex_count();
    let mut parent = vec![None; nv];
    let mut seen = vec![false; nv];
    let mut role = vec![EdgeRole::Generator; map.edge_count()];
    let mut tree = Vec::new();
    if nv > 0 {
        seen[0] = true;
        let mut queue = std::collections::VecDeque::from([0usize]);
        while let Some(v) = queue.pop_front() {
            for &d in map.vertex_darts(v) {
                let w = map.terminus(d);
                if !seen[w] {
                    seen[w] = true;
                    parent[w] = Some(d);
                    role[map.edge_of(d)] = EdgeRole::Tree;
                    tree.push(d);
                    queue.push_back(w);
                }
            }
        }
    }
    let nf = map.face_count();
    let mut cotree = Vec::new();
    let mut fseen = vec![false; nf];
    if nf > 0 {
        fseen[0] = true;
        let mut queue = std::collections::VecDeque::from([0usize]);
        while let Some(f) = queue.pop_front() {
            for &d in map.face_darts(f) {
                let back = map.reversal(d);
                let g = map.face_of(back);
                if role[map.edge_of(d)] == EdgeRole::Generator && !fseen[g] {
                    fseen[g] = true;
                    role[map.edge_of(d)] = EdgeRole::Cotree;
                    cotree.push((g, back));
                    queue.push_back(g);
                }
            }
        }
    }
    let chords: Vec<Dart> = (0..map.edge_count())
        .filter(|&e| role[e] != EdgeRole::Tree)
        .map(|e| map.edge_dart(e))
        .collect();
    let generators: Vec<Dart> = (0..map.edge_count())
        .filter(|&e| role[e] == EdgeRole::Generator)
        .map(|e| map.edge_dart(e))
        .collect();
    let mut basis = HomologyBasis {
        spanning_tree_darts: tree,
        chords,
        generators,
        fundamental_cycles: Vec::new(),
        parent,
        role,
        cotree,
        root_face: 0,
    };
    basis.fundamental_cycles = basis.generators.iter().map(|&d| basis.cycle_through(map, d)).collect();
    Ok(basis)
}

impl HomologyBasis {
    pub fn rank(&self) -> usize {
        self.generators.len()
    }

    /// Tree path between two vertices, as darts.
    pub fn tree_path(&self, map: &CombinatorialMap, from: usize, to: usize) -> Vec<Dart> {
        let climb = |mut v: usize| {
            let mut up = Vec::new();
            while let Some(d) = self.parent[v] {
                up.push(d);
                v = map.origin(d);
            }
            up
        };
        // darts from `from` to the root, and from the root to `to`
        let mut up: Vec<Dart> = climb(from).into_iter().map(|d| map.reversal(d)).collect();
        let mut down = climb(to);
        while let (Some(&a), Some(&b)) = (up.last(), down.last()) {
            if a != map.reversal(b) {
                break;
            }
            up.pop();
            down.pop();
        }
        down.reverse();
        up.extend(down);
        up
    }

    /// The simple closed walk made of a non-tree dart and the tree path back.
    pub fn cycle_through(&self, map: &CombinatorialMap, d: Dart) -> Vec<Dart> {
        let mut walk = vec![d];
        walk.extend(self.tree_path(map, map.terminus(d), map.origin(d)));
        walk
    }

    /// Fundamental cycles of every chord, generators included.
    pub fn chord_cycles(&self, map: &CombinatorialMap) -> Vec<Vec<Dart>> {
        self.chords.iter().map(|&d| self.cycle_through(map, d)).collect()
    }
}

/// Abelian group of dart labels used by the face solver.
trait Label: Copy {
    fn unit() -> Self;
    fn op(self, o: Self) -> Self;
    fn inv(self) -> Self;
    fn same(self, o: Self, len: usize) -> bool;
}

impl Label for AnglePi {
    fn unit() -> Self {
        AnglePi::ZERO
    }
    fn op(self, o: Self) -> Self {
        self + o
    }
    fn inv(self) -> Self {
        -self
    }
    fn same(self, o: Self, _: usize) -> bool {
        (self - o).is_multiple_of_two_pi()
    }
}

impl Label for Complex64 {
    fn unit() -> Self {
        Complex64::new(1.0, 0.0)
    }
    fn op(self, o: Self) -> Self {
        self * o
    }
    fn inv(self) -> Self {
        self.conj() / self.norm_sqr()
    }
    fn same(self, o: Self, len: usize) -> bool {
        (self - o).norm() <= NUMERIC_TOL * len.max(1) as f64
    }
}

/// Fills a labeling that is trivial on the tree, prescribed on generators and
/// has face products `target(f)`.
fn solve_gauge<L: Label>(
    map: &CombinatorialMap,
    basis: &HomologyBasis,
    generator_values: &[L],
    target: impl Fn(usize) -> L,
) -> Result<Vec<L>> {
    if generator_values.len() != basis.generators.len() {
        return Err(Error::Dimension(format!(
            "{} values for {} generators",
            generator_values.len(),
            basis.generators.len()
        )));
    }
    let n = map.dart_count();
    let mut vals: Vec<Option<L>> = vec![None; n];
    for d in 0..n {
        if basis.role[map.edge_of(d)] == EdgeRole::Tree {
            vals[d] = Some(L::unit());
        }
    }
    for (&d, &x) in basis.generators.iter().zip(generator_values) {
        vals[d] = Some(x);
        vals[map.reversal(d)] = Some(x.inv());
    }
    let face_rest = |vals: &[Option<L>], f: usize, skip: Option<Dart>| -> Result<L> {
        let mut acc = L::unit();
        for &d in map.face_darts(f) {
            if Some(d) == skip {
                continue;
            }
            acc = acc.op(vals[d].ok_or_else(|| Error::InconsistentSystem(format!("dart {d} unsolved at face {f}")))?);
        }
        Ok(acc)
    };
    for &(f, c) in basis.cotree.iter().rev() {
        let x = target(f).op(face_rest(&vals, f, Some(c))?.inv());
        vals[c] = Some(x);
        vals[map.reversal(c)] = Some(x.inv());
    }
    let out: Vec<L> = vals
        .into_iter()
        .enumerate()
        .map(|(d, v)| v.ok_or_else(|| Error::InconsistentSystem(format!("dart {d} left unsolved"))))
        .collect::<Result<_>>()?;
    if map.face_count() > 0 {
        let f = basis.root_face;
        let total = map.face_darts(f).iter().fold(L::unit(), |a, &d| a.op(out[d]));
        if !total.same(target(f), map.face_darts(f).len()) {
            return Err(Error::InconsistentSystem(format!("face {f} product fails")));
        }
    }
    Ok(out)
}

/// Unit-phase dart labeling with `φ(ē) = φ(e)⁻¹` and trivial face products.
#[derive(Clone, Debug, PartialEq)]
pub struct Cocycle {
    values: Vec<Complex64>,
    phases: Option<Vec<AnglePi>>,
}

impl Cocycle {
    pub fn trivial(dart_count: usize) -> Self {
        Cocycle {
            values: vec![Complex64::new(1.0, 0.0); dart_count],
            phases: Some(vec![AnglePi::ZERO; dart_count]),
        }
    }

    /// Exact cocycle from phases; representatives are normalized so the
    /// smallest dart of each edge lies in `(−π, π]`.
    pub fn from_phases(map: &CombinatorialMap, phases: &[AnglePi]) -> Result<Self> {
        let n = map.dart_count();
        if phases.len() != n {
            return Err(Error::Dimension(format!("{} phases for {} darts", phases.len(), n)));
        }
        let mut norm = vec![AnglePi::ZERO; n];
        for d in 0..n {
            let r = map.reversal(d);
            if !(phases[d] + phases[r]).is_multiple_of_two_pi() {
                return Err(Error::InconsistentSystem(format!("dart {d} and its reversal are not conjugate")));
            }
            if d < r {
                norm[d] = phases[d].reduce_symmetric();
                norm[r] = -norm[d];
            }
        }
        for f in 0..map.face_count() {
            let s: AnglePi = map.face_darts(f).iter().map(|&d| norm[d]).sum();
            if !s.is_multiple_of_two_pi() {
                return Err(Error::InconsistentSystem(format!("face {f} has holonomy {s}")));
            }
        }
        Ok(Cocycle {
            values: norm.iter().map(|a| a.cis::<f64>()).collect(),
            phases: Some(norm),
        })
    }

    /// Numeric cocycle; unit modulus, conjugate symmetry and face products are
    /// checked to 1e-12 per dart.
    pub fn from_values(map: &CombinatorialMap, values: Vec<Complex64>) -> Result<Self> {
        let n = map.dart_count();
        if values.len() != n {
            return Err(Error::Dimension(format!("{} values for {} darts", values.len(), n)));
        }
        for d in 0..n {
            if (values[d].norm() - 1.0).abs() > NUMERIC_TOL * 10.0 {
                return Err(Error::InconsistentSystem(format!("dart {d} value is not unit")));
            }
            if (values[map.reversal(d)] - values[d].conj()).norm() > NUMERIC_TOL * 10.0 {
                return Err(Error::InconsistentSystem(format!("dart {d} and its reversal are not conjugate")));
            }
        }
        for f in 0..map.face_count() {
            let darts = map.face_darts(f);
            let p: Complex64 = darts.iter().map(|&d| values[d]).product();
            if !p.same(Complex64::unit(), darts.len()) {
                return Err(Error::InconsistentSystem(format!("face {f} has holonomy {p}")));
            }
        }
        Ok(Cocycle { values, phases: None })
    }

    pub fn dart_count(&self) -> usize {
        self.values.len()
    }

    pub fn is_exact(&self) -> bool {
        self.phases.is_some()
    }

    pub fn value(&self, d: Dart) -> Complex64 {
        self.values[d]
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    /// Values in the working precision `T`.
    pub fn values_as<T: Real>(&self) -> Vec<Cx<T>> {
        match &self.phases {
            Some(p) => p.iter().map(|a| a.cis::<T>()).collect(),
            None => self.values.iter().map(|&z| cast_cx(z)).collect(),
        }
    }

    pub fn phases(&self) -> Option<&[AnglePi]> {
        self.phases.as_deref()
    }

    pub fn holonomy(&self, walk: &[Dart]) -> Complex64 {
        match self.exact_holonomy(walk) {
            Some(a) => a.cis(),
            None => walk.iter().map(|&d| self.values[d]).product(),
        }
    }

    pub fn exact_holonomy(&self, walk: &[Dart]) -> Option<AnglePi> {
        self.phases.as_ref().map(|p| walk.iter().map(|&d| p[d]).sum::<AnglePi>().reduce())
    }

    /// Pointwise product; exact when both factors are.
    pub fn times(&self, other: &Cocycle) -> Cocycle {
        match (&self.phases, &other.phases) {
            (Some(a), Some(b)) => {
                let p: Vec<AnglePi> = a.iter().zip(b).map(|(&x, &y)| (x + y).reduce_symmetric()).collect();
                Cocycle {
                    values: p.iter().map(|a| a.cis::<f64>()).collect(),
                    phases: Some(p),
                }
            }
            _ => Cocycle {
                values: self.values.iter().zip(&other.values).map(|(x, y)| x * y).collect(),
                phases: None,
            },
        }
    }

    /// Gauge change by unit vertex values `g`: `φ(e) ↦ φ(e)·g(t(e))·conj(g(o(e)))`.
    pub fn with_coboundary(&self, map: &CombinatorialMap, g: &[Complex64]) -> Cocycle {
        Cocycle {
            values: (0..self.values.len())
                .map(|d| self.values[d] * g[map.terminus(d)] * g[map.origin(d)].conj())
                .collect(),
            phases: None,
        }
    }
}

/// Prescribed values of a class in `H¹(Σ; S¹)` on a homology basis.
#[derive(Clone, Debug, PartialEq)]
pub struct Character {
    pub basis: Vec<Vec<Dart>>,
    pub values: Vec<Complex64>,
}

impl Character {
    pub fn on_basis(basis: &HomologyBasis, values: Vec<Complex64>) -> Self {
        Character {
            basis: basis.fundamental_cycles.clone(),
            values,
        }
    }
}

fn check_basis(basis: &HomologyBasis, cycles: &[Vec<Dart>]) -> Result<()> {
    if basis.fundamental_cycles != cycles {
        return Err(Error::InconsistentSystem(
            "character is not given on the tree-cotree basis of this map".into(),
        ));
    }
    Ok(())
}

/// Cocycle with holonomy `character.values[i]` along the i-th basis cycle.
pub fn character_to_cocycle(map: &CombinatorialMap, character: &Character) -> Result<Cocycle> {
    let basis = tree_cotree_basis(map)?;
    check_basis(&basis, &character.basis)?;
    if character.values.iter().any(|z| (z.norm() - 1.0).abs() > 1e-12) {
        return Err(Error::Dimension("character values must have modulus 1".into()));
    }
    let vals = solve_gauge(map, &basis, &character.values, |_| Complex64::unit())?;
    let mut values = vals;
    // exact conjugate symmetry
    for d in 0..map.dart_count() {
        if map.is_positive(d) {
            values[map.reversal(d)] = values[d].conj();
        }
    }
    Ok(Cocycle { values, phases: None })
}

/// Exact version of [`character_to_cocycle`] with holonomy `exp(i·phases[i])`.
pub fn character_to_cocycle_exact(map: &CombinatorialMap, basis: &HomologyBasis, phases: &[AnglePi]) -> Result<Cocycle> {
    let vals = solve_gauge(map, basis, phases, |_| AnglePi::ZERO)?;
    Cocycle::from_phases(map, &vals)
}

/// The `2^{2g}` sign cocycles; bit `i` of the index flips generator `i`.
pub fn h1_mod2_reps(map: &CombinatorialMap) -> Result<Vec<Cocycle>> {
    let basis = tree_cotree_basis(map)?;
    let k = basis.rank();
    (0..1usize << k)
        .map(|a| {
            let phases: Vec<AnglePi> = (0..k)
                .map(|i| if a >> i & 1 == 1 { AnglePi::PI } else { AnglePi::ZERO })
                .collect();
            character_to_cocycle_exact(map, &basis, &phases)
        })
        .collect()
}

/// `true` when the cocycle has trivial holonomy on every basis cycle.
pub fn is_cohomologically_trivial(basis: &HomologyBasis, phi: &Cocycle) -> bool {
    basis.fundamental_cycles.iter().all(|c| match phi.exact_holonomy(c) {
        Some(a) => a.is_zero(),
        None => (phi.holonomy(c) - 1.0).norm() <= 1e-9,
    })
}

fn require_flat(map: &IsoradialMap) -> Result<()> {
    let bad_v: Vec<usize> = (0..map.vertex_count())
        .filter(|&v| !map.primal_cone_angle(v).is_multiple_of_two_pi())
        .collect();
    let bad_f: Vec<usize> = (0..map.face_count())
        .filter(|&f| !map.dual_cone_angle(f).is_multiple_of_two_pi())
        .collect();
    if bad_v.is_empty() && bad_f.is_empty() {
        Ok(())
    } else {
        Err(Error::HypothesisViolation(format!(
            "cone angles not multiples of 2π at vertices {bad_v:?} and faces {bad_f:?}"
        )))
    }
}

/// The canonical bundle `κ`, with `κ(γ) = exp(−iα(γ))` on closed walks.
pub fn canonical_bundle(map: &IsoradialMap) -> Result<Cocycle> {
    require_flat(map)?;
    let basis = tree_cotree_basis(map)?;
    canonical_bundle_with(map, &basis)
}

fn canonical_bundle_with(map: &IsoradialMap, basis: &HomologyBasis) -> Result<Cocycle> {
    let gens = basis
        .fundamental_cycles
        .iter()
        .map(|c| Ok(-map.turning_alpha(c)?))
        .collect::<Result<Vec<_>>>()?;
    let kappa = character_to_cocycle_exact(map, basis, &gens)?;
    for cycle in basis.chord_cycles(map) {
        let h = kappa.exact_holonomy(&cycle).expect("exact");
        if !(h + map.turning_alpha(&cycle)?).is_multiple_of_two_pi() {
            return Err(Error::InconsistentSystem(format!(
                "canonical bundle fails on the cycle through dart {}",
                cycle[0]
            )));
        }
    }
    Ok(kappa)
}

/// Winding data of a spin structure on the homology basis.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ArfData {
    /// `q` on each basis class.
    pub q: Vec<u8>,
    /// `Σ_x (−1)^{q(x)}` over all `2^{2g}` classes.
    pub gauss_sum: i64,
    pub arf: u8,
}

/// A square root `λ` of `κ`, with its Arf invariant.
#[derive(Clone, Debug, PartialEq)]
pub struct SpinStructure {
    /// Bit `i` set when the base solution is flipped along generator `i`.
    pub label: usize,
    pub lambda: Cocycle,
    /// Winding signs on the basis cycles.
    pub winding: Vec<i8>,
    pub arf: ArfData,
    /// Cohomologous to the trivial cocycle.
    pub trivial_class: bool,
}

/// All `2^{2g}` spin structures, in label order.
pub fn spin_structures(map: &IsoradialMap) -> Result<Vec<SpinStructure>> {
    map.require(HypothesisMode::AllOdd)?;
    let basis = tree_cotree_basis(map)?;
    let kappa = canonical_bundle_with(map, &basis)?;
    let kp = kappa.phases().expect("canonical bundle is exact");
    // κ/2 everywhere, then re-solve the cotree darts so every face closes
    let half: Vec<AnglePi> = kp.iter().map(|a| a.half()).collect();
    let lambda0 = resolve_cotree(map, &basis, half);
    let lambda0 = Cocycle::from_phases(map, &lambda0).map_err(|_| Error::UnsolvableSigns)?;
    let form = intersection_form_mod2(map, &basis.fundamental_cycles)?;
    let k = basis.rank();
    (0..1usize << k)
        .map(|a| {
            let flips: Vec<AnglePi> = (0..k)
                .map(|i| if a >> i & 1 == 1 { AnglePi::PI } else { AnglePi::ZERO })
                .collect();
            let eps = character_to_cocycle_exact(map, &basis, &flips)?;
            let lambda = lambda0.times(&eps);
            for d in 0..map.dart_count() {
                if !(lambda.phases().unwrap()[d].scale(2) - kp[d]).is_multiple_of_two_pi() {
                    return Err(Error::UnsolvableSigns);
                }
            }
            for f in 0..map.face_count() {
                if winding_sign(map, &lambda, map.face_darts(f))? != -1 {
                    return Err(Error::UnsolvableSigns);
                }
            }
            let winding = basis
                .fundamental_cycles
                .iter()
                .map(|c| winding_sign(map, &lambda, c))
                .collect::<Result<Vec<_>>>()?;
            let arf = arf_from_winding(&winding, &form)?;
            let trivial_class = is_cohomologically_trivial(&basis, &lambda);
            Ok(SpinStructure {
                label: a,
                lambda,
                winding,
                arf,
                trivial_class,
            })
        })
        .collect()
}

/// Re-solves cotree darts so that all face sums vanish, keeping the rest.
fn resolve_cotree(map: &CombinatorialMap, basis: &HomologyBasis, mut vals: Vec<AnglePi>) -> Vec<AnglePi> {
    for &(f, c) in basis.cotree.iter().rev() {
        let rest: AnglePi = map.face_darts(f).iter().filter(|&&d| d != c).map(|&d| vals[d]).sum();
        vals[c] = -rest;
        vals[map.reversal(c)] = rest;
    }
    vals
}

/// `λ(γ)·exp(iα(γ)/2)`, which is `±1` for a spin structure.
pub fn winding_sign(map: &IsoradialMap, lambda: &Cocycle, walk: &[Dart]) -> Result<i8> {
    let alpha = map.turning_alpha(walk)?;
    match lambda.exact_holonomy(walk) {
        Some(h) => {
            let s = (h + alpha.half()).reduce();
            if s.is_zero() {
                Ok(1)
            } else if s == AnglePi::PI {
                Ok(-1)
            } else {
                Err(Error::NotPlusMinusOne)
            }
        }
        None => {
            let z = lambda.holonomy(walk) * alpha.half().cis::<f64>();
            if (z - 1.0).norm() <= 1e-9 {
                Ok(1)
            } else if (z + 1.0).norm() <= 1e-9 {
                Ok(-1)
            } else {
                Err(Error::NotPlusMinusOne)
            }
        }
    }
}

fn gf2_rank(mut rows: Vec<Vec<u8>>) -> usize {
    let cols = rows.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..rows.len()).find(|&i| rows[i][c] == 1) else {
            continue;
        };
        rows.swap(rank, p);
        for i in 0..rows.len() {
            if i != rank && rows[i][c] == 1 {
                let pivot = rows[rank].clone();
                for (x, y) in rows[i].iter_mut().zip(pivot) {
                    *x ^= y;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Mod-2 count of half-edges of `other` inside the right-hand corners of `cycle`.
fn pushoff_crossings(map: &CombinatorialMap, cycle: &[Dart], other: &[Dart]) -> u8 {
    let mut ends = vec![0u8; map.dart_count()];
    for &d in other {
        ends[d] ^= 1;
        ends[map.reversal(d)] ^= 1;
    }
    let k = cycle.len();
    let mut parity = 0u8;
    for i in 0..k {
        let back = map.reversal(cycle[i]);
        let next = cycle[(i + 1) % k];
        let mut d = map.rotate(back);
        while d != next {
            parity ^= ends[d];
            d = map.rotate(d);
        }
    }
    parity
}

/// Mod-2 intersection matrix of simple closed walks, zero on the diagonal.
pub fn intersection_form_mod2(map: &CombinatorialMap, basis: &[Vec<Dart>]) -> Result<Vec<Vec<u8>>> {
    let k = basis.len();
    let mut form = vec![vec![0u8; k]; k];
    for i in 0..k {
        for j in i + 1..k {
            let x = pushoff_crossings(map, &basis[i], &basis[j]);
            form[i][j] = x;
            form[j][i] = x;
        }
    }
    let rank = gf2_rank(form.clone());
    if rank != k {
        return Err(Error::DegenerateForm { rank, dim: k });
    }
    Ok(form)
}

fn arf_from_winding(winding: &[i8], form: &[Vec<u8>]) -> Result<ArfData> {
    let k = winding.len();
    let q: Vec<u8> = winding.iter().map(|&w| if w == 1 { 1 } else { 0 }).collect();
    let mut gauss_sum = 0i64;
    for x in 0..1usize << k {
        let mut v = 0u8;
        for i in 0..k {
            if x >> i & 1 == 0 {
                continue;
            }
            v ^= q[i];
            for j in i + 1..k {
                if x >> j & 1 == 1 {
                    v ^= form[i][j];
                }
            }
        }
        gauss_sum += if v == 0 { 1 } else { -1 };
    }
    let g = k / 2;
    let bound = 1i64 << g;
    let arf = match gauss_sum {
        s if s == bound => 0,
        s if s == -bound => 1,
        sum => return Err(Error::GaussSumNotPM2g { sum }),
    };
    Ok(ArfData { q, gauss_sum, arf })
}

/// Quadratic form data and Arf invariant of `lambda`.
pub fn arf_data(map: &IsoradialMap, lambda: &Cocycle) -> Result<ArfData> {
    let basis = tree_cotree_basis(map)?;
    let form = intersection_form_mod2(map, &basis.fundamental_cycles)?;
    let winding = basis
        .fundamental_cycles
        .iter()
        .map(|c| winding_sign(map, lambda, c))
        .collect::<Result<Vec<_>>>()?;
    arf_from_winding(&winding, &form)
}

pub fn arf(map: &IsoradialMap, lambda: &Cocycle) -> Result<u8> {
    Ok(arf_data(map, lambda)?.arf)
}

/// Pushes a quad-graph cocycle to `G` and `G*` along the quad paths.
///
/// Both results describe the same class on the surface; the second lives on
/// the darts of `map.dual()`.
pub fn realize_on_primal_and_dual(map: &IsoradialMap, quad: &QuadGraph, psi: &Cocycle) -> Result<(Cocycle, Cocycle)> {
    let push = |paths: &[[Dart; 2]]| {
        let mut v: Vec<Complex64> = paths.iter().map(|p| psi.value(p[0]) * psi.value(p[1])).collect();
        for d in 0..map.dart_count() {
            if map.is_positive(d) {
                v[map.reversal(d)] = v[d].conj();
            }
        }
        v
    };
    let primal = Cocycle::from_values(map, push(&quad.primal_paths))?;
    let dual = Cocycle::from_values(&map.dual(), push(&quad.dual_paths))?;
    Ok((primal, dual))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builders::{gen_genus2_bouquet, gen_torus_lattice, star_construction, AbstractGraph, LatticeKind};

    fn torus(n: usize, m: usize) -> IsoradialMap {
        gen_torus_lattice(LatticeKind::Square, n, m).unwrap()
    }

    #[test]
    fn unit_torus_basis() {
        let m = torus(1, 1);
        let b = tree_cotree_basis(&m).unwrap();
        assert!(b.spanning_tree_darts.is_empty());
        assert_eq!(b.chords, vec![0, 2]);
        assert_eq!(b.generators, vec![0, 2]);
        assert_eq!(b.fundamental_cycles, vec![vec![0], vec![2]]);
    }

    #[test]
    fn chord_counts_and_simple_cycles() {
        for (n, k) in [(2, 2), (3, 2), (4, 3)] {
            let m = torus(n, k);
            let b = tree_cotree_basis(&m).unwrap();
            assert_eq!(b.chords.len(), n * k + 1);
            assert_eq!(b.rank(), 2);
            for c in b.chord_cycles(&m) {
                m.check_closed_walk(&c).unwrap();
                let mut seen: Vec<usize> = c.iter().map(|&d| m.origin(d)).collect();
                seen.sort();
                seen.dedup();
                assert_eq!(seen.len(), c.len(), "cycle revisits a vertex");
                m.turning_alpha(&c).unwrap();
            }
        }
    }

    #[test]
    fn sphere_has_one_rep() {
        let g = AbstractGraph::from_edges(3, &[(0, 1), (1, 2), (2, 0)]);
        let m = star_construction(&g, AnglePi::new(1, 3)).unwrap();
        assert_eq!(h1_mod2_reps(&m).unwrap().len(), 1);
        assert_eq!(tree_cotree_basis(&m).unwrap().chords.len(), 1);
    }

    #[test]
    fn rep_counts() {
        assert_eq!(h1_mod2_reps(&torus(2, 3)).unwrap().len(), 4);
        let reps = h1_mod2_reps(&gen_genus2_bouquet()).unwrap();
        assert_eq!(reps.len(), 16);
        let b = tree_cotree_basis(&gen_genus2_bouquet()).unwrap();
        let mut classes: Vec<Vec<bool>> = reps
            .iter()
            .map(|r| b.fundamental_cycles.iter().map(|c| r.exact_holonomy(c).unwrap() == AnglePi::PI).collect())
            .collect();
        classes.sort();
        classes.dedup();
        assert_eq!(classes.len(), 16);
    }

    #[test]
    fn character_holonomy() {
        let m = torus(3, 2);
        let b = tree_cotree_basis(&m).unwrap();
        let z = AnglePi::new(1, 3).cis::<f64>();
        let ch = Character::on_basis(&b, vec![z, Complex64::new(1.0, 0.0)]);
        let phi = character_to_cocycle(&m, &ch).unwrap();
        assert!((phi.holonomy(&b.fundamental_cycles[0]) - z).norm() < 1e-14);
        assert!((phi.holonomy(&b.fundamental_cycles[1]) - 1.0).norm() < 1e-14);
        Cocycle::from_values(&m, phi.values().to_vec()).unwrap();
    }

    #[test]
    fn bouquet_sign_character() {
        let m = gen_genus2_bouquet();
        let b = tree_cotree_basis(&m).unwrap();
        let ph = [AnglePi::PI, AnglePi::ZERO, AnglePi::ZERO, AnglePi::ZERO];
        let phi = character_to_cocycle_exact(&m, &b, &ph).unwrap();
        assert!(phi.phases().unwrap().iter().all(|p| p.scale(2).is_multiple_of_two_pi()));
        assert_eq!(phi.exact_holonomy(&b.fundamental_cycles[0]), Some(AnglePi::PI));
    }

    #[test]
    fn square_kappa_trivial() {
        for (n, k) in [(1, 1), (2, 3)] {
            let m = torus(n, k);
            let kappa = canonical_bundle(&m).unwrap();
            let b = tree_cotree_basis(&m).unwrap();
            assert!(is_cohomologically_trivial(&b, &kappa));
        }
    }

    #[test]
    fn bouquet_kappa() {
        let m = gen_genus2_bouquet();
        let kappa = canonical_bundle(&m).unwrap();
        for loop_dart in [0, 2, 4, 6] {
            let a = m.turning_alpha(&[loop_dart]).unwrap();
            assert!((kappa.exact_holonomy(&[loop_dart]).unwrap() + a).is_multiple_of_two_pi());
        }
        for f in 0..m.face_count() {
            assert!(m.turning_alpha(m.face_darts(f)).unwrap().is_multiple_of_two_pi());
        }
    }

    #[test]
    fn torus_intersection() {
        let m = torus(1, 1);
        let b = tree_cotree_basis(&m).unwrap();
        assert_eq!(intersection_form_mod2(&m, &b.fundamental_cycles).unwrap(), vec![vec![0, 1], vec![1, 0]]);
        let m = torus(3, 4);
        let b = tree_cotree_basis(&m).unwrap();
        assert_eq!(intersection_form_mod2(&m, &b.fundamental_cycles).unwrap(), vec![vec![0, 1], vec![1, 0]]);
    }

    #[test]
    fn bouquet_intersection() {
        let m = gen_genus2_bouquet();
        let b = tree_cotree_basis(&m).unwrap();
        let f = intersection_form_mod2(&m, &b.fundamental_cycles).unwrap();
        assert_eq!(
            f,
            vec![vec![0, 1, 0, 0], vec![1, 0, 0, 0], vec![0, 0, 0, 1], vec![0, 0, 1, 0]]
        );
    }

    #[test]
    fn pushoff_is_symmetric() {
        for m in [torus(3, 3), gen_torus_lattice(LatticeKind::Triangular, 3, 2).unwrap(), gen_genus2_bouquet()] {
            let b = tree_cotree_basis(&m).unwrap();
            let cyc = b.chord_cycles(&m);
            for x in &cyc {
                for y in &cyc {
                    assert_eq!(pushoff_crossings(&m, x, y), pushoff_crossings(&m, y, x));
                }
            }
        }
    }

    #[test]
    fn torus_spin_structures() {
        for m in [
            torus(1, 1),
            torus(3, 2),
            gen_torus_lattice(LatticeKind::Triangular, 2, 2).unwrap(),
            gen_torus_lattice(LatticeKind::Hexagonal, 2, 3).unwrap(),
        ] {
            let ss = spin_structures(&m).unwrap();
            assert_eq!(ss.len(), 4);
            assert_eq!(ss.iter().filter(|s| s.trivial_class).count(), 1);
            for s in &ss {
                assert_eq!(s.arf.arf, if s.trivial_class { 1 } else { 0 });
                assert_eq!(s.arf.gauss_sum.abs(), 2);
            }
        }
    }

    #[test]
    fn bouquet_spin_structures() {
        let m = gen_genus2_bouquet();
        let ss = spin_structures(&m).unwrap();
        assert_eq!(ss.len(), 16);
        assert_eq!(ss.iter().filter(|s| s.arf.gauss_sum == 4).count(), 10);
        assert_eq!(ss.iter().filter(|s| s.arf.gauss_sum == -4).count(), 6);
        let kappa = canonical_bundle(&m).unwrap();
        for s in &ss {
            let p = s.lambda.phases().unwrap();
            for d in 0..m.dart_count() {
                assert!((p[d].scale(2) - kappa.phases().unwrap()[d]).is_multiple_of_two_pi());
            }
            assert_eq!(arf(&m, &s.lambda).unwrap(), s.arf.arf);
        }
    }

    #[test]
    fn winding_on_generator() {
        let m = torus(1, 1);
        let trivial = Cocycle::trivial(4);
        assert_eq!(winding_sign(&m, &trivial, &[0]).unwrap(), 1);
        let b = tree_cotree_basis(&m).unwrap();
        let flip = character_to_cocycle_exact(&m, &b, &[AnglePi::PI, AnglePi::ZERO]).unwrap();
        assert_eq!(winding_sign(&m, &flip, &[0]).unwrap(), -1);
        let quarter = character_to_cocycle_exact(&m, &b, &[AnglePi::HALF_PI, AnglePi::ZERO]).unwrap();
        assert_eq!(winding_sign(&m, &quarter, &[0]), Err(Error::NotPlusMinusOne));
    }

    #[test]
    fn hypotheses_enforced() {
        let g = AbstractGraph::from_edges(3, &[(0, 1), (1, 2), (2, 0)]);
        let m = star_construction(&g, AnglePi::new(1, 3)).unwrap();
        assert!(matches!(spin_structures(&m), Err(Error::HypothesisViolation(_))));
        assert!(matches!(canonical_bundle(&m), Err(Error::HypothesisViolation(_))));
    }

    #[test]
    fn coboundary_keeps_cocycle() {
        let m = torus(2, 2);
        let phi = Cocycle::trivial(m.dart_count());
        let g: Vec<Complex64> = (0..m.vertex_count()).map(|v| Complex64::from_polar(1.0, v as f64)).collect();
        let psi = phi.with_coboundary(&m, &g);
        Cocycle::from_values(&m, psi.values().to_vec()).unwrap();
    }

    #[test]
    fn quad_push_forward() {
        for m in [torus(2, 2), gen_torus_lattice(LatticeKind::Triangular, 2, 2).unwrap(), gen_genus2_bouquet()] {
            let q = m.quad_graph();
            let qb = tree_cotree_basis(&q.map).unwrap();
            let vals: Vec<Complex64> = (0..qb.rank()).map(|i| Complex64::from_polar(1.0, 0.3 + i as f64)).collect();
            let psi = character_to_cocycle(&q.map, &Character::on_basis(&qb, vals)).unwrap();
            let (p, d) = realize_on_primal_and_dual(&m, &q, &psi).unwrap();
            assert_eq!(p.dart_count(), m.dart_count());
            assert_eq!(d.dart_count(), m.dart_count());
        }
    }
}
