//! Simple roots of `T_{a,b,c}` inside `K-perp`, Weyl reflections and orbits,
//! weight coordinates, weight systems of highest-weight modules, and the
//! degree-one divisors they parametrize.

use std::collections::{BTreeSet, HashSet, VecDeque};
use std::fmt;

use num_traits::{One, Signed, Zero};
use serde_json::Value;

use crate::arith::{json_int, Int, Rat};
use crate::error::{Error, Result};
use crate::lattice::{
    anticanonical_class, canonical_class, gram_matrix, pairing_unchecked, DivisorClass,
    LatticeContext,
};
use crate::linalg;

/// Default bound on orbit and weight-system sizes.
pub const DEFAULT_ORBIT_CAP: usize = 1_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum DynkinLabel {
    A(usize),
    D(usize),
    E6,
    E7,
    E8,
    Infinite,
}

impl fmt::Display for DynkinLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DynkinLabel::A(n) => write!(f, "A_{n}"),
            DynkinLabel::D(n) => write!(f, "D_{n}"),
            DynkinLabel::E6 => write!(f, "E_6"),
            DynkinLabel::E7 => write!(f, "E_7"),
            DynkinLabel::E8 => write!(f, "E_8"),
            DynkinLabel::Infinite => write!(f, "INFINITE"),
        }
    }
}

/// `1/a + 1/b + 1/c > 1`, compared exactly.
pub fn is_finite_type(a: u32, b: u32, c: u32) -> bool {
    let (a, b, c) = (a as u64, b as u64, c as u64);
    b * c + a * c + a * b > a * b * c
}

/// Classifies the tree with legs of `a`, `b` and `c` vertices (the center
/// counted in each). Legs of a single vertex are dropped before
/// classification, so `T_{s+1,1,n+1}` is a chain.
pub fn dynkin_label(a: u32, b: u32, c: u32) -> DynkinLabel {
    if !is_finite_type(a, b, c) {
        return DynkinLabel::Infinite;
    }
    let nodes = (a + b + c - 2) as usize;
    let mut arms = [a - 1, b - 1, c - 1];
    arms.sort_unstable();
    match arms {
        [0, _, _] => DynkinLabel::A(nodes),
        [1, 1, _] => DynkinLabel::D(nodes),
        [1, 2, 2] => DynkinLabel::E6,
        [1, 2, 3] => DynkinLabel::E7,
        [1, 2, 4] => DynkinLabel::E8,
        _ => unreachable!("finite type tree {arms:?} not classified"),
    }
}

/// Generalized Cartan matrix `C_ij = <alpha_i, alpha_j^v>`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CartanMatrix(Vec<Vec<i64>>);

impl CartanMatrix {
    pub fn from_rows(rows: Vec<Vec<i64>>) -> Self {
        assert!(rows.iter().all(|r| r.len() == rows.len()));
        Self(rows)
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    pub fn rows(&self) -> &[Vec<i64>] {
        &self.0
    }

    fn reflect(&self, i: usize, mu: &[Int]) -> Vec<Int> {
        let t = &mu[i];
        if t.is_zero() {
            return mu.to_vec();
        }
        mu.iter()
            .zip(&self.0[i])
            .map(|(x, &c)| x - t * Int::from(c))
            .collect()
    }

    /// Positive roots as coefficient vectors on the simple roots.
    pub fn positive_roots(&self, cap: usize) -> Result<Vec<Vec<i64>>> {
        let n = self.rank();
        let mut seen: HashSet<Vec<i64>> = HashSet::new();
        let mut queue = VecDeque::new();
        for i in 0..n {
            let mut v = vec![0; n];
            v[i] = 1;
            seen.insert(v.clone());
            queue.push_back(v);
        }
        while let Some(beta) = queue.pop_front() {
            for i in 0..n {
                // <beta, alpha_i^v>
                let pair: i64 = (0..n).map(|j| beta[j] * self.0[j][i]).sum();
                let mut next = beta.clone();
                next[i] -= pair;
                if seen.insert(next.clone()) {
                    if seen.len() > cap {
                        return Err(Error::CapExceeded {
                            what: "root system",
                            cap,
                        });
                    }
                    queue.push_back(next);
                }
            }
        }
        let mut pos: Vec<_> = seen.into_iter().filter(|v| v.iter().all(|&x| x >= 0)).collect();
        pos.sort();
        Ok(pos)
    }

    /// Weight coordinates of `sum_j n_j alpha_j`.
    fn root_weight(&self, coeffs: &[i64]) -> Vec<Int> {
        (0..self.rank())
            .map(|i| Int::from((0..self.rank()).map(|j| coeffs[j] * self.0[j][i]).sum::<i64>()))
            .collect()
    }

    fn dominant_conjugate(&self, mu: &[Int], cap: usize) -> Result<Vec<Int>> {
        let mut v = mu.to_vec();
        let mut steps = 0;
        while let Some(i) = v.iter().position(|x| x.is_negative()) {
            v = self.reflect(i, &v);
            steps += 1;
            if steps > cap {
                return Err(Error::CapExceeded {
                    what: "dominant conjugate search",
                    cap,
                });
            }
        }
        Ok(v)
    }

    /// Orbit of a weight under the simple reflections.
    pub fn weight_orbit(&self, mu: &Weight, cap: usize) -> Result<BTreeSet<Weight>> {
        let mut seen: HashSet<Vec<Int>> = HashSet::new();
        seen.insert(mu.0.clone());
        let mut queue = VecDeque::from([mu.0.clone()]);
        while let Some(v) = queue.pop_front() {
            for i in 0..self.rank() {
                if v[i].is_zero() {
                    continue;
                }
                let w = self.reflect(i, &v);
                if seen.insert(w.clone()) {
                    if seen.len() > cap {
                        return Err(Error::CapExceeded {
                            what: "weight orbit",
                            cap,
                        });
                    }
                    queue.push_back(w);
                }
            }
        }
        Ok(seen.into_iter().map(Weight).collect())
    }

    /// All weights of the irreducible module with highest weight `lambda`.
    ///
    /// Dominant weights are saturated by root strings: for dominant `mu` and
    /// positive `beta`, every `mu - t beta` with `0 <= t <= <mu, beta^v>` is a
    /// weight. Conjugates of those are folded back to the dominant chamber,
    /// and the union of the W-orbits of the dominant weights found is the
    /// weight system.
    pub fn weight_system(&self, lambda: &Weight, cap: usize) -> Result<BTreeSet<Weight>> {
        if lambda.0.len() != self.rank() {
            return Err(Error::Shape(format!(
                "weight of length {} for rank {}",
                lambda.0.len(),
                self.rank()
            )));
        }
        if lambda.0.iter().any(|x| x.is_negative()) {
            return Err(Error::NotDominant(lambda.to_string()));
        }
        let roots: Vec<(Vec<i64>, Vec<Int>)> = self
            .positive_roots(cap)?
            .into_iter()
            .map(|c| {
                let w = self.root_weight(&c);
                (c, w)
            })
            .collect();
        let mut dominant: BTreeSet<Vec<Int>> = BTreeSet::new();
        dominant.insert(lambda.0.clone());
        let mut queue = VecDeque::from([lambda.0.clone()]);
        while let Some(mu) = queue.pop_front() {
            for (coeffs, beta) in &roots {
                let height: Int = coeffs
                    .iter()
                    .zip(&mu)
                    .map(|(&n, m)| Int::from(n) * m)
                    .sum();
                let mut t = Int::one();
                while t <= height {
                    let nu: Vec<Int> = mu.iter().zip(beta).map(|(m, b)| m - &t * b).collect();
                    let plus = self.dominant_conjugate(&nu, cap)?;
                    if dominant.insert(plus.clone()) {
                        queue.push_back(plus);
                    }
                    t += 1;
                }
            }
        }
        let mut all = BTreeSet::new();
        for mu in dominant {
            all.extend(self.weight_orbit(&Weight(mu), cap)?);
            if all.len() > cap {
                return Err(Error::CapExceeded {
                    what: "weight system",
                    cap,
                });
            }
        }
        Ok(all)
    }
}

/// A weight in the basis of fundamental weights.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Weight(pub Vec<Int>);

impl Weight {
    /// The fundamental weight `omega_i`, 1-based.
    pub fn fundamental(rank: usize, i: usize) -> Self {
        let mut v = vec![Int::zero(); rank];
        v[i - 1] = Int::one();
        Weight(v)
    }

    pub fn coords(&self) -> &[Int] {
        &self.0
    }

    pub fn is_dominant(&self) -> bool {
        self.0.iter().all(|x| !x.is_negative())
    }

    pub fn to_json(&self) -> Value {
        Value::Array(self.0.iter().map(json_int::to_value).collect())
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(Int::to_string).collect();
        write!(f, "[{}]", parts.join(","))
    }
}

/// Simple roots of `T_{a,b,c}` realized in `Pic(X_{a,b,c})`.
#[derive(Clone, Debug)]
pub struct RootSystemData {
    ctx: LatticeContext,
    simple_roots: Vec<DivisorClass>,
    dynkin: DynkinLabel,
}

impl RootSystemData {
    pub fn ctx(&self) -> &LatticeContext {
        &self.ctx
    }

    pub fn simple_roots(&self) -> &[DivisorClass] {
        &self.simple_roots
    }

    /// `alpha_i`, 1-based.
    pub fn root(&self, i: usize) -> &DivisorClass {
        &self.simple_roots[i - 1]
    }

    pub fn dynkin(&self) -> DynkinLabel {
        self.dynkin
    }

    pub fn is_finite(&self) -> bool {
        self.dynkin != DynkinLabel::Infinite
    }

    pub fn rank(&self) -> usize {
        self.simple_roots.len()
    }

    /// `C_ij = -(alpha_i, alpha_j)`; the Mukai form is negative definite on
    /// the root span, so the sign flip gives the usual Cartan matrix.
    pub fn cartan(&self) -> CartanMatrix {
        let rows = self
            .simple_roots
            .iter()
            .map(|x| {
                self.simple_roots
                    .iter()
                    .map(|y| {
                        let v: Int = -pairing_unchecked(x, y);
                        i64::try_from(v).expect("Cartan entries are tiny")
                    })
                    .collect()
            })
            .collect();
        CartanMatrix(rows)
    }

    fn require_finite(&self) -> Result<()> {
        if self.is_finite() {
            Ok(())
        } else {
            Err(Error::InfiniteType {
                a: self.ctx.a(),
                b: self.ctx.b(),
                c: self.ctx.c(),
            })
        }
    }

    /// `omega_{r-1}`, the weight of `E_r`.
    pub fn exceptional_weight(&self) -> Weight {
        Weight::fundamental(self.rank(), self.ctx.r() - 1)
    }
}

/// `alpha_i = E_i - E_{i+1}` (i < r), `alpha_r = H_1 - E_1 - .. - E_c`,
/// `alpha_{r+j} = H_{j+1} - H_j`.
///
/// The hyperplane roots are oriented so that adjacent roots pair to `+1`
/// throughout, which keeps `-(alpha_i, alpha_j)` a Cartan matrix.
pub fn simple_roots(ctx: &LatticeContext) -> RootSystemData {
    let r = ctx.r();
    let mut roots = Vec::with_capacity(ctx.a() as usize + r - 2);
    for i in 1..r {
        roots.push(&ctx.exceptional(i) - &ctx.exceptional(i + 1));
    }
    let mut alpha_r = ctx.hyperplane(1);
    for j in 1..=ctx.c() as usize {
        alpha_r = &alpha_r - &ctx.exceptional(j);
    }
    roots.push(alpha_r);
    for j in 1..ctx.factors() {
        roots.push(&ctx.hyperplane(j + 1) - &ctx.hyperplane(j));
    }
    RootSystemData {
        ctx: *ctx,
        simple_roots: roots,
        dynkin: dynkin_label(ctx.a(), ctx.b(), ctx.c()),
    }
}

/// Reflection in a root of norm -2: `D + (D, alpha) alpha`.
pub fn reflect(alpha: &DivisorClass, d: &DivisorClass) -> Result<DivisorClass> {
    let norm = crate::lattice::pairing(alpha, alpha)?;
    if norm != Int::from(-2) {
        return Err(Error::NotARoot(norm.to_string()));
    }
    let t = crate::lattice::pairing(d, alpha)?;
    Ok(d + &(alpha * &t))
}

/// Closure of `D` under the simple reflections, sorted by `(h, m)`.
pub fn weyl_orbit(d: &DivisorClass, rs: &RootSystemData, cap: usize) -> Result<Vec<DivisorClass>> {
    if d.ctx() != rs.ctx() {
        return Err(Error::ContextMismatch(d.ctx().to_string(), rs.ctx().to_string()));
    }
    let mut seen: HashSet<DivisorClass> = HashSet::new();
    seen.insert(d.clone());
    let mut queue = VecDeque::from([d.clone()]);
    while let Some(x) = queue.pop_front() {
        for alpha in &rs.simple_roots {
            let t = pairing_unchecked(&x, alpha);
            if t.is_zero() {
                continue;
            }
            let y = &x + &(alpha * &t);
            if !seen.contains(&y) {
                if seen.len() >= cap {
                    return Err(Error::CapExceeded {
                        what: "Weyl orbit",
                        cap,
                    });
                }
                seen.insert(y.clone());
                queue.push_back(y);
            }
        }
    }
    let mut out: Vec<_> = seen.into_iter().collect();
    out.sort_by(|x, y| x.sort_key().cmp(&y.sort_key()));
    Ok(out)
}

/// `(D, alpha_j)` for every simple root: the fundamental-weight expansion of
/// the projection of `D` to `K-perp`.
pub fn weight_coords(d: &DivisorClass, rs: &RootSystemData) -> Weight {
    Weight(rs.simple_roots.iter().map(|a| pairing_unchecked(d, a)).collect())
}

/// The orthogonal projection `D - ((D,K)/(K,K)) K`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Projection {
    /// Coefficients on `(H_1.., E_1..)` over `Q`.
    pub coeffs: Vec<Rat>,
    pub weight: Weight,
}

pub fn project_to_kperp(d: &DivisorClass, rs: &RootSystemData) -> Result<Projection> {
    let k = canonical_class(d.ctx());
    let kk = pairing_unchecked(&k, &k);
    if kk.is_zero() {
        return Err(Error::IsotropicCanonical);
    }
    let t = Rat::new(pairing_unchecked(d, &k), kk);
    let coeffs = d
        .basis_coeffs()
        .into_iter()
        .zip(k.basis_coeffs())
        .map(|(x, kx)| Rat::from_integer(x) - &t * Rat::from_integer(kx))
        .collect();
    Ok(Projection {
        coeffs,
        weight: weight_coords(d, rs),
    })
}

pub fn weights_of_irrep(lambda: &Weight, rs: &RootSystemData, cap: usize) -> Result<BTreeSet<Weight>> {
    rs.require_finite()?;
    rs.cartan().weight_system(lambda, cap)
}

/// Whether `L_{omega_{r-1}}` has no weights outside `W . omega_{r-1}`.
pub fn is_minuscule(ctx: &LatticeContext, cap: usize) -> Result<bool> {
    let rs = simple_roots(ctx);
    rs.require_finite()?;
    let lambda = rs.exceptional_weight();
    let cartan = rs.cartan();
    let weights = cartan.weight_system(&lambda, cap)?;
    let orbit = cartan.weight_orbit(&lambda, cap)?;
    Ok(weights == orbit)
}

/// Integral classes of degree one whose weight lies in the weight system of
/// `L_{omega_{r-1}}`, sorted by `(h, m)`.
pub fn degree_one_divisors(ctx: &LatticeContext, cap: usize) -> Result<Vec<DivisorClass>> {
    let rs = simple_roots(ctx);
    rs.require_finite()?;
    let k = canonical_class(ctx);
    if pairing_unchecked(&k, &k).is_zero() {
        return Err(Error::IsotropicCanonical);
    }
    let weights = rs.cartan().weight_system(&rs.exceptional_weight(), cap)?;
    let solver = DegreeSolver::new(&rs);
    let mut out: Vec<DivisorClass> = weights
        .iter()
        .filter_map(|mu| solver.integral_class(mu, 1))
        .collect();
    out.sort_by(|x, y| x.sort_key().cmp(&y.sort_key()));
    Ok(out)
}

/// Recovers a class from its weight coordinates and its degree. Solves the
/// linear system once per basis vector and combines.
pub(crate) struct DegreeSolver {
    ctx: LatticeContext,
    per_weight: Vec<Vec<Rat>>,
    per_degree: Vec<Rat>,
}

impl DegreeSolver {
    pub(crate) fn new(rs: &RootSystemData) -> Self {
        let ctx = *rs.ctx();
        let gram = gram_matrix(&ctx);
        let functional = |d: &DivisorClass| -> Vec<Rat> {
            let v = d.basis_coeffs();
            (0..ctx.rank())
                .map(|j| Rat::from_integer((0..ctx.rank()).map(|i| &v[i] * &gram[i][j]).sum()))
                .collect()
        };
        let mut rows: Vec<Vec<Rat>> = rs.simple_roots.iter().map(functional).collect();
        rows.push(functional(&anticanonical_class(&ctx)));
        let n = ctx.rank();
        let unit = |i: usize| -> Vec<Rat> {
            (0..n)
                .map(|j| if i == j { Rat::one() } else { Rat::zero() })
                .collect()
        };
        let per_weight = (0..n - 1)
            .map(|j| linalg::solve(&rows, &unit(j)).expect("form is nondegenerate"))
            .collect();
        let kappa = Rat::from_integer(Int::from(ctx.kappa()));
        let per_degree = linalg::solve(&rows, &unit(n - 1))
            .expect("form is nondegenerate")
            .into_iter()
            .map(|x| x * &kappa)
            .collect();
        Self {
            ctx,
            per_weight,
            per_degree,
        }
    }

    /// The unique rational class with the given weight and degree, if
    /// integral.
    pub(crate) fn integral_class(&self, mu: &Weight, degree: i64) -> Option<DivisorClass> {
        let deg = Rat::from_integer(Int::from(degree));
        let mut coeffs: Vec<Rat> = self.per_degree.iter().map(|x| x * &deg).collect();
        for (m, sol) in mu.0.iter().zip(&self.per_weight) {
            if m.is_zero() {
                continue;
            }
            let m = Rat::from_integer(m.clone());
            for (c, s) in coeffs.iter_mut().zip(sol) {
                *c += &m * s;
            }
        }
        if coeffs.iter().all(|c| c.is_integer()) {
            let ints: Vec<Int> = coeffs.into_iter().map(|c| c.to_integer()).collect();
            Some(DivisorClass::from_basis_coeffs(self.ctx, &ints))
        } else {
            None
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{degree, pairing};
    use proptest::prelude::*;

    fn ctx(a: u32, b: u32, c: u32) -> LatticeContext {
        LatticeContext::new(a, b, c).unwrap()
    }

    /// Shape of the Dynkin graph read directly from the Gram matrix of the
    /// simple roots: sorted arm lengths hanging off the branch vertex.
    fn arms_from_gram(rs: &RootSystemData) -> Vec<usize> {
        let n = rs.rank();
        let adj: Vec<Vec<usize>> = (0..n)
            .map(|i| {
                (0..n)
                    .filter(|&j| j != i && pairing(rs.root(i + 1), rs.root(j + 1)).unwrap() == Int::one())
                    .collect()
            })
            .collect();
        let center = (0..n).find(|&i| adj[i].len() == 3);
        let Some(center) = center else {
            return vec![n];
        };
        let mut arms: Vec<usize> = adj[center]
            .iter()
            .map(|&start| {
                let (mut prev, mut cur, mut len) = (center, start, 1);
                loop {
                    let next: Vec<_> = adj[cur].iter().filter(|&&x| x != prev).collect();
                    match next.as_slice() {
                        [] => break len,
                        [&x] => {
                            prev = cur;
                            cur = x;
                            len += 1;
                        }
                        _ => panic!("second branch point"),
                    }
                }
            })
            .collect();
        arms.sort();
        arms
    }

    #[test]
    fn simple_root_list() {
        let x = ctx(2, 2, 3);
        let rs = simple_roots(&x);
        assert_eq!(rs.rank(), 5);
        let a5 = DivisorClass::from_ints(x, &[1], &[1, 1, 1, 0, 0]).unwrap();
        assert_eq!(rs.root(5), &a5);
        assert_eq!(pairing(rs.root(1), rs.root(2)).unwrap(), Int::one());
        let y = ctx(3, 2, 3);
        let rs = simple_roots(&y);
        assert_eq!(rs.rank(), 6);
        assert_eq!(rs.root(6), &(&y.hyperplane(2) - &y.hyperplane(1)));
    }

    #[test]
    fn roots_realize_the_tree() {
        for (a, b, c) in [(2, 2, 3), (2, 3, 3), (2, 3, 4), (2, 3, 5), (3, 2, 3), (3, 2, 5), (4, 2, 3), (2, 5, 4)] {
            let x = ctx(a, b, c);
            let rs = simple_roots(&x);
            let k = canonical_class(&x);
            for i in 1..=rs.rank() {
                assert_eq!(pairing(rs.root(i), rs.root(i)).unwrap(), Int::from(-2));
                assert!(pairing(rs.root(i), &k).unwrap().is_zero());
                for j in 1..=rs.rank() {
                    if i != j {
                        let p = pairing(rs.root(i), rs.root(j)).unwrap();
                        assert!(p.is_zero() || p.is_one());
                    }
                }
            }
            let mut expect = vec![a as usize - 1, b as usize - 1, c as usize - 1];
            expect.sort();
            assert_eq!(arms_from_gram(&rs), expect, "T_{a},{b},{c}");
        }
    }

    #[test]
    fn finite_type() {
        assert!(is_finite_type(2, 2, 5));
        assert!(!is_finite_type(3, 3, 3));
        assert!(is_finite_type(2, 3, 5));
        assert!(!is_finite_type(2, 3, 6));
        assert!(!is_finite_type(2, 4, 4));
    }

    #[test]
    fn labels() {
        assert_eq!(dynkin_label(2, 2, 3), DynkinLabel::D(5));
        assert_eq!(dynkin_label(2, 2, 6), DynkinLabel::D(8));
        assert_eq!(dynkin_label(2, 3, 3), DynkinLabel::E6);
        assert_eq!(dynkin_label(2, 3, 4), DynkinLabel::E7);
        assert_eq!(dynkin_label(2, 4, 3), DynkinLabel::E7);
        assert_eq!(dynkin_label(2, 3, 5), DynkinLabel::E8);
        assert_eq!(dynkin_label(3, 1, 4), DynkinLabel::A(6));
        assert_eq!(dynkin_label(2, 1, 3), DynkinLabel::A(4));
        assert_eq!(dynkin_label(3, 3, 3), DynkinLabel::Infinite);
        assert_eq!(DynkinLabel::E6.to_string(), "E_6");
    }

    #[test]
    fn reflections() {
        let x = ctx(2, 2, 3);
        let rs = simple_roots(&x);
        assert_eq!(reflect(rs.root(1), &x.exceptional(1)).unwrap(), x.exceptional(2));
        let quad = DivisorClass::from_ints(x, &[2], &[1, 1, 1, 0, 0]).unwrap();
        assert_eq!(reflect(rs.root(5), &x.hyperplane(1)).unwrap(), quad);
        let k = canonical_class(&x);
        for a in rs.simple_roots() {
            assert_eq!(reflect(a, &k).unwrap(), k);
        }
        assert!(matches!(
            reflect(&x.hyperplane(1), &k),
            Err(Error::NotARoot(_))
        ));
    }

    #[test]
    fn orbit_counts() {
        for ((a, b, c), n) in [((2, 2, 3), 16), ((2, 3, 3), 27), ((3, 1, 4), 35), ((2, 4, 3), 56), ((2, 1, 3), 10)] {
            let x = ctx(a, b, c);
            let rs = simple_roots(&x);
            let orbit = weyl_orbit(&x.exceptional(x.r()), &rs, DEFAULT_ORBIT_CAP).unwrap();
            assert_eq!(orbit.len(), n, "({a},{b},{c})");
            assert!(orbit.windows(2).all(|w| w[0].sort_key() < w[1].sort_key()));
        }
    }

    #[test]
    fn orbit_cap_guards_infinite_type() {
        let x = ctx(3, 3, 3);
        let rs = simple_roots(&x);
        let err = weyl_orbit(&x.exceptional(6), &rs, 500).unwrap_err();
        assert!(err.is_cap());
    }

    #[test]
    fn projections() {
        let x = ctx(2, 2, 3);
        let rs = simple_roots(&x);
        let k = canonical_class(&x);
        let p = project_to_kperp(&k, &rs).unwrap();
        assert!(p.coeffs.iter().all(Zero::is_zero));
        assert!(p.weight.0.iter().all(Zero::is_zero));
        assert_eq!(weight_coords(&x.exceptional(5), &rs), Weight::fundamental(5, 4));
        let row: Vec<Int> = (1..=5).map(|j| pairing(rs.root(1), rs.root(j)).unwrap()).collect();
        assert_eq!(weight_coords(rs.root(1), &rs).0, row);
        // The projection pairs with roots exactly like D does.
        let d = DivisorClass::from_ints(x, &[3], &[2, 0, 1, -1, 4]).unwrap();
        let p = project_to_kperp(&d, &rs).unwrap();
        let gram = gram_matrix(&x);
        for (j, a) in rs.simple_roots().iter().enumerate() {
            let av = a.basis_coeffs();
            let s: Rat = (0..x.rank())
                .flat_map(|u| (0..x.rank()).map(move |v| (u, v)))
                .map(|(u, v)| &p.coeffs[u] * Rat::from_integer(&gram[u][v] * &av[v]))
                .sum();
            assert_eq!(s, Rat::from_integer(p.weight.0[j].clone()));
        }
    }

    #[test]
    fn weight_systems() {
        let a1 = CartanMatrix::from_rows(vec![vec![2]]);
        let ws = a1.weight_system(&Weight(vec![Int::from(2)]), 100).unwrap();
        let got: Vec<Int> = ws.into_iter().map(|w| w.0[0].clone()).collect();
        assert_eq!(got, vec![Int::from(-2), Int::from(0), Int::from(2)]);

        let x = ctx(2, 2, 3);
        let rs = simple_roots(&x);
        let half_spin = weights_of_irrep(&rs.exceptional_weight(), &rs, DEFAULT_ORBIT_CAP).unwrap();
        assert_eq!(half_spin.len(), 16);

        // E_7 adjoint: 126 roots plus zero.
        let y = ctx(2, 3, 4);
        let rs = simple_roots(&y);
        let ws = weights_of_irrep(&rs.exceptional_weight(), &rs, DEFAULT_ORBIT_CAP).unwrap();
        let orbit = weyl_orbit(&y.exceptional(7), &rs, DEFAULT_ORBIT_CAP).unwrap();
        assert_eq!(orbit.len(), 126);
        assert_eq!(ws.len(), 127);
        assert!(ws.len() > orbit.len());

        let bad = Weight(vec![Int::from(-1); 5]);
        let rs = simple_roots(&x);
        assert!(matches!(weights_of_irrep(&bad, &rs, 10), Err(Error::NotDominant(_))));
        assert!(weights_of_irrep(&Weight::fundamental(7, 1), &simple_roots(&ctx(3, 3, 3)), 10).is_err());
    }

    #[test]
    fn a3_adjoint_matches_known_count() {
        // sl_4 adjoint: 12 roots plus zero.
        let a3 = CartanMatrix::from_rows(vec![vec![2, -1, 0], vec![-1, 2, -1], vec![0, -1, 2]]);
        let hw = Weight(vec![Int::one(), Int::zero(), Int::one()]);
        assert_eq!(a3.weight_system(&hw, 100).unwrap().len(), 13);
    }

    #[test]
    fn minuscule_cases() {
        assert!(is_minuscule(&ctx(2, 2, 4), DEFAULT_ORBIT_CAP).unwrap());
        assert!(!is_minuscule(&ctx(2, 3, 4), DEFAULT_ORBIT_CAP).unwrap());
        assert!(is_minuscule(&ctx(3, 1, 4), DEFAULT_ORBIT_CAP).unwrap());
        assert!(is_minuscule(&ctx(2, 3, 3), DEFAULT_ORBIT_CAP).unwrap());
    }

    #[test]
    fn degree_one_in_d5() {
        let x = ctx(2, 2, 3);
        let ones = degree_one_divisors(&x, DEFAULT_ORBIT_CAP).unwrap();
        assert_eq!(ones.len(), 16);
        let exceptional = ones.iter().filter(|d| d.h()[0].is_zero()).count();
        let lines = ones.iter().filter(|d| d.h()[0].is_one()).count();
        let conics = ones.iter().filter(|d| d.h()[0] == Int::from(2)).count();
        assert_eq!((exceptional, lines, conics), (5, 10, 1));
        for d in &ones {
            assert_eq!(degree(d).unwrap(), Rat::one());
        }
        let orbit = weyl_orbit(&x.exceptional(5), &simple_roots(&x), DEFAULT_ORBIT_CAP).unwrap();
        assert_eq!(orbit, ones);
        assert_eq!(degree_one_divisors(&ctx(2, 3, 3), DEFAULT_ORBIT_CAP).unwrap().len(), 27);
    }

    fn arb_class(x: LatticeContext) -> impl Strategy<Value = DivisorClass> {
        (
            prop::collection::vec(-5i64..6, x.factors()),
            prop::collection::vec(-5i64..6, x.r()),
        )
            .prop_map(move |(h, m)| DivisorClass::from_ints(x, &h, &m).unwrap())
    }

    proptest! {
        #[test]
        fn reflections_are_isometric_involutions(
            (d1, d2) in (arb_class(ctx(3, 2, 3)), arb_class(ctx(3, 2, 3))),
            i in 1usize..7,
        ) {
            let rs = simple_roots(&ctx(3, 2, 3));
            let a = rs.root(i);
            let r1 = reflect(a, &d1).unwrap();
            let r2 = reflect(a, &d2).unwrap();
            prop_assert_eq!(pairing(&r1, &r2).unwrap(), pairing(&d1, &d2).unwrap());
            prop_assert_eq!(reflect(a, &r1).unwrap(), d1.clone());
            prop_assert_eq!(degree(&r1).unwrap(), degree(&d1).unwrap());
        }

        #[test]
        fn weights_ignore_the_canonical_line(d in arb_class(ctx(2, 3, 3)), t in -4i64..5) {
            let x = ctx(2, 3, 3);
            let rs = simple_roots(&x);
            let shifted = &d + &(&canonical_class(&x) * t);
            prop_assert_eq!(weight_coords(&shifted, &rs), weight_coords(&d, &rs));
        }
    }
}
