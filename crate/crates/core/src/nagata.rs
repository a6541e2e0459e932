//! The determinant invariants `F_I`, the invariants `J`, the additive-group
//! action `y_i -> y_i + (t_1 + a_i t_2) x_i`, and torus gradings.

use std::collections::HashMap;

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::arith::{format_rat, parse_rat, Int, Rat};
use crate::blowup::subsets;
use crate::error::{Error, Result};
use crate::lattice::{DivisorClass, LatticeContext};
use crate::linalg;
use crate::poly::{Monomial, MultiPoly, Vars};

/// Distinct parameters `a_1..a_r` and the ring `Q[x_1..x_r, y_1..y_r, t_1, t_2]`.
#[derive(Clone, Debug)]
pub struct NagataParams {
    params: Vec<Rat>,
    vars: Vars,
}

impl PartialEq for NagataParams {
    fn eq(&self, other: &Self) -> bool {
        self.params == other.params
    }
}

impl Eq for NagataParams {}

impl NagataParams {
    pub fn new(params: Vec<Rat>) -> Result<Self> {
        let r = params.len();
        if r < 5 {
            return Err(Error::Precondition(format!("need r >= 5 parameters, got {r}")));
        }
        for i in 0..r {
            for j in i + 1..r {
                if params[i] == params[j] {
                    return Err(Error::CollidingParams { i: i + 1, j: j + 1 });
                }
            }
        }
        let mut names: Vec<String> = (1..=r).map(|i| format!("x{i}")).collect();
        names.extend((1..=r).map(|i| format!("y{i}")));
        names.push("t1".into());
        names.push("t2".into());
        Ok(Self {
            params,
            vars: names.into(),
        })
    }

    /// `a_i = i`.
    pub fn standard(r: usize) -> Result<Self> {
        Self::new((1..=r as i64).map(|a| Rat::from_integer(a.into())).collect())
    }

    pub fn seeded(r: usize, seed: u64) -> Result<Self> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut params: Vec<Rat> = Vec::with_capacity(r);
        while params.len() < r {
            let p: i64 = rng.gen_range(-40..=40);
            let q: i64 = rng.gen_range(1..=9);
            let a = Rat::new(p.into(), q.into());
            if !params.contains(&a) {
                params.push(a);
            }
        }
        Self::new(params)
    }

    pub fn r(&self) -> usize {
        self.params.len()
    }

    pub fn params(&self) -> &[Rat] {
        &self.params
    }

    pub fn vars(&self) -> &Vars {
        &self.vars
    }

    /// Index of `x_i`, 1-based `i`.
    pub fn x(&self, i: usize) -> usize {
        i - 1
    }

    pub fn y(&self, i: usize) -> usize {
        self.r() + i - 1
    }

    pub fn t1(&self) -> usize {
        2 * self.r()
    }

    pub fn t2(&self) -> usize {
        2 * self.r() + 1
    }

    pub fn var(&self, idx: usize) -> MultiPoly {
        MultiPoly::var(&self.vars, idx)
    }

    pub fn to_json(&self) -> Value {
        json!({"r": self.r(), "params": self.params.iter().map(format_rat).collect::<Vec<_>>()})
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        match v.get("params") {
            Some(Value::Array(ps)) => Self::new(
                ps.iter()
                    .map(|p| match p {
                        Value::String(s) => parse_rat(s),
                        Value::Number(x) => parse_rat(&x.to_string()),
                        _ => Err(Error::Parse("parameters must be rationals".into())),
                    })
                    .collect::<Result<_>>()?,
            ),
            _ => {
                let r = v
                    .get("r")
                    .and_then(Value::as_u64)
                    .ok_or_else(|| Error::Parse("need \"params\" or \"r\"".into()))?;
                Self::standard(r as usize)
            }
        }
    }
}

/// All odd subsets of `1..=r`, by size then lexicographic.
pub fn odd_subsets(r: usize) -> Vec<Vec<usize>> {
    (1..=r).step_by(2).flat_map(|k| subsets(r, k)).collect()
}

fn check_index_set(set: &[usize], np: &NagataParams) -> Result<()> {
    if set.len() % 2 == 0 {
        return Err(Error::EvenIndexSet(set.len()));
    }
    if set.iter().any(|&i| i == 0 || i > np.r()) {
        return Err(Error::Precondition(format!("indices must lie in 1..={}", np.r())));
    }
    if set.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Precondition("indices must be strictly increasing".into()));
    }
    Ok(())
}

/// Entry `(row, col)` of the matrix of `F_I` as a coefficient and a variable.
fn entry(set: &[usize], np: &NagataParams, row: usize, col: usize) -> (Rat, usize) {
    let k = set.len() / 2;
    let i = set[col];
    let a = &np.params[i - 1];
    if row <= k {
        (num_traits::pow(a.clone(), row), np.x(i))
    } else {
        (num_traits::pow(a.clone(), row - k - 1), np.y(i))
    }
}

/// The determinant with rows `a_i^j x_i` (`j = 0..k`) and `a_i^j y_i`
/// (`j = 0..k-1`) over the columns `i in I`, `|I| = 2k + 1`.
pub fn build_f(set: &[usize], np: &NagataParams) -> Result<MultiPoly> {
    check_index_set(set, np)?;
    let size = set.len();
    let nvars = np.vars.len();
    let mut memo: HashMap<u32, MultiPoly> = HashMap::new();

    fn minor(
        row: usize,
        mask: u32,
        size: usize,
        set: &[usize],
        np: &NagataParams,
        nvars: usize,
        memo: &mut HashMap<u32, MultiPoly>,
    ) -> MultiPoly {
        if row == size {
            return MultiPoly::one(&np.vars);
        }
        if let Some(p) = memo.get(&mask) {
            return p.clone();
        }
        let mut acc = MultiPoly::zero(&np.vars);
        let mut pos = 0;
        for col in 0..size {
            if mask & (1 << col) == 0 {
                continue;
            }
            let (c, v) = entry(set, np, row, col);
            if !c.is_zero() {
                let sub = minor(row + 1, mask & !(1 << col), size, set, np, nvars, memo);
                let c = if pos % 2 == 0 { c } else { -c };
                acc = &acc + &sub.mul_monomial(&Monomial::var(nvars, v), &c);
            }
            pos += 1;
        }
        memo.insert(mask, acc.clone());
        acc
    }

    Ok(minor(0, (1u32 << size) - 1, size, set, np, nvars, &mut memo))
}

/// `P` with `y_i -> y_i + (t_1 + a_i t_2) x_i`.
pub fn nagata_substitute(p: &MultiPoly, np: &NagataParams) -> Result<MultiPoly> {
    check_ring(p, np)?;
    if p.terms().any(|(m, _)| m.exps()[np.t1()] > 0 || m.exps()[np.t2()] > 0) {
        return Err(Error::Precondition("polynomial already involves t1 or t2".into()));
    }
    let images: Vec<MultiPoly> = (0..np.vars.len())
        .map(|v| {
            if v >= np.r() && v < 2 * np.r() {
                let i = v - np.r() + 1;
                let shift = &np.var(np.t1()) + &np.var(np.t2()).scale(&np.params[i - 1]);
                &np.var(v) + &(&shift * &np.var(np.x(i)))
            } else {
                np.var(v)
            }
        })
        .collect();
    Ok(p.substitute(&images, &np.vars))
}

pub fn is_invariant(p: &MultiPoly, np: &NagataParams) -> Result<bool> {
    Ok((&nagata_substitute(p, np)? - p).is_zero())
}

fn check_ring(p: &MultiPoly, np: &NagataParams) -> Result<()> {
    if **p.vars() != *np.vars {
        return Err(Error::VariableMismatch);
    }
    Ok(())
}

/// Joint degree in each pair `(x_i, y_i)` and the total `x`- and `y`-degrees.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TorusWeight {
    pub w: Vec<u32>,
    pub deg_x: u32,
    pub deg_y: u32,
}

impl TorusWeight {
    pub fn to_json(&self) -> Value {
        json!({"w": self.w, "deg_x": self.deg_x, "deg_y": self.deg_y})
    }
}

pub fn torus_weight(p: &MultiPoly, np: &NagataParams) -> Result<TorusWeight> {
    check_ring(p, np)?;
    let r = np.r();
    let mut out: Option<TorusWeight> = None;
    for (m, _) in p.terms() {
        let e = m.exps();
        if e[np.t1()] > 0 || e[np.t2()] > 0 {
            return Err(Error::Precondition("torus weights are defined without t1, t2".into()));
        }
        let w: Vec<u32> = (1..=r).map(|i| e[np.x(i)] + e[np.y(i)]).collect();
        let deg_x: u32 = e[..r].iter().sum();
        let deg_y: u32 = e[r..2 * r].iter().sum();
        match &out {
            None => out = Some(TorusWeight { w, deg_x, deg_y }),
            Some(prev) => {
                if let Some(i) = (0..r).find(|&i| prev.w[i] != w[i]) {
                    return Err(Error::NotHomogeneous { index: i + 1 });
                }
                if prev.deg_x != deg_x || prev.deg_y != deg_y {
                    return Err(Error::NotBihomogeneous);
                }
            }
        }
    }
    out.ok_or(Error::ZeroPolynomial)
}

/// `d = deg_y`, `m_i = d - w_i` on `Bl_{n+3} P^n`, for invariant `P`.
pub fn divisor_class_of(p: &MultiPoly, np: &NagataParams) -> Result<DivisorClass> {
    let tw = torus_weight(p, np)?;
    if !is_invariant(p, np)? {
        return Err(Error::NotInvariant);
    }
    let n = np.r() - 3;
    let ctx = LatticeContext::blowup(n, np.r())?;
    let d = Int::from(tw.deg_y);
    let m: Vec<Int> = tw.w.iter().map(|&w| &d - Int::from(w)).collect();
    let sum_m: Int = m.iter().sum();
    if Int::from(tw.deg_x) != Int::from(n + 2) * &d - sum_m {
        return Err(Error::NotBihomogeneous);
    }
    DivisorClass::new(ctx, vec![d], m)
}

/// `J = sum_i c_i y_i prod_{j != i} x_j` for the reduced basis of
/// `{c : sum c_i = 0, sum c_i a_i = 0}`.
pub fn build_j(np: &NagataParams) -> Vec<MultiPoly> {
    let r = np.r();
    let rows = vec![vec![Rat::one(); r], np.params.clone()];
    linalg::kernel(&rows, r)
        .into_iter()
        .map(|c| {
            let mut acc = MultiPoly::zero(&np.vars);
            for (i, ci) in c.iter().enumerate() {
                if ci.is_zero() {
                    continue;
                }
                let mut exps = vec![0u32; np.vars.len()];
                for j in 1..=r {
                    if j != i + 1 {
                        exps[np.x(j)] = 1;
                    }
                }
                exps[np.y(i + 1)] = 1;
                acc.add_term(Monomial::new(exps), ci.clone());
            }
            acc
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;
    use crate::blowup::{minimal_divisor, BlowupContext};
    use crate::lattice::degree;

    fn leibniz(set: &[usize], np: &NagataParams) -> MultiPoly {
        fn perms(n: usize) -> Vec<Vec<usize>> {
            if n == 0 {
                return vec![vec![]];
            }
            let mut out = Vec::new();
            for p in perms(n - 1) {
                for pos in 0..=p.len() {
                    let mut q = p.clone();
                    q.insert(pos, n - 1);
                    out.push(q);
                }
            }
            out
        }
        let size = set.len();
        let mut acc = MultiPoly::zero(np.vars());
        for p in perms(size) {
            let inversions = (0..size)
                .flat_map(|i| (i + 1..size).map(move |j| (i, j)))
                .filter(|&(i, j)| p[i] > p[j])
                .count();
            let mut term = MultiPoly::one(np.vars());
            for (row, &col) in p.iter().enumerate() {
                let (c, v) = entry(set, np, row, col);
                term = &term * &np.var(v).scale(&c);
            }
            acc = if inversions % 2 == 0 { &acc + &term } else { &acc - &term };
        }
        acc
    }

    #[test]
    fn small_determinants() {
        let np = NagataParams::standard(5).unwrap();
        assert_eq!(build_f(&[2], &np).unwrap(), np.var(np.x(2)));
        let f = build_f(&[1, 2, 3], &np).unwrap();
        assert_eq!(f, leibniz(&[1, 2, 3], &np));
        assert!(matches!(build_f(&[1, 2], &np), Err(Error::EvenIndexSet(2))));
        assert!(build_f(&[1, 9, 3], &np).is_err());
        for set in odd_subsets(5) {
            assert_eq!(build_f(&set, &np).unwrap(), leibniz(&set, &np));
        }
        let np = NagataParams::seeded(6, 3).unwrap();
        for set in odd_subsets(6).into_iter().filter(|s| s.len() <= 5) {
            assert_eq!(build_f(&set, &np).unwrap(), leibniz(&set, &np));
        }
    }

    #[test]
    fn substitution_examples() {
        let np = NagataParams::standard(5).unwrap();
        let y1 = np.var(np.y(1));
        let x1 = np.var(np.x(1));
        let expect = &(&y1 + &(&np.var(np.t1()) * &x1)) + &(&np.var(np.t2()) * &x1);
        assert_eq!(nagata_substitute(&y1, &np).unwrap(), expect);
        assert_eq!(nagata_substitute(&x1, &np).unwrap(), x1);
        assert!(!is_invariant(&y1, &np).unwrap());
        let x2 = np.var(np.x(2));
        let y2 = np.var(np.y(2));
        let wedge = &(&x1 * &y2) - &(&x2 * &y1);
        assert!(!is_invariant(&wedge, &np).unwrap());
        let f = build_f(&[1, 2, 3], &np).unwrap();
        assert!(is_invariant(&f, &np).unwrap());
        let t = np.var(np.t1());
        assert!(nagata_substitute(&t, &np).is_err());
    }

    #[test]
    fn all_determinants_are_invariant() {
        for r in [5, 6] {
            for np in [NagataParams::standard(r).unwrap(), NagataParams::seeded(r, 1).unwrap()] {
                let sets = odd_subsets(r);
                assert_eq!(sets.len(), 1 << (r - 1));
                for set in sets {
                    assert!(is_invariant(&build_f(&set, &np).unwrap(), &np).unwrap());
                }
            }
        }
    }

    #[test]
    fn weights_and_classes() {
        let np = NagataParams::standard(6).unwrap();
        let bc = BlowupContext::new(3, 6).unwrap();
        for set in odd_subsets(6) {
            let f = build_f(&set, &np).unwrap();
            let tw = torus_weight(&f, &np).unwrap();
            let k = set.len() / 2;
            assert_eq!(tw.deg_x as usize, k + 1);
            assert_eq!(tw.deg_y as usize, k);
            for i in 1..=6 {
                assert_eq!(tw.w[i - 1], u32::from(set.contains(&i)));
            }
            let class = divisor_class_of(&f, &np).unwrap();
            assert_eq!(degree(&class).unwrap(), Rat::one());
            if set.len() == 1 {
                assert_eq!(class, bc.lattice().exceptional(set[0]));
            } else {
                let complement: Vec<usize> = (1..=6).filter(|i| !set.contains(i)).collect();
                assert_eq!(class, minimal_divisor(&bc, k, &complement));
            }
        }
        let x1 = np.var(np.x(1));
        assert_eq!(
            torus_weight(&x1, &np).unwrap(),
            TorusWeight { w: vec![1, 0, 0, 0, 0, 0], deg_x: 1, deg_y: 0 }
        );
        let mixed = &x1 + &np.var(np.x(2));
        assert!(matches!(torus_weight(&mixed, &np), Err(Error::NotHomogeneous { index: 1 })));
        let uneven = &(&x1 * &np.var(np.x(1))) + &(&x1 * &np.var(np.y(1)));
        assert!(matches!(torus_weight(&uneven, &np), Err(Error::NotBihomogeneous)));
        assert!(matches!(divisor_class_of(&np.var(np.y(1)), &np), Err(Error::NotInvariant)));
        assert!(matches!(torus_weight(&MultiPoly::zero(np.vars()), &np), Err(Error::ZeroPolynomial)));
    }

    #[test]
    fn products_grade_additively() {
        let np = NagataParams::standard(5).unwrap();
        let f = build_f(&[1, 2, 4], &np).unwrap();
        let g = build_f(&[3], &np).unwrap();
        let h = build_f(&[1, 2, 3, 4, 5], &np).unwrap();
        let fg = &(&f * &g) * &h;
        assert!(is_invariant(&fg, &np).unwrap());
        let sum = &(&divisor_class_of(&f, &np).unwrap() + &divisor_class_of(&g, &np).unwrap())
            + &divisor_class_of(&h, &np).unwrap();
        assert_eq!(divisor_class_of(&fg, &np).unwrap(), sum);
    }

    #[test]
    fn j_invariants() {
        for r in [5, 6, 7] {
            let np = NagataParams::seeded(r, 9).unwrap();
            let js = build_j(&np);
            assert_eq!(js.len(), r - 2);
            let h = LatticeContext::blowup(r - 3, r).unwrap().hyperplane(1);
            for j in &js {
                assert!(is_invariant(j, &np).unwrap());
                let tw = torus_weight(j, &np).unwrap();
                assert_eq!(tw.w, vec![1; r]);
                assert_eq!((tw.deg_x as usize, tw.deg_y), (r - 1, 1));
                assert_eq!(divisor_class_of(j, &np).unwrap(), h);
            }
        }
    }

    #[test]
    fn params_validation() {
        assert!(matches!(
            NagataParams::new(vec![rat(1, 1), rat(2, 1), rat(2, 1), rat(3, 1), rat(4, 1)]),
            Err(Error::CollidingParams { i: 2, j: 3 })
        ));
        assert!(NagataParams::standard(4).is_err());
        let np = NagataParams::seeded(6, 2).unwrap();
        assert_eq!(NagataParams::from_json(&np.to_json()).unwrap(), np);
    }
}
