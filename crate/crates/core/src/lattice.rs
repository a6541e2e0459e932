//! The Picard lattice of `X_{a,b,c}`: the blow-up of `(P^{c-1})^{a-1}` at
//! `r = b + c` points, with the Mukai bilinear form, the divisor/curve
//! intersection pairing, the canonical class and the degree function.
//!
//! Classes are written in the tautological basis
//! `D = d_1 H_1 + ... + d_{a-1} H_{a-1} - m_1 E_1 - ... - m_r E_r`
//! and the `m_j` are stored with that sign.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};
use serde_json::{json, Value};

use crate::arith::{json_int, Int, Rat};
use crate::error::{Error, Result};

/// The triple `(a, b, c)` together with its derived quantities.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LatticeContext {
    a: u32,
    b: u32,
    c: u32,
}

impl LatticeContext {
    /// Validates `a, c >= 2`, `b >= 1` and `a > 2` whenever `c = 2`.
    pub fn new(a: u32, b: u32, c: u32) -> Result<Self> {
        let bad = |reason| Err(Error::InvalidContext { a, b, c, reason });
        if a < 2 {
            return bad("a must be at least 2");
        }
        if b < 1 {
            return bad("b must be at least 1");
        }
        if c < 2 {
            return bad("c must be at least 2");
        }
        if c == 2 && a <= 2 {
            return bad("c = 2 requires a > 2");
        }
        Ok(Self { a, b, c })
    }

    /// Skips validation. Only for exercising degenerate code paths.
    #[cfg(test)]
    pub(crate) fn raw(a: u32, b: u32, c: u32) -> Self {
        Self { a, b, c }
    }

    pub fn a(&self) -> u32 {
        self.a
    }

    pub fn b(&self) -> u32 {
        self.b
    }

    pub fn c(&self) -> u32 {
        self.c
    }

    /// Number of blown-up points.
    pub fn r(&self) -> usize {
        (self.b + self.c) as usize
    }

    /// Number of hyperplane classes, `a - 1`.
    pub fn factors(&self) -> usize {
        (self.a - 1) as usize
    }

    pub fn rank(&self) -> usize {
        self.factors() + self.r()
    }

    /// `ac - a - c`, the normalizing constant of the degree.
    pub fn kappa(&self) -> i64 {
        let (a, c) = (self.a as i64, self.c as i64);
        a * c - a - c
    }

    /// Context of `Bl_r P^n`, i.e. `X_{2, r-n-1, n+1}`.
    pub fn blowup(n: usize, r: usize) -> Result<Self> {
        if n < 2 || r < n + 2 {
            return Err(Error::InvalidBlowup {
                n,
                r,
                reason: "need n >= 2 and r >= n + 2",
            });
        }
        Self::new(2, (r - n - 1) as u32, (n + 1) as u32)
    }

    pub fn to_json(&self) -> Value {
        json!({"a": self.a, "b": self.b, "c": self.c})
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let field = |k: &str| {
            v.get(k)
                .and_then(Value::as_u64)
                .map(|x| x as u32)
                .ok_or_else(|| Error::Parse(format!("context is missing integer field {k:?}")))
        };
        Self::new(field("a")?, field("b")?, field("c")?)
    }

    /// `H_i`, 1-based.
    pub fn hyperplane(&self, i: usize) -> DivisorClass {
        assert!((1..=self.factors()).contains(&i), "H_{i} out of range");
        let mut d = DivisorClass::zero(*self);
        d.h[i - 1] = Int::one();
        d
    }

    /// `H_1 + ... + H_{a-1}`.
    pub fn hyperplane_sum(&self) -> DivisorClass {
        let mut d = DivisorClass::zero(*self);
        d.h.iter_mut().for_each(|x| *x = Int::one());
        d
    }

    /// `E_j`, 1-based. Stored as `m_j = -1`.
    pub fn exceptional(&self, j: usize) -> DivisorClass {
        assert!((1..=self.r()).contains(&j), "E_{j} out of range");
        let mut d = DivisorClass::zero(*self);
        d.m[j - 1] = -Int::one();
        d
    }

    /// `l_i`, 1-based.
    pub fn line(&self, i: usize) -> CurveClass {
        assert!((1..=self.factors()).contains(&i), "l_{i} out of range");
        let mut g = CurveClass::zero(*self);
        g.l[i - 1] = Int::one();
        g
    }

    /// `e_j`, 1-based.
    pub fn exceptional_line(&self, j: usize) -> CurveClass {
        assert!((1..=self.r()).contains(&j), "e_{j} out of range");
        let mut g = CurveClass::zero(*self);
        g.e[j - 1] = Int::one();
        g
    }
}

impl fmt::Display for LatticeContext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.a, self.b, self.c)
    }
}

fn same_ctx(x: &LatticeContext, y: &LatticeContext) -> Result<()> {
    if x == y {
        Ok(())
    } else {
        Err(Error::ContextMismatch(x.to_string(), y.to_string()))
    }
}

/// An element of `Pic(X)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DivisorClass {
    ctx: LatticeContext,
    h: Vec<Int>,
    m: Vec<Int>,
}

impl DivisorClass {
    pub fn new(ctx: LatticeContext, h: Vec<Int>, m: Vec<Int>) -> Result<Self> {
        if h.len() != ctx.factors() || m.len() != ctx.r() {
            return Err(Error::Shape(format!(
                "context {ctx} needs {} hyperplane and {} exceptional coefficients, got {} and {}",
                ctx.factors(),
                ctx.r(),
                h.len(),
                m.len()
            )));
        }
        Ok(Self { ctx, h, m })
    }

    /// Convenience constructor from machine integers.
    pub fn from_ints(ctx: LatticeContext, h: &[i64], m: &[i64]) -> Result<Self> {
        Self::new(
            ctx,
            h.iter().map(|&x| Int::from(x)).collect(),
            m.iter().map(|&x| Int::from(x)).collect(),
        )
    }

    pub fn zero(ctx: LatticeContext) -> Self {
        Self {
            ctx,
            h: vec![Int::zero(); ctx.factors()],
            m: vec![Int::zero(); ctx.r()],
        }
    }

    /// Builds `D` from coefficients on the basis `(H_1.., E_1..)`.
    pub fn from_basis_coeffs(ctx: LatticeContext, coeffs: &[Int]) -> Self {
        assert_eq!(coeffs.len(), ctx.rank());
        let f = ctx.factors();
        Self {
            ctx,
            h: coeffs[..f].to_vec(),
            m: coeffs[f..].iter().map(|x| -x).collect(),
        }
    }

    pub fn ctx(&self) -> &LatticeContext {
        &self.ctx
    }

    pub fn h(&self) -> &[Int] {
        &self.h
    }

    pub fn m(&self) -> &[Int] {
        &self.m
    }

    /// Coefficients on the basis `(H_1, .., H_{a-1}, E_1, .., E_r)`.
    pub fn basis_coeffs(&self) -> Vec<Int> {
        self.h.iter().cloned().chain(self.m.iter().map(|x| -x)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.h.iter().all(Zero::is_zero) && self.m.iter().all(Zero::is_zero)
    }

    /// Sort key used for deterministic output: `(h, m)` lexicographically.
    pub fn sort_key(&self) -> (&[Int], &[Int]) {
        (&self.h, &self.m)
    }

    pub fn to_json(&self) -> Value {
        let ints = |v: &[Int]| Value::Array(v.iter().map(json_int::to_value).collect());
        if self.ctx.a == 2 {
            json!({"ctx": self.ctx.to_json(), "d": json_int::to_value(&self.h[0]), "m": ints(&self.m)})
        } else {
            json!({"ctx": self.ctx.to_json(), "h": ints(&self.h), "m": ints(&self.m)})
        }
    }

    /// Accepts `{"ctx":..,"h":[..],"m":[..]}`, or `"d"` in place of `"h"`
    /// for `a = 2`. A `{"n":..,"r":..}` envelope may stand in for `"ctx"`.
    pub fn from_json(v: &Value) -> Result<Self> {
        let ctx = match v.get("ctx") {
            Some(c) => LatticeContext::from_json(c)?,
            None => {
                let n = v.get("n").and_then(Value::as_u64);
                let r = v.get("r").and_then(Value::as_u64);
                match (n, r) {
                    (Some(n), Some(r)) => LatticeContext::blowup(n as usize, r as usize)?,
                    _ => return Err(Error::Parse("divisor needs \"ctx\" or \"n\"/\"r\"".into())),
                }
            }
        };
        let list = |key: &str| -> Result<Vec<Int>> {
            v.get(key)
                .and_then(Value::as_array)
                .ok_or_else(|| Error::Parse(format!("divisor is missing array {key:?}")))?
                .iter()
                .map(json_int::from_value)
                .collect()
        };
        let h = match v.get("d") {
            Some(d) => vec![json_int::from_value(d)?],
            None => list("h")?,
        };
        Self::new(ctx, h, list("m")?)
    }
}

impl fmt::Display for DivisorClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut terms: Vec<(Int, String)> = Vec::new();
        for (i, x) in self.h.iter().enumerate() {
            let name = if self.ctx.a == 2 {
                "H".to_string()
            } else {
                format!("H{}", i + 1)
            };
            terms.push((x.clone(), name));
        }
        for (j, x) in self.m.iter().enumerate() {
            terms.push((-x, format!("E{}", j + 1)));
        }
        write_terms(f, terms)
    }
}

fn write_terms(f: &mut fmt::Formatter<'_>, terms: Vec<(Int, String)>) -> fmt::Result {
    let mut first = true;
    for (coef, name) in terms.into_iter().filter(|(c, _)| !c.is_zero()) {
        let sign = if coef.is_negative() { "-" } else { "+" };
        let mag = coef.abs();
        if first {
            if coef.is_negative() {
                write!(f, "-")?;
            }
        } else {
            write!(f, " {sign} ")?;
        }
        if mag.is_one() {
            write!(f, "{name}")?;
        } else {
            write!(f, "{mag}{name}")?;
        }
        first = false;
    }
    if first {
        write!(f, "0")?;
    }
    Ok(())
}

macro_rules! check_ctx {
    ($x:expr, $y:expr) => {
        assert_eq!(
            $x.ctx, $y.ctx,
            "arithmetic on divisor classes from different contexts"
        )
    };
}

impl Add for &DivisorClass {
    type Output = DivisorClass;
    fn add(self, rhs: &DivisorClass) -> DivisorClass {
        check_ctx!(self, rhs);
        DivisorClass {
            ctx: self.ctx,
            h: self.h.iter().zip(&rhs.h).map(|(x, y)| x + y).collect(),
            m: self.m.iter().zip(&rhs.m).map(|(x, y)| x + y).collect(),
        }
    }
}

impl Add for DivisorClass {
    type Output = DivisorClass;
    fn add(self, rhs: DivisorClass) -> DivisorClass {
        &self + &rhs
    }
}

impl Sub for &DivisorClass {
    type Output = DivisorClass;
    fn sub(self, rhs: &DivisorClass) -> DivisorClass {
        check_ctx!(self, rhs);
        DivisorClass {
            ctx: self.ctx,
            h: self.h.iter().zip(&rhs.h).map(|(x, y)| x - y).collect(),
            m: self.m.iter().zip(&rhs.m).map(|(x, y)| x - y).collect(),
        }
    }
}

impl Sub for DivisorClass {
    type Output = DivisorClass;
    fn sub(self, rhs: DivisorClass) -> DivisorClass {
        &self - &rhs
    }
}

impl Neg for &DivisorClass {
    type Output = DivisorClass;
    fn neg(self) -> DivisorClass {
        DivisorClass {
            ctx: self.ctx,
            h: self.h.iter().map(|x| -x).collect(),
            m: self.m.iter().map(|x| -x).collect(),
        }
    }
}

impl Neg for DivisorClass {
    type Output = DivisorClass;
    fn neg(self) -> DivisorClass {
        -&self
    }
}

impl Mul<&Int> for &DivisorClass {
    type Output = DivisorClass;
    fn mul(self, k: &Int) -> DivisorClass {
        DivisorClass {
            ctx: self.ctx,
            h: self.h.iter().map(|x| x * k).collect(),
            m: self.m.iter().map(|x| x * k).collect(),
        }
    }
}

impl Mul<i64> for &DivisorClass {
    type Output = DivisorClass;
    fn mul(self, k: i64) -> DivisorClass {
        self * &Int::from(k)
    }
}

/// An element of `N_1(X)` in the basis dual to the tautological one.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CurveClass {
    ctx: LatticeContext,
    l: Vec<Int>,
    e: Vec<Int>,
}

impl CurveClass {
    pub fn new(ctx: LatticeContext, l: Vec<Int>, e: Vec<Int>) -> Result<Self> {
        if l.len() != ctx.factors() || e.len() != ctx.r() {
            return Err(Error::Shape(format!(
                "context {ctx} needs {} l- and {} e-coefficients, got {} and {}",
                ctx.factors(),
                ctx.r(),
                l.len(),
                e.len()
            )));
        }
        Ok(Self { ctx, l, e })
    }

    pub fn from_ints(ctx: LatticeContext, l: &[i64], e: &[i64]) -> Result<Self> {
        Self::new(
            ctx,
            l.iter().map(|&x| Int::from(x)).collect(),
            e.iter().map(|&x| Int::from(x)).collect(),
        )
    }

    pub fn zero(ctx: LatticeContext) -> Self {
        Self {
            ctx,
            l: vec![Int::zero(); ctx.factors()],
            e: vec![Int::zero(); ctx.r()],
        }
    }

    /// The curve class `F^v` with `D . F^v = (D, F)` for every divisor `D`.
    pub fn dual_of(f: &DivisorClass) -> Self {
        let ctx = f.ctx;
        let c1 = Int::from(ctx.c - 1);
        let sum_h: Int = f.h.iter().sum();
        // l_i = (H_i, F) and e_j = -(E_j, F) = m_j(F).
        let l = f.h.iter().map(|hi| &c1 * &sum_h - hi).collect();
        let e = f.m.clone();
        Self { ctx, l, e }
    }

    pub fn ctx(&self) -> &LatticeContext {
        &self.ctx
    }

    pub fn l(&self) -> &[Int] {
        &self.l
    }

    pub fn e(&self) -> &[Int] {
        &self.e
    }

    pub fn to_json(&self) -> Value {
        let ints = |v: &[Int]| Value::Array(v.iter().map(json_int::to_value).collect());
        json!({"ctx": self.ctx.to_json(), "l": ints(&self.l), "e": ints(&self.e)})
    }

    pub fn from_json(v: &Value, ctx: Option<LatticeContext>) -> Result<Self> {
        let ctx = match (v.get("ctx"), ctx) {
            (Some(c), _) => LatticeContext::from_json(c)?,
            (None, Some(c)) => c,
            (None, None) => return Err(Error::Parse("curve class needs a context".into())),
        };
        let list = |key: &str| -> Result<Vec<Int>> {
            v.get(key)
                .and_then(Value::as_array)
                .ok_or_else(|| Error::Parse(format!("curve is missing array {key:?}")))?
                .iter()
                .map(json_int::from_value)
                .collect()
        };
        Self::new(ctx, list("l")?, list("e")?)
    }
}

impl fmt::Display for CurveClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut terms: Vec<(Int, String)> = Vec::new();
        for (i, x) in self.l.iter().enumerate() {
            let name = if self.ctx.a == 2 { "l".to_string() } else { format!("l{}", i + 1) };
            terms.push((x.clone(), name));
        }
        for (j, x) in self.e.iter().enumerate() {
            terms.push((x.clone(), format!("e{}", j + 1)));
        }
        write_terms(f, terms)
    }
}

impl Add for &CurveClass {
    type Output = CurveClass;
    fn add(self, rhs: &CurveClass) -> CurveClass {
        check_ctx!(self, rhs);
        CurveClass {
            ctx: self.ctx,
            l: self.l.iter().zip(&rhs.l).map(|(x, y)| x + y).collect(),
            e: self.e.iter().zip(&rhs.e).map(|(x, y)| x + y).collect(),
        }
    }
}

impl Sub for &CurveClass {
    type Output = CurveClass;
    fn sub(self, rhs: &CurveClass) -> CurveClass {
        check_ctx!(self, rhs);
        CurveClass {
            ctx: self.ctx,
            l: self.l.iter().zip(&rhs.l).map(|(x, y)| x - y).collect(),
            e: self.e.iter().zip(&rhs.e).map(|(x, y)| x - y).collect(),
        }
    }
}

impl Mul<&Int> for &CurveClass {
    type Output = CurveClass;
    fn mul(self, k: &Int) -> CurveClass {
        CurveClass {
            ctx: self.ctx,
            l: self.l.iter().map(|x| x * k).collect(),
            e: self.e.iter().map(|x| x * k).collect(),
        }
    }
}

/// The Mukai form: `(H_i,H_j) = (c-1) - delta_ij`, `(H_i,E_j) = 0`,
/// `(E_i,E_j) = -delta_ij`.
pub fn pairing(x: &DivisorClass, y: &DivisorClass) -> Result<Int> {
    same_ctx(&x.ctx, &y.ctx)?;
    Ok(pairing_unchecked(x, y))
}

pub(crate) fn pairing_unchecked(x: &DivisorClass, y: &DivisorClass) -> Int {
    let c1 = Int::from(x.ctx.c - 1);
    let sx: Int = x.h.iter().sum();
    let sy: Int = y.h.iter().sum();
    let diag: Int = x.h.iter().zip(&y.h).map(|(p, q)| p * q).sum();
    let ex: Int = x.m.iter().zip(&y.m).map(|(p, q)| p * q).sum();
    c1 * sx * sy - diag - ex
}

/// Divisor-curve intersection: `H_i.l_j = delta`, `E_i.e_j = delta`, the
/// mixed products vanish.
pub fn intersect(d: &DivisorClass, g: &CurveClass) -> Result<Int> {
    same_ctx(&d.ctx, &g.ctx)?;
    Ok(intersect_unchecked(d, g))
}

pub(crate) fn intersect_unchecked(d: &DivisorClass, g: &CurveClass) -> Int {
    let hl: Int = d.h.iter().zip(&g.l).map(|(p, q)| p * q).sum();
    let me: Int = d.m.iter().zip(&g.e).map(|(p, q)| p * q).sum();
    hl - me
}

/// `K = -c(H_1 + .. + H_{a-1}) + (ac - a - c)(E_1 + .. + E_r)`.
pub fn canonical_class(ctx: &LatticeContext) -> DivisorClass {
    -anticanonical_class(ctx)
}

pub fn anticanonical_class(ctx: &LatticeContext) -> DivisorClass {
    DivisorClass {
        ctx: *ctx,
        h: vec![Int::from(ctx.c); ctx.factors()],
        m: vec![Int::from(ctx.kappa()); ctx.r()],
    }
}

/// `deg D = (D, -K) / (ac - a - c)`.
pub fn degree(d: &DivisorClass) -> Result<Rat> {
    let kappa = d.ctx.kappa();
    if kappa == 0 {
        return Err(Error::DegenerateContext);
    }
    let p = pairing_unchecked(d, &anticanonical_class(&d.ctx));
    Ok(Rat::new(p, Int::from(kappa)))
}

/// The H-degree `d` of a class on a blow-up of a single projective space.
pub fn hdeg(d: &DivisorClass) -> Result<Int> {
    if d.ctx.a != 2 {
        return Err(Error::NotSingleFactor(d.ctx.a));
    }
    Ok(d.h[0].clone())
}

/// Gram matrix of the form on the basis `(H_1.., E_1..)`.
pub fn gram_matrix(ctx: &LatticeContext) -> Vec<Vec<Int>> {
    let n = ctx.rank();
    let f = ctx.factors();
    let mut g = vec![vec![Int::zero(); n]; n];
    for i in 0..f {
        for j in 0..f {
            g[i][j] = Int::from(ctx.c - 1) - Int::from((i == j) as u32);
        }
    }
    for j in f..n {
        g[j][j] = -Int::one();
    }
    g
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{int, rat};

    fn ctx(a: u32, b: u32, c: u32) -> LatticeContext {
        LatticeContext::new(a, b, c).unwrap()
    }

    #[test]
    fn context_validation() {
        assert!(LatticeContext::new(2, 2, 2).is_err());
        assert!(LatticeContext::new(3, 2, 2).is_ok());
        assert!(LatticeContext::new(1, 2, 3).is_err());
        assert!(LatticeContext::new(2, 0, 3).is_err());
        let x = ctx(3, 2, 3);
        assert_eq!((x.r(), x.rank(), x.kappa()), (5, 7, 3));
        assert_eq!(ctx(2, 2, 5).kappa(), 3);
    }

    #[test]
    fn form_on_basis() {
        let x = ctx(2, 2, 3);
        assert_eq!(pairing(&x.exceptional(1), &x.exceptional(1)).unwrap(), int(-1));
        assert_eq!(pairing(&x.hyperplane(1), &x.exceptional(1)).unwrap(), int(0));
        let mk = anticanonical_class(&x);
        assert_eq!(pairing(&mk, &mk).unwrap(), int(4));
        let y = ctx(3, 2, 3);
        assert_eq!(pairing(&y.hyperplane(1), &y.hyperplane(2)).unwrap(), int(2));
        assert_eq!(pairing(&y.hyperplane(1), &y.hyperplane(1)).unwrap(), int(1));
    }

    #[test]
    fn intersections() {
        let x = ctx(2, 2, 3);
        assert_eq!(intersect(&x.hyperplane(1), &x.line(1)).unwrap(), int(1));
        assert_eq!(intersect(&x.exceptional(2), &x.exceptional_line(2)).unwrap(), int(1));
        assert_eq!(intersect(&x.exceptional(2), &x.line(1)).unwrap(), int(0));
        let y = ctx(3, 2, 3);
        let d = &y.hyperplane(1) - &y.exceptional(1);
        let g = &(&y.line(1) + &y.line(2)) - &y.exceptional_line(1);
        assert_eq!(intersect(&d, &g).unwrap(), int(2));
    }

    #[test]
    fn context_mismatch_fails_fast() {
        let x = ctx(2, 2, 3);
        let y = ctx(2, 3, 3);
        assert!(matches!(
            pairing(&x.hyperplane(1), &y.hyperplane(1)),
            Err(Error::ContextMismatch(..))
        ));
        assert!(intersect(&x.hyperplane(1), &y.line(1)).is_err());
    }

    #[test]
    fn canonical_classes() {
        let x = ctx(2, 2, 3);
        let mk = anticanonical_class(&x);
        assert_eq!(mk.h(), &[int(3)]);
        assert!(mk.m().iter().all(|v| *v == int(1)));
        assert_eq!(mk.m().len(), 5);
        for n in 2..6u32 {
            let y = ctx(2, 2, n + 1);
            let mk = anticanonical_class(&y);
            assert_eq!(mk.h(), &[int(n as i64 + 1)]);
            assert!(mk.m().iter().all(|v| *v == int(n as i64 - 1)));
        }
        let z = ctx(3, 2, 3);
        let mk = anticanonical_class(&z);
        assert_eq!(mk.h(), &[int(3), int(3)]);
        assert!(mk.m().iter().all(|v| *v == int(3)));
        assert_eq!(canonical_class(&z), -mk);
    }

    #[test]
    fn degrees() {
        for (a, b, c) in [(2, 2, 3), (2, 3, 3), (3, 2, 3), (2, 3, 5), (3, 1, 4)] {
            let x = ctx(a, b, c);
            assert_eq!(degree(&x.exceptional(x.r())).unwrap(), rat(1, 1));
        }
        let x = ctx(2, 2, 3);
        assert_eq!(degree(&x.hyperplane(1)).unwrap(), rat(3, 1));
        let y = ctx(2, 3, 3);
        assert_eq!(degree(&anticanonical_class(&y)).unwrap(), rat(3, 1));
        assert_eq!(degree(&anticanonical_class(&x)).unwrap(), rat(4, 1));
        let z = LatticeContext::raw(2, 2, 2);
        assert_eq!(degree(&z.hyperplane(1)), Err(Error::DegenerateContext));
    }

    #[test]
    fn del_pezzo_self_intersections() {
        for s in 4..=8u32 {
            let x = ctx(2, s - 3, 3);
            let mk = anticanonical_class(&x);
            assert_eq!(pairing(&mk, &mk).unwrap(), int(9 - s as i64));
        }
    }

    #[test]
    fn hdeg_reads_coefficient() {
        let x = LatticeContext::blowup(2, 5).unwrap();
        let d = DivisorClass::from_ints(x, &[2], &[1, 1, 1, 1, 1]).unwrap();
        assert_eq!(hdeg(&d).unwrap(), int(2));
        assert_eq!(hdeg(&x.exceptional(1)).unwrap(), int(0));
        let y = ctx(3, 2, 3);
        assert_eq!(hdeg(&y.hyperplane(1)), Err(Error::NotSingleFactor(3)));
    }

    #[test]
    fn dual_curve_realizes_form() {
        let x = ctx(3, 2, 4);
        let f = DivisorClass::from_ints(x, &[2, -1], &[1, 0, 3, -2, 1, 1]).unwrap();
        let g = CurveClass::dual_of(&f);
        for d in [x.hyperplane(1), x.hyperplane(2), x.exceptional(3), f.clone()] {
            assert_eq!(intersect(&d, &g).unwrap(), pairing(&d, &f).unwrap());
        }
    }

    #[test]
    fn display_and_json() {
        let x = ctx(2, 2, 3);
        let d = DivisorClass::from_ints(x, &[2], &[1, 1, 0, 0, -1]).unwrap();
        assert_eq!(d.to_string(), "2H - E1 - E2 + E5");
        let v = d.to_json();
        assert_eq!(v["d"], json!(2));
        assert_eq!(DivisorClass::from_json(&v).unwrap(), d);
        let env = json!({"n": 2, "r": 5, "d": 2, "m": [1, 1, 0, 0, -1]});
        assert_eq!(DivisorClass::from_json(&env).unwrap(), d);
        let y = ctx(3, 2, 3);
        let e = DivisorClass::from_ints(y, &[1, 0], &[1, 0, 0, 0, 0]).unwrap();
        assert_eq!(e.to_string(), "H1 - E1");
        assert_eq!(DivisorClass::from_json(&e.to_json()).unwrap(), e);
        assert!(DivisorClass::from_ints(y, &[1], &[0; 5]).is_err());
    }
}
