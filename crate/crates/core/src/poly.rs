//! Sparse multivariate polynomials with exact rational coefficients over a
//! declared, ordered variable list.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Arc;

use num_traits::{One, Zero};
use serde_json::{json, Map, Value};

use crate::arith::{format_rat, parse_rat, Rat};
use crate::error::{Error, Result};

/// Ordered variable names shared by all polynomials of one ring.
pub type Vars = Arc<[String]>;

pub fn vars<S: AsRef<str>>(names: &[S]) -> Vars {
    names.iter().map(|s| s.as_ref().to_string()).collect()
}

/// `z0..zn`.
pub fn projective_vars(n: usize) -> Vars {
    (0..=n).map(|i| format!("z{i}")).collect()
}

/// An exponent vector, ordered graded-lex with earlier variables larger.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial {
    deg: u32,
    exps: Vec<u32>,
}

impl Monomial {
    pub fn new(exps: Vec<u32>) -> Self {
        Self {
            deg: exps.iter().sum(),
            exps,
        }
    }

    pub fn one(nvars: usize) -> Self {
        Self::new(vec![0; nvars])
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Self::new(e)
    }

    pub fn degree(&self) -> u32 {
        self.deg
    }

    pub fn exps(&self) -> &[u32] {
        &self.exps
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial {
            deg: self.deg + other.deg,
            exps: self.exps.iter().zip(&other.exps).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.deg.cmp(&other.deg).then_with(|| self.exps.cmp(&other.exps))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// All monomials of total degree `d` in `nvars` variables, graded-lex
/// descending.
pub fn monomials_of_degree(nvars: usize, d: u32) -> Vec<Monomial> {
    fn rec(i: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Monomial>) {
        if i + 1 == cur.len() {
            cur[i] = left;
            out.push(Monomial::new(cur.clone()));
            return;
        }
        for e in (0..=left).rev() {
            cur[i] = e;
            rec(i + 1, left - e, cur, out);
        }
    }
    if nvars == 0 {
        return if d == 0 { vec![Monomial::new(vec![])] } else { vec![] };
    }
    let mut out = Vec::new();
    rec(0, d, &mut vec![0; nvars], &mut out);
    out
}

#[derive(Clone, PartialEq, Eq)]
pub struct MultiPoly {
    vars: Vars,
    terms: BTreeMap<Monomial, Rat>,
}

impl MultiPoly {
    pub fn zero(vars: &Vars) -> Self {
        Self {
            vars: vars.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(vars: &Vars, c: Rat) -> Self {
        let mut p = Self::zero(vars);
        p.add_term(Monomial::one(vars.len()), c);
        p
    }

    pub fn one(vars: &Vars) -> Self {
        Self::constant(vars, Rat::one())
    }

    /// The `i`-th variable, 0-based.
    pub fn var(vars: &Vars, i: usize) -> Self {
        let mut p = Self::zero(vars);
        p.add_term(Monomial::var(vars.len(), i), Rat::one());
        p
    }

    pub fn var_named(vars: &Vars, name: &str) -> Result<Self> {
        let i = vars
            .iter()
            .position(|v| v == name)
            .ok_or_else(|| Error::Parse(format!("unknown variable {name}")))?;
        Ok(Self::var(vars, i))
    }

    pub fn from_terms<I: IntoIterator<Item = (Monomial, Rat)>>(vars: &Vars, terms: I) -> Self {
        let mut p = Self::zero(vars);
        for (m, c) in terms {
            assert_eq!(m.exps.len(), vars.len(), "monomial arity");
            p.add_term(m, c);
        }
        p
    }

    pub fn vars(&self) -> &Vars {
        &self.vars
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in descending graded-lex order.
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rat)> {
        self.terms.iter().rev()
    }

    pub fn coeff(&self, m: &Monomial) -> Rat {
        self.terms.get(m).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn leading_term(&self) -> Option<(&Monomial, &Rat)> {
        self.terms.iter().next_back()
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.leading_term().map(|(m, _)| m.deg)
    }

    pub fn min_degree(&self) -> Option<u32> {
        self.terms.keys().map(|m| m.deg).min()
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut degs = self.terms.keys().map(|m| m.deg);
        match degs.next() {
            None => true,
            Some(d) => degs.all(|e| e == d),
        }
    }

    pub fn homogeneous_part(&self, d: u32) -> Self {
        Self {
            vars: self.vars.clone(),
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.deg == d)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    pub fn add_term(&mut self, m: Monomial, c: Rat) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    fn check_vars(&self, other: &Self) {
        assert!(
            Arc::ptr_eq(&self.vars, &other.vars) || self.vars == other.vars,
            "polynomials over different variable lists"
        );
    }

    pub fn scale(&self, c: &Rat) -> Self {
        if c.is_zero() {
            return Self::zero(&self.vars);
        }
        Self {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(m, x)| (m.clone(), x * c)).collect(),
        }
    }

    pub fn mul_monomial(&self, m: &Monomial, c: &Rat) -> Self {
        Self::from_terms(
            &self.vars,
            self.terms.iter().map(|(k, x)| (k.mul(m), x * c)),
        )
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut out = Self::one(&self.vars);
        for _ in 0..e {
            out = &out * self;
        }
        out
    }

    pub fn derivative(&self, i: usize) -> Self {
        let mut out = Self::zero(&self.vars);
        for (m, c) in &self.terms {
            let e = m.exps[i];
            if e == 0 {
                continue;
            }
            let mut exps = m.exps.clone();
            exps[i] -= 1;
            out.add_term(Monomial::new(exps), c * Rat::from_integer(e.into()));
        }
        out
    }

    pub fn eval(&self, point: &[Rat]) -> Rat {
        assert_eq!(point.len(), self.nvars());
        let mut sum = Rat::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (x, &e) in point.iter().zip(&m.exps) {
                if e > 0 {
                    t *= num_traits::pow(x.clone(), e as usize);
                }
            }
            sum += t;
        }
        sum
    }

    /// Replaces every variable `v_i` by `images[i]`, a polynomial over
    /// `target`. Powers of each image are cached.
    pub fn substitute(&self, images: &[MultiPoly], target: &Vars) -> Self {
        assert_eq!(images.len(), self.nvars());
        let mut powers: Vec<Vec<MultiPoly>> = images.iter().map(|p| vec![MultiPoly::one(target), p.clone()]).collect();
        let mut out = MultiPoly::zero(target);
        for (m, c) in &self.terms {
            let mut t = MultiPoly::constant(target, c.clone());
            for (i, &e) in m.exps.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                while powers[i].len() <= e as usize {
                    let next = powers[i].last().unwrap() * &images[i];
                    powers[i].push(next);
                }
                t = &t * &powers[i][e as usize];
            }
            out = &out + &t;
        }
        out
    }

    /// Scales so the leading coefficient is 1.
    pub fn monic(&self) -> Self {
        match self.leading_term() {
            None => self.clone(),
            Some((_, c)) => self.scale(&c.recip()),
        }
    }

    /// `[{"coef":"p/q","exps":{"x1":1,..}}, ..]`, leading term first.
    pub fn to_json(&self) -> Value {
        Value::Array(
            self.terms()
                .map(|(m, c)| {
                    let exps: Map<String, Value> = m
                        .exps
                        .iter()
                        .zip(self.vars.iter())
                        .filter(|(e, _)| **e > 0)
                        .map(|(e, v)| (v.clone(), json!(e)))
                        .collect();
                    json!({"coef": format_rat(c), "exps": exps})
                })
                .collect(),
        )
    }

    pub fn from_json(v: &Value, vars: &Vars) -> Result<Self> {
        let arr = v
            .as_array()
            .ok_or_else(|| Error::Parse("polynomial must be a JSON array of terms".into()))?;
        let mut p = Self::zero(vars);
        for t in arr {
            let coef = match t.get("coef") {
                Some(Value::String(s)) => parse_rat(s)?,
                Some(Value::Number(n)) => parse_rat(&n.to_string())?,
                _ => return Err(Error::Parse("term needs a \"coef\"".into())),
            };
            let mut exps = vec![0u32; vars.len()];
            if let Some(obj) = t.get("exps") {
                let obj = obj
                    .as_object()
                    .ok_or_else(|| Error::Parse("\"exps\" must be an object".into()))?;
                for (name, e) in obj {
                    let i = vars
                        .iter()
                        .position(|v| v == name)
                        .ok_or_else(|| Error::Parse(format!("unknown variable {name}")))?;
                    exps[i] = e
                        .as_u64()
                        .and_then(|x| u32::try_from(x).ok())
                        .ok_or_else(|| Error::Parse(format!("bad exponent for {name}")))?;
                }
            }
            p.add_term(Monomial::new(exps), coef);
        }
        Ok(p)
    }
}

impl std::hash::Hash for MultiPoly {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.vars.hash(state);
        self.terms.hash(state);
    }
}

impl fmt::Debug for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.terms().enumerate() {
            let neg = c < &Rat::zero();
            let abs = if neg { -c.clone() } else { c.clone() };
            match (k, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let vars: Vec<String> = m
                .exps
                .iter()
                .zip(self.vars.iter())
                .filter(|(e, _)| **e > 0)
                .map(|(e, v)| if *e == 1 { v.clone() } else { format!("{v}^{e}") })
                .collect();
            if vars.is_empty() {
                write!(f, "{}", format_rat(&abs))?;
            } else if abs.is_one() {
                write!(f, "{}", vars.join("*"))?;
            } else {
                write!(f, "{}*{}", format_rat(&abs), vars.join("*"))?;
            }
        }
        Ok(())
    }
}

impl std::ops::Add for &MultiPoly {
    type Output = MultiPoly;
    fn add(self, rhs: &MultiPoly) -> MultiPoly {
        self.check_vars(rhs);
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl std::ops::Sub for &MultiPoly {
    type Output = MultiPoly;
    fn sub(self, rhs: &MultiPoly) -> MultiPoly {
        self.check_vars(rhs);
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }
}

impl std::ops::Neg for &MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        self.scale(&-Rat::one())
    }
}

impl std::ops::Mul for &MultiPoly {
    type Output = MultiPoly;
    fn mul(self, rhs: &MultiPoly) -> MultiPoly {
        self.check_vars(rhs);
        let mut acc: HashMap<Monomial, Rat> = HashMap::new();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &rhs.terms {
                *acc.entry(m1.mul(m2)).or_insert_with(Rat::zero) += c1 * c2;
            }
        }
        MultiPoly {
            vars: self.vars.clone(),
            terms: acc.into_iter().filter(|(_, c)| !c.is_zero()).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;
    use proptest::prelude::*;

    fn xyz() -> Vars {
        vars(&["x", "y", "z"])
    }

    #[test]
    fn graded_lex_order() {
        let a = Monomial::new(vec![1, 0, 1]);
        let b = Monomial::new(vec![0, 2, 0]);
        let c = Monomial::new(vec![0, 0, 3]);
        assert!(a > b);
        assert!(c > a);
        let ms = monomials_of_degree(3, 2);
        assert_eq!(ms.len(), 6);
        assert!(ms.windows(2).all(|w| w[0] > w[1]));
        assert_eq!(ms[0].exps(), &[2, 0, 0]);
        assert_eq!(monomials_of_degree(4, 0).len(), 1);
    }

    #[test]
    fn arithmetic() {
        let v = xyz();
        let x = MultiPoly::var(&v, 0);
        let y = MultiPoly::var(&v, 1);
        let sq = &(&x + &y) * &(&x - &y);
        let expect = &x.pow(2) - &y.pow(2);
        assert_eq!(sq, expect);
        assert!((&sq - &expect).is_zero());
        assert_eq!(sq.to_string(), "x^2 - y^2");
        assert_eq!(sq.degree(), Some(2));
        assert!(sq.is_homogeneous());
        assert!(!(&sq + &MultiPoly::one(&v)).is_homogeneous());
    }

    #[test]
    fn derivative_eval_substitute() {
        let v = xyz();
        let x = MultiPoly::var(&v, 0);
        let z = MultiPoly::var(&v, 2);
        let p = &x.pow(3).scale(&rat(1, 2)) * &z;
        assert_eq!(p.derivative(0), &x.pow(2).scale(&rat(3, 2)) * &z);
        assert_eq!(p.eval(&[rat(2, 1), rat(7, 1), rat(3, 1)]), rat(12, 1));
        let s = vars(&["s"]);
        let t = MultiPoly::var(&s, 0);
        let q = p.substitute(&[t.clone(), MultiPoly::zero(&s), t.pow(2)], &s);
        assert_eq!(q, t.pow(5).scale(&rat(1, 2)));
    }

    #[test]
    fn json_round_trip_and_monic() {
        let v = xyz();
        let p = MultiPoly::from_terms(
            &v,
            [
                (Monomial::new(vec![1, 0, 1]), rat(3, 1)),
                (Monomial::new(vec![0, 2, 0]), rat(-3, 4)),
            ],
        );
        let j = p.to_json();
        assert_eq!(j[0]["coef"], "3");
        assert_eq!(j[1]["coef"], "-3/4");
        assert_eq!(MultiPoly::from_json(&j, &v).unwrap(), p);
        assert_eq!(p.monic().leading_term().unwrap().1, &Rat::one());
        let bad = serde_json::json!([{"coef": "1", "exps": {"w": 1}}]);
        assert!(MultiPoly::from_json(&bad, &v).is_err());
    }

    fn arb_poly() -> impl Strategy<Value = MultiPoly> {
        prop::collection::vec(((0u32..3, 0u32..3, 0u32..3), -4i64..5), 0..6).prop_map(|ts| {
            MultiPoly::from_terms(
                &xyz(),
                ts.into_iter()
                    .map(|((a, b, c), k)| (Monomial::new(vec![a, b, c]), rat(k, 1))),
            )
        })
    }

    proptest! {
        #[test]
        fn ring_laws(p in arb_poly(), q in arb_poly(), r in arb_poly()) {
            prop_assert_eq!(&p * &q, &q * &p);
            prop_assert_eq!(&(&p + &q) * &r, &(&p * &r) + &(&q * &r));
            prop_assert!((&p - &p).is_zero());
            let pt = [rat(1, 2), rat(-3, 1), rat(2, 3)];
            prop_assert_eq!((&p * &q).eval(&pt), p.eval(&pt) * q.eval(&pt));
            prop_assert_eq!(MultiPoly::from_json(&p.to_json(), &xyz()).unwrap(), p);
        }

        #[test]
        fn leibniz_rule(p in arb_poly(), q in arb_poly(), i in 0usize..3) {
            let lhs = (&p * &q).derivative(i);
            let rhs = &(&p.derivative(i) * &q) + &(&p * &q.derivative(i));
            prop_assert_eq!(lhs, rhs);
        }
    }
}
