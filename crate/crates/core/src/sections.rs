//! Spaces of degree-`d` forms on `P^n` vanishing to prescribed orders at
//! points of the rational normal curve, their unique sections, multiplicity
//! computations, and the generation test for the minimal-divisor sections.

use std::collections::HashSet;

use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::arith::{binomial, format_rat, parse_rat, Int, Rat};
use crate::blowup::{enumerate_minimal, BlowupContext};
use crate::error::{Error, Result};
use crate::lattice::{DivisorClass, LatticeContext};
use crate::linalg::{self, Span};
use crate::poly::{monomials_of_degree, projective_vars, Monomial, MultiPoly, Vars};

pub const DEFAULT_MONOMIAL_CAP: usize = 20_000;
pub const DEFAULT_MULTISET_CAP: usize = 100_000;
pub const MAX_GENERATION_DIM: usize = 4;

/// `r` distinct points `(1, a, a^2, .., a^n)` on the rational normal curve.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointConfig {
    n: usize,
    r: usize,
    params: Vec<Rat>,
}

impl PointConfig {
    pub fn new(n: usize, r: usize, params: Vec<Rat>) -> Result<Self> {
        BlowupContext::new(n, r)?;
        if params.len() != r {
            return Err(Error::Shape(format!("{r} points need {r} parameters, got {}", params.len())));
        }
        for i in 0..r {
            for j in i + 1..r {
                if params[i] == params[j] {
                    return Err(Error::CollidingParams { i: i + 1, j: j + 1 });
                }
            }
        }
        Ok(Self { n, r, params })
    }

    /// Parameters `1, 2, .., r`.
    pub fn standard(n: usize, r: usize) -> Result<Self> {
        Self::new(n, r, (1..=r as i64).map(|a| Rat::from_integer(a.into())).collect())
    }

    /// Distinct small random rationals determined by `seed`.
    pub fn seeded(n: usize, r: usize, seed: u64) -> Result<Self> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut params: Vec<Rat> = Vec::with_capacity(r);
        while params.len() < r {
            let p: i64 = rng.gen_range(-30..=30);
            let q: i64 = rng.gen_range(1..=7);
            let a = Rat::new(p.into(), q.into());
            if !params.contains(&a) {
                params.push(a);
            }
        }
        Self::new(n, r, params)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn params(&self) -> &[Rat] {
        &self.params
    }

    pub fn blowup(&self) -> BlowupContext {
        BlowupContext::new(self.n, self.r).expect("validated on construction")
    }

    pub fn lattice(&self) -> LatticeContext {
        self.blowup().lattice()
    }

    /// `p_i`, 1-based, in homogeneous coordinates.
    pub fn point(&self, i: usize) -> Vec<Rat> {
        let a = &self.params[i - 1];
        let mut p = Vec::with_capacity(self.n + 1);
        let mut x = Rat::one();
        for _ in 0..=self.n {
            p.push(x.clone());
            x *= a;
        }
        p
    }

    pub fn vars(&self) -> Vars {
        projective_vars(self.n)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "n": self.n,
            "r": self.r,
            "params": self.params.iter().map(format_rat).collect::<Vec<_>>(),
        })
    }

    /// Missing `params` means the standard ones.
    pub fn from_json(v: &Value) -> Result<Self> {
        let field = |k: &str| {
            v.get(k)
                .and_then(Value::as_u64)
                .map(|x| x as usize)
                .ok_or_else(|| Error::Parse(format!("point config is missing integer field {k:?}")))
        };
        let (n, r) = (field("n")?, field("r")?);
        match v.get("params") {
            None | Some(Value::Null) => Self::standard(n, r),
            Some(Value::Array(ps)) => {
                let params = ps
                    .iter()
                    .map(|p| match p {
                        Value::String(s) => parse_rat(s),
                        Value::Number(x) => parse_rat(&x.to_string()),
                        _ => Err(Error::Parse("parameters must be rationals".into())),
                    })
                    .collect::<Result<Vec<_>>>()?;
                Self::new(n, r, params)
            }
            _ => Err(Error::Parse("\"params\" must be an array".into())),
        }
    }
}

/// Degree-`d` forms satisfying the vanishing conditions of a class.
#[derive(Clone, Debug)]
pub struct FormSpace {
    pub degree: u32,
    /// Graded-lex descending.
    pub monomials: Vec<Monomial>,
    pub kernel: Vec<Vec<Rat>>,
    pub conditions: Vec<Vec<Rat>>,
}

impl FormSpace {
    pub fn dim(&self) -> usize {
        self.kernel.len()
    }

    pub fn form(&self, coeffs: &[Rat], vars: &Vars) -> MultiPoly {
        MultiPoly::from_terms(
            vars,
            self.monomials.iter().cloned().zip(coeffs.iter().cloned()),
        )
    }

    pub fn coeffs_of(&self, f: &MultiPoly) -> Vec<Rat> {
        self.monomials.iter().map(|m| f.coeff(m)).collect()
    }

    pub fn contains(&self, f: &MultiPoly) -> bool {
        let v = self.coeffs_of(f);
        self.conditions.iter().all(|row| linalg::dot(row, &v).is_zero())
    }
}

/// Multi-indices over `nvars` variables with total order `< m`.
fn orders_below(nvars: usize, m: u32) -> Vec<Vec<u32>> {
    (0..m)
        .flat_map(|k| monomials_of_degree(nvars, k))
        .map(|mono| mono.exps().to_vec())
        .collect()
}

fn first_nonzero(p: &[Rat]) -> Result<usize> {
    p.iter()
        .position(|x| !x.is_zero())
        .ok_or_else(|| Error::Precondition("point is the zero vector".into()))
}

/// Rows expressing that all partials of order `< m` vanish at `p`, in the
/// affine chart where the first nonzero coordinate of `p` is 1.
fn vanishing_rows(monomials: &[Monomial], p: &[Rat], m: u32) -> Result<Vec<Vec<Rat>>> {
    let k = first_nonzero(p)?;
    let q: Vec<Rat> = p.iter().map(|x| x / &p[k]).collect();
    let affine: Vec<usize> = (0..p.len()).filter(|&j| j != k).collect();
    let mut rows = Vec::new();
    for beta in orders_below(affine.len(), m) {
        let row = monomials
            .iter()
            .map(|mono| {
                let mut c = Rat::one();
                for (&j, &b) in affine.iter().zip(&beta) {
                    let g = mono.exps()[j];
                    if g < b {
                        return Rat::zero();
                    }
                    if g > b {
                        if q[j].is_zero() {
                            return Rat::zero();
                        }
                        c *= num_traits::pow(q[j].clone(), (g - b) as usize);
                    }
                    c *= Rat::from_integer(binomial(g as u64, b as u64));
                }
                c
            })
            .collect();
        rows.push(row);
    }
    Ok(rows)
}

fn check_class(d: &DivisorClass, cfg: &PointConfig) -> Result<()> {
    if *d.ctx() != cfg.lattice() {
        return Err(Error::ContextMismatch(d.ctx().to_string(), cfg.lattice().to_string()));
    }
    Ok(())
}

fn monomial_count(n: usize, d: u32) -> Int {
    binomial(d as u64 + n as u64, n as u64)
}

/// The forms representing `H^0(D)`; `None` when `d < 0`.
pub fn form_space(d: &DivisorClass, cfg: &PointConfig, monomial_cap: usize) -> Result<Option<FormSpace>> {
    check_class(d, cfg)?;
    let deg = &d.h()[0];
    if deg.is_negative() {
        return Ok(None);
    }
    if monomial_count(cfg.n, deg.to_u32().unwrap_or(u32::MAX)) > Int::from(monomial_cap) {
        return Err(Error::CapExceeded {
            what: "monomial count",
            cap: monomial_cap,
        });
    }
    let deg = deg.to_u32().expect("bounded by the cap");
    let monomials = monomials_of_degree(cfg.n + 1, deg);
    let mut conditions = Vec::new();
    for (i, m) in d.m().iter().enumerate() {
        if !m.is_positive() {
            continue;
        }
        if *m > Int::from(deg) {
            // Only the zero form vanishes to order > d at a point.
            conditions.extend(monomials.iter().enumerate().map(|(j, _)| {
                let mut row = vec![Rat::zero(); monomials.len()];
                row[j] = Rat::one();
                row
            }));
            continue;
        }
        let m = m.to_u32().expect("m <= d");
        conditions.extend(vanishing_rows(&monomials, &cfg.point(i + 1), m)?);
    }
    let kernel = linalg::kernel(&conditions, monomials.len());
    Ok(Some(FormSpace {
        degree: deg,
        monomials,
        kernel,
        conditions,
    }))
}

pub fn h0(d: &DivisorClass, cfg: &PointConfig) -> Result<usize> {
    Ok(form_space(d, cfg, DEFAULT_MONOMIAL_CAP)?.map_or(0, |s| s.dim()))
}

/// The unique section of a class with `h0 = 1`, leading coefficient 1.
pub fn section_of(d: &DivisorClass, cfg: &PointConfig) -> Result<MultiPoly> {
    let space = form_space(d, cfg, DEFAULT_MONOMIAL_CAP)?;
    match space {
        Some(s) if s.dim() == 1 => Ok(s.form(&s.kernel[0], &cfg.vars()).monic()),
        Some(s) => Err(Error::NotUnique(s.dim())),
        None => Err(Error::NotUnique(0)),
    }
}

/// `F` in affine coordinates centered at `p`: the chart variable is dropped
/// and every other `z_j` stands for `z_j/z_k - p_j/p_k`.
fn recenter(f: &MultiPoly, p: &[Rat]) -> Result<MultiPoly> {
    if p.len() != f.nvars() {
        return Err(Error::Shape(format!(
            "point has {} coordinates, polynomial {} variables",
            p.len(),
            f.nvars()
        )));
    }
    let k = first_nonzero(p)?;
    let vars = f.vars().clone();
    let images: Vec<MultiPoly> = (0..p.len())
        .map(|j| {
            if j == k {
                MultiPoly::one(&vars)
            } else {
                &MultiPoly::var(&vars, j) + &MultiPoly::constant(&vars, &p[j] / &p[k])
            }
        })
        .collect();
    Ok(f.substitute(&images, &vars))
}

/// Lowest order of a nonvanishing partial of `F` at `p`; `None` for `F = 0`.
pub fn mult_at_point(f: &MultiPoly, p: &[Rat]) -> Result<Option<u32>> {
    if f.is_zero() {
        return Ok(None);
    }
    Ok(recenter(f, p)?.min_degree())
}

/// Lowest-degree part of `F` in affine coordinates centered at `p`.
pub fn initial_form_at_point(f: &MultiPoly, p: &[Rat]) -> Result<MultiPoly> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let g = recenter(f, p)?;
    let low = g.min_degree().expect("nonzero after an invertible change");
    Ok(g.homogeneous_part(low))
}

/// Whether `F(1, s, s^2, ..)` is identically zero.
fn vanishes_on_curve(f: &MultiPoly) -> bool {
    let mut acc: std::collections::HashMap<u32, Rat> = std::collections::HashMap::new();
    for (m, c) in f.terms() {
        let e: u32 = m.exps().iter().enumerate().map(|(j, &x)| j as u32 * x).sum();
        *acc.entry(e).or_insert_with(Rat::zero) += c;
    }
    acc.values().all(Zero::is_zero)
}

/// Largest `m` such that all partials of order `< m` vanish on the curve.
pub fn mult_along_curve(f: &MultiPoly) -> Result<u32> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let mut level: Vec<MultiPoly> = vec![f.clone()];
    let mut order = 0;
    loop {
        if level.iter().any(|g| !vanishes_on_curve(g)) {
            return Ok(order);
        }
        let mut next: HashSet<MultiPoly> = HashSet::new();
        for g in &level {
            for i in 0..g.nvars() {
                let dg = g.derivative(i);
                if !dg.is_zero() {
                    next.insert(dg);
                }
            }
        }
        level = next.into_iter().collect();
        order += 1;
    }
}

/// Dimension of the span of some forms of one degree.
pub fn span_dim(forms: &[MultiPoly]) -> usize {
    let Some(deg) = forms.iter().find_map(|f| f.degree()) else {
        return 0;
    };
    let nvars = forms[0].nvars();
    let monomials = monomials_of_degree(nvars, deg);
    let mut span = Span::new();
    for f in forms {
        span.insert(monomials.iter().map(|m| f.coeff(m)).collect());
    }
    span.dim()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GenerationReport {
    pub h0: usize,
    pub span_dim: usize,
    pub generated: bool,
    /// Generator multisets whose products were formed.
    pub products: usize,
}

impl GenerationReport {
    pub fn to_json(&self) -> Value {
        json!({
            "h0": self.h0,
            "span_dim": self.span_dim,
            "generated": self.generated,
            "products": self.products,
        })
    }
}

#[derive(Clone, Copy, Debug)]
pub struct GenerationCaps {
    pub monomials: usize,
    pub multisets: usize,
}

impl Default for GenerationCaps {
    fn default() -> Self {
        Self {
            monomials: DEFAULT_MONOMIAL_CAP,
            multisets: DEFAULT_MULTISET_CAP,
        }
    }
}

/// Spans `H^0(D)` by products of minimal-divisor sections, with exceptional
/// classes absorbing the surplus multiplicity. Stops as soon as the span is
/// everything.
pub fn generation_test(d: &DivisorClass, cfg: &PointConfig, caps: GenerationCaps) -> Result<GenerationReport> {
    check_class(d, cfg)?;
    if cfg.n > MAX_GENERATION_DIM {
        return Err(Error::CapExceeded {
            what: "generation test dimension",
            cap: MAX_GENERATION_DIM,
        });
    }
    let Some(space) = form_space(d, cfg, caps.monomials)? else {
        return Ok(GenerationReport {
            h0: 0,
            span_dim: 0,
            generated: true,
            products: 0,
        });
    };
    let h0 = space.dim();
    if h0 == 0 {
        return Ok(GenerationReport {
            h0,
            span_dim: 0,
            generated: true,
            products: 0,
        });
    }
    let bc = cfg.blowup();
    let gens = enumerate_minimal(&bc);
    let sections = gens
        .iter()
        .map(|e| section_of(e, cfg))
        .collect::<Result<Vec<_>>>()?;
    let hdegs: Vec<u32> = gens.iter().map(|e| e.h()[0].to_u32().expect("small")).collect();
    let gen_m: Vec<Vec<i64>> = gens
        .iter()
        .map(|e| e.m().iter().map(|x| x.to_i64().expect("small")).collect())
        .collect();
    let target: Vec<i64> = d
        .m()
        .iter()
        .map(|x| x.to_i64().ok_or_else(|| Error::Precondition("multiplicity too large".into())))
        .collect::<Result<_>>()?;

    struct Walk<'a> {
        hdegs: &'a [u32],
        gen_m: &'a [Vec<i64>],
        sections: &'a [MultiPoly],
        target: &'a [i64],
        space: &'a FormSpace,
        vars: Vars,
        span: Span,
        h0: usize,
        nodes: usize,
        cap: usize,
        products: usize,
        picked: Vec<usize>,
    }

    impl Walk<'_> {
        fn run(&mut self, left: u32, from: usize, msum: &mut Vec<i64>) -> Result<()> {
            if self.span.dim() == self.h0 {
                return Ok(());
            }
            self.nodes += 1;
            if self.nodes > self.cap {
                return Err(Error::CapExceeded {
                    what: "generator multisets",
                    cap: self.cap,
                });
            }
            if left == 0 {
                if msum.iter().zip(self.target).all(|(s, t)| s >= t) {
                    let mut f = MultiPoly::one(&self.vars);
                    for &i in &self.picked {
                        f = &f * &self.sections[i];
                    }
                    debug_assert!(self.space.contains(&f));
                    self.products += 1;
                    self.span.insert(self.space.coeffs_of(&f));
                }
                return Ok(());
            }
            for i in from..self.hdegs.len() {
                if self.hdegs[i] > left {
                    continue;
                }
                for (s, m) in msum.iter_mut().zip(&self.gen_m[i]) {
                    *s += m;
                }
                self.picked.push(i);
                let res = self.run(left - self.hdegs[i], i, msum);
                self.picked.pop();
                for (s, m) in msum.iter_mut().zip(&self.gen_m[i]) {
                    *s -= m;
                }
                res?;
                if self.span.dim() == self.h0 {
                    break;
                }
            }
            Ok(())
        }
    }

    let mut walk = Walk {
        hdegs: &hdegs,
        gen_m: &gen_m,
        sections: &sections,
        target: &target,
        space: &space,
        vars: cfg.vars(),
        span: Span::new(),
        h0,
        nodes: 0,
        cap: caps.multisets,
        products: 0,
        picked: Vec::new(),
    };
    walk.run(space.degree, 0, &mut vec![0; cfg.r])?;
    Ok(GenerationReport {
        h0,
        span_dim: walk.span.dim(),
        generated: walk.span.dim() == h0,
        products: walk.products,
    })
}
