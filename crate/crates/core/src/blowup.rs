//! Divisors on `Bl_r P^n` for points on a rational normal curve: minimal
//! divisors, projection from the first point, multiplicity bounds, the
//! table decomposition into hyperplane classes, and effective-cone tests on
//! `X_{a,b,c}`.

use std::collections::{HashSet, VecDeque};
use std::fmt;

use num_traits::{One, Signed, ToPrimitive, Zero};
use serde_json::{json, Value};

use crate::arith::{ceil, Int, Rat};
use crate::error::{Error, Result};
use crate::lattice::{degree, intersect_unchecked, CurveClass, DivisorClass, LatticeContext};
use crate::roots::{degree_one_divisors, simple_roots, DEFAULT_ORBIT_CAP};

/// Default node budget of [`decompose_degree1`].
pub const DEFAULT_SEARCH_BUDGET: usize = 1_000_000;

/// `Bl_r P^n` with `r >= n + 3`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct BlowupContext {
    n: usize,
    r: usize,
}

impl BlowupContext {
    pub fn new(n: usize, r: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidBlowup {
                n,
                r,
                reason: "need n >= 2",
            });
        }
        if r < n + 3 {
            return Err(Error::InvalidBlowup {
                n,
                r,
                reason: "need r >= n + 3",
            });
        }
        Ok(Self { n, r })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn r(&self) -> usize {
        self.r
    }

    /// `r - n - 2`.
    pub fn alpha(&self) -> usize {
        self.r - self.n - 2
    }

    /// The same variety as `X_{2, r-n-1, n+1}`.
    pub fn lattice(&self) -> LatticeContext {
        LatticeContext::blowup(self.n, self.r).expect("r >= n + 3 gives a valid context")
    }

    /// `dH - sum m_i E_i`.
    pub fn class(&self, d: i64, m: &[i64]) -> Result<DivisorClass> {
        DivisorClass::from_ints(self.lattice(), &[d], m)
    }

    fn check(&self, d: &DivisorClass) -> Result<()> {
        if *d.ctx() != self.lattice() {
            return Err(Error::ContextMismatch(d.ctx().to_string(), self.lattice().to_string()));
        }
        Ok(())
    }

    pub fn to_json(&self) -> Value {
        json!({"n": self.n, "r": self.r})
    }
}

impl fmt::Display for BlowupContext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Bl_{}P^{}", self.r, self.n)
    }
}

/// `k`-subsets of `1..=r` in lexicographic order.
pub fn subsets(r: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, r: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..=r {
            if r + 1 - i < k - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, r, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if k <= r {
        rec(1, r, k, &mut Vec::new(), &mut out);
    }
    out
}

/// `kH - k sum_I E_i - (k-1) sum_{I^c} E_i`, `I` 1-based.
pub fn minimal_divisor(bc: &BlowupContext, k: usize, set: &[usize]) -> DivisorClass {
    let k = k as i64;
    let m: Vec<i64> = (1..=bc.r)
        .map(|i| if set.contains(&i) { k } else { k - 1 })
        .collect();
    bc.class(k, &m).expect("shape matches context")
}

/// `(k, I)` for every minimal divisor, `k` ascending then `I` lexicographic.
pub fn minimal_shapes(bc: &BlowupContext) -> Vec<(usize, Vec<usize>)> {
    let mut out = Vec::new();
    for k in 1..=1 + bc.n / 2 {
        let Some(size) = (bc.n + 2).checked_sub(2 * k) else {
            continue;
        };
        for set in subsets(bc.r, size) {
            out.push((k, set));
        }
    }
    out
}

pub fn enumerate_minimal(bc: &BlowupContext) -> Vec<DivisorClass> {
    minimal_shapes(bc)
        .into_iter()
        .map(|(k, set)| minimal_divisor(bc, k, &set))
        .collect()
}

/// Recognizes a minimal divisor, returning its `(k, I)`.
pub fn minimal_shape(e: &DivisorClass, bc: &BlowupContext) -> Option<(usize, Vec<usize>)> {
    if *e.ctx() != bc.lattice() {
        return None;
    }
    let k = e.h()[0].to_usize()?;
    if k == 0 {
        return None;
    }
    let kk = Int::from(k);
    let mut set = Vec::new();
    for (i, m) in e.m().iter().enumerate() {
        if *m == kk {
            set.push(i + 1);
        } else if *m != &kk - 1 {
            return None;
        }
    }
    (bc.n + 2 == 2 * k + set.len()).then_some((k, set))
}

/// `D~ = m_1 H - sum_{i>=2} (m_i + m_1 - d) E_i` on `Bl_{r-1} P^{n-1}`.
/// Index `i` of the target is the original point `i + 1`.
pub fn project_class(d: &DivisorClass, bc: &BlowupContext) -> Result<DivisorClass> {
    bc.check(d)?;
    let target = BlowupContext::new(bc.n - 1, bc.r - 1)?;
    let deg = &d.h()[0];
    let m1 = &d.m()[0];
    let m: Vec<Int> = d.m()[1..].iter().map(|mi| mi + m1 - deg).collect();
    DivisorClass::new(target.lattice(), vec![m1.clone()], m)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ProjectionCase {
    /// `E . (l - e_1) = 0`.
    Case0,
    /// `E . (l - e_1) = 1` with `k >= 2`.
    Case1,
    /// `E . (l - e_1) = 1` with `k = 1`.
    Special,
}

impl fmt::Display for ProjectionCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ProjectionCase::Case0 => "CASE0",
            ProjectionCase::Case1 => "CASE1",
            ProjectionCase::Special => "SPECIAL",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProjectionResult {
    pub case: ProjectionCase,
    /// The projected class on `Bl_{r-1} P^{n-1}`.
    pub target: DivisorClass,
    /// Multiplicity subtracted at the extra point `q`.
    pub e_q_coefficient: Int,
    /// In case 1, `target - (k-1) E_q` on `Bl_r P^{n-1}` with `q` last.
    pub lifted: Option<DivisorClass>,
}

impl ProjectionResult {
    pub fn to_json(&self) -> Value {
        json!({
            "case": self.case.to_string(),
            "target": self.target.to_json(),
            "e_q_coefficient": crate::arith::json_int::to_value(&self.e_q_coefficient),
            "lifted": self.lifted.as_ref().map(DivisorClass::to_json),
        })
    }
}

pub fn classify_minimal_projection(e: &DivisorClass, bc: &BlowupContext) -> Result<ProjectionResult> {
    bc.check(e)?;
    let (k, set) = minimal_shape(e, bc).ok_or_else(|| Error::NotMinimal(e.to_string()))?;
    let target = project_class(e, bc)?;
    if set.contains(&1) {
        return Ok(ProjectionResult {
            case: ProjectionCase::Case0,
            target,
            e_q_coefficient: Int::zero(),
            lifted: None,
        });
    }
    if k == 1 {
        return Ok(ProjectionResult {
            case: ProjectionCase::Special,
            target,
            e_q_coefficient: Int::zero(),
            lifted: None,
        });
    }
    let q = Int::from(k - 1);
    let y_prime = BlowupContext::new(bc.n - 1, bc.r)?;
    let mut m = target.m().to_vec();
    m.push(q.clone());
    let lifted = DivisorClass::new(y_prime.lattice(), target.h().to_vec(), m)?;
    Ok(ProjectionResult {
        case: ProjectionCase::Case1,
        target,
        e_q_coefficient: q,
        lifted: Some(lifted),
    })
}

/// `max(ceil((sum m_i - n d) / alpha), 0)`.
pub fn mult_lower_bound(d: &DivisorClass, bc: &BlowupContext) -> Result<Int> {
    bc.check(d)?;
    let excess: Int = d.m().iter().sum::<Int>() - Int::from(bc.n) * &d.h()[0];
    let q = Rat::new(excess, Int::from(bc.alpha()));
    Ok(ceil(&q).max(Int::zero()))
}

/// Writes `m_i` copies of each `i` row-major into an `n x d` table and reads
/// the columns as classes `H - E_{i_1} - .. - E_{i_l}`.
pub fn effective_decompose(d: &DivisorClass, bc: &BlowupContext) -> Result<Vec<DivisorClass>> {
    bc.check(d)?;
    let deg = &d.h()[0];
    if deg.is_negative() {
        return Err(Error::Precondition(format!("d >= 0 fails: d = {deg}")));
    }
    for (i, m) in d.m().iter().enumerate() {
        if m.is_negative() {
            return Err(Error::Precondition(format!("m_{} >= 0 fails: m_{} = {m}", i + 1, i + 1)));
        }
        if m > deg {
            return Err(Error::Precondition(format!("d >= m_{} fails: {deg} < {m}", i + 1)));
        }
    }
    let total: Int = d.m().iter().sum();
    let cells = Int::from(bc.n) * deg;
    if total > cells {
        return Err(Error::Precondition(format!(
            "sum m_i <= n d fails: {total} > {cells}"
        )));
    }
    let cols = deg.to_usize().ok_or_else(|| Error::Precondition("d too large".into()))?;
    let mut table: Vec<Vec<usize>> = vec![Vec::new(); cols];
    let mut cell = 0usize;
    for (i, m) in d.m().iter().enumerate() {
        for _ in 0..m.to_usize().unwrap_or(0) {
            table[cell % cols].push(i + 1);
            cell += 1;
        }
    }
    let ctx = bc.lattice();
    Ok(table
        .into_iter()
        .map(|col| {
            let mut c = ctx.hyperplane(1);
            for i in col {
                c = &c - &ctx.exceptional(i);
            }
            c
        })
        .collect())
}

/// Weyl image of a curve class: `g + (alpha . g) alpha^v`.
fn reflect_curve(alpha: &DivisorClass, dual: &CurveClass, g: &CurveClass) -> CurveClass {
    let t = intersect_unchecked(alpha, g);
    if t.is_zero() {
        g.clone()
    } else {
        g + &(dual * &t)
    }
}

/// W-orbit of a curve class under the action adjoint to the one on `Pic`.
pub fn curve_orbit(g: &CurveClass, cap: usize) -> Result<Vec<CurveClass>> {
    let rs = simple_roots(g.ctx());
    let duals: Vec<CurveClass> = rs.simple_roots().iter().map(CurveClass::dual_of).collect();
    let mut seen: HashSet<CurveClass> = HashSet::from([g.clone()]);
    let mut queue = VecDeque::from([g.clone()]);
    while let Some(x) = queue.pop_front() {
        for (alpha, dual) in rs.simple_roots().iter().zip(&duals) {
            let y = reflect_curve(alpha, dual, &x);
            if !seen.contains(&y) {
                if seen.len() >= cap {
                    return Err(Error::CapExceeded {
                        what: "curve orbit",
                        cap,
                    });
                }
                seen.insert(y.clone());
                queue.push_back(y);
            }
        }
    }
    let mut out: Vec<_> = seen.into_iter().collect();
    out.sort_by(|a, b| (a.l(), a.e()).cmp(&(b.l(), b.e())));
    Ok(out)
}

/// The two nef classes whose W-translates cut out the effective cone.
///
/// The first is the family of curves of multidegree `(1,..,1)` through
/// `p_1`, so that `D . f = sum h_i - m_1`; the second is `l_{a-1}`.
pub fn face_classes(ctx: &LatticeContext) -> [CurveClass; 2] {
    let mut e = vec![Int::zero(); ctx.r()];
    e[0] = Int::one();
    let f1 = CurveClass::new(*ctx, vec![Int::one(); ctx.factors()], e).expect("shape");
    [f1, ctx.line(ctx.factors())]
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Membership {
    pub member: bool,
    /// A curve class pairing negatively with the divisor.
    pub certificate: Option<CurveClass>,
}

impl Membership {
    pub fn to_json(&self) -> Value {
        json!({
            "member": self.member,
            "certificate": self.certificate.as_ref().map(CurveClass::to_json),
        })
    }
}

/// The face inequalities of `Eff(X)` for one finite-type context.
#[derive(Clone, Debug)]
pub struct EffectiveCone {
    ctx: LatticeContext,
    curves: Vec<CurveClass>,
}

impl EffectiveCone {
    pub fn new(ctx: &LatticeContext, cap: usize) -> Result<Self> {
        let rs = simple_roots(ctx);
        if !rs.is_finite() {
            return Err(Error::InfiniteType {
                a: ctx.a(),
                b: ctx.b(),
                c: ctx.c(),
            });
        }
        let mut curves = Vec::new();
        for f in face_classes(ctx) {
            curves.extend(curve_orbit(&f, cap)?);
        }
        Ok(Self { ctx: *ctx, curves })
    }

    pub fn ctx(&self) -> &LatticeContext {
        &self.ctx
    }

    pub fn inequalities(&self) -> &[CurveClass] {
        &self.curves
    }

    pub fn membership(&self, d: &DivisorClass) -> Result<Membership> {
        if *d.ctx() != self.ctx {
            return Err(Error::ContextMismatch(d.ctx().to_string(), self.ctx.to_string()));
        }
        let bad = self
            .curves
            .iter()
            .find(|g| intersect_unchecked(d, g).is_negative());
        Ok(Membership {
            member: bad.is_none(),
            certificate: bad.cloned(),
        })
    }
}

pub fn eff_membership(d: &DivisorClass, ctx: &LatticeContext) -> Result<Membership> {
    EffectiveCone::new(ctx, DEFAULT_ORBIT_CAP)?.membership(d)
}

/// Writes `D` as a sum of degree-one classes by bounded backtracking.
/// `Ok(None)` means the search space was exhausted without a solution.
pub fn decompose_degree1(
    d: &DivisorClass,
    ctx: &LatticeContext,
    budget: usize,
) -> Result<Option<Vec<DivisorClass>>> {
    if d.ctx() != ctx {
        return Err(Error::ContextMismatch(d.ctx().to_string(), ctx.to_string()));
    }
    let deg = degree(d)?;
    if !deg.is_integer() || deg.is_negative() {
        return Err(Error::Precondition(format!(
            "degree must be a nonnegative integer, got {}",
            crate::arith::format_rat(&deg)
        )));
    }
    let slots = deg
        .to_integer()
        .to_usize()
        .ok_or_else(|| Error::Precondition("degree too large".into()))?;
    let mut gens = degree_one_divisors(ctx, DEFAULT_ORBIT_CAP)?;
    let hsum = |x: &DivisorClass| x.h().iter().sum::<Int>();
    gens.sort_by(|x, y| hsum(y).cmp(&hsum(x)).then_with(|| x.sort_key().cmp(&y.sort_key())));
    let lookup: HashSet<DivisorClass> = gens.iter().cloned().collect();

    struct Search<'a> {
        gens: &'a [DivisorClass],
        lookup: &'a HashSet<DivisorClass>,
        nodes: usize,
        budget: usize,
        picked: Vec<usize>,
    }

    // Sums of effective classes pair nonnegatively with the nef classes
    // l_i and (sum l) - e_j.
    fn feasible(rest: &DivisorClass) -> bool {
        if rest.h().iter().any(|h| h.is_negative()) {
            return false;
        }
        let total: Int = rest.h().iter().sum();
        rest.m().iter().all(|m| *m <= total)
    }

    impl Search<'_> {
        fn run(&mut self, rest: &DivisorClass, slots: usize, from: usize) -> Result<bool> {
            self.nodes += 1;
            if self.nodes > self.budget {
                return Err(Error::CapExceeded {
                    what: "degree-one decomposition search",
                    cap: self.budget,
                });
            }
            if slots == 0 {
                return Ok(rest.is_zero());
            }
            if !feasible(rest) {
                return Ok(false);
            }
            if slots == 1 {
                if !self.lookup.contains(rest) {
                    return Ok(false);
                }
                if let Some(i) = self.gens[from..].iter().position(|g| g == rest) {
                    self.picked.push(from + i);
                    return Ok(true);
                }
                return Ok(false);
            }
            for i in from..self.gens.len() {
                let g = &self.gens[i];
                if g.h().iter().zip(rest.h()).any(|(a, b)| a > b) {
                    continue;
                }
                self.picked.push(i);
                if self.run(&(rest - g), slots - 1, i)? {
                    return Ok(true);
                }
                self.picked.pop();
            }
            Ok(false)
        }
    }

    let mut search = Search {
        gens: &gens,
        lookup: &lookup,
        nodes: 0,
        budget,
        picked: Vec::new(),
    };
    if search.run(d, slots, 0)? {
        Ok(Some(search.picked.iter().map(|&i| gens[i].clone()).collect()))
    } else {
        Ok(None)
    }
}
