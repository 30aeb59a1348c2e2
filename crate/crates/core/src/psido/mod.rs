//! Pseudo-differential operators `Σ c_i ∂^i` with [`DiffPoly`] coefficients.
//!
//! Operators are kept in left-normal form (coefficients to the left of the
//! powers of `∂`). An operator may carry a truncation floor `F`: every stored
//! coefficient is exact, and nothing is known about degrees below `F`.
//! Exact operators (`floor() == None`) are finite sums.

mod print;

use std::collections::BTreeMap;
use std::ops::{Add, Neg, Sub};

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::diffpoly::{parse_expr, DiffPoly, Expr, FieldRegistry, MonomialJson, Rational, Spin};
use crate::error::{Error, Result};

/// Lowest and highest `∂` degrees of an operator, `p <= q`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DegreeWindow {
    p: i32,
    q: i32,
}

impl DegreeWindow {
    pub fn new(p: i32, q: i32) -> Result<Self> {
        if p > q {
            return Err(Error::InvalidWindow { p, q });
        }
        Ok(DegreeWindow { p, q })
    }

    pub fn p(&self) -> i32 {
        self.p
    }

    pub fn q(&self) -> i32 {
        self.q
    }

    pub fn contains(&self, deg: i32) -> bool {
        self.p <= deg && deg <= self.q
    }

    pub fn is_within(&self, outer: &DegreeWindow) -> bool {
        outer.p <= self.p && self.q <= outer.q
    }

    /// The window paired with this one by the residue pairing.
    pub fn dual(&self) -> DegreeWindow {
        DegreeWindow {
            p: -1 - self.q,
            q: -1 - self.p,
        }
    }
}

/// Spin, window and floor of an operator.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OperatorMeta {
    pub spin: Spin,
    pub window: Option<DegreeWindow>,
    pub floor: Option<i32>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct PsiDO {
    terms: BTreeMap<i32, DiffPoly>,
    floor: Option<i32>,
}

/// Generalized binomial `C(n, k)` for integer `n` and `k >= 0`.
pub fn binomial(n: i64, k: u32) -> Rational {
    let mut acc = Rational::one();
    for t in 0..k as i64 {
        acc = acc * Rational::from_integer((n - t).into()) / Rational::from_integer((t + 1).into());
    }
    acc
}

impl PsiDO {
    pub fn zero() -> Self {
        PsiDO::default()
    }

    pub fn one() -> Self {
        PsiDO::constant(DiffPoly::one())
    }

    /// `∂^k`.
    pub fn d(k: i32) -> Self {
        PsiDO::term(k, DiffPoly::one())
    }

    /// Multiplication operator by `f`.
    pub fn constant(f: DiffPoly) -> Self {
        PsiDO::term(0, f)
    }

    pub fn term(deg: i32, coeff: DiffPoly) -> Self {
        PsiDO::from_terms([(deg, coeff)], None)
    }

    /// Builds an operator; terms below `floor` are discarded, repeats summed.
    pub fn from_terms<I: IntoIterator<Item = (i32, DiffPoly)>>(
        terms: I,
        floor: Option<i32>,
    ) -> Self {
        let mut map: BTreeMap<i32, DiffPoly> = BTreeMap::new();
        for (deg, c) in terms {
            if floor.is_some_and(|f| deg < f) {
                continue;
            }
            *map.entry(deg).or_default() += c;
        }
        map.retain(|_, c| !c.is_zero());
        PsiDO { terms: map, floor }
    }

    /// Parses operator syntax such as `D^2 + u` or `u D^-1`; products compose.
    /// Negative powers of `D` need `floor`.
    pub fn parse(src: &str, registry: &FieldRegistry, floor: Option<i32>) -> Result<Self> {
        let expr = parse_expr(src)?;
        let op = eval_operator(&expr, registry, floor)?;
        Ok(match floor {
            Some(f) => op.truncate(f),
            None => op,
        })
    }

    pub fn floor(&self) -> Option<i32> {
        self.floor
    }

    pub fn is_exact(&self) -> bool {
        self.floor.is_none()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Coefficient of `∂^deg` (zero when absent).
    pub fn coeff(&self, deg: i32) -> DiffPoly {
        self.terms.get(&deg).cloned().unwrap_or_default()
    }

    pub fn coeff_ref(&self, deg: i32) -> Option<&DiffPoly> {
        self.terms.get(&deg)
    }

    /// Whether the coefficient at `deg` is certified.
    pub fn is_known(&self, deg: i32) -> bool {
        self.floor.is_none_or(|f| deg >= f)
    }

    /// Terms in ascending degree.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (i32, &DiffPoly)> {
        self.terms.iter().map(|(d, c)| (*d, c))
    }

    pub fn top_degree(&self) -> Option<i32> {
        self.terms.keys().next_back().copied()
    }

    pub fn lowest_degree(&self) -> Option<i32> {
        self.terms.keys().next().copied()
    }

    /// Highest degree that may carry a nonzero coefficient, counting the
    /// unknown tail below the floor.
    fn effective_top(&self) -> Option<i32> {
        let stored = self.top_degree();
        match self.floor {
            None => stored,
            Some(f) => Some(stored.map_or(f - 1, |s| s.max(f - 1))),
        }
    }

    /// Keeps degrees `>= floor` and records the floor.
    pub fn truncate(&self, floor: i32) -> PsiDO {
        let floor = self.floor.map_or(floor, |f| f.max(floor));
        PsiDO {
            terms: self
                .terms
                .range(floor..)
                .map(|(d, c)| (*d, c.clone()))
                .collect(),
            floor: Some(floor),
        }
    }

    /// Window `(p, q)`: `p` is the floor for tailed operators.
    pub fn window_of(&self) -> Option<DegreeWindow> {
        let q = self.top_degree()?;
        let p = match self.floor {
            Some(f) => f,
            None => self.lowest_degree()?,
        };
        Some(DegreeWindow { p: p.min(q), q })
    }

    pub fn spin_of_op(&self) -> Spin {
        self.terms.iter().fold(Spin::Any, |acc, (d, c)| {
            let s = match c.spin_of() {
                Spin::Homogeneous(s) => Spin::Homogeneous(s + d),
                other => other,
            };
            acc.join(s)
        })
    }

    pub fn meta(&self) -> OperatorMeta {
        OperatorMeta {
            spin: self.spin_of_op(),
            window: self.window_of(),
            floor: self.floor,
        }
    }

    pub fn is_within(&self, p: i32, q: i32) -> bool {
        self.terms.keys().all(|d| p <= *d && *d <= q)
    }

    pub fn scale(&self, c: &Rational) -> PsiDO {
        PsiDO::from_terms(self.terms.iter().map(|(d, p)| (*d, p.scale(c))), self.floor)
    }

    pub fn map_coefficients<F: FnMut(&DiffPoly) -> DiffPoly>(&self, mut f: F) -> PsiDO {
        PsiDO::from_terms(self.terms.iter().map(|(d, p)| (*d, f(p))), self.floor)
    }

    fn needs_floor(&self, other: &PsiDO) -> bool {
        self.lowest_degree().is_some_and(|d| d < 0)
            && other.terms.values().any(|c| !c.is_constant())
    }

    /// Floor below which `self ∘ other` cannot be certified.
    fn derived_floor(&self, other: &PsiDO) -> Option<i32> {
        let from_self = self.floor.zip(other.effective_top()).map(|(f, t)| f + t);
        let from_other = other.floor.zip(self.effective_top()).map(|(f, t)| f + t);
        match (from_self, from_other) {
            (Some(a), Some(b)) => Some(a.max(b)),
            (a, b) => a.or(b),
        }
    }

    /// Leibniz product `self ∘ other`.
    ///
    /// The result floor is the tightest one certified by the input floors.
    /// When both inputs are exact but the product has an infinite tail
    /// (a negative power meets a non-constant coefficient), the tail is cut
    /// at `p_self + p_other`; use [`PsiDO::compose_truncated`] for more.
    pub fn compose(&self, other: &PsiDO) -> PsiDO {
        let floor = match self.derived_floor(other) {
            Some(f) => Some(f),
            None if self.needs_floor(other) => {
                Some(self.lowest_degree().unwrap_or(0) + other.lowest_degree().unwrap_or(0))
            }
            None => None,
        };
        self.compose_with(other, floor)
    }

    /// `self ∘ other` truncated at `max(floor, derived floor)`.
    pub fn compose_truncated(&self, other: &PsiDO, floor: i32) -> PsiDO {
        let f = self.derived_floor(other).map_or(floor, |d| d.max(floor));
        self.compose_with(other, Some(f))
    }

    fn compose_with(&self, other: &PsiDO, floor: Option<i32>) -> PsiDO {
        if (self.is_zero() && self.is_exact()) || (other.is_zero() && other.is_exact()) {
            return PsiDO::zero();
        }
        let mut out: BTreeMap<i32, DiffPoly> = BTreeMap::new();
        // derivative towers of the right-hand coefficients
        let mut towers: BTreeMap<i32, Vec<DiffPoly>> = other
            .terms
            .iter()
            .map(|(j, c)| (*j, vec![c.clone()]))
            .collect();
        for (&i, a) in &self.terms {
            for (&j, tower) in towers.iter_mut() {
                let constant = tower[0].is_constant();
                let mut binom = Rational::one();
                let mut l: u32 = 0;
                loop {
                    if i >= 0 && l as i64 > i as i64 {
                        break;
                    }
                    if l > 0 && constant {
                        break;
                    }
                    let deg = i + j - l as i32;
                    match floor {
                        Some(f) if deg < f => break,
                        None if i < 0 && l > 0 => unreachable!("infinite tail without a floor"),
                        _ => {}
                    }
                    while tower.len() <= l as usize {
                        let next = tower.last().unwrap().total_derivative();
                        tower.push(next);
                    }
                    let coeff = (a * &tower[l as usize]).scale(&binom);
                    *out.entry(deg).or_default() += coeff;
                    binom = binom * Rational::from_integer((i as i64 - l as i64).into())
                        / Rational::from_integer((l as i64 + 1).into());
                    if binom.is_zero() {
                        break;
                    }
                    l += 1;
                }
            }
        }
        PsiDO::from_terms(out, floor)
    }

    pub fn pow(&self, k: u32) -> PsiDO {
        let mut acc = PsiDO::one();
        for _ in 0..k {
            acc = acc.compose(self);
        }
        acc
    }

    pub fn commutator(&self, other: &PsiDO) -> PsiDO {
        &self.compose(other) - &other.compose(self)
    }

    pub fn commutator_truncated(&self, other: &PsiDO, floor: i32) -> PsiDO {
        &self.compose_truncated(other, floor) - &other.compose_truncated(self, floor)
    }

    /// Differential part: degrees `>= 0`. Always exact.
    pub fn project_plus(&self) -> PsiDO {
        PsiDO {
            terms: self
                .terms
                .range(0..)
                .map(|(d, c)| (*d, c.clone()))
                .collect(),
            floor: None,
        }
    }

    /// Integral part: degrees `< 0`, inheriting the floor.
    pub fn project_minus(&self) -> PsiDO {
        PsiDO {
            terms: self
                .terms
                .range(..0)
                .map(|(d, c)| (*d, c.clone()))
                .collect(),
            floor: self.floor,
        }
    }

    /// Coefficient of `∂^{-1}`.
    pub fn residue(&self) -> DiffPoly {
        self.coeff(-1)
    }

    /// Compares coefficients at every degree `>= floor`.
    pub fn agrees_above(&self, other: &PsiDO, floor: i32) -> bool {
        let degrees = self
            .terms
            .range(floor..)
            .map(|(d, _)| *d)
            .chain(other.terms.range(floor..).map(|(d, _)| *d));
        for d in degrees {
            if self.coeff(d) != other.coeff(d) {
                return false;
            }
        }
        true
    }

    /// Highest certified-degree floor shared by both operators.
    pub fn common_floor(&self, other: &PsiDO) -> Option<i32> {
        match (self.floor, other.floor) {
            (Some(a), Some(b)) => Some(a.max(b)),
            (a, b) => a.or(b),
        }
    }
}

/// `∂^n ∘ f` in left-normal form. Negative `n` needs a floor.
pub fn monomial_action(n: i32, f: &DiffPoly, floor: Option<i32>) -> Result<PsiDO> {
    let rhs = PsiDO::constant(f.clone());
    if n >= 0 {
        Ok(PsiDO::d(n).compose(&rhs))
    } else {
        let floor = floor.ok_or(Error::MissingFloor(n))?;
        Ok(PsiDO::d(n).compose_truncated(&rhs, floor))
    }
}

/// Residue pairing: `res(A ∘ B)` when the windows are dual, otherwise zero.
pub fn pairing(a: &PsiDO, b: &PsiDO) -> DiffPoly {
    let (Some(wa), Some(wb)) = (a.window_of(), b.window_of()) else {
        return DiffPoly::zero();
    };
    if 1 + wa.p + wb.q != 0 || 1 + wa.q + wb.p != 0 {
        return DiffPoly::zero();
    }
    a.compose_truncated(b, -1).residue()
}

/// Pairing density for the weight-zero product: additionally requires the
/// operator spins to cancel. Integrate with
/// [`DiffPoly::equals_mod_total_derivative`].
pub fn combined_pairing(a: &PsiDO, b: &PsiDO) -> DiffPoly {
    match (a.spin_of_op(), b.spin_of_op()) {
        (Spin::Homogeneous(x), Spin::Homogeneous(y)) if x + y == 0 => pairing(a, b),
        _ => DiffPoly::zero(),
    }
}

fn merge_floor(a: Option<i32>, b: Option<i32>) -> Option<i32> {
    match (a, b) {
        (Some(x), Some(y)) => Some(x.max(y)),
        (x, y) => x.or(y),
    }
}

impl Add for &PsiDO {
    type Output = PsiDO;
    fn add(self, rhs: &PsiDO) -> PsiDO {
        let floor = merge_floor(self.floor, rhs.floor);
        PsiDO::from_terms(
            self.terms
                .iter()
                .chain(rhs.terms.iter())
                .map(|(d, c)| (*d, c.clone())),
            floor,
        )
    }
}

impl Add for PsiDO {
    type Output = PsiDO;
    fn add(self, rhs: PsiDO) -> PsiDO {
        &self + &rhs
    }
}

impl Neg for &PsiDO {
    type Output = PsiDO;
    fn neg(self) -> PsiDO {
        PsiDO {
            terms: self.terms.iter().map(|(d, c)| (*d, -c)).collect(),
            floor: self.floor,
        }
    }
}

impl Sub for &PsiDO {
    type Output = PsiDO;
    fn sub(self, rhs: &PsiDO) -> PsiDO {
        self + &(-rhs)
    }
}

impl Sub for PsiDO {
    type Output = PsiDO;
    fn sub(self, rhs: PsiDO) -> PsiDO {
        &self - &rhs
    }
}

fn eval_operator(e: &Expr, reg: &FieldRegistry, floor: Option<i32>) -> Result<PsiDO> {
    let compose = |a: &PsiDO, b: &PsiDO| match floor {
        Some(f) => a.compose_truncated(b, f),
        None => a.compose(b),
    };
    let parse_err = |msg: &str| Error::Parse {
        pos: 0,
        msg: msg.to_string(),
    };
    Ok(match e {
        Expr::D => PsiDO::d(1),
        Expr::Pow(b, k) if **b == Expr::D => {
            if *k < 0 && floor.is_none() {
                return Err(Error::MissingFloor(*k as i32));
            }
            PsiDO::d(*k as i32)
        }
        e if !e.mentions_d() => PsiDO::constant(e.to_diffpoly(reg)?),
        Expr::Add(v) => {
            let mut acc = PsiDO::zero();
            for t in v {
                acc = &acc + &eval_operator(t, reg, floor)?;
            }
            acc
        }
        Expr::Neg(t) => -&eval_operator(t, reg, floor)?,
        Expr::Mul(v) => {
            let mut acc = PsiDO::one();
            for t in v {
                acc = compose(&acc, &eval_operator(t, reg, floor)?);
            }
            acc
        }
        Expr::Div(a, b) => {
            let den = b.to_diffpoly(reg)?;
            match den.as_constant() {
                Some(c) if !c.is_zero() => eval_operator(a, reg, floor)?.scale(&c.recip()),
                _ => return Err(parse_err("division by a non-constant or zero")),
            }
        }
        Expr::Pow(b, k) => {
            let base = eval_operator(b, reg, floor)?;
            let mut acc = PsiDO::one();
            for _ in 0..*k {
                acc = compose(&acc, &base);
            }
            acc
        }
        Expr::Deriv(..) => return Err(parse_err("cannot differentiate an operator")),
        Expr::Num(_) | Expr::Jet(..) => unreachable!("handled above"),
    })
}

/// JSON form `{"floor": int | "-inf", "terms": [{"deg": i, "coeff": [...]}]}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PsiDOJson {
    pub floor: serde_json::Value,
    pub terms: Vec<PsiDOTermJson>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PsiDOTermJson {
    pub deg: i32,
    pub coeff: Vec<MonomialJson>,
}

impl PsiDO {
    /// Terms listed in descending degree.
    pub fn to_json(&self) -> PsiDOJson {
        PsiDOJson {
            floor: match self.floor {
                Some(f) => serde_json::Value::from(f),
                None => serde_json::Value::from("-inf"),
            },
            terms: self
                .terms
                .iter()
                .rev()
                .map(|(d, c)| PsiDOTermJson {
                    deg: *d,
                    coeff: c.to_json(),
                })
                .collect(),
        }
    }

    pub fn to_json_value(&self) -> serde_json::Value {
        serde_json::to_value(self.to_json()).expect("serializable")
    }

    pub fn from_json(j: &PsiDOJson, registry: &FieldRegistry) -> Result<Self> {
        let floor = match &j.floor {
            serde_json::Value::String(s) if s == "-inf" => None,
            serde_json::Value::Number(n) => Some(
                n.as_i64()
                    .and_then(|v| i32::try_from(v).ok())
                    .ok_or_else(|| Error::Json(format!("bad floor {n}")))?,
            ),
            other => return Err(Error::Json(format!("bad floor {other}"))),
        };
        let mut terms = Vec::with_capacity(j.terms.len());
        for t in &j.terms {
            if floor.is_some_and(|f| t.deg < f) {
                return Err(Error::Json(format!("term of degree {} below floor", t.deg)));
            }
            terms.push((t.deg, DiffPoly::from_json(&t.coeff, registry)?));
        }
        Ok(PsiDO::from_terms(terms, floor))
    }

    pub fn from_json_value(value: &serde_json::Value, registry: &FieldRegistry) -> Result<Self> {
        let j: PsiDOJson =
            serde_json::from_value(value.clone()).map_err(|e| Error::Json(e.to_string()))?;
        PsiDO::from_json(&j, registry)
    }
}
