//! Differential polynomials with exact rational coefficients.
//!
//! A [`DiffPoly`] is a finite sum of rational multiples of power products of
//! jets `u_s^{(k)}`. The ring is commutative; the total derivative `d` acts as
//! the derivation `d(u_s^{(k)}) = u_s^{(k+1)}`.

mod json;
mod parse;
mod print;

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub use json::{JetJson, MonomialJson};
pub use parse::{parse_expr, Expr};

/// Exact rational coefficient.
pub type Rational = BigRational;

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// A named field of fixed conformal spin.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FieldSymbol {
    name: Arc<str>,
    spin: i32,
}

impl FieldSymbol {
    pub fn new(name: &str, spin: i32) -> Self {
        FieldSymbol {
            name: Arc::from(name),
            spin,
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn spin(&self) -> i32 {
        self.spin
    }

    pub fn jet(&self, order: u32) -> Jet {
        Jet {
            field: self.clone(),
            order,
        }
    }

    /// The polynomial consisting of this field alone.
    pub fn poly(&self) -> DiffPoly {
        DiffPoly::jet(self.jet(0))
    }
}

impl fmt::Display for FieldSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name)
    }
}

/// `order`-th derivative of a field.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Jet {
    pub field: FieldSymbol,
    pub order: u32,
}

impl Jet {
    pub fn spin(&self) -> i32 {
        self.field.spin + self.order as i32
    }

    pub fn derive(&self) -> Jet {
        Jet {
            field: self.field.clone(),
            order: self.order + 1,
        }
    }
}

/// Sorted list of `(jet, power)` pairs with positive powers and no repeated jet.
/// The empty product is the constant monomial `1`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PowerProduct(Vec<(Jet, u32)>);

impl PowerProduct {
    pub fn one() -> Self {
        PowerProduct(Vec::new())
    }

    pub fn from_jet(jet: Jet, power: u32) -> Self {
        if power == 0 {
            PowerProduct::one()
        } else {
            PowerProduct(vec![(jet, power)])
        }
    }

    /// Builds a canonical product from unsorted factors, merging repeats.
    pub fn from_factors<I: IntoIterator<Item = (Jet, u32)>>(factors: I) -> Self {
        let mut map: BTreeMap<Jet, u32> = BTreeMap::new();
        for (jet, power) in factors {
            if power > 0 {
                *map.entry(jet).or_insert(0) += power;
            }
        }
        PowerProduct(map.into_iter().collect())
    }

    pub fn factors(&self) -> &[(Jet, u32)] {
        &self.0
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn spin(&self) -> i32 {
        self.0.iter().map(|(j, p)| j.spin() * *p as i32).sum()
    }

    /// Total polynomial degree (number of jet factors counted with power).
    pub fn degree(&self) -> u32 {
        self.0.iter().map(|(_, p)| *p).sum()
    }

    pub fn power_of(&self, jet: &Jet) -> u32 {
        self.0
            .binary_search_by(|(j, _)| j.cmp(jet))
            .map(|i| self.0[i].1)
            .unwrap_or(0)
    }

    pub fn mul(&self, other: &PowerProduct) -> PowerProduct {
        let (a, b) = (&self.0, &other.0);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                std::cmp::Ordering::Less => {
                    out.push(a[i].clone());
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    out.push(b[j].clone());
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    out.push((a[i].0.clone(), a[i].1 + b[j].1));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        PowerProduct(out)
    }

    /// Removes one copy of `jet`; `None` when absent.
    fn without_one(&self, jet: &Jet) -> Option<(u32, PowerProduct)> {
        let idx = self.0.iter().position(|(j, _)| j == jet)?;
        let mut rest = self.0.clone();
        let power = rest[idx].1;
        if power == 1 {
            rest.remove(idx);
        } else {
            rest[idx].1 -= 1;
        }
        Some((power, PowerProduct(rest)))
    }
}

/// Grading of a polynomial under conformal spin.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Spin {
    /// The zero polynomial is homogeneous of every spin.
    Any,
    Homogeneous(i32),
    Inhomogeneous,
}

impl Spin {
    pub fn value(self) -> Option<i32> {
        match self {
            Spin::Homogeneous(s) => Some(s),
            _ => None,
        }
    }

    /// Combines the gradings of two summands.
    pub fn join(self, other: Spin) -> Spin {
        match (self, other) {
            (Spin::Any, s) | (s, Spin::Any) => s,
            (Spin::Homogeneous(a), Spin::Homogeneous(b)) if a == b => Spin::Homogeneous(a),
            _ => Spin::Inhomogeneous,
        }
    }
}

/// Canonical differential polynomial: like terms merged, no zero coefficients.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct DiffPoly {
    terms: BTreeMap<PowerProduct, Rational>,
}

impl DiffPoly {
    pub fn zero() -> Self {
        DiffPoly::default()
    }

    pub fn one() -> Self {
        DiffPoly::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        DiffPoly::monomial(c, PowerProduct::one())
    }

    pub fn jet(jet: Jet) -> Self {
        DiffPoly::monomial(Rational::one(), PowerProduct::from_jet(jet, 1))
    }

    pub fn monomial(c: Rational, pp: PowerProduct) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(pp, c);
        }
        DiffPoly { terms }
    }

    pub fn from_terms<I: IntoIterator<Item = (PowerProduct, Rational)>>(iter: I) -> Self {
        let mut p = DiffPoly::zero();
        for (pp, c) in iter {
            p.add_term(pp, c);
        }
        p
    }

    /// Parses the textual form, e.g. `3/2 u u' + (1/2)^2 u'''`.
    pub fn parse(src: &str, registry: &FieldRegistry) -> Result<Self> {
        parse::parse_expr(src)?.to_diffpoly(registry)
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

    /// Terms in canonical order.
    pub fn terms(&self) -> impl Iterator<Item = (&PowerProduct, &Rational)> {
        self.terms.iter()
    }

    pub fn coeff(&self, pp: &PowerProduct) -> Rational {
        self.terms.get(pp).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn constant_term(&self) -> Rational {
        self.coeff(&PowerProduct::one())
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(PowerProduct::is_one)
    }

    pub fn as_constant(&self) -> Option<Rational> {
        self.is_constant().then(|| self.constant_term())
    }

    fn add_term(&mut self, pp: PowerProduct, c: Rational) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(pp) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn scale(&self, c: &Rational) -> DiffPoly {
        if c.is_zero() {
            return DiffPoly::zero();
        }
        DiffPoly {
            terms: self
                .terms
                .iter()
                .map(|(pp, k)| (pp.clone(), k * c))
                .collect(),
        }
    }

    pub fn pow(&self, n: u32) -> DiffPoly {
        let mut acc = DiffPoly::one();
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    /// Fields occurring in the polynomial, sorted and deduplicated.
    pub fn fields(&self) -> Vec<FieldSymbol> {
        let mut out: Vec<FieldSymbol> = self
            .terms
            .keys()
            .flat_map(|pp| pp.0.iter().map(|(j, _)| j.field.clone()))
            .collect();
        out.sort();
        out.dedup();
        out
    }

    /// Highest derivative order of `field` present, if any.
    pub fn max_order(&self, field: &FieldSymbol) -> Option<u32> {
        self.terms
            .keys()
            .flat_map(|pp| pp.0.iter())
            .filter(|(j, _)| &j.field == field)
            .map(|(j, _)| j.order)
            .max()
    }

    /// Largest total degree among monomials; `None` for zero.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(PowerProduct::degree).max()
    }

    /// Degree of nonlinearity: highest monomial degree minus one.
    pub fn nonlinearity(&self) -> Option<u32> {
        self.degree().map(|d| d.saturating_sub(1))
    }

    pub fn spin_of(&self) -> Spin {
        self.terms
            .keys()
            .fold(Spin::Any, |acc, pp| acc.join(Spin::Homogeneous(pp.spin())))
    }

    /// Checks that no field conflicts in spin with the other operand.
    fn check_compatible(&self, other: &DiffPoly) -> Result<()> {
        let ours = self.fields();
        for theirs in other.fields() {
            if let Some(f) = ours
                .iter()
                .find(|f| f.name() == theirs.name() && f.spin() != theirs.spin())
            {
                return Err(Error::RegistryMismatch {
                    name: f.name().to_string(),
                    left: f.spin(),
                    right: theirs.spin(),
                });
            }
        }
        Ok(())
    }

    pub fn try_add(&self, other: &DiffPoly) -> Result<DiffPoly> {
        self.check_compatible(other)?;
        Ok(self + other)
    }

    pub fn try_mul(&self, other: &DiffPoly) -> Result<DiffPoly> {
        self.check_compatible(other)?;
        Ok(self * other)
    }

    /// Every field used must be present in `registry` with the same spin.
    pub fn check_registry(&self, registry: &FieldRegistry) -> Result<()> {
        for f in self.fields() {
            match registry.get(f.name()) {
                Some(r) if r.spin() == f.spin() => {}
                Some(r) => {
                    return Err(Error::RegistryMismatch {
                        name: f.name().to_string(),
                        left: f.spin(),
                        right: r.spin(),
                    })
                }
                None => return Err(Error::UnknownField(f.name().to_string())),
            }
        }
        Ok(())
    }

    /// Total derivative `d/dz`.
    pub fn total_derivative(&self) -> DiffPoly {
        let mut out = DiffPoly::zero();
        for (pp, c) in &self.terms {
            for (jet, power) in &pp.0 {
                let (_, rest) = pp.without_one(jet).expect("jet present");
                let next = rest.mul(&PowerProduct::from_jet(jet.derive(), 1));
                out.add_term(next, c * int(*power as i64));
            }
        }
        out
    }

    pub fn nth_derivative(&self, n: u32) -> DiffPoly {
        let mut p = self.clone();
        for _ in 0..n {
            p = p.total_derivative();
        }
        p
    }

    /// Partial derivative with respect to a single jet.
    pub fn partial(&self, jet: &Jet) -> DiffPoly {
        let mut out = DiffPoly::zero();
        for (pp, c) in &self.terms {
            if let Some((power, rest)) = pp.without_one(jet) {
                out.add_term(rest, c * int(power as i64));
            }
        }
        out
    }

    /// Euler operator `δ/δf = Σ_k (-d)^k ∂/∂f^{(k)}`.
    pub fn variational_derivative(&self, field: &FieldSymbol) -> DiffPoly {
        let Some(top) = self.max_order(field) else {
            return DiffPoly::zero();
        };
        let mut out = DiffPoly::zero();
        for k in 0..=top {
            let part = self.partial(&field.jet(k)).nth_derivative(k);
            if k % 2 == 0 {
                out += part;
            } else {
                out = &out - &part;
            }
        }
        out
    }

    /// True iff `self - other` integrates to zero, i.e. is a total derivative.
    pub fn equals_mod_total_derivative(&self, other: &DiffPoly) -> Result<bool> {
        let diff = self - other;
        let c = diff.constant_term();
        if !c.is_zero() {
            return Err(Error::ConstantResidual(c.to_string()));
        }
        Ok(diff
            .fields()
            .iter()
            .all(|f| diff.variational_derivative(f).is_zero()))
    }

    /// Replaces `field` (and its derivatives) by `value` (and its derivatives).
    pub fn substitute(&self, field: &FieldSymbol, value: &DiffPoly) -> DiffPoly {
        let mut derivs: Vec<DiffPoly> = vec![value.clone()];
        let mut out = DiffPoly::zero();
        for (pp, c) in &self.terms {
            let mut prod = DiffPoly::constant(c.clone());
            let mut kept = Vec::new();
            for (jet, power) in &pp.0 {
                if &jet.field == field {
                    while derivs.len() <= jet.order as usize {
                        let next = derivs.last().unwrap().total_derivative();
                        derivs.push(next);
                    }
                    prod = &prod * &derivs[jet.order as usize].pow(*power);
                } else {
                    kept.push((jet.clone(), *power));
                }
            }
            let rest = DiffPoly::monomial(Rational::one(), PowerProduct(kept));
            out += &prod * &rest;
        }
        out
    }

    /// Applies a linear map on jets extended as a derivation:
    /// `D(∏ j^p) = Σ p j^{p-1} D(j) ∏ rest`.
    pub fn derivation<F>(&self, mut on_jet: F) -> DiffPoly
    where
        F: FnMut(&Jet) -> DiffPoly,
    {
        let mut cache: BTreeMap<Jet, DiffPoly> = BTreeMap::new();
        let mut out = DiffPoly::zero();
        for (pp, c) in &self.terms {
            for (jet, power) in &pp.0 {
                let image = cache.entry(jet.clone()).or_insert_with(|| on_jet(jet));
                if image.is_zero() {
                    continue;
                }
                let (_, rest) = pp.without_one(jet).expect("jet present");
                let rest = DiffPoly::monomial(c * int(*power as i64), rest);
                out += &rest * &*image;
            }
        }
        out
    }

    /// Structural comparison listing every monomial whose coefficients differ.
    pub fn term_diff(&self, other: &DiffPoly) -> Vec<(PowerProduct, Rational, Rational)> {
        let mut keys: Vec<&PowerProduct> = self.terms.keys().chain(other.terms.keys()).collect();
        keys.sort();
        keys.dedup();
        keys.into_iter()
            .filter_map(|k| {
                let a = self.coeff(k);
                let b = other.coeff(k);
                (a != b).then(|| (k.clone(), a, b))
            })
            .collect()
    }

    /// Number of distinct monomials across both operands.
    pub fn union_len(&self, other: &DiffPoly) -> usize {
        self.terms.len()
            + other
                .terms
                .keys()
                .filter(|k| !self.terms.contains_key(*k))
                .count()
    }

    pub fn max_abs_denominator(&self) -> BigInt {
        self.terms
            .values()
            .map(|c| c.denom().abs())
            .max()
            .unwrap_or_else(BigInt::one)
    }
}

impl From<Rational> for DiffPoly {
    fn from(c: Rational) -> Self {
        DiffPoly::constant(c)
    }
}

impl From<Jet> for DiffPoly {
    fn from(j: Jet) -> Self {
        DiffPoly::jet(j)
    }
}

impl AddAssign<DiffPoly> for DiffPoly {
    fn add_assign(&mut self, rhs: DiffPoly) {
        for (pp, c) in rhs.terms {
            self.add_term(pp, c);
        }
    }
}

impl AddAssign<&DiffPoly> for DiffPoly {
    fn add_assign(&mut self, rhs: &DiffPoly) {
        for (pp, c) in &rhs.terms {
            self.add_term(pp.clone(), c.clone());
        }
    }
}

impl Add for &DiffPoly {
    type Output = DiffPoly;
    fn add(self, rhs: &DiffPoly) -> DiffPoly {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Add for DiffPoly {
    type Output = DiffPoly;
    fn add(mut self, rhs: DiffPoly) -> DiffPoly {
        self += rhs;
        self
    }
}

impl Neg for &DiffPoly {
    type Output = DiffPoly;
    fn neg(self) -> DiffPoly {
        DiffPoly {
            terms: self.terms.iter().map(|(pp, c)| (pp.clone(), -c)).collect(),
        }
    }
}

impl Neg for DiffPoly {
    type Output = DiffPoly;
    fn neg(self) -> DiffPoly {
        -&self
    }
}

impl Sub for &DiffPoly {
    type Output = DiffPoly;
    fn sub(self, rhs: &DiffPoly) -> DiffPoly {
        let mut out = self.clone();
        for (pp, c) in &rhs.terms {
            out.add_term(pp.clone(), -c);
        }
        out
    }
}

impl Sub for DiffPoly {
    type Output = DiffPoly;
    fn sub(self, rhs: DiffPoly) -> DiffPoly {
        &self - &rhs
    }
}

impl Mul for &DiffPoly {
    type Output = DiffPoly;
    fn mul(self, rhs: &DiffPoly) -> DiffPoly {
        let mut out = DiffPoly::zero();
        for (pa, ca) in &self.terms {
            for (pb, cb) in &rhs.terms {
                out.add_term(pa.mul(pb), ca * cb);
            }
        }
        out
    }
}

impl Mul for DiffPoly {
    type Output = DiffPoly;
    fn mul(self, rhs: DiffPoly) -> DiffPoly {
        &self * &rhs
    }
}

impl fmt::Display for DiffPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&print::to_text(self))
    }
}

/// An explicit set of fields with their spins.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FieldRegistry {
    fields: Vec<FieldSymbol>,
}

impl FieldRegistry {
    pub fn new<I: IntoIterator<Item = FieldSymbol>>(fields: I) -> Result<Self> {
        let mut reg = FieldRegistry::default();
        for f in fields {
            reg.register(f)?;
        }
        Ok(reg)
    }

    pub fn register(&mut self, field: FieldSymbol) -> Result<()> {
        if field.name() == "D" {
            return Err(Error::DuplicateField("D (reserved for ∂)".into()));
        }
        if self.get(field.name()).is_some() {
            return Err(Error::DuplicateField(field.name().to_string()));
        }
        self.fields.push(field);
        Ok(())
    }

    /// KdV: a single spin-2 field `u`.
    pub fn sl2() -> Self {
        FieldRegistry {
            fields: vec![FieldSymbol::new("u", 2)],
        }
    }

    /// Boussinesq in the Lax basis: `u2`, `u3`.
    pub fn sl3() -> Self {
        FieldRegistry {
            fields: vec![FieldSymbol::new("u2", 2), FieldSymbol::new("u3", 3)],
        }
    }

    /// Boussinesq in the primary basis: `u2`, `v3 = u3 - u2'/2`.
    pub fn sl3_primary() -> Self {
        FieldRegistry {
            fields: vec![FieldSymbol::new("u2", 2), FieldSymbol::new("v3", 3)],
        }
    }

    pub fn get(&self, name: &str) -> Option<&FieldSymbol> {
        self.fields.iter().find(|f| f.name() == name)
    }

    pub fn field(&self, name: &str) -> Result<FieldSymbol> {
        self.get(name)
            .cloned()
            .ok_or_else(|| Error::UnknownField(name.to_string()))
    }

    pub fn fields(&self) -> &[FieldSymbol] {
        &self.fields
    }

    pub fn union(&self, other: &FieldRegistry) -> Result<FieldRegistry> {
        let mut out = self.clone();
        for f in &other.fields {
            match out.get(f.name()) {
                Some(g) if g.spin() == f.spin() => {}
                Some(g) => {
                    return Err(Error::RegistryMismatch {
                        name: f.name().to_string(),
                        left: g.spin(),
                        right: f.spin(),
                    })
                }
                None => out.fields.push(f.clone()),
            }
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests;
