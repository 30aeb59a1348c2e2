//! Fractional powers of monic Lax operators.
//!
//! For `L = ∂^n + Σ u_s ∂^{n-s}` the root `R = ∂ + Σ_{i>=1} b_{i+1} ∂^{-i}`
//! with `R^n = L` is solved degree by degree: `b_j` first enters `R^n` at
//! `∂^{n-j}` with the constant factor `n`, so every step is a linear equation
//! in the one new unknown.

use num_traits::{One, Zero};

use crate::diffpoly::{int, rat, DiffPoly, FieldRegistry, FieldSymbol, Rational};
use crate::error::{Error, Result};
use crate::hierarchy::Hierarchy;
use crate::psido::{binomial, PsiDO};

/// `∂^n + Σ field ∂^deg` with one field per slot and no `∂^{n-1}` term.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LaxOperator {
    order: u32,
    slots: Vec<(i32, FieldSymbol)>,
    registry: FieldRegistry,
}

impl LaxOperator {
    pub fn new(order: u32, slots: Vec<(i32, FieldSymbol)>) -> Result<Self> {
        if order < 2 {
            return Err(Error::InvalidLax(format!("order {order} < 2")));
        }
        let mut seen = Vec::new();
        for (deg, f) in &slots {
            if *deg < 0 || *deg > order as i32 - 2 {
                return Err(Error::InvalidLax(format!(
                    "slot ∂^{deg} outside 0..={}",
                    order as i32 - 2
                )));
            }
            if seen.contains(deg) {
                return Err(Error::InvalidLax(format!("slot ∂^{deg} used twice")));
            }
            if f.spin() != order as i32 - deg {
                return Err(Error::InvalidLax(format!(
                    "field {} at ∂^{deg} must have spin {}",
                    f.name(),
                    order as i32 - deg
                )));
            }
            seen.push(*deg);
        }
        let registry = FieldRegistry::new(slots.iter().map(|(_, f)| f.clone()))?;
        Ok(LaxOperator {
            order,
            slots,
            registry,
        })
    }

    /// `∂^2 + u`.
    pub fn sl2() -> Self {
        LaxOperator::new(2, vec![(0, FieldSymbol::new("u", 2))]).expect("valid")
    }

    /// `∂^3 + u2 ∂ + u3`.
    pub fn sl3() -> Self {
        LaxOperator::new(
            3,
            vec![
                (1, FieldSymbol::new("u2", 2)),
                (0, FieldSymbol::new("u3", 3)),
            ],
        )
        .expect("valid")
    }

    /// `sl2` for order 2, `sl3` for order 3, `∂^n` with fields `u2..un` otherwise.
    pub fn for_order(order: u32) -> Result<Self> {
        match order {
            2 => Ok(LaxOperator::sl2()),
            3 => Ok(LaxOperator::sl3()),
            n => LaxOperator::new(
                n,
                (2..=n as i32)
                    .map(|s| (n as i32 - s, FieldSymbol::new(&format!("u{s}"), s)))
                    .collect(),
            ),
        }
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    /// `(degree, field)` pairs in declaration order.
    pub fn slots(&self) -> &[(i32, FieldSymbol)] {
        &self.slots
    }

    pub fn registry(&self) -> &FieldRegistry {
        &self.registry
    }

    pub fn hierarchy(&self) -> Hierarchy {
        if *self == LaxOperator::sl2() {
            Hierarchy::Sl2
        } else if *self == LaxOperator::sl3() {
            Hierarchy::Sl3
        } else {
            Hierarchy::Custom(self.order)
        }
    }

    pub fn as_psido(&self) -> PsiDO {
        PsiDO::from_terms(
            std::iter::once((self.order as i32, DiffPoly::one()))
                .chain(self.slots.iter().map(|(d, f)| (*d, f.poly()))),
            None,
        )
    }
}

/// Truncated root `R = Σ_{j=0}^{depth+1} b_j ∂^{1-j}` of a Lax operator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootSeries {
    order: u32,
    depth: usize,
    root: PsiDO,
    b: Vec<DiffPoly>,
}

impl RootSeries {
    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    /// The root as an operator with floor `-depth`.
    pub fn root(&self) -> &PsiDO {
        &self.root
    }

    /// `b_0 ..= b_{depth+1}`.
    pub fn b_table(&self) -> &[DiffPoly] {
        &self.b
    }

    pub fn b(&self, j: usize) -> Option<&DiffPoly> {
        self.b.get(j)
    }

    /// `R^k`; its floor is `-depth + k - 1` for `k >= 1`.
    pub fn power(&self, k: u32) -> PsiDO {
        if k == 0 {
            return PsiDO::one();
        }
        let mut acc = self.root.clone();
        for _ in 1..k {
            acc = acc.compose(&self.root);
        }
        acc
    }

    /// Lowest degree certified in `R^k`.
    pub fn power_floor(&self, k: u32) -> i32 {
        -(self.depth as i32) + k as i32 - 1
    }

    /// `R^n - L` on the certified degrees.
    pub fn recomposition_residual(&self, lax: &LaxOperator) -> PsiDO {
        let rn = self.power(self.order);
        let floor = rn.floor().expect("root powers are truncated");
        &rn - &lax.as_psido().truncate(floor)
    }
}

/// `n`-th root of a Lax operator of order `n`, with `depth` tail coefficients
/// `b_2 ..= b_{depth+1}`.
pub fn nth_root(lax: &LaxOperator, depth: usize) -> Result<RootSeries> {
    root_of_monic(&lax.as_psido(), lax.order(), depth)
}

/// Root of any exact monic operator of top degree `n`.
pub fn root_of_monic(op: &PsiDO, n: u32, depth: usize) -> Result<RootSeries> {
    if depth == 0 {
        return Err(Error::ZeroDepth);
    }
    if op.top_degree() != Some(n as i32) || op.coeff(n as i32) != DiffPoly::one() {
        return Err(Error::InvalidLax(format!(
            "operator is not monic of order {n}"
        )));
    }
    if !op.is_exact() {
        return Err(Error::InvalidLax("operator must be exact".into()));
    }
    let n_inv = rat(1, n as i64);
    let mut b: Vec<DiffPoly> = vec![DiffPoly::one()];
    for j in 1..=depth + 1 {
        // b_j = 0 placeholder at degree 1-j, so degrees >= n-j of R^n are certified
        let partial = PsiDO::from_terms(
            b.iter().enumerate().map(|(i, c)| (1 - i as i32, c.clone())),
            Some(1 - j as i32),
        );
        let mut power = partial.clone();
        for _ in 1..n {
            power = power.compose(&partial);
        }
        let target = n as i32 - j as i32;
        debug_assert_eq!(power.floor(), Some(target));
        let bj = (&op.coeff(target) - &power.coeff(target)).scale(&n_inv);
        b.push(bj);
    }
    let root = PsiDO::from_terms(
        b.iter().enumerate().map(|(i, c)| (1 - i as i32, c.clone())),
        Some(-(depth as i32)),
    );
    Ok(RootSeries {
        order: n,
        depth,
        root,
        b,
    })
}

/// `a_{i+1} = Σ_{s=0}^{i-1} (1/2)^s C(i-1, s) b_{i+1-s}^{(s)}` for `i >= 1`,
/// with `a_0 = b_0` and `a_1 = b_1`. Returns `a_0 .. a_{count-1}`.
pub fn symmetrized_coefficients(b: &[DiffPoly], count: usize) -> Result<Vec<DiffPoly>> {
    if count > b.len() {
        return Err(Error::InsufficientDepth {
            given: b.len().saturating_sub(2),
            required: count.saturating_sub(2),
        });
    }
    let half = rat(1, 2);
    let mut out = Vec::with_capacity(count);
    for idx in 0..count {
        if idx < 2 {
            out.push(b[idx].clone());
            continue;
        }
        let i = idx - 1;
        let mut acc = DiffPoly::zero();
        let mut weight = Rational::one();
        for s in 0..i {
            let c = &weight * binomial(i as i64 - 1, s as u32);
            acc += b[i + 1 - s].nth_derivative(s as u32).scale(&c);
            weight = &weight * &half;
        }
        out.push(acc);
    }
    Ok(out)
}

/// Operator written as `Σ ∂^i c_i` (coefficients to the right).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RightNormalForm {
    coefficients: PsiDO,
}

impl RightNormalForm {
    /// Coefficient of each `∂^i`, stored as a left-normal container.
    pub fn coefficients(&self) -> &PsiDO {
        &self.coefficients
    }

    pub fn floor(&self) -> Option<i32> {
        self.coefficients.floor()
    }

    /// Moves the coefficients back to the left.
    pub fn to_left_normal(&self) -> PsiDO {
        let floor = self.coefficients.floor();
        let mut acc = match floor {
            Some(f) => PsiDO::zero().truncate(f),
            None => PsiDO::zero(),
        };
        for (i, c) in self.coefficients.terms() {
            let piece = PsiDO::d(i);
            let rhs = PsiDO::constant(c.clone());
            let term = match floor {
                Some(f) => piece.compose_truncated(&rhs, f),
                None => piece.compose(&rhs),
            };
            acc = &acc + &term;
        }
        acc
    }

    pub fn to_text(&self) -> String {
        let mut parts = Vec::new();
        for (i, c) in self.coefficients.terms().rev() {
            let d = if i == 1 {
                "D".to_string()
            } else {
                format!("D^{i}")
            };
            if i == 0 {
                parts.push(c.to_text_grouped());
            } else if c.as_constant().is_some_and(|k| k.is_one()) {
                parts.push(d);
            } else {
                parts.push(format!("{d} {}", c.to_text_grouped()));
            }
        }
        if let Some(f) = self.floor() {
            parts.push(format!("O(D^{})", f - 1));
        }
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join(" + ")
        }
    }
}

/// `c ∂^i = Σ_l (-1)^l C(i, l) ∂^{i-l} c^{(l)}`, truncated at `floor` (or the
/// operator's own floor, or its lowest degree when the tail is infinite).
pub fn right_normal_form(op: &PsiDO, floor: Option<i32>) -> RightNormalForm {
    let infinite = op.terms().any(|(d, c)| d < 0 && !c.is_constant());
    let floor = match (op.floor(), floor) {
        (Some(a), Some(b)) => Some(a.max(b)),
        (Some(a), None) => Some(a),
        (None, Some(b)) => Some(b),
        (None, None) if infinite => op.lowest_degree(),
        (None, None) => None,
    };
    let mut terms = Vec::new();
    for (i, c) in op.terms() {
        let mut deriv = c.clone();
        let mut l: u32 = 0;
        loop {
            let deg = i - l as i32;
            if floor.is_some_and(|f| deg < f) || deriv.is_zero() {
                break;
            }
            let k = binomial(i as i64, l);
            if k.is_zero() {
                break;
            }
            let sign = if l.is_multiple_of(2) { int(1) } else { int(-1) };
            terms.push((deg, deriv.scale(&(k * sign))));
            deriv = deriv.total_derivative();
            l += 1;
        }
    }
    RightNormalForm {
        coefficients: PsiDO::from_terms(terms, floor),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diffpoly::FieldRegistry;

    fn sl2(src: &str) -> DiffPoly {
        DiffPoly::parse(src, &FieldRegistry::sl2()).unwrap()
    }

    fn sl3(src: &str) -> DiffPoly {
        DiffPoly::parse(src, &FieldRegistry::sl3()).unwrap()
    }

    #[test]
    fn sqrt_of_hill_operator_leading_rows() {
        let r = nth_root(&LaxOperator::sl2(), 3).unwrap();
        assert_eq!(r.b(0).unwrap(), &DiffPoly::one());
        assert!(r.b(1).unwrap().is_zero());
        assert_eq!(r.b(2).unwrap(), &sl2("u/2"));
        assert_eq!(r.b(3).unwrap(), &sl2("-u'/4"));
        assert_eq!(r.b(4).unwrap(), &sl2("-u^2/8 + u''/8"));
    }

    #[test]
    fn cube_root_leading_rows() {
        let r = nth_root(&LaxOperator::sl3(), 2).unwrap();
        assert_eq!(r.b(2).unwrap(), &sl3("u2/3"));
        assert_eq!(r.b(3).unwrap(), &sl3("u3/3 - u2'/3"));
    }

    #[test]
    fn root_of_pure_power_is_d() {
        for n in 2..=4 {
            let lax = LaxOperator::new(n, vec![]).unwrap();
            let r = nth_root(&lax, 5).unwrap();
            assert!(r.b_table()[1..].iter().all(DiffPoly::is_zero));
            assert_eq!(r.root().terms().count(), 1);
        }
    }

    #[test]
    fn zero_depth_rejected() {
        assert_eq!(nth_root(&LaxOperator::sl2(), 0), Err(Error::ZeroDepth));
    }

    #[test]
    fn recomposition_vanishes_on_certified_degrees() {
        for (lax, depth) in [(LaxOperator::sl2(), 7), (LaxOperator::sl3(), 5)] {
            let r = nth_root(&lax, depth).unwrap();
            let res = r.recomposition_residual(&lax);
            assert!(res.is_zero(), "{res}");
            assert_eq!(res.floor(), Some(r.power_floor(lax.order())));
        }
    }

    #[test]
    fn b_spins_follow_index() {
        let r = nth_root(&LaxOperator::sl3(), 6).unwrap();
        for (j, b) in r.b_table().iter().enumerate().skip(2) {
            assert_eq!(b.spin_of().value(), Some(j as i32), "b_{j}");
        }
    }

    #[test]
    fn root_commutes_with_its_power() {
        let lax = LaxOperator::sl2();
        let r = nth_root(&lax, 6).unwrap();
        let c = r.root().commutator(&lax.as_psido());
        assert!(c.is_zero(), "{c}");
    }

    #[test]
    fn symmetrized_low_orders() {
        let r = nth_root(&LaxOperator::sl2(), 4).unwrap();
        let a = symmetrized_coefficients(r.b_table(), 5).unwrap();
        assert_eq!(a[2], sl2("u/2"));
        assert!(a[3].is_zero());
        assert_eq!(a[4], sl2("-u^2/8"));
        assert!(symmetrized_coefficients(r.b_table(), 7).is_err());
    }

    #[test]
    fn odd_symmetrized_coefficients_vanish() {
        let r = nth_root(&LaxOperator::sl2(), 10).unwrap();
        let a = symmetrized_coefficients(r.b_table(), 12).unwrap();
        for k in 0..=4 {
            assert!(a[2 * k + 1].is_zero(), "a_{}", 2 * k + 1);
        }
    }

    #[test]
    fn right_normal_examples() {
        let reg = FieldRegistry::sl2();
        let u = reg.field("u").unwrap();
        let op = PsiDO::term(1, u.poly());
        let rnf = right_normal_form(&op, None);
        assert_eq!(rnf.coefficients().coeff(1), sl2("u"));
        assert_eq!(rnf.coefficients().coeff(0), sl2("-u'"));
        assert_eq!(rnf.to_left_normal(), op);

        let inv = PsiDO::term(-1, u.poly());
        let rnf = right_normal_form(&inv, Some(-3));
        assert_eq!(rnf.coefficients().coeff(-1), sl2("u"));
        assert_eq!(rnf.coefficients().coeff(-2), sl2("u'"));
        assert_eq!(rnf.coefficients().coeff(-3), sl2("u''"));
        assert!(rnf.to_left_normal().agrees_above(&inv, -3));

        let d3 = PsiDO::d(3);
        assert_eq!(right_normal_form(&d3, None).coefficients(), &d3);
    }

    #[test]
    fn right_normal_round_trip_on_root() {
        let r = nth_root(&LaxOperator::sl3(), 5).unwrap();
        let back = right_normal_form(r.root(), None).to_left_normal();
        assert!(back.agrees_above(r.root(), -5));
        assert_eq!(back.floor(), Some(-5));
    }

    #[test]
    fn symmetrized_differ_from_right_normal() {
        let r = nth_root(&LaxOperator::sl2(), 6).unwrap();
        let a = symmetrized_coefficients(r.b_table(), 6).unwrap();
        let rnf = right_normal_form(r.root(), None);
        assert_eq!(rnf.coefficients().coeff(-1), a[2]);
        assert_ne!(rnf.coefficients().coeff(-3), a[4]);
    }

    #[test]
    fn invalid_lax_shapes() {
        let u = FieldSymbol::new("u", 1);
        assert!(LaxOperator::new(2, vec![(1, u)]).is_err());
        assert!(LaxOperator::new(1, vec![]).is_err());
        assert!(LaxOperator::new(2, vec![(0, FieldSymbol::new("u", 3))]).is_err());
        assert!(root_of_monic(&PsiDO::d(2).scale(&int(2)), 2, 3).is_err());
    }
}
