//! Lax flows `∂L/∂t_k = [(L^{k/n})_+, L]` and the derivations they induce.

use std::fmt;

use serde::Serialize;

use crate::diffpoly::{rat, DiffPoly, FieldRegistry, FieldSymbol, MonomialJson};
use crate::error::{Error, Result};
use crate::roots::{nth_root, LaxOperator};

pub use crate::report::verify_flow_tables;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Hierarchy {
    /// KdV, `L = ∂^2 + u`.
    Sl2,
    /// Boussinesq, `L = ∂^3 + u2 ∂ + u3`.
    Sl3,
    /// Any other monic operator of the given order.
    Custom(u32),
}

impl fmt::Display for Hierarchy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Hierarchy::Sl2 => f.write_str("sl2"),
            Hierarchy::Sl3 => f.write_str("sl3"),
            Hierarchy::Custom(n) => write!(f, "order{n}"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Basis {
    /// Coefficients of the Lax operator.
    U,
    /// `u2` and the spin-3 primary field `v3 = u3 - u2'/2`.
    Primary,
}

impl fmt::Display for Basis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Basis::U => "u",
            Basis::Primary => "primary",
        })
    }
}

/// Right-hand sides `∂u_s/∂t_k` for one time of a hierarchy.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FlowSystem {
    hierarchy: Hierarchy,
    basis: Basis,
    time: u32,
    equations: Vec<(FieldSymbol, DiffPoly)>,
}

#[derive(Clone, Debug, Serialize)]
pub struct FlowJson {
    pub hierarchy: String,
    pub basis: String,
    pub time: u32,
    pub equations: Vec<EquationJson>,
}

#[derive(Clone, Debug, Serialize)]
pub struct EquationJson {
    pub field: String,
    pub rhs: Vec<MonomialJson>,
}

impl FlowSystem {
    pub fn new(
        hierarchy: Hierarchy,
        basis: Basis,
        time: u32,
        equations: Vec<(FieldSymbol, DiffPoly)>,
    ) -> Self {
        FlowSystem {
            hierarchy,
            basis,
            time,
            equations,
        }
    }

    pub fn hierarchy(&self) -> Hierarchy {
        self.hierarchy
    }

    pub fn basis(&self) -> Basis {
        self.basis
    }

    pub fn time(&self) -> u32 {
        self.time
    }

    pub fn equations(&self) -> &[(FieldSymbol, DiffPoly)] {
        &self.equations
    }

    pub fn rhs(&self, field: &str) -> Option<&DiffPoly> {
        self.equations
            .iter()
            .find(|(f, _)| f.name() == field)
            .map(|(_, p)| p)
    }

    pub fn is_zero(&self) -> bool {
        self.equations.iter().all(|(_, p)| p.is_zero())
    }

    fn lhs(&self, field: &FieldSymbol) -> String {
        format!("{}_t{}", field.name(), self.time)
    }

    pub fn to_text(&self) -> String {
        if self.is_zero() {
            return "0".into();
        }
        self.equations
            .iter()
            .map(|(f, p)| format!("{} = {p}", self.lhs(f)))
            .collect::<Vec<_>>()
            .join("\n")
    }

    pub fn to_latex(&self) -> String {
        self.equations
            .iter()
            .map(|(f, p)| {
                format!(
                    "\\frac{{\\partial {}}}{{\\partial t_{{{}}}}} = {}",
                    FieldLatex(f),
                    self.time,
                    p.to_latex()
                )
            })
            .collect::<Vec<_>>()
            .join(" \\\\\n")
    }

    pub fn to_json(&self) -> FlowJson {
        FlowJson {
            hierarchy: self.hierarchy.to_string(),
            basis: self.basis.to_string(),
            time: self.time,
            equations: self
                .equations
                .iter()
                .map(|(f, p)| EquationJson {
                    field: f.name().to_string(),
                    rhs: p.to_json(),
                })
                .collect(),
        }
    }
}

struct FieldLatex<'a>(&'a FieldSymbol);

impl fmt::Display for FieldLatex<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0.poly().to_latex())
    }
}

/// Smallest root depth for which `(L^{k/n})_+` is fully certified.
pub fn required_depth(k: u32) -> usize {
    (k as usize).saturating_sub(1).max(1)
}

/// The `t_k` flow, reading `∂u_s/∂t_k` off the coefficient of `u_s`'s slot in
/// `[(L^{k/n})_+, L]`.
pub fn lax_flow(lax: &LaxOperator, k: u32, depth: usize) -> Result<FlowSystem> {
    if k == 0 {
        return Err(Error::InvalidArgument("flow time must be positive".into()));
    }
    let required = required_depth(k);
    if depth < required {
        return Err(Error::InsufficientDepth {
            given: depth,
            required,
        });
    }
    let root = nth_root(lax, depth)?;
    let generator = root.power(k).project_plus();
    let l = lax.as_psido();
    let bracket = generator.commutator(&l);
    debug_assert!(bracket.is_exact());
    for (deg, _) in bracket.terms() {
        if !lax.slots().iter().any(|(d, _)| *d == deg) {
            return Err(Error::NonLocalFlow(deg));
        }
    }
    let equations = lax
        .slots()
        .iter()
        .map(|(deg, f)| (f.clone(), bracket.coeff(*deg)))
        .collect();
    Ok(FlowSystem::new(lax.hierarchy(), Basis::U, k, equations))
}

/// [`lax_flow`] at the minimal certified depth.
pub fn lax_flow_auto(lax: &LaxOperator, k: u32) -> Result<FlowSystem> {
    lax_flow(lax, k, required_depth(k))
}

/// `v3 = u3 - u2'/2` expressed in the Lax basis.
pub fn primary_v3() -> DiffPoly {
    let reg = FieldRegistry::sl3();
    let u2 = reg.field("u2").expect("u2");
    let u3 = reg.field("u3").expect("u3");
    &u3.poly() - &u2.poly().total_derivative().scale(&rat(1, 2))
}

/// Rewrites `sl3` flows in terms of `u2` and `v3 = u3 - u2'/2`.
pub fn to_primary_basis(flows: &FlowSystem) -> Result<FlowSystem> {
    if flows.hierarchy != Hierarchy::Sl3 {
        return Err(Error::WrongBasis(format!(
            "primary basis is defined for sl3, not {}",
            flows.hierarchy
        )));
    }
    if flows.basis != Basis::U {
        return Err(Error::WrongBasis(
            "flows are already in the primary basis".into(),
        ));
    }
    let missing = |name: &str| Error::UnknownField(name.to_string());
    let u2_t = flows.rhs("u2").ok_or_else(|| missing("u2"))?;
    let u3_t = flows.rhs("u3").ok_or_else(|| missing("u3"))?;
    let sl3 = FieldRegistry::sl3();
    let primary = FieldRegistry::sl3_primary();
    let u2 = primary.field("u2")?;
    let u3 = sl3.field("u3")?;
    let v3 = primary.field("v3")?;
    // u3 = v3 + u2'/2
    let back = &v3.poly() + &u2.poly().total_derivative().scale(&rat(1, 2));
    let v3_t = u3_t - &u2_t.total_derivative().scale(&rat(1, 2));
    Ok(FlowSystem::new(
        Hierarchy::Sl3,
        Basis::Primary,
        flows.time,
        vec![
            (u2, u2_t.substitute(&u3, &back)),
            (v3, v3_t.substitute(&u3, &back)),
        ],
    ))
}

/// The derivation `∂/∂t_k` on differential polynomials: agrees with the flow
/// on fields and commutes with the total derivative.
pub fn flow_derivative(p: &DiffPoly, flows: &FlowSystem) -> Result<DiffPoly> {
    for f in p.fields() {
        if !flows.equations.iter().any(|(g, _)| *g == f) {
            return Err(Error::UnknownField(f.name().to_string()));
        }
    }
    Ok(p.derivation(|jet| {
        let rhs = flows
            .equations
            .iter()
            .find(|(g, _)| *g == jet.field)
            .map(|(_, r)| r)
            .expect("checked above");
        rhs.nth_derivative(jet.order)
    }))
}

/// `∂²u2/∂t²` with `v3` eliminated, from primary-basis `sl3` flows.
pub fn second_order_form(flows: &FlowSystem) -> Result<DiffPoly> {
    if flows.hierarchy != Hierarchy::Sl3 || flows.basis != Basis::Primary {
        return Err(Error::WrongBasis(
            "second-order form needs sl3 flows in the primary basis".into(),
        ));
    }
    let u2 = FieldRegistry::sl3_primary().field("u2")?;
    let first = flow_derivative(&u2.poly(), flows)?;
    let second = flow_derivative(&first, flows)?;
    if second.fields().iter().any(|f| f.name() == "v3") {
        return Err(Error::WrongBasis(format!(
            "v3 does not drop out of the t{} second-order form",
            flows.time
        )));
    }
    Ok(second)
}

/// Hamiltonian density without a constant term.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HamiltonianDensity {
    density: DiffPoly,
    field: FieldSymbol,
}

impl HamiltonianDensity {
    pub fn new(density: DiffPoly, field: FieldSymbol) -> Result<Self> {
        let c = density.constant_term();
        if c != num_traits::Zero::zero() {
            return Err(Error::ConstantResidual(c.to_string()));
        }
        Ok(HamiltonianDensity { density, field })
    }

    /// `u^3/3! - u'^2/2` for the KdV field `u`.
    pub fn kdv_h3() -> Self {
        let reg = FieldRegistry::sl2();
        HamiltonianDensity::new(
            DiffPoly::parse("u^3/6 - u'^2/2", &reg).expect("valid"),
            reg.field("u").expect("u"),
        )
        .expect("no constant")
    }

    pub fn density(&self) -> &DiffPoly {
        &self.density
    }

    pub fn field(&self) -> &FieldSymbol {
        &self.field
    }
}

/// `∂u/∂t = ∂_x (δH/δu)` for the bracket `{u(x), u(y)} = ∂_x δ(x - y)`.
pub fn hamiltonian_flow_first(h: &HamiltonianDensity) -> DiffPoly {
    h.density
        .variational_derivative(&h.field)
        .total_derivative()
}

/// `res L^{m/n}`; needs root depth `>= m`.
pub fn conserved_density(lax: &LaxOperator, m: u32, depth: usize) -> Result<DiffPoly> {
    if m == 0 {
        return Err(Error::InvalidArgument("power must be positive".into()));
    }
    let required = m as usize;
    if depth < required {
        return Err(Error::InsufficientDepth {
            given: depth,
            required,
        });
    }
    let root = nth_root(lax, depth)?;
    Ok(root.power(m).residue())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sl2(src: &str) -> DiffPoly {
        DiffPoly::parse(src, &FieldRegistry::sl2()).unwrap()
    }

    fn sl3(src: &str) -> DiffPoly {
        DiffPoly::parse(src, &FieldRegistry::sl3()).unwrap()
    }

    fn prim(src: &str) -> DiffPoly {
        DiffPoly::parse(src, &FieldRegistry::sl3_primary()).unwrap()
    }

    #[test]
    fn kdv_first_flows() {
        let l = LaxOperator::sl2();
        assert_eq!(lax_flow_auto(&l, 1).unwrap().rhs("u").unwrap(), &sl2("u'"));
        assert_eq!(
            lax_flow_auto(&l, 3).unwrap().rhs("u").unwrap(),
            &sl2("3/2 u u' + 1/4 u'''")
        );
        assert!(lax_flow_auto(&l, 2).unwrap().is_zero());
        assert!(lax_flow_auto(&l, 4).unwrap().is_zero());
    }

    #[test]
    fn depth_is_enforced() {
        let err = lax_flow(&LaxOperator::sl2(), 5, 3).unwrap_err();
        assert_eq!(
            err,
            Error::InsufficientDepth {
                given: 3,
                required: 4
            }
        );
        assert!(lax_flow(&LaxOperator::sl2(), 0, 3).is_err());
        assert!(conserved_density(&LaxOperator::sl2(), 3, 2).is_err());
    }

    #[test]
    fn boussinesq_t2_in_both_bases() {
        let f = lax_flow_auto(&LaxOperator::sl3(), 2).unwrap();
        assert_eq!(f.rhs("u2").unwrap(), &sl3("2 u3' - u2''"));
        assert_eq!(f.rhs("u3").unwrap(), &sl3("u3'' - 2/3 u2''' - 2/3 u2 u2'"));
        let p = to_primary_basis(&f).unwrap();
        assert_eq!(p.rhs("u2").unwrap(), &prim("2 v3'"));
        assert_eq!(p.rhs("v3").unwrap(), &prim("-2/3 (u2 u2' + 1/4 u2''')"));
        assert!(to_primary_basis(&p).is_err());
        let kdv = lax_flow_auto(&LaxOperator::sl2(), 3).unwrap();
        assert!(to_primary_basis(&kdv).is_err());
    }

    #[test]
    fn primary_t1_is_translation() {
        let f = to_primary_basis(&lax_flow_auto(&LaxOperator::sl3(), 1).unwrap()).unwrap();
        assert_eq!(f.rhs("u2").unwrap(), &prim("u2'"));
        assert_eq!(f.rhs("v3").unwrap(), &prim("v3'"));
    }

    #[test]
    fn flow_derivative_examples() {
        let t2 = to_primary_basis(&lax_flow_auto(&LaxOperator::sl3(), 2).unwrap()).unwrap();
        assert_eq!(flow_derivative(&prim("u2"), &t2).unwrap(), prim("2 v3'"));
        assert_eq!(flow_derivative(&prim("u2'"), &t2).unwrap(), prim("2 v3''"));
        let t3 = lax_flow_auto(&LaxOperator::sl2(), 3).unwrap();
        assert_eq!(
            flow_derivative(&sl2("u^2/2"), &t3).unwrap(),
            sl2("u (3/2 u u' + 1/4 u''')")
        );
        assert!(flow_derivative(&sl3("u2"), &t3).is_err());
    }

    #[test]
    fn second_order_boussinesq() {
        let t2 = to_primary_basis(&lax_flow_auto(&LaxOperator::sl3(), 2).unwrap()).unwrap();
        let rhs = second_order_form(&t2).unwrap();
        // -(a u u' + b u''')' with (a, b) = (4/3, 1/3)
        assert_eq!(rhs, prim("-(4/3 u2 u2' + 1/3 u2''')'"));
        let t3 = to_primary_basis(&lax_flow_auto(&LaxOperator::sl3(), 3).unwrap()).unwrap();
        assert!(second_order_form(&t3).unwrap().is_zero());
        assert!(second_order_form(&lax_flow_auto(&LaxOperator::sl3(), 2).unwrap()).is_err());
    }

    #[test]
    fn hamiltonian_examples() {
        let h3 = HamiltonianDensity::kdv_h3();
        assert_eq!(hamiltonian_flow_first(&h3), sl2("u u' + u'''"));
        let u = FieldRegistry::sl2().field("u").unwrap();
        let h = HamiltonianDensity::new(sl2("u^2/2"), u.clone()).unwrap();
        assert_eq!(hamiltonian_flow_first(&h), sl2("u'"));
        let h = HamiltonianDensity::new(sl2("u'"), u.clone()).unwrap();
        assert!(hamiltonian_flow_first(&h).is_zero());
        assert!(HamiltonianDensity::new(sl2("u + 1"), u).is_err());
    }

    #[test]
    fn conserved_density_examples() {
        assert_eq!(
            conserved_density(&LaxOperator::sl2(), 1, 3).unwrap(),
            sl2("u/2")
        );
        assert!(conserved_density(&LaxOperator::sl2(), 2, 3)
            .unwrap()
            .is_zero());
        assert_eq!(
            conserved_density(&LaxOperator::sl3(), 1, 3).unwrap(),
            sl3("u2/3")
        );
    }

    #[test]
    fn kdv_flow_is_twice_derivative_of_residue() {
        // an independent route: u_{t_k} = 2 (res L^{k/2})'
        let l = LaxOperator::sl2();
        for k in [1, 3, 5, 7] {
            let flow = lax_flow_auto(&l, k).unwrap();
            let res = conserved_density(&l, k, k as usize + 1).unwrap();
            assert_eq!(
                flow.rhs("u").unwrap(),
                &res.total_derivative().scale(&rat(2, 1)),
                "t{k}"
            );
        }
    }

    #[test]
    fn flow_spin_homogeneity() {
        for (lax, ks) in [
            (LaxOperator::sl2(), vec![1, 3, 5, 7]),
            (LaxOperator::sl3(), vec![1, 2, 4, 5]),
        ] {
            for k in ks {
                let f = lax_flow_auto(&lax, k).unwrap();
                for (field, rhs) in f.equations() {
                    assert_eq!(rhs.spin_of().value(), Some(field.spin() + k as i32));
                }
            }
        }
    }
}
