//! Reference tables as verbatim transcriptions in the text syntax.
//!
//! Entries are kept as printed, including suspected slips. Comparison against
//! recomputed values happens in [`crate::report`].

use crate::diffpoly::{DiffPoly, FieldRegistry};
use crate::error::Result;
use crate::psido::PsiDO;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Fields {
    Sl2,
    Sl3,
    Sl3Primary,
}

impl Fields {
    pub fn registry(self) -> FieldRegistry {
        match self {
            Fields::Sl2 => FieldRegistry::sl2(),
            Fields::Sl3 => FieldRegistry::sl3(),
            Fields::Sl3Primary => FieldRegistry::sl3_primary(),
        }
    }
}

/// One transcribed differential polynomial.
#[derive(Clone, Copy, Debug)]
pub struct PolyFixture {
    pub location: &'static str,
    pub fields: Fields,
    pub source: &'static str,
}

impl PolyFixture {
    pub fn parse(&self) -> Result<DiffPoly> {
        DiffPoly::parse(self.source, &self.fields.registry())
    }
}

/// One transcribed operator expansion, shown down to `floor`.
#[derive(Clone, Copy, Debug)]
pub struct OperatorFixture {
    pub location: &'static str,
    /// Power `n` in `∂^n ∘ u`.
    pub power: i32,
    pub floor: Option<i32>,
    pub source: &'static str,
}

impl OperatorFixture {
    pub fn parse(&self) -> Result<PsiDO> {
        PsiDO::parse(self.source, &FieldRegistry::sl2(), self.floor)
    }
}

const fn sl2(location: &'static str, source: &'static str) -> PolyFixture {
    PolyFixture {
        location,
        fields: Fields::Sl2,
        source,
    }
}

const fn sl3(location: &'static str, source: &'static str) -> PolyFixture {
    PolyFixture {
        location,
        fields: Fields::Sl3,
        source,
    }
}

const fn prim(location: &'static str, source: &'static str) -> PolyFixture {
    PolyFixture {
        location,
        fields: Fields::Sl3Primary,
        source,
    }
}

/// `b_2 ..= b_10` of the square root of `∂^2 + u`.
pub const SL2_ROOT: &[PolyFixture] = &[
    sl2("sl2.root.b2", "1/2 u"),
    sl2("sl2.root.b3", "-1/4 u'"),
    sl2("sl2.root.b4", "-1/8 u^2 + 1/2 (1/2)^2 u''"),
    sl2("sl2.root.b5", "-1/2 (1/2)^3 u''' + 3/8 u u'"),
    sl2(
        "sl2.root.b6",
        "1/16 u^3 - 7/4 (1/2)^2 u u'' - 11/8 (1/2)^2 u'^2 + 1/2 (1/2)^4 u^(4)",
    ),
    sl2(
        "sl2.root.b7",
        "-15/32 u^2 u' + (1/2)^3 (15/2 u'' u' + 15/4 u u^(4)) - 1/2 (1/2)^5 u^(5)",
    ),
    sl2(
        "sl2.root.b8",
        "-5/128 u^4 + (1/2)^2 (55/16 u'' u^2 + 85/16 u u'^2) \
         - (1/2)^4 (31/4 u u^(4) + 91/8 u''^2 + 37/2 u' u''') + 1/2 (1/2)^6 u^(6)",
    ),
    sl2(
        "sl2.root.b9",
        "35/64 u^3 u' - 175/4 (1/2)^3 (u u' u'' + 1/4 u'^3 + 1/4 u^2 u''') \
         + 7/4 (1/2)^5 (9 u u^(5) + 25 u^(4) u' + 35 u''' u'') - 1/2 (1/2)^7 u^(7)",
    ),
    sl2(
        "sl2.root.b10",
        "7/256 u^5 - 35/32 (1/2)^2 (23/2 u^2 u'^2 + 5 u^3 u'') \
         + 7/4 (1/2)^4 (73/4 u^2 u^(4) + 227/4 u u''^2 + 337/4 u'' u'^2 + 89 u u' u''') \
         - 3/4 (1/2)^6 (631/3 u'' u^(4) + 233 u u'''^2 + 135 u' u^(5)) + 1/2 (1/2)^8 u^(8)",
    ),
];

/// Even symmetrized coefficients `a_2 ..= a_12` for `sl2`, as `(index, row)`.
pub const SL2_SYMMETRIZED: &[(usize, PolyFixture)] = &[
    (2, sl2("sl2.symmetrized.a2", "1/2 u")),
    (4, sl2("sl2.symmetrized.a4", "-1/8 u^2")),
    (
        6,
        sl2(
            "sl2.symmetrized.a6",
            "1/16 u^3 + 1/8 (1/2)^2 (u'^2 - 2 u u'')",
        ),
    ),
    (
        8,
        sl2(
            "sl2.symmetrized.a8",
            "-5/128 u^4 + 5/8 (1/2)^2 (u^2 u'' - 1/2 u'^2 u) \
             + 1/4 (1/2)^4 (u''' u' - u u^(4) - 1/2 u''^2)",
        ),
    ),
    (
        10,
        sl2(
            "sl2.symmetrized.a10",
            "7/256 u^5 + 35/64 (1/2)^2 (1/2 u^2 u'^2 - u^3 u'') \
             + 7/4 (1/2)^4 (3/4 u^(4) u^2 + 7/4 u''^2 u - 3/4 u'^2 u'' - u u' u''') \
             + 1/4 (1/2)^6 (u' u^(5) + 1/2 u'''^2 - u u^6)",
        ),
    ),
    (
        12,
        sl2(
            "sl2.symmetrized.a12",
            "-21/1024 u^6 + 105/64 (1/2)^2 (u^4 u'' - 1/2 u^3 u'^2) \
             + 1/16 (1/2)^4 (147 u u'' u'^2 + 189/2 u^2 u' u''' - 1029/4 u^2 u''^2 \
             - 63 u^3 u^(4) - 105/8 u'^4) \
             + 1/4 (1/2)^6 (16 u''^3 + 9 u^2 u^(6) - 27 u' u'' u''' - 45/2 u'^2 u^(4) \
             - 69/4 u'''^2 u + 153/2 u u'' u^(4) - 27/2 u u' u^(5)) \
             + 1/4 (1/2)^8 (u' u^(7) + u''' u^(5) - u'' u^(6) - u u^(8) - 1/2 u^(4)^2)",
        ),
    ),
];

/// KdV flows `u_{t_k}` for odd `k <= 9`, as `(k, row)`.
pub const SL2_FLOWS: &[(u32, PolyFixture)] = &[
    (1, sl2("sl2.flow.t1", "u'")),
    (3, sl2("sl2.flow.t3", "3/2 u u' + (1/2)^2 u'''")),
    (
        5,
        sl2(
            "sl2.flow.t5",
            "15/8 u^2 u' + 5 (1/2)^2 (u' u'' + 1/2 u u''') + (1/2)^4 u^(5)",
        ),
    ),
    (
        7,
        sl2(
            "sl2.flow.t7",
            "35/16 u^3 u' + 35/8 (1/2)^2 (4 u u' u'' + u'^3 + u^2 u''') \
             + 7/2 (u u^(5) + 3 u' u^(4) + 5 u'' u''') (1/2)^4 + (1/2)^6 u^(7)",
        ),
    ),
    (
        9,
        sl2(
            "sl2.flow.t9",
            "18 (1/2)^6 u' u^(6) + 651/8 (1/2)^4 u' u''^2 + 315/128 u^4 u' \
             + 483/8 (1/2)^4 u'^2 u''' + 315/16 (1/2)^2 u u'^3 \
             + 189/4 (1/2)^4 u u^(4) u' + 315/8 (1/2)^2 u^2 u' u'' \
             + 315/4 (1/2)^4 u u' u''' + 63 (1/2)^6 u''' u^(4) \
             + 105/16 (1/2)^2 u^3 u''' + 42 (1/2)^6 u^(5) u'' \
             + 63/8 (1/2)^4 u^2 u^(5) + (1/2)^8 u^(9) + 9/2 (1/2)^6 u u^(7)",
        ),
    ),
];

/// Leading nonlinear term of the `t_k` KdV flow and its nonlinearity degree.
pub const SL2_LEADING_NONLINEARITY: &[(u32, PolyFixture, u32)] = &[
    (1, sl2("sl2.nonlinearity.t1", "u'"), 0),
    (3, sl2("sl2.nonlinearity.t3", "3/2 u u'"), 1),
    (5, sl2("sl2.nonlinearity.t5", "15/8 u^2 u'"), 2),
    (7, sl2("sl2.nonlinearity.t7", "35/16 u^3 u'"), 3),
    (9, sl2("sl2.nonlinearity.t9", "315/128 u^4 u'"), 4),
];

/// `b_2 ..= b_8` of the cube root of `∂^3 + u2 ∂ + u3`.
pub const SL3_ROOT: &[PolyFixture] = &[
    sl3("sl3.root.b2", "1/3 u2"),
    sl3("sl3.root.b3", "1/3 u3 - 2/6 u2'"),
    sl3("sl3.root.b4", "-1/9 u2^2 - 2/6 u3' + 8/9 (1/2)^2 u2''"),
    sl3(
        "sl3.root.b5",
        "-2/9 u2 u3 + 8/18 u2 u2' + 8/9 (1/2)^2 u3'' - 8/9 (1/2)^3 u3'''",
    ),
    sl3(
        "sl3.root.b6",
        "1/9 (5/9 u2^3 - u3^2 + (4 u2 u3' + 5 u2' u3) - 20 (1/2)^2 (u2 u2'' + u2'^2) \
         - 8 (1/2)^3 u3''' + 16/3 (1/2)^4 u2^(4))",
    ),
    sl3(
        "sl3.root.b7",
        "1/9 (5/3 u2^2 u3 + 5 (u3 u3' - u2^2 u2') \
         - 20/3 (1/2)^2 (5 u2'' u3 + 7 u2' u3' + u2 u3''') \
         - 40 (1/2)^3 (3 u2' u2'' + u2 u2''') + 16/3 (1/2)^4 u3^(4))",
    ),
    sl3(
        "sl3.root.b8",
        "5/27 (u2 u3^2 - 2/9 u2^4) - 5/9 (u2^2 u3' - 7/3 u2' u2 u3) \
         + 5/81 (12 u3'^2 + 31 u2 u2'^2 + 17 u2^2 u2'' - 15 u3'' u3) \
         + 5/27 (10 u3'' u2' + 13 u2'' u3' + 7 u3 u2''' + 3 u3'' u2) \
         + 5/81 (8 u2^4 u2 + 23 u2''^2 + 32 u2' u2''') + 1/81 u2^(6)",
    ),
];

/// Coefficients `a_2 ..= a_8` of the symmetrized cube-root expansion, as
/// `(index, row)`.
pub const SL3_SYMMETRIZED: &[(usize, PolyFixture)] = &[
    (2, sl3("sl3.symmetrized.a2", "1/3 u2")),
    (3, sl3("sl3.symmetrized.a3", "1/3 (u3 - 1/2 u2')")),
    (4, sl3("sl3.symmetrized.a4", "-1/9 (u2^2 + (1/2)^2 u2'')")),
    (
        5,
        sl3(
            "sl3.symmetrized.a5",
            "1/9 (-2 u2 u3 + u2' u2 - (1/2)^2 u3'' + (1/2)^3 u2''')",
        ),
    ),
    (
        6,
        sl3(
            "sl3.symmetrized.a6",
            "1/9 (1/3 (1/2)^4 u2^(4) + u2' u3 - u3^2 + 5/9 u2^3)",
        ),
    ),
    (
        7,
        sl3(
            "sl3.symmetrized.a7",
            "1/27 (5 u2^2 u3 - 5 (1/2) u2^2 u2' + 5/2 (u2' u3' - u2'' u3) \
             + (1/2)^4 u3^(4) - (1/2)^5 u2^(5))",
        ),
    ),
    (
        8,
        sl3(
            "sl3.symmetrized.a8",
            "1/27 (5/9 u2 (9 u3^2 - 2 u2^3) - 5 u2' u2 u3 \
             + 5/3 (1/2)^2 (6 u3'^2 - 6 u3'' u3 + 5 u2^2 u2'' - 2 u2 u2'^2) \
             - 10 (1/2)^3 (-u3'' u2' - u3 u2''' + 2 u2'' u3') \
             - 10/3 (1/2)^4 (u2^(4) u2 + 4 u2' u2''' - 5 u2''^2) - 1/3 (1/2)^6 u2^(6))",
        ),
    ),
];

/// Boussinesq pairs `(k, ∂u2/∂t_k, ∂v3/∂t_k)` with `v3 = u3 - u2'/2`, both
/// rows written in `u2`, `u3`.
pub const SL3_FLOWS: &[(u32, PolyFixture, PolyFixture)] = &[
    (
        1,
        sl3("sl3.flow.t1.u2", "u2'"),
        sl3("sl3.flow.t1.v3", "u3' - 1/2 u2''"),
    ),
    (
        2,
        sl3("sl3.flow.t2.u2", "2 u3' - u2''"),
        sl3("sl3.flow.t2.v3", "-2/3 u2 u2' - 2/3 (1/2)^2 u2'''"),
    ),
    (
        4,
        sl3(
            "sl3.flow.t4.u2",
            "4/3 ((u2 u3)' - 1/2 (u2'' u2 + u2'^2) + 2 (1/2)^2 u3''' - 2 (1/2)^3 u2^(4))",
        ),
        sl3(
            "sl3.flow.t4.v3",
            "4/3 (u3 u3' - 1/3 u2^2 u2' - 1/2 (u2' u3' + u2'' u3) \
             - (1/2)^2 (u2' u2'' + u2 u2''') - 2/3 (1/2)^4 u2^(5))",
        ),
    ),
];

/// Primary-basis flows `(k, ∂u2/∂t_k, ∂v3/∂t_k)`.
pub const SL3_PRIMARY_FLOWS: &[(u32, PolyFixture, PolyFixture)] = &[
    (
        2,
        prim("sl3.primary.t2.u2", "2 v3'"),
        prim("sl3.primary.t2.v3", "-2/3 (u2 u2' + (1/2)^2 u2''')"),
    ),
    (
        4,
        prim("sl3.primary.t4.u2", "4/3 (u2 v3 + 2 (1/2)^2 v3'')'"),
        prim(
            "sl3.primary.t4.v3",
            "4/3 (v3 v3' - (1/2)^2 u2 u2''' - 1/3 (u2^2 u2' + 2 (1/2)^4 u2^(5)))",
        ),
    ),
];

/// `∂²u2/∂t_2²` after eliminating `v3`.
pub const SL3_SECOND_ORDER: PolyFixture =
    prim("sl3.second_order.t2", "-4/3 (u2 u2' + (1/2)^2 u2''')'");

/// Flow of the density `u^3/3! - u'^2/2` under `{u(x), u(y)} = ∂_x δ(x - y)`.
pub const SL2_HAMILTONIAN_H3: PolyFixture = sl2("sl2.hamiltonian.h3", "u u' + u'''");

/// Expansions of `∂^n ∘ u` for `n = 1, 2, 3, -1, -2, -3`.
pub const LEIBNIZ: &[OperatorFixture] = &[
    OperatorFixture {
        location: "leibniz.d1",
        power: 1,
        floor: None,
        source: "u D + u'",
    },
    OperatorFixture {
        location: "leibniz.d2",
        power: 2,
        floor: None,
        source: "u D^2 + 2 u' D + u''",
    },
    OperatorFixture {
        location: "leibniz.d3",
        power: 3,
        floor: None,
        source: "u D^3 + 3 u' D^2 + 3 u'' D + u'''",
    },
    OperatorFixture {
        location: "leibniz.d-1",
        power: -1,
        floor: Some(-4),
        source: "u D^-1 - u' D^-2 + u'' D^-3 - u''' D^-4",
    },
    OperatorFixture {
        location: "leibniz.d-2",
        power: -2,
        floor: Some(-5),
        source: "u D^-2 - 2 u' D^-3 + 3 u'' D^-4 - 4 (1/2)^3 u''' D^-5",
    },
    OperatorFixture {
        location: "leibniz.d-3",
        power: -3,
        floor: Some(-6),
        source: "u D^-3 - 3 (1/2) u' D^-4 + 6 (1/2)^2 u'' D^-5 - 10 (1/2)^3 u''' D^-6",
    },
];

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_fixture_parses() {
        let mut polys: Vec<PolyFixture> = SL2_ROOT.to_vec();
        polys.extend(SL2_SYMMETRIZED.iter().map(|(_, f)| *f));
        polys.extend(SL2_FLOWS.iter().map(|(_, f)| *f));
        polys.extend(SL2_LEADING_NONLINEARITY.iter().map(|(_, f, _)| *f));
        polys.extend(SL3_ROOT);
        polys.extend(SL3_SYMMETRIZED.iter().map(|(_, f)| *f));
        for (_, a, b) in SL3_FLOWS.iter().chain(SL3_PRIMARY_FLOWS) {
            polys.push(*a);
            polys.push(*b);
        }
        polys.push(SL3_SECOND_ORDER);
        polys.push(SL2_HAMILTONIAN_H3);
        for f in polys {
            let p = f.parse().unwrap_or_else(|e| panic!("{}: {e}", f.location));
            assert!(!p.is_zero(), "{}", f.location);
        }
        for f in LEIBNIZ {
            let op = f.parse().unwrap_or_else(|e| panic!("{}: {e}", f.location));
            assert_eq!(op.top_degree(), Some(f.power), "{}", f.location);
        }
    }

    #[test]
    fn locations_are_unique() {
        let mut locs: Vec<&str> = SL2_ROOT.iter().map(|f| f.location).collect();
        locs.extend(SL3_ROOT.iter().map(|f| f.location));
        locs.extend(LEIBNIZ.iter().map(|f| f.location));
        let n = locs.len();
        locs.sort();
        locs.dedup();
        assert_eq!(locs.len(), n);
    }
}
