//! Randomized structural checks on homogeneous operator spaces `Ξ_m^{(p,q)}`.
//!
//! Samples carry symbolic coefficients: every coefficient is a rational
//! combination of derivatives of fresh fields, so an identity that holds on a
//! sample holds for the whole shape.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::diffpoly::{rat, DiffPoly, FieldSymbol, Spin};
use crate::error::{Error, Result};
use crate::psido::{binomial, pairing, DegreeWindow, PsiDO};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RandomOperatorSpec {
    pub spin: i32,
    pub window: DegreeWindow,
    /// Recorded on the sample; `None` for a finite exact operator.
    pub floor: Option<i32>,
    /// Prefix for the generated field names.
    pub prefix: String,
    pub max_monomials: usize,
    pub max_order: u32,
}

impl RandomOperatorSpec {
    pub fn new(spin: i32, p: i32, q: i32) -> Result<Self> {
        Ok(RandomOperatorSpec {
            spin,
            window: DegreeWindow::new(p, q)?,
            floor: None,
            prefix: "a".into(),
            max_monomials: 2,
            max_order: 2,
        })
    }

    pub fn with_prefix(mut self, prefix: &str) -> Self {
        self.prefix = prefix.to_string();
        self
    }

    pub fn with_budget(mut self, max_monomials: usize, max_order: u32) -> Result<Self> {
        if max_monomials == 0 {
            return Err(Error::InvalidArgument(
                "monomial budget must be positive".into(),
            ));
        }
        self.max_monomials = max_monomials;
        self.max_order = max_order;
        Ok(self)
    }
}

fn random_rational(rng: &mut ChaCha8Rng) -> crate::Rational {
    let n: i64 = rng.gen_range(1..=5);
    let d: i64 = rng.gen_range(1..=3);
    let sign = if rng.gen_bool(0.5) { 1 } else { -1 };
    rat(sign * n, d)
}

/// Deterministic homogeneous operator `Σ_{i=p}^{q} c_i ∂^i` with
/// `spin(c_i) = m - i`.
///
/// `c_i` always contains the underived field `{prefix}{i-p}_0`; further terms
/// are derivatives `({prefix}{i-p}_k)^{(k)}` of fields with spin `m - i - k`.
pub fn sample_operator(spec: &RandomOperatorSpec, seed: u64) -> PsiDO {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let orders: Vec<u32> = (1..=spec.max_order).collect();
    let terms = (spec.window.p()..=spec.window.q()).map(|deg| {
        let idx = deg - spec.window.p();
        let s = spec.spin - deg;
        let mut ks = vec![0];
        let mut extra = orders.clone();
        extra.shuffle(&mut rng);
        let n = rng.gen_range(1..=spec.max_monomials);
        ks.extend(extra.into_iter().take(n - 1));
        let mut c = DiffPoly::zero();
        for k in ks {
            let f = FieldSymbol::new(&format!("{}{idx}_{k}", spec.prefix), s - k as i32);
            c += DiffPoly::jet(f.jet(k)).scale(&random_rational(&mut rng));
        }
        (deg, c)
    });
    PsiDO::from_terms(terms, spec.floor)
}

/// Two samples and their bracket, when the bracket leaves `Ξ_m^{(p,q)}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClosureWitness {
    pub a: PsiDO,
    pub b: PsiDO,
    pub commutator: PsiDO,
    pub reason: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClosureOutcome {
    pub closed: bool,
    pub trials: usize,
    pub witness: Option<ClosureWitness>,
}

/// Whether `[A, B]` stays in `Ξ_m^{(p,q)}` for sampled `A, B`.
///
/// Windows with `p < 0` are read modulo degrees below `p`.
pub fn check_closure(m: i32, p: i32, q: i32, trials: usize, seed: u64) -> Result<ClosureOutcome> {
    DegreeWindow::new(p, q)?;
    for t in 0..trials {
        let base = seed.wrapping_add(2 * t as u64);
        let a = sample_operator(&RandomOperatorSpec::new(m, p, q)?.with_prefix("a"), base);
        let b = sample_operator(
            &RandomOperatorSpec::new(m, p, q)?.with_prefix("b"),
            base + 1,
        );
        let c = if p < 0 {
            a.commutator_truncated(&b, p)
        } else {
            a.commutator(&b)
        };
        if c.is_zero() {
            continue;
        }
        let reason = match c.spin_of_op() {
            Spin::Homogeneous(s) if s != m => Some(format!("bracket has spin {s}, not {m}")),
            Spin::Inhomogeneous => Some("bracket is not homogeneous".to_string()),
            _ => None,
        }
        .or_else(|| {
            (!c.is_within(p, q)).then(|| {
                let top = c.top_degree().unwrap_or(q);
                let low = c.lowest_degree().unwrap_or(p);
                format!("bracket reaches degrees ({low}, {top}) outside ({p}, {q})")
            })
        });
        if let Some(reason) = reason {
            return Ok(ClosureOutcome {
                closed: false,
                trials: t + 1,
                witness: Some(ClosureWitness {
                    a,
                    b,
                    commutator: c,
                    reason,
                }),
            });
        }
    }
    Ok(ClosureOutcome {
        closed: true,
        trials,
        witness: None,
    })
}

/// Parameter points with `|p|, |q| <= bound` satisfying either closure
/// constraint: `m = 0, 0 <= p <= q <= 1` or `m = 0, (p+1)/2 <= q <= -1`.
pub fn closure_constraint_points(bound: i32) -> Vec<(i32, i32, i32)> {
    let mut out = Vec::new();
    for p in -bound..=bound {
        for q in p..=bound {
            let positive = 0 <= p && q <= 1;
            let negative = q <= -1 && p < 2 * q;
            if positive || negative {
                out.push((0, p, q));
            }
        }
    }
    out
}

/// `Σ_{l=0}^{i} C(i,l) C(j,k-l) = C(i+j,k)`, both sides exact.
pub fn check_binomial_identity(i: u32, j: u32, k: u32) -> bool {
    let lhs = (0..=i.min(k)).fold(crate::Rational::from_integer(0.into()), |acc, l| {
        acc + binomial(i as i64, l) * binomial(j as i64, k - l)
    });
    lhs == binomial(i as i64 + j as i64, k)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DualityOutcome {
    /// Some sample pairing against the dual window was nonzero.
    pub dual_nonzero: bool,
    /// Every pairing against a non-dual window vanished.
    pub off_window_zero: bool,
    pub trials: usize,
}

impl DualityOutcome {
    pub fn holds(&self) -> bool {
        self.dual_nonzero && self.off_window_zero
    }
}

/// Pairs samples of `(p, q)` with samples of `(-1-q, -1-p)` and of shifted
/// windows.
pub fn check_duality(p: i32, q: i32, trials: usize, seed: u64) -> Result<DualityOutcome> {
    let w = DegreeWindow::new(p, q)?;
    let d = w.dual();
    let off = [
        (p, q),
        (d.p() + 1, d.q() + 1),
        (d.p() - 1, d.q() - 1),
        (d.p(), d.q() + 1),
    ];
    let mut dual_nonzero = false;
    let mut off_window_zero = true;
    for t in 0..trials {
        let base = seed.wrapping_add(8 * t as u64);
        let a = sample_operator(&RandomOperatorSpec::new(0, p, q)?.with_prefix("a"), base);
        let b = sample_operator(
            &RandomOperatorSpec::new(0, d.p(), d.q())?.with_prefix("b"),
            base + 1,
        );
        dual_nonzero |= !pairing(&a, &b).is_zero();
        for (n, (r, s)) in off.iter().enumerate() {
            if (*r, *s) == (d.p(), d.q()) {
                continue;
            }
            let c = sample_operator(
                &RandomOperatorSpec::new(0, *r, *s)?.with_prefix("c"),
                base + 2 + n as u64,
            );
            off_window_zero &= pairing(&a, &c).is_zero();
        }
    }
    Ok(DualityOutcome {
        dual_nonzero,
        off_window_zero,
        trials,
    })
}

/// `spin(res A) = spin(A) + 1` on samples whose window contains `-1`, and
/// `spin(res(A∘B)) = spin(A) + spin(B) + 1` on products.
pub fn check_residue_weight(trials: usize, seed: u64) -> Result<bool> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for t in 0..trials {
        let m = rng.gen_range(-3..=3);
        let p = rng.gen_range(-3..=-1);
        let q = rng.gen_range(-1..=2);
        let base = seed.wrapping_add(2 * t as u64);
        let a = sample_operator(&RandomOperatorSpec::new(m, p, q)?.with_prefix("a"), base);
        let res = a.residue();
        if res.is_zero() || res.spin_of() != Spin::Homogeneous(m + 1) {
            return Ok(false);
        }
        let n = rng.gen_range(-3..=3);
        let (r, s) = (rng.gen_range(-2..=0), rng.gen_range(0..=2));
        let b = sample_operator(
            &RandomOperatorSpec::new(n, r, s)?.with_prefix("b"),
            base + 1,
        );
        let res = a.compose_truncated(&b, -1).residue();
        if !res.is_zero() && res.spin_of() != Spin::Homogeneous(m + n + 1) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Degree pattern of `A ∘ B`: top degree `q_A + q_B` always; for
/// nonnegative windows the lowest degree is `p_B`; negative windows leave an
/// infinite tail.
pub fn check_window_additivity(trials: usize, seed: u64) -> Result<bool> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for t in 0..trials {
        let base = seed.wrapping_add(2 * t as u64);
        let negative = t % 2 == 1;
        let lo = if negative { -3 } else { 0 };
        let mut window = || {
            let p = rng.gen_range(lo..=2);
            (p, rng.gen_range(p..=3))
        };
        let (pa, qa) = window();
        let (pb, qb) = window();
        let (ma, mb) = (rng.gen_range(-2..=2), rng.gen_range(-2..=2));
        let a = sample_operator(&RandomOperatorSpec::new(ma, pa, qa)?.with_prefix("a"), base);
        let b = sample_operator(
            &RandomOperatorSpec::new(mb, pb, qb)?.with_prefix("b"),
            base + 1,
        );
        let floor = pa.min(0) + pb.min(0) - 2;
        let ab = if pa < 0 {
            a.compose_truncated(&b, floor)
        } else {
            a.compose(&b)
        };
        if ab.top_degree() != Some(qa + qb) || ab.spin_of_op() != Spin::Homogeneous(ma + mb) {
            return Ok(false);
        }
        let low_ok = if pa < 0 {
            !ab.is_exact()
        } else {
            ab.is_exact() && ab.lowest_degree() == Some(pb)
        };
        if !low_ok {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Sign of a spin or of a degree window.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Sign {
    Plus,
    Zero,
    Minus,
}

/// Membership in one of the six subalgebras `Σ_{s d}`: `s` the sign of the
/// spin, `d` whether all degrees are `>= 0` or `<= -1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SigmaClass {
    pub spin: Sign,
    pub degrees: Sign,
}

impl SigmaClass {
    /// The class paired with this one under the combined product.
    pub fn dual(self) -> SigmaClass {
        let flip = |s| match s {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
            Sign::Zero => Sign::Zero,
        };
        SigmaClass {
            spin: flip(self.spin),
            degrees: flip(self.degrees),
        }
    }

    pub fn label(self) -> String {
        let c = |s| match s {
            Sign::Plus => '+',
            Sign::Zero => '0',
            Sign::Minus => '-',
        };
        format!("Σ_{}{}", c(self.spin), c(self.degrees))
    }
}

/// `None` for the zero operator, inhomogeneous spin or a window straddling
/// degree `-1/0`.
pub fn classify(op: &PsiDO) -> Option<SigmaClass> {
    let spin = match op.spin_of_op() {
        Spin::Homogeneous(s) if s > 0 => Sign::Plus,
        Spin::Homogeneous(0) => Sign::Zero,
        Spin::Homogeneous(_) => Sign::Minus,
        _ => return None,
    };
    let w = op.window_of()?;
    let degrees = if w.p() >= 0 {
        Sign::Plus
    } else if w.q() <= -1 {
        Sign::Minus
    } else {
        return None;
    };
    Some(SigmaClass { spin, degrees })
}

/// A row of the weight/degree table for the spaces and operations.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct GradingRow {
    pub object: &'static str,
    /// `None` for indefinite weight.
    pub weight: Option<i32>,
    pub degrees: Option<(i32, i32)>,
}

/// `Ξ_m^{(p,q)}` and `Ξ^{(p,q)}` carry generic parameters; the operations
/// have fixed weight and map to degree `(0, 0)`.
pub const GRADING_TABLE: &[GradingRow] = &[
    GradingRow {
        object: "Xi_m^(p,q)",
        weight: Some(0),
        degrees: None,
    },
    GradingRow {
        object: "Xi^(p,q)",
        weight: None,
        degrees: None,
    },
    GradingRow {
        object: "<,>",
        weight: Some(-1),
        degrees: Some((0, 0)),
    },
    GradingRow {
        object: "res",
        weight: Some(1),
        degrees: Some((0, 0)),
    },
    GradingRow {
        object: "<<,>>",
        weight: Some(0),
        degrees: Some((0, 0)),
    },
];

/// Validates each row of [`GRADING_TABLE`] on samples; the weight entry of
/// `Ξ_m^{(p,q)}` is read as an offset from `m`.
pub fn check_grading_table(trials: usize, seed: u64) -> Result<Vec<(&'static str, bool)>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut ok = [true; 5];
    for t in 0..trials {
        let base = seed.wrapping_add(4 * t as u64);
        let m = rng.gen_range(-3..=3);
        let p = rng.gen_range(-3..=1);
        let q = rng.gen_range(p..=2);
        let a = sample_operator(&RandomOperatorSpec::new(m, p, q)?.with_prefix("a"), base);
        let w = a.window_of();
        ok[0] &= a.spin_of_op() == Spin::Homogeneous(m + GRADING_TABLE[0].weight.unwrap_or(0))
            && w.map(|w| (w.p(), w.q())) == Some((p, q));

        let b = sample_operator(
            &RandomOperatorSpec::new(m + 1, p, q)?.with_prefix("b"),
            base + 1,
        );
        let sum = &a + &b;
        ok[1] &= sum.spin_of_op() == Spin::Inhomogeneous
            && sum.window_of().map(|w| (w.p(), w.q())) == Some((p, q));

        // <u, v> = ∫ u v: the density has spin m + n, the integral one less
        let u = sample_operator(
            &RandomOperatorSpec::new(m, 0, 0)?.with_prefix("u"),
            base + 2,
        );
        let v = sample_operator(
            &RandomOperatorSpec::new(-m, 0, 0)?.with_prefix("v"),
            base + 3,
        );
        let density = &u.coeff(0) * &v.coeff(0);
        ok[2] &= integrated_weight(&density) == Some(GRADING_TABLE[2].weight.unwrap())
            && u.compose(&v).window_of().map(|w| (w.p(), w.q())) == Some((0, 0));

        if p <= -1 && q >= -1 {
            let r = a.residue();
            ok[3] &= r.spin_of().value().map(|s| s - m) == GRADING_TABLE[3].weight;
        }

        let dual = DegreeWindow::new(p, q)?.dual();
        let c = sample_operator(
            &RandomOperatorSpec::new(-m, dual.p(), dual.q())?.with_prefix("c"),
            base + 4,
        );
        let paired = crate::psido::combined_pairing(&a, &c);
        ok[4] &= paired.is_zero() || integrated_weight(&paired) == GRADING_TABLE[4].weight;
    }
    Ok(GRADING_TABLE.iter().map(|r| r.object).zip(ok).collect())
}

/// Weight of `∫ dz f` for homogeneous `f`: `dz` has weight `-1`.
pub fn integrated_weight(f: &DiffPoly) -> Option<i32> {
    f.spin_of().value().map(|s| s - 1)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sampling_shapes() {
        let spec = RandomOperatorSpec::new(0, 1, 1)
            .unwrap()
            .with_budget(1, 0)
            .unwrap();
        let a = sample_operator(&spec, 3);
        assert_eq!(a.top_degree(), Some(1));
        assert_eq!(a.lowest_degree(), Some(1));
        assert_eq!(a.coeff(1).spin_of(), Spin::Homogeneous(-1));
        let spec = RandomOperatorSpec::new(2, 0, 2).unwrap();
        let a = sample_operator(&spec, 11);
        for d in 0..=2 {
            assert_eq!(a.coeff(d).spin_of(), Spin::Homogeneous(2 - d));
        }
        assert_eq!(a.spin_of_op(), Spin::Homogeneous(2));
        assert_eq!(sample_operator(&spec, 11), a);
        assert_ne!(sample_operator(&spec, 12), a);
    }

    #[test]
    fn closure_examples() {
        assert!(check_closure(0, 0, 1, 20, 1).unwrap().closed);
        assert!(check_closure(0, -3, -2, 20, 1).unwrap().closed);
        let out = check_closure(2, 0, 2, 5, 1).unwrap();
        assert!(!out.closed);
        let w = out.witness.unwrap();
        assert_eq!(w.commutator.spin_of_op(), Spin::Homogeneous(4));
        assert_eq!(w.commutator.top_degree(), Some(3));
    }

    #[test]
    fn constraint_points() {
        let pts = closure_constraint_points(4);
        assert!(pts.contains(&(0, 0, 1)));
        assert!(pts.contains(&(0, -3, -1)));
        assert!(!pts.contains(&(0, -3, -2)));
        assert!(!pts.contains(&(0, 0, 2)));
    }

    #[test]
    fn binomial_examples() {
        assert!(check_binomial_identity(2, 2, 2));
        assert!(check_binomial_identity(0, 5, 3));
        assert!(check_binomial_identity(1, 1, 1));
        assert!(check_binomial_identity(3, 1, 9));
    }

    #[test]
    fn duality_examples() {
        assert!(check_duality(0, 0, 5, 2).unwrap().holds());
        assert!(check_duality(0, 1, 5, 2).unwrap().holds());
        let reg_free = RandomOperatorSpec::new(0, 0, 0).unwrap();
        let a = sample_operator(&reg_free, 1);
        let b = sample_operator(&reg_free.clone().with_prefix("b"), 2);
        assert!(pairing(&a, &b).is_zero());
    }

    #[test]
    fn classifier() {
        let a = sample_operator(&RandomOperatorSpec::new(2, 0, 2).unwrap(), 1);
        let c = classify(&a).unwrap();
        assert_eq!(c.label(), "Σ_++");
        let b = sample_operator(&RandomOperatorSpec::new(-2, -3, -1).unwrap(), 1);
        assert_eq!(classify(&b), Some(c.dual()));
        let z = sample_operator(&RandomOperatorSpec::new(0, -1, 1).unwrap(), 1);
        assert_eq!(classify(&z), None);
        assert_eq!(classify(&PsiDO::zero()), None);
    }

    #[test]
    fn grading_suites() {
        assert!(check_residue_weight(20, 5).unwrap());
        assert!(check_window_additivity(20, 5).unwrap());
        for (row, ok) in check_grading_table(20, 5).unwrap() {
            assert!(ok, "{row}");
        }
    }
}
