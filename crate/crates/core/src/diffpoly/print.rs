use num_traits::{One, Signed};

use super::{DiffPoly, Jet, PowerProduct, Rational};

/// Display order: higher nonlinearity first, then canonical order.
pub(crate) fn display_order(p: &DiffPoly) -> Vec<(&PowerProduct, &Rational)> {
    let mut terms: Vec<_> = p.terms().collect();
    terms.sort_by(|a, b| b.0.degree().cmp(&a.0.degree()).then_with(|| a.0.cmp(b.0)));
    terms
}

pub(crate) fn jet_text(jet: &Jet) -> String {
    let name = jet.field.name();
    match jet.order {
        0 => name.to_string(),
        k @ 1..=3 => format!("{name}{}", "'".repeat(k as usize)),
        k => format!("{name}^({k})"),
    }
}

pub(crate) fn product_text(pp: &PowerProduct) -> String {
    pp.factors()
        .iter()
        .map(|(j, p)| {
            if *p == 1 {
                jet_text(j)
            } else {
                format!("{}^{p}", jet_text(j))
            }
        })
        .collect::<Vec<_>>()
        .join(" ")
}

fn join_signed<F>(p: &DiffPoly, mut term: F, zero: &str) -> String
where
    F: FnMut(&Rational, &PowerProduct) -> String,
{
    if p.is_zero() {
        return zero.to_string();
    }
    let mut out = String::new();
    for (i, (pp, c)) in display_order(p).into_iter().enumerate() {
        let body = term(&c.abs(), pp);
        match (i, c.is_negative()) {
            (0, false) => out.push_str(&body),
            (0, true) => {
                out.push('-');
                out.push_str(&body);
            }
            (_, false) => {
                out.push_str(" + ");
                out.push_str(&body);
            }
            (_, true) => {
                out.push_str(" - ");
                out.push_str(&body);
            }
        }
    }
    out
}

pub(crate) fn to_text(p: &DiffPoly) -> String {
    join_signed(
        p,
        |c, pp| match (c.is_one(), pp.is_one()) {
            (_, true) => c.to_string(),
            (true, false) => product_text(pp),
            (false, false) => format!("{c} {}", product_text(pp)),
        },
        "0",
    )
}

fn latex_name(name: &str) -> String {
    let split = name
        .char_indices()
        .find(|(_, ch)| ch.is_ascii_digit())
        .map(|(i, _)| i);
    match split {
        Some(i) if i > 0 => format!("{}_{{{}}}", &name[..i], &name[i..]),
        _ => name.to_string(),
    }
}

pub(crate) fn jet_latex(jet: &Jet) -> String {
    let name = latex_name(jet.field.name());
    match jet.order {
        0 => name,
        k @ 1..=3 => format!("{name}^{{{}}}", "\\prime".repeat(k as usize)),
        k => format!("{name}^{{({k})}}"),
    }
}

pub(crate) fn rational_latex(c: &Rational) -> String {
    if c.denom().is_one() {
        c.numer().to_string()
    } else {
        format!("\\frac{{{}}}{{{}}}", c.numer(), c.denom())
    }
}

pub(crate) fn product_latex(pp: &PowerProduct) -> String {
    pp.factors()
        .iter()
        .map(|(j, p)| match (*p, j.order) {
            (1, _) => jet_latex(j),
            (p, 0) => format!("{}^{{{p}}}", jet_latex(j)),
            (p, _) => format!("{{{}}}^{{{p}}}", jet_latex(j)),
        })
        .collect::<Vec<_>>()
        .join(" ")
}

pub(crate) fn to_latex(p: &DiffPoly) -> String {
    join_signed(
        p,
        |c, pp| match (c.is_one(), pp.is_one()) {
            (_, true) => rational_latex(c),
            (true, false) => product_latex(pp),
            (false, false) => format!("{} {}", rational_latex(c), product_latex(pp)),
        },
        "0",
    )
}

impl DiffPoly {
    pub fn to_latex(&self) -> String {
        to_latex(self)
    }

    /// Wraps multi-term polynomials in parentheses.
    pub fn to_text_grouped(&self) -> String {
        if self.len() > 1 {
            format!("({self})")
        } else {
            self.to_string()
        }
    }

    pub fn to_latex_grouped(&self) -> String {
        if self.len() > 1 {
            format!("\\left({}\\right)", to_latex(self))
        } else {
            to_latex(self)
        }
    }
}

impl PowerProduct {
    pub fn to_text(&self) -> String {
        if self.is_one() {
            "1".into()
        } else {
            product_text(self)
        }
    }
}
