use num_traits::{One, Signed};

use super::PsiDO;
use crate::diffpoly::DiffPoly;

fn d_text(k: i32) -> String {
    match k {
        1 => "D".into(),
        k => format!("D^{k}"),
    }
}

fn d_latex(k: i32) -> String {
    match k {
        1 => "\\partial".into(),
        k => format!("\\partial^{{{k}}}"),
    }
}

/// Splits a coefficient into (negative?, body) so single negative monomials
/// print as subtraction.
fn signed_body(c: &DiffPoly, deg: i32, latex: bool) -> (bool, String) {
    let single_neg = c.len() == 1 && c.terms().next().is_some_and(|(_, k)| k.is_negative());
    let c = if single_neg { -c } else { c.clone() };
    let d = if latex { d_latex(deg) } else { d_text(deg) };
    let body = if deg == 0 {
        if latex {
            c.to_latex_grouped()
        } else {
            c.to_text_grouped()
        }
    } else if c.as_constant().is_some_and(|k| k.is_one()) {
        d
    } else if latex {
        format!("{} {d}", c.to_latex_grouped())
    } else {
        format!("{} {d}", c.to_text_grouped())
    };
    (single_neg, body)
}

fn render(op: &PsiDO, latex: bool) -> String {
    let mut out = String::new();
    for (i, (deg, c)) in op.terms().rev().enumerate() {
        let (neg, body) = signed_body(c, deg, latex);
        match (i, neg) {
            (0, false) => {}
            (0, true) => out.push('-'),
            (_, false) => out.push_str(" + "),
            (_, true) => out.push_str(" - "),
        }
        out.push_str(&body);
    }
    if let Some(f) = op.floor() {
        let tail = if latex {
            format!("O(\\partial^{{{}}})", f - 1)
        } else {
            format!("O(D^{})", f - 1)
        };
        if out.is_empty() {
            out = tail;
        } else {
            out.push_str(" + ");
            out.push_str(&tail);
        }
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

impl PsiDO {
    /// Degree-descending text form, `D` standing for `∂`.
    pub fn to_text(&self) -> String {
        render(self, false)
    }

    pub fn to_latex(&self) -> String {
        render(self, true)
    }
}

impl std::fmt::Display for PsiDO {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.to_text())
    }
}
