//! Browser bindings for the static demo in `www/`.
//!
//! Each export returns rendered text, LaTeX or JSON; errors surface as
//! JavaScript exceptions carrying the message.

use pdo_core::hierarchy::{lax_flow_auto, to_primary_basis};
use pdo_core::roots::nth_root;
use pdo_core::{FieldRegistry, LaxOperator, PsiDO};
use wasm_bindgen::prelude::*;

pub fn render_root(order: u32, depth: usize, format: &str) -> Result<String, String> {
    if !(2..=6).contains(&order) || !(1..=12).contains(&depth) {
        return Err("order must be 2..6 and depth 1..12".into());
    }
    let lax = LaxOperator::for_order(order).map_err(|e| e.to_string())?;
    let root = nth_root(&lax, depth).map_err(|e| e.to_string())?;
    let rows = root.b_table().iter().enumerate().skip(2);
    Ok(match format {
        "latex" => rows
            .map(|(j, b)| format!("b_{{{j}}} = {}", b.to_latex()))
            .collect::<Vec<_>>()
            .join("\n"),
        "json" => {
            let rows: Vec<_> = rows
                .map(|(j, b)| serde_json::json!({"index": j, "poly": b.to_json_value()}))
                .collect();
            serde_json::to_string_pretty(&rows).expect("serializable")
        }
        _ => rows
            .map(|(j, b)| format!("b{j} = {b}"))
            .collect::<Vec<_>>()
            .join("\n"),
    })
}

pub fn render_flow(
    hierarchy: &str,
    time: u32,
    primary: bool,
    format: &str,
) -> Result<String, String> {
    let lax = match hierarchy {
        "sl2" => LaxOperator::sl2(),
        "sl3" => LaxOperator::sl3(),
        other => return Err(format!("unknown hierarchy '{other}'")),
    };
    if !(1..=9).contains(&time) {
        return Err("time must be 1..9".into());
    }
    let mut flow = lax_flow_auto(&lax, time).map_err(|e| e.to_string())?;
    if primary {
        flow = to_primary_basis(&flow).map_err(|e| e.to_string())?;
    }
    Ok(match format {
        "latex" => flow.to_latex(),
        "json" => serde_json::to_string_pretty(&flow.to_json()).expect("serializable"),
        _ => flow.to_text(),
    })
}

pub fn render_compose(a: &str, b: &str, fields: &str, floor: i32) -> Result<String, String> {
    let reg = match fields {
        "sl2" => FieldRegistry::sl2(),
        "sl3" => FieldRegistry::sl3(),
        other => return Err(format!("unknown field set '{other}'")),
    };
    if floor < -12 {
        return Err("floor must be at least -12".into());
    }
    // negative powers need a floor; purely differential input stays exact
    let parse = |src: &str| {
        PsiDO::parse(src, &reg, None)
            .or_else(|_| PsiDO::parse(src, &reg, Some(floor)))
            .map_err(|e| e.to_string())
    };
    let (a, b) = (parse(a)?, parse(b)?);
    let (product, bracket) = if a.is_exact() && b.is_exact() {
        (a.compose(&b), a.commutator(&b))
    } else {
        (
            a.compose_truncated(&b, floor),
            a.commutator_truncated(&b, floor),
        )
    };
    Ok(format!("A B = {product}\n[A, B] = {bracket}"))
}

/// `b_2 .. b_{depth+1}` of `L^{1/order}`; `format` is text, latex or json.
#[wasm_bindgen]
pub fn root_table(order: u32, depth: usize, format: &str) -> Result<String, JsError> {
    render_root(order, depth, format).map_err(|e| JsError::new(&e))
}

/// The `t_time` flow of `sl2` or `sl3`.
#[wasm_bindgen]
pub fn flow(hierarchy: &str, time: u32, primary: bool, format: &str) -> Result<String, JsError> {
    render_flow(hierarchy, time, primary, format).map_err(|e| JsError::new(&e))
}

/// Product and commutator of two operators, certified down to `floor`.
#[wasm_bindgen]
pub fn compose(a: &str, b: &str, fields: &str, floor: i32) -> Result<String, JsError> {
    render_compose(a, b, fields, floor).map_err(|e| JsError::new(&e))
}
