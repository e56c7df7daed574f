use std::fmt::Write;

use kcontract::certify::{NetworkCondition, Tolerances};
use kcontract::config::CertificationOutcome;

/// 12 significant digits, trailing zeros removed.
pub fn num(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let exp = x.abs().log10().floor() as i32;
    if (-5..12).contains(&exp) {
        let decimals = (11 - exp).max(0) as usize;
        let s = format!("{x:.decimals$}");
        if s.contains('.') {
            s.trim_end_matches('0').trim_end_matches('.').to_string()
        } else {
            s
        }
    } else {
        let s = format!("{x:.11e}");
        let (mant, e) = s.split_once('e').expect("exponent form");
        let mant = if mant.contains('.') { mant.trim_end_matches('0').trim_end_matches('.') } else { mant };
        format!("{mant}e{e}")
    }
}

pub fn condition_line(c: &NetworkCondition<f64>, k: usize) -> String {
    let rel = if c.holds() { "<" } else { ">=" };
    format!("L^2 * sum of top-{k} sigma_i^2(W) = {} {rel} {} = alpha^2 k", num(c.value), num(c.threshold))
}

pub fn tolerances_line(t: &Tolerances) -> String {
    format!(
        "psd_rel = {}, strict_rel = {}, gain_rel = {}, max_vertex_dim = {}",
        num(t.psd_rel),
        num(t.strict_rel),
        num(t.gain_rel),
        t.max_vertex_dim
    )
}

pub fn certification_text(kind: &str, n: usize, out: &CertificationOutcome) -> String {
    let c = &out.certificate;
    let mut s = String::new();
    let _ = writeln!(s, "system: {kind} (n = {n}), k = {}", c.k);
    if let Some(cond) = &out.network_condition {
        let _ = writeln!(s, "condition: {}", condition_line(cond, c.k));
    }
    if let Some(g) = &out.scalar_search {
        let _ = writeln!(s, "scalar construction: gamma = {}, p = {}", num(g.gamma), num(g.p));
    }
    if let Some(p) = out.p_scalar {
        let _ = writeln!(s, "scalar search: P = {} I", num(p));
    }
    let verdict = if c.passed { format!("certified {}-contractive", c.k) } else { "not certified".to_string() };
    let _ = writeln!(s, "result: {verdict}");
    let _ = writeln!(s, "eta1 = {}, eta2 = {}, rate bound = {}", num(c.eta1), num(c.eta2), num(c.rate_bound));
    let _ = writeln!(s, "margins:");
    for (name, v) in &c.margins {
        let _ = writeln!(s, "  {name} = {}", num(*v));
    }
    if !c.assumptions.is_empty() {
        let _ = writeln!(s, "assumptions:");
        for a in &c.assumptions {
            let _ = writeln!(s, "  - {a}");
        }
    }
    let _ = writeln!(s, "tolerances: {}", tolerances_line(&c.tolerances));
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn formats_numbers() {
        assert_eq!(num(0.0049 * 100.0), "0.49");
        assert_eq!(num(0.5), "0.5");
        assert_eq!(num(-0.24000000000000002), "-0.24");
        assert_eq!(num(3.0), "3");
        assert_eq!(num(1e-9), "1e-9");
        assert_eq!(num(1.5e20), "1.5e20");
        assert_eq!(num(123456.0), "123456");
    }
}
