//! Exponent bases of the tradeoff procedures and the tables built from them.
//!
//! All powers are evaluated in log space with `0^0 = 1` and `0 ln 0 = 0`.

use std::fmt::Write as _;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use statrs::function::gamma::ln_gamma;

use crate::error::{Error, Result};

/// Golden-section tolerance for the inner maximization over β.
pub const BETA_TOL: f64 = 1e-9;
/// Grid step of the outer minimization over c.
pub const C_STEP: f64 = 1e-3;
pub const C_MIN: f64 = 1.0;
pub const C_MAX: f64 = 4.0;

const BETA_GRID: usize = 64;

fn xlnx(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else {
        x * x.ln()
    }
}

/// `coef * ln(x)` with `0 * ln 0 = 0`.
fn scaled_ln(coef: f64, x: f64) -> f64 {
    if coef == 0.0 {
        0.0
    } else {
        coef * x.ln()
    }
}

/// Minimizes a unimodal `f` on `[a, b]`; returns `(x, f(x))`.
pub fn golden_section_minimize(
    f: impl Fn(f64) -> f64,
    mut a: f64,
    mut b: f64,
    tol: f64,
) -> (f64, f64) {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = b - inv_phi * (b - a);
    let mut x2 = a + inv_phi * (b - a);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    while b - a > tol {
        if f1 <= f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - inv_phi * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + inv_phi * (b - a);
            f2 = f(x2);
        }
    }
    let x = 0.5 * (a + b);
    (x, f(x))
}

pub fn beta_star(alpha: f64, epsilon: f64) -> f64 {
    (4.0 * alpha - 3.0 + 4.0 * epsilon) / (1.0 + 4.0 * epsilon)
}

fn check_alpha(alpha: f64, lo: f64) -> Result<()> {
    let ok = if lo == 0.0 {
        alpha > 0.0 && alpha <= 1.0
    } else {
        (lo..=1.0).contains(&alpha)
    };
    if ok {
        Ok(())
    } else {
        Err(Error::Domain(format!(
            "alpha={alpha} outside the supported range"
        )))
    }
}

fn check_inputs(alpha: f64, epsilon: f64, c: f64) -> Result<f64> {
    check_alpha(alpha, 0.75)?;
    if !(epsilon >= 0.0 && epsilon.is_finite()) {
        return Err(Error::Domain(format!("epsilon={epsilon} must be >= 0")));
    }
    if !(c >= 1.0 && c.is_finite()) {
        return Err(Error::Domain(format!("c={c} must be >= 1")));
    }
    Ok(beta_star(alpha, epsilon).clamp(0.0, 1.0))
}

/// `27 (1-α)^{1-α} / (3-α)^{3-α}`, the growth rate of `C(3k, αk) / C(k, αk)`.
pub fn base_pack1(alpha: f64) -> Result<f64> {
    check_alpha(alpha, 0.0)?;
    Ok((27f64.ln() + xlnx(1.0 - alpha) - xlnx(3.0 - alpha)).exp())
}

/// `(C(3k, ⌊αk⌋) / C(k, ⌊αk⌋))^{1/k}` for a finite `k`.
pub fn base_pack1_finite(alpha: f64, k: u64) -> f64 {
    let kf = k as f64;
    let a = (alpha * kf + 1e-9).floor();
    let ln_binom = |n: f64, r: f64| ln_gamma(n + 1.0) - ln_gamma(r + 1.0) - ln_gamma(n - r + 1.0);
    ((ln_binom(3.0 * kf, a) - ln_binom(kf, a)) / kf).exp()
}

/// `ln` of `(c(3-β))^{6-4β} / ((2β)^{2β} (c(3-β)-2β)^{6-6β})`.
pub fn ln_pack2_integrand(beta: f64, c: f64) -> f64 {
    let t = c * (3.0 - beta);
    scaled_ln(6.0 - 4.0 * beta, t) - xlnx(2.0 * beta) - scaled_ln(6.0 - 6.0 * beta, t - 2.0 * beta)
}

/// `ln` of `c^{4-2β} / (β^{2β} (c-β)^{4-4β})`.
pub fn ln_match2_integrand(beta: f64, c: f64) -> f64 {
    scaled_ln(4.0 - 2.0 * beta, c) - 2.0 * xlnx(beta) - scaled_ln(4.0 - 4.0 * beta, c - beta)
}

/// Maximum of the log-integrand over `β ∈ [0, β*]`; returns `(max, argmax)`.
fn max_over_beta(ln_g: impl Fn(f64) -> f64, beta_star: f64) -> (f64, f64) {
    if beta_star <= 0.0 {
        return (ln_g(0.0), 0.0);
    }
    let h = beta_star / BETA_GRID as f64;
    let mut best = (ln_g(0.0), 0.0);
    let mut best_i = 0;
    for i in 1..=BETA_GRID {
        let b = h * i as f64;
        let v = ln_g(b);
        if v > best.0 {
            best = (v, b);
            best_i = i;
        }
    }
    let lo = h * best_i.saturating_sub(1) as f64;
    let hi = (h * (best_i + 1) as f64).min(beta_star);
    let (b, neg) = golden_section_minimize(|b| -ln_g(b), lo, hi, BETA_TOL);
    if -neg > best.0 {
        best = (-neg, b);
    }
    let end = ln_g(beta_star);
    if end > best.0 {
        best = (end, beta_star);
    }
    best
}

/// An inner maximum: the base and the β attaining it.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct InnerMax {
    pub base: f64,
    pub beta_hat: f64,
}

/// Optimized base with the minimizing `c` and the inner maximizer `β`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Optimum {
    pub base: f64,
    pub c_hat: f64,
    pub beta_hat: f64,
}

pub fn base_pack2(alpha: f64, epsilon: f64, c: f64) -> Result<InnerMax> {
    let bs = check_inputs(alpha, epsilon, c)?;
    let (v, b) = max_over_beta(|beta| ln_pack2_integrand(beta, c), bs);
    Ok(InnerMax {
        base: v.exp(),
        beta_hat: b,
    })
}

pub fn base_match2(alpha: f64, epsilon: f64, c: f64) -> Result<InnerMax> {
    let bs = check_inputs(alpha, epsilon, c)?;
    if c <= bs {
        return Err(Error::Domain(format!("c={c} must exceed beta*={bs}")));
    }
    let (v, b) = max_over_beta(|beta| ln_match2_integrand(beta, c), bs);
    Ok(InnerMax {
        base: v.exp(),
        beta_hat: b,
    })
}

fn minimize_over_c(inner: impl Fn(f64) -> f64) -> (f64, f64) {
    let steps = ((C_MAX - C_MIN) / C_STEP).round() as usize;
    let mut best = (f64::INFINITY, C_MIN);
    for i in 0..=steps {
        let c = C_MIN + C_STEP * i as f64;
        let v = inner(c);
        if v < best.0 {
            best = (v, c);
        }
    }
    let lo = (best.1 - C_STEP).max(C_MIN);
    let hi = (best.1 + C_STEP).min(C_MAX);
    let (c, v) = golden_section_minimize(&inner, lo, hi, 1e-7);
    if v < best.0 {
        (v, c)
    } else {
        best
    }
}

pub fn optimize_pack2(alpha: f64, epsilon: f64) -> Result<Optimum> {
    let bs = check_inputs(alpha, epsilon, 1.0)?;
    let (v, c) = minimize_over_c(|c| max_over_beta(|b| ln_pack2_integrand(b, c), bs).0);
    let beta_hat = max_over_beta(|b| ln_pack2_integrand(b, c), bs).1;
    Ok(Optimum {
        base: v.exp(),
        c_hat: c,
        beta_hat,
    })
}

pub fn optimize_match2(alpha: f64, epsilon: f64) -> Result<Optimum> {
    let bs = check_inputs(alpha, epsilon, 1.0)?;
    let inner = |c: f64| {
        if c <= bs {
            f64::INFINITY
        } else {
            max_over_beta(|b| ln_match2_integrand(b, c), bs).0
        }
    };
    let (v, c) = minimize_over_c(inner);
    let beta_hat = max_over_beta(|b| ln_match2_integrand(b, c), bs).1;
    Ok(Optimum {
        base: v.exp(),
        c_hat: c,
        beta_hat,
    })
}

/// Exact solvers whose running-time base is scaled by the size of the
/// exactly-solved remainder.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ExactScheme {
    SetPackDet,
    SetPackRand,
    MatchDet,
    MatchRand,
}

/// `8.097^{1.5α-0.5}`, `3.3432^{1.5α-0.5}`, `2.5961^{3α-1}` or `2^{1.5α-0.5}`.
pub fn base_exact_scaled(alpha: f64, scheme: ExactScheme) -> Result<f64> {
    check_alpha(alpha, 0.0)?;
    let half = 1.5 * alpha - 0.5;
    Ok(match scheme {
        ExactScheme::SetPackDet => 8.097f64.powf(half),
        ExactScheme::SetPackRand => 3.3432f64.powf(half),
        ExactScheme::MatchDet => 2.5961f64.powf(3.0 * alpha - 1.0),
        ExactScheme::MatchRand => 2f64.powf(half),
    })
}

/// The five problem variants with a tradeoff table.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum TableKind {
    #[serde(rename = "p2")]
    P2,
    #[serde(rename = "3sp-det")]
    SetPackDet,
    #[serde(rename = "3sp-rand")]
    SetPackRand,
    #[serde(rename = "3dm-det")]
    MatchDet,
    #[serde(rename = "3dm-rand")]
    MatchRand,
}

impl TableKind {
    pub const ALL: [TableKind; 5] = [
        TableKind::P2,
        TableKind::SetPackDet,
        TableKind::SetPackRand,
        TableKind::MatchDet,
        TableKind::MatchRand,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            TableKind::P2 => "p2",
            TableKind::SetPackDet => "3sp-det",
            TableKind::SetPackRand => "3sp-rand",
            TableKind::MatchDet => "3dm-det",
            TableKind::MatchRand => "3dm-rand",
        }
    }

    /// Column names: dispatcher, first procedure, second procedure.
    pub fn procedure_names(self) -> [&'static str; 3] {
        match self {
            TableKind::P2 => ["Pack", "Pack1", "Pack2"],
            TableKind::SetPackDet => ["SetPack", "SetPack1", "Pack2"],
            TableKind::SetPackRand => ["SPRand", "SPRand1", "Pack2"],
            TableKind::MatchDet => ["Match", "Match1", "Match2"],
            TableKind::MatchRand => ["MatchRand", "MatchRand1", "Match2"],
        }
    }

    fn uses_match2(self) -> bool {
        matches!(self, TableKind::MatchDet | TableKind::MatchRand)
    }
}

impl FromStr for TableKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        TableKind::ALL
            .into_iter()
            .find(|t| t.as_str() == s)
            .ok_or_else(|| Error::Domain(format!("unknown problem {s:?}")))
    }
}

/// Base of the first procedure of a table (universal-set or scaled exact).
pub fn base_first(table: TableKind, alpha: f64) -> Result<f64> {
    match table {
        TableKind::P2 => base_pack1(alpha),
        TableKind::SetPackDet => base_exact_scaled(alpha, ExactScheme::SetPackDet),
        TableKind::SetPackRand => base_exact_scaled(alpha, ExactScheme::SetPackRand),
        TableKind::MatchDet => base_exact_scaled(alpha, ExactScheme::MatchDet),
        TableKind::MatchRand => base_exact_scaled(alpha, ExactScheme::MatchRand),
    }
}

/// Base of the second (representative-family) procedure; `c = None`
/// optimizes over `c`.
pub fn base_second(table: TableKind, alpha: f64, epsilon: f64, c: Option<f64>) -> Result<Optimum> {
    match (table.uses_match2(), c) {
        (false, None) => optimize_pack2(alpha, epsilon),
        (true, None) => optimize_match2(alpha, epsilon),
        (false, Some(c)) => base_pack2(alpha, epsilon, c).map(|m| Optimum {
            base: m.base,
            c_hat: c,
            beta_hat: m.beta_hat,
        }),
        (true, Some(c)) => base_match2(alpha, epsilon, c).map(|m| Optimum {
            base: m.base,
            c_hat: c,
            beta_hat: m.beta_hat,
        }),
    }
}

/// Base of the best exact algorithm at full accuracy, raised to `α`.
pub fn exact_reference(table: TableKind, alpha: f64) -> f64 {
    match table {
        TableKind::P2 => 6.75f64.powf(alpha),
        TableKind::SetPackDet => 8.097f64.powf(alpha),
        TableKind::SetPackRand => 3.3432f64.powf(alpha),
        TableKind::MatchDet => 2.5961f64.powf(2.0 * alpha),
        TableKind::MatchRand => 2f64.powf(alpha),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Branch {
    First,
    Second,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Choice {
    pub branch: Branch,
    pub first: f64,
    pub second: Option<Optimum>,
}

impl Choice {
    pub fn base(&self) -> f64 {
        match (self.branch, self.second) {
            (Branch::Second, Some(o)) => o.base,
            _ => self.first,
        }
    }
}

/// Cheaper of the two procedures at `α`; ties go to the first. The second
/// procedure is only considered for `α >= 3/4`.
pub fn choose(table: TableKind, alpha: f64, epsilon: f64, c: Option<f64>) -> Result<Choice> {
    let first = base_first(table, alpha)?;
    let second = if alpha >= 0.75 {
        Some(base_second(table, alpha, epsilon, c)?)
    } else {
        None
    };
    let branch = match second {
        Some(o) if o.base < first => Branch::Second,
        _ => Branch::First,
    };
    Ok(Choice {
        branch,
        first,
        second,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TradeoffRow {
    pub problem: TableKind,
    pub alpha: f64,
    pub dispatcher: f64,
    pub proc1: f64,
    pub proc2: Option<f64>,
    pub c_hat: Option<f64>,
    pub beta_hat: Option<f64>,
    pub exact_reference: f64,
    pub branch: Branch,
    /// The second procedure is slower than the first at this `α`.
    pub proc2_dominated: bool,
}

/// `α = 0.99, 0.98, …, 0.76`.
pub fn tabulated_alphas() -> Vec<f64> {
    (76..=99).rev().map(|i| i as f64 / 100.0).collect()
}

pub fn emit_table(table: TableKind, alphas: &[f64], epsilon: f64) -> Result<Vec<TradeoffRow>> {
    alphas
        .iter()
        .map(|&alpha| {
            let ch = choose(table, alpha, epsilon, None)?;
            Ok(TradeoffRow {
                problem: table,
                alpha,
                dispatcher: ch.base(),
                proc1: ch.first,
                proc2: ch.second.map(|o| o.base),
                c_hat: ch.second.map(|o| o.c_hat),
                beta_hat: ch.second.map(|o| o.beta_hat),
                exact_reference: exact_reference(table, alpha),
                branch: ch.branch,
                proc2_dominated: ch.second.is_some_and(|o| o.base > ch.first),
            })
        })
        .collect()
}

pub fn render_csv(rows: &[TradeoffRow]) -> String {
    let mut out = String::from("alpha,dispatcher,proc1,proc2,c_hat,exact_reference\n");
    let opt = |v: Option<f64>| v.map(|x| format!("{x:.4}")).unwrap_or_default();
    for r in rows {
        let _ = writeln!(
            out,
            "{},{:.4},{:.4},{},{},{:.4}",
            r.alpha,
            r.dispatcher,
            r.proc1,
            opt(r.proc2),
            r.c_hat.map(|c| format!("{c:.3}")).unwrap_or_default(),
            r.exact_reference
        );
    }
    out
}

pub fn render_text(rows: &[TradeoffRow]) -> String {
    let Some(first) = rows.first() else {
        return String::new();
    };
    let [d, p1, p2] = first.problem.procedure_names();
    let mut out = format!(
        "{:>6}  {:>10}  {:>10}  {:>10}  {:>6}  {:>10}\n",
        "alpha", d, p1, p2, "c", "exact"
    );
    for r in rows {
        let p2 = match r.proc2 {
            Some(v) if r.proc2_dominated => format!("({v:.4})"),
            Some(v) => format!("{v:.4}"),
            None => "-".into(),
        };
        let c = r
            .c_hat
            .map(|c| format!("{c:.3}"))
            .unwrap_or_else(|| "-".into());
        let _ = writeln!(
            out,
            "{:>6.2}  {:>10.4}  {:>10.4}  {:>10}  {:>6}  {:>10.4}",
            r.alpha, r.dispatcher, r.proc1, p2, c, r.exact_reference
        );
    }
    out
}
