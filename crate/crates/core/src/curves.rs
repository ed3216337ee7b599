//! Secure-degree-of-freedom and finite-power rate curves across schemes.

use crate::channel::{decompose, RationalDecomposition, INTEGER_TOL};
use crate::error::{Error, Result};
use crate::schemes::{
    algebraic_irrational_rate, asymmetric_optimum, best_nested_sdof, best_nested_sdof_for_pairs,
    expansion_sdof, gaussian_baseline_limit, layered_allocation, nested_sdof_unclamped, to_db,
    ExpansionSdof,
};
use crate::EavSign;

/// Value of a scheme that only applies at one isolated gain.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpecialValue {
    pub sdof: f64,
    pub scheme: &'static str,
}

/// One abscissa of the secure-degree-of-freedom comparison.
#[derive(Debug, Clone, PartialEq)]
pub struct SdofPoint {
    pub cross: f64,
    pub nested: f64,
    pub nested_decomposition: Option<RationalDecomposition>,
    /// Largest unclamped nested value when every candidate was negative.
    pub nested_pre_clamp: Option<f64>,
    /// `None` where neither the gain nor its inverse reaches 2.
    pub expansion: Option<ExpansionSdof>,
    pub special: Option<SpecialValue>,
    pub winner: &'static str,
}

/// The large-power value available at the isolated gains 1, 1.5 and 2.
pub fn special_value(cross: f64, sign: EavSign) -> Option<SpecialValue> {
    let near = |v: f64| (cross - v).abs() <= INTEGER_TOL;
    if near(1.0) {
        Some(match sign {
            EavSign::Plus => SpecialValue {
                sdof: 0.0,
                scheme: "degraded",
            },
            EavSign::Minus => SpecialValue {
                sdof: asymmetric_optimum().gap / 2.0,
                scheme: "theorem7",
            },
        })
    } else if near(1.5) {
        Some(SpecialValue {
            sdof: 1.0 / 6.0,
            scheme: "theorem8",
        })
    } else if near(2.0) {
        Some(SpecialValue {
            sdof: 0.25,
            scheme: "expansion",
        })
    } else {
        None
    }
}

/// Evaluates every scheme at one cross gain. With `pairs`, the nested
/// column only uses those `(p, q)` decompositions.
pub fn sdof_point(
    cross: f64,
    sign: EavSign,
    max_q: u64,
    pairs: Option<&[(u64, u64)]>,
) -> Result<SdofPoint> {
    if !(cross.is_finite() && cross > 0.0) {
        return Err(Error::Domain(format!(
            "cross gain must be positive, got {cross}"
        )));
    }
    let (nested, decomposition) = match pairs {
        Some(p) => best_nested_sdof_for_pairs(cross, p),
        None => best_nested_sdof(cross, max_q),
    };
    let nested_pre_clamp = if decomposition.is_none() {
        let q_cap = pairs.map_or(max_q, |p| p.iter().map(|&(_, q)| q).max().unwrap_or(0));
        decompose(cross, q_cap)
            .into_iter()
            .filter(|d| d.gamma.abs() < 0.5)
            .filter(|d| pairs.is_none_or(|p| p.contains(&(d.p, d.q))))
            .filter_map(|d| nested_sdof_unclamped(d.p, d.q, d.gamma).ok())
            .reduce(f64::max)
    } else {
        None
    };
    let expansion = expansion_sdof(cross).ok();
    let special = special_value(cross, sign);
    let candidates = [
        ("nested", nested),
        ("expansion", expansion.map_or(0.0, |e| e.sdof)),
        (
            special.map_or("", |s| s.scheme),
            special.map_or(0.0, |s| s.sdof),
        ),
    ];
    let mut winner = ("none", 0.0);
    for (name, v) in candidates {
        if v > winner.1 {
            winner = (name, v);
        }
    }
    Ok(SdofPoint {
        cross,
        nested,
        nested_decomposition: decomposition,
        nested_pre_clamp,
        expansion,
        special,
        winner: winner.0,
    })
}

/// Sweep parameters of [`rate_curve`].
#[derive(Debug, Clone, PartialEq)]
pub struct RateCurveParams {
    /// Squared gains of the physical channel.
    pub a: f64,
    pub b: f64,
    pub db_grid: Vec<f64>,
    pub max_q: u64,
    pub max_layers: u32,
    pub eps_step: f64,
    pub log10_p_step: f64,
    pub log10_p_max: f64,
}

impl RateCurveParams {
    pub fn new(a: f64, b: f64, db_grid: Vec<f64>) -> Self {
        RateCurveParams {
            a,
            b,
            db_grid,
            max_q: 20,
            max_layers: 40,
            eps_step: 0.005,
            log10_p_step: 0.01,
            log10_p_max: 12.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RatePoint {
    pub db: f64,
    /// Best layered nested-lattice rate with total power at most `db`.
    pub nested: f64,
    /// Best algebraic-irrational integer-lattice rate within the same power.
    pub integer: f64,
    pub gaussian: Option<f64>,
    pub winner: &'static str,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RateCurve {
    pub points: Vec<RatePoint>,
    /// First grid power where the integer frontier beats the Gaussian limit.
    pub crossover_db: Option<f64>,
}

/// Running maximum of rate over `(power_db, rate)` pairs sorted by power,
/// queried at `db`.
struct Frontier {
    power: Vec<f64>,
    best: Vec<f64>,
}

impl Frontier {
    fn new(mut pts: Vec<(f64, f64)>) -> Self {
        pts.sort_by(|a, b| a.0.total_cmp(&b.0));
        let mut best = Vec::with_capacity(pts.len());
        let mut run = 0.0f64;
        for p in &pts {
            run = run.max(p.1);
            best.push(run);
        }
        Frontier {
            power: pts.into_iter().map(|p| p.0).collect(),
            best,
        }
    }

    fn at(&self, db: f64) -> f64 {
        let n = self.power.partition_point(|&p| p <= db);
        if n == 0 {
            0.0
        } else {
            self.best[n - 1]
        }
    }
}

/// Finite-power frontiers of the layered nested scheme over all
/// decompositions with `q <= max_q` and up to `max_layers` layers, and of
/// the algebraic-irrational family over an `eps` grid and a power grid,
/// against the power-unconstrained Gaussian limit.
pub fn rate_curve(params: &RateCurveParams) -> Result<RateCurve> {
    let (a, b) = (params.a, params.b);
    if !(a > 0.0 && b > 0.0) {
        return Err(Error::Domain("gains must be positive".into()));
    }
    let cross = (a * b).sqrt();
    let mut nested_pts = Vec::new();
    for d in decompose(cross, params.max_q)
        .into_iter()
        .filter(|d| d.gamma.abs() < 0.5)
    {
        for m in 1..=params.max_layers as usize {
            let alloc = layered_allocation(d.p, d.q, d.gamma, b, m)?;
            nested_pts.push((alloc.total_power_db(), alloc.secrecy_rate()));
        }
    }
    let nested = Frontier::new(nested_pts);

    let threshold = (1.0 / (a * a * b * b)).log10();
    let mut integer_pts = Vec::new();
    let n_eps = (0.25 / params.eps_step).round() as usize;
    let mut lp = (threshold / params.log10_p_step).floor() * params.log10_p_step;
    while lp <= params.log10_p_max {
        if lp > threshold {
            let p = 10f64.powf(lp);
            for i in 1..n_eps {
                let eps = i as f64 * params.eps_step;
                let pt = algebraic_irrational_rate(p, eps, a, b)?;
                integer_pts.push((to_db(pt.total_power), pt.secrecy_rate));
            }
        }
        lp += params.log10_p_step;
    }
    let integer = Frontier::new(integer_pts);

    let gaussian = gaussian_baseline_limit(a, b);
    let mut crossover_db = None;
    let points = params
        .db_grid
        .iter()
        .map(|&db| {
            let n = nested.at(db);
            let i = integer.at(db);
            if let Some(g) = gaussian {
                if crossover_db.is_none() && i > g {
                    crossover_db = Some(db);
                }
            }
            let mut winner = ("none", 0.0);
            for (name, v) in [
                ("nested", n),
                ("integer", i),
                ("gaussian", gaussian.unwrap_or(0.0)),
            ] {
                if v > winner.1 {
                    winner = (name, v);
                }
            }
            RatePoint {
                db,
                nested: n,
                integer: i,
                gaussian,
                winner: winner.0,
            }
        })
        .collect();
    Ok(RateCurve {
        points,
        crossover_db,
    })
}
