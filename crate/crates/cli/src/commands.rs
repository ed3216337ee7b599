use crate::config::{check_increasing, grid, Config};
use crate::output::{Cell, Table};
use crate::svg::{line_chart, Series};
use crate::Outcome;
use latsec::curves::{rate_curve as frontier, sdof_point, RateCurveParams};
use latsec::lattice::{parse_basis, TieBreak};
use latsec::schemes::{
    adjusted_rate_scaled, capacity, complex_gain_rate, layered_allocation, nested_sdof,
    DEFAULT_MAX_Q,
};
use latsec::simulate::{
    simulate_expansion, simulate_theorem8, ExpansionCode, TrialConfig, CSV_HEADER,
};
use latsec::verify::{
    default_leakage_cases, default_representation_cases, f_leakage_sweep, feasibility_sweep,
    nested_leakage_sweep, representation_grid_check, VerifyReport,
};
use latsec::{CanonicalChannel, EavSign};
use std::str::FromStr;

type CmdResult = Result<Outcome, String>;

fn lib<T>(r: latsec::Result<T>) -> Result<T, String> {
    r.map_err(|e| e.to_string())
}

fn default_gain() -> f64 {
    (2.0f64 / 3.0).sqrt()
}

fn series(name: &str, xs: &[f64], ys: &[Option<f64>], markers: bool) -> Series {
    Series {
        name: name.into(),
        points: xs
            .iter()
            .zip(ys)
            .filter_map(|(&x, y)| y.map(|y| (x, y)))
            .collect(),
        markers,
    }
}

pub fn sdof_curve(cfg: &Config) -> CmdResult {
    let xs = grid(
        "cross grid",
        cfg.cross_min.unwrap_or(0.5),
        cfg.cross_max.unwrap_or(2.5),
        cfg.cross_step.unwrap_or(0.01),
    )?;
    if xs[0] <= 0.0 {
        return Err("cross grid must be positive".into());
    }
    let sign =
        EavSign::from_str(cfg.eav_sign.as_deref().unwrap_or("+")).map_err(|e| e.to_string())?;
    let max_q = cfg.max_q.unwrap_or(DEFAULT_MAX_Q);
    let pairs: Option<Vec<(u64, u64)>> = cfg
        .pairs
        .as_ref()
        .map(|v| v.iter().map(|p| (p[0], p[1])).collect());
    let mut table = Table::new(&[
        "cross",
        "nested_sdof",
        "nested_p",
        "nested_q",
        "nested_gamma",
        "expansion_sdof",
        "expansion_lower_bound",
        "special_sdof",
        "special_scheme",
        "algebraic_sdof",
        "algebraic_note",
        "winner",
    ]);
    let mut clamped = 0usize;
    let mut worst: Option<(f64, f64)> = None;
    for &x in &xs {
        let pt = lib(sdof_point(x, sign, max_q, pairs.as_deref()))?;
        if let Some(v) = pt.nested_pre_clamp {
            clamped += 1;
            if worst.is_none_or(|w| v < w.1) {
                worst = Some((x, v));
            }
        }
        let d = pt.nested_decomposition;
        table.push(vec![
            x.into(),
            pt.nested.into(),
            d.map_or(Cell::Empty, |d| d.p.into()),
            d.map_or(Cell::Empty, |d| d.q.into()),
            d.map(|d| d.gamma).into(),
            pt.expansion.map(|e| e.sdof).into(),
            pt.expansion.map(|e| e.lower_bound).into(),
            pt.special.map(|s| s.sdof).into(),
            pt.special.map_or(Cell::Empty, |s| s.scheme.into()),
            0.5.into(),
            "requires algebraic irrational".into(),
            pt.winner.into(),
        ]);
    }
    if let Some((x, v)) = worst {
        eprintln!(
            "{clamped} nested values clamped to 0; lowest pre-clamp value {v:.6} at cross {x}"
        );
    }
    let svg = line_chart(
        "Secure degrees of freedom",
        "cross gain sqrt(ab)",
        "s.d.o.f.",
        &[
            series("nested lattice", &xs, &table.column("nested_sdof"), false),
            series(
                "integer expansion",
                &xs,
                &table.column("expansion_sdof"),
                false,
            ),
            series("isolated gains", &xs, &table.column("special_sdof"), true),
        ],
    );
    Ok(Outcome {
        csv: table.to_csv(),
        svg: Some(svg),
        ok: true,
    })
}

pub fn rate_curve(cfg: &Config) -> CmdResult {
    let a = cfg.a.unwrap_or_else(default_gain);
    let b = cfg.b.unwrap_or_else(default_gain);
    let dbs = grid(
        "power grid",
        cfg.db_min.unwrap_or(0.0),
        cfg.db_max.unwrap_or(80.0),
        cfg.db_step.unwrap_or(1.0),
    )?;
    let mut params = RateCurveParams::new(a, b, dbs.clone());
    if let Some(q) = cfg.max_q {
        params.max_q = q;
    }
    if let Some(m) = cfg.max_layers {
        params.max_layers = m;
    }
    if let Some(e) = cfg.eps_step {
        if !(e > 0.0 && e < 0.25) {
            return Err("eps_step must lie in (0, 0.25)".into());
        }
        params.eps_step = e;
    }
    if let Some(s) = cfg.log10_p_step {
        if !(s > 0.0) {
            return Err("log10_p_step must be positive".into());
        }
        params.log10_p_step = s;
    }
    if let Some(m) = cfg.log10_p_max {
        params.log10_p_max = m;
    }
    let curve = lib(frontier(&params))?;
    let mut table = Table::new(&[
        "power_db",
        "nested_rate",
        "integer_rate",
        "gaussian_limit",
        "winner",
    ]);
    for p in &curve.points {
        table.push(vec![
            p.db.into(),
            p.nested.into(),
            p.integer.into(),
            p.gaussian.into(),
            p.winner.into(),
        ]);
    }
    match (curve.crossover_db, curve.points.first().and_then(|p| p.gaussian)) {
        (Some(x), Some(g)) => eprintln!(
            "integer frontier exceeds the Gaussian limit {g:.4} from {x} dB (reference crossover region: about 30 dB)"
        ),
        (None, Some(g)) => eprintln!("integer frontier stays below the Gaussian limit {g:.4} on this grid"),
        _ => eprintln!("Gaussian limit not covered for ab >= 1"),
    }
    let svg = line_chart(
        "Secrecy rate against total power",
        "10 log10 P_total (dB)",
        "secrecy rate (bits/channel use)",
        &[
            series("nested lattice", &dbs, &table.column("nested_rate"), false),
            series(
                "integer lattice",
                &dbs,
                &table.column("integer_rate"),
                false,
            ),
            series(
                "Gaussian limit",
                &dbs,
                &table.column("gaussian_limit"),
                false,
            ),
        ],
    );
    Ok(Outcome {
        csv: table.to_csv(),
        svg: Some(svg),
        ok: true,
    })
}

pub fn verify(cfg: &Config, broken: bool) -> CmdResult {
    let tie_break = match (broken, cfg.tie_break.as_deref()) {
        (true, _) | (false, Some("toward-origin")) => TieBreak::TowardOrigin,
        (false, None | Some("lexicographic")) => TieBreak::Lexicographic,
        (false, Some(other)) => return Err(format!("unknown tie_break `{other}`")),
    };
    let mut report = VerifyReport::default();
    for (rows, k, den) in default_representation_cases() {
        let rows: Vec<&[f64]> = rows.iter().map(Vec::as_slice).collect();
        let lattice =
            lib(latsec::lattice::LatticeBasis::from_rows(&rows))?.with_tie_break(tie_break);
        report
            .checks
            .push(lib(representation_grid_check(&lattice, k, den))?);
    }
    if let Some(path) = &cfg.basis_file {
        let text = std::fs::read_to_string(path)
            .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
        let lattice = lib(parse_basis(&text))?.with_tie_break(tie_break);
        let k = cfg.k.unwrap_or(2);
        let den = cfg.grid_den.unwrap_or(10);
        report
            .checks
            .push(lib(representation_grid_check(&lattice, k, den))?);
    }
    report
        .checks
        .push(lib(nested_leakage_sweep(&default_leakage_cases()))?);
    report
        .checks
        .push(lib(f_leakage_sweep(cfg.max_f_q.unwrap_or(10_000)))?);
    report.checks.push(lib(feasibility_sweep(1e-3))?);
    eprint!("{}", report.summary());
    let mut table = Table::new(&["check", "passed", "checked", "violations", "detail"]);
    for c in &report.checks {
        table.push(vec![
            c.name.clone().into(),
            c.passed().to_string().into(),
            c.checked.into(),
            c.violation_count.into(),
            c.detail.clone().into(),
        ]);
    }
    Ok(Outcome {
        csv: table.to_csv(),
        svg: None,
        ok: report.passed(),
    })
}

pub fn simulate(cfg: &Config, seed: u64) -> CmdResult {
    let q = cfg.q.unwrap_or(2.0);
    let m = cfg.m.unwrap_or(3);
    let b = cfg.noise_var.unwrap_or(1.0);
    let trials = cfg.trials.unwrap_or(100_000);
    let streams = cfg.streams.unwrap_or(8);
    let ratios = cfg.p0_over_b.clone().unwrap_or_else(|| vec![64.0, 100.0]);
    let t8_ratios = cfg
        .theorem8_p0_over_b
        .clone()
        .unwrap_or_else(|| vec![400.0]);
    let t8_m = cfg.theorem8_m.unwrap_or(2);
    if !(b >= 0.0) {
        return Err("noise_var must be nonnegative".into());
    }
    let trial_cfg = TrialConfig::new(trials, seed, b).with_streams(streams);
    let scale = if b > 0.0 { b } else { 1.0 };
    // the channel object only carries the gain alignment; noise comes from the trial config
    let ch = lib(CanonicalChannel::new(q, scale, EavSign::Plus))?;
    let mut csv = format!("{CSV_HEADER}\n");
    let mut ok = true;
    let mut xs = Vec::new();
    let (mut rates, mut bounds) = (Vec::new(), Vec::new());
    for &r in &ratios {
        let code = lib(ExpansionCode::new(q, m, r * scale))?;
        let rep = lib(simulate_expansion(&code, &ch, &trial_cfg))?;
        ok &= rep.pass;
        xs.push(r);
        rates.push(Some(rep.wilson_hi));
        bounds.push(Some(rep.bound));
        csv.push_str(&rep.to_csv_record());
        csv.push('\n');
        eprintln!(
            "expansion Q={q} M={m} P0/b={r}: {} errors in {trials} trials, wilson_hi {:.3e}, bound {:.3e}, {}",
            rep.errors,
            rep.wilson_hi,
            rep.bound,
            if rep.pass { "pass" } else { "FAIL" }
        );
    }
    for &r in &t8_ratios {
        let code = lib(ExpansionCode::theorem8(t8_m, r * scale))?;
        let rep = lib(simulate_theorem8(&code, &trial_cfg))?;
        ok &= rep.pass;
        csv.push_str(&rep.to_csv_record());
        csv.push('\n');
        eprintln!(
            "theorem8 M={t8_m} P0/b={r}: {} errors in {trials} trials, wilson_hi {:.3e}, bound {:.3e}, {}",
            rep.errors,
            rep.wilson_hi,
            rep.bound,
            if rep.pass { "pass" } else { "FAIL" }
        );
    }
    let svg = line_chart(
        "Expansion code error rate",
        "P0/b",
        "probability",
        &[
            series("Wilson upper limit", &xs, &rates, true),
            series("analytic bound", &xs, &bounds, true),
        ],
    );
    Ok(Outcome {
        csv,
        svg: Some(svg),
        ok,
    })
}

pub fn mismatch(cfg: &Config) -> CmdResult {
    let p = cfg.nested_p.unwrap_or(1);
    let q = cfg.nested_q.unwrap_or(1);
    let gamma = cfg.gamma.unwrap_or(0.1);
    let b = cfg.b.unwrap_or(1.0);
    let layers = cfg
        .layers
        .clone()
        .unwrap_or_else(|| vec![1, 2, 5, 10, 20, 50, 100, 200]);
    let cs = cfg
        .penalty_c
        .clone()
        .unwrap_or_else(|| vec![0.0, 1.0, 10.0]);
    check_increasing(
        "layers",
        &layers.iter().map(|&m| m as f64).collect::<Vec<_>>(),
    )?;
    check_increasing("penalty_c", &cs)?;
    let sdof = lib(nested_sdof(p, q, gamma))?;
    let mut table = Table::new(&[
        "M",
        "c",
        "total_power_db",
        "alpha_max",
        "penalty",
        "unadjusted_rate",
        "adjusted_rate",
        "adjusted_slope",
        "nested_sdof",
    ]);
    let mut plot: Vec<(String, Vec<f64>, Vec<Option<f64>>)> = Vec::new();
    for &c in &cs {
        let mut xs = Vec::new();
        let mut ys = Vec::new();
        for &m in &layers {
            let alloc = lib(layered_allocation(p, q, gamma, b, m))?;
            let log2_p = alloc.log2_total_power;
            let alpha_max = (c.log2() / 2.0 - log2_p / 2.0).exp2();
            // alpha_max^2 P1 = c, so the penalty is C(c) at every power
            let penalty = capacity(c);
            let adjusted = lib(adjusted_rate_scaled(&alloc, c))?;
            let slope = if log2_p > 0.0 {
                adjusted / (0.5 * log2_p)
            } else {
                0.0
            };
            xs.push(m as f64);
            ys.push(Some(slope));
            table.push(vec![
                m.into(),
                c.into(),
                alloc.total_power_db().into(),
                alpha_max.into(),
                penalty.into(),
                alloc.secrecy_rate().into(),
                adjusted.into(),
                slope.into(),
                sdof.into(),
            ]);
        }
        plot.push((format!("c = {c}"), xs, ys));
    }
    let mut all: Vec<Series> = plot
        .iter()
        .map(|(n, x, y)| series(n, x, y, false))
        .collect();
    all.push(series(
        "nested s.d.o.f.",
        &layers.iter().map(|&m| m as f64).collect::<Vec<_>>(),
        &vec![Some(sdof); layers.len()],
        false,
    ));
    let svg = line_chart(
        "Mismatch-adjusted rate slope",
        "layers M",
        "rate / (1/2 log2 P1)",
        &all,
    );
    Ok(Outcome {
        csv: table.to_csv(),
        svg: Some(svg),
        ok: true,
    })
}

pub fn complex(cfg: &Config) -> CmdResult {
    let b = cfg.b.unwrap_or(1.0);
    let psis = cfg.psi.clone().unwrap_or_else(|| {
        vec![
            0.0,
            std::f64::consts::FRAC_PI_6,
            std::f64::consts::FRAC_PI_4,
            std::f64::consts::FRAC_PI_2,
        ]
    });
    check_increasing("psi", &psis)?;
    let dbs = grid(
        "power grid",
        cfg.db_min.unwrap_or(0.0),
        cfg.db_max.unwrap_or(60.0),
        cfg.db_step.unwrap_or(10.0),
    )?;
    let mut table = Table::new(&[
        "psi",
        "power_db",
        "p1",
        "p2",
        "secrecy_rate",
        "sdof",
        "sdof_per_real_dim",
        "status",
    ]);
    let mut plot = Vec::new();
    for &psi in &psis {
        let mut ys = Vec::new();
        for &db in &dbs {
            let p = 10f64.powf(db / 10.0);
            match complex_gain_rate(p, p, b, psi) {
                Ok(r) => {
                    ys.push(Some(r.secrecy_rate));
                    table.push(vec![
                        psi.into(),
                        db.into(),
                        p.into(),
                        p.into(),
                        r.secrecy_rate.into(),
                        r.sdof.into(),
                        r.sdof_per_real_dim.into(),
                        "ok".into(),
                    ]);
                }
                Err(e) => {
                    ys.push(None);
                    table.push(vec![
                        psi.into(),
                        db.into(),
                        p.into(),
                        p.into(),
                        Cell::Empty,
                        Cell::Empty,
                        Cell::Empty,
                        e.to_string().into(),
                    ]);
                }
            }
        }
        plot.push(series(
            &format!("psi = {}", latsec::fmt::sig(psi, 4)),
            &dbs,
            &ys,
            false,
        ));
    }
    let svg = line_chart(
        "Complex-gain secrecy rate (P1 = P2)",
        "10 log10 P (dB)",
        "secrecy rate (bits/channel use)",
        &plot,
    );
    Ok(Outcome {
        csv: table.to_csv(),
        svg: Some(svg),
        ok: true,
    })
}
