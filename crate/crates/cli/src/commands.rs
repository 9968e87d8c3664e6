//! One function per subcommand. Each returns the process exit code on
//! success; errors are rendered by `main`.

use std::process::ExitCode;

use latspec::eigvec::eigenvectors_for;
use latspec::oracle::{build_truncated, eigenvalues_outside_band, SpectralDecomposition};
use latspec::specfun;
use latspec::{
    classify_with_tolerance, discrete_spectrum, sweep as sweep_grid, EigenvalueRecord, Grid, Origin, VectorParity,
};
use num_complex::Complex64;
use serde::Serialize;

use crate::args::{
    ClassifyArgs, EigvecArgs, EvolveArgs, Format, ParityArg, SolveArgs, SweepArgs, VerifyArgs,
};
use crate::output::{write_csv, write_json};

/// Everything that can go wrong after the flags parsed.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Lib(#[from] latspec::Error),
    #[error("{0}")]
    Selection(String),
    #[error("{0}")]
    Io(String),
}

impl CliError {
    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Lib(e) => e.kind(),
            CliError::Selection(_) => "selection",
            CliError::Io(_) => "io",
        }
    }
}

type Outcome = Result<ExitCode, CliError>;

#[derive(Serialize)]
struct ClassifyOut {
    tag: latspec::RegionTag,
    case: latspec::CaseLabel,
    eigenvalue_count: Option<usize>,
    bound_state_count: Option<usize>,
    secular_root_count: Option<usize>,
    alpha: f64,
    delta: f64,
    sigma: f64,
    c1: f64,
    c2: f64,
}

pub fn classify(a: &ClassifyArgs) -> Outcome {
    let n = a.params.physical()?.normalize()?;
    if !(a.tol.is_finite() && a.tol >= 0.0) {
        return Err(latspec::Error::OutOfDomain {
            what: "tol",
            value: a.tol,
            domain: "finite, >= 0",
        }
        .into());
    }
    let region = classify_with_tolerance(&n, a.tol);
    let out = ClassifyOut {
        tag: region.tag,
        case: region.case,
        eigenvalue_count: region.eigenvalue_count(),
        bound_state_count: region.bound_state_count(),
        secular_root_count: region.secular_root_count(),
        alpha: n.alpha,
        delta: n.delta,
        sigma: n.sigma,
        c1: n.c1,
        c2: n.c2,
    };
    let path = a.common.out.as_deref();
    match a.common.format.unwrap_or(Format::Json) {
        Format::Json => write_json(path, &out)?,
        Format::Csv => write_csv(
            path,
            &[
                "tag",
                "case",
                "eigenvalue_count",
                "bound_state_count",
                "secular_root_count",
                "alpha",
                "delta",
                "sigma",
                "c1",
                "c2",
            ],
            [&out],
        )?,
    }
    Ok(ExitCode::SUCCESS)
}

pub fn solve(a: &SolveArgs) -> Outcome {
    let records = discrete_spectrum(&a.params.physical()?)?;
    let path = a.common.out.as_deref();
    match a.common.format.unwrap_or(Format::Json) {
        Format::Json => write_json(path, &records)?,
        Format::Csv => write_csv(
            path,
            &[
                "nu",
                "gamma",
                "origin",
                "parity",
                "multiplicity",
                "bracket_lo",
                "bracket_hi",
                "embedded",
            ],
            records.iter().map(|r| {
                (
                    r.nu,
                    r.gamma,
                    r.origin,
                    r.parity,
                    r.multiplicity,
                    r.bracket.map(|b| b[0]),
                    r.bracket.map(|b| b[1]),
                    r.embedded,
                )
            }),
        )?,
    }
    Ok(ExitCode::SUCCESS)
}

fn select_record<'a>(records: &'a [EigenvalueRecord], select: &str) -> Result<&'a EigenvalueRecord, CliError> {
    let found = match select {
        "kappa" => records.iter().find(|r| r.origin == Origin::ExplicitKappa),
        // at the μ = κ collision the single record carries e₀ as well
        "mu" => records
            .iter()
            .find(|r| r.origin == Origin::AlphaMinusOneMu || r.multiplicity == 3),
        s => {
            let i: usize = s.parse().map_err(|_| {
                CliError::Selection(format!("--select expects an index, `kappa` or `mu`, got `{s}`"))
            })?;
            records.get(i)
        }
    };
    found.ok_or_else(|| {
        CliError::Selection(format!(
            "--select {select}: no such eigenvalue ({} in the discrete spectrum)",
            records.len()
        ))
    })
}

pub fn eigvec(a: &EigvecArgs) -> Outcome {
    let p = a.params.physical()?;
    let records = discrete_spectrum(&p)?;
    let rec = select_record(&records, &a.select)?;
    let mut tables = eigenvectors_for(&p, rec, a.window)?;
    if a.select == "mu" && rec.multiplicity == 3 && a.vector.is_none() && a.parity.is_none() {
        // e₀ is listed first
        tables.truncate(1);
    }
    if let Some(par) = a.parity {
        let want = match par {
            ParityArg::Odd => VectorParity::Odd,
            ParityArg::Even => VectorParity::Even,
        };
        tables.retain(|t| t.parity == want);
    }
    let table = match (a.vector, tables.len()) {
        (_, 0) => {
            return Err(CliError::Selection(
                "no eigenvector of the requested parity for this eigenvalue".into(),
            ))
        }
        (None, 1) => tables.swap_remove(0),
        (None, k) => {
            return Err(CliError::Selection(format!(
                "the eigenvalue has {k} eigenvectors; choose one with --parity or --vector"
            )))
        }
        (Some(j), k) if j < k => tables.swap_remove(j),
        (Some(j), k) => {
            return Err(CliError::Selection(format!(
                "--vector {j} out of range: {k} eigenvector(s) available"
            )))
        }
    };
    let path = a.common.out.as_deref();
    match a.common.format.unwrap_or(Format::Csv) {
        Format::Json => write_json(path, &table)?,
        Format::Csv => write_csv(path, &["k", "f_k"], table.sites())?,
    }
    Ok(ExitCode::SUCCESS)
}

#[derive(Debug, Serialize)]
struct VerifyRow {
    predicted: Option<f64>,
    oracle: Option<f64>,
    abs_diff: Option<f64>,
    allowed: Option<f64>,
    pass: bool,
}

#[derive(Serialize)]
struct VerifyOut {
    window: usize,
    tol: f64,
    predicted_count: usize,
    oracle_count: usize,
    embedded_skipped: usize,
    pass: bool,
    rows: Vec<VerifyRow>,
}

/// Predicted bound values (expanded by multiplicity) with their allowed
/// deviation: `tol` plus the truncation allowance `10·λ·|l(γ)|^(−N)`.
/// `e₀` at `α = −1` is an exact eigenvector of every truncation and gets no
/// allowance.
fn predicted_with_allowance(records: &[EigenvalueRecord], lambda: f64, n: usize, tol: f64) -> Result<Vec<(f64, f64)>, CliError> {
    let mut out = Vec::new();
    for r in records.iter().filter(|r| !r.embedded) {
        let allowance = if r.origin == Origin::AlphaMinusOneMu {
            0.0
        } else {
            10.0 * lambda * specfun::l(r.gamma)?.abs().powf(-(n as f64))
        };
        for _ in 0..r.multiplicity {
            out.push((r.nu, tol + allowance));
        }
    }
    out.sort_by(|x, y| x.0.total_cmp(&y.0));
    Ok(out)
}

/// Pairs sorted predicted and oracle values: index-wise when the counts
/// agree; otherwise closest pairs first, with leftovers on either side
/// reported unmatched.
fn pair_up(predicted: &[(f64, f64)], oracle: &[f64]) -> Vec<VerifyRow> {
    let row = |(nu, allowed): (f64, f64), o: Option<f64>| {
        let d = o.map(|o| (o - nu).abs());
        VerifyRow {
            predicted: Some(nu),
            oracle: o,
            abs_diff: d,
            allowed: Some(allowed),
            pass: d.is_some_and(|d| d <= allowed),
        }
    };
    if predicted.len() == oracle.len() {
        return predicted.iter().zip(oracle).map(|(&p, &o)| row(p, Some(o))).collect();
    }
    let mut pairs: Vec<(usize, usize)> = (0..predicted.len())
        .flat_map(|i| (0..oracle.len()).map(move |j| (i, j)))
        .collect();
    pairs.sort_by(|&(i, j), &(k, l)| {
        (predicted[i].0 - oracle[j]).abs().total_cmp(&(predicted[k].0 - oracle[l]).abs())
    });
    let mut match_of: Vec<Option<usize>> = vec![None; predicted.len()];
    let mut used = vec![false; oracle.len()];
    for (i, j) in pairs {
        if match_of[i].is_none() && !used[j] {
            match_of[i] = Some(j);
            used[j] = true;
        }
    }
    let mut rows: Vec<VerifyRow> = predicted
        .iter()
        .zip(&match_of)
        .map(|(&p, m)| row(p, m.map(|j| oracle[j])))
        .collect();
    rows.extend(oracle.iter().zip(&used).filter(|(_, &u)| !u).map(|(&o, _)| VerifyRow {
        predicted: None,
        oracle: Some(o),
        abs_diff: None,
        allowed: None,
        pass: false,
    }));
    rows
}

pub fn verify(a: &VerifyArgs) -> Outcome {
    if !(a.tol.is_finite() && a.tol >= 0.0) {
        return Err(latspec::Error::OutOfDomain {
            what: "tol",
            value: a.tol,
            domain: "finite, >= 0",
        }
        .into());
    }
    let p = a.params.physical()?;
    let records = discrete_spectrum(&p)?;
    let predicted = predicted_with_allowance(&records, p.lambda, a.window, a.tol)?;
    let m = build_truncated(&p, a.window)?;
    let oracle = eigenvalues_outside_band(&m).values();
    let rows = pair_up(&predicted, &oracle);
    let pass = rows.iter().all(|r| r.pass);
    let path = a.common.out.as_deref();
    match a.common.format.unwrap_or(Format::Json) {
        Format::Json => write_json(
            path,
            &VerifyOut {
                window: a.window,
                tol: a.tol,
                predicted_count: predicted.len(),
                oracle_count: oracle.len(),
                embedded_skipped: records.iter().filter(|r| r.embedded).count(),
                pass,
                rows,
            },
        )?,
        Format::Csv => write_csv(path, &["predicted", "oracle", "abs_diff", "allowed", "pass"], rows)?,
    }
    Ok(if pass { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

#[derive(Serialize)]
struct EvolveRow {
    t: f64,
    site: i64,
    prob: f64,
}

pub fn evolve(a: &EvolveArgs) -> Outcome {
    let p = a.params.physical()?;
    if !(a.t_max.is_finite() && a.t_max >= 0.0) {
        return Err(latspec::Error::OutOfDomain {
            what: "t-max",
            value: a.t_max,
            domain: "finite, >= 0",
        }
        .into());
    }
    if a.samples < 2 {
        return Err(latspec::Error::OutOfDomain {
            what: "samples",
            value: a.samples as f64,
            domain: ">= 2",
        }
        .into());
    }
    let n = a.window as i64;
    if a.site.abs() > n {
        return Err(latspec::Error::OutOfDomain {
            what: "site",
            value: a.site as f64,
            domain: "-N..=N",
        }
        .into());
    }
    let m = build_truncated(&p, a.window)?;
    let decomposition = SpectralDecomposition::new(&m);
    let mut f0 = vec![Complex64::new(0.0, 0.0); m.len()];
    f0[(a.site + n) as usize] = Complex64::new(1.0, 0.0);
    let mut rows = Vec::with_capacity(a.samples * m.len());
    for i in 0..a.samples {
        let t = a.t_max * i as f64 / (a.samples - 1) as f64;
        let f = decomposition.evolve(&f0, t)?;
        rows.extend(f.iter().enumerate().map(|(j, z)| EvolveRow {
            t,
            site: j as i64 - n,
            prob: z.norm_sqr(),
        }));
    }
    let path = a.common.out.as_deref();
    match a.common.format.unwrap_or(Format::Csv) {
        Format::Json => write_json(path, &rows)?,
        Format::Csv => write_csv(path, &["t", "site", "prob"], rows)?,
    }
    Ok(ExitCode::SUCCESS)
}

pub fn sweep(a: &SweepArgs) -> Outcome {
    let grid: Grid = a.grid.parse()?;
    let cells = sweep_grid(a.alpha, &grid)?;
    let path = a.common.out.as_deref();
    match a.common.format.unwrap_or(Format::Csv) {
        Format::Json => write_json(path, &cells)?,
        Format::Csv => write_csv(path, &["delta", "sigma", "tag", "count"], cells)?,
    }
    Ok(ExitCode::SUCCESS)
}
