//! `analyze`: positivity verdict of an assembled metric, boundary of the
//! admissible-coefficient domain along a ray, spectral weights, and optional
//! metric-aware time evolution of an initial state.

use num_complex::Complex64;

use cryptoherm::{
    analysis_report_json, assemble_metric, default_sites, evolve, find_alpha_boundary,
    parse_f64_or_ratio, spectral_data, spectral_decompose, to_json_string, trajectory_csv,
    Error, ModelParams, PositivityStatus, Result,
};

use crate::{parse_list, resolve_alphas, write_output, AnalyzeArgs, Format};

/// Cap for the boundary search: couplings beyond this are reported as
/// "unbounded along this ray" rather than searched further.
const RAY_CAP: f64 = 1e6;

pub(crate) fn run(args: &AnalyzeArgs) -> Result<()> {
    let a = parse_f64_or_ratio(&args.a)?;
    let params = ModelParams::new(args.n, a)?;
    let alphas = resolve_alphas(args.k, &args.alpha, &args.alphas, parse_f64_or_ratio)?
        .unwrap_or_else(|| vec![0.0; args.k]);

    let mut family = assemble_metric(&params, args.k, &alphas)?;
    let positivity = family.classify();
    let spectral = spectral_data(&params)?;
    let kappa2 = spectral_decompose(&family.theta, &spectral)?;

    let boundary = match &args.ray {
        Some(text) => {
            let direction = parse_list(text, parse_f64_or_ratio)?;
            let found = find_alpha_boundary(&params, args.k, &direction, RAY_CAP)?;
            if args.evolve {
                // the report is not printed in evolution mode; surface the
                // search result as a diagnostic instead
                eprintln!(
                    "alpha_max along ray: {} (capped: {})",
                    cryptoherm::format_significant(found.alpha_max, 10),
                    found.capped
                );
            }
            Some(found)
        }
        None => None,
    };

    if !args.evolve {
        if args.format == Some(Format::Csv) {
            return Err(Error::InvalidParameter(
                "the analysis report is JSON; add --evolve for CSV trajectories".into(),
            ));
        }
        let report = analysis_report_json(positivity, boundary.as_ref(), &kappa2);
        return write_output(&args.out, &to_json_string(&report));
    }

    // Evolution: CSV-only, and only in a genuine Hilbert space.
    if args.format == Some(Format::Json) {
        return Err(Error::InvalidParameter(
            "trajectories are CSV; drop --format json".into(),
        ));
    }
    if positivity != PositivityStatus::PositiveDefinite {
        return Err(Error::ConjectureViolation(
            "metric is not positive definite; evolution needs a physical inner product".into(),
        ));
    }
    if args.steps == 0 {
        return Err(Error::InvalidParameter("--steps must be at least 1".into()));
    }
    if args.tmax.is_nan() || args.tmax <= 0.0 {
        return Err(Error::InvalidParameter("--tmax must be positive".into()));
    }
    let sites = match &args.sites {
        Some(text) => {
            let sites = parse_list(text, parse_f64_or_ratio)?;
            if sites.len() != args.n {
                return Err(Error::InvalidParameter(format!(
                    "{} site coordinates for dimension {}",
                    sites.len(),
                    args.n
                )));
            }
            if sites.windows(2).any(|w| w[0] >= w[1]) {
                return Err(Error::InvalidParameter(
                    "site coordinates must be strictly increasing".into(),
                ));
            }
            sites
        }
        None => default_sites(args.n),
    };
    let initial = parse_initial(&args.init, args.n)?;
    let times: Vec<f64> = (0..=args.steps)
        .map(|i| args.tmax * i as f64 / args.steps as f64)
        .collect();
    let evolution = evolve(&params, &family.theta, &initial, &times)?;

    let norm0 = evolution.theta_norms[0];
    let drift = evolution
        .theta_norms
        .iter()
        .map(|n| (n - norm0).abs() / norm0)
        .fold(0.0f64, f64::max);
    eprintln!(
        "evolved {}-site state over {} grid points; relative metric-norm drift {drift:.2e}",
        args.n,
        times.len()
    );
    write_output(&args.out, &trajectory_csv(&evolution, &sites))
}

/// `e<s>` selects the site-s basis state (1-based); otherwise a
/// comma-separated list of real amplitudes.
fn parse_initial(text: &str, n: usize) -> Result<Vec<Complex64>> {
    let trimmed = text.trim();
    if let Some(rest) = trimmed.strip_prefix('e') {
        if let Ok(site) = rest.parse::<usize>() {
            if site == 0 || site > n {
                return Err(Error::InvalidParameter(format!(
                    "initial site {site} outside 1..={n}"
                )));
            }
            let mut state = vec![Complex64::new(0.0, 0.0); n];
            state[site - 1] = Complex64::new(1.0, 0.0);
            return Ok(state);
        }
    }
    let amplitudes = parse_list(trimmed, parse_f64_or_ratio)?;
    if amplitudes.len() != n {
        return Err(Error::InvalidParameter(format!(
            "{} amplitudes for dimension {n}",
            amplitudes.len()
        )));
    }
    Ok(amplitudes
        .into_iter()
        .map(|x| Complex64::new(x, 0.0))
        .collect())
}
