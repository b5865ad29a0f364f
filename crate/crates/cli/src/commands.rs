//! One function per subcommand, each producing a [`Report`].
//!
//! Ranges given on the command line are inclusive; the library works on
//! half-open ranges, hence the `+ 1`s below.

use std::fs::File;
use std::io::BufReader;

use num_bigint::BigUint;
use psirh_core::bounds::BoundCheckResult;
use psirh_core::champions::{self, Proposition};
use psirh_core::constants::E_GAMMA_OVER_ZETA2;
use psirh_core::criteria::{self, CriterionKind, SIGMA_BOUND_C};
use psirh_core::oeis;
use psirh_core::prime_engine::ThetaCache;
use psirh_core::primorial::{self, BOUND_PRIME_THRESHOLD};
use psirh_core::{Error, Result, BULK_SCAN_CEILING, DENSE_ORACLE_CEILING};

use crate::report::{Report, Value};
use crate::{Cli, Command, Criterion, Sequence};

/// Distance between stored θ checkpoints in a cache file.
const CACHE_STRIDE: u64 = 100_000;
/// The σ bound just below the smallest constant that works at n = 12.
const SIGMA_BOUND_C_LOW: f64 = 0.6482;
const MAX_OEIS_TERMS: usize = 1_000_000;

const TABLE1_INDICES: [u64; 4] = [10, 1_000, 100_000, 10_000_000];
const TABLE2_INDICES: [u64; 6] = [3, 10, 100, 1_000, 10_000, 100_000];
const MERTENS_INDICES: [u64; 7] = [10, 100, 1_000, 10_000, 100_000, 1_000_000, 10_000_000];

pub fn run(cli: &Cli) -> Result<Report> {
    match cli.command {
        Command::Scan => scan(cli),
        Command::Champions => champions(cli),
        Command::Superabundant => superabundant(cli),
        Command::Props => props(cli),
        Command::Table1 => table1(cli),
        Command::Table2 => table2(cli),
        Command::Bounds => bounds(cli),
        Command::Mertens => mertens(cli),
        Command::OeisCheck => oeis_check(cli),
    }
}

fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}

/// Inclusive upper end that must stay below the bulk ceiling.
fn bulk_hi(name: &str, v: u64) -> Result<u64> {
    if v >= BULK_SCAN_CEILING {
        return Err(Error::Resource(format!(
            "--{name}={v} must be below {BULK_SCAN_CEILING}"
        )));
    }
    Ok(v + 1)
}

fn indices(cli: &Cli, default: &[u64]) -> Result<Vec<u64>> {
    let idx = cli.indices.clone().unwrap_or_else(|| default.to_vec());
    if idx.is_empty() {
        return Err(domain("--indices must not be empty"));
    }
    if idx.contains(&0) {
        return Err(domain("--indices must be ≥ 1"));
    }
    Ok(idx)
}

fn scan(cli: &Cli) -> Result<Report> {
    let kind = match cli.criterion.unwrap_or(Criterion::F) {
        Criterion::F => CriterionKind::DedekindF,
        Criterion::G => CriterionKind::RobinG,
    };
    let lo = cli.lo.unwrap_or(2);
    let hi = cli.hi.unwrap_or(1_000_000);
    if lo < 2 {
        return Err(domain(format!("--lo must be ≥ 2 (got {lo})")));
    }
    if hi < lo {
        return Err(domain(format!("--hi must be ≥ --lo (lo={lo}, hi={hi})")));
    }
    let found = criteria::scan_exceptions(kind, lo, bulk_hi("hi", hi)?)?;

    let mut r = Report::new(
        "scan",
        vec!["n", "ratio", "threshold", "value", "precision_escalated"],
    );
    r.param(
        "criterion",
        if kind == CriterionKind::DedekindF {
            "f"
        } else {
            "g"
        },
    );
    r.param("lo", lo);
    r.param("hi", hi);
    for &n in &found.exceptions {
        let v = criteria::criterion(kind, n)?;
        r.row(vec![
            n.into(),
            v.ratio.into(),
            v.threshold.into(),
            v.value.into(),
            v.precision_escalated.into(),
        ]);
    }
    r.summarize("exceptions", found.exceptions.len() as u64);
    r.summarize("largest", found.largest);
    r.summarize("escalations", found.escalations);
    r.cases_checked = hi - lo + 1;
    r.clean = found.exceptions.is_empty();
    Ok(r)
}

fn champions(cli: &Cli) -> Result<Report> {
    let mut r = Report::new(
        "champions",
        vec![
            "term",
            "primorial_index",
            "multiplier",
            "value",
            "psi_ratio",
        ],
    );
    let terms = match cli.count {
        Some(count) => {
            if count == 0 {
                return Err(domain("--count must be ≥ 1"));
            }
            if count > MAX_OEIS_TERMS {
                return Err(Error::Resource(format!(
                    "--count={count} above {MAX_OEIS_TERMS}"
                )));
            }
            r.param("count", count);
            champions::s_sequence_terms(count)
        }
        None => {
            let limit = cli.limit.unwrap_or(100_000);
            r.param("limit", limit);
            let terms = champions::generate_s_sequence(&BigUint::from(limit));
            if (2..=DENSE_ORACLE_CEILING).contains(&limit) {
                let scan = champions::psi_champions_by_scan(limit)?;
                let structural: Vec<u64> = terms
                    .iter()
                    .map(|c| u64::try_from(&c.value).expect("≤ limit"))
                    .collect();
                let agrees = scan == structural;
                r.summarize("brute_force_agrees", agrees);
                r.clean = agrees;
            }
            terms
        }
    };
    for (i, c) in terms.iter().enumerate() {
        r.row(vec![
            (i as u64 + 1).into(),
            c.primorial_index.into(),
            c.multiplier.into(),
            c.value.to_string().into(),
            c.psi_ratio_log.exp().into(),
        ]);
    }
    r.summarize("terms", terms.len() as u64);
    r.cases_checked = terms.len() as u64;
    Ok(r)
}

fn superabundant(cli: &Cli) -> Result<Report> {
    let limit = cli.limit.unwrap_or(1_000_000);
    let sa = champions::generate_superabundant(limit)?;
    let s = champions::generate_s_sequence(&BigUint::from(limit));
    let (overlap, total) = champions::superabundant_overlap(&s, &sa);

    let mut r = Report::new("superabundant", vec!["n", "sigma", "sigma_over_n"]);
    r.param("limit", limit);
    for rec in &sa.records {
        r.row(vec![
            rec.n.into(),
            (rec.ratio_num as u64).into(),
            (rec.ratio_num as f64 / rec.ratio_den as f64).into(),
        ]);
    }
    r.summarize("records", sa.records.len() as u64);
    r.summarize("also_in_psi_champions", overlap as u64);
    r.summarize("psi_champions", total as u64);
    r.cases_checked = limit;
    Ok(r)
}

fn props(cli: &Cli) -> Result<Report> {
    let prop1_limit = cli.limit.unwrap_or(1_000_000);
    let prop2_limit = cli.hi.unwrap_or(10_000);
    // validate both before running either
    if prop1_limit > BULK_SCAN_CEILING {
        return Err(Error::Resource(format!(
            "--limit={prop1_limit} above {BULK_SCAN_CEILING}"
        )));
    }
    if prop2_limit > DENSE_ORACLE_CEILING {
        return Err(Error::Resource(format!(
            "--hi={prop2_limit} above {DENSE_ORACLE_CEILING}"
        )));
    }
    let checks = [
        champions::psi_multiple_identity_check(14)?,
        champions::verify_prop1(prop1_limit)?,
        champions::verify_prop2(prop2_limit)?,
    ];

    let mut r = Report::new(
        "props",
        vec![
            "proposition",
            "limit",
            "cases_checked",
            "escalations",
            "failures",
            "passed",
            "first_failure",
        ],
    );
    r.param("identity_k_max", 14);
    r.param("limit", prop1_limit);
    r.param("hi", prop2_limit);
    for c in &checks {
        let name = match c.proposition {
            Proposition::Prop1 => "prop1",
            Proposition::Prop2 => "prop2",
            Proposition::PsiMultipleIdentity => "psi_multiple_identity",
        };
        r.row(vec![
            name.into(),
            c.limit.into(),
            c.cases_checked.into(),
            c.escalations.into(),
            (c.failures.len() as u64).into(),
            c.passed().into(),
            c.failures
                .first()
                .map(|w| {
                    format!(
                        "k={} l={} n={}: {}",
                        w.primorial_index, w.multiplier, w.n, w.detail
                    )
                })
                .into(),
        ]);
        r.cases_checked += c.cases_checked;
    }
    r.clean = checks.iter().all(|c| c.passed());
    Ok(r)
}

fn load_or_build_cache(cli: &Cli, n_max: u64) -> Result<Option<ThetaCache>> {
    let Some(path) = &cli.cache else {
        return Ok(None);
    };
    if path.exists() {
        let cache = ThetaCache::load(path)?;
        if cache.max_index() + cache.checkpoint_stride >= n_max {
            return Ok(Some(cache));
        }
    }
    let cache = ThetaCache::build(n_max, CACHE_STRIDE)?;
    cache.save(path)?;
    Ok(Some(cache))
}

fn table1(cli: &Cli) -> Result<Report> {
    let idx = indices(cli, &TABLE1_INDICES)?;
    let n_max = idx.iter().copied().max().expect("non-empty");
    let cache = load_or_build_cache(cli, n_max + 1)?;
    let rows = primorial::table1(&idx, cache.as_ref())?;

    let mut r = Report::new(
        "table1",
        vec![
            "n",
            "prime",
            "next_prime",
            "theta_hi",
            "theta_lo",
            "theta_ratio",
            "ftilde_ratio",
            "ftilde_deviation",
            "k_ratio",
        ],
    );
    r.param("indices", join(&idx));
    if let Some(p) = &cli.cache {
        r.param("cache", p.display());
    }
    for row in &rows {
        r.row(vec![
            row.n.into(),
            row.prime.into(),
            row.next_prime.into(),
            row.theta.hi.into(),
            row.theta.lo.into(),
            row.theta_ratio.into(),
            row.ftilde_ratio.into(),
            row.ftilde_deviation.into(),
            row.k_ratio.into(),
        ]);
    }
    let labels = [
        "θ(p_n)/p_n",
        "f̃(N_{n+1})/f̃(N_n)",
        "k log k/(p_{n+1} log p_{n+1})",
    ];
    let mut grid = vec![std::iter::once("n".to_owned())
        .chain(rows.iter().map(|x| x.n.to_string()))
        .collect::<Vec<_>>()];
    for (j, label) in labels.iter().enumerate() {
        grid.push(
            std::iter::once((*label).to_owned())
                .chain(
                    rows.iter()
                        .map(|x| x.printed[j].clone().unwrap_or_else(|| "–".into())),
                )
                .collect(),
        );
    }
    r.markdown_grid = Some(grid);
    r.cases_checked = rows.len() as u64;
    Ok(r)
}

fn table2(cli: &Cli) -> Result<Report> {
    let idx = indices(cli, &TABLE2_INDICES)?;
    let rows = primorial::table2(&idx)?;
    let mut r = Report::new(
        "table2",
        vec![
            "n",
            "prime",
            "f_value",
            "theta_hi",
            "theta_lo",
            "loglog_n",
            "psi_ratio_log_hi",
            "psi_ratio_log_lo",
        ],
    );
    r.param("indices", join(&idx));
    for row in &rows {
        let s = &row.stats;
        r.row(vec![
            row.n.into(),
            row.prime.into(),
            row.f_value.into(),
            s.theta.hi.into(),
            s.theta.lo.into(),
            s.loglog_n.into(),
            s.psi_ratio_log.hi.into(),
            s.psi_ratio_log.lo.into(),
        ]);
    }
    r.markdown_grid = Some(vec![
        std::iter::once("n".to_owned())
            .chain(rows.iter().map(|x| x.n.to_string()))
            .collect(),
        std::iter::once("f(N_n)".to_owned())
            .chain(rows.iter().map(|x| x.printed.clone()))
            .collect(),
    ]);
    r.cases_checked = rows.len() as u64;
    Ok(r)
}

/// `last` is inclusive; the σ check reports a half-open range.
fn bound_row(
    r: &mut Report,
    name: &'static str,
    c: Option<f64>,
    b: &BoundCheckResult,
    last: u64,
    note: &str,
) {
    r.row(vec![
        name.into(),
        c.into(),
        b.range.0.into(),
        last.into(),
        b.pass.into(),
        b.worst_margin.into(),
        b.witness.into(),
        b.cases_checked.into(),
        b.escalations.into(),
        note.into(),
    ]);
    r.cases_checked += b.cases_checked;
}

fn bounds(cli: &Cli) -> Result<Report> {
    let first = match cli.lo {
        Some(v) => v,
        None => primorial::first_index_at_or_above(BOUND_PRIME_THRESHOLD)?,
    };
    let last = cli.hi.unwrap_or(10_000_000);
    let sigma_limit = cli.limit.unwrap_or(1_000_000);
    if sigma_limit < 3 {
        return Err(domain(format!("--limit must be ≥ 3 (got {sigma_limit})")));
    }
    let sigma_hi = bulk_hi("limit", sigma_limit)?;
    let (loglog, fbound) = primorial::check_primorial_bounds(first, last)?;
    let sigma = criteria::check_sigma_upper_bound(3, sigma_hi, SIGMA_BOUND_C)?;
    let sigma_low = criteria::check_sigma_upper_bound(3, sigma_hi, SIGMA_BOUND_C_LOW)?;

    let mut r = Report::new(
        "bounds",
        vec![
            "bound",
            "c",
            "first",
            "last",
            "pass",
            "worst_margin",
            "witness",
            "cases_checked",
            "escalations",
            "note",
        ],
    );
    r.param("lo", first);
    r.param("hi", last);
    r.param("limit", sigma_limit);
    bound_row(
        &mut r,
        "loglog_n_lower",
        None,
        &loglog,
        last,
        "primorial indices",
    );
    bound_row(
        &mut r,
        "f_primorial_upper",
        None,
        &fbound.check,
        last,
        "primorial indices",
    );
    bound_row(
        &mut r,
        "sigma_upper",
        Some(SIGMA_BOUND_C),
        &sigma,
        sigma_limit,
        "integers",
    );
    bound_row(
        &mut r,
        "sigma_upper",
        Some(SIGMA_BOUND_C_LOW),
        &sigma_low,
        sigma_limit,
        "integers; expected to fail at n = 12",
    );
    r.summarize("f_bound_rhs_at_20000", fbound.rhs_at_threshold);
    r.summarize("e_gamma_times_inv_zeta2_minus_1", fbound.mertens_shift);
    r.clean = loglog.pass && fbound.check.pass && sigma.pass;
    Ok(r)
}

fn mertens(cli: &Cli) -> Result<Report> {
    let mut idx = indices(cli, &MERTENS_INDICES)?;
    idx.sort_unstable();
    idx.dedup();
    if idx[0] < 2 {
        return Err(domain("--indices must be ≥ 2 for the Mertens ratio"));
    }
    let n_max = *idx.last().expect("non-empty");
    let stats = primorial::stats_stream(n_max, &idx)?;

    let mut r = Report::new("mertens", vec!["n", "prime", "mertens_ratio", "deviation"]);
    r.param("indices", join(&idx));
    let mut prev = f64::INFINITY;
    let mut decreasing = true;
    for s in &stats {
        let dev = s.mertens_ratio - E_GAMMA_OVER_ZETA2;
        decreasing &= dev.abs() < prev;
        prev = dev.abs();
        r.row(vec![
            s.index.into(),
            s.prime.into(),
            s.mertens_ratio.into(),
            dev.into(),
        ]);
    }
    r.summarize("limit", E_GAMMA_OVER_ZETA2);
    r.summarize("deviation_strictly_decreasing", decreasing);
    r.cases_checked = n_max;
    r.clean = decreasing;
    Ok(r)
}

/// Superabundant numbers, widening the scan until `count` are known or the
/// bulk ceiling is reached.
fn superabundant_terms(count: usize) -> Result<Vec<BigUint>> {
    let mut limit = 10_000;
    loop {
        let sa = champions::generate_superabundant(limit)?;
        if sa.records.len() >= count || limit == BULK_SCAN_CEILING {
            return Ok(sa
                .records
                .iter()
                .take(count)
                .map(|r| BigUint::from(r.n))
                .collect());
        }
        limit = (limit * 10).min(BULK_SCAN_CEILING);
    }
}

fn oeis_check(cli: &Cli) -> Result<Report> {
    let path = cli
        .bfile
        .as_ref()
        .ok_or_else(|| domain("--bfile is required for oeis-check"))?;
    let sequence = cli.sequence.unwrap_or(Sequence::A060735);
    let count = cli.count.unwrap_or(26);
    if count == 0 {
        return Err(domain("--count must be ≥ 1"));
    }
    let mut terms = oeis::parse_bfile(BufReader::new(File::open(path)?))?;
    let generate = count.min(MAX_OEIS_TERMS);
    let generated: Vec<BigUint> = match sequence {
        Sequence::A060735 => {
            // the OEIS entry starts with 1; the structural sequence starts at N₁ = 2
            if terms.first().is_some_and(|t| t.value == BigUint::from(1u8)) {
                terms.remove(0);
            }
            champions::s_sequence_terms(generate)
                .into_iter()
                .map(|c| c.value)
                .collect()
        }
        Sequence::A004394 => superabundant_terms(generate)?,
    };
    let cmp = oeis::compare(&terms, &generated, count);

    let mut r = Report::new(
        "oeis-check",
        vec!["index", "expected", "generated", "matches"],
    );
    r.param("sequence", format!("{sequence:?}"));
    r.param("bfile", path.display());
    r.param("count", count);
    for (t, g) in terms.iter().zip(&generated).take(cmp.compared) {
        r.row(vec![
            u64::try_from(t.index).map_or_else(|_| Value::Text(t.index.to_string()), Value::Int),
            t.value.to_string().into(),
            g.to_string().into(),
            (t.value == *g).into(),
        ]);
    }
    r.summarize("requested", count as u64);
    r.summarize("compared", cmp.compared as u64);
    r.summarize("truncated", cmp.truncated);
    r.summarize("agrees", cmp.agrees());
    r.summarize(
        "first_mismatch_index",
        cmp.first_mismatch.as_ref().map(|m| m.index.to_string()),
    );
    r.cases_checked = cmp.compared as u64;
    r.clean = cmp.agrees();
    Ok(r)
}

fn join(v: &[u64]) -> String {
    v.iter().map(u64::to_string).collect::<Vec<_>>().join(",")
}
