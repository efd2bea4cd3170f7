use std::fs;
use std::io::{self, Write};
use std::path::Path;

use anyhow::{bail, Context, Result};
use erdoslab::extras::abundant_sweep;
use erdoslab::lemmas::required_limit;
use erdoslab::primes::sieve_build_with_budget;
use erdoslab::{
    greedy_ladder, ruth_aaron_pairs, verify_bertrand_range, verify_ladder, verify_two_primes_range,
    BertrandForm, Certificate, LadderChain, LemmaId, PrimeTable, SopfMode, Statement, Verifier,
    VerifyConfig,
};

use crate::{CertAction, Cli, Command, Format, GlobalOpts};

/// Runs the command. `Ok(false)` means a mathematical check failed.
pub fn run(cli: &Cli) -> Result<bool> {
    let g = &cli.global;
    match &cli.command {
        Command::Verify { lemma, from, to } => {
            let cert = verify_cert(g, *lemma, *from, *to)?;
            emit_cert(g, cert)
        }
        Command::Bertrand { from, to, classic_form } => {
            let form = if *classic_form { BertrandForm::Classic } else { BertrandForm::Strict };
            let cert = bertrand_cert(g, *from, *to, form)?;
            emit_cert(g, cert)
        }
        Command::Ladder { mode } => {
            let chain = if mode.verify_paper {
                LadderChain::erdos()
            } else if let Some(target) = mode.target {
                let table = table(g, (2 * target.max(2)).saturating_sub(1))?;
                greedy_ladder(target, &table)?
            } else {
                let path = mode.verify.as_ref().expect("clap enforces one mode");
                read_ladder(path)?
            };
            let cert = ladder_cert(g, &chain)?;
            eprintln!(
                "ladder {}: {} (coverage to {})",
                if cert.passed() { "valid" } else { "INVALID" },
                chain.primes.iter().map(u64::to_string).collect::<Vec<_>>().join(", "),
                chain.coverage_target
            );
            emit_cert(g, cert)
        }
        Command::TwoPrimes { from, to } => {
            let cert = two_primes_cert(g, *from, *to)?;
            emit_cert(g, cert)
        }
        Command::RuthAaron { limit, distinct, format } => {
            let mode = if *distinct { SopfMode::Distinct } else { SopfMode::WithMultiplicity };
            match format {
                Format::Cert => emit_cert(g, ruth_aaron_cert(g, *limit, mode)?),
                Format::Csv => {
                    let table = table(g, limit + 1)?;
                    let pairs = ruth_aaron_pairs(*limit, mode, &table, jobs(g))?;
                    let mut w = csv::Writer::from_writer(Vec::new());
                    w.write_record(["n", "n_plus_1", "sum", "mode"])?;
                    for p in &pairs {
                        w.write_record([
                            p.n.to_string(),
                            (p.n + 1).to_string(),
                            p.sum.to_string(),
                            mode.to_string(),
                        ])?;
                    }
                    write_out(g, &w.into_inner()?)?;
                    Ok(true)
                }
            }
        }
        Command::Abundant { limit, format } => match format {
            Format::Cert => emit_cert(g, abundant_cert(g, *limit)?),
            Format::Csv => {
                let table = table(g, factor_table_limit(*limit))?;
                let decades: Vec<u64> = std::iter::successors(Some(10u64), |d| d.checked_mul(10))
                    .take_while(|d| d < limit)
                    .collect();
                let sweep = abundant_sweep(*limit, &decades, &table, jobs(g))?;
                let mut w = csv::Writer::from_writer(Vec::new());
                w.write_record(["limit", "count", "density_numerator", "density_denominator", "density"])?;
                for est in &sweep {
                    let (num, den) = est.density();
                    w.write_record([
                        est.limit.to_string(),
                        est.count.to_string(),
                        num.to_string(),
                        den.to_string(),
                        est.to_decimal(9),
                    ])?;
                }
                write_out(g, &w.into_inner()?)?;
                Ok(sweep.last().is_some_and(|e| e.count > 0))
            }
        },
        Command::Cert { action: CertAction::Validate { file, no_recheck } } => {
            validate(g, file, *no_recheck)
        }
    }
}

fn jobs(g: &GlobalOpts) -> usize {
    g.jobs.map(|j| j as usize).unwrap_or_else(erdoslab::par::default_jobs)
}

fn table(g: &GlobalOpts, limit: u64) -> Result<PrimeTable> {
    Ok(sieve_build_with_budget(limit.max(2), g.sieve_max)?)
}

/// Table limit whose square covers `limit`, for trial-division factoring.
fn factor_table_limit(limit: u64) -> u64 {
    limit.isqrt() + 1
}

fn verify_config(g: &GlobalOpts) -> VerifyConfig {
    VerifyConfig {
        exact_primorial_max: g.exact_primorial_max,
        exact_binomial_max: g.exact_binomial_max,
        frac_bits: g.frac_bits,
        ..VerifyConfig::default()
    }
}

fn verify_cert(g: &GlobalOpts, lemma: LemmaId, from: u64, to: u64) -> Result<Certificate> {
    let config = verify_config(g);
    let table = table(g, required_limit(lemma, to))?;
    let rc = Verifier::with_config(&table, config).check_range(lemma, from, to, jobs(g))?;
    let mut cert = Certificate::from_range(&rc, !g.no_timestamp);
    let p = &mut cert.parameters;
    match lemma {
        LemmaId::ChebyshevBound => {
            p.insert("exact_primorial_max".into(), config.exact_primorial_max.to_string());
            p.insert("frac_bits".into(), config.frac_bits.to_string());
        }
        LemmaId::LowerBound => {
            p.insert("exact_binomial_max".into(), config.exact_binomial_max.to_string());
            p.insert("frac_bits".into(), config.frac_bits.to_string());
        }
        LemmaId::FinalInequality => {
            p.insert("frac_bits".into(), config.frac_bits.to_string());
        }
        _ => {}
    }
    Ok(cert)
}

fn bertrand_cert(g: &GlobalOpts, from: u64, to: u64, form: BertrandForm) -> Result<Certificate> {
    let table = table(g, 2 * to)?;
    let rc = verify_bertrand_range(from, to, &table, form, jobs(g))?;
    let mut cert = Certificate::from_range(&rc, !g.no_timestamp);
    let name = match form {
        BertrandForm::Strict => "strict",
        BertrandForm::Classic => "classic",
    };
    cert.parameters.insert("form".into(), name.into());
    Ok(cert)
}

fn two_primes_cert(g: &GlobalOpts, from: u64, to: u64) -> Result<Certificate> {
    let table = table(g, 2 * to)?;
    let rc = verify_two_primes_range(from, to, &table, jobs(g))?;
    Ok(Certificate::from_range(&rc, !g.no_timestamp))
}

fn ladder_cert(g: &GlobalOpts, chain: &LadderChain) -> Result<Certificate> {
    let top = chain.primes.iter().copied().max().unwrap_or(2);
    // direct lookups up to the top element when affordable, trial division beyond
    let table = table(g, top.min(g.sieve_max).min(1 << 26))?;
    Ok(Certificate::from_ladder(chain, &verify_ladder(chain, &table)))
}

fn ruth_aaron_cert(g: &GlobalOpts, limit: u64, mode: SopfMode) -> Result<Certificate> {
    let table = table(g, limit + 1)?;
    let pairs = ruth_aaron_pairs(limit, mode, &table, jobs(g))?;
    Ok(Certificate::from_ruth_aaron(limit, mode, &pairs))
}

fn abundant_cert(g: &GlobalOpts, limit: u64) -> Result<Certificate> {
    let table = table(g, factor_table_limit(limit))?;
    let est = erdoslab::abundant_density(limit, &table, jobs(g))?;
    Ok(Certificate::from_density(&est))
}

fn read_ladder(path: &Path) -> Result<LadderChain> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let value: serde_json::Value = serde_json::from_str(&text).context("ladder file is not JSON")?;
    if value.is_array() {
        let primes: Vec<String> = serde_json::from_value(value)
            .context("ladder array must hold decimal strings")?;
        let primes = primes
            .iter()
            .map(|s| s.parse::<erdoslab::BigNat>()?.to_u64().ok_or_else(|| {
                erdoslab::Error::Resource(format!("ladder element {s} exceeds 64 bits"))
            }))
            .collect::<Result<Vec<u64>, _>>()?;
        let coverage_target = primes.last().map_or(0, |&p| p.saturating_sub(1));
        Ok(LadderChain { primes, coverage_target })
    } else {
        serde_json::from_value(value).context("ladder object needs `primes` and `coverage_target`")
    }
}

fn emit_cert(g: &GlobalOpts, cert: Certificate) -> Result<bool> {
    let cert = if g.no_timestamp {
        cert
    } else {
        cert.with_timestamp(
            chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true),
        )
    };
    let mut bytes = cert.emit();
    bytes.push(b'\n');
    write_out(g, &bytes)?;
    Ok(cert.passed())
}

fn write_out(g: &GlobalOpts, bytes: &[u8]) -> Result<()> {
    match &g.out {
        Some(path) => fs::write(path, bytes).with_context(|| format!("writing {}", path.display())),
        None => {
            let mut out = io::stdout().lock();
            out.write_all(bytes)?;
            out.flush()?;
            Ok(())
        }
    }
}

fn param(cert: &Certificate, key: &str) -> Result<u64> {
    let raw = cert
        .parameters
        .get(key)
        .with_context(|| format!("certificate lacks parameter {key:?}"))?;
    raw.parse::<erdoslab::BigNat>()?
        .to_u64()
        .with_context(|| format!("parameter {key} out of range"))
}

/// Format check, then recomputation of the certified statement from its
/// parameters. Exit status follows the recomputed verdict.
fn validate(g: &GlobalOpts, path: &Path, no_recheck: bool) -> Result<bool> {
    let bytes = fs::read(path).with_context(|| format!("reading {}", path.display()))?;
    let cert = Certificate::parse(&bytes)?;
    if no_recheck {
        eprintln!("{}: canonical {} certificate", path.display(), cert.statement);
        return Ok(cert.passed());
    }

    // recompute without timing, with the thresholds the certificate recorded
    let mut g = g.clone();
    g.no_timestamp = true;
    if let Some(v) = cert.parameters.get("exact_primorial_max") {
        g.exact_primorial_max = v.parse()?;
    }
    if let Some(v) = cert.parameters.get("exact_binomial_max") {
        g.exact_binomial_max = v.parse()?;
    }
    if let Some(v) = cert.parameters.get("frac_bits") {
        g.frac_bits = v.parse()?;
    }
    let fresh = match cert.statement {
        Statement::BertrandRange => {
            let form = match cert.parameters.get("form").map(String::as_str) {
                Some("classic") => BertrandForm::Classic,
                Some("strict") | None => BertrandForm::Strict,
                Some(other) => bail!("unknown Bertrand form {other:?}"),
            };
            bertrand_cert(&g, param(&cert, "from")?, param(&cert, "to")?, form)?
        }
        Statement::TwoPrimesMod4 => two_primes_cert(&g, param(&cert, "from")?, param(&cert, "to")?)?,
        Statement::Ladder => {
            let chain = LadderChain {
                primes: serde_json::from_value::<Vec<String>>(cert.result.payload["chain"].clone())
                    .context("ladder payload lacks `chain`")?
                    .iter()
                    .map(|s| s.parse::<u64>())
                    .collect::<Result<_, _>>()?,
                coverage_target: param(&cert, "coverage_target")?,
            };
            ladder_cert(&g, &chain)?
        }
        Statement::RuthAaron => {
            let mode = match cert.parameters.get("mode").map(String::as_str) {
                Some("distinct") => SopfMode::Distinct,
                Some("with_multiplicity") => SopfMode::WithMultiplicity,
                other => bail!("bad Ruth–Aaron mode {other:?}"),
            };
            ruth_aaron_cert(&g, param(&cert, "limit")?, mode)?
        }
        Statement::AbundantDensity => abundant_cert(&g, param(&cert, "limit")?)?,
        lemma_statement => {
            let lemma = LemmaId::from_statement(lemma_statement).expect("remaining statements are lemmas");
            verify_cert(&g, lemma, param(&cert, "from")?, param(&cert, "to")?)?
        }
    };

    let claimed = cert.without_timing();
    if claimed.result != fresh.result
        || claimed.method != fresh.method
        || claimed.parameters != fresh.parameters
    {
        bail!("{}: recomputation does not reproduce the recorded result", path.display());
    }
    eprintln!(
        "{}: {} certificate re-checked, status {}",
        path.display(),
        cert.statement,
        if fresh.passed() { "pass" } else { "fail" }
    );
    Ok(fresh.passed())
}
