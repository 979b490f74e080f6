use num_rational::BigRational;
use schurtrace::numeric::{parse_rational, rational_to_f64};
use schurtrace::{ExactSpectrum, Spectrum};

use crate::args::{SpectrumArgs, ZipfExponent};
use crate::{CliError, CliResult};

fn parse_list(raw: &[String]) -> CliResult<Vec<BigRational>> {
    let mut values: Vec<BigRational> = raw
        .iter()
        .map(|s| {
            parse_rational(s).ok_or_else(|| {
                CliError::Usage(format!("--alpha entry `{s}` is not a number (use 0.25 or 1/4)"))
            })
        })
        .collect::<CliResult<_>>()?;
    values.sort_by(|a, b| b.cmp(a));
    Ok(values)
}

pub fn float(spec: &SpectrumArgs, zipf: &ZipfExponent) -> CliResult<Spectrum> {
    if let Some(raw) = &spec.alpha {
        let values: Vec<f64> = parse_list(raw)?.iter().map(rational_to_f64).collect();
        return Ok(Spectrum::new(values)?);
    }
    if let Some(r) = spec.uniform {
        return Ok(Spectrum::uniform(r)?);
    }
    if let Some(d) = spec.zipf {
        return Ok(Spectrum::zipf(d, zipf.zipf_s)?);
    }
    Err(CliError::Usage("give one of --alpha, --uniform or --zipf".into()))
}

/// Exact spectra: `--alpha` must sum to exactly 1; `--zipf` is not rational.
pub fn exact(spec: &SpectrumArgs) -> CliResult<ExactSpectrum> {
    if let Some(raw) = &spec.alpha {
        return exact_list(raw);
    }
    if let Some(r) = spec.uniform {
        return Ok(ExactSpectrum::uniform(r)?);
    }
    Err(CliError::Usage(
        "exact tables need --alpha or --uniform; zipf spectra are not rational".into(),
    ))
}

pub fn exact_list(raw: &[String]) -> CliResult<ExactSpectrum> {
    Ok(ExactSpectrum::new(parse_list(raw)?)?)
}
