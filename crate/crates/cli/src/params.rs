//! Command-line values: complex numbers, lists, probes and parameter records.

use anyhow::{anyhow, bail, Context, Result};
use clap::Args;
use num_complex::Complex64 as C64;
use zmeasure::combinatorics::{Signature, YoungDiagram};
use zmeasure::measures::{ZABParams, ZWParams, ZXiParams};

/// Parses `RE`, `RE+IMi`, `RE-IMi` or `IMi`.
pub fn parse_complex(s: &str) -> Result<C64> {
    let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if t.is_empty() {
        bail!("empty complex number");
    }
    let Some(body) = t.strip_suffix('i') else {
        return t.parse::<f64>().map(|re| C64::new(re, 0.0)).with_context(|| format!("bad number '{s}'"));
    };
    // Split at the last sign that is not a leading sign or an exponent sign.
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| (bytes[k] == b'+' || bytes[k] == b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    let imag = |v: &str| -> Result<f64> {
        match v {
            "" | "+" => Ok(1.0),
            "-" => Ok(-1.0),
            _ => v.parse().with_context(|| format!("bad imaginary part in '{s}'")),
        }
    };
    match split {
        Some(k) => {
            let re: f64 = body[..k].parse().with_context(|| format!("bad real part in '{s}'"))?;
            Ok(C64::new(re, imag(&body[k..])?))
        }
        None => Ok(C64::new(0.0, imag(body)?)),
    }
}

pub fn format_complex(z: C64) -> String {
    if z.im == 0.0 {
        format!("{}", z.re)
    } else if z.im < 0.0 {
        format!("{}{}i", z.re, z.im)
    } else {
        format!("{}+{}i", z.re, z.im)
    }
}

pub fn parse_list(s: &str) -> Result<Vec<f64>> {
    s.split(',')
        .filter(|p| !p.trim().is_empty())
        .map(|p| p.trim().parse::<f64>().with_context(|| format!("bad number '{p}'")))
        .collect()
}

/// `x:y` pairs separated by commas.
pub fn parse_probes(s: &str) -> Result<Vec<(f64, f64)>> {
    s.split(',')
        .filter(|p| !p.trim().is_empty())
        .map(|p| {
            let (x, y) = p.split_once(':').ok_or_else(|| anyhow!("probe '{p}' is not of the form x:y"))?;
            Ok((x.trim().parse()?, y.trim().parse()?))
        })
        .collect()
}

fn parse_ints(s: &str) -> Result<Vec<i64>> {
    s.split(',')
        .filter(|p| !p.trim().is_empty())
        .map(|p| p.trim().parse::<i64>().with_context(|| format!("bad integer '{p}'")))
        .collect()
}

pub fn parse_partition(s: &str) -> Result<YoungDiagram> {
    let parts = parse_ints(s)?;
    if parts.iter().any(|&p| p < 0) {
        bail!("partition '{s}' has a negative part");
    }
    Ok(YoungDiagram::new(parts.into_iter().map(|p| p as u32).collect())?)
}

pub fn parse_signature(s: &str) -> Result<Signature> {
    Ok(Signature::new(parse_ints(s)?)?)
}

/// Parameter flags shared by the subcommands. Complex values are `RE+IMi`; when
/// only z (or w) is given with a nonzero imaginary part, z' (or w') is its conjugate.
#[derive(Args, Debug, Clone, Default)]
pub struct ParamArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub z: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub zp: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub w: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub wp: Option<String>,
    #[arg(long)]
    pub xi: Option<f64>,
    /// Signature length.
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long, allow_hyphen_values = true)]
    pub a: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub b: Option<f64>,
    #[arg(long)]
    pub theta: Option<f64>,
}

fn pair(first: &Option<String>, second: &Option<String>, names: (&str, &str)) -> Result<Option<(C64, C64)>> {
    let Some(f) = first else {
        if second.is_some() {
            bail!("--{} given without --{}", names.1, names.0);
        }
        return Ok(None);
    };
    let a = parse_complex(f)?;
    let b = match second {
        Some(s) => parse_complex(s)?,
        None if a.im != 0.0 => a.conj(),
        None => bail!("--{} is required when --{} is real", names.1, names.0),
    };
    Ok(Some((a, b)))
}

impl ParamArgs {
    pub fn zpair(&self) -> Result<Option<(C64, C64)>> {
        pair(&self.z, &self.zp, ("z", "zp"))
    }

    pub fn wpair(&self) -> Result<Option<(C64, C64)>> {
        pair(&self.w, &self.wp, ("w", "wp"))
    }

    pub fn require_z(&self) -> Result<(C64, C64)> {
        self.zpair()?.ok_or_else(|| anyhow!("--z is required"))
    }

    /// (z, z') with a fallback when --z is absent.
    pub fn z_or(&self, default: (f64, f64)) -> Result<(C64, C64)> {
        Ok(self.zpair()?.unwrap_or((C64::new(default.0, 0.0), C64::new(default.1, 0.0))))
    }

    pub fn require_xi(&self) -> Result<f64> {
        self.xi.ok_or_else(|| anyhow!("--xi is required"))
    }

    pub fn zxi(&self) -> Result<ZXiParams> {
        let (z, zp) = self.require_z()?;
        Ok(ZXiParams::new(z, zp, self.require_xi()?)?)
    }

    pub fn require_n(&self) -> Result<usize> {
        self.n.ok_or_else(|| anyhow!("--n is required"))
    }

    pub fn zw(&self) -> Result<ZWParams> {
        let (z, zp) = self.require_z()?;
        let (w, wp) = self.wpair()?.ok_or_else(|| anyhow!("--w is required"))?;
        Ok(ZWParams::new(z, zp, w, wp, self.require_n()?)?)
    }

    pub fn zab(&self) -> Result<ZABParams> {
        let (z, zp) = self.require_z()?;
        let a = self.a.ok_or_else(|| anyhow!("--a is required"))?;
        let b = self.b.ok_or_else(|| anyhow!("--b is required"))?;
        Ok(ZABParams::new(z, zp, a, b, self.require_n()?)?)
    }
}
