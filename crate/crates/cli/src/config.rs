//! Family files and config overlays, both TOML.

use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::de::DeserializeOwned;
use serde::Deserialize;
use wavefront_core::genfam::{catalog, GeneratingFamily};
use wavefront_core::numcore::{DomainBox, Range};

use crate::CliError;

/// Values read from `--config`; a flag given on the command line wins.
#[derive(Debug, Default)]
pub struct Overlay {
    table: toml::Table,
}

impl Overlay {
    pub fn load(path: Option<&Path>) -> Result<Self, CliError> {
        let Some(path) = path else {
            return Ok(Self::default());
        };
        let text = read(path)?;
        let table = text
            .parse::<toml::Table>()
            .map_err(|e| CliError::Validation(format!("{}: {e}", path.display())))?;
        Ok(Self { table })
    }

    /// `flag`, else the config value under `key` (dashes or underscores).
    pub fn pick<T: DeserializeOwned>(&self, flag: Option<T>, key: &str) -> Result<Option<T>, CliError> {
        if flag.is_some() {
            return Ok(flag);
        }
        let alt = key.replace('-', "_");
        let Some(v) = self.table.get(key).or_else(|| self.table.get(&alt)) else {
            return Ok(None);
        };
        v.clone()
            .try_into()
            .map(Some)
            .map_err(|e| CliError::Validation(format!("config key `{key}`: {e}")))
    }

    pub fn or<T: DeserializeOwned>(&self, flag: Option<T>, key: &str, default: T) -> Result<T, CliError> {
        Ok(self.pick(flag, key)?.unwrap_or(default))
    }

    pub fn range(&self, flag: Option<String>, key: &str, default: Option<&str>) -> Result<Range<f64>, CliError> {
        let text = self
            .pick(flag, key)?
            .or_else(|| default.map(str::to_string))
            .ok_or_else(|| CliError::Validation(format!("--{key} is required")))?;
        parse_range(&text, key)
    }
}

pub fn parse_range(text: &str, key: &str) -> Result<Range<f64>, CliError> {
    Range::from_str(text).map_err(|e| CliError::Validation(format!("--{key}: {e}")))
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::Validation(format!("{}: {e}", path.display())))
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct FamilyFile {
    k: usize,
    n: usize,
    expr: String,
    /// One `[lo, hi]` per variable, `q` first.
    domain: Option<Vec<[f64; 2]>>,
    seeds: Option<Vec<Vec<f64>>>,
    base: Option<Vec<f64>>,
}

/// A generating family with the `q` seeds used to reach its sheets.
#[derive(Clone, Debug)]
pub struct LoadedFamily {
    pub label: String,
    pub expr: String,
    pub family: GeneratingFamily<f64>,
    pub q_seeds: Vec<Vec<f64>>,
}

const DEFAULT_HALF_WIDTH: f64 = 5.0;

fn default_seeds(k: usize, domain: &DomainBox<f64>) -> Vec<Vec<f64>> {
    let per_axis = if k == 1 { 9 } else { 5 };
    let mut out = vec![Vec::new()];
    for i in 0..k {
        let (lo, hi) = (domain.lo()[i], domain.hi()[i]);
        out = out
            .into_iter()
            .flat_map(|prefix: Vec<f64>| {
                (0..per_axis).map(move |j| {
                    let mut p = prefix.clone();
                    // stay off the box faces and off exact symmetry points
                    let s = (j as f64 + 0.5) / per_axis as f64 + 0.013;
                    p.push(lo + (hi - lo) * s.min(0.99));
                    p
                })
            })
            .collect();
    }
    out
}

pub fn load_family(path: Option<&Path>, name: Option<&str>) -> Result<LoadedFamily, CliError> {
    match (path, name) {
        (Some(_), Some(_)) => Err(CliError::Validation("give either --family or --catalog, not both".into())),
        (None, None) => Err(CliError::Validation("--family <file> or --catalog <name> is required".into())),
        (None, Some(name)) => {
            let c = catalog::all::<f64>()
                .into_iter()
                .find(|c| c.name == name.replace('_', " "))
                .ok_or_else(|| {
                    let names: Vec<&str> = catalog::all::<f64>().iter().map(|c| c.name).collect();
                    CliError::Validation(format!("unknown catalog family `{name}` (known: {})", names.join(", ")))
                })?;
            Ok(LoadedFamily {
                label: c.name.to_string(),
                expr: c.expr.to_string(),
                family: c.family,
                q_seeds: c.q_seeds,
            })
        }
        (Some(path), None) => {
            let text = read(path)?;
            let file: FamilyFile =
                toml::from_str(&text).map_err(|e| CliError::Validation(format!("{}: {e}", path.display())))?;
            family_from_file(file, path)
        }
    }
}

fn family_from_file(file: FamilyFile, path: &Path) -> Result<LoadedFamily, CliError> {
    let bad = |m: String| CliError::Validation(format!("{}: {m}", path.display()));
    let m = file.k + file.n;
    if file.k == 0 || file.n == 0 {
        return Err(bad("k and n must be positive".into()));
    }
    let domain = match &file.domain {
        Some(d) if d.len() != m => return Err(bad(format!("domain needs {m} intervals, got {}", d.len()))),
        Some(d) => DomainBox::new(d.iter().map(|r| r[0]).collect(), d.iter().map(|r| r[1]).collect())
            .map_err(|e| bad(e.to_string()))?,
        None => DomainBox::cube(m, -DEFAULT_HALF_WIDTH, DEFAULT_HALF_WIDTH),
    };
    let mut family =
        GeneratingFamily::from_expr(&file.expr, file.k, file.n, Some(domain.clone())).map_err(|e| bad(e.to_string()))?;
    if let Some(base) = file.base {
        if base.len() != m {
            return Err(bad(format!("base needs {m} coordinates")));
        }
        family = family.with_base_point(base).map_err(CliError::Numerical)?;
    }
    let q_seeds = match file.seeds {
        Some(s) if s.iter().any(|q| q.len() != file.k) => return Err(bad(format!("every seed needs {} entries", file.k))),
        Some(s) if !s.is_empty() => s,
        _ => default_seeds(file.k, &domain),
    };
    Ok(LoadedFamily {
        label: path.display().to_string(),
        expr: file.expr,
        family,
        q_seeds,
    })
}

/// Fails early when an output file could not be created.
pub fn check_output(path: Option<&PathBuf>) -> Result<(), CliError> {
    let Some(path) = path else {
        return Ok(());
    };
    let parent = path.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."));
    let meta = std::fs::metadata(parent)
        .map_err(|e| CliError::Validation(format!("output directory {}: {e}", parent.display())))?;
    if !meta.is_dir() || meta.permissions().readonly() {
        return Err(CliError::Validation(format!("output directory {} is not writable", parent.display())));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn overlay_prefers_flags() {
        let o = Overlay {
            table: "seed_density = 12\ntol = 1e-3\nt = \"0:1:0.5\"".parse().unwrap(),
        };
        assert_eq!(o.or(None, "seed-density", 40usize).unwrap(), 12);
        assert_eq!(o.or(Some(7usize), "seed-density", 40).unwrap(), 7);
        assert_eq!(o.or(None, "step", 0.02).unwrap(), 0.02);
        assert_eq!(o.range(None, "t", None).unwrap().values(), vec![0.0, 0.5, 1.0]);
        assert!(matches!(o.pick::<usize>(None, "tol"), Err(CliError::Validation(_))));
    }

    #[test]
    fn default_seeds_fill_the_q_box() {
        let d = DomainBox::cube(3, -1.0, 1.0);
        let s = default_seeds(2, &d);
        assert_eq!(s.len(), 25);
        assert!(s.iter().flatten().all(|v| v.abs() < 1.0));
    }
}
