use std::sync::Arc;

use serde::Deserialize;

use super::kernel::AbstractKernel;
use crate::error::{Error, Result};
use crate::group::{FiniteGroup, FreeAutomorphism, FreeGroup, ReducedWord};

#[derive(Deserialize)]
#[serde(untagged)]
enum PiSpec {
    Cyclic { cyclic: usize },
    Table { order: usize, identity: usize, table: Vec<Vec<usize>> },
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct GSpec {
    free: usize,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct AutSpec {
    generator_images: Vec<String>,
    inverse_images: Vec<String>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct KernelSpec {
    pi: PiSpec,
    g: GSpec,
    psi: Vec<AutSpec>,
    f: Vec<Vec<String>>,
}

/// A kernel with finite `Pi` and free `G`:
/// `{"pi": {"cyclic": n} | {order, identity, table}, "g": {"free": r},
///   "psi": [automorphism per element of Pi], "f": [[word per (a, b)]]}`.
/// Elements of `Pi` are indexed from 0 in `psi` and `f`; Cayley tables are 1-based.
pub fn parse_kernel_spec(text: &str) -> Result<AbstractKernel<FiniteGroup, FreeGroup>> {
    let spec: KernelSpec = serde_json::from_str(text)
        .map_err(|e| Error::Parse(format!("kernel spec, line {} column {}: {e}", e.line(), e.column())))?;
    let pi = match spec.pi {
        PiSpec::Cyclic { cyclic } if cyclic >= 1 => FiniteGroup::cyclic(cyclic),
        PiSpec::Cyclic { .. } => return Err(Error::Invalid("cyclic group of order 0".into())),
        PiSpec::Table { order, identity, table } => {
            FiniteGroup::from_json(&serde_json::json!({ "order": order, "identity": identity, "table": table }).to_string())?
        }
    };
    if spec.g.free == 0 {
        return Err(Error::Invalid("free group of rank 0".into()));
    }
    let g = FreeGroup::new(spec.g.free);
    let n = pi.order();
    if spec.psi.len() != n || spec.f.len() != n || spec.f.iter().any(|row| row.len() != n) {
        return Err(Error::Invalid(format!("psi needs {n} entries and f an {n} x {n} table")));
    }
    let psi: Vec<FreeAutomorphism> = spec
        .psi
        .iter()
        .map(|a| {
            let im: Vec<&str> = a.generator_images.iter().map(String::as_str).collect();
            let inv: Vec<&str> = a.inverse_images.iter().map(String::as_str).collect();
            g.automorphism_from_strs(&im, &inv)
        })
        .collect::<Result<_>>()?;
    let f: Vec<Vec<ReducedWord>> =
        spec.f.iter().map(|row| row.iter().map(|w| g.parse(w)).collect::<Result<_>>()).collect::<Result<_>>()?;
    Ok(AbstractKernel::new(
        Arc::new(pi),
        Arc::new(g),
        Arc::new(move |a: &usize| psi[*a].clone()),
        Arc::new(move |a: &usize, b: &usize| f[*a][*b].clone()),
    ))
}
