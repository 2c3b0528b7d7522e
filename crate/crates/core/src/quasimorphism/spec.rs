use serde::Deserialize;

use super::brooks::Quasimorphism;
use crate::error::{Error, Result};
use crate::group::ReducedWord;
use crate::rational::parse_q;

#[derive(Deserialize)]
#[serde(tag = "type", rename_all = "lowercase", deny_unknown_fields)]
enum QmSpec {
    Brooks { word: String },
    Homomorphism { weights: Vec<String> },
}

/// Reads `{"type": "brooks", "word": "ab"}` or
/// `{"type": "homomorphism", "weights": ["1", "-1/2"]}`.
pub fn parse_qm_spec(text: &str) -> Result<Quasimorphism> {
    let spec: QmSpec = serde_json::from_str(text)
        .map_err(|e| Error::Parse(format!("quasimorphism spec, line {} column {}: {e}", e.line(), e.column())))?;
    match spec {
        QmSpec::Brooks { word } => Quasimorphism::brooks(&ReducedWord::parse(&word)?),
        QmSpec::Homomorphism { weights } => {
            Ok(Quasimorphism::homomorphism(weights.iter().map(|w| parse_q(w)).collect::<Result<_>>()?))
        }
    }
}
