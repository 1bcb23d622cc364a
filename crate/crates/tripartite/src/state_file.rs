//! JSON state files: `{"kind": "pure" | "density", "data": [[re, im], ...]}`.
//!
//! Pure states carry 8 amplitudes, densities 64 row-major entries.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};
use tripartite_core::states::{from_pairs, to_pairs};
use tripartite_core::{ComplexMatrix, Density3, PureState3};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StateFileKind {
    Pure,
    Density,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StateFile {
    pub kind: StateFileKind,
    pub data: Vec<[f64; 2]>,
}

/// A decoded state.
#[derive(Debug, Clone, PartialEq)]
pub enum LoadedState {
    Pure(PureState3),
    Density(Density3),
}

impl LoadedState {
    pub fn density(&self) -> Density3 {
        match self {
            LoadedState::Pure(p) => p.density(),
            LoadedState::Density(d) => d.clone(),
        }
    }
}

impl StateFile {
    pub fn from_pure(psi: &PureState3) -> Self {
        Self { kind: StateFileKind::Pure, data: to_pairs(psi.amplitudes()) }
    }

    pub fn from_density(rho: &Density3) -> Self {
        Self { kind: StateFileKind::Density, data: to_pairs(rho.matrix().as_slice()) }
    }

    /// Parses JSON; shape problems are parse errors.
    pub fn parse(text: &str) -> Result<Self> {
        let file: StateFile = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        let want = match file.kind {
            StateFileKind::Pure => 8,
            StateFileKind::Density => 64,
        };
        if file.data.len() != want {
            return Err(Error::Parse(format!(
                "{} state needs {want} entries, found {}",
                if want == 8 { "pure" } else { "density" },
                file.data.len()
            )));
        }
        Ok(file)
    }

    /// Validates the contents as a physical state.
    pub fn decode(&self) -> Result<LoadedState> {
        let z = from_pairs(&self.data);
        Ok(match self.kind {
            StateFileKind::Pure => LoadedState::Pure(PureState3::from_slice(&z)?),
            StateFileKind::Density => LoadedState::Density(Density3::new(ComplexMatrix::from_row_major(&z)?)?),
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("state files always serialize")
    }
}

pub fn read_state(path: &Path) -> Result<LoadedState> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    StateFile::parse(&text)?.decode()
}

pub fn write_state(path: &Path, file: &StateFile) -> Result<()> {
    fs::write(path, file.to_json() + "\n").map_err(|e| Error::io(path, e))
}

#[cfg(test)]
mod tests {
    use super::*;
    use tripartite_core::states::{canonical, Canonical};

    #[test]
    fn round_trip_is_exact() {
        let psi = canonical(Canonical::W);
        let f = StateFile::from_pure(&psi);
        let back = StateFile::parse(&f.to_json()).unwrap().decode().unwrap();
        assert_eq!(back, LoadedState::Pure(psi));

        let rho = psi.density();
        let f = StateFile::from_density(&rho);
        let back = StateFile::parse(&f.to_json()).unwrap().decode().unwrap().density();
        assert_eq!(back.matrix(), rho.matrix());
    }

    #[test]
    fn shape_errors_are_parse_errors() {
        assert!(matches!(StateFile::parse("{"), Err(Error::Parse(_))));
        assert!(matches!(StateFile::parse(r#"{"kind":"mixed","data":[]}"#), Err(Error::Parse(_))));
        assert!(matches!(StateFile::parse(r#"{"kind":"pure","data":[[1,0]]}"#), Err(Error::Parse(_))));
    }

    #[test]
    fn unnormalized_state_is_a_validation_error() {
        let mut data = vec![[0.0, 0.0]; 8];
        data[0] = [2.0, 0.0];
        let f = StateFile { kind: StateFileKind::Pure, data };
        let e = f.decode().unwrap_err();
        assert_eq!(e.exit_code(), 3);
    }

    #[test]
    fn non_positive_density_is_a_validation_error() {
        // diag(1.5, -0.5, 0, ...) has unit trace but a negative eigenvalue
        let mut data = vec![[0.0, 0.0]; 64];
        data[0] = [1.5, 0.0];
        data[9] = [-0.5, 0.0];
        let e = StateFile { kind: StateFileKind::Density, data }.decode().unwrap_err();
        assert_eq!(e.exit_code(), 3);
        assert!(e.to_string().contains("eigenvalue") || e.to_string().contains("positive"), "{e}");
    }
}
