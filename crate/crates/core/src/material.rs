//! Refractive-index models loaded from versioned material files.
//!
//! A material file is a small TOML document:
//!
//! ```text
//! name = "linbo3_congruent_o"
//! form_id = "sellmeier_4"
//! coefficients = [4.9048, 0.11768, 0.04750, -0.027169]
//! valid_range_nm = [400.0, 3400.0]
//! ```
//!
//! Supported functional forms, with `L` the vacuum wavelength in micrometres:
//!
//! * `constant`     - `n = c0`
//! * `cauchy`       - `n = c0 + c1/L^2 + c2/L^4`
//! * `sellmeier_4`  - `n^2 = c0 + c1/(L^2 - c2) + c3 * L^2`
//! * `sellmeier_6`  - `n^2 = c0 + c1/(L^2 - c2) + c3/(L^2 - c4) + c5 * L^2`

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum IndexForm {
    Constant,
    Cauchy,
    Sellmeier4,
    Sellmeier6,
}

impl IndexForm {
    fn arity(self) -> usize {
        match self {
            IndexForm::Constant => 1,
            IndexForm::Cauchy => 3,
            IndexForm::Sellmeier4 => 4,
            IndexForm::Sellmeier6 => 6,
        }
    }

    fn id(self) -> &'static str {
        match self {
            IndexForm::Constant => "constant",
            IndexForm::Cauchy => "cauchy",
            IndexForm::Sellmeier4 => "sellmeier_4",
            IndexForm::Sellmeier6 => "sellmeier_6",
        }
    }

    fn from_id(id: &str) -> Result<Self> {
        match id {
            "constant" => Ok(IndexForm::Constant),
            "cauchy" => Ok(IndexForm::Cauchy),
            "sellmeier_4" => Ok(IndexForm::Sellmeier4),
            "sellmeier_6" => Ok(IndexForm::Sellmeier6),
            other => Err(Error::MaterialData(format!("unknown form_id '{other}'"))),
        }
    }
}

/// Dispersion data for one polarization of one material.
#[derive(Debug, Clone)]
pub struct MaterialDispersion {
    pub name: String,
    pub form: IndexForm,
    pub coefficients: Vec<f64>,
    /// Wavelength validity interval in metres.
    pub valid_range: (f64, f64),
}

#[derive(Serialize, Deserialize)]
struct MaterialFile {
    name: String,
    form_id: String,
    coefficients: Vec<f64>,
    valid_range_nm: [f64; 2],
}

const LINBO3_O: &str = include_str!("../data/linbo3_congruent_o.toml");
const LINBO3_E: &str = include_str!("../data/linbo3_congruent_e.toml");

impl MaterialDispersion {
    pub fn new(
        name: impl Into<String>,
        form: IndexForm,
        coefficients: Vec<f64>,
        valid_range: (f64, f64),
    ) -> Result<Self> {
        let m = MaterialDispersion {
            name: name.into(),
            form,
            coefficients,
            valid_range,
        };
        m.validate()?;
        Ok(m)
    }

    /// Dispersionless test medium with constant index `n`.
    pub fn constant(n: f64) -> Self {
        MaterialDispersion::new(
            format!("constant_n{n}"),
            IndexForm::Constant,
            vec![n],
            (100e-9, 100e-6),
        )
        .expect("constant index is always valid")
    }

    pub fn from_toml_str(text: &str) -> Result<Self> {
        let file: MaterialFile =
            toml::from_str(text).map_err(|e| Error::MaterialData(e.to_string()))?;
        MaterialDispersion::new(
            file.name,
            IndexForm::from_id(&file.form_id)?,
            file.coefficients,
            (file.valid_range_nm[0] * 1e-9, file.valid_range_nm[1] * 1e-9),
        )
    }

    pub fn from_file(path: impl AsRef<std::path::Path>) -> Result<Self> {
        let text = std::fs::read_to_string(path.as_ref())
            .map_err(|e| Error::MaterialData(format!("{}: {e}", path.as_ref().display())))?;
        MaterialDispersion::from_toml_str(&text)
    }

    /// Datasets bundled with the crate, by name.
    pub fn builtin(name: &str) -> Option<Self> {
        let text = match name {
            "linbo3_congruent_o" => LINBO3_O,
            "linbo3_congruent_e" => LINBO3_E,
            _ => return None,
        };
        Some(MaterialDispersion::from_toml_str(text).expect("bundled datasets parse"))
    }

    pub fn builtin_names() -> &'static [&'static str] {
        &["linbo3_congruent_o", "linbo3_congruent_e"]
    }

    fn validate(&self) -> Result<()> {
        if self.coefficients.len() != self.form.arity() {
            return Err(Error::MaterialData(format!(
                "form '{}' takes {} coefficients, got {}",
                self.form.id(),
                self.form.arity(),
                self.coefficients.len()
            )));
        }
        let (lo, hi) = self.valid_range;
        if !(lo > 0.0 && hi > lo) {
            return Err(Error::MaterialData(format!(
                "invalid wavelength range [{lo}, {hi}]"
            )));
        }
        // n must stay real and above 1 across the declared range.
        for i in 0..=64 {
            let lambda = lo + (hi - lo) * i as f64 / 64.0;
            let n = self.index_unchecked(lambda);
            if !n.is_finite() || n <= 1.0 {
                return Err(Error::MaterialData(format!(
                    "index {n} at {:.1} nm violates n > 1",
                    lambda * 1e9
                )));
            }
        }
        Ok(())
    }

    /// Refractive index at vacuum wavelength `lambda` (metres), range-checked.
    pub fn index(&self, lambda: f64) -> Result<f64> {
        self.check_range(lambda)?;
        Ok(self.index_unchecked(lambda))
    }

    pub fn check_range(&self, lambda: f64) -> Result<()> {
        let (lo, hi) = self.valid_range;
        if lambda < lo || lambda > hi {
            return Err(Error::OutOfRange {
                material: self.name.clone(),
                lambda_nm: lambda * 1e9,
                min_nm: lo * 1e9,
                max_nm: hi * 1e9,
            });
        }
        Ok(())
    }

    /// Evaluates the index formula without the range check. Callers that
    /// sweep frequency offsets validate the swept interval once up front.
    pub fn index_unchecked(&self, lambda: f64) -> f64 {
        let l2 = (lambda * 1e6) * (lambda * 1e6);
        let c = &self.coefficients;
        match self.form {
            IndexForm::Constant => c[0],
            IndexForm::Cauchy => c[0] + c[1] / l2 + c[2] / (l2 * l2),
            IndexForm::Sellmeier4 => (c[0] + c[1] / (l2 - c[2]) + c[3] * l2).sqrt(),
            IndexForm::Sellmeier6 => {
                (c[0] + c[1] / (l2 - c[2]) + c[3] / (l2 - c[4]) + c[5] * l2).sqrt()
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn bundled_datasets_load_and_match_hand_evaluation() {
        // Hand evaluation of the sellmeier_4 polynomial at 1542 nm.
        let o = MaterialDispersion::builtin("linbo3_congruent_o").unwrap();
        let l2 = 1.542_f64 * 1.542;
        let by_hand = (4.9048 + 0.11768 / (l2 - 0.04750) - 0.027169 * l2).sqrt();
        assert_relative_eq!(o.index(1542e-9).unwrap(), by_hand, max_relative = 1e-15);
        // 50-digit reference evaluations.
        assert_relative_eq!(o.index(1542e-9).unwrap(), 2.21149253801, max_relative = 1e-10);
        let e = MaterialDispersion::builtin("linbo3_congruent_e").unwrap();
        assert_relative_eq!(e.index(1542e-9).unwrap(), 2.1380917786, max_relative = 1e-10);
        assert_relative_eq!(e.index(771e-9).unwrap(), 2.17919561749, max_relative = 1e-10);
    }

    #[test]
    fn out_of_range_is_rejected() {
        let o = MaterialDispersion::builtin("linbo3_congruent_o").unwrap();
        assert!(matches!(
            o.index(300e-9),
            Err(crate::Error::OutOfRange { .. })
        ));
        assert!(o.index(400e-9).is_ok());
    }

    #[test]
    fn arity_and_range_are_validated() {
        assert!(MaterialDispersion::new(
            "bad",
            IndexForm::Sellmeier4,
            vec![1.0, 2.0],
            (400e-9, 800e-9)
        )
        .is_err());
        assert!(MaterialDispersion::new(
            "bad",
            IndexForm::Constant,
            vec![0.5],
            (400e-9, 800e-9)
        )
        .is_err());
    }

    #[test]
    fn file_roundtrip() {
        let text = r#"
name = "toy"
form_id = "cauchy"
coefficients = [1.5, 0.01, 0.0]
valid_range_nm = [300.0, 2000.0]
"#;
        let m = MaterialDispersion::from_toml_str(text).unwrap();
        assert_eq!(m.form, IndexForm::Cauchy);
        let n = m.index(1000e-9).unwrap();
        assert_relative_eq!(n, 1.5 + 0.01, max_relative = 1e-14);
    }
}
