use arccoord::{NewtonOptions, SpineOptions};

use crate::error::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Svg,
}

/// Tolerances, caps and output choices shared by every subcommand.
#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub newton_tol: f64,
    pub flip_zero_tol: f64,
    pub fd_step: f64,
    pub max_flips: Option<usize>,
    pub max_iterations: usize,
    pub format: Format,
    pub seed: u64,
    pub truncation_height: f64,
    pub cold_start: bool,
}

impl RunConfig {
    pub fn validate(self) -> Result<Self, CliError> {
        let positive = [
            ("--tol", self.newton_tol),
            ("--zero-tol", self.flip_zero_tol),
            ("--fd-step", self.fd_step),
            ("--truncation-height", self.truncation_height),
        ];
        for (flag, v) in positive {
            if !(v > 0.0 && v.is_finite()) {
                return Err(CliError::Input(format!("{flag} must be positive, got {v}")));
            }
        }
        if self.max_flips == Some(0) || self.max_iterations == 0 {
            return Err(CliError::Input("iteration caps must be at least 1".into()));
        }
        Ok(self)
    }

    pub fn newton_options(&self) -> NewtonOptions {
        NewtonOptions {
            tol: self.newton_tol,
            max_iterations: self.max_iterations,
            fd_step: self.fd_step,
            ..NewtonOptions::default()
        }
    }

    pub fn spine_options(&self) -> SpineOptions {
        SpineOptions {
            max_flips: self.max_flips,
            zero_tol: self.flip_zero_tol,
        }
    }
}
