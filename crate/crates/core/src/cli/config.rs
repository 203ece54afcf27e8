use serde::{Deserialize, Serialize};
use std::path::PathBuf;
use std::str::FromStr;

use crate::hilbert::CoherentLabel;
use crate::protocols::{
    entanglement_swap, entanglement_transfer, multipair_reciprocation, multipair_transfer,
    reciprocation, transfer_qubit_to_cv, transfer_qubit_to_qubit, Dynamics, Protocol,
    ProtocolReport, ReciprocationMode, Settings, SwapDetector, MAX_PAIRS,
};
use crate::{Error, Result};

/// A coherent amplitude as written in a config: a real number or `[re, im]`.
#[derive(Clone, Copy, Debug, PartialEq, Deserialize, Serialize)]
#[serde(untagged)]
pub enum Amplitude {
    Real(f64),
    Complex([f64; 2]),
}

impl Amplitude {
    pub fn label(self) -> CoherentLabel {
        match self {
            Amplitude::Real(x) => CoherentLabel::from(x),
            Amplitude::Complex([re, im]) => CoherentLabel::new(re, im),
        }
    }
}

impl FromStr for Amplitude {
    type Err = String;
    /// `"2"` or `"re,im"`.
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let num = |t: &str| t.trim().parse::<f64>().map_err(|e| format!("bad number '{t}': {e}"));
        match s.split_once(',') {
            None => Ok(Amplitude::Real(num(s)?)),
            Some((re, im)) => Ok(Amplitude::Complex([num(re)?, num(im)?])),
        }
    }
}

/// Field readout selected by `mode`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    Ideal,
    Gaussian,
    Homodyne,
}

impl FromStr for Mode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "ideal" => Ok(Mode::Ideal),
            "gaussian" => Ok(Mode::Gaussian),
            "homodyne" => Ok(Mode::Homodyne),
            _ => Err(Error::Parameter(format!("unknown mode '{s}' (ideal, gaussian, homodyne)"))),
        }
    }
}

/// Scenario as read from a config file and/or flags; every field optional.
/// Keys mirror the flag names.
#[derive(Clone, Debug, Default, PartialEq, Deserialize, Serialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub struct ScenarioConfig {
    pub protocol: Option<String>,
    pub alpha: Option<Amplitude>,
    pub beta: Option<Amplitude>,
    /// Shorthand for `alpha = beta = iγ`.
    pub gamma: Option<f64>,
    pub delta_width: Option<f64>,
    pub n_pairs: Option<usize>,
    pub a: Option<f64>,
    pub b: Option<f64>,
    pub mode: Option<String>,
    pub postselect: Option<bool>,
    pub outcomes: Option<String>,
    pub n_max: Option<usize>,
    pub detuning_ratio: Option<f64>,
    pub dynamics: Option<String>,
    pub residual_bound: Option<f64>,
    pub out: Option<PathBuf>,
}

macro_rules! overlay {
    ($base:expr, $top:expr, $($f:ident),*) => {
        ScenarioConfig { $($f: $top.$f.or($base.$f),)* }
    };
}

impl ScenarioConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parameter(format!("config: {e}")))
    }

    /// Fields set in `top` win over those in `self`.
    pub fn overlay(self, top: ScenarioConfig) -> ScenarioConfig {
        overlay!(
            self, top, protocol, alpha, beta, gamma, delta_width, n_pairs, a, b, mode, postselect,
            outcomes, n_max, detuning_ratio, dynamics, residual_bound, out
        )
    }

    /// Sets one numeric field by its flag name, for sweeps.
    pub fn with_axis(&self, axis: &str, value: f64) -> Result<ScenarioConfig> {
        let mut c = self.clone();
        let count = |v: f64| {
            if v >= 0.0 && v.fract() == 0.0 {
                Ok(v as usize)
            } else {
                Err(Error::Parameter(format!("{axis} must be a non-negative integer, got {v}")))
            }
        };
        match axis {
            "alpha" => c.alpha = Some(Amplitude::Real(value)),
            "beta" => c.beta = Some(Amplitude::Real(value)),
            "gamma" => c.gamma = Some(value),
            "delta-width" => c.delta_width = Some(value),
            "a" => c.a = Some(value),
            "b" => c.b = Some(value),
            "n-pairs" => c.n_pairs = Some(count(value)?),
            "n-max" => c.n_max = Some(count(value)?),
            "detuning-ratio" => c.detuning_ratio = Some(value),
            "residual-bound" => c.residual_bound = Some(value),
            _ => return Err(Error::Parameter(format!("'{axis}' is not a sweepable parameter"))),
        }
        Ok(c)
    }

    /// Applies defaults and checks the scenario before any computation.
    pub fn resolve(&self) -> Result<Scenario> {
        let protocol: Protocol = self
            .protocol
            .as_deref()
            .ok_or_else(|| Error::Parameter("no protocol given".into()))?
            .parse()?;
        let (alpha, beta) = match (self.gamma, self.alpha) {
            (Some(_), Some(_)) => {
                return Err(Error::Parameter("give either gamma or alpha, not both".into()));
            }
            (Some(g), None) => {
                let l = CoherentLabel::new(0.0, g);
                (l, self.beta.map_or(l, Amplitude::label))
            }
            (None, a) => {
                let a = a.map_or(CoherentLabel::from(2.0), Amplitude::label);
                (a, self.beta.map_or(a, Amplitude::label))
            }
        };
        let mode = match self.mode.as_deref() {
            Some(m) => m.parse()?,
            None if protocol == Protocol::EntanglementSwap => Mode::Homodyne,
            None => Mode::Ideal,
        };
        let settings = Settings {
            detuning_ratio: self.detuning_ratio.unwrap_or(Settings::default().detuning_ratio),
            n_max: self.n_max,
            residual_bound: self.residual_bound.unwrap_or(Settings::default().residual_bound),
            dynamics: self.dynamics.as_deref().map(Dynamics::from_str).transpose()?.unwrap_or_default(),
            ..Settings::default()
        };
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let scenario = Scenario {
            protocol,
            alpha,
            beta,
            delta_width: self.delta_width.unwrap_or(0.0),
            n_pairs: self.n_pairs.unwrap_or(1),
            a: self.a.unwrap_or(s),
            b: self.b.unwrap_or(s),
            mode,
            postselect: self.postselect.unwrap_or(true),
            outcomes: self.outcomes.clone(),
            settings,
        };
        scenario.validate()?;
        Ok(scenario)
    }
}

/// Fully resolved scenario; echoed into every result document.
#[derive(Clone, Debug, Serialize)]
pub struct Scenario {
    pub protocol: Protocol,
    pub alpha: CoherentLabel,
    pub beta: CoherentLabel,
    pub delta_width: f64,
    pub n_pairs: usize,
    pub a: f64,
    pub b: f64,
    pub mode: Mode,
    pub postselect: bool,
    pub outcomes: Option<String>,
    pub settings: Settings,
}

impl Scenario {
    fn validate(&self) -> Result<()> {
        self.settings.validate()?;
        for (name, l) in [("alpha", self.alpha), ("beta", self.beta)] {
            if !l.is_finite() {
                return Err(Error::Parameter(format!("non-finite {name}")));
            }
        }
        if !(self.delta_width >= 0.0) || !self.delta_width.is_finite() {
            return Err(Error::Parameter(format!("delta-width must be >= 0, got {}", self.delta_width)));
        }
        let mode_ok = match self.mode {
            Mode::Ideal => true,
            Mode::Gaussian => self.protocol == Protocol::Reciprocation,
            Mode::Homodyne => self.protocol == Protocol::EntanglementSwap,
        };
        if !mode_ok {
            return Err(Error::Parameter(format!(
                "mode {:?} does not apply to {}",
                self.mode, self.protocol
            )));
        }
        match self.protocol {
            Protocol::TransferQubitToQubit | Protocol::TransferQubitToCv => {
                crate::protocols::check_real_amplitudes(self.a, self.b)?;
            }
            Protocol::Reciprocation if self.mode == Mode::Gaussian => {
                if self.alpha.amplitude().im != 0.0 || self.beta.amplitude().im != 0.0 {
                    return Err(Error::Parameter("Gaussian reciprocation needs real alpha and beta".into()));
                }
            }
            Protocol::MultipairTransfer | Protocol::MultipairReciprocation => {
                if self.n_pairs == 0 {
                    return Err(Error::Parameter("n-pairs must be at least 1".into()));
                }
                if self.n_pairs > MAX_PAIRS {
                    return Err(Error::Precondition(format!("n-pairs above {MAX_PAIRS}")));
                }
                if let Some(o) = &self.outcomes {
                    if o.len() != 2 * self.n_pairs || !o.chars().all(|c| c == '+' || c == '-') {
                        return Err(Error::Parameter(format!("bad outcome string '{o}'")));
                    }
                }
            }
            _ => {}
        }
        Ok(())
    }

    pub fn run(&self) -> Result<ProtocolReport> {
        let s = &self.settings;
        let report = match self.protocol {
            Protocol::TransferQubitToQubit => transfer_qubit_to_qubit(self.a, self.b, s)?,
            Protocol::TransferQubitToCv => transfer_qubit_to_cv(self.a, self.b, self.alpha, self.postselect, s)?,
            Protocol::EntanglementTransfer => entanglement_transfer(self.alpha, self.beta, s)?,
            Protocol::Reciprocation => {
                let mode = match self.mode {
                    Mode::Gaussian => ReciprocationMode::Gaussian {
                        width: self.delta_width,
                    },
                    _ => ReciprocationMode::Ideal,
                };
                reciprocation(self.alpha, self.beta, mode, s)?
            }
            Protocol::MultipairTransfer => {
                multipair_transfer(self.n_pairs, self.alpha, self.outcomes.as_deref(), s)?
            }
            Protocol::MultipairReciprocation => {
                multipair_reciprocation(self.n_pairs, self.alpha, self.outcomes.as_deref(), s)?
            }
            Protocol::EntanglementSwap => {
                let detector = match self.mode {
                    Mode::Homodyne => SwapDetector::Homodyne,
                    _ => SwapDetector::Ideal,
                };
                entanglement_swap(self.alpha, detector, s)?
            }
        };
        report.check_complete()?;
        Ok(report)
    }
}
