use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use clap::ValueEnum;
use fockfield::algebra::Convention;
use fockfield::field::EvalPath;
use fockfield::transition::{FloorOrdering, RampKind};
use fockfield::C64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use serde_json::Value;

use crate::error::CliError;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum CommandKind {
    #[default]
    Verify,
    Series,
    Modes,
    Transition,
    DoubleSlit,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum StateKind {
    Coherent,
    Number,
    Displaced,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Observable {
    #[default]
    Electric,
    Magnetic,
    /// The electric field evolved under the displaced Hamiltonian.
    Perturbed,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Emit {
    Expr,
    Scalar,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    Csv,
    Json,
}

/// A complex number written as `"re,im"`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ComplexPair(pub C64);

impl FromStr for ComplexPair {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (re, im) = s.split_once(',').ok_or_else(|| format!("expected \"re,im\", got {s:?}"))?;
        let parse = |p: &str| {
            p.trim()
                .parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| format!("bad number {p:?} in {s:?}"))
        };
        Ok(Self(C64::new(parse(re)?, parse(im)?)))
    }
}

impl fmt::Display for ComplexPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{}", self.0.re, self.0.im)
    }
}

impl Serialize for ComplexPair {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for ComplexPair {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Scenario {
    pub command: CommandKind,
    pub alpha: ComplexPair,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha_mag: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub theta: Option<f64>,
    pub theta_from_alpha: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub state: Option<StateKind>,
    pub n: u32,
    pub nmax: u32,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dim: Option<usize>,
    pub convention: Convention,
    pub normalize: bool,
    pub observable: Observable,
    pub path: EvalPath,
    pub omega: f64,
    pub c: f64,
    pub eps_tilde: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub z: Option<f64>,
    pub periods: usize,
    pub samples_per_period: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub emit: Option<Emit>,
    pub ramp: RampKind,
    pub duration: f64,
    pub steps_per_period: usize,
    pub slit_separation: f64,
    pub screen_distance: f64,
    pub screen_half_width: f64,
    pub screen_points: usize,
    pub floor: FloorOrdering,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub format: Option<Format>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
}

impl Default for Scenario {
    fn default() -> Self {
        Self {
            command: CommandKind::Verify,
            alpha: ComplexPair(C64::from_polar(0.8, std::f64::consts::PI / 5.0)),
            alpha_mag: None,
            theta: None,
            theta_from_alpha: false,
            state: None,
            n: 0,
            nmax: 3,
            dim: None,
            convention: Convention::Paper,
            normalize: false,
            observable: Observable::Electric,
            path: EvalPath::Auto,
            omega: 1.0,
            c: 1.0,
            eps_tilde: 1.0,
            z: None,
            periods: 1,
            samples_per_period: 64,
            emit: None,
            ramp: RampKind::SmoothCosine,
            duration: 200.0,
            steps_per_period: 256,
            slit_separation: 1.0,
            screen_distance: 1000.0,
            screen_half_width: 6000.0,
            screen_points: 401,
            floor: FloorOrdering::NormalOrdered,
            format: None,
            out: None,
        }
    }
}

impl Scenario {
    /// Accepts a bare scenario or any output document carrying one under `"scenario"`.
    pub fn from_json(text: &str) -> Result<Self, CliError> {
        let v: Value = serde_json::from_str(text).map_err(|e| CliError::Invalid(format!("scenario file: {e}")))?;
        let v = match v {
            Value::Object(mut m) if m.contains_key("scenario") => m.remove("scenario").expect("checked"),
            other => other,
        };
        serde_json::from_value(v).map_err(|e| CliError::Invalid(format!("scenario file: {e}")))
    }

    /// Fills every derived default in, so the result re-runs to the same output
    /// without relying on implicit rules.
    pub fn resolve(mut self) -> Result<Self, CliError> {
        let positive = |name: &str, v: f64| {
            if v.is_finite() && v > 0.0 {
                Ok(())
            } else {
                Err(CliError::Invalid(format!("{name} must be positive, got {v}")))
            }
        };
        positive("omega", self.omega)?;
        positive("c", self.c)?;
        positive("eps_tilde", self.eps_tilde)?;
        if self.theta_from_alpha && self.alpha_mag.is_some() {
            return Err(CliError::Invalid("--theta-from-alpha cannot be combined with --alpha-mag".into()));
        }
        let theta = if self.theta_from_alpha {
            self.alpha.0.arg()
        } else {
            match (self.theta, self.alpha_mag) {
                (Some(t), _) => t,
                (None, Some(_)) => std::f64::consts::PI / 5.0,
                (None, None) => self.alpha.0.arg(),
            }
        };
        if !theta.is_finite() {
            return Err(CliError::Invalid(format!("theta must be finite, got {theta}")));
        }
        if let Some(mag) = self.alpha_mag {
            if !(mag.is_finite() && mag >= 0.0) {
                return Err(CliError::Invalid(format!("alpha magnitude must be >= 0, got {mag}")));
            }
            self.alpha = ComplexPair(C64::from_polar(mag, theta));
        }
        self.theta = Some(theta);
        self.theta_from_alpha = false;
        if self.state.is_none() {
            self.state = Some(match (self.n, self.command) {
                (0, _) => StateKind::Coherent,
                (_, CommandKind::DoubleSlit) => StateKind::Number,
                _ => StateKind::Displaced,
            });
        }
        if self.z.is_none() {
            self.z = Some(std::f64::consts::FRAC_PI_2 * self.c / self.omega);
        }
        if self.emit.is_some() {
            if !matches!(self.command, CommandKind::Series | CommandKind::Modes) {
                return Err(CliError::Invalid("--emit applies to series and modes".into()));
            }
            if self.format == Some(Format::Csv) {
                return Err(CliError::Invalid("--emit writes JSON".into()));
            }
            self.format = Some(Format::Json);
        }
        if self.format.is_none() {
            self.format = Some(match self.command {
                CommandKind::Series | CommandKind::DoubleSlit => Format::Csv,
                _ => Format::Json,
            });
        }
        Ok(self)
    }

    /// `|α|`, exact when given directly.
    pub fn alpha_mag(&self) -> f64 {
        self.alpha_mag.unwrap_or_else(|| self.alpha.0.norm())
    }

    /// The scenario as echoed into outputs: everything but the output path.
    pub fn echo(&self) -> Value {
        let mut s = self.clone();
        s.out = None;
        serde_json::to_value(&s).expect("scenario is plain data")
    }
}
