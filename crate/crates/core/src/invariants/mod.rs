//! Signature, ω-signatures and the linear saddle invariant framework.
//!
//! Convention: `σ = sign(V + Vᵀ)`, so the positive trefoil has signature −2.

pub mod inertia;

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use nalgebra::{Complex, DMatrix};
use num_rational::Ratio;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::braid::{mirror_braid, BraidWord};
use crate::matrix::IntMatrix;
use crate::seifert::{genus_data, seifert_matrix};
use inertia::{default_tolerance, inertia_hermitian, inertia_symmetric_exact, Inertia};

/// Sign convention string reported alongside computed values.
pub const CONVENTION: &str = "V+Vt, trefoil=-2";

#[derive(Debug, Error, Clone, PartialEq)]
pub enum InvariantError {
    #[error("matrix is not symmetric")]
    NotSymmetric,
    #[error("matrix is not square")]
    NotSquare,
    #[error("matrix is not Hermitian within tolerance")]
    NotHermitian,
    #[error("tolerance must be positive, got {0}")]
    BadTolerance(f64),
    #[error("invalid θ {0:?}: expected a rational P/Q in [0,1)")]
    BadTheta(String),
    #[error("invariant {0} is not additive")]
    NotAdditive(String),
    #[error("evaluation failed: {0}")]
    Evaluation(String),
}

/// A rational angle θ ∈ [0,1); ω = e^{2πiθ}.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct Theta(Ratio<i64>);

impl Theta {
    pub fn new(num: i64, den: i64) -> Result<Theta, InvariantError> {
        if den <= 0 || num < 0 || num >= den {
            return Err(InvariantError::BadTheta(format!("{num}/{den}")));
        }
        Ok(Theta(Ratio::new(num, den)))
    }

    pub fn half() -> Theta {
        Theta(Ratio::new(1, 2))
    }

    pub fn ratio(self) -> Ratio<i64> {
        self.0
    }

    pub fn as_f64(self) -> f64 {
        *self.0.numer() as f64 / *self.0.denom() as f64
    }

    pub fn omega(self) -> Complex<f64> {
        let angle = 2.0 * std::f64::consts::PI * self.as_f64();
        Complex::new(angle.cos(), angle.sin())
    }
}

impl FromStr for Theta {
    type Err = InvariantError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || InvariantError::BadTheta(s.to_string());
        let t = s.trim();
        let (p, q) = match t.split_once('/') {
            Some((p, q)) => (p.trim().parse::<i64>().map_err(|_| bad())?, q.trim().parse::<i64>().map_err(|_| bad())?),
            None => (t.parse::<i64>().map_err(|_| bad())?, 1),
        };
        Theta::new(p, q).map_err(|_| bad())
    }
}

impl fmt::Display for Theta {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if *self.0.denom() == 1 {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl TryFrom<String> for Theta {
    type Error = InvariantError;
    fn try_from(s: String) -> Result<Self, Self::Error> {
        s.parse()
    }
}

impl From<Theta> for String {
    fn from(t: Theta) -> String {
        t.to_string()
    }
}

pub fn signature_inertia(b: &BraidWord) -> Inertia {
    let v = seifert_matrix(b).matrix;
    inertia_symmetric_exact(&v.plus_transpose(1)).expect("V + Vᵀ is symmetric")
}

pub fn signature(b: &BraidWord) -> i64 {
    signature_inertia(b).signature()
}

/// `(1−ω)V + (1−ω̄)Vᵀ`.
pub fn omega_matrix(v: &IntMatrix, theta: Theta) -> DMatrix<Complex<f64>> {
    let n = v.dim();
    let one = Complex::new(1.0, 0.0);
    let w = theta.omega();
    let (a, b) = (one - w, one - w.conj());
    DMatrix::from_fn(n, n, |i, j| a * v.get(i, j) as f64 + b * v.get(j, i) as f64)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OmegaSignature {
    pub value: i64,
    pub inertia: Inertia,
}

impl OmegaSignature {
    pub fn nullity(&self) -> usize {
        self.inertia.zeros
    }

    /// Set when some eigenvalue fell in the ambiguity band.
    pub fn warning(&self) -> bool {
        self.inertia.ambiguous > 0
    }
}

pub fn omega_signature_of_matrix(v: &IntMatrix, theta: Theta) -> OmegaSignature {
    let m = omega_matrix(v, theta);
    let inertia = inertia_hermitian(&m, default_tolerance(&m)).expect("omega matrix is Hermitian by construction");
    OmegaSignature { value: inertia.signature(), inertia }
}

pub fn omega_signature(b: &BraidWord, theta: Theta) -> OmegaSignature {
    omega_signature_of_matrix(&seifert_matrix(b).matrix, theta)
}

/// The unique l with (l−1)/n ≤ θ < l/n.
pub fn l_theta(n: i64, theta: Theta) -> i64 {
    let t = theta.ratio() * Ratio::from_integer(n);
    t.floor().to_integer() + 1
}

/// Closed-form estimate of σ_ω(T(n,p)) and its error half-width 2n.
///
/// The estimate is stated for the opposite sign convention: with ours,
/// `σ_ω(T(n,p)) ≈ −center`.
pub fn torus_omega_estimate(n: i64, p: i64, theta: Theta) -> (Ratio<i64>, i64) {
    let l = l_theta(n, theta);
    let t = theta.ratio();
    let r = |v: i64| Ratio::from_integer(v);
    let center = r(2 * p) * t * r(n + 1 - 2 * l) + Ratio::new(2 * p, n) * r(l * (l - 1));
    (center, 2 * n)
}

/// Global sign relating the closed-form estimate to our convention, fixed on T(2,3).
pub fn calibrated_sign() -> i64 {
    let trefoil = crate::braid::torus_braid(2, 3).expect("valid family");
    let (center, _) = torus_omega_estimate(2, 3, Theta::half());
    let sigma = signature(&trefoil);
    if (sigma > 0) == (center > Ratio::from_integer(0)) {
        1
    } else {
        -1
    }
}

/// `4θ(1−θ)`, the predicted ratio σ_ω/σ.
pub fn alpha_ratio(theta: Theta) -> Ratio<i64> {
    let t = theta.ratio();
    Ratio::from_integer(4) * t * (Ratio::from_integer(1) - t)
}

pub type Evaluator = Arc<dyn Fn(&BraidWord) -> Result<f64, InvariantError> + Send + Sync>;

/// A named link invariant with its saddle-move constant.
#[derive(Clone)]
pub struct InvariantDescriptor {
    pub name: String,
    /// Constant used by the asymptotic machinery (tested value).
    pub saddle_constant: f64,
    /// Bound asserted by the property suite.
    pub asserted_bound: f64,
    pub unknot_value: f64,
    pub additive: bool,
    pub evaluator: Evaluator,
}

impl fmt::Debug for InvariantDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("InvariantDescriptor")
            .field("name", &self.name)
            .field("saddle_constant", &self.saddle_constant)
            .field("asserted_bound", &self.asserted_bound)
            .field("unknot_value", &self.unknot_value)
            .field("additive", &self.additive)
            .finish()
    }
}

impl InvariantDescriptor {
    pub fn evaluate(&self, b: &BraidWord) -> Result<f64, InvariantError> {
        (self.evaluator)(b)
    }

    pub fn is_normalized(&self) -> bool {
        self.saddle_constant == 1.0 && self.unknot_value == 0.0
    }

    pub fn signature() -> InvariantDescriptor {
        InvariantDescriptor {
            name: "signature".into(),
            saddle_constant: 1.0,
            asserted_bound: 1.0,
            unknot_value: 0.0,
            additive: true,
            evaluator: Arc::new(|b| Ok(signature(b) as f64)),
        }
    }

    pub fn omega_signature(theta: Theta) -> InvariantDescriptor {
        InvariantDescriptor {
            name: format!("omega_signature({theta})"),
            saddle_constant: 1.0,
            asserted_bound: 2.0,
            unknot_value: 0.0,
            additive: true,
            evaluator: Arc::new(move |b| {
                let s = omega_signature(b, theta);
                if s.warning() {
                    log::warn!("ambiguous eigenvalues in σ_ω({theta}) of {b}");
                }
                Ok(s.value as f64)
            }),
        }
    }

    pub fn slice_genus() -> InvariantDescriptor {
        InvariantDescriptor {
            name: "slice_genus_positive".into(),
            saddle_constant: 1.0,
            asserted_bound: 1.0,
            unknot_value: 0.0,
            additive: false,
            evaluator: Arc::new(|b| {
                let g = genus_data(b).slice_genus.value();
                Ok(*g.numer() as f64 / *g.denom() as f64)
            }),
        }
    }

    /// The same invariant evaluated on mirror images.
    pub fn mirrored(&self) -> InvariantDescriptor {
        let inner = self.evaluator.clone();
        InvariantDescriptor {
            name: format!("mirror({})", self.name),
            evaluator: Arc::new(move |b| inner(&mirror_braid(b))),
            ..self.clone()
        }
    }

    /// The zero invariant; useful as a sanity baseline.
    pub fn zero() -> InvariantDescriptor {
        InvariantDescriptor {
            name: "zero".into(),
            saddle_constant: 1.0,
            asserted_bound: 0.0,
            unknot_value: 0.0,
            additive: true,
            evaluator: Arc::new(|_| Ok(0.0)),
        }
    }
}

pub fn registry() -> Vec<InvariantDescriptor> {
    let mut out = vec![InvariantDescriptor::signature()];
    for (p, q) in [(1, 3), (1, 4), (2, 5)] {
        out.push(InvariantDescriptor::omega_signature(Theta::new(p, q).expect("valid θ")));
    }
    out.push(InvariantDescriptor::slice_genus());
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::braid::torus_braid;

    fn th(s: &str) -> Theta {
        s.parse().unwrap()
    }

    #[test]
    fn theta_parsing() {
        assert_eq!(th("2/4"), Theta::half());
        assert_eq!(th("0").to_string(), "0");
        assert!("1".parse::<Theta>().is_err());
        assert!("1/0".parse::<Theta>().is_err());
        assert!("-1/3".parse::<Theta>().is_err());
        assert!("0.5".parse::<Theta>().is_err());
    }

    #[test]
    fn l_theta_examples() {
        assert_eq!(l_theta(5, th("1/3")), 2);
        assert_eq!(l_theta(7, th("0")), 1);
        assert_eq!(l_theta(4, th("3/4")), 4);
        assert_eq!(l_theta(6, th("1/3")), 3);
    }

    #[test]
    fn estimate_examples() {
        assert_eq!(torus_omega_estimate(6, 6, th("1/3")), (Ratio::from_integer(16), 12));
        assert_eq!(torus_omega_estimate(9, 4, th("0")).0, Ratio::from_integer(0));
        assert_eq!(calibrated_sign(), -1);
    }

    #[test]
    fn alpha_examples() {
        assert_eq!(alpha_ratio(Theta::half()), Ratio::from_integer(1));
        assert_eq!(alpha_ratio(th("0")), Ratio::from_integer(0));
        assert_eq!(alpha_ratio(th("1/3")), Ratio::new(8, 9));
    }

    #[test]
    fn trefoil_values() {
        let t = torus_braid(2, 3).unwrap();
        assert_eq!(signature(&t), -2);
        assert_eq!(omega_signature(&t, th("1/3")).value, -2);
        let zero = omega_signature(&t, th("0"));
        assert_eq!((zero.value, zero.nullity()), (0, 2));
    }

    #[test]
    fn registry_contents() {
        let r = registry();
        assert!(r[0].additive && r[0].is_normalized());
        assert!(r.iter().any(|d| d.name == "omega_signature(1/3)" && d.asserted_bound == 2.0));
        assert!(!r.iter().find(|d| d.name.starts_with("slice")).unwrap().additive);
    }
}
