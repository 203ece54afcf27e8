use serde::Serialize;

use crate::hilbert::{coherent_ket, coherent_overlap, CoherentLabel, HybridState, RegisterLayout};
use crate::{Error, Ket, Matrix, Result, C64};

/// Overlap magnitudes at or above `1 - DEGENERACY_TOL` have no usable
/// two-dimensional span.
pub const DEGENERACY_TOL: f64 = 1e-12;

/// Orthonormal basis `{|ψ₊>, |ψ₋>}` of `span{|α>, |β>}`:
///
/// ```text
/// |ψ₊> = (e^{-iφ/2} cos θ |α> - e^{iφ/2} sin θ |β>) / cos 2θ
/// |ψ₋> = (-e^{-iφ/2} sin θ |α> + e^{iφ/2} cos θ |β>) / cos 2θ
/// ```
///
/// with `sin 2θ = |<α|β>|` and `e^{-iφ} = <α|β>/|<α|β>|`. The normalizing
/// factor is `1/cos 2θ`; `1/√cos 2θ` would leave the vectors with norm
/// `√cos 2θ`.
#[derive(Clone, Debug)]
pub struct CoherentQubitBasis {
    pub alpha: CoherentLabel,
    pub beta: CoherentLabel,
    pub theta: f64,
    pub phi: f64,
    pub n_max: usize,
    pub plus: HybridState,
    pub minus: HybridState,
}

impl CoherentQubitBasis {
    pub fn new(alpha: CoherentLabel, beta: CoherentLabel, n_max: usize) -> Result<Self> {
        let overlap = coherent_overlap(alpha.0, beta.0);
        let mag = overlap.norm();
        if mag >= 1.0 - DEGENERACY_TOL {
            return Err(Error::DegenerateBasis(mag));
        }
        let theta = 0.5 * mag.asin();
        let phi = if mag > 0.0 { -overlap.arg() } else { 0.0 };
        let a = coherent_ket(alpha.0, n_max);
        let b = coherent_ket(beta.0, n_max);
        let (c, s) = (theta.cos(), theta.sin());
        let (em, ep) = (C64::from_polar(1.0, -phi / 2.0), C64::from_polar(1.0, phi / 2.0));
        let norm = C64::new((2.0 * theta).cos(), 0.0);
        let plus = (&a * (em * c) - &b * (ep * s)) / norm;
        let minus = (&b * (ep * c) - &a * (em * s)) / norm;
        Ok(Self {
            alpha,
            beta,
            theta,
            phi,
            n_max,
            plus: HybridState::mode(plus),
            minus: HybridState::mode(minus),
        })
    }

    /// `sin 2θ = |<α|β>|`.
    pub fn sin_two_theta(&self) -> f64 {
        (2.0 * self.theta).sin()
    }

    /// `cos 2θ`, the normalization constant of the basis.
    pub fn normalization(&self) -> f64 {
        (2.0 * self.theta).cos()
    }

    /// Gram matrix of `(|ψ₊>, |ψ₋>)`.
    pub fn gram(&self) -> Matrix {
        let v = [self.plus.amplitudes(), self.minus.amplitudes()];
        Matrix::from_fn(2, 2, |i, j| v[i].dotc(v[j]))
    }

    /// `|α>` and `|β>` rebuilt from the basis:
    /// `|α> = e^{iφ/2}(cos θ|ψ₊> + sin θ|ψ₋>)`,
    /// `|β> = e^{-iφ/2}(sin θ|ψ₊> + cos θ|ψ₋>)`.
    pub fn reconstruct(&self) -> (HybridState, HybridState) {
        let (c, s) = (self.theta.cos(), self.theta.sin());
        let (p, m) = (self.plus.amplitudes(), self.minus.amplitudes());
        let ep = C64::from_polar(1.0, self.phi / 2.0);
        let a = (p * C64::new(c, 0.0) + m * C64::new(s, 0.0)) * ep;
        let b = (p * C64::new(s, 0.0) + m * C64::new(c, 0.0)) * ep.conj();
        (HybridState::mode(a), HybridState::mode(b))
    }

    pub fn span(&self) -> OrthonormalSpan {
        OrthonormalSpan {
            vectors: vec![self.plus.amplitudes().clone(), self.minus.amplitudes().clone()],
            n_max: self.n_max,
        }
    }
}

/// Orthonormal basis of the span of several coherent states on one mode.
#[derive(Clone, Debug)]
pub struct OrthonormalSpan {
    vectors: Vec<Ket>,
    n_max: usize,
}

impl OrthonormalSpan {
    /// Left singular vectors of the matrix of truncated coherent kets, kept
    /// down to `rank_tol` relative to the largest singular value.
    pub fn from_labels(labels: &[CoherentLabel], n_max: usize, rank_tol: f64) -> Result<Self> {
        if labels.is_empty() {
            return Err(Error::Parameter("empty coherent label set".into()));
        }
        let kets: Vec<Ket> = labels.iter().map(|l| coherent_ket(l.0, n_max)).collect();
        let svd = Matrix::from_columns(&kets).svd(true, false);
        let u = svd.u.expect("requested U");
        let smax = svd.singular_values.max();
        let vectors = svd
            .singular_values
            .iter()
            .enumerate()
            .filter(|(_, &s)| s > rank_tol * smax)
            .map(|(k, _)| u.column(k).into_owned())
            .collect();
        Ok(Self { vectors, n_max })
    }

    pub fn dim(&self) -> usize {
        self.vectors.len()
    }

    pub fn vectors(&self) -> &[Ket] {
        &self.vectors
    }
}

/// A state rewritten in span coordinates, with the discarded weight.
#[derive(Clone, Debug, Serialize)]
pub struct Embedding {
    #[serde(skip)]
    pub state: HybridState,
    pub residual: f64,
}

/// Replaces each listed mode by its coordinates in the given span; the
/// embedded mode keeps its position and gets cutoff `dim - 1`. The result is
/// not renormalized; `residual` is the relative weight lost.
pub fn embed_modes(state: &HybridState, spans: &[(usize, &OrthonormalSpan)]) -> Result<Embedding> {
    let total = state.norm_sqr();
    if total == 0.0 {
        return Err(Error::ZeroNorm);
    }
    let mut current = state.clone();
    for (mode, span) in spans {
        current = embed_one(&current, *mode, span)?;
    }
    let residual = (1.0 - current.norm_sqr() / total).max(0.0);
    Ok(Embedding {
        state: current,
        residual,
    })
}

fn embed_one(state: &HybridState, mode: usize, span: &OrthonormalSpan) -> Result<HybridState> {
    let layout = state.layout();
    layout.check(mode)?;
    if layout.is_qubit(mode) || layout.subsystem_dim(mode)? != span.n_max + 1 {
        return Err(Error::Dimension(format!(
            "span of cutoff {} does not match subsystem {mode}",
            span.n_max
        )));
    }
    let q = layout.qubit_count();
    let mut cutoffs = layout.mode_cutoffs().to_vec();
    cutoffs[mode - q] = span.dim() - 1;
    let out_layout = RegisterLayout::new(q, cutoffs);
    let mut amplitudes = Ket::zeros(out_layout.dim());
    for (k, v) in span.vectors.iter().enumerate() {
        let c = state.contract(mode, v)?;
        for (i, a) in c.amplitudes().iter().enumerate() {
            let mut digits = c.layout().digits_of(i)?;
            digits.insert(mode, k);
            amplitudes[out_layout.index_of(&digits)?] = *a;
        }
    }
    HybridState::new(out_layout, amplitudes)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hilbert::default_cutoff;

    #[test]
    fn opposite_real_pair_angles() {
        let b = CoherentQubitBasis::new(2.0.into(), (-2.0).into(), default_cutoff(2.0)).unwrap();
        assert!((b.sin_two_theta() - (-8.0f64).exp()).abs() < 1e-15);
        assert_eq!(b.phi, 0.0);
    }

    #[test]
    fn printed_square_root_normalization_fails_gram_test() {
        // Same combination as the basis, scaled by 1/√cos 2θ instead.
        let (alpha, beta) = (CoherentLabel::from(0.5), CoherentLabel::from(-0.5));
        let b = CoherentQubitBasis::new(alpha, beta, default_cutoff(0.5)).unwrap();
        let rescale = b.normalization().sqrt();
        let v = b.plus.amplitudes() * C64::new(rescale, 0.0);
        assert!((v.norm_squared() - 1.0).abs() > 0.1);
        let g = b.gram();
        assert!((g - Matrix::identity(2, 2)).iter().all(|z| z.norm() < 1e-8));
    }

    #[test]
    fn near_orthogonal_pair_is_its_own_basis() {
        let n = default_cutoff(3.0);
        let b = CoherentQubitBasis::new(3.0.into(), (-3.0).into(), n).unwrap();
        assert!((b.theta - (-18.0f64).exp() / 2.0).abs() < 1e-15);
        let a = HybridState::mode(coherent_ket(C64::new(3.0, 0.0), n));
        assert!(b.plus.fidelity(&a).unwrap() > 1.0 - 1e-12);
    }

    #[test]
    fn degenerate_pair_is_rejected() {
        let r = CoherentQubitBasis::new(1.0.into(), 1.0.into(), 20);
        assert!(matches!(r, Err(Error::DegenerateBasis(_))));
    }

    #[test]
    fn span_rank_drops_for_coincident_labels() {
        let s = OrthonormalSpan::from_labels(&[1.0.into(), 1.0.into(), (-1.0).into()], 20, 1e-7).unwrap();
        assert_eq!(s.dim(), 2);
    }

    #[test]
    fn embedding_preserves_in_span_states() {
        let n = default_cutoff(1.0);
        let b = CoherentQubitBasis::new(CoherentLabel::new(0.0, 1.0), CoherentLabel::new(0.0, -1.0), n).unwrap();
        let s = HybridState::excited().tensor(&HybridState::mode(coherent_ket(C64::new(0.0, 1.0), n)));
        let e = embed_modes(&s, &[(1, &b.span())]).unwrap();
        assert!(e.residual < 1e-10);
        assert_eq!(e.state.layout(), &RegisterLayout::new(1, vec![1]));
    }
}
