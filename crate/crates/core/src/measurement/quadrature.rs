//! Globally adaptive Gauss-Kronrod (7/15) quadrature for vector-valued
//! integrands.

use crate::{Error, Result};

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];

const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_18,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_83,
];

// Gauss weights for the odd-indexed Kronrod nodes 1, 3, 5, 7.
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

/// Result of [`integrate`].
#[derive(Clone, Debug, PartialEq)]
pub struct Integral {
    pub value: Vec<f64>,
    /// Sum over subintervals of the max-norm Kronrod-Gauss difference.
    pub error: f64,
    pub evaluations: usize,
}

struct Segment {
    a: f64,
    b: f64,
    value: Vec<f64>,
    error: f64,
}

fn finite(v: Vec<f64>) -> Result<Vec<f64>> {
    if v.iter().all(|x| x.is_finite()) {
        Ok(v)
    } else {
        Err(Error::Quadrature {
            estimate: f64::INFINITY,
            tolerance: 0.0,
        })
    }
}

fn rule<F>(f: &mut F, a: f64, b: f64) -> Result<Segment>
where
    F: FnMut(f64) -> Result<Vec<f64>>,
{
    let (c, h) = (0.5 * (a + b), 0.5 * (b - a));
    let center = finite(f(c)?)?;
    let dim = center.len();
    let mut kronrod: Vec<f64> = center.iter().map(|v| v * WGK[7]).collect();
    let mut gauss: Vec<f64> = center.iter().map(|v| v * WG[3]).collect();
    for k in 0..7 {
        let lo = finite(f(c - h * XGK[k])?)?;
        let hi = finite(f(c + h * XGK[k])?)?;
        if lo.len() != dim || hi.len() != dim {
            return Err(Error::Dimension("integrand changed output length".into()));
        }
        for d in 0..dim {
            let s = lo[d] + hi[d];
            kronrod[d] += WGK[k] * s;
            if k % 2 == 1 {
                gauss[d] += WG[k / 2] * s;
            }
        }
    }
    let error = kronrod
        .iter()
        .zip(&gauss)
        .fold(0.0f64, |m, (k, g)| m.max((k - g).abs() * h.abs()));
    Ok(Segment {
        a,
        b,
        value: kronrod.into_iter().map(|v| v * h).collect(),
        error,
    })
}

/// Integrates `f` over `[a, b]`, bisecting the worst subinterval until the
/// summed error estimate drops below `tol` (absolute, per component).
/// Fails with [`Error::Quadrature`] if `max_segments` is reached first.
pub fn integrate<F>(mut f: F, a: f64, b: f64, tol: f64, max_segments: usize) -> Result<Integral>
where
    F: FnMut(f64) -> Result<Vec<f64>>,
{
    let mut segments = vec![rule(&mut f, a, b)?];
    let mut evaluations = 15;
    loop {
        let error: f64 = segments.iter().map(|s| s.error).sum();
        if error > tol && segments.len() >= max_segments {
            return Err(Error::Quadrature {
                estimate: error,
                tolerance: tol,
            });
        }
        if error <= tol {
            let mut value = vec![0.0; segments[0].value.len()];
            for s in &segments {
                for (v, x) in value.iter_mut().zip(&s.value) {
                    *v += x;
                }
            }
            return Ok(Integral {
                value,
                error,
                evaluations,
            });
        }
        let worst = segments
            .iter()
            .enumerate()
            .fold(0, |w, (i, s)| if s.error > segments[w].error { i } else { w });
        let s = segments.swap_remove(worst);
        let mid = 0.5 * (s.a + s.b);
        segments.push(rule(&mut f, s.a, mid)?);
        segments.push(rule(&mut f, mid, s.b)?);
        evaluations += 30;
    }
}
