// Independent oracles: closed forms and brute-force integrals written
// without the library's own routines.
#![allow(dead_code)]

use crosskerr::{HybridState, Ket, C64};

pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

/// `ceil(|α|² + 6|α| + 10)`.
pub fn cutoff(magnitude: f64) -> usize {
    (magnitude * magnitude + 6.0 * magnitude + 10.0).ceil() as usize
}

/// Fock amplitudes `e^{-|α|²/2} αⁿ/√n!` by recurrence.
pub fn coherent(alpha: C64, n_max: usize) -> Ket {
    let mut v = Ket::zeros(n_max + 1);
    let mut term = c((-alpha.norm_sqr() / 2.0).exp(), 0.0);
    for n in 0..=n_max {
        v[n] = term;
        term = term * alpha / ((n + 1) as f64).sqrt();
    }
    v
}

pub fn mode(alpha: C64, n_max: usize) -> HybridState {
    HybridState::mode(coherent(alpha, n_max))
}

/// `<a|b> = exp(-|a|²/2 - |b|²/2 + a* b)`.
pub fn overlap(a: C64, b: C64) -> C64 {
    (-(a.norm_sqr() + b.norm_sqr()) / 2.0 + a.conj() * b).exp()
}

/// Entropy in bits of a probability vector (normalized here).
pub fn shannon(p: &[f64]) -> f64 {
    let total: f64 = p.iter().sum();
    p.iter()
        .map(|&x| x / total)
        .filter(|&x| x > 0.0)
        .map(|x| -x * x.log2())
        .sum()
}

/// Entanglement of `|a,a> + |-a,-a>` from its even/odd cat Schmidt form:
/// weights `∝ (1 ± e^{-2|a|²})²`.
pub fn even_ecs_entropy(a: f64) -> f64 {
    let e = (-2.0 * a * a).exp();
    shannon(&[(1.0 + e).powi(2), (1.0 - e).powi(2)])
}

/// `<x|M|y>` for `M = ∫ G(γ)|γ><γ| dγ` over real γ, Gaussian of variance
/// `width` centered on `chi`; composite Simpson rule.
pub fn gaussian_effect(x: C64, y: C64, chi: f64, width: f64) -> C64 {
    let kernel = |g: f64| overlap(x, c(g, 0.0)) * overlap(c(g, 0.0), y);
    if width == 0.0 {
        return kernel(chi);
    }
    let sd = width.sqrt();
    let (lo, hi) = (chi - 12.0 * sd, chi + 12.0 * sd);
    let steps = 4000;
    let h = (hi - lo) / steps as f64;
    let mut sum = c(0.0, 0.0);
    for k in 0..=steps {
        let g = lo + k as f64 * h;
        let w = if k == 0 || k == steps {
            1.0
        } else if k % 2 == 1 {
            4.0
        } else {
            2.0
        };
        let density = (-(g - chi).powi(2) / (2.0 * width)).exp() / (2.0 * std::f64::consts::PI * width).sqrt();
        sum += kernel(g) * (w * density);
    }
    sum * (h / 3.0)
}

/// Fidelity with `(|ge> + |eg>)/√2` of the two atoms after reciprocation of
/// `|-iα,-iβ> - |iα,iβ>` with a Gaussian field measurement centered on
/// `(α, β)`, from the eight coherent-product terms of the post-gate state.
///
/// Gates: atom 1 on mode a with `|g,μ> -> |g,-iμ>`, `|e,μ> -> i|e,iμ>`;
/// atom 2 on mode b with `|g,ν> -> |g,iν>`, `|e,ν> -> -i|e,-iν>`.
pub fn reciprocation_fidelity(alpha: f64, beta: f64, width: f64) -> f64 {
    let (p1, p2) = reciprocation_weights(alpha, beta, width);
    p2 / (p1 + p2)
}

/// `(<φ₋|ρ|φ₋>, <ψ₊|ρ|ψ₊>)` for the unnormalized conditioned operator built
/// from unit-weight coherent terms (see [`reciprocation_fidelity`]).
pub fn reciprocation_weights(alpha: f64, beta: f64, width: f64) -> (f64, f64) {
    let i = c(0.0, 1.0);
    let one = c(1.0, 0.0);
    let atom1 = [(one, -i), (i, i)];
    let atom2 = [(one, i), (-i, -i)];
    let inputs = [(one, c(0.0, -alpha), c(0.0, -beta)), (-one, c(0.0, alpha), c(0.0, beta))];
    // (qubit index 2*q1+q2, coefficient, μ, ν)
    let mut terms = Vec::new();
    for (q1, &(f1, r1)) in atom1.iter().enumerate() {
        for (q2, &(f2, r2)) in atom2.iter().enumerate() {
            for &(w, mu, nu) in &inputs {
                terms.push((2 * q1 + q2, w * f1 * f2, r1 * mu, r2 * nu));
            }
        }
    }
    let mut rho = [[c(0.0, 0.0); 4]; 4];
    for &(k, ck, mu, nu) in &terms {
        for &(l, cl, mu2, nu2) in &terms {
            rho[k][l] += ck * cl.conj() * gaussian_effect(mu2, mu, alpha, width) * gaussian_effect(nu2, nu, beta, width);
        }
    }
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let weight = |v: [f64; 4]| {
        let mut f = c(0.0, 0.0);
        for k in 0..4 {
            for l in 0..4 {
                f += rho[k][l] * v[k] * v[l];
            }
        }
        f.re
    };
    (weight([s, 0.0, 0.0, -s]), weight([0.0, s, s, 0.0]))
}
