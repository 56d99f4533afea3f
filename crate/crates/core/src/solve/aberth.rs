//! Aberth–Ehrlich simultaneous root refinement for dense complex
//! polynomials.
//!
//! All roots are updated together, which gives cubic-like convergence on
//! simple roots and graceful (linear) behavior on clusters. The iteration is
//! fully deterministic: fixed initial configuration, fixed sweep order, and
//! a fixed stopping rule.

use num_complex::Complex64;

const MAX_SWEEPS: usize = 400;
const STEP_TOL: f64 = 1e-14;

/// All complex roots of `sum coeffs[i] x^i`, with multiple roots appearing
/// as repeated (numerically clustered) values. Exact leading zeros must be
/// trimmed by the caller; exact trailing zero coefficients (roots at the
/// origin) are deflated here.
pub fn roots(coeffs: &[Complex64]) -> Vec<Complex64> {
    let mut c: Vec<Complex64> = coeffs.to_vec();
    while c.last().is_some_and(|z| z.norm() == 0.0) {
        c.pop();
    }
    if c.len() <= 1 {
        return Vec::new();
    }

    // Deflate exact zero roots so the iteration never sits on a singular
    // origin cluster it cannot split.
    let mut out = Vec::new();
    let zeros = c.iter().take_while(|z| z.norm() == 0.0).count();
    for _ in 0..zeros {
        out.push(Complex64::new(0.0, 0.0));
    }
    c.drain(..zeros);

    let d = c.len() - 1;
    if d == 0 {
        return out;
    }
    if d == 1 {
        out.push(-c[0] / c[1]);
        return out;
    }

    // Cauchy-style inclusion radius for the initial circle of guesses.
    let lead = c[d].norm();
    let radius = 1.0 + c[..d].iter().map(|z| z.norm() / lead).fold(0.0, f64::max);
    let mut z: Vec<Complex64> = (0..d)
        .map(|k| {
            let theta = 2.0 * std::f64::consts::PI * (k as f64) / (d as f64) + 0.45;
            0.7 * radius * Complex64::new(theta.cos(), theta.sin())
        })
        .collect();

    for _ in 0..MAX_SWEEPS {
        let mut worst = 0.0f64;
        for k in 0..d {
            let (p, dp) = horner_with_derivative(&c, z[k]);
            if p.norm() == 0.0 {
                continue;
            }
            let newton = if dp.norm() > 0.0 {
                p / dp
            } else {
                // Exactly stationary: nudge off the critical point.
                Complex64::new(1e-8, 1e-8)
            };
            let repulsion: Complex64 = (0..d)
                .filter(|&j| j != k)
                .map(|j| {
                    let diff = z[k] - z[j];
                    if diff.norm() > 0.0 {
                        diff.inv()
                    } else {
                        Complex64::new(1e12, 0.0)
                    }
                })
                .sum();
            let denom = Complex64::new(1.0, 0.0) - newton * repulsion;
            let step = if denom.norm() > 1e-300 { newton / denom } else { newton };
            z[k] -= step;
            worst = worst.max(step.norm() / (1.0 + z[k].norm()));
        }
        if worst < STEP_TOL {
            break;
        }
    }

    // A few plain Newton polish steps per root tighten simple roots to
    // machine precision without disturbing clusters.
    for zk in z.iter_mut() {
        for _ in 0..3 {
            let (p, dp) = horner_with_derivative(&c, *zk);
            if dp.norm() == 0.0 {
                break;
            }
            let step = p / dp;
            if step.norm() > 1.0 + zk.norm() {
                break;
            }
            *zk -= step;
        }
    }

    out.extend(z);
    out
}

fn horner_with_derivative(coeffs: &[Complex64], z: Complex64) -> (Complex64, Complex64) {
    let mut p = Complex64::new(0.0, 0.0);
    let mut dp = Complex64::new(0.0, 0.0);
    for c in coeffs.iter().rev() {
        dp = dp * z + p;
        p = p * z + *c;
    }
    (p, dp)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn sorted_by_re(mut v: Vec<Complex64>) -> Vec<Complex64> {
        v.sort_by(|a, b| a.re.partial_cmp(&b.re).unwrap());
        v
    }

    #[test]
    fn quadratic_with_real_roots() {
        // x^2 - 1.
        let r = sorted_by_re(roots(&[c(-1.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)]));
        assert!((r[0] - c(-1.0, 0.0)).norm() < 1e-12);
        assert!((r[1] - c(1.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn complex_conjugate_pair() {
        // x^2 + 1.
        let r = roots(&[c(1.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)]);
        let mut ims: Vec<f64> = r.iter().map(|z| z.im).collect();
        ims.sort_by(|a, b| a.partial_cmp(b).unwrap());
        assert!((ims[0] + 1.0).abs() < 1e-12 && (ims[1] - 1.0).abs() < 1e-12);
        assert!(r.iter().all(|z| z.re.abs() < 1e-12));
    }

    #[test]
    fn origin_roots_are_deflated_exactly() {
        // x^2 (x - 2).
        let r = sorted_by_re(roots(&[c(0.0, 0.0), c(0.0, 0.0), c(-2.0, 0.0), c(1.0, 0.0)]));
        assert_eq!(r[0], c(0.0, 0.0));
        assert_eq!(r[1], c(0.0, 0.0));
        assert!((r[2] - c(2.0, 0.0)).norm() < 1e-10);
    }

    #[test]
    fn wilkinson_like_spread() {
        // (x-1)(x-2)...(x-6) expanded.
        let mut coeffs = vec![c(1.0, 0.0)];
        for k in 1..=6 {
            let mut next = vec![c(0.0, 0.0); coeffs.len() + 1];
            for (i, a) in coeffs.iter().enumerate() {
                next[i + 1] += *a;
                next[i] -= *a * c(k as f64, 0.0);
            }
            coeffs = next;
        }
        let r = sorted_by_re(roots(&coeffs));
        for (i, root) in r.iter().enumerate() {
            assert!(
                (root - c((i + 1) as f64, 0.0)).norm() < 1e-7,
                "root {i}: {root}"
            );
        }
    }

    #[test]
    fn double_root_clusters_tightly() {
        // (x-1)^2 (x+2) = x^3 - 3x + 2: double roots resolve to ~sqrt(eps).
        let r = sorted_by_re(roots(&[c(2.0, 0.0), c(-3.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)]));
        assert!((r[0] - c(-2.0, 0.0)).norm() < 1e-10);
        assert!((r[1] - c(1.0, 0.0)).norm() < 5e-7);
        assert!((r[2] - c(1.0, 0.0)).norm() < 5e-7);
    }
}
