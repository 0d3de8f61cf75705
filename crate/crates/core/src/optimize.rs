//! One-dimensional minimization and the arctangent least-squares fit.

/// Golden-section search for the minimizer of a unimodal `f` on [a, b].
/// Stops when the bracket is narrower than `tol·(1 + |x|)`.
///
/// With plain `f64` objectives the minimizer is only resolved to about
/// sqrt(ε) relative; return a higher-precision ordered value to do better.
pub fn golden_section<T: PartialOrd, F: Fn(f64) -> T>(
    f: F,
    mut a: f64,
    mut b: f64,
    tol: f64,
) -> f64 {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    for _ in 0..500 {
        if (b - a).abs() <= tol * (1.0 + 0.5 * (a + b).abs()) {
            break;
        }
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    0.5 * (a + b)
}

/// Result of fitting y ≈ a·arctan(b·x).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ArctanFit {
    pub a: f64,
    pub b: f64,
    pub r_squared: f64,
}

/// Least-squares fit of `a·arctan(b·x)`. For fixed b the optimal a is
/// linear, so only b is searched: a log grid brackets it, golden section
/// refines it.
pub fn fit_arctan(xs: &[f64], ys: &[f64]) -> ArctanFit {
    assert_eq!(xs.len(), ys.len());
    let amp = |b: f64| {
        let (mut num, mut den) = (0.0, 0.0);
        for (&x, &y) in xs.iter().zip(ys) {
            let t = (b * x).atan();
            num += t * y;
            den += t * t;
        }
        if den > 0.0 {
            num / den
        } else {
            0.0
        }
    };
    let sse = |b: f64| {
        let a = amp(b);
        xs.iter()
            .zip(ys)
            .map(|(&x, &y)| (y - a * (b * x).atan()).powi(2))
            .sum::<f64>()
    };
    let lb = |t: f64| 10f64.powf(t);
    let (lo, hi, steps) = (-6.0, 6.0, 241);
    let dt = (hi - lo) / (steps - 1) as f64;
    let best = (0..steps)
        .map(|i| lo + i as f64 * dt)
        .min_by(|p, q| sse(lb(*p)).total_cmp(&sse(lb(*q))))
        .unwrap();
    let t = golden_section(|t| sse(lb(t)), best - dt, best + dt, 1e-12);
    let b = lb(t);
    let a = amp(b);
    let mean = ys.iter().sum::<f64>() / ys.len() as f64;
    let sst: f64 = ys.iter().map(|y| (y - mean).powi(2)).sum();
    ArctanFit {
        a,
        b,
        r_squared: 1.0 - sse(b) / sst,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn golden_finds_parabola_min() {
        let x = golden_section(|x| (x - 1.234).powi(2) + 3.0, -10.0, 10.0, 1e-12);
        assert!((x - 1.234).abs() < 1e-7);
    }

    #[test]
    fn recovers_exact_arctan() {
        let xs: Vec<f64> = (1..=100).map(f64::from).collect();
        let ys: Vec<f64> = xs.iter().map(|x| 0.7 * (0.05 * x).atan()).collect();
        let fit = fit_arctan(&xs, &ys);
        assert!(
            (fit.a - 0.7).abs() < 1e-6 && (fit.b - 0.05).abs() < 1e-7,
            "{fit:?}"
        );
        assert!(fit.r_squared > 1.0 - 1e-12);
    }
}
