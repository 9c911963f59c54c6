//! Uniform theory of diffraction for wedges, with the heuristic reflection-weighted
//! coefficients for lossy dielectric faces.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

use num_complex::Complex64;

/// Fresnel integrals C(x) and S(x) with kernel cos/sin(pi t^2 / 2).
pub fn fresnel_integrals(x: f64) -> (f64, f64) {
    let ax = x.abs();
    let (c, s) = if ax < 1.5 {
        fresnel_series(ax)
    } else {
        let w = fresnel_tail(ax);
        (0.5 - w.re, 0.5 - w.im)
    };
    if x < 0.0 {
        (-c, -s)
    } else {
        (c, s)
    }
}

fn fresnel_series(ax: f64) -> (f64, f64) {
    if ax < 1e-150 {
        return (ax, 0.0);
    }
    // alternating power series, C collects even terms, S odd ones
    let fact = FRAC_PI_2 * ax * ax;
    let (mut sum_c, mut sum_s) = (ax, 0.0);
    let mut term = ax;
    let mut sign = 1.0;
    let mut odd = true;
    let mut n = 3.0;
    for k in 1..200 {
        term *= fact / k as f64;
        let contrib = sign * term / n;
        if odd {
            sum_s += contrib;
            sign = -sign;
        } else {
            sum_c += contrib;
        }
        if term / n < 1e-17 * sum_c.abs().max(sum_s.abs()) {
            break;
        }
        odd = !odd;
        n += 2.0;
    }
    (sum_c, sum_s)
}

/// (1/2 - C(x)) + j (1/2 - S(x)) for x >= 1.5, by a continued fraction (modified Lentz).
fn fresnel_tail(ax: f64) -> Complex64 {
    let pix2 = PI * ax * ax;
    let mut b = Complex64::new(1.0, -pix2);
    let mut cc = Complex64::new(1e300, 0.0);
    let mut d = b.inv();
    let mut h = d;
    let mut n = -1.0;
    for _ in 2..300 {
        n += 2.0;
        let a = -n * (n + 1.0);
        b += 4.0;
        d = (d * a + b).inv();
        cc = b + cc.inv() * a;
        let del = cc * d;
        h *= del;
        if (del.re - 1.0).abs() + del.im.abs() < 1e-16 {
            break;
        }
    }
    h *= Complex64::new(ax, -ax);
    Complex64::new(0.5, 0.5) * Complex64::from_polar(1.0, 0.5 * pix2) * h
}

/// Transition function F(X) = 2j sqrt(X) e^{jX} integral_{sqrt X}^inf e^{-j t^2} dt, for X >= 0.
pub fn transition(x: f64) -> Complex64 {
    if x <= 0.0 {
        return Complex64::new(0.0, 0.0);
    }
    let u = (2.0 * x / PI).sqrt();
    // integral_u^inf e^{-j pi t^2 / 2} dt
    let g = if u < 1.5 {
        let (c, s) = fresnel_series(u);
        Complex64::new(0.5 - c, -(0.5 - s))
    } else {
        fresnel_tail(u).conj()
    };
    Complex64::new(0.0, 2.0 * x.sqrt()) * Complex64::from_polar(1.0, x) * (FRAC_PI_2.sqrt() * g)
}

/// Reflection coefficients of a wedge face: (perpendicular/soft, parallel/hard).
pub type FaceReflection = (Complex64, Complex64);

/// Inputs of a single wedge diffraction evaluation.
#[derive(Clone, Copy, Debug)]
pub struct WedgeEvaluation {
    /// Exterior angle over pi.
    pub n: f64,
    /// Angle of the diffracted ray from face 0, radians.
    pub phi: f64,
    /// Angle of the incident ray from face 0, radians.
    pub phi_prime: f64,
    /// Angle between the incident ray and the edge.
    pub beta0: f64,
    /// Wavenumber, rad/m.
    pub k: f64,
    /// Distance parameter L, meters.
    pub l: f64,
}

/// Soft and hard diffraction coefficients. `r0`, `rn` are the face reflection coefficients;
/// (-1, +1) reproduces a perfectly conducting wedge.
pub fn diffraction_coefficients(w: &WedgeEvaluation, r0: FaceReflection, rn: FaceReflection) -> (Complex64, Complex64) {
    let n = w.n;
    let kl = w.k * w.l;
    let term = |kappa: f64| -> Complex64 {
        let eps = kappa - 2.0 * PI * n * (kappa / (2.0 * PI * n)).round();
        if eps.abs() < 1e-12 {
            // limit of cot(eps/2n) F(2kL sin^2(eps/2)) as eps -> 0
            let sgn = if eps < 0.0 { -1.0 } else { 1.0 };
            return Complex64::from_polar(n * (2.0 * PI * kl).sqrt() * sgn, FRAC_PI_4);
        }
        let cot = 1.0 / (eps / (2.0 * n)).tan();
        let h = (0.5 * eps).sin();
        transition(2.0 * kl * h * h) * cot
    };
    let diff = w.phi - w.phi_prime;
    let sum = w.phi + w.phi_prime;
    let incident = term(PI + diff) + term(PI - diff);
    let t0 = term(PI - sum);
    let tn = term(PI + sum);
    let pre = -Complex64::from_polar(1.0, -FRAC_PI_4) / (2.0 * n * (2.0 * PI * w.k).sqrt() * w.beta0.sin());
    let soft = pre * (incident + r0.0 * t0 + rn.0 * tn);
    let hard = pre * (incident + r0.1 * t0 + rn.1 * tn);
    (soft, hard)
}

pub const PEC_FACE: FaceReflection = (Complex64::new(-1.0, 0.0), Complex64::new(1.0, 0.0));

#[cfg(test)]
mod tests {
    use super::*;

    // reference values from an independent Fresnel integral implementation
    const CS_TABLE: [(f64, f64, f64); 9] = [
        (0.1, 0.09999753262708506, 0.0005235895476122108),
        (0.5, 0.4923442258714464, 0.06473243285999929),
        (1.0, 0.779893400376823, 0.4382591473903547),
        (1.49, 0.45458652017763695, 0.7011132249982798),
        (1.51, 0.4361161680360173, 0.693461421915976),
        (2.0, 0.48825340607534073, 0.34341567836369824),
        (3.7, 0.5419456621544875, 0.5749803498874729),
        (10.0, 0.49989869420551575, 0.46816997858488224),
        (55.5, 0.5021942617293249, 0.49470103482275557),
    ];

    const F_TABLE: [(f64, f64, f64); 7] = [
        (1e-3, 0.039594953226235706, 0.03767288695912908),
        (0.1, 0.36810356780048203, 0.23445296229247306),
        (0.3, 0.5717132383007475, 0.27299154656342434),
        (1.0, 0.8095254817474087, 0.23219939005526447),
        (3.0, 0.94724225874107, 0.13257826183062607),
        (10.0, 0.9930411270116264, 0.04835149556165247),
        (100.0, 0.9999250654633629, 0.004998127942624886),
    ];

    #[test]
    fn fresnel_integrals_match_reference() {
        for (x, c, s) in CS_TABLE {
            let (gc, gs) = fresnel_integrals(x);
            assert!((gc - c).abs() < 1e-13, "C({x}) = {gc}, want {c}");
            assert!((gs - s).abs() < 1e-13, "S({x}) = {gs}, want {s}");
            let (nc, ns) = fresnel_integrals(-x);
            assert_eq!((nc, ns), (-gc, -gs));
        }
    }

    #[test]
    fn transition_function_matches_reference_and_limits() {
        for (x, re, im) in F_TABLE {
            let f = transition(x);
            assert!((f.re - re).abs() < 1e-12 && (f.im - im).abs() < 1e-12, "F({x}) = {f}");
        }
        // large argument: 1 + j/(2X) - 3/(4X^2)
        let x = 5e4;
        let f = transition(x);
        let asym = Complex64::new(1.0 - 0.75 / (x * x), 0.5 / x);
        assert!((f - asym).norm() < 1e-12);
        // small argument: sqrt(pi X) e^{j pi/4}
        let x = 1e-10;
        let f = transition(x);
        assert!((f - Complex64::from_polar((PI * x).sqrt(), FRAC_PI_4)).norm() < 1e-9);
    }

    #[test]
    fn half_plane_reduces_to_keller() {
        // knife edge (n = 2), far from both shadow boundaries, large kL
        let k = 473.7;
        let (phi_p, beta0) = (0.6_f64, 1.2_f64);
        let pre = -Complex64::from_polar(1.0, -FRAC_PI_4) / (2.0 * (2.0 * PI * k).sqrt() * beta0.sin());
        for phi in [2.4, 3.0, 4.5] {
            let w = WedgeEvaluation { n: 2.0, phi, phi_prime: phi_p, beta0, k, l: 1e4 };
            let (soft, hard) = diffraction_coefficients(&w, PEC_FACE, PEC_FACE);
            let a = 1.0 / ((phi - phi_p) / 2.0).cos();
            let b = 1.0 / ((phi + phi_p) / 2.0).cos();
            let keller_soft = pre * (a - b);
            let keller_hard = pre * (a + b);
            assert!((soft - keller_soft).norm() < 1e-3 * keller_soft.norm(), "{phi}");
            assert!((hard - keller_hard).norm() < 1e-3 * keller_hard.norm(), "{phi}");
        }
    }

    #[test]
    fn coefficient_jumps_by_half_across_incident_boundary() {
        // plane wave on a right-angle wedge: D * A -> -+1/2 on either side of phi = phi' + pi
        let k = 473.7;
        let s = 20.0;
        let phi_p = 0.3;
        let at = |phi: f64| {
            let w = WedgeEvaluation { n: 1.5, phi, phi_prime: phi_p, beta0: FRAC_PI_2, k, l: s };
            diffraction_coefficients(&w, PEC_FACE, PEC_FACE).0 / s.sqrt()
        };
        let lit = at(PI + phi_p - 1e-13);
        let shadow = at(PI + phi_p + 1e-13);
        assert!((shadow - lit - Complex64::new(1.0, 0.0)).norm() < 1e-3);
    }
}
