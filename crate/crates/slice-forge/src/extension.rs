//! The analytic engine: representation formula, two-unit stem samples, their
//! cap limit, pointwise global extension on hinged domains, spherical value
//! and derivative from well-separated units, slice derivative, differential
//! checks and finite-difference holomorphy residuals.
//!
//! Tolerances fall in two classes: algebraic identities hold to 1e-10..1e-12,
//! finite-difference quantities scale with the square of the step.

use crate::algebra::{decompose, CPoint, CQuaternion, Quaternion, Unit};
use crate::domains::AxialDomain;
use crate::error::{Error, Result};
use crate::slicefun::{Backend, SliceFunctionHandle, SphericalData};

/// Units closer than this are treated as coincident.
pub const MIN_UNIT_GAP: f64 = 1e-9;
/// Default cap-agreement tolerance for the single-index limit.
pub const DEFAULT_CAP_TOL: f64 = 1e-8;
/// Default probe count on the cap circle.
pub const CAP_PROBES: usize = 8;

/// The two-unit representation value at alpha + beta I from the slice values
/// fJ = f(alpha + beta J) and fK = f(alpha + beta K):
/// (J - K)^{-1} [J fJ - K fK] + I (J - K)^{-1} [fJ - fK].
pub fn rep_formula(
    f_j: Quaternion,
    f_k: Quaternion,
    j: Unit,
    k: Unit,
    i: Unit,
) -> Result<Quaternion> {
    let (jq, kq) = (j.quaternion(), k.quaternion());
    let diff = jq - kq;
    if diff.abs() <= MIN_UNIT_GAP {
        return Err(Error::CoincidentUnits(diff.abs()));
    }
    let inv = diff.inverse()?;
    Ok(inv * (jq * f_j - kq * f_k) + i.quaternion() * (inv * (f_j - f_k)))
}

/// The two-unit stem sample: for beta >= 0,
/// (J - K)^{-1} [J f(a + bJ) - K f(a + bK)] + imath (J - K)^{-1} [f(a+bJ) - f(a+bK)];
/// for beta < 0 the bar-reflected value at the conjugate point, so the output
/// is a stem by construction.
pub fn stem_double_index(
    f: &SliceFunctionHandle,
    j: Unit,
    k: Unit,
    z: CPoint,
) -> Result<CQuaternion> {
    let (jq, kq) = (j.quaternion(), k.quaternion());
    let diff = jq - kq;
    if diff.abs() <= MIN_UNIT_GAP {
        return Err(Error::CoincidentUnits(diff.abs()));
    }
    if z.beta < 0.0 {
        return Ok(stem_double_index(f, j, k, z.conj())?.bar());
    }
    let xj = j.phi(z);
    let xk = k.phi(z);
    if !f.contains(xj) || !f.contains(xk) {
        return Err(Error::OutsideDJK);
    }
    let fj = f.eval_unrestricted(xj)?;
    let fk = f.eval_unrestricted(xk)?;
    let inv = diff.inverse()?;
    Ok(CQuaternion::new(
        inv * (jq * fj - kq * fk),
        inv * (fj - fk),
    ))
}

/// Result of probing the cap limit of the two-unit stem samples around a
/// fixed unit.
#[derive(Debug, Clone, Copy)]
pub struct SingleIndexResult {
    pub value: CQuaternion,
    /// Largest pairwise disagreement among the probes.
    pub cap_spread: f64,
    pub epsilon_used: f64,
}

/// Approximates the cap limit of K -> J of the two-unit stem samples by
/// probing units on the epsilon-circle around J. The probe radius shrinks
/// automatically while probes fall outside the domain. A spread beyond `tol`
/// signals that f is not locally a slice function near the point.
pub fn stem_single_index(
    f: &SliceFunctionHandle,
    j: Unit,
    z: CPoint,
    eps: f64,
    tol: f64,
) -> Result<SingleIndexResult> {
    let zc = if z.beta < 0.0 { z.conj() } else { z };
    if !f.contains(j.phi(zc)) {
        return Err(Error::OutsideDomain);
    }
    let mut eps = eps;
    'shrink: for _ in 0..40 {
        let probes = j.cap_probes(eps, CAP_PROBES);
        let mut values = Vec::with_capacity(CAP_PROBES);
        for k in probes {
            match stem_double_index(f, j, k, zc) {
                Ok(v) => values.push(v),
                Err(Error::OutsideDJK) => {
                    eps *= 0.5;
                    continue 'shrink;
                }
                Err(e) => return Err(e),
            }
        }
        let mut spread = 0.0f64;
        for a in 0..values.len() {
            for b in a + 1..values.len() {
                spread = spread.max((values[a] - values[b]).abs());
            }
        }
        if spread > tol {
            return Err(Error::CapDisagreement { spread, tol });
        }
        let mut mean = CQuaternion::default();
        for v in &values {
            mean = mean + *v;
        }
        let mean = mean * (1.0 / values.len() as f64);
        let value = if z.beta < 0.0 { mean.bar() } else { mean };
        return Ok(SingleIndexResult {
            value,
            cap_spread: spread,
            epsilon_used: eps,
        });
    }
    Err(Error::OutsideDomain)
}

/// Latitude bands of a trace cell: maximal runs of sampled latitudes whose
/// half-slice contains the cell.
fn latitude_bands(dom: &AxialDomain, alpha: f64, beta: f64) -> Vec<(usize, usize)> {
    let mut bands = Vec::new();
    let mut run: Option<(usize, usize)> = None;
    for idx in 0..dom.latitudes().len() {
        if dom.region_at(idx).contains_point(alpha, beta) {
            run = Some(match run {
                None => (idx, idx),
                Some((s, _)) => (s, idx),
            });
        } else if let Some(r) = run.take() {
            bands.push(r);
        }
    }
    if let Some(r) = run {
        bands.push(r);
    }
    bands
}

/// The well-separated unit pair of a latitude band: its extremal sampled
/// latitudes at opposite azimuths, maximizing |J - K| and so minimizing the
/// amplification of (J - K)^{-1}.
fn band_unit_pair(dom: &AxialDomain, band: (usize, usize), azimuth: f64) -> Result<(Unit, Unit)> {
    let lats = dom.latitudes();
    let (lo, hi) = (lats[band.0], lats[band.1]);
    let j = Unit::on_latitude(lo, azimuth);
    let k = Unit::on_latitude(hi, azimuth + std::f64::consts::PI);
    if (j.quaternion() - k.quaternion()).abs() <= MIN_UNIT_GAP {
        return Err(Error::NoSecondUnit);
    }
    Ok((j, k))
}

/// A pointwise extension value together with the disagreement across the
/// available latitude bands and unit pairs.
#[derive(Debug, Clone, Copy)]
pub struct Extended {
    pub value: Quaternion,
    pub consistency_spread: f64,
}

/// Extends f to a point of the symmetric completion of its axial domain by
/// inducing the two-unit stem sample of each latitude band carrying the
/// point's trace. On a hinged domain all choices agree; a spread beyond
/// `tol` reports the inconsistency instead of a value.
pub fn extend_global(f: &SliceFunctionHandle, x: Quaternion, tol: f64) -> Result<Extended> {
    let d = decompose(x);
    let dom = match f.domain.axial() {
        Some(dom) => dom,
        None => {
            // symmetric descriptors coincide with their completion
            if !f.contains(x) {
                return Err(Error::OutsideCompletion);
            }
            return Ok(Extended {
                value: f.eval(x)?,
                consistency_spread: 0.0,
            });
        }
    };
    let completion = dom.symmetric_completion_region();
    if !completion.contains_point(d.alpha, d.beta) {
        return Err(Error::OutsideCompletion);
    }
    let bands = latitude_bands(dom, d.alpha, d.beta);
    let mut values = Vec::new();
    for band in bands {
        for azimuth in [0.0, std::f64::consts::FRAC_PI_2] {
            let (j, k) = band_unit_pair(dom, band, azimuth)?;
            let stem = stem_double_index(f, j, k, d.cpoint())?;
            values.push(d.unit.phi_extended(stem));
        }
    }
    if values.is_empty() {
        return Err(Error::OutsideCompletion);
    }
    let mut spread = 0.0f64;
    for a in 0..values.len() {
        for b in a + 1..values.len() {
            spread = spread.max((values[a] - values[b]).abs());
        }
    }
    if spread > tol {
        return Err(Error::InconsistentExtension { spread, tol });
    }
    Ok(Extended {
        value: values[0],
        consistency_spread: spread,
    })
}

/// Spherical value and derivative from two well-separated units on the
/// point's sphere: value (J - K)^{-1} [J fJ - K fK] and derivative
/// beta^{-1} (J - K)^{-1} [fJ - fK] (absent on the real axis).
pub fn spherical_data_formula(f: &SliceFunctionHandle, x: Quaternion) -> Result<SphericalData> {
    if !f.contains(x) {
        return Err(Error::OutsideDomain);
    }
    let d = decompose(x);
    let (j, k) = match f.domain.axial() {
        Some(dom) => {
            let bands = latitude_bands(dom, d.alpha, d.beta);
            let lat = d.unit.latitude();
            let band = bands
                .iter()
                .find(|&&(lo, hi)| {
                    dom.latitudes()[lo] <= lat + 1e-12 && lat - 1e-12 <= dom.latitudes()[hi]
                })
                .copied()
                .or_else(|| bands.first().copied())
                .ok_or(Error::NoSecondUnit)?;
            band_unit_pair(dom, band, 0.0)?
        }
        None => (
            Unit::on_latitude(0.0, 0.0),
            Unit::on_latitude(0.0, std::f64::consts::PI),
        ),
    };
    let fj = f.eval_unrestricted(j.phi(d.cpoint()))?;
    let fk = f.eval_unrestricted(k.phi(d.cpoint()))?;
    let inv = (j.quaternion() - k.quaternion()).inverse()?;
    let value = inv * (j.quaternion() * fj - k.quaternion() * fk);
    let derivative = if d.beta > 0.0 {
        Some(inv * (fj - fk) * (1.0 / d.beta))
    } else {
        None
    };
    Ok(SphericalData { value, derivative })
}

/// The slice derivative: exact term-by-term for series backends, otherwise
/// central differences of (d/da - I d/db)/2 inside the point's slice.
pub fn slice_derivative(f: &SliceFunctionHandle, x: Quaternion, h: f64) -> Result<Quaternion> {
    if let Backend::PowerSeries { coeffs, radius } = &f.backend {
        let derived: Vec<Quaternion> = coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(n, &a)| a * n as f64)
            .collect();
        return crate::slicefun::series_eval(&derived, x, *radius);
    }
    let d = decompose(x);
    let i = d.unit.quaternion();
    let probe = |dx: Quaternion| -> Result<Quaternion> {
        let p = x + dx;
        if !f.contains(p) {
            return Err(Error::TooCloseToBoundary(h));
        }
        f.eval_unrestricted(p)
    };
    for margin in [2.0 * h, -2.0 * h] {
        if !f.contains(x + Quaternion::scalar(margin)) || !f.contains(x + i * margin) {
            return Err(Error::TooCloseToBoundary(h));
        }
    }
    let da = (probe(Quaternion::scalar(h))? - probe(Quaternion::scalar(-h))?) * (0.5 / h);
    let db = (probe(i * h)? - probe(i * -h)?) * (0.5 / h);
    Ok((da - i * db) * 0.5)
}

/// The finite-difference residual |(d/da + I d/db) f_I / 2| at a trace point:
/// within truncation error it vanishes exactly when the restriction to the
/// slice of I is holomorphic.
pub fn dbar_residual(f: &SliceFunctionHandle, i: Unit, z: CPoint, h: f64) -> Result<f64> {
    let iq = i.quaternion();
    let base = i.phi(z);
    for margin in [2.0 * h, -2.0 * h] {
        if !f.contains(base + Quaternion::scalar(margin)) || !f.contains(base + iq * margin) {
            return Err(Error::TooCloseToBoundary(h));
        }
    }
    let probe = |dx: Quaternion| f.eval_unrestricted(base + dx);
    let da = (probe(Quaternion::scalar(h))? - probe(Quaternion::scalar(-h))?) * (0.5 / h);
    let db = (probe(iq * h)? - probe(iq * -h)?) * (0.5 / h);
    Ok(((da + iq * db) * 0.5).abs())
}

/// Comparison of the directional difference quotient against the closed-form
/// differential.
#[derive(Debug, Clone, Copy)]
pub struct DifferentialCheck {
    pub lhs: Quaternion,
    pub rhs: Quaternion,
    pub err: f64,
}

/// Central difference of f along v at x0 against the closed form: at real
/// points v f'_c; at a nonreal point of the slice of J the split form
/// v_par f'_c + v_perp f'_s with v decomposed along span(1, J) and its
/// orthogonal complement.
pub fn differential_check(
    f: &SliceFunctionHandle,
    x0: Quaternion,
    v: Quaternion,
    h: f64,
) -> Result<DifferentialCheck> {
    for sign in [1.0, -1.0] {
        if !f.contains(x0 + v * (2.0 * h * sign)) {
            return Err(Error::TooCloseToBoundary(h));
        }
    }
    let lhs = (f.eval_unrestricted(x0 + v * h)? - f.eval_unrestricted(x0 - v * h)?) * (0.5 / h);
    let fc = slice_derivative(f, x0, h)?;
    let rhs = if x0.is_real() {
        v * fc
    } else {
        let d = decompose(x0);
        let jq = d.unit.quaternion();
        let v_par = Quaternion::scalar(v.dot(Quaternion::ONE)) + jq * v.dot(jq);
        let v_perp = v - v_par;
        let fs = spherical_data_formula(f, x0)?
            .derivative
            .ok_or(Error::NoSecondUnit)?;
        v_par * fc + v_perp * fs
    };
    Ok(DifferentialCheck {
        lhs,
        rhs,
        err: (lhs - rhs).abs(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domains::builtin;
    use crate::planar::Grid;
    use crate::slicefun::DomainDescriptor;
    use approx::assert_abs_diff_eq;
    use std::sync::Arc;

    fn q(w: f64, x: f64, y: f64, z: f64) -> Quaternion {
        Quaternion::new(w, x, y, z)
    }

    #[test]
    fn rep_formula_examples() {
        // f = x^2 on the sphere alpha 0 beta 1: fJ = fK = -1, any I gives -1
        let minus_one = -Quaternion::ONE;
        let v = rep_formula(minus_one, minus_one, Unit::i(), Unit::j(), Unit::k()).unwrap();
        assert_abs_diff_eq!((v - minus_one).abs(), 0.0, epsilon = 1e-14);

        // f = x * i there: fJ = i*i = -1 at J=i; fK = ji = -k at K=j; at I=k
        // the value is k * i = j
        let v = rep_formula(minus_one, -Quaternion::K, Unit::i(), Unit::j(), Unit::k()).unwrap();
        assert_abs_diff_eq!((v - Quaternion::J).abs(), 0.0, epsilon = 1e-14);

        // I = J returns fJ
        let fj = q(0.3, -1.0, 2.0, 0.5);
        let fk = q(1.0, 0.7, 0.0, -2.0);
        let v = rep_formula(fj, fk, Unit::i(), Unit::j(), Unit::i()).unwrap();
        assert_abs_diff_eq!((v - fj).abs(), 0.0, epsilon = 1e-13);

        assert!(matches!(
            rep_formula(fj, fk, Unit::i(), Unit::i(), Unit::j()),
            Err(Error::CoincidentUnits(_))
        ));
    }

    #[test]
    fn stem_double_index_examples() {
        let sq = SliceFunctionHandle::monomial(2);
        // real trace point: f(alpha) + imath 0
        let v = stem_double_index(&sq, Unit::i(), Unit::j(), CPoint::new(2.0, 0.0)).unwrap();
        assert_abs_diff_eq!((v.p - Quaternion::scalar(4.0)).abs(), 0.0, epsilon = 1e-13);
        assert_abs_diff_eq!(v.q.abs(), 0.0, epsilon = 1e-13);

        // x^2 at the unit sphere trace: -1 + imath 0
        let v = stem_double_index(&sq, Unit::i(), Unit::j(), CPoint::new(0.0, 1.0)).unwrap();
        assert_abs_diff_eq!((v.p + Quaternion::ONE).abs(), 0.0, epsilon = 1e-13);
        assert_abs_diff_eq!(v.q.abs(), 0.0, epsilon = 1e-13);

        // x * i there: 0 + imath i
        let f = SliceFunctionHandle::polynomial(vec![Quaternion::ZERO, Quaternion::I]);
        let v = stem_double_index(&f, Unit::i(), Unit::j(), CPoint::new(0.0, 1.0)).unwrap();
        assert_abs_diff_eq!(v.p.abs(), 0.0, epsilon = 1e-13);
        assert_abs_diff_eq!((v.q - Quaternion::I).abs(), 0.0, epsilon = 1e-13);
    }

    #[test]
    fn stem_double_index_is_a_stem() {
        let f = SliceFunctionHandle::polynomial(vec![
            q(0.2, 1.0, 0.0, -0.5),
            Quaternion::I,
            q(1.0, 0.0, 2.0, 0.0),
        ]);
        let j = Unit::on_latitude(0.3, 0.7);
        let k = Unit::on_latitude(-0.5, 2.0);
        let z = CPoint::new(0.8, 1.3);
        let lhs = stem_double_index(&f, j, k, z.conj()).unwrap();
        let rhs = stem_double_index(&f, j, k, z).unwrap().bar();
        assert_eq!(lhs, rhs); // exact by construction
    }

    #[test]
    fn single_index_on_series_matches_the_series_stem() {
        let coeffs = vec![q(0.5, 0.0, 1.0, 0.0), Quaternion::K, Quaternion::ONE];
        let f = SliceFunctionHandle::polynomial(coeffs.clone());
        let z = CPoint::new(0.6, 0.9);
        let r = stem_single_index(&f, Unit::on_latitude(0.2, 1.0), z, 0.05, DEFAULT_CAP_TOL)
            .unwrap();
        assert!(r.cap_spread <= 1e-10);
        let (b, c) =
            crate::slicefun::series_sphere_coeffs(&coeffs, z.alpha, z.beta, f64::INFINITY).unwrap();
        assert_abs_diff_eq!((r.value.p - b).abs(), 0.0, epsilon = 1e-10);
        assert_abs_diff_eq!((r.value.q - c).abs(), 0.0, epsilon = 1e-10);
    }

    #[test]
    fn single_index_rejects_non_slice_functions() {
        // indicator of a single slice: slice regular but not a slice function
        let i0 = Unit::i();
        let f = SliceFunctionHandle::pointwise(
            Arc::new(move |x: Quaternion| {
                let d = decompose(x);
                let aligned = d.unit.quaternion().dot(i0.quaternion()).abs() > 1.0 - 1e-12;
                if aligned {
                    Quaternion::ONE
                } else {
                    Quaternion::ZERO
                }
            }),
            DomainDescriptor::NonReal,
        );
        let err = stem_single_index(&f, i0, CPoint::new(0.5, 1.0), 0.05, DEFAULT_CAP_TOL);
        assert!(matches!(err, Err(Error::CapDisagreement { .. })));
    }

    #[test]
    fn extend_global_examples() {
        let grid = Grid::standard();
        let dom = builtin("omega0", grid, 65).unwrap();
        let sq = SliceFunctionHandle::monomial(2).restrict(DomainDescriptor::Axial(dom.clone()));

        // 1 + 3.5k lies outside the domain but inside its completion
        let x = q(1.0, 0.0, 0.0, 3.5);
        assert!(!dom.contains(x));
        let ext = extend_global(&sq, x, 1e-9).unwrap();
        assert_abs_diff_eq!(
            (ext.value - q(-11.25, 0.0, 0.0, 7.0)).abs(),
            0.0,
            epsilon = 1e-10
        );
        assert!(ext.consistency_spread <= 1e-10);

        // inside the domain the extension reproduces f
        let j = Unit::on_latitude(0.0, 0.0);
        let inside = j.phi(CPoint::new(1.0, 3.5));
        let ext = extend_global(&sq, inside, 1e-9).unwrap();
        assert_abs_diff_eq!((ext.value - (inside * inside)).abs(), 0.0, epsilon = 1e-10);

        // trace outside the C-shape
        let err = extend_global(&sq, q(1.0, 0.0, 0.0, 6.5), 1e-9);
        assert!(matches!(err, Err(Error::OutsideCompletion)));
    }

    #[test]
    fn spherical_formula_examples() {
        let sq = SliceFunctionHandle::monomial(2);
        let d = spherical_data_formula(&sq, q(1.0, 2.0, 0.0, 0.0)).unwrap();
        assert_abs_diff_eq!((d.value - Quaternion::scalar(-3.0)).abs(), 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(
            (d.derivative.unwrap() - Quaternion::scalar(2.0)).abs(),
            0.0,
            epsilon = 1e-12
        );

        // f = x * i at k: value 0, derivative i
        let f = SliceFunctionHandle::polynomial(vec![Quaternion::ZERO, Quaternion::I]);
        let d = spherical_data_formula(&f, Quaternion::K).unwrap();
        assert_abs_diff_eq!(d.value.abs(), 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!((d.derivative.unwrap() - Quaternion::I).abs(), 0.0, epsilon = 1e-12);

        let c = q(0.4, 1.0, -2.0, 0.3);
        let f = SliceFunctionHandle::polynomial(vec![c]);
        let d = spherical_data_formula(&f, q(0.5, 0.0, 1.5, 0.0)).unwrap();
        assert_abs_diff_eq!((d.value - c).abs(), 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(d.derivative.unwrap().abs(), 0.0, epsilon = 1e-12);
    }

    #[test]
    fn raw_and_formula_spherical_data_agree() {
        let f = SliceFunctionHandle::polynomial(vec![
            q(0.2, -1.0, 0.4, 0.0),
            Quaternion::J,
            q(1.0, 0.0, 0.0, 0.5),
            Quaternion::I,
        ]);
        for x in [q(1.0, 2.0, 0.0, 0.0), q(-0.5, 0.3, 1.2, -0.7), q(0.0, 0.0, 0.0, 1.5)] {
            let raw = crate::slicefun::spherical_data_raw(&f, x).unwrap();
            let formula = spherical_data_formula(&f, x).unwrap();
            assert_abs_diff_eq!((raw.value - formula.value).abs(), 0.0, epsilon = 1e-11);
            assert_abs_diff_eq!(
                (raw.derivative.unwrap() - formula.derivative.unwrap()).abs(),
                0.0,
                epsilon = 1e-11
            );
        }
    }

    #[test]
    fn slice_derivative_examples() {
        let sq = SliceFunctionHandle::monomial(2);
        let x = q(1.0, 0.0, 2.0, 0.0);
        let d = slice_derivative(&sq, x, 1e-5).unwrap();
        assert_abs_diff_eq!((d - x * 2.0).abs(), 0.0, epsilon = 1e-13);

        let c = SliceFunctionHandle::polynomial(vec![q(0.3, 1.0, 0.0, -2.0)]);
        assert_eq!(slice_derivative(&c, x, 1e-5).unwrap(), Quaternion::ZERO);

        let cube = SliceFunctionHandle::monomial(3);
        let d = slice_derivative(&cube, Quaternion::I, 1e-5).unwrap();
        assert_abs_diff_eq!((d - Quaternion::scalar(-3.0)).abs(), 0.0, epsilon = 1e-13);

        // finite differences agree for a pointwise backend
        let pw = SliceFunctionHandle::pointwise(
            Arc::new(|x: Quaternion| x * x),
            DomainDescriptor::All,
        );
        let d = slice_derivative(&pw, x, 1e-5).unwrap();
        assert!((d - x * 2.0).abs() < 1e-8);
    }

    #[test]
    fn dbar_residual_cases() {
        let f = SliceFunctionHandle::polynomial(vec![
            Quaternion::ZERO,
            Quaternion::ZERO,
            Quaternion::ZERO,
            Quaternion::ZERO,
            Quaternion::ZERO,
            Quaternion::ONE, // x^5
        ]);
        let z = CPoint::new(0.7, 0.8);
        let i = Unit::on_latitude(0.4, 0.9);
        let r1 = dbar_residual(&f, i, z, 1e-3).unwrap();
        let r2 = dbar_residual(&f, i, z, 5e-4).unwrap();
        let order = (r1 / r2).log2();
        assert!(
            (order - 2.0).abs() < 0.3,
            "observed order {order} (r1 {r1}, r2 {r2})"
        );

        // the conjugation map is anti-regular: residual 1
        let conj = SliceFunctionHandle::pointwise(
            Arc::new(|x: Quaternion| x.conj()),
            DomainDescriptor::All,
        );
        let r = dbar_residual(&conj, Unit::i(), CPoint::new(0.0, 1.0), 1e-5).unwrap();
        assert_abs_diff_eq!(r, 1.0, epsilon = 1e-9);

        let c = SliceFunctionHandle::polynomial(vec![q(2.0, -1.0, 0.5, 0.0)]);
        let r = dbar_residual(&c, Unit::i(), CPoint::new(0.0, 1.0), 1e-5).unwrap();
        assert!(r <= 1e-13);

        // boundary margin is enforced
        let ball = SliceFunctionHandle::series(vec![Quaternion::ONE; 3], 1.0);
        assert!(matches!(
            dbar_residual(&ball, Unit::i(), CPoint::new(0.999, 0.0), 1e-2),
            Err(Error::TooCloseToBoundary(_))
        ));
    }

    #[test]
    fn differential_check_examples() {
        let sq = SliceFunctionHandle::monomial(2);
        // real point: lhs = 2j = v f'_c
        let r = differential_check(&sq, Quaternion::scalar(1.0), Quaternion::J, 1e-5).unwrap();
        assert_abs_diff_eq!((r.rhs - Quaternion::J * 2.0).abs(), 0.0, epsilon = 1e-12);
        assert!(r.err <= 1e-9);

        // orthogonal direction at 1 + 2i: rhs = k f'_s = 2k
        let r = differential_check(&sq, q(1.0, 2.0, 0.0, 0.0), Quaternion::K, 1e-5).unwrap();
        assert_abs_diff_eq!((r.rhs - Quaternion::K * 2.0).abs(), 0.0, epsilon = 1e-11);
        assert!(r.err <= 1e-9);

        let c = SliceFunctionHandle::polynomial(vec![q(0.3, 1.0, 0.0, -2.0)]);
        let r = differential_check(&c, q(1.0, 2.0, 0.0, 0.0), Quaternion::J, 1e-5).unwrap();
        assert_eq!(r.lhs, Quaternion::ZERO);
        assert_eq!(r.rhs, Quaternion::ZERO);
    }
}
