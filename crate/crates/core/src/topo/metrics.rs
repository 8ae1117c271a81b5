use serde::Serialize;

use super::regions::{union_of, RegionKind, RegionSet};
use crate::gaussian::{log_negativity, symplectic_spectrum, von_neumann_entropy, CovMatrix, SymplecticSpectrum};
use crate::linalg::complement;
use crate::{Error, Result};

/// Entropy (bits) of a region; the empty region has zero entropy.
pub fn region_entropy(c: &CovMatrix, region: &[usize]) -> Result<f64> {
    if region.is_empty() {
        return Ok(0.0);
    }
    Ok(von_neumann_entropy(&symplectic_spectrum(c, region)?))
}

fn all_modes(c: &CovMatrix) -> Vec<usize> {
    (0..c.n_modes()).collect()
}

/// `I_X = S_X + S_{X_c} − S_total`.
pub fn mutual_information(c: &CovMatrix, region: &[usize]) -> Result<f64> {
    let region = crate::linalg::check_region(region, c.n_modes())?;
    let rest = complement(&region, c.n_modes());
    Ok(region_entropy(c, &region)? + region_entropy(c, &rest)? - region_entropy(c, &all_modes(c))?)
}

/// `I_{X,Y} = S_X + S_Y − S_{X∪Y}` for disjoint `X`, `Y`.
pub fn bipartite_mutual_information(c: &CovMatrix, x: &[usize], y: &[usize]) -> Result<f64> {
    if x.iter().any(|i| y.contains(i)) {
        return Err(Error::Domain("mutual information regions overlap".into()));
    }
    Ok(region_entropy(c, x)? + region_entropy(c, y)? - region_entropy(c, &union_of(&[x, y]))?)
}

/// The seven unions `A, B, C, AB, BC, AC, ABC` of the KP sectors with their
/// inclusion–exclusion signs.
fn kp_terms(r: &RegionSet) -> Result<Vec<(f64, Vec<usize>)>> {
    r.expect_kind(RegionKind::Kp)?;
    let (a, b, c) = (r.get("A")?, r.get("B")?, r.get("C")?);
    Ok(vec![
        (1.0, a.to_vec()),
        (1.0, b.to_vec()),
        (1.0, c.to_vec()),
        (-1.0, union_of(&[a, b])),
        (-1.0, union_of(&[b, c])),
        (-1.0, union_of(&[a, c])),
        (1.0, union_of(&[a, b, c])),
    ])
}

fn kp_combination(r: &RegionSet, mut f: impl FnMut(&[usize]) -> Result<f64>) -> Result<f64> {
    let mut acc = 0.0;
    for (sign, region) in kp_terms(r)? {
        acc += sign * f(&region)?;
    }
    Ok(-acc)
}

/// `−(S_A + S_B + S_C − S_AB − S_BC − S_AC + S_ABC)`.
pub fn tee_kp(c: &CovMatrix, r: &RegionSet) -> Result<f64> {
    kp_combination(r, |x| region_entropy(c, x))
}

/// `−½[(S_A − S_B) − (S_C − S_D)]`.
pub fn tee_lw(c: &CovMatrix, r: &RegionSet) -> Result<f64> {
    r.expect_kind(RegionKind::Lw)?;
    let s = |name: &str| region_entropy(c, r.get(name)?);
    Ok(-0.5 * ((s("A")? - s("B")?) - (s("C")? - s("D")?)))
}

/// KP combination of log-negativities.
pub fn tln_kp(c: &CovMatrix, r: &RegionSet) -> Result<f64> {
    kp_combination(r, |x| log_negativity(c, x))
}

/// `−½(I_A + I_B + I_C − I_AB − I_BC − I_AC + I_ABC)`.
pub fn tmi(c: &CovMatrix, r: &RegionSet) -> Result<f64> {
    Ok(0.5 * kp_combination(r, |x| mutual_information(c, x))?)
}

/// Infinite-temperature lower bound on the TMI from the pure-state spectra:
/// `−½ Σ_X ζ(X) Σ_{σ>½} log₂(eσ)` over the seven KP unions and their
/// complements, with `ζ = +1` for single sectors and triples and −1 for
/// pairs.
pub fn tmi_lower_bound(c_pure: &CovMatrix, r: &RegionSet) -> Result<f64> {
    let n = c_pure.n_modes();
    let log_e = std::f64::consts::E.log2();
    let primed = |spec: &SymplecticSpectrum| -> f64 {
        let tol = spec.tol_half();
        spec.values().iter().filter(|&&s| s > 0.5 + tol).map(|&s| log_e + s.log2()).sum()
    };
    let mut acc = 0.0;
    for (sign, region) in kp_terms(r)? {
        let rest = complement(&region, n);
        let spec_x = symplectic_spectrum(c_pure, &region)?;
        let counts_x = (spec_x.n_greater(), spec_x.n_equal());
        if counts_x.0 + counts_x.1 != spec_x.len() {
            return Err(Error::Misclassified(format!("region of {} modes has unclassified values", region.len())));
        }
        // Triples pair with single-sector complements, whose ζ is also +1;
        // pairs pair with pairs (ζ = −1).
        let term_x = primed(&spec_x);
        let term_rest = if rest.is_empty() {
            0.0
        } else {
            let spec_rest = symplectic_spectrum(c_pure, &rest)?;
            if spec_rest.n_greater() != counts_x.0 || spec_rest.n_greater() + spec_rest.n_equal() != spec_rest.len() {
                return Err(Error::Misclassified(format!(
                    "region has {} values above 1/2 but its complement has {}",
                    counts_x.0,
                    spec_rest.n_greater()
                )));
            }
            primed(&spec_rest)
        };
        acc += sign * (term_x + term_rest);
    }
    Ok(-0.5 * acc)
}

/// Lower and upper bounds on the LW mutual information built from
/// `E = A∖B`, `F₁ = A∖C`, `F₂ = D` and `F = F₁ ∪ F₂`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SandwichBounds {
    pub lower: f64,
    pub upper: f64,
}

pub fn tmi_sandwich_bounds(c: &CovMatrix, r: &RegionSet) -> Result<SandwichBounds> {
    r.expect_kind(RegionKind::Lw)?;
    let (a, b, cc, d) = (r.get("A")?, r.get("B")?, r.get("C")?, r.get("D")?);
    let minus = |x: &[usize], y: &[usize]| x.iter().copied().filter(|i| !y.contains(i)).collect::<Vec<_>>();
    let e = minus(a, b);
    let f1 = minus(a, cc);
    let f2 = d.to_vec();
    if e.iter().any(|i| f1.contains(i) || f2.contains(i)) || f1.iter().any(|i| f2.contains(i)) {
        return Err(Error::Domain("sandwich regions E, F1, F2 must be disjoint".into()));
    }
    let f = union_of(&[&f1, &f2]);
    let i_ef = bipartite_mutual_information(c, &e, &f)?;
    let i_ef1 = bipartite_mutual_information(c, &e, &f1)?;
    let i_ef2 = bipartite_mutual_information(c, &e, &f2)?;
    Ok(SandwichBounds { lower: (i_ef - i_ef1 - i_ef2).min(0.0), upper: i_ef1.max(i_ef2) })
}

/// One-mode symplectic eigenvalue `½√((1 + 3s⁴ + 2s⁸)/(1 + 3s⁴))` of the
/// three-mode network obtained from a four-mode star.
pub fn sigma_upper(s: f64) -> f64 {
    let s4 = s.powi(4);
    0.5 * ((1.0 + 3.0 * s4 + 2.0 * s4 * s4) / (1.0 + 3.0 * s4)).sqrt()
}

/// Entropy (bits) of a single mode with eigenvalue [`sigma_upper`].
pub fn tee_upper_bound(s: f64) -> f64 {
    let spec = SymplecticSpectrum::new(vec![sigma_upper(s)], crate::gaussian::DEFAULT_TOL_HALF)
        .expect("sigma_upper is at least 1/2");
    von_neumann_entropy(&spec)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gaussian::{covariance_from_graph, thermal_scale, GaussGraph};
    use nalgebra::DMatrix;
    use std::collections::BTreeMap;

    fn vacuum(n: usize) -> CovMatrix {
        covariance_from_graph(&GaussGraph::imaginary(DMatrix::identity(n, n)).unwrap()).unwrap()
    }

    fn kp_custom(total: usize) -> RegionSet {
        let mut r = RegionSet::custom(
            BTreeMap::from([("A".into(), vec![0]), ("B".into(), vec![1, 2]), ("C".into(), vec![3])]),
            total,
        )
        .unwrap();
        r.kind = RegionKind::Kp;
        r
    }

    #[test]
    fn product_states_vanish() {
        let r = kp_custom(6);
        let c = vacuum(6);
        assert_eq!(tee_kp(&c, &r).unwrap(), 0.0);
        assert_eq!(tln_kp(&c, &r).unwrap(), 0.0);
        assert_eq!(tmi_lower_bound(&c, &r).unwrap(), 0.0);
        let hot = thermal_scale(&c, 7.0).unwrap();
        assert!(tmi(&hot, &r).unwrap().abs() < 1e-12);
        assert!(mutual_information(&hot, &[0, 4]).unwrap().abs() < 1e-12);
    }

    #[test]
    fn wrong_kind_rejected() {
        let r = kp_custom(6);
        assert!(matches!(tee_lw(&vacuum(6), &r), Err(Error::WrongRegionKind { expected: "LW", found: "KP" })));
    }

    #[test]
    fn upper_bound_values() {
        assert!((sigma_upper(1.0) - 0.5 * 1.5f64.sqrt()).abs() < 1e-15);
        let sigma = sigma_upper(1.0);
        let h = (sigma + 0.5) * (sigma + 0.5).log2() - (sigma - 0.5) * (sigma - 0.5).log2();
        assert!((tee_upper_bound(1.0) - h).abs() < 1e-15);
        let (a, b) = (20.0f64, 20.5f64);
        let slope = (tee_upper_bound(b.exp()) - tee_upper_bound(a.exp())) / (b - a);
        assert!((slope - 2.0 / std::f64::consts::LN_2).abs() < 1e-6);
    }
}
