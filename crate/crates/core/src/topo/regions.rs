use std::collections::BTreeMap;

use serde::Serialize;

use crate::lattice::{Boundary, LatticeSpec, Site};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum RegionKind {
    Kp,
    Lw,
    Custom,
}

impl RegionKind {
    pub fn name(self) -> &'static str {
        match self {
            RegionKind::Kp => "KP",
            RegionKind::Lw => "LW",
            RegionKind::Custom => "custom",
        }
    }
}

/// Region geometry in 0-based cluster coordinates `(row, col)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "shape", rename_all = "lowercase")]
pub enum Geometry {
    Disk { center: (f64, f64), radius: f64 },
    Annulus { center: (f64, f64), inner: f64, width: f64 },
    Custom,
}

/// Named mode sets over a state with `total` modes. Each set is sorted.
#[derive(Debug, Clone, Serialize)]
pub struct RegionSet {
    pub kind: RegionKind,
    pub regions: BTreeMap<String, Vec<usize>>,
    pub geometry: Geometry,
    pub total: usize,
}

impl RegionSet {
    pub fn custom(regions: BTreeMap<String, Vec<usize>>, total: usize) -> Result<Self> {
        for ids in regions.values() {
            crate::linalg::check_region(ids, total)?;
        }
        let regions = regions
            .into_iter()
            .map(|(k, mut v)| {
                v.sort_unstable();
                v.dedup();
                (k, v)
            })
            .collect();
        Ok(Self { kind: RegionKind::Custom, regions, geometry: Geometry::Custom, total })
    }

    pub fn get(&self, name: &str) -> Result<&[usize]> {
        self.regions
            .get(name)
            .map(Vec::as_slice)
            .ok_or_else(|| Error::Domain(format!("region {name:?} not defined")))
    }

    pub(crate) fn expect_kind(&self, kind: RegionKind) -> Result<()> {
        if self.kind != kind {
            return Err(Error::WrongRegionKind { expected: kind.name(), found: self.kind.name() });
        }
        Ok(())
    }

    /// Smallest linear size of the construction in cluster units.
    pub fn linear_size(&self) -> Option<f64> {
        match self.geometry {
            Geometry::Disk { radius, .. } => Some(radius),
            Geometry::Annulus { inner, width, .. } => Some(inner.min(width)),
            Geometry::Custom => None,
        }
    }

    /// Message when the regions are not at least three correlation lengths
    /// across.
    pub fn size_warning(&self, xi: f64) -> Option<String> {
        let size = self.linear_size()?;
        (size < 3.0 * xi).then(|| {
            format!("{} regions have linear size {size} below 3 correlation lengths ({:.3})", self.kind.name(), 3.0 * xi)
        })
    }
}

fn union(a: &[usize], b: &[usize]) -> Vec<usize> {
    let mut out: Vec<usize> = a.iter().chain(b).copied().collect();
    out.sort_unstable();
    out.dedup();
    out
}

pub(crate) fn union_of(parts: &[&[usize]]) -> Vec<usize> {
    parts.iter().fold(Vec::new(), |acc, p| union(&acc, p))
}

fn offsets(spec: &LatticeSpec, center: (f64, f64), site: Site) -> (f64, f64) {
    let mut dr = (site.row - 1) as f64 - center.0;
    let mut dc = (site.col - 1) as f64 - center.1;
    if spec.boundary == Boundary::Torus {
        let (rows, cols) = (spec.rows as f64, spec.cols as f64);
        dr -= rows * (dr / rows).round();
        dc -= cols * (dc / cols).round();
    }
    (dr, dc)
}

fn check_fits(spec: &LatticeSpec, center: (f64, f64), reach: f64) -> Result<()> {
    let margin = reach / 2.0;
    let fits = match spec.boundary {
        Boundary::Planar => {
            let (rmax, cmax) = ((spec.rows - 1) as f64, (spec.cols - 1) as f64);
            center.0 - reach >= margin
                && center.0 + reach <= rmax - margin
                && center.1 - reach >= margin
                && center.1 + reach <= cmax - margin
        }
        Boundary::Torus => 2.0 * (reach + margin) <= spec.rows.min(spec.cols) as f64,
    };
    if !fits {
        return Err(Error::DoesNotFit(format!(
            "region of reach {reach} around {center:?} does not fit a {}x{} {} lattice with margin {margin}",
            spec.rows, spec.cols, spec.boundary
        )));
    }
    Ok(())
}

/// Disk of the given radius around `center`, split into three 120° sectors
/// by polar angle (north up): `[0°, 120°)` → A, `[120°, 240°)` → B,
/// `[240°, 360°)` → C. `sites[k]` is the cluster site of mode `k`.
pub fn kp_regions(spec: &LatticeSpec, sites: &[Site], center: (f64, f64), radius: f64) -> Result<RegionSet> {
    if !(radius > 0.0) {
        return Err(Error::DoesNotFit(format!("radius must be positive, got {radius}")));
    }
    check_fits(spec, center, radius)?;
    let mut sectors: [Vec<usize>; 3] = Default::default();
    for (k, &site) in sites.iter().enumerate() {
        let (dr, dc) = offsets(spec, center, site);
        if dr * dr + dc * dc <= radius * radius {
            let angle = (-dr).atan2(dc).to_degrees().rem_euclid(360.0);
            sectors[((angle / 120.0) as usize).min(2)].push(k);
        }
    }
    if sectors.iter().any(Vec::is_empty) {
        return Err(Error::DoesNotFit(format!("disk of radius {radius} leaves an empty sector")));
    }
    let [a, b, c] = sectors;
    let regions = BTreeMap::from([("A".to_string(), a), ("B".to_string(), b), ("C".to_string(), c)]);
    Ok(RegionSet {
        kind: RegionKind::Kp,
        regions,
        geometry: Geometry::Disk { center, radius },
        total: sites.len(),
    })
}

/// Square annulus `inner/2 ≤ max(|Δr|, |Δc|) < inner/2 + width` around
/// `center`. The top strip is the part of the annulus above the hole with
/// `|Δc| < inner/2`, the bottom strip its mirror image. A is the annulus,
/// B = A∖top, C = A∖bottom and D = A∖(top ∪ bottom), so that
/// `|A| − |B| = |C| − |D|`.
pub fn lw_regions(spec: &LatticeSpec, sites: &[Site], center: (f64, f64), inner: f64, width: f64) -> Result<RegionSet> {
    if !(width > 0.0) || !(inner > 0.0) {
        return Err(Error::DoesNotFit(format!("annulus needs positive inner size and width, got {inner}, {width}")));
    }
    let half_in = inner / 2.0;
    let half_out = half_in + width;
    check_fits(spec, center, half_out)?;
    let (mut a, mut top, mut bottom) = (Vec::new(), Vec::new(), Vec::new());
    for (k, &site) in sites.iter().enumerate() {
        let (dr, dc) = offsets(spec, center, site);
        let cheb = dr.abs().max(dc.abs());
        if cheb >= half_in && cheb < half_out {
            a.push(k);
            if dc.abs() < half_in {
                if dr < 0.0 {
                    top.push(k);
                } else {
                    bottom.push(k);
                }
            }
        }
    }
    if top.is_empty() || bottom.is_empty() || a.len() == top.len() + bottom.len() {
        return Err(Error::DoesNotFit("annulus contains no modes in a strip or arm".into()));
    }
    let minus = |x: &[usize], y: &[usize]| x.iter().copied().filter(|i| !y.contains(i)).collect::<Vec<_>>();
    let b = minus(&a, &top);
    let c = minus(&a, &bottom);
    let d = minus(&b, &bottom);
    let regions = BTreeMap::from([
        ("A".to_string(), a),
        ("B".to_string(), b),
        ("C".to_string(), c),
        ("D".to_string(), d),
    ]);
    Ok(RegionSet {
        kind: RegionKind::Lw,
        regions,
        geometry: Geometry::Annulus { center, inner, width },
        total: sites.len(),
    })
}
