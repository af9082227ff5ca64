//! Point-set search on the triangular lattice.
//!
//! A hexagonal constellation of size `m` is the union of complete distance
//! shells of lattice points around a symmetric centre: a lattice point, a deep
//! hole (centroid of a unit triangle) or an edge midpoint. Taking whole shells
//! keeps the centroid on the centre, so the mean squared distance to the
//! centre is the average symbol energy. Among all admissible sets the one with
//! the smallest energy wins; ties go to the lexicographically smallest sorted
//! coordinate list.

use std::cmp::Ordering;

use num_complex::Complex64;

/// Radius (in lattice spacings) of the region in which centres are tried.
pub const CENTRE_WINDOW: f64 = 4.0;
/// Lattice points considered around each centre.
const POINT_WINDOW: f64 = 4.0;
const SHELL_EPS: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CentreClass {
    LatticePoint,
    DeepHole,
    EdgeMidpoint,
}

#[derive(Debug, Clone)]
pub struct LatticeSet {
    pub centre_class: CentreClass,
    /// Points relative to the centre, unit lattice spacing, sorted lexicographically.
    pub points: Vec<Complex64>,
    /// Mean squared distance to the centre in units of spacing².
    pub energy: f64,
}

fn basis() -> (Complex64, Complex64) {
    (
        Complex64::new(1.0, 0.0),
        Complex64::new(0.5, 3f64.sqrt() / 2.0),
    )
}

/// Lattice points `i*a + j*b` within `radius` of `centre`.
pub fn lattice_within(centre: Complex64, radius: f64) -> Vec<Complex64> {
    let (a, b) = basis();
    let n = (centre.norm() + radius).ceil() as i64 * 2 + 2;
    let mut out = Vec::new();
    for i in -n..=n {
        for j in -n..=n {
            let p = a * i as f64 + b * j as f64;
            if (p - centre).norm() <= radius + SHELL_EPS {
                out.push(p);
            }
        }
    }
    out
}

/// All symmetric centres within the search window, tagged by class.
pub fn candidate_centres() -> Vec<(CentreClass, Complex64)> {
    let (a, b) = basis();
    let offsets = [
        (CentreClass::LatticePoint, Complex64::new(0.0, 0.0)),
        (CentreClass::DeepHole, (a + b) / 3.0),
        (CentreClass::DeepHole, (a + b) * (2.0 / 3.0)),
        (CentreClass::EdgeMidpoint, a / 2.0),
        (CentreClass::EdgeMidpoint, b / 2.0),
        (CentreClass::EdgeMidpoint, (b - a) / 2.0),
    ];
    let mut out = Vec::new();
    for p in lattice_within(Complex64::new(0.0, 0.0), CENTRE_WINDOW + 1.0) {
        for &(class, off) in &offsets {
            let c = p + off;
            if c.norm() <= CENTRE_WINDOW + SHELL_EPS {
                out.push((class, c));
            }
        }
    }
    out
}

/// Rounded coordinate key used for every lexicographic tie-break.
pub fn lex_key(p: Complex64) -> (i64, i64) {
    ((p.re * 1e9).round() as i64, (p.im * 1e9).round() as i64)
}

pub fn lex_cmp(a: &Complex64, b: &Complex64) -> Ordering {
    lex_key(*a).cmp(&lex_key(*b))
}

/// Shell-complete subset of size `m` around `centre`, if one exists.
fn shell_set(centre: Complex64, m: usize) -> Option<Vec<Complex64>> {
    let mut pts: Vec<(f64, Complex64)> = lattice_within(centre, POINT_WINDOW)
        .into_iter()
        .map(|p| ((p - centre).norm_sqr(), p - centre))
        .collect();
    pts.sort_by(|x, y| x.0.partial_cmp(&y.0).unwrap().then_with(|| lex_cmp(&x.1, &y.1)));
    if pts.len() <= m {
        return None;
    }
    // Whole shells only: the m-th and (m+1)-th points must lie on different shells.
    if (pts[m].0 - pts[m - 1].0).abs() <= SHELL_EPS {
        return None;
    }
    let mut set: Vec<Complex64> = pts[..m].iter().map(|x| x.1).collect();
    set.sort_by(lex_cmp);
    Some(set)
}

/// Minimum-energy shell-complete lattice set of `m` points.
pub fn search(m: usize) -> Option<LatticeSet> {
    let mut best: Option<LatticeSet> = None;
    for (class, centre) in candidate_centres() {
        let Some(points) = shell_set(centre, m) else {
            continue;
        };
        let energy = points.iter().map(|p| p.norm_sqr()).sum::<f64>() / m as f64;
        let better = match &best {
            None => true,
            Some(b) => {
                if energy < b.energy - SHELL_EPS {
                    true
                } else if energy > b.energy + SHELL_EPS {
                    false
                } else {
                    let ka: Vec<_> = points.iter().map(|p| lex_key(*p)).collect();
                    let kb: Vec<_> = b.points.iter().map(|p| lex_key(*p)).collect();
                    ka < kb
                }
            }
        };
        if better {
            best = Some(LatticeSet {
                centre_class: class,
                points,
                energy,
            });
        }
    }
    best
}
