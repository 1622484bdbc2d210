//! Disk families: exact input, degeneracy checks, the face arrangement of
//! their boundary circles and the structures derived from it.

mod arrangement;
mod model;

use std::fmt;
use std::str::FromStr;

use bigdecimal::BigDecimal;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::graph::Graph;

pub use arrangement::{arrangement_stats, build_arrangement, Arrangement, ArrangementStats, Face, HalfEdge};
pub use model::{blow_up, disk_layering, raw_levels, minor_model, validate_minor_model, BlowUp, MinorModel};

/// Default tolerance for degeneracy checks, in input units.
pub const DEFAULT_EPSILON: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Disk {
    pub x: BigRational,
    pub y: BigRational,
    pub r: BigRational,
}

/// Parses a decimal string such as `-2`, `1.25` or `3e-2` exactly.
pub fn parse_decimal(s: &str) -> Result<BigRational> {
    let d = BigDecimal::from_str(s.trim()).map_err(|e| Error::Parse {
        location: format!("{s:?}"),
        message: e.to_string(),
    })?;
    let (digits, scale) = d.into_bigint_and_exponent();
    let ten = BigInt::from(10u32);
    Ok(if scale >= 0 {
        BigRational::new(digits, num_traits::pow(ten, scale as usize))
    } else {
        BigRational::from_integer(digits * num_traits::pow(ten, scale.unsigned_abs() as usize))
    })
}

impl Disk {
    pub fn new(x: BigRational, y: BigRational, r: BigRational) -> Self {
        Disk { x, y, r }
    }

    pub fn parse(x: &str, y: &str, r: &str) -> Result<Self> {
        Ok(Disk::new(parse_decimal(x)?, parse_decimal(y)?, parse_decimal(r)?))
    }

    /// Exact conversion of finite floats.
    pub fn from_f64(x: f64, y: f64, r: f64) -> Result<Self> {
        let conv = |v: f64| {
            BigRational::from_float(v).ok_or_else(|| Error::InvalidInput(format!("non-finite coordinate {v}")))
        };
        Ok(Disk::new(conv(x)?, conv(y)?, conv(r)?))
    }

    fn floats(&self) -> (f64, f64, f64) {
        let f = |v: &BigRational| v.to_f64().unwrap_or(f64::NAN);
        (f(&self.x), f(&self.y), f(&self.r))
    }

    fn center_dist_sq(&self, other: &Disk) -> BigRational {
        let dx = &self.x - &other.x;
        let dy = &self.y - &other.y;
        &dx * &dx + &dy * &dy
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct DiskSet {
    pub disks: Vec<Disk>,
    pub epsilon: f64,
}

impl DiskSet {
    pub fn new(disks: Vec<Disk>) -> Self {
        DiskSet {
            disks,
            epsilon: DEFAULT_EPSILON,
        }
    }

    pub fn with_epsilon(mut self, epsilon: f64) -> Self {
        self.epsilon = epsilon;
        self
    }

    pub fn len(&self) -> usize {
        self.disks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.disks.is_empty()
    }

    /// Whether the boundaries of disks `i` and `j` cross in two points.
    pub fn boundaries_cross(&self, i: usize, j: usize) -> bool {
        let (a, b) = (&self.disks[i], &self.disks[j]);
        let d2 = a.center_dist_sq(b);
        let sum = &a.r + &b.r;
        let diff = &a.r - &b.r;
        d2 < &sum * &sum && d2 > &diff * &diff
    }

    pub(crate) fn circles(&self) -> Vec<(f64, f64, f64)> {
        self.disks.iter().map(Disk::floats).collect()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Degeneracy {
    NonPositiveRadius(usize),
    Identical(usize, usize),
    /// Boundaries touch (externally or internally) or come within epsilon of it.
    Tangent(usize, usize),
    /// A crossing point of the first two boundaries lies within epsilon of the third.
    TriplePoint(usize, usize, usize),
}

impl fmt::Display for Degeneracy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Degeneracy::NonPositiveRadius(i) => write!(f, "disk {i} has non-positive radius"),
            Degeneracy::Identical(i, j) => write!(f, "disks {i} and {j} are identical"),
            Degeneracy::Tangent(i, j) => write!(f, "disks {i} and {j} are tangent"),
            Degeneracy::TriplePoint(i, j, k) => {
                write!(f, "boundaries of disks {i}, {j} and {k} meet in a point")
            }
        }
    }
}

/// Crossing points of two circles given as `(x, y, r)`; assumes they cross.
pub(crate) fn crossing_points(a: (f64, f64, f64), b: (f64, f64, f64)) -> [(f64, f64); 2] {
    let (dx, dy) = (b.0 - a.0, b.1 - a.1);
    let d = dx.hypot(dy);
    let along = (a.2 * a.2 - b.2 * b.2 + d * d) / (2.0 * d);
    let h = (a.2 * a.2 - along * along).max(0.0).sqrt();
    let (mx, my) = (a.0 + along * dx / d, a.1 + along * dy / d);
    [(mx - h * dy / d, my + h * dx / d), (mx + h * dy / d, my - h * dx / d)]
}

/// Identical pairs, tangencies and near triple points. Empty means the
/// family is in general position.
pub fn validate_disks(ds: &DiskSet) -> Vec<Degeneracy> {
    let mut out = Vec::new();
    let n = ds.len();
    for (i, d) in ds.disks.iter().enumerate() {
        if !d.r.is_positive() {
            out.push(Degeneracy::NonPositiveRadius(i));
        }
    }
    if !out.is_empty() {
        return out;
    }
    let eps = ds.epsilon;
    let circles = ds.circles();
    for i in 0..n {
        for j in i + 1..n {
            let (a, b) = (&ds.disks[i], &ds.disks[j]);
            if a == b {
                out.push(Degeneracy::Identical(i, j));
                continue;
            }
            let d2 = a.center_dist_sq(b);
            let sum = &a.r + &b.r;
            let diff = &a.r - &b.r;
            let exact_touch = d2 == &sum * &sum || (!d2.is_zero() && d2 == &diff * &diff);
            let d = d2.to_f64().unwrap_or(f64::NAN).sqrt();
            let (ra, rb) = (circles[i].2, circles[j].2);
            let near = (d - (ra + rb)).abs() <= eps
                || (d - (ra - rb).abs()).abs() <= eps && (d > eps || (ra - rb).abs() <= eps);
            if exact_touch || near {
                out.push(Degeneracy::Tangent(i, j));
            }
        }
    }
    if !out.is_empty() {
        return out;
    }
    for i in 0..n {
        for j in i + 1..n {
            if !ds.boundaries_cross(i, j) {
                continue;
            }
            for p in crossing_points(circles[i], circles[j]) {
                for (k, c) in circles.iter().enumerate() {
                    if k != i && k != j && ((p.0 - c.0).hypot(p.1 - c.1) - c.2).abs() <= eps {
                        let mut t = [i, j, k];
                        t.sort_unstable();
                        let deg = Degeneracy::TriplePoint(t[0], t[1], t[2]);
                        if !out.contains(&deg) {
                            out.push(deg);
                        }
                    }
                }
            }
        }
    }
    out
}

/// One vertex per disk; adjacent when the closed disks meet.
pub fn intersection_graph(ds: &DiskSet) -> Graph {
    let mut edges = Vec::new();
    for i in 0..ds.len() {
        for j in i + 1..ds.len() {
            let (a, b) = (&ds.disks[i], &ds.disks[j]);
            let sum = &a.r + &b.r;
            if a.center_dist_sq(b) <= &sum * &sum {
                edges.push((i, j));
            }
        }
    }
    Graph::new(ds.len(), &edges).expect("pairs are in range")
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;

    pub fn disks(list: &[(&str, &str, &str)]) -> DiskSet {
        DiskSet::new(list.iter().map(|&(x, y, r)| Disk::parse(x, y, r).unwrap()).collect())
    }

    #[test]
    fn parses_decimals_exactly() {
        assert_eq!(parse_decimal("1.5").unwrap(), BigRational::new(3.into(), 2.into()));
        assert_eq!(parse_decimal("-2").unwrap(), BigRational::from_integer((-2).into()));
        assert_eq!(parse_decimal("1e2").unwrap(), BigRational::from_integer(100.into()));
        assert_eq!(
            parse_decimal("0.1").unwrap() + parse_decimal("0.2").unwrap(),
            parse_decimal("0.3").unwrap()
        );
        assert!(parse_decimal("abc").is_err());
    }

    #[test]
    fn degeneracies() {
        let same = disks(&[("0", "0", "1"), ("0", "0", "1")]);
        assert_eq!(validate_disks(&same), vec![Degeneracy::Identical(0, 1)]);
        let touch = disks(&[("0", "0", "1"), ("2", "0", "1")]);
        assert_eq!(validate_disks(&touch), vec![Degeneracy::Tangent(0, 1)]);
        let inner = disks(&[("0", "0", "2"), ("1", "0", "1")]);
        assert_eq!(validate_disks(&inner), vec![Degeneracy::Tangent(0, 1)]);
        let generic = disks(&[("0", "0", "1"), ("1.1", "0.13", "1.05"), ("0.52", "0.97", "0.9")]);
        assert!(validate_disks(&generic).is_empty());
        // Three unit circles through the origin.
        let triple = disks(&[("1", "0", "1"), ("0", "1", "1"), ("-0.6", "-0.8", "1")]);
        assert!(validate_disks(&triple)
            .iter()
            .any(|d| matches!(d, Degeneracy::TriplePoint(0, 1, 2))));
        let concentric = disks(&[("0", "0", "1"), ("0", "0", "2")]);
        assert!(validate_disks(&concentric).is_empty());
        assert_eq!(
            validate_disks(&disks(&[("0", "0", "0")])),
            vec![Degeneracy::NonPositiveRadius(0)]
        );
    }

    #[test]
    fn intersection_graphs() {
        assert_eq!(intersection_graph(&disks(&[("0", "0", "1"), ("5", "0", "1")])).edge_count(), 0);
        assert_eq!(intersection_graph(&disks(&[("0", "0", "1"), ("1", "0", "1")])).edges(), &[(0, 1)]);
        let chain = disks(&[("0", "0", "1"), ("1.5", "0", "1"), ("3", "0", "1")]);
        assert_eq!(intersection_graph(&chain).edges(), &[(0, 1), (1, 2)]);
        let nested = disks(&[("0", "0", "3"), ("0.5", "0", "1")]);
        assert_eq!(intersection_graph(&nested).edges(), &[(0, 1)]);
    }
}
