//! Newton polygons over `F_p(t)` with the `t`-adic valuation, and the
//! fixed-point and periodic-point valuation bounds they certify.
//!
//! Convention: the polygon is the lower convex hull of the points
//! `(i, v(c_i))`, and a segment of slope `s` accounts for roots of valuation
//! `-s`. A positive valuation means a root inside the open unit disk.

use num_rational::Ratio;
use serde::{Serialize, Serializer};

use crate::coeff::{rat_valuation, Coeff, FpUniPoly, Prime, RationalFunction};
use crate::error::{Error, Result};
use crate::residue::{pind_closed, LambdaSet};
use crate::series::TruncatedSeries;
use crate::wild::WildSeries;

/// A polynomial `c_0 + c_1 z + ... + c_d z^d` with `c_d != 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct ValuedPoly {
    coeffs: Vec<RationalFunction>,
}

impl ValuedPoly {
    pub fn new(mut coeffs: Vec<RationalFunction>) -> Result<Self> {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            return Err(Error::ZeroPolynomial);
        }
        let p = coeffs[0].prime();
        if let Some(c) = coeffs.iter().find(|c| c.prime() != p) {
            return Err(Error::ModulusMismatch(p.get(), c.prime().get()));
        }
        Ok(ValuedPoly { coeffs })
    }

    pub fn from_polys(coeffs: Vec<FpUniPoly>) -> Result<Self> {
        Self::new(coeffs.into_iter().map(RationalFunction::from_poly).collect())
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn prime(&self) -> Prime {
        self.coeffs[0].prime()
    }

    pub fn coeffs(&self) -> &[RationalFunction] {
        &self.coeffs
    }

    /// `v(c_i)`, `None` for a zero coefficient (valuation `+inf`).
    pub fn valuation(&self, i: usize) -> Option<i64> {
        self.coeffs.get(i).and_then(|c| c.valuation())
    }

    /// Multiply every coefficient by `c`.
    pub fn scale(&self, c: &RationalFunction) -> Result<Self> {
        Self::new(self.coeffs.iter().map(|x| x.mul(c)).collect())
    }
}

fn ser_ratio<S: Serializer>(r: &Ratio<i64>, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(r)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Segment {
    /// The negative of the slope.
    #[serde(serialize_with = "ser_ratio")]
    pub root_valuation: Ratio<i64>,
    /// Horizontal length: the number of roots with this valuation.
    pub multiplicity: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NewtonPolygon {
    pub vertices: Vec<(usize, i64)>,
    /// Ordered by increasing slope, i.e. decreasing root valuation.
    pub segments: Vec<Segment>,
    /// Multiplicity of the root `z = 0`.
    pub zero_root_multiplicity: usize,
}

impl NewtonPolygon {
    /// Root valuations that lie in the open unit disk.
    pub fn positive_roots(&self) -> impl Iterator<Item = &Segment> {
        self.segments
            .iter()
            .filter(|s| s.root_valuation > Ratio::from_integer(0))
    }

    /// Leftmost vertex at height `v`.
    pub fn first_vertex_at(&self, v: i64) -> Option<usize> {
        self.vertices.iter().find(|&&(_, h)| h == v).map(|&(i, _)| i)
    }
}

fn cross(o: (usize, i64), a: (usize, i64), b: (usize, i64)) -> i128 {
    let (ox, oy) = (o.0 as i128, o.1 as i128);
    (a.0 as i128 - ox) * (b.1 as i128 - oy) - (a.1 as i128 - oy) * (b.0 as i128 - ox)
}

/// Lower convex hull of the finite-valuation points, by a monotone-chain scan.
pub fn newton_polygon(poly: &ValuedPoly) -> Result<NewtonPolygon> {
    let points: Vec<(usize, i64)> = (0..=poly.degree())
        .filter_map(|i| poly.valuation(i).map(|v| (i, v)))
        .collect();
    let zero_root_multiplicity = points.first().ok_or(Error::ZeroPolynomial)?.0;
    let mut hull: Vec<(usize, i64)> = Vec::with_capacity(points.len());
    for &pt in &points {
        while hull.len() >= 2 && cross(hull[hull.len() - 2], hull[hull.len() - 1], pt) <= 0 {
            hull.pop();
        }
        hull.push(pt);
    }
    let segments = hull
        .windows(2)
        .map(|w| {
            let width = (w[1].0 - w[0].0) as i64;
            Segment {
                root_valuation: Ratio::new(w[0].1 - w[1].1, width),
                multiplicity: width as usize,
            }
        })
        .collect();
    Ok(NewtonPolygon {
        vertices: hull,
        segments,
        zero_root_multiplicity,
    })
}

/// Order of the reduction mod `t`; only meaningful for integral coefficients.
pub fn weierstrass_degree(poly: &ValuedPoly) -> Option<usize> {
    (0..=poly.degree()).find(|&i| poly.valuation(i) == Some(0))
}

/// `q` and `v(a)` for `f = z(1 + a z^q + ...)` with integral coefficients.
fn wild_shape(f: &ValuedPoly) -> Result<(usize, i64)> {
    let c = f.coeffs();
    if !c[0].is_zero() || c.len() < 2 || !c[1].is_one() {
        return Err(Error::ShapeViolation("expected f(0) = 0 and f'(0) = 1".into()));
    }
    if let Some(i) = (0..c.len()).find(|&i| f.valuation(i).is_some_and(|v| v < 0)) {
        return Err(Error::ShapeViolation(format!(
            "coefficient of z^{i} is not integral"
        )));
    }
    let m = (2..c.len())
        .find(|&i| !c[i].is_zero())
        .ok_or_else(|| Error::ShapeViolation("f = z has no isolated fixed point".into()))?;
    Ok((m - 1, f.valuation(m).expect("nonzero")))
}

#[derive(Debug, Clone, Serialize)]
pub struct FixedPointReport {
    pub q: usize,
    pub v_a: i64,
    pub polygon: NewtonPolygon,
    /// Every positive root valuation is at most `v(a)`.
    pub pass: bool,
}

/// Valuations of the nonzero fixed points: the roots of `(f(z) - z)/z^{q+1}`.
pub fn fixed_point_valuations(f: &ValuedPoly) -> Result<FixedPointReport> {
    let (q, v_a) = wild_shape(f)?;
    let reduced = ValuedPoly::new(f.coeffs()[q + 1..].to_vec())?;
    let polygon = newton_polygon(&reduced)?;
    let bound = Ratio::from_integer(v_a);
    let pass = polygon.positive_roots().all(|s| s.root_valuation <= bound);
    Ok(FixedPointReport { q, v_a, polygon, pass })
}

/// Dense polynomials in `z` over `F_p[t]`.
mod zpoly {
    use crate::coeff::{FpUniPoly, Prime};
    use crate::error::{Error, Result};

    pub type ZPoly = Vec<FpUniPoly>;

    pub fn trim(mut a: ZPoly) -> ZPoly {
        while a.len() > 1 && a.last().is_some_and(|c| c.is_zero()) {
            a.pop();
        }
        a
    }

    pub fn mul(a: &ZPoly, b: &ZPoly, p: Prime) -> ZPoly {
        let mut out = vec![FpUniPoly::zero(p); a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                if !y.is_zero() {
                    out[i + j] = out[i + j].add(&x.mul(y));
                }
            }
        }
        trim(out)
    }

    /// `a(b(z))` by Horner's rule.
    pub fn compose(a: &ZPoly, b: &ZPoly, p: Prime) -> ZPoly {
        let mut acc: ZPoly = vec![a.last().cloned().unwrap_or_else(|| FpUniPoly::zero(p))];
        for c in a.iter().rev().skip(1) {
            acc = mul(&acc, b, p);
            acc[0] = acc[0].add(c);
        }
        trim(acc)
    }

    /// Exact quotient `a / b` in `F_p[t][z]`.
    pub fn div_exact(a: &ZPoly, b: &ZPoly) -> Result<ZPoly> {
        let b = trim(b.clone());
        let db = b.len() - 1;
        let lead = &b[db];
        let mut rem = trim(a.clone());
        if rem.len() <= db {
            return if rem.iter().all(|c| c.is_zero()) {
                Ok(vec![FpUniPoly::zero(lead.prime())])
            } else {
                Err(Error::DivisionFailure("dividend has lower degree".into()))
            };
        }
        let mut quot = vec![FpUniPoly::zero(lead.prime()); rem.len() - db];
        for shift in (0..quot.len()).rev() {
            let top = &rem[shift + db];
            if top.is_zero() {
                continue;
            }
            let c = top.div_exact(lead)?;
            for (j, y) in b.iter().enumerate() {
                if !y.is_zero() {
                    rem[shift + j] = rem[shift + j].sub(&c.mul(y));
                }
            }
            quot[shift] = c;
        }
        if rem.iter().any(|c| !c.is_zero()) {
            return Err(Error::DivisionFailure("nonzero remainder".into()));
        }
        Ok(trim(quot))
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct PeriodicPointReport {
    pub q: usize,
    pub ell: usize,
    pub v_a: i64,
    pub v_pind_1: i64,
    /// `v(a) + v(pind_1)/p`.
    #[serde(serialize_with = "ser_ratio")]
    pub bound: Ratio<i64>,
    /// Polygon of `(f^p(z) - z)/(f(z) - z)`.
    pub polygon: NewtonPolygon,
    /// `i_1(f)` read from `f^p - z`.
    pub i_1: usize,
    /// `v(δ_1) - v(δ_0) = p v(a) + v(pind_1)`, checked when `i_1 = qp + ℓ`.
    pub delta_check: Option<bool>,
    pub pass: bool,
}

/// Bound the valuations of the points of period dividing `p` (other than
/// the fixed points) by `v(a) + v(pind_1)/p`.
pub fn periodic_point_bound(f: &ValuedPoly, p: Prime) -> Result<PeriodicPointReport> {
    if f.prime() != p {
        return Err(Error::ModulusMismatch(f.prime().get(), p.get()));
    }
    let (q, v_a) = wild_shape(f)?;
    let pu = p.get() as usize;
    if q <= pu || q % pu == 0 {
        return Err(Error::PreconditionViolation(format!(
            "needs q >= p + 1 and p not dividing q (q = {q}, p = {pu})"
        )));
    }
    let polys: Vec<FpUniPoly> = f
        .coeffs()
        .iter()
        .enumerate()
        .map(|(i, c)| {
            c.as_polynomial().cloned().ok_or_else(|| {
                Error::ShapeViolation(format!("coefficient of z^{i} is not a polynomial in t"))
            })
        })
        .collect::<Result<_>>()?;

    let ell = LambdaSet::new(q, p.get()).ell(1)?;
    let prec = f.degree().max(q + ell + 1);
    let zero = RationalFunction::from_poly(FpUniPoly::zero(p));
    let series = TruncatedSeries::from_terms(
        &zero,
        prec,
        f.coeffs()
            .iter()
            .enumerate()
            .map(|(i, c)| (i, c.clone())),
    );
    let pind_1 = pind_closed(&WildSeries::new(series)?, 1)?;
    if pind_1.is_zero() {
        return Err(Error::IndexVanishes);
    }
    let v_pind_1 = rat_valuation(&pind_1)?;

    let mut iterate = polys.clone();
    for _ in 1..pu {
        iterate = zpoly::compose(&polys, &iterate, p);
    }
    let minus_z = |mut a: zpoly::ZPoly| {
        if a.len() < 2 {
            a.resize(2, FpUniPoly::zero(p));
        }
        a[1] = a[1].sub(&FpUniPoly::one(p));
        zpoly::trim(a)
    };
    let num = minus_z(iterate);
    let den = minus_z(polys);
    let quot = zpoly::div_exact(&num, &den)?;
    let polygon = newton_polygon(&ValuedPoly::from_polys(quot)?)?;

    let i_1 = num
        .iter()
        .position(|c| !c.is_zero())
        .ok_or_else(|| Error::InvariantViolation("f^p = z".into()))?
        - 1;
    let delta_check = (i_1 == q * pu + ell).then(|| {
        let v_delta_1 = num[i_1 + 1].ord_t().expect("nonzero") as i64;
        v_delta_1 - v_a == pu as i64 * v_a + v_pind_1
    });
    let bound = Ratio::from_integer(v_a) + Ratio::new(v_pind_1, pu as i64);
    let pass = polygon.positive_roots().all(|s| s.root_valuation <= bound) && delta_check != Some(false);
    Ok(PeriodicPointReport {
        q,
        ell,
        v_a,
        v_pind_1,
        bound,
        polygon,
        i_1,
        delta_check,
        pass,
    })
}
