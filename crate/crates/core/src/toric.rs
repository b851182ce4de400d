//! Two-dimensional lattice polytopes: polar duality, lattice points and
//! anticanonical section monomials.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt::Write;

use num_integer::Integer;

use crate::error::{Error, Result};

/// Integer 2-vector.
pub type Vec2 = (i64, i64);

/// Convex lattice polygon with the origin strictly inside.
///
/// Vertices are stored counterclockwise without collinear triples, starting
/// from the lexicographically smallest one.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LatticePolytope2D {
    vertices: Vec<Vec2>,
}

fn cross(o: Vec2, a: Vec2, b: Vec2) -> i128 {
    (a.0 - o.0) as i128 * (b.1 - o.1) as i128 - (a.1 - o.1) as i128 * (b.0 - o.0) as i128
}

/// Counterclockwise convex hull without collinear points (monotone chain).
fn convex_hull(points: &[Vec2]) -> Vec<Vec2> {
    let mut pts = points.to_vec();
    pts.sort_unstable();
    pts.dedup();
    if pts.len() < 3 {
        return pts;
    }
    let mut hull: Vec<Vec2> = Vec::with_capacity(2 * pts.len());
    for pass in 0..2 {
        let start = hull.len();
        let iter: &mut dyn Iterator<Item = &Vec2> =
            if pass == 0 { &mut pts.iter() } else { &mut pts.iter().rev() };
        for &p in iter {
            while hull.len() >= start + 2 && cross(hull[hull.len() - 2], hull[hull.len() - 1], p) <= 0 {
                hull.pop();
            }
            hull.push(p);
        }
        hull.pop();
    }
    hull
}

impl LatticePolytope2D {
    /// Convex hull of `points`; fails unless the origin is strictly inside.
    pub fn new(points: &[Vec2]) -> Result<Self> {
        let mut hull = convex_hull(points);
        if hull.len() < 3 {
            return Err(Error::InvalidPolytope(format!("degenerate hull of {points:?}")));
        }
        let n = hull.len();
        for i in 0..n {
            if cross(hull[i], hull[(i + 1) % n], (0, 0)) <= 0 {
                return Err(Error::InvalidPolytope("origin is not an interior point".into()));
            }
        }
        let first = (0..n).min_by_key(|&i| hull[i]).expect("nonempty");
        hull.rotate_left(first);
        Ok(LatticePolytope2D { vertices: hull })
    }

    pub fn vertices(&self) -> &[Vec2] {
        &self.vertices
    }

    /// Edges as consecutive vertex pairs, counterclockwise.
    fn edges(&self) -> impl Iterator<Item = (Vec2, Vec2)> + '_ {
        let n = self.vertices.len();
        (0..n).map(move |i| (self.vertices[i], self.vertices[(i + 1) % n]))
    }

    /// Primitive inner normal `u` of each edge with its offset `h > 0`, so
    /// the edge lies on `⟨u, x⟩ = −h`.
    fn facets(&self) -> Vec<(Vec2, i64)> {
        self.edges()
            .map(|(a, b)| {
                let (dx, dy) = (b.0 - a.0, b.1 - a.1);
                let g = dx.gcd(&dy);
                // left of a counterclockwise edge is inside
                let u = (-dy / g, dx / g);
                (u, -(u.0 * a.0 + u.1 * a.1))
            })
            .collect()
    }

    /// Primitive inner facet normals, counterclockwise.
    pub fn inner_normals(&self) -> Vec<Vec2> {
        self.facets().into_iter().map(|(u, _)| u).collect()
    }

    pub fn contains(&self, p: Vec2) -> bool {
        self.edges().all(|(a, b)| cross(a, b, p) >= 0)
    }
}

/// `{y : ⟨y, x⟩ ≥ −1 for all x ∈ P}`, which must again be a lattice polygon.
pub fn polar_dual(p: &LatticePolytope2D) -> Result<LatticePolytope2D> {
    let mut verts = Vec::new();
    for (u, h) in p.facets() {
        if u.0 % h != 0 || u.1 % h != 0 {
            return Err(Error::NotReflexive(format!("({}/{h}, {}/{h})", u.0, u.1)));
        }
        verts.push((u.0 / h, u.1 / h));
    }
    LatticePolytope2D::new(&verts)
}

/// All lattice points of `p`, boundary included, in lexicographic order.
pub fn lattice_points(p: &LatticePolytope2D) -> Vec<Vec2> {
    let xs = p.vertices.iter().map(|v| v.0);
    let ys = p.vertices.iter().map(|v| v.1);
    let (x0, x1) = (xs.clone().min().unwrap_or(0), xs.max().unwrap_or(0));
    let (y0, y1) = (ys.clone().min().unwrap_or(0), ys.max().unwrap_or(0));
    let mut out = Vec::new();
    for x in x0..=x1 {
        for y in y0..=y1 {
            if p.contains((x, y)) {
                out.push((x, y));
            }
        }
    }
    out
}

/// One section: a lattice point and its exponent per ray.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Monomial {
    pub point: Vec2,
    pub exponents: Vec<u64>,
}

impl Monomial {
    /// Product notation in variables `{var}1, {var}2, …`, e.g. `z1^3` or
    /// `z1*z2*z3`.
    pub fn render(&self, var: &str) -> String {
        let mut out = String::new();
        for (i, &e) in self.exponents.iter().enumerate() {
            if e == 0 {
                continue;
            }
            if !out.is_empty() {
                out.push('*');
            }
            let _ = write!(out, "{var}{}", i + 1);
            if e > 1 {
                let _ = write!(out, "^{e}");
            }
        }
        if out.is_empty() {
            out.push('1');
        }
        out
    }
}

/// Sections of the anticanonical bundle, one per lattice point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonomialList {
    pub rays: Vec<Vec2>,
    pub entries: Vec<Monomial>,
}

impl MonomialList {
    /// Total degree of every entry, if they all agree.
    pub fn common_degree(&self) -> Option<u64> {
        let mut degs = self.entries.iter().map(|m| m.exponents.iter().sum::<u64>());
        let first = degs.next()?;
        degs.all(|d| d == first).then_some(first)
    }
}

/// Exponent vectors `(⟨m, u_ρ⟩ + 1)_ρ` for the lattice points `m` of `p`.
///
/// `rays` must be the inner facet normals of `p`, in any order; the order
/// given fixes the variable numbering.
pub fn anticanonical_sections(p: &LatticePolytope2D, rays: &[Vec2]) -> Result<MonomialList> {
    let mut given = rays.to_vec();
    let mut expected = p.inner_normals();
    given.sort_unstable();
    expected.sort_unstable();
    if given != expected {
        return Err(Error::RaysMismatch(format!("{rays:?} vs facet normals {expected:?}")));
    }
    let mut entries = Vec::new();
    for m in lattice_points(p) {
        let mut exponents = Vec::with_capacity(rays.len());
        for u in rays {
            let e = m.0 * u.0 + m.1 * u.1 + 1;
            if e < 0 {
                return Err(Error::RaysMismatch(format!("point {m:?} gives exponent {e} on ray {u:?}")));
            }
            exponents.push(e as u64);
        }
        entries.push(Monomial { point: m, exponents });
    }
    Ok(MonomialList { rays: rays.to_vec(), entries })
}
