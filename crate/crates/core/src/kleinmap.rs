//! Lines of PG(3,q) as points of the Klein quadric Q+(5,q).
//!
//! Plücker coordinates are taken in the order (p01, p02, p03, p23, p31, p12),
//! satisfying p01 p23 + p02 p31 + p03 p12 = 0. They are sent to the standard
//! hyperbolic form x0 x1 + x2 x3 + x4 x5 by
//! x = (p01, p23, p02, p31, p03, p12).

use std::collections::{BTreeMap, HashMap, HashSet};
use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{param, Error, Result};
use crate::gf::{Elem, Field};
use crate::gfcode::CodewordVec;
use crate::polarspace::{Family, PolarSpace};
use crate::projspace::{dot, ProjectiveSpace, Subspace};

/// Line index into `Klein::lines`, mapped to a nonzero GF(p) symbol.
pub type LineSymbolSet = BTreeMap<u32, u32>;

/// PG(3,q), its lines, and the Klein quadric they map to.
pub struct Klein {
    pg3: Arc<ProjectiveSpace>,
    quadric: PolarSpace,
    lines: Vec<Subspace>,
    line_points: Vec<Vec<u32>>,
    image: Vec<u32>,
    preimage: HashMap<u32, u32>,
    line_of: HashMap<Subspace, u32>,
}

/// Condition checked by `check_line_conditions`.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ParityMode {
    /// Planes and points see 0 or at least 2 lines, with symbol sums 0.
    DualCodeword,
    /// Planes and points see an odd number of lines.
    OddBlocking,
}

/// First failed condition with its witness.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LineViolation {
    /// Condition number: 1 plane count, 2 point count, 3 point sum, 4 plane sum.
    pub condition: u8,
    /// Plane (as dual point index) or point index of PG(3,q).
    pub witness: u32,
    pub count: usize,
    pub sum: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LineConditionReport {
    pub mode: ParityMode,
    pub violation: Option<LineViolation>,
}

impl LineConditionReport {
    pub fn passed(&self) -> bool {
        self.violation.is_none()
    }
}

/// A hyperbolic quadric of PG(3,q) given by its two reguli (line indices).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HyperbolicQuadric {
    pub regulus: Vec<u32>,
    pub opposite: Vec<u32>,
}

impl HyperbolicQuadric {
    pub fn lines(&self) -> impl Iterator<Item = u32> + '_ {
        self.regulus.iter().chain(&self.opposite).copied()
    }
}

impl Klein {
    pub fn new(q: u64) -> Result<Klein> {
        let field = Arc::new(Field::of_order(q)?);
        let pg3 = Arc::new(ProjectiveSpace::new(3, Arc::clone(&field))?);
        let quadric = PolarSpace::standard(Family::Hyperbolic, 5, field)?;
        let lines = pg3.subspaces(1)?;
        let line_points: Vec<Vec<u32>> = lines.par_iter().map(|l| pg3.subspace_points(l)).collect();
        let mut k = Klein {
            pg3,
            quadric,
            lines,
            line_points,
            image: Vec::new(),
            preimage: HashMap::new(),
            line_of: HashMap::new(),
        };
        k.image = k.lines.iter().map(|l| k.plucker(l)).collect();
        for (i, (&img, l)) in k.image.iter().zip(&k.lines).enumerate() {
            k.preimage.insert(img, i as u32);
            k.line_of.insert(l.clone(), i as u32);
        }
        if k.preimage.len() != k.lines.len() || k.image.len() != k.quadric.num_points() {
            return Err(Error::Inconsistency("Plücker map is not a bijection".into()));
        }
        Ok(k)
    }

    pub fn q(&self) -> u64 {
        self.pg3.q()
    }

    pub fn field(&self) -> &Field {
        self.pg3.field()
    }

    pub fn pg3(&self) -> &ProjectiveSpace {
        &self.pg3
    }

    /// The Klein quadric Q+(5,q) in standard coordinates.
    pub fn quadric(&self) -> &PolarSpace {
        &self.quadric
    }

    pub fn lines(&self) -> &[Subspace] {
        &self.lines
    }

    pub fn num_lines(&self) -> usize {
        self.lines.len()
    }

    pub fn line(&self, i: u32) -> &Subspace {
        &self.lines[i as usize]
    }

    pub fn line_points(&self, i: u32) -> &[u32] {
        &self.line_points[i as usize]
    }

    pub fn line_index(&self, l: &Subspace) -> Result<u32> {
        self.line_of
            .get(l)
            .copied()
            .ok_or_else(|| Error::Parameter("not a line of PG(3,q)".into()))
    }

    /// Index of the line through two distinct points.
    pub fn line_through(&self, a: u32, b: u32) -> Result<u32> {
        if a == b {
            return param("a line needs two distinct points");
        }
        self.line_index(&self.pg3.span_points(&[a, b]))
    }

    /// Plücker coordinates (p01, p02, p03, p23, p31, p12) of a line.
    pub fn plucker_coords(&self, l: &Subspace) -> [Elem; 6] {
        let f = self.field();
        let (x, y) = (&l.basis()[0], &l.basis()[1]);
        let p = |i: usize, j: usize| f.sub(f.mul(x[i], y[j]), f.mul(x[j], y[i]));
        [p(0, 1), p(0, 2), p(0, 3), p(2, 3), p(3, 1), p(1, 2)]
    }

    /// Global index (in PG(5,q)) of the Klein image of a line.
    pub fn plucker(&self, l: &Subspace) -> u32 {
        let [p01, p02, p03, p23, p31, p12] = self.plucker_coords(l);
        self.quadric
            .pg()
            .index_of(&[p01, p23, p02, p31, p03, p12])
            .expect("Plücker vector of a line is nonzero")
    }

    /// Klein image of line `i`.
    pub fn image(&self, i: u32) -> u32 {
        self.image[i as usize]
    }

    /// Line index of a point of the Klein quadric.
    pub fn line_of_point(&self, global: u32) -> Result<u32> {
        self.preimage
            .get(&global)
            .copied()
            .ok_or_else(|| Error::Parameter(format!("point {global} is not on the Klein quadric")))
    }

    /// The line with the given Klein image, computed from coordinates.
    pub fn inverse_plucker(&self, global: u32) -> Result<Subspace> {
        let v = self.quadric.pg().point(global);
        if !self.quadric.eval(v).is_zero() {
            return param(format!("point {global} is not on the Klein quadric"));
        }
        let f = self.field();
        let (p01, p23, p02, p31, p03, p12) = (v[0], v[1], v[2], v[3], v[4], v[5]);
        let z = Elem::ZERO;
        let m = vec![
            vec![z, p01, p02, p03],
            vec![f.neg(p01), z, p12, f.neg(p31)],
            vec![f.neg(p02), f.neg(p12), z, p23],
            vec![f.neg(p03), p31, f.neg(p23), z],
        ];
        let l = self.pg3.span_vectors(&m);
        if l.dim() != 1 {
            return Err(Error::Inconsistency("Plücker matrix does not have rank 2".into()));
        }
        Ok(l)
    }

    pub fn lines_meet(&self, a: u32, b: u32) -> bool {
        let (pa, pb) = (&self.line_points[a as usize], &self.line_points[b as usize]);
        pa.iter().any(|x| pb.binary_search(x).is_ok())
    }

    fn transversals(&self, l1: u32, l2: u32, l3: u32) -> Result<Vec<u32>> {
        let pg = &*self.pg3;
        let (s2, s3) = (self.line(l2), self.line(l3));
        self.line_points(l1)
            .iter()
            .map(|&x| {
                let plane = pg.join(&pg.point_subspace(x), s2);
                let y = pg.meet(&plane, s3);
                let yi = pg.subspace_points(&y);
                if yi.len() != 1 {
                    return Err(Error::Inconsistency("transversal construction failed".into()));
                }
                self.line_through(x, yi[0])
            })
            .collect()
    }

    /// The regulus through three pairwise skew lines, as sorted line indices.
    pub fn regulus_through(&self, l1: u32, l2: u32, l3: u32) -> Result<Vec<u32>> {
        if l1 == l2 || l1 == l3 || l2 == l3 {
            return param("regulus needs three distinct lines");
        }
        if self.lines_meet(l1, l2) || self.lines_meet(l1, l3) || self.lines_meet(l2, l3) {
            return param("regulus needs pairwise skew lines");
        }
        let t = self.transversals(l1, l2, l3)?;
        let mut r = self.transversals(t[0], t[1], t[2])?;
        r.sort_unstable();
        Ok(r)
    }

    /// All lines meeting every line of the regulus, by exhaustive filtering.
    pub fn opposite_regulus(&self, regulus: &[u32]) -> Vec<u32> {
        let qp = &self.quadric;
        let imgs: Vec<&[Elem]> = regulus.iter().map(|&l| qp.pg().point(self.image(l))).collect();
        let funcs: Vec<Vec<Elem>> = imgs.iter().map(|v| qp.functional(v)).collect();
        (0..self.lines.len() as u32)
            .filter(|&m| {
                !regulus.contains(&m) && {
                    let v = qp.pg().point(self.image(m));
                    funcs.iter().all(|f| dot(self.field(), f, v).is_zero())
                }
            })
            .collect()
    }

    /// The regular spread from field reduction of PG(1,q^2), listed in the
    /// order of the points (0:1), (1:t) of PG(1,q^2) with t ascending.
    pub fn regular_spread(&self) -> Result<Vec<u32>> {
        let small = self.field();
        let big = Field::of_order(self.q() * self.q())?;
        let phi = small.embed_into(&big)?;
        let omega = big
            .elements()
            .find(|e| !phi.contains(e))
            .expect("proper extension");
        // coordinates of every element of GF(q^2) in the basis {1, omega}
        let mut coords = vec![(Elem::ZERO, Elem::ZERO); big.order() as usize];
        for a in small.elements() {
            for b in small.elements() {
                let z = big.add(phi[a.rep() as usize], big.mul(phi[b.rep() as usize], omega));
                coords[z.rep() as usize] = (a, b);
            }
        }
        let vec4 = |u: Elem, v: Elem| {
            let (a, b) = coords[u.rep() as usize];
            let (c, d) = coords[v.rep() as usize];
            vec![a, b, c, d]
        };
        let mut pts: Vec<(Elem, Elem)> = vec![(Elem::ZERO, Elem::ONE)];
        pts.extend(big.elements().map(|t| (Elem::ONE, t)));
        let spread = pts
            .into_iter()
            .map(|(u, v)| {
                let l = self
                    .pg3
                    .span_vectors(&[vec4(u, v), vec4(big.mul(omega, u), big.mul(omega, v))]);
                self.line_index(&l)
            })
            .collect::<Result<Vec<u32>>>()?;
        if !self.is_line_partition(&spread) {
            return Err(Error::Inconsistency("field reduction did not give a spread".into()));
        }
        Ok(spread)
    }

    /// Whether the lines partition the points of PG(3,q).
    pub fn is_line_partition(&self, lines: &[u32]) -> bool {
        let mut seen = vec![false; self.pg3.num_points()];
        for &l in lines {
            for &x in self.line_points(l) {
                if std::mem::replace(&mut seen[x as usize], true) {
                    return false;
                }
            }
        }
        seen.iter().all(|&s| s)
    }

    /// q reguli of the spread through `l`, pairwise meeting only in `l` and
    /// covering the spread. Each regulus is returned sorted.
    pub fn reguli_partition_through(&self, spread: &[u32], l: u32) -> Result<Vec<Vec<u32>>> {
        if !spread.contains(&l) {
            return param("line is not in the spread");
        }
        let in_spread: HashSet<u32> = spread.iter().copied().collect();
        let mut used: HashSet<u32> = HashSet::new();
        let mut out = Vec::new();
        let mut rest: Vec<u32> = spread.iter().copied().filter(|&m| m != l).collect();
        rest.sort_unstable();
        while let Some(&m1) = rest.iter().find(|m| !used.contains(m)) {
            // only the regulus parallel to the earlier ones avoids used lines
            let mut found = None;
            for &m2 in rest.iter().filter(|&&m| m > m1 && !used.contains(&m)) {
                let r = self.regulus_through(l, m1, m2)?;
                let fits = r.iter().all(|x| in_spread.contains(x))
                    && r.iter().all(|x| *x == l || !used.contains(x));
                if fits {
                    found = Some(r);
                    break;
                }
            }
            let r = found.ok_or_else(|| {
                Error::NotFound("spread is not regular: no regulus partition through the line".into())
            })?;
            used.extend(r.iter().copied().filter(|&x| x != l));
            out.push(r);
        }
        Ok(out)
    }

    /// Dual plane coordinates in PG(3,q): plane i is {x : point(i) . x = 0}.
    fn line_in_plane(&self, line: u32, plane: u32) -> bool {
        let a = self.pg3.point(plane);
        self.line(line)
            .basis()
            .iter()
            .all(|b| dot(self.field(), a, b).is_zero())
    }

    /// Checks the plane/point incidence conditions of a set of lines.
    pub fn check_line_conditions(&self, set: &LineSymbolSet, mode: ParityMode) -> LineConditionReport {
        let p = self.field().p();
        let n = self.pg3.num_points() as u32;
        let entries: Vec<(u32, u32)> = set
            .iter()
            .map(|(&l, &s)| (l, s % p))
            .filter(|&(_, s)| s != 0)
            .collect();
        let judge = |count: usize, sum: u32, count_cond: u8, sum_cond: u8, w: u32| match mode {
            ParityMode::DualCodeword => {
                if count == 1 {
                    Some(LineViolation { condition: count_cond, witness: w, count, sum })
                } else if sum != 0 {
                    Some(LineViolation { condition: sum_cond, witness: w, count, sum })
                } else {
                    None
                }
            }
            ParityMode::OddBlocking => (count % 2 == 0)
                .then_some(LineViolation { condition: count_cond, witness: w, count, sum }),
        };
        let mut first: Option<LineViolation> = None;
        for plane in 0..n {
            let (mut c, mut s) = (0, 0);
            for &(l, sym) in &entries {
                if self.line_in_plane(l, plane) {
                    c += 1;
                    s = (s + sym) % p;
                }
            }
            if let Some(v) = judge(c, s, 1, 4, plane) {
                first = Some(v);
                break;
            }
        }
        for x in 0..n {
            let (mut c, mut s) = (0, 0);
            for &(l, sym) in &entries {
                if self.line_points(l).binary_search(&x).is_ok() {
                    c += 1;
                    s = (s + sym) % p;
                }
            }
            if let Some(v) = judge(c, s, 2, 3, x) {
                // report the lowest-numbered condition among the first failures
                if first.as_ref().is_none_or(|f| v.condition < f.condition) {
                    first = Some(v);
                }
                break;
            }
        }
        LineConditionReport { mode, violation: first }
    }

    /// Codeword on the points of Q+(5,q) carrying each line's symbol on its image.
    pub fn lineset_to_codeword(&self, set: &LineSymbolSet) -> CodewordVec {
        let qp = &self.quadric;
        let mut c = CodewordVec::zero(qp.num_points(), qp.p());
        for (&l, &s) in set {
            let col = qp.local_index(self.image(l)).expect("image lies on the quadric");
            c.set(col, s);
        }
        c
    }

    /// Every hyperbolic quadric of PG(3,q), ordered by their sorted reguli.
    /// Each regulus is found from its three smallest lines.
    pub fn hyperbolic_quadrics(&self) -> Result<Vec<HyperbolicQuadric>> {
        let n = self.lines.len() as u32;
        let triples: Vec<Vec<u32>> = (0..n)
            .into_par_iter()
            .flat_map_iter(|a| {
                let mut found = Vec::new();
                for b in a + 1..n {
                    if self.lines_meet(a, b) {
                        continue;
                    }
                    for c in b + 1..n {
                        if self.lines_meet(a, c) || self.lines_meet(b, c) {
                            continue;
                        }
                        let r = self.regulus_through(a, b, c).expect("skew triple");
                        if r[0] == a && r[1] == b && r[2] == c {
                            found.push(r);
                        }
                    }
                }
                found
            })
            .collect();
        let mut quads: Vec<HyperbolicQuadric> = triples
            .into_par_iter()
            .filter_map(|r| {
                let opp = self.opposite_regulus(&r);
                // keep each quadric once, from its regulus with the smaller first line
                (r[0] < opp[0]).then_some(HyperbolicQuadric {
                    regulus: r,
                    opposite: opp,
                })
            })
            .collect();
        quads.sort();
        Ok(quads)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basic_plucker_images() {
        let k = Klein::new(2).unwrap();
        let pg = k.pg3();
        let e = |i: usize| {
            let mut v = vec![Elem::ZERO; 4];
            v[i] = Elem::ONE;
            v
        };
        let l01 = pg.span_vectors(&[e(0), e(1)]);
        let c = k.plucker_coords(&l01);
        assert_eq!(c, [Elem::ONE, Elem::ZERO, Elem::ZERO, Elem::ZERO, Elem::ZERO, Elem::ZERO]);
        let l23 = pg.span_vectors(&[e(2), e(3)]);
        let c = k.plucker_coords(&l23);
        assert!(c.iter().enumerate().all(|(i, x)| (i == 3) == !x.is_zero()));
        let back = k.inverse_plucker(k.plucker(&l01)).unwrap();
        assert_eq!(back, l01);
    }

    #[test]
    fn regulus_and_opposite() {
        let k = Klein::new(3).unwrap();
        let spread = k.regular_spread().unwrap();
        let r = k.regulus_through(spread[0], spread[1], spread[2]).unwrap();
        assert_eq!(r.len(), 4);
        let opp = k.opposite_regulus(&r);
        assert_eq!(opp.len(), 4);
        assert_eq!(k.opposite_regulus(&opp), r);
        let mut pts: Vec<u32> = r.iter().flat_map(|&l| k.line_points(l).to_vec()).collect();
        pts.sort_unstable();
        pts.dedup();
        assert_eq!(pts.len(), 16);
    }

    #[test]
    fn spread_partition_q2_q3() {
        for q in [2u64, 3, 4] {
            let k = Klein::new(q).unwrap();
            let s = k.regular_spread().unwrap();
            assert_eq!(s.len() as u64, q * q + 1);
            let parts = k.reguli_partition_through(&s, s[0]).unwrap();
            assert_eq!(parts.len() as u64, q);
        }
    }
}
