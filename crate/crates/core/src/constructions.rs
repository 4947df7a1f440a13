//! Explicit dual codewords: reguli and pencils in PG(3,q) through the Klein
//! correspondence, complements of ovoids and cones, polar pairs, and the
//! symplectic examples in W(q).

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{param, Error, Result};
use crate::gfcode::{build_incidence, is_dual_codeword, CodewordVec, DualCheck};
use crate::kleinmap::{Klein, LineSymbolSet, ParityMode};
use crate::polarspace::{find_subspace, point_count, Family, PlaneSection, PolarSpace};
use crate::projspace::{theta, Subspace};
use crate::verify::{elliptic_section_ovoid, find_ovoid, is_ovoid};

/// Budget for configuration searches (subspaces tried).
const SEARCH_BUDGET: usize = 5_000_000;

/// The code C_k(P)^perp a codeword belongs to.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CodeSpec {
    pub family: Family,
    pub n: usize,
    pub q: u64,
    pub k: usize,
}

impl CodeSpec {
    pub fn polar_space(&self) -> Result<PolarSpace> {
        PolarSpace::new(self.family, self.n, self.q)
    }

    pub fn label(&self) -> String {
        let field = if self.family == Family::Hermitian {
            format!("{}^2", self.q)
        } else {
            self.q.to_string()
        };
        format!("C_{}({}({},{}))^perp", self.k, self.family.symbol(), self.n, field)
    }
}

/// A constructed codeword with its closed-form weight and configuration.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ConstructionResult {
    pub name: String,
    pub code: CodeSpec,
    pub codeword: CodewordVec,
    pub predicted_weight: u64,
    /// The closed form the prediction was evaluated from.
    pub formula: String,
    pub witness: String,
}

/// Weight and dual-membership verdict of a construction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub weight: u64,
    pub weight_matches: bool,
    pub dual: DualCheck,
}

impl Check {
    pub fn passed(&self) -> bool {
        self.weight_matches && self.dual.passed()
    }
}

impl ConstructionResult {
    pub fn weight(&self) -> u64 {
        self.codeword.weight() as u64
    }

    /// Checks the weight and every row of the incidence matrix of `ps`,
    /// which must be the standard space named by `self.code`.
    pub fn check_against(&self, ps: &PolarSpace) -> Result<Check> {
        if ps.family() != self.code.family || ps.n() != self.code.n || ps.q() != self.code.q {
            return param(format!("{} is not the space of {}", ps.label(), self.code.label()));
        }
        let a = build_incidence(ps, self.code.k)?;
        let dual = is_dual_codeword(&self.codeword, &a)?;
        Ok(Check {
            weight: self.weight(),
            weight_matches: self.weight() == self.predicted_weight,
            dual,
        })
    }

    pub fn check(&self) -> Result<Check> {
        self.check_against(&self.code.polar_space()?)
    }
}

fn symbol(p: u32, alpha: u32) -> Result<(u32, u32)> {
    let a = alpha % p;
    if a == 0 {
        return param(format!("symbol {alpha} is zero in GF({p})"));
    }
    Ok((a, p - a))
}

fn require_even(q: u64, what: &str) -> Result<()> {
    if q % 2 != 0 {
        return param(format!("{what} needs q even, got q={q}"));
    }
    Ok(())
}

fn points_codeword(ps: &PolarSpace, pts: &[u32], sym: u32, c: &mut CodewordVec) -> Result<()> {
    for &x in pts {
        let col = ps
            .local_index(x)
            .ok_or_else(|| Error::Inconsistency(format!("point {x} is not on {}", ps.label())))?;
        c.add_at(col, sym);
    }
    Ok(())
}

fn complement_codeword(ps: &PolarSpace, removed: &[u32]) -> CodewordVec {
    let set: BTreeSet<u32> = removed.iter().copied().collect();
    let cols = ps
        .points()
        .iter()
        .enumerate()
        .filter(|(_, g)| !set.contains(g))
        .map(|(i, _)| i as u32);
    CodewordVec::indicator(ps.num_points(), ps.p(), cols, 1)
}

fn lines_text(lines: impl IntoIterator<Item = u32>) -> String {
    let v: Vec<String> = lines.into_iter().map(|l| l.to_string()).collect();
    format!("lines [{}]", v.join(", "))
}

fn klein_code(q: u64) -> CodeSpec {
    CodeSpec {
        family: Family::Hyperbolic,
        n: 5,
        q,
        k: 2,
    }
}

/// First three pairwise skew lines in index order.
fn first_skew_triple(k: &Klein) -> Result<(u32, u32, u32)> {
    let n = k.num_lines() as u32;
    let a = 0;
    for b in 1..n {
        if k.lines_meet(a, b) {
            continue;
        }
        for c in b + 1..n {
            if !k.lines_meet(a, c) && !k.lines_meet(b, c) {
                return Ok((a, b, c));
            }
        }
    }
    Err(Error::NotFound("no three skew lines".into()))
}

/// Lines of one regulus get alpha, lines of the opposite regulus get -alpha.
pub fn two_reguli(k: &Klein, alpha: u32) -> Result<ConstructionResult> {
    let q = k.q();
    let (pos, neg) = symbol(k.field().p(), alpha)?;
    let (a, b, c) = first_skew_triple(k)?;
    let reg = k.regulus_through(a, b, c)?;
    let opp = k.opposite_regulus(&reg);
    let mut set = LineSymbolSet::new();
    set.extend(reg.iter().map(|&l| (l, pos)));
    set.extend(opp.iter().map(|&l| (l, neg)));
    Ok(ConstructionResult {
        name: "two-reguli".into(),
        code: klein_code(q),
        codeword: k.lineset_to_codeword(&set),
        predicted_weight: 2 * q + 2,
        formula: "2q+2".into(),
        witness: format!("regulus {:?}, opposite {:?}", reg, opp),
    })
}

/// Lines through P in pi1 and through R in pi2 get beta, lines through P in
/// pi2 and through R in pi1 get -beta; PR itself is left out. Points and
/// planes are indices into PG(3,q) (planes as dual coordinates).
pub fn two_pencils_at(k: &Klein, p_pt: u32, r_pt: u32, pi1: u32, pi2: u32, beta: u32) -> Result<ConstructionResult> {
    let q = k.q();
    let pg = k.pg3();
    let (pos, neg) = symbol(k.field().p(), beta)?;
    let n = pg.num_points() as u32;
    if p_pt >= n || r_pt >= n || pi1 >= n || pi2 >= n {
        return param("point or plane index out of range");
    }
    if p_pt == r_pt || pi1 == pi2 {
        return param("two pencils need P != R and two distinct planes");
    }
    let pr = k.line_through(p_pt, r_pt)?;
    let plane1 = pg.hyperplane(pg.point(pi1));
    let plane2 = pg.hyperplane(pg.point(pi2));
    let pr_line = k.line(pr).clone();
    if !pg.is_subspace_of(&pr_line, &plane1) || !pg.is_subspace_of(&pr_line, &plane2) {
        return param("both planes must contain the line PR");
    }
    let pencil = |x: u32, plane: &Subspace| -> Vec<u32> {
        (0..k.num_lines() as u32)
            .filter(|&l| l != pr && k.line_points(l).binary_search(&x).is_ok())
            .filter(|&l| pg.is_subspace_of(k.line(l), plane))
            .collect()
    };
    let mut set = LineSymbolSet::new();
    for (x, plane, s) in [
        (p_pt, &plane1, pos),
        (r_pt, &plane2, pos),
        (p_pt, &plane2, neg),
        (r_pt, &plane1, neg),
    ] {
        for l in pencil(x, plane) {
            set.insert(l, s);
        }
    }
    Ok(ConstructionResult {
        name: "two-pencils".into(),
        code: klein_code(q),
        codeword: k.lineset_to_codeword(&set),
        predicted_weight: 4 * q,
        formula: "4q".into(),
        witness: format!("P={p_pt}, R={r_pt}, planes {pi1} and {pi2} through line {pr}"),
    })
}

/// Two pencils at the points 0 and 1 of PG(3,q) and the first two planes
/// through their join.
pub fn two_pencils(k: &Klein, beta: u32) -> Result<ConstructionResult> {
    let pg = k.pg3();
    let f = pg.field();
    let (p_pt, r_pt) = (0, 1);
    let planes: Vec<u32> = (0..pg.num_points() as u32)
        .filter(|&h| {
            let a = pg.point(h);
            crate::projspace::dot(f, a, pg.point(p_pt)).is_zero()
                && crate::projspace::dot(f, a, pg.point(r_pt)).is_zero()
        })
        .take(2)
        .collect();
    two_pencils_at(k, p_pt, r_pt, planes[0], planes[1], beta)
}

/// Outcome of the search for two hyperbolic quadrics sharing `common` lines.
#[derive(Clone, Debug)]
pub enum CombinationOutcome {
    Found(ConstructionResult),
    NotFound { common: usize, pairs_tried: u64 },
}

/// Sum of two regulus codewords whose quadrics share exactly `common` lines,
/// oriented so that the shared lines cancel. The first such pair in the
/// canonical order of quadrics is used.
pub fn regulus_combination(k: &Klein, common: usize, alpha: u32) -> Result<CombinationOutcome> {
    let q = k.q();
    if common > 4 {
        return param("two distinct hyperbolic quadrics share at most 4 lines");
    }
    if q > 3 {
        return Err(Error::Resource(format!(
            "hyperbolic quadric enumeration is limited to q <= 3, got q={q}"
        )));
    }
    let (pos, neg) = symbol(k.field().p(), alpha)?;
    let quads = k.hyperbolic_quadrics()?;
    let sets: Vec<BTreeSet<u32>> = quads.iter().map(|h| h.lines().collect()).collect();
    let mut tried = 0u64;
    for i in 0..quads.len() {
        for j in i + 1..quads.len() {
            tried += 1;
            if sets[i].intersection(&sets[j]).count() != common {
                continue;
            }
            let (h1, h2) = (&quads[i], &quads[j]);
            let mut c1 = LineSymbolSet::new();
            c1.extend(h1.regulus.iter().map(|&l| (l, pos)));
            c1.extend(h1.opposite.iter().map(|&l| (l, neg)));
            let cw1 = k.lineset_to_codeword(&c1);
            let mut best: Option<CodewordVec> = None;
            for flip in [false, true] {
                let (a, b) = if flip { (pos, neg) } else { (neg, pos) };
                let mut c2 = LineSymbolSet::new();
                c2.extend(h2.regulus.iter().map(|&l| (l, a)));
                c2.extend(h2.opposite.iter().map(|&l| (l, b)));
                let sum = cw1.sum(&k.lineset_to_codeword(&c2));
                if best.as_ref().is_none_or(|b| sum.weight() < b.weight()) {
                    best = Some(sum);
                }
            }
            let predicted = 4 * q + 4 - 2 * common as u64;
            return Ok(CombinationOutcome::Found(ConstructionResult {
                name: "regulus-combination".into(),
                code: klein_code(q),
                codeword: best.expect("two orientations"),
                predicted_weight: predicted,
                formula: format!("4q+4-2c with c={common} common lines"),
                witness: format!(
                    "quadric {i} (regulus {:?}) and quadric {j} (regulus {:?})",
                    h1.regulus, h2.regulus
                ),
            }));
        }
    }
    Ok(CombinationOutcome::NotFound {
        common,
        pairs_tried: tried,
    })
}

/// Default ovoid of Q(4,q) (elliptic section) or Q+(5,q) (exact cover at
/// q=2, Plücker image of the regular spread otherwise).
pub fn default_ovoid(ps: &PolarSpace) -> Result<Vec<u32>> {
    match (ps.family(), ps.n()) {
        (Family::Parabolic, 4) => elliptic_section_ovoid(ps),
        (Family::Hyperbolic, 5) if ps.q() == 2 => find_ovoid(ps, 1_000_000),
        (Family::Hyperbolic, 5) => {
            let k = Klein::new(ps.q())?;
            let mut o: Vec<u32> = k.regular_spread()?.into_iter().map(|l| k.image(l)).collect();
            o.sort_unstable();
            Ok(o)
        }
        _ => param(format!("no default ovoid for {}", ps.label())),
    }
}

/// All-ones vector on the points off an ovoid of Q(4,q) or Q+(5,q), q even.
pub fn complement_ovoid(ps: &PolarSpace, ovoid: Option<&[u32]>) -> Result<ConstructionResult> {
    let q = ps.q();
    require_even(q, "the complement of an ovoid")?;
    let (k, predicted, formula) = match (ps.family(), ps.n()) {
        (Family::Parabolic, 4) => (1, q * q * q + q, "q^3+q"),
        (Family::Hyperbolic, 5) => (2, (1 + q * q) * (q * q + q), "(1+q^2)(q^2+q)"),
        _ => return param(format!("ovoid complements are built in Q(4,q) or Q+(5,q), not {}", ps.label())),
    };
    let o = match ovoid {
        Some(o) => o.to_vec(),
        None => default_ovoid(ps)?,
    };
    if !is_ovoid(ps, &o)?.holds {
        return param("the given point set is not an ovoid");
    }
    Ok(ConstructionResult {
        name: "complement-ovoid".into(),
        code: CodeSpec {
            family: ps.family(),
            n: ps.n(),
            q,
            k,
        },
        codeword: complement_codeword(ps, &o),
        predicted_weight: predicted,
        formula: formula.into(),
        witness: format!("ovoid {:?}", o),
    })
}

/// Regular spread with 2i reguli through one of its lines L replaced by their
/// opposites and L put back; the codeword is the complement of the Plücker
/// image of the resulting line set.
pub fn regulus_switch(k: &Klein, i: u64) -> Result<ConstructionResult> {
    let q = k.q();
    require_even(q, "regulus switching")?;
    if i > q / 2 {
        return param(format!("i must lie in 0..={}, got {i}", q / 2));
    }
    let spread = k.regular_spread()?;
    let l = spread[0];
    let reguli = k.reguli_partition_through(&spread, l)?;
    let switched = &reguli[..2 * i as usize];
    let mut lines: BTreeSet<u32> = spread.iter().copied().collect();
    for r in switched {
        for x in r {
            lines.remove(x);
        }
        lines.extend(k.opposite_regulus(r));
    }
    lines.insert(l);
    let set: LineSymbolSet = lines.iter().map(|&x| (x, 1)).collect();
    let report = k.check_line_conditions(&set, ParityMode::OddBlocking);
    if let Some(v) = report.violation {
        return Err(Error::Inconsistency(format!(
            "switched line set is not odd-blocking: condition {} at {}",
            v.condition, v.witness
        )));
    }
    let qp = k.quadric();
    let img: Vec<u32> = lines.iter().map(|&x| k.image(x)).collect();
    Ok(ConstructionResult {
        name: "regulus-switch".into(),
        code: klein_code(q),
        codeword: complement_codeword(qp, &img),
        predicted_weight: (1 + q * q) * (q * q + q) - 2 * i,
        formula: format!("(1+q^2)(q^2+q)-2i with i={i}"),
        witness: format!(
            "spread line {l}, {} reguli switched; {}",
            switched.len(),
            lines_text(lines.iter().copied())
        ),
    })
}

/// The three examples of large weight in C(W(q))^perp, q even.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WqVariant {
    /// AG(3,q): the complement of a plane.
    Affine,
    /// AG(3,q) plus a line L of the plane and its polar line.
    AffinePlusPair,
    /// Complement of an elliptic quadric plus a secant and its polar line.
    OvoidPlusPair,
}

/// Large weight codewords of C(W(q))^perp, q even, over all points of PG(3,q).
pub fn wq_example(ps: &PolarSpace, variant: WqVariant) -> Result<ConstructionResult> {
    let q = ps.q();
    if ps.family() != Family::Symplectic || ps.n() != 3 {
        return param(format!("the W(q) examples live in W(3,q), not {}", ps.label()));
    }
    require_even(q, "the W(q) examples")?;
    let pg = ps.pg();
    let n_pts = ps.num_points();
    let all_lines = pg.subspaces(1)?;
    let plane = pg.hyperplane(pg.point(0));
    let plane_pts = pg.subspace_points(&plane);
    let mut c = complement_codeword(ps, &plane_pts);
    let q3 = q * q * q;
    let add_line = |c: &mut CodewordVec, l: &Subspace| -> Result<()> {
        points_codeword(ps, &pg.subspace_points(l), 1, c)
    };
    let (predicted, formula, witness) = match variant {
        WqVariant::Affine => (q3, "q^3", "complement of the plane with dual coordinates of point 0".to_string()),
        WqVariant::AffinePlusPair => {
            let pole = ps.polar_image(&plane)?;
            let l = all_lines
                .iter()
                .find(|l| pg.is_subspace_of(l, &plane) && !pg.is_subspace_of(&pole, l))
                .ok_or_else(|| Error::NotFound("no line of the plane missing its pole".into()))?;
            let ls = ps.polar_image(l)?;
            add_line(&mut c, l)?;
            add_line(&mut c, &ls)?;
            (
                q3 + 2,
                "q^3+2",
                format!("plane of point 0, line {:?} and its polar line", pg.subspace_points(l)),
            )
        }
        WqVariant::OvoidPlusPair => {
            let elliptic = PolarSpace::standard(Family::Elliptic, 3, pg.field_arc())?;
            let o = elliptic.points().to_vec();
            if !is_ovoid(ps, &o)?.holds {
                return Err(Error::Inconsistency("elliptic quadric is not an ovoid of W(q)".into()));
            }
            let on_o = |l: &Subspace| pg.subspace_points(l).iter().filter(|x| o.binary_search(x).is_ok()).count();
            let m = all_lines
                .iter()
                .find(|l| on_o(l) == 2)
                .ok_or_else(|| Error::NotFound("no secant line of the ovoid".into()))?;
            let ms = ps.polar_image(m)?;
            if on_o(&ms) != 0 {
                return Err(Error::Inconsistency("polar line of a secant meets the ovoid".into()));
            }
            c = complement_codeword(ps, &o);
            add_line(&mut c, m)?;
            add_line(&mut c, &ms)?;
            (
                q3 - q + 2,
                "q^3-q+2",
                format!("complement of the elliptic quadric, secant {:?} and its polar line", pg.subspace_points(m)),
            )
        }
    };
    debug_assert_eq!(c.n_cols, n_pts);
    Ok(ConstructionResult {
        name: "wq-example".into(),
        code: CodeSpec {
            family: Family::Symplectic,
            n: 3,
            q,
            k: 1,
        },
        codeword: c,
        predicted_weight: predicted,
        formula: formula.into(),
        witness,
    })
}

/// Radical type of the subspace used by `polar_pair`.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PairSection {
    /// Trivial radical: parabolic or elliptic for Q+, a Hermitian variety for H.
    NonSingular,
    /// Radical a single point (Hermitian only): a cone over a Hermitian variety.
    PointRadical,
}

fn pair_dim(ps: &PolarSpace) -> Result<usize> {
    match ps.family() {
        Family::Hyperbolic => Ok((ps.n() - 1) / 2),
        Family::Hermitian if ps.n() % 2 == 1 => Ok((ps.n() - 1) / 2),
        _ => param(format!(
            "polar pairs are defined in Q+(2n+1,q) and H(n,q^2) with n odd, not {}",
            ps.label()
        )),
    }
}

/// First subspace of the pair dimension, in canonical search order, whose
/// section has the requested radical type.
pub fn find_pair_subspace(ps: &PolarSpace, section: PairSection) -> Result<Subspace> {
    let m = pair_dim(ps)?;
    let pg = ps.pg();
    let all: Vec<u32> = (0..pg.num_points() as u32).collect();
    let fam = ps.family();
    if fam == Family::Hyperbolic && section == PairSection::PointRadical {
        return param("point-radical sections are only used in Hermitian spaces");
    }
    let want_elliptic = fam == Family::Hyperbolic && m % 2 == 1;
    find_subspace(
        pg,
        m,
        &all,
        |s| {
            match section {
                PairSection::NonSingular => {
                    ps.is_nonsingular_section(s)
                        && (!want_elliptic || ps.classify_quadric_section(s) == Some(Family::Elliptic))
                }
                PairSection::PointRadical => ps.restricted_radical(s).dim() == 0,
            }
        },
        SEARCH_BUDGET,
    )
}

fn pair_prediction(ps: &PolarSpace, section: PairSection) -> Result<(u64, String)> {
    let q = ps.q();
    let m = pair_dim(ps)?;
    Ok(match (ps.family(), section) {
        (Family::Hyperbolic, _) if m % 2 == 0 => (2 * theta(m as i64 - 1, q), "2(q^n-1)/(q-1)".into()),
        (Family::Hyperbolic, _) => (
            2 * theta(m as i64 - 1, q) - 2 * q.pow((m as u32 - 1) / 2),
            "2(q^n-1)/(q-1)-2q^((n-1)/2)".into(),
        ),
        (_, PairSection::NonSingular) => (
            2 * point_count(Family::Hermitian, m, q),
            format!("2|H({m},q^2)|"),
        ),
        (_, PairSection::PointRadical) => (
            2 * q * q * point_count(Family::Hermitian, m - 1, q),
            format!("2q^2|H({},q^2)|", m - 1),
        ),
    })
}

/// +alpha on the section of pi off T, -alpha on the section of pi^sigma off
/// T, where T is the meet of pi and pi^sigma.
pub fn polar_pair_at(ps: &PolarSpace, pi: &Subspace, section: PairSection, alpha: u32) -> Result<ConstructionResult> {
    let m = pair_dim(ps)?;
    if pi.dim() != m as i64 {
        return param(format!("pair subspace must have dimension {m}"));
    }
    if ps.is_singular(pi) {
        return param("pair subspace is contained in the polar space");
    }
    let (pos, neg) = symbol(ps.p(), alpha)?;
    let pg = ps.pg();
    let pis = ps.polar_image(pi)?;
    let t = pg.meet(pi, &pis);
    let tpts = pg.subspace_points(&t);
    let off_t = |s: &Subspace| -> Vec<u32> {
        ps.section_points(s)
            .into_iter()
            .filter(|x| tpts.binary_search(x).is_err())
            .collect()
    };
    let mut c = CodewordVec::zero(ps.num_points(), ps.p());
    points_codeword(ps, &off_t(pi), pos, &mut c)?;
    points_codeword(ps, &off_t(&pis), neg, &mut c)?;
    let (predicted, formula) = pair_prediction(ps, section)?;
    Ok(ConstructionResult {
        name: "polar-pair".into(),
        code: CodeSpec {
            family: ps.family(),
            n: ps.n(),
            q: ps.q(),
            k: m,
        },
        codeword: c,
        predicted_weight: predicted,
        formula,
        witness: format!(
            "pi spanned by points {:?}, meet with its polar has {} points",
            pg.subspace_points(pi).iter().take(m + 1).collect::<Vec<_>>(),
            tpts.len()
        ),
    })
}

pub fn polar_pair(ps: &PolarSpace, section: PairSection, alpha: u32) -> Result<ConstructionResult> {
    let pi = find_pair_subspace(ps, section)?;
    polar_pair_at(ps, &pi, section, alpha)
}

/// Section type of the plane used by `hermitian_pair`.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum HermitianVariant {
    CurvePair,
    ConePair,
}

/// The curve and cone pairs of H(5,q^2): a plane meeting H(5,q^2) in a
/// Hermitian curve or a cone over a Baer subline, paired with its polar plane.
pub fn hermitian_pair(ps: &PolarSpace, variant: HermitianVariant, alpha: u32) -> Result<ConstructionResult> {
    if ps.family() != Family::Hermitian || ps.n() != 5 {
        return param(format!("Hermitian pairs are built in H(5,q^2), not {}", ps.label()));
    }
    let (wanted, section) = match variant {
        HermitianVariant::CurvePair => (PlaneSection::HermitianCurve, PairSection::NonSingular),
        HermitianVariant::ConePair => (PlaneSection::BaerCone, PairSection::PointRadical),
    };
    let pi = find_pair_subspace(ps, section)?;
    if ps.classify_plane_section(&pi)? != wanted {
        return Err(Error::Inconsistency(format!("plane section is not of type {wanted:?}")));
    }
    let mut r = polar_pair_at(ps, &pi, section, alpha)?;
    r.name = "hermitian-pair".into();
    let q = ps.q();
    let (w, f) = match variant {
        HermitianVariant::CurvePair => (2 * (q * q * q + 1), "2(q^3+1)"),
        HermitianVariant::ConePair => (2 * (q * q * q + q * q), "2(q^3+q^2)"),
    };
    if w != r.predicted_weight {
        return Err(Error::Inconsistency("Hermitian pair weight forms disagree".into()));
    }
    r.formula = f.into();
    r.witness = format!("{wanted:?} plane; {}", r.witness);
    Ok(r)
}

/// Cones P1 B and P2 B minus the base B = P1^sigma cap P2^sigma cap P, with
/// symbols alpha and -alpha, for non-collinear P1, P2 of Q-(5,q) or H(4,q^2).
pub fn disjoint_perp_cones_at(ps: &PolarSpace, p1: u32, p2: u32, alpha: u32) -> Result<ConstructionResult> {
    let q = ps.q();
    let (predicted, formula) = match (ps.family(), ps.n()) {
        (Family::Elliptic, 5) => (2 * (q * q + 1) * (q - 1) + 2, "2(q^3-q^2+q)"),
        (Family::Hermitian, 4) => (2 * (q * q - 1) * (q * q * q + 1) + 2, "2(q^5-q^3+q^2)"),
        _ => return param(format!("perp cones are built in Q-(5,q) or H(4,q^2), not {}", ps.label())),
    };
    if !ps.contains_point(p1) || !ps.contains_point(p2) || p1 == p2 {
        return param("P1 and P2 must be distinct points of the space");
    }
    if ps.collinear(p1, p2) {
        return param("P1 and P2 are collinear");
    }
    let (pos, neg) = symbol(ps.p(), alpha)?;
    let pg = ps.pg();
    let s1 = pg.point_subspace(p1);
    let s2 = pg.point_subspace(p2);
    let base_space = pg.meet(&ps.polar_image(&s1)?, &ps.polar_image(&s2)?);
    let base = ps.section_points(&base_space);
    let mut c = CodewordVec::zero(ps.num_points(), ps.p());
    for (v, s) in [(&s1, pos), (&s2, neg)] {
        let cone = crate::polarspace::make_cone(pg, v, &base, false)?;
        let pts: Vec<u32> = cone
            .points
            .into_iter()
            .filter(|x| base.binary_search(x).is_err())
            .collect();
        points_codeword(ps, &pts, s, &mut c)?;
    }
    Ok(ConstructionResult {
        name: "disjoint-perp-cones".into(),
        code: CodeSpec {
            family: ps.family(),
            n: ps.n(),
            q,
            k: 1,
        },
        codeword: c,
        predicted_weight: predicted,
        formula: formula.into(),
        witness: format!("vertices {p1} and {p2}, base of {} points", base.len()),
    })
}

/// Perp cones at the first point and the first point not collinear with it.
pub fn disjoint_perp_cones(ps: &PolarSpace, alpha: u32) -> Result<ConstructionResult> {
    let pts = ps.points();
    let p1 = *pts.first().ok_or_else(|| Error::NotFound("empty space".into()))?;
    let p2 = pts
        .iter()
        .copied()
        .find(|&x| x != p1 && !ps.collinear(p1, x))
        .ok_or_else(|| Error::NotFound("every point is collinear with the first".into()))?;
    disjoint_perp_cones_at(ps, p1, p2, alpha)
}

/// Blocking configuration removed by `complement_cone`.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ConeSpec {
    /// A non-singular hyperplane section Q(2n,q) of Q+(2n+1,q) (k=1).
    ParabolicHyperplane,
    /// The tangent cone P^sigma cap Q+(2n+1,q) at a point P (k=1).
    TangentCone,
    /// The cone whose complement has the largest weight for the given k.
    MaxWeight,
}

/// Shape of a cone S_v B: vertex dimension (-1 for none), base family, base
/// dimension.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConeShape {
    pub vertex_dim: i64,
    pub base_family: Family,
    pub base_dim: usize,
}

fn sum_powers(q: u64, lo: u32, hi: u32) -> u64 {
    (lo..=hi).map(|j| q.pow(j)).sum()
}

/// Cone shape and complement weight for the largest weights of
/// C_k(P)^perp, q even, within each family's proven range of k.
pub fn max_weight_cone(family: Family, dim: usize, k: usize, q: u64) -> Result<(ConeShape, u64, String)> {
    require_even(q, "the maximum weight cones")?;
    if k == 0 {
        return param("k must be at least 1");
    }
    let kk = k as u32;
    let shape = |v: i64, f: Family, d: usize| ConeShape {
        vertex_dim: v,
        base_family: f,
        base_dim: d,
    };
    match family {
        Family::Hyperbolic => {
            let n = (dim - 1) / 2;
            let nn = n as u32;
            if n < 3 {
                return param(format!("Q+(2n+1,q) needs n >= 3, got n={n}"));
            }
            if k == 1 {
                return Ok((
                    shape(-1, Family::Parabolic, 2 * n),
                    (q.pow(nn) + 1) * q.pow(nn),
                    "(q^n+1)q^n".into(),
                ));
            }
            if k > n - 1 || 2 * k >= n + 3 {
                return param(format!("Q+(2n+1,q) needs k <= n-1 and k < (n+3)/2, got k={k}, n={n}"));
            }
            Ok((
                shape(k as i64 - 3, Family::Elliptic, 2 * n + 3 - 2 * k),
                q.pow(nn) * sum_powers(q, nn - kk + 1, nn) + q.pow(nn) + q.pow(nn - 1),
                "q^n(q^n+...+q^(n-k+1))+q^n+q^(n-1)".into(),
            ))
        }
        Family::Parabolic => {
            let n = dim / 2;
            let nn = n as u32;
            if 2 * k >= n + 1 {
                return param(format!("Q(2n,q) needs k < (n+1)/2, got k={k}, n={n}"));
            }
            Ok((
                shape(k as i64 - 2, Family::Elliptic, 2 * n + 1 - 2 * k),
                q.pow(nn) * sum_powers(q, nn - kk, nn - 1) + q.pow(nn - 1),
                "q^n(q^(n-1)+...+q^(n-k))+q^(n-1)".into(),
            ))
        }
        Family::Elliptic => {
            let n = (dim - 1) / 2;
            let nn = n as u32;
            if 2 * k >= n + 1 {
                return param(format!("Q-(2n+1,q) needs k < (n+1)/2, got k={k}, n={n}"));
            }
            Ok((
                shape(k as i64 - 1, Family::Elliptic, 2 * n + 1 - 2 * k),
                q.pow(2 * nn - kk + 1) * theta(k as i64 - 1, q),
                "q^(2n-k+1) theta_(k-1)".into(),
            ))
        }
        Family::Hermitian => {
            let n = dim;
            let nn = n as u32;
            if 2 * k + 3 > n {
                return param(format!("H(n,q^2) needs k <= (n-3)/2, got k={k}, n={n}"));
            }
            let base = q.pow(2 * nn - 2 * kk + 1) * ((q.pow(2 * kk) - 1) / (q * q - 1));
            if n % 2 == 0 {
                Ok((
                    shape(k as i64 - 1, Family::Hermitian, n - 2 * k),
                    base,
                    "q^(2n-2k+1)(q^(2k)-1)/(q^2-1)".into(),
                ))
            } else {
                Ok((
                    shape(k as i64 - 2, Family::Hermitian, n - 2 * k + 1),
                    base + q.pow(nn - 1),
                    "q^(2n-2k+1)(q^(2k)-1)/(q^2-1)+q^(n-1)".into(),
                ))
            }
        }
        Family::Symplectic => param("no cone complements are listed for symplectic spaces"),
    }
}

fn base_matches(ps: &PolarSpace, s: &Subspace, fam: Family) -> bool {
    if fam == Family::Hermitian {
        ps.restricted_radical(s).is_empty()
    } else {
        ps.classify_quadric_section(s) == Some(fam)
    }
}

/// Points of a cone S_v B of the given shape inside the polar space: a
/// non-singular section W of the base type joined with a totally singular
/// vertex in the perp of W.
pub fn polar_cone(ps: &PolarSpace, shape: ConeShape) -> Result<(Vec<u32>, String)> {
    let pg = ps.pg();
    let n = ps.n();
    if shape.base_dim >= n || shape.vertex_dim + 1 + shape.base_dim as i64 > n as i64 {
        return param("cone does not fit in the ambient space");
    }
    let w = if shape.base_dim + 1 == n {
        let mut found = None;
        for h in 0..pg.num_points() as u32 {
            let s = pg.hyperplane(pg.point(h));
            if base_matches(ps, &s, shape.base_family) {
                found = Some(s);
                break;
            }
        }
        found.ok_or_else(|| Error::NotFound("no hyperplane with the requested section".into()))?
    } else {
        let all: Vec<u32> = (0..pg.num_points() as u32).collect();
        find_subspace(pg, shape.base_dim, &all, |s| base_matches(ps, s, shape.base_family), SEARCH_BUDGET)?
    };
    let vertex = if shape.vertex_dim < 0 {
        Subspace::empty(n)
    } else {
        let perp = ps.bilinear_perp(&w);
        let cands: Vec<u32> = ps
            .points()
            .iter()
            .copied()
            .filter(|&x| pg.contains_point(&perp, x) && !pg.contains_point(&w, x))
            .collect();
        find_subspace(pg, shape.vertex_dim as usize, &cands, |s| ps.is_singular(s), SEARCH_BUDGET)?
    };
    let span = pg.join(&vertex, &w);
    let cone = ps.section_points(&span);
    let base = ps.section_points(&w).len() as u64;
    let fq = pg.q();
    let expected = theta(shape.vertex_dim, fq) + fq.pow((shape.vertex_dim + 1) as u32) * base;
    if cone.len() as u64 != expected {
        return Err(Error::Inconsistency(format!(
            "cone has {} points, expected {expected}",
            cone.len()
        )));
    }
    Ok((
        cone,
        format!(
            "vertex of dimension {} over a {}-dimensional {} section of {base} points",
            shape.vertex_dim,
            shape.base_dim,
            shape.base_family.symbol()
        ),
    ))
}

/// All-ones vector on the points off a blocking cone, q even.
pub fn complement_cone(ps: &PolarSpace, k: usize, spec: ConeSpec) -> Result<ConstructionResult> {
    let q = ps.q();
    require_even(q, "cone complements")?;
    let fam = ps.family();
    let (removed, predicted, formula, witness) = match spec {
        ConeSpec::MaxWeight | ConeSpec::ParabolicHyperplane => {
            if spec == ConeSpec::ParabolicHyperplane && (fam != Family::Hyperbolic || k != 1) {
                return param("the parabolic hyperplane section is used for lines of Q+(2n+1,q)");
            }
            let (shape, w, f) = max_weight_cone(fam, ps.n(), k, q)?;
            let (pts, text) = polar_cone(ps, shape)?;
            (pts, w, f, text)
        }
        ConeSpec::TangentCone => {
            if fam != Family::Hyperbolic || k != 1 {
                return param("the tangent cone is used for lines of Q+(2n+1,q)");
            }
            let n = (ps.n() - 1) / 2;
            if n < 3 {
                return param(format!("Q+(2n+1,q) needs n >= 3, got n={n}"));
            }
            let p = ps.points()[0];
            let tangent = ps.bilinear_perp(&ps.pg().point_subspace(p));
            let pts = ps.section_points(&tangent);
            (pts, q.pow(2 * n as u32), "q^(2n)".to_string(), format!("tangent cone at point {p}"))
        }
    };
    Ok(ConstructionResult {
        name: "complement-cone".into(),
        code: CodeSpec {
            family: fam,
            n: ps.n(),
            q,
            k,
        },
        codeword: complement_codeword(ps, &removed),
        predicted_weight: predicted,
        formula,
        witness,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn assert_ok(r: &ConstructionResult) {
        let c = r.check().unwrap();
        assert!(c.passed(), "{}: weight {} vs {}, {:?}", r.name, c.weight, r.predicted_weight, c.dual);
    }

    #[test]
    fn reguli_and_pencils_small() {
        for q in [2, 3] {
            let k = Klein::new(q).unwrap();
            let r = two_reguli(&k, 1).unwrap();
            assert_eq!(r.weight(), 2 * q + 2);
            assert_ok(&r);
            let r = two_pencils(&k, 1).unwrap();
            assert_eq!(r.weight(), 4 * q);
            assert_ok(&r);
        }
    }

    #[test]
    fn zero_symbol_rejected() {
        let k = Klein::new(3).unwrap();
        assert!(two_reguli(&k, 3).is_err());
    }

    #[test]
    fn ovoid_complement_q2() {
        let ps = PolarSpace::new(Family::Parabolic, 4, 2).unwrap();
        let r = complement_ovoid(&ps, None).unwrap();
        assert_eq!(r.weight(), 10);
        assert_ok(&r);
        let bad: Vec<u32> = ps.points()[..5].to_vec();
        assert!(complement_ovoid(&ps, Some(&bad)).is_err());
    }

    #[test]
    fn wq_examples_q2() {
        let ps = PolarSpace::new(Family::Symplectic, 3, 2).unwrap();
        for v in [WqVariant::Affine, WqVariant::AffinePlusPair, WqVariant::OvoidPlusPair] {
            assert_ok(&wq_example(&ps, v).unwrap());
        }
    }

    #[test]
    fn cone_shapes() {
        let (s, w, _) = max_weight_cone(Family::Hermitian, 5, 1, 2).unwrap();
        assert_eq!((s.vertex_dim, s.base_dim, w), (-1, 4, 528));
        let (s, w, _) = max_weight_cone(Family::Hyperbolic, 7, 2, 2).unwrap();
        assert_eq!((s.vertex_dim, s.base_family, w), (-1, Family::Elliptic, 108));
        assert!(max_weight_cone(Family::Hyperbolic, 5, 1, 2).is_err());
        assert!(max_weight_cone(Family::Parabolic, 4, 1, 3).is_err());
    }
}
