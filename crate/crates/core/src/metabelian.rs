//! Finite presentability of metabelian tops: the two one-relator criteria,
//! the Alexander-polynomial test, the Sigma predicate and the verdict for
//! Artin systems.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::artin::{
    abelianization_structure, derived_generators_bound, free_quotient_obstruction, perfectness_structural_certificate,
    standard_presentation, AbelianizationData, Convention, LabeledGraph, PerfectnessCertificate,
};
use crate::freegroup::{
    abelianize, exponent_sums, fox_derivative, normalize_two_gen_basis, AbMap, FreeWord, TwoGenBasis,
};
use crate::homology::{
    build_chain, kernel_basis_d1, quotient_structure, AbelianStructure, ChainData, HomologyError, ModuleVector,
    QuotientResult, SearchOptions, StructureKind,
};
use crate::laurent::{End, LaurentPoly};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MetabelianError {
    #[error("relator uses {0} generators; two are required")]
    NotTwoGenerator(usize),
    #[error("exponent sums ({0}, {1}) are not both zero")]
    NonzeroExponentSums(i64, i64),
    #[error("exponent sums are both zero; use the commutator-relator criterion")]
    ZeroExponentSums,
    #[error("relator is trivial")]
    TrivialRelator,
    #[error("cyclically reduced relator has length {0}; need > 1")]
    TooShort(usize),
    #[error("internal: derivative is not divisible by 1 - y")]
    NotExact,
    #[error("polynomial is zero")]
    ZeroPolynomial,
    #[error("polynomial is not univariate")]
    NotUnivariate,
    #[error("character is zero")]
    ZeroCharacter,
    #[error("character has {0} values but the polynomial has rank {1}")]
    RankMismatch(usize, usize),
    #[error(transparent)]
    Homology(#[from] HomologyError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Status {
    FinitelyPresented,
    InfinitelyRelated,
    Inconclusive,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::FinitelyPresented => "finitely presented",
            Status::InfinitelyRelated => "infinitely related",
            Status::Inconclusive => "inconclusive",
        })
    }
}

/// The rule that produced a verdict.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Rule {
    /// `λ` has a single support point.
    SingletonSupport,
    /// `λ = 0`: the module is free of rank one over the group ring.
    ZeroAnnihilator,
    /// Collinearity, parallel edges and farthest vertices of the hull of `λ`.
    HullConditions,
    /// Extremal coefficients of `f(c)` in the infinite cyclic case.
    CyclicExtremal,
    /// `Z ⊕ Z/d` abelianization, not handled.
    TorsionAbelianization,
    /// Baumslag–Solitar relator `t a^m t^-1 a^-n`, `m, n > 1` coprime.
    BaumslagSolitar,
    /// Extremal coefficients of the Alexander polynomial.
    AlexanderExtremal,
    /// Structure of `Γ'_ab` from the chain complex.
    Homology,
    /// Structural perfectness certificate.
    PerfectnessCertificate,
    /// The derived group is finitely generated.
    GeneratorBound,
    /// Two generators with an even label.
    EvenTwoGenerator,
    /// No rule applies.
    NoRule,
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Rule::SingletonSupport => "singleton-support",
            Rule::ZeroAnnihilator => "zero-annihilator",
            Rule::HullConditions => "hull-conditions",
            Rule::CyclicExtremal => "cyclic-extremal-coefficient",
            Rule::TorsionAbelianization => "torsion-abelianization",
            Rule::BaumslagSolitar => "baumslag-solitar",
            Rule::AlexanderExtremal => "alexander-extremal-coefficient",
            Rule::Homology => "homology",
            Rule::PerfectnessCertificate => "perfectness-certificate",
            Rule::GeneratorBound => "generator-bound",
            Rule::EvenTwoGenerator => "even-two-generator",
            Rule::NoRule => "none",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Verdict {
    pub status: Status,
    pub rule: Rule,
    /// `λ`, `f(c)` or the Alexander polynomial.
    pub polynomial: Option<LaurentPoly>,
    pub structure: Option<AbelianStructure>,
    pub notes: Vec<String>,
}

impl Verdict {
    fn new(status: Status, rule: Rule) -> Self {
        Verdict { status, rule, polynomial: None, structure: None, notes: Vec::new() }
    }

    fn with_poly(mut self, p: LaurentPoly) -> Self {
        self.polynomial = Some(p);
        self
    }

    fn note(mut self, n: impl Into<String>) -> Self {
        self.notes.push(n.into());
        self
    }
}

/// A character `χ: Q -> Q ⊂ R`, given on the basis of `Q`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Character {
    pub values: Vec<BigRational>,
}

impl Character {
    pub fn new(values: Vec<BigRational>) -> Self {
        Character { values }
    }

    pub fn from_integers(values: &[i64]) -> Self {
        Character { values: values.iter().map(|&v| BigRational::from_integer(v.into())).collect() }
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(Zero::is_zero)
    }

    pub fn eval(&self, exps: &[i64]) -> BigRational {
        self.values
            .iter()
            .zip(exps)
            .fold(BigRational::zero(), |acc, (c, &e)| acc + c * BigRational::from_integer(e.into()))
    }
}

/// True iff `χ` is strictly positive on every support point of `λ`.
pub fn sigma_positive_witness(lambda: &LaurentPoly, chi: &Character) -> Result<bool, MetabelianError> {
    if lambda.is_zero() {
        return Err(MetabelianError::ZeroPolynomial);
    }
    if chi.is_zero() {
        return Err(MetabelianError::ZeroCharacter);
    }
    if chi.values.len() != lambda.rank() {
        return Err(MetabelianError::RankMismatch(chi.values.len(), lambda.rank()));
    }
    Ok(lambda.terms().all(|(m, _)| chi.eval(&m.0).is_positive()))
}

type Pt = (i64, i64);

fn cross(o: Pt, a: Pt, b: Pt) -> i128 {
    let (ax, ay) = ((a.0 - o.0) as i128, (a.1 - o.1) as i128);
    let (bx, by) = ((b.0 - o.0) as i128, (b.1 - o.1) as i128);
    ax * by - ay * bx
}

/// Vertices of the convex hull, counter-clockwise, without collinear points.
pub fn convex_hull(points: &[Pt]) -> Vec<Pt> {
    let mut pts: Vec<Pt> = points.iter().copied().collect::<BTreeSet<_>>().into_iter().collect();
    if pts.len() < 3 {
        return pts;
    }
    pts.sort();
    let mut hull: Vec<Pt> = Vec::with_capacity(2 * pts.len());
    for pass in 0..2 {
        let start = hull.len();
        let seq: Box<dyn Iterator<Item = &Pt>> =
            if pass == 0 { Box::new(pts.iter()) } else { Box::new(pts.iter().rev()) };
        for &p in seq {
            while hull.len() >= start + 2 && cross(hull[hull.len() - 2], hull[hull.len() - 1], p) <= 0 {
                hull.pop();
            }
            hull.push(p);
        }
        hull.pop();
    }
    hull
}

fn primitive(d: Pt) -> Pt {
    let g = d.0.gcd(&d.1);
    let (a, b) = (d.0 / g, d.1 / g);
    if a < 0 || (a == 0 && b < 0) {
        (-a, -b)
    } else {
        (a, b)
    }
}

/// Data of the commutator-relator criterion.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CommutatorReport {
    /// `λ` in `Z[x̂^±1, ŷ^±1]`.
    pub lambda: LaurentPoly,
    pub hull: Vec<Pt>,
    pub verdict: Verdict,
}

fn is_pm_one(c: &BigInt) -> bool {
    c.abs().is_one()
}

/// Criterion for `⟨x, y | r⟩` with both exponent sums of `r` zero: `Γ'_ab`
/// is cyclic over `Z[x̂, ŷ]`, annihilated by `λ = D_x(r)^ab / (1 - ŷ)`.
pub fn commutator_relator_criterion(r: &FreeWord) -> Result<CommutatorReport, MetabelianError> {
    if r.generator_bound() > 2 {
        return Err(MetabelianError::NotTwoGenerator(r.generator_bound()));
    }
    if r.is_identity() {
        return Err(MetabelianError::TrivialRelator);
    }
    let sums = exponent_sums(r, 2);
    if sums != [0, 0] {
        return Err(MetabelianError::NonzeroExponentSums(sums[0], sums[1]));
    }
    let dx = abelianize(&fox_derivative(r, 0), &AbMap::identity(2)).expect("two generators");
    let den = &LaurentPoly::one(2) - &LaurentPoly::var(2, 1);
    let lambda = if dx.is_zero() {
        LaurentPoly::zero(2)
    } else {
        LaurentPoly::divide_exact(&dx, &den).ok_or(MetabelianError::NotExact)?
    };
    let support: Vec<(Pt, BigInt)> = lambda.terms().map(|(m, c)| ((m.0[0], m.0[1]), c.clone())).collect();
    let coeff_at = |p: Pt| support.iter().find(|(q, _)| *q == p).map(|(_, c)| c.clone()).unwrap_or_default();
    let pts: Vec<Pt> = support.iter().map(|(p, _)| *p).collect();
    let hull = convex_hull(&pts);
    let report = |verdict: Verdict| CommutatorReport { lambda: lambda.clone(), hull: hull.clone(), verdict };

    if lambda.is_zero() {
        let v = Verdict::new(Status::InfinitelyRelated, Rule::ZeroAnnihilator)
            .with_poly(lambda.clone())
            .note("λ = 0: Γ'_ab is free of rank one over Z[Q]");
        return Ok(report(v));
    }
    if support.len() == 1 {
        let c = &support[0].1;
        let v = if is_pm_one(c) {
            Verdict::new(Status::FinitelyPresented, Rule::SingletonSupport).note("λ is a unit: Γ'_ab = 0")
        } else {
            Verdict::new(Status::InfinitelyRelated, Rule::SingletonSupport)
                .note(format!("λ = {c}·q: Γ'_ab is an infinite direct sum of copies of Z/{}; extrapolated", c.abs()))
        };
        return Ok(report(v.with_poly(lambda.clone())));
    }
    let base = hull.first().copied().unwrap();
    if hull.len() < 3 || pts.iter().all(|&p| cross(base, hull[1], p) == 0) {
        let v = Verdict::new(Status::InfinitelyRelated, Rule::HullConditions)
            .with_poly(lambda.clone())
            .note("support of λ lies on a straight line");
        return Ok(report(v));
    }
    let n = hull.len();
    let edges: Vec<(Pt, Pt)> = (0..n).map(|i| (hull[i], hull[(i + 1) % n])).collect();
    let mut dirs = BTreeSet::new();
    for &(a, b) in &edges {
        let d = primitive((b.0 - a.0, b.1 - a.1));
        if !dirs.insert(d) {
            let v = Verdict::new(Status::InfinitelyRelated, Rule::HullConditions)
                .with_poly(lambda.clone())
                .note(format!("hull has parallel edges in direction ({}, {})", d.0, d.1));
            return Ok(report(v));
        }
    }
    let mut notes = Vec::new();
    for &(a, b) in &edges {
        let dist: Vec<i128> = pts.iter().map(|&p| cross(a, b, p).abs()).collect();
        let far = *dist.iter().max().unwrap();
        let maximizers: Vec<Pt> = pts.iter().zip(&dist).filter(|(_, &d)| d == far).map(|(p, _)| *p).collect();
        if maximizers.len() > 1 {
            notes.push(format!("tie of farthest vertices from edge {a:?}-{b:?}: {maximizers:?}"));
        }
        if let Some(&p) = maximizers.iter().find(|&&p| !is_pm_one(&coeff_at(p))) {
            let mut v = Verdict::new(Status::InfinitelyRelated, Rule::HullConditions)
                .with_poly(lambda.clone())
                .note(format!("vertex {p:?} farthest from edge {a:?}-{b:?} has coefficient {}", coeff_at(p)));
            v.notes.extend(notes);
            return Ok(report(v));
        }
    }
    let mut v = Verdict::new(Status::FinitelyPresented, Rule::HullConditions)
        .with_poly(lambda.clone())
        .note("support not collinear, no parallel edges, farthest vertices have unit coefficients");
    v.notes.extend(notes);
    Ok(report(v))
}

/// Data of the infinite-cyclic-abelianization criterion.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CyclicReport {
    pub basis: Option<TwoGenBasis>,
    /// `f(c)` in one variable.
    pub f: Option<LaurentPoly>,
    pub verdict: Verdict,
}

/// Criterion for `⟨x, y | r⟩` with coprime exponent sums: after a basis change
/// to `(a, t)` with sums `(1, 0)`, `Γ'_ab = Z[c^±1]/(f(c))` with
/// `f = D_a(r)` under `a -> 1`, `t -> c`.
pub fn cyclic_abelianization_criterion(r: &FreeWord) -> Result<CyclicReport, MetabelianError> {
    if r.generator_bound() > 2 {
        return Err(MetabelianError::NotTwoGenerator(r.generator_bound()));
    }
    let w = r.cyclic_reduce();
    if w.len() <= 1 {
        return Err(MetabelianError::TooShort(w.len()));
    }
    let s = exponent_sums(&w, 2);
    let g = s[0].gcd(&s[1]);
    if g == 0 {
        return Err(MetabelianError::ZeroExponentSums);
    }
    if g != 1 {
        if let Some((m, n)) = baumslag_solitar_parameters(&w) {
            if m > 1 && n > 1 && m.gcd(&n) == 1 {
                let v = Verdict::new(Status::InfinitelyRelated, Rule::BaumslagSolitar).note(format!(
                    "Baumslag–Solitar relator with m = {m}, n = {n}: the metabelian top is Z[1/{}] ⋊ C∞, infinitely related",
                    m * n
                ));
                return Ok(CyclicReport { basis: None, f: None, verdict: v });
            }
        }
        let v = Verdict::new(Status::Inconclusive, Rule::TorsionAbelianization)
            .note(format!("abelianization Z ⊕ Z/{g} is not covered by this criterion"));
        return Ok(CyclicReport { basis: None, f: None, verdict: v });
    }
    let basis = normalize_two_gen_basis(&w).expect("coprime two-generator sums");
    let m = AbMap::new(1, vec![vec![0], vec![1]]);
    let f = abelianize(&fox_derivative(&basis.relator, 0), &m).expect("two generators");
    let verdict = if f.is_zero() {
        Verdict::new(Status::InfinitelyRelated, Rule::CyclicExtremal)
            .note("f(c) = 0: Γ'_ab is free of rank one over Z[c^±1]")
    } else {
        let lead = f.extremal_coeff(0, End::Leading).expect("univariate");
        let trail = f.extremal_coeff(0, End::Trailing).expect("univariate");
        let status =
            if is_pm_one(&lead) || is_pm_one(&trail) { Status::FinitelyPresented } else { Status::InfinitelyRelated };
        Verdict::new(status, Rule::CyclicExtremal).note(format!("leading {lead}, trailing {trail}"))
    };
    Ok(CyclicReport { basis: Some(basis), f: Some(f.clone()), verdict: verdict.with_poly(f) })
}

/// `(m, n)` when `r` is conjugate to `t^e a^m t^-e a^-n` or its inverse,
/// `e = ±1`, for some ordering of the two generators.
pub fn baumslag_solitar_parameters(r: &FreeWord) -> Option<(i64, i64)> {
    for w in [r.cyclic_reduce(), r.cyclic_reduce().invert()] {
        let syl = w.syllables();
        if syl.len() != 4 {
            continue;
        }
        for k in 0..4 {
            let at = |i: usize| syl[(k + i) % 4];
            let ((g0, e0), (h0, m), (g1, e1), (h1, n)) = (at(0), at(1), at(2), at(3));
            if g0 == g1 && h0 == h1 && g0 != h0 && e0.abs() == 1 && e1 == -e0 {
                return Some((m, -n));
            }
        }
    }
    None
}

/// Finitely presented (and polycyclic) metabelian top of a knot group iff an
/// extremal coefficient of its Alexander polynomial is `±1`.
pub fn alexander_criterion(delta: &LaurentPoly) -> Result<Verdict, MetabelianError> {
    if delta.is_zero() {
        return Err(MetabelianError::ZeroPolynomial);
    }
    let var = match delta.rank() {
        0 => None,
        1 => Some(0),
        _ => {
            let used: Vec<usize> = (0..delta.rank()).filter(|&v| delta.degree_span(v) != Some(0)).collect();
            match used.as_slice() {
                [] => None,
                [v] => Some(*v),
                _ => return Err(MetabelianError::NotUnivariate),
            }
        }
    };
    let (lead, trail) = match var {
        Some(v) => (
            delta.extremal_coeff(v, End::Leading).map_err(|_| MetabelianError::NotUnivariate)?,
            delta.extremal_coeff(v, End::Trailing).map_err(|_| MetabelianError::NotUnivariate)?,
        ),
        None => {
            let c = delta.terms().next().map(|(_, c)| c.clone()).unwrap();
            (c.clone(), c)
        }
    };
    let status =
        if is_pm_one(&lead) || is_pm_one(&trail) { Status::FinitelyPresented } else { Status::InfinitelyRelated };
    Ok(Verdict::new(status, Rule::AlexanderExtremal)
        .with_poly(delta.clone())
        .note(format!("leading {lead}, trailing {trail}")))
}

/// Everything computed for an Artin system.
#[derive(Debug, Clone)]
pub struct ArtinAnalysis {
    pub abelianization: AbelianizationData,
    pub chain: Option<ChainData>,
    pub kernel: Vec<ModuleVector>,
    pub quotient: Option<QuotientResult>,
    pub perfectness: Option<PerfectnessCertificate>,
    pub free_quotient: Option<u32>,
    pub generator_bound: Option<u64>,
    pub verdict: Verdict,
}

/// Finitely related iff polycyclic: decided from `Γ'_ab` when it is
/// computable, otherwise from structural certificates.
pub fn artin_verdict(g: &LabeledGraph, opts: SearchOptions, conv: Convention) -> ArtinAnalysis {
    let ab = abelianization_structure(g);
    let perfectness = perfectness_structural_certificate(g, conv);
    let free_quotient = free_quotient_obstruction(g, conv);
    let generator_bound = derived_generators_bound(g);
    let mut notes = Vec::new();
    let mut chain = None;
    let mut kernel = Vec::new();
    let mut quotient = None;
    let mut verdict = None;

    if ab.rank <= 2 {
        let c = build_chain(&standard_presentation(g, conv), &ab.map).expect("Artin relators abelianize to zero");
        match kernel_basis_d1(&c) {
            Ok(k) => {
                let q = quotient_structure(&c, &k, opts).expect("kernel basis spans the d2 rows");
                let s = q.structure.clone();
                let status = match s.kind {
                    StructureKind::Trivial | StructureKind::FreeFinite { .. } => Some(Status::FinitelyPresented),
                    StructureKind::CountablyInfinite => Some(Status::InfinitelyRelated),
                    StructureKind::Unknown => None,
                };
                if let Some(st) = status {
                    let mut v = Verdict::new(st, Rule::Homology);
                    v.structure = Some(s);
                    verdict = Some(v);
                } else {
                    notes.push(format!("homology inconclusive at window {}", opts.window));
                }
                kernel = k;
                quotient = Some(q);
            }
            Err(e) => notes.push(e.to_string()),
        }
        chain = Some(c);
    } else {
        notes.push(format!("exact homology for abelianization rank {} is not supported", ab.rank));
    }

    if let (Some(_), Some(v)) = (&perfectness, &verdict) {
        let kind = &v.structure.as_ref().unwrap().kind;
        assert_eq!(*kind, StructureKind::Trivial, "perfectness certificate contradicts computed homology");
    }
    if let Some(m2) = free_quotient {
        notes.push(format!("Γ' maps onto a free group of rank {m2}, so Γ'_ab maps onto Z^{m2}"));
    }

    let mut verdict = verdict.unwrap_or_else(|| {
        if perfectness.is_some() {
            let mut v = Verdict::new(Status::FinitelyPresented, Rule::PerfectnessCertificate);
            v.structure = Some(AbelianStructure {
                kind: StructureKind::Trivial,
                certificate: vec!["structural perfectness certificate".into()],
            });
            v
        } else if let Some(b) = generator_bound {
            Verdict::new(Status::FinitelyPresented, Rule::GeneratorBound)
                .note(format!("Γ' is generated by at most {b} elements"))
        } else if g.len() == 2 && g.has_edge(0, 1) && g.label(0, 1).is_multiple_of(2) {
            Verdict::new(Status::InfinitelyRelated, Rule::EvenTwoGenerator)
        } else {
            Verdict::new(Status::Inconclusive, Rule::NoRule)
        }
    });
    verdict.notes.extend(notes);
    if verdict.status == Status::FinitelyPresented {
        assert!(
            verdict.structure.as_ref().is_none_or(|s| s.kind != StructureKind::CountablyInfinite),
            "finitely presented verdict with infinitely generated Γ'_ab"
        );
    }
    ArtinAnalysis { abelianization: ab, chain, kernel, quotient, perfectness, free_quotient, generator_bound, verdict }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::artin::TypeTag;
    use crate::freegroup::{parse_word, NameTable};

    fn word(s: &str, names: &[&str]) -> FreeWord {
        parse_word(s, &mut NameTable::declared(names)).unwrap()
    }

    fn p2(s: &str) -> LaurentPoly {
        LaurentPoly::parse(s, &["x", "y"]).unwrap()
    }

    #[test]
    fn sigma_predicate() {
        let s = |t: &str| LaurentPoly::parse(t, &["s"]).unwrap();
        assert!(sigma_positive_witness(&s("s + s^2"), &Character::from_integers(&[1])).unwrap());
        assert!(!sigma_positive_witness(&s("1 + s"), &Character::from_integers(&[1])).unwrap());
        let st = LaurentPoly::parse("s*t + s^2*t^2", &["s", "t"]).unwrap();
        assert!(!sigma_positive_witness(&st, &Character::from_integers(&[1, -1])).unwrap());
        assert_eq!(
            sigma_positive_witness(&s("s"), &Character::from_integers(&[0])),
            Err(MetabelianError::ZeroCharacter)
        );
    }

    #[test]
    fn hulls() {
        assert_eq!(convex_hull(&[(0, 0), (1, 0), (2, 0)]), vec![(0, 0), (2, 0)]);
        assert_eq!(convex_hull(&[(0, 0), (2, 0), (1, 1), (0, 2), (1, 0)]), vec![(0, 0), (2, 0), (0, 2)]);
    }

    #[test]
    fn commutator_examples() {
        let n = ["x", "y"];
        let r = commutator_relator_criterion(&word("x y x^-1 y^-1", &n)).unwrap();
        assert_eq!(r.lambda, p2("1"));
        assert_eq!(r.verdict.status, Status::FinitelyPresented);
        let bb = "x y x y^-1 x^-2 y x y x^-1 y^-2 x y x^-1 y^-1";
        let r = commutator_relator_criterion(&word(bb, &n)).unwrap();
        assert_eq!(r.lambda, p2("1 - x + y"));
        assert_eq!(r.verdict.status, Status::FinitelyPresented);
        let r = commutator_relator_criterion(&word("x y x y x^-1 y^-1 x^-1 y^-1", &n)).unwrap();
        assert_eq!(r.lambda, p2("1 + x*y"));
        assert_eq!(r.verdict.status, Status::InfinitelyRelated);
        assert_eq!(
            commutator_relator_criterion(&word("x y", &n)).unwrap_err(),
            MetabelianError::NonzeroExponentSums(1, 1)
        );
    }

    #[test]
    fn cyclic_examples() {
        let n = ["t", "a"];
        let r = cyclic_abelianization_criterion(&word("t a^2 t^2 a t^-3 a^-2", &n)).unwrap();
        assert_eq!(r.f.unwrap(), LaurentPoly::parse("2*t + t^3 - 2", &["t"]).unwrap());
        assert_eq!(r.verdict.status, Status::FinitelyPresented);
        let r = cyclic_abelianization_criterion(&word("t a t^-1 a^-2", &n)).unwrap();
        assert_eq!(r.verdict.status, Status::FinitelyPresented);
        let r = cyclic_abelianization_criterion(&word("t a^2 t^-1 a^-3", &n)).unwrap();
        assert_eq!(r.verdict.status, Status::InfinitelyRelated);
        let r = cyclic_abelianization_criterion(&word("a^2 t a^2 t^-1", &n)).unwrap();
        assert_eq!(r.verdict.status, Status::Inconclusive);
        let r = cyclic_abelianization_criterion(&word("t a^3 t^-1 a^-5", &n)).unwrap();
        assert_eq!((r.verdict.status, r.verdict.rule), (Status::InfinitelyRelated, Rule::BaumslagSolitar));
        assert_eq!(baumslag_solitar_parameters(&word("a^-5 t a^3 t^-1", &n)), Some((3, 5)));
        assert_eq!(baumslag_solitar_parameters(&word("t a^3 t a^-5", &n)), None);
    }

    #[test]
    fn alexander_examples() {
        let t = |s: &str| LaurentPoly::parse(s, &["t"]).unwrap();
        assert_eq!(alexander_criterion(&t("1 - t + t^2")).unwrap().status, Status::FinitelyPresented);
        assert_eq!(alexander_criterion(&t("2 - 3*t + 2*t^2")).unwrap().status, Status::InfinitelyRelated);
        assert_eq!(alexander_criterion(&t("1")).unwrap().status, Status::FinitelyPresented);
        assert_eq!(alexander_criterion(&t("0")), Err(MetabelianError::ZeroPolynomial));
        let st = LaurentPoly::parse("s + t", &["s", "t"]).unwrap();
        assert_eq!(alexander_criterion(&st), Err(MetabelianError::NotUnivariate));
    }

    fn verdict(t: &str) -> Verdict {
        let g = t.parse::<TypeTag>().unwrap().coxeter_graph();
        artin_verdict(&g, SearchOptions::default(), Convention::Complete).verdict
    }

    #[test]
    fn artin_examples() {
        assert_eq!(verdict("B2").status, Status::InfinitelyRelated);
        let v = verdict("A3");
        assert_eq!(v.status, Status::FinitelyPresented);
        assert_eq!(v.structure.unwrap().kind, StructureKind::FreeFinite { rank: 2, torsion: vec![] });
        let mut g = LabeledGraph::with_vertices(3);
        g.set_label(0, 1, 3);
        g.set_label(1, 2, 3);
        g.set_label(0, 2, 3);
        assert_eq!(
            artin_verdict(&g, SearchOptions::default(), Convention::Complete).verdict.status,
            Status::FinitelyPresented
        );
        let mut g = LabeledGraph::with_vertices(4);
        for (i, j) in [(0, 1), (1, 2), (2, 3), (0, 3), (0, 2)] {
            g.set_label(i, j, 3);
        }
        assert_eq!(
            artin_verdict(&g, SearchOptions::default(), Convention::Complete).verdict.status,
            Status::FinitelyPresented
        );
    }

    #[test]
    fn free_product_pair() {
        let g = LabeledGraph::with_vertices(2);
        let a = artin_verdict(&g, SearchOptions::default(), Convention::FreeProduct);
        assert_eq!(a.verdict.status, Status::InfinitelyRelated);
        let a = artin_verdict(&g, SearchOptions::default(), Convention::Complete);
        assert_eq!(a.verdict.status, Status::FinitelyPresented);
    }
}
