use std::fs;
use std::path::Path;

use metatop::artin::{
    classify_finite_type, odd_dihedral_derived, standard_presentation, Convention, LabeledGraph, TypeTag,
};
use metatop::freegroup::{abelianize, exponent_sums, fox_derivative, parse_word};
use metatop::homology::{render_vector, SearchOptions, StructureKind};
use metatop::laurent::default_names;
use metatop::metabelian::{
    alexander_criterion, artin_verdict, commutator_relator_criterion, cyclic_abelianization_criterion, Status, Verdict,
};
use metatop::{AbMap, LaurentPoly, NameTable};

use crate::report::{Report, VerdictReport};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_INCONCLUSIVE: i32 = 3;

/// Error caused by the input; reported with exit code 2.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InputError(pub String);

impl std::fmt::Display for InputError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

fn convention_name(c: Convention) -> &'static str {
    match c {
        Convention::Complete => "complete",
        Convention::FreeProduct => "free-product",
    }
}

pub fn load_graph(path: &Path) -> Result<LabeledGraph, InputError> {
    let text = fs::read_to_string(path).map_err(|e| InputError(format!("{}: {e}", path.display())))?;
    LabeledGraph::from_json(&text).map_err(|e| InputError(format!("{}: {e}", path.display())))
}

fn verdict_report(v: &Verdict, names: &[&str]) -> VerdictReport {
    VerdictReport {
        status: v.status.to_string(),
        rule: v.rule.to_string(),
        polynomial: v.polynomial.as_ref().map(|p| p.render(names)),
        structure: v.structure.as_ref().map(|s| s.kind.to_string()),
        certificate: v.structure.as_ref().map(|s| s.certificate.clone()).unwrap_or_default(),
        notes: v.notes.clone(),
    }
}

fn exit_for(status: Status) -> i32 {
    match status {
        Status::Inconclusive => EXIT_INCONCLUSIVE,
        _ => EXIT_OK,
    }
}

fn join_types(tags: &[TypeTag]) -> String {
    tags.iter().map(ToString::to_string).collect::<Vec<_>>().join(" + ")
}

pub fn classify(g: &LabeledGraph, source: &str) -> Report {
    let mut r = Report::new("classify");
    r.input("graph", source);
    let ab = metatop::artin::abelianization_structure(g);
    let types = classify_finite_type(g);
    let head = match &types {
        Some(t) => format!("finite type: {}", join_types(t)),
        None => "not of finite type".to_string(),
    };
    r.summary = format!("{head}; abelianization rank {}", ab.rank);
    r.step(
        "odd-subgraph components",
        ab.components
            .iter()
            .map(|c| c.iter().map(|&v| g.vertices()[v].clone()).collect::<Vec<_>>().join(" "))
            .collect(),
    );
    r
}

pub fn homology(g: &LabeledGraph, source: &str, opts: SearchOptions, conv: Convention) -> Report {
    let mut r = Report::new("homology");
    r.input("graph", source);
    r.window = Some(opts.window);
    r.convention = Some(convention_name(conv).into());

    let p = standard_presentation(g, conv);
    r.step("presentation", p.relators.iter().map(|w| w.render(&p.generators)).collect());
    let a = artin_verdict(g, opts, conv);
    let rank = a.abelianization.rank;
    let qnames = default_names(rank);
    let qn: Vec<&str> = qnames.iter().map(String::as_str).collect();
    r.step(
        "abelianization",
        std::iter::once(format!("rank {rank}"))
            .chain(
                g.vertices()
                    .iter()
                    .zip(&a.abelianization.map.images)
                    .map(|(v, e)| format!("{v} -> {}", LaurentPoly::monomial(e).render(&qn))),
            )
            .collect(),
    );
    if let Some(tags) = classify_finite_type(g) {
        r.step("type", vec![join_types(&tags)]);
    }
    if let Some(c) = &a.chain {
        r.step("d1", c.labels.iter().zip(&c.d1).map(|(l, d)| format!("{l} -> {}", d.render(&qn))).collect());
        r.step("d2", c.d2.iter().map(|row| render_vector(row, &c.labels, &qn)).collect());
        let knames: Vec<String> = (1..=a.kernel.len()).map(|i| format!("k{i}")).collect();
        r.step(
            "kernel basis",
            a.kernel.iter().zip(&knames).map(|(v, k)| format!("{k} = {}", render_vector(v, &c.labels, &qn))).collect(),
        );
        if let Some(q) = &a.quotient {
            r.step(
                "relations in kernel coordinates",
                q.kernel_rows.iter().map(|row| render_vector(row, &knames, &qn)).collect(),
            );
            r.step(
                "combinations found",
                q.combinations
                    .iter()
                    .map(|f| {
                        let coeffs: Vec<String> = f.combination.iter().map(|l| l.render(&qn)).collect();
                        format!("{}: ({})", f.target, coeffs.join(", "))
                    })
                    .collect(),
            );
        }
    }
    if let Some(cert) = &a.perfectness {
        let name = |v: usize| g.vertices()[v].clone();
        let tree: Vec<String> = cert.tree.iter().map(|&(i, j)| format!("{}-{}", name(i), name(j))).collect();
        let witness = match &cert.witness {
            metatop::artin::PerfectnessWitness::A4Segment(s) => {
                format!("A4 segment {}", s.iter().map(|&v| name(v)).collect::<Vec<_>>().join("-"))
            }
            metatop::artin::PerfectnessWitness::H3Pair(s) => {
                format!("H3 pair {}", s.iter().map(|&v| name(v)).collect::<Vec<_>>().join("-"))
            }
        };
        r.step("perfectness certificate", vec![format!("odd spanning tree {}", tree.join(" ")), witness]);
    }
    if let Some(b) = a.generator_bound {
        r.step("generator bound", vec![format!("Γ' is generated by at most {b} elements")]);
    }
    let mut tail = String::new();
    if g.len() == 2 && g.has_edge(0, 1) && g.label(0, 1) % 2 == 1 {
        let m = i64::from((g.label(0, 1) - 1) / 2);
        if let Ok(d) = odd_dihedral_derived(m) {
            r.step("odd dihedral rewriting", vec![format!("r0 = {}", d.render())]);
            tail = format!("; Γ' free of rank {}", d.free_rank);
        }
    }

    let v = &a.verdict;
    let head = match v.structure.as_ref().map(|s| &s.kind) {
        Some(StructureKind::Trivial) => "Γ' perfect".to_string(),
        Some(StructureKind::CountablyInfinite) => "Γ'_ab: countably infinite rank".to_string(),
        Some(k @ StructureKind::FreeFinite { .. }) => format!("Γ'_ab: {k}"),
        Some(StructureKind::Unknown) | None => match a.generator_bound {
            Some(_) => "Γ' finitely generated".to_string(),
            None => "Γ'_ab: undetermined".to_string(),
        },
    };
    r.summary = format!("{head}; metabelian top: {}{tail}", v.status);
    r.verdict = Some(verdict_report(v, &qn));
    r.exit_code = exit_for(v.status);
    r
}

pub fn onerel(gens: &[String], relator: &str) -> Result<Report, InputError> {
    if gens.len() != 2 {
        return Err(InputError(format!(
            "{}-generator input rejected: only two-generator one-relator groups are handled; \
             for more generators only the deficiency-based bound on Γ' applies, which is not computed",
            gens.len()
        )));
    }
    let mut table = NameTable::declared(gens);
    let w = parse_word(relator, &mut table).map_err(|e| InputError(e.to_string()))?;
    let mut r = Report::new("onerel");
    r.input("generators", gens.join(","));
    r.input("relator", w.render(gens));
    let sums = exponent_sums(&w, 2);
    r.step("exponent sums", vec![format!("{}: {}, {}: {}", gens[0], sums[0], gens[1], sums[1])]);
    let names: Vec<&str> = gens.iter().map(String::as_str).collect();
    let verdict = if sums == [0, 0] {
        let rep = commutator_relator_criterion(&w).map_err(|e| InputError(e.to_string()))?;
        let dx = abelianize(&fox_derivative(&w, 0), &AbMap::identity(2)).expect("two generators");
        r.step("D_x(r) abelianized", vec![dx.render(&names)]);
        r.step("λ", vec![rep.lambda.render(&names)]);
        r.step("hull", vec![rep.hull.iter().map(|(a, b)| format!("({a}, {b})")).collect::<Vec<_>>().join(" ")]);
        r.summary = format!("λ = {}", rep.lambda.render(&names));
        r.verdict = Some(verdict_report(&rep.verdict, &names));
        rep.verdict
    } else {
        let rep = cyclic_abelianization_criterion(&w).map_err(|e| InputError(e.to_string()))?;
        let mut var = "c".to_string();
        if let Some(b) = &rep.basis {
            r.step(
                "basis",
                vec![
                    format!("a = {}", b.new_in_old[0].render(gens)),
                    format!("t = {}", b.new_in_old[1].render(gens)),
                    format!("relator = {}", b.relator.render(&["a".to_string(), "t".to_string()])),
                ],
            );
            if let [(g, 1)] = b.new_in_old[1].syllables() {
                var = gens[*g].clone();
            }
        }
        let vn = [var.as_str()];
        match &rep.f {
            Some(f) => {
                r.step("f(c)", vec![f.render(&vn)]);
                r.summary = format!("f = {}", f.render(&vn));
            }
            None => {
                let d = num_gcd(sums[0], sums[1]);
                r.summary = format!("Γ_ab = Z ⊕ Z/{d}");
            }
        }
        r.verdict = Some(verdict_report(&rep.verdict, &vn));
        rep.verdict
    };
    r.summary = format!("{}; metabelian top: {}", r.summary, verdict.status);
    r.exit_code = exit_for(verdict.status);
    Ok(r)
}

fn num_gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        num_gcd(b, a % b)
    }
}

pub fn alexander(poly: &str) -> Result<Report, InputError> {
    let (p, names) = LaurentPoly::parse_infer(poly).map_err(|e| InputError(e.to_string()))?;
    if names.len() > 1 {
        return Err(InputError(format!("polynomial is not univariate: variables {}", names.join(", "))));
    }
    let names = if names.is_empty() { vec!["t".to_string()] } else { names };
    let vn: Vec<&str> = names.iter().map(String::as_str).collect();
    let p = if p.rank() == 0 {
        LaurentPoly::constant(1, p.terms().next().map(|(_, c)| c.clone()).unwrap_or_default())
    } else {
        p
    };
    let v = alexander_criterion(&p).map_err(|e| InputError(e.to_string()))?;
    let mut r = Report::new("alexander");
    r.input("polynomial", p.render(&vn));
    r.summary = format!("Δ = {}; {}; metabelian top: {}", p.render(&vn), v.notes.join("; "), v.status);
    r.verdict = Some(verdict_report(&v, &vn));
    r.exit_code = exit_for(v.status);
    Ok(r)
}

pub fn graph_of_type(tag: &str) -> Result<String, InputError> {
    let t: TypeTag = tag.parse().map_err(InputError)?;
    Ok(t.coxeter_graph().to_json())
}
