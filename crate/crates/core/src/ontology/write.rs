use std::fmt::Write;

use super::Ontology;

fn is_local_name(s: &str) -> bool {
    !s.is_empty()
        && s
            .chars()
            .all(|c| c.is_alphanumeric() || matches!(c, '_' | '-' | '.'))
}

fn abbreviate(o: &Ontology, iri: &str) -> String {
    o.prefixes()
        .iter()
        .filter(|(_, ns)| iri.starts_with(ns.as_str()) && is_local_name(&iri[ns.len()..]))
        .max_by_key(|(_, ns)| ns.len())
        .map(|(p, ns)| format!("{p}:{}", &iri[ns.len()..]))
        .unwrap_or_else(|| format!("<{iri}>"))
}

/// Writes `o` in the same syntax subset [`super::parse_ontology`] reads.
/// Output is sorted, so equal ontologies serialize identically.
pub fn serialize_ontology(o: &Ontology) -> String {
    let mut out = String::new();
    let n = |iri: &str| abbreviate(o, iri);
    for (p, ns) in o.prefixes() {
        let _ = writeln!(out, "Prefix({p}:=<{ns}>)");
    }
    match o.iri() {
        Some(iri) => {
            let _ = writeln!(out, "Ontology(<{iri}>");
        }
        None => out.push_str("Ontology(\n"),
    }
    for c in o.classes() {
        let _ = writeln!(out, "  Declaration(Class({}))", n(c.iri()));
    }
    for p in o.properties() {
        let _ = writeln!(out, "  Declaration(ObjectProperty({}))", n(p.iri()));
    }
    for i in o.individuals() {
        let _ = writeln!(out, "  Declaration(NamedIndividual({}))", n(i.iri()));
    }
    for (sub, sup) in o.subclass_axioms() {
        let _ = writeln!(out, "  SubClassOf({} {})", n(sub.iri()), n(sup.iri()));
    }
    for set in o.disjoint_axioms() {
        let names: Vec<_> = set.iter().map(|c| n(c.iri())).collect();
        let _ = writeln!(out, "  DisjointClasses({})", names.join(" "));
    }
    for (i, c) in o.class_assertions() {
        let _ = writeln!(out, "  ClassAssertion({} {})", n(c.iri()), n(i.iri()));
    }
    for (s, p, t) in o.property_assertions() {
        let _ = writeln!(
            out,
            "  ObjectPropertyAssertion({} {} {})",
            n(p.iri()),
            n(s.iri()),
            n(t.iri())
        );
    }
    out.push_str(")\n");
    out
}
