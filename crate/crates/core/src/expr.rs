//! Class expressions: the hypothesis language of the learner.

use std::fmt;

use crate::ontology::{ClassId, PropertyId};

/// A description logic concept built from named classes with ⊓, ⊔, ¬, ∃, ∀
/// and qualified cardinality restrictions.
///
/// `And` / `Or` hold at least two operands when built through the
/// constructors below. Expressions are plain values; clone freely.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ClassExpression {
    Top,
    Bottom,
    Named(ClassId),
    Not(Box<ClassExpression>),
    And(Vec<ClassExpression>),
    Or(Vec<ClassExpression>),
    Exists(PropertyId, Box<ClassExpression>),
    ForAll(PropertyId, Box<ClassExpression>),
    MinCard(u32, PropertyId, Box<ClassExpression>),
    MaxCard(u32, PropertyId, Box<ClassExpression>),
}

use ClassExpression::*;

impl ClassExpression {
    pub fn named(c: ClassId) -> Self {
        Named(c)
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(c: ClassExpression) -> Self {
        Not(Box::new(c))
    }

    /// Conjunction of `items`. Zero items give ⊤ and a single item is
    /// returned unchanged; nested conjunctions are kept as written.
    pub fn and(mut items: Vec<ClassExpression>) -> Self {
        match items.len() {
            0 => Top,
            1 => items.pop().unwrap(),
            _ => And(items),
        }
    }

    /// Disjunction of `items`; zero items give ⊥.
    pub fn or(mut items: Vec<ClassExpression>) -> Self {
        match items.len() {
            0 => Bottom,
            1 => items.pop().unwrap(),
            _ => Or(items),
        }
    }

    pub fn exists(p: PropertyId, c: ClassExpression) -> Self {
        Exists(p, Box::new(c))
    }

    pub fn for_all(p: PropertyId, c: ClassExpression) -> Self {
        ForAll(p, Box::new(c))
    }

    /// `≥ n p.c`; `n` must be at least 1.
    pub fn min_card(n: u32, p: PropertyId, c: ClassExpression) -> Self {
        assert!(n >= 1, "min cardinality must be at least 1");
        MinCard(n, p, Box::new(c))
    }

    pub fn max_card(n: u32, p: PropertyId, c: ClassExpression) -> Self {
        MaxCard(n, p, Box::new(c))
    }

    /// Named classes, ⊤ and ⊥.
    pub fn is_atomic(&self) -> bool {
        matches!(self, Top | Bottom | Named(_))
    }

    /// Syntactic length: atoms count 1, ¬ adds 1, every ⊓/⊔ connective adds
    /// 1, ∃/∀ add 2 (property + quantifier) and cardinality restrictions add
    /// 3 (property + quantifier + number) to their filler.
    pub fn length(&self) -> usize {
        match self {
            Top | Bottom | Named(_) => 1,
            Not(c) => 1 + c.length(),
            And(cs) | Or(cs) => cs.iter().map(Self::length).sum::<usize>() + cs.len() - 1,
            Exists(_, c) | ForAll(_, c) => 2 + c.length(),
            MinCard(_, _, c) | MaxCard(_, _, c) => 3 + c.length(),
        }
    }

    /// Every `Named` occurrence, with multiplicity, in left-to-right order.
    pub fn named_classes(&self) -> Vec<ClassId> {
        let mut out = Vec::new();
        self.collect_named(&mut out);
        out
    }

    fn collect_named(&self, out: &mut Vec<ClassId>) {
        match self {
            Top | Bottom => {}
            Named(c) => out.push(c.clone()),
            Not(c) | Exists(_, c) | ForAll(_, c) | MinCard(_, _, c) | MaxCard(_, _, c) => {
                c.collect_named(out)
            }
            And(cs) | Or(cs) => cs.iter().for_each(|c| c.collect_named(out)),
        }
    }

    /// Top-level conjuncts: the operands of an `And`, or the expression
    /// itself.
    pub fn conjuncts(&self) -> &[ClassExpression] {
        match self {
            And(cs) => cs,
            other => std::slice::from_ref(other),
        }
    }

    /// `a ⊓ b` with the conjuncts of both sides spliced into one flat list,
    /// `a`'s first. No other simplification.
    pub fn conjoin(a: &ClassExpression, b: &ClassExpression) -> ClassExpression {
        let mut items = a.conjuncts().to_vec();
        items.extend_from_slice(b.conjuncts());
        And(items)
    }

    /// Negation normal form with flattened, sorted and deduplicated ⊓/⊔
    /// operand lists. Two expressions with the same canonical form are
    /// treated as the same hypothesis.
    pub fn canonical_form(&self) -> ClassExpression {
        self.nnf(false)
    }

    fn nnf(&self, negated: bool) -> ClassExpression {
        match (self, negated) {
            (Top | Bottom | Named(_), false) => self.clone(),
            (Top | Bottom | Named(_), true) => Self::not(self.clone()),
            (Not(c), n) => c.nnf(!n),
            (And(cs), false) | (Or(cs), true) => {
                Self::sorted_junction(cs.iter().map(|c| c.nnf(negated)), true)
            }
            (Or(cs), false) | (And(cs), true) => {
                Self::sorted_junction(cs.iter().map(|c| c.nnf(negated)), false)
            }
            (Exists(p, c), false) => Self::exists(p.clone(), c.nnf(false)),
            (Exists(p, c), true) => Self::for_all(p.clone(), c.nnf(true)),
            (ForAll(p, c), false) => Self::for_all(p.clone(), c.nnf(false)),
            (ForAll(p, c), true) => Self::exists(p.clone(), c.nnf(true)),
            (MinCard(n, p, c), false) => MinCard(*n, p.clone(), Box::new(c.nnf(false))),
            (MinCard(n, p, c), true) => MaxCard(n - 1, p.clone(), Box::new(c.nnf(false))),
            (MaxCard(n, p, c), false) => MaxCard(*n, p.clone(), Box::new(c.nnf(false))),
            (MaxCard(n, p, c), true) => MinCard(n + 1, p.clone(), Box::new(c.nnf(false))),
        }
    }

    fn sorted_junction(items: impl Iterator<Item = ClassExpression>, conj: bool) -> ClassExpression {
        let mut flat: Vec<(String, ClassExpression)> = Vec::new();
        for item in items {
            match item {
                And(cs) if conj => flat.extend(cs.into_iter().map(|c| (c.render(), c))),
                Or(cs) if !conj => flat.extend(cs.into_iter().map(|c| (c.render(), c))),
                other => flat.push((other.render(), other)),
            }
        }
        flat.sort_by(|a, b| a.0.cmp(&b.0));
        flat.dedup_by(|a, b| a.0 == b.0);
        let items = flat.into_iter().map(|(_, c)| c).collect();
        if conj {
            Self::and(items)
        } else {
            Self::or(items)
        }
    }

    /// Manchester-like rendering used in reports and traces, e.g.
    /// `Student and UniversityEmployee and (inProgram some Thing)`.
    pub fn render(&self) -> String {
        let mut s = String::new();
        self.render_into(&mut s);
        s
    }

    fn render_operand(&self, out: &mut String) {
        if self.is_atomic() {
            self.render_into(out);
        } else {
            out.push('(');
            self.render_into(out);
            out.push(')');
        }
    }

    fn render_into(&self, out: &mut String) {
        match self {
            Top => out.push_str("Thing"),
            Bottom => out.push_str("Nothing"),
            Named(c) => out.push_str(c.local_name()),
            Not(c) => {
                out.push_str("not (");
                c.render_into(out);
                out.push(')');
            }
            And(cs) | Or(cs) => {
                let sep = if matches!(self, And(_)) { " and " } else { " or " };
                for (i, c) in cs.iter().enumerate() {
                    if i > 0 {
                        out.push_str(sep);
                    }
                    c.render_operand(out);
                }
            }
            Exists(p, c) | ForAll(p, c) => {
                out.push_str(p.local_name());
                out.push_str(if matches!(self, Exists(..)) { " some " } else { " only " });
                c.render_operand(out);
            }
            MinCard(n, p, c) | MaxCard(n, p, c) => {
                let op = if matches!(self, MinCard(..)) { ">=" } else { "<=" };
                out.push_str(&format!("{op} {n} {}.", p.local_name()));
                c.render_operand(out);
            }
        }
    }
}

impl fmt::Display for ClassExpression {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

impl fmt::Debug for ClassExpression {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "«{}»", self.render())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(n: &str) -> ClassExpression {
        Named(ClassId::new(format!("http://example.org/uni#{n}")).unwrap())
    }

    fn p(n: &str) -> PropertyId {
        PropertyId::new(format!("http://example.org/uni#{n}")).unwrap()
    }

    #[test]
    fn lengths() {
        assert_eq!(c("Student").length(), 1);
        assert_eq!(ClassExpression::and(vec![c("Student"), c("UniversityEmployee")]).length(), 3);
        let target = ClassExpression::and(vec![
            c("Student"),
            c("UniversityEmployee"),
            ClassExpression::exists(p("inProgram"), Top),
        ]);
        // 1 + 1 + (2 + 1) + 2 connectives
        assert_eq!(target.length(), 7);
        assert_eq!(ClassExpression::not(c("A")).length(), 2);
        assert_eq!(ClassExpression::min_card(2, p("r"), Top).length(), 4);
    }

    #[test]
    fn named_class_multiset() {
        assert!(Top.named_classes().is_empty());
        assert_eq!(
            ClassExpression::and(vec![c("Student"), c("Student")]).named_classes().len(),
            2
        );
        let e = ClassExpression::and(vec![
            c("Student"),
            ClassExpression::exists(p("inProgram"), c("ResearchProgram")),
        ]);
        let names: Vec<_> = e.named_classes().iter().map(|c| c.local_name().to_string()).collect();
        assert_eq!(names, ["Student", "ResearchProgram"]);
    }

    #[test]
    fn conjoin_flattens() {
        let s = c("Student");
        let u = c("UniversityEmployee");
        assert_eq!(ClassExpression::conjoin(&s, &u), And(vec![s.clone(), u.clone()]));
        assert_eq!(ClassExpression::conjoin(&Top, &u), And(vec![Top, u.clone()]));
        let ab = ClassExpression::and(vec![c("A"), c("B")]);
        assert_eq!(ClassExpression::conjoin(&ab, &c("C")), And(vec![c("A"), c("B"), c("C")]));
    }

    #[test]
    fn canonical_examples() {
        assert_eq!(ClassExpression::and(vec![c("Student"), c("Student")]).canonical_form(), c("Student"));
        assert_eq!(
            ClassExpression::and(vec![c("UniversityEmployee"), c("Student")]).canonical_form(),
            And(vec![c("Student"), c("UniversityEmployee")])
        );
        assert_eq!(
            ClassExpression::not(ClassExpression::and(vec![c("A"), c("B")])).canonical_form(),
            Or(vec![ClassExpression::not(c("A")), ClassExpression::not(c("B"))])
        );
    }

    #[test]
    fn canonical_negated_restrictions() {
        let r = p("r");
        let e = ClassExpression::not(ClassExpression::exists(r.clone(), c("A")));
        assert_eq!(e.canonical_form(), ClassExpression::for_all(r.clone(), ClassExpression::not(c("A"))));
        let e = ClassExpression::not(ClassExpression::min_card(2, r.clone(), c("A")));
        assert_eq!(e.canonical_form(), ClassExpression::max_card(1, r.clone(), c("A")));
        let e = ClassExpression::not(ClassExpression::max_card(0, r.clone(), c("A")));
        assert_eq!(e.canonical_form(), ClassExpression::min_card(1, r, c("A")));
        assert_eq!(ClassExpression::not(ClassExpression::not(c("A"))).canonical_form(), c("A"));
    }

    #[test]
    fn rendering() {
        let target = ClassExpression::and(vec![
            c("Student"),
            c("UniversityEmployee"),
            ClassExpression::exists(p("inProgram"), Top),
        ]);
        assert_eq!(target.render(), "Student and UniversityEmployee and (inProgram some Thing)");
        assert_eq!(Top.render(), "Thing");
        assert_eq!(Bottom.render(), "Nothing");
        assert_eq!(ClassExpression::not(c("ResearchProgram")).render(), "not (ResearchProgram)");
        assert_eq!(
            ClassExpression::and(vec![c("Student"), ClassExpression::not(c("ResearchProgram"))]).render(),
            "Student and (not (ResearchProgram))"
        );
        assert_eq!(
            ClassExpression::max_card(3, p("hasAtom"), c("Carbon10")).render(),
            "<= 3 hasAtom.Carbon10"
        );
        assert_eq!(
            ClassExpression::for_all(p("r"), ClassExpression::or(vec![c("A"), c("B")])).render(),
            "r only (A or B)"
        );
    }

    #[test]
    fn canonical_sorts_restrictions_after_names() {
        let e = ClassExpression::and(vec![
            c("Student"),
            ClassExpression::exists(p("inProgram"), Top),
            c("UniversityEmployee"),
        ]);
        assert_eq!(
            e.canonical_form().render(),
            "Student and UniversityEmployee and (inProgram some Thing)"
        );
    }
}
