//! Thesaurus flattening into independent categories.
//!
//! A taxonomy is cut at a fixed depth below its domain roots. Concepts at the
//! cut become categories, as do leaves that sit above it; deeper concepts map
//! to their ancestor at the cut. Interior concepts above the cut have no
//! category unless corpus codes point at them (see [`flatten_with_codes`]).

use alloc::collections::{BTreeMap, BTreeSet, VecDeque};
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Taxonomy {
    parent: BTreeMap<String, Option<String>>,
    children: BTreeMap<String, Vec<String>>,
    depth: BTreeMap<String, usize>,
}

impl Taxonomy {
    /// Builds a forest from `(concept, parent)` pairs; roots have no parent.
    pub fn from_edges<I>(edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (String, Option<String>)>,
    {
        let mut parent = BTreeMap::new();
        for (concept, up) in edges {
            if concept.is_empty() {
                return Err(Error::MalformedTaxonomy("empty concept id".into()));
            }
            if parent.insert(concept.clone(), up).is_some() {
                return Err(Error::MalformedTaxonomy(alloc::format!("concept `{concept}` listed twice")));
            }
        }
        let mut children: BTreeMap<String, Vec<String>> = BTreeMap::new();
        for (concept, up) in &parent {
            if let Some(up) = up {
                if !parent.contains_key(up) {
                    return Err(Error::MalformedTaxonomy(alloc::format!(
                        "concept `{concept}` has unknown parent `{up}`"
                    )));
                }
                children.entry(up.clone()).or_default().push(concept.clone());
            }
        }
        let mut depth = BTreeMap::new();
        let mut queue: VecDeque<(&String, usize)> = parent
            .iter()
            .filter(|(_, up)| up.is_none())
            .map(|(c, _)| (c, 0))
            .collect();
        while let Some((concept, d)) = queue.pop_front() {
            depth.insert(concept.clone(), d);
            for child in children.get(concept).into_iter().flatten() {
                queue.push_back((child, d + 1));
            }
        }
        if depth.len() != parent.len() {
            let stuck = parent.keys().find(|c| !depth.contains_key(*c)).cloned().unwrap_or_default();
            return Err(Error::MalformedTaxonomy(alloc::format!(
                "concept `{stuck}` never reaches a root (cycle)"
            )));
        }
        Ok(Taxonomy { parent, children, depth })
    }

    /// Parses `concept TAB parent` lines; roots have an empty parent column.
    /// Blank lines and `#` comments are skipped.
    pub fn parse_tsv(text: &str) -> Result<Self> {
        let mut edges = Vec::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.strip_suffix('\r').unwrap_or(line);
            if line.trim().is_empty() || line.starts_with('#') {
                continue;
            }
            let mut cols = line.split('\t');
            let concept = cols.next().unwrap_or("").trim();
            let up = cols.next().map(str::trim);
            if concept.is_empty() || cols.next().is_some() {
                return Err(Error::Parse {
                    line: i + 1,
                    message: "expected `concept<TAB>parent`".into(),
                });
            }
            let up = up.filter(|p| !p.is_empty()).map(ToString::to_string);
            edges.push((concept.to_string(), up));
        }
        Taxonomy::from_edges(edges)
    }

    pub fn len(&self) -> usize {
        self.parent.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parent.is_empty()
    }

    pub fn contains(&self, concept: &str) -> bool {
        self.parent.contains_key(concept)
    }

    pub fn concepts(&self) -> impl Iterator<Item = &str> {
        self.parent.keys().map(String::as_str)
    }

    /// Top-level concepts (domains).
    pub fn roots(&self) -> impl Iterator<Item = &str> {
        self.parent
            .iter()
            .filter(|(_, up)| up.is_none())
            .map(|(c, _)| c.as_str())
    }

    pub fn parent(&self, concept: &str) -> Option<&str> {
        self.parent.get(concept).and_then(|p| p.as_deref())
    }

    pub fn children(&self, concept: &str) -> &[String] {
        self.children.get(concept).map(Vec::as_slice).unwrap_or(&[])
    }

    /// Distance from the concept's root; roots are at depth 0.
    pub fn depth(&self, concept: &str) -> Option<usize> {
        self.depth.get(concept).copied()
    }

    pub fn is_leaf(&self, concept: &str) -> bool {
        self.children(concept).is_empty()
    }

    /// True when `ancestor` is a strict ancestor of `concept`.
    pub fn is_ancestor(&self, ancestor: &str, concept: &str) -> bool {
        let mut cur = self.parent(concept);
        while let Some(c) = cur {
            if c == ancestor {
                return true;
            }
            cur = self.parent(c);
        }
        false
    }

    /// `concept` and everything below it, breadth first.
    pub fn subtree(&self, concept: &str) -> Vec<&str> {
        let mut out = Vec::new();
        let mut queue = VecDeque::new();
        if let Some((c, _)) = self.parent.get_key_value(concept) {
            queue.push_back(c.as_str());
        }
        while let Some(c) = queue.pop_front() {
            out.push(c);
            queue.extend(self.children(c).iter().map(String::as_str));
        }
        out
    }

    fn ancestor_at<'a>(&'a self, concept: &'a str, depth: usize) -> &'a str {
        let mut cur = concept;
        let mut d = self.depth[concept];
        while d > depth {
            cur = self.parent(cur).unwrap_or(cur);
            d -= 1;
        }
        cur
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CategoryMapping {
    pub depth: usize,
    pub categories: BTreeSet<String>,
    pub to_category: BTreeMap<String, String>,
    /// Known concepts without a category (domain roots, interior concepts
    /// above the cut).
    pub unmapped: BTreeSet<String>,
}

impl CategoryMapping {
    pub fn category(&self, concept: &str) -> Result<&str> {
        match self.to_category.get(concept) {
            Some(c) => Ok(c),
            None if self.unmapped.contains(concept) => Err(Error::UnmappedConcept(concept.to_string())),
            None => Err(Error::UnknownConcept(concept.to_string())),
        }
    }
}

/// What [`flatten_with_codes`] did with the corpus codes.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct FlattenReport {
    /// Concepts above the cut that became categories of their own.
    pub promoted: BTreeSet<String>,
    /// Coded concepts above the cut that could not be promoted, with the
    /// in-use categories below them that blocked it.
    pub conflicts: BTreeMap<String, BTreeSet<String>>,
    /// Corpus codes left without a category.
    pub unmappable: BTreeSet<String>,
    /// Corpus codes the taxonomy does not know.
    pub unknown: BTreeSet<String>,
}

/// Depth cut without corpus information.
pub fn flatten(tax: &Taxonomy, depth: usize) -> Result<CategoryMapping> {
    Ok(flatten_with_codes(tax, depth, &BTreeSet::new())?.0)
}

/// Depth cut, then promotion of coded interior concepts above the cut.
///
/// A non-root concept above the cut that carries corpus codes becomes a
/// category (absorbing its whole subtree) when none of the categories below
/// it is used by any code. Otherwise its codes stay unmappable and the
/// conflict is reported. Concepts are visited shallowest first, so the
/// categories always form an antichain.
pub fn flatten_with_codes(
    tax: &Taxonomy,
    depth: usize,
    corpus_codes: &BTreeSet<String>,
) -> Result<(CategoryMapping, FlattenReport)> {
    if depth == 0 {
        return Err(Error::InvalidParameter("flattening depth must be >= 1".into()));
    }
    let mut categories = BTreeSet::new();
    let mut to_category = BTreeMap::new();
    let mut unmapped = BTreeSet::new();
    for concept in tax.concepts() {
        let d = tax.depth[concept];
        if d >= depth {
            let cat = tax.ancestor_at(concept, depth);
            categories.insert(cat.to_string());
            to_category.insert(concept.to_string(), cat.to_string());
        } else if tax.is_leaf(concept) {
            categories.insert(concept.to_string());
            to_category.insert(concept.to_string(), concept.to_string());
        } else {
            unmapped.insert(concept.to_string());
        }
    }

    let mut report = FlattenReport::default();
    let mut used: BTreeSet<String> = BTreeSet::new();
    for code in corpus_codes {
        if !tax.contains(code) {
            report.unknown.insert(code.clone());
        } else if let Some(cat) = to_category.get(code) {
            used.insert(cat.clone());
        }
    }

    let mut pending: Vec<&str> = corpus_codes
        .iter()
        .map(String::as_str)
        .filter(|c| unmapped.contains(*c) && tax.parent(c).is_some())
        .collect();
    pending.sort_by_key(|c| (tax.depth[*c], *c));
    for concept in pending {
        if to_category.contains_key(concept) {
            continue;
        }
        let subtree = tax.subtree(concept);
        let below: BTreeSet<String> = subtree
            .iter()
            .filter(|c| categories.contains(**c))
            .map(|c| c.to_string())
            .collect();
        let blocking: BTreeSet<String> = below.intersection(&used).cloned().collect();
        if blocking.is_empty() {
            for c in &below {
                categories.remove(c);
            }
            for c in subtree {
                unmapped.remove(c);
                to_category.insert(c.to_string(), concept.to_string());
            }
            categories.insert(concept.to_string());
            used.insert(concept.to_string());
            report.promoted.insert(concept.to_string());
        } else {
            report.conflicts.insert(concept.to_string(), blocking);
        }
    }

    for code in corpus_codes {
        if unmapped.contains(code) {
            report.unmappable.insert(code.clone());
        }
    }
    if !report.unmappable.is_empty() {
        log::warn!("{} corpus codes have no category", report.unmappable.len());
    }
    Ok((
        CategoryMapping {
            depth,
            categories,
            to_category,
            unmapped,
        },
        report,
    ))
}

/// Result of mapping a document's codes.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct MappedCodes {
    pub categories: BTreeSet<String>,
    pub unmappable: BTreeSet<String>,
}

/// Maps each code to its category; codes without one are listed, not dropped.
pub fn map_codes(codes: &BTreeSet<String>, mapping: &CategoryMapping) -> Result<MappedCodes> {
    let mut out = MappedCodes::default();
    for code in codes {
        match mapping.category(code) {
            Ok(cat) => {
                out.categories.insert(cat.to_string());
            }
            Err(Error::UnmappedConcept(_)) => {
                out.unmappable.insert(code.clone());
            }
            Err(e) => return Err(e),
        }
    }
    Ok(out)
}

/// True when no element of `set` is an ancestor of another.
pub fn is_antichain(tax: &Taxonomy, set: &BTreeSet<String>) -> bool {
    set.iter().all(|c| {
        let mut cur = tax.parent(c);
        while let Some(p) = cur {
            if set.contains(p) {
                return false;
            }
            cur = tax.parent(p);
        }
        true
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::SamplerRng;
    use alloc::vec;

    fn tax(edges: &[(&str, &str)]) -> Taxonomy {
        Taxonomy::from_edges(edges.iter().map(|&(c, p)| {
            (c.to_string(), if p.is_empty() { None } else { Some(p.to_string()) })
        }))
        .unwrap()
    }

    fn set(values: &[&str]) -> BTreeSet<String> {
        values.iter().map(|s| s.to_string()).collect()
    }

    fn fixture() -> Taxonomy {
        tax(&[("r", ""), ("x", "r"), ("y", "r"), ("x1", "x"), ("x2", "x")])
    }

    #[test]
    fn depth_one_cut() {
        let m = flatten(&fixture(), 1).unwrap();
        assert_eq!(m.categories, set(&["x", "y"]));
        for (c, cat) in [("x1", "x"), ("x2", "x"), ("x", "x"), ("y", "y")] {
            assert_eq!(m.category(c).unwrap(), cat);
        }
        assert_eq!(m.category("r"), Err(Error::UnmappedConcept("r".into())));
        assert_eq!(m.category("zz"), Err(Error::UnknownConcept("zz".into())));
    }

    #[test]
    fn chain_interior_is_unmapped() {
        let t = tax(&[("r", ""), ("a", "r"), ("b", "a")]);
        let m = flatten(&t, 2).unwrap();
        assert_eq!(m.categories, set(&["b"]));
        assert_eq!(m.category("a"), Err(Error::UnmappedConcept("a".into())));
    }

    #[test]
    fn cut_below_everything_keeps_leaves() {
        let m = flatten(&fixture(), 9).unwrap();
        assert_eq!(m.categories, set(&["x1", "x2", "y"]));
        assert_eq!(m.unmapped, set(&["r", "x"]));
    }

    #[test]
    fn map_codes_examples() {
        let m = flatten(&fixture(), 1).unwrap();
        assert_eq!(map_codes(&set(&["x1", "x2"]), &m).unwrap().categories, set(&["x"]));
        assert_eq!(map_codes(&set(&[]), &m).unwrap(), MappedCodes::default());
        assert_eq!(map_codes(&set(&["y"]), &m).unwrap().categories, set(&["y"]));
        let mixed = map_codes(&set(&["r", "y"]), &m).unwrap();
        assert_eq!(mixed.unmappable, set(&["r"]));
        assert_eq!(map_codes(&set(&["nope"]), &m), Err(Error::UnknownConcept("nope".into())));
    }

    #[test]
    fn coded_interior_is_promoted_when_free() {
        let t = tax(&[("r", ""), ("a", "r"), ("b", "a"), ("c", "r"), ("d", "c")]);
        let (m, report) = flatten_with_codes(&t, 2, &set(&["a", "c", "d", "r"])).unwrap();
        // a's only descendant b is unused, so a takes its place; c is blocked by d
        assert_eq!(m.categories, set(&["a", "d"]));
        assert_eq!(m.category("b").unwrap(), "a");
        assert_eq!(report.promoted, set(&["a"]));
        assert_eq!(report.conflicts.get("c"), Some(&set(&["d"])));
        assert_eq!(report.unmappable, set(&["c", "r"]));
        assert!(is_antichain(&t, &m.categories));
    }

    #[test]
    fn malformed_taxonomies() {
        let cycle = Taxonomy::from_edges(vec![
            ("r".to_string(), None),
            ("a".to_string(), Some("b".to_string())),
            ("b".to_string(), Some("a".to_string())),
        ]);
        assert!(matches!(cycle, Err(Error::MalformedTaxonomy(_))));
        let orphan = Taxonomy::from_edges(vec![("a".to_string(), Some("zz".to_string()))]);
        assert!(matches!(orphan, Err(Error::MalformedTaxonomy(_))));
        assert!(Taxonomy::parse_tsv("r\t\nx\tr\nx\tr\n").is_err());
        assert!(matches!(
            Taxonomy::parse_tsv("r\t\nx\tr\textra\n"),
            Err(Error::Parse { line: 2, .. })
        ));
        assert!(flatten(&fixture(), 0).is_err());
    }

    #[test]
    fn parse_tsv_roots_and_comments() {
        let t = Taxonomy::parse_tsv("# eurovoc\n100\t\n200\n101\t100\r\n").unwrap();
        assert_eq!(t.roots().collect::<Vec<_>>(), vec!["100", "200"]);
        assert_eq!(t.depth("101"), Some(1));
        assert!(t.is_ancestor("100", "101"));
    }

    #[test]
    fn random_forests_keep_antichain_and_totality() {
        let mut rng = SamplerRng::seed_from_u64(17);
        for round in 0..60 {
            let n = 1 + rng.below(1000);
            let mut edges = Vec::with_capacity(n);
            for i in 0..n {
                let parent = if i == 0 || rng.below(10) == 0 {
                    None
                } else {
                    Some(alloc::format!("c{}", rng.below(i)))
                };
                edges.push((alloc::format!("c{i}"), parent));
            }
            let t = Taxonomy::from_edges(edges).unwrap();
            let codes: BTreeSet<String> = (0..rng.below(50))
                .map(|_| alloc::format!("c{}", rng.below(n + 5)))
                .collect();
            let depth = 1 + round % 5;
            let (m, report) = flatten_with_codes(&t, depth, &codes).unwrap();
            assert!(is_antichain(&t, &m.categories));
            for code in &codes {
                let mapped = m.to_category.contains_key(code);
                let reported = report.unmappable.contains(code) || report.unknown.contains(code);
                assert!(mapped != reported, "code {code}");
            }
            for c in t.concepts() {
                match m.to_category.get(c) {
                    Some(cat) => {
                        assert!(m.categories.contains(cat));
                        assert!(cat == c || t.is_ancestor(cat, c));
                    }
                    None => assert!(m.unmapped.contains(c)),
                }
            }
        }
    }
}
