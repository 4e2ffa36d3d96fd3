//! Balanced analogy dataset generation from `(subject, relation, object)`
//! triples, concept term lists and corpus term frequencies.
//!
//! Pipeline: keep concepts with at least one frequent term, count 1:1
//! instances per relation to pick relations (intersected with an optional
//! allowlist), sample subjects per relation and bundle all of each subject's
//! objects, combine bundles exhaustively, then render concepts as their most
//! frequent term.
//!
//! Randomness comes from ChaCha8 (`rand_chacha`), seeded with the configured
//! seed and switched to a per-relation stream whose id is the 64-bit FNV-1a
//! hash of `"<purpose>\0<relation id>"`. Relations can therefore be processed
//! in any order or concurrently without changing the output.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fs;
use std::hash::Hash;
use std::io::{self, Write};
use std::path::Path;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dataset::{combine_pairs, AnalogyRecord};
use crate::error::{Error, Result};

pub const RNG_DESCRIPTION: &str =
    "ChaCha8 (rand_chacha 0.3), seed_from_u64(seed), stream = FNV-1a-64(purpose \\0 relation)";

/// Number of 1:1 pairs listed per relation in the review report.
pub const REVIEW_SAMPLE: usize = 5;

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Triple {
    pub subject: String,
    pub relation: String,
    pub object: String,
}

/// Concept id to its ordered term list.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ConceptLexicon {
    terms: HashMap<String, Vec<String>>,
}

impl ConceptLexicon {
    pub fn insert(&mut self, concept: impl Into<String>, term: impl Into<String>) {
        let terms = self.terms.entry(concept.into()).or_default();
        let term = term.into();
        if !terms.contains(&term) {
            terms.push(term);
        }
    }

    pub fn terms(&self, concept: &str) -> Option<&[String]> {
        self.terms.get(concept).map(Vec::as_slice)
    }

    pub fn contains(&self, concept: &str) -> bool {
        self.terms.contains_key(concept)
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }
}

impl<C: Into<String>, T: Into<String>> FromIterator<(C, T)> for ConceptLexicon {
    fn from_iter<I: IntoIterator<Item = (C, T)>>(iter: I) -> Self {
        let mut lex = ConceptLexicon::default();
        for (c, t) in iter {
            lex.insert(c, t);
        }
        lex
    }
}

/// Corpus counts keyed by exact term string. Unknown terms count 0.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct FrequencyTable(pub HashMap<String, u64>);

impl FrequencyTable {
    pub fn count(&self, term: &str) -> u64 {
        self.0.get(term).copied().unwrap_or(0)
    }
}

impl<T: Into<String>> FromIterator<(T, u64)> for FrequencyTable {
    fn from_iter<I: IntoIterator<Item = (T, u64)>>(iter: I) -> Self {
        FrequencyTable(iter.into_iter().map(|(t, c)| (t.into(), c)).collect())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GenerationConfig {
    pub min_term_freq: u64,
    pub min_one_to_one: usize,
    pub pairs_per_relation: usize,
    pub seed: u64,
    /// Relation ids approved after review; `None` keeps every relation that
    /// passes the 1:1 threshold.
    pub allowlist: Option<Vec<String>>,
}

impl Default for GenerationConfig {
    fn default() -> Self {
        GenerationConfig {
            min_term_freq: 25,
            min_one_to_one: 50,
            pairs_per_relation: 50,
            seed: 0,
            allowlist: None,
        }
    }
}

impl GenerationConfig {
    pub fn validate(&self) -> Result<()> {
        if self.min_term_freq == 0 || self.min_one_to_one == 0 {
            return Err(Error::Config("frequency and 1:1 thresholds must be positive".into()));
        }
        if self.pairs_per_relation < 2 {
            return Err(Error::Config("pairs per relation must be at least 2".into()));
        }
        Ok(())
    }
}

/// Keeps concepts with at least one term counted `min_freq` times or more,
/// each with only its frequent terms (in original order).
pub fn frequent_concepts(lexicon: &ConceptLexicon, freqs: &FrequencyTable, min_freq: u64) -> ConceptLexicon {
    let terms = lexicon
        .terms
        .iter()
        .filter_map(|(concept, terms)| {
            let kept: Vec<String> = terms.iter().filter(|t| freqs.count(t) >= min_freq).cloned().collect();
            (!kept.is_empty()).then(|| (concept.clone(), kept))
        })
        .collect();
    ConceptLexicon { terms }
}

/// Pairs whose subject and object each occur in exactly one pair.
pub fn one_to_one_instances<S: AsRef<str> + Clone>(pairs: &[(S, S)]) -> Vec<(S, S)> {
    let mut subj: HashMap<&str, usize> = HashMap::new();
    let mut obj: HashMap<&str, usize> = HashMap::new();
    for (s, o) in pairs {
        *subj.entry(s.as_ref()).or_default() += 1;
        *obj.entry(o.as_ref()).or_default() += 1;
    }
    pairs
        .iter()
        .filter(|(s, o)| subj[s.as_ref()] == 1 && obj[o.as_ref()] == 1)
        .cloned()
        .collect()
}

/// Deduplicated `(subject, object)` pairs per relation where both concepts
/// survive the frequency filter, in first-occurrence order.
pub fn relation_pairs(triples: &[Triple], frequent: &ConceptLexicon) -> BTreeMap<String, Vec<(String, String)>> {
    let mut out: BTreeMap<String, Vec<(String, String)>> = BTreeMap::new();
    let mut seen = HashSet::new();
    for t in triples {
        if !frequent.contains(&t.subject) || !frequent.contains(&t.object) {
            continue;
        }
        if seen.insert((&t.relation, &t.subject, &t.object)) {
            out.entry(t.relation.clone())
                .or_default()
                .push((t.subject.clone(), t.object.clone()));
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReviewEntry {
    pub relation: String,
    pub n_pairs: usize,
    pub n_one_to_one: usize,
    pub passes_threshold: bool,
    pub allowlisted: bool,
    pub selected: bool,
    pub sample: Vec<(String, String)>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RelationSelection {
    pub selected: Vec<String>,
    pub review: Vec<ReviewEntry>,
}

/// Relations with at least `min_one_to_one` 1:1 instances, intersected with
/// the allowlist. Every relation gets a review entry with a few sampled 1:1
/// pairs to support building the allowlist.
pub fn select_relations(
    pairs: &BTreeMap<String, Vec<(String, String)>>,
    config: &GenerationConfig,
) -> RelationSelection {
    let allow: Option<HashSet<&str>> = config
        .allowlist
        .as_ref()
        .map(|a| a.iter().map(String::as_str).collect());
    let review: Vec<ReviewEntry> = pairs
        .iter()
        .map(|(relation, pairs)| {
            let one_to_one = one_to_one_instances(pairs);
            let passes_threshold = one_to_one.len() >= config.min_one_to_one;
            let allowlisted = allow.as_ref().is_none_or(|a| a.contains(relation.as_str()));
            let mut rng = relation_rng(config.seed, "review", relation);
            let sample = one_to_one.choose_multiple(&mut rng, REVIEW_SAMPLE).cloned().collect();
            ReviewEntry {
                relation: relation.clone(),
                n_pairs: pairs.len(),
                n_one_to_one: one_to_one.len(),
                passes_threshold,
                allowlisted,
                selected: passes_threshold && allowlisted,
                sample,
            }
        })
        .collect();
    let selected = review
        .iter()
        .filter(|r| r.selected)
        .map(|r| r.relation.clone())
        .collect();
    RelationSelection { selected, review }
}

fn fnv1a64(bytes: impl IntoIterator<Item = u8>) -> u64 {
    bytes.into_iter().fold(0xcbf2_9ce4_8422_2325, |h, b| {
        (h ^ u64::from(b)).wrapping_mul(0x0000_0100_0000_01b3)
    })
}

fn relation_rng(seed: u64, purpose: &str, relation: &str) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let stream = purpose.bytes().chain(std::iter::once(0)).chain(relation.bytes());
    rng.set_stream(fnv1a64(stream));
    rng
}

/// Samples pairs uniformly without replacement until `n` distinct subjects
/// are drawn and bundles every object of each drawn subject.
pub fn sample_and_bundle(
    relation: &str,
    pairs: &[(String, String)],
    n: usize,
    seed: u64,
) -> Result<Vec<(String, Vec<String>)>> {
    sample_and_bundle_by(relation, pairs, n, seed, |s| s.to_owned())
}

/// Like [`sample_and_bundle`], but subjects with equal `key` count as the
/// same subject; only the first one drawn is kept.
pub fn sample_and_bundle_by<K, F>(
    relation: &str,
    pairs: &[(String, String)],
    n: usize,
    seed: u64,
    key: F,
) -> Result<Vec<(String, Vec<String>)>>
where
    K: Eq + Hash,
    F: Fn(&str) -> K,
{
    let mut objects: HashMap<&str, Vec<String>> = HashMap::new();
    for (s, o) in pairs {
        let list = objects.entry(s.as_str()).or_default();
        if !list.contains(o) {
            list.push(o.clone());
        }
    }

    let mut order: Vec<&(String, String)> = pairs.iter().collect();
    let mut rng = relation_rng(seed, "sample", relation);
    order.shuffle(&mut rng);

    let mut keys = HashSet::new();
    let mut bundles = Vec::with_capacity(n);
    for (subject, _) in order {
        if bundles.len() == n {
            break;
        }
        if keys.insert(key(subject)) {
            bundles.push((subject.clone(), objects[subject.as_str()].clone()));
        }
    }
    if bundles.len() < n {
        return Err(Error::NotEnoughSubjects {
            relation: relation.to_owned(),
            found: bundles.len(),
            required: n,
        });
    }
    Ok(bundles)
}

/// The concept's most frequent surviving term; ties go to the
/// lexicographically smallest.
pub fn choose_representative_term(concept: &str, frequent: &ConceptLexicon, freqs: &FrequencyTable) -> Option<String> {
    frequent
        .terms(concept)?
        .iter()
        .max_by(|x, y| freqs.count(x).cmp(&freqs.count(y)).then_with(|| y.cmp(x)))
        .cloned()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RelationStats {
    pub relation: String,
    pub n_pairs: usize,
    pub n_one_to_one: usize,
    pub n_bundles: usize,
    pub n_analogies: usize,
    pub ambiguity: f64,
    pub n_multi_answer: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GeneratedDataset {
    /// Analogies over concept ids, in relation-id order.
    pub id_records: Vec<AnalogyRecord>,
    /// The same analogies rendered with representative terms.
    pub term_records: Vec<AnalogyRecord>,
    pub stats: Vec<RelationStats>,
    pub review: Vec<ReviewEntry>,
}

impl GeneratedDataset {
    pub fn total_analogies(&self) -> usize {
        self.id_records.len()
    }
}

pub fn generate(
    triples: &[Triple],
    lexicon: &ConceptLexicon,
    freqs: &FrequencyTable,
    config: &GenerationConfig,
) -> Result<GeneratedDataset> {
    config.validate()?;
    let frequent = frequent_concepts(lexicon, freqs, config.min_term_freq);
    let pairs = relation_pairs(triples, &frequent);
    let selection = select_relations(&pairs, config);
    if selection.selected.is_empty() {
        return Err(Error::NoRelations);
    }

    let representative: HashMap<&str, String> = pairs
        .values()
        .flatten()
        .flat_map(|(s, o)| [s.as_str(), o.as_str()])
        .filter_map(|c| Some((c, choose_representative_term(c, &frequent, freqs)?)))
        .collect();
    let render = |c: &str| representative[c].clone();

    let per_relation: Vec<(Vec<AnalogyRecord>, RelationStats)> = selection
        .selected
        .par_iter()
        .map(|relation| {
            let rel_pairs = &pairs[relation];
            // Subjects sharing a representative term would render as a == c.
            let bundles = sample_and_bundle_by(relation, rel_pairs, config.pairs_per_relation, config.seed, render)?;
            let records = combine_pairs(relation, &bundles)?;
            let stats = RelationStats {
                relation: relation.clone(),
                n_pairs: rel_pairs.len(),
                n_one_to_one: one_to_one_instances(rel_pairs).len(),
                n_bundles: bundles.len(),
                n_analogies: records.len(),
                ambiguity: crate::dataset::ambiguity(&records).unwrap_or(0.0),
                n_multi_answer: records.iter().filter(|r| r.d_list.len() > 1).count(),
            };
            Ok((records, stats))
        })
        .collect::<Result<_>>()?;

    let mut out = GeneratedDataset {
        id_records: Vec::new(),
        term_records: Vec::new(),
        stats: Vec::new(),
        review: selection.review,
    };
    let render_list = |list: &[String]| -> Vec<String> {
        let mut seen = HashSet::new();
        list.iter()
            .map(|c| render(c))
            .filter(|t| seen.insert(t.clone()))
            .collect()
    };
    for (records, stats) in per_relation {
        for r in &records {
            out.term_records.push(AnalogyRecord {
                relation: r.relation.clone(),
                a: render(&r.a),
                b_list: render_list(&r.b_list),
                c: render(&r.c),
                d_list: render_list(&r.d_list),
            });
        }
        out.id_records.extend(records);
        out.stats.push(stats);
    }
    Ok(out)
}

fn read_tsv(path: &Path, fields: usize) -> Result<Vec<(usize, Vec<String>)>> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let origin = path.display().to_string();
    let mut rows = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.strip_suffix('\r').unwrap_or(line);
        if line.trim().is_empty() || line.starts_with('#') {
            continue;
        }
        let parts: Vec<String> = line.split('\t').map(|f| f.trim().to_owned()).collect();
        if parts.len() != fields || parts.iter().any(String::is_empty) {
            return Err(Error::parse(
                &origin,
                i + 1,
                format!("expected {fields} non-empty tab-separated fields"),
            ));
        }
        rows.push((i + 1, parts));
    }
    Ok(rows)
}

/// Reads `subject<TAB>relation<TAB>object` lines.
pub fn read_triples(path: impl AsRef<Path>) -> Result<Vec<Triple>> {
    Ok(read_tsv(path.as_ref(), 3)?
        .into_iter()
        .map(|(_, mut f)| Triple {
            object: f.pop().unwrap(),
            relation: f.pop().unwrap(),
            subject: f.pop().unwrap(),
        })
        .collect())
}

/// Reads `concept<TAB>term` lines; a concept's terms keep file order.
pub fn read_lexicon(path: impl AsRef<Path>) -> Result<ConceptLexicon> {
    Ok(read_tsv(path.as_ref(), 2)?
        .into_iter()
        .map(|(_, mut f)| {
            let term = f.pop().unwrap();
            (f.pop().unwrap(), term)
        })
        .collect())
}

/// Reads `term<TAB>count` lines.
pub fn read_frequencies(path: impl AsRef<Path>) -> Result<FrequencyTable> {
    let path = path.as_ref();
    let origin = path.display().to_string();
    let mut table = HashMap::new();
    for (line, f) in read_tsv(path, 2)? {
        let count: u64 = f[1]
            .parse()
            .map_err(|_| Error::parse(&origin, line, format!("invalid count {:?}", f[1])))?;
        table.insert(f[0].clone(), count);
    }
    Ok(FrequencyTable(table))
}

/// Reads one relation id per line.
pub fn read_allowlist(path: impl AsRef<Path>) -> Result<Vec<String>> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    Ok(text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(str::to_owned)
        .collect())
}

pub fn write_stats<W: Write>(mut w: W, generated: &GeneratedDataset, config: &GenerationConfig) -> io::Result<()> {
    writeln!(w, "# rng: {RNG_DESCRIPTION}")?;
    writeln!(
        w,
        "# seed: {} min_term_freq: {} min_one_to_one: {} pairs_per_relation: {}",
        config.seed, config.min_term_freq, config.min_one_to_one, config.pairs_per_relation
    )?;
    writeln!(
        w,
        "relation\tpairs\tone_to_one\tbundles\tanalogies\tambiguity\tmulti_answer"
    )?;
    for s in &generated.stats {
        writeln!(
            w,
            "{}\t{}\t{}\t{}\t{}\t{:.4}\t{}",
            s.relation, s.n_pairs, s.n_one_to_one, s.n_bundles, s.n_analogies, s.ambiguity, s.n_multi_answer
        )?;
    }
    let total = |f: fn(&RelationStats) -> usize| generated.stats.iter().map(f).sum::<usize>();
    let ambiguity = crate::dataset::ambiguity(&generated.id_records).unwrap_or(0.0);
    writeln!(
        w,
        "TOTAL\t{}\t{}\t{}\t{}\t{:.4}\t{}",
        total(|s| s.n_pairs),
        total(|s| s.n_one_to_one),
        total(|s| s.n_bundles),
        total(|s| s.n_analogies),
        ambiguity,
        total(|s| s.n_multi_answer)
    )
}

pub fn write_review<W: Write>(mut w: W, review: &[ReviewEntry]) -> io::Result<()> {
    writeln!(
        w,
        "relation\tpairs\tone_to_one\tpasses_threshold\tallowlisted\tselected\tsample"
    )?;
    for r in review {
        let sample: Vec<String> = r.sample.iter().map(|(s, o)| format!("{s} -> {o}")).collect();
        writeln!(
            w,
            "{}\t{}\t{}\t{}\t{}\t{}\t{}",
            r.relation,
            r.n_pairs,
            r.n_one_to_one,
            r.passes_threshold,
            r.allowlisted,
            r.selected,
            sample.join(" | ")
        )?;
    }
    Ok(())
}
