//! The classification driver.
//!
//! For every quadruple system `Q` in the input catalog, the pipeline builds
//! every extended 1-perfect code whose neighborhood system at the zero word
//! is exactly `Q`: puncture the highest coordinate of `{0} ∪ Q`, complete to
//! 1-perfect codes by exact cover, and re-extend with an even parity bit.
//! Isomorph rejection then accepts exactly one code per equivalence class:
//!
//! - test 1: the code is the minimum of its orbit under the automorphism
//!   group of `Q` (the extension list is closed under that action, so the
//!   orbits are computed by generator closure over the list);
//! - test 2: no codeword translate canonizes strictly below the code
//!   itself, i.e. the canonical equivalence certificate can pick the zero
//!   translation.
//!
//! The accepted extended representatives then drive the derived
//! classifications: puncturing one coordinate per `Aut(C)` coordinate orbit
//! (perfect codes), shortening perfect representatives the same way
//! (shortened codes), and keeping the even-weight half of each perfect
//! representative (half-size distance-4 codes, whose group order halves).

use std::collections::{BTreeMap, HashMap};
use std::io::{self, BufRead, Write};

use rayon::prelude::*;
use thiserror::Error;

use crate::canon::{analyze, analyze_if_canonical, canonical_isomorph, CodeAnalysis};
use crate::code::{Code, CodeError, Parity};
use crate::cover::{complete_to_perfect, CoverError};
use crate::group::UnionFind;
use crate::perm::Perm;
use crate::steiner::{SteinerError, SteinerSystem};
use crate::word::Codeword;

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error("input {index}: {source}")]
    BadInput { index: usize, source: SteinerError },
    #[error("input {index}: expected an S(3,4,{expected}), got order {got}")]
    WrongOrder { index: usize, expected: usize, got: usize },
    #[error("input {index}: completion universe has {got} words, expected {expected}")]
    UniverseSize { index: usize, got: usize, expected: usize },
    #[error("input {index}: a completion added {got} codewords, expected {expected}")]
    SolutionSize { index: usize, got: usize, expected: usize },
    #[error("input {index}: a completion is not self-complementary")]
    NotSelfComplementary { index: usize },
    #[error("input {index}: an extension is not an extended 1-perfect code")]
    BadExtension { index: usize },
    #[error("input {index}: an extension's neighborhood system differs from the input")]
    NeighborhoodMismatch { index: usize },
    #[error("halved code of a perfect representative violates |Aut(C')| = 2|Aut(C)|")]
    HalvedOrderMismatch,
    #[error("two accepted extended codes are equivalent; acceptance is unsound")]
    DuplicateClass,
    #[error("cover error on input {index}: {source}")]
    Cover { index: usize, source: CoverError },
    #[error("line {line}: {msg}")]
    BadRecordFile { line: usize, msg: String },
    #[error(transparent)]
    Code(#[from] CodeError),
    #[error("io error: {0}")]
    Io(#[from] io::Error),
}

#[derive(Clone, Debug)]
pub struct PipelineConfig {
    /// Order of the quadruple systems (16 for the real run, 8 at desk scale).
    pub v: usize,
    /// Fall back to plain global deduplication by canonical equivalence
    /// representative instead of the two-test acceptance. Used for
    /// cross-validation; both modes classify identically.
    pub plain_dedup: bool,
}

impl PipelineConfig {
    pub fn new(v: usize) -> Self {
        PipelineConfig { v, plain_dedup: false }
    }

    fn perfect_size(&self) -> usize {
        (1usize << (self.v - 1)) / self.v
    }
}

/// One accepted extended 1-perfect code class.
#[derive(Clone, Debug)]
pub struct AcceptedExtended {
    pub input_index: usize,
    /// The accepted extension itself: contains 0 and the input system.
    pub code: Code,
    /// Canonical equivalence representative of the class.
    pub canonical: Code,
    pub aut_order: u128,
    pub sym_order: u128,
    pub ker_size: usize,
    /// Coordinate orbits of `Aut(code)`.
    pub coordinate_orbits: Vec<Vec<usize>>,
}

/// Per-input outcome of the augment-and-accept stage.
#[derive(Clone, Debug)]
pub struct InputRecord {
    pub index: usize,
    /// Order of the automorphism group of the input system (permutations).
    pub aut_q_order: u128,
    /// Number of labeled extensions E(Q).
    pub extension_count: u64,
    pub accepted: Vec<AcceptedExtended>,
}

/// A derived classification entry (perfect, shortened or halved family).
#[derive(Clone, Debug)]
pub struct DerivedClass {
    /// Index of the extended class this was derived from.
    pub extended_class: usize,
    pub code: Code,
    pub aut_order: u128,
}

/// Complete output of a classification run.
#[derive(Clone, Debug, Default)]
pub struct RunReport {
    pub v: usize,
    pub records: Vec<InputRecord>,
    pub perfect: Vec<DerivedClass>,
    pub shortened: Vec<DerivedClass>,
    pub halved: Vec<DerivedClass>,
}

impl RunReport {
    pub fn extended_classes(&self) -> Vec<&AcceptedExtended> {
        self.records.iter().flat_map(|r| r.accepted.iter()).collect()
    }

    /// Number of inputs with at least one labeled extension.
    pub fn augmentable_inputs(&self) -> usize {
        self.records.iter().filter(|r| r.extension_count > 0).count()
    }

    pub fn total_extensions(&self) -> u64 {
        self.records.iter().map(|r| r.extension_count).sum()
    }

    pub fn family_tag(&self, family: Family) -> String {
        family_tag(self.v, family)
    }

    /// Representative group orders of one family.
    pub fn aut_orders(&self, family: Family) -> Vec<u128> {
        match family {
            Family::Extended => self.extended_classes().iter().map(|c| c.aut_order).collect(),
            Family::Perfect => self.perfect.iter().map(|c| c.aut_order).collect(),
            Family::Shortened => self.shortened.iter().map(|c| c.aut_order).collect(),
            Family::Halved => self.halved.iter().map(|c| c.aut_order).collect(),
        }
    }

    /// Histogram of automorphism group orders.
    pub fn aut_histogram(&self, family: Family) -> BTreeMap<u128, usize> {
        let mut hist = BTreeMap::new();
        for order in self.aut_orders(family) {
            *hist.entry(order).or_insert(0) += 1;
        }
        hist
    }
}

#[derive(Copy, Clone, PartialEq, Eq, Debug)]
pub enum Family {
    Extended,
    Perfect,
    Shortened,
    Halved,
}

impl Family {
    pub const ALL: [Family; 4] =
        [Family::Extended, Family::Perfect, Family::Shortened, Family::Halved];
}

/// Family tag for classifications of quadruple systems of order `v`, e.g.
/// `extended16`, `perfect15`, `shortened14`, `halved15`.
pub fn family_tag(v: usize, family: Family) -> String {
    match family {
        Family::Extended => format!("extended{v}"),
        Family::Perfect => format!("perfect{}", v - 1),
        Family::Shortened => format!("shortened{}", v - 2),
        Family::Halved => format!("halved{}", v - 1),
    }
}

/// All labeled extended 1-perfect codes containing the zero word whose
/// neighborhood quadruple system at zero equals `q`, in deterministic
/// search order. The list length is E(Q). Every emitted code is verified:
/// parameters, minimum distance 4, self-complementarity of the punctured
/// code, and the neighborhood property itself.
pub fn extensions_of(q: &SteinerSystem, index: usize) -> Result<Vec<Code>, PipelineError> {
    let v = q.v();
    let mut seed_words = vec![0u32];
    seed_words.extend(q.blocks().raw_words());
    let seed = Code::new(v, seed_words);
    let partial = seed.puncture(v - 1);

    // instance arithmetic: the universe and every solution have forced sizes
    let expected_universe = (1usize << (v - 1)) - seed.size() * v;
    let expected_new = (1usize << (v - 1)) / v - seed.size();
    let instance = crate::cover::build_completion_instance(&partial, v - 1)
        .map_err(|source| PipelineError::Cover { index, source })?;
    if instance.universe_size() != expected_universe {
        return Err(PipelineError::UniverseSize {
            index,
            got: instance.universe_size(),
            expected: expected_universe,
        });
    }
    let (completions, _stats) = complete_to_perfect(&partial, v - 1)
        .map_err(|source| PipelineError::Cover { index, source })?;

    let all_ones = Codeword::all_ones(v - 1);
    let mut extensions = Vec::with_capacity(completions.len());
    for completion in completions {
        if completion.size() != partial.size() + expected_new {
            return Err(PipelineError::SolutionSize {
                index,
                got: completion.size() - partial.size(),
                expected: expected_new,
            });
        }
        if !completion.is_perfect() {
            return Err(PipelineError::BadExtension { index });
        }
        if completion.translate(all_ones) != completion {
            return Err(PipelineError::NotSelfComplementary { index });
        }
        let ext = completion.extend_parity(Parity::Even);
        if ext.size() != completion.size() || ext.min_distance() != 4 {
            return Err(PipelineError::BadExtension { index });
        }
        let blocks: Vec<u32> =
            ext.raw_words().iter().copied().filter(|w| w.count_ones() == 4).collect();
        if blocks != q.blocks().raw_words() {
            return Err(PipelineError::NeighborhoodMismatch { index });
        }
        extensions.push(ext);
    }
    debug_assert!(
        extensions.iter().collect::<std::collections::HashSet<_>>().len() == extensions.len(),
        "distinct cover solutions give distinct codes"
    );
    Ok(extensions)
}

/// Orbit partition of the extension list under the permutation action of
/// `Aut(Q)`. The list is closed under that action, so generator closure over
/// list indices yields the exact orbits.
fn aut_q_orbit_partition(exts: &[Code], gens: &[Perm], n: usize) -> UnionFind {
    let mut uf = UnionFind::new(exts.len());
    if exts.is_empty() {
        return uf;
    }
    let index: HashMap<&[u32], usize> =
        exts.iter().enumerate().map(|(i, e)| (e.raw_words(), i)).collect();
    for g in gens {
        let table = (n <= 16).then(|| g.word_table());
        for (i, ext) in exts.iter().enumerate() {
            let mut image: Vec<u32> = match &table {
                Some(t) => ext.raw_words().iter().map(|&w| t.apply(w)).collect(),
                None => ext.raw_words().iter().map(|&w| g.apply_word(w)).collect(),
            };
            image.sort_unstable();
            let j = *index.get(image.as_slice()).expect("extension list is closed under Aut(Q)");
            uf.union(i, j);
        }
    }
    uf
}

/// The two-test acceptance for a single candidate, as a standalone check.
/// `c` must be one of the extensions of `q`.
pub fn accept(c: &Code, q: &SteinerSystem, index: usize) -> Result<bool, PipelineError> {
    let exts = extensions_of(q, index)?;
    let pos = exts
        .iter()
        .position(|e| e == c)
        .unwrap_or_else(|| panic!("accept() requires an extension of the given system"));
    let aut_q = canonical_isomorph(q.blocks());
    let mut orbits = aut_q_orbit_partition(&exts, &aut_q.sym_gens, q.v());
    let root = orbits.find(pos);
    let min_of_orbit = (0..exts.len())
        .filter(|&i| orbits.find(i) == root)
        .min_by(|&a, &b| exts[a].cmp(&exts[b]))
        .expect("orbit contains the candidate");
    if min_of_orbit != pos {
        return Ok(false);
    }
    Ok(analyze_if_canonical(c).is_some())
}

/// Augment one catalog input and run isomorph rejection. In plain-dedup
/// mode every extension is analyzed and returned; global deduplication then
/// happens in [`run`].
pub fn process_input(
    index: usize,
    q: &SteinerSystem,
    cfg: &PipelineConfig,
) -> Result<InputRecord, PipelineError> {
    if q.v() != cfg.v {
        return Err(PipelineError::WrongOrder { index, expected: cfg.v, got: q.v() });
    }
    let exts = extensions_of(q, index)?;
    let extension_count = exts.len() as u64;
    let aut_q = canonical_isomorph(q.blocks());

    let mut accepted = Vec::new();
    if cfg.plain_dedup {
        for ext in &exts {
            let analysis = analyze(ext);
            accepted.push(accepted_from(index, ext.clone(), &analysis));
        }
    } else {
        let mut orbits = aut_q_orbit_partition(&exts, &aut_q.sym_gens, cfg.v);
        let mut minima: HashMap<usize, usize> = HashMap::new();
        for i in 0..exts.len() {
            let root = orbits.find(i);
            match minima.entry(root) {
                std::collections::hash_map::Entry::Vacant(e) => {
                    e.insert(i);
                }
                std::collections::hash_map::Entry::Occupied(mut e) => {
                    if exts[i] < exts[*e.get()] {
                        e.insert(i);
                    }
                }
            }
        }
        let mut winners: Vec<usize> = minima.into_values().collect();
        winners.sort_unstable();
        for i in winners {
            if let Some(analysis) = analyze_if_canonical(&exts[i]) {
                accepted.push(accepted_from(index, exts[i].clone(), &analysis));
            }
        }
    }
    Ok(InputRecord { index, aut_q_order: aut_q.sym_order, extension_count, accepted })
}

fn accepted_from(input_index: usize, code: Code, analysis: &CodeAnalysis) -> AcceptedExtended {
    AcceptedExtended {
        input_index,
        code,
        canonical: analysis.representative.clone(),
        aut_order: analysis.aut_order,
        sym_order: analysis.sym_order(),
        ker_size: analysis.ker_size,
        coordinate_orbits: analysis.coordinate_orbits.clone(),
    }
}

/// Derive the perfect, shortened and halved families from the accepted
/// extended classes, in deterministic order, verifying the structural
/// identities along the way.
pub fn derive_families(
    records: &mut Vec<InputRecord>,
    cfg: &PipelineConfig,
) -> Result<RunReport, PipelineError> {
    // acceptance soundness: representatives pairwise distinct
    {
        let mut seen: HashMap<&[u32], ()> = HashMap::new();
        for rec in records.iter() {
            for acc in &rec.accepted {
                if seen.insert(acc.canonical.raw_words(), ()).is_some() {
                    return Err(PipelineError::DuplicateClass);
                }
            }
        }
    }
    let classes: Vec<(usize, Code, u128, Vec<Vec<usize>>)> = records
        .iter()
        .flat_map(|r| r.accepted.iter())
        .enumerate()
        .map(|(ci, acc)| (ci, acc.code.clone(), acc.aut_order, acc.coordinate_orbits.clone()))
        .collect();

    let derived: Result<Vec<_>, PipelineError> = classes
        .par_iter()
        .map(|(ci, ext, ext_aut, coord_orbits)| derive_one(*ci, ext, *ext_aut, coord_orbits, cfg))
        .collect();
    let derived = derived?;

    let mut report =
        RunReport { v: cfg.v, records: std::mem::take(records), ..RunReport::default() };
    for (perfect, shortened, halved) in derived {
        report.perfect.extend(perfect);
        report.shortened.extend(shortened);
        report.halved.extend(halved);
    }
    Ok(report)
}

type DerivedTriple = (Vec<DerivedClass>, Vec<DerivedClass>, Vec<DerivedClass>);

fn derive_one(
    class_id: usize,
    ext: &Code,
    ext_aut: u128,
    coord_orbits: &[Vec<usize>],
    cfg: &PipelineConfig,
) -> Result<DerivedTriple, PipelineError> {
    let mut perfect = Vec::new();
    let mut shortened = Vec::new();
    let mut halved = Vec::new();
    for orbit in coord_orbits {
        let i = orbit[0];
        let p = ext.puncture(i);
        debug_assert!(p.is_perfect());
        let pa = analyze(&p);
        // labeled counting ties the punctured group order to the coordinate
        // orbit length
        debug_assert_eq!(ext_aut, pa.aut_order * orbit.len() as u128);
        perfect.push(DerivedClass {
            extended_class: class_id,
            code: p.clone(),
            aut_order: pa.aut_order,
        });

        for p_orbit in &pa.coordinate_orbits {
            let s = p.shorten(p_orbit[0], false);
            debug_assert_eq!(s.size() * 2, cfg.perfect_size());
            let sa = analyze(&s);
            shortened.push(DerivedClass {
                extended_class: class_id,
                code: s,
                aut_order: sa.aut_order,
            });
        }

        let half = Code::new(
            p.len_n(),
            p.raw_words().iter().copied().filter(|w| w.count_ones() % 2 == 0).collect(),
        );
        debug_assert_eq!(half.size() * 2, p.size());
        let ha = analyze(&half);
        if ha.aut_order * 2 != pa.aut_order {
            return Err(PipelineError::HalvedOrderMismatch);
        }
        halved.push(DerivedClass { extended_class: class_id, code: half, aut_order: ha.aut_order });
    }
    Ok((perfect, shortened, halved))
}

/// Run the whole pipeline over a catalog. Inputs are processed in parallel
/// (rayon's ambient pool); reports are merged in input order, so the result
/// does not depend on scheduling.
pub fn run(
    catalog: impl Iterator<Item = Result<SteinerSystem, SteinerError>>,
    cfg: &PipelineConfig,
) -> Result<RunReport, PipelineError> {
    let inputs: Result<Vec<SteinerSystem>, PipelineError> = catalog
        .enumerate()
        .map(|(i, r)| r.map_err(|source| PipelineError::BadInput { index: i, source }))
        .collect();
    let inputs = inputs?;
    let mut records: Vec<InputRecord> = inputs
        .par_iter()
        .enumerate()
        .map(|(i, q)| process_input(i, q, cfg))
        .collect::<Result<_, _>>()?;
    if cfg.plain_dedup {
        dedup_plain(&mut records);
    }
    derive_families(&mut records, cfg)
}

/// Keep the first occurrence of every equivalence class, in input order.
/// Only meaningful after plain-mode processing, where every extension is
/// recorded; the two-test acceptance never produces duplicates.
pub fn dedup_plain(records: &mut [InputRecord]) {
    let mut seen: HashMap<Vec<u32>, ()> = HashMap::new();
    for rec in records.iter_mut() {
        rec.accepted.retain(|acc| seen.insert(acc.canonical.raw_words().to_vec(), ()).is_none());
    }
}

// ---------------------------------------------------------------------------
// record files: one self-delimiting section per processed input, so a long
// run can checkpoint and resume

pub fn write_record(mut w: impl Write, rec: &InputRecord) -> io::Result<()> {
    writeln!(w, "record {}", rec.index)?;
    writeln!(w, "autq {}", rec.aut_q_order)?;
    writeln!(w, "eq {}", rec.extension_count)?;
    writeln!(w, "accepted {}", rec.accepted.len())?;
    for acc in &rec.accepted {
        let orbits: Vec<String> = acc
            .coordinate_orbits
            .iter()
            .map(|o| o.iter().map(|i| i.to_string()).collect::<Vec<_>>().join(","))
            .collect();
        writeln!(
            w,
            "extclass aut {} sym {} ker {} orbits {}",
            acc.aut_order,
            acc.sym_order,
            acc.ker_size,
            orbits.join("|")
        )?;
        acc.code.write_text(&mut w)?;
        acc.canonical.write_text(&mut w)?;
    }
    writeln!(w, "endrecord {}", rec.index)?;
    Ok(())
}

/// Read back record sections. A truncated trailing section (interrupted
/// run) is discarded silently; everything before it must be well-formed.
pub fn read_records(r: impl BufRead) -> Result<Vec<InputRecord>, PipelineError> {
    let mut lines = crate::code::content_lines(r).peekable();
    let mut out = Vec::new();
    loop {
        match try_read_record(&mut lines) {
            Ok(Some(rec)) => out.push(rec),
            Ok(None) => break,
            Err(Truncated) => break,
        }
    }
    Ok(out)
}

struct Truncated;

type ContentLines<R> = std::iter::Peekable<R>;

fn next_line<I>(lines: &mut I) -> Result<String, Truncated>
where
    I: Iterator<Item = Result<(usize, String), io::Error>>,
{
    match lines.next() {
        Some(Ok((_, text))) => Ok(text),
        _ => Err(Truncated),
    }
}

fn try_read_record<I>(lines: &mut ContentLines<I>) -> Result<Option<InputRecord>, Truncated>
where
    I: Iterator<Item = Result<(usize, String), io::Error>>,
{
    let header = match lines.next() {
        None => return Ok(None),
        Some(Err(_)) => return Err(Truncated),
        Some(Ok((_, text))) => text,
    };
    let index: usize = parse_tail(&header, "record ").ok_or(Truncated)?;
    let aut_q_order: u128 = parse_tail(&next_line(lines)?, "autq ").ok_or(Truncated)?;
    let extension_count: u64 = parse_tail(&next_line(lines)?, "eq ").ok_or(Truncated)?;
    let count: usize = parse_tail(&next_line(lines)?, "accepted ").ok_or(Truncated)?;
    let mut accepted = Vec::with_capacity(count);
    for _ in 0..count {
        let meta = next_line(lines)?;
        let rest = meta.strip_prefix("extclass aut ").ok_or(Truncated)?;
        let mut tokens = rest.split_whitespace();
        let aut_order: u128 = tokens.next().and_then(|t| t.parse().ok()).ok_or(Truncated)?;
        if tokens.next() != Some("sym") {
            return Err(Truncated);
        }
        let sym_order: u128 = tokens.next().and_then(|t| t.parse().ok()).ok_or(Truncated)?;
        if tokens.next() != Some("ker") {
            return Err(Truncated);
        }
        let ker_size: usize = tokens.next().and_then(|t| t.parse().ok()).ok_or(Truncated)?;
        if tokens.next() != Some("orbits") {
            return Err(Truncated);
        }
        let orbit_text = tokens.next().ok_or(Truncated)?;
        let coordinate_orbits: Option<Vec<Vec<usize>>> =
            orbit_text.split('|').map(|o| o.split(',').map(|t| t.parse().ok()).collect()).collect();
        let coordinate_orbits = coordinate_orbits.ok_or(Truncated)?;
        let code = read_code_block(&mut *lines).ok_or(Truncated)?;
        let canonical = read_code_block(&mut *lines).ok_or(Truncated)?;
        accepted.push(AcceptedExtended {
            input_index: index,
            code,
            canonical,
            aut_order,
            sym_order,
            ker_size,
            coordinate_orbits,
        });
    }
    let tail = next_line(lines)?;
    if parse_tail::<usize>(&tail, "endrecord ") != Some(index) {
        return Err(Truncated);
    }
    Ok(Some(InputRecord { index, aut_q_order, extension_count, accepted }))
}

fn parse_tail<T: std::str::FromStr>(line: &str, prefix: &str) -> Option<T> {
    line.strip_prefix(prefix)?.trim().parse().ok()
}

/// Read an inline `n M` + words block from pre-filtered content lines.
fn read_code_block<I>(lines: &mut I) -> Option<Code>
where
    I: Iterator<Item = Result<(usize, String), io::Error>>,
{
    let (_, header) = lines.next()?.ok()?;
    let mut parts = header.split_whitespace();
    let n: usize = parts.next()?.parse().ok()?;
    let m: usize = parts.next()?.parse().ok()?;
    let mut words = Vec::with_capacity(m);
    for _ in 0..m {
        let (_, text) = lines.next()?.ok()?;
        let word: Codeword = text.parse().ok()?;
        if word.len() != n {
            return None;
        }
        words.push(word.bits());
    }
    if words.windows(2).any(|w| w[0] >= w[1]) {
        return None;
    }
    Some(Code::new(n, words))
}

// ---------------------------------------------------------------------------
// family files: one file per classified family, metadata lines around text
// code blocks

/// A classified family ready for writing: representative codes with group
/// orders and their provenance.
pub struct FamilyData {
    pub tag: String,
    pub v: usize,
    /// `(source extended class, input index, code, aut order)`
    pub classes: Vec<(usize, usize, Code, u128)>,
}

impl RunReport {
    pub fn family_data(&self, family: Family) -> FamilyData {
        let classes = match family {
            Family::Extended => self
                .extended_classes()
                .iter()
                .enumerate()
                .map(|(ci, acc)| (ci, acc.input_index, acc.code.clone(), acc.aut_order))
                .collect(),
            _ => {
                let ext = self.extended_classes();
                let list = match family {
                    Family::Perfect => &self.perfect,
                    Family::Shortened => &self.shortened,
                    Family::Halved => &self.halved,
                    Family::Extended => unreachable!(),
                };
                list.iter()
                    .map(|d| {
                        (
                            d.extended_class,
                            ext[d.extended_class].input_index,
                            d.code.clone(),
                            d.aut_order,
                        )
                    })
                    .collect()
            }
        };
        FamilyData { tag: self.family_tag(family), v: self.v, classes }
    }
}

pub fn write_family_file(mut w: impl Write, data: &FamilyData) -> io::Result<()> {
    writeln!(w, "family {} v {} classes {}", data.tag, data.v, data.classes.len())?;
    for (k, (src, input, code, aut)) in data.classes.iter().enumerate() {
        writeln!(w, "class {k} from {src} input {input} aut {aut}")?;
        code.write_text(&mut w)?;
    }
    Ok(())
}

pub fn read_family_file(r: impl BufRead) -> Result<FamilyData, PipelineError> {
    let mut lines = crate::code::content_lines(r);
    let bad = |line: usize, msg: &str| PipelineError::BadRecordFile { line, msg: msg.into() };
    let (line_no, header) = lines.next().transpose()?.ok_or_else(|| bad(0, "empty family file"))?;
    let mut tokens = header.split_whitespace();
    if tokens.next() != Some("family") {
        return Err(bad(line_no, "expected `family` header"));
    }
    let tag = tokens.next().ok_or_else(|| bad(line_no, "missing family tag"))?.to_string();
    if tokens.next() != Some("v") {
        return Err(bad(line_no, "expected `v`"));
    }
    let v: usize =
        tokens.next().and_then(|t| t.parse().ok()).ok_or_else(|| bad(line_no, "bad v"))?;
    if tokens.next() != Some("classes") {
        return Err(bad(line_no, "expected `classes`"));
    }
    let count: usize = tokens
        .next()
        .and_then(|t| t.parse().ok())
        .ok_or_else(|| bad(line_no, "bad class count"))?;
    let mut classes = Vec::with_capacity(count);
    for _ in 0..count {
        let (line_no, meta) =
            lines.next().transpose()?.ok_or_else(|| bad(0, "missing class header"))?;
        let mut tokens = meta.split_whitespace();
        let mut field = |name: &str| -> Result<u128, PipelineError> {
            loop {
                match tokens.next() {
                    Some(t) if t == name => {
                        return tokens.next().and_then(|t| t.parse().ok()).ok_or(
                            PipelineError::BadRecordFile {
                                line: line_no,
                                msg: format!("bad {name}"),
                            },
                        );
                    }
                    Some(_) => continue,
                    None => {
                        return Err(PipelineError::BadRecordFile {
                            line: line_no,
                            msg: format!("missing {name}"),
                        })
                    }
                }
            }
        };
        let src = field("from")? as usize;
        let input = field("input")? as usize;
        let aut = field("aut")?;
        let code = read_code_block(&mut lines).ok_or_else(|| bad(line_no, "bad code block"))?;
        classes.push((src, input, code, aut));
    }
    Ok(FamilyData { tag, v, classes })
}
