//! Order enumeration: F-class-1 groups of order `o` plus the descendants of order `o` of all
//! non-nilpotent groups of proper divisor order, with an on-disk catalog.

use std::collections::BTreeMap;
use std::path::Path;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::descend::{descendants, prune_2a3, DescendOptions};
use crate::fclass1::{solvable_groups_fclass1_all_ranks, ConstructedGroup, Provenance};
use crate::pcgroup::fingerprint::{fingerprint, Fingerprint};
use crate::pcgroup::series::is_nilpotent;
use crate::pcgroup::text::{format_presentation, parse_presentation};
use crate::pcgroup::{brute_force_isomorphic, divisors, factorize, PcElement, PcPresentation};
use crate::{Budget, Error, Result};

/// Catalog files written by a different engine version are ignored.
pub const ENGINE_VERSION: &str = concat!("solvgroups-", env!("CARGO_PKG_VERSION"), "-catalog-1");

/// Largest order for which `identify` refines fingerprint matches by brute force.
pub const ORACLE_CAP: u64 = 200;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum EntryProvenance {
    FClass1 { rank: u64, class_index: usize },
    Descendant { parent: (u64, usize), stepsize: u64, orbit_index: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CatalogEntry {
    pub id: (u64, usize),
    pub presentation: String,
    pub f_class: usize,
    pub f_rank: u64,
    pub provenance: EntryProvenance,
    /// Images of the pc generators under each automorphism generator, as exponent vectors.
    pub aut_gens: Vec<Vec<PcElement>>,
    pub fingerprint: Fingerprint,
}

impl CatalogEntry {
    pub fn new(id: (u64, usize), g: &ConstructedGroup) -> Self {
        let provenance = match &g.provenance {
            Provenance::FClass1 { rank, class_index, .. } => EntryProvenance::FClass1 { rank: *rank, class_index: *class_index },
            Provenance::Descendant { parent, stepsize, orbit_index } => EntryProvenance::Descendant {
                parent: parent.unwrap_or((0, 0)),
                stepsize: *stepsize,
                orbit_index: *orbit_index,
            },
        };
        CatalogEntry {
            id,
            presentation: format_presentation(&g.pres),
            f_class: g.f_class,
            f_rank: g.f_rank,
            provenance,
            aut_gens: g.aut_gens.clone(),
            fingerprint: fingerprint(&g.pres),
        }
    }

    pub fn group(&self) -> Result<ConstructedGroup> {
        let provenance = match &self.provenance {
            EntryProvenance::FClass1 { rank, class_index } => {
                Provenance::FClass1 { rank: *rank, class_index: *class_index, h2_rep: Vec::new() }
            }
            EntryProvenance::Descendant { parent, stepsize, orbit_index } => {
                Provenance::Descendant { parent: Some(*parent), stepsize: *stepsize, orbit_index: *orbit_index }
            }
        };
        Ok(ConstructedGroup {
            pres: parse_presentation(&self.presentation)?,
            f_class: self.f_class,
            f_rank: self.f_rank,
            aut_gens: self.aut_gens.clone(),
            provenance,
        })
    }

    /// Re-parses the presentation and re-checks the stored data.
    pub fn verify(&self) -> Result<()> {
        let g = self.group()?;
        if format_presentation(&g.pres) != self.presentation {
            return Err(Error::Inconsistent("presentation does not round-trip".into()));
        }
        g.verify()?;
        if fingerprint(&g.pres) != self.fingerprint {
            return Err(Error::Inconsistent("stored fingerprint differs".into()));
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct OrderFile {
    engine: String,
    order: u64,
    entries: Vec<CatalogEntry>,
}

/// Summary of one `enumerate_order` run.
#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct Summary {
    pub order: u64,
    pub non_nilpotent: usize,
    /// Keyed by `"f_class,f_rank"`.
    pub counts: BTreeMap<String, usize>,
    pub wall_time_ms: u128,
    pub budgets_hit: Vec<String>,
}

/// The non-nilpotent solvable groups of each order computed so far.
pub struct Catalog {
    budget: Budget,
    threads: usize,
    groups: BTreeMap<u64, Vec<ConstructedGroup>>,
    cache_dir: Option<std::path::PathBuf>,
}

impl Catalog {
    pub fn new(budget: Budget) -> Self {
        Catalog { budget, threads: 1, groups: BTreeMap::new(), cache_dir: None }
    }

    pub fn with_threads(mut self, threads: usize) -> Self {
        self.threads = threads.max(1);
        self
    }

    /// Reads and writes per-order files in `dir`.
    pub fn with_cache(mut self, dir: &Path) -> Self {
        self.cache_dir = Some(dir.to_path_buf());
        self
    }

    /// The non-nilpotent solvable groups of order `o`, constructing the groups of every
    /// proper divisor order first.
    pub fn non_nilpotent(&mut self, o: u64) -> Result<&[ConstructedGroup]> {
        if !self.groups.contains_key(&o) {
            let gs = match self.load(o)? {
                Some(gs) => gs,
                None => {
                    let gs = self.construct(o)?;
                    self.store(o, &gs)?;
                    gs
                }
            };
            self.groups.insert(o, gs);
        }
        Ok(&self.groups[&o])
    }

    pub fn entries(&mut self, o: u64) -> Result<Vec<CatalogEntry>> {
        Ok(self.non_nilpotent(o)?.iter().enumerate().map(|(i, g)| CatalogEntry::new((o, i), g)).collect())
    }

    pub fn summary(&mut self, o: u64) -> Result<Summary> {
        let start = Instant::now();
        let gs = self.non_nilpotent(o)?;
        let mut counts = BTreeMap::new();
        for g in gs {
            *counts.entry(format!("{},{}", g.f_class, g.f_rank)).or_insert(0) += 1;
        }
        Ok(Summary { order: o, non_nilpotent: gs.len(), counts, wall_time_ms: start.elapsed().as_millis(), budgets_hit: Vec::new() })
    }

    fn construct(&mut self, o: u64) -> Result<Vec<ConstructedGroup>> {
        let mut out: Vec<ConstructedGroup> = solvable_groups_fclass1_all_ranks(o, &self.budget)?
            .into_iter()
            .filter(|g| !is_nilpotent(&g.pres))
            .collect();
        let proper: Vec<u64> = divisors(o).into_iter().filter(|&d| d > 1 && d < o).collect();
        let mut jobs: Vec<(u64, usize)> = Vec::new();
        for &d in &proper {
            let prune = pruned_shape(o, d);
            let ancestors = self.non_nilpotent(d)?;
            for (i, a) in ancestors.iter().enumerate() {
                if prune && !prune_2a3(&a.pres)? {
                    continue;
                }
                jobs.push((d, i));
            }
        }
        let opts = DescendOptions { automorphisms: true, delta: false, budget: self.budget };
        let run = |&(d, i): &(u64, usize)| -> Result<Vec<ConstructedGroup>> {
            let a = &self.groups[&d][i];
            let mut ds = descendants(a, Some(&[o / d]), &opts)?.groups;
            for h in &mut ds {
                if let Provenance::Descendant { parent, .. } = &mut h.provenance {
                    *parent = Some((d, i));
                }
            }
            Ok(ds)
        };
        let results: Vec<Result<Vec<ConstructedGroup>>> = if self.threads > 1 {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(self.threads)
                .build()
                .map_err(|e| Error::Invalid(e.to_string()))?;
            use rayon::prelude::*;
            pool.install(|| jobs.par_iter().map(run).collect())
        } else {
            jobs.iter().map(run).collect()
        };
        for r in results {
            out.extend(r?);
        }
        Ok(out)
    }

    fn load(&self, o: u64) -> Result<Option<Vec<ConstructedGroup>>> {
        let Some(dir) = &self.cache_dir else { return Ok(None) };
        let path = dir.join(format!("order_{o}.json"));
        let Ok(text) = std::fs::read_to_string(&path) else { return Ok(None) };
        let Ok(file) = serde_json::from_str::<OrderFile>(&text) else { return Ok(None) };
        if file.engine != ENGINE_VERSION || file.order != o {
            return Ok(None);
        }
        file.entries.iter().map(|e| e.group()).collect::<Result<Vec<_>>>().map(Some)
    }

    fn store(&self, o: u64, gs: &[ConstructedGroup]) -> Result<()> {
        let Some(dir) = &self.cache_dir else { return Ok(()) };
        let entries = gs.iter().enumerate().map(|(i, g)| CatalogEntry::new((o, i), g)).collect();
        write_order_file(dir, o, entries)
    }
}

/// Writes `order_<o>.json` in `dir`.
pub fn write_order_file(dir: &Path, o: u64, entries: Vec<CatalogEntry>) -> Result<()> {
    let file = OrderFile { engine: ENGINE_VERSION.to_string(), order: o, entries };
    std::fs::create_dir_all(dir).map_err(|e| Error::Invalid(e.to_string()))?;
    let text = serde_json::to_string_pretty(&file).map_err(|e| Error::Invalid(e.to_string()))?;
    std::fs::write(dir.join(format!("order_{o}.json")), text + "\n").map_err(|e| Error::Invalid(e.to_string()))
}

/// Every entry stored in the catalog directory.
pub fn read_catalog_dir(dir: &Path) -> Result<Vec<CatalogEntry>> {
    let mut out = Vec::new();
    let rd = std::fs::read_dir(dir).map_err(|e| Error::Invalid(format!("{}: {e}", dir.display())))?;
    let mut paths: Vec<_> = rd.filter_map(|e| e.ok()).map(|e| e.path()).collect();
    paths.sort();
    for p in paths {
        if p.extension().is_some_and(|x| x == "json") {
            let text = std::fs::read_to_string(&p).map_err(|e| Error::Invalid(e.to_string()))?;
            if let Ok(file) = serde_json::from_str::<OrderFile>(&text) {
                out.extend(file.entries);
            }
        }
    }
    Ok(out)
}

/// A group given only by its presentation, with automorphism generators found by exhaustive
/// search (orders up to [`crate::pcgroup::iso::AUT_CAP`]).
pub fn constructed_from_presentation(pres: PcPresentation) -> Result<ConstructedGroup> {
    let fs = crate::pcgroup::series::f_series(&pres);
    let aut_gens = crate::pcgroup::iso::automorphism_group_brute_force(&pres)?.into_iter().map(|a| a.images).collect();
    Ok(ConstructedGroup {
        pres,
        f_class: fs.f_class,
        f_rank: fs.f_rank,
        aut_gens,
        provenance: Provenance::Descendant { parent: None, stepsize: 1, orbit_index: 0 },
    })
}

/// Reads a group file: a catalog entry in JSON, or a presentation in the text format.
pub fn read_group_file(path: &Path) -> Result<ConstructedGroup> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Invalid(format!("{}: {e}", path.display())))?;
    if let Ok(entry) = serde_json::from_str::<CatalogEntry>(&text) {
        return entry.group();
    }
    constructed_from_presentation(parse_presentation(&text)?)
}

/// Does the pruning lemma apply to ancestors of order `d` for target order `o`?
fn pruned_shape(o: u64, d: u64) -> bool {
    let f = factorize(o);
    let is_2a9 = f.len() == 2 && f[0].0 == 2 && f[1] == (3, 2);
    is_2a9 && o / d == 3
}

/// One row of the reference table.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ReferenceRow {
    pub order: u64,
    pub total: u64,
    pub non_nilpotent: u64,
}

/// Parses lines `order total non_nilpotent`; `#` starts a comment.
pub fn parse_reference(text: &str) -> Result<Vec<ReferenceRow>> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let nums: Vec<u64> = line
            .split_whitespace()
            .map(|t| t.parse::<u64>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|e| Error::Parse { line: i + 1, msg: e.to_string() })?;
        let [order, total, non_nilpotent] = nums[..] else {
            return Err(Error::Parse { line: i + 1, msg: "expected three numbers".into() });
        };
        out.push(ReferenceRow { order, total, non_nilpotent });
    }
    Ok(out)
}

/// The counts this engine is checked against.
pub const REFERENCE_COUNTS: &str = include_str!("../data/reference_counts.txt");

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CountCheck {
    pub order: u64,
    pub expected: Option<u64>,
    pub computed: u64,
}

impl CountCheck {
    pub fn ok(&self) -> bool {
        self.expected == Some(self.computed)
    }
}

/// Computed non-nilpotent counts against the reference, order by order.
pub fn verify_counts(catalog: &mut Catalog, orders: &[u64], reference: &[ReferenceRow]) -> Result<Vec<CountCheck>> {
    orders
        .iter()
        .map(|&o| {
            let computed = catalog.non_nilpotent(o)?.len() as u64;
            let expected = reference.iter().find(|r| r.order == o).map(|r| r.non_nilpotent);
            Ok(CountCheck { order: o, expected, computed })
        })
        .collect()
}

/// Catalog entries isomorphic to `g`: equal fingerprints, refined by brute force up to
/// [`ORACLE_CAP`].
pub fn identify(g: &PcPresentation, catalog: &[CatalogEntry]) -> Result<Vec<(u64, usize)>> {
    let fp = fingerprint(g);
    let mut out = Vec::new();
    for e in catalog.iter().filter(|e| e.fingerprint == fp) {
        if g.order() <= ORACLE_CAP {
            let h = parse_presentation(&e.presentation)?;
            if brute_force_isomorphic(g, &h)?.is_none() {
                continue;
            }
        }
        out.push(e.id);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pcgroup::examples::*;

    #[test]
    fn small_orders_match_reference() {
        let reference = parse_reference(REFERENCE_COUNTS).unwrap();
        let mut cat = Catalog::new(Budget::default());
        let report = verify_counts(&mut cat, &[6, 12, 18, 24], &reference).unwrap();
        assert!(report.iter().all(|c| c.ok()), "{report:?}");
        assert!(verify_counts(&mut cat, &[], &reference).unwrap().is_empty());
    }

    #[test]
    fn corrupted_reference_is_flagged() {
        let mut reference = parse_reference(REFERENCE_COUNTS).unwrap();
        reference.iter_mut().find(|r| r.order == 12).unwrap().non_nilpotent = 4;
        let mut cat = Catalog::new(Budget::default());
        let report = verify_counts(&mut cat, &[6, 12], &reference).unwrap();
        assert!(report[0].ok());
        assert!(!report[1].ok());
    }

    #[test]
    fn reference_parse_errors() {
        assert!(parse_reference("6 2\n").is_err());
        assert!(parse_reference("# only a comment\n\n").unwrap().is_empty());
    }

    #[test]
    fn entries_round_trip_and_verify() {
        let mut cat = Catalog::new(Budget::default());
        for e in cat.entries(24).unwrap() {
            e.verify().unwrap();
            let json = serde_json::to_string(&e).unwrap();
            assert_eq!(serde_json::from_str::<CatalogEntry>(&json).unwrap(), e);
        }
    }

    #[test]
    fn identify_finds_s4_once() {
        let mut cat = Catalog::new(Budget::default());
        let entries = cat.entries(24).unwrap();
        assert_eq!(identify(&symmetric4(), &entries).unwrap().len(), 1);
        assert!(identify(&cyclic(24), &entries).unwrap().is_empty());
    }

    #[test]
    fn fingerprints_separate_small_groups() {
        assert_ne!(fingerprint(&dihedral8()), fingerprint(&quaternion8()));
        let c4c2 = cyclic(4).direct_product(&cyclic(2));
        assert_ne!(fingerprint(&c4c2), fingerprint(&elementary_abelian(2, 3)));
        let s4 = symmetric4();
        let again = parse_presentation(&format_presentation(&s4)).unwrap();
        assert_eq!(fingerprint(&s4), fingerprint(&again));
    }

    #[test]
    fn presentation_input_gets_automorphisms() {
        let g = constructed_from_presentation(symmetric4()).unwrap();
        g.verify().unwrap();
        assert_eq!((g.f_class, g.f_rank), (1, 4));
        let ds = descendants(&g, None, &DescendOptions::default()).unwrap();
        assert!(!ds.groups.is_empty());
    }

    #[test]
    fn cache_round_trip() {
        let dir = std::env::temp_dir().join(format!("solvgroups-cache-{}", std::process::id()));
        let first = Catalog::new(Budget::default()).with_cache(&dir).entries(18).unwrap();
        let second = Catalog::new(Budget::default()).with_cache(&dir).entries(18).unwrap();
        assert_eq!(first, second);
        assert_eq!(read_catalog_dir(&dir).unwrap().iter().filter(|e| e.id.0 == 18).count(), first.len());
        std::fs::remove_dir_all(&dir).unwrap();
    }
}
