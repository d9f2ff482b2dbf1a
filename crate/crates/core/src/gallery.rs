//! Named examples with machine-checkable claims about them.
//!
//! Entries that need the rank-2 pair with isomorphic squares are built only
//! when a [`FuchsLoonstraConfig`] is supplied; [`default_config`] parses the
//! presentation shipped with the crate.

use std::fmt;

use crate::desc::{AbGroupDesc, FreePartDesc};
use crate::error::{Error, Result};
use crate::fgab::{fg_isomorphic, FgAbGroup, Multiplicity, TorsionDesc};
use crate::format::{parse_gallery_config, FuchsLoonstraConfig};
use crate::uginv::{compare_free_parts, compare_k1, compare_unitary, witness_report, ComparisonResult, Witness};
use crate::wedge::{k0, k1, lemma_det_oracle, third_compound_block_law, wedge2_divisible, wedge2_type_rank2};

const SHIPPED_CONFIG: &str = include_str!("../data/fuchs_loonstra.cfg");

/// Largest modulus tried by divisibility-lemma claims.
pub const LEMMA_DET_MODULUS_BOUND: u64 = 60;

pub fn default_config() -> FuchsLoonstraConfig {
    parse_gallery_config(SHIPPED_CONFIG).expect("shipped configuration parses")
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ClaimKind {
    UnitaryIso,
    UnitaryNonIso,
    K1Iso,
    K1NonIso,
    GroupNonIso,
    Wedge2TypeEqual,
    LemDescBlocks,
    LemDetEquiv,
    K1Rank(usize),
    K0Rank(usize),
    WitnessValid,
}

impl fmt::Display for ClaimKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ClaimKind::K1Rank(n) => write!(f, "K1Rank({n})"),
            ClaimKind::K0Rank(n) => write!(f, "K0Rank({n})"),
            other => write!(f, "{other:?}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Provenance {
    PaperCited,
    /// Reported with its citation, never verified.
    LiteratureTrusted(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Claim {
    pub kind: ClaimKind,
    /// Indices into the entry's groups (or witnesses, for `WitnessValid`).
    pub subjects: Vec<usize>,
    /// Whether the claim is asserted to hold.
    pub expected: bool,
    pub provenance: Provenance,
}

impl Claim {
    pub fn cited(kind: ClaimKind, subjects: &[usize]) -> Self {
        Claim { kind, subjects: subjects.to_vec(), expected: true, provenance: Provenance::PaperCited }
    }

    pub fn trusted(kind: ClaimKind, subjects: &[usize], citation: &str) -> Self {
        Claim {
            kind,
            subjects: subjects.to_vec(),
            expected: true,
            provenance: Provenance::LiteratureTrusted(citation.into()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GalleryEntry {
    pub name: String,
    pub groups: Vec<(String, AbGroupDesc)>,
    pub witnesses: Vec<Witness>,
    pub claims: Vec<Claim>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Status {
    Pass,
    Fail,
    Skipped,
    Unknown,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Skipped => "SKIPPED",
            Status::Unknown => "UNKNOWN",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClaimReport {
    pub entry: String,
    pub claim: String,
    pub status: Status,
    pub evidence: String,
}

impl fmt::Display for ClaimReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}: {} ({})", self.entry, self.claim, self.status, self.evidence)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct GalleryReport {
    pub notices: Vec<String>,
    pub claims: Vec<ClaimReport>,
}

impl GalleryReport {
    pub fn has_failures(&self) -> bool {
        self.claims.iter().any(|c| c.status == Status::Fail)
    }

    pub fn count(&self, status: Status) -> usize {
        self.claims.iter().filter(|c| c.status == status).count()
    }
}

impl fmt::Display for GalleryReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for n in &self.notices {
            writeln!(f, "notice: {n}")?;
        }
        for c in &self.claims {
            writeln!(f, "{c}")?;
        }
        write!(
            f,
            "{} passed, {} failed, {} skipped, {} unknown",
            self.count(Status::Pass),
            self.count(Status::Fail),
            self.count(Status::Skipped),
            self.count(Status::Unknown)
        )
    }
}

fn countable_torsion(free: FreePartDesc) -> AbGroupDesc {
    AbGroupDesc::new(TorsionDesc::CountablyInfinite, free)
}

fn with_z2(free: FreePartDesc) -> AbGroupDesc {
    AbGroupDesc::new(TorsionDesc::finite(FgAbGroup::from_cyclic_orders(&[2])), free)
}

const CANCELLATION: &str = "Fuchs, Infinite Abelian Groups II, Theorem 90.3";
const SPECTRA: &str = "spectra with non-homeomorphic connected components";

/// The built-in entries, sorted by name. Without a configuration the
/// entries that need the rank-2 pair are left out, with a notice.
pub fn builtin_gallery(config: Option<&FuchsLoonstraConfig>) -> (Vec<GalleryEntry>, Vec<String>) {
    let mut entries = Vec::new();
    let mut notices = Vec::new();
    for m in 1..=6 {
        entries.push(GalleryEntry {
            name: format!("free-rank-{m}"),
            groups: vec![(format!("Z^{m}"), AbGroupDesc::free(m))],
            witnesses: vec![],
            claims: vec![
                Claim::cited(ClaimKind::K1Rank(1 << (m - 1)), &[0]),
                Claim::cited(ClaimKind::K0Rank(1 << (m - 1)), &[0]),
            ],
        });
    }
    entries.push(GalleryEntry {
        name: "different-free-rank".into(),
        groups: vec![
            ("Z + omega Z2".into(), countable_torsion(FreePartDesc::FreeOfRank(1))),
            ("Z^2 + omega Z2".into(), countable_torsion(FreePartDesc::FreeOfRank(2))),
        ],
        witnesses: vec![],
        claims: vec![Claim::cited(ClaimKind::UnitaryIso, &[0, 1]), Claim::cited(ClaimKind::K1NonIso, &[0, 1])],
    });
    entries.push(GalleryEntry {
        name: "countable-torsion".into(),
        groups: vec![
            ("omega Z2".into(), countable_torsion(FreePartDesc::FreeOfRank(0))),
            ("omega Z3".into(), countable_torsion(FreePartDesc::FreeOfRank(0))),
        ],
        witnesses: vec![],
        claims: vec![Claim::cited(ClaimKind::UnitaryIso, &[0, 1])],
    });

    match config {
        Some(cfg) => entries.extend(pair_entries(cfg)),
        None => notices.push(
            Error::MissingConfiguration(
                "no rank-2 pair configured; k1-counterexample, mixed-duplication and mixed-k1-and-unitary omitted"
                    .into(),
            )
            .to_string(),
        ),
    }
    entries.sort_by(|a, b| a.name.cmp(&b.name));
    (entries, notices)
}

fn pair_entries(cfg: &FuchsLoonstraConfig) -> Vec<GalleryEntry> {
    let gamma = |t: &crate::tower::Tower| FreePartDesc::TowerForm(t.clone());
    let delta = |t| FreePartDesc::DirectSum(vec![FreePartDesc::FreeOfRank(2), gamma(t)]);
    let (g1, g2) = (&cfg.first, &cfg.second);
    let witness = cfg.witness.clone();
    vec![
        GalleryEntry {
            name: "k1-counterexample".into(),
            groups: vec![
                ("Z^2 + Gamma1".into(), AbGroupDesc::torsion_free(delta(g1))),
                ("Z^2 + Gamma2".into(), AbGroupDesc::torsion_free(delta(g2))),
                ("Gamma1".into(), AbGroupDesc::torsion_free(gamma(g1))),
                ("Gamma2".into(), AbGroupDesc::torsion_free(gamma(g2))),
            ],
            witnesses: vec![witness.clone()],
            claims: vec![
                Claim::cited(ClaimKind::WitnessValid, &[0]),
                Claim::cited(ClaimKind::Wedge2TypeEqual, &[2, 3]),
                Claim::cited(ClaimKind::LemDescBlocks, &[2]),
                Claim::cited(ClaimKind::LemDescBlocks, &[3]),
                Claim::cited(ClaimKind::LemDetEquiv, &[2]),
                Claim::cited(ClaimKind::LemDetEquiv, &[3]),
                Claim::cited(ClaimKind::K1Iso, &[0, 1]),
                Claim::trusted(ClaimKind::GroupNonIso, &[2, 3], CANCELLATION),
                Claim::trusted(ClaimKind::GroupNonIso, &[0, 1], CANCELLATION),
            ],
        },
        GalleryEntry {
            name: "mixed-duplication".into(),
            groups: vec![("Gamma1 + Z2".into(), with_z2(gamma(g1))), ("Gamma2 + Z2".into(), with_z2(gamma(g2)))],
            witnesses: vec![witness.clone()],
            claims: vec![
                Claim::cited(ClaimKind::UnitaryIso, &[0, 1]),
                Claim::trusted(ClaimKind::GroupNonIso, &[0, 1], SPECTRA),
            ],
        },
        GalleryEntry {
            name: "mixed-k1-and-unitary".into(),
            groups: vec![
                ("Z^2 + Gamma1 + Z2".into(), with_z2(delta(g1))),
                ("Z^2 + Gamma2 + Z2".into(), with_z2(delta(g2))),
            ],
            witnesses: vec![witness],
            claims: vec![
                Claim::cited(ClaimKind::UnitaryIso, &[0, 1]),
                Claim::cited(ClaimKind::K1Iso, &[0, 1]),
                Claim::trusted(ClaimKind::GroupNonIso, &[0, 1], SPECTRA),
            ],
        },
    ]
}

/// Outcome of evaluating a claim: whether it held, or why it could not be
/// decided.
enum Outcome {
    Holds(bool, String),
    Undecided(String),
}

fn from_comparison(r: ComparisonResult, want_iso: bool) -> Outcome {
    match r {
        ComparisonResult::Isomorphic(e) => Outcome::Holds(want_iso, format!("Isomorphic: {e}")),
        ComparisonResult::NotIsomorphic(e) => Outcome::Holds(!want_iso, format!("NotIsomorphic: {e}")),
        ComparisonResult::Unknown(e) => Outcome::Undecided(format!("Unknown: {e}")),
    }
}

fn rank2_tower(g: &AbGroupDesc) -> Result<&crate::tower::Tower> {
    match &g.free_part {
        FreePartDesc::TowerForm(t) if t.rank() == 2 => Ok(t),
        other => Err(Error::Unsupported(format!("expected a rank-2 tower, got {other}"))),
    }
}

fn evaluate(e: &GalleryEntry, c: &Claim) -> Result<Outcome> {
    let group = |i: usize| -> Result<&AbGroupDesc> {
        e.groups
            .get(c.subjects.get(i).copied().unwrap_or(usize::MAX))
            .map(|(_, g)| g)
            .ok_or_else(|| Error::DimensionMismatch(format!("claim {} names a group the entry does not have", c.kind)))
    };
    Ok(match &c.kind {
        ClaimKind::UnitaryIso | ClaimKind::UnitaryNonIso => {
            from_comparison(compare_unitary(group(0)?, group(1)?, &e.witnesses), c.kind == ClaimKind::UnitaryIso)
        }
        ClaimKind::K1Iso | ClaimKind::K1NonIso => {
            from_comparison(compare_k1(group(0)?, group(1)?, &e.witnesses), c.kind == ClaimKind::K1Iso)
        }
        ClaimKind::GroupNonIso => {
            let (a, b) = (group(0)?, group(1)?);
            let torsion_equal = match (&a.torsion, &b.torsion) {
                (TorsionDesc::Finite(x), TorsionDesc::Finite(y)) => fg_isomorphic(x, y),
                (x, y) => x == y,
            };
            if torsion_equal {
                from_comparison(compare_free_parts(&a.free_part, &b.free_part, &e.witnesses), false)
            } else {
                Outcome::Holds(true, format!("torsion {} vs {}", a.torsion, b.torsion))
            }
        }
        ClaimKind::Wedge2TypeEqual => {
            let (ta, tb) = (wedge2_type_rank2(rank2_tower(group(0)?)?)?, wedge2_type_rank2(rank2_tower(group(1)?)?)?);
            Outcome::Holds(ta == tb, format!("{ta} vs {tb}"))
        }
        ClaimKind::LemDescBlocks => {
            let t = rank2_tower(group(0)?)?;
            let mut holds = true;
            for m in t.matrices() {
                holds &= third_compound_block_law(m)?;
            }
            Outcome::Holds(
                holds,
                format!("degree-3 compound of id2 + A over {} connecting matrices", t.matrices().count()),
            )
        }
        ClaimKind::LemDetEquiv => {
            let t = rank2_tower(group(0)?)?;
            let mut mismatches = Vec::new();
            for m in 2..=LEMMA_DET_MODULUS_BOUND {
                if lemma_det_oracle(t, m)? != wedge2_divisible(t, m)? {
                    mismatches.push(m);
                }
            }
            let evidence = if mismatches.is_empty() {
                format!("moduli 2..={LEMMA_DET_MODULUS_BOUND} agree")
            } else {
                format!("mismatch at m = {mismatches:?}")
            };
            Outcome::Holds(mismatches.is_empty(), evidence)
        }
        ClaimKind::K1Rank(n) | ClaimKind::K0Rank(n) => {
            let k = if matches!(c.kind, ClaimKind::K1Rank(_)) { k1(group(0)?)? } else { k0(group(0)?)? };
            Outcome::Holds(k.rank() == Multiplicity::Finite(*n), format!("{k}"))
        }
        ClaimKind::WitnessValid => {
            let w = c
                .subjects
                .first()
                .and_then(|&i| e.witnesses.get(i))
                .ok_or_else(|| Error::DimensionMismatch("claim names a witness the entry does not have".into()))?;
            let r = witness_report(w)?;
            let evidence = match (&r.first_violation, r.periodic_certificate) {
                (Some(v), _) => v.clone(),
                (None, true) => format!("{} stages checked; stage maps integral and periodic", r.stages_checked),
                (None, false) => format!("{} stages checked", r.stages_checked),
            };
            Outcome::Holds(r.valid, evidence)
        }
    })
}

pub fn verify_entry(e: &GalleryEntry) -> Vec<ClaimReport> {
    e.claims
        .iter()
        .map(|c| {
            let claim = format!("{}{:?}", c.kind, c.subjects);
            let (status, evidence) = match &c.provenance {
                Provenance::LiteratureTrusted(citation) => (Status::Skipped, format!("literature-trusted: {citation}")),
                Provenance::PaperCited => match evaluate(e, c) {
                    Ok(Outcome::Holds(holds, ev)) => {
                        (if holds == c.expected { Status::Pass } else { Status::Fail }, ev)
                    }
                    Ok(Outcome::Undecided(ev)) => (Status::Unknown, ev),
                    Err(err) => (Status::Fail, format!("error: {err}")),
                },
            };
            ClaimReport { entry: e.name.clone(), claim, status, evidence }
        })
        .collect()
}

/// Verifies every entry; the report is ordered by entry name.
pub fn verify_gallery(entries: &[GalleryEntry], notices: &[String]) -> GalleryReport {
    let mut sorted: Vec<&GalleryEntry> = entries.iter().collect();
    sorted.sort_by(|a, b| a.name.cmp(&b.name));
    GalleryReport { notices: notices.to_vec(), claims: sorted.into_iter().flat_map(verify_entry).collect() }
}
