//! JSON fixtures carrying minus-part class module presentations for one
//! `(L, p, T0)` instance, with loading, validation and canonical output.

use std::fmt;
use std::path::Path;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::arith;
use crate::error::{Error, Result};
use crate::extension::ExtensionDatum;
use crate::fitting::ModulePresentation;
use crate::group_ring::GroupRingElt;
use crate::lattice::Ambient;
use crate::lvalues::LValueProvider;
use crate::places::PlaceSet;
use crate::stark;
use crate::stickelberger::{minus_context, torsionfree};

pub const SCHEMA_MAJOR: u64 = 1;
pub const SCHEMA_VERSION: &str = "1.0";

const SAFE_INT: u64 = 1 << 53;

/// An integer written as a JSON number when it fits in 53 bits and as a
/// decimal string otherwise.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JsonInt(pub BigInt);

impl Serialize for JsonInt {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self.0.to_i64() {
            Some(v) if v.unsigned_abs() < SAFE_INT => s.serialize_i64(v),
            _ => s.serialize_str(&self.0.to_string()),
        }
    }
}

impl<'de> Deserialize<'de> for JsonInt {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(i64),
            Str(String),
        }
        match Raw::deserialize(d)? {
            Raw::Num(v) => Ok(JsonInt(v.into())),
            Raw::Str(s) => s
                .trim()
                .parse()
                .map(JsonInt)
                .map_err(serde::de::Error::custom),
        }
    }
}

impl From<BigInt> for JsonInt {
    fn from(v: BigInt) -> Self {
        JsonInt(v)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupBlock {
    pub order: u64,
    pub invariants: Vec<u64>,
    /// `a` with `sigma_a` the i-th canonical generator of `G`.
    pub generator_labels: Vec<u64>,
    /// Least positive representative of complex conjugation.
    pub j: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModuleBlock {
    pub ambient: String,
    pub generators: usize,
    /// Rows of the relation matrix; each entry is a coefficient array over
    /// the canonical enumeration of `G`.
    pub relations: Vec<Vec<Vec<JsonInt>>>,
    /// Declared order of the `p`-part.
    pub cardinality: JsonInt,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Modules {
    #[serde(rename = "A")]
    pub a: ModuleBlock,
    #[serde(rename = "A_T0")]
    pub a_t0: ModuleBlock,
    pub residue_minus: ModuleBlock,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PartialZetaBlock {
    #[serde(rename = "S")]
    pub s: String,
    /// `"a/b"` per element in the canonical enumeration.
    pub values: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Provenance {
    pub tool: String,
    pub version: String,
    pub command: String,
    pub date: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub notes: Option<String>,
}

/// The on-disk record.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FixtureFile {
    pub schema_version: String,
    pub id: String,
    pub conductor: u64,
    pub subgroup_gens: Vec<u64>,
    pub p: u64,
    pub t0: u64,
    #[serde(rename = "w_L")]
    pub w_l: u64,
    pub group: GroupBlock,
    pub modules: Modules,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub partial_zeta: Option<PartialZetaBlock>,
    pub provenance: Provenance,
}

impl FixtureFile {
    pub fn parse(text: &str) -> Result<Self> {
        let value: serde_json::Value =
            serde_json::from_str(text).map_err(|e| Error::Fixture(e.to_string()))?;
        let version = value
            .get("schema_version")
            .and_then(|v| v.as_str())
            .ok_or_else(|| Error::Fixture("missing schema_version".into()))?;
        let major: u64 = version
            .split('.')
            .next()
            .and_then(|m| m.parse().ok())
            .ok_or_else(|| Error::Fixture(format!("malformed schema_version {version:?}")))?;
        if major != SCHEMA_MAJOR {
            return Err(Error::Fixture(format!(
                "unsupported schema major version {major}"
            )));
        }
        serde_json::from_value(value).map_err(|e| Error::Fixture(e.to_string()))
    }

    pub fn read(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Fixture(format!("{}: {e}", path.display())))?;
        Self::parse(&text)
    }

    /// Sorted keys, no whitespace.
    pub fn to_canonical_json(&self) -> String {
        canonical_json(&serde_json::to_value(self).expect("fixture serializes"))
    }

    /// Builds a record from presentations over the minus ring; cardinalities
    /// are filled in as `p`-parts.
    pub fn from_presentations(
        ext: &ExtensionDatum,
        p: u64,
        t0: u64,
        modules: [&ModulePresentation; 3],
        provenance: Provenance,
    ) -> Result<Self> {
        let group = ext.group();
        let block = |m: &ModulePresentation| -> Result<ModuleBlock> {
            let relations = m
                .relations()
                .iter()
                .map(|row| {
                    row.iter()
                        .map(|x| {
                            x.integer_coeffs()
                                .expect("integral")
                                .into_iter()
                                .map(JsonInt)
                                .collect()
                        })
                        .collect()
                })
                .collect();
            Ok(ModuleBlock {
                ambient: if m.ambient().is_minus() {
                    "minus"
                } else {
                    "full"
                }
                .into(),
                generators: m.generators(),
                relations,
                cardinality: JsonInt(m.p_cardinality(p)?),
            })
        };
        let generator_labels = (0..group.rank())
            .map(|i| {
                let mut e = vec![0i64; group.rank()];
                e[i] = 1;
                ext.label(&group.element(&e))
            })
            .collect();
        Ok(FixtureFile {
            schema_version: SCHEMA_VERSION.into(),
            id: format!("{}-p{p}-t0{t0}", ext.id()),
            conductor: ext.conductor(),
            subgroup_gens: ext.subgroup_gens().to_vec(),
            p,
            t0,
            w_l: ext.roots_of_unity(),
            group: GroupBlock {
                order: group.order(),
                invariants: group.invariants().to_vec(),
                generator_labels,
                j: ext.label(ext.j()),
            },
            modules: Modules {
                a: block(modules[0])?,
                a_t0: block(modules[1])?,
                residue_minus: block(modules[2])?,
            },
            partial_zeta: None,
            provenance,
        })
    }
}

/// The fixtures shipped with the crate, by file stem.
pub const COMMITTED: &[(&str, &str)] = &[
    ("f4_p3_t05", include_str!("../fixtures/f4_p3_t05.json")),
    ("f23_p3_t05", include_str!("../fixtures/f23_p3_t05.json")),
    ("f23_p3_t07", include_str!("../fixtures/f23_p3_t07.json")),
    ("f23_p5_t03", include_str!("../fixtures/f23_p5_t03.json")),
];

/// Parses and validates a committed fixture.
pub fn committed(stem: &str) -> Result<Fixture> {
    let (_, text) = COMMITTED
        .iter()
        .find(|(name, _)| *name == stem)
        .ok_or_else(|| Error::Fixture(format!("no committed fixture {stem:?}")))?;
    Fixture::from_file(FixtureFile::parse(text)?)
}

/// Serializes any JSON value with sorted object keys and no whitespace.
pub fn canonical_json(v: &serde_json::Value) -> String {
    use serde_json::Value;
    match v {
        Value::Object(map) => {
            let mut keys: Vec<&String> = map.keys().collect();
            keys.sort();
            let body: Vec<String> = keys
                .into_iter()
                .map(|k| {
                    format!(
                        "{}:{}",
                        serde_json::to_string(k).unwrap(),
                        canonical_json(&map[k])
                    )
                })
                .collect();
            format!("{{{}}}", body.join(","))
        }
        Value::Array(xs) => format!(
            "[{}]",
            xs.iter().map(canonical_json).collect::<Vec<_>>().join(",")
        ),
        other => other.to_string(),
    }
}

/// A violated fixture invariant.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub invariant: &'static str,
    pub detail: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.invariant, self.detail)
    }
}

/// A validated fixture with its presentations rebuilt over the minus ring.
#[derive(Debug, Clone)]
pub struct Fixture {
    pub file: FixtureFile,
    pub ext: ExtensionDatum,
    pub ambient: Ambient,
    pub a: ModulePresentation,
    pub a_t0: ModulePresentation,
    pub residue_minus: ModulePresentation,
    pub provider: Option<LValueProvider>,
}

impl Fixture {
    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let file = FixtureFile::read(path)?;
        Self::from_file(file)
    }

    pub fn from_file(file: FixtureFile) -> Result<Self> {
        validate(&file).map_err(|vs| {
            Error::Fixture(
                vs.iter()
                    .map(|v| v.to_string())
                    .collect::<Vec<_>>()
                    .join("; "),
            )
        })
    }

    pub fn id(&self) -> &str {
        &self.file.id
    }

    pub fn p(&self) -> u64 {
        self.file.p
    }

    pub fn t0(&self) -> PlaceSet {
        PlaceSet::finite([self.file.t0])
    }

    pub fn declared(&self, which: ModuleKind) -> &BigInt {
        &self.block(which).cardinality.0
    }

    pub fn module(&self, which: ModuleKind) -> &ModulePresentation {
        match which {
            ModuleKind::ClassGroup => &self.a,
            ModuleKind::RayClassGroup => &self.a_t0,
            ModuleKind::ResidueUnits => &self.residue_minus,
        }
    }

    fn block(&self, which: ModuleKind) -> &ModuleBlock {
        let m = &self.file.modules;
        match which {
            ModuleKind::ClassGroup => &m.a,
            ModuleKind::RayClassGroup => &m.a_t0,
            ModuleKind::ResidueUnits => &m.residue_minus,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModuleKind {
    ClassGroup,
    RayClassGroup,
    ResidueUnits,
}

impl ModuleKind {
    pub const ALL: [ModuleKind; 3] = [
        ModuleKind::ClassGroup,
        ModuleKind::RayClassGroup,
        ModuleKind::ResidueUnits,
    ];

    pub fn key(self) -> &'static str {
        match self {
            ModuleKind::ClassGroup => "A",
            ModuleKind::RayClassGroup => "A_T0",
            ModuleKind::ResidueUnits => "residue_minus",
        }
    }
}

/// Checks every invariant and rebuilds the presentations, or lists what
/// failed.
pub fn validate(file: &FixtureFile) -> std::result::Result<Fixture, Vec<Violation>> {
    let mut bad = Vec::new();
    let mut flag =
        |invariant: &'static str, detail: String| bad.push(Violation { invariant, detail });

    let ext = match ExtensionDatum::from_conductor(file.conductor, &file.subgroup_gens) {
        Ok(ext) => ext,
        Err(e) => {
            return Err(vec![Violation {
                invariant: "extension",
                detail: e.to_string(),
            }])
        }
    };
    if ext.conductor() != file.conductor {
        flag(
            "conductor",
            format!(
                "{} is not the conductor; reduces to {}",
                file.conductor,
                ext.conductor()
            ),
        );
    }
    let group = ext.group();
    if file.group.order != group.order() {
        flag(
            "group_order",
            format!("declared {}, computed {}", file.group.order, group.order()),
        );
    }
    if file.group.invariants != group.invariants() {
        flag(
            "group_invariants",
            format!(
                "declared {:?}, computed {:?}",
                file.group.invariants,
                group.invariants()
            ),
        );
    }
    let labels: Vec<u64> = (0..group.rank())
        .map(|i| {
            let mut e = vec![0i64; group.rank()];
            e[i] = 1;
            ext.label(&group.element(&e))
        })
        .collect();
    if file.group.generator_labels != labels {
        flag(
            "generator_labels",
            format!(
                "declared {:?}, computed {labels:?}",
                file.group.generator_labels
            ),
        );
    }
    if file.group.j != ext.label(ext.j()) {
        flag(
            "j",
            format!(
                "declared sigma_{}, computed sigma_{}",
                file.group.j,
                ext.label(ext.j())
            ),
        );
    }
    if file.w_l != ext.roots_of_unity() {
        flag(
            "w_L",
            format!("declared {}, computed {}", file.w_l, ext.roots_of_unity()),
        );
    }
    let p = file.p;
    if p == 2 || !arith::is_prime(p) {
        flag("p", format!("{p} is not an odd prime"));
    }
    let t0 = file.t0;
    let t0_set = PlaceSet::finite([t0]);
    if !arith::is_prime(t0) || ext.is_ramified(t0) || t0 == p || !torsionfree(&ext, &t0_set) {
        flag(
            "t0",
            format!("{t0} is not an admissible unramified prime with torsion-free T0-units"),
        );
    }

    let ambient = Ambient::Minus(minus_context(&ext));
    let n = group.order() as usize;
    let mut built = Vec::new();
    for kind in ModuleKind::ALL {
        let block = match kind {
            ModuleKind::ClassGroup => &file.modules.a,
            ModuleKind::RayClassGroup => &file.modules.a_t0,
            ModuleKind::ResidueUnits => &file.modules.residue_minus,
        };
        match build_module(block, &ambient, n, p) {
            Ok(m) => built.push(Some(m)),
            Err((invariant, detail)) => {
                flag(invariant, format!("{}: {detail}", kind.key()));
                built.push(None);
            }
        }
    }

    if let Some(res) = &built[2] {
        if arith::is_prime(t0) && !ext.is_ramified(t0) && arith::is_prime(p) {
            let expected = stark::residue_module_minus(&ext, t0).and_then(|m| m.p_cardinality(p));
            match (expected, res.p_cardinality(p)) {
                (Ok(e), Ok(c)) if e == c => {}
                (Ok(e), Ok(c)) => flag(
                    "residue_minus",
                    format!("p-part {c} but (O/t0)^x minus has {e}"),
                ),
                _ => {}
            }
        }
    }

    let provider = match &file.partial_zeta {
        None => None,
        Some(pz) => match parse_partial_zeta(&ext, pz) {
            Ok(p) => Some(p),
            Err(e) => {
                flag("partial_zeta", e.to_string());
                None
            }
        },
    };

    if !bad.is_empty() {
        return Err(bad);
    }
    let mut it = built.into_iter().map(|m| m.expect("no violations"));
    Ok(Fixture {
        file: file.clone(),
        ext,
        ambient,
        a: it.next().unwrap(),
        a_t0: it.next().unwrap(),
        residue_minus: it.next().unwrap(),
        provider,
    })
}

fn build_module(
    block: &ModuleBlock,
    ambient: &Ambient,
    n: usize,
    p: u64,
) -> std::result::Result<ModulePresentation, (&'static str, String)> {
    if block.ambient != "minus" {
        return Err(("ambient", format!("{:?} is not \"minus\"", block.ambient)));
    }
    let group = ambient.group();
    let mut rows = Vec::new();
    for row in &block.relations {
        let mut out = Vec::new();
        for entry in row {
            if entry.len() != n {
                return Err((
                    "coefficient_length",
                    format!("array of length {} for |G| = {n}", entry.len()),
                ));
            }
            let coeffs: Vec<BigInt> = entry.iter().map(|x| x.0.clone()).collect();
            out.push(GroupRingElt::from_big_integers(group, &coeffs));
        }
        rows.push(out);
    }
    let pres = ModulePresentation::new(ambient, block.generators, rows)
        .map_err(|e| ("shape", e.to_string()))?;
    if !pres.is_square() {
        return Err((
            "square",
            format!(
                "{} relations on {} generators",
                pres.relations().len(),
                pres.generators()
            ),
        ));
    }
    let card = pres
        .p_cardinality(p)
        .map_err(|e| ("finite_cokernel", e.to_string()))?;
    if card != block.cardinality.0 {
        return Err((
            "cardinality",
            format!(
                "declared {}, Smith normal form gives {card}",
                block.cardinality.0
            ),
        ));
    }
    Ok(pres)
}

fn parse_partial_zeta(ext: &ExtensionDatum, pz: &PartialZetaBlock) -> Result<LValueProvider> {
    let s: PlaceSet = pz.s.parse()?;
    let n = ext.group().order() as usize;
    if pz.values.len() != n {
        return Err(Error::ProviderGap(format!(
            "{} values for |G| = {n}",
            pz.values.len()
        )));
    }
    let values = pz
        .values
        .iter()
        .map(|v| {
            arith::parse_rational(v).ok_or_else(|| Error::Fixture(format!("bad rational {v:?}")))
        })
        .collect::<Result<Vec<BigRational>>>()?;
    LValueProvider::partial_zeta(ext, s, values)
}

/// Order of the `p`-power roots of unity in `L`.
pub fn mu_p(ext: &ExtensionDatum, p: u64) -> BigInt {
    arith::p_part(&BigInt::from(ext.roots_of_unity()), p)
}
