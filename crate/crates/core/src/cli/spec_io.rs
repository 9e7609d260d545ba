use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::odometer::{Chain, GroupKind, OdometerSpec, Tail};

/// An index written either as a JSON number or as a decimal string (for values beyond 64 bits).
#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(untagged)]
enum Index {
    Number(u64),
    Text(String),
}

impl Index {
    fn to_bigint(&self) -> Result<BigInt> {
        match self {
            Index::Number(n) => Ok(BigInt::from(*n)),
            Index::Text(s) => s
                .trim()
                .parse()
                .map_err(|_| Error::BadChain(format!("{:?} is not an integer", s))),
        }
    }
}

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
enum ChainDoc {
    Explicit(Vec<Index>),
    Geometric { start: u64, ratio: u64 },
}

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(untagged)]
enum ChainField {
    List(Vec<Index>),
    Tagged(ChainDoc),
}

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
enum TailDoc {
    Explicit,
    Geometric { ratio: u64 },
}

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
struct SpecDoc {
    group: String,
    chain: ChainField,
    depth: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    tail: Option<TailDoc>,
}

/// Field values given on the command line, replacing those of the document.
#[derive(Clone, Debug, Default)]
pub struct SpecOverrides {
    pub group: Option<String>,
    pub depth: Option<usize>,
    /// `explicit` or `geometric:<ratio>`
    pub tail: Option<String>,
}

fn parse_tail_flag(s: &str) -> Result<TailDoc> {
    let s = s.trim();
    if s.eq_ignore_ascii_case("explicit") {
        return Ok(TailDoc::Explicit);
    }
    let ratio = s
        .strip_prefix("geometric:")
        .or_else(|| s.strip_prefix("geometric="))
        .and_then(|r| r.trim().parse().ok())
        .ok_or_else(|| Error::BadTail(format!("{:?}: expected explicit or geometric:<ratio>", s)))?;
    Ok(TailDoc::Geometric { ratio })
}

/// Reads a JSON spec document such as
/// `{"group":"dihedral","chain":{"geometric":{"start":2,"ratio":2}},"depth":8}`.
pub fn parse_spec(input: &str) -> Result<OdometerSpec> {
    parse_spec_with(input, &SpecOverrides::default())
}

pub fn parse_spec_with(input: &str, overrides: &SpecOverrides) -> Result<OdometerSpec> {
    let mut doc: SpecDoc = serde_json::from_str(input).map_err(|e| Error::Invalid(format!("spec document: {}", e)))?;
    if let Some(g) = &overrides.group {
        doc.group = g.clone();
    }
    if let Some(d) = overrides.depth {
        doc.depth = d;
    }
    if let Some(t) = &overrides.tail {
        doc.tail = Some(parse_tail_flag(t)?);
    }
    let group: GroupKind = doc.group.parse()?;
    let chain = match doc.chain {
        ChainField::List(ns) | ChainField::Tagged(ChainDoc::Explicit(ns)) => {
            Chain::Explicit(ns.iter().map(Index::to_bigint).collect::<Result<_>>()?)
        }
        ChainField::Tagged(ChainDoc::Geometric { start, ratio }) => Chain::Geometric { start, ratio },
    };
    let tail = doc.tail.map(|t| match t {
        TailDoc::Explicit => Tail::Explicit,
        TailDoc::Geometric { ratio } => Tail::Geometric { ratio },
    });
    OdometerSpec::new(group, chain, doc.depth, tail)
}

fn to_doc(spec: &OdometerSpec) -> SpecDoc {
    let chain = match spec.chain() {
        Chain::Explicit(ns) => ChainField::Tagged(ChainDoc::Explicit(
            ns.iter()
                .map(|n| match u64::try_from(n) {
                    Ok(v) => Index::Number(v),
                    Err(_) => Index::Text(n.to_string()),
                })
                .collect(),
        )),
        Chain::Geometric { start, ratio } => ChainField::Tagged(ChainDoc::Geometric {
            start: *start,
            ratio: *ratio,
        }),
    };
    SpecDoc {
        group: spec.group().name().to_string(),
        chain,
        depth: spec.depth(),
        tail: spec.declared_tail().map(|t| match t {
            Tail::Explicit => TailDoc::Explicit,
            Tail::Geometric { ratio } => TailDoc::Geometric { ratio },
        }),
    }
}

/// The spec as a JSON value accepted by [`parse_spec`].
pub fn spec_to_json(spec: &OdometerSpec) -> serde_json::Value {
    serde_json::to_value(to_doc(spec)).expect("spec documents serialize")
}

pub fn serialize_spec(spec: &OdometerSpec) -> String {
    spec_to_json(spec).to_string()
}
