use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive};

use super::element::GroupKind;
use crate::colimit::{colimit_rank1, ColimitResult, Rank1Tail, SupernaturalNumber};
use crate::error::{Error, Result};

/// Indices `n_1 | n_2 | …` of the subgroup chain `Γ_i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Chain {
    Explicit(Vec<BigInt>),
    /// `n_i = start · ratio^{i-1}`
    Geometric { start: u64, ratio: u64 },
}

/// What happens after the listed part of a chain.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Tail {
    /// The listed levels are the whole system: colimits are taken over them and
    /// "infinitely often" predicates are false.
    Explicit,
    /// The chain continues by multiplying with `ratio` forever.
    Geometric { ratio: u64 },
}

/// The single input object: acting group, subgroup chain, enumeration depth,
/// and the tail assumption (implied by a geometric chain).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OdometerSpec {
    group: GroupKind,
    chain: Chain,
    depth: usize,
    tail: Option<Tail>,
}

impl OdometerSpec {
    pub fn new(group: GroupKind, chain: Chain, depth: usize, tail: Option<Tail>) -> Result<Self> {
        if depth == 0 {
            return Err(Error::BadDepth("depth must be at least 1".into()));
        }
        if let Some(Tail::Geometric { ratio }) = tail {
            if ratio < 2 {
                return Err(Error::BadTail(format!("geometric tail ratio {} must be at least 2", ratio)));
            }
        }
        match &chain {
            Chain::Geometric { start, ratio } => {
                if *start == 0 {
                    return Err(Error::BadChain("chain must start at a positive index".into()));
                }
                if *ratio < 2 {
                    return Err(Error::NotStrictlyIncreasing(start.to_string(), (start * ratio).to_string()));
                }
                match tail {
                    None => {}
                    Some(Tail::Geometric { ratio: r }) if r == *ratio => {}
                    Some(t) => {
                        return Err(Error::BadTail(format!(
                            "geometric chain with ratio {} conflicts with tail {:?}",
                            ratio, t
                        )))
                    }
                }
            }
            Chain::Explicit(ns) => {
                let first = ns.first().ok_or_else(|| Error::BadChain("empty chain".into()))?;
                if !first.is_positive() {
                    return Err(Error::BadChain(format!("index {} is not positive", first)));
                }
                if first.to_u64().is_none() {
                    return Err(Error::BadChain(format!("first index {} exceeds 64 bits", first)));
                }
                for w in ns.windows(2) {
                    if w[1] <= w[0] {
                        return Err(Error::NotStrictlyIncreasing(w[0].to_string(), w[1].to_string()));
                    }
                    if !w[1].is_multiple_of(&w[0]) {
                        return Err(Error::NotDivisible(w[0].to_string(), w[1].to_string()));
                    }
                    if (&w[1] / &w[0]).to_u64().is_none() {
                        return Err(Error::BadChain(format!("ratio {}/{} exceeds 64 bits", w[1], w[0])));
                    }
                }
                let bounded = !matches!(tail, Some(Tail::Geometric { .. }));
                if bounded && depth > ns.len() {
                    return Err(Error::BadDepth(format!(
                        "depth {} exceeds the {} listed levels and no geometric tail extends the chain",
                        depth,
                        ns.len()
                    )));
                }
            }
        }
        Ok(Self { group, chain, depth, tail })
    }

    /// Dihedral/`Z`/`Z × Z_2` odometer along `n_i = start · ratio^{i-1}`.
    pub fn geometric(group: GroupKind, start: u64, ratio: u64, depth: usize) -> Result<Self> {
        Self::new(group, Chain::Geometric { start, ratio }, depth, None)
    }

    pub fn explicit<I, T>(group: GroupKind, chain: I, depth: usize, tail: Option<Tail>) -> Result<Self>
    where
        I: IntoIterator<Item = T>,
        T: Into<BigInt>,
    {
        let ns = chain.into_iter().map(Into::into).collect();
        Self::new(group, Chain::Explicit(ns), depth, tail)
    }

    pub fn group(&self) -> GroupKind {
        self.group
    }

    pub fn chain(&self) -> &Chain {
        &self.chain
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    /// The tail as written in the input (a geometric chain needs none).
    pub fn declared_tail(&self) -> Option<Tail> {
        self.tail
    }

    pub fn with_depth(&self, depth: usize) -> Result<Self> {
        Self::new(self.group, self.chain.clone(), depth, self.tail)
    }

    /// Tail in force: geometric chains carry their own.
    pub fn effective_tail(&self) -> Option<Tail> {
        match &self.chain {
            Chain::Geometric { ratio, .. } => Some(Tail::Geometric { ratio: *ratio }),
            Chain::Explicit(_) => self.tail,
        }
    }

    pub fn require_tail(&self) -> Result<Tail> {
        self.effective_tail().ok_or(Error::TailRequired)
    }

    /// Number of levels in the system, `None` when it continues forever.
    pub fn level_count(&self) -> Option<usize> {
        match (&self.chain, self.effective_tail()) {
            (_, Some(Tail::Geometric { .. })) => None,
            (Chain::Explicit(ns), _) => Some(ns.len()),
            (Chain::Geometric { .. }, _) => None,
        }
    }

    fn available(&self) -> String {
        self.level_count()
            .map_or_else(|| "unbounded".to_string(), |n| format!("1..={}", n))
    }

    /// `n_level = [Γ : Γ_level]`, 1-based.
    pub fn modulus(&self, level: usize) -> Result<BigInt> {
        let out_of_range = || Error::LevelOutOfRange {
            level,
            available: self.available(),
        };
        if level == 0 {
            return Err(out_of_range());
        }
        match &self.chain {
            Chain::Geometric { start, ratio } => {
                Ok(BigInt::from(*start) * num_traits::pow(BigInt::from(*ratio), level - 1))
            }
            Chain::Explicit(ns) => {
                if level <= ns.len() {
                    return Ok(ns[level - 1].clone());
                }
                match self.tail {
                    Some(Tail::Geometric { ratio }) => {
                        let last = ns.last().expect("nonempty");
                        Ok(last * num_traits::pow(BigInt::from(ratio), level - ns.len()))
                    }
                    _ => Err(out_of_range()),
                }
            }
        }
    }

    /// `n_level` as a machine integer, for enumeration.
    pub fn modulus_usize(&self, level: usize) -> Result<usize> {
        let n = self.modulus(level)?;
        n.to_usize()
            .ok_or_else(|| Error::TooLarge(format!("n_{} = {} cannot be enumerated", level, n)))
    }

    /// `[Γ_level : Γ_{level+1}] = n_{level+1} / n_level`.
    pub fn ratio(&self, level: usize) -> Result<u64> {
        let a = self.modulus(level)?;
        let b = self.modulus(level + 1)?;
        Ok((b / a).to_u64().expect("ratios are validated to fit in 64 bits"))
    }

    pub fn first_modulus(&self) -> u64 {
        self.modulus(1).ok().and_then(|n| n.to_u64()).expect("validated")
    }

    /// Ratios of the explicitly listed part (geometric chains have none).
    fn listed_ratios(&self) -> Vec<u64> {
        match &self.chain {
            Chain::Explicit(ns) => ns
                .windows(2)
                .map(|w| (&w[1] / &w[0]).to_u64().expect("validated"))
                .collect(),
            Chain::Geometric { .. } => Vec::new(),
        }
    }

    /// Whether `n_{i+1}/n_i` is even for infinitely many `i`.
    pub fn ratio_even_infinitely_often(&self) -> Result<bool> {
        Ok(match self.require_tail()? {
            Tail::Geometric { ratio } => ratio % 2 == 0,
            Tail::Explicit => false,
        })
    }

    /// Whether every `n_i` is odd.
    pub fn all_moduli_odd(&self) -> Result<bool> {
        let tail = self.require_tail()?;
        let listed_odd = match &self.chain {
            Chain::Explicit(ns) => ns.iter().all(|n| n.is_odd()),
            Chain::Geometric { start, .. } => start % 2 == 1,
        };
        Ok(listed_odd
            && match tail {
                Tail::Geometric { ratio } => ratio % 2 == 1,
                Tail::Explicit => true,
            })
    }

    /// Rank-1 system `Z →(×n_1) Z →(×n_2/n_1) …` whose colimit is `{m/n_i}`.
    pub fn index_colimit(&self) -> Result<ColimitResult> {
        let tail = self.require_tail()?;
        let mut multipliers = vec![self.first_modulus()];
        multipliers.extend(self.listed_ratios());
        let rank1_tail = match tail {
            Tail::Explicit => Rank1Tail::Explicit,
            Tail::Geometric { ratio } => Rank1Tail::geometric(ratio),
        };
        Ok(colimit_rank1(&multipliers, &rank1_tail))
    }

    /// Supernatural number of the index sequence, `lim n_i`.
    pub fn index_supernatural(&self) -> Result<SupernaturalNumber> {
        match self.index_colimit()? {
            ColimitResult::Rank1(s) => Ok(s),
            other => Err(Error::InvariantViolation(format!("rank-1 colimit expected, got {}", other))),
        }
    }

    /// Levels to build when a colimit must be detected: every listed level plus
    /// `extra` more (the whole system under an explicit tail).
    pub fn levels_for_colimit(&self, extra: usize) -> usize {
        let listed = match &self.chain {
            Chain::Explicit(ns) => ns.len(),
            Chain::Geometric { .. } => 1,
        };
        match self.level_count() {
            Some(n) => n,
            None => listed + extra,
        }
    }

    pub fn is_trivial_start(&self) -> bool {
        self.modulus(1).map(|n| n.is_one()).unwrap_or(false)
    }
}
