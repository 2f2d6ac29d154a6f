//! Certified bounds for `q(n)`, its matrix-group variants and `m_F(n)`.
//!
//! Lower bounds come from Wood's obstruction, evenness and monotonicity; upper bounds
//! come only from witness maps that have been constructed and verified.

use alloc::collections::btree_map::Entry;
use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use num_integer::Roots;

use crate::error::{Error, Result};
use crate::hopf::{
    chain_witness, clifford_hopf_map, hopf_restriction_coords, odd_sphere_fibration, radon_hurwitz, ChainName,
};
use crate::maps::{is_constant, restrict_to_coordinates, verify_sphere_map, SphereMap};

/// True when `{r+1, ..., n}` contains a power of two, i.e. every polynomial map `S^n -> S^r` is constant.
pub fn wood_obstruction(n: usize, r: usize) -> Result<bool> {
    if r < 1 || r + 1 > n {
        return Err(Error::OutOfRange(format!("need 1 <= r <= n - 1, got n = {n}, r = {r}")));
    }
    Ok(obstructed(n, r))
}

fn obstructed(n: usize, r: usize) -> bool {
    largest_power_of_two(n) > r
}

fn largest_power_of_two(n: usize) -> usize {
    1 << (usize::BITS - 1 - n.leading_zeros())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Rule {
    Wood,
    Monotone,
    Even,
    Witness,
    Identity,
}

impl Rule {
    pub fn tag(self) -> &'static str {
        match self {
            Rule::Wood => "wood",
            Rule::Monotone => "monotone",
            Rule::Even => "even",
            Rule::Witness => "witness",
            Rule::Identity => "identity",
        }
    }

    pub fn from_tag(s: &str) -> Result<Self> {
        match s {
            "wood" => Ok(Rule::Wood),
            "monotone" => Ok(Rule::Monotone),
            "even" => Ok(Rule::Even),
            "witness" => Ok(Rule::Witness),
            "identity" => Ok(Rule::Identity),
            other => Err(Error::UnknownName(other.into())),
        }
    }
}

/// How a witness map `S^n -> S^target` is built.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum WitnessId {
    Identity {
        n: usize,
    },
    /// The Hopf map on `R^m × R^{ρ(m)}` restricted to a great `S^n`.
    Hopf {
        m: usize,
        n: usize,
    },
    /// `S^{2k+1} -> S^{2k}`.
    OddFibration {
        k: usize,
    },
    /// A composite chain restricted to a great `S^n`.
    Chain {
        chain: ChainName,
        n: usize,
    },
}

impl WitnessId {
    pub fn source_dim(&self) -> usize {
        match *self {
            WitnessId::Identity { n } | WitnessId::Hopf { n, .. } | WitnessId::Chain { n, .. } => n,
            WitnessId::OddFibration { k } => 2 * k + 1,
        }
    }

    pub fn target_dim(&self) -> usize {
        match *self {
            WitnessId::Identity { n } => n,
            WitnessId::Hopf { m, .. } => m,
            WitnessId::OddFibration { k } => 2 * k,
            WitnessId::Chain { chain, .. } => chain.target_dim(),
        }
    }

    /// Stable textual id, e.g. `hopf(m=4)|S7`.
    pub fn label(&self) -> String {
        match *self {
            WitnessId::Identity { n } => format!("identity|S{n}"),
            WitnessId::Hopf { m, n } => format!("hopf(m={m})|S{n}"),
            WitnessId::OddFibration { k } => format!("odd_fibration(k={k})|S{}", 2 * k + 1),
            WitnessId::Chain { chain, n } => format!("{}|S{n}", chain.name()),
        }
    }

    fn rule(&self) -> Rule {
        match self {
            WitnessId::Identity { .. } => Rule::Identity,
            _ => Rule::Witness,
        }
    }
}

/// Bounds `lower ≤ q(n) ≤ upper` with the rules that produced them.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QBound {
    pub n: usize,
    pub lower: usize,
    pub upper: usize,
    pub exact: bool,
    pub witness: Option<WitnessId>,
    pub provenance: Vec<Rule>,
}

/// Computes and caches witnesses; chain maps are built once per engine.
#[derive(Default)]
pub struct BoundsEngine {
    chains: BTreeMap<ChainName, SphereMap>,
    verified: BTreeMap<WitnessId, bool>,
    lowers: Vec<(usize, Vec<Rule>)>,
}

impl BoundsEngine {
    pub fn new() -> Self {
        Self::default()
    }

    fn chain(&mut self, name: ChainName) -> Result<&SphereMap> {
        if let Entry::Vacant(e) = self.chains.entry(name) {
            e.insert(chain_witness(name)?);
        }
        Ok(&self.chains[&name])
    }

    /// Builds the witness map.
    pub fn witness_map(&mut self, id: &WitnessId) -> Result<SphereMap> {
        match *id {
            WitnessId::Identity { n } => Ok(SphereMap::identity(n)),
            WitnessId::Hopf { m, n } => {
                let s = radon_hurwitz(m as u64) as usize;
                let h = clifford_hopf_map(m, s)?;
                if n == m + s - 1 {
                    Ok(h)
                } else {
                    restrict_to_coordinates(&h, &hopf_restriction_coords(m, s, n))
                }
            }
            WitnessId::OddFibration { k } => odd_sphere_fibration(k),
            WitnessId::Chain { chain, n } => {
                let (r, s) = match chain {
                    ChainName::S31ToS16 => (24, 8),
                    ChainName::S47ToS32 => (40, 8),
                };
                let w = self.chain(chain)?;
                if n == chain.source_dim() {
                    Ok(w.clone())
                } else {
                    restrict_to_coordinates(w, &hopf_restriction_coords(r, s, n))
                }
            }
        }
    }

    /// Verifies that the witness is a non-constant sphere map with the advertised dimensions.
    pub fn certify(&mut self, id: &WitnessId) -> Result<bool> {
        if let Some(&ok) = self.verified.get(id) {
            return Ok(ok);
        }
        let map = self.witness_map(id)?;
        let ok = map.source_dim() == id.source_dim()
            && map.target_dim() == id.target_dim()
            && verify_sphere_map(&map).pass
            && !is_constant(&map);
        self.verified.insert(*id, ok);
        Ok(ok)
    }

    fn lower(&mut self, n: usize) -> (usize, Vec<Rule>) {
        while self.lowers.len() < n {
            let k = self.lowers.len() + 1;
            let prev = self.lowers.last().map(|(v, _)| *v).unwrap_or(0);
            let wood = largest_power_of_two(k);
            let even = if k >= 2 { wood + wood % 2 } else { wood };
            let value = wood.max(even).max(prev);
            let mut rules = Vec::new();
            if wood == value {
                rules.push(Rule::Wood);
            }
            if k >= 2 && even == value {
                rules.push(Rule::Even);
            }
            if prev == value {
                rules.push(Rule::Monotone);
            }
            self.lowers.push((value, rules));
        }
        self.lowers[n - 1].clone()
    }

    /// Candidate witnesses for `S^n`, best target first.
    pub fn candidates(n: usize) -> Vec<WitnessId> {
        let mut out = alloc::vec![WitnessId::Identity { n }];
        if let Some(m) = (1..=n).find(|&m| m + radon_hurwitz(m as u64) as usize > n) {
            out.push(WitnessId::Hopf { m, n });
        }
        if n >= 3 && n % 2 == 1 {
            out.push(WitnessId::OddFibration { k: (n - 1) / 2 });
        }
        for chain in [ChainName::S31ToS16, ChainName::S47ToS32] {
            let (r, s) = match chain {
                ChainName::S31ToS16 => (24, 8),
                ChainName::S47ToS32 => (40, 8),
            };
            if n > chain.target_dim() && n < r + s {
                out.push(WitnessId::Chain { chain, n });
            }
        }
        // stable sort keeps the preference identity, Hopf, odd fibration, chain on ties
        out.sort_by_key(WitnessId::target_dim);
        out
    }

    pub fn q_bounds(&mut self, n: usize) -> Result<QBound> {
        if n < 1 {
            return Err(Error::OutOfRange("q(n) needs n >= 1".into()));
        }
        let (lower, mut provenance) = self.lower(n);
        let mut witness = None;
        for cand in Self::candidates(n) {
            if cand.target_dim() < lower {
                return Err(Error::Unverified(format!("witness {} contradicts the lower bound {lower}", cand.label())));
            }
            if self.certify(&cand)? {
                witness = Some(cand);
                break;
            }
        }
        let witness = witness.ok_or_else(|| Error::Unverified(format!("no witness for S^{n}")))?;
        let upper = witness.target_dim();
        provenance.push(witness.rule());
        Ok(QBound { n, lower, upper, exact: lower == upper, witness: Some(witness), provenance })
    }

    pub fn q_group(&mut self, n: usize, group: GroupKind) -> Result<GroupBound> {
        if n < 2 {
            return Err(Error::OutOfRange("matrix-group bounds need n >= 2".into()));
        }
        let base = self.q_bounds(n)?;
        let f = |q: usize| group.transform(q);
        Ok(GroupBound { n, group, lower: f(base.lower), upper: f(base.upper), exact: base.exact, base })
    }

    pub fn m_bound(&mut self, n: usize, field: MField) -> Result<(usize, usize)> {
        if n < 2 {
            return Err(Error::OutOfRange("m_F(n) needs n >= 2".into()));
        }
        let q = self.q_bounds(n)?;
        let f = |q: usize| field.apply(q);
        Ok((f(q.lower), f(q.upper)))
    }

    pub fn table(&mut self, max_n: usize) -> Result<Vec<TableRow>> {
        if max_n < 2 {
            return Err(Error::OutOfRange("table needs max_n >= 2".into()));
        }
        (2..=max_n)
            .map(|n| {
                Ok(TableRow {
                    q: self.q_bounds(n)?,
                    q_so: self.q_group(n, GroupKind::SO)?,
                    q_u: self.q_group(n, GroupKind::U)?,
                    m_r: self.m_bound(n, MField::Real)?,
                    m_c: self.m_bound(n, MField::Complex)?,
                })
            })
            .collect()
    }
}

/// `q_bounds` with a fresh engine.
pub fn q_bounds(n: usize) -> Result<QBound> {
    BoundsEngine::new().q_bounds(n)
}

pub fn q_group(n: usize, group: GroupKind) -> Result<GroupBound> {
    BoundsEngine::new().q_group(n, group)
}

pub fn m_bound(n: usize, field: MField) -> Result<(usize, usize)> {
    BoundsEngine::new().m_bound(n, field)
}

/// Target classes for `q_G(n)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum GroupKind {
    SO,
    U,
    SU,
    /// Real Grassmannian of `k`-planes.
    GrR(usize),
    /// Complex Grassmannian of `k`-planes.
    GrC(usize),
}

impl GroupKind {
    pub fn transform(self, q: usize) -> usize {
        match self {
            GroupKind::SO => 1 + q,
            GroupKind::U | GroupKind::SU => 1 + q / 2,
            GroupKind::GrR(k) => 1 + k.max(q),
            GroupKind::GrC(k) => 1 + k.max(q / 2),
        }
    }

    pub fn label(self) -> String {
        match self {
            GroupKind::SO => "SO".into(),
            GroupKind::U => "U".into(),
            GroupKind::SU => "SU".into(),
            GroupKind::GrR(k) => format!("GrR({k})"),
            GroupKind::GrC(k) => format!("GrC({k})"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupBound {
    pub n: usize,
    pub group: GroupKind,
    pub lower: usize,
    pub upper: usize,
    pub exact: bool,
    pub base: QBound,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum MField {
    Real,
    Complex,
}

impl MField {
    /// `⌊(1 + √(1 + 8q)) / 2⌋` over the reals, `⌊√q⌋` over the complexes.
    pub fn apply(self, q: usize) -> usize {
        match self {
            MField::Real => (1 + 8 * q).sqrt().div_ceil(2),
            MField::Complex => q.sqrt(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TableRow {
    pub q: QBound,
    pub q_so: GroupBound,
    pub q_u: GroupBound,
    pub m_r: (usize, usize),
    pub m_c: (usize, usize),
}
