//! Synthetic graph generation.
//!
//! Facts are laid down as *chains*: a run of consecutive, non-overlapping
//! episodes of one relation around one anchor entity. For relations flagged
//! functional in time the anchor is the object and the chain rotates through
//! subjects (one holder at a time); otherwise the anchor is the subject and
//! the chain rotates through objects. Chains occasionally revisit an earlier
//! partner, which produces triples with several episodes.

use std::collections::{HashMap, HashSet};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::GenError;
use crate::seed::derive_seed;
use crate::tkg::{EntityId, Fact, Interval, RelationId, Tkg};

const MIN_DURATION: i64 = 1;
const MAX_DURATION: i64 = 12;
const MAX_GAP: i64 = 4;
const MAX_CHAIN: usize = 6;
const REVISIT_PROBABILITY: f64 = 0.2;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphParams {
    pub n_entities: usize,
    pub n_relations: usize,
    pub n_facts: usize,
    pub time_range: Interval,
    pub max_episodes_per_triple: usize,
    pub seed: u64,
}

impl Default for GraphParams {
    fn default() -> Self {
        Self {
            n_entities: 60,
            n_relations: 8,
            n_facts: 300,
            time_range: Interval::new(1900, 2024).expect("valid range"),
            max_episodes_per_triple: 3,
            seed: 0,
        }
    }
}

impl GraphParams {
    pub fn validate(&self) -> Result<(), GenError> {
        let bad = |m: &str| Err(GenError::InvalidParams(m.to_string()));
        if self.n_entities < 2 {
            return bad("n_entities must be at least 2");
        }
        if self.n_relations < 1 {
            return bad("n_relations must be at least 1");
        }
        if self.n_facts < 1 {
            return bad("n_facts must be at least 1");
        }
        if self.max_episodes_per_triple < 1 {
            return bad("max_episodes_per_triple must be at least 1");
        }
        if self.time_range.duration() < MIN_DURATION {
            return bad("time_range must span at least one year");
        }
        Ok(())
    }
}

struct Builder {
    facts: Vec<Fact>,
    seen: HashSet<Fact>,
    /// Episodes per (s, r, o).
    triples: HashMap<(usize, usize, usize), Vec<Interval>>,
    /// Occupancy of functional (r, o) slots.
    slots: HashMap<(usize, usize), Vec<Interval>>,
    entities: Vec<EntityId>,
    relations: Vec<RelationId>,
    max_eps: usize,
}

impl Builder {
    fn can_place(&self, s: usize, r: usize, o: usize, iv: Interval, functional: bool) -> bool {
        if let Some(eps) = self.triples.get(&(s, r, o)) {
            // Episodes of one triple never touch, so each stays distinguishable.
            if eps.len() >= self.max_eps || eps.iter().any(|e| e.overlaps(&iv)) {
                return false;
            }
        }
        if functional {
            if let Some(held) = self.slots.get(&(r, o)) {
                let positive_overlap =
                    |e: &Interval| e.start().max(iv.start()) < e.end().min(iv.end());
                if held.iter().any(positive_overlap) {
                    return false;
                }
            }
        }
        true
    }

    fn place(&mut self, s: usize, r: usize, o: usize, iv: Interval, functional: bool) -> bool {
        let fact = Fact::new(
            self.entities[s].clone(),
            self.relations[r].clone(),
            self.entities[o].clone(),
            iv,
        );
        if !self.seen.insert(fact.clone()) {
            return false;
        }
        self.triples.entry((s, r, o)).or_default().push(iv);
        if functional {
            self.slots.entry((r, o)).or_default().push(iv);
        }
        self.facts.push(fact);
        true
    }
}

pub fn generate_graph(p: &GraphParams) -> Result<Tkg, GenError> {
    p.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(p.seed, "graph"));
    let entities: Vec<EntityId> = (1..=p.n_entities)
        .map(|i| EntityId::new(format!("E{i}")).expect("generated ids are valid"))
        .collect();
    let relations: Vec<RelationId> = (1..=p.n_relations)
        .map(|i| RelationId::new(format!("R{i}")).expect("generated ids are valid"))
        .collect();
    // R1 is always functional so single-holder questions have material.
    let functional: Vec<bool> = (0..p.n_relations)
        .map(|i| i == 0 || rng.gen_bool(0.5))
        .collect();

    let mut b = Builder {
        facts: Vec::with_capacity(p.n_facts),
        seen: HashSet::new(),
        triples: HashMap::new(),
        slots: HashMap::new(),
        entities,
        relations,
        max_eps: p.max_episodes_per_triple,
    };

    let (lo, hi) = (p.time_range.start(), p.time_range.end());
    let budget = 200 + 50 * p.n_facts;
    let mut attempts = 0;
    while b.facts.len() < p.n_facts {
        attempts += 1;
        if attempts > budget {
            return Err(GenError::InfeasibleParams(format!(
                "placed only {} of {} facts",
                b.facts.len(),
                p.n_facts
            )));
        }
        let r = rng.gen_range(0..p.n_relations);
        let anchor = rng.gen_range(0..p.n_entities);
        let chain_len = rng.gen_range(1..=MAX_CHAIN);
        let span = hi - lo;
        let mut t = lo + rng.gen_range(0..=span * 3 / 4);
        let mut partners: Vec<usize> = Vec::new();
        for _ in 0..chain_len {
            if b.facts.len() >= p.n_facts {
                break;
            }
            let d = rng.gen_range(MIN_DURATION..=MAX_DURATION);
            if t + d > hi {
                break;
            }
            let iv = Interval::new(t, t + d).expect("d is positive");
            let partner = if !partners.is_empty() && rng.gen_bool(REVISIT_PROBABILITY) {
                partners[rng.gen_range(0..partners.len())]
            } else {
                let mut e = rng.gen_range(0..p.n_entities - 1);
                if e >= anchor {
                    e += 1;
                }
                e
            };
            let (s, o) = if functional[r] {
                (partner, anchor)
            } else {
                (anchor, partner)
            };
            if b.can_place(s, r, o, iv, functional[r]) && b.place(s, r, o, iv, functional[r]) {
                partners.push(partner);
            }
            t += d + rng.gen_range(0..=MAX_GAP);
        }
    }

    let mut facts = b.facts;
    facts.shuffle(&mut rng);
    Ok(Tkg::build(facts).expect("builder never emits duplicates"))
}
