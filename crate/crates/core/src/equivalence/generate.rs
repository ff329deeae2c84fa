//! Random and exhaustive term generation.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::CheckError;
use crate::syntax::{CompensableTerm, Event, StandardTerm, Term, TermKind};

/// Relative constructor weights. Only user-term constructors appear, so the
/// null process and the auxiliary construct are never generated.
#[derive(Debug, Clone, PartialEq)]
pub struct Weights {
    pub atom: f64,
    pub skip: f64,
    pub throw: f64,
    pub yield_: f64,
    pub seq: f64,
    pub choice: f64,
    pub par: f64,
    pub interrupt: f64,
    pub block: f64,
    pub comp_seq: f64,
    pub comp_choice: f64,
    pub comp_par: f64,
}

impl Default for Weights {
    fn default() -> Self {
        Weights {
            atom: 1.0,
            skip: 1.0,
            throw: 1.0,
            yield_: 1.0,
            seq: 1.0,
            choice: 1.0,
            par: 1.0,
            interrupt: 1.0,
            block: 1.0,
            comp_seq: 1.0,
            comp_choice: 1.0,
            comp_par: 1.0,
        }
    }
}

impl Weights {
    fn all(&self) -> [f64; 12] {
        [
            self.atom,
            self.skip,
            self.throw,
            self.yield_,
            self.seq,
            self.choice,
            self.par,
            self.interrupt,
            self.block,
            self.comp_seq,
            self.comp_choice,
            self.comp_par,
        ]
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GenConfig {
    pub seed: u64,
    pub max_depth: usize,
    pub alphabet: Vec<Event>,
    pub kind: TermKind,
    pub weights: Weights,
}

impl GenConfig {
    pub fn new(seed: u64, max_depth: usize, alphabet: Vec<Event>, kind: TermKind) -> Self {
        GenConfig { seed, max_depth, alphabet, kind, weights: Weights::default() }
    }

    pub fn validate(&self) -> Result<(), CheckError> {
        if self.max_depth < 1 {
            return Err(CheckError::Config("max_depth must be at least 1".into()));
        }
        if self.alphabet.is_empty() {
            return Err(CheckError::Config("alphabet must be nonempty".into()));
        }
        if self.weights.all().iter().any(|w| !(w.is_finite() && *w > 0.0)) {
            return Err(CheckError::Config("weights must be positive".into()));
        }
        Ok(())
    }
}

fn pick<R: Rng>(rng: &mut R, weights: &[f64]) -> usize {
    let total: f64 = weights.iter().sum();
    let mut x = rng.gen::<f64>() * total;
    for (i, w) in weights.iter().enumerate() {
        if x < *w {
            return i;
        }
        x -= w;
    }
    weights.len() - 1
}

/// Random term generator over a seeded ChaCha stream.
pub struct TermGenerator<'a, R> {
    cfg: &'a GenConfig,
    rng: R,
}

impl<'a> TermGenerator<'a, ChaCha8Rng> {
    pub fn new(cfg: &'a GenConfig) -> Result<Self, CheckError> {
        cfg.validate()?;
        Ok(TermGenerator { cfg, rng: ChaCha8Rng::seed_from_u64(cfg.seed) })
    }
}

impl<R: Rng> TermGenerator<'_, R> {
    /// Leaf probability grows with the level so deep spines stay rare.
    fn leaf_now(&mut self, budget: usize) -> bool {
        if budget <= 1 {
            return true;
        }
        let level = self.cfg.max_depth - budget;
        let p = (level + 1) as f64 / (self.cfg.max_depth + 1) as f64;
        self.rng.gen::<f64>() < p
    }

    pub fn standard(&mut self) -> StandardTerm {
        self.standard_within(self.cfg.max_depth)
    }

    pub fn compensable(&mut self) -> CompensableTerm {
        self.compensable_within(self.cfg.max_depth)
    }

    pub fn term(&mut self, kind: TermKind) -> Term {
        match kind {
            TermKind::Standard => Term::Standard(self.standard()),
            TermKind::Compensable => Term::Compensable(self.compensable()),
        }
    }

    fn standard_within(&mut self, budget: usize) -> StandardTerm {
        let w = &self.cfg.weights;
        if self.leaf_now(budget) {
            return match pick(&mut self.rng, &[w.atom, w.skip, w.throw, w.yield_]) {
                0 => {
                    let i = self.rng.gen_range(0..self.cfg.alphabet.len());
                    StandardTerm::Atom(self.cfg.alphabet[i].clone())
                }
                1 => StandardTerm::Skip,
                2 => StandardTerm::Throw,
                _ => StandardTerm::Yield,
            };
        }
        let choice = pick(&mut self.rng, &[w.seq, w.choice, w.par, w.interrupt, w.block]);
        if choice == 4 {
            return StandardTerm::block(self.compensable_within(budget - 1));
        }
        let p = self.standard_within(budget - 1);
        let q = self.standard_within(budget - 1);
        match choice {
            0 => StandardTerm::seq(p, q),
            1 => StandardTerm::choice(p, q),
            2 => StandardTerm::par(p, q),
            _ => StandardTerm::interrupt(p, q),
        }
    }

    fn compensable_within(&mut self, budget: usize) -> CompensableTerm {
        if self.leaf_now(budget) {
            let p = self.standard_within(budget);
            let q = self.standard_within(budget);
            return CompensableTerm::pair(p, q);
        }
        let w = &self.cfg.weights;
        let choice = pick(&mut self.rng, &[w.comp_seq, w.comp_choice, w.comp_par]);
        let pp = self.compensable_within(budget - 1);
        let qq = self.compensable_within(budget - 1);
        match choice {
            0 => CompensableTerm::seq(pp, qq),
            1 => CompensableTerm::choice(pp, qq),
            _ => CompensableTerm::par(pp, qq),
        }
    }
}

/// A term drawn deterministically from `cfg.seed`.
pub fn gen_term(cfg: &GenConfig) -> Result<Term, CheckError> {
    Ok(TermGenerator::new(cfg)?.term(cfg.kind))
}

/// Exhaustive enumeration by number of operator nodes. Leaves and
/// compensation pairs count zero; every other constructor counts one.
pub struct Enumerator {
    leaves: Vec<Arc<StandardTerm>>,
    /// Bound on the operator count of each compensation pair operand.
    pair_operand_ops: Option<usize>,
    standard: Vec<Vec<Arc<StandardTerm>>>,
    compensable: Vec<Vec<Arc<CompensableTerm>>>,
}

impl Enumerator {
    pub fn new(alphabet: &[Event]) -> Self {
        let mut leaves: Vec<Arc<StandardTerm>> =
            alphabet.iter().map(|e| Arc::new(StandardTerm::Atom(e.clone()))).collect();
        leaves.extend(
            [StandardTerm::Skip, StandardTerm::Throw, StandardTerm::Yield].into_iter().map(Arc::new),
        );
        Enumerator { leaves, pair_operand_ops: None, standard: Vec::new(), compensable: Vec::new() }
    }

    pub fn with_pair_operand_ops(mut self, bound: usize) -> Self {
        self.pair_operand_ops = Some(bound);
        self
    }

    // Level k of standard terms needs compensable level k - 1, and level k
    // of compensable terms needs standard level k. Levels are built only as
    // far as asked, since the next compensable level dwarfs the rest.
    fn fill_standard(&mut self, ops: usize) {
        while self.standard.len() <= ops {
            let k = self.standard.len();
            if k > 0 {
                self.fill_compensable(k - 1);
            }
            let level = self.standard_level(k);
            self.standard.push(level);
        }
    }

    fn fill_compensable(&mut self, ops: usize) {
        while self.compensable.len() <= ops {
            let k = self.compensable.len();
            self.fill_standard(k);
            let level = self.compensable_level(k);
            self.compensable.push(level);
        }
    }

    fn standard_level(&self, k: usize) -> Vec<Arc<StandardTerm>> {
        if k == 0 {
            return self.leaves.clone();
        }
        type Ctor = fn(Arc<StandardTerm>, Arc<StandardTerm>) -> StandardTerm;
        let ctors: [Ctor; 4] =
            [StandardTerm::Seq, StandardTerm::Choice, StandardTerm::Par, StandardTerm::Interrupt];
        let mut out = Vec::new();
        for ctor in ctors {
            for i in 0..k {
                for l in &self.standard[i] {
                    for r in &self.standard[k - 1 - i] {
                        out.push(Arc::new(ctor(l.clone(), r.clone())));
                    }
                }
            }
        }
        out.extend(self.compensable[k - 1].iter().map(|c| Arc::new(StandardTerm::Block(c.clone()))));
        out
    }

    fn compensable_level(&self, k: usize) -> Vec<Arc<CompensableTerm>> {
        let mut out = Vec::new();
        let bound = self.pair_operand_ops.unwrap_or(usize::MAX);
        for i in 0..=k {
            if i > bound || k - i > bound {
                continue;
            }
            for l in &self.standard[i] {
                for r in &self.standard[k - i] {
                    out.push(Arc::new(CompensableTerm::Pair(l.clone(), r.clone())));
                }
            }
        }
        if k > 0 {
            type Ctor = fn(Arc<CompensableTerm>, Arc<CompensableTerm>) -> CompensableTerm;
            let ctors: [Ctor; 3] =
                [CompensableTerm::Seq, CompensableTerm::Choice, CompensableTerm::Par];
            for ctor in ctors {
                for i in 0..k {
                    for l in &self.compensable[i] {
                        for r in &self.compensable[k - 1 - i] {
                            out.push(Arc::new(ctor(l.clone(), r.clone())));
                        }
                    }
                }
            }
        }
        out
    }

    /// Standard terms with exactly `ops` operator nodes.
    pub fn standard_exact(&mut self, ops: usize) -> &[Arc<StandardTerm>] {
        self.fill_standard(ops);
        &self.standard[ops]
    }

    pub fn compensable_exact(&mut self, ops: usize) -> &[Arc<CompensableTerm>] {
        self.fill_compensable(ops);
        &self.compensable[ops]
    }

    /// All terms of `kind` with at most `max_ops` operator nodes, by
    /// increasing operator count.
    pub fn up_to(&mut self, max_ops: usize, kind: TermKind) -> Vec<Term> {
        match kind {
            TermKind::Standard => self.fill_standard(max_ops),
            TermKind::Compensable => self.fill_compensable(max_ops),
        }
        match kind {
            TermKind::Standard => self.standard[..=max_ops]
                .iter()
                .flatten()
                .map(|t| Term::Standard((**t).clone()))
                .collect(),
            TermKind::Compensable => self.compensable[..=max_ops]
                .iter()
                .flatten()
                .map(|t| Term::Compensable((**t).clone()))
                .collect(),
        }
    }
}

pub fn enumerate_terms(max_ops: usize, alphabet: &[Event], kind: TermKind) -> Vec<Term> {
    Enumerator::new(alphabet).up_to(max_ops, kind)
}

#[cfg(test)]
mod tests {
    use std::collections::HashSet;

    use super::*;
    use crate::syntax::validate_user_term;

    fn alphabet(names: &[&str]) -> Vec<Event> {
        names.iter().map(|n| Event::new(n).unwrap()).collect()
    }

    #[test]
    fn depth_one_is_a_leaf() {
        let cfg = GenConfig::new(1, 1, alphabet(&["a"]), TermKind::Standard);
        let t = gen_term(&cfg).unwrap();
        assert!(t.as_standard().unwrap().is_leaf());
    }

    #[test]
    fn deterministic() {
        let cfg = GenConfig::new(7, 5, alphabet(&["a", "b"]), TermKind::Compensable);
        assert_eq!(gen_term(&cfg).unwrap(), gen_term(&cfg).unwrap());
    }

    #[test]
    fn generated_terms_are_user_terms_within_depth() {
        for seed in 0..300 {
            for kind in [TermKind::Standard, TermKind::Compensable] {
                let cfg = GenConfig::new(seed, 4, alphabet(&["a", "b"]), kind);
                let t = gen_term(&cfg).unwrap();
                assert!(validate_user_term(&t, None).is_empty());
                assert!(t.depth() <= 4, "{t}");
            }
        }
    }

    #[test]
    fn config_validation() {
        let mut cfg = GenConfig::new(1, 0, alphabet(&["a"]), TermKind::Standard);
        assert!(gen_term(&cfg).is_err());
        cfg.max_depth = 2;
        cfg.alphabet.clear();
        assert!(gen_term(&cfg).is_err());
        cfg.alphabet = alphabet(&["a"]);
        cfg.weights.par = 0.0;
        assert!(gen_term(&cfg).is_err());
    }

    #[test]
    fn leaves_only() {
        let terms = enumerate_terms(0, &alphabet(&["a"]), TermKind::Standard);
        let text: Vec<String> = terms.iter().map(|t| t.to_string()).collect();
        assert_eq!(text, ["a", "SKIP", "THROW", "YIELD"]);
    }

    #[test]
    fn one_operator_count() {
        // 4 leaves squared for each of 4 binary operators, plus a block
        // around each of the 16 pairs of leaves.
        let mut e = Enumerator::new(&alphabet(&["a"]));
        assert_eq!(e.standard_exact(1).len(), 4 * 4 * 4 + 16);
        assert_eq!(enumerate_terms(1, &alphabet(&["a"]), TermKind::Standard).len(), 4 + 80);
    }

    #[test]
    fn no_duplicates_and_exact_counts() {
        for kind in [TermKind::Standard, TermKind::Compensable] {
            let terms = enumerate_terms(2, &alphabet(&["a"]), kind);
            let unique: HashSet<&Term> = terms.iter().collect();
            assert_eq!(unique.len(), terms.len());
            assert!(terms.iter().all(|t| t.operator_count() <= 2));
            assert!(terms.windows(2).all(|w| w[0].operator_count() <= w[1].operator_count()));
        }
    }

    #[test]
    fn pair_operand_bound() {
        let mut e = Enumerator::new(&alphabet(&["a"])).with_pair_operand_ops(0);
        for t in e.up_to(2, TermKind::Compensable) {
            fn ok(t: &CompensableTerm) -> bool {
                match t {
                    CompensableTerm::Pair(p, q) => p.operator_count() == 0 && q.operator_count() == 0,
                    CompensableTerm::Seq(p, q)
                    | CompensableTerm::Choice(p, q)
                    | CompensableTerm::Par(p, q) => ok(p) && ok(q),
                    CompensableTerm::Aux(..) => false,
                }
            }
            assert!(ok(t.as_compensable().unwrap()), "{t}");
        }
    }
}
