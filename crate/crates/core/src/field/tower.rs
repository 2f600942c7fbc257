//! Extension levels, their interning, and merging of towers.

use std::collections::HashMap;
use std::hash::{Hash, Hasher};
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::{Arc, LazyLock, Mutex, Weak};

use num_bigint::BigInt;

use super::constructible::{Constructible, Repr};

pub(super) type Level = Arc<LevelNode>;

/// One proper quadratic extension `base(√radicand)`.
pub(super) struct LevelNode {
    pub(super) id: u64,
    pub(super) depth: usize,
    pub(super) base: Option<Level>,
    /// Positive, lies in the chain ending at `base`, not a square there.
    pub(super) radicand: Constructible,
    sqrt_cache: Mutex<HashMap<u32, (BigInt, BigInt)>>,
}

impl LevelNode {
    pub(super) fn cached_sqrt(&self, w: u32) -> Option<(BigInt, BigInt)> {
        self.sqrt_cache.lock().unwrap().get(&w).cloned()
    }

    pub(super) fn store_sqrt(&self, w: u32, bounds: (BigInt, BigInt)) {
        self.sqrt_cache.lock().unwrap().insert(w, bounds);
    }
}

impl std::fmt::Debug for LevelNode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "L{}(depth {}, √{})", self.id, self.depth, self.radicand)
    }
}

static NEXT_ID: AtomicU64 = AtomicU64::new(1);

type InternKey = (u64, u64);

static LEVELS: LazyLock<Mutex<HashMap<InternKey, Vec<Weak<LevelNode>>>>> =
    LazyLock::new(|| Mutex::new(HashMap::new()));

pub(super) fn level_id(level: Option<&Level>) -> u64 {
    level.map_or(0, |l| l.id)
}

pub(super) fn depth(level: Option<&Level>) -> usize {
    level.map_or(0, |l| l.depth)
}

/// The unique level `base(√radicand)`; the caller guarantees properness.
pub(super) fn adjoin(base: Option<&Level>, radicand: Constructible) -> Level {
    let key = (level_id(base), radicand.structural_hash());
    let mut table = LEVELS.lock().unwrap();
    let bucket = table.entry(key).or_default();
    bucket.retain(|w| w.strong_count() > 0);
    for weak in bucket.iter() {
        if let Some(level) = weak.upgrade() {
            if level.radicand.same_repr(&radicand) {
                return level;
            }
        }
    }
    let level = Arc::new(LevelNode {
        id: NEXT_ID.fetch_add(1, Ordering::Relaxed),
        depth: depth(base) + 1,
        base: base.cloned(),
        radicand,
        sqrt_cache: Mutex::new(HashMap::new()),
    });
    bucket.push(Arc::downgrade(&level));
    level
}

/// Whether `low` is `high` or one of its ancestors.
pub(super) fn is_prefix(low: Option<&Level>, high: Option<&Level>) -> bool {
    let Some(low) = low else { return true };
    let mut cur = high;
    while let Some(level) = cur {
        if level.depth < low.depth {
            return false;
        }
        if level.depth == low.depth {
            return Arc::ptr_eq(level, low);
        }
        cur = level.base.as_ref();
    }
    false
}

/// Levels of the chain from depth 1 up to `top`.
pub(super) fn chain(top: Option<&Level>) -> Vec<Level> {
    let mut out = Vec::with_capacity(depth(top));
    let mut cur = top;
    while let Some(level) = cur {
        out.push(level.clone());
        cur = level.base.as_ref();
    }
    out.reverse();
    out
}

/// A shared tower containing two chains, plus the images of the second chain's
/// generators in it.
pub(super) struct Merged {
    pub(super) top: Option<Level>,
    images: HashMap<u64, Constructible>,
}

static MERGES: LazyLock<Mutex<HashMap<(u64, u64), Arc<Merged>>>> =
    LazyLock::new(|| Mutex::new(HashMap::new()));

/// Tower obtained by adjoining, on top of `first`, every radicand of `second` above
/// their common prefix that is not already a square.
pub(super) fn merge(first: &Level, second: &Level) -> Arc<Merged> {
    let key = (first.id, second.id);
    if let Some(hit) = MERGES.lock().unwrap().get(&key) {
        return hit.clone();
    }
    let first_chain = chain(Some(first));
    let second_chain = chain(Some(second));
    let common = first_chain
        .iter()
        .zip(&second_chain)
        .take_while(|(a, b)| Arc::ptr_eq(a, b))
        .count();

    let mut merged = Merged {
        top: Some(first.clone()),
        images: HashMap::new(),
    };
    for level in &second_chain[common..] {
        let radicand = merged.embed(&level.radicand);
        let image = match radicand.sqrt_in(merged.top.as_ref()) {
            Some(root) => root,
            None => {
                let next = adjoin(merged.top.as_ref(), radicand);
                let generator = Constructible::generator(&next);
                merged.top = Some(next);
                generator
            }
        };
        merged.images.insert(level.id, image);
    }
    let merged = Arc::new(merged);
    MERGES.lock().unwrap().insert(key, merged.clone());
    merged
}

impl Merged {
    /// Rewrites a value of the second chain into the merged tower.
    pub(super) fn embed(&self, x: &Constructible) -> Constructible {
        match x.repr() {
            Repr::Rational(_) => x.clone(),
            Repr::Quadratic { level, a, b } => match self.images.get(&level.id) {
                None => x.clone(),
                Some(image) => {
                    let a = self.embed(a);
                    let b = self.embed(b);
                    a.add_chain(&b.mul_chain(image))
                }
            },
        }
    }
}

pub(super) fn hash_parts<T: Hash>(parts: T) -> u64 {
    let mut h = std::collections::hash_map::DefaultHasher::new();
    parts.hash(&mut h);
    h.finish()
}
