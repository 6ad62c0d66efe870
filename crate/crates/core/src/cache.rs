use std::collections::HashMap;
use std::hash::Hash;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::RwLock;

/// Environment variable that caps memoization memory, in bytes.
pub const CACHE_BYTES_ENV: &str = "EARRING_CACHE_BYTES";

pub const DEFAULT_CACHE_BYTES: usize = 256 << 20;

/// A shared byte allowance. Once it is spent, memo tables stop growing;
/// lookups keep working on whatever was stored.
#[derive(Debug)]
pub(crate) struct Budget {
    remaining: AtomicUsize,
}

impl Budget {
    pub(crate) fn new(bytes: usize) -> Self {
        Budget {
            remaining: AtomicUsize::new(bytes),
        }
    }

    fn take(&self, bytes: usize) -> bool {
        self.remaining
            .fetch_update(Ordering::Relaxed, Ordering::Relaxed, |left| left.checked_sub(bytes))
            .is_ok()
    }
}

#[derive(Debug)]
pub(crate) struct Memo<K, V> {
    map: RwLock<HashMap<K, V>>,
}

impl<K: Eq + Hash, V: Clone> Memo<K, V> {
    pub(crate) fn new() -> Self {
        Memo {
            map: RwLock::new(HashMap::new()),
        }
    }

    pub(crate) fn get(&self, key: &K) -> Option<V> {
        self.map.read().expect("memo lock poisoned").get(key).cloned()
    }

    pub(crate) fn insert(&self, key: K, value: V, cost: usize, budget: &Budget) {
        if budget.take(cost) {
            self.map
                .write()
                .expect("memo lock poisoned")
                .insert(key, value);
        }
    }

    pub(crate) fn len(&self) -> usize {
        self.map.read().expect("memo lock poisoned").len()
    }
}
