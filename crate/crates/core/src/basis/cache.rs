//! Process-wide memo table for basis polynomials.

use std::collections::HashMap;
use std::sync::{Arc, OnceLock, RwLock};

use super::Family;
use crate::perm::Permutation;
use crate::poly::Polynomial;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub(super) struct Key {
    pub w: Permutation,
    pub family: Family,
    pub double: bool,
}

type Table = RwLock<HashMap<Key, Arc<Polynomial>>>;

fn table() -> &'static Table {
    static TABLE: OnceLock<Table> = OnceLock::new();
    TABLE.get_or_init(Default::default)
}

pub(super) fn get(key: &Key) -> Option<Arc<Polynomial>> {
    table().read().expect("cache poisoned").get(key).cloned()
}

pub(super) fn put(key: Key, value: Arc<Polynomial>) {
    table().write().expect("cache poisoned").insert(key, value);
}

pub(super) fn clear() {
    table().write().expect("cache poisoned").clear();
}
