use std::collections::BTreeMap;
use std::fmt;
use std::sync::{Arc, Mutex};

type LevelFn<T> = Arc<dyn Fn(usize) -> Vec<T> + Send + Sync>;

/// A level-indexed family of finite sets, realized on demand. Each level is
/// computed at most once and then shared.
pub struct GradedCarrier<T> {
    f: LevelFn<T>,
    memo: Arc<Mutex<BTreeMap<usize, Arc<Vec<T>>>>>,
}

impl<T> Clone for GradedCarrier<T> {
    fn clone(&self) -> Self {
        GradedCarrier {
            f: self.f.clone(),
            memo: self.memo.clone(),
        }
    }
}

impl<T: fmt::Debug> fmt::Debug for GradedCarrier<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let memo = self.memo.lock().expect("carrier memo poisoned");
        f.debug_map().entries(memo.iter()).finish()
    }
}

impl<T: Clone + PartialEq + Send + Sync + 'static> GradedCarrier<T> {
    /// `f(n)` lists level `n`; it must be deterministic and duplicate-free.
    pub fn from_fn(f: impl Fn(usize) -> Vec<T> + Send + Sync + 'static) -> Self {
        GradedCarrier {
            f: Arc::new(f),
            memo: Arc::new(Mutex::new(BTreeMap::new())),
        }
    }

    /// Explicit levels `0..levels.len()`, empty above.
    pub fn from_levels(levels: Vec<Vec<T>>) -> Self {
        Self::from_fn(move |n| levels.get(n).cloned().unwrap_or_default())
    }

    pub fn at_level(&self, n: usize) -> Arc<Vec<T>> {
        let mut memo = self.memo.lock().expect("carrier memo poisoned");
        memo.entry(n)
            .or_insert_with(|| Arc::new((self.f)(n)))
            .clone()
    }

    /// `A` at level 0, empty elsewhere.
    pub fn up(a: Vec<T>) -> Self {
        Self::from_fn(move |n| if n == 0 { a.clone() } else { Vec::new() })
    }

    /// The level-0 set.
    pub fn down(&self) -> Vec<T> {
        self.at_level(0).to_vec()
    }

    /// Shifted up one level: empty at 0, `X(n)` at `n + 1`.
    pub fn later(&self) -> Self {
        let inner = self.clone();
        Self::from_fn(move |n| match n {
            0 => Vec::new(),
            n => inner.at_level(n - 1).to_vec(),
        })
    }

    /// Shifted down one level: `X(n + 1)` at `n`.
    pub fn earlier(&self) -> Self {
        let inner = self.clone();
        Self::from_fn(move |n| inner.at_level(n + 1).to_vec())
    }

    /// Empty above level 0.
    pub fn is_truncated_up_to(&self, max_level: usize) -> bool {
        (1..=max_level).all(|n| self.at_level(n).is_empty())
    }
}

/// One summand `X(left_level) × Y(right_level)` of the Day tensor at level
/// `left_level + right_level`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DayPair<X, Y> {
    pub left_level: usize,
    pub right_level: usize,
    pub left: X,
    pub right: Y,
}

impl<X, Y> DayPair<X, Y> {
    pub fn level(&self) -> usize {
        self.left_level + self.right_level
    }
}

impl<X: fmt::Display, Y: fmt::Display> fmt::Display for DayPair<X, Y> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "<{}@{}, {}@{}>",
            self.left, self.left_level, self.right, self.right_level
        )
    }
}
