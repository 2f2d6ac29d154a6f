//! Thread pool sized by `SPHEREMAP_THREADS`.

use std::sync::OnceLock;

use rayon::ThreadPool;

pub const THREADS_VAR: &str = "SPHEREMAP_THREADS";

/// Parses the thread cap; unset, empty, zero or malformed values mean "use the default".
pub fn thread_cap(value: Option<&str>) -> Option<usize> {
    value.and_then(|v| v.trim().parse::<usize>().ok()).filter(|&n| n > 0)
}

pub fn pool() -> &'static ThreadPool {
    static POOL: OnceLock<ThreadPool> = OnceLock::new();
    POOL.get_or_init(|| {
        let mut b = rayon::ThreadPoolBuilder::new();
        if let Some(n) = thread_cap(std::env::var(THREADS_VAR).ok().as_deref()) {
            b = b.num_threads(n);
        }
        b.build().expect("thread pool")
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn caps() {
        assert_eq!(thread_cap(None), None);
        assert_eq!(thread_cap(Some("4")), Some(4));
        assert_eq!(thread_cap(Some("0")), None);
        assert_eq!(thread_cap(Some("many")), None);
    }
}
