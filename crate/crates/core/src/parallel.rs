/// Map `f` over `items`, keeping input order in the output. `threads == 1`
/// (or a build without the `parallel` feature) runs sequentially; `0` uses
/// the global rayon pool; any other value a dedicated pool of that size.
pub(crate) fn map_ordered<T, R, F>(items: &[T], threads: usize, f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync,
{
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        if threads != 1 {
            let go = || items.par_iter().map(&f).collect();
            if threads == 0 {
                return go();
            }
            if let Ok(pool) = rayon::ThreadPoolBuilder::new().num_threads(threads).build() {
                return pool.install(go);
            }
        }
    }
    let _ = threads;
    items.iter().map(f).collect()
}

#[cfg(test)]
mod tests {
    #[test]
    fn order_is_kept() {
        let xs: Vec<u64> = (0..1000).collect();
        for t in [0, 1, 4] {
            let ys = super::map_ordered(&xs, t, |x| x * x);
            assert!(ys.iter().enumerate().all(|(i, &y)| y == (i * i) as u64));
        }
    }
}
