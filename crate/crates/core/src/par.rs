//! Data-parallel execution helpers.
//!
//! With the `parallel` feature (on by default) batch work fans out over rayon;
//! without it every helper degrades to a plain sequential loop. Results are
//! always collected in input order, so reports are identical either way.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Row count below which matrix kernels stay sequential.
const PAR_ROW_THRESHOLD: usize = 48;

/// Selects how batch operations run.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum Execution {
    Sequential,
    #[default]
    Parallel,
}

impl Execution {
    /// Runs `f`, pinning all nested rayon work to one thread for `Sequential`.
    pub fn install<R: Send>(self, f: impl FnOnce() -> R + Send) -> R {
        match self {
            Execution::Parallel => f(),
            Execution::Sequential => {
                #[cfg(feature = "parallel")]
                {
                    match rayon::ThreadPoolBuilder::new().num_threads(1).build() {
                        Ok(pool) => pool.install(f),
                        Err(_) => f(),
                    }
                }
                #[cfg(not(feature = "parallel"))]
                {
                    f()
                }
            }
        }
    }

    /// Maps `f` over `items`, preserving order.
    pub fn map<T, R, F>(self, items: &[T], f: F) -> Vec<R>
    where
        T: Sync,
        R: Send,
        F: Fn(&T) -> R + Sync + Send,
    {
        match self {
            #[cfg(feature = "parallel")]
            Execution::Parallel => items.par_iter().map(f).collect(),
            _ => self.install(|| items.iter().map(f).collect()),
        }
    }
}

/// Applies `f(row_index, row)` to every `width`-sized row of `data`.
pub(crate) fn for_each_row<T, F>(data: &mut [T], width: usize, f: F)
where
    T: Send,
    F: Fn(usize, &mut [T]) + Sync + Send,
{
    if width == 0 {
        return;
    }
    #[cfg(feature = "parallel")]
    if data.len() / width >= PAR_ROW_THRESHOLD {
        data.par_chunks_mut(width)
            .enumerate()
            .for_each(|(i, row)| f(i, row));
        return;
    }
    let _ = PAR_ROW_THRESHOLD;
    data.chunks_mut(width).enumerate().for_each(|(i, row)| f(i, row));
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn map_preserves_order_in_both_modes() {
        let xs: Vec<u64> = (0..1000).collect();
        let seq = Execution::Sequential.map(&xs, |x| x * x);
        let par = Execution::Parallel.map(&xs, |x| x * x);
        assert_eq!(seq, par);
        assert_eq!(seq[999], 999 * 999);
    }

    #[test]
    fn rows_visit_every_index() {
        let mut data = vec![0usize; 100 * 3];
        for_each_row(&mut data, 3, |i, row| row.iter_mut().for_each(|x| *x = i));
        assert!(data.chunks(3).enumerate().all(|(i, r)| r.iter().all(|&x| x == i)));
    }
}
