//! Block map/reduce used by the torus and oracle enumerations: data-parallel
//! under the `parallel` feature, sequential otherwise. The reductions in
//! this crate are exact and associative, so both paths give identical
//! results; the sequential path also stays available for benchmarking.

/// Sequential reference path, always available.
pub fn map_reduce_seq<T, M, I, C>(blocks: usize, map: M, identity: I, combine: C) -> T
where
    M: Fn(usize) -> T,
    I: Fn() -> T,
    C: Fn(T, T) -> T,
{
    let mut acc = identity();
    for i in 0..blocks {
        acc = combine(acc, map(i));
    }
    acc
}

#[cfg(feature = "parallel")]
pub fn map_reduce<T, M, I, C>(blocks: usize, map: M, identity: I, combine: C) -> T
where
    M: Fn(usize) -> T + Sync + Send,
    I: Fn() -> T + Sync + Send,
    C: Fn(T, T) -> T + Sync + Send,
    T: Send,
{
    use rayon::prelude::*;
    (0..blocks).into_par_iter().map(map).reduce(identity, combine)
}

#[cfg(not(feature = "parallel"))]
pub fn map_reduce<T, M, I, C>(blocks: usize, map: M, identity: I, combine: C) -> T
where
    M: Fn(usize) -> T,
    I: Fn() -> T,
    C: Fn(T, T) -> T,
{
    map_reduce_seq(blocks, map, identity, combine)
}
