pub mod fourier;
pub mod labelcover;
pub mod pcsp;
pub mod ptf;
pub mod pullback;
pub mod shapley;

/// Coordinates as `0 2 5`.
pub(crate) fn join<T: ToString>(items: &[T]) -> String {
    items.iter().map(ToString::to_string).collect::<Vec<_>>().join(" ")
}
