//! Operation counters used by unit tests to check kernel costs. They compile
//! to nothing outside `cfg(test)`.

#[cfg(test)]
use std::cell::Cell;

#[cfg(test)]
thread_local! {
    static DIVISIONS: Cell<usize> = const { Cell::new(0) };
    static KERNEL_CALLS: Cell<usize> = const { Cell::new(0) };
}

#[inline(always)]
pub(crate) fn divisions(_n: usize) {
    #[cfg(test)]
    DIVISIONS.with(|c| c.set(c.get() + _n));
}

#[inline(always)]
pub(crate) fn kernel_call() {
    #[cfg(test)]
    KERNEL_CALLS.with(|c| c.set(c.get() + 1));
}

#[cfg(test)]
pub(crate) fn reset() {
    DIVISIONS.with(|c| c.set(0));
    KERNEL_CALLS.with(|c| c.set(0));
}

#[cfg(test)]
pub(crate) fn division_count() -> usize {
    DIVISIONS.with(|c| c.get())
}

#[cfg(test)]
pub(crate) fn kernel_call_count() -> usize {
    KERNEL_CALLS.with(|c| c.get())
}
