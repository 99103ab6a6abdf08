use super::{CountingError, Pair};
use crate::automata::MultiTrackDfa;
use crate::numeration::digits_msd;

/// `#{i : a accepts (i, n)}`, counted on canonical representations: an `i`
/// longer than `n` is read against zero-padded `n` with a nonzero leading
/// digit, a shorter one is zero-padded to the length of `n`.
pub fn count_direct(a: &MultiTrackDfa, n: u64) -> Result<u128, CountingError> {
    let p = Pair::new(a)?;
    let k = a.base();
    let states = a.num_states();
    let digits = digits_msd(n, k);

    // tail[q]: accepted digit strings for i of length |n| read from q against n.
    let mut tail: Vec<u128> = (0..states).map(|q| u128::from(a.is_accepting(q))).collect();
    for &d in digits.iter().rev() {
        let mut prev = vec![0u128; states];
        for (q, slot) in prev.iter_mut().enumerate() {
            for e in 0..k {
                *slot = slot.checked_add(tail[a.next(q, p.symbol(e, d))]).ok_or(CountingError::Overflow)?;
            }
        }
        tail = prev;
    }
    let mut total = tail[a.initial()];

    // Leading columns (e, 0) with the first e nonzero: weights of paths
    // through the zero-column graph, restricted to states that still reach
    // a nonzero tail.
    let zero_succ = |q: usize| (0..k).map(move |e| (e, a.next(q, p.symbol(e, 0))));
    let mut reach = vec![false; states];
    let mut stack = Vec::new();
    for (e, t) in zero_succ(a.initial()) {
        if e != 0 && !reach[t] {
            reach[t] = true;
            stack.push(t);
        }
    }
    while let Some(q) = stack.pop() {
        for (_, t) in zero_succ(q) {
            if !reach[t] {
                reach[t] = true;
                stack.push(t);
            }
        }
    }
    let mut useful: Vec<bool> = (0..states).map(|q| tail[q] > 0).collect();
    let mut changed = true;
    while changed {
        changed = false;
        for q in 0..states {
            if !useful[q] && zero_succ(q).any(|(_, t)| useful[t]) {
                useful[q] = true;
                changed = true;
            }
        }
    }
    let live: Vec<bool> = (0..states).map(|q| reach[q] && useful[q]).collect();

    // Topological order of the live subgraph; a cycle means infinitely many i.
    let mut indeg = vec![0usize; states];
    for q in (0..states).filter(|&q| live[q]) {
        for (_, t) in zero_succ(q) {
            if live[t] {
                indeg[t] += 1;
            }
        }
    }
    let mut queue: Vec<usize> = (0..states).filter(|&q| live[q] && indeg[q] == 0).collect();
    let mut topo = Vec::new();
    while let Some(q) = queue.pop() {
        topo.push(q);
        for (_, t) in zero_succ(q) {
            if live[t] {
                indeg[t] -= 1;
                if indeg[t] == 0 {
                    queue.push(t);
                }
            }
        }
    }
    if topo.len() < live.iter().filter(|&&l| l).count() {
        return Err(CountingError::InfiniteCount { n });
    }
    let mut weight = vec![0u128; states];
    for (e, t) in zero_succ(a.initial()) {
        if e != 0 && live[t] {
            weight[t] += 1;
        }
    }
    for &q in &topo {
        let w = weight[q];
        if w == 0 {
            continue;
        }
        let contrib = w.checked_mul(tail[q]).ok_or(CountingError::Overflow)?;
        total = total.checked_add(contrib).ok_or(CountingError::Overflow)?;
        for (_, t) in zero_succ(q) {
            if live[t] {
                weight[t] = weight[t].checked_add(w).ok_or(CountingError::Overflow)?;
            }
        }
    }
    Ok(total)
}
