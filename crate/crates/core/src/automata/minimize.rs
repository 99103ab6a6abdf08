//! Hopcroft partition refinement followed by breadth-first renumbering.

use super::MultiTrackDfa;

/// Blocks stored contiguously in `elems`; marked members are moved to the
/// front of their block so a split is a pointer move.
struct Partition {
    elems: Vec<usize>,
    loc: Vec<usize>,
    block_of: Vec<usize>,
    start: Vec<usize>,
    end: Vec<usize>,
    marked: Vec<usize>,
}

impl Partition {
    fn new(initial: &[Vec<usize>], n: usize) -> Self {
        let mut p = Partition {
            elems: Vec::with_capacity(n),
            loc: vec![0; n],
            block_of: vec![0; n],
            start: Vec::new(),
            end: Vec::new(),
            marked: Vec::new(),
        };
        for block in initial.iter().filter(|b| !b.is_empty()) {
            let b = p.start.len();
            p.start.push(p.elems.len());
            for &e in block {
                p.loc[e] = p.elems.len();
                p.block_of[e] = b;
                p.elems.push(e);
            }
            p.end.push(p.elems.len());
            p.marked.push(0);
        }
        p
    }

    fn blocks(&self) -> usize {
        self.start.len()
    }

    fn size(&self, b: usize) -> usize {
        self.end[b] - self.start[b]
    }

    fn members(&self, b: usize) -> &[usize] {
        &self.elems[self.start[b]..self.end[b]]
    }

    fn mark(&mut self, e: usize) {
        let b = self.block_of[e];
        let pos = self.loc[e];
        let m = self.start[b] + self.marked[b];
        if pos < m {
            return;
        }
        let other = self.elems[m];
        self.elems.swap(pos, m);
        self.loc[other] = pos;
        self.loc[e] = m;
        self.marked[b] += 1;
    }

    /// Split off the marked part of `b` as a new block.
    fn split(&mut self, b: usize) -> Option<usize> {
        let m = self.marked[b];
        self.marked[b] = 0;
        if m == 0 || m == self.size(b) {
            return None;
        }
        let nb = self.start.len();
        self.start.push(self.start[b]);
        self.end.push(self.start[b] + m);
        self.marked.push(0);
        self.start[b] += m;
        for i in self.start[nb]..self.end[nb] {
            self.block_of[self.elems[i]] = nb;
        }
        Some(nb)
    }
}

impl MultiTrackDfa {
    /// The minimal automaton of the same language, states in BFS order.
    pub fn minimize(&self) -> MultiTrackDfa {
        let sigma = self.symbols();
        let reach = self.reachable();
        // Compact the reachable part.
        let mut id = vec![usize::MAX; self.num_states()];
        for (i, &q) in reach.iter().enumerate() {
            id[q] = i;
        }
        let n = reach.len();
        let trans: Vec<usize> =
            reach.iter().flat_map(|&q| (0..sigma).map(move |s| (q, s))).map(|(q, s)| id[self.next(q, s)]).collect();
        let accepting: Vec<bool> = reach.iter().map(|&q| self.accepting[q]).collect();

        // Predecessor lists in CSR form, indexed by symbol * n + target.
        let mut offs = vec![0usize; sigma * n + 1];
        for q in 0..n {
            for s in 0..sigma {
                offs[s * n + trans[q * sigma + s] + 1] += 1;
            }
        }
        for i in 1..offs.len() {
            offs[i] += offs[i - 1];
        }
        let mut fill = offs.clone();
        let mut preds = vec![0usize; n * sigma];
        for q in 0..n {
            for s in 0..sigma {
                let key = s * n + trans[q * sigma + s];
                preds[fill[key]] = q;
                fill[key] += 1;
            }
        }

        let acc: Vec<usize> = (0..n).filter(|&q| accepting[q]).collect();
        let rej: Vec<usize> = (0..n).filter(|&q| !accepting[q]).collect();
        let mut part = Partition::new(&[acc, rej], n);
        let mut in_work: Vec<bool> = vec![false; part.blocks() * sigma];
        let mut work: Vec<(usize, usize)> = Vec::new();
        for b in 0..part.blocks() {
            for s in 0..sigma {
                in_work[b * sigma + s] = true;
                work.push((b, s));
            }
        }
        let mut xs: Vec<usize> = Vec::new();
        let mut touched: Vec<usize> = Vec::new();
        while let Some((b, s)) = work.pop() {
            in_work[b * sigma + s] = false;
            xs.clear();
            for &t in part.members(b) {
                xs.extend_from_slice(&preds[offs[s * n + t]..offs[s * n + t + 1]]);
            }
            touched.clear();
            for &p in &xs {
                let pb = part.block_of[p];
                if part.marked[pb] == 0 {
                    touched.push(pb);
                }
                part.mark(p);
            }
            for &y in &touched {
                let Some(ny) = part.split(y) else { continue };
                in_work.resize(part.blocks() * sigma, false);
                let smaller = if part.size(ny) <= part.size(y) { ny } else { y };
                for c in 0..sigma {
                    if in_work[y * sigma + c] {
                        in_work[ny * sigma + c] = true;
                        work.push((ny, c));
                    } else {
                        in_work[smaller * sigma + c] = true;
                        work.push((smaller, c));
                    }
                }
            }
        }

        // Quotient, renumbered by BFS from the initial block.
        let init = part.block_of[id[self.initial]];
        let mut number = vec![usize::MAX; part.blocks()];
        number[init] = 0;
        let mut order = vec![init];
        let mut i = 0;
        while i < order.len() {
            let b = order[i];
            i += 1;
            let rep = part.members(b)[0];
            for s in 0..sigma {
                let t = part.block_of[trans[rep * sigma + s]];
                if number[t] == usize::MAX {
                    number[t] = order.len();
                    order.push(t);
                }
            }
        }
        let mut new_trans = Vec::with_capacity(order.len() * sigma);
        let mut new_acc = Vec::with_capacity(order.len());
        for &b in &order {
            let rep = part.members(b)[0];
            new_acc.push(accepting[rep]);
            for s in 0..sigma {
                new_trans.push(number[part.block_of[trans[rep * sigma + s]]] as u32);
            }
        }
        MultiTrackDfa::raw(self.base, self.tracks.clone(), 0, new_acc, new_trans)
    }
}
