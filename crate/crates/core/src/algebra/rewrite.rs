//! Completion of relations into a confluent rewriting system inside the
//! truncated path algebra `kQ / J^(L+1)`, where `J` is the arrow ideal.
//!
//! Words are ordered so that *shorter* words are larger, and words of equal
//! length compare lexicographically by arrow index. The leading word of a
//! polynomial is therefore its shortest (and among those, lexicographically
//! largest) word, and every rewrite replaces a word by longer words or by
//! lexicographically smaller words of the same length. Because every term of
//! a polynomial is at least as long as its leading word, truncating at
//! length `L` never breaks an overlap: either the whole product survives the
//! truncation or all of it vanishes.
//!
//! The irreducible words are exactly the paths chosen greedily, layer by
//! layer of the radical filtration, in lexicographic order.

use std::cmp::Ordering;
use std::collections::{BTreeMap, VecDeque};

use crate::field::Field;

/// Key wrapper giving arrow words the rewriting order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub(crate) struct Word(pub Vec<usize>);

impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        other.0.len().cmp(&self.0.len()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

pub(crate) type Poly<F> = BTreeMap<Word, F>;

#[derive(Debug, Clone)]
pub(crate) struct Rule<F> {
    pub lead: Vec<usize>,
    /// `lead` rewrites to this combination of smaller words.
    pub tail: Vec<(Vec<usize>, F)>,
}

#[derive(Debug, Clone)]
pub(crate) struct Rewriter<F> {
    max_len: usize,
    rules: Vec<Rule<F>>,
}

fn add_to<F: Field>(p: &mut Poly<F>, w: Vec<usize>, c: F) {
    if c.is_zero() {
        return;
    }
    use std::collections::btree_map::Entry;
    match p.entry(Word(w)) {
        Entry::Vacant(e) => {
            e.insert(c);
        }
        Entry::Occupied(mut e) => {
            let s = e.get().clone() + c;
            if s.is_zero() {
                e.remove();
            } else {
                *e.get_mut() = s;
            }
        }
    }
}

fn find_subword(hay: &[usize], needle: &[usize]) -> Option<usize> {
    if needle.len() > hay.len() {
        return None;
    }
    (0..=hay.len() - needle.len()).find(|&i| &hay[i..i + needle.len()] == needle)
}

impl<F: Field> Rewriter<F> {
    /// Completes `relations` (lists of `(word, coefficient)`) at truncation
    /// length `max_len`.
    pub fn complete(relations: &[Vec<(Vec<usize>, F)>], max_len: usize) -> Self {
        let mut rw = Rewriter { max_len, rules: Vec::new() };
        let mut queue: VecDeque<Poly<F>> = relations
            .iter()
            .map(|rel| {
                let mut p = Poly::new();
                for (w, c) in rel {
                    if w.len() <= max_len {
                        add_to(&mut p, w.clone(), c.clone());
                    }
                }
                p
            })
            .collect();
        loop {
            while let Some(f) = queue.pop_front() {
                rw.absorb(f, &mut queue);
            }
            // Every overlap was queued when its younger rule arrived; this
            // pass re-checks the final system so confluence is certain.
            let pending = rw.unresolved_overlaps();
            if pending.is_empty() {
                break;
            }
            queue.extend(pending);
        }
        rw
    }

    pub fn max_len(&self) -> usize {
        self.max_len
    }

    fn absorb(&mut self, f: Poly<F>, queue: &mut VecDeque<Poly<F>>) {
        let mut r = self.reduce(f);
        let Some((lead, lc)) = r.pop_last() else {
            return;
        };
        let inv = lc.inv();
        let tail: Vec<(Vec<usize>, F)> =
            r.into_iter().map(|(w, c)| (w.0, -(c * inv.clone()))).collect();
        let rule = Rule { lead: lead.0, tail };

        // Rules whose leading word contains the new one are no longer reduced.
        let (kept, displaced): (Vec<_>, Vec<_>) = std::mem::take(&mut self.rules)
            .into_iter()
            .partition(|h| find_subword(&h.lead, &rule.lead).is_none());
        self.rules = kept;
        for h in displaced {
            queue.push_back(self.rule_poly(&h));
        }

        for h in &self.rules {
            queue.extend(self.s_polys(&rule, h));
            queue.extend(self.s_polys(h, &rule));
        }
        queue.extend(self.s_polys(&rule, &rule));
        self.rules.push(rule);
    }

    fn rule_poly(&self, h: &Rule<F>) -> Poly<F> {
        let mut p = Poly::new();
        add_to(&mut p, h.lead.clone(), F::one());
        for (w, c) in &h.tail {
            add_to(&mut p, w.clone(), -c.clone());
        }
        p
    }

    /// S-polynomials for proper overlaps `lead(g) = x*o`, `lead(h) = o*y`.
    fn s_polys(&self, g: &Rule<F>, h: &Rule<F>) -> Vec<Poly<F>> {
        let (lg, lh) = (&g.lead, &h.lead);
        let mut out = Vec::new();
        for k in 1..lg.len().min(lh.len()) {
            if lg[lg.len() - k..] != lh[..k] {
                continue;
            }
            if lg.len() + lh.len() - k > self.max_len {
                continue;
            }
            let x = &lg[..lg.len() - k];
            let y = &lh[k..];
            // x*o*y rewrites to tail(g)*y and to x*tail(h)
            let mut s = Poly::new();
            for (w, c) in &g.tail {
                let word: Vec<usize> = w.iter().chain(y).copied().collect();
                if word.len() <= self.max_len {
                    add_to(&mut s, word, c.clone());
                }
            }
            for (w, c) in &h.tail {
                let word: Vec<usize> = x.iter().chain(w).copied().collect();
                if word.len() <= self.max_len {
                    add_to(&mut s, word, -c.clone());
                }
            }
            if !s.is_empty() {
                out.push(s);
            }
        }
        out
    }

    fn unresolved_overlaps(&self) -> Vec<Poly<F>> {
        let mut out = Vec::new();
        for g in &self.rules {
            for h in &self.rules {
                for s in self.s_polys(g, h) {
                    let r = self.reduce(s);
                    if !r.is_empty() {
                        out.push(r);
                    }
                }
            }
        }
        out
    }

    fn find_rule(&self, word: &[usize]) -> Option<(usize, usize)> {
        self.rules
            .iter()
            .enumerate()
            .find_map(|(i, r)| find_subword(word, &r.lead).map(|pos| (i, pos)))
    }

    /// Full reduction: every term of the result is irreducible.
    pub fn reduce(&self, mut f: Poly<F>) -> Poly<F> {
        let mut done = Poly::new();
        while let Some((w, c)) = f.pop_last() {
            match self.find_rule(&w.0) {
                None => {
                    done.insert(w, c);
                }
                Some((i, pos)) => {
                    let rule = &self.rules[i];
                    let (u, v) = (&w.0[..pos], &w.0[pos + rule.lead.len()..]);
                    for (t, d) in &rule.tail {
                        if u.len() + t.len() + v.len() > self.max_len {
                            continue;
                        }
                        let word: Vec<usize> =
                            u.iter().chain(t.iter()).chain(v.iter()).copied().collect();
                        add_to(&mut f, word, c.clone() * d.clone());
                    }
                }
            }
        }
        done
    }

    pub fn reduce_word(&self, w: &[usize]) -> Poly<F> {
        if w.len() > self.max_len {
            return Poly::new();
        }
        let mut p = Poly::new();
        p.insert(Word(w.to_vec()), F::one());
        self.reduce(p)
    }

    #[cfg(test)]
    pub fn is_normal(&self, w: &[usize]) -> bool {
        self.find_rule(w).is_none()
    }

    /// Whether some leading word is a suffix of `w`. For a word whose
    /// proper prefix is already irreducible this decides irreducibility.
    pub fn has_lead_suffix(&self, w: &[usize]) -> bool {
        self.rules.iter().any(|r| w.ends_with(&r.lead))
    }
}
