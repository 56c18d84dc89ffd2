use std::collections::{BTreeMap, HashMap, HashSet};
use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};

use rayon::prelude::*;

use super::language::Language;
use super::rule::{Patch1D, SlidingBlockRule};
use super::Word;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy)]
pub struct SearchOptions {
    /// Images of legal words of lengths `2r+2 ..= 2r+1+check_extra` are
    /// tested for legality while the table is filled in.
    pub check_extra: usize,
    /// Upper limit on search-tree nodes over all partitions.
    pub node_budget: u64,
    /// Largest inverse radius tried is `radius + inverse_slack`.
    pub inverse_slack: usize,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions { check_extra: 8, node_budget: 200_000_000, inverse_slack: 2 }
    }
}

#[derive(Debug, Clone)]
pub struct SearchOutcome {
    pub radius: usize,
    pub reflected: bool,
    /// Verified rules, sorted by encoding.
    pub rules: Vec<SlidingBlockRule>,
    /// Inverse found for each rule, same order.
    pub inverses: Vec<SlidingBlockRule>,
    /// Tables that passed the local legality checks.
    pub candidates: usize,
    pub nodes: u64,
}

/// Radius-`r` automorphisms, certified on legal words of length `max_len`
/// and by an inverse rule of radius at most `r + 2`.
pub fn find_automorphisms(lang: &Language, radius: usize) -> Result<Vec<SlidingBlockRule>> {
    Ok(search_rules(lang, radius, false, SearchOptions::default())?.rules)
}

/// Radius-`r` reversors `x ↦ Φ_f(R x)`, certified as for automorphisms.
pub fn find_reversors(lang: &Language, radius: usize) -> Result<Vec<SlidingBlockRule>> {
    Ok(search_rules(lang, radius, true, SearchOptions::default())?.rules)
}

pub fn required_depth(radius: usize) -> usize {
    4 * radius + 4
}

fn bits_per_letter(k: usize) -> u32 {
    (usize::BITS - (k.max(2) - 1).leading_zeros()).max(1)
}

fn key(w: impl IntoIterator<Item = u8>, bits: u32) -> u128 {
    w.into_iter().fold(0u128, |acc, c| (acc << bits) | c as u128)
}

struct Problem {
    letters: u8,
    bits: u32,
    windows: Vec<Word>,
    /// assignment order of window indices
    order: Vec<usize>,
    /// check words completing at each step: window indices, image length
    checks_at: Vec<Vec<(Vec<usize>, usize)>>,
    targets: HashMap<usize, HashSet<u128>>,
}

impl Problem {
    fn new(src: &Language, target: &Language, radius: usize, opts: &SearchOptions) -> Self {
        let letters = src.alphabet().len() as u8;
        let bits = bits_per_letter(letters as usize);
        let w = 2 * radius + 1;
        let windows: Vec<Word> = src.words(w).iter().cloned().collect();
        let index: HashMap<&[u8], usize> = windows.iter().enumerate().map(|(i, v)| (v.as_slice(), i)).collect();
        let top = (w + opts.check_extra).min(src.max_len());
        let max_check = ((128 / bits) as usize + 2 * radius).min(top);

        let mut checks: Vec<(Vec<usize>, usize)> = Vec::new();
        let mut targets = HashMap::new();
        for len in w + 1..=max_check {
            let img_len = len - 2 * radius;
            targets.insert(img_len, target.words(img_len).iter().map(|v| key(v.iter().copied(), bits)).collect());
            for u in src.words(len) {
                checks.push((u.windows(w).map(|win| index[win]).collect(), img_len));
            }
        }

        // greedy order: prefer the window that completes the most checks,
        // shortest checks first, then the one touching most assigned windows
        let n = windows.len();
        let mut assigned = vec![false; n];
        let mut order = Vec::with_capacity(n);
        let mut by_window: Vec<Vec<usize>> = vec![Vec::new(); n];
        for (ci, (ix, _)) in checks.iter().enumerate() {
            for &i in ix {
                if by_window[i].last() != Some(&ci) {
                    by_window[i].push(ci);
                }
            }
        }
        let longest = max_check.saturating_sub(2 * radius);
        for _ in 0..n {
            let best = (0..n)
                .filter(|&i| !assigned[i])
                .max_by_key(|&i| {
                    // completes[0] counts image length 2, completes[1] length 3, ...
                    let mut completes = vec![0usize; longest.saturating_sub(1)];
                    let mut touches = 0;
                    for &ci in &by_window[i] {
                        let (ix, img_len) = &checks[ci];
                        if ix.iter().all(|&j| j == i || assigned[j]) {
                            completes[img_len - 2] += 1;
                        } else if ix.iter().any(|&j| assigned[j]) {
                            touches += 1;
                        }
                    }
                    (completes, touches, std::cmp::Reverse(i))
                })
                .expect("unassigned window");
            assigned[best] = true;
            order.push(best);
        }
        let mut pos = vec![0; n];
        for (t, &i) in order.iter().enumerate() {
            pos[i] = t;
        }
        let mut checks_at = vec![Vec::new(); n];
        for (ix, img_len) in checks {
            let t = ix.iter().map(|&i| pos[i]).max().expect("nonempty check");
            checks_at[t].push((ix, img_len));
        }
        Problem { letters, bits, windows, order, checks_at, targets }
    }

    fn step_ok(&self, t: usize, assign: &[u8]) -> bool {
        self.checks_at[t].iter().all(|(ix, img_len)| {
            let k = key(ix.iter().map(|&i| assign[i]), self.bits);
            self.targets[img_len].contains(&k)
        })
    }
}

struct Budget {
    used: AtomicU64,
    limit: u64,
    exceeded: AtomicBool,
}

impl Budget {
    fn tick(&self) -> bool {
        if self.used.fetch_add(1, Ordering::Relaxed) >= self.limit {
            self.exceeded.store(true, Ordering::Relaxed);
        }
        !self.exceeded.load(Ordering::Relaxed)
    }
}

fn backtrack(p: &Problem, t: usize, assign: &mut Vec<u8>, budget: &Budget, out: &mut Vec<Vec<u8>>) {
    if t == p.order.len() {
        out.push(assign.clone());
        return;
    }
    for c in 0..p.letters {
        if !budget.tick() {
            return;
        }
        assign[p.order[t]] = c;
        if p.step_ok(t, assign) {
            backtrack(p, t + 1, assign, budget, out);
        }
    }
}

/// Exhaustive search for radius-`r` sliding block codes from the source
/// language (the language itself, or its reversal when `reflected`) onto the
/// language, partitioned by the image of the first window and run in
/// parallel. Survivors of the local checks are verified on all legal words of
/// length `max_len` and must admit an inverse.
pub fn search_rules(lang: &Language, radius: usize, reflected: bool, opts: SearchOptions) -> Result<SearchOutcome> {
    let needed = required_depth(radius);
    if lang.max_len() < needed {
        return Err(Error::InsufficientDepth { max_len: lang.max_len(), needed });
    }
    let src = if reflected { lang.reversed() } else { lang.clone() };
    let problem = Problem::new(&src, lang, radius, &opts);
    let budget = Budget { used: AtomicU64::new(0), limit: opts.node_budget, exceeded: AtomicBool::new(false) };

    let tables: Vec<Vec<u8>> = (0..problem.letters)
        .into_par_iter()
        .map(|c| {
            let mut assign = vec![0u8; problem.windows.len()];
            assign[problem.order[0]] = c;
            let mut out = Vec::new();
            if budget.tick() && problem.step_ok(0, &assign) {
                backtrack(&problem, 1, &mut assign, &budget, &mut out);
            }
            out
        })
        .flatten()
        .collect();
    if budget.exceeded.load(Ordering::Relaxed) {
        return Err(Error::BudgetExceeded(opts.node_budget));
    }

    let candidates = tables.len();
    let verified: Vec<(SlidingBlockRule, SlidingBlockRule)> = tables
        .into_par_iter()
        .filter_map(|values| {
            let table: BTreeMap<Word, u8> = problem.windows.iter().cloned().zip(values).collect();
            let rule = SlidingBlockRule::new(lang.alphabet().to_vec(), radius, reflected, 0, table).ok()?;
            if !maps_into_language(&rule, &src, lang) {
                return None;
            }
            let inv = find_inverse(&rule, lang, radius + opts.inverse_slack)?;
            Some((rule, inv))
        })
        .collect();
    let mut verified = verified;
    verified.sort_by_key(|(r, _)| r.encoding());
    let (rules, inverses) = verified.into_iter().unzip();
    Ok(SearchOutcome { radius, reflected, rules, inverses, candidates, nodes: budget.used.load(Ordering::Relaxed) })
}

/// The local rule sends every legal source word of length `max_len` to a
/// legal word.
fn maps_into_language(rule: &SlidingBlockRule, src: &Language, target: &Language) -> bool {
    // table keys are source windows, so the local rule runs on source words
    let n = src.max_len();
    src.words(n).iter().all(|w| {
        let image: Option<Word> = w.windows(2 * rule.radius() + 1).map(|win| rule.table().get(win).copied()).collect();
        image.is_some_and(|img| target.contains(&img))
    })
}

/// Inverse sliding block code of radius `s ≤ max_radius`, if one exists.
///
/// For each `s` the candidate inverse is read off from all legal source
/// words of length `2(r+s)+1`: their images (length `2s+1`) must determine
/// the centre letter uniquely. The candidate is then checked to be a right
/// inverse on legal words of length `2(r+s)+1`.
pub fn find_inverse(rule: &SlidingBlockRule, lang: &Language, max_radius: usize) -> Option<SlidingBlockRule> {
    let r = rule.radius();
    let src = if rule.is_reflected() { lang.reversed() } else { lang.clone() };
    let w = 2 * r + 1;
    let local = |u: &[u8]| -> Option<Word> { u.windows(w).map(|win| rule.table().get(win).copied()).collect() };
    let n = lang.max_len();
    for s in 0..=max_radius {
        let span = 2 * (r + s) + 1;
        if span > n {
            break;
        }
        let mut g: BTreeMap<Word, u8> = BTreeMap::new();
        let mut consistent = true;
        for u in src.words(span) {
            let v = local(u)?;
            let centre = u[r + s];
            if *g.entry(v).or_insert(centre) != centre {
                consistent = false;
                break;
            }
        }
        if !consistent {
            continue;
        }
        if lang.words(2 * s + 1).iter().any(|v| !g.contains_key(v)) {
            // not onto
            return None;
        }
        // right inverse: f(g(v)) = centre of v
        let right = lang.words(span).iter().all(|v| {
            let pre: Option<Word> = v.windows(2 * s + 1).map(|win| g.get(win).copied()).collect();
            pre.is_some_and(|pre| src.contains(&pre) && rule.table().get(&pre) == Some(&v[r + s]))
        });
        if !right {
            continue;
        }
        // as a map on the original configurations: plain Φ_g, or R∘Φ_g
        // rewritten as Φ_g̃∘R with g̃(w) = g(rev w)
        let table = if rule.is_reflected() {
            g.into_iter().map(|(v, c)| (v.into_iter().rev().collect(), c)).collect()
        } else {
            g
        };
        return SlidingBlockRule::new(lang.alphabet().to_vec(), s, rule.is_reflected(), 0, table).ok();
    }
    None
}

/// `inverse ∘ rule` and `rule ∘ inverse` fix every legal test word on the
/// overlap.
pub fn check_inverse_pair(rule: &SlidingBlockRule, inverse: &SlidingBlockRule, lang: &Language) -> bool {
    lang.words(lang.max_len()).iter().all(|w| {
        let p = Patch1D::new(0, w.clone());
        let a = rule.apply(&p).and_then(|q| inverse.apply(&q));
        let b = inverse.apply(&p).and_then(|q| rule.apply(&q));
        matches!((a, b), (Some(a), Some(b)) if p.contains_patch(&a) && p.contains_patch(&b))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::subshift::language::{generate_language, LanguageSource};
    use crate::subshift::substitution::SubstitutionRule;

    fn lang(rule: SubstitutionRule, n: usize) -> Language {
        generate_language(&LanguageSource::Substitution(rule), n).unwrap()
    }

    #[test]
    fn key_packing() {
        assert_eq!(bits_per_letter(2), 1);
        assert_eq!(bits_per_letter(3), 2);
        assert_eq!(bits_per_letter(4), 2);
        assert_eq!(bits_per_letter(5), 3);
        assert_eq!(key([1, 0, 1], 1), 0b101);
    }

    #[test]
    fn thue_morse_radius_zero() {
        let l = lang(SubstitutionRule::thue_morse(), 40);
        let autos = find_automorphisms(&l, 0).unwrap();
        assert_eq!(autos, vec![SlidingBlockRule::identity(&l, 0), SlidingBlockRule::letter_map(&l, &[1, 0], false)]);
        let revs = find_reversors(&l, 0).unwrap();
        assert!(revs.contains(&SlidingBlockRule::reflection(&l)));
    }

    #[test]
    fn full_shift_radius_zero() {
        let l = generate_language(&LanguageSource::FullShift(vec!['a', 'b']), 10).unwrap();
        let autos = find_automorphisms(&l, 0).unwrap();
        assert_eq!(autos.len(), 2);
    }

    #[test]
    fn inverses_check_out() {
        let l = lang(SubstitutionRule::thue_morse(), 24);
        for reflected in [false, true] {
            let out = search_rules(&l, 1, reflected, SearchOptions::default()).unwrap();
            assert!(!out.rules.is_empty());
            for (r, inv) in out.rules.iter().zip(&out.inverses) {
                assert!(check_inverse_pair(r, inv, &l), "{r}");
            }
        }
    }

    #[test]
    fn depth_is_checked() {
        let l = lang(SubstitutionRule::thue_morse(), 8);
        assert_eq!(find_automorphisms(&l, 2).unwrap_err(), Error::InsufficientDepth { max_len: 8, needed: 12 });
    }

    #[test]
    fn non_injective_map_rejected() {
        // the constant map is locally legal on the full shift but has no inverse
        let l = generate_language(&LanguageSource::FullShift(vec!['a', 'b']), 8).unwrap();
        let constant = SlidingBlockRule::letter_map(&l, &[0, 0], false);
        assert!(find_inverse(&constant, &l, 2).is_none());
        let out = search_rules(&l, 0, false, SearchOptions::default()).unwrap();
        assert_eq!(out.candidates, 4);
        assert_eq!(out.rules.len(), 2);
    }
}
