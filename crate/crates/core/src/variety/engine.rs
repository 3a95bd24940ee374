//! Backtracking enumerator.
//!
//! Each relation is compiled into a chain of levels, one per variable in
//! assignment order. Level `s` turns the coefficient vector of the relation
//! specialised at the first `s - 1` of its variables into the vector
//! specialised at `s` of them:
//!
//! `out[group[t]] += in[t] * a^exp[t]`
//!
//! The last level leaves a single value, which must be zero for the branch to
//! survive. Only exact zero tests prune.

use std::collections::BTreeMap;

use crate::algebra::{binary_mul, Field, Polynomial};

/// Element arithmetic on indices `0..q`.
pub(crate) trait Arith: Sync {
    fn add(&self, a: u32, b: u32) -> u32;
    fn mul(&self, a: u32, b: u32) -> u32;
}

pub(crate) struct PrimeArith(pub u64);

impl Arith for PrimeArith {
    #[inline]
    fn add(&self, a: u32, b: u32) -> u32 {
        let s = a + b;
        if s as u64 >= self.0 {
            s - self.0 as u32
        } else {
            s
        }
    }

    #[inline]
    fn mul(&self, a: u32, b: u32) -> u32 {
        ((a as u64 * b as u64) % self.0) as u32
    }
}

pub(crate) struct BinaryArith {
    q: u32,
    table: Vec<u32>,
}

impl BinaryArith {
    pub(crate) fn new(m: u8) -> Self {
        let q = 1u32 << m;
        let table = (0..q * q).map(|i| binary_mul(m, i / q, i % q)).collect();
        BinaryArith { q, table }
    }
}

impl Arith for BinaryArith {
    #[inline]
    fn add(&self, a: u32, b: u32) -> u32 {
        a ^ b
    }

    #[inline]
    fn mul(&self, a: u32, b: u32) -> u32 {
        self.table[(a * self.q + b) as usize]
    }
}

struct Level {
    exps: Vec<u32>,
    group: Vec<u32>,
    out_len: usize,
}

struct CompiledRelation {
    init: Vec<u32>,
    levels: Vec<Level>,
}

/// Work done at one depth: advance `relation` through `level`.
#[derive(Clone, Copy)]
struct Step {
    relation: usize,
    level: usize,
    last: bool,
}

pub(crate) struct Plan {
    pub q: u32,
    /// `order[depth]` is the original variable index assigned at `depth`.
    pub order: Vec<usize>,
    /// Variables in no relation, left out of `order` when only counting.
    pub free: u32,
    /// A nonzero constant relation makes the system empty.
    pub contradictory: bool,
    relations: Vec<CompiledRelation>,
    steps: Vec<Vec<Step>>,
    max_exp: u32,
}

/// Greedy order: repeatedly finish the relation with the fewest unassigned
/// variables, so relations complete, and prune, as early as possible.
fn variable_order(var_sets: &[Vec<usize>], nvars: usize) -> Vec<usize> {
    let mut assigned = vec![false; nvars];
    let mut order = Vec::new();
    loop {
        let next = var_sets
            .iter()
            .map(|vs| vs.iter().filter(|&&v| !assigned[v]).count())
            .enumerate()
            .filter(|&(_, left)| left > 0)
            .min_by_key(|&(i, left)| (left, i));
        let Some((r, _)) = next else { break };
        for &v in &var_sets[r] {
            if !assigned[v] {
                assigned[v] = true;
                order.push(v);
            }
        }
    }
    order
}

impl Plan {
    /// Compile `relations` (already over `field`) in `nvars` variables.
    /// With `include_free` unconstrained variables are enumerated too.
    pub(crate) fn new(field: Field, nvars: usize, relations: &[Polynomial], include_free: bool) -> Plan {
        let q = field.order().expect("finite field");
        let mut contradictory = false;
        let mut kept = Vec::new();
        for r in relations {
            if r.vars().is_empty() {
                contradictory |= !r.is_zero();
            } else {
                kept.push(r);
            }
        }
        let var_sets: Vec<Vec<usize>> = kept
            .iter()
            .map(|r| r.vars().into_iter().map(|v| v.0 as usize).collect())
            .collect();
        let mut order = variable_order(&var_sets, nvars);
        let constrained = order.len();
        if include_free {
            let mut used = vec![false; nvars];
            order.iter().for_each(|&v| used[v] = true);
            order.extend((0..nvars).filter(|&v| !used[v]));
        }
        let free = (nvars - constrained) as u32;
        let mut depth_of = vec![usize::MAX; nvars];
        for (d, &v) in order.iter().enumerate() {
            depth_of[v] = d;
        }
        let mut steps = vec![Vec::new(); order.len()];
        let mut compiled = Vec::with_capacity(kept.len());
        let mut max_exp = 0;
        for (ri, r) in kept.iter().enumerate() {
            let mut vars = var_sets[ri].clone();
            vars.sort_by_key(|&v| depth_of[v]);
            // Key of a term at level s: its exponents on vars[s..].
            let mut keys: Vec<Vec<u32>> = r
                .terms()
                .iter()
                .map(|(m, _)| {
                    vars.iter()
                        .map(|&v| {
                            let e = m.exponent(crate::algebra::Var(v as u32));
                            max_exp = max_exp.max(e);
                            e
                        })
                        .collect()
                })
                .collect();
            let init = r
                .terms()
                .iter()
                .map(|(_, c)| c.index().expect("finite field element"))
                .collect();
            let mut levels = Vec::with_capacity(vars.len());
            for (s, &v) in vars.iter().enumerate() {
                let mut index: BTreeMap<Vec<u32>, u32> = BTreeMap::new();
                let mut next_keys = Vec::new();
                let mut exps = Vec::with_capacity(keys.len());
                let mut group = Vec::with_capacity(keys.len());
                for k in &keys {
                    exps.push(k[0]);
                    let rest = k[1..].to_vec();
                    let g = *index.entry(rest.clone()).or_insert_with(|| {
                        next_keys.push(rest);
                        next_keys.len() as u32 - 1
                    });
                    group.push(g);
                }
                levels.push(Level {
                    exps,
                    group,
                    out_len: next_keys.len(),
                });
                keys = next_keys;
                steps[depth_of[v]].push(Step {
                    relation: ri,
                    level: s,
                    last: s + 1 == vars.len(),
                });
            }
            compiled.push(CompiledRelation { init, levels });
        }
        Plan {
            q,
            order,
            free,
            contradictory,
            relations: compiled,
            steps,
            max_exp,
        }
    }

    pub(crate) fn depth(&self) -> usize {
        self.order.len()
    }

    fn powers<A: Arith>(&self, arith: &A) -> Vec<u32> {
        let w = self.max_exp as usize + 1;
        let mut table = vec![0; self.q as usize * w];
        for a in 0..self.q {
            let mut p = 1;
            for e in 0..w {
                table[a as usize * w + e] = p;
                p = arith.mul(p, a);
            }
        }
        table
    }

    /// Run the subtree below a fixed prefix of values. Returns the number of
    /// satisfying assignments of the enumerated variables; when `sink` is
    /// given, every solution (values by depth) is pushed to it.
    pub(crate) fn run_prefix<A: Arith>(
        &self,
        arith: &A,
        prefix: &[u32],
        mut sink: Option<&mut Vec<Vec<u32>>>,
    ) -> u128 {
        if self.contradictory {
            return 0;
        }
        let mut ws = Workspace {
            buffers: self
                .relations
                .iter()
                .map(|r| r.levels.iter().map(|l| vec![0; l.out_len]).collect())
                .collect(),
            values: vec![0; self.depth()],
        };
        let pow = self.powers(arith);
        let ctx = Ctx {
            plan: self,
            arith,
            pow: &pow,
            width: self.max_exp as usize + 1,
            prefix,
        };
        ctx.descend(0, &mut ws, &mut sink)
    }
}

struct Workspace {
    buffers: Vec<Vec<Vec<u32>>>,
    values: Vec<u32>,
}

struct Ctx<'a, A> {
    plan: &'a Plan,
    arith: &'a A,
    pow: &'a [u32],
    width: usize,
    prefix: &'a [u32],
}

impl<A: Arith> Ctx<'_, A> {
    /// Apply the steps at `depth` for value `a`; false if a relation fails.
    #[inline]
    fn apply(&self, depth: usize, a: u32, ws: &mut Workspace) -> bool {
        let pw = &self.pow[a as usize * self.width..(a as usize + 1) * self.width];
        for step in &self.plan.steps[depth] {
            let rel = &self.plan.relations[step.relation];
            let level = &rel.levels[step.level];
            let bufs = &mut ws.buffers[step.relation];
            let (before, after) = bufs.split_at_mut(step.level);
            let input: &[u32] = if step.level == 0 {
                &rel.init
            } else {
                &before[step.level - 1]
            };
            let out = &mut after[0];
            out.iter_mut().for_each(|x| *x = 0);
            for ((&c, &e), &g) in input.iter().zip(&level.exps).zip(&level.group) {
                if c != 0 {
                    let t = self.arith.mul(c, pw[e as usize]);
                    out[g as usize] = self.arith.add(out[g as usize], t);
                }
            }
            if step.last && out[0] != 0 {
                return false;
            }
        }
        true
    }

    fn descend(&self, depth: usize, ws: &mut Workspace, sink: &mut Option<&mut Vec<Vec<u32>>>) -> u128 {
        if depth == self.plan.depth() {
            if let Some(s) = sink.as_deref_mut() {
                s.push(ws.values.clone());
            }
            return 1;
        }
        let range = if depth < self.prefix.len() {
            self.prefix[depth]..self.prefix[depth] + 1
        } else {
            0..self.plan.q
        };
        let mut total = 0;
        for a in range {
            if self.apply(depth, a, ws) {
                ws.values[depth] = a;
                total += self.descend(depth + 1, ws, sink);
            }
        }
        total
    }
}
