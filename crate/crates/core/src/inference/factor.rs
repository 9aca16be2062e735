//! Dense factors over discrete variables.
//!
//! Layout is mixed-radix over `vars` with the last variable varying fastest,
//! the same convention CPT rows use, so a CPT becomes a factor over
//! `parents ++ [child]` without copying.

use crate::model::Cpt;

#[derive(Debug, Clone, PartialEq)]
pub(crate) struct Factor {
    pub vars: Vec<usize>,
    pub cards: Vec<usize>,
    pub values: Vec<f64>,
}

fn strides(cards: &[usize]) -> Vec<usize> {
    let mut s = vec![1; cards.len()];
    for i in (0..cards.len().saturating_sub(1)).rev() {
        s[i] = s[i + 1] * cards[i + 1];
    }
    s
}

/// Steps through every cell of a mixed-radix space while tracking a linear
/// index into each of several tables that share some of its axes.
struct Odometer {
    cards: Vec<usize>,
    counters: Vec<usize>,
    // strides[t][axis]: step in table t when `axis` advances (0 if absent)
    strides: Vec<Vec<usize>>,
    offsets: Vec<usize>,
}

impl Odometer {
    fn new(cards: Vec<usize>, strides: Vec<Vec<usize>>) -> Self {
        let n = strides.len();
        Odometer {
            counters: vec![0; cards.len()],
            cards,
            strides,
            offsets: vec![0; n],
        }
    }

    /// Advances to the next cell; returns false after the last one.
    fn step(&mut self) -> bool {
        for axis in (0..self.cards.len()).rev() {
            self.counters[axis] += 1;
            for (t, s) in self.strides.iter().enumerate() {
                self.offsets[t] += s[axis];
            }
            if self.counters[axis] < self.cards[axis] {
                return true;
            }
            for (t, s) in self.strides.iter().enumerate() {
                self.offsets[t] -= s[axis] * self.cards[axis];
            }
            self.counters[axis] = 0;
        }
        false
    }
}

impl Factor {
    pub fn scalar(value: f64) -> Self {
        Factor {
            vars: Vec::new(),
            cards: Vec::new(),
            values: vec![value],
        }
    }

    /// The CPT as a factor, with observed variables fixed and dropped.
    pub fn from_cpt(cpt: &Cpt, evidence: &[Option<usize>]) -> Self {
        let mut vars = cpt.parents().to_vec();
        vars.push(cpt.child());
        let mut cards = cpt.parent_cards().to_vec();
        cards.push(cpt.card());
        let full = Factor {
            vars,
            cards,
            values: cpt.rows().flatten().copied().collect(),
        };
        full.reduce(evidence)
    }

    pub fn reduce(self, evidence: &[Option<usize>]) -> Self {
        if self.vars.iter().all(|&v| evidence[v].is_none()) {
            return self;
        }
        let st = strides(&self.cards);
        let mut base = 0;
        let mut vars = Vec::new();
        let mut cards = Vec::new();
        let mut keep_strides = Vec::new();
        for (i, &v) in self.vars.iter().enumerate() {
            match evidence[v] {
                Some(s) => base += s * st[i],
                None => {
                    vars.push(v);
                    cards.push(self.cards[i]);
                    keep_strides.push(st[i]);
                }
            }
        }
        let size: usize = cards.iter().product();
        let mut values = Vec::with_capacity(size);
        let mut odo = Odometer::new(cards.clone(), vec![keep_strides]);
        loop {
            values.push(self.values[base + odo.offsets[0]]);
            if !odo.step() {
                break;
            }
        }
        Factor { vars, cards, values }
    }

    pub fn contains(&self, var: usize) -> bool {
        self.vars.contains(&var)
    }

    fn strides_for(&self, axes: &[usize]) -> Vec<usize> {
        let st = strides(&self.cards);
        axes.iter()
            .map(|v| self.vars.iter().position(|x| x == v).map_or(0, |i| st[i]))
            .collect()
    }

    pub fn product(&self, other: &Factor) -> Factor {
        let mut vars = self.vars.clone();
        let mut cards = self.cards.clone();
        for (i, &v) in other.vars.iter().enumerate() {
            if !vars.contains(&v) {
                vars.push(v);
                cards.push(other.cards[i]);
            }
        }
        let size: usize = cards.iter().product();
        let mut values = Vec::with_capacity(size);
        let mut odo = Odometer::new(cards.clone(), vec![self.strides_for(&vars), other.strides_for(&vars)]);
        loop {
            values.push(self.values[odo.offsets[0]] * other.values[odo.offsets[1]]);
            if !odo.step() {
                break;
            }
        }
        Factor { vars, cards, values }
    }

    pub fn sum_out(&self, var: usize) -> Factor {
        let Some(pos) = self.vars.iter().position(|&v| v == var) else {
            return self.clone();
        };
        let mut vars = self.vars.clone();
        let mut cards = self.cards.clone();
        vars.remove(pos);
        cards.remove(pos);
        let out = Factor {
            values: vec![0.0; cards.iter().product()],
            vars,
            cards,
        };
        let target = out.strides_for(&self.vars);
        let mut values = out.values;
        let mut odo = Odometer::new(self.cards.clone(), vec![target]);
        let mut i = 0;
        loop {
            values[odo.offsets[0]] += self.values[i];
            i += 1;
            if !odo.step() {
                break;
            }
        }
        Factor { values, ..out }
    }

    /// Same factor with its axes permuted into `order`, which must be a
    /// permutation of `vars`.
    pub fn reorder(&self, order: &[usize]) -> Factor {
        debug_assert_eq!(order.len(), self.vars.len());
        if order == self.vars.as_slice() {
            return self.clone();
        }
        let cards: Vec<usize> = order
            .iter()
            .map(|v| self.cards[self.vars.iter().position(|x| x == v).expect("permutation")])
            .collect();
        let mut values = Vec::with_capacity(self.values.len());
        let mut odo = Odometer::new(cards.clone(), vec![self.strides_for(order)]);
        loop {
            values.push(self.values[odo.offsets[0]]);
            if !odo.step() {
                break;
            }
        }
        Factor {
            vars: order.to_vec(),
            cards,
            values,
        }
    }

    pub fn total(&self) -> f64 {
        self.values.iter().sum()
    }
}
