use crate::error::{Error, Result};

/// Conditional probability table of one variable given its parents.
///
/// Rows are addressed by a mixed-radix index over the parents' state
/// indices in declared parent order, with the last parent varying fastest.
/// Columns follow the child's state order.
#[derive(Debug, Clone, PartialEq)]
pub struct Cpt {
    pub(crate) child: usize,
    pub(crate) parents: Vec<usize>,
    pub(crate) parent_cards: Vec<usize>,
    pub(crate) card: usize,
    pub(crate) table: Vec<f64>,
}

impl Cpt {
    /// Network index of the child variable.
    pub fn child(&self) -> usize {
        self.child
    }

    /// Network indices of the parents, in the table's canonical order.
    pub fn parents(&self) -> &[usize] {
        &self.parents
    }

    pub fn parent_cards(&self) -> &[usize] {
        &self.parent_cards
    }

    /// Number of child states (columns).
    pub fn card(&self) -> usize {
        self.card
    }

    pub fn num_rows(&self) -> usize {
        self.parent_cards.iter().product()
    }

    pub fn row(&self, index: usize) -> &[f64] {
        &self.table[index * self.card..(index + 1) * self.card]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[f64]> {
        self.table.chunks(self.card)
    }

    /// Row index for a parent configuration given as state indices.
    pub fn config_index(&self, parent_states: &[usize]) -> Result<usize> {
        if parent_states.len() != self.parents.len() {
            return Err(Error::argument(format!(
                "expected {} parent states, got {}",
                self.parents.len(),
                parent_states.len()
            )));
        }
        let mut index = 0;
        for (&state, &card) in parent_states.iter().zip(&self.parent_cards) {
            if state >= card {
                return Err(Error::argument(format!(
                    "parent state index {state} out of range for cardinality {card}"
                )));
            }
            index = index * card + state;
        }
        Ok(index)
    }

    /// Inverse of [`Cpt::config_index`].
    pub fn config_states(&self, mut index: usize) -> Vec<usize> {
        let mut states = vec![0; self.parents.len()];
        for (slot, &card) in states.iter_mut().zip(&self.parent_cards).rev() {
            *slot = index % card;
            index /= card;
        }
        states
    }

    pub fn prob(&self, row: usize, state: usize) -> f64 {
        self.table[row * self.card + state]
    }
}
