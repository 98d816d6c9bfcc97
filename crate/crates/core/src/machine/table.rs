//! Generated machines that tabulate a function of one unary argument.
//!
//! The input `n` is written as `n` consecutive `1`s starting at the head.
//! The machine erases the input while counting it, then acts on the table
//! entry for `n`: it writes the value in unary and halts, bounces between
//! two cells forever (a loop detected two steps later), or writes `1`s
//! rightward forever (divergence that never repeats a configuration).

use super::{Id, Machine, MachineBuilder, Move, Symbol};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum TableEntry {
    Value(u64),
    Loop,
    Diverge,
}

const ONE: Symbol = Symbol(1);

/// Unary encoding of `n` over an alphabet where `1` is symbol 1.
pub fn unary_input(n: u64) -> Vec<Symbol> {
    vec![ONE; n as usize]
}

/// Number of `1`s left on the tape: the output of a tabulating machine.
pub fn count_ones(id: &Id) -> u64 {
    id.count(ONE) as u64
}

/// Builds the tabulating machine. `entries[n]` governs input `n`; every
/// input `n >= entries.len()` is governed by `beyond`.
pub fn unary_table_machine(entries: &[TableEntry], beyond: TableEntry) -> Machine {
    let count = |j: usize| format!("c{j}");
    let writer = |v: u64| format!("w{v}");
    let last = entries.len();

    let mut b = MachineBuilder::new();
    b.symbol("1").start(count(0));
    for j in 0..=last {
        b.state(count(j));
    }

    let mut max_written = 0;
    let mut needs_bounce = false;
    let mut needs_grow = false;
    let mut plan = |b: &mut MachineBuilder, from: &str, read: &str, entry: TableEntry| match entry {
        TableEntry::Value(0) => {
            b.rule(from, read, &writer(0), "_", Move::Right);
        }
        TableEntry::Value(v) => {
            max_written = max_written.max(v);
            b.rule(from, read, &writer(v - 1), "1", Move::Right);
        }
        TableEntry::Loop => {
            needs_bounce = true;
            b.rule(from, read, "bl", read, Move::Left);
        }
        TableEntry::Diverge => {
            needs_grow = true;
            b.rule(from, read, "grow", "1", Move::Right);
        }
    };

    for (j, entry) in entries.iter().enumerate() {
        b.rule(&count(j), "1", &count(j + 1), "_", Move::Right);
        plan(&mut b, &count(j), "_", *entry);
    }
    let tail = count(last);
    match beyond {
        // Constant tail: keep consuming, then write the value.
        TableEntry::Value(_) => {
            b.rule(&tail, "1", &tail, "_", Move::Right);
            plan(&mut b, &tail, "_", beyond);
        }
        _ => {
            plan(&mut b, &tail, "1", beyond);
            plan(&mut b, &tail, "_", beyond);
        }
    }

    b.state(writer(0));
    for v in 1..max_written {
        b.rule(&writer(v), "_", &writer(v - 1), "1", Move::Right);
    }
    if needs_bounce {
        // The cell left of the head is always blank here (erased input or
        // the cell before the input), and the tape no longer changes.
        b.rule("bl", "_", "br", "_", Move::Right)
            .rule("br", "_", "bl", "_", Move::Left)
            .rule("br", "1", "bl", "1", Move::Left);
    }
    if needs_grow {
        b.rule("grow", "_", "grow", "1", Move::Right)
            .rule("grow", "1", "grow", "1", Move::Right);
    }
    b.build().expect("generated table machine is well formed")
}
