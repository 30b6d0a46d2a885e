//! Unoptimized reference implementation of Wick's theorem.
//!
//! Works on raw ladder sequences in written order and enumerates every
//! contraction pattern explicitly. Only used to cross-check [`super::wick`].

use super::{FermionOperator, Term};
use crate::bits::iter_bits;
use num_complex::Complex64;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Ladder {
    pub mode: usize,
    pub dagger: bool,
}

/// Raw sequence of a canonical string, in written order.
pub fn sequence(t: &Term) -> Vec<Ladder> {
    iter_bits(t.create)
        .map(|mode| Ladder { mode, dagger: true })
        .chain(iter_bits(t.annihilate).map(|mode| Ladder { mode, dagger: false }))
        .collect()
}

fn contraction(left: Ladder, right: Ladder, reference: u128) -> f64 {
    if left.mode != right.mode {
        return 0.0;
    }
    let occupied = reference & (1 << left.mode) != 0;
    match (left.dagger, right.dagger) {
        (true, false) if occupied => 1.0,
        (false, true) if !occupied => 1.0,
        _ => 0.0,
    }
}

fn permutation_sign(order: &[usize]) -> f64 {
    let mut inversions = 0;
    for i in 0..order.len() {
        for j in i + 1..order.len() {
            if order[i] > order[j] {
                inversions += 1;
            }
        }
    }
    if inversions % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

#[derive(Clone, Copy, PartialEq)]
enum Slot {
    Open,
    Free,
    Paired,
}

/// Normal-ordered coefficients of `coeff * seq` with respect to `reference`.
pub fn normal_order_sequence(seq: &[Ladder], coeff: Complex64, reference: u128, out: &mut FermionOperator) {
    let mut slots = vec![Slot::Open; seq.len()];
    let mut pairs = Vec::new();
    enumerate(seq, &mut slots, &mut pairs, reference, &mut |pairs, slots| {
        let rest: Vec<usize> = (0..seq.len()).filter(|&k| slots[k] == Slot::Free).collect();
        let mut order: Vec<usize> = pairs.iter().flat_map(|&(i, j)| [i, j]).collect();
        order.extend(&rest);
        let mut sign = permutation_sign(&order);
        // canonical order inside {...}: creators ascending, then annihilators ascending
        let mut keyed: Vec<(usize, usize)> = rest
            .iter()
            .enumerate()
            .map(|(pos, &k)| {
                let l = seq[k];
                (if l.dagger { l.mode } else { 1000 + l.mode }, pos)
            })
            .collect();
        keyed.sort();
        if keyed.windows(2).any(|w| w[0].0 == w[1].0) {
            return;
        }
        sign *= permutation_sign(&keyed.iter().map(|&(_, pos)| pos).collect::<Vec<_>>());
        let (mut create, mut annihilate) = (0u128, 0u128);
        for &k in &rest {
            if seq[k].dagger {
                create |= 1 << seq[k].mode;
            } else {
                annihilate |= 1 << seq[k].mode;
            }
        }
        out.add_term(Term::new(create, annihilate), coeff * sign);
    });
}

fn enumerate(
    seq: &[Ladder],
    slots: &mut [Slot],
    pairs: &mut Vec<(usize, usize)>,
    reference: u128,
    visit: &mut dyn FnMut(&[(usize, usize)], &[Slot]),
) {
    let Some(i) = slots.iter().position(|s| *s == Slot::Open) else {
        visit(pairs, slots);
        return;
    };
    slots[i] = Slot::Free;
    enumerate(seq, slots, pairs, reference, visit);
    for j in i + 1..seq.len() {
        if slots[j] != Slot::Open || contraction(seq[i], seq[j], reference) == 0.0 {
            continue;
        }
        slots[i] = Slot::Paired;
        slots[j] = Slot::Paired;
        pairs.push((i, j));
        enumerate(seq, slots, pairs, reference, visit);
        pairs.pop();
        slots[j] = Slot::Open;
    }
    slots[i] = Slot::Open;
}

/// Normal-ordered form of a bare operator, term by term.
pub fn normal_order(op: &FermionOperator, reference: u128) -> FermionOperator {
    let mut out = FermionOperator::zero(op.n_modes());
    for (t, c) in op.terms() {
        normal_order_sequence(&sequence(t), *c, reference, &mut out);
    }
    out.compressed()
}

/// Normal-ordered form of the raw product `x * y`, without forming the product.
pub fn normal_order_product(x: &FermionOperator, y: &FermionOperator, reference: u128) -> FermionOperator {
    let mut out = FermionOperator::zero(x.n_modes());
    for (t1, c1) in x.terms() {
        for (t2, c2) in y.terms() {
            let mut seq = sequence(t1);
            seq.extend(sequence(t2));
            normal_order_sequence(&seq, c1 * c2, reference, &mut out);
        }
    }
    out.compressed()
}

/// `[x]_{1,2}` via the slow path, returned as normal-ordered coefficients.
pub fn truncate_12_normal(op: &FermionOperator, reference: u128) -> FermionOperator {
    normal_order(op, reference).filter(|t| t.rank().0 <= 2 && t.rank().1 <= 2)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hole_contraction() {
        // c_0 c†_0 with mode 0 empty in the reference: 1 - {c†_0 c_0}
        let seq = [Ladder { mode: 0, dagger: false }, Ladder { mode: 0, dagger: true }];
        let mut out = FermionOperator::zero(1);
        normal_order_sequence(&seq, Complex64::new(1.0, 0.0), 0, &mut out);
        assert_eq!(out.coefficient(&Term::IDENTITY), Complex64::new(1.0, 0.0));
        assert_eq!(out.coefficient(&Term::new(1, 1)), Complex64::new(-1.0, 0.0));
    }

    #[test]
    fn particle_contraction() {
        let seq = [Ladder { mode: 0, dagger: true }, Ladder { mode: 0, dagger: false }];
        let mut out = FermionOperator::zero(1);
        normal_order_sequence(&seq, Complex64::new(1.0, 0.0), 1, &mut out);
        assert_eq!(out.coefficient(&Term::IDENTITY), Complex64::new(1.0, 0.0));
        assert_eq!(out.coefficient(&Term::new(1, 1)), Complex64::new(1.0, 0.0));
    }
}
