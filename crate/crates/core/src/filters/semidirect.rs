//! Elements of `G:X` written as pairs `(g, a)` with product
//! `(w, x)(y, z) = (w * x(y), x z)`.
//!
//! Conjugating `(1, s)` by `(g, 1)` gives `(g^-1 s(g), s)`, and for an
//! involutory automorphism `s` the two commute iff `(g^-1 s(g))^2 = 1`.

use crate::tables::ZOrder;

pub trait Group: Clone + PartialEq {
    fn identity() -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn inv(&self) -> Self;
}

/// A group together with automorphisms acting on it.
pub trait Automorphism<G: Group>: Clone + PartialEq {
    fn identity() -> Self;
    fn apply(&self, g: &G) -> G;
    fn compose(&self, other: &Self) -> Self;
}

#[derive(Debug, Clone, PartialEq)]
pub struct Pair<G, A> {
    pub elem: G,
    pub auto: A,
}

impl<G: Group, A: Automorphism<G>> Pair<G, A> {
    pub fn new(elem: G, auto: A) -> Self {
        Pair { elem, auto }
    }

    pub fn mul(&self, other: &Self) -> Self {
        Pair {
            elem: self.elem.mul(&self.auto.apply(&other.elem)),
            auto: self.auto.compose(&other.auto),
        }
    }

    pub fn commutes_with(&self, other: &Self) -> bool {
        self.mul(other) == other.mul(self)
    }
}

/// `g^-1 s(g)`: the first coordinate of `(1, s)` conjugated by `(g, 1)`.
pub fn frobenius_twist<G: Group, A: Automorphism<G>>(g: &G, s: &A) -> G {
    g.inv().mul(&s.apply(g))
}

/// Whether `(1, s)` commutes with `(z, s)`, read off the order of `z`:
/// they commute iff `z^2 = 1`. `None` when the order is not known.
pub fn frobenius_pair_commutes(z: ZOrder) -> Option<bool> {
    match z {
        ZOrder::One | ZOrder::Two => Some(true),
        ZOrder::Three => Some(false),
        ZOrder::TorusPower(_) | ZOrder::Unknown => None,
    }
}
