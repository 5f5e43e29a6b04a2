"""Random objects and morphisms for the property tests."""
import numpy as np

from ctps.morphism import Morphism, hom_dim, identity, obj
from ctps.skeletal import cup, cupbar


def random_word(data, rng, lo=1, hi=3):
    n = data.ring.rank
    return tuple(int(x) for x in rng.integers(0, n, size=rng.integers(lo, hi + 1)))


def random_morphism(data, X, Y, rng):
    k = hom_dim(data, X, Y)
    v = rng.normal(size=k) + 1j * rng.normal(size=k)
    return Morphism.from_vector(data, X, Y, v)


def random_pair_with_hom(data, rng, tries=50):
    """Words rho, tau with Hom(rho, tau) nonzero."""
    for _ in range(tries):
        rho, tau = random_word(data, rng), random_word(data, rng)
        if hom_dim(data, obj(*rho), obj(*tau)):
            return rho, tau
    rho = random_word(data, rng)
    return rho, rho


def composite_cup(data, word):
    """R_rho in Hom(id, rhobar rho) built from nested single cups."""
    if not word:
        return identity(data, ())
    a, rest = word[0], word[1:]
    inner = composite_cup(data, rest)
    rest_bar = obj(*[data.dual(x) for x in reversed(rest)])
    mid = identity(data, rest_bar).tensor(cup(data, a)).tensor(identity(data, obj(*rest)))
    return mid @ inner


def composite_cupbar(data, word):
    """Rbar_rho in Hom(id, rho rhobar)."""
    if not word:
        return identity(data, ())
    a, rest = word[0], word[1:]
    inner = composite_cupbar(data, rest)
    mid = identity(data, obj(a)).tensor(inner).tensor(identity(data, obj(data.dual(a))))
    return mid @ cupbar(data, a)
