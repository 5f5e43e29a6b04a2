"""Algebraic laws of the tree calculus and bookkeeping helpers."""
import numpy as np
from hypothesis import given, settings, strategies as st

from ctps import io
from ctps.induction import parse_signs
from ctps.morphism import braid, braid_inv, identity, obj
from ctps.zeta import transport_zeta
from conftest import model
from helpers import random_morphism, random_pair_with_hom, random_word
from oracles import random_unitary

MODELS = ("fib", "ising", "su2_3", "su2_4", "z3")
seeds = st.integers(min_value=0, max_value=2 ** 32 - 1)
laws = settings(max_examples=200, derandomize=True, deadline=None)


def _setup(seed):
    rng = np.random.default_rng(seed)
    return rng, model(MODELS[rng.integers(len(MODELS))])


@laws
@given(seeds)
def test_tensor_interchange(seed):
    rng, data = _setup(seed)
    (a, b), (c, e) = random_pair_with_hom(data, rng), random_pair_with_hom(data, rng)
    f, g = random_morphism(data, obj(*a), obj(*b), rng), random_morphism(data, obj(*c), obj(*e), rng)
    lhs = f.tensor(g)
    rhs = f.tensor(identity(data, obj(*e))) @ identity(data, obj(*a)).tensor(g)
    assert (lhs - rhs).norm() < 1e-9


@laws
@given(seeds)
def test_tensor_associative(seed):
    rng, data = _setup(seed)
    xs = [random_word(data, rng, 1, 1) for _ in range(3)]
    fs = [random_morphism(data, obj(*x), obj(*x), rng) for x in xs]
    assert ((fs[0].tensor(fs[1])).tensor(fs[2]) - fs[0].tensor(fs[1].tensor(fs[2]))).norm() < 1e-9


@laws
@given(seeds)
def test_adjoint_reverses_composition(seed):
    rng, data = _setup(seed)
    rho, tau = random_pair_with_hom(data, rng)
    f = random_morphism(data, obj(*rho), obj(*tau), rng)
    g = random_morphism(data, obj(*tau), obj(*tau), rng)
    assert ((g @ f).H - f.H @ g.H).norm() < 1e-12
    assert (f.tensor(g).H - f.H.tensor(g.H)).norm() < 1e-9


@laws
@given(seeds)
def test_braiding_natural_and_unitary(seed):
    rng, data = _setup(seed)
    (a, b), (c, e) = random_pair_with_hom(data, rng), random_pair_with_hom(data, rng)
    f, g = random_morphism(data, obj(*a), obj(*b), rng), random_morphism(data, obj(*c), obj(*e), rng)
    lhs = braid(data, obj(*b), obj(*e)) @ f.tensor(g)
    rhs = g.tensor(f) @ braid(data, obj(*a), obj(*c))
    assert (lhs - rhs).norm() < 1e-9
    c_ab = braid(data, obj(*a), obj(*c))
    assert (c_ab.H @ c_ab - identity(data, obj(*(a + c)))).norm() < 1e-9
    # braid_inv(X, Y) is the under-crossing X Y -> Y X
    assert (braid_inv(data, obj(*c), obj(*a)) @ c_ab - identity(data, obj(*(a + c)))).norm() < 1e-9


@laws
@given(seeds)
def test_transport_composes(seed):
    rng = np.random.default_rng(seed)
    summ = [(0, 0, 0), (2, 2, 0), (2, 2, 1)]
    zeta = {(i, j, k): complex(*rng.normal(size=2)) for i in range(3) for j in range(3) for k in range(3)}
    U, V = random_unitary(2, rng), random_unitary(2, rng)
    one = transport_zeta(summ, transport_zeta(summ, zeta, {(2, 2): U}), {(2, 2): V})
    both = transport_zeta(summ, zeta, {(2, 2): U @ V})
    assert max(abs(one[k] - both[k]) for k in zeta) < 1e-12


@settings(max_examples=300, derandomize=True)
@given(st.floats(allow_nan=False, allow_infinity=False), st.floats(allow_nan=False, allow_infinity=False))
def test_complex_serialization_round_trip(re, im):
    z = complex(re, im)
    back = io._complex(io.cnum(z), "x", "y")
    assert back == z
    assert io.dumps(io.cnum(z)) == io.dumps(io.cnum(back))


@settings(max_examples=50, derandomize=True)
@given(st.sampled_from(["+-", "-+", "++", "--", ("+", "-")]))
def test_parse_signs(spec):
    s = parse_signs(spec)
    assert len(s) == 2 and set(s) <= {"+", "-"}
