import itertools

import pytest
from hypothesis import given, strategies as st

from ncfkit.canalyze import (
    CanalyzingTriple,
    ConstantFunction,
    ExtendedMonomial,
    InessentialVariable,
    LayerStructure,
    NoCanalyzingVariable,
    NoCanalyzingVariableAtDepth,
    canalyzing_triples,
    factor_layer,
    layer_number,
    most_dominant_variables,
    ncf_decompose,
    reconstruct,
)
from ncfkit.core import TruthTable, essential_variables, hamming_weight, parse_anf, restrict, truth_table_from_anf
from ncfkit.enumeration import enumerate_ncf, sample_ncf

T = CanalyzingTriple


def table(text, n):
    return truth_table_from_anf(parse_anf(text, n))


def brute_table(n, fn):
    bits = 0
    for t in range(1 << n):
        xs = [(t >> k) & 1 for k in range(n)]
        bits |= (fn(*xs) & 1) << t
    return TruthTable(n, bits)


ONE_LAYER = LayerStructure(3, (ExtendedMonomial(((1, 0), (2, 1), (3, 0))),), 1)
TWO_LAYER = LayerStructure(3, (ExtendedMonomial(((1, 1),)), ExtendedMonomial(((2, 0), (3, 1)))), 1)
Y_STRUCT = LayerStructure(
    5,
    (ExtendedMonomial(((1, 0), (3, 1))), ExtendedMonomial(((4, 0),)), ExtendedMonomial(((2, 0), (5, 1)))),
    0,
)


# --- canalyzing triples ---------------------------------------------------

def test_triples_and():
    assert canalyzing_triples(TruthTable.from_bin("0001")) == [T(1, 0, 0), T(2, 0, 0)]


def test_triples_xor():
    assert canalyzing_triples(TruthTable.from_bin("0110")) == []


def test_triples_N(N):
    assert canalyzing_triples(N) == [T(2, 1, 1), T(3, 0, 1)]


def test_triples_constant():
    got = canalyzing_triples(TruthTable.constant(2, 1))
    assert got == [T(i, a, 1) for i in (1, 2) for a in (0, 1)]


@given(st.integers(0, 3), st.data())
def test_triples_match_definition(n, data):
    f = TruthTable(n, data.draw(st.integers(0, (1 << (1 << n)) - 1)))
    expected = []
    for i in range(1, n + 1):
        for a in (0, 1):
            vals = {f[t] for t in range(1 << n) if (t >> (i - 1)) & 1 == a}
            if len(vals) == 1:
                expected.append(T(i, a, vals.pop()))
    assert canalyzing_triples(f) == expected


# --- one peel -------------------------------------------------------------

def test_factor_layer_single_zero():
    f = brute_table(3, lambda x1, x2, x3: (x1 & (x2 ^ 1) & x3) ^ 1)
    zeros = [t for t in range(8) if f[t] == 0]
    assert zeros == [0b101]  # single zero at (x1,x2,x3) = (1,0,1)
    assert canalyzing_triples(f) == [T(1, 0, 1), T(2, 1, 1), T(3, 0, 1)]
    peel = factor_layer(f)
    assert peel.monomial.factors == ((1, 0), (2, 1), (3, 0))
    assert peel.value == 1
    assert peel.residual == TruthTable.constant(0, 1)


def test_factor_layer_literal_spec_function():
    # (x1+1) x2 x3 + 1 vanishes only at (0,1,1)
    f = brute_table(3, lambda x1, x2, x3: ((x1 ^ 1) & x2 & x3) ^ 1)
    assert [t for t in range(8) if f[t] == 0] == [0b110]
    peel = factor_layer(f)
    assert canalyzing_triples(f) == [T(1, 1, 1), T(2, 0, 1), T(3, 0, 1)]
    assert peel.monomial.factors == ((1, 1), (2, 0), (3, 0))
    assert peel.value == 1 and peel.residual == TruthTable.constant(0, 1)


def test_factor_layer_N(N):
    peel = factor_layer(N)
    assert peel.monomial.factors == ((2, 1), (3, 0))
    assert peel.value == 1
    assert peel.residual_vars == (1, 4)
    assert peel.residual == TruthTable.from_bin("0110")


def test_factor_layer_no_canalyzing():
    with pytest.raises(NoCanalyzingVariable):
        factor_layer(TruthTable.from_bin("0110"))


# --- full decomposition ---------------------------------------------------

def test_decompose_Y(Y):
    v = ncf_decompose(Y)
    assert v.is_ncf
    assert v.structure == Y_STRUCT
    assert v.structure.composition == (2, 1, 2)
    assert hamming_weight(Y) == 5


def test_decompose_N(N):
    v = ncf_decompose(N)
    assert not v.is_ncf
    reason = v.reason
    assert isinstance(reason, NoCanalyzingVariableAtDepth)
    assert reason.depth == 2
    assert reason.variables == (1, 4)
    assert reason.summary() == "x1 + x4"
    assert canalyzing_triples(reason.residual) == []


@pytest.mark.parametrize("a1, a2, c", list(itertools.product((0, 1), repeat=3)))
def test_decompose_two_variable_ncfs(a1, a2, c):
    f = brute_table(2, lambda x1, x2: ((x1 ^ a1) & (x2 ^ a2)) ^ c)
    v = ncf_decompose(f)
    assert v.is_ncf
    assert v.structure.composition == (2,)
    assert v.structure.b == c
    assert v.structure.layers[0].factors == ((1, a1), (2, a2))


def test_decompose_constant_and_inessential():
    assert ncf_decompose(TruthTable.constant(0, 1)).reason == ConstantFunction(1)
    assert ncf_decompose(TruthTable.constant(3, 0)).reason == ConstantFunction(0)
    f = table("x1*x2", 3)
    assert ncf_decompose(f).reason == InessentialVariable(3)


def test_decompose_degenerate_single_variable():
    for bits, b in ((0b10, 0), (0b01, 1)):
        v = ncf_decompose(TruthTable(1, bits))
        assert v.is_ncf and v.structure.degenerate
        assert v.structure.b == b
        assert reconstruct(v.structure) == TruthTable(1, bits)


def test_reconstruct_examples(Y):
    assert reconstruct(ONE_LAYER) == brute_table(3, lambda x1, x2, x3: (x1 & (x2 ^ 1) & x3) ^ 1)
    assert hamming_weight(reconstruct(ONE_LAYER)) == 7
    assert reconstruct(TWO_LAYER) == brute_table(3, lambda x1, x2, x3: ((x1 ^ 1) & ((x2 & (x3 ^ 1)) ^ 1)) ^ 1)
    assert reconstruct(Y_STRUCT) == Y


def test_layer_number_and_dominant():
    assert [layer_number(s) for s in (ONE_LAYER, TWO_LAYER, Y_STRUCT)] == [1, 2, 3]
    assert most_dominant_variables(ONE_LAYER) == {1, 2, 3}
    assert most_dominant_variables(TWO_LAYER) == {1}
    assert most_dominant_variables(Y_STRUCT) == {1, 3}


def test_structure_validation():
    m = ExtendedMonomial
    with pytest.raises(ValueError):
        LayerStructure(3, (m(((1, 0), (2, 0))), m(((2, 0), (3, 0)))), 0)  # overlap
    with pytest.raises(ValueError):
        LayerStructure(3, (m(((1, 0), (2, 0))), m(((3, 0),))), 0)  # k_r = 1
    with pytest.raises(ValueError):
        LayerStructure(3, (m(((1, 0), (2, 0))),), 0)  # x3 missing
    with pytest.raises(ValueError):
        m(((1, 0), (1, 1)))


def test_text_and_json_forms():
    assert Y_STRUCT.to_text() == "0 ⊕ (x1)(x3') [ (x4) [ (x2)(x5') ] ]"
    assert LayerStructure.from_text(Y_STRUCT.to_text()) == Y_STRUCT
    assert LayerStructure.from_text("0 + (x1)(x3') [ (x4) [ (x2)(x5') ] ]") == Y_STRUCT
    assert Y_STRUCT.to_json() == {"n": 5, "b": 0, "layers": [[[1, 0], [3, 1]], [[4, 0]], [[2, 0], [5, 1]]]}
    assert LayerStructure.from_json(Y_STRUCT.to_json()) == Y_STRUCT
    with pytest.raises(ValueError):
        LayerStructure.from_text("0 ⊕ (x1)(x2) [ (x3)(x4)")


@pytest.mark.parametrize("n", [2, 3, 4])
def test_text_json_round_trip_exhaustive(n):
    for s in enumerate_ncf(n):
        assert LayerStructure.from_text(s.to_text()) == s
        assert LayerStructure.from_json(s.to_json()) == s


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_uniqueness_exhaustive(n):
    for s in enumerate_ncf(n):
        f = reconstruct(s)
        assert essential_variables(f) == tuple(range(1, n + 1))
        v = ncf_decompose(f)
        assert v.is_ncf and v.structure == s
        assert len(s.layers[-1]) >= 2


@given(st.integers(2, 10), st.integers(0, 2**32 - 1))
def test_uniqueness_sampled(n, seed):
    s = sample_ncf(n, seed)
    assert ncf_decompose(reconstruct(s)).structure == s


@given(st.integers(3, 8), st.integers(0, 2**32 - 1), st.data())
def test_fixing_a_first_layer_variable(n, seed, data):
    # setting x_i to the non-canalyzing input strips it from the first layer
    s = sample_ncf(n, seed)
    i, a = data.draw(st.sampled_from(s.layers[0].factors))
    g = restrict(reconstruct(s), i, a ^ 1)
    rename = {v: v - (v > i) for v in range(1, n + 1) if v != i}
    first = tuple((rename[v], sa) for v, sa in s.layers[0].factors if v != i)
    rest = tuple(ExtendedMonomial(tuple((rename[v], sa) for v, sa in m.factors)) for m in s.layers[1:])
    if first:
        expected = LayerStructure(n - 1, (ExtendedMonomial(first),) + rest, s.b)
    else:
        # a one-variable first layer disappears and the outer constant flips
        expected = LayerStructure(n - 1, rest, s.b ^ 1)
    assert ncf_decompose(g).structure == expected


def test_large_n_decomposition():
    s = sample_ncf(20, 99)
    f = reconstruct(s)
    assert ncf_decompose(f).structure == s
