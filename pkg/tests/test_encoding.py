import json
import random

import pytest

from matbispec.algebra import MatC, MatLaurent, MatPoly
from matbispec.bispectral import synthesize_B
from matbispec.encoding import (
    decode_diffop,
    decode_gr,
    decode_laurent,
    decode_mat,
    decode_poly,
    decode_potential,
    dumps,
    encode_diffop,
    encode_gr,
    encode_laurent,
    encode_mat,
    encode_poly,
)
from matbispec.fixtures import n1_potential
from support import rand_gr, rand_mat, rand_poly


def test_scalar_roundtrip():
    rng = random.Random(0)
    for _ in range(50):
        v = rand_gr(rng)
        assert decode_gr(json.loads(json.dumps(encode_gr(v)))) == v


def test_matrix_and_poly_roundtrip():
    rng = random.Random(1)
    m = rand_mat(rng, 3)
    assert decode_mat(encode_mat(m)) == m
    p = rand_poly(rng, 2, 3)
    assert decode_poly(json.loads(dumps(encode_poly(p)))) == p


def test_laurent_roundtrip():
    v = MatLaurent(MatC.scalar(2, -2), [MatC.identity(2)], 4)
    assert decode_laurent(encode_laurent(v)) == v
    assert isinstance(decode_potential(encode_laurent(v)), MatLaurent)
    assert isinstance(decode_potential(encode_poly(n1_potential())), MatPoly)


def test_diffop_roundtrip():
    V = n1_potential()
    op = synthesize_B(V, V)
    assert decode_diffop(json.loads(dumps(encode_diffop(op)))) == op


def test_encoding_is_canonical_text():
    m = MatC([[1, 0], [0, -1]])
    assert encode_mat(m)["entries"][1][1] == {"re": "-1", "im": "0"}
    assert dumps(encode_mat(m)) == dumps(encode_mat(decode_mat(encode_mat(m))))


@pytest.mark.parametrize(
    "bad",
    [
        {"rows": 1, "cols": 1},
        {"rows": 2, "cols": 1, "entries": [[{"re": "1"}]]},
        {"rows": 1, "cols": 1, "entries": [[{"re": "0.5"}]]},
        {"rows": 1, "cols": 1, "entries": [[{"re": 1.5}]]},
    ],
)
def test_malformed_matrices_rejected(bad):
    with pytest.raises(ValueError):
        decode_mat(bad)
