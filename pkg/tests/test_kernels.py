"""Backend parity for the relation-matrix kernels."""

import random

import numpy as np
import pytest

from fbv_prover import kernels
from fbv_prover.kernels import CP, GT, LT, PR
from fbv_prover.relweb import check_s1_s7, web_of
from fbv_prover.syntax import parse

from families import random_flat_distinct

BACKENDS = sorted(kernels._BACKENDS)


@pytest.fixture
def restore_backend():
    prev = kernels.active_backend()
    yield
    kernels.set_backend(prev)


def random_candidate_matrix(rng, n):
    m = np.zeros((n, n), dtype=np.uint8)
    for i in range(n):
        for j in range(i + 1, n):
            bits = rng.choice([LT, GT, PR, CP])
            m[i, j] = bits
            m[j, i] = {LT: GT, GT: LT, PR: PR, CP: CP}[int(bits)]
    return m


def test_set_backend_rejects_unknown():
    with pytest.raises(ValueError):
        kernels.set_backend("fortran")


def test_backends_agree_on_random_candidates(restore_backend):
    rng = random.Random(17)
    for _ in range(120):
        n = rng.randint(2, 7)
        m = random_candidate_matrix(rng, n)
        results = {}
        for backend in BACKENDS:
            kernels.set_backend(backend)
            results[backend] = (
                tuple(kernels.s4_witness(m)),
                tuple(kernels.s6_witness(m)),
                tuple(kernels.s7_witness(m)),
            )
        vals = list(results.values())
        assert all(v == vals[0] for v in vals), results


def test_backends_agree_on_real_webs(restore_backend):
    rng = random.Random(19)
    for _ in range(60):
        s = random_flat_distinct(rng, max_pairs=4)
        w = web_of(s)
        pairs = np.asarray(w.dual_pairs() or [(0, 0)], dtype=np.int64)
        per_backend = {}
        for backend in BACKENDS:
            kernels.set_backend(backend)
            ainc_vals = tuple(kernels.ainc_count(w.matrix, i, j)
                              for i, j in pairs)
            per_backend[backend] = (
                ainc_vals, tuple(kernels.c2_witness(w.matrix, pairs)))
        vals = list(per_backend.values())
        assert all(v == vals[0] for v in vals)


def test_check_s1_s7_same_under_both_backends(restore_backend):
    w = web_of(parse("[a,b,(-b,[(-a,c),-c])]"))
    out = {}
    for backend in BACKENDS:
        kernels.set_backend(backend)
        out[backend] = check_s1_s7(w)
    vals = list(out.values())
    assert all(v == vals[0] for v in vals)


def test_env_flag_selects_backend(monkeypatch):
    monkeypatch.setenv("FBV_PROVER_KERNELS", "numpy")
    assert kernels._default_backend() == "numpy"
    monkeypatch.setenv("FBV_PROVER_KERNELS", "cobol")
    with pytest.raises(ValueError):
        kernels._default_backend()
    monkeypatch.delenv("FBV_PROVER_KERNELS")
    assert kernels._default_backend() in kernels._BACKENDS
