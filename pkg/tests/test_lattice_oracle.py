import math

import numpy as np
import pytest
from scipy import special

from ilmf.lattice_oracle import compositions, inc_poch, scalar_2f1, scalar_ilmf, scalar_phi2, scalar_psi2


@pytest.mark.parametrize("M, n", [(0, 1), (4, 1), (5, 2), (6, 3), (3, 4)])
def test_composition_counts(M, n):
    rows = compositions(M, n)
    assert len(rows) == math.comb(M + n - 1, n - 1)
    assert np.all(rows.sum(axis=1) == M)
    assert len({tuple(r) for r in rows}) == len(rows)


def test_inc_poch_decomposes():
    M = np.arange(8)
    total = inc_poch("lower", 1.3, 0.7, M) + inc_poch("upper", 1.3, 0.7, M)
    assert np.allclose(total, special.poch(1.3, M), rtol=1e-13)


def test_gauss_against_scipy():
    assert abs(scalar_2f1("complete", 0.7, None, 1.3, 2.1, 0.4) - special.hyp2f1(0.7, 1.3, 2.1, 0.4)) < 1e-14


def test_appell_f1_reduction():
    # family D with equal variables collapses to 2F1(a, b1 + b2; c; z)
    got = scalar_ilmf("D", "complete", 0.7, None, [0.4, 0.9], [2.1], [0.3, 0.3])
    assert abs(got - special.hyp2f1(0.7, 1.3, 2.1, 0.3)) < 1e-14


def test_confluent_reductions():
    assert abs(scalar_psi2(1.1, [1.7], [0.6]) - special.hyp1f1(1.1, 1.7, 0.6)) < 1e-14
    assert abs(scalar_phi2([0.4, 0.9], 2.1, [0.5, 0.5]) - special.hyp1f1(1.3, 2.1, 0.5)) < 1e-14
