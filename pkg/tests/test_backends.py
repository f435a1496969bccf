import os
import subprocess
import sys

import numpy as np
import pytest
from oracles import random_instance, random_model

from cmxtag.crf import BACKEND, available_backends, get_kernels

both = pytest.mark.skipif(len(available_backends()) < 2, reason="compiled kernels not built")


def _which_backend(env_value):
    env = dict(os.environ)
    env.pop("CMXTAG_PURE_PYTHON", None)
    if env_value is not None:
        env["CMXTAG_PURE_PYTHON"] = env_value
    out = subprocess.run(
        [sys.executable, "-c", "from cmxtag.crf import BACKEND; print(BACKEND)"],
        capture_output=True, text=True, env=env, check=True,
    )
    return out.stdout.strip()


def test_fallback_forced_by_environment():
    assert _which_backend("1") == "python"


@both
def test_compiled_is_default():
    assert _which_backend(None) == "cython"
    assert _which_backend("0") == "cython"


def test_unknown_backend():
    with pytest.raises(ValueError):
        get_kernels("fortran")


def test_default_backend_is_listed():
    assert BACKEND in available_backends()


@both
@pytest.mark.parametrize("seed", range(20))
def test_kernels_agree(seed):
    rng = np.random.default_rng(seed)
    L = int(rng.integers(1, 10))
    m = random_model(rng, 25, L, scale=1.5)
    inst, _ = random_instance(rng, 25, int(rng.integers(1, 15)), max_active=6)
    py, cy = get_kernels("python"), get_kernels("cython")
    args = (m.state_weights, inst.feat_ids, inst.offsets)
    e_py, e_cy = py.emissions(*args), cy.emissions(*args)
    np.testing.assert_allclose(e_py, e_cy, atol=1e-12)
    rest = (m.trans_weights, m.bos_weights, m.eos_weights)
    a1, z1 = py.forward(e_cy, *rest)
    a2, z2 = cy.forward(e_cy, *rest)
    np.testing.assert_allclose(a1, a2, atol=1e-10)
    assert z1 == pytest.approx(z2, abs=1e-10)
    b1, _ = py.backward(e_cy, *rest)
    b2, _ = cy.backward(e_cy, *rest)
    np.testing.assert_allclose(b1, b2, atol=1e-10)
    np.testing.assert_array_equal(py.viterbi(e_cy, *rest), cy.viterbi(e_cy, *rest))
