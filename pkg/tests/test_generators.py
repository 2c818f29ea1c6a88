import itertools
import math

import numpy as np
import pytest

from conftest import contract, full_array
from fcgeig.bform import DenseForm, DiagPower, Identity2, QuadFormPower
from fcgeig.errors import InvalidSpec
from fcgeig.generators import BGenSpec, GenSpec, example6, gen_bform, gen_tensor, rng
from fcgeig.tensor import DenseTensor, SumUnaryTensor


class TestGenSpec:
    def test_fixed_shapes(self):
        assert (GenSpec("ex1").order, GenSpec("ex1").dim) == (3, 3)
        assert (GenSpec("EX6").order, GenSpec("EX6").dim) == (4, 3)
        with pytest.raises(InvalidSpec):
            GenSpec("ex1", 4, 3)

    @pytest.mark.parametrize(
        "kw", [{"family": "ex9", "order": 3, "dim": 3}, {"family": "ex2", "order": 3},
               {"family": "ex3", "order": 1, "dim": 3}, {"family": "ex5", "order": 3, "dim": 0}]
    )
    def test_invalid(self, kw):
        with pytest.raises(InvalidSpec):
            GenSpec(**kw)

    def test_bgen_invalid(self):
        with pytest.raises(InvalidSpec):
            BGenSpec("identity2", 4)
        with pytest.raises(InvalidSpec):
            BGenSpec("diagpower", 3)
        with pytest.raises(InvalidSpec):
            BGenSpec("ex8", 4, 1)
        with pytest.raises(InvalidSpec):
            gen_bform(BGenSpec("ex7", 2))

    def test_to_dict(self):
        assert GenSpec("ex3", 3, 5, 9).to_dict() == {"family": "ex3", "order": 3, "dim": 5, "seed": 9}


class TestTensors:
    def test_ex1_entry(self):
        A = gen_tensor(GenSpec("ex1"))
        assert A.entry((1, 2, 3)) == -0.1790
        assert A.entry((1, 1, 1)) == -0.1281

    def test_ex6_entry(self):
        assert example6().entry((1, 1, 1, 1)) == 0.2883
        assert example6().entry((3, 2, 3, 2)) == 0.2127

    def test_ex2_single(self):
        A = gen_tensor(GenSpec("ex2", 3, 1))
        assert A.values.tolist() == [math.sin(3)]

    def test_ex2_formula(self):
        A = gen_tensor(GenSpec("ex2", 4, 3))
        for idx in itertools.product(range(1, 4), repeat=4):
            assert A.entry(idx) == pytest.approx(math.sin(sum(idx)), abs=1e-15)

    def test_ex4_g(self):
        A = gen_tensor(GenSpec("ex4", 3, 2))
        assert isinstance(A, SumUnaryTensor)
        np.testing.assert_allclose(A.g, [math.atan(-0.5), math.atan(1.0)], rtol=1e-15)

    def test_ex3_values(self):
        A = gen_tensor(GenSpec("ex3", 3, 4, 5))
        assert isinstance(A, DenseTensor)
        assert A.nnz == math.comb(6, 3)
        assert np.all(np.abs(A.values) <= 1.0)

    def test_ex5_range(self):
        A = gen_tensor(GenSpec("ex5", 6, 100, 0))
        assert A.g.shape == (100,) and np.all(np.abs(A.g) <= 1)

    @pytest.mark.parametrize("fam", ["ex4", "ex5"])
    @pytest.mark.parametrize("order,dim", [(2, 5), (3, 4), (4, 3)])
    def test_sumunary_vs_dense(self, fam, order, dim):
        A = gen_tensor(GenSpec(fam, order, dim, 3))
        entries = [
            (tuple(i + 1 for i in idx), float(A.g[list(idx)].sum()))
            for idx in itertools.combinations_with_replacement(range(dim), order)
        ]
        T = full_array(order, dim, entries)
        x = np.random.default_rng(1).standard_normal(dim)
        assert A.txm(x) == pytest.approx(contract(T, x, order), rel=1e-12)
        np.testing.assert_allclose(A.txm1(x), contract(T, x, order - 1), rtol=1e-12)

    @pytest.mark.parametrize("fam,order,dim", [("ex3", 4, 5), ("ex5", 3, 9)])
    def test_deterministic(self, fam, order, dim):
        a = gen_tensor(GenSpec(fam, order, dim, 42))
        b = gen_tensor(GenSpec(fam, order, dim, 42))
        c = gen_tensor(GenSpec(fam, order, dim, 43))
        get = (lambda t: t.values) if fam == "ex3" else (lambda t: t.g)
        assert get(a).tobytes() == get(b).tobytes()
        assert get(a).tobytes() != get(c).tobytes()

    def test_ex3_symmetric(self):
        A = gen_tensor(GenSpec("ex3", 3, 3, 0))
        for idx in itertools.combinations_with_replacement(range(1, 4), 3):
            vals = {A.entry(p) for p in itertools.permutations(idx)}
            assert len(vals) == 1

    def test_rng_is_pcg64(self):
        assert isinstance(rng(0).bit_generator, np.random.PCG64)
        assert rng(5).random() == np.random.Generator(np.random.PCG64(5)).random()


class TestForms:
    def test_identity(self):
        B = gen_bform(BGenSpec("identity2", dim=4))
        assert isinstance(B, Identity2)
        x = np.arange(1.0, 5.0)
        assert B.phi(x) == x @ x

    def test_diagpower(self):
        B = gen_bform(BGenSpec("diagpower", 4, 3))
        assert isinstance(B, DiagPower) and B.order == 4

    def test_ex7(self):
        B = gen_bform(BGenSpec("ex7", 4, 10, 1))
        assert isinstance(B, QuadFormPower)
        D = B.D
        np.testing.assert_array_equal(D, D.T)
        g = np.random.default_rng(0)
        for _ in range(50):
            x = g.standard_normal(10)
            assert x @ D @ x >= 0.1 * (x @ x) * (1 - 1e-12)
        assert np.linalg.eigvalsh(D).min() >= 0.1 - 1e-12

    def test_ex8_positive(self):
        B = gen_bform(BGenSpec("ex8", 4, 6, 2))
        assert isinstance(B, DenseForm)
        g = np.random.default_rng(0)
        for _ in range(100):
            x = g.standard_normal(6)
            assert B.phi(x / np.linalg.norm(x)) > 0

    def test_ex8_diagonal_shift(self):
        order, dim = 4, 3
        B = gen_bform(BGenSpec("ex8", order, dim, 7))
        T = B.tensor
        off = [(tuple(r + 1), v) for r, v in zip(T.indices, T.values) if r[0] != r[-1]]
        F = np.abs(full_array(order, dim, off))
        s = 1.01 * F.reshape(dim, -1).sum(axis=1).max()
        for i in range(1, dim + 1):
            assert T.entry((i,) * order) == pytest.approx(s, rel=1e-13)
        assert all(abs(v) <= 1 for _, v in off)
