import unittest

import numpy as np

import lcsudkit.ffield as ffield
from lcsudkit.ffield import PrimeField, field_op, field_inv, batch_inv


class TestPrimeField(unittest.TestCase):
    def test_is_prime(self):
        primes = [2, 3, 5, 7, 65537, 2 ** 31 - 1, 2 ** 61 - 1]
        for p in primes:
            self.assertTrue(ffield.is_prime(p), p)
        for n in [0, 1, 4, 9, 15, 65535, 561, 2 ** 32 + 1]:
            self.assertFalse(ffield.is_prime(n), n)

    def test_not_prime(self):
        with self.assertRaises(ffield.NotPrime):
            PrimeField(15)
        with self.assertRaises(ffield.NotPrime):
            PrimeField(1)
        with self.assertRaises(ffield.NotPrime):
            PrimeField(2 ** 64 + 13)

    def test_canonical(self):
        f = PrimeField(7)
        assert f(8).value == 1
        assert f(-1).value == 6
        with self.assertRaises(ValueError):
            ffield.FieldElement(7, f)

    def test_dtype(self):
        self.assertIs(PrimeField(65537).dtype, np.int64)
        self.assertIs(PrimeField(2 ** 31 - 1).dtype, np.int64)
        self.assertIs(PrimeField(2 ** 61 - 1).dtype, object)
        self.assertTrue(PrimeField(65537).dot_safe(1000))
        self.assertFalse(PrimeField(2 ** 31 - 1).dot_safe(2 ** 10))

    def test_require_points(self):
        PrimeField(7).require_points(7)
        with self.assertRaises(ffield.FieldTooSmall):
            PrimeField(5).require_points(6)


class TestFieldOps(unittest.TestCase):
    def test_field_op(self):
        f = PrimeField(7)
        self.assertEqual(field_op('add', f(3), f(5)), f(1))
        self.assertEqual(field_op('sub', f(3), f(5)), f(5))
        for x in range(7):
            self.assertEqual(field_op('mul', f(1), f(x)), f(x))

        g = PrimeField(65537)
        self.assertEqual(field_op('mul', g(65536), g(65536)).value, 1)
        with self.assertRaises(ValueError):
            field_op('div', f(1), f(2))

    def test_mismatch(self):
        with self.assertRaises(ffield.FieldMismatch):
            field_op('add', PrimeField(7)(1), PrimeField(11)(1))
        with self.assertRaises(ffield.FieldMismatch):
            batch_inv([PrimeField(7)(1), PrimeField(11)(1)])

    def test_field_inv(self):
        f = PrimeField(7)
        self.assertEqual(field_inv(f(2)).value, 4)
        self.assertEqual(field_inv(f(1)).value, 1)
        self.assertEqual(field_inv(PrimeField(65537)(3)).value, 21846)
        with self.assertRaises(ffield.DivisionByZero):
            field_inv(f(0))

    def test_batch_inv(self):
        f = PrimeField(7)
        self.assertEqual([x.value for x in batch_inv([f(2), f(3)])], [4, 5])
        self.assertEqual([x.value for x in batch_inv([f(1)])], [1])
        self.assertEqual(batch_inv([]), [])
        with self.assertRaises(ffield.DivisionByZero) as cm:
            batch_inv([f(2), f(0), f(3)])
        self.assertEqual(cm.exception.index, 1)

    def test_batch_inv_random(self):
        f = PrimeField(65537)
        rng = np.random.default_rng(11)
        values = [f(int(x)) for x in rng.integers(1, f.p, size=200)]
        self.assertEqual(batch_inv(values), [field_inv(x) for x in values])

    def test_ring_laws(self):
        f = PrimeField(65537)
        rng = np.random.default_rng(5)
        triples = rng.integers(0, f.p, size=(10000, 3))
        for x, y, z in triples:
            a, b, c = f(int(x)), f(int(y)), f(int(z))
            assert a + b == b + a
            assert a * b == b * a
            assert a * (b + c) == a * b + a * c
            if not a.is_zero():
                assert a * a.inverse() == f.one


if __name__ == '__main__':
    unittest.main()
