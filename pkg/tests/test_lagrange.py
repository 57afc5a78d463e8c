import itertools
import unittest

import numpy as np

from lcsudkit.ffield import FieldTooSmall, PrimeField
from lcsudkit.lagrange import (DuplicateNodes, EvaluationPoints, encode_block, generate_points, interpolate_at,
                               lagrange_weights)
from lcsudkit.matrix import Axis, DimError, FieldMatrix, matrices_equal, partition


class TestPoints(unittest.TestCase):
    def test_consecutive(self):
        pts = generate_points(PrimeField(7), 4, 2)
        self.assertEqual([b.value for b in pts.betas], [0, 1])
        self.assertEqual([a.value for a in pts.alphas], [2, 3, 4, 5])
        self.assertEqual(pts.alpha(1).value, 2)
        self.assertEqual(pts.beta(2).value, 1)

    def test_field_too_small(self):
        with self.assertRaises(FieldTooSmall):
            generate_points(PrimeField(5), 4, 2)

    def test_distinct(self):
        pts = generate_points(PrimeField(65537), 20, 5)
        values = [x.value for x in pts.betas + pts.alphas]
        self.assertEqual(len(values), 25)
        self.assertEqual(len(set(values)), 25)

    def test_random_rule(self):
        f = PrimeField(65537)
        pts = generate_points(f, 20, 5, seed=3, rule='random')
        again = generate_points(f, 20, 5, seed=3, rule='random')
        self.assertEqual(pts, again)
        self.assertEqual(len(set(pts.betas + pts.alphas)), 25)
        with self.assertRaises(ValueError):
            generate_points(f, 4, 2, rule='chebyshev')

    def test_invalid_points(self):
        f = PrimeField(7)
        with self.assertRaises(DuplicateNodes):
            EvaluationPoints(f, (f(0), f(1)), (f(1), f(2)))
        with self.assertRaises(DuplicateNodes):
            EvaluationPoints(f, (f(0), f(0)), (f(1),))


class TestWeights(unittest.TestCase):
    def setUp(self):
        self.f = PrimeField(7)

    def test_at_node(self):
        w = lagrange_weights([self.f(0), self.f(1)], self.f(0))
        self.assertEqual([x.value for x in w], [1, 0])

    def test_off_node(self):
        w = lagrange_weights([self.f(0), self.f(1)], self.f(2))
        self.assertEqual([x.value for x in w], [6, 2])

    def test_duplicates(self):
        with self.assertRaises(DuplicateNodes):
            lagrange_weights([self.f(3), self.f(3)], self.f(1))

    def test_partition_of_unity(self):
        f = PrimeField(65537)
        rng = np.random.default_rng(9)
        for _ in range(50):
            k = int(rng.integers(1, 8))
            nodes = [f(int(x)) for x in rng.choice(f.p, size=k, replace=False)]
            z = f(int(rng.integers(0, f.p)))
            total = sum(x.value for x in lagrange_weights(nodes, z)) % f.p
            self.assertEqual(total, 1)


class TestCoding(unittest.TestCase):
    def setUp(self):
        self.f7 = PrimeField(7)
        self.f = PrimeField(65537)
        self.rng = np.random.default_rng(21)

    def test_scalar_fixture(self):
        f = self.f7
        parts = [FieldMatrix.from_rows(f, [[1]]), FieldMatrix.from_rows(f, [[3]])]
        betas = [f(0), f(1)]
        x2 = encode_block(parts, betas, f(2))
        x3 = encode_block(parts, betas, f(3))
        self.assertEqual(x2.tolist(), [[5]])
        self.assertEqual(x3.tolist(), [[0]])
        self.assertEqual(interpolate_at([f(2), f(3)], [x2, x3], f(0)).tolist(), [[1]])
        self.assertEqual(interpolate_at([f(2), f(3)], [x2, x3], f(1)).tolist(), [[3]])

    def test_at_beta(self):
        pts = generate_points(self.f, 6, 2)
        parts = partition(FieldMatrix.random(self.f, 8, 3, self.rng), Axis.ROW, 2)
        for i, beta in enumerate(pts.betas):
            self.assertTrue(matrices_equal(encode_block(parts, pts.betas, beta), parts[i]))

    def test_constant(self):
        pts = generate_points(self.f, 6, 2)
        m = FieldMatrix.random(self.f, 2, 2, self.rng)
        for alpha in pts.alphas:
            self.assertTrue(matrices_equal(encode_block([m, m], pts.betas, alpha), m))

    def test_single_node(self):
        v = FieldMatrix.random(self.f, 2, 3, self.rng)
        self.assertTrue(matrices_equal(interpolate_at([self.f(5)], [v], self.f(5)), v))

    def test_dim_errors(self):
        pts = generate_points(self.f, 6, 2)
        a = FieldMatrix.zeros(self.f, 2, 2)
        with self.assertRaises(DimError):
            encode_block([a, FieldMatrix.zeros(self.f, 3, 2)], pts.betas, pts.alpha(1))
        with self.assertRaises(DimError):
            encode_block([a], pts.betas, pts.alpha(1))
        with self.assertRaises(DimError):
            interpolate_at([self.f(1), self.f(2)], [a], self.f(0))
        with self.assertRaises(DuplicateNodes):
            interpolate_at([self.f(1), self.f(1)], [a, a], self.f(0))

    def test_exact_recovery(self):
        """
        jede L-teilmenge der auswertungspunkte rekonstruiert alle teile.
        """
        l, n = 3, 6
        pts = generate_points(self.f, n, l)
        parts = partition(FieldMatrix.random(self.f, 9, 4, self.rng), Axis.ROW, l)
        coded = {i: encode_block(parts, pts.betas, pts.alpha(i)) for i in range(1, n + 1)}
        for subset in itertools.combinations(range(1, n + 1), l):
            nodes = [pts.alpha(i) for i in subset]
            values = [coded[i] for i in subset]
            for j, beta in enumerate(pts.betas):
                self.assertTrue(matrices_equal(interpolate_at(nodes, values, beta), parts[j]))

    def test_too_few_nodes(self):
        l = 3
        pts = generate_points(self.f, 6, l)
        failures = 0
        for _ in range(100):
            parts = partition(FieldMatrix.random(self.f, 6, 2, self.rng), Axis.ROW, l)
            nodes = [pts.alpha(1), pts.alpha(2)]
            values = [encode_block(parts, pts.betas, x) for x in nodes]
            if not matrices_equal(interpolate_at(nodes, values, pts.beta(1)), parts[0]):
                failures += 1
        self.assertGreaterEqual(failures, 99)


if __name__ == '__main__':
    unittest.main()
