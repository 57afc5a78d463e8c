import unittest

from lcsudkit.assignment import (AvailabilityRealization, EnumerationTooLarge, InsufficientMachines, ParamError,
                                 SystemParams, cyclic_assignment, enumerate_realizations, mod1, realization_count)


class TestMod1(unittest.TestCase):
    def test_examples(self):
        self.assertEqual(mod1(6, 6), 6)
        self.assertEqual(mod1(7, 6), 1)
        self.assertEqual(mod1(1, 1), 1)

    def test_range_and_period(self):
        for m in range(1, 9):
            for a in range(1, 40):
                r = mod1(a, m)
                assert 1 <= r <= m
                assert mod1(a + m, m) == r
                assert (r - a) % m == 0


class TestSystemParams(unittest.TestCase):
    def test_valid(self):
        params = SystemParams(6, 2, 1, 1)
        self.assertEqual(params.group_size, 3)
        self.assertEqual(params.min_available, 5)
        self.assertEqual(SystemParams(20, 5, 0, 15).min_available, 5)

    def test_invalid(self):
        with self.assertRaises(ParamError):
            SystemParams(6, 0, 1, 0)
        with self.assertRaises(ParamError):
            SystemParams(6, 2, -1, 0)
        with self.assertRaises(ParamError):
            SystemParams(2, 2, 1, 0)
        with self.assertRaises(ParamError):
            SystemParams(6, 2, 1, 4)

    def test_realization_bounds(self):
        params = SystemParams(6, 2, 1, 1)
        AvailabilityRealization((1, 2, 3, 4, 5)).check_against(params)
        with self.assertRaises(ParamError):
            AvailabilityRealization((1, 2, 3, 4)).check_against(params)
        with self.assertRaises(ParamError):
            AvailabilityRealization((1, 2, 3, 4, 7)).check_against(params)


class TestCyclicAssignment(unittest.TestCase):
    def test_six_machines(self):
        w = cyclic_assignment(AvailabilityRealization.full(6), 2, 1)
        expected = [{1, 2, 3}, {2, 3, 4}, {3, 4, 5}, {4, 5, 6}, {5, 6, 1}, {6, 1, 2}]
        self.assertEqual([set(g) for g in w.groups], expected)
        self.assertEqual(w.group(5), (5, 6, 1))
        self.assertEqual(w.groups_of(1), [1, 5, 6])
        self.assertTrue(w.is_regular())

    def test_minimal(self):
        realization = AvailabilityRealization((2, 5, 9))
        w = cyclic_assignment(realization, 2, 1)
        for g in w.groups:
            self.assertEqual(set(g), {2, 5, 9})

    def test_relabeled(self):
        realization = AvailabilityRealization((2, 4, 5, 7, 8, 9))
        w = cyclic_assignment(realization, 2, 1)
        self.assertEqual(w.group(1), (2, 4, 5))
        self.assertEqual(w.group(6), (9, 2, 4))
        base = cyclic_assignment(AvailabilityRealization.full(6), 2, 1)
        for g1, g2 in zip(base.groups, w.groups):
            self.assertEqual(tuple(realization.machine(i) for i in g1), g2)

    def test_insufficient(self):
        with self.assertRaises(InsufficientMachines):
            cyclic_assignment(AvailabilityRealization((1, 2)), 2, 1)

    def test_unsorted_members(self):
        realization = AvailabilityRealization((5, 1, 3, 3))
        self.assertEqual(realization.members, (1, 3, 5))
        self.assertEqual(realization.rank(5), 3)
        with self.assertRaises(KeyError):
            realization.rank(2)

    def test_regular_all(self):
        for n in range(3, 9):
            for l, s in ((1, 0), (2, 0), (2, 1), (3, 0)):
                if n < l + s:
                    continue
                params = SystemParams(n, l, s, n - l - s)
                for realization in enumerate_realizations(params):
                    w = cyclic_assignment(realization, l, s)
                    self.assertTrue(w.is_regular(), (n, l, s, realization))
                    for machine in realization:
                        self.assertEqual(len(w.groups_of(machine)), l + s)


class TestEnumeration(unittest.TestCase):
    def test_no_preemption(self):
        r = enumerate_realizations(SystemParams(6, 2, 1, 0))
        self.assertEqual([x.members for x in r], [(1, 2, 3, 4, 5, 6)])

    def test_small(self):
        r = enumerate_realizations(SystemParams(3, 1, 0, 1))
        self.assertEqual([x.members for x in r], [(1, 2, 3), (1, 2), (1, 3), (2, 3)])

    def test_count(self):
        params = SystemParams(6, 2, 1, 1)
        r = enumerate_realizations(params)
        self.assertEqual(len(r), 7)
        self.assertEqual(realization_count(params), 7)
        self.assertEqual(sum(1 for x in r if len(x) == 5), 6)

    def test_cap(self):
        params = SystemParams(30, 1, 0, 29)
        with self.assertRaises(EnumerationTooLarge):
            enumerate_realizations(params)
        with self.assertRaises(EnumerationTooLarge):
            enumerate_realizations(SystemParams(6, 2, 1, 1), cap=6)


if __name__ == '__main__':
    unittest.main()
