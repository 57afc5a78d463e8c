import io
import json
import os
import tempfile
import unittest
from unittest import mock
from pathlib import Path

import pandas as pd

import lcsudkit
from lcsudkit.__main__ import EXIT_CONFIG, EXIT_FAILED, EXIT_OK, parse_args, run_cli

CONFIG_DIR = Path(lcsudkit.__file__).parent / "config"
DATA_DIR = Path(__file__).parent / "data"


def run(*argv):
    out = io.StringIO()
    err = io.StringIO()
    code = run_cli(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


class TestArguments(unittest.TestCase):
    def test_short_subcommand_flags(self):
        args = parse_args(["costs", "--n", "6", "--l", "2", "--s", "1", "--q", "12", "--v", "12", "--r", "12"])
        self.assertEqual((args.n, args.l, args.s), (6, 2, 1))
        args = parse_args(["--log-level", "INFO", "fig2", "--l", "5"])
        self.assertEqual(args.l, 5)
        self.assertEqual(args.log_level, "INFO")

    def test_no_abbreviations(self):
        with mock.patch("sys.stderr", new_callable=io.StringIO):
            code, _, _ = run("--log", "INFO", "fig2")
        self.assertEqual(code, EXIT_CONFIG)


class TestGolden(unittest.TestCase):
    """
    ausgaben für feste eingaben, byteweise mit den dateien in tests/data verglichen.
    """

    def check(self, name, *argv):
        code, text, _ = run(*argv)
        self.assertEqual(code, EXIT_OK)
        with open(DATA_DIR / name, encoding='utf-8', newline='') as fp:
            expected = fp.read()
        self.assertEqual(text.encode('utf-8'), expected.encode('utf-8'))

    def test_costs(self):
        self.check("costs_6_2_1.txt", "costs", "--n", "6", "--l", "2", "--s", "1", "--q", "12", "--v", "12",
                   "--r", "12", "--best")

    def test_fig2(self):
        self.check("fig2_4_2_1.txt", "fig2", "--n", "4", "--l", "2", "--s", "1", "--umax", "1")

    def test_demo(self):
        self.check("demo_example1.txt", "demo", "--example", "1")

    def test_repeatable(self):
        self.assertEqual(run("demo", "--example", "3"), run("demo", "--example", "3"))


class TestFig2(unittest.TestCase):
    def test_default(self):
        code, text, _ = run("fig2")
        self.assertEqual(code, EXIT_OK)
        self.assertTrue(text.startswith("# n: 20"))
        df = pd.read_csv(io.StringIO(text), comment='#', dtype=str)
        self.assertEqual(list(df.columns), ['U', 'blue', 'black', 'green', 'red'])
        self.assertEqual(len(df), 16)
        assert all(x == "4/1" for x in df['blue'])
        assert all(x == "20/1" for x in df['green'])
        self.assertEqual(df['red'].iloc[0], "1/1")
        self.assertEqual(df['red'].iloc[-1], "4/1")

    def test_options(self):
        code, text, _ = run("fig2", "--n", "8", "--l", "2", "--s", "1", "--umax", "5", "--scheme", "3")
        self.assertEqual(code, EXIT_OK)
        df = pd.read_csv(io.StringIO(text), comment='#', dtype=str)
        self.assertEqual(list(df['U']), [str(u) for u in range(6)])
        self.assertEqual(df['red'].iloc[0], "3/2")


class TestCosts(unittest.TestCase):
    def test_grid(self):
        code, text, _ = run("costs", "--n", "6", "--l", "2", "--s", "1", "--q", "12", "--v", "12", "--r", "12",
                            "--best")
        self.assertEqual(code, EXIT_OK)
        self.assertIn("# m: 6", text)
        self.assertIn("# best storage: scheme2, scheme3", text)
        df = pd.read_csv(io.StringIO(text), comment='#', dtype=str)
        self.assertEqual(list(df.columns), ['id', 'storage', 'encoding', 'download', 'computing', 'upload',
                                            'decoding'])
        self.assertEqual(len(df), 7)
        self.assertEqual(df.set_index('id').loc['scheme3', 'upload'], "216/1")

    def test_too_few_machines(self):
        code, _, err = run("costs", "--n", "2", "--l", "2", "--s", "1", "--q", "12", "--v", "12", "--r", "12")
        self.assertEqual(code, EXIT_CONFIG)
        self.assertIn("costs", err)


class TestDemo(unittest.TestCase):
    def test_example1(self):
        code, text, _ = run("demo", "--example", "1")
        self.assertEqual(code, EXIT_OK)
        lines = text.splitlines()
        self.assertEqual(lines[0], "# example: 1")
        for g, members in enumerate(["{1, 2, 3}", "{2, 3, 4}", "{3, 4, 5}", "{4, 5, 6}", "{5, 6, 1}", "{6, 1, 2}"],
                                    start=1):
            self.assertIn(f"W_{g} = {members}", lines)
        self.assertIn("download machine 1: B_1, B_5, B_6", lines)
        self.assertIn("stragglers: {3}", lines)
        self.assertIn("decoded == A·B: true", lines)
        self.assertIn("storage machine 1: rows [0, 6) of coded matrix (1/2 of A)", lines)

    def test_example2(self):
        code, text, _ = run("demo", "--example", "2", "--straggler", "0")
        self.assertEqual(code, EXIT_OK)
        self.assertIn("download machine 4: B", text.splitlines())
        self.assertIn("stragglers: {}", text.splitlines())
        self.assertIn("decoded == A·B: true", text)

    def test_example3(self):
        code, text, _ = run("demo", "--example", "3", "--straggler", "5")
        self.assertEqual(code, EXIT_OK)
        self.assertIn("storage machine 1: columns [0, 2) [8, 10) [10, 12) of coded matrix (1/4 of A)",
                      text.splitlines())
        self.assertIn("decoded == A·B: true", text)

    def test_bad_example(self):
        with mock.patch("sys.stderr", new_callable=io.StringIO):
            code, _, _ = run("demo", "--example", "4")
        self.assertEqual(code, EXIT_CONFIG)


class TestSimulate(unittest.TestCase):
    def test_union(self):
        with tempfile.TemporaryDirectory() as d:
            report = os.path.join(d, "report.json")
            ledger = os.path.join(d, "ledger.csv")
            code, text, _ = run("simulate", "--config", str(CONFIG_DIR / "union.json"), "--out", report,
                                "--ledger", ledger)
            self.assertEqual(code, EXIT_OK)
            self.assertIn("# placement: union", text)
            with open(report, encoding='utf-8') as fp:
                data = json.load(fp)
            df = pd.read_csv(ledger)
        self.assertTrue(data['success'])
        self.assertEqual(data['placement_count'], 1)
        self.assertEqual(len(data['steps']), 7)
        self.assertEqual(len(df), 7 * 6)

    def test_stdout(self):
        code, text, _ = run("simulate", "--config", str(CONFIG_DIR / "example1.json"))
        self.assertEqual(code, EXIT_OK)
        body = "\n".join(line for line in text.splitlines() if not line.startswith("#"))
        data = json.loads(body)
        self.assertEqual(data['failed_steps'], [])

    def test_overload(self):
        code, text, _ = run("simulate", "--config", str(CONFIG_DIR / "example1_overload.json"))
        self.assertEqual(code, EXIT_FAILED)
        body = "\n".join(line for line in text.splitlines() if not line.startswith("#"))
        self.assertEqual(json.loads(body)['failed_steps'], [3])

    def test_bad_config(self):
        with tempfile.TemporaryDirectory() as d:
            path = os.path.join(d, "bad.json")
            with open(path, "w", encoding='utf-8') as fp:
                json.dump({'n': 6, 'l': 2}, fp)
            code, text, err = run("simulate", "--config", path)
        self.assertEqual(code, EXIT_CONFIG)
        self.assertEqual(text, "")
        self.assertIn("fehlende schlüssel", err)

    def test_missing_file(self):
        code, _, _ = run("simulate", "--config", "/nonexistent/config.json")
        self.assertEqual(code, EXIT_CONFIG)

    def test_bad_flag(self):
        with mock.patch('sys.stderr', new_callable=io.StringIO):
            code, _, _ = run("simulate", "--frobnicate")
            self.assertEqual(code, EXIT_CONFIG)
            code, _, _ = run("bogus")
            self.assertEqual(code, EXIT_CONFIG)


if __name__ == '__main__':
    unittest.main()
