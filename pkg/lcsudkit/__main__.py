#!/env/python

"""
lcsudkit hauptprogramm

kommandozeile für simulation, kostentabellen, speicherkurven und die durchgerechneten beispiele.

unterbefehle:
- simulate --config FILE [--out FILE] [--ledger FILE]
- costs --n M --l L --s S --q Q --v V --r R [--best]
- fig2 [--n 20 --l 5 --s 0 --umax 15 --scheme 2]
- demo --example {1,2,3} [--straggler N]

jede ausgabe beginnt mit der aufgelösten konfiguration als kommentarzeilen '# key: value'.
rückgabewerte: 0 erfolg, 1 konfigurations- oder eingabefehler, 2 fehlgeschlagener simulationsschritt.
"""

import argparse
import json
import logging
import sys
from pathlib import Path
from typing import Any, Iterable, Optional, Sequence, TextIO, Tuple

import trio

from lcsudkit.costs import best_rows, cost_frame, cost_table, fig2_curves, fig2_frame
from lcsudkit.schemes import SchemeId
from lcsudkit.sim import ConfigError, JSONEncoder, SimConfig, Simulator, StepReport

logger = logging.getLogger(__name__)

CONFIG_DIR = Path(__file__).parent / "config"

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_FAILED = 2


def setup_logging(filename: Optional[str] = "", level: Optional[str] = "ERROR"):
    """
    configure the logger. direct the logs either to a file or the null handler.

    this function must be called before the first logging command.
    to disable logging, call this function with empty filename (default).

    :param filename: (Path-like) path and name of the log file.
        if the filename is empty, logging is disabled.
    :param level: (string) principal log level.
        must be one of "DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL".
        if empty, logging is disabled.
        if not a valid level, defaults to "WARNING".
    :return None
    """
    enable = bool(filename) and bool(level)
    if enable:
        numeric_level = getattr(logging, level.upper(), logging.WARNING)
    else:
        numeric_level = logging.ERROR

    root_logger = logging.getLogger()
    root_logger.setLevel(numeric_level)

    if enable:
        log_format = '%(asctime)s (%(name)s) %(levelname)s: %(message)s'
        formatter = logging.Formatter(log_format)

        handler = logging.FileHandler(filename, mode="w", delay=True)
        handler.setLevel(numeric_level)
        handler.setFormatter(formatter)
    else:
        handler = logging.NullHandler()

    root_logger.addHandler(handler)
    logging.captureWarnings(enable)

    # trio meldet sich sonst auf DEBUG-stufe bei jedem thread
    logging.getLogger('trio').setLevel(max(numeric_level, logging.WARNING))


def parse_args(arguments: Sequence[str]) -> argparse.Namespace:
    parser = argparse.ArgumentParser(
        prog="lcsudkit",
        # --l der unterbefehle darf nicht als abkürzung von --log-level gelten
        allow_abbrev=False,
        description="""
            Elastisches verteiltes Matrixprodukt mit Lagrange-kodierter Speicherung und unkodiertem Download.
        """
    )

    parser.add_argument("--log-level", choices=["DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"], default="ERROR",
                        help="Minimale Stufe für Protokollmeldungen. Default: ERROR")
    parser.add_argument("--log-file", default="",
                        help="Protokolldatei. Default: keine Protokollierung")

    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="Simulation nach Konfigurationsdatei")
    p.add_argument("--config", required=True, help="Konfiguration im JSON-Format")
    p.add_argument("--out", help="Bericht (JSON). Default: Standardausgabe")
    p.add_argument("--ledger", help="Kostenbuch (CSV)")

    p = sub.add_parser("costs", help="Kostentabelle aller Schemata und Vergleichsverfahren")
    p.add_argument("--n", type=int, required=True, help="Anzahl verfügbarer Maschinen")
    p.add_argument("--l", type=int, required=True, help="Rekonstruktionsschwelle L")
    p.add_argument("--s", type=int, required=True, help="Tolerierte Nachzügler S")
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--v", type=int, required=True)
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--best", action="store_true", help="Beste Zeilen pro Metrik als Kommentar ausgeben")

    p = sub.add_parser("fig2", help="Speicherbedarf des Systems in Abhängigkeit von U")
    p.add_argument("--n", type=int, default=20)
    p.add_argument("--l", type=int, default=5)
    p.add_argument("--s", type=int, default=0)
    p.add_argument("--umax", type=int, default=15)
    p.add_argument("--scheme", choices=["1", "2", "3"], default="2")

    p = sub.add_parser("demo", help="Durchgerechnetes Beispiel mit N=6, L=2, S=1")
    p.add_argument("--example", type=int, choices=[1, 2, 3], required=True)
    p.add_argument("--straggler", type=int, default=3, help="Nachzügler-Maschine, 0 für keinen. Default: 3")

    return parser.parse_args(arguments)


def print_config(items: Iterable[Tuple[str, Any]], out: TextIO):
    for key, value in items:
        if not isinstance(value, str):
            value = json.dumps(value, sort_keys=True, cls=JSONEncoder)
        print(f"# {key}: {value}", file=out)


def fmt_set(members: Iterable[int]) -> str:
    return "{" + ", ".join(str(x) for x in members) + "}"


def load_simulator(config: SimConfig, out: TextIO) -> Simulator:
    """
    simulator erzeugen und die aufgelöste konfiguration ausgeben.

    :raise ConfigError
    """
    simulator = Simulator(config)
    d = config.get_config()
    d['schedule'] = [st.to_dict() for st in simulator.schedule]
    d['steps'] = len(simulator.schedule)
    print_config(sorted(d.items()), out)
    return simulator


def cmd_simulate(args: argparse.Namespace, out: TextIO) -> int:
    config = SimConfig()
    config.load_config(args.config)
    simulator = load_simulator(config, out)
    report = trio.run(simulator.run)

    if args.out:
        report.write(args.out)
    else:
        print(report.to_json(), file=out)
    if args.ledger:
        report.write_ledger(args.ledger)

    if report.success:
        return EXIT_OK
    else:
        logger.warning(f"fehlgeschlagene schritte: {report.failed_steps}")
        return EXIT_FAILED


def cmd_costs(args: argparse.Namespace, out: TextIO) -> int:
    print_config([('m', args.n), ('l', args.l), ('s', args.s), ('q', args.q), ('v', args.v), ('r', args.r)], out)
    reports = cost_table(args.n, args.l, args.s, args.q, args.v, args.r)
    cost_frame(reports).to_csv(out, index=False)
    if args.best:
        for metric, ids in best_rows(reports).items():
            print(f"# best {metric}: {', '.join(ids)}", file=out)
    return EXIT_OK


def cmd_fig2(args: argparse.Namespace, out: TextIO) -> int:
    print_config([('n', args.n), ('l', args.l), ('s', args.s), ('umax', args.umax), ('scheme', args.scheme)], out)
    points = fig2_curves(args.n, args.l, args.s, range(0, args.umax + 1), SchemeId.from_any(args.scheme))
    fig2_frame(points).to_csv(out, index=False)
    return EXIT_OK


class DemoTrace:
    """
    beobachter, der placements und schritte als lesbaren text ausgibt.
    """

    def __init__(self, out: TextIO):
        self.out = out

    def on_placement(self, observable, record=None, plan=None, stores=None):
        for n in sorted(stores):
            store = stores[n]
            axis = "rows" if store.axis.value == 'row' else "columns"
            ranges = " ".join(f"[{a}, {b})" for a, b in store.ranges())
            size = record.storage_fraction[n]
            print(f"storage machine {n}: {axis} {ranges} of coded matrix ({size} of A)", file=self.out)

    def on_step(self, observable, report: StepReport = None):
        for g, members in enumerate(report.groups, start=1):
            print(f"W_{g} = {fmt_set(members)}", file=self.out)
        for n, blocks in sorted(report.downloads.items()):
            if isinstance(blocks, str):
                text = "B"
            else:
                text = ", ".join(f"B_{g}" for g in blocks)
            print(f"download machine {n}: {text}", file=self.out)
        print(f"stragglers: {fmt_set(report.stragglers)}", file=self.out)
        for g, members in sorted(report.decode_sets.items()):
            print(f"decode set W_{g}: {fmt_set(members)}", file=self.out)
        if report.error:
            print(f"error: {report.error}", file=self.out)
        print(f"decoded == A·B: {'true' if report.decoded_equals_oracle else 'false'}", file=self.out)


def cmd_demo(args: argparse.Namespace, out: TextIO) -> int:
    path = CONFIG_DIR / f"example{args.example}.json"
    with open(path, encoding='utf-8') as fp:
        d = json.load(fp)

    stragglers = [args.straggler] if args.straggler else []
    d['schedule'] = [{'available': list(range(1, d['n'] + 1)), 'stragglers': stragglers}]
    d['steps'] = 1
    config = SimConfig()
    config.set_config(d)

    print_config([('example', args.example)], out)
    simulator = load_simulator(config, out)
    trace = DemoTrace(out)
    simulator.placement_done.register(trace.on_placement)
    simulator.step_done.register(trace.on_step)
    report = trio.run(simulator.run)

    return EXIT_OK if report.success else EXIT_FAILED


COMMANDS = {
    'simulate': cmd_simulate,
    'costs': cmd_costs,
    'fig2': cmd_fig2,
    'demo': cmd_demo,
}


def run_cli(argv: Sequence[str], out: Optional[TextIO] = None, err: Optional[TextIO] = None) -> int:
    """
    kommandozeile ausführen.

    :param argv: argumente ohne programmnamen
    :param out: ausgabe, default sys.stdout
    :param err: fehlerausgabe, default sys.stderr
    :return: rückgabewert 0, 1 oder 2
    """

    out = out if out is not None else sys.stdout
    err = err if err is not None else sys.stderr

    try:
        arguments = parse_args(list(argv))
    except SystemExit as e:
        return EXIT_OK if e.code in (0, None) else EXIT_CONFIG

    setup_logging(filename=arguments.log_file, level=arguments.log_level)

    try:
        return COMMANDS[arguments.command](arguments, out)
    except (ConfigError, ValueError, OSError) as e:
        logger.error(f"{arguments.command}: {e}")
        print(f"lcsudkit {arguments.command}: {e}", file=err)
        return EXIT_CONFIG


def main():
    sys.exit(run_cli(sys.argv[1:]))


if __name__ == "__main__":
    main()
