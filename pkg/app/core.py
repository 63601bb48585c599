"""
Command-line driver for the selection toolkit.

This module contains the ``SelectionCli`` class, which parses arguments,
builds the effective configuration (size guards from defaults, the
environment and ``--guard`` flags), dispatches to one subcommand and maps
failures to exit codes.
"""
import argparse
import logging
import sys
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional

from config.settings import (
    DEFAULT_TRIALS,
    EXIT_CODES,
    GRAPH_CLASSES,
    GUARD_ENV_VAR,
    HOEFFDING_DELTA,
    MECHANISMS,
    load_guards,
    parse_guard_overrides,
)
from selection import bounds, exact, montecarlo, verify
from selection.errors import GraphParseError, SelectionError, SizeGuardError, UnsupportedBoundError
from selection.gadgets import gadget_names, gen_gadget, needs_size
from selection.graph import (
    GraphClass,
    gen_random,
    gen_random_functional,
    graph_id,
    graph_to_json,
    serialize_graph,
)
from selection.mechanisms import MechanismSpec, run_mechanism
from selection.rng import Prng, stream
from utils.data_loader import load_graph_file, save_graph_file
from utils.validators import parse_positive_int, parse_probability, parse_range, parse_seed

from .ui import display_verification, emit_csv, emit_json, emit_text

logger = logging.getLogger(__name__)

LOG_FORMAT = '%(asctime)s - %(name)s - %(levelname)s - %(message)s'


def configure_logging(verbosity: int) -> None:
    """Send log records to stderr: warnings by default, ``-v`` for info, ``-vv`` for debug."""
    level = logging.WARNING
    if verbosity == 1:
        level = logging.INFO
    elif verbosity >= 2:
        level = logging.DEBUG
    logging.basicConfig(level=level, format=LOG_FORMAT, stream=sys.stderr, force=True)


def _arg(parser_func: Callable[[str], Any], name: str) -> Callable[[str], Any]:
    """Adapt a validator raising ``ValueError`` for use as an argparse ``type``."""
    def convert(text: str) -> Any:
        try:
            return parser_func(text)
        except ValueError as e:
            raise argparse.ArgumentTypeError(str(e)) from None
    convert.__name__ = name
    return convert


def _add_mechanism_args(parser: argparse.ArgumentParser) -> None:
    parser.add_argument('--mech', required=True, choices=sorted(MECHANISMS), help="Mechanism to run")
    parser.add_argument('--k', type=_arg(lambda t: parse_positive_int(t, 2), 'k'),
                        help="Block count for k-partition")


def build_parser() -> argparse.ArgumentParser:
    """Build the argument parser with one subparser per command."""
    parser = argparse.ArgumentParser(
        prog='selection',
        description="Impartial selection mechanisms: runs, exact laws, bounds, verification and search.",
    )
    parser.add_argument('-v', '--verbose', action='count', default=0, help="More logging on stderr")
    parser.add_argument('--guard', action='append', default=[], metavar='NAME=VALUE',
                        help=f"Override a size guard (also via ${GUARD_ENV_VAR})")
    commands = parser.add_subparsers(dest='command', required=True)

    select = commands.add_parser('select', help="Run a mechanism once (or --trials times)")
    select.add_argument('graph')
    _add_mechanism_args(select)
    select.add_argument('--seed', type=_arg(parse_seed, 'seed'), default=0)
    select.add_argument('--trials', type=_arg(parse_positive_int, 'trials'), default=1)

    for name, text in (('dist', "Exact selection distribution"), ('ratio', "Exact ratio E[X]/Δ")):
        sub = commands.add_parser(name, help=text)
        sub.add_argument('graph')
        _add_mechanism_args(sub)

    table = commands.add_parser('bounds', help="Bound tables as CSV")
    table.add_argument('--table', required=True, choices=['alpha2', 'alphak', 'pairs', 'upper'])
    table.add_argument('--delta', type=_arg(parse_range, 'delta'), default=[1])
    table.add_argument('--k', type=_arg(parse_range, 'k'), default=[2])
    table.add_argument('--n', type=_arg(parse_range, 'n'), default=[3])
    table.add_argument('--class', dest='graph_class', choices=sorted(GRAPH_CLASSES), default='no-abstention')

    check = commands.add_parser('verify', help="Run verification suites")
    check.add_argument('--suite', choices=[*verify.SUITES, 'all'], default='all')
    check.add_argument('--max-n', type=_arg(parse_positive_int, 'max-n'), default=3)
    check.add_argument('--seed', type=_arg(parse_seed, 'seed'), default=0)

    search = commands.add_parser('search', help="Exhaustive worst-case search")
    search.add_argument('--n', type=_arg(lambda t: parse_positive_int(t, 2), 'n'), required=True)
    search.add_argument('--class', dest='graph_class', choices=sorted(GRAPH_CLASSES), default='all')
    _add_mechanism_args(search)
    search.add_argument('--workers', type=_arg(parse_positive_int, 'workers'), default=1)

    mc = commands.add_parser('mc', help="Monte Carlo estimate with Hoeffding band")
    mc.add_argument('graph')
    _add_mechanism_args(mc)
    mc.add_argument('--trials', type=_arg(parse_positive_int, 'trials'), default=DEFAULT_TRIALS)
    mc.add_argument('--seed', type=_arg(parse_seed, 'seed'), default=0)
    mc.add_argument('--confidence', type=_arg(lambda t: parse_probability(t, True), 'confidence'),
                    default=HOEFFDING_DELTA)
    mc.add_argument('--workers', type=_arg(parse_positive_int, 'workers'), default=1)

    gen = commands.add_parser('gen', help="Write a generated graph to stdout")
    source = gen.add_mutually_exclusive_group(required=True)
    source.add_argument('--gadget', choices=gadget_names())
    source.add_argument('--random', action='store_true', help="Independent edges with probability --p")
    source.add_argument('--functional', action='store_true', help="Every vertex nominates exactly one other")
    gen.add_argument('--n', type=_arg(parse_positive_int, 'n'))
    gen.add_argument('--p', type=_arg(parse_probability, 'p'), default=0.5)
    gen.add_argument('--seed', type=_arg(parse_seed, 'seed'), default=0)
    gen.add_argument('--format', choices=['edges', 'json'], default='edges')
    gen.add_argument('--out', type=Path, help="Write the graph to this file (.json for JSON) instead of stdout")
    return parser


class SelectionCli:
    """
    One command-line invocation.

    Holds the parsed arguments and the effective guards, and exposes one
    ``cmd_*`` method per subcommand. Each method returns an exit code.
    """

    def __init__(self, args: argparse.Namespace):
        self.args = args
        overrides: Dict[str, int] = {}
        for item in args.guard:
            overrides.update(parse_guard_overrides(item))
        self.guards, self.guards_from_env = load_guards(overrides)
        if self.guards_from_env:
            logger.info("size guards overridden from $%s", GUARD_ENV_VAR)

    def run(self) -> int:
        handler = getattr(self, f"cmd_{self.args.command}")
        return handler()

    def config(self, **extra: Any) -> Dict[str, Any]:
        """Effective configuration echoed with every result."""
        data: Dict[str, Any] = {'command': self.args.command}
        data.update(extra)
        data['guards'] = dict(self.guards)
        data['guards_from_env'] = self.guards_from_env
        return data

    def _mechanism(self) -> MechanismSpec:
        return MechanismSpec.from_name(self.args.mech, self.args.k)

    def cmd_select(self) -> int:
        g = load_graph_file(self.args.graph)
        m = self._mechanism()
        seed, trials = self.args.seed, self.args.trials
        if trials == 1:
            winner = run_mechanism(g, m, Prng(seed))
            emit_json({'winner': winner, 'seed': seed, 'mech': m.to_json(), 'config': self.config(seed=seed)})
            return EXIT_CODES['OK']
        counts = {v: 0 for v in g.vertices}
        for t in range(trials):
            counts[run_mechanism(g, m, stream(seed, t))] += 1
        emit_json({
            'winners': {str(v): c for v, c in counts.items()},
            'trials': trials,
            'seed': seed,
            'mech': m.to_json(),
            'config': self.config(seed=seed, trials=trials),
        })
        return EXIT_CODES['OK']

    def cmd_dist(self) -> int:
        g = load_graph_file(self.args.graph)
        m = self._mechanism()
        dist = exact.exact_distribution(g, m, self.guards)
        emit_json({
            'graph': graph_id(g),
            'mechanism': m.to_json(),
            'probs': dist.to_json(),
            'expected_degree': exact.fraction_to_str(exact.expected_degree(dist, g)),
            'config': self.config(),
        })
        return EXIT_CODES['OK']

    def cmd_ratio(self) -> int:
        g = load_graph_file(self.args.graph)
        report = exact.ratio(g, self._mechanism(), self.guards)
        emit_json({**report.to_json(), 'config': self.config()})
        return EXIT_CODES['OK']

    def cmd_bounds(self) -> int:
        args = self.args
        if args.table == 'alpha2':
            table = bounds.alpha2_table(args.delta)
        elif args.table == 'alphak':
            rows = []
            for k in args.k:
                if k < 2:
                    raise SelectionError(f"k must be at least 2, got {k}")
                rows.extend(bounds.alpha_k_table(k, args.delta, self.guards).rows)
            table = bounds.BoundTable('alpha_k', rows)
        elif args.table == 'pairs':
            table = bounds.BoundTable('alphak2_pairs', [
                bounds.BoundRow('alphak2_pairs', k, 2, GraphClass.NO_ABSTENTION.value, bounds.alphak2_pairs(k))
                for k in args.k
            ])
        else:
            table = bounds.upper_table(GraphClass.from_name(args.graph_class), args.n)
        emit_csv(table.to_csv(), self.config(table=args.table))
        return EXIT_CODES['OK']

    def cmd_verify(self) -> int:
        report = verify.run_suite(self.args.suite, self.args.max_n, self.args.seed, self.guards)
        data = report.to_json()
        display_verification(data)
        emit_json({**data, 'config': self.config(suite=self.args.suite, max_n=self.args.max_n, seed=self.args.seed)})
        return EXIT_CODES['OK'] if report.passed else EXIT_CODES['VERIFY_FAILED']

    def cmd_search(self) -> int:
        c = GraphClass.from_name(self.args.graph_class)
        result = exact.worst_case_search(self.args.n, self._mechanism(), c, self.guards, self.args.workers)
        emit_json({**result.to_json(), 'config': self.config(workers=self.args.workers)})
        return EXIT_CODES['OK']

    def cmd_mc(self) -> int:
        args = self.args
        g = load_graph_file(args.graph)
        result = montecarlo.estimate(g, self._mechanism(), args.trials, args.seed, args.workers)
        emit_json({
            **result.to_json(args.confidence),
            'graph': graph_id(g),
            'config': self.config(seed=args.seed, trials=args.trials, workers=args.workers),
        })
        return EXIT_CODES['OK']

    def cmd_gen(self) -> int:
        args = self.args
        if args.gadget:
            if needs_size(args.gadget) and args.n is None:
                raise SelectionError(f"--n is required for the sized gadget {args.gadget}")
            g = gen_gadget(args.gadget, args.n)
            comment = f"gadget {args.gadget}"
        else:
            if args.n is None:
                raise SelectionError("--n is required for random graphs")
            if args.random:
                g = gen_random(args.n, args.p, args.seed)
                comment = f"random n={args.n} p={args.p} seed={args.seed}"
            else:
                g = gen_random_functional(args.n, args.seed)
                comment = f"functional n={args.n} seed={args.seed}"
        if args.out is not None:
            save_graph_file(g, args.out, comment)
            emit_json({'written': str(args.out), 'graph': graph_id(g), 'config': self.config()})
        elif args.format == 'json':
            emit_json({**graph_to_json(g), 'comment': comment})
        else:
            emit_text(serialize_graph(g, comment))
        return EXIT_CODES['OK']


def main(argv: Optional[List[str]] = None) -> int:
    """
    Entry point for the selection command line.

    Returns:
        int: Process exit code (0 ok, 1 verification failed, 2 usage, 3 size guard)
    """
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    configure_logging(args.verbose)
    try:
        return SelectionCli(args).run()
    except SizeGuardError as e:
        print(f"error: {e}", file=sys.stderr)
        emit_json({'error': 'size guard', 'guard': e.guard, 'limit': e.limit, 'required': e.required}, sys.stderr)
        return EXIT_CODES['GUARD']
    except GraphParseError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_CODES['USAGE']
    except (SelectionError, UnsupportedBoundError, ValueError, FileNotFoundError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_CODES['USAGE']


if __name__ == "__main__":
    sys.exit(main())
