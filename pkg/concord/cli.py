from __future__ import annotations

import argparse
import csv
import io
import json
import re
import sys
from pathlib import Path
from typing import Any, Callable, Optional, Sequence

import numpy as np
from loguru import logger

from concord.asymptotics import heavy_k_star, light_k_star, regime_crosscheck
from concord.core import validate_partition
from concord.dynamics import run
from concord.enums import PessimalMode, StabilityRule
from concord.exceptions import ConcordException, InvalidData, NoFeasibleKError, SizeLimitError
from concord.objects import CoalitionSet, Partition, RunConfig, SystemSpec
from concord.simulation import validate_we
from concord.stability import configure, k_star, stable_set_scan
from concord.utils import format_row, mask_of, subset_sums
from concord.wardrop import psi, wardrop_split

__all__ = (
    "main",
    "parse_grid",
)

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_PARSE = 2
EXIT_VALIDATION = 3
EXIT_SIZE = 4
EXIT_MONTE_CARLO = 5

DEFAULT_GRID = "0.3:300:20log"

_GRID = re.compile(r'^\s*([^:]+):([^:]+):(\d+)\s*(log|lin)\s*$')
_PARTITION = re.compile(r'^\s*\d+(\s*,\s*\d+)*(\s*\|\s*\d+(\s*,\s*\d+)*)*\s*$')

EPILOG = """\
exit codes:
  0  success
  2  the command line, a grid or a partition could not be parsed
  3  the system, partition or run configuration is invalid
  4  the system is too large to enumerate
  5  a Monte-Carlo interval missed the analytic blocking probability
"""


class ParseError(Exception):
    """
    Represents an unreadable command line value. Throws when a grid, list or partition string
    does not follow its syntax.
    """


def parse_grid(text: str) -> tuple[float, ...]:
    """
    Parses ``start:stop:points`` followed by ``log`` or ``lin``, e.g. ``0.3:300:20log``.

    Raises
    ------
        ParseError
            If the text does not follow the syntax or the bounds are unusable.
    """
    match = _GRID.match(text)
    if match is None:
        raise ParseError(f"Grid {text!r} is not of the form start:stop:points(log|lin)")

    try:
        start, stop = float(match.group(1)), float(match.group(2))
    except ValueError as error:
        raise ParseError(f"Grid bounds of {text!r} are not numbers") from error

    points = int(match.group(3))
    if points < 1 or not 0 < start <= stop:
        raise ParseError(f"Grid {text!r} needs 0 < start <= stop and at least one point")

    values = np.geomspace(start, stop, points) if match.group(4) == 'log' else np.linspace(start, stop, points)
    return tuple(float(v) for v in values)


def _parse_agents(text: str) -> list[int]:
    try:
        return [int(token) for token in text.split(',')]
    except ValueError as error:
        raise ParseError(f"Agents {text!r} must be comma separated integers") from error


def _parse_partition(text: str, spec: SystemSpec) -> Partition:
    if _PARTITION.match(text) is None:
        raise ParseError(f"Partition {text!r} is not of the form 0,1|2|3,4")
    return validate_partition(spec, Partition.from_string(text, spec.n, spec))


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog='concord',
        description="Equilibrium market splits and coalition stability for loss-system providers.",
        epilog=EPILOG,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    parser.add_argument('--agents', help="server counts, comma separated, e.g. 9,7,6,5,3")
    parser.add_argument('--lambda', dest='total_rate', type=float, help="total arrival rate")
    parser.add_argument('--mu', dest='service_rate', type=float, help="service rate per server")
    parser.add_argument('--config', help="JSON system file {\"agents\": [...], \"lambda\": x, \"mu\": y}")
    parser.add_argument('--rule', choices=[rule.value for rule in StabilityRule], help="blocking rule")
    parser.add_argument('--seed', type=int, help="random seed")
    parser.add_argument('--grid', help="market size grid start:stop:points(log|lin)")
    parser.add_argument('--out', help="output file, stdout when absent")
    parser.add_argument('--oracle', action='store_true', help="find pessimistic rates by full enumeration")
    parser.add_argument('--max-steps', type=int, help="step cap of the coalition formation process")
    parser.add_argument('--horizon', type=int, help="arrivals per Monte-Carlo run")
    parser.add_argument('--initial', help="starting partition of the dynamics or partition to validate")
    parser.add_argument('--emit-config', help="write the effective system file to this path")
    parser.add_argument('--verbose', action='store_true', help="log debug output to stderr")

    commands = parser.add_subparsers(dest='command')
    wardrop = commands.add_parser('wardrop', help="equilibrium split of one partition")
    wardrop.add_argument('partition', help="blocks separated by |, agents by commas, e.g. 0,1|2")
    commands.add_parser('stable', help="stability verdict of every partition")
    commands.add_parser('kstar-sweep', help="optimal coalition size over the market size grid")
    commands.add_parser('psi', help="per-server rate for every achievable coalition size")
    commands.add_parser('dynamics', help="run the coalition formation process")
    commands.add_parser('validate', help="check the analytic layer by simulation")

    return parser


def _load_config(args: argparse.Namespace) -> RunConfig:
    data: dict[str, Any] = {}
    if args.config:
        try:
            data = json.loads(Path(args.config).read_text())
        except (OSError, json.JSONDecodeError) as error:
            raise ParseError(f"Cannot read system file {args.config!r}: {error}") from error
        if not isinstance(data, dict):
            raise ParseError(f"System file {args.config!r} must hold a JSON object")

    if args.agents is not None:
        data['agents'] = _parse_agents(args.agents)
    if args.total_rate is not None:
        data['lambda'] = args.total_rate
    if args.service_rate is not None:
        data['mu'] = args.service_rate

    missing = [key for key in ('agents', 'lambda') if key not in data]
    if missing:
        raise ParseError(f"No {' or '.join(missing)} given, use --config or the matching flags")

    config = RunConfig.from_dict(data)
    return config.override(
        rule=StabilityRule(args.rule) if args.rule else None,
        seed=args.seed,
        grid=parse_grid(args.grid) if args.grid else None,
        output_path=args.out,
        max_steps=args.max_steps,
        horizon=args.horizon,
        oracle=True if args.oracle else None,
    )


def _table(header: Sequence[str], rows: Sequence[Sequence[object]]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator='\n')
    writer.writerow(header)
    for row in rows:
        writer.writerow(format_row(row))
    return buffer.getvalue()


def _emit(text: str, path: Optional[str]) -> None:
    if path is None:
        sys.stdout.write(text)
    else:
        Path(path).write_text(text)


def _user_partition(partition: Partition, spec: SystemSpec) -> Partition:
    return Partition.from_masks((mask_of(block.labelled(spec.labels)) for block in partition), partition.n)


def _user_mask(coalition: CoalitionSet, spec: SystemSpec) -> int:
    return mask_of(coalition.labelled(spec.labels))


def cmd_wardrop(config: RunConfig, text: str) -> int:
    spec = config.spec
    partition = _parse_partition(text, spec)
    result = wardrop_split(spec, partition)

    rows = []
    for block, rate in zip(result.blocks, result.rates):
        servers = block.servers(spec)
        rows.append([
            ' '.join(map(str, block.labelled(spec.labels))), servers, rate, rate / servers, result.common_blocking
        ])

    _emit(_table(['block', 'servers', 'rate', 'rate_per_server', 'blocking'], rows), config.output_path)
    return EXIT_OK


def cmd_stable(config: RunConfig) -> int:
    spec = config.spec
    mode = PessimalMode.ORACLE if config.oracle else PessimalMode.FAST
    report = stable_set_scan(spec, config.rule, mode)

    rows = []
    for row in report.rows:
        witness = row.verdict.witness
        rows.append([
            _user_partition(row.partition, spec).rgs_string,
            row.partition.to_string(spec.labels),
            len(row.partition),
            row.verdict.stable,
            _user_mask(witness.blocker, spec) if witness else '',
            witness.kind.value if witness else '',
            row.verdict.payoff_dependent,
        ])

    header = ['rgs', 'partition', 'blocks', 'stable', 'blocker', 'kind', 'payoff_dependent']
    _emit(_table(header, rows), config.output_path)
    return EXIT_OK


def cmd_kstar_sweep(config: RunConfig) -> int:
    spec = config.spec
    grid = config.grid or parse_grid(DEFAULT_GRID)
    table = regime_crosscheck(spec, grid)

    ks = k_star(spec).achievable_ks
    rows = []
    for row in table.rows:
        scaled = spec.with_rate(row.total_rate)
        curve = [psi(scaled, k).psi / row.total_rate for k in ks]
        rows.append([
            row.total_rate,
            row.representative if row.representative is not None else '',
            ';'.join(map(str, row.maximizers)),
            row.gc_blocking,
            *curve,
        ])

    header = ['lambda', 'kstar', 'kstar_set', 'gc_blocking'] + [f'psi_over_lambda_{k}' for k in ks]
    _emit(_table(header, rows), config.output_path)

    logger.info(
        f"Heavy-traffic size {table.heavy_k_star}, light-traffic size {table.light_k_star}, "
        f"crossover at {table.crossover}"
    )
    return EXIT_OK


def cmd_psi(config: RunConfig) -> int:
    spec = config.spec
    total = spec.total_servers
    ks = sorted(k for k in subset_sums(spec.server_counts) if 0 < k < total)

    rows = []
    for k in ks:
        point = psi(spec, k)
        rows.append([k, point.lambda_k, point.psi, point.psi / spec.total_rate])

    _emit(_table(['k', 'lambda_k', 'psi', 'psi_over_lambda'], rows), config.output_path)
    try:
        logger.info(f"Closed-form sizes: heavy {heavy_k_star(spec)}, light {light_k_star(spec)}")
    except NoFeasibleKError:
        logger.info(f"No coalition of {list(spec.server_counts)} holds more than half the servers")
    return EXIT_OK


def cmd_dynamics(config: RunConfig, initial: Optional[str]) -> int:
    spec = config.spec
    if not config.rule.restricted:
        raise InvalidData(f"Coalition formation runs under rb-ia or rb-pa, got {config.rule.value}")

    partition = _parse_partition(initial, spec) if initial else Partition.singletons(spec.n)
    mode = PessimalMode.ORACLE if config.oracle else PessimalMode.FAST
    trace = run(spec, configure(spec, partition), config.rule, config.seed, config.max_steps, mode=mode)

    _emit(trace.export(spec.labels), config.output_path)
    sys.stdout.write(
        f"terminal={trace.terminal.value} steps={len(trace)} final={trace.final.partition.to_string(spec.labels)}\n"
    )
    return EXIT_OK


def cmd_validate(config: RunConfig, initial: Optional[str]) -> int:
    spec = config.spec
    partitions = [Partition.grand(spec.n)]
    partitions.append(_parse_partition(initial, spec) if initial else Partition.singletons(spec.n))

    rows = []
    failures = 0
    for number, partition in enumerate(partitions):
        for check in validate_we(spec, partition, config.horizon, config.seed + number):
            failures += not check.covered
            rows.append([
                partition.to_string(spec.labels),
                ' '.join(map(str, check.block.labelled(spec.labels))),
                check.servers,
                check.rate,
                check.target,
                check.estimate.blocked_fraction,
                check.estimate.half_width_95,
                check.covered,
            ])

    header = ['partition', 'block', 'servers', 'rate', 'blocking', 'simulated', 'half_width', 'covered']
    _emit(_table(header, rows), config.output_path)

    if failures:
        logger.error(f"{failures} of {len(rows)} simulated blocks missed the analytic blocking probability")
        return EXIT_MONTE_CARLO
    return EXIT_OK


def _dispatch(args: argparse.Namespace, config: RunConfig) -> int:
    commands: dict[str, Callable[[], int]] = {
        'wardrop': lambda: cmd_wardrop(config, args.partition),
        'stable': lambda: cmd_stable(config),
        'kstar-sweep': lambda: cmd_kstar_sweep(config),
        'psi': lambda: cmd_psi(config),
        'dynamics': lambda: cmd_dynamics(config, args.initial),
        'validate': lambda: cmd_validate(config, args.initial),
    }
    logger.info(f"Running {args.command} on {config.spec!r}")
    return commands[args.command]()


def main(argv: Optional[Sequence[str]] = None) -> int:
    """
    Entry point of the ``concord`` command. Returns the exit code.
    """
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exit_:
        return int(exit_.code or 0)

    logger.remove()
    logger.add(sys.stderr, level='DEBUG' if args.verbose else 'WARNING')

    try:
        config = _load_config(args)
        if args.emit_config:
            Path(args.emit_config).write_text(json.dumps(config.spec.raw, indent=2) + '\n')
        if args.command is None:
            if not args.emit_config:
                parser.print_help(sys.stderr)
                return EXIT_PARSE
            return EXIT_OK
        return _dispatch(args, config)
    except ParseError as error:
        logger.error(str(error))
        return EXIT_PARSE
    except InvalidData as error:
        logger.error(str(error))
        return EXIT_VALIDATION
    except SizeLimitError as error:
        logger.error(str(error))
        return EXIT_SIZE
    except ConcordException as error:
        logger.error(f"{type(error).__name__}: {error}")
        return EXIT_FAILURE
