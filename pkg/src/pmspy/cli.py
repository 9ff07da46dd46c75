# -*- coding: utf-8

"""Module for the operator command line tool :code:`pms`.

Every subcommand works either locally on the configured snapshot, journal
and audit files or, with :code:`--remote`, against a running service. Exit
codes are 0 on success, 1 on domain errors (an UNAUTHORIZED check included)
and 2 on usage errors such as malformed resource names.

SPDX-License-Identifier: MIT
"""
import argparse
import logging
import os
import sys

import httpx
import pandas as pd
import uvicorn
from tabulate import tabulate

from pmspy import __version__
from pmspy.decisions.decision import AccessRequest
from pmspy.permissions.resource_name import format_name
from pmspy.permissions.resource_name import parse_name
from pmspy.service.app import create_app
from pmspy.service.client import ServiceClient
from pmspy.service.system import PermissionService
from pmspy.tools import logger
from pmspy.tools.benchmark import bench
from pmspy.tools.config import Config
from pmspy.tools.global_vars import GRANTED
from pmspy.tools.helpers import IoFailure
from pmspy.tools.helpers import PMSpyError
from pmspy.tools.helpers import PMSpyNameError
from pmspy.tools.helpers import ServiceError

EXIT_OK = 0
EXIT_DOMAIN = 1
EXIT_USAGE = 2


class UsageError(Exception):
    """Command line arguments that cannot be served."""


def _config(args, **overrides):
    paths = {
        'snapshot_path': args.snapshot,
        'journal_path': args.journal,
        'audit_path': args.audit,
        'admin_token': args.token,
    }
    paths.update(overrides)
    return Config(**{k: v for k, v in paths.items() if v is not None})


def _local(args, **overrides):
    if args.remote is not None:
        raise UsageError(
            f"'{args.command}' works on local files only, drop --remote."
        )
    return PermissionService(_config(args, **overrides))


def _client(args):
    return ServiceClient(args.remote, admin_token=args.token)


def _emit(args, rows, columns, plain):
    r"""
    Print rows as plain lines or as a table.

    Parameters
    ----------
    rows : list
        One dict per row.

    columns : list
        Table columns in order.

    plain : callable
        Renders one row as a plain output line.
    """
    if args.output == 'table':
        df = pd.DataFrame(rows, columns=columns)
        print(tabulate(df, headers='keys', tablefmt='psql', showindex=False))
    else:
        for row in rows:
            print(plain(row))


def _mutate(args, op, *operands):
    if args.remote is not None:
        version = _client(args).mutate(op, *operands)
    else:
        pms = _local(args)
        if args.journal is None and pms.config.get_attr(
                'journal_path') is None:
            logger.warning(
                "No journal configured, the mutation is not persisted."
            )
        try:
            version = pms.apply(op, *operands)
        finally:
            pms.close()
    print(f"version {version}")
    return EXIT_OK


def cmd_load(args):
    if not os.path.isfile(args.source):
        msg = f"No snapshot file {args.source}."
        logger.error(msg)
        raise IoFailure(msg)
    pms = _local(args, snapshot_path=args.source)
    stats = pms.graph.stats()
    _emit(
        args,
        [{
            'version': pms.graph.version, 'nodes': stats.node_count,
            'edges': stats.edge_count, 'entries': stats.avg_entries,
        }],
        ['version', 'nodes', 'edges', 'entries'],
        lambda r: (
            f"version {r['version']}: {r['nodes']} nodes, "
            f"{r['edges']} edges, {r['entries']:.2f} entries per node"
        )
    )
    return EXIT_OK


def cmd_save(args):
    pms = _local(args)
    print(pms.save(args.destination))
    return EXIT_OK


def cmd_add_node(args):
    return _mutate(args, 'add_node', args.key, *args.entries)


def cmd_add_edge(args):
    return _mutate(args, 'add_edge', args.child, args.parent)


def cmd_rm_node(args):
    return _mutate(args, 'remove_node', args.key)


def cmd_rm_edge(args):
    return _mutate(args, 'remove_edge', args.child, args.parent)


def cmd_grant(args):
    return _mutate(args, 'grant', args.node, args.entry)


def cmd_revoke(args):
    return _mutate(args, 'revoke', args.node, args.entry)


def cmd_effective(args):
    if args.remote is not None:
        entries = _client(args).effective(args.key)
    else:
        entries = _local(args).effective(args.key).to_strings()
    rows = []
    for text in entries:
        rn = parse_name(text)
        rows.append({
            'entry': text,
            'level': rn.level.value,
            'value': '' if rn.value is None else str(rn.value),
        })
    _emit(args, rows, ['entry', 'level', 'value'], lambda r: r['entry'])
    return EXIT_OK


def cmd_check(args):
    request = AccessRequest.from_names(args.consumer, args.action)
    if args.remote is not None:
        body = _client(args).check(request)
    else:
        result = _local(args).check(request)
        body = {
            'outcome': result.outcome,
            'reason': result.reason,
            'matched': (
                format_name(result.matched_entry) if result.granted else None
            ),
        }
    _emit(
        args, [body], ['outcome', 'reason', 'matched'],
        lambda r: r['outcome']
    )
    return EXIT_OK if body['outcome'] == GRANTED else EXIT_DOMAIN


def cmd_consumers(args):
    rows = [
        {'consumer': format_name(key)}
        for key in _local(args).graph.consumers()
    ]
    _emit(args, rows, ['consumer'], lambda r: r['consumer'])
    return EXIT_OK


def cmd_audit(args):
    if args.remote is not None:
        records = _client(args).audit(
            args.consumer, args.start, args.end
        )['records']
    else:
        records = [
            {
                'seq': r.seq, 'millis': r.millis, 'request': r.request,
                'outcome': r.outcome, 'reason': r.reason
            }
            for r in _local(args).audit_records(
                args.consumer, args.start, args.end
            )
        ]
    _emit(
        args, records, ['seq', 'millis', 'request', 'outcome', 'reason'],
        lambda r: (
            f"{r['seq']} {r['millis']} {r['request']} {r['outcome']} "
            f"{r['reason']}"
        )
    )
    return EXIT_OK


def cmd_stats(args):
    if args.remote is not None:
        health = _client(args).health()
        row = {
            'version': health['graph_version'], 'nodes': health['nodes'],
            'audit_records': health['audit_records'],
        }
    else:
        pms = _local(args)
        pms.graph.effective_all()
        stats = pms.graph.stats()
        row = dict(stats._serialize(), version=pms.graph.version)
    _emit(
        args, [row], list(row),
        lambda r: ', '.join(f"{k}={v}" for k, v in r.items())
    )
    return EXIT_OK


def cmd_bench(args):
    if min(args.sizes) < 1 or min(
            args.entries, args.fan_out, args.repeats) < 1:
        raise UsageError("Benchmark parameters must be positive.")
    report = bench(
        args.sizes, entries=args.entries, fan_out=args.fan_out,
        seed=args.seed, repeats=args.repeats, layers=args.layers
    )
    if args.output == 'table':
        print(tabulate(
            report, headers='keys', tablefmt='psql', showindex=False,
            floatfmt='.3e'
        ))
    else:
        print(report.to_string(index=False))
    return EXIT_OK


def cmd_serve(args):
    overrides = {}
    if args.host is not None:
        overrides['bind_host'] = args.host
    if args.port is not None:
        overrides['bind_port'] = args.port
    pms = _local(args, **overrides)
    host = pms.config.get_attr('bind_host')
    port = pms.config.get_attr('bind_port')
    logger.info(f"Serving the permission management system on {host}:{port}.")
    try:
        uvicorn.run(create_app(pms), host=host, port=port)
    finally:
        pms.close()
    return EXIT_OK


def _two_names(parser, first, second):
    parser.add_argument(first, help="canonical resource name")
    parser.add_argument(second, help="canonical resource name")


def build_parser():
    parser = argparse.ArgumentParser(
        prog='pms', description="PMSpy permission management system"
    )
    parser.add_argument('--version', action='version', version=__version__)
    parser.add_argument('--snapshot', help="graph snapshot file")
    parser.add_argument('--journal', help="graph mutation journal file")
    parser.add_argument('--audit', help="decision audit log file")
    parser.add_argument(
        '--remote', metavar='URL', help="address of a running service"
    )
    parser.add_argument('--token', help="admin bearer token")
    parser.add_argument(
        '--output', choices=['plain', 'table'], default='plain'
    )
    parser.add_argument(
        '-v', '--verbose', action='store_true', help="log to stderr"
    )
    sub = parser.add_subparsers(dest='command', required=True)

    load = sub.add_parser('load', help="Validate a snapshot and the journal")
    load.add_argument('source', help="snapshot file")
    load.set_defaults(func=cmd_load)

    save = sub.add_parser('save', help="Write a compacted snapshot")
    save.add_argument(
        'destination', nargs='?', default=None,
        help="target file, default the configured snapshot"
    )
    save.set_defaults(func=cmd_save)

    add_node = sub.add_parser('add-node', help="Add a node")
    add_node.add_argument('key', help="item resource name")
    add_node.add_argument(
        'entries', nargs='*', help="permission resource names"
    )
    add_node.set_defaults(func=cmd_add_node)

    add_edge = sub.add_parser('add-edge', help="Let child inherit parent")
    _two_names(add_edge, 'child', 'parent')
    add_edge.set_defaults(func=cmd_add_edge)

    rm_node = sub.add_parser('rm-node', help="Remove an unconnected node")
    rm_node.add_argument('key', help="item resource name")
    rm_node.set_defaults(func=cmd_rm_node)

    rm_edge = sub.add_parser('rm-edge', help="Remove an edge")
    _two_names(rm_edge, 'child', 'parent')
    rm_edge.set_defaults(func=cmd_rm_edge)

    grant = sub.add_parser('grant', help="Add an entry to a node")
    _two_names(grant, 'node', 'entry')
    grant.set_defaults(func=cmd_grant)

    revoke = sub.add_parser('revoke', help="Remove an entry from a node")
    _two_names(revoke, 'node', 'entry')
    revoke.set_defaults(func=cmd_revoke)

    effective = sub.add_parser(
        'effective', help="Print the effective set of a node"
    )
    effective.add_argument('key', help="item resource name")
    effective.set_defaults(func=cmd_effective)

    check = sub.add_parser('check', help="Decide an access request")
    _two_names(check, 'consumer', 'action')
    check.set_defaults(func=cmd_check)

    consumers = sub.add_parser('consumers', help="List the consumers")
    consumers.set_defaults(func=cmd_consumers)

    audit = sub.add_parser('audit', help="Print the decisions of a consumer")
    audit.add_argument('consumer', help="item resource name")
    audit.add_argument(
        '--from', dest='start', type=int, help="first unix millisecond"
    )
    audit.add_argument(
        '--to', dest='end', type=int, help="last unix millisecond"
    )
    audit.set_defaults(func=cmd_audit)

    stats = sub.add_parser('stats', help="Print the graph size parameters")
    stats.set_defaults(func=cmd_stats)

    bench_cmd = sub.add_parser(
        'bench', help="Time full evaluations of layered random graphs"
    )
    bench_cmd.add_argument(
        '--sizes', type=int, nargs='+', default=[1000, 2000, 4000, 8000]
    )
    bench_cmd.add_argument('--entries', type=int, default=8)
    bench_cmd.add_argument('--fan-out', type=int, default=2)
    bench_cmd.add_argument('--layers', type=int, default=4)
    bench_cmd.add_argument('--seed', type=int, default=0)
    bench_cmd.add_argument('--repeats', type=int, default=5)
    bench_cmd.set_defaults(func=cmd_bench)

    serve = sub.add_parser('serve', help="Run the HTTP service")
    serve.add_argument('--host', help="bind address")
    serve.add_argument('--port', type=int, help="bind port")
    serve.set_defaults(func=cmd_serve)

    return parser


def main(argv=None):
    r"""
    Run the command line tool.

    Parameters
    ----------
    argv : list
        Arguments without the program name, default :code:`sys.argv[1:]`.

    Returns
    -------
    code : int
        Exit code of the command.
    """
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as err:
        return err.code
    if args.verbose:
        logger.add_console_logging(loglevel=logging.DEBUG)

    try:
        return args.func(args)
    except UsageError as err:
        print(f"pms {args.command}: {err}", file=sys.stderr)
        return EXIT_USAGE
    except PMSpyNameError as err:
        print(f"pms {args.command}: {err}", file=sys.stderr)
        return EXIT_USAGE
    except ServiceError as err:
        print(f"pms {args.command}: {err}", file=sys.stderr)
        return EXIT_USAGE if err.status in (400, 422) else EXIT_DOMAIN
    except PMSpyError as err:
        print(f"pms {args.command}: {err}", file=sys.stderr)
        return EXIT_DOMAIN
    except ValueError as err:
        print(f"pms {args.command}: {err}", file=sys.stderr)
        return EXIT_USAGE
    except httpx.HTTPError as err:
        print(f"pms {args.command}: {err}", file=sys.stderr)
        return EXIT_DOMAIN


if __name__ == "__main__":
    sys.exit(main())
