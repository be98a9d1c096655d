"""Thin command-line client for the heap service.

By default the CLI spins up the service in-process, so no server needs to
be running; point ``--url`` at a deployed instance to use it remotely.

Exit codes: 0 pass, 1 mismatch or audit failure, 2 usage error.
"""

import argparse
import sys

import httpx

EXIT_PASS = 0
EXIT_FAIL = 1
EXIT_USAGE = 2


def _client(url):
    if url:
        return httpx.Client(base_url=url, timeout=600.0)
    # In-process transport against the ASGI app.
    import warnings

    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        from fastapi.testclient import TestClient

    from .service import create_app

    return TestClient(create_app())


def _write_stats(path, stats_payload):
    from .harness import emit_stats
    from .heap import Stats

    text = emit_stats(Stats(**stats_payload))
    if path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w") as fh:
            fh.write(text)


def _report_verdict(payload, stats_path):
    if stats_path and "stats" in payload:
        _write_stats(stats_path, payload["stats"])
    if payload["ok"]:
        print(f"pass: {payload.get('compared', 0)} extractions compared")
        return EXIT_PASS
    if payload.get("detail"):
        print(f"FAIL at op {payload.get('op_index')}: {payload['detail']}")
    else:
        print(
            f"FAIL at op {payload.get('op_index')}: "
            f"expected {payload.get('expected')}, got {payload.get('got')}"
        )
    return EXIT_FAIL


def _post(client, path, body):
    response = client.post(path, json=body)
    if response.status_code in (400, 422):
        detail = response.json().get("detail", response.text)
        print(f"usage error: {detail}", file=sys.stderr)
        sys.exit(EXIT_USAGE)
    response.raise_for_status()
    return response.json()


def cmd_run(args, client):
    if args.trace == "-":
        text = sys.stdin.read()
    else:
        try:
            with open(args.trace) as fh:
                text = fh.read()
        except OSError as exc:
            print(f"usage error: {exc}", file=sys.stderr)
            return EXIT_USAGE
    payload = _post(
        client,
        "/run",
        {
            "trace": text,
            "strategy": args.strategy,
            "audit": args.audit,
            "audit_stride": args.audit_stride,
        },
    )
    return _report_verdict(payload, args.stats)


def cmd_fuzz(args, client):
    payload = _post(
        client,
        "/fuzz",
        {
            "seed": args.seed,
            "ops": args.ops,
            "strategy": args.strategy,
            "audit": args.audit,
            "audit_stride": args.audit_stride,
        },
    )
    return _report_verdict(payload, args.stats)


def cmd_bench(args, client):
    payload = _post(
        client,
        "/bench",
        {
            "seed": args.seed,
            "vertices": args.vertices,
            "edges": args.edges,
            "strategy": args.strategy,
        },
    )
    if args.stats and "stats" in payload:
        _write_stats(args.stats, payload["stats"])
    if payload["ok"]:
        print(
            f"pass: {payload['vertices']} vertices, "
            f"{payload['edges']} edges, distances match"
        )
        return EXIT_PASS
    print(
        f"FAIL at vertex {payload['bad_vertex']}: "
        f"expected {payload['expected']}, got {payload['got']}"
    )
    return EXIT_FAIL


def cmd_cert(args, client):
    payload = _post(client, "/cert", {"max_rank": args.max_rank})
    if payload["ok"]:
        print(f"pass: rank bound certified up to rank {payload['max_rank']}")
        return EXIT_PASS
    print(f"FAIL: certificate does not hold up to rank {payload['max_rank']}")
    return EXIT_FAIL


def build_parser():
    parser = argparse.ArgumentParser(
        prog="dkheap",
        description="Decrease-key heap tools (thin client over the service).",
    )
    parser.add_argument(
        "--url",
        default=None,
        help="service base URL; default runs the service in-process",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, strategy=True):
        if strategy:
            p.add_argument(
                "--strategy",
                choices=["amortized", "wc1", "wc2"],
                default="amortized",
            )
        p.add_argument("--stats", default=None, help="write stats record here")

    p_run = sub.add_parser("run", help="replay a trace file")
    p_run.add_argument("trace", help="trace file path, or - for stdin")
    common(p_run)
    p_run.add_argument(
        "--audit", choices=["off", "boundary", "paranoid"], default="boundary"
    )
    p_run.add_argument("--audit-stride", type=int, default=1)
    p_run.set_defaults(func=cmd_run)

    p_fuzz = sub.add_parser("fuzz", help="seeded differential fuzzing")
    common(p_fuzz)
    p_fuzz.add_argument("--seed", type=int, default=0)
    p_fuzz.add_argument("--ops", type=int, default=1000)
    p_fuzz.add_argument(
        "--audit", choices=["off", "boundary", "paranoid"], default="boundary"
    )
    p_fuzz.add_argument("--audit-stride", type=int, default=1)
    p_fuzz.set_defaults(func=cmd_fuzz)

    p_bench = sub.add_parser("bench", help="Dijkstra against a quadratic oracle")
    common(p_bench)
    p_bench.add_argument("--seed", type=int, default=0)
    p_bench.add_argument("--vertices", type=int, default=1000)
    p_bench.add_argument("--edges", type=int, default=5000)
    p_bench.set_defaults(func=cmd_bench)

    p_cert = sub.add_parser("cert", help="numeric rank-bound certificate")
    common(p_cert, strategy=False)
    p_cert.add_argument("--max-rank", type=int, default=60)
    p_cert.set_defaults(func=cmd_cert)

    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    with _client(args.url) as client:
        return args.func(args, client)


if __name__ == "__main__":
    sys.exit(main())
