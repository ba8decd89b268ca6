"""Command-line front end.

Settings come from built-in defaults, then a key=value config file, then
MINORPOLY_* environment variables, then flags; later sources win.

Exit codes: 0 no FAIL, 2 some FAIL (or replay mismatch), 3 SKIPs but no
FAIL, 64 bad configuration, 65 unparseable input.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from collections import Counter
from dataclasses import dataclass
from typing import Iterable, TextIO

from .claims import (
    Budgets,
    ClaimId,
    ClaimReport,
    SuiteConfig,
    Verdict,
    dumps,
    header_record,
    rerun,
    run_suite_lines,
    SCHEMA,
    SCHEMA_VERSION,
)
from .coloring import chromatic_number
from .encoding import (
    EncodingContext,
    build_G_poly,
    build_H,
    build_P,
    build_Q,
    build_S,
    select_M1,
    strict_prime,
)
from .errors import DomainError, ResourceError
from .ffpoly import is_prime
from .graph import clique_number, enumerate_connected_graphs
from .graph6 import Graph6Error, from_graph6, read_graph6_lines
from .minors import hadwiger_number

EXIT_OK = 0
EXIT_FAIL = 2
EXIT_SKIP = 3
EXIT_CONFIG = 64
EXIT_PARSE = 65

ENV_PREFIX = "MINORPOLY_"
MAX_N = 10


class ConfigError(ValueError):
    pass


@dataclass
class RunConfig:
    n_max: int = 4
    claims: tuple[ClaimId, ...] = tuple(ClaimId)
    prime: int | None = None
    sequences: int = 3
    seed: int = 0
    term_cap: int = Budgets.term_cap
    node_cap: int = Budgets.node_cap
    eval_cap: int = Budgets.eval_cap
    subset_cap: int = Budgets.subset_cap
    pipeline_max_n: int = Budgets.pipeline_max_n
    out: str = "-"
    jobs: int = 1
    input: str | None = None
    timings: bool = False

    def suite(self) -> SuiteConfig:
        return SuiteConfig(
            claims=frozenset(self.claims),
            prime=self.prime,
            sequences=self.sequences,
            seed=self.seed,
            budgets=Budgets(self.term_cap, self.node_cap, self.eval_cap,
                            self.subset_cap, self.pipeline_max_n),
            timings=self.timings,
        )

    def validate(self) -> None:
        if not 1 <= self.n_max <= MAX_N:
            raise ConfigError(f"n_max must lie in 1..{MAX_N}")
        if self.prime is not None and (not is_prime(self.prime) or self.prime < 3):
            raise ConfigError("prime must be a prime >= 3 (t + 2 for t = 1)")
        for name in ("sequences", "jobs", "term_cap", "node_cap", "eval_cap", "subset_cap"):
            if getattr(self, name) < 1:
                raise ConfigError(f"{name} must be positive")


_INT_KEYS = {"n_max", "sequences", "seed", "term_cap", "node_cap", "eval_cap",
             "subset_cap", "pipeline_max_n", "jobs"}


def _coerce(key: str, raw: str):
    key = key.strip().lower().replace("-", "_")
    raw = raw.strip()
    if key in _INT_KEYS:
        try:
            return key, int(raw)
        except ValueError:
            raise ConfigError(f"{key} must be an integer, got {raw!r}") from None
    if key == "prime":
        if raw.lower() in ("", "strict", "none"):
            return key, None
        try:
            return key, int(raw)
        except ValueError:
            raise ConfigError(f"prime must be an integer or 'strict', got {raw!r}") from None
    if key == "claims":
        return key, parse_claims(raw)
    if key in ("out", "input"):
        return key, raw or None
    if key == "timings":
        return key, raw.lower() in ("1", "true", "yes", "on")
    raise ConfigError(f"unknown setting {key!r}")


def parse_claims(text: str) -> tuple[ClaimId, ...]:
    if text.strip().lower() in ("", "all"):
        return tuple(ClaimId)
    out = []
    for part in text.split(","):
        part = part.strip().upper()
        if not part:
            continue
        try:
            out.append(ClaimId(part))
        except ValueError:
            raise ConfigError(f"unknown claim {part!r}") from None
    return tuple(c for c in ClaimId if c in out)


def read_config_file(path: str) -> dict:
    settings = {}
    try:
        with open(path, encoding="utf-8") as fh:
            for lineno, line in enumerate(fh, start=1):
                line = line.strip()
                if not line or line.startswith("#"):
                    continue
                if "=" not in line:
                    raise ConfigError(f"{path}:{lineno}: expected key=value")
                key, value = line.split("=", 1)
                k, v = _coerce(key, value)
                settings[k] = v
    except OSError as exc:
        raise ConfigError(f"cannot read config file: {exc}") from None
    return settings


def read_env(environ=os.environ) -> dict:
    settings = {}
    for name, value in sorted(environ.items()):
        if name.startswith(ENV_PREFIX) and name != ENV_PREFIX + "CONFIG":
            k, v = _coerce(name[len(ENV_PREFIX):], value)
            settings[k] = v
    return settings


def resolve_config(args: argparse.Namespace, environ=os.environ) -> RunConfig:
    cfg = RunConfig()
    layers = []
    path = args.config or environ.get(ENV_PREFIX + "CONFIG")
    if path:
        layers.append(read_config_file(path))
    layers.append(read_env(environ))
    flags = {}
    for key in ("n_max", "sequences", "seed", "term_cap", "node_cap", "eval_cap",
                "subset_cap", "pipeline_max_n", "jobs", "out", "input"):
        value = getattr(args, key, None)
        if value is not None:
            flags[key] = value
    if getattr(args, "claims", None) is not None:
        flags["claims"] = parse_claims(args.claims)
    if getattr(args, "timings", False):
        flags["timings"] = True
    if getattr(args, "strict", False) and getattr(args, "prime", None) is not None:
        raise ConfigError("--strict and --prime are mutually exclusive")
    if getattr(args, "strict", False):
        flags["prime"] = None
    elif getattr(args, "prime", None) is not None:
        flags["prime"] = args.prime
    layers.append(flags)
    for layer in layers:
        for k, v in layer.items():
            setattr(cfg, k, v)
    cfg.validate()
    return cfg


# subcommands -------------------------------------------------------------------


def _load_corpus(cfg: RunConfig):
    if cfg.input is None:
        return list(enumerate_connected_graphs(cfg.n_max))
    if cfg.input == "-":
        return list(read_graph6_lines(sys.stdin))
    with open(cfg.input, encoding="ascii", errors="replace") as fh:
        return list(read_graph6_lines(fh))


def summary_table(counts: Counter, out: TextIO) -> None:
    claims = sorted({c for c, _ in counts}, key=lambda c: list(ClaimId).index(ClaimId(c)))
    out.write(f"{'claim':<14}{'PASS':>7}{'vacuous':>9}{'FAIL':>7}{'SKIP':>7}\n")
    for c in claims:
        out.write(f"{c:<14}{counts[c, 'PASS']:>7}{counts[c, 'vacuous']:>9}"
                  f"{counts[c, 'FAIL']:>7}{counts[c, 'SKIP']:>7}\n")


def cmd_verify(cfg: RunConfig) -> int:
    try:
        corpus = _load_corpus(cfg)
    except Graph6Error as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except OSError as exc:
        print(f"cannot read corpus: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    suite = cfg.suite()
    header = header_record(suite, {"n_max": cfg.n_max, "input": cfg.input})
    to_stdout = cfg.out == "-"
    sink = sys.stdout if to_stdout else open(cfg.out, "w", encoding="utf-8", newline="\n")
    counts: Counter = Counter()
    try:
        sink.write(dumps(header) + "\n")
        for line in run_suite_lines(corpus, suite, cfg.jobs):
            sink.write(line + "\n")
            rec = json.loads(line)
            counts[rec["claim"], rec["verdict"]] += 1
            if rec["vacuous"]:
                counts[rec["claim"], "vacuous"] += 1
    finally:
        if not to_stdout:
            sink.close()
    summary_table(counts, sys.stderr if to_stdout else sys.stdout)
    verdicts = Counter(v for (_, v), k in counts.items() for _ in range(k))
    if verdicts["FAIL"]:
        return EXIT_FAIL
    if verdicts["SKIP"]:
        return EXIT_SKIP
    return EXIT_OK


def graph_stats(g) -> dict:
    h = hadwiger_number(g)
    chi = chromatic_number(g)
    return {
        "n": g.n,
        "max_degree": g.max_degree(),
        "chi": chi,
        "h": h,
        "omega": clique_number(g),
        "strict_p": strict_prime(g),
        "chi_le_h": "PASS" if chi <= h else "FAIL",
    }


def cmd_stats(text: str) -> int:
    try:
        g = from_graph6(text)
    except Graph6Error as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    if g.n == 0:
        print("parse error: empty graph", file=sys.stderr)
        return EXIT_PARSE
    row = graph_stats(g)
    cols = ["graph6"] + list(row)
    vals = [text.strip()] + [str(v) for v in row.values()]
    widths = [max(len(c), len(v)) + 2 for c, v in zip(cols, vals)]
    print("".join(c.ljust(w) for c, w in zip(cols, widths)).rstrip())
    print("".join(v.ljust(w) for v, w in zip(vals, widths)).rstrip())
    return EXIT_OK if row["chi_le_h"] == "PASS" else EXIT_FAIL


def _replay_lines(lines: Iterable[str], cfg: RunConfig, out: TextIO) -> int:
    status = EXIT_OK
    for raw in lines:
        if not raw.strip():
            continue
        try:
            data = json.loads(raw)
        except json.JSONDecodeError as exc:
            print(f"schema error: {exc}", file=sys.stderr)
            return EXIT_PARSE
        if not isinstance(data, dict):
            print("schema error: record is not an object", file=sys.stderr)
            return EXIT_PARSE
        if data.get("record") == "header":
            if data.get("schema") != SCHEMA or data.get("version") != SCHEMA_VERSION:
                print("schema error: unsupported header", file=sys.stderr)
                return EXIT_PARSE
            continue
        try:
            report = ClaimReport.from_json(data)
        except DomainError as exc:
            print(f"schema error: {exc}", file=sys.stderr)
            return EXIT_PARSE
        if report.verdict == Verdict.SKIP:
            out.write(f"{report.claim.value} {report.graph_g6}: SKIP, nothing to replay\n")
            continue
        try:
            again = rerun(report, cfg.suite())
        except (DomainError, KeyError, TypeError, ValueError) as exc:
            out.write(f"{report.claim.value} {report.graph_g6}: cannot rebuild instance ({exc})\n")
            status = EXIT_FAIL
            continue
        if again is None:
            out.write(f"{report.claim.value} {report.graph_g6}: cannot rebuild instance\n")
            status = EXIT_FAIL
            continue
        same = again.verdict == report.verdict and dumps(again.witness) == dumps(report.witness)
        if again.verdict == Verdict.SKIP and report.verdict != Verdict.SKIP:
            same = False
        out.write(f"{report.claim.value} {report.graph_g6}: {report.verdict.value} -> "
                  f"{again.verdict.value} {'match' if same else 'MISMATCH'}\n")
        if not same:
            status = EXIT_FAIL
    return status


def cmd_replay(source: str, cfg: RunConfig) -> int:
    if source == "-":
        return _replay_lines(sys.stdin, cfg, sys.stdout)
    if os.path.exists(source):
        with open(source, encoding="utf-8") as fh:
            return _replay_lines(fh, cfg, sys.stdout)
    return _replay_lines([source], cfg, sys.stdout)


POLYS = ("P", "H", "S", "Q", "G")


def cmd_encode_dump(text: str, t: int, which: str, edge: tuple[int, int] | None,
                    prime: int | None, expand: bool) -> int:
    try:
        g = from_graph6(text)
    except Graph6Error as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    try:
        ctx = EncodingContext.strict(g, t) if prime is None else EncodingContext.small(g, t, prime)
        if which == "P":
            fp = build_P(ctx)
        else:
            if edge is None:
                raise DomainError(f"{which} needs --edge")
            if which == "H":
                fp = build_H(ctx, edge)
            elif which == "S":
                fp = build_S(ctx, edge)
            elif which == "Q":
                fp = build_Q(ctx, edge)
            else:
                fp = build_G_poly(ctx, edge, select_M1(ctx, edge))
        print(fp.dump())
        if expand:
            if ctx.mode != "small":
                raise DomainError("--expand needs --prime")
            print(fp.expand().to_text())
    except (DomainError, ResourceError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    return EXIT_OK


def _edge_arg(text: str) -> tuple[int, int]:
    try:
        a, b = (int(x) for x in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError("edge must look like 1,2") from None
    return a, b


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="minorpoly", description=__doc__.splitlines()[0])
    parser.add_argument("--config", help="key=value settings file")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser) -> None:
        p.add_argument("--prime", type=int, help="small-prime mode with this prime")
        p.add_argument("--strict", action="store_true", help="strict prime (default)")
        p.add_argument("--seed", type=int)
        p.add_argument("--sequences", type=int, help="minor sequences per graph")
        p.add_argument("--term-cap", dest="term_cap", type=int)
        p.add_argument("--node-cap", dest="node_cap", type=int)
        p.add_argument("--eval-cap", dest="eval_cap", type=int)
        p.add_argument("--subset-cap", dest="subset_cap", type=int)
        p.add_argument("--pipeline-max-n", dest="pipeline_max_n", type=int)

    v = sub.add_parser("verify", help="run the claim suite and write JSONL reports")
    v.add_argument("--n-max", dest="n_max", type=int)
    v.add_argument("--claims", help="comma-separated claim tags, or 'all'")
    v.add_argument("--out", help="JSONL path, '-' for stdout")
    v.add_argument("--jobs", type=int)
    v.add_argument("--input", help="graph6 corpus file instead of enumeration")
    v.add_argument("--timings", action="store_true", help="record wall_ms (breaks byte determinism)")
    common(v)

    s = sub.add_parser("stats", help="invariants of one graph")
    s.add_argument("graph6")

    r = sub.add_parser("replay", help="re-execute report lines")
    r.add_argument("report", help="JSON line, JSONL file, or '-'")
    common(r)

    d = sub.add_parser("encode-dump", help="print a factored polynomial")
    d.add_argument("graph6")
    d.add_argument("--t", type=int, required=True)
    d.add_argument("--poly", choices=POLYS, default="P")
    d.add_argument("--edge", type=_edge_arg, help="v_s,v_b")
    d.add_argument("--prime", type=int, help="small-prime mode with this prime")
    d.add_argument("--expand", action="store_true", help="also print the reduced expansion")
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_CONFIG if exc.code else EXIT_OK
    if args.command == "stats":
        return cmd_stats(args.graph6)
    if args.command == "encode-dump":
        return cmd_encode_dump(args.graph6, args.t, args.poly, args.edge, args.prime, args.expand)
    try:
        cfg = resolve_config(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    if args.command == "verify":
        return cmd_verify(cfg)
    return cmd_replay(args.report, cfg)


if __name__ == "__main__":
    sys.exit(main())
