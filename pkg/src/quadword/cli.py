"""``quadword`` command line.

Exit status: 0 when every check passes, 1 when a bound or identity fails (or
a computation hits a resource or horizon limit), 2 on usage errors.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import sys
from datetime import datetime, timezone
from pathlib import Path
from typing import Any, Callable

from . import __version__
from .algebra import (
    build_periodic_quotient,
    enumerate_cogk1_candidates,
    envelope_increases,
    matrix_image_degrees,
    verify_quotient_identities,
)
from .construction import ConstructionParams, ConstructionTrace, UStream
from .errors import QuadwordError
from .factors import FactorIndex, trusted_profile
from .growth import (
    ForbiddenPresentation,
    check_growth_sandwich,
    classify_growth,
    growth_report,
    transfer_counts,
)
from .pipeline import summarize, verify_all
from .sturmian import fibonacci_stream, mechanical_stream
from .words import FiniteSourceStream, WordStream, read_word, write_word

log = logging.getLogger("quadword")


class UsageError(Exception):
    pass


def _add_base(p: argparse.ArgumentParser, allow_file: bool = True) -> None:
    g = p.add_mutually_exclusive_group()
    g.add_argument("--base", choices=["fibonacci"], help="named base word")
    g.add_argument("--slope", help="comma-separated continued-fraction partial quotients")
    if allow_file:
        g.add_argument("--in", dest="infile", help="word text file")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="quadword", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    def command(name: str, help: str) -> argparse.ArgumentParser:
        p = sub.add_parser(name, help=help)
        p.add_argument("--config", help="JSON file supplying defaults for any flag")
        p.add_argument("--report", help="write the JSON report here instead of stdout")
        return p

    p = command("gen", "write a prefix of a base word")
    _add_base(p, allow_file=False)
    p.add_argument("--length", type=int)
    p.add_argument("--out")

    p = command("construct", "build the U construction and write a prefix of U")
    _add_base(p)
    p.add_argument("--depth", type=int)
    p.add_argument("--length", type=int)
    p.add_argument("--out")
    p.add_argument("--trace")

    p = command("complexity", "subword complexity profile")
    _add_base(p)
    p.add_argument("--length", type=int, help="prefix length for --base/--slope")
    p.add_argument("--nmax", type=int)
    p.add_argument("--format", choices=["csv", "json"])
    p.add_argument("--out")

    p = command("growth", "growth function dim(V^n) and estimates")
    _add_base(p)
    p.add_argument("--length", type=int)
    p.add_argument("--nmax", type=int)
    p.add_argument("--u-bounds", action="store_true", default=None, help="check the C(n+1,2) / 100(n+1)(log2 n)^2 sandwich")

    p = command("hilbert", "count words avoiding forbidden factors")
    p.add_argument("--alphabet")
    p.add_argument("--forbidden", help="comma-separated forbidden words")
    p.add_argument("--nmax", type=int)
    p.add_argument("--format", choices=["csv", "json"])
    p.add_argument("--out")

    p = command("primes", "co-GK-1 prime candidates A_{v^omega}")
    _add_base(p)
    p.add_argument("--length", type=int)
    p.add_argument("--power", type=int)
    p.add_argument("--dmax", type=int)
    p.add_argument("--format", choices=["json"])

    p = command("quotient", "check the periodic quotient identities")
    p.add_argument("--period")
    p.add_argument("--check-length", type=int)

    p = command("degrees", "minimal periods and PI degrees of the anchor quotients")
    p.add_argument("--trace")
    p.add_argument("--in", dest="infile")
    p.add_argument("--power", type=int)

    p = command("verify-all", "run the whole verification chain")
    _add_base(p, allow_file=False)
    p.add_argument("--depth", type=int)
    p.add_argument("--length", type=int)
    p.add_argument("--nmax", type=int)
    p.add_argument("--power", type=int)
    return parser


DEFAULTS: dict[str, dict[str, Any]] = {
    "construct": {"depth": 6},
    "complexity": {"format": "csv"},
    "growth": {"u_bounds": False},
    "hilbert": {"format": "csv"},
    "primes": {"power": 4, "dmax": 12, "format": "json"},
    "quotient": {"check_length": 30},
    "degrees": {"power": 4},
    "verify-all": {"depth": 6, "length": 10**6, "nmax": 2000, "power": 4},
}

REQUIRED: dict[str, tuple[str, ...]] = {
    "gen": ("length",),
    "construct": ("length",),
    "complexity": ("nmax",),
    "growth": ("nmax",),
    "hilbert": ("alphabet", "nmax"),
    "quotient": ("period",),
    "degrees": ("trace", "infile"),
}

NUMERIC = ("length", "depth", "nmax", "power", "dmax", "check_length")


def resolve(args: argparse.Namespace) -> dict[str, Any]:
    config = {k: v for k, v in vars(args).items() if k not in ("config", "verbose")}
    if args.config:
        extra = json.loads(Path(args.config).read_text())
        for key, value in extra.items():
            key = key.replace("-", "_")
            if key == "in":
                key = "infile"
            if config.get(key) is None:
                config[key] = value
    for key, value in DEFAULTS.get(args.command, {}).items():
        if config.get(key) is None:
            config[key] = value
    for key in REQUIRED.get(args.command, ()):
        if config.get(key) is None:
            flag = "--in" if key == "infile" else "--" + key.replace("_", "-")
            raise UsageError(f"{args.command}: missing required {flag}")
    for key in NUMERIC:
        if config.get(key) is not None and int(config[key]) < 1:
            raise UsageError(f"--{key.replace('_', '-')} must be positive")
    bases = [k for k in ("base", "slope", "infile") if config.get(k)]
    if len(bases) > 1:
        raise UsageError(f"base specs are mutually exclusive, got {bases}")
    return config


def base_stream(config: dict[str, Any], default: str | None = "fibonacci") -> WordStream:
    if config.get("slope"):
        try:
            quotients = [int(x) for x in str(config["slope"]).split(",") if x.strip()]
        except ValueError:
            raise UsageError(f"--slope must be comma-separated integers, got {config['slope']!r}") from None
        return mechanical_stream(quotients)
    if config.get("infile"):
        return FiniteSourceStream(read_word(config["infile"]), str(config["infile"]))
    if config.get("base") == "fibonacci" or default == "fibonacci":
        return fibonacci_stream()
    raise UsageError("a base word is required (--base, --slope or --in)")


def _source_word(config: dict[str, Any]):
    stream = base_stream(config)
    if isinstance(stream, FiniteSourceStream):
        return stream.word, stream.descriptor
    if not config.get("length"):
        raise UsageError("--length is required with --base/--slope")
    return stream.prefix(int(config["length"])), {**stream.descriptor, "length": int(config["length"])}


def cmd_gen(config: dict[str, Any]) -> tuple[dict[str, Any], bool]:
    stream = base_stream(config)
    word = stream.prefix(int(config["length"]))
    if config.get("out"):
        write_word(config["out"], word)
    else:
        sys.stdout.write(str(word) + "\n")
    return {"source": stream.descriptor, "length": len(word)}, True


def cmd_construct(config: dict[str, Any]) -> tuple[dict[str, Any], bool]:
    base = base_stream(config)
    params = ConstructionParams(base, depth=int(config["depth"]))
    u = UStream(params)
    trace = u.trace()
    word = u.prefix(int(config["length"]))
    if config.get("out"):
        write_word(config["out"], word)
    doc = trace.to_json()
    if config.get("trace"):
        Path(config["trace"]).write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n")
    return {"trace": doc, "length": len(word)}, doc["length_bound_ok"]


def cmd_complexity(config: dict[str, Any]) -> tuple[dict[str, Any], bool]:
    word, source = _source_word(config)
    n_max = min(int(config["nmax"]), len(word))
    index = FactorIndex(word)
    profile = trusted_profile(word, index=index, source=source)
    counts = index.complexity_counts()
    rows = [{"n": n, "p_n": int(counts[n]), "trusted": int(n <= profile.n_trust)} for n in range(1, n_max + 1)]
    if config["format"] == "csv":
        buf = io.StringIO()
        writer = csv.DictWriter(buf, fieldnames=["n", "p_n", "trusted"], lineterminator="\n")
        writer.writeheader()
        writer.writerows(rows)
        _emit(config.get("out"), buf.getvalue())
        return {"n_trust": profile.n_trust, "source": source}, True
    result = {"n_trust": profile.n_trust, "source": source, "rows": rows}
    if config.get("out"):
        _emit(config["out"], json.dumps(result, indent=2, sort_keys=True) + "\n")
    return result, True


def cmd_growth(config: dict[str, Any]) -> tuple[dict[str, Any], bool]:
    word, source = _source_word(config)
    profile = trusted_profile(word, source=source)
    n_max = int(config["nmax"])
    report = growth_report(profile, n_max)
    ok = True
    if config.get("u_bounds"):
        report.bound_checks = check_growth_sandwich(profile, n_max)
        ok = all(c.ok for c in report.bound_checks)
    return {"source": source, "n_trust": profile.n_trust, **report.to_json()}, ok


def cmd_hilbert(config: dict[str, Any]) -> tuple[dict[str, Any], bool]:
    pres = ForbiddenPresentation.parse(config["alphabet"], config.get("forbidden") or "")
    n_max = int(config["nmax"])
    counts = transfer_counts(pres, n_max)
    if config["format"] == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["n", "count"])
        writer.writerows([n, counts[n]] for n in range(1, n_max + 1))
        _emit(config.get("out"), buf.getvalue())
        return {"forbidden": sorted(str(w) for w in pres.forbidden)}, True
    cls = classify_growth(pres)
    result = {
        "forbidden": sorted(str(w) for w in pres.forbidden),
        "counts": {str(n): counts[n] for n in range(1, n_max + 1)},
        "growth": {"kind": cls.kind.value, "degree": cls.degree, "rate": cls.rate},
    }
    if config.get("out"):
        _emit(config["out"], json.dumps(result, indent=2, sort_keys=True) + "\n")
    return result, True


def cmd_primes(config: dict[str, Any]) -> tuple[dict[str, Any], bool]:
    word, source = _source_word(config)
    index = FactorIndex(word)
    profile = trusted_profile(word, index=index)
    cands = enumerate_cogk1_candidates(index, int(config["power"]), int(config["dmax"]), horizon=profile.n_trust)
    return {"source": source, "n_trust": profile.n_trust, "candidates": [c.as_dict() for c in cands]}, True


def cmd_quotient(config: dict[str, Any]) -> tuple[dict[str, Any], bool]:
    report = verify_quotient_identities(build_periodic_quotient(config["period"]), int(config["check_length"]))
    return report.to_json(), report.ok


def cmd_degrees(config: dict[str, Any]) -> tuple[dict[str, Any], bool]:
    trace = ConstructionTrace.from_json(json.loads(Path(config["trace"]).read_text()))
    index = FactorIndex(read_word(config["infile"], trace.anchors[0].alphabet))
    degrees = matrix_image_degrees(trace, index, int(config["power"]))
    return {
        "degrees": [d.__dict__ for d in degrees],
        "envelope_increases": envelope_increases(degrees),
    }, True


def cmd_verify_all(config: dict[str, Any]) -> tuple[dict[str, Any], bool]:
    checks = verify_all(
        base_stream(config),
        depth=int(config["depth"]),
        length=int(config["length"]),
        n_max=int(config["nmax"]),
        power=int(config["power"]),
    )
    summary = summarize(checks)
    for c in checks:
        log.info("%s %s", "PASS" if c.ok else "FAIL", c.name)
    return summary, summary["pass"]


COMMANDS: dict[str, Callable[[dict[str, Any]], tuple[dict[str, Any], bool]]] = {
    "gen": cmd_gen,
    "construct": cmd_construct,
    "complexity": cmd_complexity,
    "growth": cmd_growth,
    "hilbert": cmd_hilbert,
    "primes": cmd_primes,
    "quotient": cmd_quotient,
    "degrees": cmd_degrees,
    "verify-all": cmd_verify_all,
}

def _emit(path: str | None, text: str) -> None:
    if path:
        Path(path).write_text(text)
    else:
        sys.stdout.write(text)


def make_report(command: str, config: dict[str, Any], result: dict[str, Any], ok: bool) -> dict[str, Any]:
    return {
        "header": {"generated_at": datetime.now(timezone.utc).isoformat(timespec="seconds")},
        "version": __version__,
        "command": command,
        "config": config,
        "pass": ok,
        "result": result,
    }


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    try:
        config = resolve(args)
        result, ok = COMMANDS[args.command](config)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"quadword: error: {exc}", file=sys.stderr)
        return 2
    except (QuadwordError, ValueError, OSError) as exc:
        print(f"quadword: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1

    report = make_report(args.command, config, result, ok)
    text = json.dumps(report, indent=2, sort_keys=True) + "\n"
    data_on_stdout = (args.command == "gen" or config.get("format") == "csv") and not config.get("out")
    if config.get("report"):
        Path(config["report"]).write_text(text)
    elif not data_on_stdout:
        sys.stdout.write(text)
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())
