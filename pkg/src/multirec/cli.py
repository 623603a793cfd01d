"""Command line front end.

Exit codes: 0 on success, 1 on usage or input errors, 2 when a check or
comparison fails, 3 when a scan runs out of its budget before deciding.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from .derive import PER_DIRECTION, UNIFORM, derivative_per_direction, derivative_uniform
from .derive import UNDEFINED, directional_blocks
from .errors import (
    FixtureMissing,
    MultirecError,
    ReturnScanFailed,
    ScheduleExhausted,
)
from .figures import verify_figures
from .generators import (
    CONSTANT,
    PRESET_NAMES,
    SEEDED_RANDOM,
    Morphism,
    ToeplitzSchedule,
    fib_rows_word,
    gcd_word,
    load_preset,
    morphism_from_json,
    preset_word,
    thue_morse_word,
    toeplitz_construct,
    toeplitz_rows_word,
)
from .lattice import FiniteWord, WordSource, translate_origin
from .morphic import NOT_SURD, classify_2x2, non_surd_2x2_witness, survey_all_2x2
from .recurrence import (
    BOUNDED_WITNESSED,
    RecurrenceBudget,
    check_ssurdo_empirical,
    check_surd_empirical,
    check_ur_empirical,
    check_urd_empirical,
)
from .render import FORMATS, TEXT, RenderSpec, render_rows, sample_rows
from .residues import family_c
from .rotation import sturmian_spec

USAGE_EXIT = 1
CHECK_FAILED_EXIT = 2
BUDGET_EXIT = 3

_JSON_SEP = (",", ": ")


class _Parser(argparse.ArgumentParser):
    """argparse reserves status 2 for bad flags; this tool uses 1."""

    def error(self, message: str):
        self.print_usage(sys.stderr)
        raise SystemExit(self.prog + ": error: " + message)


class _Usage(Exception):
    pass


class _CheckFailed(Exception):
    pass


# ---------------------------------------------------------------------------
# flag parsing helpers


def parse_box(text: str) -> tuple[int, ...]:
    try:
        parts = tuple(int(p) for p in text.split("x"))
    except ValueError:
        raise _Usage(f"bad box {text!r}, expected like 27x8")
    if not parts or any(p < 1 for p in parts):
        raise _Usage(f"bad box {text!r}, sides must be positive")
    return parts


def parse_vector(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(p) for p in text.split(","))
    except ValueError:
        raise _Usage(f"bad vector {text!r}, expected like 1,2")


def parse_budget(text: str) -> RecurrenceBudget:
    parts = text.split(",")
    if len(parts) != 5:
        raise _Usage("budget takes five comma separated integers L,Q,S,P,B")
    try:
        l, q, s, p, b = (int(x) for x in parts)
        return RecurrenceBudget(l, q, s, p, b)
    except ValueError as exc:
        raise _Usage(f"bad budget {text!r}: {exc}")


def resolve_word(name: str, seed: int = 0) -> WordSource:
    if name in PRESET_NAMES:
        return preset_word(name)
    builders = {
        "thue-morse": thue_morse_word,
        "gcd-thue-morse": lambda: gcd_word(thue_morse_word(), 2),
        "fib-rows": fib_rows_word,
        "toeplitz-rows": toeplitz_rows_word,
        "sturmian": lambda: sturmian_spec().word(),
        "toeplitz-constant": lambda: toeplitz_construct(
            ToeplitzSchedule(policy=CONSTANT, fill_letter=0)
        ),
        "toeplitz-random": lambda: toeplitz_construct(
            ToeplitzSchedule(policy=SEEDED_RANDOM, seed=seed)
        ),
    }
    if name not in builders:
        known = ", ".join(list(PRESET_NAMES) + sorted(builders))
        raise _Usage(f"unknown word {name!r}; have {known}")
    return builders[name]()


def load_morphism_arg(args) -> Morphism:
    if getattr(args, "preset", None):
        return load_preset(args.preset)
    with open(args.morphism, encoding="utf-8") as fh:
        return morphism_from_json(json.load(fh))


def block_text(block: FiniteWord) -> str:
    """[top/.../bottom] with rows read left to right, matching the grid
    orientation of the text renderer."""
    rows = sample_rows(block, block.size)
    return "[" + "/".join("".join(str(c) for c in row) for row in reversed(rows)) + "]"


def emit(text: str, path: str | None) -> None:
    if path is None:
        sys.stdout.write(text)
        if not text.endswith("\n"):
            sys.stdout.write("\n")
    else:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text if text.endswith("\n") else text + "\n")


def dump_json(obj) -> str:
    return json.dumps(obj, separators=_JSON_SEP)


# ---------------------------------------------------------------------------
# subcommands


def cmd_generate(args) -> int:
    spec = RenderSpec(format=args.format)
    if args.iterate is not None:
        if args.box is not None:
            raise _Usage("--box and --iterate are mutually exclusive")
        phi = load_morphism_arg(args)
        grid = phi.iterate(args.letter, args.iterate)
        rows = sample_rows(grid, grid.size)
        emit(render_rows(rows, max(len(phi.images), 2), spec), args.output)
        return 0
    if args.box is None:
        raise _Usage("generate needs --box (or --iterate)")
    box = parse_box(args.box)
    if args.preset or args.morphism:
        w = load_morphism_arg(args).fixed_point(args.letter)
    else:
        w = resolve_word(args.word, seed=args.seed)
    if len(box) != w.dimension:
        raise _Usage(f"box {args.box} has wrong dimension for this word")
    rows = sample_rows(w, box)
    emit(render_rows(rows, w.alphabet_size, spec), args.output)
    return 0


def cmd_extract(args) -> int:
    name = args.preset or args.word
    w = resolve_word(name, seed=args.seed)
    direction = parse_vector(args.dir)
    size = parse_box(args.size)
    if args.origin:
        w = translate_origin(w, parse_vector(args.origin))
    blocks = directional_blocks(w, direction, size, args.len)
    if args.json:
        emit(dump_json([b.to_nested() for b in blocks]), args.output)
    else:
        emit("".join(block_text(b) for b in blocks), args.output)
    return 0


def _gap_line(r) -> str:
    gap = "-" if r.max_gap is None else str(r.max_gap)
    return (
        f"dir={r.direction} size={r.size} origin={r.origin} "
        f"occurrences={len(r.occurrences)} max-gap={gap} {r.verdict}"
    )


def cmd_check(args) -> int:
    w = resolve_word(args.preset or args.word, seed=args.seed)
    budget = parse_budget(args.budget) if args.budget else RecurrenceBudget()
    claim = args.claim
    failed = False
    lines = []
    payload: list[dict] = []
    if args.mode == "urd":
        for r in check_urd_empirical(w, budget, claim=claim):
            lines.append(_gap_line(r))
            payload.append(
                {
                    "direction": list(r.direction),
                    "size": list(r.size),
                    "max_gap": r.max_gap,
                    "verdict": r.verdict,
                }
            )
            failed |= r.verdict != BOUNDED_WITNESSED
    elif args.mode in ("surd", "ssurdo"):
        run = check_surd_empirical if args.mode == "surd" else check_ssurdo_empirical
        for s in run(w, budget, claim=claim):
            bound = "-" if s.bound is None else str(s.bound)
            lines.append(
                f"size={s.size} sup-gap={bound} {s.verdict} "
                f"(worst {_gap_line(s.worst)})"
            )
            payload.append(
                {"size": list(s.size), "sup_gap": s.bound, "verdict": s.verdict}
            )
            failed |= s.verdict != BOUNDED_WITNESSED
    else:
        for r in check_ur_empirical(w, budget):
            win = "-" if r.window is None else str(r.window)
            lines.append(f"size={r.size} window={win}")
            payload.append({"size": list(r.size), "window": r.window})
            failed |= r.window is None
    emit(dump_json(payload) if args.json else "\n".join(lines), args.output)
    if failed:
        raise _CheckFailed(f"{args.mode} check failed for {args.preset or args.word}")
    return 0


def _witness_summary(phi: Morphism, param: int) -> dict:
    witness = non_surd_2x2_witness(phi)
    arg = None if witness.fixed_direction is not None else param
    direction = witness.direction(arg)
    zeros = witness.zero_multipliers(arg, horizon=64)
    return {
        "case": witness.case,
        "pattern": witness.pattern,
        "direction": list(direction),
        "zero_multipliers": [zeros.start, zeros.stop - 1],
        "verified": witness.verify(phi, arg, horizon=64),
    }


def cmd_classify(args) -> int:
    param = args.param
    if args.all:
        results = survey_all_2x2(param=param, workers=args.workers)
        surd = sum(1 for r in results if r["verdict"] == "SURD")
        bad = [r for r in results if not r["ok"]]
        if args.json:
            emit(dump_json(results), args.output)
        else:
            lines = [
                f"total={len(results)} SURD={surd} NOT_SURD={len(results) - surd} "
                f"failures={len(bad)}"
            ]
            lines += [
                f"FAIL zero={r['zero']} one={r['one']} verdict={r['verdict']}"
                for r in bad
            ]
            emit("\n".join(lines), args.output)
        if bad:
            raise _CheckFailed("survey found verdicts the scans contradict")
        return 0
    phi = load_morphism_arg(args)
    verdict = classify_2x2(phi)
    info = {"verdict": verdict}
    if verdict == NOT_SURD:
        info.update(_witness_summary(phi, param))
    if args.json:
        emit(dump_json(info), args.output)
    elif verdict == NOT_SURD:
        lo, hi = info["zero_multipliers"]
        emit(
            f"{verdict}\nwitness {info['case']}: direction "
            f"{tuple(info['direction'])} reads 0 at multipliers {lo}..{hi}, "
            f"verified={info['verified']}",
            args.output,
        )
    else:
        emit(verdict, args.output)
    if verdict == NOT_SURD and not info["verified"]:
        raise _CheckFailed("witness direction failed its own scan")
    return 0


def cmd_subgroups(args) -> int:
    fam = family_c(args.s, args.d)
    if args.json:
        payload = [
            {
                "generator": list(g.generator),
                "elements": [list(e) for e in sorted(g.elements)],
            }
            for g in fam.subgroups
        ]
        emit(dump_json({"s": args.s, "d": args.d, "subgroups": payload}), args.output)
        return 0
    lines = [f"C({args.s}) in dimension {args.d}: {len(fam.subgroups)} subgroups"]
    for g in fam.subgroups:
        elems = " ".join(str(e) for e in sorted(g.elements))
        lines.append(f"<{g.generator}>: {elems}")
    emit("\n".join(lines), args.output)
    return 0


def cmd_derive(args) -> int:
    w = resolve_word(args.word, seed=args.seed)
    size = parse_box(args.size)
    box = parse_box(args.box)
    if args.scheme == "per-direction":
        dw = derivative_per_direction(w, size, box, horizon=args.horizon)
    else:
        scan = parse_box(args.scan_box) if args.scan_box else None
        dw = derivative_uniform(w, size, box, horizon=args.horizon, scan_box=scan)
    if args.json:
        payload = {
            "scheme": dw.scheme,
            "size": list(size),
            "box": list(box),
            "codes": dw.to_nested(),
        }
        if dw.scheme == UNIFORM:
            payload["table"] = [
                [b.to_nested() for b in dw.tables[None].word_of(c)]
                for c in range(len(dw.tables[None]))
            ]
        emit(dump_json(payload), args.output)
        return 0
    nested = dw.to_nested()
    rows = [nested] if len(box) == 1 else nested
    width = max(len(str(c)) for row in rows for c in row)
    out = []
    for row in reversed(rows):
        out.append(" ".join(
            ("?" if c == UNDEFINED else str(c)).rjust(width) for c in row
        ))
    emit("\n".join(out), args.output)
    return 0


def cmd_verify_figures(args) -> int:
    reports = verify_figures()
    bad = [r for r in reports if not r.ok]
    for r in reports:
        print(("PASS " if r.ok else "FAIL ") + f"{r.name} - {r.detail}")
    if bad:
        raise _CheckFailed(f"{len(bad)} figure comparisons failed")
    return 0


# ---------------------------------------------------------------------------
# parser assembly


def _add_word_flags(p: _Parser) -> None:
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--preset", choices=PRESET_NAMES, help="built in morphism")
    group.add_argument("--word", help="named word (preset or classical)")
    p.add_argument("--seed", type=int, default=0, help="seed for random fillings")


def build_parser() -> _Parser:
    top = _Parser(prog="multirec", description=__doc__.splitlines()[0])
    sub = top.add_subparsers(dest="command", required=True, metavar="command")

    p = sub.add_parser("generate", help="render a prefix grid")
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--preset", choices=PRESET_NAMES)
    group.add_argument("--word")
    group.add_argument("--morphism", metavar="FILE", help="morphism as JSON")
    p.add_argument("--box", help="prefix extent, like 32x32")
    p.add_argument("--iterate", type=int, metavar="N", help="render the N-th image of --letter instead of a fixed point prefix")
    p.add_argument("--letter", type=int, default=1)
    p.add_argument("--format", choices=FORMATS, default=TEXT)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("extract", help="read blocks along a direction")
    _add_word_flags(p)
    p.add_argument("--dir", required=True, help="direction, like 1,1")
    p.add_argument("--size", required=True, help="block size, like 1x2")
    p.add_argument("--len", type=int, required=True, help="number of blocks")
    p.add_argument("--origin", help="shift the word first, like 3,0")
    p.add_argument("--json", action="store_true")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_extract)

    p = sub.add_parser("check", help="scan recurrence gaps")
    _add_word_flags(p)
    p.add_argument("--mode", choices=("urd", "surd", "ssurdo", "ur"), default="urd")
    p.add_argument("--budget", metavar="L,Q,S,P,B", help="horizon, direction, size, origin, block bounds")
    p.add_argument("--claim", type=int, help="gap bound the scan must stay under")
    p.add_argument("--json", action="store_true")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("classify", help="decide recurrence for 2x2 binary morphisms")
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--preset", choices=PRESET_NAMES)
    group.add_argument("--morphism", metavar="FILE")
    group.add_argument("--all", action="store_true", help="survey every candidate")
    p.add_argument("--param", type=int, default=3, help="parameter for witness directions")
    p.add_argument("--workers", type=int, default=os.cpu_count(), help="process pool size for --all")
    p.add_argument("--json", action="store_true")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("subgroups", help="list cyclic subgroups of (Z/s)^d")
    p.add_argument("--s", type=int, required=True)
    p.add_argument("--d", type=int, default=2)
    p.add_argument("--json", action="store_true")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_subgroups)

    p = sub.add_parser("derive", help="code return words on a grid")
    p.add_argument("--word", required=True)
    p.add_argument("--size", required=True, help="prefix block size, like 1x2")
    p.add_argument("--scheme", choices=("per-direction", "uniform"), default="per-direction")
    p.add_argument("--box", required=True, help="grid extent, like 27x8")
    p.add_argument("--scan-box", help="table collection extent (uniform only)")
    p.add_argument("--horizon", type=int, default=512)
    p.add_argument("--seed", type=int, default=0)
    style = p.add_mutually_exclusive_group()
    style.add_argument("--json", action="store_true")
    style.add_argument("--grid", action="store_true")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_derive)

    p = sub.add_parser("verify-figures", help="compare against shipped reference grids")
    p.set_defaults(func=cmd_verify_figures)

    return top


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except SystemExit as exc:
        # raised by the overridden parser error hook
        if isinstance(exc.code, str):
            print(exc.code, file=sys.stderr)
            return USAGE_EXIT
        return 0 if exc.code in (0, None) else USAGE_EXIT
    except _Usage as exc:
        print(f"multirec: error: {exc}", file=sys.stderr)
        return USAGE_EXIT
    except (ScheduleExhausted, ReturnScanFailed) as exc:
        print(f"multirec: budget exhausted: {exc}", file=sys.stderr)
        return BUDGET_EXIT
    except (_CheckFailed, FixtureMissing) as exc:
        print(f"multirec: {exc}", file=sys.stderr)
        return CHECK_FAILED_EXIT
    except (MultirecError, OSError, KeyError, ValueError) as exc:
        print(f"multirec: error: {exc}", file=sys.stderr)
        return USAGE_EXIT


if __name__ == "__main__":
    raise SystemExit(main())
