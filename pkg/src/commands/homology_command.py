from commands import EXIT_MISMATCH, EXIT_OK, CommandGroup, Context, Outcome, arg
from data.strata_data import SELF_JOIN_MAX_R
from services import catalog as cat, ssq
from services.chainlab import borel_moore
from services.catalog import TWIST_TAGS, CheckStatus
from services.errors import DataError, VerificationError
from services.exportation import TableFormatter
from services.utils import keyed

group = CommandGroup("homology")

# Spaces whose Borel-Moore homology is asserted outright.
EXPECTED_HOMOLOGY = [
    ("I(RP2,2)", "trivial", {}),
    ("B(RP2,2)", "or", {1: 1, 4: 1}),
    ("B(RP2,2)", "trivial", {}),
    ("B(RP2,2)", "pm", {}),
    ("mobius", "or", {1: 1, 2: 1}),
    ("mobius", "trivial", {}),
]
LONG_EXPECTED_HOMOLOGY = [
    ("I(RP2,3)", "trivial", {}),
    ("B(RP2,3)", "trivial", {}),
    ("B(RP2,3)", "pm", {}),
]
SELF_JOIN_CHECKS = tuple(range(1, SELF_JOIN_MAX_R + 1))
SELFCHECK_KS = tuple(range(0, 7))
# Closure of the two-point space: RP2 x RP2 has the rational homology of a point.
CLOSED_PRODUCT = {0: 1}


@group.command(
    "homology",
    arg("--space", required=True, help="Model name, see 'catalog list'"),
    arg("--twist", choices=TWIST_TAGS, default="trivial"),
    help="Borel-Moore homology of a catalog model",
)
def homology(args, context: Context) -> Outcome:
    model = cat.get_model(args.space)
    dims = model.bm_homology(args.twist)
    lines = [f"{model.name} ({model.provenance.value}) with {args.twist} coefficients"]
    lines += [f"H{d} = Q^{n}" for d, n in sorted(dims.items())] or ["all groups vanish"]
    fmt = TableFormatter().set_mapping(keyed(dims), "degree", "dim").append_table()
    payload = {
        "space": model.name,
        "twist": args.twist,
        "provenance": model.provenance.value,
        "homology": keyed(dims),
    }
    return Outcome(payload, "\n".join(lines), {"homology": fmt.tables})


def _row(name: str, passed: bool, expected, computed) -> dict:
    return {
        "check": name,
        "status": "pass" if passed else "fail",
        "expected": expected,
        "computed": computed,
    }


def lemma_rows(long: bool = False) -> list[dict]:
    rows = []
    checks = EXPECTED_HOMOLOGY + (LONG_EXPECTED_HOMOLOGY if long else [])
    for space, twist, expected in checks:
        computed = cat.get_model(space).bm_homology(twist)
        rows.append(
            _row(f"{space} with {twist}", computed == expected, keyed(expected), keyed(computed))
        )
    for split in cat.cover_splitting_check():
        rows.append(
            _row(
                f"I(RP2,2) splits over B(RP2,2) with {split['twist']}",
                split["split"],
                keyed(split["cover"]),
                {"plus": keyed(split["plus"]), "minus": keyed(split["minus"])},
            )
        )
    closure = cat.model_ordered_config(2).without_sub()
    closed = {d: n for d, n in enumerate(borel_moore(closure)) if n}
    rows.append(_row("RP2 x RP2", closed == CLOSED_PRODUCT, keyed(CLOSED_PRODUCT), keyed(closed)))
    for r in SELF_JOIN_CHECKS:
        joined = ssq.self_join_pipeline(r)
        rows.append(_row(f"self-join r={r}", joined.match, keyed(joined.expected), keyed(joined.total)))
    for report in joined.columns:
        rows.append(
            {
                "check": f"self-join column {report.p} over {report.base} with {report.twist}",
                "status": report.status.value,
                "expected": keyed(report.expected),
                "computed": None if report.computed is None else keyed(report.computed),
            }
        )
    try:
        link = ssq.link_pipeline()
        rows.append(
            _row("link of the whole plane", link.consistent, {"0": 1, "13": 1}, keyed(link.link_homology))
        )
    except VerificationError as e:
        rows.append(_row("link of the whole plane", False, {"0": 1, "13": 1}, str(e)))
    for k in SELFCHECK_KS:
        for descriptor in cat.quadratic_strata():
            report = cat.stratum_selfcheck(descriptor, k, allow_heavy=long)
            rows.append(
                {
                    "check": f"column {descriptor.p} at k={k} over {report.base} with {report.twist}",
                    "status": report.status.value,
                    "expected": keyed(report.expected),
                    "computed": None if report.computed is None else keyed(report.computed),
                }
            )
    return rows


@group.command(
    "verify-lemmas",
    arg("--long", action="store_true", help="Also build the three-point models"),
    help="Recompute the constructed strata and the homology facts they rest on",
)
def verify_lemmas(args, context: Context) -> Outcome:
    rows = lemma_rows(args.long)
    failed = [row for row in rows if row["status"] == CheckStatus.FAIL.value]
    lines = [f"{row['status'].upper():8} {row['check']}" for row in rows]
    lines.append(f"{len(rows) - len(failed)}/{len(rows)} checks without failure")
    fmt = TableFormatter().set_rows(
        [{**row, "expected": str(row["expected"]), "computed": str(row["computed"])} for row in rows]
    ).append_table()
    return Outcome(
        {"checks": rows, "failed": len(failed)},
        "\n".join(lines),
        {"lemmas": fmt.tables},
        EXIT_MISMATCH if failed else EXIT_OK,
    )


@group.command(
    "catalog",
    arg("action", choices=["list", "dump"]),
    arg("name", nargs="?", help="Model to dump"),
    help="List the registered models or dump one in text format",
)
def catalog(args, context: Context) -> Outcome:
    if args.action == "list":
        models = cat.list_models()
        fmt = TableFormatter().set_rows(
            [{**m, "twists": ",".join(m["twists"])} for m in models],
            ["name", "provenance", "heavy", "twists", "description"],
        ).append_table()
        return Outcome({"models": models}, fmt.to_text(), {"catalog": fmt.tables})
    if not args.name:
        raise DataError("'catalog dump' needs a model name")
    text = cat.dump_model(args.name)
    return Outcome({"name": args.name, "dump": text}, text.rstrip("\n"))
