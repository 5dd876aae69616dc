from commands import EXIT_MISMATCH, EXIT_OK, CommandGroup, Context, Outcome, arg
from services import ssq
from services.exportation import TableFormatter
from services.utils import keyed

group = CommandGroup("spectral")


def _page_tables(fmt: TableFormatter, result: ssq.PipelineResult) -> TableFormatter:
    n_columns = result.e1.n_columns
    fmt.set_grid(result.e1.to_rows(), n_columns).add_table_title(
        "table", "E1"
    ).append_table().append_empty_row()
    if result.differentials:
        fmt.set_rows(
            [{**d.to_dict(), "source": str(d.source), "target": str(d.target)} for d in result.differentials],
            ["page", "source", "target", "rank", "origin", "citation"],
        ).add_table_title("table", "d").append_table().append_empty_row()
    fmt.set_grid(result.einf.to_rows(), n_columns).add_table_title(
        "table", "Einf"
    ).append_table()
    return fmt


@group.command(
    "tables",
    arg("--k", type=int, required=True, help="Number of quadratic forms (k >= 2)"),
    help="E1 and E-infinity pages and the Poincare polynomial",
)
def tables(args, context: Context) -> Outcome:
    result = ssq.quadratic_pipeline(args.k)
    fmt = _page_tables(TableFormatter(), result)
    text = f"k={args.k}\n{fmt.to_text()}\n\nP(t) = {result.poincare}"
    return Outcome(result.to_dict(), text, {f"k{args.k}": fmt.tables})


@group.command(
    "theorem",
    arg("--k-min", type=int, default=2),
    arg("--k-max", type=int, default=12),
    help="Compare the pipeline with the closed form for a range of k",
)
def theorem(args, context: Context) -> Outcome:
    rows = ssq.theorem_sweep(args.k_min, args.k_max)
    lines = [
        f"k={row.k} {'PASS' if row.match else 'FAIL'} {row.pipeline}"
        + ("" if row.match else f" (expected {row.closed_form})")
        for row in rows
    ]
    passed = all(row.match for row in rows)
    fmt = TableFormatter().set_rows(
        [
            {"k": r.k, "pipeline": str(r.pipeline), "closed_form": str(r.closed_form), "match": r.match}
            for r in rows
        ]
    ).append_table()
    return Outcome(
        {"rows": [r.to_dict() for r in rows], "passed": passed},
        "\n".join(lines),
        {"theorem": fmt.tables},
        EXIT_OK if passed else EXIT_MISMATCH,
    )


@group.command(
    "stiefel",
    arg("--k", type=int, required=True, help="Number of linear forms (k >= 3)"),
    help="Linear-form pipeline against the Stiefel closed form",
)
def stiefel(args, context: Context) -> Outcome:
    result = ssq.stiefel_pipeline(args.k)
    expected = ssq.stiefel_closed_form(args.k)
    match = result.poincare == expected
    fmt = _page_tables(TableFormatter(), result)
    verdict = "PASS" if match else f"FAIL (expected {expected})"
    payload = result.to_dict()
    payload["closed_form"] = expected.to_pairs()
    payload["match"] = match
    return Outcome(
        payload,
        f"k={args.k}\n{fmt.to_text()}\n\nP(t) = {result.poincare} {verdict}",
        {f"stiefel{args.k}": fmt.tables},
        EXIT_OK if match else EXIT_MISMATCH,
    )


@group.command(
    "selfjoin",
    arg("--r", type=int, required=True, help="Number of joined copies of the circle"),
    help="Assemble the self-join of a circle and compare with a sphere",
)
def selfjoin(args, context: Context) -> Outcome:
    result = ssq.self_join_pipeline(args.r)
    fmt = TableFormatter().set_grid(result.e1.to_rows(), result.e1.n_columns).append_table()
    verdict = "PASS" if result.match else "FAIL"
    text = (
        f"r={args.r}\n{fmt.to_text()}\n\n"
        f"total {keyed(result.total)} expected {keyed(result.expected)} {verdict}"
    )
    columns = ", ".join(f"{c.base} {c.status.value}" for c in result.columns)
    text += f"\ncolumns: {columns}"
    if result.model is not None:
        text += f"\njoin of triangles: {keyed(result.model)}"
    return Outcome(
        result.to_dict(),
        text,
        {f"selfjoin{args.r}": fmt.tables},
        EXIT_OK if result.match else EXIT_MISMATCH,
    )
