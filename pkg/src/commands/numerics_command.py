from commands import (
    EXIT_INCONCLUSIVE,
    EXIT_MISMATCH,
    EXIT_OK,
    CommandGroup,
    Context,
    Outcome,
    arg,
    setting,
)
from services import certify as cfs
from services.errors import PreconditionError
from services.exportation import TableFormatter
from services.utils import format_real, parse_vector, real_field

group = CommandGroup("numerics")


def _certificate(result: cfs.CertResult) -> dict:
    payload = cfs.result_to_dict(result)
    for key in ("min_lower_bound", "residual"):
        if key in payload:
            payload[key] = real_field(payload[key])
    if "point" in payload:
        payload["point"] = [real_field(c) for c in payload["point"]]
    return payload


@group.command(
    "certify",
    arg("--input", required=True, help="System JSON file"),
    arg("--depth", type=int, help="Maximum subdivision depth"),
    help="Certify that a system of forms has no common zero",
)
def certify(args, context: Context) -> Outcome:
    settings = context.settings
    system = cfs.load_system(args.input)
    result = cfs.certify_nonresultant(
        system,
        setting(args, "depth", settings, "certify.depth"),
        max_cells=settings["certify.max_cells"],
        zero_tolerance=settings["certify.zero_tolerance"],
    )
    payload = _certificate(result)
    if isinstance(result, cfs.CertifiedNonResultant):
        text = f"non-resultant, max |f_i| >= {format_real(result.min_lower_bound)}"
        status = EXIT_OK
    elif isinstance(result, cfs.CommonZeroWitness):
        point = ", ".join(format_real(c) for c in result.point)
        text = f"common zero at ({point}), residual {format_real(result.residual)}"
        status = EXIT_MISMATCH
    else:
        text = f"inconclusive at depth {result.depth_reached}"
        status = EXIT_INCONCLUSIVE
    return Outcome(payload, text, status=status)


@group.command(
    "degree",
    arg("--input", required=True, help="System JSON file with three forms"),
    arg("--value", help="Regular value as vx,vy,vz"),
    arg("--depth", type=int, help="Subdivision depth"),
    arg("--seed", type=int, default=0, help="Seed for replacement values"),
    help="Mod 2 degree of x -> F(x)/|F(x)| on the projective plane",
)
def degree(args, context: Context) -> Outcome:
    settings = context.settings
    depth = setting(args, "depth", settings, "degree.depth")
    system = cfs.load_system(args.input)
    value = parse_vector(args.value) if args.value else None
    certificate = cfs.certify_nonresultant(
        system,
        depth,
        max_cells=settings["certify.max_cells"],
        zero_tolerance=settings["certify.zero_tolerance"],
    )
    if isinstance(certificate, cfs.Inconclusive):
        return Outcome(
            {"certificate": _certificate(certificate)},
            f"inconclusive at depth {certificate.depth_reached}",
            status=EXIT_INCONCLUSIVE,
        )
    if isinstance(certificate, cfs.CommonZeroWitness):
        raise PreconditionError(
            f"The system has a common zero at {[format_real(c) for c in certificate.point]}"
        )
    result = cfs.degree_details(
        system,
        value,
        depth,
        seed=args.seed,
        max_retries=settings["certify.max_retries"],
        max_cells=settings["certify.max_cells"],
        condition_limit=settings["certify.condition_limit"],
        check=False,
    )
    payload = {
        "certificate": _certificate(certificate),
        "degree": result.degree,
        "value": [real_field(c) for c in result.value],
        "preimages": [[real_field(c) for c in p] for p in result.preimages],
        "attempts": result.attempts,
    }
    lines = [f"degree {result.degree} (mod 2), {len(result.preimages)} preimages"]
    lines += ["  " + ", ".join(format_real(c) for c in p) for p in result.preimages]
    return Outcome(payload, "\n".join(lines))


@group.command(
    "census",
    arg("--k", type=int, help="Number of forms (2 or 3)"),
    arg("--samples", type=int, help="Certified samples to collect"),
    arg("--seed", type=int),
    arg("--depth", type=int),
    help="Sample random systems and try certified paths between them",
)
def census(args, context: Context) -> Outcome:
    settings = context.settings
    report = cfs.component_census(
        setting(args, "k", settings, "census.k"),
        setting(args, "samples", settings, "census.samples"),
        setting(args, "seed", settings, "census.seed"),
        setting(args, "depth", settings, "census.depth"),
        threads=context.threads,
        path_depth=settings["certify.path_depth"],
        max_cells=settings["certify.max_cells"],
        max_retries=settings["certify.max_retries"],
    )
    payload = report.to_dict()
    fmt = TableFormatter().set_mapping(report.classes, "class", "samples").append_table()
    lines = [
        f"k={report.k} seed={report.seed} depth={report.depth}",
        f"{report.samples} certified samples from {report.draws} draws, "
        f"{report.unclassified} unclassified",
        fmt.to_text(),
        f"paths: {report.paths['certified']}/{report.paths['attempted']} certified",
        f"cross-class probes: {report.cross_class['certified']}/{report.cross_class['attempted']} certified",
        f"violations: {report.violations}",
    ]
    return Outcome(
        payload,
        "\n".join(lines),
        {"census": fmt.tables},
        EXIT_MISMATCH if report.violations else EXIT_OK,
    )
