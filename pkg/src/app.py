import argparse
import logging
import os.path as op
import sys
from datetime import datetime, timezone

from commands import (
    EXIT_MISMATCH,
    EXIT_USAGE,
    CommandGroup,
    Context,
    homology_command as hc,
    numerics_command as nc,
    spectral_command as sc,
)
from services import exportation as es, utils as us
from services.config_utils import load_settings
from services.errors import (
    ArityError,
    DataError,
    PreconditionError,
    ResolventError,
    UnsupportedSizeError,
)

logger = logging.getLogger("resolvent")

USAGE_ERRORS = (DataError, UnsupportedSizeError, ArityError, PreconditionError, FileNotFoundError)
LOG_FORMAT = "%(asctime)s %(levelname)s %(name)s: %(message)s"

GROUPS = {
    "spectral": sc.group,
    "homology": hc.group,
    "numerics": nc.group,
}


def common_options() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="Print the result as JSON")
    common.add_argument("--xlsx", metavar="PATH", help="Also write the tables to a workbook")
    common.add_argument("--overwrite", action="store_true", help="Overwrite an existing workbook")
    common.add_argument("--no-meta", action="store_true", help="Omit the generation timestamp")
    common.add_argument("--threads", type=int, help="Worker threads for the numerics")
    common.add_argument("--config", metavar="PATH", help="JSON configuration file (default: ./config.json)")
    common.add_argument(
        "--log-level",
        default="WARNING",
        choices=["DEBUG", "INFO", "WARNING", "ERROR"],
        help="Logging level on stderr",
    )
    return common


def create_parser(*, groups: dict[str, CommandGroup] = {}) -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="resolvent",
        description="Cohomology of spaces of quadratic forms without common zeros.",
    )
    subparsers = parser.add_subparsers(dest="verb", required=True)
    parents = [common_options()]
    if isinstance(groups, dict):
        for group in groups.values():
            if isinstance(group, CommandGroup):
                group.register(subparsers, parents)
    return parser


def run(argv: list[str] | None = None, *, groups: dict[str, CommandGroup] | None = None) -> int:
    """
    Parses ``argv``, runs the verb and prints its result on stdout.
    Returns:
        int: 0 on success, 1 on a verification mismatch, 2 on a usage error
        and 3 when a certification is inconclusive.
    """
    parser = create_parser(groups=GROUPS if groups is None else groups)
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_USAGE if e.code else 0

    try:
        settings = load_settings(args.config)
        context = Context(settings, settings.threads(args.threads))
        outcome = args.handler(args, context)
        if args.xlsx and outcome.tables:
            overwrite = args.overwrite or bool(settings["output.overwrite"])
            target = op.join(settings["output.directory"] or ".", args.xlsx)
            written = es.ResultExporter(overwrite).export_results(target, outcome.tables)
            logger.info("tables written to %s", written)
    except USAGE_ERRORS as e:
        logger.error("%s", e)
        return EXIT_USAGE
    except ResolventError as e:
        logger.error("%s", e)
        return EXIT_MISMATCH

    stamp = None if args.no_meta else datetime.now(timezone.utc).isoformat(timespec="seconds")
    if args.json:
        payload = dict(outcome.payload)
        if stamp:
            payload["meta"] = {"generated": stamp}
        print(us.to_json(payload))
    else:
        print(outcome.text)
        if stamp:
            print(f"# generated {stamp}")
    return outcome.status


def main():
    pre = argparse.ArgumentParser(add_help=False)
    pre.add_argument("--log-level", default="WARNING")
    known, _ = pre.parse_known_args()
    logging.basicConfig(
        level=getattr(logging, known.log_level.upper(), logging.WARNING),
        format=LOG_FORMAT,
        stream=sys.stderr,
    )
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
