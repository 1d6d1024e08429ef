from argparse import ArgumentParser
import json
import sys

import yaml

from .catalog import (
    BuiltGroup, CatalogError, UnknownFamilyError, build_catalog, default_catalog, select_kernel,
)
from .check_clean_arguments import (
    validate_format, validate_jobs, validate_p_mode, validate_positive,
)
from .constants import InvalidProfileError, ProfileIncompleteError, constants_report, load_profile
from .groups import (
    DEFAULT_CAP, TABLE_LIMIT, HomomorphismError, NotNormalError, OrderCapExceededError,
    ParentMismatchError, TableLimitError, load_group_definition,
)
from .primitives import CarrierMismatchError, InvalidElementError, MatrixElement
from .subgroup_lab import (
    DEFAULT_ORACLE_LIMIT, DEFAULT_SUBGROUP_LIMIT, EnumerationLimitError,
    chermak_delgado, minimal_index_normal_abelian, oracle_report, sylow,
)
from .survey import (
    SurveyOptions, emit, fit_families, load_records, run_survey, survey_exit_status,
)
from .witness import (
    ComplementSearchError, ModelViolationError, NoComplementGuaranteeError,
    PreconditionError, conjugate_intersection_witness, lifting_divisibility_check, oracle_in,
    product_witness, quotient_witness_coprime_kernel, quotient_witness_general,
    quotient_witness_pprime, schur_zassenhaus,
)

OPERATIONAL_ERRORS = (
    ValueError, OSError, yaml.YAMLError, KeyError,
    CarrierMismatchError, InvalidElementError, OrderCapExceededError, TableLimitError,
    NotNormalError, ParentMismatchError, HomomorphismError, EnumerationLimitError,
    PreconditionError, NoComplementGuaranteeError, ComplementSearchError, ModelViolationError,
    InvalidProfileError, ProfileIncompleteError, UnknownFamilyError, CatalogError,
)

DEFAULTS = {
    "cap": DEFAULT_CAP,
    "subgroup_limit": DEFAULT_SUBGROUP_LIMIT,
    "oracle_limit": DEFAULT_ORACLE_LIMIT,
    "table_limit": TABLE_LIMIT,
    "jobs": 1,
    "seed": 0,
    "format": "jsonl",
    "p": 0,
    "jp": None,
    "e": None,
}


def parse_arguments():
    """
    Parse command line arguments
    :return: [ArgumentParser] the jordan-kit parser, one subcommand per task
    """
    common = ArgumentParser(add_help=False)
    common.add_argument(
        "--config", type=str,
        help="Path to a config file, default is `config.yml` in current directory. "
             "Command line flags override values from the config file."
    )
    common.add_argument("--cap", type=int, help="Largest group order a closure may reach (default: 20000).")
    common.add_argument(
        "--p", type=str,
        help="Prime to work at, 0 for no characteristic, or 'defining' to use each matrix "
             "group's own field characteristic (default: 0)."
    )
    common.add_argument("--format", type=str, help="Output format for records, 'jsonl' or 'csv' (default: jsonl).")
    common.add_argument("--out", type=str, help="Write results to this file instead of stdout.")
    common.add_argument("--seed", type=int, help="Seed for randomised homomorphism checks on large groups (default: 0).")
    common.add_argument("--jobs", type=int, help="Number of worker processes for surveys (default: 1).")
    common.add_argument("--quiet", action="store_true", help="Do not show the survey progress bar.")
    common.add_argument("--jp", type=int, help="J'(n) to test against, turning a survey into a falsification probe.")
    common.add_argument("--e", type=int, help="Exponent paired with --jp (default: 3).")

    parser = ArgumentParser(
        prog="jordan-kit",
        description="Executable witnesses and brute-force oracles for Jordan-type index bounds on finite groups",
    )
    subparsers = parser.add_subparsers(dest="command", required=True)

    closure_parser = subparsers.add_parser(
        "closure", parents=[common], help="Enumerate the group generated by a group definition file."
    )
    closure_parser.add_argument("group", type=str, help="Group definition file: {name, generators, cap}.")

    def add_source(p):
        p.add_argument("--group", type=str, help="Group definition file.")
        p.add_argument("--entry", type=str, help="Name of a catalog entry.")
        p.add_argument("--catalog", type=str, help="Catalog file (default: the built-in catalog).")

    analyze_parser = subparsers.add_parser(
        "analyze", parents=[common], help="Oracle, Sylow and Chermak-Delgado analysis of one group."
    )
    add_source(analyze_parser)

    witness_parser = subparsers.add_parser(
        "witness", parents=[common], help="Run one witness construction on a catalog entry."
    )
    witness_parser.add_argument(
        "kind", choices=["product", "quotient", "sz", "conj-intersect", "lifting"],
        help="product: direct product entries. quotient: quotient entries. sz: complement of --kernel. "
             "conj-intersect: entries with an identity component. lifting: divisibility check of an extension."
    )
    add_source(witness_parser)
    witness_parser.add_argument(
        "--construction", choices=["general", "sylow-split", "coprime-kernel"], default="general",
        help="Quotient construction to run (default: general)."
    )
    witness_parser.add_argument(
        "--bound", type=int,
        help="Base bound for the sylow-split and coprime-kernel constructions "
             "(default: the oracle index of the total group)."
    )
    witness_parser.add_argument("--kernel", type=str, default="center", help="Kernel selector for sz (default: center).")
    witness_parser.add_argument(
        "--method", choices=["auto", "abelian", "search"], default="auto",
        help="Complement construction for sz (default: auto)."
    )
    witness_parser.add_argument(
        "--chermak-delgado", action="store_true",
        help="Also report the Chermak-Delgado subgroup for conj-intersect."
    )
    witness_parser.add_argument("--r", type=int, default=1, help="Torus rank modelled by lifting (default: 1).")

    constants_parser = subparsers.add_parser(
        "constants", parents=[common], help="Evaluate the constant formulas on a structure profile."
    )
    constants_parser.add_argument("profile", type=str, help="Profile file: {c_G, r_G, n, kp_order, ell_X?, dim_X?}.")
    constants_parser.add_argument("--jn", type=int, required=True, help="[required] J(n).")
    constants_parser.add_argument("--jpn", type=int, required=True, help="[required] J'(n).")

    survey_parser = subparsers.add_parser(
        "survey", parents=[common], help="Run the oracle and the witnesses over a catalog."
    )
    survey_parser.add_argument("--catalog", type=str, help="Catalog file (default: the built-in catalog).")

    fit_parser = subparsers.add_parser(
        "fit", parents=[common], help="Fit J' per family from survey records."
    )
    fit_parser.add_argument("records", type=str, nargs="+", help="JSONL or CSV record files.")

    return parser


def load_config(path=None) -> dict:
    if path:
        # if path to config file provided, it is used
        with open(path, "r") as f:
            config = yaml.safe_load(f) or {}
        sys.stderr.write(f"Using provided config file: {path}\n")
    else:
        # if no path provided, look for `config.yml` in current directory
        try:
            with open("config.yml", "r") as f:
                config = yaml.safe_load(f) or {}
            sys.stderr.write("Using config.yml found in current directory\n")
        except FileNotFoundError:
            config = {}
            sys.stderr.write("WARNING: config file not found, using built-in defaults\n")
    return config


def resolve_settings(args, config: dict) -> dict:
    """Flags override the config file, which overrides DEFAULTS."""
    settings = dict(DEFAULTS)
    settings.update({k: v for k, v in config.items() if k in DEFAULTS})
    for key in ("cap", "p", "format", "seed", "jobs", "jp", "e"):
        value = getattr(args, key, None)
        if value is not None:
            settings[key] = value

    for key in ("cap", "subgroup_limit", "oracle_limit", "table_limit"):
        settings[key] = validate_positive(settings[key], f"--{key.replace('_', '-')}")
    settings["p"] = validate_p_mode(settings["p"])
    settings["format"] = validate_format(settings["format"])
    settings["jobs"] = validate_jobs(settings["jobs"])
    settings["seed"] = int(settings["seed"])
    if settings["jp"] is not None:
        settings["jp"] = validate_positive(settings["jp"], "--jp")
    if settings["e"] is not None:
        settings["e"] = validate_positive(settings["e"], "--e")
    return settings


def _write(text: str, out=None):
    if out is None:
        sys.stdout.write(text)
    else:
        with open(out, "w") as f:
            f.write(text)
        sys.stderr.write(f"Results written to {out}\n")


def _write_json(payload, out=None):
    _write(json.dumps(payload, sort_keys=True, indent=2) + "\n", out)


def _catalog(path):
    return build_catalog(path) if path else default_catalog()


def _load_built(args, settings) -> BuiltGroup:
    if args.group and args.entry:
        raise ValueError("give either --group or --entry, not both")
    if args.group:
        g = load_group_definition(args.group, settings["cap"], settings["table_limit"])
        first = g.elements[0]
        characteristic = first.p if isinstance(first, MatrixElement) else 0
        return BuiltGroup(None, g, characteristic)
    if not args.entry:
        raise ValueError("one of --group or --entry is required")
    entries = {e.name: e for e in _catalog(args.catalog)}
    if args.entry not in entries:
        raise ValueError(f"no catalog entry named {args.entry!r}")
    return entries[args.entry].build(settings["cap"], settings["seed"])


def _prime_for(settings, built) -> int:
    return built.characteristic if settings["p"] == "defining" else settings["p"]


def run_closure(args, settings) -> int:
    g = load_group_definition(args.group, settings["cap"], settings["table_limit"])
    sys.stderr.write(f"Closure of {g.name or args.group}: {g.order} elements\n")
    payload = {
        "name": g.name,
        "order": g.order,
        "group_digest": g.digest,
        "generators": [g.elements[i].to_literal() for i in g.generators],
        "has_table": g.has_table,
    }
    if g.has_table:
        payload["exponent"] = g.exponent
        payload["is_abelian"] = g.is_abelian()
    _write_json(payload, args.out)
    return 0


def run_analyze(args, settings) -> int:
    built = _load_built(args, settings)
    g = built.group
    p = _prime_for(settings, built)
    report = oracle_report(g, p, settings["oracle_limit"])
    syl = sylow(g, p)
    report["sylow_is_normal"] = syl.is_normal
    report["center_order"] = g.center().order
    if g.order <= settings["subgroup_limit"]:
        report["chermak_delgado_order"] = chermak_delgado(g, settings["subgroup_limit"]).order
    else:
        sys.stderr.write(
            f"Skipping the Chermak-Delgado subgroup: order {g.order} is above the "
            f"subgroup limit {settings['subgroup_limit']}\n"
        )
    _write_json(report, args.out)
    return 0


def _require(value, what: str, name: str):
    if value is None:
        raise ValueError(f"{name} has no {what}")
    return value


def run_witness(args, settings) -> int:
    built = _load_built(args, settings)
    g = built.group
    p = _prime_for(settings, built)
    name = g.name or "group"
    limit = settings["oracle_limit"]

    if args.kind == "sz":
        n = select_kernel(built, args.kernel)
        c = schur_zassenhaus(g, n, args.method)
        _write_json({
            "group_digest": g.digest,
            "kernel_order": n.order,
            "complement_order": c.order,
            "complement_generators": [g.elements[i].to_literal() for i in c.generators],
        }, args.out)
        return 0

    if args.kind == "lifting":
        ext = _require(built.extension, "extension", name)
        _write_json(lifting_divisibility_check(ext, args.r).to_dict(), args.out)
        return 0

    if args.kind == "product":
        product = _require(built.product, "direct product structure", name)
        g1, g2 = product.pi1.codomain, product.pi2.codomain
        a1 = minimal_index_normal_abelian(g1, p, limit).subgroup
        a2 = minimal_index_normal_abelian(g2, p, limit).subgroup
        report = product_witness(product, g.whole(), a1, a2, p)
    elif args.kind == "quotient":
        ext = _require(built.extension, "extension", name)
        if args.construction == "general":
            a_h = oracle_in(ext.total.whole(), p, limit)
            report = quotient_witness_general(ext, p, a_h, settings["jp"], settings["e"])
        else:
            bound = args.bound
            if bound is None:
                bound = minimal_index_normal_abelian(ext.total, p, limit).index
            if args.construction == "sylow-split":
                report = quotient_witness_pprime(ext, p, bound)
            else:
                report = quotient_witness_coprime_kernel(ext, p, bound)
    else:
        gamma0 = _require(built.gamma0, "identity component", name)
        a0 = oracle_in(gamma0, p, limit)
        report = conjugate_intersection_witness(g, gamma0, a0, p, args.chermak_delgado)

    _write_json(report.to_dict(), args.out)
    if report.falsified:
        sys.stderr.write(
            f"Bound falsified: {report.construction} witness has index {report.index} > {report.bound}\n"
        )
        return 2
    return 0


def run_constants(args, settings) -> int:
    profile = load_profile(args.profile)
    report = constants_report(profile, validate_positive(args.jn, "--jn"), validate_positive(args.jpn, "--jpn"))
    payload = report.to_dict()
    payload["profile"] = profile.to_dict()
    _write_json(payload, args.out)
    return 0


def run_survey_command(args, settings) -> int:
    catalog = _catalog(args.catalog)
    options = SurveyOptions(
        p=settings["p"],
        cap=settings["cap"],
        subgroup_limit=settings["subgroup_limit"],
        oracle_limit=settings["oracle_limit"],
        jobs=settings["jobs"],
        seed=settings["seed"],
        jp=settings["jp"],
        e=settings["e"],
        quiet=args.quiet,
    )
    sys.stderr.write(f"Surveying {len(catalog)} groups at p = {options.p} with {options.jobs} job(s)\n")
    records = run_survey(catalog, options)
    for r in records:
        if r.error:
            sys.stderr.write(f"ERROR: {r.name}: {r.error}\n")
        elif r.bound_violations or r.probe_satisfied is False:
            sys.stderr.write(f"Bound falsified on {r.name}\n")
    emit(records, settings["format"], args.out)
    if args.out:
        sys.stderr.write(f"Records written to {args.out}\n")
    return survey_exit_status(records)


def run_fit(args, settings) -> int:
    records = [r for path in args.records for r in load_records(path)]
    fitted = fit_families(records)
    if not fitted:
        raise ValueError("no record carries an exact oracle value")
    for f in fitted:
        sys.stderr.write(
            f"Fitted J' for {f.family} (dimension {f.dimension}): {f.value} attained by {f.name}\n"
        )
    _write("".join(json.dumps(f.to_dict(), sort_keys=True) + "\n" for f in fitted), args.out)
    return 0


COMMANDS = {
    "closure": run_closure,
    "analyze": run_analyze,
    "witness": run_witness,
    "constants": run_constants,
    "survey": run_survey_command,
    "fit": run_fit,
}


def main(arguments=None) -> int:
    parser = parse_arguments()
    args = parser.parse_args(arguments)

    try:
        config = load_config(args.config)
        settings = resolve_settings(args, config)
        return COMMANDS[args.command](args, settings)
    except OPERATIONAL_ERRORS as exc:
        sys.stderr.write(f"Error: {exc}\n")
        return 1

