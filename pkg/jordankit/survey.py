"""Batch runs of the oracle and the witness constructions over a catalog.

One :class:`SurveyRecord` per catalog entry, always in catalog order.
Failures are recorded on the entry and never stop the batch.
"""
import csv
import io
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor, as_completed
from dataclasses import asdict, dataclass, field, fields
from fractions import Fraction
from functools import partial

from sympy import isprime
from tqdm import tqdm

from .constants import lp_constants
from .groups import DEFAULT_CAP
from .primitives import MatrixElement
from .subgroup_lab import (
    DEFAULT_ORACLE_LIMIT, DEFAULT_SUBGROUP_LIMIT, chermak_delgado,
    minimal_index_normal_abelian, p_part, pprime_part_of_center,
)
from .witness import (
    ComplementSearchError, NoComplementGuaranteeError, PreconditionError,
    conjugate_intersection_witness, oracle_in, product_witness,
    quotient_witness_coprime_kernel, quotient_witness_general, quotient_witness_pprime,
)

FORMATS = ("jsonl", "csv")


class SurveyIOError(OSError):
    pass


@dataclass
class SurveyOptions:
    p: object = 0  # a prime, 0, or "defining"
    cap: int = DEFAULT_CAP
    subgroup_limit: int = DEFAULT_SUBGROUP_LIMIT
    oracle_limit: int = DEFAULT_ORACLE_LIMIT
    jobs: int = 1
    seed: int = 0
    jp: int = None
    e: int = None
    quiet: bool = False


@dataclass
class SurveyRecord:
    name: str
    family: str
    dimension: int = None
    group_digest: str = None
    order: int = None
    p: int = None
    sylow_order: int = None
    oracle_index: int = None
    oracle_skipped: bool = False
    witness_indices: dict = field(default_factory=dict)
    ratio: str = None
    bound_violations: int = 0
    probe_bound: int = None
    probe_satisfied: bool = None
    checks: dict = field(default_factory=dict)
    error: str = None

    @property
    def ratio_value(self) -> Fraction:
        return None if self.ratio is None else Fraction(self.ratio)

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass
class FittedConstant:
    family: str
    dimension: int
    value: Fraction
    name: str
    p: int
    count: int

    def to_dict(self) -> dict:
        return {
            "family": self.family,
            "dimension": self.dimension,
            "fitted_jp": _fraction_text(self.value),
            "attained_by": self.name,
            "p": self.p,
            "records": self.count,
        }


def _fraction_text(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


def _witness_reports(built, p: int, options: SurveyOptions) -> list:
    g = built.group
    reports = []
    if built.product is not None:
        g1, g2 = built.product.pi1.codomain, built.product.pi2.codomain
        if max(g1.order, g2.order) <= options.oracle_limit:
            a1 = minimal_index_normal_abelian(g1, p, options.oracle_limit).subgroup
            a2 = minimal_index_normal_abelian(g2, p, options.oracle_limit).subgroup
            reports.append(product_witness(built.product, g.whole(), a1, a2, p))

    ext = built.extension
    if ext is not None and ext.gamma is g and ext.total.order <= options.oracle_limit:
        a_h = oracle_in(ext.total.whole(), p, options.oracle_limit)
        general = quotient_witness_general(ext, p, a_h, options.jp, options.e)
        reports.append(general)
        if p:
            for construction in (quotient_witness_pprime, quotient_witness_coprime_kernel):
                try:
                    reports.append(construction(ext, p, general.bound))
                except (PreconditionError, NoComplementGuaranteeError, ComplementSearchError):
                    continue

    if built.gamma0 is not None and built.gamma0.order <= options.oracle_limit:
        a0 = oracle_in(built.gamma0, p, options.oracle_limit)
        reports.append(conjugate_intersection_witness(
            g, built.gamma0, a0, p, with_chermak_delgado=g.order <= options.subgroup_limit,
        ))
    return reports


def survey_entry(entry, options: SurveyOptions) -> SurveyRecord:
    """Oracle, witnesses and checks for one catalog entry."""
    record = SurveyRecord(entry.name, entry.family)
    try:
        built = entry.build(options.cap, options.seed)
        g = built.group
        p = built.characteristic if options.p == "defining" else int(options.p)
        sylow_order = p_part(g.order, p)
        record.dimension = built.dimension
        record.group_digest = g.digest
        record.order = g.order
        record.p = p
        record.sylow_order = sylow_order

        indices = {"center-pprime": pprime_part_of_center(g, p).index()}
        reports = []
        if g.has_table:
            if g.order <= options.subgroup_limit:
                m = chermak_delgado(g, options.subgroup_limit)
                if p == 0 or m.order % p:
                    indices["chermak-delgado"] = m.index()
            reports = _witness_reports(built, p, options)
        for report in reports:
            indices[report.construction] = report.index
        record.witness_indices = dict(sorted(indices.items()))
        record.bound_violations = sum(r.falsified for r in reports)
        record.checks["certified"] = all(r.fully_certified for r in reports)
        if built.extension is not None and p:
            record.checks["multiplicativity"] = built.extension.multiplicativity_holds(p)

        if g.has_table and g.order <= options.oracle_limit:
            record.oracle_index = minimal_index_normal_abelian(g, p, options.oracle_limit).index
            record.ratio = _fraction_text(Fraction(record.oracle_index, sylow_order ** 3))
            record.checks["oracle_dominates"] = all(
                record.oracle_index <= i for i in indices.values()
            )
        else:
            record.oracle_skipped = True

        if options.jp is not None:
            if entry.profile is not None:
                jp, e = lp_constants(entry.profile, options.jp)
            else:
                jp, e = options.jp, options.e if options.e is not None else 3
            record.probe_bound = jp * sylow_order ** e
            best = record.oracle_index if record.oracle_index is not None else min(indices.values())
            record.probe_satisfied = best <= record.probe_bound
    except Exception as exc:
        record.error = f"{type(exc).__name__}: {exc}"
    return record


def _characteristics(catalog: list) -> list:
    """Every prime ``p`` parameter in the catalog, nested entries included."""
    primes = set()

    def walk(params):
        for key, value in params.items():
            if key == "p" and isinstance(value, int) and not isinstance(value, bool) and isprime(value):
                primes.add(value)
            elif isinstance(value, dict):
                walk(value)

    for entry in catalog:
        walk(entry.params)
    return sorted(primes)


def _warm_up(primes):
    """Compile the GF(p) matrix kernels for each prime in this process."""
    for p in primes:
        m = MatrixElement.scalar(2, p)
        (m * m).inverse().determinant()


def _largest_first(catalog: list) -> list:
    return sorted(range(len(catalog)), key=lambda i: -(catalog[i].expected_order or 0))


def run_survey(catalog: list, options: SurveyOptions) -> list:
    """Survey every entry, ``options.jobs`` processes at a time.

    With several processes the largest groups are dispatched first and
    every worker compiles the field arithmetic before taking work; records
    still come back in catalog order.
    """
    work = partial(survey_entry, options=options)
    progress = partial(tqdm, total=len(catalog), desc="survey", unit="group", disable=options.quiet)
    workers = min(options.jobs, len(catalog), os.cpu_count() or 1)
    if workers <= 1:
        return list(progress(map(work, catalog)))
    primes = _characteristics(catalog)
    # forked workers inherit the compiled kernels
    _warm_up(primes)
    records = [None] * len(catalog)
    with ProcessPoolExecutor(max_workers=workers, initializer=_warm_up, initargs=(primes,)) as executor:
        pending = {executor.submit(work, catalog[i]): i for i in _largest_first(catalog)}
        for future in progress(as_completed(pending)):
            records[pending[future]] = future.result()
    return records


def survey_exit_status(records: list) -> int:
    """1 if any entry failed, 2 if any bound was falsified, else 0."""
    if any(r.error for r in records):
        return 1
    if any(r.bound_violations or r.probe_satisfied is False for r in records):
        return 2
    return 0


def fit_family_constant(records: list) -> FittedConstant:
    """Smallest J' with oracle_index <= J' * sylow_order^3 on every record.

    Records without an exact oracle value (errors, skipped entries) do not
    count.  All remaining records must share family and dimension.
    """
    usable = [r for r in records if r.error is None and r.ratio is not None]
    if not usable:
        raise ValueError("cannot fit a constant to an empty family")
    families = {(r.family, r.dimension) for r in usable}
    if len(families) > 1:
        raise ValueError(f"records span several families: {sorted(families, key=str)}")
    best = max(usable, key=lambda r: r.ratio_value)
    family, dimension = families.pop()
    return FittedConstant(family, dimension, best.ratio_value, best.name, best.p, len(usable))


def fit_families(records: list) -> list:
    """One fitted constant per (family, dimension), in first-seen order."""
    groups = {}
    for r in records:
        if r.error is None and r.ratio is not None:
            groups.setdefault((r.family, r.dimension), []).append(r)
    return [fit_family_constant(rs) for rs in groups.values()]


CSV_FIELDS = [f.name for f in fields(SurveyRecord)]
_DICT_FIELDS = {"witness_indices", "checks"}
_INT_FIELDS = {"dimension", "order", "p", "sylow_order", "oracle_index", "bound_violations", "probe_bound"}
_BOOL_FIELDS = {"oracle_skipped", "probe_satisfied"}


def _csv_cell(key, value) -> str:
    if value is None:
        return ""
    if key in _DICT_FIELDS:
        return json.dumps(value, sort_keys=True, separators=(",", ":"))
    if isinstance(value, bool):
        return "true" if value else "false"
    return str(value)


def _csv_value(key, text):
    if key in _DICT_FIELDS:
        return json.loads(text) if text else {}
    if text == "":
        return None
    if key in _INT_FIELDS:
        return int(text)
    if key in _BOOL_FIELDS:
        return text == "true"
    return text


def format_records(records: list, fmt: str) -> str:
    """Records as JSONL or CSV text; identical records give identical bytes."""
    if fmt == "jsonl":
        return "".join(json.dumps(r.to_dict(), sort_keys=True) + "\n" for r in records)
    if fmt == "csv":
        buffer = io.StringIO()
        writer = csv.DictWriter(buffer, fieldnames=CSV_FIELDS, lineterminator="\n")
        writer.writeheader()
        for r in records:
            writer.writerow({k: _csv_cell(k, v) for k, v in r.to_dict().items()})
        return buffer.getvalue()
    raise ValueError(f"unknown format {fmt!r}, expected one of {FORMATS}")


def parse_records(text: str, fmt: str) -> list:
    if fmt == "jsonl":
        return [SurveyRecord(**json.loads(line)) for line in text.splitlines() if line.strip()]
    if fmt == "csv":
        reader = csv.DictReader(io.StringIO(text))
        return [SurveyRecord(**{k: _csv_value(k, v) for k, v in row.items()}) for row in reader]
    raise ValueError(f"unknown format {fmt!r}, expected one of {FORMATS}")


def emit(records: list, fmt: str, path=None):
    """Write records to ``path``, or to stdout when no path is given."""
    text = format_records(records, fmt)
    if path is None:
        sys.stdout.write(text)
        return
    try:
        with open(path, "w", newline="") as f:
            f.write(text)
    except OSError as exc:
        raise SurveyIOError(f"cannot write records to {path}: {exc.strerror}") from exc


def load_records(path, fmt: str = None) -> list:
    """Read records back; the format defaults to the file extension."""
    fmt = fmt or ("csv" if str(path).endswith(".csv") else "jsonl")
    try:
        with open(path, "r", newline="") as f:
            text = f.read()
    except OSError as exc:
        raise SurveyIOError(f"cannot read records from {path}: {exc.strerror}") from exc
    return parse_records(text, fmt)
