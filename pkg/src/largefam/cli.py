# Copyright 2026 The largefam Authors.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
# ==============================================================================
"""Command-line frontend.

Each subcommand produces one JSON document, written to ``--output`` or
printed on stdout. Exit status is 0 on success or acceptance, 1 when a check
rejects (invalid surface, order not verified, certificate or CB check
failed) and 2 on errors (bad input, violated preconditions).
"""

from __future__ import annotations

import argparse
import logging
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Any, Callable

from largefam.cayley_bacharach import (
    CBQuery,
    cb_diagnostics,
    cb_for_direct_sum,
    cb_oracle,
    cycle_from_text,
    satisfies_cb,
    serre_degree,
)
from largefam.errors import CertificateFormatError, InvariantError, PreconditionError
from largefam.existence_bounds import (
    ChernData,
    chern_numbers,
    dry_defect,
    li_qin_alpha,
    rescale_for_precondition,
)
from largefam.large_families import (
    DEFAULT_C,
    DEFAULT_M_MAX,
    DEFAULT_M_MIN,
    DEFAULT_TOL_RATIO,
    DEFAULT_TOL_SLOPE,
    FamilyParams,
    dry_profile,
    family_from_order,
    make_schedule,
    verify_order,
)
from largefam.sbi_falsifier import (
    DEFAULT_RANK_EXPONENT,
    SBICertificate,
    SBIQuery,
    certificate_problems,
    choose_exponents,
    falsify,
    parse_exponent,
)
from largefam.schema import (
    BOUND_FORMAT,
    CB_FORMAT,
    DRY_FORMAT,
    SCHEDULE_FORMAT,
    VALIDATION_FORMAT,
    Document,
    Metadata,
    encode_rational,
)
from largefam.surface_lattice import (
    SurfaceInvariants,
    get_surface,
    load_catalog,
    parse_inline,
    validate,
)
from largefam.utils import parse_rational

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_REJECT = 1
EXIT_ERROR = 2


@dataclass(frozen=True)
class RunConfig:
    """A parsed invocation.

    Attributes:
        command: Subcommand name.
        surface: Selected surface, for subcommands that take one.
        options: Command-specific parameters.
        output: Destination file, or ``None`` for stdout.
        text: Print ``key=value`` lines instead of JSON.
    """

    command: str
    surface: SurfaceInvariants | None = None
    options: dict[str, Any] = field(default_factory=dict)
    output: str | None = None
    text: bool = False

    @classmethod
    def from_args(cls, args: argparse.Namespace) -> RunConfig:
        """Resolve the surface source and collect command options.

        Raises:
            KeyError: For an unknown catalog name.
            ValueError: For malformed inline invariants or catalog files.
        """
        surface = None
        if getattr(args, "surface", None) is not None:
            catalog = load_catalog(args.catalog) if args.catalog else None
            surface = get_surface(args.surface, catalog)
        elif getattr(args, "inv", None) is not None:
            surface = parse_inline(args.inv)
        skip = {"command", "surface", "inv", "catalog", "output", "text", "verbose"}
        options = {k: v for k, v in vars(args).items() if k not in skip}
        return cls(
            command=args.command,
            surface=surface,
            options=options,
            output=args.output,
            text=args.text,
        )


Handler = Callable[[RunConfig], tuple[Document, bool]]


def _require_surface(config: RunConfig) -> SurfaceInvariants:
    if config.surface is None:
        raise PreconditionError("a surface is required (--surface or --inv)")
    return config.surface


def _cmd_validate(config: RunConfig) -> tuple[Document, bool]:
    inv = _require_surface(config)
    violations = validate(inv)
    body = {
        "surface": inv.to_dict(),
        "valid": not violations,
        "violations": violations,
    }
    return Document(VALIDATION_FORMAT, body, Metadata.create()), not violations


def _cmd_alpha(config: RunConfig) -> tuple[Document, bool]:
    inv = _require_surface(config)
    opts = config.options
    cd = ChernData(r=opts["r"], a=opts["a"], b=opts["b"])
    report = li_qin_alpha(inv, cd)
    body: dict[str, Any] = {
        "surface": inv.to_dict(),
        "r": cd.r,
        "a": cd.a,
        "b": cd.b,
        **chern_numbers(inv, cd),
        **report.to_dict(),
        "min_c2": report.alpha_ceiling,
    }
    if not report.precondition_ok:
        body["rescaled_a"] = rescale_for_precondition(inv, cd.r, cd.a)
        logger.warning(
            "r L^2 > K.L fails for a=%d; a=%d restores it",
            cd.a,
            body["rescaled_a"],
        )
    return Document(BOUND_FORMAT, body, Metadata.create()), True


def _schedule_params(opts: dict[str, Any]) -> FamilyParams:
    if opts.get("x") is not None:
        if opts.get("t") is not None:
            raise PreconditionError("give either --t or --x, not both")
        return FamilyParams(
            s=parse_rational(opts["s"]),
            x=parse_rational(opts["x"]),
            c=opts["c"],
            m_min=opts["m_min"],
            m_max=opts["m_max"],
        )
    if opts.get("t") is None:
        raise PreconditionError("the family order needs --t (or --x)")
    return family_from_order(
        opts["s"], opts["t"], c=opts["c"], m_min=opts["m_min"], m_max=opts["m_max"]
    )


def _order_verdict(
    seq: list[tuple[int, int]], exponent: Fraction, opts: dict[str, Any]
) -> dict[str, Any]:
    try:
        verdict = verify_order(
            seq, exponent, tol_slope=opts["tol_slope"], tol_ratio=opts["tol_ratio"]
        )
    except PreconditionError as exc:
        return {"accepted": False, "skipped": True, "reasons": [exc.condition]}
    return verdict.to_dict()


def _cmd_schedule(config: RunConfig) -> tuple[Document, bool]:
    inv = _require_surface(config)
    opts = config.options
    params = _schedule_params(opts)
    schedule = make_schedule(inv, params, workers=opts["workers"])
    rank_verdict = _order_verdict(
        [(mb.m, mb.r) for mb in schedule.members], params.s, opts
    )
    delta_verdict = _order_verdict(
        [(mb.m, mb.delta) for mb in schedule.members], params.t, opts
    )
    body: dict[str, Any] = {
        **schedule.to_dict(),
        "verdicts": {"rank": rank_verdict, "delta": delta_verdict},
    }
    if opts.get("dry"):
        body["dry_defect"] = [encode_rational(v) for v in dry_profile(schedule)]
    accepted = bool(rank_verdict["accepted"] and delta_verdict["accepted"])
    return Document(SCHEDULE_FORMAT, body, Metadata.create()), accepted


def _cmd_sbi(config: RunConfig) -> tuple[Document, bool]:
    inv = _require_surface(config)
    opts = config.options
    l_q = parse_exponent(opts["l"])
    query = SBIQuery(
        l=l_q,
        sigmas=tuple(parse_rational(sg) for sg in opts["sigma"]),
        surface=inv,
    )
    exponents = None
    if opts.get("x") is not None:
        s_q = parse_rational(opts["s"]) if opts.get("s") else DEFAULT_RANK_EXPONENT
        exponents = (s_q, parse_rational(opts["x"]))
    elif opts.get("s") is not None:
        s, x, _ = choose_exponents(l_q, parse_rational(opts["s"]))
        exponents = (s, x)
    cert = falsify(
        query,
        m_min=opts["m_min"],
        m_max=opts["m_max"],
        c=opts["c"],
        exponents=exponents,
        workers=opts["workers"],
    )
    problems = certificate_problems(cert)
    for problem in problems:
        print(f"ERROR: {problem}", file=sys.stderr)
    if not cert.complete:
        print(
            "WARNING: some thresholds were not reached in range; "
            "the certificate is incomplete",
            file=sys.stderr,
        )
    return cert.to_document(), not problems


def _cmd_sbi_check(config: RunConfig) -> tuple[Document, bool]:
    text = Path(config.options["cert"]).read_text()
    cert = SBICertificate.from_json(text)
    problems = certificate_problems(cert)
    body = {
        "certificate": str(config.options["cert"]),
        "valid": not problems,
        "complete": cert.complete,
        "problems": problems,
    }
    return Document("largefam.certificate-check/1", body, Metadata.create()), (
        not problems
    )


def _cmd_cb(config: RunConfig) -> tuple[Document, bool]:
    opts = config.options
    cycle = cycle_from_text(Path(opts["cycle_file"]).read_text())
    query = CBQuery(cycle=cycle, d=opts["d"])
    body = cb_diagnostics(query)
    body["satisfied"] = satisfies_cb(query)
    if opts.get("oracle"):
        body["oracle"] = cb_oracle(query)
    return Document(CB_FORMAT, body, Metadata.create()), body["satisfied"]


def _cmd_cb_sum(config: RunConfig) -> tuple[Document, bool]:
    opts = config.options
    cycles = [cycle_from_text(Path(p).read_text()) for p in opts["cycles"]]
    degrees = opts["degrees"]
    result = cb_for_direct_sum(cycles, degrees, opts["lprime"])
    factors = [
        cb_diagnostics(CBQuery(cycle, serre_degree(l_i, opts["lprime"])))
        for cycle, l_i in zip(cycles, degrees)
    ]
    body = {"lprime": opts["lprime"], "factors": factors, "locally_free": result}
    return Document(CB_FORMAT, body, Metadata.create()), result


def _cmd_dry(config: RunConfig) -> tuple[Document, bool]:
    inv = _require_surface(config)
    opts = config.options
    value = dry_defect(inv, opts["r"], opts["c1sq"], opts["c2"])
    body = {
        "surface": inv.to_dict(),
        "r": opts["r"],
        "c1_sq": opts["c1sq"],
        "c2": opts["c2"],
        "dry_defect": encode_rational(value),
        "inequality_holds": value >= 0,
    }
    return Document(DRY_FORMAT, body, Metadata.create()), True


HANDLERS: dict[str, Handler] = {
    "validate": _cmd_validate,
    "alpha": _cmd_alpha,
    "schedule": _cmd_schedule,
    "sbi": _cmd_sbi,
    "sbi-check": _cmd_sbi_check,
    "cb": _cmd_cb,
    "cb-sum": _cmd_cb_sum,
    "dry": _cmd_dry,
}


def _add_surface_args(parser: argparse.ArgumentParser) -> None:
    group = parser.add_mutually_exclusive_group(required=True)
    group.add_argument("--surface", help="catalog name, hypersurface-D or abelian-E")
    group.add_argument("--inv", help="inline invariants e,k,chi,pg,q[,ksq,euler_c2]")
    parser.add_argument("--catalog", default=None, help="alternate catalog file")


def _add_range_args(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--c", type=int, default=DEFAULT_C)
    parser.add_argument("--m-min", type=int, default=DEFAULT_M_MIN)
    parser.add_argument("--m-max", type=int, default=DEFAULT_M_MAX)
    parser.add_argument("--workers", type=int, default=1)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--output", "-o", type=str, default=None)
    common.add_argument("--text", action="store_true", help="key=value output")
    common.add_argument("--verbose", "-v", action="count", default=0)

    parser = argparse.ArgumentParser(
        prog="largefam",
        description="Exact bounds and large families of stable bundles on surfaces",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", parents=[common], help="check surface invariants")
    _add_surface_args(p)

    p = sub.add_parser("alpha", parents=[common], help="existence bound")
    _add_surface_args(p)
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--a", type=int, required=True)
    p.add_argument("--b", type=int, required=True)

    p = sub.add_parser("schedule", parents=[common], help="large family schedule")
    _add_surface_args(p)
    p.add_argument("--s", required=True, help="rank exponent (rational)")
    p.add_argument("--t", default=None, help="discriminant exponent, t > 4s")
    p.add_argument("--x", default=None, help="polarization exponent instead of t")
    _add_range_args(p)
    p.add_argument("--tol-slope", type=float, default=DEFAULT_TOL_SLOPE)
    p.add_argument("--tol-ratio", type=float, default=DEFAULT_TOL_RATIO)
    p.add_argument("--dry", action="store_true", help="add improved-Bogomolov defects")

    p = sub.add_parser("sbi", parents=[common], help="SBI_l falsification certificate")
    _add_surface_args(p)
    p.add_argument("--l", required=True, help="rational exponent l > 4")
    p.add_argument("--sigma", nargs="+", default=["1"], help="thresholds sigma > 0")
    p.add_argument("--s", default=None, help="rank exponent override")
    p.add_argument("--x", default=None, help="polarization exponent override")
    _add_range_args(p)

    p = sub.add_parser("sbi-check", parents=[common], help="re-verify a certificate")
    p.add_argument("--cert", required=True)

    p = sub.add_parser("cb", parents=[common], help="Cayley-Bacharach check on P^2")
    p.add_argument("--cycle-file", required=True)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--oracle", action="store_true", help="also run the kernel oracle")

    p = sub.add_parser("cb-sum", parents=[common], help="direct-sum Serre criterion")
    p.add_argument("--cycles", nargs="+", required=True)
    p.add_argument("--degrees", nargs="+", type=int, required=True)
    p.add_argument("--lprime", type=int, required=True)

    p = sub.add_parser("dry", parents=[common], help="improved Bogomolov defect")
    _add_surface_args(p)
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--c1sq", type=int, required=True)
    p.add_argument("--c2", type=int, required=True)
    return parser


def _format_text(data: dict[str, Any], prefix: str = "") -> list[str]:
    lines = []
    for key, value in data.items():
        name = f"{prefix}{key}"
        if isinstance(value, dict):
            lines.extend(_format_text(value, f"{name}."))
        elif (
            isinstance(value, list)
            and len(value) == 2
            and all(isinstance(v, int) and not isinstance(v, bool) for v in value)
            and key in ("alpha", "dry_defect", "s", "x", "t", "l")
        ):
            lines.append(f"{name}={Fraction(value[0], value[1])}")
        elif isinstance(value, bool):
            lines.append(f"{name}={str(value).lower()}")
        else:
            lines.append(f"{name}={value}")
    return lines


def _emit(doc: Document, config: RunConfig) -> None:
    if config.text:
        output = "\n".join(_format_text(doc.to_dict())) + "\n"
    else:
        output = doc.to_json()
    if config.output:
        with open(config.output, "w") as f:
            f.write(output)
        print(f"Results written to {config.output}")
    else:
        sys.stdout.write(output)


def run(config: RunConfig) -> int:
    """Execute a parsed invocation and return the exit status."""
    try:
        doc, accepted = HANDLERS[config.command](config)
    except CertificateFormatError as exc:
        for diagnostic in exc.diagnostics:
            print(f"ERROR: {diagnostic}", file=sys.stderr)
        return EXIT_ERROR
    except PreconditionError as exc:
        print(f"ERROR: {exc.condition}", file=sys.stderr)
        return EXIT_ERROR
    except (InvariantError, OSError, ValueError) as exc:
        print(f"ERROR: {exc}", file=sys.stderr)
        return EXIT_ERROR
    _emit(doc, config)
    return EXIT_OK if accepted else EXIT_REJECT


def main(argv: list[str] | None = None) -> int:
    """Parse CLI args, run the subcommand, and return the exit status."""
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level={0: logging.WARNING, 1: logging.INFO}.get(args.verbose, logging.DEBUG),
        format="%(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )
    try:
        config = RunConfig.from_args(args)
    except KeyError as exc:
        print(f"ERROR: {exc.args[0]}", file=sys.stderr)
        return EXIT_ERROR
    except (OSError, PreconditionError, ValueError) as exc:
        print(f"ERROR: {exc}", file=sys.stderr)
        return EXIT_ERROR
    return run(config)


if __name__ == "__main__":
    sys.exit(main())
