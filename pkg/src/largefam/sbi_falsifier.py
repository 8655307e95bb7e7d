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
"""Certificates that the strong Bogomolov inequality fails for ``l > 4``.

A surface satisfies ``SBI_l`` if some ``sigma > 0`` bounds
``Delta(E) >= sigma r^l`` for every stable bundle. A large family of order
``(s, t)`` with ``t < l s`` has ``Delta_m / r_m^l -> 0``, so no ``sigma``
works. The certificate stores the exact family data and, for each requested
``sigma``, the first index where ``Delta_N < sigma r_N^l`` holds.

For ``l = p/q`` the comparison ``Delta < sigma r^(p/q)`` is decided as
``Delta^q < sigma^q r^p`` in integers, so no step relies on floating point
except the fitted decay slope, which is reported with a declared precision.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Sequence

from largefam.errors import (
    CertificateFormatError,
    InvariantError,
    PreconditionError,
)
from largefam.existence_bounds import ChernData, discriminant, li_qin_alpha
from largefam.large_families import (
    DEFAULT_C,
    DEFAULT_M_MAX,
    DEFAULT_M_MIN,
    TABLE_COLUMNS,
    FamilyParams,
    make_schedule,
)
from largefam.schema import (
    CERTIFICATE_FORMAT,
    Document,
    Metadata,
    decode_int,
    decode_rational,
    encode_rational,
)
from largefam.statistics import extrapolate_crossing, fit_loglog_slope, log_exact
from largefam.surface_lattice import SurfaceInvariants, validate
from largefam.utils import compute_json_hash, format_real, parse_rational

logger = logging.getLogger(__name__)

DEFAULT_RANK_EXPONENT = Fraction(2)
DEFAULT_PRECISION = 6
MIN_PRECISION = 1
MAX_PRECISION = 15

SAMPLE_COLUMNS = (*TABLE_COLUMNS, "ratio_power")


def parse_exponent(text: str | int | Fraction) -> Fraction:
    """Parse the SBI exponent ``l`` as an exact rational.

    Raises:
        PreconditionError: If ``text`` is not a rational literal.
    """
    try:
        return parse_rational(text)
    except ValueError as exc:
        raise PreconditionError(
            f"l = {text!r} is not rational: thresholds are decided exactly "
            "only for rational l"
        ) from exc


@dataclass(frozen=True)
class SBIQuery:
    """Which ``SBI_l`` to refute, against which thresholds, on which surface."""

    l: Fraction
    sigmas: tuple[Fraction, ...]
    surface: SurfaceInvariants

    def __post_init__(self) -> None:
        object.__setattr__(self, "l", Fraction(self.l))
        object.__setattr__(self, "sigmas", tuple(Fraction(s) for s in self.sigmas))
        if self.l <= 4:
            raise PreconditionError(
                f"l = {self.l} <= 4: large families only refute SBI_l for l > 4"
            )
        if not self.sigmas:
            raise PreconditionError("at least one threshold sigma is required")
        if any(sigma <= 0 for sigma in self.sigmas):
            raise PreconditionError("every threshold sigma must be positive")


def choose_exponents(
    l: Fraction | int | str, s: Fraction | int = DEFAULT_RANK_EXPONENT
) -> tuple[Fraction, Fraction, Fraction]:
    """Pick a family order ``(s, t)`` with ``t < l s`` and ``t - l s = -(l-4)/2``.

    With ``l = 4 + eps`` the polarization exponent is
    ``x = eps (2s - 1) / 4`` and ``t = 4s + 2x``.

    Returns:
        Tuple of (s, x, t).

    Raises:
        PreconditionError: If ``l <= 4`` or ``s <= 1/2``.
    """
    l_q = parse_exponent(l)
    if l_q <= 4:
        raise PreconditionError(
            f"l = {l_q} <= 4: large families only refute SBI_l for l > 4"
        )
    s_q = Fraction(s)
    if s_q <= Fraction(1, 2):
        raise PreconditionError(f"s = {s_q} <= 1/2 leaves no room for x > 0")
    x = (l_q - 4) * (2 * s_q - 1) / 4
    return s_q, x, 4 * s_q + 2 * x


@dataclass(frozen=True)
class Sample:
    """Family member data plus the exact ``(Delta / r^l)^q``."""

    m: int
    r: int
    a: int
    b: int
    c2: int
    delta: int
    ratio_power: Fraction

    def row(self) -> list[Any]:
        return [
            self.m,
            self.r,
            self.a,
            self.b,
            self.c2,
            self.delta,
            encode_rational(self.ratio_power),
        ]


@dataclass(frozen=True)
class Threshold:
    """First index where ``Delta_N < sigma r_N^l``.

    Attributes:
        sigma: Threshold being defeated.
        index: Least sampled ``N`` with the strict inequality, or ``None``.
        extrapolated_index: When ``index`` is ``None``, the index where the
            fitted decay line crosses ``sigma`` (not certified).
    """

    sigma: Fraction
    index: int | None
    extrapolated_index: int | None = None

    @property
    def complete(self) -> bool:
        return self.index is not None

    def to_dict(self) -> dict[str, Any]:
        return {
            "sigma": encode_rational(self.sigma),
            "index": self.index,
            "complete": self.complete,
            "extrapolated_index": self.extrapolated_index,
        }


@dataclass
class SBICertificate:
    """Evidence that ``Delta_m / r_m^l`` decays along a large family."""

    query: SBIQuery
    s: Fraction
    x: Fraction
    t: Fraction
    c: int
    schedule_digest: str
    samples: list[Sample]
    thresholds: list[Threshold]
    decay_slope: str
    tail_start: int | None
    precision: int = DEFAULT_PRECISION
    metadata: Metadata | None = field(default=None, compare=False)

    @property
    def complete(self) -> bool:
        """Whether every threshold was reached inside the sampled range."""
        return all(th.complete for th in self.thresholds)

    def to_document(self) -> Document:
        body = {
            "query": {
                "l": encode_rational(self.query.l),
                "sigmas": [encode_rational(sg) for sg in self.query.sigmas],
                "surface": self.query.surface.to_dict(),
            },
            "exponents": {
                "s": encode_rational(self.s),
                "x": encode_rational(self.x),
                "t": encode_rational(self.t),
            },
            "schedule": {
                "c": self.c,
                "digest": self.schedule_digest,
            },
            "samples": {
                "columns": list(SAMPLE_COLUMNS),
                "rows": [sample.row() for sample in self.samples],
            },
            "thresholds": [th.to_dict() for th in self.thresholds],
            "decay_slope": self.decay_slope,
            "precision": self.precision,
            "tail_start": self.tail_start,
            "complete": self.complete,
        }
        return Document(format=CERTIFICATE_FORMAT, body=body, metadata=self.metadata)

    def to_json(self) -> str:
        return self.to_document().to_json()

    @classmethod
    def from_json(cls, text: str) -> SBICertificate:
        """Parse a certificate file.

        Raises:
            CertificateFormatError: With one diagnostic per malformed field.
        """
        try:
            doc = Document.from_json(text, CERTIFICATE_FORMAT)
        except ValueError as exc:
            raise CertificateFormatError([f"document: {exc}"]) from exc
        return _certificate_from_body(doc.body, doc.metadata)


def _certificate_from_body(
    body: dict[str, Any], metadata: Metadata | None
) -> SBICertificate:
    problems: list[str] = []

    def grab(path: str, decode: Any) -> Any:
        node: Any = body
        try:
            for key in path.split("."):
                node = node[key]
            return decode(node)
        except (KeyError, TypeError, ValueError) as exc:
            problems.append(f"{path}: {exc}")
            return None

    l_q = grab("query.l", decode_rational)
    sigmas = grab("query.sigmas", lambda v: tuple(decode_rational(x) for x in v))
    surface = grab("query.surface", SurfaceInvariants.from_dict)
    s = grab("exponents.s", decode_rational)
    x = grab("exponents.x", decode_rational)
    t = grab("exponents.t", decode_rational)
    c = grab("schedule.c", decode_int)
    digest = grab("schedule.digest", _decode_str)
    samples = grab("samples", _decode_samples)
    thresholds = grab("thresholds", _decode_thresholds)
    decay_slope = grab("decay_slope", _decode_real)
    precision = grab("precision", _decode_precision)
    tail_start = grab("tail_start", lambda v: None if v is None else decode_int(v))
    if problems:
        raise CertificateFormatError(problems)
    try:
        query = SBIQuery(l=l_q, sigmas=sigmas, surface=surface)
    except PreconditionError as exc:
        raise CertificateFormatError([f"query: {exc.condition}"]) from exc
    return SBICertificate(
        query=query,
        s=s,
        x=x,
        t=t,
        c=c,
        schedule_digest=digest,
        samples=samples,
        thresholds=thresholds,
        decay_slope=decay_slope,
        tail_start=tail_start,
        precision=precision,
        metadata=metadata,
    )


def _decode_str(value: Any) -> str:
    if not isinstance(value, str):
        raise ValueError(f"expected a string, got {value!r}")
    return value


def _decode_real(value: Any) -> str:
    text = _decode_str(value)
    if not math.isfinite(float(text)):
        raise ValueError(f"{text!r} is not a finite number")
    return text


def _decode_precision(value: Any) -> int:
    precision = decode_int(value)
    if not MIN_PRECISION <= precision <= MAX_PRECISION:
        raise ValueError(
            f"{precision} outside [{MIN_PRECISION}, {MAX_PRECISION}] digits"
        )
    return precision


def _decode_samples(node: Any) -> list[Sample]:
    if tuple(node["columns"]) != SAMPLE_COLUMNS:
        raise ValueError(f"columns must be {list(SAMPLE_COLUMNS)}")
    samples = []
    for row in node["rows"]:
        if not isinstance(row, list) or len(row) != len(SAMPLE_COLUMNS):
            raise ValueError(f"malformed row {row!r}")
        m, r, a, b, c2, delta = (decode_int(v) for v in row[:6])
        samples.append(Sample(m, r, a, b, c2, delta, decode_rational(row[6])))
    return samples


def _decode_thresholds(node: Any) -> list[Threshold]:
    thresholds = []
    for entry in node:
        index = entry["index"]
        extrapolated = entry.get("extrapolated_index")
        thresholds.append(
            Threshold(
                sigma=decode_rational(entry["sigma"]),
                index=None if index is None else decode_int(index),
                extrapolated_index=(
                    None if extrapolated is None else decode_int(extrapolated)
                ),
            )
        )
    return thresholds


def _ratio_power(delta: int, r: int, l: Fraction) -> Fraction:
    return Fraction(delta**l.denominator, r**l.numerator)


def _below(sample: Sample, sigma: Fraction, l: Fraction) -> bool:
    # Delta < sigma r^(p/q)  <=>  (Delta / r^(p/q))^q < sigma^q
    return sample.ratio_power < sigma**l.denominator


def _log_ratio(delta: int, r: int, l: Fraction) -> float:
    return (l.denominator * log_exact(delta) - l.numerator * log_exact(r)) / (
        l.denominator
    )


def _fit_decay(samples: Sequence[Sample], l: Fraction) -> tuple[float, float]:
    return fit_loglog_slope(
        [sp.m for sp in samples], [_log_ratio(sp.delta, sp.r, l) for sp in samples]
    )


def _tail_start(samples: Sequence[Sample]) -> int | None:
    """Least index from which the exact ratios strictly decrease to the end."""
    if not samples:
        return None
    start = len(samples) - 1
    while start > 0 and samples[start - 1].ratio_power > samples[start].ratio_power:
        start -= 1
    return samples[start].m


def falsify(
    query: SBIQuery,
    m_min: int = DEFAULT_M_MIN,
    m_max: int = DEFAULT_M_MAX,
    c: int = DEFAULT_C,
    exponents: tuple[Fraction, Fraction] | None = None,
    precision: int = DEFAULT_PRECISION,
    workers: int = 1,
) -> SBICertificate:
    """Build a certificate that ``SBI_l`` fails on ``query.surface``.

    Args:
        query: Exponent, thresholds and surface.
        m_min: First family index.
        m_max: Last family index.
        c: Fixed ``r a - b`` of the family.
        exponents: Optional ``(s, x)`` override; must satisfy
            ``4s + 2x < l s``. Defaults to ``choose_exponents(query.l)``.
        precision: Decimal digits of the reported decay slope.
        workers: Concurrency of the schedule construction.

    Raises:
        PreconditionError: If the override violates ``t < l s``, the range is
            too small to fit a slope, or the schedule cannot be built.
    """
    l_q = query.l
    if exponents is None:
        s, x, t = choose_exponents(l_q)
    else:
        s, x = Fraction(exponents[0]), Fraction(exponents[1])
        t = 4 * s + 2 * x
        if t >= l_q * s:
            raise PreconditionError(
                f"t = {t} >= l s = {l_q * s}: a family refutes SBI_l only if t < l s"
            )
    if m_max - m_min + 1 < 10 or m_max < 5 * m_min:
        raise PreconditionError(
            f"range [{m_min}, {m_max}] needs at least 10 indices spanning a factor 5"
        )
    params = FamilyParams(s=s, x=x, c=c, m_min=m_min, m_max=m_max)
    schedule = make_schedule(query.surface, params, workers=workers)

    samples = [
        Sample(
            m=mb.m,
            r=mb.r,
            a=mb.a,
            b=mb.b,
            c2=mb.c2,
            delta=mb.delta,
            ratio_power=_ratio_power(mb.delta, mb.r, l_q),
        )
        for mb in schedule.members
    ]
    slope, intercept = _fit_decay(samples, l_q)

    thresholds = []
    for sigma in query.sigmas:
        index = next((sp.m for sp in samples if _below(sp, sigma, l_q)), None)
        extrapolated = None
        if index is None:
            crossing = extrapolate_crossing(slope, intercept, math.log(sigma))
            if math.isfinite(crossing):
                extrapolated = max(m_max + 1, math.ceil(crossing))
            logger.warning(
                "sigma=%s not reached for m <= %d; extrapolated index %s",
                sigma,
                m_max,
                extrapolated,
            )
        else:
            logger.debug("sigma=%s first defeated at m=%d", sigma, index)
        thresholds.append(
            Threshold(sigma=sigma, index=index, extrapolated_index=extrapolated)
        )

    certificate = SBICertificate(
        query=query,
        s=s,
        x=x,
        t=t,
        c=c,
        schedule_digest=schedule.digest(),
        samples=samples,
        thresholds=thresholds,
        decay_slope=format_real(slope, precision),
        tail_start=_tail_start(samples),
        precision=precision,
        metadata=Metadata.create(),
    )
    logger.info(
        "SBI_%s certificate on %s: slope %s, complete=%s",
        l_q,
        query.surface.name or "inline surface",
        certificate.decay_slope,
        certificate.complete,
    )
    return certificate


def certificate_problems(cert: SBICertificate) -> list[str]:
    """Re-verify a certificate from its data; return every failed check."""
    problems: list[str] = []
    query, l_q = cert.query, cert.query.l
    inv = query.surface

    problems.extend(f"surface: {v}" for v in validate(inv))
    if cert.x <= 0:
        problems.append(f"exponents: x = {cert.x} must be positive")
    if cert.t != 4 * cert.s + 2 * cert.x:
        problems.append("exponents: t must equal 4s + 2x")
    if cert.t >= l_q * cert.s:
        problems.append(f"exponents: t = {cert.t} is not below l s = {l_q * cert.s}")
    if not MIN_PRECISION <= cert.precision <= MAX_PRECISION:
        problems.append(
            f"precision: {cert.precision} outside [{MIN_PRECISION}, {MAX_PRECISION}]"
        )
    if cert.c < 1:
        problems.append(f"schedule.c: c = {cert.c} < 1 leaves the vanishing regime")
    if problems:
        return problems
    if len(cert.samples) < 2:
        problems.append("samples: at least two samples are required")
        return problems

    for prev, cur in zip(cert.samples, cert.samples[1:]):
        if cur.m != prev.m + 1:
            problems.append(f"samples: indices {prev.m}, {cur.m} are not consecutive")
    if problems:
        return problems

    for sp in cert.samples:
        where = f"samples[m={sp.m}]"
        if sp.r < 2 or sp.a < 1:
            problems.append(f"{where}: r >= 2 and a >= 1 required")
            continue
        if sp.r * sp.a - sp.b != cert.c:
            problems.append(f"{where}: r a - b differs from c = {cert.c}")
            continue
        try:
            report = li_qin_alpha(inv, ChernData(r=sp.r, a=sp.a, b=sp.b))
        except (PreconditionError, InvariantError) as exc:
            problems.append(f"{where}: {exc}")
            continue
        if sp.c2 != report.alpha_ceiling:
            problems.append(f"{where}: c2 is not the least admissible value")
        if not report.precondition_ok:
            problems.append(f"{where}: r L^2 > K.L fails")
        if sp.delta != discriminant(sp.r, sp.b * sp.b * inv.e, sp.c2):
            problems.append(f"{where}: delta does not match r, b, c2")
        if sp.delta <= 0:
            problems.append(f"{where}: delta must be positive")
            continue
        if sp.ratio_power != _ratio_power(sp.delta, sp.r, l_q):
            problems.append(f"{where}: ratio differs from delta^q / r^p")
    if problems:
        return problems

    table = {
        "columns": list(TABLE_COLUMNS),
        "rows": [sp.row()[:6] for sp in cert.samples],
    }
    if compute_json_hash(table) != cert.schedule_digest:
        problems.append("schedule.digest: does not match the sampled schedule")

    if len(cert.thresholds) != len(query.sigmas) or any(
        th.sigma != sigma for th, sigma in zip(cert.thresholds, query.sigmas)
    ):
        problems.append("thresholds: do not match the queried sigmas")
    for th in cert.thresholds:
        hits = [sp.m for sp in cert.samples if _below(sp, th.sigma, l_q)]
        if th.index is None:
            if hits:
                problems.append(
                    f"thresholds[sigma={th.sigma}]: marked incomplete but reached "
                    f"at m={hits[0]}"
                )
        elif not hits or hits[0] != th.index:
            problems.append(
                f"thresholds[sigma={th.sigma}]: m={th.index} is not the least "
                "index with Delta < sigma r^l"
            )

    slope, _ = _fit_decay(cert.samples, l_q)
    try:
        stored = float(cert.decay_slope)
    except ValueError:
        stored = math.nan
    if not math.isfinite(stored) or abs(slope - stored) > 10.0 ** (-cert.precision):
        problems.append(
            f"decay_slope: stored {cert.decay_slope}, refitted "
            f"{format_real(slope, cert.precision)}"
        )
    if not stored < 0:
        problems.append(f"decay_slope: {cert.decay_slope} is not negative")

    if _tail_start(cert.samples) != cert.tail_start:
        problems.append(
            f"tail_start: stored {cert.tail_start}, recomputed "
            f"{_tail_start(cert.samples)}"
        )
    return problems


def check_certificate(cert: SBICertificate) -> bool:
    """Whether every invariant of ``cert`` holds on exact recomputation."""
    problems = certificate_problems(cert)
    for problem in problems:
        logger.info("certificate check failed: %s", problem)
    return not problems
