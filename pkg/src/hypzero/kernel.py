"""Branch-aware complex primitives shared by every other module.

The integrand of the family studied here is ``t^(alpha) * (1 - z t)`` raised
to the n-th power; all asymptotics run through its logarithm

    phase(t) = alpha * log(t) + log(1 - z*t),

which is multivalued.  Tracing contours that wind around the branch points
``t = 0`` and ``t = 1/z`` requires continuing both logarithms along the path
instead of fixing a principal branch.  Continuation state is carried in
:class:`BranchTrackedValue`: at each step the raw principal value of each
constituent logarithm is corrected by the multiple of ``2*pi*i`` closest to
the previous value.  This is valid as long as consecutive points keep the
per-step argument change below ``pi``, which the tracers guarantee through
step-size control.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

from .errors import DomainError, SingularPointError

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class Alpha:
    """Complex family parameter ``alpha = eta + i*zeta``.

    ``eta > 0`` is required throughout.  ``zeta == 0`` is the real-parameter
    cross-check regime (``is_real_regime``); ``zeta != 0`` is the regime of
    the main clustering experiment.
    """

    eta: float
    zeta: float = 0.0

    def __post_init__(self):
        if not self.eta > 0:
            raise DomainError(f"alpha requires eta > 0, got eta={self.eta}")

    @property
    def is_real_regime(self) -> bool:
        return self.zeta == 0.0

    @property
    def value(self) -> complex:
        return complex(self.eta, self.zeta)

    @property
    def saddle_base(self) -> complex:
        """``alpha / (alpha + 1)``, always in the right half-plane."""
        a = self.value
        return a / (a + 1.0)


@dataclass(frozen=True)
class BranchTrackedValue:
    """A phase-continued value of a (sum of) logarithm(s).

    ``value`` is the continued complex value and ``imag_phase`` its
    continuously tracked imaginary part (``== value.imag``; kept as an
    explicit field because it is the quantity whose continuity defines the
    branch).  ``parts`` stores the continued values of the constituent
    logarithms; it is the state needed to continue a two-logarithm phase
    whose first term carries a complex coefficient, where correcting the
    total by multiples of ``2*pi*i`` alone would be ambiguous.
    """

    value: complex
    imag_phase: float
    parts: tuple[complex, ...] = field(default=())


def principal_log(w: complex) -> complex:
    """Principal branch logarithm, imaginary part in (-pi, pi]."""
    if w == 0:
        raise DomainError("principal_log: log(0) is undefined")
    return cmath.log(w)


def unwind_imag(raw_imag: float, previous_imag: float) -> float:
    """Shift ``raw_imag`` by the multiple of 2*pi closest to ``previous_imag``."""
    return raw_imag + TWO_PI * round((previous_imag - raw_imag) / TWO_PI)


def continued_log(w: complex, previous: complex | None = None) -> complex:
    """Logarithm of ``w`` on the branch continued from ``previous``.

    With ``previous=None`` this is the principal value.  Correct whenever the
    argument of ``w`` moved by less than pi since the point that produced
    ``previous``.
    """
    raw = principal_log(w)
    if previous is None:
        return raw
    return complex(raw.real, unwind_imag(raw.imag, previous.imag))


def phase(t: complex, z: complex, alpha: Alpha,
          branch: BranchTrackedValue | None = None) -> BranchTrackedValue:
    """Continued value of ``alpha*log(t) + log(1 - z*t)``.

    ``branch`` is the value returned at the previous point of the active
    path; ``None`` selects the principal branch of both logarithms (the
    branch that is real on the segment (0, 1] when z and alpha are real).
    """
    if t == 0:
        raise SingularPointError("phase: t=0 is a branch point")
    u = 1.0 - z * t
    if u == 0:
        raise SingularPointError("phase: t=1/z is a branch point")
    prev_log_t = branch.parts[0] if branch is not None else None
    prev_log_u = branch.parts[1] if branch is not None else None
    log_t = continued_log(t, prev_log_t)
    log_u = continued_log(u, prev_log_u)
    val = alpha.value * log_t + log_u
    return BranchTrackedValue(value=val, imag_phase=val.imag, parts=(log_t, log_u))


def phase_derivative(t: complex, z: complex, alpha: Alpha) -> complex:
    """d/dt of the phase; single-valued on the whole plane minus {0, 1/z}."""
    a = alpha.value
    denom = t * (1.0 - z * t)
    if denom == 0:
        raise SingularPointError("phase_derivative: pole at t in {0, 1/z}")
    return (a - z * t * (a + 1.0)) / denom


def phase_second_derivative(t: complex, z: complex, alpha: Alpha) -> complex:
    """d^2/dt^2 of the phase, from the single-valued closed form."""
    a = alpha.value
    u = 1.0 - z * t
    if t == 0 or u == 0:
        raise SingularPointError("phase_second_derivative: pole at t in {0, 1/z}")
    return -a / (t * t) - (z * z) / (u * u)


@dataclass(frozen=True)
class Precision:
    """Working-precision description threaded through the numeric pipeline.

    ``bits`` is the mantissa width: 53 selects plain double arithmetic,
    anything larger switches the precision-sensitive paths (coefficient
    evaluation, root polishing) to mpmath with that many bits.
    """

    bits: int = 53

    def __post_init__(self):
        if self.bits < 24:
            raise DomainError(f"precision below 24 bits is not supported: {self.bits}")

    @property
    def is_double(self) -> bool:
        return self.bits <= 53

    @property
    def decimal_digits(self) -> int:
        return max(15, int(self.bits * 0.30103) + 2)


DOUBLE = Precision()


def parse_precision(text: str) -> Precision:
    """Parse ``"double"`` or ``"extended:<bits>"``."""
    if text == "double":
        return DOUBLE
    if text.startswith("extended:"):
        try:
            bits = int(text.split(":", 1)[1])
        except ValueError:
            raise DomainError(f"bad precision spec: {text!r}") from None
        return Precision(bits=bits)
    if text == "extended":
        return Precision(bits=160)
    raise DomainError(f"bad precision spec: {text!r}")
