"""Named witness operators, built from exact rational coefficient tables.

Preset names follow the equation tags used on the command line:

``eq10:<8 bits>``
    Exact diagonal facets, ``I - 3/4 sum_j (-1)^{i_j} lambda_j x lambda_j``.
``eq11``
    ``eq10:00001010``.
``eq13:<6 bits>``, ``eq16:<6 bits>``, ``eq17:<6 bits>``
    Approximated diagonal facets; bits are ``i1 i2 i4 i5 i6 i7``.
``eq14``
    ``eq13:000000``.
``eq20``, ``eq26``, ``eq27``
    Non-diagonal witnesses of the first and second categories.
"""

from fractions import Fraction as F

import numpy as np

from .exceptions import QutritWitnessError
from .operators import OperatorLabel, WitnessCoeffs, assemble, coefficients_of
from .su3 import SQRT3

SQRT3_LABEL = SQRT3


def _bits(spec, n):
    if len(spec) != n or set(spec) - {"0", "1"}:
        raise ValueError(f"expected {n} binary digits, got {spec!r}")
    return tuple(int(c) for c in spec)


def _sign(bit):
    return -1 if bit else 1


def _build(name, a0, exact_terms):
    """exact_terms: {(i, j, scale): Fraction}; scale is 1 or SQRT3_LABEL."""
    terms = {OperatorLabel(i, j, s): float(v) for (i, j, s), v in exact_terms.items()}
    w = WitnessCoeffs(float(a0), terms, name=name)
    _reverify(w, a0, exact_terms)
    return w


def _reverify(w, a0, exact_terms):
    # round trip through the 9x9 matrix must reproduce the exact table
    c = coefficients_of(assemble(w))
    expected = np.zeros((9, 9))
    expected[0, 0] = float(a0)
    for (i, j, s), v in exact_terms.items():
        expected[i, j] = float(v) * s
    if not np.allclose(c, expected, rtol=0, atol=1e-12):
        raise QutritWitnessError(f"preset {w.name} failed re-verification")


def diagonal_facet(bits):
    """Exact facet witness for sign bits ``(i1, ..., i8)``."""
    bits = tuple(int(b) for b in bits)
    if len(bits) != 8:
        raise ValueError("need eight sign bits i1..i8")
    exact = {(k, k, 1): F(-3, 4) * _sign(b) for k, b in zip(range(1, 9), bits)}
    name = "eq10:" + "".join(map(str, bits))
    return _build(name, F(1), exact)


def _approx(tag, a0, c12, c3, c8, c47, bits):
    bits = tuple(int(b) for b in bits)
    if len(bits) != 6:
        raise ValueError("need six sign bits i1 i2 i4 i5 i6 i7")
    i1, i2, i4, i5, i6, i7 = bits
    exact = {
        (1, 1, 1): c12 * _sign(i1),
        (2, 2, 1): c12 * _sign(i2),
        (3, 3, 1): c3,
        (4, 4, 1): c47 * _sign(i4),
        (5, 5, 1): c47 * _sign(i5),
        (6, 6, 1): c47 * _sign(i6),
        (7, 7, 1): c47 * _sign(i7),
        (8, 8, 1): c8,
    }
    return _build(f"{tag}:" + "".join(map(str, bits)), a0, exact)


def approx_facet_w1(bits=(0,) * 6):
    return _approx("eq13", F(11, 8), F(-3, 2), F(-3, 2), F(3, 2), F(-3, 4), bits)


def approx_facet_w2(bits=(0,) * 6):
    return _approx("eq16", F(2), F(-3, 2), F(3, 2), F(3, 2), F(-3, 2), bits)


def approx_facet_w3(bits=(0,) * 6):
    return _approx("eq17", F(11, 8), F(-3, 4), F(3, 4), F(-3, 4), F(-9, 8), bits)


def first_category():
    """Non-diagonal witness with a0 = 7/4 and all 14 weights -3/4."""
    pairs = [(k, k) for k in range(1, 9)] + [(1, 2), (2, 1), (4, 5), (5, 4), (6, 7), (7, 6)]
    return _build("eq20", F(7, 4), {(i, j, 1): F(-3, 4) for i, j in pairs})


def _second(name, sign):
    exact = {
        (1, 1, 1): F(-2553, 6320),
        (2, 2, 1): F(2553, 6320),
        (4, 4, 1): F(-5227, 6320),
        (5, 5, 1): F(5227, 6320),
        (6, 6, 1): F(-161, 158),
        (7, 7, 1): F(161, 158),
        (3, 3, 1): F(501, 790),
        (8, 8, 1): F(501, 790),
        (3, 8, SQRT3_LABEL): sign * F(-114, 395),
        (8, 3, SQRT3_LABEL): sign * F(114, 395),
    }
    return _build(name, F(809, 790), exact)


def second_category_upper():
    """Reference witness with a0 = 809/790 aimed at the Horodecki window 3 < b <= 4."""
    return _second("eq26", 1)


def second_category_lower():
    """Exchange image of :func:`second_category_upper` (window 1 <= b < 2)."""
    return _second("eq27", -1)


def identity_witness(a0=1.0):
    return WitnessCoeffs(a0, {}, name="identity")


_FIXED = {
    "eq11": lambda: diagonal_facet((0, 0, 0, 0, 1, 0, 1, 0)).renamed("eq11"),
    "eq14": lambda: approx_facet_w1().renamed("eq14"),
    "eq20": first_category,
    "eq26": second_category_upper,
    "eq27": second_category_lower,
    "identity": identity_witness,
}

_PARAMETRIC = {
    "eq10": (8, diagonal_facet),
    "eq13": (6, approx_facet_w1),
    "eq16": (6, approx_facet_w2),
    "eq17": (6, approx_facet_w3),
}

PRESET_NAMES = tuple(sorted(_FIXED)) + tuple(f"{k}:<{n} bits>" for k, (n, _) in sorted(_PARAMETRIC.items()))


def load_preset(name):
    """Resolve a preset name such as ``eq26`` or ``eq10:00001010``."""
    base, _, arg = name.partition(":")
    if base in _FIXED and not arg:
        return _FIXED[base]()
    if base in _PARAMETRIC:
        n, fn = _PARAMETRIC[base]
        return fn(_bits(arg or "0" * n, n))
    raise KeyError(f"unknown preset {name!r}; known: {', '.join(PRESET_NAMES)}")


def is_preset(name):
    try:
        load_preset(name)
    except (KeyError, ValueError):
        return False
    return True


def named_witnesses():
    """The fixed named witnesses plus one representative of each family."""
    names = ["eq10:00000000", "eq11", "eq13:000000", "eq14", "eq16:000000",
             "eq17:000000", "eq20", "eq26", "eq27"]
    return {n: load_preset(n) for n in names}
