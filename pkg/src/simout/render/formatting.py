"""Number formatting and LaTeX escaping for tables and annotations."""

from __future__ import annotations

import math

__all__ = ["format_real", "format_pvalue", "latex_escape"]


def format_real(x: float, sig: int = 3) -> str:
    """Round to ``sig`` significant digits.

    Plain decimal notation when the decimal exponent lies in ``[-3, sig)``,
    otherwise ``<mantissa>e<exponent>`` with no plus sign or zero padding:
    ``format_real(3.14159) == "3.14"``, ``format_real(123456) == "1.23e5"``,
    ``format_real(0.000123) == "1.23e-4"``.
    """
    if sig < 1:
        raise ValueError(f"sig must be positive, got {sig}")
    x = float(x)
    if math.isnan(x):
        return "nan"
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    if x == 0:
        return "0"
    mantissa, exp = f"{x:.{sig - 1}e}".split("e")
    exp = int(exp)
    if -3 <= exp < sig:
        return f"{x:.{max(sig - 1 - exp, 0)}f}"
    return f"{mantissa}e{exp}"


def format_pvalue(p: float, floor: float = 0.001) -> str:
    """Three decimals, or ``"<0.001"`` (``"<floor"``) below the floor."""
    p = float(p)
    if p < floor:
        return f"<{floor:g}"
    return f"{p:.3f}"


_LATEX_SPECIAL = {
    "\\": r"\textbackslash{}",
    "&": r"\&",
    "%": r"\%",
    "$": r"\$",
    "#": r"\#",
    "_": r"\_",
    "{": r"\{",
    "}": r"\}",
    "~": r"\textasciitilde{}",
    "^": r"\textasciicircum{}",
    "<": r"\textless{}",
    ">": r"\textgreater{}",
}


def latex_escape(text: str) -> str:
    return "".join(_LATEX_SPECIAL.get(ch, ch) for ch in str(text))
