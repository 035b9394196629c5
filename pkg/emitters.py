"""
Output Emitters

Turns results into documents (plain dicts of strings and ints) and renders
documents as text, JSON or LaTeX. Coefficients are always exact strings;
the only floats are the anharmonic estimates, printed with 17 significant
digits under an "approximate" key.
"""

import json
import logging
import re
from fractions import Fraction
from typing import Any, Dict, List, Optional, Union

import sympy
from sympy.parsing.sympy_parser import convert_xor, parse_expr, standard_transformations

from algebra import CoeffField, GeneralizedSeries, ParamPoly, ParamRatFunc, coeff_str
from errors import EulerOdeError, ValidationError, VerificationError
from op_parser import operator_from_string, parse_coefficient, parse_operator, parameters

logger = logging.getLogger(__name__)

Document = Dict[str, Any]

FORMATS = ("text", "json", "latex")


# ---------------------------------------------------------------------------
# Documents
# ---------------------------------------------------------------------------

def series_terms(series: GeneralizedSeries) -> List[Dict[str, Any]]:
    return [{"offset": k, "coeff": coeff_str(series.terms[k])} for k in series.offsets()]


def series_document(series: GeneralizedSeries, status: str, meta: Optional[Dict[str, Any]] = None) -> Document:
    """The solution schema: base_exponent, terms, status, meta."""
    info: Dict[str, Any] = {
        "truncation_order": series.truncation_order,
        "direction": "descending" if series.descending else "ascending",
    }
    info.update(meta or {})
    return {
        "base_exponent": str(series.base),
        "terms": series_terms(series),
        "status": status,
        "meta": info,
    }


def series_from_document(doc: Document) -> GeneralizedSeries:
    """
    Rebuild the series a solution document describes.

    Raises:
        VerificationError: the document does not follow the solution schema
    """
    try:
        base = Fraction(doc["base_exponent"])
        terms = {int(t["offset"]): parse_coefficient(t["coeff"]) for t in doc["terms"]}
        status = doc["status"]
        meta = doc.get("meta", {})
    except (KeyError, TypeError, ValueError, ZeroDivisionError, ValidationError) as exc:
        raise VerificationError(f"malformed solution document: {exc}") from None
    if status not in ("terminated", "truncated"):
        raise VerificationError(f"unknown status {status!r}")
    if status == "terminated":
        return GeneralizedSeries(base, terms)
    order = meta.get("truncation_order")
    if not isinstance(order, int):
        raise VerificationError("truncated solution without an integer truncation_order")
    return GeneralizedSeries(base, terms, order, meta.get("direction") == "descending")


# ---------------------------------------------------------------------------
# JSON
# ---------------------------------------------------------------------------

def to_json(doc: Union[Document, List[Document]]) -> str:
    return json.dumps(doc, indent=2, ensure_ascii=False)


# ---------------------------------------------------------------------------
# Text
# ---------------------------------------------------------------------------

def _series_text(doc: Document) -> str:
    s = series_from_document(doc)
    return str(s)


def _is_solution(doc: Any) -> bool:
    return isinstance(doc, dict) and {"base_exponent", "terms", "status"} <= set(doc)


def _text_lines(doc: Any, indent: int = 0) -> List[str]:
    pad = "  " * indent
    lines: List[str] = []
    if _is_solution(doc):
        lines.append(f"{pad}y = {_series_text(doc)}")
        lines.append(f"{pad}status: {doc['status']}")
        for key, value in doc.get("meta", {}).items():
            lines.extend(_text_entry(key, value, indent))
        return lines
    if isinstance(doc, dict):
        for key, value in doc.items():
            lines.extend(_text_entry(key, value, indent))
        return lines
    if isinstance(doc, list):
        for i, item in enumerate(doc):
            if i:
                lines.append("")
            lines.extend(_text_lines(item, indent))
        return lines
    return [f"{pad}{doc}"]


def _text_entry(key: str, value: Any, indent: int) -> List[str]:
    pad = "  " * indent
    nested = isinstance(value, dict) or (
        isinstance(value, list) and not all(isinstance(v, (str, int)) for v in value))
    if nested and value:
        return [f"{pad}{key}:"] + _text_lines(value, indent + 1)
    if isinstance(value, list):
        return [f"{pad}{key}: [{', '.join(str(v) for v in value)}]"]
    return [f"{pad}{key}: {value}"]


def to_text(doc: Union[Document, List[Document]]) -> str:
    return "\n".join(_text_lines(doc))


# ---------------------------------------------------------------------------
# LaTeX
# ---------------------------------------------------------------------------

_X = sympy.Symbol("x")


def sympy_coeff(c: CoeffField) -> sympy.Expr:
    if isinstance(c, (int, Fraction)):
        c = Fraction(c)
        return sympy.Rational(c.numerator, c.denominator)
    if isinstance(c, ParamPoly):
        sym = sympy.Symbol(c.name)
        return sympy.Add(*[sympy_coeff(a) * sym ** k for k, a in enumerate(c.coefficients)])
    if isinstance(c, ParamRatFunc):
        return sympy_coeff(c.numerator) / sympy_coeff(c.denominator)
    raise TypeError(f"not a coefficient: {c!r}")


def series_latex(series: GeneralizedSeries) -> str:
    expr = sympy.Add(*[sympy_coeff(c) * _X ** sympy.Rational(series.base + k)
                       for k, c in series.terms.items()])
    text = sympy.latex(expr, order="rev-lex") if series.terms else "0"
    if series.truncation_order is not None:
        edge = series.base - series.truncation_order if series.descending \
            else series.base + series.truncation_order
        text += r" + O\left(" + sympy.latex(_X ** sympy.Rational(edge)) + r"\right)"
    return text


def operator_latex(src: str) -> str:
    """LaTeX for an operator string as printed by LinDiffOp."""
    try:
        op = operator_from_string(src, free=_single_parameter(src))
    except EulerOdeError as exc:
        logger.debug("operator %r kept as text: %s", src, exc)
        return r"\text{" + src + "}"
    pieces = []
    for (a, b), c in op.terms.items():
        factor = sympy.latex(sympy_coeff(c))
        mono = []
        if a:
            mono.append("x" if a == 1 else f"x^{{{a}}}")
        if b:
            mono.append(r"\frac{d}{dx}" if b == 1 else rf"\frac{{d^{{{b}}}}}{{dx^{{{b}}}}}")
        if mono:
            if factor == "1":
                factor = ""
            elif factor == "-1":
                factor = "-"
            elif "+" in factor or "-" in factor[1:]:
                factor = rf"\left({factor}\right)"
        pieces.append(factor + " ".join(mono))
    return " + ".join(pieces).replace("+ -", "- ") if pieces else "0"


def _symbolic(text: str) -> sympy.Expr:
    """Parse printed polynomial text with every identifier a plain symbol."""
    names = {n: sympy.Symbol(n) for n in re.findall(r"[A-Za-z_]\w*", text)}
    return parse_expr(text, local_dict=names,
                      transformations=standard_transformations + (convert_xor,))


def _single_parameter(src: str) -> Optional[str]:
    names = parameters(parse_operator(src))
    return names.pop() if len(names) == 1 else None


def _latex_row(doc: Document) -> str:
    meta = doc.get("meta", {})
    op = operator_latex(meta["operator"]) if "operator" in meta else ""
    euler = meta.get("euler_part", "")
    euler = sympy.latex(_symbolic(euler)) if euler else ""
    sol = series_latex(series_from_document(doc))
    return rf"${op}$ & ${euler}$ & ${sol}$ \\"


def to_latex(doc: Union[Document, List[Document]]) -> str:
    """Table rows (operator, F(D), solution) for solutions, a key/value table otherwise."""
    docs = doc if isinstance(doc, list) else [doc]
    if all(_is_solution(d) for d in docs):
        rows = [_latex_row(d) for d in docs]
        header = [r"\begin{tabular}{lll}", r"Equation & $F(D)$ & Solution \\", r"\hline"]
        return "\n".join(header + rows + [r"\end{tabular}"])
    lines = [r"\begin{tabular}{ll}"]
    for d in docs:
        for key, value in d.items():
            text = to_text(value) if isinstance(value, (dict, list)) else str(value)
            text = text.replace("\n", "; ").replace("_", r"\_")
            lines.append(rf"\texttt{{{key.replace('_', chr(92) + '_')}}} & \texttt{{{text}}} \\")
    lines.append(r"\end{tabular}")
    return "\n".join(lines)


def render(doc: Union[Document, List[Document]], fmt: str) -> str:
    if fmt == "json":
        return to_json(doc)
    if fmt == "latex":
        return to_latex(doc)
    return to_text(doc)
