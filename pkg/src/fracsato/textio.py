"""Text and JSON wire formats.

Grammars::

    scalar   "p/q" | "p"
    xseries  "1 - 3/2*x + x^4 + O(x^6)"
    zseries  "z^3 + 2 + 5*z^-1 + O(z^-8)"      (O(z^k): exponents <= k unknown)
    psdo     "(1) * D^2 + (-2 + 4*x) * D^0 + O(D^-5)"
    frac     "frac( <psdo> ; <psdo> )"
    ratpoly2 "w^2 - 4*z^3 + z"
"""

import json
import re

from .errors import ParseError
from .series import INF, ONE, ZERO, Q, XSeries, ZSeries

SCHEMA_VERSION = 1


# ---------------------------------------------------------------------------
# formatting
# ---------------------------------------------------------------------------


def _monomial(c, var_part, first):
    """Render ``c * var_part`` as a signed term."""
    neg = c < 0
    a = -c if neg else c
    if not var_part:
        body = str(a)
    elif a == 1:
        body = var_part
    else:
        body = f"{a}*{var_part}"
    if first:
        return ("-" if neg else "") + body
    return (" - " if neg else " + ") + body


def _join(parts, big_o):
    out = ""
    for c, v in parts:
        out += _monomial(c, v, not out)
    if big_o:
        out += (" + " if out else "") + big_o
    return out or "0"


def _pow(var, e):
    if e == 0:
        return ""
    if e == 1:
        return var
    return f"{var}^{e}"


def format_xseries(s: XSeries) -> str:
    parts = [(c, _pow("x", k)) for k, c in enumerate(s.coeffs) if c]
    big = None if s.prec == INF else f"O({_pow('x', s.prec) or 1})"
    return _join(parts, big)


def format_zseries(s: ZSeries) -> str:
    parts = [(s.terms[e], _pow("z", e)) for e in sorted(s.terms, reverse=True)]
    big = None if s.floor == -INF else f"O({_pow('z', s.floor - 1) or 1})"
    return _join(parts, big)


def format_psdo(p) -> str:
    out = []
    for k in sorted(p.terms, reverse=True):
        out.append(f"({format_xseries(p.terms[k])}) * D^{k}")
    if p.floor != -INF:
        out.append(f"O(D^{p.floor - 1})")
    return " + ".join(out) if out else "0"


def format_frac(f) -> str:
    return f"frac( {format_psdo(f.num)} ; {format_psdo(f.den)} )"


def format_ratpoly2(poly) -> str:
    keys = sorted(poly.coeffs, key=lambda ij: (ij[1], ij[0]), reverse=True)
    parts = []
    for i, j in keys:
        v = "*".join(x for x in (_pow("w", j), _pow("z", i)) if x)
        parts.append((poly.coeffs[(i, j)], v))
    return _join(parts, None)


# ---------------------------------------------------------------------------
# parsing
# ---------------------------------------------------------------------------


def _split_terms(text):
    """Split at top-level + and - signs; returns (sign, body) pairs."""
    text = text.strip()
    terms, depth, cur, sign = [], 0, "", 1
    i = 0
    while i < len(text):
        ch = text[i]
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if depth == 0 and ch in "+-":
            prev = cur.rstrip()
            # a sign right after '^' belongs to an exponent
            if prev.endswith("^"):
                cur += ch
                i += 1
                continue
            if prev:
                terms.append((sign, prev.strip()))
                cur = ""
                sign = 1 if ch == "+" else -1
            else:
                sign *= 1 if ch == "+" else -1
            i += 1
            continue
        cur += ch
        i += 1
    if depth != 0:
        raise ParseError(f"unbalanced parentheses in {text!r}")
    if cur.strip():
        terms.append((sign, cur.strip()))
    elif not terms:
        raise ParseError(f"empty expression {text!r}")
    return terms


_RAT = re.compile(r"^\d+(/\d+)?$")
_VAR = re.compile(r"^([a-zA-Z])(?:\^\(?(-?\d+)\)?)?$")
_BIGO = re.compile(r"^O\((.*)\)$")


def _parse_monomial(body, variables):
    """Return (coefficient, {var: exponent}) or ('O', {var: exponent})."""
    m = _BIGO.match(body)
    if m:
        inner = m.group(1).strip()
        if inner == "1":
            return "O", {}
        mv = _VAR.match(inner)
        if not mv or mv.group(1) not in variables:
            raise ParseError(f"bad order term {body!r}")
        return "O", {mv.group(1): int(mv.group(2) or 1)}
    coef = ONE
    exps = {}
    for factor in body.split("*"):
        factor = factor.strip()
        if not factor:
            raise ParseError(f"bad term {body!r}")
        if _RAT.match(factor):
            coef *= Q(factor)
            continue
        mv = _VAR.match(factor)
        if not mv or mv.group(1) not in variables:
            raise ParseError(f"unexpected factor {factor!r} in {body!r}")
        v = mv.group(1)
        exps[v] = exps.get(v, 0) + int(mv.group(2) or 1)
    return coef, exps


_SCALAR = re.compile(r"^\s*[+-]?\d+(/\d+)?\s*$")


def parse_scalar(text):
    if not _SCALAR.match(str(text)):
        raise ParseError(f"bad scalar {text!r}; expected p or p/q")
    try:
        return Q(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise ParseError(f"bad scalar {text!r}") from exc


def parse_xseries(text) -> XSeries:
    coeffs = {}
    prec = INF
    for sign, body in _split_terms(text):
        c, e = _parse_monomial(body, "x")
        k = e.get("x", 0)
        if c == "O":
            prec = min(prec, k)
            continue
        if k < 0:
            raise ParseError("negative power of x")
        coeffs[k] = coeffs.get(k, ZERO) + sign * c
    n = max(coeffs, default=-1) + 1
    return XSeries([coeffs.get(k, ZERO) for k in range(n)], prec)


def parse_zseries(text) -> ZSeries:
    terms = {}
    floor = -INF
    for sign, body in _split_terms(text):
        c, e = _parse_monomial(body, "z")
        k = e.get("z", 0)
        if c == "O":
            floor = max(floor, k + 1)
            continue
        terms[k] = terms.get(k, ZERO) + sign * c
    return ZSeries(terms, floor)


_PSDO_TERM = re.compile(r"^\((.*)\)\s*\*\s*D(?:\^\(?(-?\d+)\)?)?$", re.S)
_D_ONLY = re.compile(r"^(?:(\d+(?:/\d+)?)\s*\*\s*)?D(?:\^\(?(-?\d+)\)?)?$")
_MONO_D = re.compile(r"^(.*?)\s*\*\s*D(?:\^\(?(-?\d+)\)?)?$")


def parse_psdo(text):
    from .psdo import PsDO

    terms = {}
    floor = -INF
    for sign, body in _split_terms(text):
        m = _BIGO.match(body)
        if m:
            mv = _VAR.match(m.group(1).strip())
            if not mv or mv.group(1) != "D":
                raise ParseError(f"bad order term {body!r}")
            floor = max(floor, int(mv.group(2) or 1) + 1)
            continue
        m = _PSDO_TERM.match(body)
        if m:
            k = int(m.group(2) or 1)
            c = parse_xseries(m.group(1))
        else:
            m = _D_ONLY.match(body)
            m2 = _MONO_D.match(body)
            if m:
                k = int(m.group(2) or 1)
                c = XSeries.const(Q(m.group(1) or 1))
            elif m2 and m2.group(1).strip():
                k = int(m2.group(2) or 1)
                c = parse_xseries(m2.group(1))
            elif body.startswith("(") and body.endswith(")"):
                k, c = 0, parse_xseries(body[1:-1])
            else:
                k, c = 0, parse_xseries(body)
        if sign < 0:
            c = -c
        terms[k] = terms[k] + c if k in terms else c
    return PsDO(terms, floor)


def parse_frac(text):
    from .fractional import FracOp, frac_make

    t = text.strip()
    if t.startswith("frac"):
        inner = t[4:].strip()
        if not (inner.startswith("(") and inner.endswith(")")):
            raise ParseError(f"bad fraction {text!r}")
        inner = inner[1:-1]
        if inner.count(";") != 1:
            raise ParseError("fraction needs exactly one ';'")
        a, b = inner.split(";")
        return frac_make(parse_psdo(a), parse_psdo(b))
    return FracOp.from_psdo(parse_psdo(t))


def parse_ratpoly2(text):
    from .polys import RatPoly2

    out = {}
    for sign, body in _split_terms(text):
        c, e = _parse_monomial(body, "zw")
        if c == "O":
            raise ParseError("order terms are not allowed in a polynomial")
        if any(v < 0 for v in e.values()):
            raise ParseError("negative exponent in polynomial")
        key = (e.get("z", 0), e.get("w", 0))
        out[key] = out.get(key, ZERO) + sign * c
    return RatPoly2(out)


# ---------------------------------------------------------------------------
# JSON mirrors
# ---------------------------------------------------------------------------


def _num(v):
    return None if v in (INF, -INF) else int(v)


def xseries_json(s: XSeries):
    return {"coeffs": [str(c) for c in s.coeffs], "prec": _num(s.prec), "text": format_xseries(s)}


def zseries_json(s: ZSeries):
    return {
        "terms": {str(e): str(c) for e, c in sorted(s.terms.items(), reverse=True)},
        "floor": _num(s.floor),
        "text": format_zseries(s),
    }


def psdo_json(p):
    return {
        "terms": {str(k): xseries_json(c) for k, c in sorted(p.terms.items(), reverse=True)},
        "floor": _num(p.floor),
        "text": format_psdo(p),
    }


def plane_json(w):
    return {
        "depth": w.depth,
        "floor_exp": _num(w.floor),
        "basis": [format_zseries(v) for v in w.basis],
    }


def dumps(payload) -> str:
    return json.dumps(payload, indent=2, sort_keys=False)
