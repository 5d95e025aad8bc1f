"""Command line front end.

    fracsato <verb> <subverb> [options]

Exit status: 0 ok, 1 library error, 2 usage error, 3 unknown at the
working precision.
"""

import argparse
import dataclasses
import enum
import json
import math
import sys

from . import textio
from .errors import FracsatoError
from .fractional import FracOp, dord, is_differential, ore_solve
from .grassmannian import (
    Plane,
    certify_differential,
    conjugate_spectral,
    dressing_from_plane,
    example_4_5,
    frac_certify,
    plane_from_dressing,
    quotient_dim,
    rank,
    spectral_membership,
    spectral_polynomials,
    standard_plane,
)
from .krichever import (
    CurveData,
    conjugated_pair,
    elliptic_plane,
    elliptic_relation,
    op_rational_section,
    section_check,
    weierstrass_p,
    weierstrass_residual,
)
from .polys import RatPoly2
from .psdo import PsDO, lax_bracket, psdo_adjoint, psdo_invert, schur_dress
from .relations import bc_relation, span_dim
from .series import Certificate, Verdict, XSeries, ZSeries, mpq

EXIT_OK, EXIT_ERROR, EXIT_USAGE, EXIT_UNKNOWN = 0, 1, 2, 3


class Unknown(Exception):
    """Raised by a handler whose answer is unknown at the working precision."""

    def __init__(self, payload):
        super().__init__("unknown-at-precision")
        self.payload = payload


# ---------------------------------------------------------------------------
# operand types (grammar errors become usage errors)
# ---------------------------------------------------------------------------


def _grammar(parser):
    def convert(text):
        try:
            return parser(text)
        except FracsatoError as exc:
            raise argparse.ArgumentTypeError(str(exc)) from exc

    convert.__name__ = parser.__name__.replace("parse_", "")
    return convert


PSDO = _grammar(textio.parse_psdo)
FRAC = _grammar(textio.parse_frac)
ZSER = _grammar(textio.parse_zseries)
SCALAR = _grammar(textio.parse_scalar)


def _nonneg(text):
    v = int(text)
    if v < 0:
        raise argparse.ArgumentTypeError("expected a non-negative integer")
    return v


def _pos(text):
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("expected a positive integer")
    return v


def _neg(text):
    v = int(text)
    if v > -1:
        raise argparse.ArgumentTypeError("expected a negative integer")
    return v


# ---------------------------------------------------------------------------
# JSON rendering
# ---------------------------------------------------------------------------


def jsonable(obj):
    if obj is None or isinstance(obj, (bool, int, str)):
        return obj
    if isinstance(obj, float):
        return None if math.isinf(obj) else obj
    if isinstance(obj, mpq):
        return str(obj)
    if isinstance(obj, enum.Enum):
        return obj.value
    if isinstance(obj, (XSeries, ZSeries, PsDO, FracOp, RatPoly2)):
        return str(obj)
    if isinstance(obj, Plane):
        return textio.plane_json(obj)
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(v) for v in obj]
    if dataclasses.is_dataclass(obj):
        return {f.name: jsonable(getattr(obj, f.name)) for f in dataclasses.fields(obj)}
    return str(obj)


def _cert(c: Certificate):
    return {"verdict": c.verdict.value, "witness": jsonable(c.witness), "window": jsonable(c.window)}


# ---------------------------------------------------------------------------
# handlers: each returns a payload dict or raises Unknown
# ---------------------------------------------------------------------------


def _plane(a) -> Plane:
    if a.basis:
        return Plane.from_spanning(a.basis, a.depth)
    if a.dressing is not None:
        return plane_from_dressing(a.dressing, a.depth)
    if a.example == "4.5":
        return example_4_5(a.depth)
    return standard_plane(a.depth)


def _verdict_payload(payload, verdict):
    if verdict is Verdict.UNKNOWN:
        raise Unknown(payload)
    return payload


def psdo_mul(a):
    return {"result": a.a * a.b}


def psdo_inv(a):
    return {"result": psdo_invert(a.p, depth=a.depth, prec=a.prec_x)}


def psdo_adj(a):
    return {"result": psdo_adjoint(a.p)}


def psdo_schur(a):
    return {"dressing": schur_dress(a.l, depth=a.depth)}


def psdo_lax(a):
    return {"bracket": lax_bracket(a.l, a.n)}


def frac_make_cmd(a):
    f = FracOp.coerce(a.p)
    return {"fraction": f, "reduced": f.reduced, "expansion": f.expansion(a.depth)}


def frac_dord(a):
    r = dord(a.p)
    return {"dord": r.dord, "witness": r.witness, "window": r.window}


def frac_diff(a):
    c = is_differential(a.p)
    return _verdict_payload(_cert(c), c.verdict)


def frac_ore(a):
    r, l = ore_solve(a.p, a.q, a.deg_bound)
    return {"R": r, "L": l, "identity": "q R = p L"}


def plane_kw(a):
    w = _plane(a)
    c = quotient_dim(w, a.f)
    payload = {"plane": w, "quotient_dim": c.quotient_dim, "stabilized": c.stabilized,
               "excess_basis": c.excess_basis, "window": c.window}
    return _verdict_payload(payload, Verdict.YES if c.stabilized else Verdict.UNKNOWN)


def plane_aw(a):
    w = _plane(a)
    if a.f is not None:
        c = spectral_membership(w, a.f)
        return _verdict_payload({"plane": w, **_cert(c)}, c.verdict)
    return {"plane": w, "polynomials": spectral_polynomials(w, a.deg_bound)}


def plane_rank(a):
    w = _plane(a)
    r = rank(w, a.f, a.deg_bound)
    payload = {"rank": r.rank, "stabilized": r.stabilized, "history": r.history,
               "coefficient_functions": r.coefficient_functions}
    return _verdict_payload(payload, Verdict.YES if r.stabilized else Verdict.UNKNOWN)


def plane_dress(a):
    w = _plane(a)
    return {"plane": w, "dressing": dressing_from_plane(w, prec=a.prec_x)}


def plane_conj(a):
    w = _plane(a)
    u = dressing_from_plane(w, prec=a.prec_x)
    p = conjugate_spectral(u, a.f, depth=a.depth)
    diff = certify_differential(p)
    payload = {"operator": p, "differential": _cert(diff)}
    if diff.verdict is Verdict.NO:
        fr = frac_certify(p)
        payload["fractional"] = _cert(fr)
        return _verdict_payload(payload, fr.verdict)
    return _verdict_payload(payload, diff.verdict)


def bc_relate(a):
    F, rep = bc_relation(a.p, a.q, a.nmax, return_report=True)
    return {"relation": F, "report": rep}


def bc_span(a):
    return {"report": span_dim(a.p, a.q, a.n)}


def _curve(a):
    return CurveData(a.g2, a.g3, a.a, a.b)


def kr_elliptic(a):
    c = _curve(a)
    w = elliptic_plane(c, a.depth, a.z_floor)
    pair = conjugated_pair(w)
    F, rep = elliptic_relation(w, pair, a.nmax)
    r = rank(w, w.wp, a.deg_bound)
    payload = {
        "curve": {"g2": c.g2, "g3": c.g3, "a": c.a, "b": c.b},
        "plane": w,
        "L2": pair.l2,
        "L3": pair.l3,
        "certificates": {k: _cert(v) if isinstance(v, Certificate) else v for k, v in pair.certificates.items()},
        "relation": F,
        "relation_report": rep,
        "rank": {"rank": r.rank, "stabilized": r.stabilized},
        "rank_one": r.rank == 1 and r.stabilized,
    }
    return _verdict_payload(payload, Verdict.YES if r.stabilized else Verdict.UNKNOWN)


def kr_weierstrass(a):
    wp, wpp = weierstrass_p(a.g2, a.g3, a.terms)
    res = weierstrass_residual(a.g2, a.g3, wp, wpp)
    zero = not res.terms
    return {"wp": wp, "wp_prime": wpp, "ode_residual": res, "ode_certified_zero": zero}


def kr_section(a):
    c = _curve(a)
    w = elliptic_plane(c, a.depth, a.z_floor)
    op = op_rational_section(w)
    sec = section_check(w, op)
    u = dressing_from_plane(w)
    conj = u * op.to_psdo() * psdo_invert(u)
    cert = certify_differential(conj)
    payload = {"section": str(sec), "section_window": sec.window, "conjugate_differential": _cert(cert),
               "conjugate_order": conj.order, "depth": a.depth}
    kind = Verdict.UNKNOWN if sec.kind == "unknown-at-precision" else Verdict.YES
    return _verdict_payload(payload, kind)


def selftest(a):
    from .acceptance import run_all

    echo = None if a.json else print
    results = run_all(echo=echo)
    payload = {"results": [dataclasses.asdict(r) for r in results], "passed": all(r.ok for r in results)}
    if not payload["passed"]:
        raise SelfTestFailed(payload)
    return payload


class SelfTestFailed(Exception):
    def __init__(self, payload):
        super().__init__("acceptance suite failed")
        self.payload = payload


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------


def _common(depth=12):
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--prec-x", type=_pos, default=12, help="x-precision for inverses (default 12)")
    p.add_argument("--z-floor", type=_neg, default=-12, help="lowest trusted z exponent + 1 (default -12)")
    p.add_argument("--depth", type=_nonneg, default=depth, help=f"plane depth / inverse depth (default {depth})")
    p.add_argument("--nmax", type=_pos, default=3, help="degree budget for relations (default 3)")
    p.add_argument("--deg-bound", type=_pos, default=8, help="degree bound for searches (default 8)")
    p.add_argument("--json", action="store_true", help="emit JSON")
    return p


def _plane_opts(p):
    g = p.add_mutually_exclusive_group()
    g.add_argument("--example", choices=["4.5", "standard"], default="standard")
    g.add_argument("--basis", type=ZSER, action="append", help="spanning series (repeatable)")
    g.add_argument("--dressing", type=PSDO, help="monic order-0 dressing operator")


def _curve_opts(p):
    for name in ("g2", "g3", "a", "b"):
        p.add_argument(f"--{name}", type=SCALAR, required=True)


def build_parser():
    common = _common()
    top = argparse.ArgumentParser(prog="fracsato", description=__doc__.splitlines()[0])
    verbs = top.add_subparsers(dest="verb", required=True)

    def sub(group, name, fn, help_, parent=common):
        sp = group.add_parser(name, parents=[parent], help=help_)
        sp.set_defaults(handler=fn)
        return sp

    g = verbs.add_parser("psdo", help="pseudodifferential calculus").add_subparsers(dest="subverb", required=True)
    s = sub(g, "mul", psdo_mul, "product a*b")
    s.add_argument("--a", type=PSDO, required=True)
    s.add_argument("--b", type=PSDO, required=True)
    s = sub(g, "inv", psdo_inv, "two-sided inverse")
    s.add_argument("--p", type=PSDO, required=True)
    s = sub(g, "adjoint", psdo_adj, "formal adjoint")
    s.add_argument("--p", type=PSDO, required=True)
    s = sub(g, "schur", psdo_schur, "dressing operator of a normalized operator")
    s.add_argument("--l", type=PSDO, required=True)
    s = sub(g, "lax", psdo_lax, "Lax bracket [(l^n)_+, l]")
    s.add_argument("--l", type=PSDO, required=True)
    s.add_argument("--n", type=_pos, required=True)

    g = verbs.add_parser("frac", help="fractional operators").add_subparsers(dest="subverb", required=True)
    s = sub(g, "make", frac_make_cmd, "normalize and expand a fraction")
    s.add_argument("--p", type=FRAC, required=True)
    s = sub(g, "dord", frac_dord, "denominatorial order")
    s.add_argument("--p", type=FRAC, required=True)
    s = sub(g, "differential", frac_diff, "is the operator differential?")
    s.add_argument("--p", type=FRAC, required=True)
    s = sub(g, "ore", frac_ore, "solve q R = p L")
    s.add_argument("--p", type=PSDO, required=True)
    s.add_argument("--q", type=PSDO, required=True)

    g = verbs.add_parser("plane", help="planes in the big cell").add_subparsers(dest="subverb", required=True)
    for name, fn, help_, need_f in (
        ("kw", plane_kw, "dim (W + fW)/W", True),
        ("aw", plane_aw, "spectral algebra membership or polynomial search", False),
        ("rank", plane_rank, "rank over the spectral field", True),
        ("dress", plane_dress, "dressing operator of the plane", False),
        ("conj", plane_conj, "U f(D) U^-1 and its certification", True),
    ):
        s = sub(g, name, fn, help_)
        _plane_opts(s)
        if name != "dress":
            s.add_argument("--f", type=ZSER, required=need_f)

    g = verbs.add_parser("bc", help="Burchnall-Chaundy relations").add_subparsers(dest="subverb", required=True)
    s = sub(g, "relate", bc_relate, "first relation F(p, q) = 0")
    s.add_argument("--p", type=FRAC, required=True)
    s.add_argument("--q", type=FRAC, required=True)
    s = sub(g, "span", bc_span, "dimension of span{p^i q^j}")
    s.add_argument("--p", type=FRAC, required=True)
    s.add_argument("--q", type=FRAC, required=True)
    s.add_argument("--n", type=_pos, required=True)

    g = verbs.add_parser("krichever", help="curve constructions").add_subparsers(dest="subverb", required=True)
    s = sub(g, "elliptic", kr_elliptic, "plane, L2, L3, relation and rank of a pointed cubic")
    _curve_opts(s)
    s = sub(g, "section", kr_section, "rational section operator check", _common(depth=8))
    _curve_opts(s)
    s = sub(g, "weierstrass", kr_weierstrass, "Laurent expansion of P and P'")
    s.add_argument("--g2", type=SCALAR, required=True)
    s.add_argument("--g3", type=SCALAR, required=True)
    s.add_argument("--terms", type=_pos, default=8)

    s = verbs.add_parser("selftest", parents=[common], help="run the acceptance suite")
    s.set_defaults(handler=selftest)
    return top


def _echo_args(a):
    skip = {"handler", "json"}
    return {k: jsonable(v) for k, v in vars(a).items() if k not in skip}


def _human(payload, indent=""):
    lines = []
    for k, v in payload.items():
        if isinstance(v, dict):
            lines.append(f"{indent}{k}:")
            lines.extend(_human(v, indent + "  "))
        elif isinstance(v, list) and v and isinstance(v[0], (dict, list)):
            lines.append(f"{indent}{k}: {json.dumps(v)}")
        else:
            lines.append(f"{indent}{k}: {v}")
    return lines


def _emit(a, status, payload, out):
    report = {
        "schema_version": textio.SCHEMA_VERSION,
        "status": status,
        "command": " ".join(x for x in (a.verb, getattr(a, "subverb", None)) if x),
        "input": _echo_args(a),
        "payload": jsonable(payload),
    }
    if a.json:
        out.write(textio.dumps(report) + "\n")
    elif a.verb != "selftest" or status != "ok":
        out.write(f"status: {status}\n")
        out.write("\n".join(_human(report["payload"])) + "\n")


def main(argv=None, out=None):
    out = out or sys.stdout
    parser = build_parser()
    try:
        a = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else EXIT_OK
    try:
        payload = a.handler(a)
    except Unknown as exc:
        _emit(a, "unknown-at-precision", exc.payload, out)
        return EXIT_UNKNOWN
    except SelfTestFailed as exc:
        _emit(a, "error", exc.payload, out)
        return EXIT_ERROR
    except FracsatoError as exc:
        _emit(a, "error", {"code": exc.code, "message": str(exc)}, out)
        return EXIT_ERROR
    except (ValueError, ZeroDivisionError) as exc:
        _emit(a, "error", {"code": "invalid-input", "message": str(exc)}, out)
        return EXIT_ERROR
    _emit(a, "ok", payload, out)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
