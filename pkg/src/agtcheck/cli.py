"""Command-line front end; every report is exact and reproducible from its seed."""
from __future__ import annotations

import argparse
import csv
import io
import json
import re
import sys
from fractions import Fraction

from .exactcore import NonGenericPointError, ParamPoint, as_rational, format_rational, sample_params
from .rootdata import RootSystem

SCHEMA = "agtcheck-report/1"

EXIT_OK, EXIT_VERDICT, EXIT_CONFIG, EXIT_RESAMPLE = 0, 1, 2, 3

# seeded points that turn out degenerate are redrawn from seed + 1, seed + 2, ...
RESAMPLES = 5


class ConfigError(Exception):
    def __init__(self, message, constraint=None):
        super().__init__(message)
        self.constraint = constraint


# --------------------------------------------------------------------------
# parameter resolution


def _root_system(args) -> RootSystem:
    try:
        return RootSystem.from_name(f"{args.kind}{args.rank}")
    except ValueError as exc:
        raise ConfigError(f"unsupported root system {args.kind}{args.rank}: {exc}") from exc


def _parse_rational(text: str) -> Fraction:
    try:
        return as_rational(text)
    except (ValueError, ZeroDivisionError, TypeError) as exc:
        raise ConfigError(f"not a rational number: {text!r}") from exc


def resolve_params(args, rs: RootSystem, seed_offset: int = 0) -> ParamPoint:
    """Explicit values win; otherwise draw a generic point from the seed."""
    constraints = rs.genericity_constraints()
    explicit = [args.eps1, args.eps2, args.a]
    if any(x is not None for x in explicit):
        if args.eps1 is None or args.eps2 is None or args.a is None:
            raise ConfigError("--eps1, --eps2 and --a must be given together")
        a = tuple(_parse_rational(x) for x in args.a)
        if len(a) != rs.rank:
            raise ConfigError(f"--a needs {rs.rank} values for {rs.name}")
        try:
            p = ParamPoint(_parse_rational(args.eps1), _parse_rational(args.eps2), a)
        except NonGenericPointError as exc:
            raise ConfigError(str(exc)) from exc
        for c in constraints:
            if c(p) == 0:
                raise ConfigError(f"parameter point is not generic: {c.name} vanishes", c.name)
        return p
    return sample_params(args.seed + seed_offset, rs.rank, avoid=constraints)


# --------------------------------------------------------------------------
# subcommands; each returns (results, verdicts)


def cmd_relations(args, rs, p):
    from .fock import Frame, apply_word, basis, module_ground, vacuum_ground
    from .walgebra import screening, virasoro_mode

    frame = Frame.root(rs)
    ground = module_ground(frame, p)
    e12, q = p.eps1 * p.eps2, p.q
    states = [ground._like({k: 1}) for d in range(args.dmax + 1) for k in basis(frame, d)]
    heis = True
    for i in range(rs.rank):
        for j in range(rs.rank):
            for m in range(-args.modes, args.modes + 1):
                for n in range(-args.modes, args.modes + 1):
                    const = -m * e12 * rs.cartan[i][j] if m == -n else 0
                    for s in states:
                        lhs = apply_word([(i, m), (j, n)], s) - apply_word([(j, n), (i, m)], s)
                        heis &= lhs == s.scale(const)
    vir = True
    for i in range(1, rs.rank + 1):
        for m in range(-args.modes, args.modes + 1):
            for n in range(-args.modes, args.modes + 1):
                for s in states:
                    lhs = virasoro_mode(i, m, virasoro_mode(i, n, s)) - virasoro_mode(i, n, virasoro_mode(i, m, s))
                    rhs = virasoro_mode(i, m + n, s).scale(e12 * (m - n))
                    if m == -n:
                        rhs = rhs + s.scale(e12 * (e12 + 6 * q * q) * Fraction(m**3 - m, 12))
                    vir &= lhs == rhs
    vac = vacuum_ground(frame, p.eps1, p.eps2)
    scr = True
    for i in range(1, rs.rank + 1):
        for d in range(args.dmax + 1):
            for k in basis(frame, d):
                s = vac._like({k: 1})
                for n in range(-args.modes, args.modes + 1):
                    scr &= screening(i, virasoro_mode(i, n, s)) == virasoro_mode(i, n, screening(i, s))
    verdicts = {"heisenberg": heis, "virasoro": vir, "screening_commutation": scr}
    return {"max_degree": args.dmax, "max_mode": args.modes}, verdicts


def cmd_kernel(args, rs, p):
    from .walgebra import extract_w_generators, kernel_basis

    dims = [len(kernel_basis(rs, d, p)) for d in range(1, args.dmax + 1)]
    expected = [_w_vacuum_character(rs, d) for d in range(1, args.dmax + 1)]
    results = {"dims": dims, "expected_dims": expected}
    gens = []
    if rs.is_type_a():
        gens = [g.to_json() for g in extract_w_generators(rs, p) if g.cdeg <= args.dmax]
    results["generators"] = gens
    return results, {"kernel_dims": dims == expected}


def _w_vacuum_character(rs, d):
    """Coefficient of ``q^d`` in ``prod_kappa prod_{n >= cdeg} (1 - q^n)^-1``."""
    coeffs = [1] + [0] * d
    for c in rs.cdegs:
        for n in range(c, d + 1):
            for k in range(n, d + 1):
                coeffs[k] += coeffs[k - n]
    return coeffs[d]


def cmd_gram(args, rs, p):
    from .rootdata import multipartition_count
    from .verma import VermaModule

    module = VermaModule(rs, p)
    out, ok = [], True
    for d in range(args.dmax + 1):
        g = module.gram(d)
        det = g.determinant()
        size_ok = len(g.basis) == multipartition_count(rs.rank, d)
        ok &= size_ok and det != 0
        entry = g.to_json()
        entry["determinant"] = format_rational(det)
        out.append(entry)
    return {"gram": out}, {"size_and_nondegeneracy": ok}


def cmd_whittaker(args, rs, p):
    from .verma import VermaModule

    module = VermaModule(rs, p)
    out, ok, prev, norms = [], True, None, []
    for d in range(args.dmax + 1):
        w = module.whittaker_vector(d)
        entry = module.gram(d).to_json()
        entry.update(w.to_json())
        if d > 0:
            rep = module.whittaker_report(w, prev)
            entry["report"] = rep
            ok &= rep["dual_basis"] and rep["whittaker_conditions"]
        out.append(entry)
        norms.append(w.norm)
        prev = w
    results = {"whittaker": out}
    if rs.rank == 1:
        a, q = p.a[0], p.q
        closed = -2 / (p.eps1 * p.eps2 * (a * a - q * q))
        results["closed_form_norm_1"] = format_rational(closed)
        if args.dmax >= 1:
            ok &= norms[1] == closed
    return results, {"whittaker": ok}


def cmd_nekrasov(args, rs, p):
    from math import factorial

    from .nekrasov import heis_whittaker_series, z_series

    r = args.rank
    z = z_series(r, args.dmax, p)
    h = heis_whittaker_series(r, args.dmax, p)
    e12 = p.eps1 * p.eps2
    results = {"r": r, "z_coeffs": [format_rational(x) for x in z], "heis_coeffs": [format_rational(x) for x in h]}
    verdicts = {}
    if r == 1:
        verdicts["exponential_identity"] = all(z[d] == 1 / (factorial(d) * e12**d) for d in range(args.dmax + 1))
    verdicts["heisenberg_closed_form"] = all(
        h[d] == 1 / (factorial(d) * (r * e12) ** d) for d in range(args.dmax + 1))
    return results, verdicts


def cmd_agt(args, rs, p):
    from .nekrasov import agt_compare

    rep = agt_compare(args.dmax, p)
    rep = {k: v for k, v in rep.items() if not k.startswith("_")}
    key = "direct_verdict" if args.comparison == "direct" else "verdict"
    return rep, {"agt_power_law": rep[key]}


def cmd_classical(args, rs, p):
    from .walgebra import classical_limit_check, gl_classical_identity

    if not rs.is_type_a() or rs.rank > 2:
        raise ConfigError("classical limits are implemented for A1 and A2")
    d = min(args.dmax, 2)
    u = (Fraction(1), p.eps2 / p.eps1)
    rep = classical_limit_check(rs, d, u, p.a)
    results = {"root_frame": rep}
    verdicts = {"classical_relations": rep["ok"]}
    if rs.rank == 2:
        from .rootdata import root_to_gl

        gl = gl_classical_identity(3, u, root_to_gl(p.a))
        results["gl3_identity"] = gl
        verdicts["gl3_identity"] = gl["ok"]
    return results, verdicts


def cmd_rmatrix(args, rs, p):
    from .rmatrix import leading_term_check, rmatrix_block, unitarity_check, ybe_check

    blocks = [rmatrix_block(i, d, p, rs).to_json() for i in range(1, rs.rank + 1) for d in range(args.dmax + 1)]
    verdicts = {"unitarity": all(unitarity_check(i, args.dmax, p, rs) for i in range(1, rs.rank + 1))}
    results = {"blocks": blocks}
    if rs.rank >= 2:
        verdicts["yang_baxter"] = ybe_check(min(args.dmax, 2), p, rs, 1, 2)
    lead = leading_term_check(1, 1, p, rs)
    results["leading_term"] = lead
    verdicts["leading_term"] = lead["is_reflection"] and lead["finite_tail_nonzero"]
    if rs.rank == 1:
        verdicts["leading_term"] &= lead["is_minus_identity"]
    return results, verdicts


COMMANDS = {
    "relations": cmd_relations,
    "kernel": cmd_kernel,
    "gram": cmd_gram,
    "whittaker": cmd_whittaker,
    "nekrasov": cmd_nekrasov,
    "agt": cmd_agt,
    "classical": cmd_classical,
    "rmatrix": cmd_rmatrix,
}

# commands whose --rank is the gauge rank r (root system A_{r-1})
GAUGE_RANK = {"nekrasov", "agt"}


# --------------------------------------------------------------------------
# output


def _flatten(obj, prefix=""):
    if isinstance(obj, dict):
        for k in obj:
            yield from _flatten(obj[k], f"{prefix}.{k}" if prefix else str(k))
    elif isinstance(obj, list):
        for i, v in enumerate(obj):
            yield from _flatten(v, f"{prefix}[{i}]")
    else:
        yield prefix, obj


def render(report: dict, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(report, indent=2, sort_keys=False) + "\n"
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["key", "value"])
    for k, v in _flatten(report):
        writer.writerow([k, json.dumps(v) if isinstance(v, bool) or v is None else v])
    return buf.getvalue()


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="agtcheck", description=__doc__)
    parser.add_argument("command", choices=sorted(COMMANDS))
    parser.add_argument("--kind", default="A", help="root system type (A, D, E)")
    parser.add_argument("--rank", type=int, default=1,
                        help="root system rank; gauge rank r for nekrasov/agt")
    parser.add_argument("--dmax", type=int, default=2)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--eps1")
    parser.add_argument("--eps2")
    parser.add_argument("--a", nargs="+", help="simple-root values a^i as num/den")
    parser.add_argument("--modes", type=int, default=3, help="mode range for `relations`")
    parser.add_argument("--comparison", choices=["heisenberg", "direct"], default="heisenberg",
                        help="agt: divide by Heis x Vir norms (default) or by Vir norms alone")
    parser.add_argument("--format", choices=["json", "csv"], default="json")
    parser.add_argument("--output")
    # let "-2/5" through as a value rather than an option
    parser._negative_number_matcher = re.compile(r"^-\d+(/\d+)?$")
    return parser


def _emit(text: str, output: str | None):
    if output:
        with open(output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_CONFIG if exc.code else EXIT_OK
    config = {k: v for k, v in vars(args).items() if k != "output"}
    try:
        if args.dmax < 0:
            raise ConfigError("--dmax must be non-negative")
        if args.command in GAUGE_RANK:
            if args.rank < 1:
                raise ConfigError("gauge rank must be positive")
            if args.command == "agt" and args.rank < 2:
                raise ConfigError("agt needs gauge rank r >= 2")
            rs = RootSystem.A(max(args.rank - 1, 1))
        else:
            rs = _root_system(args)
        explicit = args.eps1 is not None or args.eps2 is not None or args.a is not None
        for attempt in range(1 if explicit else RESAMPLES):
            p = _resolve_for(args, rs, attempt)
            try:
                results, verdicts = COMMANDS[args.command](args, rs, p)
                break
            except ValueError as exc:
                raise ConfigError(str(exc)) from exc
            except NonGenericPointError:
                if explicit or attempt == RESAMPLES - 1:
                    raise
    except ConfigError as exc:
        err = {"schema": SCHEMA, "command": args.command, "config": config,
               "error": {"kind": "config", "message": str(exc), "constraint": exc.constraint}}
        _emit(render(err, args.format), args.output)
        return EXIT_CONFIG
    except NonGenericPointError as exc:
        err = {"schema": SCHEMA, "command": args.command, "config": config,
               "error": {"kind": "non_generic", "message": str(exc)}}
        _emit(render(err, args.format), args.output)
        return EXIT_RESAMPLE
    ok = all(verdicts.values())
    report = {"schema": SCHEMA, "command": args.command, "config": config,
              "params": p.to_json(), "results": results, "verdicts": verdicts, "ok": ok}
    _emit(render(report, args.format), args.output)
    return EXIT_OK if ok else EXIT_VERDICT


def _resolve_for(args, rs, attempt=0):
    if args.command in GAUGE_RANK and args.rank == 1:
        # U(1): only (eps1, eps2) matter
        if args.eps1 is not None or args.eps2 is not None:
            if args.eps1 is None or args.eps2 is None:
                raise ConfigError("--eps1 and --eps2 must be given together")
            p = ParamPoint(_parse_rational(args.eps1), _parse_rational(args.eps2), ())
            return p
        q = sample_params(args.seed + attempt, 1, avoid=rs.genericity_constraints())
        return ParamPoint(q.eps1, q.eps2, ())
    return resolve_params(args, rs, attempt)


def main(argv=None):
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
