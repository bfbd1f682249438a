"""Command-line front end: ``qutrit-witness <command> ...``.

Exit codes: 0 success, 1 validation failure, 2 usage error, 3 numerical
non-convergence.
"""

import argparse
import json
import sys
from pathlib import Path

import numpy as np
from scipy.optimize import bisect

from . import __version__
from . import io as wio
from .classification import classify, tangent_shift
from .exceptions import (
    ConvergenceError,
    OrbitCapError,
    QutritWitnessError,
    WitnessFileError,
)
from .feasible import (
    DIAG,
    FAMILIES,
    refine_facet,
    seed_lower,
    seed_upper,
    vertex_catalog,
)
from .operators import assemble, expectation
from .optimize import OptimizerConfig
from .presets import PRESET_NAMES, diagonal_facet, is_preset, load_preset
from .states import horodecki, is_ppt, ppt_family
from .su3 import GELLMANN, SQRT3, random_unit_vector
from .symmetry import DEFAULT_ORBIT_CAP, GENERATOR_PRESETS, orbit

EXIT_OK, EXIT_VALIDATION, EXIT_USAGE, EXIT_CONVERGENCE = 0, 1, 2, 3

SCAN_DOMAINS = {"horodecki": (0.0, 5.0), "ppt-family": (0.0, 1 / SQRT3)}
SCAN_DEFAULT_STEP = {"horodecki": 0.01, "ppt-family": 1 / SQRT3 / 100}

REFINE_SEEDS = ("horodecki-upper", "horodecki-lower")
# bits of the all-positive diagonal facet used by the tangent-test seed
_TANGENT_TEST_BITS = (0,) * 8


class UsageError(Exception):
    pass


def _config(args, **over):
    kw = dict(seed=args.seed, threads=args.threads)
    kw.update(over)
    return OptimizerConfig(**kw)


def _out_dir(args):
    return Path(args.out) if args.out else wio.default_output_dir()


def _emit(args, text, filename=None):
    """Print ``text``; with ``--out`` also write it atomically to ``filename``."""
    sys.stdout.write(text)
    if args.out and filename:
        wio.atomic_write(Path(args.out) / filename, text)


def _kv(d, prefix=""):
    lines = []
    for k, v in d.items():
        if isinstance(v, dict):
            lines.extend(_kv(v, f"{prefix}{k}."))
        elif isinstance(v, float):
            lines.append(f"{prefix}{k} = {wio.fmt(v)}")
        else:
            lines.append(f"{prefix}{k} = {v}")
    return lines


def _render(args, d):
    if args.format == "json":
        return json.dumps(d, indent=2) + "\n"
    if args.format == "csv":
        flat = [line.split(" = ", 1) for line in _kv(d)]
        return wio.csv_text(["key", "value"], flat)
    return "\n".join(_kv(d)) + "\n"


def _load_target(target):
    if is_preset(target):
        return load_preset(target), None
    path = Path(target)
    if not path.exists():
        raise UsageError(f"{target!r} is neither a preset ({', '.join(PRESET_NAMES)}) nor a file")
    return wio.read_witness(path)


# ----------------------------------------------------------------- commands

def basis_check(basis=GELLMANN, samples=1000, seed=0, tol=1e-15, norm_tol=1e-12):
    """Run the Gell-Mann identity suite; returns ``(ok, lines)``."""
    lam = np.asarray(basis)[1:]
    lines, ok = [], True
    passed = 0
    for i in range(8):
        for j in range(8):
            t = np.trace(lam[i] @ lam[j])
            want = 2.0 if i == j else 0.0
            if abs(t - want) <= tol:
                passed += 1
            else:
                ok = False
                lines.append(f"FAIL Tr(lambda_{i + 1} lambda_{j + 1}) = {t:.17g}, expected {want}")
    lines.append(f"{passed}/64 orthogonality checks passed")
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(samples):
        a = random_unit_vector(rng)
        r = np.einsum("a,kab,b->k", a.conj(), lam, a).real
        worst = max(worst, abs(r @ r - 4 / 3))
    norm_ok = worst <= norm_tol
    ok = ok and norm_ok
    lines.append(f"{samples} Bloch-norm checks: max |sum r_k^2 - 4/3| = {worst:.3e} "
                 f"({'pass' if norm_ok else 'FAIL'})")
    return ok, lines


def cmd_basis_check(args):
    basis = GELLMANN.copy()
    if args.corrupt:
        basis[5] = basis[5] * (1 + 1e-6)
    ok, lines = basis_check(basis, samples=args.samples, seed=args.seed)
    print("\n".join(lines))
    return EXIT_OK if ok else EXIT_VALIDATION


def cmd_vertices(args):
    pts = vertex_catalog(FAMILIES[args.family])
    if args.format == "json":
        rows = [{"index": k, "coords": [float(x) for x in p.coords],
                 "exact": [str(x) for x in p.exact] if p.exact is not None else None}
                for k, p in enumerate(pts)]
        _emit(args, json.dumps(rows, indent=2) + "\n", f"vertices_{args.family}.json")
    else:
        _emit(args, wio.vertices_csv(pts), f"vertices_{args.family}.csv")
    return EXIT_OK


def cmd_classify(args):
    w, _ = _load_target(args.target)
    cfg = _config(args)
    if args.tangent:
        w, _ = tangent_shift(w, cfg)
    report = classify(w, cfg, probes=not args.no_probes, search=args.search)
    d = report.to_dict()
    if args.tangent:
        d["a0"] = w.a0
    _emit(args, _render(args, d), f"classify_{(w.name or 'witness').replace(':', '_')}.{args.format}")
    return EXIT_OK


def _family_state(family, x):
    return horodecki(x) if family == "horodecki" else ppt_family(1.0, x)


def scan_rows(w, family, lo, hi, step):
    n = int(round((hi - lo) / step))
    grid = np.linspace(lo, hi, n + 1)
    rows = []
    for x in grid:
        rho = _family_state(family, float(x))
        rows.append((float(x), expectation(w, rho), is_ppt(rho)[0]))
    return rows


def scan_roots(w, family, rows, xtol=1e-9):
    """Sign changes of the expectation along ``rows``, refined by bisection."""
    f = lambda x: expectation(w, _family_state(family, x))
    roots = []
    for (x0, v0, _), (x1, v1, _) in zip(rows, rows[1:]):
        if v0 == 0.0:
            roots.append(x0)
        elif v0 * v1 < 0:
            roots.append(bisect(f, x0, x1, xtol=xtol, rtol=4 * np.finfo(float).eps))
    if rows and rows[-1][1] == 0.0:
        roots.append(rows[-1][0])
    return roots


def cmd_scan(args):
    w, _ = _load_target(args.target)
    dlo, dhi = SCAN_DOMAINS[args.family]
    lo = dlo if args.start is None else args.start
    hi = dhi if args.stop is None else args.stop
    step = SCAN_DEFAULT_STEP[args.family] if args.step is None else args.step
    eps = 1e-12
    if not (dlo - eps <= lo < hi <= dhi + eps) or step <= 0:
        raise UsageError(f"range [{lo}, {hi}] step {step} outside the {args.family} domain [{dlo}, {dhi}]")
    lo, hi = max(lo, dlo), min(hi, dhi)
    rows = scan_rows(w, args.family, lo, hi, step)
    roots = scan_roots(w, args.family, rows, xtol=args.tol)
    param = "b" if args.family == "horodecki" else "c"
    if args.format == "json":
        text = json.dumps({"parameter": param, "rows": [list(r) for r in rows], "roots": roots}, indent=2) + "\n"
    else:
        text = wio.csv_text([param, "expectation", "ppt"],
                            [(wio.fmt(x), wio.fmt(v), int(p)) for x, v, p in rows])
    name = (w.name or "witness").replace(":", "_")
    _emit(args, text, f"scan_{name}_{args.family}.{'json' if args.format == 'json' else 'csv'}")
    for r in roots:
        sys.stderr.write(f"sign change at {param} = {wio.fmt(r)}\n")
    if args.format != "json":
        sys.stdout.write("".join(f"# root {param} = {wio.fmt(r)}\n" for r in roots))
    return EXIT_OK


def tangent_test_seed():
    """Eight diagonal vertices lying on the all-positive facet (already tangent)."""
    wm = assemble(diagonal_facet(_TANGENT_TEST_BITS))
    on = [p for p in vertex_catalog(DIAG) if abs(np.vdot(p.state.vector, wm @ p.state.vector)) < 1e-12]
    return on[:DIAG.dim]


def _seed(name):
    if name == "horodecki-upper":
        return seed_upper()
    if name == "horodecki-lower":
        return seed_lower()
    return tangent_test_seed()


def _trace_text(res_trace):
    lines = ["iteration,offset,maximum,excess,swapped,normal,points"]
    for s in res_trace:
        normal = " ".join(wio.fmt(x) for x in s.normal)
        pts = ";".join(" ".join(wio.fmt(x) for x in p) for p in s.points)
        swapped = "" if s.swapped is None else str(s.swapped)
        lines.append(f"{s.iteration},{wio.fmt(s.offset)},{wio.fmt(s.maximum)},"
                     f"{wio.fmt(s.excess)},{swapped},{normal},{pts}")
    return "\n".join(lines) + "\n"


def cmd_refine(args):
    seed = _seed(args.seed_preset)
    cfg = _config(args, restarts=args.restarts)
    res = refine_facet(seed, cfg=cfg, max_iters=args.max_iter, tol=args.tol,
                       lookahead_restarts=args.lookahead_restarts)
    w = res.witness.renamed(f"refined-{args.seed_preset}")
    out = _out_dir(args)
    stem = f"refine_{args.seed_preset}"
    if args.format == "json":
        wio.atomic_write(out / f"{stem}.json", json.dumps(wio.witness_to_json(w), indent=2) + "\n")
    else:
        wio.atomic_write(out / f"{stem}.wit", wio.dumps_witness(w))
    wio.atomic_write(out / f"{stem}_trace.csv", _trace_text(res.trace))
    print(f"iterations = {res.n_iter}")
    print(f"offset = {wio.fmt(res.witness.a0)}")
    print(f"normal = {' '.join(wio.fmt(x) for x in res.hyperplane.normal)}")
    print(f"written = {out / stem}")
    return EXIT_OK


def cmd_orbit(args):
    w = load_preset(args.target)
    orb = orbit(w, GENERATOR_PRESETS[args.generators], cap=args.cap)
    directory = _out_dir(args) / f"orbit_{args.target.replace(':', '_')}_{args.generators}"
    wio.write_orbit_bundle(directory, orb, tag=args.target)
    print(f"size = {orb.size}")
    print(f"written = {directory}")
    return EXIT_OK


# ------------------------------------------------------------------- parser

def _preset_arg(text):
    if not is_preset(text):
        raise argparse.ArgumentTypeError(f"unknown preset {text!r}; known: {', '.join(PRESET_NAMES)}")
    return text


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0, help="RNG seed for optimizer restarts (default 0)")
    common.add_argument("--threads", type=int, default=1, help="optimizer worker threads (default 1)")
    common.add_argument("--tol", type=float, default=1e-9,
                        help="bisection / refinement tolerance (default 1e-9)")
    common.add_argument("--out", default=None,
                        help=f"output directory (default ${wio.OUTPUT_ENV} or the current directory)")
    common.add_argument("--format", choices=("kv", "json", "csv"), default="kv", help="output format")

    p = argparse.ArgumentParser(prog="qutrit-witness", description=__doc__.splitlines()[0],
                                formatter_class=argparse.RawDescriptionHelpFormatter)
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("basis-check", parents=[common], help="verify Gell-Mann trace and Bloch-norm identities")
    s.add_argument("--samples", type=int, default=1000)
    s.add_argument("--corrupt", action="store_true", help=argparse.SUPPRESS)
    s.set_defaults(func=cmd_basis_check)

    s = sub.add_parser("vertices", parents=[common], help="vertex catalog of a coordinate family",
                       description="CSV columns: index, one coordinate per label (17 significant "
                                   "digits), exact rational coordinates, alpha and beta.")
    s.add_argument("family", choices=sorted(FAMILIES))
    s.set_defaults(func=cmd_vertices)

    s = sub.add_parser("classify", parents=[common], help="classify a preset or witness file")
    s.add_argument("target", help=f"preset ({', '.join(PRESET_NAMES)}) or witness file")
    s.add_argument("--tangent", action="store_true", help="shift a0 so the product minimum is zero first")
    s.add_argument("--no-probes", action="store_true", help="skip PPT probe states")
    s.add_argument("--search", action="store_true", help="try a nullspace certificate search")
    s.set_defaults(func=cmd_classify)

    s = sub.add_parser("scan", parents=[common], help="expectation along a state family",
                       description="CSV columns: parameter (b or c), expectation Tr(W rho), ppt flag (0/1). "
                                   "Sign changes are located by bisection and reported as '# root' lines.")
    s.add_argument("target", help="preset or witness file")
    s.add_argument("--family", choices=sorted(SCAN_DOMAINS), default="horodecki")
    s.add_argument("--start", type=float, default=None)
    s.add_argument("--stop", type=float, default=None)
    s.add_argument("--step", type=float, default=None)
    s.set_defaults(func=cmd_scan)

    s = sub.add_parser("refine", parents=[common], help="refine a seed plane to a tangent witness",
                       description="Writes <stem>.wit (or .json) and <stem>_trace.csv with columns "
                                   "iteration, offset, maximum, excess, swapped, normal, points.")
    s.add_argument("seed_preset", metavar="seed", choices=REFINE_SEEDS + ("tangent-test",),
                   help=f"one of {', '.join(REFINE_SEEDS)}")
    s.add_argument("--max-iter", type=int, default=200)
    s.add_argument("--restarts", type=int, default=64)
    s.add_argument("--lookahead-restarts", type=int, default=16)
    s.set_defaults(func=cmd_refine)

    s = sub.add_parser("orbit", parents=[common], help="write the symmetry orbit of a preset")
    s.add_argument("target", type=_preset_arg)
    s.add_argument("--generators", choices=sorted(GENERATOR_PRESETS), default="first")
    s.add_argument("--cap", type=int, default=DEFAULT_ORBIT_CAP)
    s.set_defaults(func=cmd_orbit)
    return p


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        parser.error(str(exc))
    except (ConvergenceError,) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONVERGENCE
    except (WitnessFileError, OrbitCapError, QutritWitnessError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION


if __name__ == "__main__":
    sys.exit(main())
