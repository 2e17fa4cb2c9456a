"""Batch command-line interface.

    cm <command> [--metric FILE] [--points FILE] [--map FILE] [--values v0,v1,...] [--json]

Files are JSON (``-`` reads stdin). Reports go to stdout, diagnostics to
stderr. Exit codes: 0 ok, 2 parse error, 3 invariant violation,
4 reference/dimension error, 5 singular metric.
"""

import argparse
import contextlib
import hashlib
import json
import math
import sys

import numpy as np

from . import __version__
from .affine import as_weight, validate_weight_matrix
from .cayley_menger import (
    cm_matrix,
    cm_signature,
    functoriality_check,
    localize,
    pushforward_matrix,
    sphere_fit,
)
from .errors import DimensionError, SingularCMError, SymmetryError, WeightError
from .metric import (
    Metric,
    embed,
    inertia,
    is_nondegenerate,
    metric_of,
    radical_basis,
    sq_pseudodistance,
)
from .quadratic import from_midpoint_values, reduce_at_referential
from . import tolerances

EXIT_OK = 0
EXIT_PARSE = 2
EXIT_INVARIANT = 3
EXIT_REFERENCE = 4
EXIT_SINGULAR = 5


class CLIError(Exception):
    def __init__(self, code, message):
        super().__init__(message)
        self.code = code


def _read(path, stdin):
    if path == "-":
        return stdin.buffer.read() if hasattr(stdin, "buffer") else stdin.read().encode()
    try:
        with open(path, "rb") as fh:
            return fh.read()
    except OSError as exc:
        raise CLIError(EXIT_PARSE, f"cannot read {path}: {exc.strerror}") from exc


def _load_json(raw, label):
    try:
        return json.loads(raw.decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise CLIError(EXIT_PARSE, f"{label}: invalid JSON ({exc})") from exc


def _matrix(obj, label, square=True):
    try:
        a = np.array(obj, dtype=float)
    except (TypeError, ValueError) as exc:
        raise CLIError(EXIT_PARSE, f"{label}: not a numeric matrix") from exc
    if a.ndim != 2 or a.size == 0 or (square and a.shape[0] != a.shape[1]):
        raise CLIError(EXIT_PARSE, f"{label}: expected a {'square ' if square else ''}matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise CLIError(EXIT_PARSE, f"{label}: non-finite entries")
    return a


def _require(doc, key, label):
    if not isinstance(doc, dict) or key not in doc:
        raise CLIError(EXIT_PARSE, f"{label}: missing key {key!r}")
    return doc[key]


def load_metric(raw):
    doc = _load_json(raw, "metric file")
    D = _matrix(_require(doc, "D", "metric file"), "metric file D")
    n = _require(doc, "n", "metric file")
    if not isinstance(n, int) or isinstance(n, bool) or n != D.shape[0] - 1:
        raise CLIError(EXIT_PARSE, f"metric file: n={n!r} does not match D of shape {D.shape}")
    try:
        return Metric(D)
    except SymmetryError as exc:
        i, j = exc.index
        raise CLIError(EXIT_INVARIANT, f"metric file: D[{i}][{j}]: {exc}") from exc


def load_points(raw, n):
    doc = _load_json(raw, "point file")
    pts = _require(doc, "points", "point file")
    if isinstance(pts, dict):
        items = list(pts.items())
    elif isinstance(pts, list):
        try:
            items = [(p["name"], p["coords"]) for p in pts]
        except (TypeError, KeyError) as exc:
            raise CLIError(EXIT_PARSE, "point file: list entries need 'name' and 'coords'") from exc
    else:
        raise CLIError(EXIT_PARSE, "point file: 'points' must be an object or a list")
    out = {}
    for name, row in items:
        try:
            a = np.array(row, dtype=float)
        except (TypeError, ValueError) as exc:
            raise CLIError(EXIT_PARSE, f"point file: points.{name} is not numeric") from exc
        if a.ndim != 1:
            raise CLIError(EXIT_PARSE, f"point file: points.{name} must be a flat row")
        if a.shape[0] != n + 1:
            raise CLIError(EXIT_REFERENCE, f"point file: points.{name} has {a.shape[0]} coordinates, metric needs {n + 1}")
        try:
            out[str(name)] = as_weight(a)
        except WeightError as exc:
            raise CLIError(EXIT_INVARIANT, f"point file: points.{name}: {exc}") from exc
    return out


def parse_values(text, n):
    try:
        vals = [float(v) for v in text.split(",") if v.strip() != ""]
    except ValueError as exc:
        raise CLIError(EXIT_PARSE, f"--values: {exc}") from exc
    if not all(math.isfinite(v) for v in vals):
        raise CLIError(EXIT_PARSE, "--values: non-finite entry")
    if len(vals) != n + 1:
        raise CLIError(EXIT_REFERENCE, f"--values: expected {n + 1} values, got {len(vals)}")
    return np.array(vals)


def _clean(obj):
    """JSON-ready copy: numpy to lists, -0.0 to 0.0."""
    if isinstance(obj, dict):
        return {k: _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _clean(obj.tolist())
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        return float(obj) + 0.0
    return obj


def _inertia_dict(idx):
    return {"positive": idx.positive, "negative": idx.negative, "null": idx.null}


class Context:
    def __init__(self, args, stdin):
        self.args = args
        self.stdin = stdin
        self.inputs = {}
        self.notes = []
        self.warnings = []
        self._metric = None

    def _file(self, key, path):
        if path is None:
            raise CLIError(EXIT_PARSE, f"--{key} is required for '{self.args.command}'")
        raw = _read(path, self.stdin)
        self.inputs[key] = {"sha256": hashlib.sha256(raw).hexdigest()}
        return raw

    def metric(self):
        if self._metric is None:
            self._metric = load_metric(self._file("metric", self.args.metric))
            if self._metric.adjusted:
                self.notes.append("D canonicalized: symmetrized and diagonal zeroed within tau_sym")
        return self._metric

    def points(self):
        return load_points(self._file("points", self.args.points), self.metric().dim)

    def map(self):
        doc = _load_json(self._file("map", self.args.map), "map file")
        C = _matrix(_require(doc, "map", "map file"), "map file map", square=False)
        try:
            return validate_weight_matrix(C)
        except WeightError as exc:
            raise CLIError(EXIT_INVARIANT, f"map file: {exc}") from exc

    def values(self):
        if self.args.values is None:
            raise CLIError(EXIT_PARSE, f"--values is required for '{self.args.command}'")
        vals = parse_values(self.args.values, self.metric().dim)
        self.inputs["values"] = vals
        return vals


def cmd_validate(ctx):
    m = ctx.metric()
    idx = inertia(m)
    radical = radical_basis(m)
    return {
        "n": m.dim,
        "hollow_symmetric": True,
        "canonicalized": m.adjusted,
        "inertia": _inertia_dict(idx),
        "nondegenerate": is_nondegenerate(m),
        "radical_dimension": len(radical),
        "radical_basis": radical,
    }


def cmd_dist(ctx):
    m = ctx.metric()
    pts = ctx.points()
    names = ctx.args.names
    if len(names) != 2:
        raise CLIError(EXIT_PARSE, "dist needs exactly two point names")
    for name in names:
        if name not in pts:
            raise CLIError(EXIT_REFERENCE, f"unknown point name {name!r}")
    p, q = names
    ctx.inputs["names"] = list(names)
    d2 = sq_pseudodistance(m, pts[p], pts[q])
    return {"p": p, "q": q, "sq_distance": d2, "half_sq_distance": 0.5 * d2}


def cmd_localize(ctx):
    m = ctx.metric()
    vals = ctx.values()
    loc = localize(m, vals)
    tol = tolerances.tau_quadric(m.d_matrix)
    on_quadric = abs(loc.residual) <= tol
    if not on_quadric:
        ctx.warnings.append(
            f"residual {loc.residual!r} exceeds tau_quadric; values are not Cayley-Menger coordinates of a point"
        )
    return {"point": loc.point, "beta": loc.beta, "residual": loc.residual, "on_quadric": on_quadric}


def cmd_sphere_fit(ctx):
    m = ctx.metric()
    fit = sphere_fit(m, ctx.values())
    out = {"center": fit.center, "r_squared": fit.r_squared}
    if fit.r_squared >= 0:
        out["r"] = math.sqrt(fit.r_squared)
    else:
        ctx.notes.append("negative squared radius; no real radius reported")
    return out


def cmd_cm_matrix(ctx):
    M = cm_matrix(ctx.metric())
    return {"cm_matrix": M.matrix, "signature": _inertia_dict(cm_signature(M))}


def cmd_signature(ctx):
    m = ctx.metric()
    M = cm_matrix(m)
    sig = cm_signature(M)
    idx = inertia(m)
    expected = (idx.negative + 1, idx.positive + 1, idx.null)
    return {
        "cm_matrix": M.matrix,
        "signature": _inertia_dict(sig),
        "metric_inertia": _inertia_dict(idx),
        "signature_law_holds": tuple(sig) == expected,
    }


def cmd_embed(ctx):
    m = ctx.metric()
    emb = embed(m)
    err = float(np.max(np.abs(emb.sq_distances() - m.d_matrix)))
    return {
        "coordinates": emb.points,
        "signs": emb.signs,
        "inertia": _inertia_dict(emb.inertia),
        "reconstruction_error": err,
    }


def cmd_functorial(ctx):
    m = ctx.metric()
    C = ctx.map()
    try:
        M_B, defect = functoriality_check(m, C)
        T = pushforward_matrix(m, C)
    except DimensionError as exc:
        raise CLIError(EXIT_REFERENCE, f"map file: {exc}") from exc
    tol = tolerances.tau_functorial(m.d_matrix)
    return {
        "pullback_D": M_B.metric.d_matrix,
        "pullback_cm_matrix": M_B.matrix,
        "pushforward": T,
        "defect": defect,
        "within_tolerance": defect <= tol,
    }


def cmd_interpolate(ctx):
    raw = ctx._file("values", ctx.args.file)
    doc = _load_json(raw, "values file")
    S = _matrix(_require(doc, "values", "values file"), "values file values")
    try:
        q = from_midpoint_values(S)
    except SymmetryError as exc:
        i, j = exc.index
        raise CLIError(EXIT_INVARIANT, f"values file: values[{i}][{j}]: {exc}") from exc
    return {
        "delta": q.delta,
        "reduced": reduce_at_referential(q).delta,
        "D": metric_of(q).d_matrix,
    }


COMMANDS = {
    "validate": cmd_validate,
    "dist": cmd_dist,
    "localize": cmd_localize,
    "sphere-fit": cmd_sphere_fit,
    "cm-matrix": cmd_cm_matrix,
    "signature": cmd_signature,
    "embed": cmd_embed,
    "functorial": cmd_functorial,
    "interpolate": cmd_interpolate,
}


def build_parser():
    parser = argparse.ArgumentParser(prog="cm", description="Cayley-Menger geometry of metric affine spaces.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, help_text):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--metric", metavar="FILE", help="metric file with keys 'n' and 'D'")
        p.add_argument("--points", metavar="FILE", help="point file with key 'points'")
        p.add_argument("--map", metavar="FILE", help="affine map file with key 'map'")
        p.add_argument("--values", metavar="V0,V1,...", help="comma-separated referential values")
        p.add_argument("--json", action="store_true", help="emit the full JSON report")
        return p

    add("validate", "check D, report inertia, non-degeneracy and radical")
    add("dist", "squared pseudodistance between two named points").add_argument("names", nargs="*", metavar="NAME")
    add("localize", "recover a point from Cayley-Menger coordinates")
    add("sphere-fit", "center and squared radius from referential values")
    add("cm-matrix", "Cayley-Menger matrix and its signature")
    add("signature", "Cayley-Menger signature against the metric inertia")
    add("embed", "pseudo-Euclidean realization of D")
    add("functorial", "pull back along an affine map and check the form is preserved")
    add("interpolate", "quadratic function from referential and midpoint values").add_argument(
        "file", metavar="FILE", help="JSON file with key 'values' (the value matrix S)"
    )
    return parser


def _format_text(report):
    lines = [f"{report['command']}: {report['status']}"]
    for key, value in report.get("outputs", {}).items():
        lines.append(f"  {key} = {json.dumps(value)}")
    for note in report.get("notes", []):
        lines.append(f"  note: {note}")
    if "error" in report:
        lines.append(f"  error: {report['error']['message']}")
    return "\n".join(lines)


def run(argv, stdin=None, stdout=None, stderr=None):
    """Run the CLI; returns the exit code."""
    stdin = stdin or sys.stdin
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        with contextlib.redirect_stderr(stderr), contextlib.redirect_stdout(stdout):
            args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_PARSE if exc.code not in (0, None) else EXIT_OK

    ctx = Context(args, stdin)
    report = {"command": args.command}
    code = EXIT_OK
    try:
        report["tolerances"] = tolerances.snapshot()
        outputs = COMMANDS[args.command](ctx)
        report["outputs"] = outputs
        report["status"] = "warning" if ctx.warnings else "ok"
    except CLIError as exc:
        err = exc
    except SingularCMError as exc:
        err = CLIError(EXIT_SINGULAR, str(exc))
    except DimensionError as exc:
        err = CLIError(EXIT_REFERENCE, str(exc))
    except (SymmetryError, WeightError) as exc:
        err = CLIError(EXIT_INVARIANT, str(exc))
    except ValueError as exc:
        # e.g. an unparsable CM_TOL
        err = CLIError(EXIT_PARSE, str(exc))
    else:
        err = None
    if err is not None:
        code = err.code
        report["status"] = "error"
        report["error"] = {"code": code, "message": str(err)}

    if ctx._metric is not None and code in (EXIT_OK, EXIT_SINGULAR):
        report["tolerances"] = tolerances.snapshot(ctx._metric.d_matrix)
    report["inputs"] = ctx.inputs
    report["notes"] = ctx.notes
    report["warnings"] = ctx.warnings
    ordered = {k: report[k] for k in ("command", "inputs", "outputs", "tolerances", "status", "notes", "warnings", "error") if k in report}
    ordered = _clean(ordered)

    for w in ctx.warnings:
        print(f"cm: warning: {w}", file=stderr)
    if "error" in ordered:
        print(f"cm: error: {ordered['error']['message']}", file=stderr)
    if args.json:
        stdout.write(json.dumps(ordered, indent=2, allow_nan=False) + "\n")
    elif code == EXIT_OK:
        stdout.write(_format_text(ordered) + "\n")
    return code


def main(argv=None):
    sys.exit(run(sys.argv[1:] if argv is None else argv))


if __name__ == "__main__":
    main()
