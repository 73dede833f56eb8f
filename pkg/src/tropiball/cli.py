"""Command-line interface: ``tropiball <command> ...``.

Structured results go to stdout as JSON, point clouds to CSV, figures to
SVG.  Errors are printed to stderr as a JSON object; the exit status is 0
on success, 1 for domain or input errors and 2 for usage errors.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import math
import sys
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import __version__
from .balls import (
    ball_generators,
    max_inscribed,
    max_inscribed_simplex,
    min_enclosing,
    min_enclosing_lower_bound,
)
from .complex import SimplexCover, identify_cover, uniform_sample
from .core import TropPolytope, contains_many, project, trop_det, trop_dist, trop_segment
from .errors import TropicalError
from .hull import h_rep, kleene_star
from .sampler import RNG_NAME, HarChain
from .volume import DEFAULT_BURN_IN, enumerate_pseudo_vertices, estimate_volume

SIG_DIGITS = 12


class InputError(Exception):
    """Unreadable or malformed input file."""


class UsageError(Exception):
    pass


# --------------------------------------------------------------------- I/O

def _reject_constant(name: str):
    raise InputError(f"non-finite number {name} in input")


def load_polytope(path: str | Path) -> TropPolytope:
    """Read ``{"e": int, "vertices": [[...]], "name": optional}``."""
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from exc
    try:
        doc = json.loads(text, parse_constant=_reject_constant)
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: invalid JSON ({exc.msg} at line {exc.lineno})") from exc
    return polytope_from_dict(doc, str(path))


def polytope_from_dict(doc, where: str = "input") -> TropPolytope:
    if not isinstance(doc, dict) or "vertices" not in doc:
        raise InputError(f"{where}: expected an object with a 'vertices' list")
    verts = doc["vertices"]
    if not isinstance(verts, list) or not verts:
        raise InputError(f"{where}: 'vertices' must be a non-empty list")
    e = doc.get("e", len(verts[0]) if isinstance(verts[0], list) else None)
    if not isinstance(e, int) or isinstance(e, bool) or e < 2:
        raise InputError(f"{where}: 'e' must be an integer >= 2")
    rows = []
    for k, v in enumerate(verts):
        if not isinstance(v, list) or len(v) != e:
            raise InputError(f"{where}: vertex {k} must have {e} coordinates")
        if not all(isinstance(x, (int, float)) and not isinstance(x, bool) for x in v):
            raise InputError(f"{where}: vertex {k} has a non-numeric coordinate")
        if not all(math.isfinite(x) for x in v):
            raise InputError(f"{where}: vertex {k} has a non-finite coordinate")
        rows.append([float(x) for x in v])
    name = doc.get("name")
    return TropPolytope(np.array(rows), name=name if isinstance(name, str) else None)


def polytope_to_dict(p: TropPolytope) -> dict:
    d = {"e": p.e, "vertices": p.vertices.tolist()}
    if p.name:
        d["name"] = p.name
    return d


def save_polytope(p: TropPolytope, path: str | Path) -> None:
    Path(path).write_text(json.dumps(polytope_to_dict(p), indent=2) + "\n")


def _num(x):
    """Round to 12 significant digits; integral values print as integers."""
    x = float(x)
    if not math.isfinite(x):
        return None if math.isnan(x) else ("inf" if x > 0 else "-inf")
    r = float(f"{x:.{SIG_DIGITS}g}")
    if r == 0.0:
        return 0
    if r.is_integer() and abs(r) < 1e15:
        return int(r)
    return r


def _clean(obj):
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
        return _num(obj)
    return obj


def dumps(obj) -> str:
    return json.dumps(_clean(obj), indent=2) + "\n"


def points_csv(points: np.ndarray) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow([f"x{k + 1}" for k in range(points.shape[1])])
    for row in points:
        w.writerow([f"{x:.{SIG_DIGITS}g}" for x in row + 0.0])
    return buf.getvalue()


def load_points_csv(path: str | Path) -> np.ndarray:
    try:
        with open(path, newline="") as fh:
            rows = list(csv.reader(fh))
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from exc
    if rows and rows[0] and not _is_number(rows[0][0]):
        rows = rows[1:]
    try:
        pts = np.array([[float(x) for x in r] for r in rows if r], dtype=float)
    except ValueError as exc:
        raise InputError(f"{path}: {exc}") from exc
    if pts.ndim != 2 or not len(pts) or not np.isfinite(pts).all():
        raise InputError(f"{path}: expected a non-empty table of finite numbers")
    return pts


def _is_number(s: str) -> bool:
    try:
        float(s)
    except ValueError:
        return False
    return True


# ---------------------------------------------------------------- manifest

@dataclass
class RunManifest:
    """Everything needed to rerun a stochastic command bit-for-bit."""

    command: str
    polytope: dict
    seed: int
    params: dict
    rng: str = RNG_NAME
    version: str = __version__
    output_sha256: str = ""
    extra: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "command": self.command,
            "polytope": self.polytope,
            "seed": self.seed,
            "params": self.params,
            "rng": self.rng,
            "version": self.version,
            "output_sha256": self.output_sha256,
            "extra": self.extra,
        }

    @classmethod
    def load(cls, path: str | Path) -> "RunManifest":
        try:
            d = json.loads(Path(path).read_text())
        except OSError as exc:
            raise InputError(f"cannot read {path}: {exc.strerror}") from exc
        except json.JSONDecodeError as exc:
            raise InputError(f"{path}: invalid JSON ({exc.msg})") from exc
        try:
            return cls(**d)
        except TypeError as exc:
            raise InputError(f"{path}: not a run manifest ({exc})") from exc


def _sha(text: str) -> str:
    return hashlib.sha256(text.encode()).hexdigest()


def _write(text: str, out: str | None) -> None:
    if out in (None, "-"):
        sys.stdout.write(text)
    else:
        Path(out).write_text(text)


def _manifest_path(args, out: str | None) -> str | None:
    if args.manifest:
        return args.manifest
    if out not in (None, "-"):
        return out + ".manifest.json"
    return None


# ---------------------------------------------------------- deterministic

def cmd_tdet(args) -> int:
    p = load_polytope(args.file)
    det = trop_det(p.matrix())
    _write(dumps({"value": det.value, "sigma": list(det.sigma), "singular": det.singular}), args.output)
    return 0


def cmd_hrep(args) -> int:
    p = load_polytope(args.file)
    ks = kleene_star(p)
    hr = h_rep(ks)
    _write(dumps({
        "kleene_star": ks.m,
        "sigma": list(ks.sigma),
        "closed": ks.is_closed(1e-9),
        "inequalities": hr.lines(),
    }), args.output)
    return 0


def cmd_maxball(args) -> int:
    p = load_polytope(args.file)
    ball = max_inscribed(p)
    gens = ball_generators(ball).vertices
    resid = max(trop_dist(g, project(p, g)) for g in gens)
    _write(dumps({
        "center": ball.center,
        "radius": ball.radius,
        "simplex": list(ball.simplex) if ball.simplex is not None else None,
        "generators": gens,
        "max_generator_residual": resid,
        "feasible": resid <= 1e-6,
    }), args.output)
    return 0


def cmd_minball(args) -> int:
    p = load_polytope(args.file)
    ball = min_enclosing(p)
    far = max(trop_dist(ball.center, v) for v in p.vertices)
    _write(dumps({
        "center": ball.center,
        "radius": ball.radius,
        "lower_bound": min_enclosing_lower_bound(p),
        "max_vertex_distance": far,
        "max_excess": far - ball.radius,
    }), args.output)
    return 0


def cmd_pseudo(args) -> int:
    p = load_polytope(args.file)
    pv = enumerate_pseudo_vertices(p)
    _write(dumps({"count": len(pv), "matrix": pv.matrix(), "points": pv.points}), args.output)
    return 0


# ------------------------------------------------------------- stochastic

def _run_volume(p: TropPolytope, prm: dict, seed: int) -> str:
    est = estimate_volume(p, prm["samples"], seed, burn_in=prm["burn_in"], thin=prm["thin"],
                          sampler=prm["sampler"], rounded=prm["round"], chains=prm["chains"])
    return dumps(est.to_dict())


def _run_cover(p: TropPolytope, prm: dict, seed: int) -> str:
    cover = identify_cover(p, prm["samples"], seed, burn_in=prm["burn_in"])
    return dumps(cover.to_dict())


def _run_sample(p: TropPolytope, prm: dict, seed: int) -> str:
    if prm.get("cover") is not None:
        cover = SimplexCover.from_dict(prm["cover"])
        pts = uniform_sample(cover, p, prm["points"], seed, burn_in=prm["burn_in"], thin=prm["thin"])
    elif p.s == p.e:
        start = max_inscribed_simplex(p).center
        chain = HarChain(p, start, seed)
        pts = chain.run(prm["points"], burn_in=prm["burn_in"], thin=prm["thin"])
    else:
        cover = identify_cover(p, prm["cover_samples"], seed, burn_in=prm["burn_in"])
        prm["cover"] = cover.to_dict()
        pts = uniform_sample(cover, p, prm["points"], seed, burn_in=prm["burn_in"], thin=prm["thin"])
    return points_csv(pts)


RUNNERS = {"volume": _run_volume, "cover": _run_cover, "sample": _run_sample}


def _stochastic(command: str, args, params: dict) -> int:
    p = load_polytope(args.file)
    text = RUNNERS[command](p, params, args.seed)
    _write(text, args.output)
    man = RunManifest(command, polytope_to_dict(p), int(args.seed), params, output_sha256=_sha(text))
    path = _manifest_path(args, args.output)
    if path:
        # full precision: the manifest must reproduce inputs exactly
        Path(path).write_text(json.dumps(man.to_dict(), indent=2) + "\n")
    return 0


def cmd_volume(args) -> int:
    if args.samples < 1:
        raise UsageError("--samples must be >= 1")
    return _stochastic("volume", args, {
        "samples": args.samples, "burn_in": args.burn_in, "thin": args.thin,
        "sampler": args.sampler, "round": args.round, "chains": args.chains,
    })


def cmd_cover(args) -> int:
    if args.samples < 1:
        raise UsageError("--samples must be >= 1")
    return _stochastic("cover", args, {"samples": args.samples, "burn_in": args.burn_in})


def cmd_sample(args) -> int:
    if args.points < 1:
        raise UsageError("--points must be >= 1")
    cover = None
    if args.cover:
        try:
            cover = json.loads(Path(args.cover).read_text())
        except OSError as exc:
            raise InputError(f"cannot read {args.cover}: {exc.strerror}") from exc
        except json.JSONDecodeError as exc:
            raise InputError(f"{args.cover}: invalid JSON ({exc.msg})") from exc
        SimplexCover.from_dict(cover)
    return _stochastic("sample", args, {
        "points": args.points, "burn_in": args.burn_in, "thin": args.thin,
        "cover": cover, "cover_samples": args.cover_samples,
    })


def replay(man: RunManifest) -> str:
    """Rerun a manifest and return the output text."""
    if man.command not in RUNNERS:
        raise InputError(f"manifest command {man.command!r} is not replayable")
    p = polytope_from_dict(man.polytope, "manifest")
    return RUNNERS[man.command](p, dict(man.params), man.seed)


def cmd_replay(args) -> int:
    man = RunManifest.load(args.manifest_file)
    text = replay(man)
    _write(text, args.output)
    if man.output_sha256 and _sha(text) != man.output_sha256:
        raise InputError("replayed output differs from the recorded digest")
    return 0


# -------------------------------------------------------------------- SVG

def render_svg(points: np.ndarray, p: TropPolytope | None = None, size: int = 480) -> str:
    """Scatter of ``(y2, y3)`` with polytope edges drawn as tropical segments."""
    pts = points - points[:, :1]
    xy = pts[:, 1:3]
    lines = []
    if p is not None:
        for a in range(p.s):
            for b in range(a + 1, p.s):
                lines.append(trop_segment(p.vertices[a], p.vertices[b]).bends[:, 1:3])
    allxy = np.vstack([xy] + lines) if lines else xy
    lo, hi = allxy.min(axis=0), allxy.max(axis=0)
    span = float(max(hi - lo)) or 1.0
    pad = 24.0
    scale = (size - 2 * pad) / span

    def tx(q):
        return pad + (q[0] - lo[0]) * scale, size - pad - (q[1] - lo[1]) * scale

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" '
        f'viewBox="0 0 {size} {size}">',
        f'<rect width="{size}" height="{size}" fill="white"/>',
    ]
    for q in xy:
        x, y = tx(q)
        out.append(f'<circle cx="{x:.2f}" cy="{y:.2f}" r="1.2" fill="#1f77b4" fill-opacity="0.6"/>')
    for seg in lines:
        path = " ".join(f"{x:.2f},{y:.2f}" for x, y in map(tx, seg))
        out.append(f'<polyline points="{path}" fill="none" stroke="black" stroke-width="1.2"/>')
    if p is not None:
        for v in p.vertices:
            x, y = tx(v[1:3])
            out.append(f'<circle cx="{x:.2f}" cy="{y:.2f}" r="3" fill="#d62728"/>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def cmd_plot(args) -> int:
    pts = load_points_csv(args.points_file)
    p = load_polytope(args.polytope) if args.polytope else None
    e = pts.shape[1]
    if e != 3 or (p is not None and p.e != 3):
        raise InputError(f"plotting supports e=3 only (got e={p.e if p is not None and p.e != 3 else e})")
    if p is not None:
        inside = contains_many(p, pts, 1e-6)
        if not inside.all():
            sys.stderr.write(f"warning: {int((~inside).sum())} points lie outside the polytope\n")
    Path(args.output).write_text(render_svg(pts, p))
    return 0


# ------------------------------------------------------------------ parser

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="tropiball", description="Tropical polytopes: balls, sampling and volume.")
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def simple(name, fn, help_):
        sp = sub.add_parser(name, help=help_)
        sp.add_argument("file", help="polytope JSON file")
        sp.add_argument("-o", "--output", help="write result here instead of stdout")
        sp.set_defaults(func=fn)
        return sp

    simple("tdet", cmd_tdet, "tropical determinant of the vertex matrix")
    simple("hrep", cmd_hrep, "Kleene star and inequalities of a simplex")
    simple("maxball", cmd_maxball, "maximum inscribed ball")
    simple("minball", cmd_minball, "minimum enclosing ball")
    simple("pseudo", cmd_pseudo, "pseudo-vertices of a simplex trunk")

    def stochastic(sp):
        sp.add_argument("--seed", type=int, required=True)
        sp.add_argument("--burn-in", type=int, default=DEFAULT_BURN_IN)
        sp.add_argument("--manifest", help="run manifest path (default: <output>.manifest.json)")

    sp = simple("volume", cmd_volume, "Monte-Carlo volume estimate")
    sp.add_argument("--samples", "-I", type=int, required=True)
    sp.add_argument("--thin", type=int, default=1)
    sp.add_argument("--round", action="store_true", help="sample the ball around the trunk (simplex only)")
    sp.add_argument("--sampler", choices=("har", "direct"), default="har")
    sp.add_argument("--chains", type=int, default=1)
    stochastic(sp)

    sp = simple("cover", cmd_cover, "non-overlapping simplex cover with weights")
    sp.add_argument("--samples", "-I", type=int, required=True)
    stochastic(sp)

    sp = simple("sample", cmd_sample, "uniform points of the trunk as CSV")
    sp.add_argument("--points", "-J", type=int, required=True)
    sp.add_argument("--thin", type=int, default=1)
    sp.add_argument("--cover", help="cover JSON from the 'cover' command")
    sp.add_argument("--cover-samples", type=int, default=10000,
                    help="ball samples used to build a cover when none is given")
    stochastic(sp)

    sp = sub.add_parser("plot", help="SVG scatter of a sample (e=3)")
    sp.add_argument("points_file", help="CSV of points")
    sp.add_argument("--polytope", help="polytope JSON whose edges are drawn")
    sp.add_argument("-o", "--output", required=True)
    sp.set_defaults(func=cmd_plot)

    sp = sub.add_parser("replay", help="rerun a stochastic command from its manifest")
    sp.add_argument("manifest_file")
    sp.add_argument("-o", "--output")
    sp.set_defaults(func=cmd_replay)
    return ap


def _fail(kind: str, message: str, code: int) -> int:
    sys.stderr.write(json.dumps({"error": kind, "message": message}) + "\n")
    return code


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        return args.func(args)
    except UsageError as exc:
        return _fail("usage", str(exc), 2)
    except InputError as exc:
        return _fail("input", str(exc), 1)
    except TropicalError as exc:
        return _fail(type(exc).__name__, str(exc), 1)
    except ValueError as exc:
        return _fail("value", str(exc), 1)
