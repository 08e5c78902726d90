"""toric-hms: mirror symmetry checks for the toric del Pezzo surfaces.

Every command writes one JSON document to stdout and a short human summary
to stderr.  Exit status: 0 success, 1 a check or verification failed,
2 bad usage or unreadable input.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path

from . import __version__
from .algebra import check_directed_associativity, diff_algebras
from .catalog import SURFACES, Fan, euler_characteristic, load_surface, newton_polytope, normalized_volume, \
    validate_fan
from .errors import HMSError, IncompleteSearchError, InvalidConfigError, NotFoundError, ShapeError
from .exceptional import appendix_tables, build_blowup_algebra
from .fukaya import build_category, check_a_infinity
from .jsonio import dumps
from .potential import (
    NewtonOptions,
    build_superpotential,
    default_coefficients,
    find_critical_points,
    index_vanishing_paths,
    morse_report,
    parse_coefficients,
    principal_arg,
    trace_branch_points,
)
from .render import RenderSpec, certificate_labels, render_torus, render_trajectory
from .resources import load_config
from .solver import SearchExhaustedError, SearchSpace, dimension_matrix, solve_classes, solve_offsets_dots
from .torus import config_lifts, enumerate_triangles, format_point, grading_lifts, maslov_index, \
    validate_config
from .verifier import Certificate, SearchStats, find_signed_equivalence, verify_certificate

# the only surface with a built exceptional algebra
HMS_SURFACES = ("Bl3P2",)


class UsageError(Exception):
    pass


def _emit(doc, path: str | None = None) -> None:
    text = dumps(doc) + "\n"
    sys.stdout.write(text)
    if path:
        Path(path).write_text(text, encoding="utf-8")


def _say(msg: str) -> None:
    print(msg, file=sys.stderr)


def _write_text(path: str, text: str) -> None:
    Path(path).write_text(text, encoding="utf-8")


def _config(source: str):
    try:
        return load_config(source)
    except FileNotFoundError:
        raise UsageError(f"config file {source!r} not found") from None
    except (json.JSONDecodeError, KeyError, ValueError) as exc:
        raise UsageError(f"cannot read config {source!r}: {exc}") from None


def _surface(name: str) -> Fan:
    try:
        return load_surface(name)
    except NotFoundError as exc:
        raise UsageError(exc.args[0]) from None


def _hms_surface(name: str) -> None:
    if name not in HMS_SURFACES:
        raise UsageError(f"no exceptional algebra is built for {name!r}; supported: {', '.join(HMS_SURFACES)}")


def _coefficients(args, fan: Fan):
    if args.coeffs:
        return parse_coefficients(args.coeffs)
    return default_coefficients(fan.name)


# -- catalog and fans -----------------------------------------------------------


def cmd_catalog_list(args) -> int:
    docs = []
    for name in SURFACES:
        fan = load_surface(name)
        docs.append({
            **fan.to_json(),
            "euler_characteristic": euler_characteristic(fan),
            "normalized_volume": normalized_volume(newton_polytope(fan)),
        })
    _emit(docs)
    _say(f"{len(docs)} surfaces: {', '.join(SURFACES)}")
    return 0


def cmd_fan_validate(args) -> int:
    if Path(args.name).is_file():
        try:
            fan = Fan.from_json(json.loads(Path(args.name).read_text(encoding="utf-8")))
        except (json.JSONDecodeError, KeyError, ValueError) as exc:
            raise UsageError(f"cannot read fan {args.name!r}: {exc}") from None
    else:
        fan = _surface(args.name)
    rep = validate_fan(fan)
    _emit(rep.to_json())
    _say(f"{fan.name}: " + ("all checks pass" if rep.ok else "; ".join(rep.failures)))
    return 0 if rep.ok else 1


# -- mirror potential -------------------------------------------------------------


def cmd_critical_points(args) -> int:
    fan = _surface(args.name)
    coeffs = _coefficients(args, fan)
    w = build_superpotential(fan, coeffs)
    opts = NewtonOptions(seed=args.seed, starts=args.starts)
    try:
        pts = find_critical_points(w, opts)
        status = 0
    except IncompleteSearchError as exc:
        pts = exc.partial
        status = 1
        _say(str(exc))
    _emit([dict(index=k, **p.to_json()) for k, p in enumerate(pts)], args.json)
    rep = morse_report(pts)
    _say(f"{fan.name}: {len(pts)} critical points (expected {w.newton_volume()}); "
         f"min |det H| = {rep.min_abs_hessian:.3e}, min value gap = "
         f"{rep.min_separation if rep.min_separation is None else format(rep.min_separation, '.3e')}; "
         f"Morse conditions {'hold' if rep.ok else 'FAIL'}")
    return status


def cmd_branch_trace(args) -> int:
    fan = _surface(args.name)
    if len(fan.rays) != 6:
        raise UsageError("branch tracing needs the six-term potential; only Bl3P2 has one")
    coeffs = _coefficients(args, fan)
    w = build_superpotential(fan, coeffs)
    try:
        pts = find_critical_points(w)
    except IncompleteSearchError as exc:
        _say(str(exc))
        return 1
    paths, ties = index_vanishing_paths([p.value for p in pts])
    if ties:
        _say("warning: critical values with equal argument ("
             + ", ".join(f"{a}~{b}" for a, b in ties)
             + "); straight paths overlap, indexed by modulus within a tie")
    if not 1 <= args.path <= len(paths):
        raise UsageError(f"--path must be in 1..{len(paths)}")
    path = paths[args.path - 1]
    traj = trace_branch_points(w, path, steps=args.steps)
    doc = {
        "surface": fan.name,
        "coefficients": [[c.real, c.imag] for c in coeffs],
        "path": {"index": path.index, "target": [path.target.real, path.target.imag],
                 "argument": principal_arg(path.target)},
        "ties": [list(t) for t in ties],
        "trajectory": traj.to_json(),
    }
    _emit(doc, args.json)
    if args.svg:
        _write_text(args.svg, render_trajectory(traj, RenderSpec(size=args.size), f"{fan.name} path {path.index}"))
    _say(f"path {path.index} -> {path.target:.6g}: {len(traj.samples)} samples, "
         f"closest pair {traj.min_distance:.3e}, other pairs >= {traj.other_min_distance:.3e}, "
         f"collision {'yes' if traj.collision_flag else 'no'}")
    return 0 if traj.collision_flag else 1


# -- exceptional algebra -----------------------------------------------------------


def _algebra(args):
    return appendix_tables() if getattr(args, "appendix", False) else build_blowup_algebra()


def cmd_algebra_build(args) -> int:
    a = _algebra(args)
    _emit(a.to_json(), args.json)
    _say(f"{a.n} objects, total dimension {a.total_dimension()}")
    return 0


def cmd_algebra_diff(args) -> int:
    rep = diff_algebras(build_blowup_algebra(), appendix_tables())
    _emit(rep.to_json())
    for m in rep.mismatches:
        _say(f"{m.objects}: {m.left} * {m.right}: formula {m.expected} vs tables {m.actual}")
    _say(f"{len(rep.mismatches)} mismatching cell(s)")
    return 0


def cmd_algebra_check(args) -> int:
    a = _algebra(args)
    bad = check_directed_associativity(a)
    _emit({"ok": not bad, "violations": [v.to_json() for v in bad]})
    _say(f"{len(bad)} associativity violation(s)")
    return 0 if not bad else 1


# -- Fukaya side -------------------------------------------------------------------


def cmd_fukaya_validate(args) -> int:
    cfg = _config(args.config)
    rep = validate_config(cfg)
    g = grading_lifts(cfg)
    doc = {
        **rep.to_json(),
        "grading": {"feasible": g.feasible, "lifts": list(g.lifts) if g.lifts else None,
                    "witness": [list(w) for w in g.witness] if g.witness else None},
    }
    if rep.ok and g.feasible:
        lifts = config_lifts(cfg)
        doc["maslov"] = [
            {"pair": [i + 1, j + 1], "points": len(cfg.hom_points(i, j)), "index": maslov_index(lifts[i], lifts[j])}
            for i in range(cfg.n) for j in range(i + 1, cfg.n) if cfg.hom_points(i, j)
        ]
    _emit(doc)
    ok = rep.ok and g.feasible
    _say("configuration valid" if ok else "; ".join(f["message"] for f in rep.failures) or "grading infeasible")
    return 0 if ok else 1


def cmd_fukaya_build(args) -> int:
    cfg = _config(args.config)
    fp = build_category(cfg)
    _emit(fp.algebra.to_json(), args.json)
    bad = check_a_infinity(fp)
    _say(f"{fp.algebra.n} objects, total dimension {fp.algebra.total_dimension()}, "
         f"{len(bad)} A-infinity violation(s)")
    return 0 if not bad else 1


def _point_index(value: str, pair: tuple[int, int], fp, cert: Certificate | None) -> int:
    try:
        return int(value)
    except ValueError:
        pass
    if cert is None:
        raise UsageError(f"basis label {value!r} needs a certificate; none exists for this config")
    for k, (lab, _) in enumerate(cert.maps.get(pair, ())):
        if lab == value:
            return k
    raise UsageError(f"no point of hom{pair} maps to {value!r}")


def _certificate(fp):
    return find_signed_equivalence(fp.algebra, build_blowup_algebra())


def cmd_fukaya_triangles(args) -> int:
    cfg = _config(args.config)
    try:
        triple = tuple(int(x) for x in args.triple.split(","))
    except ValueError:
        raise UsageError("--triple takes i,j,k") from None
    if len(triple) != 3 or not (1 <= triple[0] < triple[1] < triple[2] <= cfg.n):
        raise UsageError(f"--triple needs 1 <= i < j < k <= {cfg.n}")
    i, j, k = triple
    fp = cert = None
    if not (args.p1.lstrip("-").isdigit() and args.p2.lstrip("-").isdigit()):
        fp = build_category(cfg)
        cert = _certificate(fp)
    p1 = _point_index(args.p1, (i, j), fp, cert)
    p2 = _point_index(args.p2, (j, k), fp, cert)
    b01, b12, b02 = cfg.hom_points(i - 1, j - 1), cfg.hom_points(j - 1, k - 1), cfg.hom_points(i - 1, k - 1)
    if not (b01 and b12 and b02):
        raise UsageError(f"two of the cycles {triple} are parallel")
    if not (0 <= p1 < len(b01) and 0 <= p2 < len(b12)):
        raise UsageError(f"--p1 must be in 0..{len(b01) - 1} and --p2 in 0..{len(b12) - 1}")
    groups, ecert = enumerate_triangles(cfg, (i - 1, j - 1, k - 1), p1, p2, args.radius_scale)
    out_groups = []
    for o, patches in groups.items():
        entry = {
            "output": o,
            "point": format_point(b02[o]),
            "coefficient": sum(p.sign for p in patches),
            "triangles": [
                {"vertices": [format_point(v) for v in p.vertices], "dots": p.dot_count, "sign": p.sign}
                for p in patches
            ],
        }
        if cert is not None:
            lab, s = cert.maps[(i, k)][o]
            entry["label"] = lab
            entry["label_sign"] = s
        out_groups.append(entry)
    doc = {
        "triple": list(triple),
        "p1": {"index": p1, "point": format_point(b01[p1])},
        "p2": {"index": p2, "point": format_point(b12[p2])},
        "groups": out_groups,
        "certificate": {"covering_radius": ecert.covering_radius, "inradius_per_step": ecert.inradius_per_step,
                        "max_step": ecert.max_step},
    }
    if cert is not None:
        for key, pair, idx in (("p1", (i, j), p1), ("p2", (j, k), p2)):
            lab, s = cert.maps[pair][idx]
            doc[key]["label"] = lab
            doc[key]["label_sign"] = s
    _emit(doc)
    n = sum(len(g["triangles"]) for g in out_groups)
    _say(f"{n} triangle(s) over {len(out_groups)} output point(s)")
    return 0


# -- solver, verifier, rendering ------------------------------------------------------


def cmd_solve_config(args) -> int:
    _hms_surface(args.surface)
    target = build_blowup_algebra()
    space = SearchSpace(class_bound=args.bound, max_denominator=args.max_denominator, node_budget=args.budget)
    dims = dimension_matrix(target)
    tuples = solve_classes(dims, space)
    _say(f"{len(tuples)} class tuple(s) up to unimodular equivalence")
    reports = []
    for classes in tuples:
        try:
            cfg = solve_offsets_dots(classes, target, space)
        except SearchExhaustedError as exc:
            reports.append({"classes": [list(c) for c in classes], **exc.report.to_json()})
            continue
        _emit(cfg.to_json(), args.out)
        _say(f"found a configuration with classes {[list(c) for c in classes]}")
        return 0
    _emit({"found": False, "searched": reports})
    _say("search exhausted")
    return 1


def cmd_verify_hms(args) -> int:
    _hms_surface(args.surface)
    t0 = time.perf_counter()
    cfg = _config(args.config)
    try:
        fp = build_category(cfg)
    except InvalidConfigError as exc:
        _emit({"ok": False, "reason": "invalid config", "message": str(exc)})
        _say(f"invalid configuration: {exc}")
        return 1
    target = build_blowup_algebra()
    stats = SearchStats()
    try:
        cert = find_signed_equivalence(fp.algebra, target, stats)
    except ShapeError as exc:
        _emit({"ok": False, "reason": "shape", "message": str(exc)})
        _say(str(exc))
        return 1
    bad = check_a_infinity(fp)
    result = verify_certificate(fp.algebra, target, cert) if cert is not None else None
    ok = bool(result and result.ok and not bad)
    doc = {
        "ok": ok,
        "surface": args.surface,
        "a_infinity_violations": len(bad),
        "search": stats.to_json(),
        "verification": result.to_json() if result else None,
        "certificate": cert.to_json() if cert else None,
    }
    _emit(doc)
    if cert is not None and args.emit_certificate:
        _write_text(args.emit_certificate, dumps(cert.to_json()) + "\n")
    _say(("certificate verified" if ok else "no verified certificate")
         + f" ({stats.nodes} search nodes, {time.perf_counter() - t0:.2f} s)")
    return 0 if ok else 1


def cmd_render_torus(args) -> int:
    cfg = _config(args.config)
    labels = None
    if args.certificate or args.label:
        fp = build_category(cfg)
        if args.certificate:
            try:
                cert = Certificate.from_json(json.loads(Path(args.certificate).read_text(encoding="utf-8")))
            except (OSError, json.JSONDecodeError, KeyError, ValueError) as exc:
                raise UsageError(f"cannot read certificate: {exc}") from None
        else:
            cert = _certificate(fp)
            if cert is None:
                _say("no certificate exists for this configuration")
                return 1
        labels = certificate_labels(fp.points, cert.maps)
    svg = render_torus(cfg, RenderSpec(size=args.size), labels)
    _write_text(args.svg, svg)
    doc = {
        "svg": args.svg,
        "cycles": cfg.n,
        "punctures": len(cfg.punctures),
        "dots": sum(len(d) for d in cfg.dots),
        "labels": sum(len(v) for v in (labels or {}).values()),
    }
    _emit(doc)
    _say(f"wrote {args.svg}")
    return 0


# -- parser -----------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="toric-hms", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    top = p.add_subparsers(dest="group", required=True)

    g = top.add_parser("catalog", help="the five toric del Pezzo fans").add_subparsers(dest="cmd", required=True)
    g.add_parser("list").set_defaults(fn=cmd_catalog_list)

    g = top.add_parser("fan", help="fan checks").add_subparsers(dest="cmd", required=True)
    q = g.add_parser("validate", help="primitivity, completeness, smoothness, Fano")
    q.add_argument("name", help="catalog name or a fan JSON file")
    q.set_defaults(fn=cmd_fan_validate)

    g = top.add_parser("mirror", help="the mirror superpotential").add_subparsers(dest="cmd", required=True)
    q = g.add_parser("critical-points")
    q.add_argument("name")
    q.add_argument("--coeffs", help="re,im;re,im;... in the fan's generator order")
    q.add_argument("--seed", type=int, default=0)
    q.add_argument("--starts", type=int, default=2000)
    q.add_argument("--json", metavar="FILE", help="also write the JSON to FILE")
    q.set_defaults(fn=cmd_critical_points)
    q = g.add_parser("branch-trace")
    q.add_argument("name")
    q.add_argument("--path", type=int, required=True, help="1-based vanishing path index")
    q.add_argument("--coeffs")
    q.add_argument("--steps", type=int, default=64)
    q.add_argument("--svg", metavar="FILE")
    q.add_argument("--size", type=int, default=480)
    q.add_argument("--json", metavar="FILE")
    q.set_defaults(fn=cmd_branch_trace)

    g = top.add_parser("algebra", help="the exceptional-collection algebra").add_subparsers(dest="cmd", required=True)
    q = g.add_parser("build")
    q.add_argument("--appendix", action="store_true", help="the published tables instead of the formulas")
    q.add_argument("--json", metavar="FILE")
    q.set_defaults(fn=cmd_algebra_build)
    g.add_parser("diff-appendix").set_defaults(fn=cmd_algebra_diff)
    q = g.add_parser("check")
    q.add_argument("--appendix", action="store_true")
    q.set_defaults(fn=cmd_algebra_check)

    g = top.add_parser("fukaya", help="the torus model").add_subparsers(dest="cmd", required=True)
    q = g.add_parser("validate")
    q.add_argument("--config", required=True, help="config JSON file or 'default'")
    q.set_defaults(fn=cmd_fukaya_validate)
    q = g.add_parser("build")
    q.add_argument("--config", required=True)
    q.add_argument("--json", metavar="FILE")
    q.set_defaults(fn=cmd_fukaya_build)
    q = g.add_parser("triangles")
    q.add_argument("--config", required=True)
    q.add_argument("--triple", required=True, help="1-based cycles i,j,k with i<j<k")
    q.add_argument("--p1", required=True, help="index into hom(i,j), or a basis label such as x1")
    q.add_argument("--p2", required=True, help="index into hom(j,k), or a basis label")
    q.add_argument("--radius-scale", type=float, default=1.0)
    q.set_defaults(fn=cmd_fukaya_triangles)

    g = top.add_parser("solve", help="search for torus configurations").add_subparsers(dest="cmd", required=True)
    q = g.add_parser("config")
    q.add_argument("--surface", required=True, choices=SURFACES)
    q.add_argument("--bound", type=int, default=4)
    q.add_argument("--max-denominator", type=int, default=24)
    q.add_argument("--budget", type=int, default=SearchSpace.node_budget)
    q.add_argument("--out", metavar="FILE")
    q.set_defaults(fn=cmd_solve_config)

    g = top.add_parser("verify", help="certify the algebra isomorphism").add_subparsers(dest="cmd", required=True)
    q = g.add_parser("hms")
    q.add_argument("--surface", required=True, choices=SURFACES)
    q.add_argument("--config", default="default")
    q.add_argument("--emit-certificate", metavar="FILE")
    q.set_defaults(fn=cmd_verify_hms)

    g = top.add_parser("render", help="SVG figures").add_subparsers(dest="cmd", required=True)
    q = g.add_parser("torus")
    q.add_argument("--config", required=True)
    q.add_argument("--svg", required=True, metavar="FILE")
    q.add_argument("--certificate", metavar="FILE", help="label intersection points from this certificate")
    q.add_argument("--label", action="store_true", help="search a certificate and label the points")
    q.add_argument("--size", type=int, default=480)
    q.set_defaults(fn=cmd_render_torus)
    return p


def run(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.fn(args)
    except UsageError as exc:
        _say(f"error: {exc}")
        return 2
    except InvalidConfigError as exc:
        _say(f"invalid configuration: {exc}")
        return 1
    except HMSError as exc:
        _say(f"error: {exc}")
        return 1


def main() -> None:
    sys.exit(run())
