"""Scenario-driven command line producing machine-readable reports.

Subcommands: ``list-examples``, ``check``, ``assemble``, ``extract``,
``mutate-check``. A scenario is a JSON document naming a catalog example
(or inline data), the suites to run, sample counts, seeds, the
finite-difference step and tolerances. Reports are single JSON documents
with a fixed key order and decimal numbers printed to 12 significant
digits, so identical scenarios produce byte-identical files; wall-clock
timing goes to stdout only.

Exit codes: 0 all checks passed, 1 some check failed, 2 usage/build error.
"""

import argparse
import json
import os
import sys
import time

import numpy as np

from . import catalog, matched, ruth as ruth_mod
from .auth import check_auth
from .groupmodel import GroupSampler, SmoothMap, sample_elements, CHARTS
from .liecore import LieAlgebra, check_lie_algebra
from .matched import (
    LaGroup,
    assemble_la_group,
    build_auth,
    check_matched_pair,
    derive_core_bracket,
    derived_structures,
    extract_matched_pair,
    verify_morphisms,
)
from .numkit import InvalidInputError, svd_subspaces
from .ruth import check_ruth, groupoid_axiom_suite, induced_actions, isotropy_check, orbit_membership

SUITES = ("ruth", "groupoid", "auth", "matched", "morphisms", "derived", "orbit", "isotropy")

FD_BACKED = {
    ("matched", "axiom-1-core-bracket"),
    ("matched", "axiom-2-auth"),
    ("matched", "axiom-3-unit-equivariance"),
    ("matched", "axiom-5-side-flatness"),
    ("matched", "axiom-7-mixed-commutation"),
    ("matched", "axiom-8-maurer-cartan"),
    ("morphisms", "target-rel-core"),
    ("morphisms", "target-rel-units"),
    ("morphisms", "anchor-rel-core"),
    ("morphisms", "anchor-rel-units"),
    ("morphisms", "mult-M01"),
    ("morphisms", "mult-M02"),
    ("morphisms", "mult-M11"),
    ("morphisms", "mult-M12"),
    ("morphisms", "mult-M22"),
}


def _fmt(value):
    """Serialize to JSON with deterministic 12-significant-digit decimals."""
    if isinstance(value, dict):
        return "{" + ", ".join(f"{json.dumps(str(k))}: {_fmt(v)}" for k, v in value.items()) + "}"
    if isinstance(value, (list, tuple)):
        return "[" + ", ".join(_fmt(v) for v in value) + "]"
    if isinstance(value, bool) or value is None:
        return json.dumps(value)
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        v = float(value)
        if v != v or v in (float("inf"), float("-inf")):
            return json.dumps(str(v))
        return format(v, ".12g")
    if isinstance(value, np.ndarray):
        return _fmt(value.tolist())
    return json.dumps(str(value))


def write_report(report, path):
    text = _fmt(report) + "\n"
    if path:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    return text


def load_scenario(path):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            raw = fh.read()
        return json.loads(raw)
    except FileNotFoundError:
        raise InvalidInputError(f"scenario file not found: {path}")
    except json.JSONDecodeError as exc:
        raise InvalidInputError(f"malformed scenario {path}: line {exc.lineno}: {exc.msg}")


def build_from_scenario(scenario):
    ex_spec = scenario.get("example")
    if ex_spec is None:
        raise InvalidInputError("scenario missing 'example'")
    if "inline" in ex_spec:
        return _build_inline(ex_spec["inline"], scenario.get("seed", 0))
    spec = catalog.ExampleSpec(
        ex_spec.get("family", ""), dict(ex_spec.get("params", {})), int(ex_spec.get("seed", scenario.get("seed", 0)))
    )
    return catalog.build_example(spec)


def _build_inline(data, seed):
    """Inline scenarios: structure constants plus structural-map matrices.

    Supported named map family: 'trivial' (identity quasi-actions, zero
    curvatures, zero anchor tensor).
    """
    group = data.get("group", "line")
    if group not in CHARTS:
        raise InvalidInputError(f"inline group must be one of {sorted(CHARTS)}")
    maps = data.get("maps", "trivial")
    if maps != "trivial":
        raise InvalidInputError("inline examples support the 'trivial' map family only")
    chart = CHARTS[group]()
    h_c = np.asarray(data.get("h_c"), dtype=float)
    halg = LieAlgebra(h_c.shape[0], h_c, name="inline-h")
    rep = check_lie_algebra(halg)
    if not rep["pass"]:
        raise InvalidInputError(
            f"inline unit algebra is not Lie: antisymmetry {rep['antisymmetry']:.2e}, "
            f"jacobi {rep['jacobi']:.2e}"
        )
    hd = halg.dim
    partial = np.asarray(data.get("partial"), dtype=float)
    k = partial.shape[1]
    rho_e = np.asarray(data.get("rho_e", np.zeros((chart.dim, k))), dtype=float)
    from .ruth import Ruth

    eye_h, eye_k = np.eye(hd), np.eye(k)
    ruth = Ruth(
        chart,
        hd,
        k,
        partial,
        SmoothMap(1, (hd, hd), lambda g: eye_h, "deltaH"),
        SmoothMap(1, (k, k), lambda g: eye_k, "deltaK"),
        SmoothMap(2, (k, hd), lambda g, h: np.zeros((k, hd)), "omega"),
    )
    mp = matched.MatchedPair(
        ruth=ruth,
        rho_e=rho_e,
        alpha=SmoothMap(1, (chart.dim, hd), lambda g: np.zeros((chart.dim, hd)), "alpha"),
        ell_e=np.zeros((hd, k, k)),
        omega=SmoothMap(1, (k, hd, hd), lambda g: np.zeros((k, hd, hd)), "omega"),
        h_algebra=halg,
        name="inline",
    )
    spec = catalog.ExampleSpec("inline", dict(data), seed)
    return catalog.BuiltExample(mp, spec, float(data.get("radius", 1.0)))


def _threshold(suite, name, tol_free, tol_fd):
    return tol_fd if (suite, name) in FD_BACKED or suite == "auth" else tol_free


def run_suites(built, suites, samples_n, seed, fd_step, tol_free, tol_fd):
    mp = built.mp
    samp = built.samples(samples_n, seed)
    entries = []

    def add(suite, raw_entries):
        for e in raw_entries:
            thr = _threshold(suite, e["name"], tol_free, tol_fd)
            entries.append(
                {
                    "suite": suite,
                    "name": e["name"],
                    "anchor": e["law"],
                    "max_residual": float(e["residual"]),
                    "threshold": thr,
                    "pass": bool(e["residual"] <= thr),
                    "worst_sample": e.get("worst", ""),
                }
            )

    lg = None
    for suite in suites:
        if suite == "ruth":
            add("ruth", check_ruth(mp.ruth, samp, pair_cap=25, triple_cap=40))
        elif suite == "groupoid":
            add("groupoid", groupoid_axiom_suite(mp.ruth, samp, seed=seed, pair_cap=25, triple_cap=40))
        elif suite == "auth":
            core = derive_core_bracket(mp, fd_step)
            add("auth", check_auth(build_auth(mp, fd_step, core=core), samp, h=fd_step))
        elif suite == "matched":
            add("matched", check_matched_pair(mp, samp, h=fd_step, pair_cap=9))
        elif suite == "morphisms":
            lg = lg if lg is not None else LaGroup(mp, h=fd_step)
            add("morphisms", verify_morphisms(lg, samp, h=fd_step, pair_cap=9))
        elif suite == "derived":
            iso_pts = [("sample-1", samp[1] if len(samp) > 1 else samp[0], None)]
            ds = derived_structures(mp, h=fd_step, tol=tol_free, isotropy_points=iso_pts)
            raw = []
            for label, rep in (("isotropy-2-algebra", ds["lie2_report"]), ("kernel-crossed-module", ds["kerD_report"])):
                worst = max(v for kk, v in rep.items() if isinstance(v, float))
                raw.append({"name": label, "law": f"derived/{label}", "residual": worst, "worst": ""})
            bf = ds["butterfly_report"]
            raw.append(
                {
                    "name": "butterfly",
                    "law": "derived/butterfly-exactness",
                    "residual": 0.0 if bf["pass"] else 1.0,
                    "worst": f"ranks defects {bf['rank_defects']}, V dim {bf['v_dim']}",
                }
            )
            for label, rep in ds["isotropy"].items():
                if rep.get("status") == "not-checked":
                    continue
                raw.append(
                    {
                        "name": f"isotropy-algebra-{label}",
                        "law": "derived/twisted-isotropy-jacobi",
                        "residual": max(rep.get("twisted-jacobi", 0.0), rep.get("values-in-kernel", 0.0)),
                        "worst": str(rep.get("worst-triple", "")),
                    }
                )
            add("derived", raw)
        elif suite == "orbit":
            rng = np.random.default_rng(seed)
            y = rng.normal(size=mp.h_dim)
            z = rng.normal(size=mp.k_dim)
            target = mp.ruth.deltaH(samp[-1]) @ y + mp.ruth.partial @ z if mp.h_dim else y
            res = orbit_membership(mp.ruth, y, target, samp, tol=tol_free)
            add(
                "orbit",
                [
                    {
                        "name": "orbit-witness",
                        "law": "orbit/constructive-membership",
                        "residual": res["residual"] if res["member"] else 1.0,
                        "worst": f"witness sample {res['witness_index']}",
                    }
                ],
            )
        elif suite == "isotropy":
            raw = []
            for label, y, Z in built.isotropy:
                raw.extend(isotropy_check(mp.ruth, y, Z, samp, tol=tol_free, pair_cap=25))
            if raw:
                add("isotropy", raw)
        else:
            raise InvalidInputError(f"unknown suite {suite!r}; known: {SUITES}")
    return entries


def _scenario_echo(scenario, path):
    return {
        "path": os.path.basename(path) if path else "",
        "example": scenario.get("example", {}),
        "suites": scenario.get("suites", []),
        "samples": scenario.get("samples", 5),
        "seed": scenario.get("seed", 0),
        "fd_step": scenario.get("fd_step", 1e-4),
        "tol": scenario.get("tol", None),
    }


def cmd_check(args):
    scenario = load_scenario(args.scenario)
    built = build_from_scenario(scenario)
    suites = scenario.get("suites", ["ruth", "groupoid", "matched"])
    bad = [s for s in suites if s not in SUITES]
    if bad:
        raise InvalidInputError(f"unknown suites {bad}; known: {SUITES}")
    samples_n = int(args.samples or scenario.get("samples", 5))
    seed = int(args.seed if args.seed is not None else scenario.get("seed", 0))
    fd_step = float(args.fd_step or scenario.get("fd_step", 1e-4))
    tol_free, tol_fd = _tolerances(args, scenario)
    t0 = time.time()
    entries = run_suites(built, suites, samples_n, seed, fd_step, tol_free, tol_fd)
    overall = all(e["pass"] for e in entries)
    report = {
        "scenario": _scenario_echo(scenario, args.scenario),
        "entries": entries,
        "overall_pass": overall,
    }
    path = args.report or scenario.get("report_path")
    text = write_report(report, path)
    if not path:
        sys.stdout.write(text)
    print(f"{'PASS' if overall else 'FAIL'}: {sum(e['pass'] for e in entries)}/{len(entries)} checks "
          f"in {time.time() - t0:.2f}s", file=sys.stderr)
    return 0 if overall else 1


def _tolerances(args, scenario):
    tol = args.tol if args.tol is not None else scenario.get("tol")
    if tol is None:
        env = os.environ.get("LAFORGE_TOL")
        tol = float(env) if env else None
    tol_free = float(tol) if tol is not None else 1e-9
    tol_fd = float(scenario.get("fd_tol", args.fd_tol if args.fd_tol is not None else 1e-5))
    if tol is not None:
        tol_fd = max(tol_fd, tol_free)
    return tol_free, tol_fd


def cmd_list_examples(args):
    listing = catalog.list_examples()
    text = _fmt({"families": listing, "mutations": sorted(catalog.MUTATIONS)}) + "\n"
    sys.stdout.write(text)
    return 0


def cmd_mutate_check(args):
    scenario = load_scenario(args.scenario)
    built = build_from_scenario(scenario)
    if not args.mutation:
        raise InvalidInputError("mutate-check requires --mutation")
    magnitude = float(args.magnitude or 0.0)
    mutated, meta = catalog.mutate(built.mp, args.mutation, magnitude)
    built.mp = mutated
    suites = [meta["suite"]]
    samples_n = int(args.samples or scenario.get("samples", 5))
    seed = int(args.seed if args.seed is not None else scenario.get("seed", 0))
    fd_step = float(args.fd_step or scenario.get("fd_step", 1e-4))
    tol_free, tol_fd = _tolerances(args, scenario)
    entries = run_suites(built, suites, samples_n, seed, fd_step, tol_free, tol_fd)
    overall = all(e["pass"] for e in entries)
    report = {
        "scenario": _scenario_echo(scenario, args.scenario),
        "mutation": {"name": meta["name"], "magnitude": meta["magnitude"],
                     "expected_suite": meta["suite"], "expected_entry": meta["entry"]},
        "entries": entries,
        "overall_pass": overall,
    }
    path = args.report or scenario.get("report_path")
    text = write_report(report, path)
    if not path:
        sys.stdout.write(text)
    return 0 if overall else 1


def cmd_assemble(args):
    scenario = load_scenario(args.scenario)
    built = build_from_scenario(scenario)
    samples_n = int(args.samples or scenario.get("samples", 5))
    seed = int(args.seed if args.seed is not None else scenario.get("seed", 0))
    fd_step = float(args.fd_step or scenario.get("fd_step", 1e-4))
    tol_free, tol_fd = _tolerances(args, scenario)
    samp = built.samples(samples_n, seed)
    axioms = check_matched_pair(built.mp, samp, h=fd_step, pair_cap=9)
    failed = [e["name"] for e in axioms if e["residual"] > tol_fd]
    if failed:
        print(f"refusing to assemble; failing axioms: {', '.join(failed)}", file=sys.stderr)
        return 1
    entries = run_suites(built, ["groupoid", "morphisms"], samples_n, seed, fd_step, tol_free, tol_fd)
    overall = all(e["pass"] for e in entries)
    report = {
        "scenario": _scenario_echo(scenario, args.scenario),
        "entries": entries,
        "overall_pass": overall,
    }
    path = args.report or scenario.get("report_path")
    text = write_report(report, path)
    if not path:
        sys.stdout.write(text)
    return 0 if overall else 1


def _parse_splitting(built, flag):
    mp = built.mp
    k, hd = mp.k_dim, mp.h_dim
    if flag in (None, "canonical"):
        return None
    if not flag.startswith("shifted:"):
        raise InvalidInputError("splitting flag must be 'canonical' or 'shifted:<z-vector>'")
    try:
        z0 = np.array([float(v) for v in flag.split(":", 1)[1].split(",")])
    except ValueError:
        raise InvalidInputError("shifted splitting vector must be comma-separated numbers")
    if z0.shape != (k,):
        raise InvalidInputError(f"shift vector must have the core dimension {k}")
    n = mp.chart.matrix_size
    eye = np.eye(n)

    def c_fn(g):
        coord = float(g[0, -1] - eye[0, -1]) if n > 1 else 0.0
        out = np.zeros((k, hd))
        if hd:
            out[:, 0] = coord * z0
        return out

    return SmoothMap(1, (k, hd), c_fn, name="shifted-cli")


def cmd_extract(args):
    scenario = load_scenario(args.scenario)
    built = build_from_scenario(scenario)
    samples_n = int(args.samples or scenario.get("samples", 5))
    seed = int(args.seed if args.seed is not None else scenario.get("seed", 0))
    fd_step = float(args.fd_step or scenario.get("fd_step", 1e-4))
    samp = built.samples(samples_n, seed)
    lg = LaGroup(built.mp, h=fd_step)
    sigma = _parse_splitting(built, args.splitting)
    extracted = extract_matched_pair(lg, sigma, h=fd_step)
    base = extract_matched_pair(lg, None, h=fd_step)

    tables = []
    for i, g in enumerate(samp):
        tables.append(
            {
                "sample": i,
                "alpha": extracted.alpha(g),
                "omega": extracted.omega(g),
                "ell": matched.derive_ell(extracted, fd_step)(g),
            }
        )
    # round trip: re-assemble the extracted datum and extract again
    lg2 = LaGroup(extracted, h=fd_step)
    back = extract_matched_pair(lg2, None, h=fd_step)
    rt_res = 0.0
    for g in samp:
        for a, b in (
            (back.alpha(g), extracted.alpha(g)),
            (back.omega(g), extracted.omega(g)),
            (back.ruth.deltaH(g), extracted.ruth.deltaH(g)),
            (back.ruth.deltaK(g), extracted.ruth.deltaK(g)),
        ):
            if a.size:
                rt_res = max(rt_res, float(np.max(np.abs(a - b))))
    if back.rho_e.size:
        rt_res = max(rt_res, float(np.max(np.abs(back.rho_e - extracted.rho_e))))
    # reduced-anchor comparison across the two splittings, modulo img(rho_e)
    _, _, comp = svd_subspaces(built.mp.rho_e, 1e-9)
    abar = 0.0
    for g in samp:
        if comp.dim and built.mp.h_dim:
            abar = max(abar, float(np.max(np.abs(comp.vectors.T @ (extracted.alpha(g) - base.alpha(g))))))
    report = {
        "scenario": _scenario_echo(scenario, args.scenario),
        "splitting": args.splitting or "canonical",
        "rho_e": extracted.rho_e,
        "ell_e": extracted.ell_e,
        "tables": tables,
        "round_trip_residual": rt_res,
        "alpha_bar_agreement": abar,
    }
    path = args.report or scenario.get("report_path")
    text = write_report(report, path)
    if not path:
        sys.stdout.write(text)
    ok = rt_res <= 1e-8 and abar <= 1e-8
    return 0 if ok else 1


def make_parser():
    p = argparse.ArgumentParser(prog="laforge", description=__doc__)
    sub = p.add_subparsers(dest="command")
    for name, fn in (
        ("list-examples", cmd_list_examples),
        ("check", cmd_check),
        ("assemble", cmd_assemble),
        ("extract", cmd_extract),
        ("mutate-check", cmd_mutate_check),
    ):
        sp = sub.add_parser(name)
        sp.set_defaults(fn=fn)
        if name == "list-examples":
            continue
        sp.add_argument("--scenario", required=True)
        sp.add_argument("--tol", type=float, default=None)
        sp.add_argument("--fd-tol", dest="fd_tol", type=float, default=None)
        sp.add_argument("--fd-step", dest="fd_step", type=float, default=None)
        sp.add_argument("--samples", type=int, default=None)
        sp.add_argument("--seed", type=int, default=None)
        sp.add_argument("--report", default=None)
        if name == "mutate-check":
            sp.add_argument("--mutation", default=None)
            sp.add_argument("--magnitude", type=float, default=0.0)
        if name == "extract":
            sp.add_argument("--splitting", default="canonical")
    return p


def run(argv):
    parser = make_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    if not getattr(args, "command", None):
        parser.print_help()
        return 2
    try:
        return args.fn(args)
    except InvalidInputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (OSError, ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def main():
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
