"""The ``kmlat`` command-line front end.

Every subcommand first turns its arguments into a fully explicit ``inputs``
dictionary (matrices spelled out, random matrices already drawn from the
seed), then computes a ``result`` from those inputs alone.  Reports echo the
inputs, so ``kmlat replay REPORT`` reproduces a report byte for byte.

Exit status is 0 on success, 2 for bad input and 3 when a resource budget
runs out.
"""

from __future__ import annotations

import argparse
import json
import os
import random
import sys
from importlib import resources

from . import __version__
from . import coxeter as cx
from . import datum as dt
from . import descent as ds
from . import growth as gr
from . import laurent as ls
from . import roots as rt
from . import serialize as io
from .errors import (
    DegenerateSegment,
    DegreeBudgetExceeded,
    InputError,
    KMLatError,
    ResourceBudgetExceeded,
)
from .fields import GF

EXIT_OK, EXIT_INPUT, EXIT_BUDGET = 0, 2, 3

NOTES = (
    "Property (T) and cohomological finiteness are not computed; no verdict is given for them.",
)


class CLIError(InputError):
    """Input problem detected while reading arguments or files."""


# --------------------------------------------------------------- inputs


def _budget():
    raw = os.environ.get("KMLAT_BUDGET")
    if raw is None:
        return cx.DEFAULT_BUDGET
    try:
        value = int(raw)
    except ValueError:
        raise CLIError(f"KMLAT_BUDGET={raw!r} is not an integer") from None
    if value <= 0:
        raise CLIError("KMLAT_BUDGET must be positive")
    return value


def _load_json(path):
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise CLIError(f"{path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise CLIError(f"{path}: line {exc.lineno}, column {exc.colno}: {exc.msg}") from None


def _from_file(path, reader):
    obj = _load_json(path)
    try:
        return reader(obj)
    except InputError as exc:
        raise CLIError(f"{path}: {exc}") from None


def _fuchsian_r(name):
    try:
        r = int(name.split(":", 1)[1])
    except (IndexError, ValueError):
        raise CLIError(f"preset {name!r}: expected fuchsian:<r>") from None
    return r


def _preset_gcm(name):
    if name == "sl2":
        return dt.affine_a_gcm(2)
    if name in ("sl3", "a2tilde", "su3"):
        return dt.affine_a_gcm(3)
    if name.startswith("fuchsian"):
        return ds.fuchsian_gcm(_fuchsian_r(name))
    raise CLIError(f"unknown preset {name!r}")


def _gcm_input(args):
    if args.gcm and args.preset:
        raise CLIError("give either --gcm or --preset, not both")
    if args.gcm:
        return _from_file(args.gcm, io.gcm_from_json)
    if args.preset:
        return _preset_gcm(args.preset)
    raise CLIError("a matrix is required (--gcm FILE or --preset NAME)")


def _positive(name, value):
    if value is not None and value <= 0:
        raise CLIError(f"--{name} must be positive")
    return value


def _q(args, default=2):
    q = default if args.q is None else args.q
    GF.of_order(q)  # validates q as a prime power
    return q


def _root_arg(text, flag):
    if text is None:
        return None
    try:
        vec = json.loads(text)
    except json.JSONDecodeError:
        raise CLIError(f"--{flag} must be a JSON list of integers") from None
    if not isinstance(vec, list) or not all(isinstance(x, int) and not isinstance(x, bool) for x in vec):
        raise CLIError(f"--{flag} must be a JSON list of integers")
    return vec


def _point_arg(text, flag):
    if text is None:
        return None
    try:
        vec = json.loads(text)
    except json.JSONDecodeError:
        raise CLIError(f"--{flag} must be a JSON list of rationals") from None
    if not isinstance(vec, list):
        raise CLIError(f"--{flag} must be a JSON list of rationals")
    return [io.fraction_to_str(io.fraction_from_str(x)) for x in vec]


def inputs_analyze(args):
    A = _gcm_input(args)
    return {
        "gcm": io.gcm_to_json(A),
        "q": _q(args),
        "depth": _positive("depth", args.depth) or gr.DEFAULT_DEPTH,
        "degree_bound": gr.DEFAULT_DEGREE_BOUND,
        "budget": _budget(),
        "seed": args.seed,
    }


def inputs_roots(args):
    A = _gcm_input(args)
    alpha, beta = _root_arg(args.alpha, "alpha"), _root_arg(args.beta, "beta")
    if (alpha is None) != (beta is None):
        raise CLIError("--alpha and --beta go together")
    xp, xm = _point_arg(args.x_plus, "x-plus"), _point_arg(args.x_minus, "x-minus")
    if (xp is None) != (xm is None):
        raise CLIError("--x-plus and --x-minus go together")
    return {
        "gcm": io.gcm_to_json(A),
        "list_height": _positive("list-height", args.list_height),
        "height": _positive("height", args.height) or rt.DEFAULT_HEIGHT_CAP,
        "radius": _positive("radius", args.radius) or rt.DEFAULT_RADIUS,
        "alpha": alpha,
        "beta": beta,
        "x_plus": xp,
        "x_minus_image": xm,
        "budget": _budget(),
        "seed": args.seed,
    }


def inputs_twin(args):
    rng = random.Random(args.seed)
    g = h = None
    panel = args.panel
    if args.infile:
        obj = _load_json(args.infile)
        try:
            F = io.field_from_json(obj.get("field", {"p": 2, "k": 1}))
            g = io.laurent_from_json(F, obj.get("g", obj.get("matrix")))
            if obj.get("h") is not None:
                h = io.laurent_from_json(F, obj["h"])
        except InputError as exc:
            raise CLIError(f"{args.infile}: {exc}") from None
        except AttributeError:
            raise CLIError(f"{args.infile}: expected a JSON object") from None
        n = g.n
        if args.n is not None and args.n != n:
            raise CLIError(f"--n {args.n} does not match the {n}x{n} input matrix")
        if panel is None:
            panel = obj.get("panel")
    else:
        n = args.n or {"sl2": 2, "sl3": 3}.get(args.preset, 2)
        F = GF.of_order(_q(args))
        g = ls.random_element(F, n, rng)
    if n not in (2, 3):
        raise CLIError("--n must be 2 or 3")
    if args.op == "codist" and h is None:
        h = ls.random_element(F, n, rng)
    if panel is not None and not 0 <= panel < n:
        raise CLIError(f"panel type must lie in 0..{n - 1}")
    return {
        "op": args.op,
        "n": n,
        "field": io.field_to_json(F),
        "sign": args.sign,
        "g": io.laurent_to_json(g),
        "h": None if h is None else io.laurent_to_json(h),
        "panel": panel,
        "seed": args.seed,
    }


def inputs_descend(args):
    if args.form and args.preset:
        raise CLIError("give either --form or --preset, not both")
    if args.form:
        form = _from_file(args.form, lambda obj: io.form_from_json(obj, args.q))
    elif args.preset:
        name, q = args.preset, _q(args)
        if name in ("su3", "a2tilde"):
            A, perm = ds.a2_tilde_swap()
        elif name.startswith("fuchsian"):
            r = _fuchsian_r(name)
            A, perm = ds.fuchsian_gcm(r), ds.fuchsian_reflection(r)
        elif name in ("sl2", "sl3"):
            A = _preset_gcm(name)
            perm = tuple(range(A.rank))
        else:
            raise CLIError(f"unknown preset {name!r}")
        form = ds.make_form(A, perm, (), q)
    else:
        raise CLIError("a form is required (--form FILE or --preset NAME)")
    su3 = bool(args.su3 or args.preset == "su3")
    return {
        "form": io.form_to_json(form),
        "cutoff": _positive("cutoff", args.cutoff) or ds.DEFAULT_CUTOFF,
        "su3_check": su3,
        "seed": args.seed,
    }


def inputs_datum(args):
    if sum(x is not None for x in (args.datum, args.gcm, args.preset)) != 1:
        raise CLIError("give exactly one of --datum, --gcm, --preset")
    if args.datum:
        D = _from_file(args.datum, io.datum_from_json)
    elif args.gcm:
        A = _from_file(args.gcm, io.gcm_from_json)
        D = dt.adjoint(A) if args.adjoint else dt.simply_connected(A)
    elif args.preset in ("sl2", "sl3"):
        D = dt.sl_n_datum(int(args.preset[2]))
    else:
        A = _preset_gcm(args.preset)
        D = dt.adjoint(A) if args.adjoint else dt.simply_connected(A)
    return {"datum": io.datum_to_json(D), "q": _q(args), "seed": args.seed}


# --------------------------------------------------------------- results


def run_analyze(inp):
    A = io.gcm_from_json(inp["gcm"])
    series = gr.growth_coeffs(A, inp["depth"], inp["budget"], allow_truncation=True)
    rep = gr.lattice_report(series, inp["q"], A.rank)
    fit = gr.UNAVAILABLE
    if series.exhausted:
        fit = gr.RationalSeries(tuple(series.coeffs[:-1]) or (0,), (1,))
    elif not rep.truncated:
        fit = gr.fit_rational(series.coeffs, inp["degree_bound"])
    return {
        "verdict": rep.verdict,
        "partial_sum": rep.partial_sum,
        "growth_rate_bounds": list(rep.growth_rate_bounds),
        "root_test_bounds": list(rep.root_test_bounds),
        "covolume_bound": rep.covolume_bound,
        "torus_rank": A.rank,
        "depth_reached": rep.depth,
        "finite": rep.finite,
        "truncated": rep.truncated,
        "coefficients": list(rep.coeffs),
        "rational_series": fit if fit == gr.UNAVAILABLE else {
            "numerator": list(fit.numerator),
            "denominator": list(fit.denominator),
            "text": str(fit),
        },
        "coxeter_matrix": io.coxeter_to_json(cx.coxeter_of_gcm(A))["matrix"],
        "notes": list(NOTES),
    }


def _root_json(r):
    return {"vector": list(r.vector), "reflection": list(r.reflection.word)}


def run_roots(inp):
    A = io.gcm_from_json(inp["gcm"])
    out = {}
    if inp["list_height"]:
        pos = rt.roots_up_to_height(A, inp["list_height"], inp["budget"])
        out["positive_roots"] = [_root_json(r) for r in pos]
    if inp["alpha"] is not None:
        alpha, beta = rt.make_root(A, inp["alpha"]), rt.make_root(A, inp["beta"])
        verdict = rt.is_prenilpotent(A, alpha, beta, inp["radius"])
        pair = {"prenilpotent": verdict, "walls_cross": rt.walls_cross(A, alpha, beta)}
        if verdict is True:
            iv = rt.interval(A, alpha, beta, inp["height"], inp["radius"])
            lin = rt.linear_interval(A, alpha, beta, inp["height"])
            pair["interval"] = [list(r.vector) for r in iv.members]
            pair["certified"] = iv.certified
            pair["search_radius"] = iv.search_radius
            pair["linear_interval"] = [list(r.vector) for r in lin]
        out["pair"] = pair
    if inp["x_plus"] is not None:
        omega = rt.BalancedPair.from_images(
            [io.fraction_from_str(x) for x in inp["x_plus"]],
            [io.fraction_from_str(x) for x in inp["x_minus_image"]],
        )
        phi_u, phi_m = rt.phi_sets(A, omega)
        out["balanced_pair"] = {
            "phi_u": [list(r.vector) for r in phi_u],
            "phi_m": [list(r.vector) for r in phi_m],
            "counts": [len(phi_m), len(phi_u)],
        }
    return out


def run_twin(inp):
    F = io.field_from_json(inp["field"])
    g = io.laurent_from_json(F, inp["g"])
    op, n = inp["op"], inp["n"]
    if op == "bruhat":
        fac = ls.bruhat_decompose(g, inp["sign"])
        return {
            "w": list(fac.w.word),
            "affine_images": list(fac.affine.images),
            "u": io.laurent_to_json(fac.u),
            "w_hat": io.laurent_to_json(fac.w_hat),
            "b": io.laurent_to_json(fac.b),
            "recomposes": fac.recompose() == g,
            "b_in_borel": ls.in_borel(fac.b, inp["sign"]),
        }
    if op == "codist":
        h = io.laurent_from_json(F, inp["h"])
        forward = ls.codistance(g, h)
        backward = ls.codistance_negative(h, g)
        A = ls.affine_gcm(n)
        return {
            "codistance": list(forward.word),
            "codistance_reverse": list(backward.word),
            "symmetric": backward == cx.inverse(A, forward),
            "opposite": forward.length == 0,
        }
    panels = range(n) if inp["panel"] is None else [inp["panel"]]
    return {"thickness": {str(s): ls.thickness_at_panel(g, s, F.q) for s in panels}}


def _label_set(A, orbit):
    return [A.labels[s] for s in orbit]


def run_descend(inp):
    form = io.form_from_json(inp["form"])
    A = form.gcm
    rep = ds.descent_report(form, inp["cutoff"])
    rel = rep.relative
    result = {
        "apartment_dim": rep.apartment_dim,
        "geometric_dim": rep.geometric_dim,
        "apartment_basis": [list(v) for v in rep.apartment_basis],
        "orbits": [
            {
                "types": _label_set(A, o),
                "kind": kind,
                "thickness": rep.panel_thickness.get(o),
            }
            for o, kind in rep.orbit_list
        ],
        "relative_generators": [list(g.word) for g in rel.generators],
        "relative_labels": list(rel.labels),
        "relative_coxeter": [[io.entry_to_json(m) for m in row] for row in rel.entries],
        "certified_infinite": [list(row) for row in rel.certified_infinite],
        "tree": rep.is_tree,
        "valency_sequence": list(rep.valency_sequence),
        "split": rep.split,
    }
    if inp["su3_check"]:
        chk = ds.su3_involution_check(form.q, seed=inp["seed"])
        result["su3"] = {
            "ok": chk.ok,
            "field_order": chk.field_order,
            "sign": chk.sign,
            "involution_on_random": chk.involution_on_random,
            "random_checked": chk.random_checked,
            "generator_checks": chk.generator_checks,
            "fixed_a2": list(chk.fixed_a2),
            "fixed_a1": list(chk.fixed_a1),
            "thickness_match": chk.thickness_match,
        }
    return result


def run_datum(inp):
    D = io.datum_from_json(inp["datum"])
    q = inp["q"]
    return {
        "torus_order": dt.torus_order(D, q),
        "center_order": dt.center_order(D, q),
        "lattice_rank": D.lattice_rank,
        "pairing_matrix": D.pairing_matrix(),
        "coxeter_matrix": io.coxeter_to_json(dt.coxeter_matrix(D))["matrix"],
    }


RUNNERS = {
    "analyze": run_analyze,
    "roots": run_roots,
    "twin-sl": run_twin,
    "descend": run_descend,
    "datum": run_datum,
}

BUILDERS = {
    "analyze": inputs_analyze,
    "roots": inputs_roots,
    "twin-sl": inputs_twin,
    "descend": inputs_descend,
    "datum": inputs_datum,
}


def build_report(command, inputs):
    result = RUNNERS[command](inputs)
    return io.to_jsonable(
        {"command": command, "kmlat_version": __version__, "inputs": inputs, "result": result}
    )


def dumps(report):
    return json.dumps(report, sort_keys=True, indent=2) + "\n"


def schema():
    """The JSON schema that every ``--json`` report satisfies."""
    text = resources.files("kmlat").joinpath("schema/report.schema.json").read_text()
    return json.loads(text)


# --------------------------------------------------------------- text output


def _short(value):
    return json.dumps(value, sort_keys=True, separators=(", ", ": "))


def render_text(report):
    lines = [f"kmlat {report['command']}"]
    seed = report["inputs"].get("seed")
    if seed is not None:
        lines.append(f"seed: {seed}")
    for key, value in sorted(report["result"].items()):
        if key == "notes":
            continue
        if isinstance(value, dict):
            lines.append(f"{key}:")
            lines.extend(f"  {k}: {_short(v)}" for k, v in sorted(value.items()))
        else:
            lines.append(f"{key}: {_short(value)}")
    for note in report["result"].get("notes", []):
        lines.append(f"note: {note}")
    return "\n".join(lines) + "\n"


# --------------------------------------------------------------- argparse


def _parser():
    p = argparse.ArgumentParser(prog="kmlat", description="Exact Kac-Moody combinatorics.")
    p.add_argument("--version", action="version", version=f"kmlat {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--json", action="store_true", help="emit a JSON report")
        sp.add_argument("--seed", type=int, default=0, help="seed for any sampled data")
        sp.add_argument("--q", type=int, help="order of the finite field")

    a = sub.add_parser("analyze", help="growth series and lattice verdict")
    common(a)
    a.add_argument("--gcm")
    a.add_argument("--preset")
    a.add_argument("--depth", type=int)

    r = sub.add_parser("roots", help="root enumeration, pair and interval queries")
    common(r)
    r.add_argument("--gcm")
    r.add_argument("--preset")
    r.add_argument("--list-height", type=int, default=3)
    r.add_argument("--height", type=int, help="height cap for intervals")
    r.add_argument("--radius", type=int, help="chamber search radius")
    r.add_argument("--alpha")
    r.add_argument("--beta")
    r.add_argument("--x-plus", dest="x_plus")
    r.add_argument("--x-minus", dest="x_minus", help="image of the negative point in the positive cone")

    t = sub.add_parser("twin-sl", help="Bruhat, codistance and thickness for SL_n over F_q[t, 1/t]")
    common(t)
    t.add_argument("--n", type=int)
    t.add_argument("--op", choices=("bruhat", "codist", "thickness"), default="bruhat")
    t.add_argument("--in", dest="infile")
    t.add_argument("--sign", choices=("+", "-"), default="+")
    t.add_argument("--panel", type=int)
    t.add_argument("--preset", choices=("sl2", "sl3"))

    d = sub.add_parser("descend", help="quasi-split descent report")
    common(d)
    d.add_argument("--form")
    d.add_argument("--preset")
    d.add_argument("--cutoff", type=int)
    d.add_argument("--su3", action="store_true", help="also run the SU3 involution check")

    m = sub.add_parser("datum", help="torus and center orders")
    common(m)
    m.add_argument("--datum")
    m.add_argument("--gcm")
    m.add_argument("--preset")
    m.add_argument("--adjoint", action="store_true")

    rp = sub.add_parser("replay", help="recompute a JSON report from its echoed inputs")
    rp.add_argument("report")
    rp.add_argument("--json", action="store_true")
    return p


def run(argv=None, out=None, err=None):
    """Run the CLI and return its exit status."""
    out = sys.stdout if out is None else out
    err = sys.stderr if err is None else err
    args = _parser().parse_args(argv)
    try:
        if args.command == "replay":
            old = _load_json(args.report)
            if not isinstance(old, dict) or old.get("command") not in RUNNERS or "inputs" not in old:
                raise CLIError(f"{args.report}: not a kmlat report")
            command, inputs = old["command"], old["inputs"]
        else:
            command = args.command
            inputs = io.to_jsonable(BUILDERS[command](args))
        report = build_report(command, inputs)
    except (ResourceBudgetExceeded, DegreeBudgetExceeded, DegenerateSegment) as exc:
        err.write(f"kmlat: budget exceeded: {exc}\n")
        return EXIT_BUDGET
    except (KMLatError, KeyError, TypeError) as exc:
        err.write(f"kmlat: input error: {exc}\n")
        return EXIT_INPUT
    out.write(dumps(report) if args.json else render_text(report))
    return EXIT_OK


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
