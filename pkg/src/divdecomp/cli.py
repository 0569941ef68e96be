"""Command line front end.

Exit status: 0 on success, 1 when an identity or inequality fails, 2 on
usage or input errors.
"""
import argparse
import sys
import time

import numpy as np

from . import __version__, named
from . import divergences as core
from .decomposition import (
    RESIDUAL_RTOL,
    decompose_basic,
    decompose_f_divergence,
    decompose_symmetric_bregman,
)
from .errors import DivergenceError, NumericalError, ParameterError, UnknownNameError
from .generator import builtin_generators
from .io import FORMATS, ReportDocument, describe_inputs, parse_input
from .sweeps import run_invariant_suite

EXIT_OK = 0
EXIT_VIOLATION = 1
EXIT_INPUT = 2

# name -> (arity, uses generator, uses alpha, function)
# arity "pair": two labelled vectors; "multi": one vector plus weights;
# "scalar": two length-1 vectors.
DIVERGENCES = {
    "bregman": ("pair", True, False, lambda g, a, p, q: core.bregman(g, p, q)),
    "symmetric_bregman": ("pair", True, False, lambda g, a, p, q: core.symmetric_bregman(g, p, q)),
    "jensen": ("pair", True, True, lambda g, a, p, q: core.jensen_pair(g, a, p, q)),
    "conjugate_jensen": ("pair", True, True,
                         lambda g, a, p, q: core.conjugate_jensen_pair(g, a, p, q)),
    "jensen_multi": ("multi", True, False, None),
    "conjugate_jensen_multi": ("multi", True, False, None),
    "kl": ("pair", False, False, lambda g, a, p, q: named.kl(p, q)),
    "jeffreys": ("pair", False, False, lambda g, a, p, q: named.jeffreys(p, q)),
    "js_alpha": ("pair", False, True, lambda g, a, p, q: named.js_alpha(a, p, q)),
    "hellinger_sq": ("pair", False, False, lambda g, a, p, q: named.hellinger_sq(p, q)),
    "alpha_divergence": ("pair", False, True,
                         lambda g, a, p, q: named.alpha_divergence(a, p, q)),
    "geometric_mixture_kl": ("pair", False, True,
                             lambda g, a, p, q: named.geometric_mixture_kl(a, p, q)),
    "neyman_chi_square": ("pair", False, False,
                          lambda g, a, p, q: named.neyman_chi_square(p, q)),
    "itakura_saito": ("scalar", False, False, None),
}

THEOREMS = ("basic", "symmetric_bregman", "f_divergence")


def _weights(text, n):
    if text is None:
        return np.full(n, 1.0 / n)
    try:
        w = [float(t) for t in text.split(",")]
    except ValueError:
        raise ParameterError(f"cannot parse weights {text!r}") from None
    return core.as_weights(w, n)


def _labels(dataset, given, count):
    labels = list(given) if given else dataset.labels[:count]
    if len(labels) != count:
        raise ParameterError(f"need {count} vector label(s), got {len(labels)}")
    for lab in labels:
        dataset.get(lab)
    return labels


def run_compute(dataset, divergence_name, generator_name, params, registry=None):
    """Evaluate one divergence on labelled vectors; returns (result, labels)."""
    if divergence_name not in DIVERGENCES:
        raise UnknownNameError(f"unknown divergence {divergence_name!r}; "
                               f"known: {', '.join(DIVERGENCES)}")
    arity, uses_gen, uses_alpha, fn = DIVERGENCES[divergence_name]
    registry = registry or builtin_generators()
    g = registry[generator_name] if uses_gen else None
    alpha = params.get("alpha", 0.5) if uses_alpha else None
    if arity == "multi":
        (lab,) = _labels(dataset, params.get("labels"), 1)
        pts = dataset.get(lab)
        w = _weights(params.get("weights"), pts.size)
        f = core.jensen_multi if divergence_name == "jensen_multi" else core.conjugate_jensen_multi
        return f(g, w, pts), [lab]
    labels = _labels(dataset, params.get("labels"), 2)
    p, q = (dataset.get(lab) for lab in labels)
    if arity == "scalar":
        if p.size != 1 or q.size != 1:
            raise ParameterError("itakura_saito takes two length-1 vectors")
        return named.itakura_saito(p[0], q[0]), labels
    return fn(g, alpha, p, q), labels


def run_decompose(dataset, theorem, generator_name, params, registry=None):
    """Apply one decomposition theorem; returns (report, labels)."""
    registry = registry or builtin_generators()
    g = registry[generator_name]
    if theorem == "basic":
        (lab,) = _labels(dataset, params.get("labels"), 1)
        pts = dataset.get(lab)
        return decompose_basic(g, _weights(params.get("weights"), pts.size), pts), [lab]
    labels = _labels(dataset, params.get("labels"), 2)
    p, q = (dataset.get(lab) for lab in labels)
    if theorem == "symmetric_bregman":
        return decompose_symmetric_bregman(g, params.get("alpha", 0.5), p, q), labels
    if theorem == "f_divergence":
        if params.get("normalize"):
            p, q = p / p.sum(), q / q.sum()
        return decompose_f_divergence(g, p, q), labels
    raise UnknownNameError(f"unknown theorem {theorem!r}; known: {', '.join(THEOREMS)}")


def run_verify(generator_names, seed, trials, dims, tolerance=RESIDUAL_RTOL, registry=None):
    """Run the randomized invariant suite for each named generator."""
    registry = registry or builtin_generators()
    gens = [registry[n] for n in generator_names]
    return [run_invariant_suite(g, seed=seed, trials=trials, dims=dims, tolerance=tolerance)
            for g in gens]


def _add_data_args(p):
    p.add_argument("input", help="CSV or JSON file of labelled vectors")
    p.add_argument("labels", nargs="*", help="vector labels (default: first in file)")
    p.add_argument("--format", choices=FORMATS, help="input format (default: from suffix)")
    p.add_argument("--generator", "-g", default="neg_entropy",
                   help="registered generator name (default: %(default)s)")
    p.add_argument("--alpha", "-a", type=float, default=0.5)
    p.add_argument("--weights", help="comma separated weights for single-vector operations")


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--output", "-o", help="write the JSON report here (default: stdout)")
    common.add_argument("--tolerance", type=float, default=RESIDUAL_RTOL,
                        help="relative residual tolerance (default: %(default)g)")

    parser = argparse.ArgumentParser(prog="divdecomp", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    sub.add_parser("list-generators", parents=[common], help="list registered generators")

    p = sub.add_parser("compute", parents=[common], help="evaluate one divergence")
    p.add_argument("divergence", choices=sorted(DIVERGENCES), metavar="DIVERGENCE",
                   help="one of: " + ", ".join(sorted(DIVERGENCES)))
    _add_data_args(p)

    p = sub.add_parser("decompose", parents=[common], help="apply a decomposition")
    _add_data_args(p)
    p.add_argument("--theorem", "-t", choices=THEOREMS, default="symmetric_bregman")
    p.add_argument("--normalize", action="store_true",
                   help="divide each vector by its mass before the f-divergence decomposition")

    p = sub.add_parser("verify", parents=[common], help="run the randomized invariant suite")
    p.add_argument("--generator", "-g", action="append",
                   help="generator name, repeatable (default: all registered)")
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--trials", type=int, default=500)
    p.add_argument("--dims", type=int, default=64)
    return parser


def _emit(doc, output):
    text = doc.to_json() + "\n"
    if output:
        with open(output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _dispatch(args, registry):
    params = {"alpha": getattr(args, "alpha", None), "labels": getattr(args, "labels", None),
              "weights": getattr(args, "weights", None),
              "normalize": getattr(args, "normalize", False)}
    params = {k: v for k, v in params.items() if v not in (None, [], False)}

    if args.command == "list-generators":
        result = [{"name": g.name, "domain": [g.domain.lower, g.domain.upper],
                   "conjugate_domain": [g.conjugate_domain.lower, g.conjugate_domain.upper],
                   "analytic_conjugate": g.has_analytic_conjugate,
                   "description": g.description} for g in registry.values()]
        return None, [], result, True, {}

    if args.command == "verify":
        names = args.generator or list(registry)
        if args.trials < 1:
            raise ParameterError("--trials must be at least 1")
        reports = run_verify(names, args.seed, args.trials, args.dims, args.tolerance, registry)
        ok = all(r.passed for r in reports)
        extra = {"seed": args.seed, "trials": args.trials, "dims": args.dims}
        return names, [], [r.to_dict() for r in reports], ok, extra

    dataset = parse_input(args.input, args.format)
    if args.command == "compute":
        value, labels = run_compute(dataset, args.divergence, args.generator, params, registry)
        gen = value.generator_name
        if not DIVERGENCES[args.divergence][2]:
            params.pop("alpha", None)
        params["divergence"] = args.divergence
        return gen, describe_inputs(dataset, labels), value.to_dict(), True, params

    rep, labels = run_decompose(dataset, args.theorem, args.generator, params, registry)
    if args.theorem != "symmetric_bregman":
        params.pop("alpha", None)
    params["theorem"] = args.theorem
    result = rep.to_dict()
    result["residual_ok"] = rep.residual_ok(args.tolerance)
    return (args.generator, describe_inputs(dataset, labels), result,
            rep.passed(args.tolerance), params)


def main(argv=None, registry=None):
    """Entry point; ``registry`` overrides the builtin generators (for tests)."""
    args = build_parser().parse_args(argv)
    registry = registry if registry is not None else builtin_generators()
    start = time.perf_counter()
    doc = ReportDocument(__version__, args.command, None, [], None, args.tolerance, False)
    try:
        gen, inputs, result, ok, params = _dispatch(args, registry)
        doc.generator, doc.inputs, doc.result, doc.passed, doc.params = gen, inputs, result, ok, params
        doc.exit_code = EXIT_OK if ok else EXIT_VIOLATION
    except NumericalError as exc:
        doc.error, doc.exit_code = str(exc), EXIT_VIOLATION
    except (DivergenceError, ValueError, OSError) as exc:
        doc.error, doc.exit_code = f"{type(exc).__name__}: {exc}", EXIT_INPUT
    doc.duration_ms = 1000.0 * (time.perf_counter() - start)
    if doc.error:
        print(f"divdecomp: error: {doc.error}", file=sys.stderr)
    _emit(doc, args.output)
    return doc.exit_code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
