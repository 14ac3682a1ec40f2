"""Command-line entry point.

Exit codes: 0 ok, 1 verification failed, 2 bad input, 3 dimension mismatch,
4 hypothesis of a verifier not met.
"""
from __future__ import annotations

import argparse
import json
import os
import sys

import numpy as np

from . import channels, demos, jnr, numrange, shadow, states, svg
from .errors import DimensionError, HypothesisError
from .kernels import BACKEND
from .linalg import HermitianTuple, as_matrix, load_matrix, matrix_from_json, matrix_to_json
from .rng import default_workers

EXIT_FAIL, EXIT_PARSE, EXIT_DIM, EXIT_HYP = 1, 2, 3, 4


class CliError(Exception):
    def __init__(self, msg, code=EXIT_PARSE):
        super().__init__(msg)
        self.code = code


# -- input helpers ------------------------------------------------------------

def _named_tuple(name):
    if name == "pauli":
        return states.pauli_basis()
    if name == "gellmann":
        return states.gellmann_basis()
    if name == "pauli_extended":
        return shadow.pauli_extended()
    if name == "pauli_extended_swapped":
        return shadow.pauli_extended(swapped=True)
    return None


def load_tuple(spec: str) -> HermitianTuple:
    """Built-in name or JSON file: ``{"operators": [<matrix>, ...]}`` or a bare list."""
    t = _named_tuple(spec)
    if t is not None:
        return t
    with open(spec) as fh:
        obj = json.load(fh)
    ops = obj["operators"] if isinstance(obj, dict) else obj
    return HermitianTuple([matrix_from_json(m) for m in ops])


def load_channel_spec(spec: str) -> channels.KrausChannel:
    if os.path.isfile(spec):
        return channels.load_channel(spec)
    return channels.parse_builtin(spec)


def load_state(path) -> np.ndarray:
    with open(path) as fh:
        obj = json.load(fh)
    m = matrix_from_json(obj)
    if obj.get("kind", "state") != "state" and m.shape[1] != 1:
        raise CliError("expected a state (N x 1 matrix)")
    return states.as_state(m.reshape(-1))


def _emit(text: str, out: str | None):
    if out:
        with open(out, "w", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _meta(args, **extra) -> dict:
    meta = {"command": args.command, "seed": args.seed, "workers": default_workers(), "backend": BACKEND}
    meta.update(extra)
    return meta


def _write_meta(args, **extra):
    if args.out:
        with open(args.out + ".meta.json", "w", newline="\n") as fh:
            json.dump(_meta(args, **extra), fh, indent=1)
            fh.write("\n")


def _print_json(obj):
    sys.stdout.write(json.dumps(obj, indent=1, default=float) + "\n")


# -- commands -----------------------------------------------------------------

def cmd_range(args):
    a = load_matrix(args.matrix)
    if a.shape[0] != a.shape[1]:
        raise DimensionError(f"numerical range needs a square matrix, got {a.shape}")
    b = numrange.boundary(a, args.angles)
    bary = complex(np.trace(a) / a.shape[0])
    fmt = "svg" if args.svg else args.format
    if fmt == "csv":
        _emit(b.to_csv(), args.out)
    elif fmt == "svg":
        _emit(svg.render([(b.boundary_points, "W(A)")], [(bary, "barycenter")]), args.out)
    else:
        obj = {
            "theta": b.angles.tolist(),
            "support": b.support_values.tolist(),
            "re": b.boundary_points.real.tolist(),
            "im": b.boundary_points.imag.tolist(),
            "barycenter": [bary.real, bary.imag],
        }
        if a.shape == (2, 2):
            e = numrange.ellipse_2x2(a)
            obj["ellipse"] = {
                "center": [e.center.real, e.center.imag],
                "semi_major": e.semi_major,
                "semi_minor": e.semi_minor,
                "tilt": e.tilt,
            }
        _emit(json.dumps(obj) + "\n", args.out)
    _write_meta(args, num_angles=args.angles)
    return 0


def cmd_jnr(args):
    t = load_tuple(args.tuple)
    pts = jnr.jnr_sample(t, args.samples, args.seed)
    _emit(jnr.points_to_csv(pts), args.out)
    _write_meta(args, samples=args.samples)
    return 0


def cmd_shadow(args):
    t = load_tuple(args.tuple)
    est = shadow.estimate_shadow(t, args.samples, args.seed)
    if args.moments is not None:
        _emit(shadow.moments(est, args.moments).to_csv(), args.out)
    elif args.format == "json":
        h = shadow.histogram(est, args.bins)
        obj = h.to_json()
        obj["metadata"] = _meta(args, samples=args.samples)
        _emit(json.dumps(obj) + "\n", args.out)
    else:
        _emit(est.to_csv(), args.out)
    _write_meta(args, samples=args.samples)
    return 0


def cmd_channel(args):
    ch = load_channel_spec(args.channel)
    if args.action == "analyze":
        _print_json(channels.analyze(ch).to_json())
        return 0
    if args.action == "apply":
        if not args.matrix:
            raise CliError("channel apply needs --matrix")
        a = load_matrix(args.matrix)
        for _ in range(args.times):
            a = channels.apply(ch, a)
        _emit(json.dumps(matrix_to_json(a)) + "\n", args.out)
        return 0
    if not args.state:
        raise CliError("channel decompose needs --state")
    d = channels.decompose_pure(ch, load_state(args.state))
    _print_json({
        "weights": d.weights.tolist(),
        "states": [matrix_to_json(s.reshape(-1, 1), kind="state") for s in d.states],
    })
    return 0


def cmd_verify(args):
    if args.suite == "inclusion":
        ch = load_channel_spec(args.channel)
        if args.matrix:
            target = as_matrix(load_matrix(args.matrix))
        elif args.tuple:
            target = load_tuple(args.tuple)
        else:
            raise CliError("verify inclusion needs --matrix or --tuple")
        rep = channels.verify_inclusion(ch, target, args.directions, min(args.samples, 20000), args.seed)
    elif args.suite == "injectivity":
        rep = jnr.verify_affine_injectivity(load_tuple(args.tuple or "gellmann"), args.trials, args.seed)
    elif args.suite == "invariance":
        t = load_tuple(args.tuple or "pauli_extended")
        if args.unitary:
            u = load_matrix(args.unitary)
        elif t.dim == 4:
            u = channels.SWAP
        else:
            u = states.haar_unitary(t.dim, args.seed)
        rep = shadow.unitary_invariance_check(t, u, args.samples, args.degree, (args.seed, args.seed + 1))
    else:
        rep = shadow.ball_shadow_check(args.samples, args.seed, swapped=args.swapped)
    obj = rep.to_json()
    obj["metadata"] = _meta(args, suite=args.suite)
    _print_json(obj)
    return 0 if rep.passed else EXIT_FAIL


def cmd_demo(args):
    angles = args.angles if args.angles is not None else 360
    res = demos.run_demo(args.name, angles)
    res.write(args.out or ".", seed=args.seed, workers=default_workers())
    sys.stdout.write(res.summary_csv())
    return 0


# -- parser -------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=42)
    common.add_argument("--samples", type=int, default=100_000)
    common.add_argument("--angles", type=int, default=None)
    common.add_argument("--bins", type=int, default=128)
    common.add_argument("--out", default=None)
    common.add_argument("--format", choices=["csv", "json", "svg"], default="csv")

    p = argparse.ArgumentParser(prog="jnrange", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    r = sub.add_parser("range", parents=[common], help="numerical range boundary of a matrix")
    r.add_argument("matrix")
    r.add_argument("--svg", action="store_true", help="same as --format svg")
    r.set_defaults(func=cmd_range)

    j = sub.add_parser("jnr", parents=[common], help="sample a joint numerical range")
    j.add_argument("--tuple", required=True, help="pauli, gellmann, pauli_extended or a JSON file")
    j.set_defaults(func=cmd_jnr)

    s = sub.add_parser("shadow", parents=[common], help="sample a joint numerical shadow")
    s.add_argument("--tuple", required=True)
    s.add_argument("--moments", type=int, default=None, metavar="DEGREE",
                   help="emit the moment table up to this total degree")
    s.set_defaults(func=cmd_shadow)

    c = sub.add_parser("channel", parents=[common], help="apply or inspect a Kraus channel")
    c.add_argument("action", choices=["apply", "analyze", "decompose"])
    c.add_argument("--channel", "--builtin", dest="channel", required=True,
                   help="decaying:P, phase_flip:P, double_flip:P,Q, swap_conjugation or a JSON file")
    c.add_argument("--matrix")
    c.add_argument("--state")
    c.add_argument("--times", type=int, default=1)
    c.set_defaults(func=cmd_channel)

    v = sub.add_parser("verify", parents=[common], help="run a verification suite")
    v.add_argument("suite", choices=["inclusion", "injectivity", "invariance", "ball"])
    v.add_argument("--channel", "--builtin", dest="channel")
    v.add_argument("--matrix")
    v.add_argument("--tuple")
    v.add_argument("--unitary")
    v.add_argument("--directions", type=int, default=256)
    v.add_argument("--trials", type=int, default=1000)
    v.add_argument("--degree", type=int, default=2)
    v.add_argument("--swapped", action="store_true")
    v.set_defaults(func=cmd_verify)

    d = sub.add_parser("demo", parents=[common], help="regenerate figure data")
    d.add_argument("name", choices=sorted(demos.DEMOS))
    d.set_defaults(func=cmd_demo)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "range" and args.angles is None:
        args.angles = numrange.DEFAULT_ANGLES
    for name in ("seed", "samples", "bins"):
        if getattr(args, name) is not None and getattr(args, name) <= 0:
            print(f"jnrange: --{name} must be positive", file=sys.stderr)
            return EXIT_PARSE
    if args.angles is not None and args.angles < 3:
        print("jnrange: --angles must be >= 3", file=sys.stderr)
        return EXIT_PARSE
    if args.command == "verify" and args.suite == "inclusion" and not args.channel:
        print("jnrange: verify inclusion needs --channel", file=sys.stderr)
        return EXIT_PARSE
    try:
        return args.func(args)
    except DimensionError as exc:
        print(f"jnrange: dimension error: {exc}", file=sys.stderr)
        return EXIT_DIM
    except HypothesisError as exc:
        print(f"jnrange: hypothesis not met: {exc}", file=sys.stderr)
        return EXIT_HYP
    except CliError as exc:
        print(f"jnrange: {exc}", file=sys.stderr)
        return exc.code
    except BrokenPipeError:
        # reader went away (e.g. piped into head); silence the flush at exit
        os.dup2(os.open(os.devnull, os.O_WRONLY), sys.stdout.fileno())
        return 0
    except (ValueError, KeyError, OSError, json.JSONDecodeError) as exc:
        print(f"jnrange: bad input: {exc}", file=sys.stderr)
        return EXIT_PARSE


if __name__ == "__main__":
    sys.exit(main())
