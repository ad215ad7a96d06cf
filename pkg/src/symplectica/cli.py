"""Command-line interface.

Results go to standard output as JSON (CSV for ``experiment --csv``);
diagnostics go to standard error.  Exit codes: 0 success, 1 domain error,
2 usage error.
"""

import argparse
import json
import sys

import numpy as np

from . import __version__, gstate, sampler, schmidt, standardform
from .config import DEFAULT
from .engineer import (
    Circuit,
    SchemeParams,
    apply_scheme,
    build_scheme,
    circuit_to_symplectic,
    scheme_param_count,
)
from .errors import SymplecticaError
from .io import (
    dumps,
    load_json,
    matrix_payload,
    parse_matrix,
    read_cm,
    write_atomic,
    write_circuit,
)
from .symplectic import as_symplectic, euler_decompose, orthogonality_residual, symplectic_residual


class UsageError(Exception):
    pass


def parse_modes(text):
    try:
        return [int(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise UsageError(f"bad mode list {text!r}; use comma-separated 1-based indices")


def parse_range(text):
    """``4..8`` or ``4,6,8`` or ``5``."""
    try:
        if ".." in text:
            lo, hi = text.split("..")
            return list(range(int(lo), int(hi) + 1))
        return [int(t) for t in text.split(",")]
    except ValueError:
        raise UsageError(f"bad mode-count range {text!r}")


def parse_floats(text):
    try:
        return [float(t) for t in text.split(",")]
    except ValueError:
        raise UsageError(f"bad number list {text!r}")


def tolerances(args):
    return DEFAULT if args.tol is None else DEFAULT.override(args.tol)


def load_state(args):
    return read_cm(args.file, args.ordering, tolerances(args).phys)


def pure_tol(args):
    return 1e-8 if args.tol is None else args.tol


def emit(args, payload):
    text = dumps(payload)
    if getattr(args, "out", None):
        write_atomic(args.out, text)
    else:
        sys.stdout.write(text)


def mat(m):
    return [[float(x) for x in row] for row in np.asarray(m)]


def cmd_gen(args):
    kind = args.kind
    if kind == "vacuum":
        sigma = gstate.vacuum(args.n or 1)
    elif kind == "thermal":
        if not args.nu:
            raise UsageError("thermal needs --nu")
        sigma = gstate.thermal(parse_floats(args.nu))
    elif kind == "tmss":
        if args.r is None:
            raise UsageError("tmss needs --r")
        sigma = gstate.two_mode_squeezed(args.r)
    elif kind == "random":
        if args.seed is None or not args.n:
            raise UsageError("random needs --n and --seed")
        energy = args.energy if args.energy is not None else 5.0 * args.n
        sigma = sampler.sample_pure(args.n, energy, args.ensemble, sampler.RngStream(args.seed, (0,)))
    else:
        raise UsageError(f"unknown state kind {kind!r}")
    emit(args, matrix_payload(sigma))
    return 0


def cmd_check(args):
    tol = tolerances(args)
    raw = parse_matrix(load_json(args.file), args.ordering)
    report = {"n": raw.shape[0] // 2}
    try:
        sigma = gstate.validate_cm(raw, tol.phys)
    except SymplecticaError as exc:
        report.update(valid=False, error=str(exc))
        sys.stdout.write(dumps(report))
        return 1
    residual = gstate.purity_residual(sigma)
    report.update(
        valid=True,
        purity=gstate.purity(sigma),
        purity_residual=residual,
        pure=residual <= tol.pure,
        symplectic_eigenvalues=[float(v) for v in gstate.symplectic_eigenvalues(sigma)],
    )
    sys.stdout.write(dumps(report))
    if args.pure and not report["pure"]:
        print(f"state is not pure: residual {residual:.3e} > {tol.pure:.1e}", file=sys.stderr)
        return 1
    return 0


def cmd_spectrum(args):
    sigma = load_state(args)
    nu = gstate.symplectic_eigenvalues(sigma)
    emit(args, {
        "symplectic_eigenvalues": [float(v) for v in nu],
        "purity": gstate.purity(sigma),
        "entropy": gstate.von_neumann_entropy(sigma),
        "entropy_units": "nats",
        "mean_energy": gstate.mean_energy(sigma),
    })
    return 0


def cmd_williamson(args):
    sigma = load_state(args)
    s, nu = gstate.williamson(sigma)
    rec = s.T @ np.diag(np.repeat(nu, 2)) @ s
    emit(args, {
        "nu": [float(v) for v in nu],
        "S": mat(s),
        "symplectic_residual": symplectic_residual(s),
        "reconstruction_residual": float(np.abs(rec - sigma).sum(axis=1).max()),
    })
    return 0


def cmd_euler(args):
    payload = load_json(args.file)
    if "elements" in payload:
        s = circuit_to_symplectic(Circuit.from_dict(payload))
    else:
        s = parse_matrix(payload, args.ordering)
    s = as_symplectic(s, tolerances(args).symp)
    f = euler_decompose(s)
    emit(args, {
        "z": [float(v) for v in f.z],
        "O_left": mat(f.left),
        "O_right": mat(f.right),
        "orthogonality_residual": max(orthogonality_residual(f.left), orthogonality_residual(f.right)),
        "reconstruction_residual": float(np.abs(f.reconstruct() - s).sum(axis=1).max()),
    })
    return 0


def cmd_blocks(args):
    b = gstate.blocks(load_state(args))
    emit(args, {"sigma_x": mat(b.sigma_x), "sigma_p": mat(b.sigma_p), "sigma_xp": mat(b.sigma_xp)})
    return 0


def cmd_standard_form(args):
    sigma = load_state(args)
    n = sigma.shape[0] // 2
    out = {}
    if args.pure_two_mode:
        r, _ = standardform.reduce_pure_two_mode(sigma, pure_tol(args))
        std = standardform.reduce_mixed(sigma)
        out["r"] = r
    elif args.three_mode:
        std = standardform.annihilate_xp_three_mode(sigma, pure_tol(args))
    else:
        std = standardform.reduce_mixed(sigma)
    out.update(
        n=n,
        sigma_std=matrix_payload(std.sigma_std),
        local_ops=[mat(op) for op in std.local_ops],
        local_eigenvalues=[float(a) for a in std.local_eigenvalues],
        xp_norm=standardform.xp_norm(std.sigma_std),
    )
    emit(args, out)
    return 0


def cmd_schmidt(args):
    sigma = load_state(args)
    form = schmidt.schmidt_decompose(sigma, parse_modes(args.modes), pure_tol(args))
    rec = schmidt.reconstruct(sigma, form)
    target = schmidt.schmidt_target(form.r, form.m, form.n)
    for note in form.notes:
        print(f"note: {note}", file=sys.stderr)
    emit(args, {
        "modes_a": list(form.modes_a),
        "modes_b": list(form.modes_b),
        "swapped": form.swapped,
        "r": [float(v) for v in form.r],
        "S_A": mat(form.s_a),
        "S_B": mat(form.s_b),
        "reconstruction_residual": float(np.abs(rec - target).sum(axis=1).max()),
        "entropy": schmidt.schmidt_entropy(form),
        "entropy_units": "nats",
    })
    return 0


def cmd_engineer(args):
    if args.params:
        params = SchemeParams.from_dict(load_json(args.params))
    elif args.seed is not None:
        if not args.n:
            raise UsageError("engineer --seed needs --n")
        rng = sampler.RngStream(args.seed, (1,)).generator()
        params = SchemeParams.random(args.n, rng)
    elif args.n:
        params = SchemeParams.neutral(args.n)
    else:
        raise UsageError("engineer needs --params, --n with --seed, or --n")
    circuit = build_scheme(params)
    sigma = apply_scheme(params)
    if args.circuit_out:
        write_circuit(args.circuit_out, circuit)
    emit(args, {
        "params": params.to_dict(),
        "parameter_count": params.count,
        "circuit": circuit.to_dict(),
        "state": matrix_payload(sigma),
        "purity_residual": gstate.purity_residual(sigma),
    })
    return 0


def cmd_dof(args):
    t = standardform.dof(args.n)
    out = {
        "n": t.n,
        "mixed_total": t.mixed_total,
        "mixed_invariant": t.mixed_invariant,
        "pure_total": t.pure_total,
        "pure_invariant": t.pure_invariant,
        "blockdiag_invariant": t.blockdiag_invariant,
    }
    if args.n >= 3:
        out["scheme_param_count"] = list(scheme_param_count(args.n))
    if args.m:
        out["schmidt_invariant"] = standardform.schmidt_dof_check(args.m, args.n)
    emit(args, out)
    return 0


def cmd_sample(args):
    energy = args.energy if args.energy is not None else args.energy_per_mode * args.n
    code = sampler.ensemble_code(args.ensemble)
    states = []
    rows = []
    for idx in range(args.count):
        rng = sampler.RngStream(args.seed, (args.n, code, idx)).generator()
        sigma = sampler.sample_pure(args.n, energy, args.ensemble, rng,
                                    random_orientation=args.random_orientation)
        ent = gstate.entanglement_entropy(sigma, [1])
        states.append(matrix_payload(sigma))
        rows.append((idx, ent, gstate.mean_energy(sigma)))
    if args.csv:
        text = "index,entropy_mode1,energy\n" + "".join(
            f"{i},{e:.12g},{en:.12g}\n" for i, e, en in rows)
        if args.out:
            write_atomic(args.out, text)
        else:
            sys.stdout.write(text)
    else:
        emit(args, {"seed": args.seed, "ensemble": args.ensemble, "energy": energy, "states": states})
    return 0


def cmd_experiment(args):
    n_values = parse_range(args.n)
    if any(n < 1 for n in n_values):
        raise UsageError("mode counts must be positive")
    records = sampler.run_experiment(n_values, args.energy_per_mode, args.samples, args.seed,
                                     random_orientation=args.random_orientation)
    meta = sampler.experiment_metadata(args.seed, args.energy_per_mode, args.samples, n_values,
                                       args.random_orientation)
    if args.csv:
        text = sampler.records_to_csv(records)
    else:
        text = dumps({"metadata": meta, "records": sampler.records_as_dicts(records)})
    if args.out:
        write_atomic(args.out, text)
        write_atomic(args.out + ".meta.json", dumps(meta))
    else:
        sys.stdout.write(text)
    return 0


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--tol", type=float, default=None, help="override all residual tolerances")
    common.add_argument("--out", help="write the result to this file instead of stdout")

    reader = argparse.ArgumentParser(add_help=False)
    reader.add_argument("file", help="state JSON file")
    reader.add_argument("--ordering", choices=("interleaved", "blocked"),
                        help="override the ordering recorded in the file")

    parser = argparse.ArgumentParser(prog="symplectica", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", parents=[common], help="write a canonical or random state")
    p.add_argument("kind", choices=("vacuum", "thermal", "tmss", "random"))
    p.add_argument("--n", type=int)
    p.add_argument("--nu", help="comma-separated symplectic eigenvalues (thermal)")
    p.add_argument("--r", type=float, help="two-mode squeezing")
    p.add_argument("--energy", type=float, help="total energy for random states (default 5n)")
    p.add_argument("--ensemble", choices=sampler.ENSEMBLES, default="general")
    p.add_argument("--seed", type=int)
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("check", parents=[common, reader], help="validate a state")
    p.add_argument("--pure", action="store_true", help="fail unless the state is pure")
    p.set_defaults(func=cmd_check)

    for name, func, text in (
        ("spectrum", cmd_spectrum, "symplectic spectrum, purity and entropy"),
        ("williamson", cmd_williamson, "Williamson normal form"),
        ("blocks", cmd_blocks, "position, momentum and cross blocks"),
    ):
        p = sub.add_parser(name, parents=[common, reader], help=text)
        p.set_defaults(func=func)

    p = sub.add_parser("euler", parents=[common, reader],
                       help="Euler decomposition of a symplectic matrix or circuit file")
    p.set_defaults(func=cmd_euler)

    p = sub.add_parser("standard-form", parents=[common, reader], help="local standard form")
    mode = p.add_mutually_exclusive_group()
    mode.add_argument("--pure-two-mode", action="store_true")
    mode.add_argument("--three-mode", action="store_true")
    p.set_defaults(func=cmd_standard_form)

    p = sub.add_parser("schmidt", parents=[common, reader], help="phase-space Schmidt decomposition")
    p.add_argument("--modes", required=True, help="side A as comma-separated 1-based indices")
    p.set_defaults(func=cmd_schmidt)

    p = sub.add_parser("engineer", parents=[common], help="build and apply the optical scheme")
    p.add_argument("--n", type=int)
    p.add_argument("--params", help="scheme parameter JSON file")
    p.add_argument("--seed", type=int, help="draw random parameters")
    p.add_argument("--circuit-out", help="also write the circuit JSON here")
    p.set_defaults(func=cmd_engineer)

    p = sub.add_parser("dof", parents=[common], help="parameter counts")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--m", type=int, help="size of the other side for the Schmidt count")
    p.set_defaults(func=cmd_dof)

    for name, func in (("sample", cmd_sample), ("experiment", cmd_experiment)):
        text = ("draw random pure states" if name == "sample"
                else "one-vs-rest entropy study over both ensembles")
        p = sub.add_parser(name, parents=[common], help=text)
        p.add_argument("--seed", type=int, required=True)
        p.add_argument("--energy-per-mode", type=float, default=5.0)
        p.add_argument("--random-orientation", action="store_true",
                       help="squeeze each mode in x or p at random")
        p.add_argument("--csv", action="store_true")
        p.set_defaults(func=func)
        if name == "sample":
            p.add_argument("--n", type=int, required=True)
            p.add_argument("--count", type=int, default=1)
            p.add_argument("--energy", type=float, help="total energy (overrides per-mode)")
            p.add_argument("--ensemble", choices=sampler.ENSEMBLES, default="general")
        else:
            p.add_argument("--n", required=True, help="mode counts, e.g. 4..8 or 4,6")
            p.add_argument("--samples", type=int, default=10000)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (SymplecticaError, ValueError, KeyError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
