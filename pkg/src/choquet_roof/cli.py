"""Command-line front end: ``choquet-roof <subcommand> ...``.

Exit codes: 0 success, 1 ``order`` found no domination, 2 malformed input,
3 numerically ambiguous or unsupported input.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass

import numpy as np

from . import io
from .choquet import AMBIGUOUS, DOMINATES, check_dominates
from .errors import ConvergenceError, UnsupportedInputError, ValidationError
from .functionals import (
    KrausChannel,
    _check_base,
    _g_values,
    approx_char_stack,
    char_fn_functional,
    ky_fan_functional,
    output_entropy_functional,
    purity_gap,
    purity_gap_functional,
    reduced_entropy_functional,
    truncated_entropy_functional,
    validate_char_params,
)
from .oracles import brute_force_roof, concurrence, wootters_eof
from .roof import RoofOptions, concave_hull, convex_roof, efn, eof
from .states import Ensemble, maximally_mixed, refine_to_pure, steer_barycenter

EXIT_OK, EXIT_NOT_DOMINATES, EXIT_MALFORMED, EXIT_AMBIGUOUS = 0, 1, 2, 3

ROOF_COLUMNS = ["value", "bound", "restarts", "seed", "members", "converged", "sweeps"]

CSV_HELP = {
    "eof": "CSV columns: " + ",".join(ROOF_COLUMNS),
    "efn": "CSV columns: " + ",".join(ROOF_COLUMNS),
    "roof": "CSV columns: " + ",".join(ROOF_COLUMNS),
    "hat": "CSV columns: " + ",".join(ROOF_COLUMNS + ["mix"]),
    "order": "CSV columns: status,iterations,infeasibility",
    "refine": "CSV columns: atom,weight,purity",
    "steer": "CSV columns: atom,weight,purity,epsilon",
    "approx": "CSV columns: n,value (one row per n = 1..N)",
    "remark1": "CSV columns: lambda,value,closed_form",
    "efn-sweep": "CSV columns: n,value",
    "wootters": "CSV columns: value,concurrence",
    "brute-force": "CSV columns: value,m,resolution",
}

SELECTOR_HELP = (
    "functional selector: entropyA, hn:<n>, kyfan:<n>, purity-gap, "
    "charfn:<set|face|rank>:<n> (needs --params unless rank with k=1), channel:<kraus.json>"
)


@dataclass
class Report:
    json: dict
    header: list
    rows: list
    code: int = EXIT_OK


# -- helpers ------------------------------------------------------------------


def _options(args, mix=None) -> RoofOptions:
    if args.restarts < 1:
        raise ValidationError("--restarts must be >= 1")
    if args.tol <= 0:
        raise ValidationError("--tol must be positive")
    return RoofOptions(members=args.members, restarts=args.restarts, tol=args.tol, seed=args.seed, mix=mix)


def _base(args):
    return _check_base(args.base)


def _need_dims(dims):
    if dims is None:
        raise ValidationError("state file needs 'dims': [dA, dB] for a bipartite functional")
    return dims


def _params(path):
    if path is None:
        return None
    obj = io.read_json(path)
    if not isinstance(obj, dict):
        raise ValidationError("params file must hold a JSON object")
    out = dict(obj)
    if "vectors" in out:
        vecs = np.asarray(out["vectors"], dtype=float)
        if vecs.ndim == 3:  # [re, im] pairs
            out["vectors"] = vecs[..., 0] + 1j * vecs[..., 1]
        else:
            out["vectors"] = vecs
    if "projector" in out:
        out["projector"] = io.matrix_from_json(out["projector"], "projector")
    return out


def _int_field(text, what):
    try:
        return int(text)
    except ValueError:
        raise ValidationError(f"{what} must be an integer, got {text!r}") from None


def functional_from_selector(selector: str, dim: int, dims, base, params=None):
    name, _, rest = selector.partition(":")
    if name == "entropyA" and not rest:
        return reduced_entropy_functional(_need_dims(dims), base)
    if name == "hn":
        return truncated_entropy_functional(_need_dims(dims), _int_field(rest, "hn order"), base)
    if name == "kyfan":
        return ky_fan_functional(_int_field(rest, "kyfan order"), dim)
    if name == "purity-gap" and not rest:
        return purity_gap_functional(dim)
    if name == "charfn":
        case, _, n = rest.partition(":")
        return char_fn_functional(case, params, _int_field(n, "charfn n"), dim)
    if name == "channel" and rest:
        return _channel_functional(rest, dim, base)
    raise ValidationError(f"unknown functional selector {selector!r}; {SELECTOR_HELP}")


def _channel_functional(path, dim, base):
    channel = KrausChannel(np.array(io.load_kraus(path)))
    if channel.input_dim != dim:
        raise ValidationError(f"channel input dimension {channel.input_dim} != state dimension {dim}")
    return output_entropy_functional(channel, base)


def _roof_report(res, name) -> Report:
    out = {
        "functional": name,
        "value": res.value,
        "bound": res.bound,
        "restarts": res.restarts,
        "seed": res.seed,
        "members": res.members,
        "converged": res.converged,
        "sweeps": res.sweeps,
        "trace": res.trace,
        "ensemble": io.ensemble_to_json(res.ensemble),
    }
    row = [res.value, res.bound, res.restarts, res.seed, res.members, res.converged, res.sweeps]
    header = list(ROOF_COLUMNS)
    if res.mix is not None:
        out["mix"] = res.mix
        header.append("mix")
        row.append(res.mix)
    return Report(out, header, [row])


def _atom_rows(E: Ensemble):
    return [[i, float(w), float(np.trace(s @ s).real)] for i, (w, s) in enumerate(zip(E.weights, E.states))]


# -- subcommands --------------------------------------------------------------


def cmd_eof(args) -> Report:
    rho, dims = io.load_state(args.state)
    res = eof(rho, dims or (2, 2), _options(args), _base(args))
    return _roof_report(res, "entropyA")


def cmd_efn(args) -> Report:
    rho, dims = io.load_state(args.state)
    res = efn(rho, args.n, dims or (2, 2), _options(args), _base(args))
    return _roof_report(res, f"hn:{args.n}")


def cmd_roof(args) -> Report:
    rho, dims = io.load_state(args.state)
    f = functional_from_selector(args.fn, rho.shape[0], dims, _base(args), _params(args.params))
    return _roof_report(convex_roof(f, rho, _options(args), dims), args.fn)


def cmd_hat(args) -> Report:
    rho, dims = io.load_state(args.state)
    f = functional_from_selector(args.fn, rho.shape[0], dims, _base(args), _params(args.params))
    return _roof_report(concave_hull(f, rho, _options(args, args.mix), dims), args.fn)


def cmd_order(args) -> Report:
    mu = io.load_ensemble(args.mu)
    nu = io.load_ensemble(args.nu)
    v = check_dominates(mu, nu)
    out = {"status": v.status, "iterations": v.iterations, "infeasibility": v.infeasibility}
    if v.plan is not None and v.status == DOMINATES:
        out["plan"] = v.plan.t
        out["residuals"] = v.plan.residuals(mu, nu)
    if v.violation is not None:
        out["witness"] = {
            "label": v.violation.label,
            "pieces": [io.matrix_to_json(A) for A in v.violation.pieces],
            "offsets": v.violation.offsets,
            "gap": v.violation.gap(mu, nu),
        }
    code = {DOMINATES: EXIT_OK, AMBIGUOUS: EXIT_AMBIGUOUS}.get(v.status, EXIT_NOT_DOMINATES)
    return Report(out, ["status", "iterations", "infeasibility"], [[v.status, v.iterations, v.infeasibility]], code)


def cmd_refine(args) -> Report:
    E = refine_to_pure(io.load_ensemble(args.mu))
    return Report(io.ensemble_to_json(E), ["atom", "weight", "purity"], _atom_rows(E))


def cmd_steer(args) -> Report:
    E = io.load_ensemble(args.mu)
    target, _ = io.load_state(args.target)
    out, eps = steer_barycenter(E, target)
    rows = [r + [eps] for r in _atom_rows(out)]
    return Report({"ensemble": io.ensemble_to_json(out), "epsilon": eps}, ["atom", "weight", "purity", "epsilon"], rows)


def cmd_approx(args) -> Report:
    rho, _ = io.load_state(args.state)
    if args.n < 1:
        raise ValidationError(f"--n must be >= 1, got {args.n}")
    params = validate_char_params(args.case, _params(args.params), rho.shape[0])
    ns = np.arange(1, args.n + 1)
    sweep = [float(approx_char_stack(args.case, params, int(k), rho[None])[0]) for k in ns]
    g = float(_g_values(args.case, params, rho[None])[0])
    out = {
        "case": args.case,
        "n": args.n,
        "g": g,
        "value": sweep[-1],
        "sweep": [{"n": int(k), "value": v} for k, v in zip(ns, sweep)],
    }
    return Report(out, ["n", "value"], [[int(k), v] for k, v in zip(ns, sweep)])


def remark1_rows(deltas, opts: RoofOptions):
    """(lambda, hull value, 1 - lambda + lambda^2/2) at the maximally mixed qubit."""
    f = purity_gap_functional(2)
    rho = maximally_mixed(2)
    rows = []
    for lam in deltas:
        if not 0.0 < lam < 1.0:
            raise ValidationError(f"deltas must lie in (0, 1), got {lam}")
        o = RoofOptions(members=opts.members, restarts=opts.restarts, tol=opts.tol, seed=opts.seed, mix=lam)
        res = concave_hull(f, rho, o)
        rows.append([lam, res.value, 1.0 - lam + 0.5 * lam * lam])
    return rows


def cmd_demo_remark1(args) -> Report:
    rows = remark1_rows(args.deltas, _options(args))
    out = {
        "state": "maximally mixed qubit",
        "functional": "purity-gap",
        "point_value": purity_gap(maximally_mixed(2)),
        "rows": [{"lambda": r[0], "value": r[1], "closed_form": r[2]} for r in rows],
    }
    return Report(out, ["lambda", "value", "closed_form"], rows)


def cmd_demo_efn_sweep(args) -> Report:
    rho, dims = io.load_state(args.state)
    if args.max_n < 2:
        raise ValidationError(f"--max-n must be >= 2, got {args.max_n}")
    opts = _options(args)
    rows = []
    for n in range(2, args.max_n + 1):
        rows.append([n, efn(rho, n, dims or (2, 2), opts, _base(args)).value])
    out = {"rows": [{"n": n, "value": v} for n, v in rows], "seed": args.seed, "restarts": args.restarts}
    return Report(out, ["n", "value"], rows)


def cmd_oracle_wootters(args) -> Report:
    rho, dims = io.load_state(args.state)
    if dims not in (None, (2, 2)):
        raise UnsupportedInputError(f"the concurrence formula needs 2x2 dims, got {dims}")
    value = wootters_eof(rho, _base(args))
    C = concurrence(rho)
    return Report({"method": "wootters", "value": value, "concurrence": C}, ["value", "concurrence"], [[value, C]])


def cmd_oracle_brute(args) -> Report:
    rho, dims = io.load_state(args.state)
    f = functional_from_selector(args.fn, rho.shape[0], dims, _base(args), _params(args.params))
    rep = brute_force_roof(f, rho, args.m, args.resolution)
    out = {"method": rep.method, "value": rep.value, "params": rep.params}
    return Report(out, ["value", "m", "resolution"], [[rep.value, args.m, args.resolution]])


# -- parser -------------------------------------------------------------------


def _float_list(text):
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0, help="base seed for random restarts (default 0)")
    common.add_argument("--restarts", type=int, default=32, help="optimizer restarts (default 32)")
    common.add_argument("--members", type=int, default=None, help="decomposition size m (default rank^2)")
    common.add_argument("--tol", type=float, default=1e-9, help="sweep improvement tolerance (default 1e-9)")
    common.add_argument("--base", default="2", choices=["2", "e"], help="logarithm base (default 2)")
    common.add_argument("--format", default="json", choices=["json", "csv"], help="report format")
    common.add_argument("--output", default=None, help="write the report here instead of standard output")

    p = argparse.ArgumentParser(
        prog="choquet-roof",
        description="Convex roofs, concave hulls and convex-order checks for finite-dimensional states.",
        epilog="Set CHOQUET_ROOF_THREADS to cap worker threads used for optimizer restarts.",
    )
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, func, help_text, csv_key=None, parent=sub):
        sp = parent.add_parser(name, parents=[common], help=help_text, epilog=CSV_HELP[csv_key or name])
        sp.set_defaults(func=func)
        return sp

    sp = add("eof", cmd_eof, "entanglement of formation (convex roof of reduced entropy)")
    sp.add_argument("state")
    sp = add("efn", cmd_efn, "convex roof of the truncated entropy H_n")
    sp.add_argument("state")
    sp.add_argument("--n", type=int, required=True)
    for name, func, text in (("roof", cmd_roof, "convex roof of a functional"), ("hat", cmd_hat, "concave hull of a functional")):
        sp = add(name, func, text)
        sp.add_argument("--fn", required=True, help=SELECTOR_HELP)
        sp.add_argument("--params", default=None, help="JSON parameters for charfn selectors")
        sp.add_argument("state")
        if name == "hat":
            sp.add_argument("--mix", type=float, default=None, help="fix the mixing parameter instead of searching")
    sp = add("order", cmd_order, "decide whether ensemble MU dominates NU in the convex order")
    sp.add_argument("mu")
    sp.add_argument("nu")
    sp = add("refine", cmd_refine, "split every atom into its eigen-decomposition")
    sp.add_argument("mu")
    sp = add("steer", cmd_steer, "move the barycenter of an ensemble to a target state")
    sp.add_argument("mu")
    sp.add_argument("target")
    sp = add("approx", cmd_approx, "characteristic-function approximator 1 - (1 - g)^(1/n)")
    sp.add_argument("--case", required=True, choices=["set", "face", "rank"])
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--params", default=None, help="JSON: {'vectors': ...}, {'projector': ...} or {'k': k}")
    sp.add_argument("state")

    demo = sub.add_parser("demo", help="worked demonstrations")
    dsub = demo.add_subparsers(dest="demo", required=True)
    sp = add("remark1", cmd_demo_remark1, "hull of the purity gap at I/2 for shrinking mixing", parent=dsub)
    sp.add_argument("--deltas", type=_float_list, default=[0.1, 0.01, 0.001])
    sp = add("efn-sweep", cmd_demo_efn_sweep, "H_n roofs for n = 2..max-n", parent=dsub)
    sp.add_argument("state")
    sp.add_argument("--max-n", type=int, required=True)

    oracle = sub.add_parser("oracle", help="reference values")
    osub = oracle.add_subparsers(dest="oracle", required=True)
    sp = add("wootters", cmd_oracle_wootters, "closed-form two-qubit entanglement of formation", parent=osub)
    sp.add_argument("state")
    sp = add("brute-force", cmd_oracle_brute, "grid-search roof for a qubit state", parent=osub)
    sp.add_argument("--fn", required=True, help=SELECTOR_HELP)
    sp.add_argument("--params", default=None)
    sp.add_argument("--m", type=int, default=2)
    sp.add_argument("--resolution", type=int, default=200)
    sp.add_argument("state")
    return p


def render(report: Report, fmt: str) -> str:
    if fmt == "csv":
        return io.to_csv(report.header, report.rows)
    return io.dumps(report.json)


def run_command(argv) -> tuple[int, str]:
    """Parse ``argv``, run the subcommand and return ``(exit code, rendered report)``.

    Errors are reported on standard error; the returned text is empty then.
    With ``--output`` the report is also written to that file.
    """
    code, text, _ = _execute(argv)
    return code, text


def _execute(argv):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0), "", None
    try:
        report = args.func(args)
        text = render(report, args.format)
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_MALFORMED, "", args
    except (UnsupportedInputError, ConvergenceError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_AMBIGUOUS, "", args
    if args.output:
        try:
            with open(args.output, "w") as fh:
                fh.write(text)
        except OSError as exc:
            print(f"error: cannot write {args.output}: {exc.strerror}", file=sys.stderr)
            return EXIT_MALFORMED, "", args
    return report.code, text, args


def main(argv=None) -> int:
    code, text, args = _execute(sys.argv[1:] if argv is None else argv)
    if text and not (args is not None and args.output):
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
