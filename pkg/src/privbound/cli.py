"""Command-line front end.

Exit codes: 0 success, 1 validation or schema error, 2 a verification
failed, 3 a resource cap was exceeded.
"""

from __future__ import annotations

import argparse
import os
import sys

from privbound import audit, bounds, divergence, fclass, mia, posterior
from privbound.dist import Dataset, align
from privbound.errors import ResourceError, ValidationError, VerificationError
from privbound.report import dumps, load_distribution, load_json, mechanism_from_dict

EXIT_OK, EXIT_INVALID, EXIT_VERIFY, EXIT_RESOURCE = 0, 1, 2, 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ValidationError(message)


def _grid(text: str) -> list[float]:
    try:
        a, b, step = (float(x) for x in text.split(":"))
    except ValueError:
        raise ValidationError(f"--eps-grid must look like A:B:STEP, got {text!r}") from None
    return audit.eps_grid(a, b, step)


def _threads(value) -> int:
    if value is None:
        value = os.environ.get("PRIVBOUND_THREADS")
    if value is None:
        return os.cpu_count() or 1
    try:
        n = int(value)
    except ValueError:
        raise ValidationError(f"thread count must be an integer, got {value!r}") from None
    if n < 1:
        raise ValidationError("thread count must be >= 1")
    return n


def _emit(text: str, out: str | None) -> None:
    if out in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(out, "w", newline="") as fh:
            fh.write(text)


def _pair(args):
    if not (args.p and args.q):
        raise ValidationError("--p and --q are required")
    p, q = load_distribution(args.p), load_distribution(args.q)
    if getattr(args, "align", False):
        p, q = align(p, q)
    return p, q


def cmd_divergence(args):
    p, q = _pair(args)
    if args.kind == "ipm":
        if not args.fclass:
            raise ValidationError("--kind ipm needs --fclass")
        value = divergence.ipm(p, q, fclass.FunctionClass.from_dict(load_json(args.fclass)))
    else:
        value = {"tv": divergence.tv, "kl": divergence.kl, "symkl": divergence.sym_kl}[args.kind](p, q)
    _emit(dumps({"kind": args.kind, "value": value, "infinite": value == float("inf")}), args.out)
    return EXIT_OK


def cmd_fnorm(args):
    F = fclass.FunctionClass.from_dict(load_json(args.fclass))
    g_obj = load_json(args.g)
    g = fclass.BoundedFunction(g_obj.get("name", "g"), dict(g_obj["values"])) \
        if isinstance(g_obj, dict) and "values" in g_obj else None
    if g is None:
        raise ValidationError("--g must hold an object with a 'values' table")
    sol = fclass.represent(g, F)
    body = {"feasible": sol.optimal, "norm": sol.objective if sol.optimal else None}
    if sol.optimal:
        body["intercept"] = sol.intercept
        body["weights"] = {f.name: float(w) for f, w in zip(F.functions, sol.weights)}
    _emit(dumps(body), args.out)
    return EXIT_OK


def cmd_gamma(args):
    F = fclass.FunctionClass.from_dict(load_json(args.fclass))
    family = fclass.GeneratorFamily.from_dict(load_json(args.gen))
    if args.mu:
        res = fclass.gamma_mu(F, family, load_distribution(args.mu))
    else:
        res = fclass.gamma(F, family)
    _emit(dumps({"gamma": res.value, "feasible": res.feasible,
                 "pair": list(res.pair) if res.pair else None}), args.out)
    return EXIT_OK


def _inputs(args) -> bounds.BoundInputs:
    return bounds.BoundInputs(
        m=args.m, n=args.n, k=args.k, xi=args.xi, delta_sup=args.delta_sup,
        delta_prime=args.delta_prime, gamma=args.gamma, gamma_mu=args.gamma_mu,
        p=args.p_dim, L=args.L, tau_opt=args.tau_opt, approx_err=args.approx_err,
        eps_f=args.eps_f)


def _need(args, *names):
    missing = [n for n in names if getattr(args, n) is None]
    if missing:
        raise ValidationError("missing " + ", ".join("--" + n.replace("_", "-") for n in missing))


def cmd_bound(args):
    which = args.which
    if which == "achievable":
        _need(args, "eps")
        b = bounds.dp_delta_achievable(args.eps, _inputs(args))
        body = {"delta": b.value, "raw": b.raw, "vacuous": b.vacuous}
    elif which == "converse":
        _need(args, "eps")
        b = bounds.dp_delta_converse(args.eps, _inputs(args))
        body = {"delta": b.value, "raw": b.raw, "vacuous": b.vacuous}
    elif which == "kl-pdp":
        _need(args, "s", "eps")
        body = {"delta": bounds.kl_to_pdp_delta(args.s, args.eps)}
    elif which == "dp-tv":
        _need(args, "eps", "delta")
        body = {"tv_bound": bounds.dp_to_tv_bound(args.eps, args.delta)}
    elif which == "eps-tv":
        eps_f = args.eps_f if args.eps_f is not None else _inputs(args).eps_f_value()
        b = bounds.epsilon_tv(args.gamma_mu, eps_f)
        body = {"eps_tv": b.value, "raw": b.raw, "clamped": b.vacuous}
    else:
        _need(args, "r")
        body = {"auc_bound": bounds.auc_bound(args.r)}
    _emit(dumps(body), args.out)
    return EXIT_OK


def cmd_audit(args):
    mech = mechanism_from_dict(load_json(args.mech))
    grid = _grid(args.eps_grid) if args.eps_grid else list(audit.DEFAULT_EPS_GRID)
    profile = audit.audit_mechanism(mech, grid, threads=_threads(args.threads))
    _emit(profile.to_csv(), args.out)
    return EXIT_OK


def cmd_pdp_verify(args):
    p, q = _pair(args)
    report = audit.verify_pdp(p, q, args.eps, args.delta)
    _emit(dumps(report.to_dict()), args.out)
    return EXIT_OK if report.passed else EXIT_VERIFY


def cmd_roc(args):
    if args.which in ("envelope", "tight"):
        _need(args, "r")
        curve = mia.roc_envelope(args.r) if args.which == "envelope" \
            else mia.np_roc(*mia.tight_pair(args.r))
    elif args.which == "exact":
        curve = mia.np_roc(*_pair(args))
    else:
        _need(args, "samples")
        p, q = _pair(args)
        curve = mia.empirical_roc(p, q, args.samples, args.seed)
    _emit(curve.to_csv(), args.out)
    return EXIT_OK


def cmd_posterior(args):
    model = posterior.GibbsModel.from_dict(load_json(args.model))
    if args.which == "check":
        _need(args, "alpha")
        res = posterior.train_posterior(model, args.alpha)
        ok = res.deviation <= args.tol
        _emit(dumps({"alpha": args.alpha, "train_posterior": res.dist.to_dict(),
                     "deviation": res.deviation, "tol": args.tol, "passed": ok}), args.out)
        return EXIT_OK if ok else EXIT_VERIFY
    if args.which == "params":
        _need(args, "dataset")
        weights = posterior.param_posterior(model, Dataset.from_dict(load_json(args.dataset)))
        _emit(dumps({"weights": dict(zip(weights.support, weights.probs.tolist()))}), args.out)
        return EXIT_OK
    _need(args, "alpha")
    rep = posterior.model_mia_report(model, args.alpha)
    _emit(dumps({"alpha": args.alpha, "auc": rep.auc, "tv": rep.tv,
                 "auc_bound": bounds.auc_bound(rep.tv),
                 "roc": rep.curve.vertices.tolist()}), args.out)
    return EXIT_OK


def cmd_mia(args):
    rep = mia.gan_mia_report(args.gamma_mu, args.eps_f)
    _emit(dumps(rep.to_dict()), args.out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--out", default=None, help="output path (default: stdout)")
    common.add_argument("--threads", default=None,
                        help="worker threads (default: $PRIVBOUND_THREADS or all cores)")

    parser = _Parser(prog="privbound", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    pd = sub.add_parser("divergence", parents=[common])
    pd.add_argument("--kind", required=True, choices=["tv", "kl", "symkl", "ipm"])
    pd.add_argument("--p", required=True)
    pd.add_argument("--q", required=True)
    pd.add_argument("--fclass")
    pd.add_argument("--align", action="store_true", help="union the supports, zero-filling")
    pd.set_defaults(func=cmd_divergence)

    pf = sub.add_parser("fnorm", parents=[common])
    pf.add_argument("--g", required=True)
    pf.add_argument("--fclass", required=True)
    pf.set_defaults(func=cmd_fnorm)

    pg = sub.add_parser("gamma", parents=[common])
    pg.add_argument("--fclass", required=True)
    pg.add_argument("--gen", required=True)
    pg.add_argument("--mu")
    pg.set_defaults(func=cmd_gamma)

    pb = sub.add_parser("bound", parents=[common])
    pb.add_argument("which", choices=["achievable", "converse", "kl-pdp", "dp-tv", "eps-tv", "auc"])
    pb.add_argument("--eps", type=float)
    pb.add_argument("--m", type=int, default=1)
    pb.add_argument("--n", type=int, default=1)
    pb.add_argument("--k", type=int, default=1)
    pb.add_argument("--xi", type=float, default=0.0)
    pb.add_argument("--delta-sup", type=float, default=1.0)
    pb.add_argument("--delta-prime", type=float, default=0.0)
    pb.add_argument("--gamma", type=float, default=1.0)
    pb.add_argument("--gamma-mu", type=float, default=0.0)
    pb.add_argument("--p", dest="p_dim", type=float, default=0.0, help="parameter dimension")
    pb.add_argument("--L", type=float, default=0.0)
    pb.add_argument("--tau-opt", type=float, default=0.0)
    pb.add_argument("--approx-err", type=float, default=0.0)
    pb.add_argument("--eps-f", type=float)
    pb.add_argument("--s", type=float)
    pb.add_argument("--delta", type=float)
    pb.add_argument("--r", type=float)
    pb.set_defaults(func=cmd_bound)

    pa = sub.add_parser("audit", parents=[common])
    pa.add_argument("--mech", required=True)
    pa.add_argument("--eps-grid")
    pa.set_defaults(func=cmd_audit)

    pv = sub.add_parser("pdp-verify", parents=[common])
    pv.add_argument("--p", required=True)
    pv.add_argument("--q", required=True)
    pv.add_argument("--eps", type=float, required=True)
    pv.add_argument("--delta", type=float, required=True)
    pv.set_defaults(func=cmd_pdp_verify)

    pr = sub.add_parser("roc", parents=[common])
    pr.add_argument("which", choices=["envelope", "exact", "empirical", "tight"])
    pr.add_argument("--r", type=float)
    pr.add_argument("--p")
    pr.add_argument("--q")
    pr.add_argument("--samples", type=int)
    pr.add_argument("--seed", type=int, default=0)
    pr.set_defaults(func=cmd_roc)

    pp = sub.add_parser("posterior", parents=[common])
    pp.add_argument("which", choices=["check", "params", "mia"])
    pp.add_argument("--model", required=True)
    pp.add_argument("--alpha")
    pp.add_argument("--dataset")
    pp.add_argument("--tol", type=float, default=1e-10)
    pp.set_defaults(func=cmd_posterior)

    pm = sub.add_parser("mia", parents=[common])
    pm.add_argument("which", choices=["gan-report"])
    pm.add_argument("--gamma-mu", type=float, required=True)
    pm.add_argument("--eps-f", type=float, required=True)
    pm.set_defaults(func=cmd_mia)
    return parser


def run(argv: list[str] | None = None) -> int:
    try:
        try:
            args = build_parser().parse_args(argv)
        except SystemExit as exc:  # --help
            return int(exc.code or 0)
        if args.threads is not None:
            _threads(args.threads)
        return args.func(args)
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except VerificationError as exc:
        print(f"verification failed: {exc}", file=sys.stderr)
        return EXIT_VERIFY
    except ResourceError as exc:
        print(f"resource limit: {exc}", file=sys.stderr)
        return EXIT_RESOURCE


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
