"""Command-line front end.

Results go to stdout as JSON (15 significant digits, fixed key order);
diagnostics go to stderr. Exit codes: 0 success/pass, 1 check failed,
2 usage or input error.
"""

import argparse
import json
import math
import sys

import numpy as np

from . import designs, locking, mubs, reproduce, uncertainty
from .entropy import full_set_bound
from .linalg import entropy_bits
from .serialize import dumps, load_mubset, mubset_to_json, round_floats


class InputError(Exception):
    pass


def _emit(obj, out=None):
    text = dumps(obj)
    if out:
        with open(out, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def _parse_subset(text):
    if not text:
        return None
    try:
        return [int(x) for x in text.split(",")]
    except ValueError as exc:
        raise InputError(f"bad --subset {text!r}") from exc


def _require(args, name):
    val = getattr(args, name)
    if val is None:
        raise InputError(f"--{name.replace('_', '-')} is required for this family")
    return val


def _build(family, args):
    if family == "prime":
        return mubs.prime_mubs(_require(args, "dim"))
    if family == "qubit-triple":
        return mubs.qubit_triple(_require(args, "n"))
    if family == "latin":
        return mubs.latin_square_mubs(_require(args, "s"))
    raise InputError(f"unknown family {family!r}")


def cmd_construct(args):
    if args.family == "product":
        if args.base is None:
            raise InputError("--base is required for the product family")
        base = _build(args.base, args)
        subset = _parse_subset(args.subset)
        if subset is not None:
            base = base.subset(subset)
        S = mubs.product_mubs(base)
    else:
        S = _build(args.family, args)
        subset = _parse_subset(args.subset)
        if subset is not None:
            S = S.subset(subset)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(mubset_to_json(S) + "\n")
    else:
        print(mubset_to_json(S))
    return 0


def _pauli_params(S):
    if S.family == "prime_pauli":
        return S.dim, 1
    if S.family == "qubit_triple":
        return 2, int(round(math.log2(S.dim)))
    raise InputError(f"pauli-perm needs a prime_pauli or qubit_triple set, got {S.family!r}")


def cmd_check(args):
    S = load_mubset(args.set_path)
    if args.what == "mub":
        rep = mubs.check_mub(S, args.tol)
        report = {"what": "mub", "family": S.family, "dim": S.dim, "m": S.m, **rep.to_dict()}
        passed = rep.passed
    elif args.what == "design":
        defect = designs.two_design_defect(S)
        passed = defect <= args.tol
        report = {"what": "design", "family": S.family, "dim": S.dim, "m": S.m,
                  "defect": defect, "tol": args.tol, "passed": passed}
    else:
        p, N = _pauli_params(S)
        reps = [mubs.permutation_witness(S, ps) for ps in mubs.pauli_strings(p, N)]
        passed = all(r.passed for r in reps)
        report = {"what": "pauli-perm", "family": S.family, "dim": S.dim, "m": S.m,
                  "strings": len(reps), "passed": passed,
                  "permutations": [r.to_dict() for r in reps]}
    _emit(report)
    return 0 if passed else 1


def cmd_entropy_min(args):
    S = load_mubset(args.set_path)
    res = uncertainty.minimize_avg_entropy(S, restarts=args.restarts, seed=args.seed, tol=args.tol)
    cert = uncertainty.certify_tightness(S, res, args.tol_cert)
    full = full_set_bound(S.dim) if S.dim >= 2 else None
    report = {
        "family": S.family,
        "dim": S.dim,
        "m": S.m,
        "bound": cert.lower_bound,
        "achieved": cert.achieved,
        "achieved_sum": cert.achieved * S.m,
        "gap": cert.gap,
        "verdict": "tight" if cert.tight else "not-tight",
        "full_set_bound": full,
        "is_full_set": S.m == S.dim + 1,
        "result": res.to_dict(),
    }
    if args.format == "json":
        _emit(report)
    elif args.format == "csv":
        print("quantity,value")
        for key in ("dim", "m", "bound", "achieved", "achieved_sum", "gap", "verdict",
                    "full_set_bound"):
            print(f"{key},{round_floats(report[key])}")
        print(f"converged,{res.converged}")
        print(f"gradient_norm,{round_floats(res.gradient_norm_at_solution)}")
    else:
        print(f"{S.family}: d={S.dim}, m={S.m}")
        print(f"  lower bound (log d)/2   {cert.lower_bound:.10f}")
        if full is not None:
            print(f"  full-set bound          {full:.10f}")
        print(f"  achieved minimum (mean) {cert.achieved:.10f}")
        print(f"  gap                     {cert.gap:.3e}  -> {report['verdict']}")
        if res.witness_match:
            print("  attained by the analytic witness state")
    return 0


def _load_prior(spec, S):
    if spec in (None, "uniform"):
        return locking.uniform_prior(S.m, S.dim)
    try:
        with open(spec) as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"cannot read prior file {spec!r}: {exc}") from exc
    if "weights" in data:
        return np.asarray(data["weights"], dtype=float)
    if "basis_weights" in data:
        return locking.basis_prior(data["basis_weights"], S.dim)
    raise InputError("prior file needs 'weights' (m x d) or 'basis_weights' (length m)")


def cmd_iacc(args):
    S = load_mubset(args.set_path)
    prior = _load_prior(args.prior, S)
    ens = locking.build_locking_ensemble(S, prior)
    if args.mode in ("covariant", "latin") and not ens.is_uniform():
        raise InputError(f"--mode {args.mode} is exact only for the uniform prior; use search")
    if args.mode == "covariant":
        if locking._pauli_structure(S) is None:
            raise InputError(f"family {S.family!r} has no Pauli covariance")
        res = locking.iacc_covariant(S, restarts=args.restarts, seed=args.seed)
    elif args.mode == "latin":
        if S.family != "latin_square":
            raise InputError("--mode latin needs a latin_square set")
        res = locking.iacc_latin(S)
    else:
        res = locking.iacc_lower_search(ens, restarts=args.restarts, seed=args.seed)
    report = {"family": S.family, "dim": S.dim, "m": S.m, "mode": args.mode, **res.to_dict()}
    if ens.is_uniform():
        unlocked = locking.unlocked_info(ens)
    else:
        unlocked = entropy_bits(ens.prior)
    report["unlocked_info"] = unlocked
    report["locked_info"] = res.value
    if S.family == "qubit_triple":
        report["contrast"] = (
            f"without the basis label: {res.value:.6f} bits; "
            f"with it: {unlocked:.6f} bits (log d + log m)"
        )
    _emit(report)
    return 0


def cmd_gap(args):
    if args.n < 2 or args.n % 2:
        raise InputError(f"--n must be an even integer >= 2, got {args.n}")
    S = mubs.qubit_triple(args.n)
    d = S.dim
    if args.prior == "uniform":
        priors = [locking.uniform_prior(3, d)]
    elif args.prior == "random":
        rng = np.random.default_rng(args.seed)
        priors = [rng.dirichlet(np.ones(3 * d)).reshape(3, d) for _ in range(args.trials)]
    else:
        priors = [_load_prior(args.prior, S)]
    reports = [locking.locking_gap(locking.build_locking_ensemble(S, p), seed=args.seed).to_dict()
               for p in priors]
    worst = max(max(r["delta"], r["gap1_bound"]) for r in reports)
    _emit({"n": args.n, "trials": len(reports), "max_bound": worst, "final_bound": args.n / 2,
           "all_within_final_bound": bool(worst <= args.n / 2 + 1e-9), "reports": reports})
    return 0


def cmd_reproduce(args):
    results = reproduce.run_all(echo=print)
    passed = sum(r.passed for r in results)
    print(f"{passed}/{len(results)} checks passed")
    return 0 if passed == len(results) else 1


def build_parser():
    parser = argparse.ArgumentParser(prog="mubkit", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("construct", help="build a MUB set and write it as JSON")
    p.add_argument("--family", required=True, choices=["prime", "qubit-triple", "latin", "product"])
    p.add_argument("--base", choices=["prime", "qubit-triple", "latin"],
                   help="base family for --family product")
    p.add_argument("--dim", type=int, help="prime dimension (prime family)")
    p.add_argument("--s", type=int, help="prime side (latin family)")
    p.add_argument("--n", type=int, help="number of qubits (qubit-triple family)")
    p.add_argument("--subset", help="comma-separated 0-based basis indices to keep")
    p.add_argument("--out", help="output path (default stdout)")
    p.set_defaults(func=cmd_construct)

    p = sub.add_parser("check", help="verify a stored MUB set")
    p.add_argument("set_path")
    p.add_argument("--what", choices=["mub", "design", "pauli-perm"], default="mub")
    p.add_argument("--tol", type=float, default=1e-9)
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("entropy-min", help="minimize the average measurement entropy")
    p.add_argument("set_path")
    p.add_argument("--restarts", type=int, default=64)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--tol", type=float, default=1e-7)
    p.add_argument("--tol-cert", type=float, default=1e-5)
    p.add_argument("--format", choices=["json", "csv", "text"], default="json")
    p.set_defaults(func=cmd_entropy_min)

    p = sub.add_parser("iacc", help="accessible information of the locking ensemble")
    p.add_argument("set_path")
    p.add_argument("--prior", default="uniform", help="'uniform' or a JSON prior file")
    p.add_argument("--mode", choices=["covariant", "latin", "search"], default="covariant")
    p.add_argument("--restarts", type=int, default=32)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_iacc)

    p = sub.add_parser("gap", help="locked vs unlocked information for the qubit triple")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--prior", default="uniform", help="'uniform', 'random' or a JSON prior file")
    p.add_argument("--trials", type=int, default=50)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_gap)

    p = sub.add_parser("reproduce", help="run every reproduction check and print a table")
    p.set_defaults(func=cmd_reproduce)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (InputError, ValueError, KeyError, TypeError, OSError, json.JSONDecodeError) as exc:
        print(f"mubkit {args.command}: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
