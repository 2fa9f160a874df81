"""End-to-end reproduction checks, one function per result.

Each check returns a :class:`Check` with a pass flag and a short detail line.
``run_all`` is what ``mubkit reproduce`` prints.
"""

import math
import os
from dataclasses import dataclass
from itertools import combinations

import numpy as np

from . import designs, entropy, locking, mubs, uncertainty
from .linalg import random_state


@dataclass
class Check:
    number: int
    title: str
    passed: bool
    detail: str

    def line(self):
        return f"[{'PASS' if self.passed else 'FAIL'}] {self.number:2d}. {self.title}: {self.detail}"


def _states(d, n, seed):
    rng = np.random.default_rng(seed)
    v = rng.standard_normal((d, n)) + 1j * rng.standard_normal((d, n))
    return v / np.linalg.norm(v, axis=0)


def constructed_sets():
    base = (
        [(f"prime d={d}", mubs.prime_mubs(d)) for d in (2, 3, 5, 7)]
        + [(f"qubit_triple n={n}", mubs.qubit_triple(n)) for n in (1, 2, 3)]
        + [(f"latin s={s}", mubs.latin_square_mubs(s)) for s in (2, 3, 5)]
    )
    return base + [(f"product({name})", mubs.product_mubs(S)) for name, S in base]


def check_constructions():
    worst = 0.0
    failed = []
    for name, S in constructed_sets():
        rep = mubs.check_mub(S, 1e-9)
        worst = max(worst, rep.max_deviation, rep.max_orthonormality_defect)
        if not (rep.passed and rep.max_deviation < 1e-9):
            failed.append(name)
    return Check(1, "construction validity", not failed,
                 f"20 sets, worst defect {worst:.2e}" + (f", failed {failed}" if failed else ""))


def worked_example_vectors():
    """The s=3 vectors printed for the first Latin square, as 9-vectors over |i,j>."""
    w = np.exp(2j * np.pi / 3)

    def ket(*terms):
        v = np.zeros(9, dtype=complex)
        for coef, (i, j) in terms:
            v[(i - 1) * 3 + (j - 1)] += coef
        return v / np.sqrt(3)

    return {
        "v11": ket((1, (1, 1)), (1, (2, 3)), (1, (3, 2))),
        "v12": ket((1, (1, 2)), (1, (2, 1)), (1, (3, 3))),
        "v13": ket((1, (1, 3)), (1, (2, 2)), (1, (3, 1))),
        "v11 (again)": ket((1, (1, 1)), (1, (2, 3)), (1, (3, 2))),
        "v21": ket((1, (1, 1)), (w, (2, 3)), (w**2, (3, 2))),
        "v31": ket((1, (1, 1)), (w**2, (2, 3)), (w, (3, 2))),
    }


def check_worked_example():
    S = mubs.latin_square_mubs(3)
    allvecs = np.concatenate([b.matrix for b in S], axis=1)
    worst = 1.0
    for v in worked_example_vectors().values():
        fid = float(np.max(np.abs(allvecs.conj().T @ v) ** 2))
        worst = min(worst, fid)
    return Check(2, "worked s=3 Latin-square example", worst >= 1 - 1e-10,
                 f"6 printed vectors, min fidelity {worst:.15f}")


def check_two_design():
    worst_defect = 0.0
    worst_moment = 0.0
    for d in (2, 3, 5, 7):
        S = mubs.prime_mubs(d)
        worst_defect = max(worst_defect, designs.two_design_defect(S))
        psis = _states(d, 200, seed=300 + d)
        for n in range(200):
            worst_moment = max(worst_moment, abs(designs.fourth_moment(S, psis[:, n]) - 2))
    ok = worst_defect <= 1e-9 and worst_moment <= 1e-9
    return Check(3, "full Pauli sets are 2-designs", ok,
                 f"max defect {worst_defect:.2e}, max |fourth moment - 2| {worst_moment:.2e}")


def check_entropic_bounds():
    violations = []
    slack = math.inf
    for idx, (name, S) in enumerate(constructed_sets()):
        d = S.dim
        psis = _states(d, 1000, seed=400 + idx)
        h, h2 = entropy.batch_entropies(S.unitaries(), psis)
        avg_h, avg_h2 = h.mean(axis=0), h2.mean(axis=0)
        lb = entropy.average_bound(d)
        slack = min(slack, float(avg_h.min() - lb))
        if avg_h.min() < lb - 1e-9:
            violations.append(f"{name}: average bound")
        if np.any(h < h2 - 1e-12):
            violations.append(f"{name}: H < H2")
        if S.m == d + 1:
            fb = entropy.full_set_bound(d)
            if avg_h.min() < fb - 1e-9 or avg_h2.min() < fb - 1e-9:
                violations.append(f"{name}: full-set bound")
    return Check(4, "entropic lower bounds on random states", not violations,
                 f"20 sets x 1000 states, min slack over (log d)/2 {slack:.3e}"
                 + (f", violations {violations}" if violations else ""))


def _tightness(S, restarts, seed):
    res = uncertainty.minimize_avg_entropy(S, restarts=restarts, seed=seed)
    lb = entropy.average_bound(S.dim)
    w = uncertainty.witness_state(S)
    w_val = uncertainty.objective(S.unitaries(), w)
    return res.best_value - lb, w_val - lb


def check_tightness_square():
    sets = [("product(qubit_triple n=1)", mubs.product_mubs(mubs.qubit_triple(1)))]
    P3 = mubs.prime_mubs(3)
    sets += [(f"product(prime d=3, m={m})", mubs.product_mubs(P3.subset(range(m))))
             for m in (2, 3, 4)]
    worst_gap = worst_w = 0.0
    for k, (_, S) in enumerate(sets):
        gap, wgap = _tightness(S, restarts=16, seed=500 + k)
        worst_gap = max(worst_gap, abs(gap))
        worst_w = max(worst_w, abs(wgap))
    ok = worst_gap <= 1e-6 and worst_w <= 1e-10
    return Check(5, "tightness for product MUBs (d=4, d=9)", ok,
                 f"max |min - (log d)/2| {worst_gap:.2e}, witness {worst_w:.2e}")


def check_tightness_latin():
    S = mubs.latin_square_mubs(3)
    worst_gap = worst_w = 0.0
    count = 0
    for m in (2, 3, 4):
        for idx in combinations(range(S.m), m):
            gap, wgap = _tightness(S.subset(idx), restarts=8, seed=600 + count)
            worst_gap = max(worst_gap, abs(gap))
            worst_w = max(worst_w, abs(wgap))
            count += 1
    ok = worst_gap <= 1e-6 and worst_w <= 1e-10
    return Check(6, "tightness for Latin-square MUBs (s=3)", ok,
                 f"{count} subsets, max |min - log2 3| {worst_gap:.2e}, witness {worst_w:.2e}")


def check_locking_three():
    S = mubs.qubit_triple(2)
    ens = locking.build_locking_ensemble(S)
    bell = locking.mutual_info_for_measurement(ens, locking.Povm.from_basis(locking.bell_basis(2)))
    cov = locking.iacc_covariant(S, restarts=32, seed=7).value
    search = locking.iacc_lower_search(ens, restarts=16, seed=7).value
    unlocked = locking.unlocked_info(ens)
    ok = (abs(bell - 1) <= 1e-9 and abs(cov - 1) <= 1e-6
          and 1 - 1e-4 <= search <= 1 + 1e-6 and search <= cov + 1e-6
          and abs(unlocked - (2 + math.log2(3))) <= 1e-12)
    return Check(7, "locking with three MUBs, n=2", ok,
                 f"Bell {bell:.12f}, covariant {cov:.12f}, search {search:.12f}, "
                 f"unlocked {unlocked:.6f}")


def random_priors_half(count, d, seed):
    """Random p[t, k] over 3 bases whose basis marginals are all <= 1/2."""
    rng = np.random.default_rng(seed)
    out = []
    while len(out) < count:
        pt = rng.dirichlet(np.ones(3))
        if np.any(pt > 0.5):
            continue
        within = rng.dirichlet(np.ones(d), size=3)
        out.append(pt[:, None] * within)
    return out


def check_locking_nonuniform():
    S = mubs.qubit_triple(2)
    ens = locking.build_locking_ensemble(S, locking.basis_prior([0.2, 0.2, 0.6], 4))
    third = locking.mutual_info_for_measurement(ens, locking.Povm.from_basis(S[2]))
    worst = -math.inf
    chain = True
    for prior in random_priors_half(50, 4, seed=8):
        rep = locking.locking_gap(locking.build_locking_ensemble(S, prior))
        worst = max(worst, rep.delta, rep.gap1_bound)
        chain &= rep.chain_ok
    uni = locking.locking_gap(locking.build_locking_ensemble(S), restarts=16, seed=8)
    ok = (third >= 1.2 - 1e-9 and third > 1 and worst <= 1 + 1e-9 and chain
          and abs(uni.delta - 1) <= 1e-9)
    return Check(8, "non-uniform priors and the locking gap", ok,
                 f"basis-3 measurement {third:.12f}, max gap bound over 50 priors "
                 f"{worst:.12f}, uniform gap {uni.delta:.12f}")


def check_locking_latin_product():
    L = mubs.latin_square_mubs(3)
    latin_vals = [locking.iacc_latin(L.subset(range(m))).value for m in (2, 4)]
    worst_latin = max(abs(v - math.log2(3)) for v in latin_vals)
    prods = [mubs.product_mubs(mubs.qubit_triple(1))]
    P3 = mubs.prime_mubs(3)
    prods += [mubs.product_mubs(P3.subset(range(m))) for m in (2, 3, 4)]
    worst_cov = 0.0
    for k, S in enumerate(prods):
        res = locking.iacc_covariant(S, restarts=4, seed=900 + k)
        target = math.log2(S.dim) / 2
        worst_cov = max(worst_cov, abs(res.value - target),
                        abs(res.certificate["measurement_value"] - target))
    ok = worst_latin <= 1e-9 and worst_cov <= 1e-6
    return Check(9, "more bases do not lock more (Latin, product Pauli)", ok,
                 f"Latin m=2,4 max err {worst_latin:.2e}; product sets max err {worst_cov:.2e}")


def check_pauli_covariance():
    count = 0
    ok = True
    for S, p, N in ((mubs.prime_mubs(3), 3, 1), (mubs.qubit_triple(2), 2, 2)):
        for ps in mubs.pauli_strings(p, N):
            ok &= mubs.permutation_witness(S, ps).passed
            count += 1
    worst = 0.0
    rng = np.random.default_rng(10)
    for p, N in ((2, 1), (3, 1), (2, 2), (5, 1), (3, 2)):
        d = p**N
        povm = locking.covariant_povm_from_state(random_state(d, rng), p, N)
        worst = max(worst, povm.completeness_defect(), abs(povm.weights.sum() - d))
    ok &= worst <= 1e-9
    return Check(10, "Pauli strings permute basis vectors", ok,
                 f"{count} strings checked, covariant POVM max defect {worst:.2e}")


def gradient_sets():
    return [
        mubs.prime_mubs(2), mubs.prime_mubs(3), mubs.prime_mubs(5), mubs.prime_mubs(7),
        mubs.qubit_triple(1), mubs.qubit_triple(2), mubs.qubit_triple(3), mubs.qubit_triple(4),
        mubs.latin_square_mubs(2), mubs.latin_square_mubs(3),
        mubs.product_mubs(mubs.qubit_triple(1)), mubs.product_mubs(mubs.prime_mubs(3)),
        mubs.product_mubs(mubs.latin_square_mubs(2)),
    ]


def finite_difference_gradient(us, psi, h=1e-5):
    """Central differences of the objective in the 2d real coordinates."""
    d = psi.shape[0]
    g = np.zeros(d, dtype=complex)
    for i in range(d):
        for unit in (1.0, 1j):
            e = np.zeros(d, dtype=complex)
            e[i] = unit * h
            diff = (uncertainty.objective(us, psi + e) - uncertainty.objective(us, psi - e)) / (2 * h)
            g[i] += diff * unit
    return g


def check_numerical_hygiene():
    sets = gradient_sets()
    rng = np.random.default_rng(11)
    worst_rel = 0.0
    for k in range(100):
        S = sets[k % len(sets)]
        us = S.unitaries()
        psi = random_state(S.dim, rng)
        g = uncertainty.gradient(us, psi)
        fd = finite_difference_gradient(us, psi)
        worst_rel = max(worst_rel, np.linalg.norm(fd - g) / np.linalg.norm(g))

    worst_inv = 0.0
    for S in sets:
        us = S.unitaries()
        psi = random_state(S.dim, rng)
        f = uncertainty.objective(us, psi)
        worst_inv = max(worst_inv, abs(uncertainty.objective(us, np.exp(0.7j) * psi) - f))
        perm = rng.permutation(S.dim)
        for b in S:
            worst_inv = max(worst_inv, abs(entropy.shannon_entropy(b.matrix[:, perm], psi)
                                           - entropy.shannon_entropy(b, psi)))
        rev = S.subset(range(S.m)[::-1])
        worst_inv = max(worst_inv, abs(mubs.check_mub(rev).max_deviation
                                       - mubs.check_mub(S).max_deviation))
        worst_inv = max(worst_inv, abs(designs.two_design_defect(rev)
                                       - designs.two_design_defect(S)))

    S = mubs.qubit_triple(2)
    old = os.environ.get("MUBKIT_THREADS")
    try:
        os.environ["MUBKIT_THREADS"] = "1"
        a = uncertainty.minimize_avg_entropy(S, restarts=6, seed=3)
        os.environ["MUBKIT_THREADS"] = "4"
        b = uncertainty.minimize_avg_entropy(S, restarts=6, seed=3)
    finally:
        if old is None:
            os.environ.pop("MUBKIT_THREADS", None)
        else:
            os.environ["MUBKIT_THREADS"] = old
    same = a.best_value == b.best_value and np.array_equal(a.best_state, b.best_state)

    ok = worst_rel <= 1e-5 and worst_inv <= 1e-12 and same
    return Check(11, "gradient and invariances", ok,
                 f"max FD rel. error {worst_rel:.2e}, max invariance defect {worst_inv:.2e}, "
                 f"thread-count independent: {same}")


CHECKS = (
    check_constructions,
    check_worked_example,
    check_two_design,
    check_entropic_bounds,
    check_tightness_square,
    check_tightness_latin,
    check_locking_three,
    check_locking_nonuniform,
    check_locking_latin_product,
    check_pauli_covariance,
    check_numerical_hygiene,
)


def run_all(echo=None):
    results = []
    for fn in CHECKS:
        res = fn()
        if echo is not None:
            echo(res.line())
        results.append(res)
    return results
