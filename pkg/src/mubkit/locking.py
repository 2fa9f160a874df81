"""Locking ensembles, measurements and accessible information.

An ensemble sends basis vector b^t_k with probability p[t, k]. Alice's side is
measured in the (k, t) labels, so everything reduces to the classical mutual
information between the label (t, k) and the outcome of Bob's measurement.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from ._parallel import ordered_map
from .entropy import average_bound
from .linalg import TOL_NORM, entropy_bits, random_unitary, von_neumann_entropy
from .mubs import (
    PAULI_FAMILIES,
    Basis,
    PauliString,
    pauli_string_operator,
    pauli_strings,
)
from .uncertainty import minimize_avg_entropy, witness_state, objective

TOL_POVM = 1e-9


# ---------------------------------------------------------------------------
# ensembles and measurements

def uniform_prior(m, d):
    return np.full((m, d), 1.0 / (m * d))


def basis_prior(weights, d):
    """p[t, k] = weights[t] / d."""
    w = np.asarray(weights, dtype=float)
    return np.repeat(w[:, None] / d, d, axis=1)


def validate_prior(prior, shape=None):
    prior = np.asarray(prior, dtype=float)
    if prior.ndim != 2:
        raise ValueError("prior must be an m x d array")
    if shape is not None and prior.shape != tuple(shape):
        raise ValueError(f"prior has shape {prior.shape}, expected {tuple(shape)}")
    if np.any(prior < -TOL_NORM):
        raise ValueError("prior has negative weights")
    if abs(prior.sum() - 1) > TOL_NORM:
        raise ValueError(f"prior sums to {prior.sum():.12g}")
    return np.clip(prior, 0.0, None)


@dataclass(frozen=True, eq=False)
class Ensemble:
    mubset: object
    prior: np.ndarray

    def __post_init__(self):
        prior = validate_prior(self.prior, (self.mubset.m, self.mubset.dim))
        prior.setflags(write=False)
        object.__setattr__(self, "prior", prior)

    @property
    def dim(self):
        return self.mubset.dim

    @property
    def m(self):
        return self.mubset.m

    @property
    def states(self):
        """(m, d, d) array; states[t][:, k] is b^t_k."""
        return self.mubset.unitaries()

    @property
    def basis_marginal(self):
        return self.prior.sum(axis=1)

    def is_uniform(self, tol=1e-12):
        return bool(np.max(np.abs(self.prior - 1.0 / self.prior.size)) <= tol)

    def average_state(self):
        """mu = sum_{t,k} p[t,k] |b^t_k><b^t_k|."""
        us = self.states
        return np.einsum("tik,tk,tjk->ij", us, self.prior, us.conj())

    def to_dict(self):
        return {
            "dim": self.dim,
            "m": self.m,
            "family": self.mubset.family,
            "prior": self.prior.tolist(),
        }


def build_locking_ensemble(mubset, prior=None):
    if prior is None:
        prior = uniform_prior(mubset.m, mubset.dim)
    return Ensemble(mubset, prior)


@dataclass(frozen=True, eq=False)
class Povm:
    """Rank-one POVM {alpha_i |Phi_i><Phi_i|}; ``vectors`` holds the Phi_i as rows."""

    weights: np.ndarray
    vectors: np.ndarray
    label: str = ""

    def __post_init__(self):
        w = np.asarray(self.weights, dtype=float).copy()
        v = np.asarray(self.vectors, dtype=complex).copy()
        if v.ndim != 2 or w.shape != (v.shape[0],):
            raise ValueError("need one weight per vector")
        if np.any(w < 0):
            raise ValueError("POVM weights must be nonnegative")
        norms = np.linalg.norm(v, axis=1)
        if np.max(np.abs(norms - 1)) > TOL_NORM:
            raise ValueError("POVM vectors must be normalized")
        w.setflags(write=False)
        v.setflags(write=False)
        object.__setattr__(self, "weights", w)
        object.__setattr__(self, "vectors", v)
        if self.completeness_defect() > TOL_POVM:
            raise ValueError(f"POVM elements do not sum to identity "
                             f"(defect {self.completeness_defect():.3g})")

    @property
    def dim(self):
        return self.vectors.shape[1]

    def __len__(self):
        return len(self.weights)

    def completeness_defect(self):
        s = (self.vectors.T * self.weights) @ self.vectors.conj()
        return float(np.max(np.abs(s - np.eye(self.dim))))

    @classmethod
    def from_basis(cls, basis, label=None):
        u = np.asarray(getattr(basis, "matrix", basis))
        return cls(np.ones(u.shape[1]), u.T, label if label is not None else getattr(basis, "label", ""))


def joint_distribution(ensemble, povm):
    """q[i, t, k] = p[t, k] alpha_i |<Phi_i|b^t_k>|^2."""
    if povm.dim != ensemble.dim:
        raise ValueError(f"POVM acts on dimension {povm.dim}, ensemble has {ensemble.dim}")
    ov = np.abs(np.einsum("ia,tak->itk", povm.vectors.conj(), ensemble.states)) ** 2
    return ov * povm.weights[:, None, None] * ensemble.prior[None]


def mutual_info_for_measurement(ensemble, povm):
    """I(label : outcome) = H(prior) - H(label | outcome), in bits."""
    q = joint_distribution(ensemble, povm)
    h_prior = entropy_bits(ensemble.prior)
    h_cond = entropy_bits(q) - entropy_bits(q.sum(axis=(1, 2)))
    return max(h_prior - h_cond, 0.0)


# ---------------------------------------------------------------------------
# explicit measurements

BELL_2Q = np.array(
    [[1, 0, 0, 1], [1, 0, 0, -1], [0, 1, 1, 0], [0, 1, -1, 0]], dtype=complex
).T / np.sqrt(2)


def bell_basis(n):
    """Tensor products of two-qubit Bell vectors on n qubits, column i = Gamma_i."""
    if n < 2 or n % 2:
        raise ValueError(f"Bell measurement needs an even number of qubits, got {n}")
    mat = BELL_2Q
    for _ in range(n // 2 - 1):
        mat = np.kron(mat, BELL_2Q)
    return Basis(mat, f"bell^{n // 2}")


def covariant_povm_from_state(psi, p, N):
    """{(1/d) P_ab^dag |psi>} over all p^(2N) Pauli strings P_ab; d = p^N."""
    psi = np.asarray(psi, dtype=complex)
    d = p**N
    if psi.shape != (d,):
        raise ValueError(f"state has dimension {psi.shape[0]}, expected {p}^{N} = {d}")
    psi = psi / np.linalg.norm(psi)
    vecs = [pauli_string_operator(ps).conj().T @ psi for ps in pauli_strings(p, N, True)]
    return Povm(np.full(d * d, 1.0 / d), np.array(vecs), f"covariant p={p} N={N}")


def _pauli_structure(mubset):
    """(p, N) such that the set is covariant under Pauli strings on (C^p)^N, else None."""
    d = mubset.dim
    fam = mubset.family
    if fam == "product":
        fam = mubset.base_family
        s = math.isqrt(d)
        if fam == "prime_pauli":
            return s, 2
        if fam == "qubit_triple":
            return 2, 2 * int(round(math.log2(s)))
        return None
    if fam == "prime_pauli":
        return d, 1
    if fam == "qubit_triple":
        return 2, int(round(math.log2(d)))
    return None


# ---------------------------------------------------------------------------
# accessible information

@dataclass
class AccessibleInfoResult:
    value: float
    kind: str  # exact_covariant | lower_bound_measurement | heuristic_search
    certificate: dict = field(default_factory=dict)

    def to_dict(self):
        return {"value": self.value, "kind": self.kind, "certificate": self.certificate}


def iacc_covariant(mubset, min_result=None, restarts=32, seed=0):
    """log2 d minus the minimum average entropy, for Pauli-covariant families.

    The certificate records the mutual information attained by the covariant
    POVM built from the minimizing state, and by the Bell measurement when the
    set is a qubit triple on an even number of qubits.
    """
    structure = _pauli_structure(mubset)
    if structure is None:
        raise ValueError(f"family {mubset.family!r} has no Pauli covariance")
    if min_result is None:
        min_result = minimize_avg_entropy(mubset, restarts=restarts, seed=seed)
    d = mubset.dim
    value = float(np.log2(d) - min_result.best_value)

    ens = build_locking_ensemble(mubset)
    p, N = structure
    povm = covariant_povm_from_state(min_result.best_state, p, N)
    cert = {
        "min_avg_entropy": min_result.best_value,
        "measurement": f"covariant POVM, {len(povm)} elements (p={p}, N={N})",
        "measurement_value": mutual_info_for_measurement(ens, povm),
        "povm_completeness_defect": povm.completeness_defect(),
    }
    if mubset.family == "qubit_triple" and N % 2 == 0:
        cert["bell_value"] = mutual_info_for_measurement(ens, Povm.from_basis(bell_basis(N)))
    return AccessibleInfoResult(value, "exact_covariant", cert)


def iacc_latin(mubset):
    """(log2 d)/2 for a Latin-square set with m >= 2, attained in the computational basis."""
    if mubset.family != "latin_square":
        raise ValueError(f"expected a latin_square set, got {mubset.family!r}")
    if mubset.m < 2:
        raise ValueError("need at least two bases")
    d = mubset.dim
    ens = build_locking_ensemble(mubset)
    attained = mutual_info_for_measurement(ens, Povm.from_basis(np.eye(d)))
    w = witness_state(mubset)
    min_avg = objective(mubset.unitaries(), w)
    value = average_bound(d)
    cert = {
        "measurement": "computational basis",
        "measurement_value": attained,
        "witness_avg_entropy": min_avg,
        "upper_bound": float(np.log2(d) - average_bound(d)),
        "consistent": bool(abs(attained - value) <= 1e-9 and abs(min_avg - value) <= 1e-9),
    }
    return AccessibleInfoResult(value, "exact_covariant", cert)


_GIVENS_MOVES = ((1, 0.0), (-1, 0.0), (1, np.pi / 2), (-1, np.pi / 2))


def _measurement_mi(ensemble, v):
    """Mutual information of the projective measurement with columns of v."""
    ov = np.abs(np.einsum("ai,tak->itk", v.conj(), ensemble.states)) ** 2
    q = ov * ensemble.prior[None]
    return entropy_bits(ensemble.prior) - entropy_bits(q) + entropy_bits(q.sum(axis=(1, 2)))


def _pattern_ascent(ensemble, v, step=0.5, min_step=1e-6, decay=0.7, max_sweeps=4000):
    d = v.shape[0]
    best = _measurement_mi(ensemble, v)
    pairs = [(i, j) for i in range(d) for j in range(i + 1, d)]
    for _ in range(max_sweeps):
        if step < min_step:
            break
        improved = False
        for i, j in pairs:
            for sign, phi in _GIVENS_MOVES:
                c, s = math.cos(sign * step), math.sin(sign * step)
                e = complex(math.cos(phi), math.sin(phi))
                trial = v.copy()
                trial[:, i] = c * v[:, i] + e * s * v[:, j]
                trial[:, j] = -np.conj(e) * s * v[:, i] + c * v[:, j]
                val = _measurement_mi(ensemble, trial)
                if val > best + 1e-15:
                    v, best, improved = trial, val, True
        if not improved:
            step *= decay
    return v, best


def iacc_lower_search(ensemble, restarts=64, seed=0, min_step=1e-6):
    """Lower bound on the accessible information from projective measurements.

    Pattern search over orthonormal bases by two-coordinate rotations, started
    from each encoding basis and from ``restarts`` Haar-random bases (restart r
    uses ``default_rng(seed + r)``). The step shrinks by 0.7 after a sweep with
    no improvement and the search stops once it drops below ``min_step``.
    """
    if restarts < 1:
        raise ValueError("restarts must be at least 1")
    d = ensemble.dim
    starts = [np.array(b.matrix) for b in ensemble.mubset]

    def run_basis(v):
        return _pattern_ascent(ensemble, v, min_step=min_step)

    def run_random(r):
        return _pattern_ascent(ensemble, random_unitary(d, np.random.default_rng(seed + r)),
                               min_step=min_step)

    results = ordered_map(run_basis, starts) + ordered_map(run_random, range(restarts))
    best_idx = 0
    for idx, (_, val) in enumerate(results):
        if val > results[best_idx][1] + 1e-15:
            best_idx = idx
    v, val = results[best_idx]
    val = min(val, float(np.log2(ensemble.m * d)))
    origin = (f"encoding basis {best_idx}" if best_idx < len(starts)
              else f"random restart {best_idx - len(starts)}")
    cert = {
        "measurement": "projective, pattern search",
        "start": origin,
        "restarts": restarts,
        "seed": seed,
        "basis": [[[float(z.real), float(z.imag)] for z in v[:, k]] for k in range(d)],
    }
    return AccessibleInfoResult(float(val), "heuristic_search", cert)


# ---------------------------------------------------------------------------
# gap between locked and unlocked information

@dataclass
class GapReport:
    n: int
    h_joint: float
    h_basis: float
    s_mu: float
    s_nu: float
    iacc: float
    iacc_kind: str
    measurement_value: float
    delta: float
    delta_exact: bool
    gap1_bound: float
    final_bound: float
    chain_ok: bool

    def to_dict(self):
        return {
            "n": self.n,
            "H_joint": self.h_joint,
            "H_basis": self.h_basis,
            "S_mu": self.s_mu,
            "S_nu": self.s_nu,
            "iacc": self.iacc,
            "iacc_kind": self.iacc_kind,
            "measurement_value": self.measurement_value,
            "delta": self.delta,
            "delta_exact": self.delta_exact,
            "gap1_bound": self.gap1_bound,
            "final_bound": self.final_bound,
            "chain_ok": self.chain_ok,
        }


def locking_gap(ensemble, povm=None, min_result=None, restarts=16, seed=0):
    """Gap H(p_tk) - I_acc - H(p_t) between unlocked and locked information.

    With a uniform prior the exact accessible information is used and ``delta``
    is exact. Otherwise I_acc is replaced by the value of the measurement, which
    makes ``delta`` an upper bound on the gap.
    """
    if ensemble.mubset.family != "qubit_triple":
        raise ValueError("the gap chain is defined for qubit_triple ensembles")
    n = int(round(math.log2(ensemble.dim)))
    if povm is None:
        povm = Povm.from_basis(bell_basis(n))

    prior = ensemble.prior
    h_joint = entropy_bits(prior)
    h_basis = entropy_bits(ensemble.basis_marginal)
    mu = ensemble.average_state()
    mu = (mu + mu.conj().T) / 2
    s_mu = von_neumann_entropy(mu)
    probs = np.real(np.einsum("ia,ab,ib->i", povm.vectors.conj(), mu, povm.vectors))
    nu = (povm.vectors.T * (povm.weights * probs)) @ povm.vectors.conj()
    s_nu = von_neumann_entropy((nu + nu.conj().T) / 2)
    meas = mutual_info_for_measurement(ensemble, povm)

    if ensemble.is_uniform():
        res = iacc_covariant(ensemble.mubset, min_result, restarts=restarts, seed=seed)
        iacc, kind, exact = res.value, res.kind, True
    else:
        iacc, kind, exact = meas, "lower_bound_measurement", False

    delta = h_joint - iacc - h_basis
    gap1 = h_joint - s_nu + n / 2 - h_basis
    tol = 1e-9
    chain_ok = (
        h_joint <= h_basis + s_mu + tol
        and s_mu <= s_nu + tol
        and delta <= gap1 + tol
        and gap1 <= n / 2 + tol
    )
    return GapReport(n, h_joint, h_basis, s_mu, s_nu, iacc, kind, meas, delta, exact,
                     gap1, n / 2, bool(chain_ok))


def unlocked_info(ensemble):
    """log2 d + log2 m, the correlation once the basis label is announced."""
    if not ensemble.is_uniform():
        raise ValueError("unlocked information log d + log m needs a uniform prior; "
                         "use the prior entropy instead")
    return float(np.log2(ensemble.dim) + np.log2(ensemble.m))
