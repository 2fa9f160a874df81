"""Mutually unbiased bases: constructions, certificates and Pauli covariance.

A :class:`Basis` is a unitary whose columns are the basis vectors, so vector
``k`` (0-based in code, ``k+1`` in the usual 1-based labelling) is
``basis.matrix[:, k]``.

Families built here:

* ``prime_pauli``: d+1 bases for prime d, eigenbases of Z, X, XZ, ..., XZ^(d-1)
* ``qubit_triple``: the images of the computational basis under I^n, H^n, K^n
* ``latin_square``: s+1 bases of C^s (x) C^s from orthogonal Latin squares
* ``product``: U_t (x) conj(U_t) applied to the computational basis of C^s (x) C^s
"""

from dataclasses import dataclass, field
from itertools import combinations, product

import numpy as np

from . import squares as sq
from .linalg import TOL_NORM, hermitian_eigen, phase_normalize, tensor

TOL_MUB = 1e-9
TOL_PERM = 1e-8

FAMILIES = ("prime_pauli", "qubit_triple", "latin_square", "product", "custom")
PAULI_FAMILIES = ("prime_pauli", "qubit_triple")

HADAMARD = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)
SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
K_GATE = (np.eye(2) + 1j * SIGMA_X) / np.sqrt(2)


@dataclass(frozen=True, eq=False)
class Basis:
    matrix: np.ndarray
    label: str = ""

    def __post_init__(self):
        m = np.array(self.matrix, dtype=complex)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValueError("basis matrix must be square")
        if not np.all(np.isfinite(m)):
            raise ValueError("basis contains non-finite amplitudes")
        defect = np.max(np.abs(m.conj().T @ m - np.eye(m.shape[0])))
        if defect > TOL_NORM:
            raise ValueError(f"basis vectors are not orthonormal (defect {defect:.3g})")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    @property
    def dim(self):
        return self.matrix.shape[0]

    @property
    def vectors(self):
        return [self.matrix[:, k] for k in range(self.dim)]

    def __len__(self):
        return self.dim

    def __getitem__(self, k):
        return self.matrix[:, k]


@dataclass(frozen=True, eq=False)
class MubSet:
    """Ordered family of bases of the same dimension.

    Unbiasedness is not enforced on construction; ``check_mub`` certifies it.
    ``base_family`` records, for product sets, which family they were built from.
    """

    bases: tuple
    family: str = "custom"
    metadata: str = ""
    base_family: str | None = None

    def __post_init__(self):
        bases = tuple(self.bases)
        if not bases:
            raise ValueError("a MUB set needs at least one basis")
        dims = {b.dim for b in bases}
        if len(dims) != 1:
            raise ValueError(f"bases have different dimensions {sorted(dims)}")
        if self.family not in FAMILIES:
            raise ValueError(f"unknown family {self.family!r}")
        object.__setattr__(self, "bases", bases)

    @property
    def dim(self):
        return self.bases[0].dim

    @property
    def m(self):
        return len(self.bases)

    def __len__(self):
        return len(self.bases)

    def __iter__(self):
        return iter(self.bases)

    def __getitem__(self, t):
        return self.bases[t]

    def unitaries(self):
        """Stacked (m, d, d) array of basis matrices."""
        return np.stack([b.matrix for b in self.bases])

    def subset(self, indices):
        """Sub-family with the bases at ``indices`` (0-based), keeping family tags."""
        indices = list(indices)
        meta = f"{self.metadata}; subset {indices}" if self.metadata else f"subset {indices}"
        return MubSet(tuple(self.bases[i] for i in indices), self.family, meta, self.base_family)

    def to_dict(self):
        data = {
            "dim": self.dim,
            "family": self.family,
            "metadata": self.metadata,
            "bases": [
                [[[float(z.real), float(z.imag)] for z in vec] for vec in b.vectors]
                for b in self.bases
            ],
        }
        if self.base_family is not None:
            data["base_family"] = self.base_family
        data["labels"] = [b.label for b in self.bases]
        return data

    @classmethod
    def from_dict(cls, data):
        d = int(data["dim"])
        labels = data.get("labels") or [""] * len(data["bases"])
        bases = []
        for raw, label in zip(data["bases"], labels):
            arr = np.asarray(raw, dtype=float)
            if arr.shape != (d, d, 2):
                raise ValueError(f"basis has shape {arr.shape}, expected {(d, d, 2)}")
            bases.append(Basis((arr[..., 0] + 1j * arr[..., 1]).T, label))
        return cls(tuple(bases), data.get("family", "custom"), data.get("metadata", ""),
                   data.get("base_family"))


# ---------------------------------------------------------------------------
# generalized Pauli matrices

def pauli_x(d):
    """Cyclic shift X|k> = |k+1 mod d>."""
    if d < 2:
        raise ValueError("d must be at least 2")
    x = np.zeros((d, d), dtype=complex)
    for k in range(d):
        x[(k + 1) % d, k] = 1
    return x


def pauli_z(d):
    """Clock Z|k> = w^k |k> with w = exp(2 pi i/d) and 1-based k."""
    if d < 2:
        raise ValueError("d must be at least 2")
    w = np.exp(2j * np.pi / d)
    return np.diag(w ** np.arange(1, d + 1))


@dataclass(frozen=True)
class PauliString:
    p: int
    a: tuple
    b: tuple

    def __post_init__(self):
        a = tuple(int(x) for x in self.a)
        b = tuple(int(x) for x in self.b)
        if len(a) != len(b) or not a:
            raise ValueError("exponent vectors must have equal, nonzero length")
        if any(not 0 <= x < self.p for x in a + b):
            raise ValueError(f"exponents must lie in 0..{self.p - 1}")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)

    @property
    def N(self):
        return len(self.a)

    @property
    def is_identity(self):
        return not any(self.a) and not any(self.b)

    def __str__(self):
        return "".join(f"X{a}Z{b}" for a, b in zip(self.a, self.b))


def pauli_strings(p, N, include_identity=False):
    """All p^(2N) strings, ordered by (a, b) lexicographically."""
    out = []
    for a in product(range(p), repeat=N):
        for b in product(range(p), repeat=N):
            ps = PauliString(p, a, b)
            if include_identity or not ps.is_identity:
                out.append(ps)
    return out


def pauli_string_operator(ps):
    x, z = pauli_x(ps.p), pauli_z(ps.p)
    factors = [
        np.linalg.matrix_power(x, a) @ np.linalg.matrix_power(z, b) for a, b in zip(ps.a, ps.b)
    ]
    return tensor(*factors)


# ---------------------------------------------------------------------------
# constructions

def _joint_eigenbasis(m):
    """Eigenbasis of a normal matrix from its Hermitian parts.

    A = M + M^dag is diagonalized first; degenerate eigenspaces of A are split
    with B = i(M^dag - M). Vectors are ordered by (eig A, eig B) ascending.
    """
    a = m + m.conj().T
    b = 1j * (m.conj().T - m)
    wa, va = hermitian_eigen(a)
    cols = []
    start = 0
    for k in range(1, len(wa) + 1):
        if k == len(wa) or wa[k] - wa[k - 1] > 1e-8:
            block = va[:, start:k]
            if block.shape[1] == 1:
                cols.append(block[:, 0])
            else:
                sub = block.conj().T @ b @ block
                wb, vb = hermitian_eigen(sub)
                if np.any(np.diff(wb) <= 1e-8):
                    raise ValueError("degenerate spectrum: eigenbasis is not unique")
                for j in range(len(wb)):
                    cols.append(phase_normalize(block @ vb[:, j]))
            start = k
    return np.column_stack(cols)


def prime_mubs(d):
    """The d+1 Pauli MUBs of prime dimension d."""
    if not sq.is_prime(d):
        raise ValueError(f"dimension {d} is not prime")
    x, z = pauli_x(d), pauli_z(d)
    bases = [Basis(np.eye(d), "Z")]
    for b in range(d):
        m = x @ np.linalg.matrix_power(z, b)
        label = "X" if b == 0 else ("XZ" if b == 1 else f"XZ^{b}")
        bases.append(Basis(_joint_eigenbasis(m), label))
    meta = f"prime_pauli d={d}; Z|k>=w^k|k> with 1-based k (global phase w vs 0-based)"
    return MubSet(tuple(bases), "prime_pauli", meta)


def qubit_triple(n):
    """Three MUBs in dimension 2^n given by I^n, H^n and K^n, K = (I + i sigma_x)/sqrt 2."""
    if n < 1:
        raise ValueError("n must be at least 1")
    ops = [("I", np.eye(2, dtype=complex)), ("H", HADAMARD), ("K", K_GATE)]
    bases = tuple(Basis(tensor(*[u] * n), f"{name}^{n}") for name, u in ops)
    return MubSet(bases, "qubit_triple", f"qubit_triple n={n}")


def latin_basis(square):
    """Basis of C^s (x) C^s from one square.

    Vector index (t-1)*s + (l-1) holds (1/sqrt s) sum_m w^((t-1)(m-1)) |i_m, j_m>,
    where (i_m, j_m) are the cells with symbol l in row-major order.
    """
    s = square.side
    w = np.exp(2j * np.pi / s)
    mat = np.zeros((s * s, s * s), dtype=complex)
    for t in range(s):
        for ell in range(1, s + 1):
            col = t * s + (ell - 1)
            for m, (i, j) in enumerate(square.cells_with(ell)):
                mat[(i - 1) * s + (j - 1), col] = w ** (t * m) / np.sqrt(s)
    return Basis(mat, f"{square.kind}")


def latin_square_mubs(s):
    """s+1 MUBs in dimension s^2 from the affine Latin squares plus row/column squares."""
    family = sq.orthogonal_family(s)  # raises for non-prime s
    bases = []
    for k, square in enumerate(family):
        b = latin_basis(square)
        label = f"L{k + 1}" if square.kind == "latin" else square.kind
        bases.append(Basis(b.matrix, label))
    meta = f"latin_square s={s}; affine MOLS cell(i,j)=k(i-1)+(j-1) mod s, k=1..{s - 1}"
    return MubSet(tuple(bases), "latin_square", meta)


def product_mubs(base, tol=TOL_MUB):
    """Bases U_t|k> (x) conj(U_t)|l>, ordered by (k, l), in dimension s^2."""
    report = check_mub(base, tol)
    if not report.passed:
        raise ValueError("base set is not a valid MUB set")
    bases = tuple(
        Basis(np.kron(b.matrix, b.matrix.conj()), f"{b.label}(x){b.label}*") for b in base
    )
    meta = f"product of {base.family} (d={base.dim}, m={base.m})"
    return MubSet(bases, "product", meta, base_family=base.base_family or base.family)


# ---------------------------------------------------------------------------
# certificates

@dataclass
class CertificateReport:
    tol: float
    orthonormality_defects: list
    pair_deviations: dict
    max_orthonormality_defect: float
    max_deviation: float
    failing_pairs: list
    passed: bool

    def to_dict(self):
        return {
            "passed": self.passed,
            "tol": self.tol,
            "max_orthonormality_defect": self.max_orthonormality_defect,
            "max_deviation": self.max_deviation,
            "failing_pairs": [list(p) for p in self.failing_pairs],
            "orthonormality_defects": self.orthonormality_defects,
            "pair_deviations": [
                {"pair": list(k), "deviation": v} for k, v in self.pair_deviations.items()
            ],
        }


def check_mub(mubset, tol=TOL_MUB):
    """Orthonormality of each basis and max | |<b|b'>|^2 - 1/d | for each pair (0-based)."""
    d = mubset.dim
    us = [b.matrix for b in mubset]
    ortho = [float(np.max(np.abs(u.conj().T @ u - np.eye(d)))) for u in us]
    devs = {}
    for s, t in combinations(range(len(us)), 2):
        g = np.abs(us[s].conj().T @ us[t]) ** 2
        devs[(s, t)] = float(np.max(np.abs(g - 1.0 / d)))
    failing = [k for k, v in devs.items() if v > tol]
    max_dev = max(devs.values(), default=0.0)
    passed = not failing and max(ortho) <= tol
    return CertificateReport(tol, ortho, devs, max(ortho), max_dev, failing, passed)


@dataclass
class PermutationReport:
    pauli: str
    permutations: list  # per basis: list of 0-based images, None where no match
    passed: bool
    max_defect: float

    def to_dict(self):
        return {
            "pauli": self.pauli,
            "passed": self.passed,
            "max_defect": self.max_defect,
            "permutations": self.permutations,
        }


def permutation_witness(mubset, ps, tol=TOL_PERM):
    """Check that the Pauli string maps each basis vector to another one up to phase."""
    if mubset.family not in PAULI_FAMILIES:
        raise ValueError(f"family {mubset.family!r} is not built from Pauli operators")
    if ps.p**ps.N != mubset.dim:
        raise ValueError(f"Pauli string acts on dimension {ps.p ** ps.N}, set has {mubset.dim}")
    op = pauli_string_operator(ps)
    perms = []
    passed = True
    worst = 0.0
    for b in mubset:
        overlap = np.abs(b.matrix.conj().T @ op @ b.matrix) ** 2  # [k', k]
        images = []
        for k in range(b.dim):
            kp = int(np.argmax(overlap[:, k]))
            defect = abs(overlap[kp, k] - 1)
            worst = max(worst, defect)
            if defect <= tol:
                images.append(kp)
            else:
                images.append(None)
                passed = False
        matched = [i for i in images if i is not None]
        if len(set(matched)) != len(matched):
            passed = False
        perms.append(images)
    return PermutationReport(str(ps), perms, passed, worst)
