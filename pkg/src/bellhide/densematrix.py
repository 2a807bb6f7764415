"""Dense-matrix oracle for ``n <= 4`` Bell pairs.

Operators are plain complex ``numpy`` arrays of shape ``(4**n, 4**n)``.
Qubits are interleaved as ``(A1, B1, A2, B2, ...)``: pair ``i`` occupies
qubits ``2i`` (Alice) and ``2i + 1`` (Bob), so a Bell string maps to the
Kronecker product of its pair vectors in order.
"""

from __future__ import annotations

import json
from functools import lru_cache

import numpy as np

from .bellcode import CapExceeded, BellString, PauliString
from .states import BellDiagonalState, WernerForm

DENSE_CAP = 4
PPT_TOL = 1e-9
HERMITIAN_TOL = 1e-12

_SQ2 = np.sqrt(0.5)
_BELL = np.array(
    [
        [_SQ2, 0, 0, _SQ2],  # Phi+
        [_SQ2, 0, 0, -_SQ2],  # Phi-
        [0, _SQ2, _SQ2, 0],  # Psi+
        [0, _SQ2, -_SQ2, 0],  # Psi-
    ],
    dtype=complex,
)

PAULI = {
    0: np.eye(2, dtype=complex),
    1: np.array([[1, 0], [0, -1]], dtype=complex),  # Z
    2: np.array([[0, 1], [1, 0]], dtype=complex),  # X
    3: np.array([[0, -1j], [1j, 0]], dtype=complex),  # Y
}


def _n_from_dim(dim: int) -> int:
    n, d = 0, 1
    while d < dim:
        d *= 4
        n += 1
    if d != dim:
        raise ValueError(f"dimension {dim} is not a power of 4")
    return n


def _check_n(n: int) -> None:
    if n < 1:
        raise ValueError("n must be positive")
    if n > DENSE_CAP:
        raise CapExceeded(f"n={n} exceeds dense-matrix cap {DENSE_CAP}")


def _square(a: np.ndarray) -> int:
    a = np.asarray(a)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {a.shape}")
    n = _n_from_dim(a.shape[0])
    if n > DENSE_CAP:
        raise CapExceeded(f"n={n} exceeds dense-matrix cap {DENSE_CAP}")
    return n


def bell_vector(sym: int) -> np.ndarray:
    return _BELL[sym].copy()


@lru_cache(maxsize=None)
def _bell_basis(n: int) -> np.ndarray:
    # column k is the product vector of BellString.from_index(k, n)
    basis = np.ones((1, 1), dtype=complex)
    for _ in range(n):
        basis = np.kron(basis, _BELL.T)
    basis.setflags(write=False)
    return basis


def bell_basis(n: int) -> np.ndarray:
    """Unitary whose columns are the ``4**n`` Bell product vectors in lexicographic order."""
    _check_n(n)
    return _bell_basis(n)


def string_vector(s: BellString) -> np.ndarray:
    _check_n(len(s))
    v = np.ones(1, dtype=complex)
    for x in s:
        v = np.kron(v, _BELL[x])
    return v


def projector(s: BellString) -> np.ndarray:
    v = string_vector(s)
    return np.outer(v, v.conj())


def diagonal_operator(n: int, diag) -> np.ndarray:
    """``sum_s diag[s] |s><s|`` for a length-``4**n`` vector indexed by string index."""
    u = bell_basis(n)
    d = np.asarray(diag, dtype=float)
    if d.shape != (4**n,):
        raise ValueError(f"expected {4**n} diagonal entries, got {d.shape}")
    return (u * d) @ u.conj().T


def realize(state: BellDiagonalState) -> np.ndarray:
    _check_n(state.n)
    diag = np.zeros(4**state.n)
    for s, w in state.weights.items():
        diag[s.index] = float(w)
    return diagonal_operator(state.n, diag)


def phi_plus_projector(n: int) -> np.ndarray:
    return projector(BellString([0] * n))


def swap_operator(n: int) -> np.ndarray:
    """Exchange of Alice's and Bob's ``n``-qubit registers, in interleaved layout."""
    _check_n(n)
    d = 4**n
    idx = np.arange(d)
    swapped = np.zeros_like(idx)
    for q in range(n):
        a = (idx >> (2 * n - 1 - 2 * q)) & 1
        b = (idx >> (2 * n - 2 - 2 * q)) & 1
        swapped |= (b << (2 * n - 1 - 2 * q)) | (a << (2 * n - 2 - 2 * q))
    out = np.zeros((d, d), dtype=complex)
    out[swapped, idx] = 1
    return out


def partial_transpose(a: np.ndarray) -> np.ndarray:
    """Transpose every Bob qubit (odd positions in the interleaved order)."""
    n = _square(a)
    t = np.asarray(a).reshape([2] * (4 * n))
    axes = list(range(4 * n))
    for q in range(n):
        row, col = 2 * q + 1, 2 * n + 2 * q + 1
        axes[row], axes[col] = col, row
    return t.transpose(axes).reshape(4**n, 4**n)


def werner_operator(form: WernerForm) -> np.ndarray:
    """Dense ``a*I + c*H`` with ``H = PT(|Phi+><Phi+|^n)``."""
    _check_n(form.n)
    h = partial_transpose(phi_plus_projector(form.n))
    return float(form.identity_coeff) * np.eye(4**form.n) + float(form.h_coeff) * h


def is_hermitian(a: np.ndarray, tol: float = HERMITIAN_TOL) -> bool:
    a = np.asarray(a)
    return bool(np.max(np.abs(a - a.conj().T), initial=0.0) <= tol)


def eigenvalues(a: np.ndarray) -> np.ndarray:
    _square(a)
    if not is_hermitian(a, 1e-9):
        raise ValueError("matrix is not hermitian")
    return np.linalg.eigvalsh(a)


def min_eigenvalue(a: np.ndarray) -> float:
    return float(eigenvalues(a)[0])


def is_ppt(a: np.ndarray, tol: float = PPT_TOL) -> bool:
    """Peres test: the partial transpose has no eigenvalue below ``-tol``."""
    return min_eigenvalue(partial_transpose(a)) >= -tol


def to_ab_order(a: np.ndarray) -> np.ndarray:
    """Reorder an interleaved operator to (all Alice qubits, all Bob qubits)."""
    n = _square(a)
    perm = [2 * q for q in range(n)] + [2 * q + 1 for q in range(n)]
    return _permute_qubits(a, perm)


def from_ab_order(a: np.ndarray) -> np.ndarray:
    """Inverse of :func:`to_ab_order`: map ``A (x) B`` register order to interleaved."""
    n = _square(a)
    perm = [0] * (2 * n)
    for q in range(n):
        perm[2 * q] = q
        perm[2 * q + 1] = n + q
    return _permute_qubits(a, perm)


def _permute_qubits(a: np.ndarray, perm: list[int]) -> np.ndarray:
    # new qubit k is old qubit perm[k]
    m = len(perm)
    t = np.asarray(a).reshape([2] * (2 * m))
    axes = list(perm) + [m + p for p in perm]
    return t.transpose(axes).reshape(2**m, 2**m)


def choi_residual(m: np.ndarray) -> np.ndarray:
    """Normalized state left on the ancillas after measuring ``m`` on halves of local maximally entangled pairs.

    Alice entangles her ``n`` qubits with ``n`` private ancillas, Bob does the
    same, the two system registers are measured with ``m`` and the ancillas
    are kept.  The result should equal ``m.T / Tr m``.
    """
    n = _square(m)
    m = np.asarray(m, dtype=complex)
    tr = np.trace(m).real
    if tr <= 0:
        raise ValueError("operator must have positive trace")
    if min_eigenvalue((m + m.conj().T) / 2) < -PPT_TOL:
        raise ValueError("operator is not positive semidefinite")
    d_local = 2**n
    # one party's state: sum_i |i>_sys |i>_anc / sqrt(2**n), indices (sys, anc)
    local = np.eye(d_local, dtype=complex) / np.sqrt(d_local)
    # joint state over (A_sys, A_anc, B_sys, B_anc) -> (sys in AB order, anc in AB order)
    joint = np.einsum("ac,bd->abcd", local, local).reshape(4**n, 4**n)
    # system and ancilla registers both in AB order; measurement acts in interleaved order
    m_ab = to_ab_order(m)
    # rho_anc[p, q] = sum_{x, z} M[x, z] psi[z, p] conj(psi[x, q])
    rho = np.einsum("xz,zp,xq->pq", m_ab, joint, joint.conj())
    rho = from_ab_order(rho)
    return rho / np.trace(rho).real


def trace_pair(a: np.ndarray, b: np.ndarray) -> float:
    a, b = np.asarray(a), np.asarray(b)
    if a.shape != b.shape:
        raise ValueError(f"dimension mismatch: {a.shape} vs {b.shape}")
    val = np.einsum("ij,ji->", a, b)
    if is_hermitian(a) and is_hermitian(b) and abs(val.imag) > 1e-12:
        raise ArithmeticError(f"trace of hermitian product has imaginary part {val.imag}")
    return float(val.real)


def alice_pauli(m: PauliString) -> np.ndarray:
    """``sigma_m`` on Alice's qubits, identity on Bob's, in interleaved layout."""
    _check_n(len(m))
    op = np.ones((1, 1), dtype=complex)
    for code in m:
        op = np.kron(op, np.kron(PAULI[code], PAULI[0]))
    return op


def bell_diagonal(a: np.ndarray) -> np.ndarray:
    """Diagonal entries ``<s|a|s>`` in the Bell product basis."""
    n = _square(a)
    u = bell_basis(n)
    return np.einsum("ij,ik,kj->j", u.conj(), np.asarray(a), u).real


def trace_distance(a: np.ndarray, b: np.ndarray) -> float:
    d = np.asarray(a) - np.asarray(b)
    return 0.5 * float(np.sum(np.abs(np.linalg.eigvalsh((d + d.conj().T) / 2))))


def dump_json(a: np.ndarray) -> str:
    """Row-major ``[re, im]`` pairs, for debugging only."""
    a = np.asarray(a, dtype=complex)
    return json.dumps({"dim": a.shape[0], "entries": [[float(z.real), float(z.imag)] for z in a.ravel()]})


def spot_checks(n_max: int = 2, seed: int = 0, random_operators: int = 20) -> list[dict]:
    """Dense identities used as a quick oracle self-test; one record per check."""
    from .states import hiding_state, werner_form

    _check_n(n_max)
    out = []

    def add(name, n, value, expected, tol):
        out.append({"check": name, "n": n, "value": value, "expected": expected, "tol": tol,
                    "ok": bool(abs(value - expected) <= tol)})

    pt = partial_transpose(phi_plus_projector(1))
    rhs = 0.5 * (projector(BellString([0])) + projector(BellString([1])) + projector(BellString([2])) - projector(BellString([3])))
    add("pt_phi_plus_identity", 1, float(np.max(np.abs(pt - rhs))), 0.0, 1e-12)
    rng = np.random.default_rng(seed)
    for n in range(1, n_max + 1):
        h = partial_transpose(phi_plus_projector(n))
        add("trace_h", n, float(np.trace(h).real), 1.0, 1e-12)
        r0, r1 = realize(hiding_state(n, 0)), realize(hiding_state(n, 1))
        for b, r in ((0, r0), (1, r1)):
            diff = float(np.max(np.abs(r - werner_operator(werner_form(n, b)))))
            add(f"werner_form_b{b}", n, diff, 0.0, 1e-12)
        add("orthogonality", n, trace_pair(r0, r1), 0.0, 1e-12)
        add("min_eig_pt_rho1", n, min_eigenvalue(partial_transpose(r1)), (1 - 2**n) / (4**n - 2**n), PPT_TOL)
        m0 = min(min_eigenvalue(partial_transpose(r0)), 0.0)
        add("pt_rho0_nonnegative", n, m0, 0.0, PPT_TOL)
        worst = 0.0
        for _ in range(random_operators):
            g = rng.normal(size=(4**n, 4**n)) + 1j * rng.normal(size=(4**n, 4**n))
            m = g @ g.conj().T
            worst = max(worst, float(np.max(np.abs(choi_residual(m) - m.T / np.trace(m).real))))
        add("choi_residual_transpose", n, worst, 0.0, 1e-12)
    return out
