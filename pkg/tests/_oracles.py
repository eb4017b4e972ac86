"""Dense-matrix oracle for Pauli arithmetic, shared across test modules."""

import numpy as np

from contextuality.pauli import GaussianStateVector, PauliOperator

_X = np.array([[0, 1], [1, 0]], dtype=complex)
_Z = np.array([[1, 0], [0, -1]], dtype=complex)


def op_matrix(p: PauliOperator) -> np.ndarray:
    """i^phase times the tensor product of single-qubit factors
    i^{x z} X^x Z^z, qubit 1 at the most significant bit."""
    out = np.array([[1]], dtype=complex)
    for k in range(p.n - 1, -1, -1):
        xb = (p.x >> k) & 1
        zb = (p.z >> k) & 1
        fac = np.eye(2, dtype=complex)
        if xb:
            fac = fac @ _X
        if zb:
            fac = fac @ _Z
        fac = (1j ** (xb * zb)) * fac
        out = np.kron(out, fac)
    return (1j ** p.phase) * out


def all_ops(n):
    return [PauliOperator(n, x, z, ph)
            for x in range(1 << n) for z in range(1 << n) for ph in range(4)]


def state_vector(v: GaussianStateVector) -> np.ndarray:
    return np.array([re + 1j * im for re, im in v.entries], dtype=complex)
