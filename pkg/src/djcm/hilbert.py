"""Dense complex linear algebra for two resonant atom--cavity pairs.

The composite Hilbert space is atom_A (x) atom_B (x) cavity_a (x) cavity_b.
Basis ordering is fixed throughout the package: atoms first, then cavities,

    index = ((atom_A * 2 + atom_B) * (n_max + 1) + photons_a) * (n_max + 1) + photons_b

so a ket written |AB>|ab> maps onto the index above.  Atom level 0 is the
ground state and level 1 the excited state; cavity levels are Fock
occupations 0..n_max.  hbar = 1 everywhere, so energies are angular
frequencies.

Two propagators are provided.  ``SpectralPropagator`` applies exp(-iHt)
exactly through the Hermitian eigendecomposition of H and is the default
route for grid sweeps.  ``evolve_numeric`` is an independent fixed-step
4th-order Runge-Kutta integrator (default step count ceil(200*g*t)) used to
cross-check the spectral route.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "SpaceConfig",
    "IntegrationError",
    "ID2",
    "SIGMA_PLUS",
    "SIGMA_MINUS",
    "SIGMA_Z",
    "basis_index",
    "basis_label",
    "basis_ket",
    "destroy_op",
    "create_op",
    "site_operator",
    "build_hamiltonian",
    "excitation_operator",
    "apply",
    "dagger",
    "kron",
    "is_hermitian",
    "expectation",
    "evolve_numeric",
    "SpectralPropagator",
]

HERMITICITY_TOL = 1e-12
NORM_TOL = 1e-12
# Norm drift past this is an integration failure, not just loss of accuracy.
DRIFT_FAILURE = 1e-6


class IntegrationError(RuntimeError):
    """Raised when numeric propagation loses more norm than the failure budget."""


@dataclass(frozen=True)
class SpaceConfig:
    """Truncated model space and Hamiltonian rates (hbar = 1).

    n_max is the largest Fock occupation kept per cavity.  Both initial-state
    families inject at most one photon per cavity, so n_max=1 is exact; larger
    values only matter for cutoff-independence checks.
    """

    n_max: int = 1
    omega: float = 1.0
    g: float = 1.0

    def __post_init__(self):
        if self.n_max < 1:
            raise ValueError(f"n_max must be >= 1, got {self.n_max}")
        if not (math.isfinite(self.g) and self.g > 0):
            raise ValueError(f"coupling g must be finite and > 0, got {self.g}")
        if not (math.isfinite(self.omega) and self.omega >= 0):
            raise ValueError(f"omega must be finite and >= 0, got {self.omega}")

    @property
    def n_levels(self) -> int:
        return self.n_max + 1

    @property
    def dim(self) -> int:
        return 4 * self.n_levels**2


# Single-qubit operators in the (ground=0, excited=1) index convention.
ID2 = np.eye(2, dtype=complex)
SIGMA_PLUS = np.array([[0, 0], [1, 0]], dtype=complex)   # |1><0|
SIGMA_MINUS = np.array([[0, 1], [0, 0]], dtype=complex)  # |0><1|
SIGMA_Z = np.array([[-1, 0], [0, 1]], dtype=complex)


def destroy_op(n_levels: int) -> np.ndarray:
    """Bosonic annihilation operator on a truncated Fock ladder."""
    return np.diag(np.sqrt(np.arange(1, n_levels, dtype=float)), k=1).astype(complex)


def create_op(n_levels: int) -> np.ndarray:
    return destroy_op(n_levels).conj().T


def basis_index(cfg: SpaceConfig, atom_a: int, atom_b: int, photons_a: int, photons_b: int) -> int:
    """Lexicographic index of the product basis state |atom_a atom_b>|photons_a photons_b>."""
    if atom_a not in (0, 1) or atom_b not in (0, 1):
        raise ValueError("atom levels must be 0 or 1")
    n1 = cfg.n_levels
    if not (0 <= photons_a <= cfg.n_max and 0 <= photons_b <= cfg.n_max):
        raise ValueError(f"photon numbers must lie in 0..{cfg.n_max}")
    return ((atom_a * 2 + atom_b) * n1 + photons_a) * n1 + photons_b


def basis_label(cfg: SpaceConfig, index: int) -> tuple[int, int, int, int]:
    """Inverse of basis_index."""
    if not 0 <= index < cfg.dim:
        raise ValueError(f"index {index} outside 0..{cfg.dim - 1}")
    n1 = cfg.n_levels
    index, photons_b = divmod(index, n1)
    index, photons_a = divmod(index, n1)
    atom_a, atom_b = divmod(index, 2)
    return atom_a, atom_b, photons_a, photons_b


def basis_ket(cfg: SpaceConfig, atom_a: int, atom_b: int, photons_a: int, photons_b: int) -> np.ndarray:
    ket = np.zeros(cfg.dim, dtype=complex)
    ket[basis_index(cfg, atom_a, atom_b, photons_a, photons_b)] = 1.0
    return ket


def site_operator(cfg: SpaceConfig, site: str, op: np.ndarray) -> np.ndarray:
    """Embed a single-site operator into the composite space.

    site is one of "A", "B" (atoms, 2x2 op) or "a", "b" (cavities,
    n_levels x n_levels op).
    """
    n1 = cfg.n_levels
    idn = np.eye(n1, dtype=complex)
    factors = {"A": ID2, "B": ID2, "a": idn, "b": idn}
    if site not in factors:
        raise ValueError(f"unknown site {site!r}; expected one of A, B, a, b")
    if op.shape != factors[site].shape:
        raise ValueError(f"operator shape {op.shape} does not fit site {site!r}")
    factors[site] = np.asarray(op, dtype=complex)
    out = factors["A"]
    for key in ("B", "a", "b"):
        out = np.kron(out, factors[key])
    return out


def build_hamiltonian(cfg: SpaceConfig) -> np.ndarray:
    """Hamiltonian of two independent resonant Jaynes-Cummings pairs.

    H = w a+a + w b+b + (w/2) sz_A + (w/2) sz_B
        + g (a+ s-_A + a s+_A) + g (b+ s-_B + b s+_B)
    """
    n1 = cfg.n_levels
    num = create_op(n1) @ destroy_op(n1)
    h = cfg.omega * (site_operator(cfg, "a", num) + site_operator(cfg, "b", num))
    h += 0.5 * cfg.omega * (site_operator(cfg, "A", SIGMA_Z) + site_operator(cfg, "B", SIGMA_Z))
    for atom, cavity in (("A", "a"), ("B", "b")):
        term = site_operator(cfg, cavity, create_op(n1)) @ site_operator(cfg, atom, SIGMA_MINUS)
        h += cfg.g * (term + term.conj().T)
    return h


def excitation_operator(cfg: SpaceConfig) -> np.ndarray:
    """Total excitation number: photons plus excited-atom populations."""
    n1 = cfg.n_levels
    num = create_op(n1) @ destroy_op(n1)
    pop = np.array([[0, 0], [0, 1]], dtype=complex)
    return (
        site_operator(cfg, "a", num)
        + site_operator(cfg, "b", num)
        + site_operator(cfg, "A", pop)
        + site_operator(cfg, "B", pop)
    )


def apply(op: np.ndarray, ket: np.ndarray) -> np.ndarray:
    op = np.asarray(op)
    ket = np.asarray(ket)
    if op.ndim != 2 or op.shape[0] != op.shape[1]:
        raise ValueError(f"operator must be square, got shape {op.shape}")
    if ket.shape != (op.shape[1],):
        raise ValueError(f"dimension mismatch: operator {op.shape} vs ket {ket.shape}")
    return op @ ket


def dagger(op: np.ndarray) -> np.ndarray:
    return np.asarray(op).conj().T


def kron(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return np.kron(a, b)


def is_hermitian(op: np.ndarray, tol: float = HERMITICITY_TOL) -> bool:
    op = np.asarray(op)
    return op.ndim == 2 and op.shape[0] == op.shape[1] and np.max(np.abs(op - op.conj().T)) <= tol


def expectation(op: np.ndarray, ket: np.ndarray) -> float:
    return float(np.real(np.vdot(ket, op @ ket)))


def _check_evolution_inputs(h: np.ndarray, psi0: np.ndarray):
    if not is_hermitian(h):
        raise ValueError("Hamiltonian must be Hermitian within 1e-12")
    if psi0.shape != (h.shape[0],):
        raise ValueError(f"dimension mismatch: H {h.shape} vs state {psi0.shape}")
    if abs(np.linalg.norm(psi0) - 1.0) > 1e-9:
        raise ValueError("initial state must be normalized")
    if not np.all(np.isfinite(psi0.view(float))):
        raise ValueError("initial state contains non-finite amplitudes")


def evolve_numeric(h: np.ndarray, psi0: np.ndarray, t: float, steps: int | None = None,
                   g: float = 1.0) -> np.ndarray:
    """Propagate i d/dt psi = H psi with fixed-step classical Runge-Kutta.

    Parameters
    ----------
    h : Hermitian operator.
    psi0 : normalized initial state.
    t : evolution time.
    steps : number of RK4 steps; defaults to ceil(200*g*t), which keeps the
        norm drift well under 1e-9 at the matrix sizes used here.
    g : coupling rate used for the default step count.

    Raises IntegrationError if the final norm drifts from 1 by more than 1e-6.
    """
    psi0 = np.asarray(psi0, dtype=complex)
    _check_evolution_inputs(np.asarray(h, dtype=complex), psi0)
    if t == 0:
        return psi0.copy()
    if steps is None:
        steps = max(1, math.ceil(200.0 * abs(g) * abs(t)))
    if steps < 1:
        raise ValueError("steps must be a positive integer")
    gen = -1j * np.asarray(h, dtype=complex)
    dt = t / steps
    psi = psi0.copy()
    for _ in range(steps):
        k1 = gen @ psi
        k2 = gen @ (psi + 0.5 * dt * k1)
        k3 = gen @ (psi + 0.5 * dt * k2)
        k4 = gen @ (psi + dt * k3)
        psi = psi + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
    drift = abs(np.linalg.norm(psi) - 1.0)
    if drift > DRIFT_FAILURE:
        raise IntegrationError(
            f"norm drift {drift:.3e} after {steps} steps exceeds {DRIFT_FAILURE:.0e}"
        )
    return psi


class SpectralPropagator:
    """Exact exp(-iHt) from the Hermitian eigendecomposition of H.

    The decomposition is done once, so evolving to many times (or a whole
    time grid) costs one small matrix product per call.
    """

    def __init__(self, h: np.ndarray):
        h = np.asarray(h, dtype=complex)
        if not is_hermitian(h):
            raise ValueError("Hamiltonian must be Hermitian within 1e-12")
        self._eigvals, self._eigvecs = np.linalg.eigh(h)

    def evolve(self, psi0: np.ndarray, t: float) -> np.ndarray:
        psi0 = np.asarray(psi0, dtype=complex)
        coef = self._eigvecs.conj().T @ psi0
        return self._eigvecs @ (np.exp(-1j * self._eigvals * t) * coef)

    def evolve_grid(self, psi0: np.ndarray, times: np.ndarray) -> np.ndarray:
        """States at each time, shape (len(times), dim)."""
        psi0 = np.asarray(psi0, dtype=complex)
        times = np.atleast_1d(np.asarray(times, dtype=float))
        coef = self._eigvecs.conj().T @ psi0
        phases = np.exp(-1j * np.outer(times, self._eigvals))
        return (phases * coef) @ self._eigvecs.T
