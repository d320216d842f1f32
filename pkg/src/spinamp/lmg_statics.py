"""Statics of the anisotropic all-to-all qubit amplifier.

The Hamiltonian, in the Dicke basis and in units of the qubit splitting, is

    H = eps*S_z - (J_x/N)(2 S_x^2 - N/2) - (J_y/N)(2 S_y^2 - N/2) + 2 B_x S_x

using the pair-sum identity sum_{i<j} s_i^a s_j^a = 2 S_a^2 - N/2 for the
all-to-all coupling. The constant +(J_x+J_y)/2 is retained so absolute
energies stay traceable; gaps and order parameters are unaffected. The
result is a real symmetric pentadiagonal matrix, solved for its two lowest
eigenpairs with a banded symmetric eigensolver.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .dicke import BandedHermitianOperator, DickeSpace, build_collective_operator, expectation


class EigensolverError(RuntimeError):
    """Eigensolver failure, carrying the dimension and parameters."""

    def __init__(self, message: str, dimension: int, params: "LmgParams"):
        super().__init__(f"{message} (dimension={dimension}, params={params})")
        self.dimension = dimension
        self.params = params


@dataclass(frozen=True)
class LmgParams:
    """Couplings of the amplifier, all in units of the splitting epsilon."""

    n_qubits: int
    jx: float
    jy: float
    bx: float = 0.0
    epsilon: float = 1.0

    def __post_init__(self):
        if self.n_qubits < 1:
            raise ValueError(f"n_qubits must be >= 1, got {self.n_qubits}")
        if self.epsilon <= 0.0:
            raise ValueError(f"epsilon must be > 0, got {self.epsilon}")
        if self.jx < 0.0 or self.jy < 0.0:
            raise ValueError(f"couplings must be ferromagnetic (jx, jy >= 0), got {self.jx}, {self.jy}")

    @property
    def space(self) -> DickeSpace:
        return DickeSpace(self.n_qubits)


@dataclass(frozen=True)
class GroundStateResult:
    e0: float
    e1: float
    gap: float
    ground: np.ndarray
    params: LmgParams

    def __post_init__(self):
        if self.gap < -1e-10:
            raise ValueError(f"eigenvalues out of order: gap = {self.gap}")


@dataclass(frozen=True)
class OrderParameters:
    """zeta_a = <S_a^2>_0 / N^2, the squared magnetization densities."""

    zeta_x: float
    zeta_y: float


@dataclass(frozen=True)
class CorrelationSet:
    """Symmetrized x-y correlators of the ground state.

    eta = (2/N)|c_xxyy|^(1/4) is the rescaled correlation, read as the
    fraction of correlated qubits.
    """

    c_xy: float
    c_xxyy: float
    eta: float


def assemble_hamiltonian(params: LmgParams) -> BandedHermitianOperator:
    """Real symmetric pentadiagonal amplifier Hamiltonian."""
    space = params.space
    n_q = params.n_qubits
    dim = space.dimension
    m = space.m_values()
    c = space.ladder_coefficients()
    s = n_q / 2.0
    sq_diag = (s * (s + 1.0) - m * m) / 2.0  # shared diagonal of S_x^2 and S_y^2
    bands = np.zeros((3, dim))
    bands[0] = (
        params.epsilon * m
        - (2.0 * params.jx / n_q) * sq_diag
        - (2.0 * params.jy / n_q) * sq_diag
        + (params.jx + params.jy) / 2.0
    )
    bands[1, : dim - 1] = params.bx * c  # 2*B_x*S_x contributes B_x*c_m on the first band
    if dim >= 3:
        pair = c[:-1] * c[1:] / 4.0
        bands[2, : dim - 2] = -(2.0 / n_q) * (params.jx - params.jy) * pair
    return BandedHermitianOperator(dim, 2, bands)


def solvable_line_energies(params: LmgParams) -> np.ndarray:
    """Analytic spectrum eps*m - (2J/N)[S(S+1) - m^2] + J on the line jx == jy, bx == 0."""
    if params.jx != params.jy or params.bx != 0.0:
        raise ValueError("analytic spectrum only exists for jx == jy with bx == 0")
    space = params.space
    m = space.m_values()
    s = params.n_qubits / 2.0
    j = params.jx
    return params.epsilon * m - (2.0 * j / params.n_qubits) * (s * (s + 1.0) - m * m) + j


def _fix_sign(vec: np.ndarray) -> np.ndarray:
    """Deterministic global sign: first non-negligible component positive."""
    thresh = 1e-12 * np.abs(vec).max()
    idx = np.argmax(np.abs(vec) > thresh)
    if vec[idx] < 0.0:
        vec = -vec
    return vec


def _lowest_two_banded(op: BandedHermitianOperator, params: LmgParams):
    ab = op.scipy_upper_bands()
    try:
        w, v = scipy.linalg.eig_banded(ab, lower=False, select="i", select_range=(0, min(1, op.dimension - 1)))
    except (scipy.linalg.LinAlgError, ValueError) as err:
        raise EigensolverError(f"banded eigensolver failed: {err}", op.dimension, params) from err
    if op.dimension == 1:
        return float(w[0]), float(w[0]), v[:, 0]
    return float(w[0]), float(w[1]), v[:, 0]


def _lowest_two_parity(op: BandedHermitianOperator, params: LmgParams):
    """Split the pentadiagonal H at bx == 0 into even/odd m-offset blocks.

    The squares shift m by +-2 only, so the two sublattices decouple; each
    block is tridiagonal. Used as an optimization cross-check, not the
    default path.
    """
    n = op.dimension
    d0, d2 = op.bands[0], op.bands[2]
    found = []  # (eigenvalue, parity, block_vector)
    for par in (0, 1):
        idx = np.arange(par, n, 2)
        nb = idx.size
        if nb == 0:
            continue
        ab = np.zeros((2, nb))
        ab[1] = d0[idx]
        ab[0, 1:] = d2[idx[:-1]]
        try:
            w, v = scipy.linalg.eig_banded(ab, lower=False, select="i", select_range=(0, min(1, nb - 1)))
        except (scipy.linalg.LinAlgError, ValueError) as err:
            raise EigensolverError(f"parity-block eigensolver failed: {err}", n, params) from err
        for i in range(w.size):
            found.append((float(w[i]), par, v[:, i]))
    found.sort(key=lambda t: t[0])
    e0, par0, vb = found[0]
    e1 = found[1][0]
    full = np.zeros(n)
    full[np.arange(par0, n, 2)] = vb
    return e0, e1, full


def solve_ground(params: LmgParams, method: str = "banded") -> GroundStateResult:
    """Two lowest eigenpairs of the assembled Hamiltonian.

    ``method`` is "banded" (default) or "parity"; the parity path requires
    bx == 0. The ground vector is real, stored complex for uniformity, with
    a deterministic global-sign convention.
    """
    h = assemble_hamiltonian(params)
    if method == "banded":
        e0, e1, vec = _lowest_two_banded(h, params)
    elif method == "parity":
        if params.bx != 0.0:
            raise ValueError("parity-block solve requires bx == 0 (S_x breaks m-offset parity)")
        e0, e1, vec = _lowest_two_parity(h, params)
    else:
        raise ValueError(f"unknown method {method!r}")
    vec = _fix_sign(vec)
    nrm = np.linalg.norm(vec)
    vec = vec / nrm
    residual = np.linalg.norm(h.matvec(vec) - e0 * vec)
    h_norm = h.norm_upper_bound()
    if residual > 1e-8 * max(h_norm, 1.0):
        raise EigensolverError(
            f"eigenpair residual {residual:.3e} exceeds 1e-8 * |H| = {1e-8 * h_norm:.3e}",
            h.dimension,
            params,
        )
    return GroundStateResult(e0=e0, e1=e1, gap=e1 - e0, ground=vec.astype(complex), params=params)


def order_parameters(result: GroundStateResult) -> OrderParameters:
    space = result.params.space
    n2 = float(result.params.n_qubits) ** 2
    zx = expectation(build_collective_operator(space, "Sx2"), result.ground) / n2
    zy = expectation(build_collective_operator(space, "Sy2"), result.ground) / n2
    return OrderParameters(zeta_x=zx, zeta_y=zy)


def correlations(result: GroundStateResult) -> CorrelationSet:
    """C_xy, C_xxyy and the rescaled correlation eta.

    Operator products are applied as successive banded applications to the
    state; dense products are never formed.
    """
    space = result.params.space
    psi = result.ground
    sx = build_collective_operator(space, "Sx")
    sy = build_collective_operator(space, "Sy")
    sx2 = build_collective_operator(space, "Sx2")
    sy2 = build_collective_operator(space, "Sy2")

    x_psi = sx.matvec(psi)
    y_psi = sy.matvec(psi)
    mean_x = expectation(sx, psi)
    mean_y_c = np.vdot(psi, y_psi)
    mean_y = float(mean_y_c.real)
    c_xy = float(np.vdot(x_psi, y_psi).real) - mean_x * mean_y

    x2_psi = sx2.matvec(psi)
    y2_psi = sy2.matvec(psi)
    mean_x2 = expectation(sx2, psi)
    mean_y2 = expectation(sy2, psi)
    c_xxyy = float(np.vdot(x2_psi, y2_psi).real) - mean_x2 * mean_y2

    eta = (2.0 / result.params.n_qubits) * abs(c_xxyy) ** 0.25
    return CorrelationSet(c_xy=c_xy, c_xxyy=c_xxyy, eta=eta)
