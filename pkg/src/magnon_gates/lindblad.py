"""Liouvillian construction, density-matrix propagation, gate channel.

Vectorization is column-stacking throughout: vec(A rho B) =
(B^T kron A) vec(rho).  Propagation picks its method by Hilbert-space
dimension D: the full superoperator exponential up to D <= 40, an
adaptive embedded Runge-Kutta 5(4) on the vectorized equation above.
The gate channel, which applies one fixed propagator to many inputs,
instead precomputes exp(L T) densely up to D <= 60 and switches to a
sparse Krylov/Taylor exponential action beyond that; both alternatives
are cross-checked against the integrator in the tests.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp
from scipy.integrate import solve_ivp
from scipy.sparse.linalg import expm_multiply

from .models import GateScenario
from .operators import (
    SpaceLayout,
    fock_state,
    is_hermitian,
    matrix_exp,
    partial_trace,
    thermal_state,
    unvec,
    vec,
)

__all__ = [
    "LindbladProblem",
    "PropagationReport",
    "PropagationError",
    "liouvillian",
    "liouvillian_sparse",
    "propagate",
    "GateChannel",
    "gate_channel",
    "observable_trace",
]

EXPM_MAX_DIM = 40        # propagate(): dense superoperator exponential up to here
CHANNEL_DENSE_MAX_DIM = 60   # gate channel: dense propagator up to here
RK_RTOL = 1e-8
RK_ATOL = 1e-11

TRACE_DRIFT_TOL = 1e-8
MIN_EIG_TOL = -1e-7


class PropagationError(RuntimeError):
    pass


@dataclass(frozen=True)
class LindbladProblem:
    """Hamiltonian (rad/s) plus jump operators with rates absorbed."""

    hamiltonian: np.ndarray
    jump_operators: tuple[np.ndarray, ...]
    layout: SpaceLayout

    def __post_init__(self):
        d = self.layout.total_dim
        if self.hamiltonian.shape != (d, d):
            raise ValueError("Hamiltonian does not match the layout dimension")
        if not is_hermitian(self.hamiltonian, 1e-12):
            raise ValueError("Hamiltonian must be Hermitian")
        for op in self.jump_operators:
            if op.shape != (d, d):
                raise ValueError("jump operator does not match the layout dimension")
        object.__setattr__(self, "jump_operators", tuple(self.jump_operators))


@dataclass
class PropagationReport:
    final_state: np.ndarray
    trace_drift: float
    min_eigenvalue: float
    step_count: int


def liouvillian(problem: LindbladProblem) -> np.ndarray:
    """Dense superoperator (D^2 x D^2) in column-stacking convention."""
    h = problem.hamiltonian
    d = h.shape[0]
    eye = np.eye(d, dtype=complex)
    lv = -1j * (np.kron(eye, h) - np.kron(h.T, eye))
    for op in problem.jump_operators:
        ldl = op.conj().T @ op
        lv += np.kron(op.conj(), op)
        lv -= 0.5 * (np.kron(eye, ldl) + np.kron(ldl.T, eye))
    return lv


def liouvillian_sparse(problem: LindbladProblem) -> sp.csr_matrix:
    """Sparse CSR version of :func:`liouvillian`."""
    h = sp.csr_matrix(problem.hamiltonian)
    d = h.shape[0]
    eye = sp.identity(d, format="csr", dtype=complex)
    lv = -1j * (sp.kron(eye, h, format="csr") - sp.kron(h.T, eye, format="csr"))
    for op_dense in problem.jump_operators:
        op = sp.csr_matrix(op_dense)
        ldl = (op.conj().T @ op).tocsr()
        lv = lv + sp.kron(op.conj(), op, format="csr")
        lv = lv - 0.5 * (sp.kron(eye, ldl, format="csr") + sp.kron(ldl.T, eye, format="csr"))
    return lv.tocsr()


def _validate_density_matrix(rho: np.ndarray, dim: int):
    if rho.shape != (dim, dim):
        raise ValueError(f"state shape {rho.shape} does not match dimension {dim}")
    if abs(np.trace(rho) - 1.0) > 1e-10:
        raise ValueError(f"initial state trace {np.trace(rho)} != 1")
    if not is_hermitian(rho, 1e-10):
        raise ValueError("initial state is not Hermitian")
    if np.linalg.eigvalsh(0.5 * (rho + rho.conj().T)).min() < -1e-10:
        raise ValueError("initial state is not positive semidefinite")


def _lindblad_rhs_factory(problem: LindbladProblem):
    h = problem.hamiltonian
    d = h.shape[0]
    ops = problem.jump_operators
    daggers = [op.conj().T for op in ops]
    ldl_sum = sum((dg @ op for op, dg in zip(ops, daggers)), np.zeros_like(h))

    def rhs(_t, y):
        rho = y.reshape(d, d)
        out = -1j * (h @ rho - rho @ h)
        out -= 0.5 * (ldl_sum @ rho + rho @ ldl_sum)
        for op, dg in zip(ops, daggers):
            out += op @ rho @ dg
        return out.reshape(-1)

    return rhs


def _report(rho, steps) -> PropagationReport:
    drift = abs(float(np.real(np.trace(rho))) - 1.0) + abs(float(np.imag(np.trace(rho))))
    herm = 0.5 * (rho + rho.conj().T)
    min_eig = float(np.linalg.eigvalsh(herm).min())
    report = PropagationReport(final_state=rho, trace_drift=drift,
                               min_eigenvalue=min_eig, step_count=steps)
    if drift > TRACE_DRIFT_TOL:
        raise PropagationError(f"trace drift {drift:.3e} exceeds {TRACE_DRIFT_TOL}")
    if min_eig < MIN_EIG_TOL:
        raise PropagationError(f"minimum eigenvalue {min_eig:.3e} below {MIN_EIG_TOL}")
    return report


def propagate(problem: LindbladProblem, rho0: np.ndarray, t: float,
              method: str = "auto", rtol: float = RK_RTOL,
              atol: float = RK_ATOL) -> PropagationReport:
    """Evolve rho0 for time t under the Lindblad generator.

    method: "auto" (dense exponential up to D = 40, Runge-Kutta 5(4)
    beyond), or explicitly "expm", "rk45", "krylov".  rtol/atol apply to
    the Runge-Kutta path only.
    """
    d = problem.layout.total_dim
    _validate_density_matrix(rho0, d)
    if t == 0:
        return _report(rho0.astype(complex), 0)
    if method == "auto":
        method = "expm" if d <= EXPM_MAX_DIM else "rk45"

    if method == "expm":
        prop = matrix_exp(liouvillian(problem) * t)
        rho = unvec(prop @ vec(rho0), d)
        steps = 1
    elif method == "krylov":
        lv = liouvillian_sparse(problem)
        rho = unvec(expm_multiply(lv * t, vec(rho0)), d)
        steps = 1
    elif method == "rk45":
        rhs = _lindblad_rhs_factory(problem)
        sol = solve_ivp(rhs, (0.0, t), rho0.astype(complex).reshape(-1),
                        method="RK45", rtol=rtol, atol=atol)
        if not sol.success:
            raise PropagationError(f"integrator failed: {sol.message}")
        rho = sol.y[:, -1].reshape(d, d)
        steps = int(sol.t.size - 1)
    else:
        raise ValueError(f"unknown propagation method {method!r}")
    return _report(rho, steps)


def _computational_indices(d1: int, d2: int) -> np.ndarray:
    return np.array([n1 * d2 + n2 for n1 in (0, 1) for n2 in (0, 1)])


def embed_two_qubit(rho4: np.ndarray, d1: int, d2: int) -> np.ndarray:
    """Lift a 4x4 computational state into the (d1 d2)-dim transmon space."""
    idx = _computational_indices(d1, d2)
    full = np.zeros((d1 * d2, d1 * d2), dtype=complex)
    full[np.ix_(idx, idx)] = rho4
    return full


class GateChannel:
    """Map over two-qubit states: attach magnon, evolve to T_gate, trace out.

    The fixed propagator exp(L T_gate) is formed once: densely for
    D <= 60, as a sparse exponential action beyond that.
    """

    def __init__(self, scenario: GateScenario, magnon_init: str = "vacuum",
                 n_th: float | None = None,
                 dense_max_dim: int = CHANNEL_DENSE_MAX_DIM):
        layout = scenario.model.layout
        self.scenario = scenario
        self.layout = layout
        self.d1, self.d2, self.dm = layout.dims
        if magnon_init == "vacuum":
            psi = fock_state(self.dm, 0)
            self.rho_magnon = np.outer(psi, psi.conj())
        elif magnon_init == "thermal":
            if n_th is None:
                raise ValueError("thermal magnon init needs n_th")
            self.rho_magnon = thermal_state(self.dm, n_th)
        else:
            raise ValueError(f"unknown magnon init {magnon_init!r}")
        problem = LindbladProblem(scenario.H_total, scenario.dissipators, layout)
        d = layout.total_dim
        if d <= dense_max_dim:
            self._propagator = matrix_exp(liouvillian(problem) * scenario.T_gate)
            self._generator = None
        else:
            self._propagator = None
            self._generator = (liouvillian_sparse(problem) * scenario.T_gate).tocsc()

    def _propagate_columns(self, cols: np.ndarray) -> np.ndarray:
        if self._propagator is not None:
            return self._propagator @ cols
        return expm_multiply(self._generator, cols)

    def apply_full(self, rho_qq: np.ndarray) -> np.ndarray:
        """Channel on a (d1 d2)-dim two-transmon density matrix."""
        return self.apply_full_batch([rho_qq])[0]

    def apply_full_batch(self, states) -> list[np.ndarray]:
        cols = np.column_stack([vec(np.kron(rho, self.rho_magnon)) for rho in states])
        out = self._propagate_columns(cols)
        d = self.layout.total_dim
        return [
            partial_trace(unvec(out[:, k], d), self.layout, keep=(0, 1))
            for k in range(cols.shape[1])
        ]

    def apply(self, rho4: np.ndarray):
        """Channel on a 4x4 computational state.

        Returns (4x4 computational block, leakage weight, full reduced
        two-transmon state).  The block is not renormalized; its trace
        deficit is the leakage.
        """
        return self.apply_batch([rho4])[0]

    def apply_batch(self, states4) -> list:
        full_in = [embed_two_qubit(r, self.d1, self.d2) for r in states4]
        outs = self.apply_full_batch(full_in)
        idx = _computational_indices(self.d1, self.d2)
        results = []
        for rho_qq in outs:
            block = rho_qq[np.ix_(idx, idx)]
            leakage = float(1.0 - np.real(np.trace(block)))
            results.append((block, leakage, rho_qq))
        return results


def gate_channel(scenario: GateScenario, magnon_init: str = "vacuum",
                 n_th: float | None = None) -> GateChannel:
    return GateChannel(scenario, magnon_init=magnon_init, n_th=n_th)


def observable_trace(scenario: GateScenario, rho0_full: np.ndarray, times,
                     observables: dict[str, np.ndarray] | None = None) -> dict:
    """Expectation values along the dissipative evolution.

    ``times`` must be sorted and lie within [0, 2 T_gate].  Default
    observables are the transmon occupations and the magnon number.
    """
    layout = scenario.model.layout
    d = layout.total_dim
    times = np.asarray(times, dtype=float)
    if np.any(np.diff(times) < 0):
        raise ValueError("times must be sorted")
    if times[0] < 0 or times[-1] > 2.0 * scenario.T_gate * (1 + 1e-12):
        raise ValueError("times must lie within [0, 2 T_gate]")
    _validate_density_matrix(rho0_full, d)

    if observables is None:
        from .operators import annihilation, embed
        observables = {}
        for k, label in ((0, "n_q1"), (1, "n_q2"), (2, "n_m")):
            a = embed(annihilation(layout.dims[k]), k, layout)
            observables[label] = a.conj().T @ a

    problem = LindbladProblem(scenario.H_total, scenario.dissipators, layout)
    dense = d <= CHANNEL_DENSE_MAX_DIM
    if dense:
        lv = liouvillian(problem)
        step_cache: dict[float, np.ndarray] = {}
    else:
        lv = liouvillian_sparse(problem).tocsc()

    result = {"t": times}
    values = {name: np.empty(times.size) for name in observables}
    v = vec(rho0_full)
    prev_t = 0.0
    for k, t in enumerate(times):
        dt = t - prev_t
        if dt > 0:
            if dense:
                key = round(dt / scenario.T_gate, 12)
                if key not in step_cache:
                    step_cache[key] = matrix_exp(lv * dt)
                v = step_cache[key] @ v
            else:
                v = expm_multiply(lv * dt, v)
            prev_t = t
        rho = unvec(v, d)
        for name, op in observables.items():
            values[name][k] = float(np.real(np.trace(op @ rho)))
    result.update(values)
    return result
