"""Two-qubit states: validation, Pauli decomposition, canonical form, families.

Everything downstream works in the Pauli picture: Bloch vectors a (first
qubit, "Alice") and b (second qubit, "Bob") plus the 3x3 correlation
matrix T.  X-states are the subfamily with a and b along z and diagonal T;
they get their own parameter record because all closed forms live there.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    NotHermitian,
    NotPositive,
    ParamOutOfDomain,
    TraceNotOne,
    UnknownFamily,
)
from .tolerances import DEFAULT, Tolerances

_ID2 = np.eye(2, dtype=complex)
SIGMA = np.array(
    [
        [[0, 1], [1, 0]],
        [[0, -1j], [1j, 0]],
        [[1, 0], [0, -1]],
    ],
    dtype=complex,
)

# precomputed tensor-product bases for the trace projections
_PAULI_A = np.stack([np.kron(s, _ID2) for s in SIGMA])
_PAULI_B = np.stack([np.kron(_ID2, s) for s in SIGMA])
_PAULI_AB = np.stack([np.stack([np.kron(si, sj) for sj in SIGMA]) for si in SIGMA])


@dataclass(frozen=True)
class DensityMatrix:
    """Validated 4x4 state, basis order |00>, |01>, |10>, |11>."""

    entries: np.ndarray


@dataclass(frozen=True)
class PauliRepresentation:
    a: np.ndarray
    b: np.ndarray
    T: np.ndarray


@dataclass(frozen=True)
class CanonicalState:
    """Pauli data in a local frame where the correlation matrix is diagonal.

    T_original = rot_a @ diag(c) @ rot_b.T with both rotations proper.
    """

    a: np.ndarray
    b: np.ndarray
    c: np.ndarray
    rot_a: np.ndarray
    rot_b: np.ndarray


@dataclass(frozen=True)
class XStateParams:
    a3: float
    b3: float
    c1: float
    c2: float
    c3: float


def matrix_of(rho) -> np.ndarray:
    """Accept a DensityMatrix or a bare array and hand back the ndarray."""
    return np.asarray(getattr(rho, "entries", rho), dtype=complex)


def validate_density(raw, tol: Tolerances = DEFAULT) -> DensityMatrix:
    """Check hermiticity, unit trace and positivity; return the clean state.

    Eigenvalues in [-psd_tol, 0) are clamped to zero so that matrices read
    from decimal files round-trip without spurious failures.
    """
    m = np.asarray(raw, dtype=complex)
    if m.shape != (4, 4):
        raise ValueError(f"expected a 4x4 matrix, got shape {m.shape}")
    herm_dev = float(np.max(np.abs(m - m.conj().T)))
    if herm_dev > tol.hermitian:
        raise NotHermitian(f"max |M - M^dag| = {herm_dev:.3e}", herm_dev)
    m = 0.5 * (m + m.conj().T)
    tr_dev = float(abs(np.trace(m).real - 1.0)) + float(abs(np.trace(m).imag))
    if tr_dev > tol.trace:
        raise TraceNotOne(f"|tr - 1| = {tr_dev:.3e}", tr_dev)
    evals, evecs = np.linalg.eigh(m)
    if evals[0] < -tol.psd:
        raise NotPositive(f"smallest eigenvalue = {evals[0]:.3e}", float(evals[0]))
    if evals[0] < 0.0:
        evals = np.clip(evals, 0.0, None)
        m = (evecs * evals) @ evecs.conj().T
    m.flags.writeable = False
    return DensityMatrix(m)


def to_pauli(rho) -> PauliRepresentation:
    """Project onto the sigma_alpha x sigma_beta basis."""
    m = matrix_of(rho)
    a = np.real(np.einsum("aij,ji->a", _PAULI_A, m))
    b = np.real(np.einsum("aij,ji->a", _PAULI_B, m))
    T = np.real(np.einsum("abij,ji->ab", _PAULI_AB, m))
    return PauliRepresentation(a, b, T)


def from_pauli(p: PauliRepresentation, tol: Tolerances = DEFAULT) -> DensityMatrix:
    """Rebuild the density matrix; validates the result (PSD can fail)."""
    m = np.eye(4, dtype=complex)
    m += np.einsum("a,aij->ij", p.a, _PAULI_A)
    m += np.einsum("a,aij->ij", p.b, _PAULI_B)
    m += np.einsum("ab,abij->ij", p.T, _PAULI_AB)
    return validate_density(0.25 * m, tol)


def swap_parties(p: PauliRepresentation) -> PauliRepresentation:
    """Exchange the two qubits: a <-> b, T -> T^T.  Involution."""
    return PauliRepresentation(p.b.copy(), p.a.copy(), p.T.T.copy())


def _is_ordered_diagonal(T: np.ndarray) -> bool:
    off = T - np.diag(np.diag(T))
    if np.count_nonzero(off):
        return False
    d = np.abs(np.diag(T))
    return d[0] >= d[1] >= d[2]


def canonicalize(p: PauliRepresentation) -> CanonicalState:
    """Diagonalize T by proper local rotations.

    Singular values are ordered by decreasing magnitude; any reflection
    sign needed to keep both rotations in SO(3) is pushed into c3.  A T
    that is already diagonal in that order is left untouched so that
    axis-aligned states keep their axes.
    """
    T = np.asarray(p.T, dtype=float)
    if _is_ordered_diagonal(T):
        eye = np.eye(3)
        return CanonicalState(
            np.asarray(p.a, float).copy(), np.asarray(p.b, float).copy(),
            np.diag(T).copy(), eye, eye.copy(),
        )
    U, s, Vt = np.linalg.svd(T)
    du = 1.0 if np.linalg.det(U) > 0 else -1.0
    dv = 1.0 if np.linalg.det(Vt) > 0 else -1.0
    rot_a = U * np.array([1.0, 1.0, du])
    rot_b = Vt.T * np.array([1.0, 1.0, dv])
    c = np.array([s[0], s[1], du * dv * s[2]])
    return CanonicalState(rot_a.T @ p.a, rot_b.T @ p.b, c, rot_a, rot_b)


def x_matrix(p: XStateParams) -> np.ndarray:
    """Density matrix of an X-state from its five Pauli parameters."""
    m = np.zeros((4, 4), dtype=complex)
    m[0, 0] = 1 + p.a3 + p.b3 + p.c3
    m[1, 1] = 1 + p.a3 - p.b3 - p.c3
    m[2, 2] = 1 - p.a3 + p.b3 - p.c3
    m[3, 3] = 1 - p.a3 - p.b3 + p.c3
    m[0, 3] = m[3, 0] = p.c1 - p.c2
    m[1, 2] = m[2, 1] = p.c1 + p.c2
    return 0.25 * m


def detect_x_params(p: PauliRepresentation, tol: Tolerances = DEFAULT):
    """Return XStateParams when the representation is an X-state, else None."""
    a, b, T = p.a, p.b, p.T
    off = T - np.diag(np.diag(T))
    dev = max(
        float(np.max(np.abs(a[:2]))),
        float(np.max(np.abs(b[:2]))),
        float(np.max(np.abs(off))),
    )
    if dev > tol.hermitian:
        return None
    return XStateParams(float(a[2]), float(b[2]), float(T[0, 0]), float(T[1, 1]), float(T[2, 2]))


def canonical_from_x(p: XStateParams) -> CanonicalState:
    """Canonical record for an X-state keeping the axis order as given."""
    eye = np.eye(3)
    return CanonicalState(
        np.array([0.0, 0.0, p.a3]),
        np.array([0.0, 0.0, p.b3]),
        np.array([p.c1, p.c2, p.c3]),
        eye, eye.copy(),
    )


# ---------------------------------------------------------------------------
# named families


def _proj(psi: np.ndarray) -> np.ndarray:
    return np.outer(psi, psi.conj())


def _check_unit_interval(params, *names):
    for n in names:
        v = params[n]
        if not 0.0 <= v <= 1.0:
            raise ParamOutOfDomain(f"{n} = {v} outside [0, 1]")


def _check_theta(params):
    th = params["theta"]
    if not 0.0 <= th <= math.pi / 2:
        raise ParamOutOfDomain(f"theta = {th} outside [0, pi/2]")


def _psi1(theta: float) -> np.ndarray:
    out = np.zeros(4, dtype=complex)
    out[0] = math.cos(theta)
    out[3] = math.sin(theta)
    return out


def _build_pure(params):
    a = params["a"]
    if not -1.0 <= a <= 1.0:
        raise ParamOutOfDomain(f"a = {a} outside [-1, 1]")
    psi = np.zeros(4, dtype=complex)
    psi[0] = a
    psi[3] = math.sqrt(1.0 - a * a)
    return _proj(psi)


def _build_bell_diagonal(params):
    p = XStateParams(0.0, 0.0, params["c1"], params["c2"], params["c3"])
    return x_matrix(p)


def _build_x_state(params):
    p = XStateParams(params["a3"], params["b3"], params["c1"], params["c2"], params["c3"])
    return x_matrix(p)


def _build_rho_x0(params):
    b3, c3, sign = params["b3"], params["c3"], params["sign"]
    if sign not in (1.0, -1.0, 1, -1):
        raise ParamOutOfDomain(f"sign = {sign}, expected +1 or -1")
    if not -1.0 <= b3 <= c3 <= 1.0:
        raise ParamOutOfDomain(f"need -1 <= b3 <= c3 <= 1, got b3 = {b3}, c3 = {c3}")
    rt = math.sqrt((1.0 + b3) * (c3 - b3))
    m = np.zeros((4, 4), dtype=complex)
    m[0, 0] = (1.0 + b3) / 2
    m[1, 1] = (1.0 - c3) / 2
    m[3, 3] = (c3 - b3) / 2
    m[0, 3] = m[3, 0] = sign * rt / 2
    return m


def _build_w_eta_chi(params):
    _check_unit_interval(params, "eta", "chi")
    eta, chi = params["eta"], params["chi"]
    m = np.zeros((4, 4), dtype=complex)
    m[0, 0] = eta * chi
    m[1, 1] = 1.0 - eta
    m[3, 3] = eta * (1.0 - chi)
    m[0, 3] = m[3, 0] = -eta * math.sqrt(chi * (1.0 - chi))
    return m


def _build_w_v_theta(params):
    _check_unit_interval(params, "V")
    _check_theta(params)
    V, th = params["V"], params["theta"]
    psi2 = np.zeros(4, dtype=complex)
    psi2[2] = math.cos(th)
    psi2[1] = math.sin(th)
    return V * _proj(_psi1(th)) + (1.0 - V) * _proj(psi2)


def _build_colour_noise(params):
    _check_unit_interval(params, "V")
    _check_theta(params)
    V, th = params["V"], params["theta"]
    noise = np.zeros((4, 4), dtype=complex)
    noise[0, 0] = noise[3, 3] = 0.5
    return V * _proj(_psi1(th)) + (1.0 - V) * noise


def _build_gen_isotropic(params):
    _check_unit_interval(params, "V")
    _check_theta(params)
    V, th = params["V"], params["theta"]
    return V * _proj(_psi1(th)) + (1.0 - V) * np.eye(4, dtype=complex) / 4.0


_FAMILIES = {
    "pure": (_build_pure, ("a",), {}),
    "bell_diagonal": (_build_bell_diagonal, ("c1", "c2", "c3"), {}),
    "x_state": (_build_x_state, ("a3", "b3", "c1", "c2", "c3"), {}),
    "rho_x0": (_build_rho_x0, ("b3", "c3"), {"sign": 1.0}),
    "w_eta_chi": (_build_w_eta_chi, ("eta", "chi"), {}),
    "w_v_theta": (_build_w_v_theta, ("V", "theta"), {}),
    "colour_noise": (_build_colour_noise, ("V", "theta"), {}),
    "gen_isotropic": (_build_gen_isotropic, ("V", "theta"), {}),
}

FAMILY_NAMES = tuple(sorted(_FAMILIES))


def _resolve_family(name, params):
    if name not in _FAMILIES:
        raise UnknownFamily(f"unknown family {name!r}, choose from {', '.join(FAMILY_NAMES)}")
    builder, required, defaults = _FAMILIES[name]
    merged = dict(defaults)
    merged.update(params)
    missing = [k for k in required if k not in merged]
    if missing:
        raise ParamOutOfDomain(f"family {name!r} missing parameter(s): {', '.join(missing)}")
    extra = [k for k in merged if k not in required and k not in defaults]
    if extra:
        raise ParamOutOfDomain(f"family {name!r} got unexpected parameter(s): {', '.join(extra)}")
    for k, v in merged.items():
        if not isinstance(v, (int, float)) or isinstance(v, bool) or not math.isfinite(v):
            raise ParamOutOfDomain(f"parameter {k} = {v!r} is not a finite number")
    return builder, {k: float(v) for k, v in merged.items()}


def make_family(name: str, params, tol: Tolerances = DEFAULT) -> DensityMatrix:
    """Build a named family member and validate it."""
    builder, merged = _resolve_family(name, params)
    return validate_density(builder(merged), tol)


def family_x_params(name: str, params) -> XStateParams:
    """Closed-form Pauli parameters of a family member.

    Every family here is an X-state; these are the textbook expressions,
    used to cross-check the matrix constructors and to drive the analytic
    formulas without a matrix round trip.
    """
    _, merged = _resolve_family(name, params)
    if name == "pure":
        a = merged["a"]
        c1 = 2.0 * a * math.sqrt(1.0 - a * a)
        return XStateParams(2 * a * a - 1, 2 * a * a - 1, c1, -c1, 1.0)
    if name == "bell_diagonal":
        return XStateParams(0.0, 0.0, merged["c1"], merged["c2"], merged["c3"])
    if name == "x_state":
        return XStateParams(merged["a3"], merged["b3"], merged["c1"], merged["c2"], merged["c3"])
    if name == "rho_x0":
        b3, c3 = merged["b3"], merged["c3"]
        c1 = merged["sign"] * math.sqrt((1.0 + b3) * (c3 - b3))
        return XStateParams(1.0 + b3 - c3, b3, c1, -c1, c3)
    if name == "w_eta_chi":
        eta, chi = merged["eta"], merged["chi"]
        c1 = -2.0 * eta * math.sqrt(chi * (1.0 - chi))
        return XStateParams(1 - 2 * eta * (1 - chi), 2 * eta * chi - 1, c1, -c1, 2 * eta - 1)
    V, th = merged["V"], merged["theta"]
    s2, c2t = math.sin(2 * th), math.cos(2 * th)
    if name == "w_v_theta":
        return XStateParams((2 * V - 1) * c2t, c2t, s2, (1 - 2 * V) * s2, 2 * V - 1)
    if name == "colour_noise":
        return XStateParams(V * c2t, V * c2t, V * s2, -V * s2, 1.0)
    # gen_isotropic
    return XStateParams(V * c2t, V * c2t, V * s2, -V * s2, V)


# ---------------------------------------------------------------------------
# state-file ingestion

_STATE_KEYS = ("rho", "pauli", "family")


def _entry_to_complex(e):
    if isinstance(e, dict):
        unknown = set(e) - {"re", "im"}
        if unknown:
            raise ValueError(f"matrix entry has unknown key(s) {sorted(unknown)}")
        return complex(float(e.get("re", 0.0)), float(e.get("im", 0.0)))
    if isinstance(e, (int, float)):
        return complex(e)
    raise ValueError(f"matrix entry {e!r} is neither a number nor {{re, im}}")


def parse_state_obj(obj, tol: Tolerances = DEFAULT):
    """Parse a state-file JSON object.

    Exactly one of the keys "rho", "pauli", "family" must be present.
    Returns (DensityMatrix, echo) where echo is a plain dict restating
    the parsed source for output provenance.
    """
    if not isinstance(obj, dict):
        raise ValueError("state file must contain a JSON object")
    present = [k for k in _STATE_KEYS if k in obj]
    if len(present) != 1:
        raise ValueError(f"state object needs exactly one of {_STATE_KEYS}, found {present}")
    key = present[0]
    if key == "rho":
        rows = obj["rho"]
        m = np.array([[_entry_to_complex(e) for e in row] for row in rows], dtype=complex)
        return validate_density(m, tol), {"source": "rho"}
    if key == "pauli":
        blk = obj["pauli"]
        p = PauliRepresentation(
            np.asarray(blk["a"], dtype=float),
            np.asarray(blk["b"], dtype=float),
            np.asarray(blk["T"], dtype=float),
        )
        if p.a.shape != (3,) or p.b.shape != (3,) or p.T.shape != (3, 3):
            raise ValueError("pauli block needs a[3], b[3], T[3][3]")
        return from_pauli(p, tol), {"source": "pauli"}
    blk = obj["family"]
    name = blk["name"]
    params = blk.get("params", {})
    if not isinstance(params, dict):
        raise ValueError("family params must be an object of numbers")
    return make_family(name, params, tol), {"source": "family", "family": name, "params": dict(params)}


def load_state_file(path, tol: Tolerances = DEFAULT):
    with open(path, "r", encoding="utf-8") as fh:
        obj = json.load(fh)
    return parse_state_obj(obj, tol)
