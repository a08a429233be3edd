import logging

import numpy as np
from scipy.linalg import null_space, schur

from ..evolve import EdgeModeSet, OrthogonalPropagator
from ..exceptions import IncompatibleModes, InvalidParameters
from .covariance_state import CovarianceState
from .measurement import measure_parity

logger = logging.getLogger(__name__)

LOGICAL_LABELS = ("00", "01", "10", "11", "+")
MODE_TOL = 1e-6


def normalize_label(label):
    """Accept "01", "|01>", "|01⟩", "+" or "|+>" and return the bare form."""
    bare = str(label).strip().strip("|").rstrip(">⟩").strip()
    if bare not in LOGICAL_LABELS:
        raise InvalidParameters(f"Unknown logical label {label!r}. Choose from {LOGICAL_LABELS}.")
    return bare


def _pair(u, v, sign):
    """sign * (u v^T - v u^T), the covariance block of <i gamma_u gamma_v> = sign."""
    return sign * (np.outer(u, v) - np.outer(v, u))


def edge_pairing(label, modes):
    """
    Covariance contribution of the edge sector of one wire.

    Basis states n(01L,02L), n(piL,piR), n(01R,02R) with i gamma_1 gamma_2 = (-1)^n per pair;
    |l_L l_R> has n_0L = l_L, n_0R = l_R and n_pi = l_L xor l_R. The "+" label pairs
    (01L, 01R), (02L, 02R) and (piR, piL) at +1.

    Returns:
    - numpy array (dim, dim).
    """
    label = normalize_label(label)
    mode = modes.mode
    if label == "+":
        return (
            _pair(mode("zero1_left"), mode("zero1_right"), 1)
            + _pair(mode("zero2_left"), mode("zero2_right"), 1)
            + _pair(mode("pi_right"), mode("pi_left"), 1)
        )
    left, right = int(label[0]), int(label[1])
    parity_pi = left ^ right
    return (
        _pair(mode("zero1_left"), mode("zero2_left"), (-1) ** left)
        + _pair(mode("pi_left"), mode("pi_right"), (-1) ** parity_pi)
        + _pair(mode("zero1_right"), mode("zero2_right"), (-1) ** right)
    )


def _check_modes(modes, O):
    array = np.asarray(modes)
    error = float(np.max(np.abs(array.T @ array - np.eye(array.shape[1]))))
    if error > 1e-8:
        raise IncompatibleModes(f"Edge modes are not orthonormal (error {error:.2e})")
    if O is None:
        return
    if O.shape[0] != array.shape[0]:
        raise IncompatibleModes("Edge modes and propagator have different dimensions")
    zero = modes.zero_block
    pi = modes.pi_block
    deviation = max(
        float(np.max(np.abs(np.asarray(O) @ zero - zero))),
        float(np.max(np.abs(np.asarray(O) @ pi + pi))),
    )
    if deviation > MODE_TOL:
        raise IncompatibleModes(f"Edge modes are not pinned eigenvectors of the propagator (deviation {deviation:.2e})")


def _stationary_completion(basis, O):
    """
    Pure pairing of the subspace spanned by `basis` that is stationary under O.

    Each 2x2 rotation block of the real Schur form pairs its two Schur vectors; the
    remaining real eigenvectors are paired in order.
    """
    if basis.shape[1] == 0:
        return np.zeros((basis.shape[0], basis.shape[0]))
    if basis.shape[1] % 2:
        raise IncompatibleModes("Bulk complement has odd dimension")
    if O is None:
        vectors = basis
        pairs = [(k, k + 1) for k in range(0, basis.shape[1], 2)]
    else:
        restricted = basis.T @ np.asarray(O) @ basis
        T, Q = schur(restricted, output='real')
        vectors = basis @ Q
        pairs = []
        singles = []
        k = 0
        while k < T.shape[0]:
            if k + 1 < T.shape[0] and abs(T[k + 1, k]) > 1e-12:
                pairs.append((k, k + 1))
                k += 2
            else:
                singles.append(k)
                k += 1
        if len(singles) % 2:
            raise IncompatibleModes("Odd number of real bulk eigenvectors")
        pairs.extend(zip(singles[0::2], singles[1::2]))
    completion = np.zeros((basis.shape[0], basis.shape[0]))
    for first, second in pairs:
        completion += _pair(vectors[:, first], vectors[:, second], 1)
    return completion


def init_logical(label, modes, O=None):
    """
    Pure Gaussian state with the requested logical content in the edge sector.

    The bulk complement of the edge modes is filled at occupation zero by pairing the real
    invariant planes of O (or an arbitrary fixed pairing when O is omitted).

    Parameters:
    - label: "00", "01", "10", "11" or "+" (optionally written as |..>); a tuple with one label
      per EdgeModeSet when several wires are given.
    - modes: EdgeModeSet or list of EdgeModeSets (one per wire).
    - O: OrthogonalPropagator or None.

    Returns:
    - CovarianceState instance.
    """
    mode_sets = [modes] if isinstance(modes, EdgeModeSet) else list(modes)
    labels = [label] if isinstance(label, str) else list(label)
    if len(labels) != len(mode_sets):
        raise InvalidParameters("Give one logical label per EdgeModeSet")
    if O is not None and not isinstance(O, OrthogonalPropagator):
        raise TypeError("O must be an OrthogonalPropagator")

    dimension = mode_sets[0].shape[0]
    M = np.zeros((dimension, dimension))
    for modes_set, wire_label in zip(mode_sets, labels):
        _check_modes(modes_set, O)
        M += edge_pairing(wire_label, modes_set)

    edge = np.hstack([np.asarray(modes_set) for modes_set in mode_sets])
    if np.max(np.abs(edge.T @ edge - np.eye(edge.shape[1]))) > 1e-8:
        raise IncompatibleModes("Edge modes of different wires overlap")
    bulk = null_space(edge.T)
    M += _stationary_completion(bulk, O)

    n_wires = max(modes_set.wire for modes_set in mode_sets) + 1
    n_wires = max(n_wires, len(mode_sets))
    state = CovarianceState(M, wires=n_wires)
    logger.debug("Initialized logical state %s (purity error %.2e)", labels, state.purity_error())
    return state


def evolve_state(state, O):
    """
    Heisenberg transport of the covariance matrix, M -> O M O^T.

    Returns:
    - CovarianceState instance.
    """
    if state.shape != O.shape:
        raise ValueError("State and propagator dimensions differ")
    array = np.asarray(O)
    return state.with_matrix(array @ np.asarray(state) @ array.T)


def correlation(state, v, w):
    """<i gamma_v gamma_w> = v^T M w."""
    return float(np.asarray(v, dtype=float) @ np.asarray(state) @ np.asarray(w, dtype=float))


def pair_rotation(a, b, theta):
    """
    Heisenberg matrix of exp[(theta/2) gamma_b gamma_a], which maps gamma_a -> cos(theta) gamma_a + sin(theta) gamma_b.

    Returns:
    - OrthogonalPropagator instance.
    """
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    rotation = (
        np.eye(a.shape[0])
        + (np.cos(theta) - 1) * (np.outer(a, a) + np.outer(b, b))
        - np.sin(theta) * (np.outer(a, b) - np.outer(b, a))
    )
    return OrthogonalPropagator(rotation, check=False)


def rotate_pair(state, a, b, theta):
    """Apply the Gaussian unitary exp[(theta/2) gamma_b gamma_a] to a state."""
    return evolve_state(state, pair_rotation(a, b, theta))


def prepare_ancilla(state, modes, method="direct", rng=None):
    """
    Put the zero-mode pair (zero1_left, zero2_left) of an ancilla wire into |1>, i.e.
    <i gamma_x gamma_y> = -1.

    method="direct" overwrites the pair correlation of an already paired (x, y);
    method="measure" reads the pair parity and, on outcome +1, applies the X-type
    correction exp[(pi/2) gamma_pi gamma_x], flipping (x, y) together with (piL, piR).

    Parameters:
    - state: CovarianceState.
    - modes: EdgeModeSet of the ancilla wire.
    - method: "direct" or "measure".
    - rng: seed or Generator for the measure route.

    Returns:
    - state: CovarianceState.
    - record: MeasurementRecord or None.
    """
    x = modes.mode("zero1_left")
    y = modes.mode("zero2_left")
    if method == "direct":
        m = correlation(state, x, y)
        if abs(abs(m) - 1) > 1e-8:
            raise IncompatibleModes(f"Ancilla pair is not a definite parity (correlation {m:.3f})")
        updated = np.asarray(state) - _pair(x, y, m) + _pair(x, y, -1)
        return state.with_matrix(updated), None
    if method == "measure":
        record, state = measure_parity(state, x, y, rng=rng, labels=("zero1_left'", "zero2_left'"))
        if record.outcome == 1:
            state = rotate_pair(state, x, modes.mode("pi_left"), np.pi)
        return state, record
    raise InvalidParameters(f"Unknown ancilla preparation {method!r}. Choose from ('direct', 'measure').")
