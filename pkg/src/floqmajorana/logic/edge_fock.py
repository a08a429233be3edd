"""
Fock space of the six edge Majoranas per wire.

Edge Majorana k of a wire is MODE_NAMES[k], so the three edge fermions pair
(zero1_left, zero2_left), (pi_left, pi_right) and (zero1_right, zero2_right). The state
annihilated by all three is |00>; the other logical states follow from

    |01> = gamma_pi^L gamma_01^R |00>,  |10> = gamma_02^L gamma_pi^L |00>,  |11> = gamma_02^L gamma_01^R |00>.
"""
import logging

import numpy as np

from ..evolve import MODE_NAMES
from ..exceptions import IncompatibleModes, InvalidParameters, LeakageTooLarge, UnsupportedWidth, ZeroProbabilityBranch
from ..fockoracle import FockSpace, FockState
from ..gaussian import make_rng

logger = logging.getLogger(__name__)

LOGICAL_BASIS = ("00", "01", "10", "11")
# Majorana words creating each logical state from |00>, applied right to left
BASIS_WORDS = {
    "00": (),
    "01": ("pi_left", "zero1_right"),
    "10": ("zero2_left", "pi_left"),
    "11": ("zero2_left", "zero1_right"),
}
# Image of every left-edge mode under the chain reflection, with its sign
EDGE_MIRROR = {
    "zero1_left": ("zero2_right", 1),
    "zero2_left": ("zero1_right", 1),
    "pi_left": ("pi_right", -1),
    "pi_right": ("pi_left", 1),
    "zero1_right": ("zero2_left", -1),
    "zero2_right": ("zero1_left", -1),
}
LEAKAGE_TOL = 1e-8


class EdgeFockSpace:
    """
    Exact edge-sector Hilbert space of one wire (8 states) or two wires (64 states).
    """
    def __init__(self, wires=1):
        """
        Parameters:
        - wires: 1 or 2.
        """
        if wires not in (1, 2):
            raise UnsupportedWidth(f"Edge Fock spaces cover one or two wires, got {wires}")
        self.wires = wires
        self.space = FockSpace(3 * wires)
        self.dim = self.space.dim

    def gamma(self, name, wire=0):
        """Dense operator of one edge Majorana; name may also be a (name, wire) tuple."""
        if isinstance(name, tuple):
            name, wire = name
        if name not in MODE_NAMES:
            raise InvalidParameters(f"Unknown edge mode {name!r}. Choose from {MODE_NAMES}.")
        if not 0 <= wire < self.wires:
            raise InvalidParameters(f"Wire {wire} outside 0..{self.wires - 1}")
        return self.space.majoranas[6 * wire + MODE_NAMES.index(name)]

    def pair_exp(self, theta, a, b, wire=0):
        """exp(theta gamma_a gamma_b) = cos(theta) + sin(theta) gamma_a gamma_b for distinct a, b."""
        product = self.gamma(a, wire) @ self.gamma(b, wire)
        return np.cos(theta) * np.eye(self.dim) + np.sin(theta) * product

    def word(self, names, wire=0):
        operator = np.eye(self.dim, dtype=complex)
        for name in names:
            operator = operator @ self.gamma(name, wire)
        return operator

    def parity(self):
        return self.space.parity()

    def logical_state(self, labels):
        """
        FockState with the given logical label on every wire.

        Parameters:
        - labels: one label ("00", "01", "10", "11") per wire, as a string for one wire.
        """
        labels = [labels] if isinstance(labels, str) else list(labels)
        if len(labels) != self.wires:
            raise InvalidParameters("Give one logical label per wire")
        vector = np.asarray(self.space.vacuum())
        for wire, label in enumerate(labels):
            if label not in BASIS_WORDS:
                raise InvalidParameters(f"Unknown logical label {label!r}. Choose from {LOGICAL_BASIS}.")
            vector = self.word(BASIS_WORDS[label], wire) @ vector
        return FockState.normalized(vector)

    def logical_basis(self, spectators=()):
        """
        Columns |00>, |01>, |10>, |11> of wire 0, with the other wires held in `spectators`.

        Returns:
        - complex array (dim, 4).
        """
        spectators = list(spectators)
        if len(spectators) != self.wires - 1:
            raise InvalidParameters("Give one spectator label per additional wire")
        return np.column_stack([np.asarray(self.logical_state([label] + spectators)) for label in LOGICAL_BASIS])

    def logical_matrix(self, W, spectators=()):
        """
        Restriction of an edge operator to the logical space of wire 0.

        Raises LeakageTooLarge when W moves weight out of that space or mixes total parity.

        Returns:
        - complex array (4, 4).
        """
        W = np.asarray(W)
        parity = np.diag(self.parity())
        even = parity > 0
        parity_mixing = max(float(np.max(np.abs(W[np.ix_(~even, even)]), initial=0.0)),
                            float(np.max(np.abs(W[np.ix_(even, ~even)]), initial=0.0)))
        if parity_mixing > LEAKAGE_TOL:
            raise LeakageTooLarge(f"Edge operator mixes total parity sectors (weight {parity_mixing:.2e})")
        B = self.logical_basis(spectators)
        image = W @ B
        U = B.conj().T @ image
        lost = float(np.max(np.sum(np.abs(image) ** 2, axis=0) - np.sum(np.abs(U) ** 2, axis=0)))
        if lost > LEAKAGE_TOL:
            raise LeakageTooLarge(f"Edge operator leaves the logical subspace (weight {lost:.2e})")
        return U

    def rotation_from_transport(self, active_modes, block, wire=0):
        """
        Gaussian unitary W = exp(beta gamma_a gamma_b) with W gamma W^dag equal to the transport
        given by the 2x2 block (column j = image of active mode j).

        Returns:
        - complex array (dim, dim).
        """
        block = np.asarray(block, dtype=float)
        if block.shape != (2, 2):
            raise InvalidParameters("Transport block must be 2x2")
        if np.linalg.det(block) <= 0:
            raise IncompatibleModes("Transport block is not a proper rotation")
        a, b = active_modes
        beta = np.arctan2(-block[1, 0], block[0, 0]) / 2
        return self.pair_exp(beta, a, b, wire)

    def measure(self, psi, operator, force=None, rng=None):
        """
        Projective measurement of a Hermitian operator squaring to one.

        Returns:
        - outcome: +1 or -1.
        - probability: float.
        - FockState after the projection.
        """
        psi = np.asarray(psi)
        projected = {}
        probabilities = {}
        for outcome in (1, -1):
            projected[outcome] = (psi + outcome * (operator @ psi)) / 2
            probabilities[outcome] = float(np.real(np.vdot(projected[outcome], projected[outcome])))
        if force is None:
            outcome = 1 if make_rng(rng).random() < probabilities[1] else -1
        else:
            outcome = int(force)
            if outcome not in (1, -1):
                raise ValueError("force must be +1, -1 or None")
        if probabilities[outcome] < 1e-12:
            raise ZeroProbabilityBranch(f"Outcome {outcome:+d} has probability {probabilities[outcome]:.2e}")
        return outcome, probabilities[outcome], FockState.normalized(projected[outcome])


def mirror_transport(active_modes, block):
    """
    Right-edge counterpart of a left-edge transport block.

    Returns:
    - mirrored active mode names and the sign-adjusted block.
    """
    images = [EDGE_MIRROR[name] for name in active_modes]
    signs = np.array([sign for _, sign in images], dtype=float)
    return tuple(name for name, _ in images), np.outer(signs, signs) * np.asarray(block, dtype=float)
